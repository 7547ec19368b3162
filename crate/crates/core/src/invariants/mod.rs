//! Invariants of surgered 3-manifolds: homology via Smith normal form,
//! fundamental-group presentations via Wirtinger plus surgery relators,
//! Tietze simplification, and recognition of standard summands.

pub mod presentation;
pub mod recognize;
pub mod snf;
pub mod wirtinger;

use std::fmt;

use serde_json::{json, Value};

use crate::diagram::FramedLinkDiagram;
use crate::error::Result;

pub use presentation::{tietze_simplify, GroupPresentation, SimplifiedPresentation, Word};
pub use recognize::{recognize, Confidence, RecognitionResult, Summand};
pub use snf::{smith_normal_form, SmithForm};
pub use wirtinger::wirtinger_presentation;

/// A finitely generated abelian group in invariant-factor form: free rank
/// plus torsion coefficients `t_1 | t_2 | ...`, each at least 2.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AbelianGroup {
    pub rank: usize,
    pub torsion: Vec<u64>,
}

impl AbelianGroup {
    pub fn free(rank: usize) -> Self {
        AbelianGroup { rank, torsion: Vec::new() }
    }

    pub fn trivial() -> Self {
        Self::free(0)
    }

    pub fn cyclic(n: u64) -> Self {
        if n == 0 {
            Self::free(1)
        } else if n == 1 {
            Self::trivial()
        } else {
            AbelianGroup { rank: 0, torsion: vec![n] }
        }
    }

    /// Cokernel of a relation matrix acting on `generators` generators;
    /// `divisors` are the invariant factors of the matrix.
    pub fn from_divisors(divisors: &[u64], generators: usize) -> Self {
        let nonzero = divisors.iter().filter(|d| **d != 0).count();
        AbelianGroup {
            rank: generators - nonzero,
            torsion: divisors.iter().copied().filter(|d| *d > 1).collect(),
        }
    }

    /// Direct sum, renormalized to invariant-factor form by merging prime
    /// powers. Serves as an independent route to expected homology when
    /// composing summands.
    pub fn direct_sum(&self, other: &AbelianGroup) -> AbelianGroup {
        let mut primes: std::collections::BTreeMap<u64, Vec<u32>> = Default::default();
        for t in self.torsion.iter().chain(&other.torsion) {
            let mut n = *t;
            let mut p = 2;
            while p * p <= n {
                if n % p == 0 {
                    let mut e = 0;
                    while n % p == 0 {
                        n /= p;
                        e += 1;
                    }
                    primes.entry(p).or_default().push(e);
                }
                p += 1;
            }
            if n > 1 {
                primes.entry(n).or_default().push(1);
            }
        }
        let slots = primes.values().map(Vec::len).max().unwrap_or(0);
        let mut factors = vec![1u64; slots];
        for (p, mut exps) in primes {
            exps.sort_unstable_by(|a, b| b.cmp(a));
            for (i, e) in exps.into_iter().enumerate() {
                factors[i] *= p.pow(e);
            }
        }
        factors.retain(|f| *f > 1);
        factors.reverse();
        AbelianGroup {
            rank: self.rank + other.rank,
            torsion: factors,
        }
    }

    pub fn order(&self) -> Option<u64> {
        if self.rank > 0 {
            None
        } else {
            Some(self.torsion.iter().product())
        }
    }

    pub fn to_json(&self) -> Value {
        json!({ "rank": self.rank, "torsion": self.torsion })
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        if self.rank == 1 {
            parts.push("Z".into());
        } else if self.rank > 1 {
            parts.push(format!("Z^{}", self.rank));
        }
        for t in &self.torsion {
            parts.push(format!("Z/{t}"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Which manifold the homology refers to: the surgered 3-manifold itself, or
/// its product with a circle (one extra free rank for the circle factor).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ambient {
    ThreeManifold,
    ProductWithCircle,
}

/// First homology of the manifold presented by the diagram: cokernel of the
/// linking matrix, plus one free rank in product mode. Framings must be
/// integers; clear rational coefficients first.
pub fn first_homology(d: &FramedLinkDiagram, ambient: Ambient) -> Result<AbelianGroup> {
    let m = d.integer_linking_matrix()?;
    let snf = smith_normal_form(&m, false);
    let mut h = AbelianGroup::from_divisors(&snf.divisors, m.len());
    if ambient == Ambient::ProductWithCircle {
        h.rank += 1;
    }
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{frame, FramedLinkDiagram};

    #[test]
    fn unknot_homology() {
        let d = FramedLinkDiagram::unknot(frame(0));
        assert_eq!(first_homology(&d, Ambient::ThreeManifold).unwrap(), AbelianGroup::free(1));
        let d = FramedLinkDiagram::unknot(frame(5));
        assert_eq!(first_homology(&d, Ambient::ThreeManifold).unwrap(), AbelianGroup::cyclic(5));
    }

    #[test]
    fn sigma_product_mode() {
        let d = FramedLinkDiagram::s1_sigma(2);
        assert_eq!(
            first_homology(&d, Ambient::ProductWithCircle).unwrap(),
            AbelianGroup::free(6)
        );
    }

    #[test]
    fn rational_framings_rejected() {
        let d = FramedLinkDiagram::unknot(crate::diagram::frac(5, 2));
        assert!(first_homology(&d, Ambient::ThreeManifold).is_err());
    }

    #[test]
    fn direct_sum_normalizes() {
        let a = AbelianGroup::cyclic(2);
        let b = AbelianGroup::cyclic(3);
        assert_eq!(a.direct_sum(&b), AbelianGroup::cyclic(6));
        let c = AbelianGroup::cyclic(2).direct_sum(&AbelianGroup::cyclic(2));
        assert_eq!(c, AbelianGroup { rank: 0, torsion: vec![2, 2] });
        let d = AbelianGroup::cyclic(4).direct_sum(&AbelianGroup::cyclic(6));
        assert_eq!(d, AbelianGroup { rank: 0, torsion: vec![2, 12] });
    }
}
