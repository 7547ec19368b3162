//! Recognition of connected summands from a surgery presentation.
//!
//! The diagram is split into classes connected by shared crossings; each
//! class is matched structurally against the library of standard pieces
//! (sphere, circle times sphere, lens spaces from unknots or chains, circle
//! times surface from Borromean blocks) and then certified by simplifying
//! its Wirtinger presentation to the stored canonical presentation.
//! Certification failures downgrade the confidence, never the match.

use std::collections::BTreeSet;

use serde_json::{json, Value};

use crate::diagram::assemble::{Pattern, StructuralView};
use crate::diagram::{ComponentId, FramedLinkDiagram};
use crate::error::{Error, Result};
use crate::invariants::presentation::{
    cyclic_order, is_free_of_rank, is_trivial, matches_s1_sigma, tietze_simplify,
    GroupPresentation,
};
use crate::invariants::wirtinger::wirtinger_presentation;
use crate::invariants::{first_homology, AbelianGroup, Ambient};

pub const DEFAULT_TIETZE_BUDGET: usize = 10_000;

/// One connected summand of the presented manifold.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Summand {
    S3,
    S1xS2,
    /// Lens space of order `p`; `q` is reported only when the summand is a
    /// normalized chain or a single unknot, and is defined up to the usual
    /// orientation ambiguity.
    Lens { p: u64, q: Option<u64> },
    S1xSigma { genus: u32 },
    Unknown { presentation: GroupPresentation },
}

impl Summand {
    /// Expected first homology of the summand (3-manifold mode).
    pub fn homology(&self) -> Option<AbelianGroup> {
        match self {
            Summand::S3 => Some(AbelianGroup::trivial()),
            Summand::S1xS2 => Some(AbelianGroup::free(1)),
            Summand::Lens { p, .. } => Some(AbelianGroup::cyclic(*p)),
            Summand::S1xSigma { genus } => Some(AbelianGroup::free(2 * *genus as usize + 1)),
            Summand::Unknown { .. } => None,
        }
    }

    fn sort_key(&self) -> (u8, u64, u64) {
        match self {
            Summand::S3 => (0, 0, 0),
            Summand::S1xS2 => (1, 0, 0),
            Summand::S1xSigma { genus } => (2, u64::from(*genus), 0),
            Summand::Lens { p, q } => (3, *p, q.unwrap_or(0)),
            Summand::Unknown { .. } => (4, 0, 0),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Summand::S3 => json!({"kind": "S3"}),
            Summand::S1xS2 => json!({"kind": "S1xS2"}),
            Summand::Lens { p, q } => json!({"kind": "Lens", "p": p, "q": q}),
            Summand::S1xSigma { genus } => json!({"kind": "S1xSigma", "genus": genus}),
            Summand::Unknown { presentation } => json!({
                "kind": "Unknown",
                "generators": presentation.generators,
                "relators": presentation
                    .relators
                    .iter()
                    .map(|r| presentation.relator_string(r))
                    .collect::<Vec<_>>(),
            }),
        }
    }
}

impl std::fmt::Display for Summand {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Summand::S3 => write!(f, "S3"),
            Summand::S1xS2 => write!(f, "S1xS2"),
            Summand::Lens { p, q: Some(q) } => write!(f, "L({p},{q})"),
            Summand::Lens { p, q: None } => write!(f, "L({p},·)"),
            Summand::S1xSigma { genus } => write!(f, "S1xSigma{genus}"),
            Summand::Unknown { presentation } => {
                write!(f, "Unknown(<{} generators>)", presentation.generators)
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Confidence {
    Certified,
    AbelianOnly,
}

#[derive(Clone, Debug)]
pub struct RecognitionResult {
    pub summands: Vec<Summand>,
    pub confidence: Confidence,
}

impl RecognitionResult {
    pub fn to_json(&self) -> Value {
        json!({
            "confidence": match self.confidence {
                Confidence::Certified => "certified",
                Confidence::AbelianOnly => "abelian-only",
            },
            "summands": self.summands.iter().map(Summand::to_json).collect::<Vec<_>>(),
        })
    }
}

/// Chain structure of a connected class, when it is a path of clasps.
fn as_chain(view: &StructuralView) -> Option<Vec<i64>> {
    if view.components.len() < 2 {
        return None;
    }
    let mut degree: std::collections::BTreeMap<ComponentId, usize> = Default::default();
    let mut adj: std::collections::BTreeMap<ComponentId, Vec<ComponentId>> = Default::default();
    for p in &view.patterns {
        match p {
            Pattern::Clasp { under, over, sign } => {
                if *sign != 1 {
                    return None;
                }
                *degree.entry(*under).or_default() += 1;
                *degree.entry(*over).or_default() += 1;
                adj.entry(*under).or_default().push(*over);
                adj.entry(*over).or_default().push(*under);
            }
            Pattern::Triple { .. } => return None,
        }
    }
    if view.patterns.len() + 1 != view.components.len() {
        return None; // not a tree with the right edge count
    }
    let ends: Vec<ComponentId> = view
        .components
        .iter()
        .map(|c| c.id)
        .filter(|id| degree.get(id).copied().unwrap_or(0) == 1)
        .collect();
    if ends.len() != 2 || degree.values().any(|d| *d > 2) {
        return None;
    }
    // Walk the path from the smaller endpoint.
    let start = *ends.iter().min().expect("two ends");
    let mut order = vec![start];
    let mut prev = None;
    let mut cur = start;
    while order.len() < view.components.len() {
        let next = adj[&cur].iter().copied().find(|n| Some(*n) != prev)?;
        order.push(next);
        prev = Some(cur);
        cur = next;
    }
    let mut framings = Vec::new();
    for id in order {
        let f = view.framing(id).ok()?;
        if !f.is_integer() {
            return None;
        }
        framings.push(f.to_integer());
    }
    Some(framings)
}

/// Value of the negative continued fraction `f1 - 1/(f2 - 1/( ... ))`.
pub fn negative_cf_value(framings: &[i64]) -> Option<num_rational::Rational64> {
    use num_rational::Rational64;
    use num_traits::Zero;
    let mut v: Option<Rational64> = None;
    for &f in framings.iter().rev() {
        let fr = Rational64::from_integer(f);
        v = Some(match v {
            None => fr,
            Some(prev) => {
                if prev.is_zero() {
                    return None; // division by zero inside the fraction
                }
                fr - prev.recip()
            }
        });
    }
    v
}

/// Sigma-block structure: `g` Borromean triples all sharing one 0-framed
/// central component, everything 0-framed. Returns the genus.
fn as_sigma_block(view: &StructuralView) -> Option<u32> {
    if view.patterns.is_empty() {
        return None;
    }
    let mut triples = Vec::new();
    for p in &view.patterns {
        match p {
            Pattern::Triple { u, v, w } => triples.push((*u, *v, *w)),
            Pattern::Clasp { .. } => return None,
        }
    }
    // Candidate centers: components in every triple.
    let all: Vec<BTreeSet<ComponentId>> = triples
        .iter()
        .map(|(u, v, w)| [*u, *v, *w].into_iter().collect())
        .collect();
    let mut center: Option<ComponentId> = None;
    'outer: for c in &all[0] {
        if all.iter().all(|s| s.contains(c)) {
            center = Some(*c);
            break 'outer;
        }
    }
    let center = center?;
    let mut seen = BTreeSet::new();
    seen.insert(center);
    for (u, v, w) in &triples {
        for m in [u, v, w] {
            if *m != center && !seen.insert(*m) {
                return None; // member shared between two triples
            }
        }
    }
    if seen.len() != view.components.len() {
        return None;
    }
    if view
        .components
        .iter()
        .any(|c| !c.framing.is_integer() || c.framing.to_integer() != 0)
    {
        return None;
    }
    Some(triples.len() as u32)
}

fn structural_candidate(sub: &FramedLinkDiagram) -> Summand {
    if sub.components().len() == 1 && sub.crossings().is_empty() {
        let f = sub.components()[0].framing.to_integer();
        return match f {
            0 => Summand::S1xS2,
            1 | -1 => Summand::S3,
            _ => {
                let p = f.unsigned_abs();
                let q = if f > 0 { 1 } else { p - 1 };
                Summand::Lens { p, q: Some(q) }
            }
        };
    }
    let Ok(view) = StructuralView::recover(sub) else {
        return unknown_of(sub);
    };
    if let Some(g) = as_sigma_block(&view) {
        return Summand::S1xSigma { genus: g };
    }
    if let Some(framings) = as_chain(&view) {
        if let Some(v) = negative_cf_value(&framings) {
            let p = v.numer().unsigned_abs();
            match p {
                0 => return unknown_of(sub),
                1 => return Summand::S3,
                _ => {
                    let qn = *v.denom() * v.numer().signum();
                    let q = qn.rem_euclid(p as i64) as u64;
                    return Summand::Lens { p, q: Some(q) };
                }
            }
        }
    }
    unknown_of(sub)
}

fn unknown_of(sub: &FramedLinkDiagram) -> Summand {
    let presentation = wirtinger_presentation(sub)
        .map(|p| tietze_simplify(&p, DEFAULT_TIETZE_BUDGET).presentation)
        .unwrap_or_else(|_| GroupPresentation::new(0));
    Summand::Unknown { presentation }
}

fn certify(sub: &FramedLinkDiagram, candidate: &Summand, budget: usize) -> bool {
    let Some(expected_h1) = candidate.homology() else {
        return false;
    };
    let Ok(h1) = first_homology(sub, Ambient::ThreeManifold) else {
        return false;
    };
    if h1 != expected_h1 {
        return false;
    }
    let Ok(p) = wirtinger_presentation(sub) else {
        return false;
    };
    let out = tietze_simplify(&p, budget);
    let q = &out.presentation;
    match candidate {
        Summand::S3 => is_trivial(q),
        Summand::S1xS2 => is_free_of_rank(q, 1),
        Summand::Lens { p, .. } => cyclic_order(q) == Some(*p),
        Summand::S1xSigma { genus } => matches_s1_sigma(q, *genus as usize),
        Summand::Unknown { .. } => false,
    }
}

/// Split the diagram into connected classes and identify each one.
pub fn recognize(d: &FramedLinkDiagram) -> Result<RecognitionResult> {
    recognize_with_budget(d, DEFAULT_TIETZE_BUDGET)
}

pub fn recognize_with_budget(d: &FramedLinkDiagram, budget: usize) -> Result<RecognitionResult> {
    let report = d.validate();
    if !report.is_valid() {
        return Err(Error::MalformedDiagram(report.violations.join("; ")));
    }
    if !d.all_integer_framings() {
        return Err(Error::RationalFraming(
            "recognition requires integer framings".into(),
        ));
    }
    if d.components().is_empty() {
        return Ok(RecognitionResult {
            summands: vec![Summand::S3],
            confidence: Confidence::Certified,
        });
    }
    let mut summands = Vec::new();
    let mut all_certified = true;
    for class in d.connectivity_classes() {
        let sub = d.restrict(&class);
        let candidate = structural_candidate(&sub);
        let certified = certify(&sub, &candidate, budget);
        if !certified {
            all_certified = false;
        }
        summands.push(candidate);
    }
    summands.sort_by_key(Summand::sort_key);
    Ok(RecognitionResult {
        summands,
        confidence: if all_certified {
            Confidence::Certified
        } else {
            Confidence::AbelianOnly
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::frame;

    #[test]
    fn unknot_cases() {
        let r = recognize(&FramedLinkDiagram::unknot(frame(3))).unwrap();
        assert_eq!(r.summands, vec![Summand::Lens { p: 3, q: Some(1) }]);
        assert_eq!(r.confidence, Confidence::Certified);

        let r = recognize(&FramedLinkDiagram::unknot(frame(0))).unwrap();
        assert_eq!(r.summands, vec![Summand::S1xS2]);
        assert_eq!(r.confidence, Confidence::Certified);

        let r = recognize(&FramedLinkDiagram::unknot(frame(1))).unwrap();
        assert_eq!(r.summands, vec![Summand::S3]);
        assert_eq!(r.confidence, Confidence::Certified);
    }

    #[test]
    fn two_sphere_products() {
        let d = FramedLinkDiagram::unknot(frame(0))
            .disjoint_union(&FramedLinkDiagram::unknot(frame(0)));
        let r = recognize(&d).unwrap();
        assert_eq!(r.summands, vec![Summand::S1xS2, Summand::S1xS2]);
        assert_eq!(r.confidence, Confidence::Certified);
    }

    #[test]
    fn hopf_chain_lens() {
        let d = FramedLinkDiagram::hopf(frame(4), frame(1));
        let r = recognize(&d).unwrap();
        assert_eq!(r.summands.len(), 1);
        match &r.summands[0] {
            Summand::Lens { p: 3, .. } => {}
            other => panic!("expected lens of order 3, got {other}"),
        }
        assert_eq!(r.confidence, Confidence::Certified);
    }

    #[test]
    fn chain_continued_fraction_class() {
        // [3, 2] presents a lens space of order 5 with q-class 2.
        let d = FramedLinkDiagram::chain(&[frame(3), frame(2)]).unwrap();
        let r = recognize(&d).unwrap();
        assert_eq!(r.summands, vec![Summand::Lens { p: 5, q: Some(2) }]);
        assert_eq!(r.confidence, Confidence::Certified);
    }

    #[test]
    fn sigma_blocks_recognized() {
        for g in 1..=3u32 {
            let r = recognize(&FramedLinkDiagram::s1_sigma(g)).unwrap();
            assert_eq!(r.summands, vec![Summand::S1xSigma { genus: g }], "g={g}");
            assert_eq!(r.confidence, Confidence::Certified, "g={g}");
        }
    }

    #[test]
    fn empty_diagram_is_sphere() {
        let r = recognize(&FramedLinkDiagram::empty()).unwrap();
        assert_eq!(r.summands, vec![Summand::S3]);
    }

    #[test]
    fn relabeling_invariance() {
        let a = FramedLinkDiagram::unknot(frame(0))
            .disjoint_union(&FramedLinkDiagram::unknot(frame(5)));
        let b = FramedLinkDiagram::unknot(frame(5))
            .disjoint_union(&FramedLinkDiagram::unknot(frame(0)));
        let ra = recognize(&a).unwrap();
        let rb = recognize(&b).unwrap();
        assert_eq!(ra.summands, rb.summands);
    }

    #[test]
    fn knotted_component_is_unknown() {
        let d = crate::diagram::tests_support::trefoil();
        let r = recognize(&d).unwrap();
        assert!(matches!(r.summands[0], Summand::Unknown { .. }));
        assert_eq!(r.confidence, Confidence::AbelianOnly);
    }

    #[test]
    fn negative_cf_round_values() {
        assert_eq!(
            negative_cf_value(&[3, 2]),
            Some(num_rational::Rational64::new(5, 2))
        );
        assert_eq!(
            negative_cf_value(&[5]),
            Some(num_rational::Rational64::from_integer(5))
        );
    }
}
