//! Finitely presented groups and Tietze simplification.
//!
//! Words are sequences of nonzero signed integers; `+(g+1)` and `-(g+1)`
//! stand for the generator `g` and its inverse. Relators are stored freely
//! and cyclically reduced.
//!
//! The simplifier applies, deterministically and within a step budget:
//! free/cyclic reduction, duplicate-relator removal, elimination of a
//! generator occurring exactly once in some relator, and length-reducing
//! substitution of one relator into another. All moves preserve the group
//! up to isomorphism, and in particular the abelianization is untouched.

use crate::invariants::{smith_normal_form, AbelianGroup};

pub type Word = Vec<i32>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupPresentation {
    pub generators: usize,
    pub gen_names: Vec<String>,
    pub relators: Vec<Word>,
    pub provenance: Vec<String>,
}

/// Output of [`tietze_simplify`]: the simplified presentation plus how much
/// of the budget was consumed.
#[derive(Clone, Debug)]
pub struct SimplifiedPresentation {
    pub presentation: GroupPresentation,
    pub steps_used: usize,
    pub budget_exhausted: bool,
}

pub fn invert(w: &[i32]) -> Word {
    w.iter().rev().map(|x| -x).collect()
}

pub fn free_reduce(w: &[i32]) -> Word {
    let mut out: Word = Vec::with_capacity(w.len());
    for &x in w {
        if out.last().is_some_and(|&y| y == -x) {
            out.pop();
        } else {
            out.push(x);
        }
    }
    out
}

pub fn cyclic_reduce(w: &[i32]) -> Word {
    let mut v = free_reduce(w);
    while v.len() >= 2 && v.first().copied() == v.last().map(|x| -x) {
        v.pop();
        v.remove(0);
        v = free_reduce(&v);
    }
    v
}

/// Least representative among all rotations of the cyclically reduced word
/// and of its inverse. Two relators generate the same normal closure factor
/// exactly when these agree for conjugation-and-inversion equivalence.
fn canonical_cyclic(w: &[i32]) -> Word {
    let v = cyclic_reduce(w);
    if v.is_empty() {
        return v;
    }
    let mut best: Option<Word> = None;
    for cand in [v.clone(), invert(&v)] {
        for r in 0..cand.len() {
            let mut rot = cand[r..].to_vec();
            rot.extend_from_slice(&cand[..r]);
            if best.as_ref().is_none_or(|b| rot < *b) {
                best = Some(rot);
            }
        }
    }
    best.unwrap()
}

impl GroupPresentation {
    pub fn new(generators: usize) -> Self {
        GroupPresentation {
            generators,
            gen_names: (0..generators).map(|i| format!("g{i}")).collect(),
            relators: Vec::new(),
            provenance: Vec::new(),
        }
    }

    pub fn with_names(names: Vec<String>) -> Self {
        GroupPresentation {
            generators: names.len(),
            gen_names: names,
            relators: Vec::new(),
            provenance: Vec::new(),
        }
    }

    pub fn push_relator(&mut self, w: Word, note: impl Into<String>) {
        debug_assert!(w.iter().all(|&x| x != 0 && x.unsigned_abs() as usize <= self.generators));
        let reduced = free_reduce(&w);
        self.relators.push(reduced);
        self.provenance.push(note.into());
    }

    /// Exponent-sum matrix (relators x generators).
    pub fn exponent_matrix(&self) -> Vec<Vec<i64>> {
        let mut m = vec![vec![0i64; self.generators]; self.relators.len()];
        for (i, r) in self.relators.iter().enumerate() {
            for &x in r {
                let g = (x.unsigned_abs() - 1) as usize;
                m[i][g] += i64::from(x.signum());
            }
        }
        m
    }

    pub fn abelianization(&self) -> AbelianGroup {
        let m = self.exponent_matrix();
        if m.is_empty() {
            return AbelianGroup::free(self.generators);
        }
        let snf = smith_normal_form(&m, false);
        AbelianGroup::from_divisors(&snf.divisors, self.generators)
    }

    /// Human-readable relator, e.g. `a b a^-1 b^-1`.
    pub fn relator_string(&self, r: &[i32]) -> String {
        r.iter()
            .map(|&x| {
                let name = &self.gen_names[(x.unsigned_abs() - 1) as usize];
                if x > 0 {
                    name.clone()
                } else {
                    format!("{name}^-1")
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

pub fn abelianization(p: &GroupPresentation) -> AbelianGroup {
    p.abelianization()
}

fn normalize(p: &mut GroupPresentation) {
    let mut seen = std::collections::BTreeSet::new();
    let mut relators = Vec::new();
    let mut provenance = Vec::new();
    let mut paired: Vec<(Word, String)> = p
        .relators
        .iter()
        .zip(&p.provenance)
        .map(|(r, n)| (canonical_cyclic(r), n.clone()))
        .collect();
    paired.sort_by(|a, b| (a.0.len(), &a.0).cmp(&(b.0.len(), &b.0)));
    for (r, n) in paired {
        if r.is_empty() || !seen.insert(r.clone()) {
            continue;
        }
        relators.push(r);
        provenance.push(n);
    }
    p.relators = relators;
    p.provenance = provenance;
}

/// Remove generator `g` (0-based) by substituting `expr` for it everywhere.
fn eliminate_generator(p: &mut GroupPresentation, g: usize, expr: &[i32], relator_idx: usize) {
    let sub = |w: &[i32]| -> Word {
        let mut out = Vec::with_capacity(w.len());
        for &x in w {
            let idx = (x.unsigned_abs() - 1) as usize;
            if idx == g {
                if x > 0 {
                    out.extend_from_slice(expr);
                } else {
                    out.extend(invert(expr));
                }
            } else {
                out.push(x);
            }
        }
        free_reduce(&out)
    };
    let mut relators = Vec::new();
    let mut provenance = Vec::new();
    for (i, r) in p.relators.iter().enumerate() {
        if i == relator_idx {
            continue;
        }
        relators.push(sub(r));
        provenance.push(p.provenance[i].clone());
    }
    // Renumber generators above g.
    for r in &mut relators {
        for x in r.iter_mut() {
            let idx = x.unsigned_abs() as usize;
            if idx > g + 1 {
                *x = x.signum() * (idx as i32 - 1);
            }
        }
    }
    p.relators = relators;
    p.provenance = provenance;
    p.gen_names.remove(g);
    p.generators -= 1;
}

/// Find (relator index, generator, defining word) where the generator occurs
/// exactly once in that relator.
fn find_elimination(p: &GroupPresentation) -> Option<(usize, usize, Word)> {
    let mut best: Option<(usize, usize, usize)> = None; // (len, relator, gen)
    for (i, r) in p.relators.iter().enumerate() {
        let mut counts = std::collections::BTreeMap::new();
        for &x in r {
            *counts.entry((x.unsigned_abs() - 1) as usize).or_insert(0usize) += 1;
        }
        for (&g, &c) in &counts {
            if c == 1 && best.is_none_or(|(bl, _, _)| r.len() < bl) {
                best = Some((r.len(), i, g));
                break;
            }
        }
    }
    let (_, i, g) = best?;
    let r = &p.relators[i];
    let pos = r
        .iter()
        .position(|&x| (x.unsigned_abs() - 1) as usize == g)
        .expect("generator occurs");
    // Rotate so the occurrence comes first: r = g^e . w, hence g^e = w^-1.
    let mut rot = r[pos..].to_vec();
    rot.extend_from_slice(&r[..pos]);
    let e = rot[0].signum();
    let w = &rot[1..];
    // g = w^-1 when e = +1, g = w when e = -1.
    let expr = if e > 0 { invert(w) } else { w.to_vec() };
    Some((i, g, expr))
}

/// Try to shorten some relator by substituting a cyclic segment of another.
fn try_shorten(p: &mut GroupPresentation) -> bool {
    let n = p.relators.len();
    for j in 0..n {
        let s = p.relators[j].clone();
        if s.is_empty() {
            continue;
        }
        let ls = s.len();
        let mut variants: Vec<Word> = Vec::new();
        for base in [s.clone(), invert(&s)] {
            for r in 0..ls {
                let mut rot = base[r..].to_vec();
                rot.extend_from_slice(&base[..r]);
                variants.push(rot);
            }
        }
        for i in 0..n {
            if i == j {
                continue;
            }
            let r = p.relators[i].clone();
            if r.len() < ls.div_ceil(2) {
                continue;
            }
            for t in &variants {
                // Longest prefix of t occurring as a subword of r.
                let max_l = r.len().min(ls);
                for l in (ls / 2 + 1..=max_l).rev() {
                    if let Some(pos) = find_subword(&r, &t[..l]) {
                        // r = A . t[..l] . B; t[..l] = inverse(t[l..]) in the
                        // group, giving |r| - l + (ls - l) letters.
                        let mut new_r: Word = r[..pos].to_vec();
                        new_r.extend(invert(&t[l..]));
                        new_r.extend_from_slice(&r[pos + l..]);
                        let new_r = free_reduce(&new_r);
                        if new_r.len() < r.len() {
                            p.relators[i] = new_r;
                            return true;
                        }
                    }
                }
            }
        }
    }
    false
}

fn find_subword(hay: &[i32], needle: &[i32]) -> Option<usize> {
    if needle.len() > hay.len() {
        return None;
    }
    (0..=hay.len() - needle.len()).find(|&p| &hay[p..p + needle.len()] == needle)
}

/// Unordered generator pairs whose commutator is a relator.
fn commuting_pairs(p: &GroupPresentation) -> std::collections::BTreeSet<(usize, usize)> {
    p.relators.iter().filter_map(|r| as_commutator(r)).collect()
}

/// Sort commuting adjacent letters toward a fixed order and re-reduce. Each
/// swap multiplies the relator by a conjugate of a commutator relator, so the
/// normal closure is untouched. A rewrite is kept only when the canonical
/// form strictly decreases, which bounds the total work.
fn try_commutation_sort(p: &mut GroupPresentation) -> bool {
    let pairs = commuting_pairs(p);
    if pairs.is_empty() {
        return false;
    }
    let letter_key = |x: i32| (x.unsigned_abs(), x < 0);
    let mut changed = false;
    for i in 0..p.relators.len() {
        let orig = canonical_cyclic(&p.relators[i]);
        if orig.len() < 3 {
            continue;
        }
        // A relator may be rewritten modulo the other relators only; using
        // its own commutation would erase it.
        let mut pairs = pairs.clone();
        if let Some(own) = as_commutator(&orig) {
            let elsewhere = p
                .relators
                .iter()
                .enumerate()
                .any(|(j, r)| j != i && as_commutator(r) == Some(own));
            if !elsewhere {
                pairs.remove(&own);
            }
        }
        if pairs.is_empty() {
            continue;
        }
        let mut w = orig.clone();
        let mut guard = 4 * w.len() * w.len() + 16;
        loop {
            let n = w.len();
            if n < 2 || guard == 0 {
                break;
            }
            guard -= 1;
            let mut swapped = false;
            for k in 0..n {
                let k2 = (k + 1) % n;
                let (x, y) = (w[k], w[k2]);
                let gx = (x.unsigned_abs() - 1) as usize;
                let gy = (y.unsigned_abs() - 1) as usize;
                if gx == gy {
                    continue;
                }
                let pair = (gx.min(gy), gx.max(gy));
                if pairs.contains(&pair) && letter_key(y) < letter_key(x) {
                    w.swap(k, k2);
                    swapped = true;
                }
            }
            let reduced = cyclic_reduce(&w);
            let shrunk = reduced.len() < w.len();
            w = reduced;
            if !swapped && !shrunk {
                break;
            }
        }
        let cand = canonical_cyclic(&w);
        if (cand.len(), &cand) < (orig.len(), &orig) {
            p.relators[i] = cand;
            changed = true;
        }
    }
    changed
}

/// Simplify within a step budget. Each elimination or substitution counts as
/// one step; exhaustion returns the current state, flagged.
pub fn tietze_simplify(p: &GroupPresentation, budget: usize) -> SimplifiedPresentation {
    let mut q = p.clone();
    let mut steps = 0usize;
    let mut exhausted = false;
    loop {
        normalize(&mut q);
        if steps >= budget {
            exhausted = q.relators.iter().any(|r| !r.is_empty());
            break;
        }
        if let Some((i, g, expr)) = find_elimination(&q) {
            eliminate_generator(&mut q, g, &expr, i);
            steps += 1;
            continue;
        }
        if try_shorten(&mut q) {
            steps += 1;
            continue;
        }
        if try_commutation_sort(&mut q) {
            steps += 1;
            continue;
        }
        break;
    }
    normalize(&mut q);
    SimplifiedPresentation {
        presentation: q,
        steps_used: steps,
        budget_exhausted: exhausted,
    }
}

/// True for the empty presentation of the trivial group.
pub fn is_trivial(p: &GroupPresentation) -> bool {
    p.generators == 0
}

/// Free group detection after simplification.
pub fn is_free_of_rank(p: &GroupPresentation, k: usize) -> bool {
    p.generators == k && p.relators.iter().all(|r| r.is_empty())
}

/// If the presentation is a one-generator cyclic presentation, return the
/// order (0 for infinite cyclic).
pub fn cyclic_order(p: &GroupPresentation) -> Option<u64> {
    if p.generators != 1 {
        return None;
    }
    let mut g: i64 = 0;
    for r in &p.relators {
        let e: i64 = r.iter().map(|&x| i64::from(x.signum())).sum();
        if e.unsigned_abs() as usize != r.len() {
            return None; // mixed signs survived reduction: not a power
        }
        g = num_integer::Integer::gcd(&g, &e);
    }
    Some(g.unsigned_abs())
}

/// Parse a word as a product of `g` commutators of distinct generators,
/// pairwise disjoint: `[x1,y1][x2,y2]...`; returns the pairs.
fn parse_commutator_product(w: &[i32], g: usize) -> Option<Vec<(usize, usize)>> {
    if w.len() != 4 * g {
        return None;
    }
    let mut pairs = Vec::new();
    let mut used = std::collections::BTreeSet::new();
    for c in w.chunks(4) {
        let (a, b) = (c[0], c[1]);
        if c[2] != -a || c[3] != -b {
            return None;
        }
        let (x, y) = ((a.unsigned_abs() - 1) as usize, (b.unsigned_abs() - 1) as usize);
        if x == y || !used.insert(x) || !used.insert(y) {
            return None;
        }
        pairs.push((x, y));
    }
    Some(pairs)
}

/// Whether a word is a commutator of two distinct generators (up to
/// conjugation and inversion); returns the unordered pair.
fn as_commutator(w: &[i32]) -> Option<(usize, usize)> {
    let v = canonical_cyclic(w);
    if v.len() != 4 {
        return None;
    }
    let pairs = parse_commutator_product(&v, 1)?;
    let (x, y) = pairs[0];
    Some((x.min(y), x.max(y)))
}

/// Match against the canonical presentation of the product of the circle
/// with a genus-`g` surface: generators `c, u_1, v_1, ..., u_g, v_g`,
/// relators `[c, u_i]`, `[c, v_i]`, and the surface word `prod [u_i, v_i]`.
pub fn matches_s1_sigma(p: &GroupPresentation, g: usize) -> bool {
    if g == 0 {
        return is_free_of_rank(p, 1);
    }
    if p.generators != 2 * g + 1 || p.relators.len() != 2 * g + 1 {
        return false;
    }
    let mut commutators = Vec::new();
    let mut long: Vec<&Word> = Vec::new();
    for r in &p.relators {
        if let Some(pair) = as_commutator(r) {
            commutators.push(pair);
        } else {
            long.push(r);
        }
    }
    if g == 1 {
        // All three relators are commutators covering all three pairs.
        if commutators.len() != 3 || !long.is_empty() {
            return false;
        }
        let mut set: Vec<(usize, usize)> = commutators.clone();
        set.sort_unstable();
        set.dedup();
        return set.len() == 3;
    }
    if commutators.len() != 2 * g || long.len() != 1 {
        return false;
    }
    // The central generator: in every short commutator, missing from the
    // long relator.
    let long_word = canonical_cyclic(long[0]);
    let in_long: std::collections::BTreeSet<usize> = long_word
        .iter()
        .map(|x| (x.unsigned_abs() - 1) as usize)
        .collect();
    if in_long.len() != 2 * g {
        return false;
    }
    let c = (0..p.generators).find(|i| !in_long.contains(i));
    let Some(c) = c else { return false };
    let mut partners = std::collections::BTreeSet::new();
    for (x, y) in &commutators {
        let other = if *x == c {
            *y
        } else if *y == c {
            *x
        } else {
            return false;
        };
        if !partners.insert(other) {
            return false;
        }
    }
    if partners.len() != 2 * g {
        return false;
    }
    // Long relator parses as a product of g disjoint commutators in some
    // rotation of itself or its inverse.
    for base in [long_word.clone(), invert(&long_word)] {
        for r in 0..base.len() {
            let mut rot = base[r..].to_vec();
            rot.extend_from_slice(&base[..r]);
            if parse_commutator_product(&rot, g).is_some() {
                return true;
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pres(gens: usize, relators: Vec<Word>) -> GroupPresentation {
        let mut p = GroupPresentation::new(gens);
        for r in relators {
            p.push_relator(r, "test");
        }
        p
    }

    #[test]
    fn free_and_cyclic_reduction() {
        assert_eq!(free_reduce(&[1, -1, 2]), vec![2]);
        assert_eq!(free_reduce(&[1, 2, -2, -1]), Vec::<i32>::new());
        assert_eq!(cyclic_reduce(&[1, 2, -1]), vec![2]);
    }

    #[test]
    fn eliminate_single_occurrence() {
        // < a, b | a b a^-1 b^-1, b >  ->  < a | >
        let p = pres(2, vec![vec![1, 2, -1, -2], vec![2]]);
        let out = tietze_simplify(&p, 100);
        assert!(is_free_of_rank(&out.presentation, 1));
        assert!(!out.budget_exhausted);
    }

    #[test]
    fn abelianization_preserved() {
        let p = pres(2, vec![vec![1, 2, -1, -2], vec![2, 2, 2]]);
        let before = p.abelianization();
        let out = tietze_simplify(&p, 1000);
        assert_eq!(before, out.presentation.abelianization());
        assert_eq!(before, AbelianGroup { rank: 1, torsion: vec![3] });
    }

    #[test]
    fn budget_exhaustion_flagged() {
        let p = pres(2, vec![vec![1, 2, -1, -2], vec![2, 2, 2]]);
        let out = tietze_simplify(&p, 0);
        assert!(out.budget_exhausted);
    }

    #[test]
    fn cyclic_order_detection() {
        let p = pres(1, vec![vec![1, 1, 1]]);
        let out = tietze_simplify(&p, 10);
        assert_eq!(cyclic_order(&out.presentation), Some(3));
        let free = pres(1, vec![]);
        assert_eq!(cyclic_order(&free), Some(0));
    }

    #[test]
    fn torus_cube_presentation_matches() {
        // < a, b, c | [a,b], [a,c], [b,c] >
        let p = pres(
            3,
            vec![vec![1, 2, -1, -2], vec![1, 3, -1, -3], vec![2, 3, -2, -3]],
        );
        assert!(matches_s1_sigma(&p, 1));
        assert!(!matches_s1_sigma(&p, 2));
    }

    #[test]
    fn genus_two_canonical_matches() {
        // c = 1; u1, v1, u2, v2 = 2..5; long = [u1,v1][u2,v2].
        let relators = vec![
            vec![1, 2, -1, -2],
            vec![1, 3, -1, -3],
            vec![1, 4, -1, -4],
            vec![1, 5, -1, -5],
            vec![2, 3, -2, -3, 4, 5, -4, -5],
        ];
        let p = pres(5, relators);
        assert!(matches_s1_sigma(&p, 2));
        assert!(!matches_s1_sigma(&p, 1));
    }

    #[test]
    fn shortening_collapses_powers() {
        // < a | a^2, a^3 > is trivial.
        let p = pres(1, vec![vec![1, 1], vec![1, 1, 1]]);
        let out = tietze_simplify(&p, 100);
        assert!(is_trivial(&out.presentation));
    }
}
