//! Assembly of diagrams from local tangle patterns, and recovery of the
//! pattern structure from a planar-diagram code.
//!
//! Every builder and rewrite rule in this crate works with diagrams that
//! decompose into two kinds of local tangles:
//!
//! - a *clasp*: two crossings of equal sign between a pair of components,
//!   contributing linking number ±1;
//! - a *Borromean triple*: the six-crossing braid-closure tangle on three
//!   components with all pairwise linking numbers zero.
//!
//! A diagram is assembled from a component list and a multiset of patterns;
//! attachment order along each component follows the canonical pattern
//! order. For the diagram class produced here (round components, tangles
//! attached along them), reordering attachments along a shared component is
//! an ambient isotopy, so the multiset determines the link.
//!
//! Recovery walks the arcs of an arbitrary diagram and reconstructs the
//! pattern multiset, verifying the internal arc adjacencies of each tangle.
//! Diagrams that do not decompose are rejected; rules that need structure
//! report them as unsupported.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::Rational64;

use super::{ArcId, ComponentData, ComponentId, Crossing, FramedLinkDiagram};
use crate::error::{Error, Result};

/// A local tangle attached to two or three components.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Pattern {
    /// Two crossings of sign `sign`; at the first, `under` passes below
    /// `over`. Linking contribution: `sign`.
    Clasp {
        under: ComponentId,
        over: ComponentId,
        sign: i8,
    },
    /// Borromean tangle; `u` runs over `v`, `v` over `w`, `w` over `u`.
    Triple {
        u: ComponentId,
        v: ComponentId,
        w: ComponentId,
    },
}

impl Pattern {
    pub fn involves(&self, id: ComponentId) -> bool {
        match self {
            Pattern::Clasp { under, over, .. } => *under == id || *over == id,
            Pattern::Triple { u, v, w } => *u == id || *v == id || *w == id,
        }
    }

    pub fn components(&self) -> Vec<ComponentId> {
        match self {
            Pattern::Clasp { under, over, .. } => vec![*under, *over],
            Pattern::Triple { u, v, w } => vec![*u, *v, *w],
        }
    }

    fn sort_key(&self) -> (u8, ComponentId, ComponentId, ComponentId, i8) {
        match self {
            Pattern::Clasp { under, over, sign } => {
                let lo = (*under).min(*over);
                let hi = (*under).max(*over);
                (0, lo, hi, *under, *sign)
            }
            Pattern::Triple { u, v, w } => (1, *u, *v, *w, 0),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Role {
    Under,
    Over,
}

/// Builder for fresh diagrams.
pub struct Assembler {
    view: StructuralView,
}

impl Assembler {
    pub fn new() -> Self {
        Assembler {
            view: StructuralView {
                components: Vec::new(),
                patterns: Vec::new(),
                next_id: 0,
            },
        }
    }

    pub fn component(&mut self, framing: Rational64, label: Option<String>) -> ComponentId {
        self.view.add_component(framing, label)
    }

    pub fn clasp(&mut self, under: ComponentId, over: ComponentId, sign: i8) {
        self.view.push_pattern(Pattern::Clasp { under, over, sign });
    }

    pub fn triple(&mut self, u: ComponentId, v: ComponentId, w: ComponentId) {
        self.view.push_pattern(Pattern::Triple { u, v, w });
    }

    pub fn assemble(self) -> FramedLinkDiagram {
        self.view.assemble()
    }
}

impl Default for Assembler {
    fn default() -> Self {
        Self::new()
    }
}

/// Pattern-level view of a diagram: component data plus the tangle multiset.
#[derive(Clone, Debug)]
pub struct StructuralView {
    pub components: Vec<ComponentData>,
    pub patterns: Vec<Pattern>,
    next_id: ComponentId,
}

impl StructuralView {
    pub fn add_component(&mut self, framing: Rational64, label: Option<String>) -> ComponentId {
        let id = self.next_id;
        self.next_id += 1;
        self.components.push(ComponentData { id, framing, label });
        id
    }

    /// Add a pattern. Clasps are symmetric under exchanging the two strands
    /// (the tangle is the same rotated by a half turn), so they are stored
    /// with the smaller component id in the under slot.
    pub fn push_pattern(&mut self, p: Pattern) {
        let p = match p {
            Pattern::Clasp { under, over, sign } => Pattern::Clasp {
                under: under.min(over),
                over: under.max(over),
                sign,
            },
            t @ Pattern::Triple { .. } => t,
        };
        self.patterns.push(p);
    }

    pub fn framing(&self, id: ComponentId) -> Result<Rational64> {
        self.components
            .iter()
            .find(|c| c.id == id)
            .map(|c| c.framing)
            .ok_or(Error::UnknownComponent(id))
    }

    pub fn set_framing(&mut self, id: ComponentId, f: Rational64) -> Result<()> {
        self.components
            .iter_mut()
            .find(|c| c.id == id)
            .map(|c| c.framing = f)
            .ok_or(Error::UnknownComponent(id))
    }

    pub fn patterns_of(&self, id: ComponentId) -> Vec<Pattern> {
        self.patterns.iter().filter(|p| p.involves(id)).copied().collect()
    }

    /// Remove a component together with every pattern touching it.
    pub fn remove_component(&mut self, id: ComponentId) {
        self.components.retain(|c| c.id != id);
        self.patterns.retain(|p| !p.involves(id));
    }

    /// Remove a single pattern instance (first match).
    pub fn remove_pattern(&mut self, p: &Pattern) -> bool {
        if let Some(pos) = self.patterns.iter().position(|q| q == p) {
            self.patterns.remove(pos);
            true
        } else {
            false
        }
    }

    /// Cancel pairs of opposite-sign clasps between the same component pair.
    pub fn cancel_opposite_clasps(&mut self) {
        loop {
            let mut cancelled = false;
            'outer: for i in 0..self.patterns.len() {
                if let Pattern::Clasp { under: u1, over: o1, sign: s1 } = self.patterns[i] {
                    for j in (i + 1)..self.patterns.len() {
                        if let Pattern::Clasp { under: u2, over: o2, sign: s2 } = self.patterns[j] {
                            let same_pair = (u1 == u2 && o1 == o2) || (u1 == o2 && o1 == u2);
                            if same_pair && s1 == -s2 {
                                self.patterns.remove(j);
                                self.patterns.remove(i);
                                cancelled = true;
                                break 'outer;
                            }
                        }
                    }
                }
            }
            if !cancelled {
                break;
            }
        }
    }

    /// Materialize the planar-diagram code. Patterns are attached in
    /// canonical order; arcs and crossings come out densely numbered.
    pub fn assemble(&self) -> FramedLinkDiagram {
        let mut patterns = self.patterns.clone();
        patterns.sort_by_key(Pattern::sort_key);

        // Crossing skeletons: (under component, over component, sign).
        let mut skeleton: Vec<(ComponentId, ComponentId, i8)> = Vec::new();
        // Passages per component, each (crossing index, role).
        let mut passages: BTreeMap<ComponentId, Vec<(usize, Role)>> = BTreeMap::new();
        for c in &self.components {
            passages.insert(c.id, Vec::new());
        }
        let push = |passages: &mut BTreeMap<ComponentId, Vec<(usize, Role)>>,
                    comp: ComponentId,
                    k: usize,
                    role: Role| {
            passages.get_mut(&comp).expect("pattern names a component").push((k, role));
        };
        for p in &patterns {
            match *p {
                Pattern::Clasp { under, over, sign } => {
                    let k1 = skeleton.len();
                    skeleton.push((under, over, sign));
                    let k2 = skeleton.len();
                    skeleton.push((over, under, sign));
                    push(&mut passages, under, k1, Role::Under);
                    push(&mut passages, under, k2, Role::Over);
                    push(&mut passages, over, k1, Role::Over);
                    push(&mut passages, over, k2, Role::Under);
                }
                Pattern::Triple { u, v, w } => {
                    let base = skeleton.len();
                    skeleton.push((v, u, 1)); // c1
                    skeleton.push((u, w, -1)); // c2
                    skeleton.push((w, v, 1)); // c3
                    skeleton.push((v, u, -1)); // c4
                    skeleton.push((u, w, 1)); // c5
                    skeleton.push((w, v, -1)); // c6
                    for (comp, local, role) in [
                        (u, 0, Role::Over),
                        (u, 1, Role::Under),
                        (u, 3, Role::Over),
                        (u, 4, Role::Under),
                        (v, 0, Role::Under),
                        (v, 2, Role::Over),
                        (v, 3, Role::Under),
                        (v, 5, Role::Over),
                        (w, 1, Role::Over),
                        (w, 2, Role::Under),
                        (w, 4, Role::Over),
                        (w, 5, Role::Under),
                    ] {
                        push(&mut passages, comp, base + local, role);
                    }
                }
            }
        }

        // Allocate arcs: one per passage, running to the next passage on the
        // same component (cyclically).
        let mut next_arc: ArcId = 0;
        let mut arcs: BTreeMap<ArcId, ComponentId> = BTreeMap::new();
        // Per crossing: (under_in, under_out, over_in, over_out).
        let mut slots: Vec<[Option<ArcId>; 4]> = vec![[None; 4]; skeleton.len()];
        let mut free_loops = BTreeSet::new();
        for c in &self.components {
            let ps = &passages[&c.id];
            if ps.is_empty() {
                free_loops.insert(c.id);
                continue;
            }
            let n = ps.len();
            let ids: Vec<ArcId> = (0..n)
                .map(|_| {
                    let a = next_arc;
                    next_arc += 1;
                    arcs.insert(a, c.id);
                    a
                })
                .collect();
            for (i, (k, role)) in ps.iter().enumerate() {
                let out_arc = ids[i];
                let in_arc = ids[(i + n - 1) % n];
                let (in_slot, out_slot) = match role {
                    Role::Under => (0, 1),
                    Role::Over => (2, 3),
                };
                slots[*k][in_slot] = Some(in_arc);
                slots[*k][out_slot] = Some(out_arc);
            }
        }

        let crossings: Vec<Crossing> = skeleton
            .iter()
            .enumerate()
            .map(|(k, (_, _, sign))| {
                let [ui, uo, oi, oo] = slots[k].map(|s| s.expect("all slots filled"));
                let (b, d) = if *sign > 0 { (oo, oi) } else { (oi, oo) };
                Crossing {
                    arcs: [ui, b, uo, d],
                    sign: *sign,
                }
            })
            .collect();

        let mut components = self.components.clone();
        components.sort_by_key(|c| c.id);
        let mut crossings = crossings;
        crossings.sort_by_key(|x| (x.arcs, x.sign));
        FramedLinkDiagram {
            components,
            crossings,
            arcs,
            free_loops,
        }
    }

    /// Reconstruct the pattern multiset of a diagram. Errors when the
    /// crossings do not decompose into clasps and Borromean triples.
    pub fn recover(d: &FramedLinkDiagram) -> Result<StructuralView> {
        let report = d.validate();
        if !report.is_valid() {
            return Err(Error::MalformedDiagram(report.violations.join("; ")));
        }
        let comp_of = |arc: &ArcId| d.arcs[arc];
        let n = d.crossings.len();
        let mut assigned = vec![false; n];
        let mut patterns = Vec::new();

        // Clasp pass: matched pairs with swapped under/over roles, equal
        // sign, and mid-arc adjacency in either direction.
        for k1 in 0..n {
            if assigned[k1] {
                continue;
            }
            let x1 = &d.crossings[k1];
            let (a, b) = (comp_of(&x1.under_in()), comp_of(&x1.over_in()));
            if a == b {
                continue;
            }
            for k2 in 0..n {
                if k2 == k1 || assigned[k2] {
                    continue;
                }
                let x2 = &d.crossings[k2];
                let swapped =
                    comp_of(&x2.under_in()) == b && comp_of(&x2.over_in()) == a;
                if !swapped || x2.sign != x1.sign {
                    continue;
                }
                let adjacent = x1.under_out() == x2.over_in() && x1.over_out() == x2.under_in();
                if adjacent {
                    assigned[k1] = true;
                    assigned[k2] = true;
                    patterns.push(Pattern::Clasp {
                        under: a.min(b),
                        over: a.max(b),
                        sign: x1.sign,
                    });
                    break;
                }
            }
        }

        // Triple pass on whatever remains. Within a Borromean tangle one
        // component runs over the other in both of their shared crossings, so
        // the leftover crossings bucket by directed (over, under) pairs, and
        // each tangle is a directed 3-cycle of such buckets.
        let mut buckets: BTreeMap<(ComponentId, ComponentId), Vec<usize>> = BTreeMap::new();
        for (k, x) in d.crossings.iter().enumerate() {
            if assigned[k] {
                continue;
            }
            let under = comp_of(&x.under_in());
            let over = comp_of(&x.over_in());
            if under == over {
                return Err(Error::MalformedDiagram(format!(
                    "crossing {k}: self-crossings do not decompose into supported tangles"
                )));
            }
            buckets.entry((over, under)).or_default().push(k);
        }
        for ((over, under), ks) in &buckets {
            let sum: i8 = ks.iter().map(|&k| d.crossings[k].sign).sum();
            if ks.len() != 2 || sum != 0 {
                return Err(Error::MalformedDiagram(format!(
                    "crossings {ks:?} between {over} and {under} do not form a Borromean pair"
                )));
            }
        }
        let edges: Vec<(ComponentId, ComponentId)> = buckets.keys().copied().collect();
        let mut used: BTreeSet<(ComponentId, ComponentId)> = BTreeSet::new();
        for &(p, q) in &edges {
            if used.contains(&(p, q)) {
                continue;
            }
            let third = edges
                .iter()
                .filter(|&&(a, b)| {
                    a == q
                        && !used.contains(&(a, b))
                        && b != p
                        && buckets.contains_key(&(b, p))
                        && !used.contains(&(b, p))
                })
                .map(|&(_, b)| b)
                .min();
            let w = third.ok_or_else(|| {
                Error::MalformedDiagram(format!(
                    "cover edge {p}->{q} closes no Borromean 3-cycle"
                ))
            })?;
            used.insert((p, q));
            used.insert((q, w));
            used.insert((w, p));
            let mut ks: Vec<usize> = Vec::new();
            ks.extend(&buckets[&(p, q)]);
            ks.extend(&buckets[&(q, w)]);
            ks.extend(&buckets[&(w, p)]);
            ks.sort_unstable();
            let mut comps = vec![p, q, w];
            comps.sort_unstable();
            let triple = verify_triple(d, &comps, &ks)?;
            for k in &ks {
                assigned[*k] = true;
            }
            patterns.push(triple);
        }

        let next_id = d.components.iter().map(|c| c.id + 1).max().unwrap_or(0);
        Ok(StructuralView {
            components: d.components.clone(),
            patterns,
            next_id,
        })
    }
}

/// Check six crossings against the Borromean template and return the
/// oriented triple.
fn verify_triple(
    d: &FramedLinkDiagram,
    comps: &[ComponentId],
    ks: &[usize],
) -> Result<Pattern> {
    let comp_of = |arc: &ArcId| d.arcs[arc];
    let fail = || {
        Error::MalformedDiagram(format!(
            "crossings {ks:?} among components {comps:?} do not match the Borromean template"
        ))
    };
    // covers[p] = q means p runs over q in their two shared crossings.
    let mut covers: BTreeMap<ComponentId, ComponentId> = BTreeMap::new();
    let mut pair_crossings: BTreeMap<(ComponentId, ComponentId), Vec<usize>> = BTreeMap::new();
    for &k in ks {
        let x = &d.crossings[k];
        let under = comp_of(&x.under_in());
        let over = comp_of(&x.over_in());
        pair_crossings.entry((over, under)).or_default().push(k);
    }
    for ((over, under), list) in &pair_crossings {
        if list.len() != 2 {
            return Err(fail());
        }
        let s: i8 = list.iter().map(|&k| d.crossings[k].sign).sum();
        if s != 0 {
            return Err(fail());
        }
        if covers.insert(*over, *under).is_some() {
            return Err(fail());
        }
    }
    if covers.len() != 3 {
        return Err(fail());
    }
    let u = *comps.iter().min().expect("nonempty");
    let v = *covers.get(&u).ok_or_else(fail)?;
    let w = *covers.get(&v).ok_or_else(fail)?;
    if covers.get(&w) != Some(&u) || v == u || w == u || w == v {
        return Err(fail());
    }
    // Template crossings by (over, under, sign).
    let pick = |over: ComponentId, under: ComponentId, sign: i8| -> Result<usize> {
        pair_crossings[&(over, under)]
            .iter()
            .copied()
            .find(|&k| d.crossings[k].sign == sign)
            .ok_or_else(fail)
    };
    let c1 = pick(u, v, 1)?;
    let c2 = pick(w, u, -1)?;
    let c3 = pick(v, w, 1)?;
    let c4 = pick(u, v, -1)?;
    let c5 = pick(w, u, 1)?;
    let c6 = pick(v, w, -1)?;
    let x = |k: usize| &d.crossings[k];
    let ok = x(c1).over_out() == x(c2).under_in()
        && x(c2).under_out() == x(c4).over_in()
        && x(c4).over_out() == x(c5).under_in()
        && x(c1).under_out() == x(c3).over_in()
        && x(c3).over_out() == x(c4).under_in()
        && x(c4).under_out() == x(c6).over_in()
        && x(c2).over_out() == x(c3).under_in()
        && x(c3).under_out() == x(c5).over_in()
        && x(c5).over_out() == x(c6).under_in();
    if !ok {
        return Err(fail());
    }
    Ok(Pattern::Triple { u, v, w })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::frame;

    fn recover_patterns(d: &FramedLinkDiagram) -> Vec<Pattern> {
        let mut p = StructuralView::recover(d).unwrap().patterns;
        p.sort_by_key(Pattern::sort_key);
        p
    }

    #[test]
    fn recover_hopf() {
        let d = FramedLinkDiagram::hopf(frame(4), frame(1));
        assert_eq!(
            recover_patterns(&d),
            vec![Pattern::Clasp { under: 0, over: 1, sign: 1 }]
        );
    }

    #[test]
    fn recover_borromean() {
        let d = FramedLinkDiagram::borromean(frame(0), frame(0), frame(0));
        assert_eq!(recover_patterns(&d), vec![Pattern::Triple { u: 0, v: 1, w: 2 }]);
    }

    #[test]
    fn recover_sigma_with_meridians() {
        let d = FramedLinkDiagram::s1_sigma(2);
        let d = d.add_meridian(1, frame(1)).unwrap();
        let d = d.add_meridian(4, frame(0)).unwrap();
        let ps = recover_patterns(&d);
        assert_eq!(ps.len(), 4);
        assert_eq!(
            ps.iter().filter(|p| matches!(p, Pattern::Triple { .. })).count(),
            2
        );
    }

    #[test]
    fn reassembly_round_trip() {
        for d in [
            FramedLinkDiagram::hopf(frame(0), frame(3)),
            FramedLinkDiagram::borromean(frame(0), frame(1), frame(-1)),
            FramedLinkDiagram::s1_sigma(3),
            FramedLinkDiagram::chain(&[frame(3), frame(2), frame(2)]).unwrap(),
        ] {
            let view = StructuralView::recover(&d).unwrap();
            let back = view.assemble();
            assert_eq!(d, back, "recover/assemble is the identity on builder output");
        }
    }

    #[test]
    fn unstructured_diagram_rejected() {
        // A single crossing cannot be decomposed.
        let mut d = FramedLinkDiagram::hopf(frame(0), frame(0));
        d.crossings.pop();
        // Diagram is invalid, so recovery refuses it outright.
        assert!(StructuralView::recover(&d).is_err());

        // A knotted component (trefoil) is a valid diagram but carries no
        // clasp/triple decomposition.
        let trefoil = crate::diagram::tests_support::trefoil();
        assert!(trefoil.validate().is_valid());
        assert!(StructuralView::recover(&trefoil).is_err());
    }
}
