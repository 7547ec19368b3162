//! Wirtinger presentation of the fundamental group of the surgered manifold.
//!
//! One meridian generator per over-strand arc class (arcs glued across
//! over-passages), one conjugation relation per crossing, and one surgery
//! relator per component equating the framed longitude with the identity.
//! The framed longitude is the diagram longitude (the product of over-strand
//! meridians at the component's under-passages, in walk order) times
//! `m^(framing - writhe)`, so a crossing-free unknot with framing n
//! contributes exactly the relator `m^n`.

use std::collections::BTreeMap;

use crate::diagram::{ArcId, ComponentId, FramedLinkDiagram};
use crate::error::{Error, Result};
use crate::invariants::presentation::{GroupPresentation, Word};

#[derive(Clone, Copy, PartialEq, Eq)]
enum Role {
    Under,
    Over,
}

struct ArcClasses {
    class_of: BTreeMap<ArcId, usize>,
    count: usize,
}

fn arc_classes(d: &FramedLinkDiagram) -> ArcClasses {
    let arcs: Vec<ArcId> = d.arcs().keys().copied().collect();
    let index: BTreeMap<ArcId, usize> = arcs.iter().enumerate().map(|(i, &a)| (a, i)).collect();
    let mut parent: Vec<usize> = (0..arcs.len()).collect();
    fn find(parent: &mut Vec<usize>, i: usize) -> usize {
        if parent[i] != i {
            let r = find(parent, parent[i]);
            parent[i] = r;
        }
        parent[i]
    }
    for x in d.crossings() {
        let a = index[&x.over_in()];
        let b = index[&x.over_out()];
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra] = rb;
        }
    }
    // Number classes by their least arc id.
    let mut reps: BTreeMap<usize, Vec<ArcId>> = BTreeMap::new();
    for &a in &arcs {
        let r = find(&mut parent, index[&a]);
        reps.entry(r).or_default().push(a);
    }
    let mut ordered: Vec<(ArcId, usize)> = reps
        .values()
        .map(|members| (*members.iter().min().expect("nonempty"), 0))
        .collect();
    ordered.sort_unstable();
    let rank_of_min: BTreeMap<ArcId, usize> = ordered
        .iter()
        .enumerate()
        .map(|(i, (min, _))| (*min, i))
        .collect();
    let mut class_of = BTreeMap::new();
    for members in reps.values() {
        let min = members.iter().min().expect("nonempty");
        let rank = rank_of_min[min];
        for &a in members {
            class_of.insert(a, rank);
        }
    }
    ArcClasses {
        class_of,
        count: reps.len(),
    }
}

/// Walk a component from its least arc, returning its passages in order.
fn passages(d: &FramedLinkDiagram, comp: ComponentId) -> Vec<(usize, Role)> {
    let mut end_at: BTreeMap<ArcId, (usize, Role)> = BTreeMap::new();
    for (k, x) in d.crossings().iter().enumerate() {
        end_at.insert(x.under_in(), (k, Role::Under));
        end_at.insert(x.over_in(), (k, Role::Over));
    }
    let mut arcs: Vec<ArcId> = d
        .arcs()
        .iter()
        .filter(|(_, c)| **c == comp)
        .map(|(a, _)| *a)
        .collect();
    arcs.sort_unstable();
    let Some(&start) = arcs.first() else {
        return Vec::new();
    };
    let mut seq = Vec::new();
    let mut cur = start;
    loop {
        let (k, role) = end_at[&cur];
        seq.push((k, role));
        let x = &d.crossings()[k];
        cur = match role {
            Role::Under => x.under_out(),
            Role::Over => x.over_out(),
        };
        if cur == start {
            break;
        }
    }
    seq
}

/// Wirtinger-plus-surgery presentation of the fundamental group of the
/// manifold obtained by surgery on the diagram. Requires integer framings.
pub fn wirtinger_presentation(d: &FramedLinkDiagram) -> Result<GroupPresentation> {
    let report = d.validate();
    if !report.is_valid() {
        return Err(Error::MalformedDiagram(report.violations.join("; ")));
    }
    if !d.all_integer_framings() {
        let bad = d
            .components()
            .iter()
            .find(|c| !c.framing.is_integer())
            .expect("some rational framing");
        return Err(Error::RationalFraming(bad.framing.to_string()));
    }

    let classes = arc_classes(d);
    let mut names: Vec<String> = vec![String::new(); classes.count];
    let mut seen_per_comp: BTreeMap<ComponentId, usize> = BTreeMap::new();
    // Name classes in class order by walking arcs in id order.
    for (&arc, &cls) in &classes.class_of {
        if !names[cls].is_empty() {
            continue;
        }
        let comp = d.arcs()[&arc];
        let n = seen_per_comp.entry(comp).or_insert(0);
        let base = d
            .component(comp)
            .ok()
            .and_then(|c| c.label.clone())
            .unwrap_or_else(|| format!("k{comp}"));
        names[cls] = if *n == 0 { base } else { format!("{base}_{n}") };
        *n += 1;
    }
    // Free loops get one generator each.
    let mut free_gen: BTreeMap<ComponentId, usize> = BTreeMap::new();
    for c in d.components() {
        if d.zero_crossing_loops(c.id) == 1 {
            let idx = names.len();
            let base = c.label.clone().unwrap_or_else(|| format!("k{}", c.id));
            names.push(base);
            free_gen.insert(c.id, idx);
        }
    }

    let mut p = GroupPresentation::with_names(names);

    let gen = |cls: usize| -> i32 { (cls + 1) as i32 };

    // Conjugation relation per crossing: out = over^s . in . over^-s.
    for (k, x) in d.crossings().iter().enumerate() {
        let over = gen(classes.class_of[&x.over_in()]);
        let uin = gen(classes.class_of[&x.under_in()]);
        let uout = gen(classes.class_of[&x.under_out()]);
        let s = i32::from(x.sign);
        let w: Word = vec![-uout, s * over, uin, -s * over];
        p.push_relator(w, format!("crossing {k}"));
    }

    // Surgery relator per component.
    for c in d.components() {
        let f = c.framing.to_integer();
        let label = c
            .label
            .clone()
            .unwrap_or_else(|| format!("component {}", c.id));
        if let Some(&g) = free_gen.get(&c.id) {
            if f != 0 {
                let m = (g + 1) as i32;
                let letter = if f > 0 { m } else { -m };
                let w: Word = vec![letter; f.unsigned_abs() as usize];
                p.push_relator(w, format!("surgery relator for {label}"));
            }
            continue;
        }
        let seq = passages(d, c.id);
        let mut arcs: Vec<ArcId> = d
            .arcs()
            .iter()
            .filter(|(_, cc)| **cc == c.id)
            .map(|(a, _)| *a)
            .collect();
        arcs.sort_unstable();
        let base_arc = arcs[0];
        let m = gen(classes.class_of[&base_arc]);
        let mut w: Word = Vec::new();
        for (k, role) in seq {
            if role == Role::Under {
                let x = &d.crossings()[k];
                let over = gen(classes.class_of[&x.over_in()]);
                w.push(i32::from(x.sign) * over);
            }
        }
        let exponent = f - d.writhe(c.id);
        for _ in 0..exponent.unsigned_abs() {
            w.push(if exponent > 0 { m } else { -m });
        }
        p.push_relator(w, format!("surgery relator for {label}"));
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{frame, FramedLinkDiagram};
    use crate::invariants::presentation::{cyclic_order, is_free_of_rank, is_trivial, tietze_simplify};
    use crate::invariants::{first_homology, Ambient};

    fn h1_consistent(d: &FramedLinkDiagram) {
        let p = wirtinger_presentation(d).unwrap();
        assert_eq!(
            p.abelianization(),
            first_homology(d, Ambient::ThreeManifold).unwrap(),
            "abelianized presentation vs linking-matrix cokernel"
        );
    }

    #[test]
    fn unknot_presentations() {
        let d = FramedLinkDiagram::unknot(frame(0));
        let p = wirtinger_presentation(&d).unwrap();
        assert_eq!(p.generators, 1);
        assert!(p.relators.is_empty());

        let d = FramedLinkDiagram::unknot(frame(5));
        let p = wirtinger_presentation(&d).unwrap();
        assert_eq!(p.relators, vec![vec![1, 1, 1, 1, 1]]);
    }

    #[test]
    fn hopf_zero_zero_is_sphere() {
        let d = FramedLinkDiagram::hopf(frame(0), frame(0));
        let p = wirtinger_presentation(&d).unwrap();
        let out = tietze_simplify(&p, 1000);
        assert!(is_trivial(&out.presentation), "got {:?}", out.presentation);
    }

    #[test]
    fn hopf_four_one_is_cyclic_three() {
        let d = FramedLinkDiagram::hopf(frame(4), frame(1));
        let p = wirtinger_presentation(&d).unwrap();
        let out = tietze_simplify(&p, 1000);
        assert_eq!(cyclic_order(&out.presentation), Some(3));
    }

    #[test]
    fn borromean_zero_surgery_is_z3() {
        let d = FramedLinkDiagram::borromean(frame(0), frame(0), frame(0));
        let p = wirtinger_presentation(&d).unwrap();
        let out = tietze_simplify(&p, 10_000);
        assert!(
            crate::invariants::presentation::matches_s1_sigma(&out.presentation, 1),
            "expected the rank-3 torus presentation, got {} generators and relators {:?}",
            out.presentation.generators,
            out.presentation
                .relators
                .iter()
                .map(|r| out.presentation.relator_string(r))
                .collect::<Vec<_>>()
        );
    }

    #[test]
    fn sigma_blocks_give_surface_groups() {
        for g in 0..=3u32 {
            let d = FramedLinkDiagram::s1_sigma(g);
            let p = wirtinger_presentation(&d).unwrap();
            let out = tietze_simplify(&p, 10_000);
            if g == 0 {
                assert!(is_free_of_rank(&out.presentation, 1));
            } else {
                assert!(
                    crate::invariants::presentation::matches_s1_sigma(&out.presentation, g as usize),
                    "genus {g}: got {} generators, relators {:?}",
                    out.presentation.generators,
                    out.presentation
                        .relators
                        .iter()
                        .map(|r| out.presentation.relator_string(r))
                        .collect::<Vec<_>>()
                );
            }
        }
    }

    #[test]
    fn abelianization_matches_homology_on_library() {
        let diagrams = vec![
            FramedLinkDiagram::unknot(frame(0)),
            FramedLinkDiagram::unknot(frame(-7)),
            FramedLinkDiagram::hopf(frame(4), frame(1)),
            FramedLinkDiagram::hopf(frame(0), frame(9)),
            FramedLinkDiagram::chain(&[frame(3), frame(2)]).unwrap(),
            FramedLinkDiagram::chain(&[frame(1), frame(1)]).unwrap(),
            FramedLinkDiagram::borromean(frame(0), frame(0), frame(0)),
            FramedLinkDiagram::borromean(frame(0), frame(0), frame(1)),
            FramedLinkDiagram::s1_sigma(3),
            FramedLinkDiagram::s1_sigma(1).add_meridian(1, frame(1)).unwrap(),
            crate::diagram::tests_support::trefoil(),
        ];
        for d in &diagrams {
            h1_consistent(d);
        }
    }

    #[test]
    fn trefoil_longitude_writhe_correction() {
        // The knotted test diagram has writhe -3; with framing 0 the surgery
        // relator must still abelianize to zero.
        let d = crate::diagram::tests_support::trefoil();
        assert_eq!(d.writhe(0), -3);
        let p = wirtinger_presentation(&d).unwrap();
        assert_eq!(
            p.abelianization(),
            crate::invariants::AbelianGroup::free(1)
        );
    }
}
