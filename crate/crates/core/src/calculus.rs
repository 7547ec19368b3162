//! Certified Kirby/Rolfsen rewriting.
//!
//! Every rule application recomputes the first homology of the presented
//! manifold before and after (clearing rational coefficients on a scratch
//! copy when needed) and aborts with a hard error on any mismatch, so a
//! surviving trace is a per-step homology certificate. When framings are
//! integral on both sides, the abelianized Wirtinger presentation is checked
//! as well. Group-level agreement of the endpoints is established separately
//! at recognition time.
//!
//! The rules are local tangle rewrites, not general handle slides:
//!
//! - `blow_up` / `blow_down`: introduce or remove a ±1-framed unknot
//!   encircling up to two strands, twisting the pierced strands;
//! - `slam_dunk`: absorb a rational-coefficient meridian into its parent,
//!   shifting the parent's coefficient by `-1/c`;
//! - `rolfsen_twist`: remove a `±1/q`-coefficient unknot by giving the
//!   pierced strands `q` full twists;
//! - `clear_rational`: expand every rational coefficient into an
//!   integer-framed chain via negative continued fractions;
//! - `borromean_twist`: remove a ±1-framed member of a Borromean triple,
//!   clasping the surviving pair;
//! - `split_extract`: split off a two-component sphere block formed by a
//!   component and its 0- or ±1-framed meridian, freeing everything the
//!   component was weaved with.

use std::fmt;

use num_rational::Rational64;
use num_traits::{Signed, Zero};
use serde_json::{json, Value};

use crate::diagram::assemble::{Pattern, StructuralView};
use crate::diagram::{ComponentId, FramedLinkDiagram};
use crate::error::{Error, Result};
use crate::invariants::{first_homology, wirtinger_presentation, AbelianGroup, Ambient};

/// A rewrite rule with its parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RewriteRule {
    BlowUp { strands: Vec<ComponentId>, sign: i8 },
    BlowDown { component: ComponentId },
    SlamDunk { meridian: ComponentId },
    RolfsenTwist { component: ComponentId },
    BorromeanTwist { component: ComponentId },
    SplitExtract { component: ComponentId },
    ClearRational,
}

impl RewriteRule {
    pub fn name(&self) -> &'static str {
        match self {
            RewriteRule::BlowUp { .. } => "blow_up",
            RewriteRule::BlowDown { .. } => "blow_down",
            RewriteRule::SlamDunk { .. } => "slam_dunk",
            RewriteRule::RolfsenTwist { .. } => "rolfsen_twist",
            RewriteRule::BorromeanTwist { .. } => "borromean_twist",
            RewriteRule::SplitExtract { .. } => "split_extract",
            RewriteRule::ClearRational => "clear_rational",
        }
    }

    pub fn params_json(&self) -> Value {
        match self {
            RewriteRule::BlowUp { strands, sign } => json!({"sign": sign, "strands": strands}),
            RewriteRule::BlowDown { component }
            | RewriteRule::BorromeanTwist { component }
            | RewriteRule::RolfsenTwist { component }
            | RewriteRule::SplitExtract { component } => json!({"component": component}),
            RewriteRule::SlamDunk { meridian } => json!({"meridian": meridian}),
            RewriteRule::ClearRational => json!({}),
        }
    }
}

impl fmt::Display for RewriteRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.name(), self.params_json())
    }
}

/// One certified step.
#[derive(Clone, Debug)]
pub struct StepRecord {
    pub rule: RewriteRule,
    pub before_hash: String,
    pub after_hash: String,
    pub h1_before: AbelianGroup,
    pub h1_after: AbelianGroup,
    pub ok: bool,
}

impl StepRecord {
    pub fn to_json(&self) -> Value {
        json!({
            "after_hash": self.after_hash,
            "before_hash": self.before_hash,
            "h1_after": self.h1_after.to_json(),
            "h1_before": self.h1_before.to_json(),
            "ok": self.ok,
            "params": self.rule.params_json(),
            "rule": self.rule.name(),
        })
    }
}

/// An ordered, hash-chained record of rule applications.
#[derive(Clone, Debug)]
pub struct MoveTrace {
    pub initial: FramedLinkDiagram,
    pub final_diagram: FramedLinkDiagram,
    pub steps: Vec<StepRecord>,
}

impl MoveTrace {
    pub fn identity(d: &FramedLinkDiagram) -> Self {
        MoveTrace {
            initial: d.clone(),
            final_diagram: d.clone(),
            steps: Vec::new(),
        }
    }

    /// Every step passed its check and the hashes chain from the initial to
    /// the final diagram.
    pub fn verify_chain(&self) -> bool {
        let mut cur = self.initial.digest();
        for s in &self.steps {
            if !s.ok || s.before_hash != cur {
                return false;
            }
            cur = s.after_hash.clone();
        }
        cur == self.final_diagram.digest()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "final": self.final_diagram.to_json(),
            "format_version": "1",
            "initial": self.initial.to_json(),
            "steps": self.steps.iter().map(StepRecord::to_json).collect::<Vec<_>>(),
        })
    }
}

/// Negative continued fraction expansion `p/q = a_1 - 1/(a_2 - 1/(...))`.
/// All entries are at least 2 when `p/q > 1` is in lowest terms.
pub fn rational_to_chain(c: Rational64) -> Result<Vec<i64>> {
    if c.is_zero() {
        return Err(Error::ZeroCoefficient);
    }
    let mut out = Vec::new();
    let mut cur = c;
    loop {
        let a = cur.ceil().to_integer();
        out.push(a);
        let frac = Rational64::from_integer(a) - cur;
        if frac.is_zero() {
            break;
        }
        cur = frac.recip();
        debug_assert!(out.len() < 128, "continued fraction does not terminate");
    }
    Ok(out)
}

/// First homology of the presented 3-manifold, clearing rational
/// coefficients on a scratch copy when necessary.
pub fn h1_cleared(d: &FramedLinkDiagram) -> Result<AbelianGroup> {
    if d.all_integer_framings() {
        return first_homology(d, Ambient::ThreeManifold);
    }
    let mut view = StructuralView::recover(d)?;
    clear_rational_view(&mut view)?;
    first_homology(&view.assemble(), Ambient::ThreeManifold)
}

fn clear_rational_view(view: &mut StructuralView) -> Result<bool> {
    let targets: Vec<(ComponentId, Rational64)> = view
        .components
        .iter()
        .filter(|c| !c.framing.is_integer())
        .map(|c| (c.id, c.framing))
        .collect();
    for (id, f) in &targets {
        let cf = rational_to_chain(*f)?;
        view.set_framing(*id, Rational64::from_integer(cf[0]))?;
        let mut prev = *id;
        for &a in &cf[1..] {
            let next = view.add_component(Rational64::from_integer(a), None);
            view.push_pattern(Pattern::Clasp {
                under: prev,
                over: next,
                sign: 1,
            });
            prev = next;
        }
    }
    Ok(!targets.is_empty())
}

/// Clasp partners of a component, with signs; errors when the component
/// participates in a triple or in a self-clasp.
fn clasp_partners(view: &StructuralView, id: ComponentId) -> Result<Vec<(ComponentId, i8)>> {
    let mut partners = Vec::new();
    for p in view.patterns_of(id) {
        match p {
            Pattern::Clasp { under, over, sign } => {
                let other = if under == id { over } else { under };
                if other == id {
                    return Err(Error::UnsupportedStrandSet(format!(
                        "component {id} clasps itself"
                    )));
                }
                partners.push((other, sign));
            }
            Pattern::Triple { .. } => {
                return Err(Error::Precondition(format!(
                    "component {id} belongs to a Borromean tangle"
                )));
            }
        }
    }
    Ok(partners)
}

/// The single component a meridian clasps, when the component is a meridian
/// (exactly one pattern: a clasp with another component).
fn meridian_parent(view: &StructuralView, m: ComponentId) -> Option<ComponentId> {
    let ps = view.patterns_of(m);
    if ps.len() != 1 {
        return None;
    }
    match ps[0] {
        Pattern::Clasp { under, over, .. } if under == m && over != m => Some(over),
        Pattern::Clasp { under, over, .. } if over == m && under != m => Some(under),
        _ => None,
    }
}

fn structural_apply(d: &FramedLinkDiagram, rule: &RewriteRule) -> Result<FramedLinkDiagram> {
    let mut view = StructuralView::recover(d)?;
    match rule {
        RewriteRule::ClearRational => {
            clear_rational_view(&mut view)?;
        }
        RewriteRule::SlamDunk { meridian } => {
            let parent = meridian_parent(&view, *meridian).ok_or_else(|| {
                Error::Precondition(format!(
                    "component {meridian} is not a meridian clasping exactly one component"
                ))
            })?;
            let c = view.framing(*meridian)?;
            if c.is_zero() {
                return Err(Error::ZeroCoefficient);
            }
            let f = view.framing(parent)?;
            view.remove_component(*meridian);
            view.set_framing(parent, f - c.recip())?;
        }
        RewriteRule::BlowDown { component } => {
            let f = view.framing(*component)?;
            if !f.is_integer() || f.to_integer().abs() != 1 {
                return Err(Error::Precondition(format!(
                    "component {component} is not ±1-framed"
                )));
            }
            twist_removal(&mut view, *component, f.to_integer(), 1)?;
        }
        RewriteRule::RolfsenTwist { component } => {
            let f = view.framing(*component)?;
            if f.numer().abs() != 1 {
                return Err(Error::Precondition(format!(
                    "component {component} must carry a ±1/q coefficient"
                )));
            }
            twist_removal(&mut view, *component, f.numer().signum(), *f.denom())?;
        }
        RewriteRule::BlowUp { strands, sign } => {
            if *sign != 1 && *sign != -1 {
                return Err(Error::Precondition("blow-up sign must be ±1".into()));
            }
            if strands.len() > 2 {
                return Err(Error::UnsupportedStrandSet(format!(
                    "{} strands (at most 2 supported)",
                    strands.len()
                )));
            }
            if strands.len() == 2 && strands[0] == strands[1] {
                return Err(Error::UnsupportedStrandSet(
                    "two strands of the same component".into(),
                ));
            }
            for s in strands {
                view.framing(*s)?;
            }
            let eps = Rational64::from_integer(i64::from(*sign));
            let c = view.add_component(eps, None);
            for s in strands {
                view.push_pattern(Pattern::Clasp {
                    under: *s,
                    over: c,
                    sign: 1,
                });
                let f = view.framing(*s)?;
                view.set_framing(*s, f + eps)?;
            }
            if strands.len() == 2 {
                view.push_pattern(Pattern::Clasp {
                    under: strands[0].min(strands[1]),
                    over: strands[0].max(strands[1]),
                    sign: *sign,
                });
                view.cancel_opposite_clasps();
            }
        }
        RewriteRule::BorromeanTwist { component } => {
            let f = view.framing(*component)?;
            if !f.is_integer() || f.to_integer().abs() != 1 {
                return Err(Error::Precondition(format!(
                    "component {component} is not a ±1-framed tangle member"
                )));
            }
            let eps = f.to_integer() as i8;
            let ps = view.patterns_of(*component);
            let [Pattern::Triple { u, v, w }] = ps.as_slice() else {
                return Err(Error::Precondition(format!(
                    "component {component} must lie in exactly one Borromean tangle and clasp nothing else"
                )));
            };
            let others: Vec<ComponentId> = [*u, *v, *w]
                .into_iter()
                .filter(|x| x != component)
                .collect();
            view.remove_component(*component);
            view.push_pattern(Pattern::Clasp {
                under: others[0].min(others[1]),
                over: others[0].max(others[1]),
                sign: -eps,
            });
            view.cancel_opposite_clasps();
        }
        RewriteRule::SplitExtract { component } => {
            let m = extraction_partner(&view, *component).ok_or_else(|| {
                Error::Precondition(format!(
                    "component {component} has no extractable sphere-block meridian"
                ))
            })?;
            view.remove_component(m);
            view.remove_component(*component);
        }
    }
    Ok(view.assemble())
}

/// Remove a ±1/q-coefficient unknot, twisting the pierced strands `q` times
/// opposite to the coefficient sign. Integer ±1 is the blow-down.
fn twist_removal(view: &mut StructuralView, c: ComponentId, eps: i64, q: i64) -> Result<()> {
    let partners = clasp_partners(view, c)?;
    if partners.len() > 2 {
        return Err(Error::UnsupportedStrandSet(format!(
            "component {c} pierces {} strands (at most 2 supported)",
            partners.len()
        )));
    }
    if partners.len() == 2 && partners[0].0 == partners[1].0 {
        return Err(Error::UnsupportedStrandSet(
            "two strands of the same component".into(),
        ));
    }
    let t = -eps * q;
    for (x, _) in &partners {
        let f = view.framing(*x)?;
        view.set_framing(*x, f + Rational64::from_integer(t))?;
    }
    if let [(x, sx), (y, sy)] = partners.as_slice() {
        let clasp_sign: i8 = if t * i64::from(sx * sy) > 0 { 1 } else { -1 };
        for _ in 0..t.unsigned_abs() {
            view.push_pattern(Pattern::Clasp {
                under: (*x).min(*y),
                over: (*x).max(*y),
                sign: clasp_sign,
            });
        }
    }
    view.remove_component(c);
    view.cancel_opposite_clasps();
    Ok(())
}

/// Find the meridian making `(component, meridian)` an extractable sphere
/// block: a meridian clasping only this component, with framing 0 (anything
/// weaved with the component slides off the block), or framing ±1 with the
/// component 0-framed and otherwise weaved only into all-0-framed Borromean
/// tangles (the handle-slide reduction of the standard diagrams).
pub fn extraction_partner(view: &StructuralView, component: ComponentId) -> Option<ComponentId> {
    let mut meridians: Vec<(ComponentId, Rational64)> = view
        .components
        .iter()
        .filter(|c| c.id != component)
        .filter(|c| meridian_parent(view, c.id) == Some(component))
        .map(|c| (c.id, c.framing))
        .collect();
    meridians.sort_by_key(|(id, _)| *id);
    // Zero-framed case: twisting along the meridian clears the parent's
    // coefficient, so the parent framing must be an integer.
    if view.framing(component).is_ok_and(|f| f.is_integer()) {
        if let Some((m, _)) = meridians.iter().find(|(_, f)| f.is_zero()) {
            return Some(*m);
        }
    }
    let unit = meridians
        .iter()
        .find(|(_, f)| f.is_integer() && f.to_integer().abs() == 1)?;
    if !view.framing(component).ok()?.is_zero() {
        return None;
    }
    for p in view.patterns_of(component) {
        match p {
            Pattern::Clasp { under, over, .. } => {
                let other = if under == component { over } else { under };
                if other != unit.0 {
                    return None;
                }
            }
            Pattern::Triple { u, v, w } => {
                for member in [u, v, w] {
                    if !view.framing(member).ok()?.is_zero() {
                        return None;
                    }
                }
            }
        }
    }
    Some(unit.0)
}

/// Apply a rule with the homology certificate. A mismatch is a hard error
/// and the input diagram is left untouched.
pub fn apply(d: &FramedLinkDiagram, rule: &RewriteRule) -> Result<(FramedLinkDiagram, StepRecord)> {
    let h1_before = h1_cleared(d)?;
    let out = structural_apply(d, rule)?;
    let h1_after = h1_cleared(&out)?;
    if h1_before != h1_after {
        return Err(Error::InvariantViolation {
            rule: rule.to_string(),
            before: h1_before.to_string(),
            after: h1_after.to_string(),
        });
    }
    if d.all_integer_framings() && out.all_integer_framings() {
        let ab_before = wirtinger_presentation(d)?.abelianization();
        let ab_after = wirtinger_presentation(&out)?.abelianization();
        if ab_before != ab_after {
            return Err(Error::InvariantViolation {
                rule: rule.to_string(),
                before: format!("abelianization {ab_before}"),
                after: format!("abelianization {ab_after}"),
            });
        }
    }
    let record = StepRecord {
        rule: rule.clone(),
        before_hash: d.digest(),
        after_hash: out.digest(),
        h1_before,
        h1_after,
        ok: true,
    };
    Ok((out, record))
}

pub fn blow_up(
    d: &FramedLinkDiagram,
    strands: &[ComponentId],
    sign: i8,
) -> Result<FramedLinkDiagram> {
    apply(d, &RewriteRule::BlowUp { strands: strands.to_vec(), sign }).map(|(d, _)| d)
}

pub fn blow_down(d: &FramedLinkDiagram, component: ComponentId) -> Result<FramedLinkDiagram> {
    apply(d, &RewriteRule::BlowDown { component }).map(|(d, _)| d)
}

pub fn slam_dunk(d: &FramedLinkDiagram, meridian: ComponentId) -> Result<FramedLinkDiagram> {
    apply(d, &RewriteRule::SlamDunk { meridian }).map(|(d, _)| d)
}

pub fn rolfsen_twist(d: &FramedLinkDiagram, component: ComponentId) -> Result<FramedLinkDiagram> {
    apply(d, &RewriteRule::RolfsenTwist { component }).map(|(d, _)| d)
}

pub fn borromean_twist(d: &FramedLinkDiagram, component: ComponentId) -> Result<FramedLinkDiagram> {
    apply(d, &RewriteRule::BorromeanTwist { component }).map(|(d, _)| d)
}

pub fn split_extract(d: &FramedLinkDiagram, component: ComponentId) -> Result<FramedLinkDiagram> {
    apply(d, &RewriteRule::SplitExtract { component }).map(|(d, _)| d)
}

pub fn clear_rational(d: &FramedLinkDiagram) -> Result<FramedLinkDiagram> {
    apply(d, &RewriteRule::ClearRational).map(|(d, _)| d)
}

/// Greedy certified normalization.
///
/// Rule preference: sphere-block extraction, then integrality-preserving
/// slam dunks (coefficient ±1/q), then certified Borromean twists, then
/// blow-downs of ±1-framed unknots piercing at most two strands, then
/// rational clearing. Every applied step strictly reduces the measure
/// (total coefficient-denominator excess, then component count), so the
/// loop terminates. Diagrams outside the tangle vocabulary are returned
/// unchanged with an identity trace.
pub fn normalize(d: &FramedLinkDiagram) -> Result<(FramedLinkDiagram, MoveTrace)> {
    let mut cur = d.clone();
    let mut steps = Vec::new();
    let cap = 10_000;
    while steps.len() < cap {
        let Ok(view) = StructuralView::recover(&cur) else {
            break;
        };
        let mut skip_twists = false;
        let applied = loop {
            let rule = if skip_twists {
                next_rule_skipping_twists(&view)
            } else {
                next_rule(&view)
            };
            let Some(rule) = rule else {
                break None;
            };
            match apply(&cur, &rule) {
                Ok(out) => break Some(out),
                Err(Error::InvariantViolation { .. })
                    if matches!(rule, RewriteRule::BorromeanTwist { .. }) =>
                {
                    // Uncertifiable twist: fall back to the remaining rules.
                    skip_twists = true;
                }
                Err(e) => return Err(e),
            }
        };
        match applied {
            Some((next, record)) => {
                cur = next;
                steps.push(record);
            }
            None => break,
        }
    }
    let trace = MoveTrace {
        initial: d.clone(),
        final_diagram: cur.clone(),
        steps,
    };
    Ok((cur, trace))
}

fn component_ids_sorted(view: &StructuralView) -> Vec<ComponentId> {
    let mut ids: Vec<ComponentId> = view.components.iter().map(|c| c.id).collect();
    ids.sort_unstable();
    ids
}

fn next_rule(view: &StructuralView) -> Option<RewriteRule> {
    pick_extract(view)
        .or_else(|| pick_slam(view))
        .or_else(|| pick_twist(view))
        .or_else(|| pick_blow_down(view))
        .or_else(|| pick_clear(view))
}

fn next_rule_skipping_twists(view: &StructuralView) -> Option<RewriteRule> {
    pick_blow_down(view).or_else(|| pick_clear(view))
}

fn pick_extract(view: &StructuralView) -> Option<RewriteRule> {
    component_ids_sorted(view)
        .into_iter()
        .find(|&k| extraction_partner(view, k).is_some())
        .map(|component| RewriteRule::SplitExtract { component })
}

fn pick_slam(view: &StructuralView) -> Option<RewriteRule> {
    component_ids_sorted(view)
        .into_iter()
        .find(|&m| {
            meridian_parent(view, m).is_some()
                && view
                    .framing(m)
                    .map(|c| !c.is_zero() && c.numer().abs() == 1)
                    .unwrap_or(false)
        })
        .map(|meridian| RewriteRule::SlamDunk { meridian })
}

fn pick_twist(view: &StructuralView) -> Option<RewriteRule> {
    component_ids_sorted(view)
        .into_iter()
        .find(|&t| {
            let unit = view
                .framing(t)
                .is_ok_and(|f| f.is_integer() && f.to_integer().abs() == 1);
            unit && matches!(view.patterns_of(t).as_slice(), [Pattern::Triple { .. }])
        })
        .map(|component| RewriteRule::BorromeanTwist { component })
}

fn pick_blow_down(view: &StructuralView) -> Option<RewriteRule> {
    component_ids_sorted(view)
        .into_iter()
        .find(|&c| {
            let unit = view
                .framing(c)
                .is_ok_and(|f| f.is_integer() && f.to_integer().abs() == 1);
            if !unit {
                return false;
            }
            match clasp_partners(view, c) {
                Ok(partners) => {
                    partners.len() <= 2 && !(partners.len() == 2 && partners[0].0 == partners[1].0)
                }
                Err(_) => false,
            }
        })
        .map(|component| RewriteRule::BlowDown { component })
}

fn pick_clear(view: &StructuralView) -> Option<RewriteRule> {
    view.components
        .iter()
        .any(|c| !c.framing.is_integer())
        .then_some(RewriteRule::ClearRational)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{frac, frame};
    use crate::invariants::{recognize, Summand};

    #[test]
    fn chain_expansion_examples() {
        assert_eq!(rational_to_chain(frame(5)).unwrap(), vec![5]);
        assert_eq!(rational_to_chain(frac(5, 2)).unwrap(), vec![3, 2]);
        assert!(rational_to_chain(frame(0)).is_err());
    }

    #[test]
    fn blow_down_hopf_gives_lens_normal_form() {
        let d = FramedLinkDiagram::hopf(frame(4), frame(1));
        let out = blow_down(&d, 1).unwrap();
        assert_eq!(out, FramedLinkDiagram::unknot(frame(3)));
    }

    #[test]
    fn blow_down_lone_unit_unknot_empties() {
        let d = FramedLinkDiagram::unknot(frame(1));
        let out = blow_down(&d, 0).unwrap();
        assert!(out.components().is_empty());
    }

    #[test]
    fn blow_up_blow_down_round_trip() {
        let base = FramedLinkDiagram::hopf(frame(2), frame(5));
        for strands in [vec![], vec![0], vec![0, 1]] {
            for sign in [1i8, -1] {
                let up = blow_up(&base, &strands, sign).unwrap();
                let new_id = up
                    .component_ids()
                    .into_iter()
                    .max()
                    .expect("blow-up adds a component");
                let down = blow_down(&up, new_id).unwrap();
                assert_eq!(down, base, "strands {strands:?} sign {sign}");
            }
        }
    }

    #[test]
    fn slam_dunk_examples() {
        // Meridian with coefficient 1/3 turns a 0-framed unknot into -3.
        let d = FramedLinkDiagram::unknot(frame(0));
        let d = d.add_meridian(0, frac(1, 3)).unwrap();
        let out = slam_dunk(&d, 1).unwrap();
        assert_eq!(out, FramedLinkDiagram::unknot(frame(-3)));

        // Coefficient 1 gives -1.
        let d = FramedLinkDiagram::unknot(frame(0)).add_meridian(0, frame(1)).unwrap();
        let out = slam_dunk(&d, 1).unwrap();
        assert_eq!(out, FramedLinkDiagram::unknot(frame(-1)));

        // Coefficient 0 is rejected.
        let d = FramedLinkDiagram::unknot(frame(0)).add_meridian(0, frame(0)).unwrap();
        assert!(matches!(slam_dunk(&d, 1), Err(Error::ZeroCoefficient)));
    }

    #[test]
    fn clear_rational_splices_chain() {
        let d = FramedLinkDiagram::unknot(frac(5, 2));
        let out = clear_rational(&d).unwrap();
        assert_eq!(out, FramedLinkDiagram::chain(&[frame(3), frame(2)]).unwrap());
        // Identity on integer diagrams.
        let d = FramedLinkDiagram::hopf(frame(2), frame(2));
        assert_eq!(clear_rational(&d).unwrap(), d);
    }

    #[test]
    fn rolfsen_twist_removes_unit_numerator_unknot() {
        // -1-coefficient unknot clasped by two strands: removed with a +1
        // twist on the strands.
        let mut a = crate::diagram::assemble::Assembler::new();
        let x = a.component(frame(0), None);
        let y = a.component(frame(0), None);
        let c = a.component(frame(-1), None);
        a.clasp(x, c, 1);
        a.clasp(y, c, 1);
        let d = a.assemble();
        let out = rolfsen_twist(&d, c).unwrap();
        assert_eq!(out.components().len(), 2);
        let m = out.integer_linking_matrix().unwrap();
        assert_eq!(m, vec![vec![1, 1], vec![1, 1]]);
    }

    #[test]
    fn borromean_twist_certified_config() {
        // Tangle (y, a, b) with a 0-framed meridian on a and b slammed to -1:
        // the twist of b passes certification.
        let d = FramedLinkDiagram::s1_sigma(1);
        let d = d.add_meridian(1, frame(0)).unwrap(); // m_a1, id 3
        let d = d.add_meridian(2, frame(1)).unwrap(); // m_b1, id 4
        let d = slam_dunk(&d, 4).unwrap();
        let before = h1_cleared(&d).unwrap();
        assert_eq!(before, AbelianGroup::free(1));
        let out = borromean_twist(&d, 2).unwrap();
        assert_eq!(h1_cleared(&out).unwrap(), before);
        // Survivors: y and a clasped, plus the meridian of a.
        assert_eq!(out.components().len(), 3);
    }

    #[test]
    fn borromean_twist_violation_aborts() {
        // On the bare tangle the clasped outcome changes homology: the
        // engine must refuse.
        let d = FramedLinkDiagram::borromean(frame(0), frame(0), frame(-1));
        let err = borromean_twist(&d, 2).unwrap_err();
        assert!(matches!(err, Error::InvariantViolation { .. }), "got {err}");
    }

    #[test]
    fn borromean_twist_precondition() {
        let d = FramedLinkDiagram::hopf(frame(1), frame(0));
        assert!(matches!(
            borromean_twist(&d, 0),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn split_extract_zero_meridian_dissolves_tangle() {
        let d = FramedLinkDiagram::s1_sigma(1);
        let d = d.add_meridian(1, frame(0)).unwrap(); // (0,1,0)-style handle on a1
        let out = split_extract(&d, 1).unwrap();
        // y and b1 survive, unlinked and 0-framed.
        assert_eq!(out.components().len(), 2);
        assert!(out.crossings().is_empty());
        let r = recognize(&out).unwrap();
        assert_eq!(r.summands, vec![Summand::S1xS2, Summand::S1xS2]);
    }

    #[test]
    fn split_extract_unit_meridian_requires_zero_framings() {
        let d = FramedLinkDiagram::s1_sigma(1);
        let d = d.add_meridian(1, frame(1)).unwrap();
        let out = split_extract(&d, 1).unwrap();
        assert_eq!(out.components().len(), 2);
        assert!(out.crossings().is_empty());

        // With a nonzero framing on a tangle member the unit case must not
        // fire.
        let d = FramedLinkDiagram::borromean(frame(0), frame(0), frame(-1))
            .add_meridian(1, frame(1))
            .unwrap();
        assert!(matches!(
            split_extract(&d, 1),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn normalize_hopf_to_unknot() {
        let d = FramedLinkDiagram::hopf(frame(4), frame(1));
        let (out, trace) = normalize(&d).unwrap();
        assert!(out.components().is_empty() || out.components().len() == 1);
        // blow-down of the 1-framed circle, then nothing else to do: the
        // 3-framed unknot is terminal.
        assert_eq!(out, FramedLinkDiagram::unknot(frame(3)));
        assert!(trace.verify_chain());
    }

    #[test]
    fn normalize_terminal_diagram_identity_trace() {
        let d = FramedLinkDiagram::unknot(frame(5));
        let (out, trace) = normalize(&d).unwrap();
        assert_eq!(out, d);
        assert!(trace.steps.is_empty());
        assert!(trace.verify_chain());
    }

    #[test]
    fn normalize_clears_rationals() {
        let d = FramedLinkDiagram::unknot(frac(7, 3));
        let (out, trace) = normalize(&d).unwrap();
        assert!(out.all_integer_framings());
        assert!(trace.verify_chain());
        assert_eq!(
            h1_cleared(&d).unwrap(),
            first_homology(&out, Ambient::ThreeManifold).unwrap()
        );
    }
}
