//! Planning, execution and verification of surgery constructions.
//!
//! A target names a connected sum: an optional circle-times-surface factor
//! (`a = 1` with genus `g`), `b` copies of the circle times the 2-sphere,
//! and `c` lens spaces of orders `p_i >= 2`, together with the number `n` of
//! type-change loci wanted. The planner picks the starting genus
//! `h = a*g + b + c + n`, lays out the torus surgeries (symplectic-phase
//! surgeries first, the perturbation marker, then the type-change
//! surgeries), executes them on the standard diagram, normalizes the
//! resulting 3-manifold presentation and compares invariants against the
//! target, emitting a machine-checkable certificate.

use serde_json::{json, Value};

use crate::calculus::{normalize, MoveTrace};
use crate::diagram::CurveLabel;
use crate::error::{Error, Result};
use crate::invariants::{
    first_homology, recognize, AbelianGroup, Ambient, Confidence, RecognitionResult, Summand,
};
use crate::torus::{Phase, ProductFourManifold, TorusSurgerySpec};

/// A connected-sum target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TargetSpec {
    pub a: u8,
    pub g: u32,
    pub b: u32,
    pub c: u32,
    pub lens_orders: Vec<u64>,
    pub n: u32,
}

impl TargetSpec {
    pub fn new(a: u8, g: u32, b: u32, c: u32, lens_orders: Vec<u64>, n: u32) -> Result<Self> {
        if a > 1 {
            return Err(Error::InvalidTarget("a must be 0 or 1".into()));
        }
        if a == 0 && g != 0 {
            return Err(Error::InvalidTarget("genus g is used only when a = 1".into()));
        }
        if n < 1 {
            return Err(Error::InvalidTarget("at least one type-change locus (n >= 1)".into()));
        }
        if lens_orders.len() != c as usize {
            return Err(Error::InvalidTarget(format!(
                "expected {c} lens orders, got {}",
                lens_orders.len()
            )));
        }
        if lens_orders.iter().any(|p| *p < 2) {
            return Err(Error::InvalidTarget("lens orders must be at least 2".into()));
        }
        Ok(TargetSpec { a, g, b, c, lens_orders, n })
    }

    /// Expected first homology of the circle-product 4-manifold.
    pub fn expected_homology(&self) -> AbelianGroup {
        let rank = 1 + self.a as usize * (2 * self.g as usize + 1) + self.b as usize;
        let mut h = AbelianGroup::free(rank);
        for p in &self.lens_orders {
            h = h.direct_sum(&AbelianGroup::cyclic(*p));
        }
        h
    }

    /// Expected summand multiset of the 3-manifold factor (sphere summands
    /// are the identity and omitted). The genus-0 surface factor is the
    /// 2-sphere, so `a = 1, g = 0` contributes a circle-times-sphere piece.
    pub fn expected_summands(&self) -> Vec<SummandKey> {
        let mut out = Vec::new();
        if self.a == 1 {
            if self.g == 0 {
                out.push(SummandKey::S1xS2);
            } else {
                out.push(SummandKey::S1xSigma(self.g));
            }
        }
        for _ in 0..self.b {
            out.push(SummandKey::S1xS2);
        }
        for p in &self.lens_orders {
            out.push(SummandKey::Lens(*p));
        }
        out.sort_unstable();
        out
    }

    pub fn to_json(&self) -> Value {
        json!({
            "a": self.a,
            "b": self.b,
            "c": self.c,
            "g": self.g,
            "n": self.n,
            "p": self.lens_orders,
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |m: &str| Error::Serialization(format!("target: {m}"));
        let get = |k: &str| v.get(k).and_then(Value::as_u64);
        let p: Vec<u64> = match v.get("p") {
            None => Vec::new(),
            Some(Value::Null) => Vec::new(),
            Some(Value::Array(xs)) => xs
                .iter()
                .map(|x| x.as_u64().ok_or_else(|| bad("p entries must be integers")))
                .collect::<Result<_>>()?,
            Some(_) => return Err(bad("p must be an array")),
        };
        TargetSpec::new(
            get("a").ok_or_else(|| bad("a"))? as u8,
            get("g").unwrap_or(0) as u32,
            get("b").ok_or_else(|| bad("b"))? as u32,
            get("c").ok_or_else(|| bad("c"))? as u32,
            p,
            get("n").ok_or_else(|| bad("n"))? as u32,
        )
    }
}

/// Summand identity used for target comparison: lens spaces compare by
/// order (the q-class is orientation-sensitive), sphere summands absorb.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum SummandKey {
    S1xS2,
    S1xSigma(u32),
    Lens(u64),
}

fn summand_key(s: &Summand) -> Option<SummandKey> {
    match s {
        Summand::S3 => None,
        Summand::S1xS2 => Some(SummandKey::S1xS2),
        Summand::S1xSigma { genus: 0 } => Some(SummandKey::S1xS2),
        Summand::S1xSigma { genus } => Some(SummandKey::S1xSigma(*genus)),
        Summand::Lens { p, .. } => Some(SummandKey::Lens(*p)),
        Summand::Unknown { .. } => None,
    }
}

/// Starting genus for a target: `h = a*g + b + c + n`.
pub fn genus_formula(t: &TargetSpec) -> u32 {
    t.a as u32 * t.g + t.b + t.c + t.n
}

/// An ordered surgery schedule with the perturbation marker position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurgerySchedule {
    pub genus: u32,
    pub surgeries: Vec<TorusSurgerySpec>,
    pub marker_index: usize,
}

impl SurgerySchedule {
    /// Schedule invariants: marker splits the phases, curves are distinct.
    pub fn validate(&self) -> Result<()> {
        for (i, s) in self.surgeries.iter().enumerate() {
            let after_marker = i >= self.marker_index;
            if s.is_type_change() != after_marker {
                return Err(Error::PhaseViolation(format!(
                    "surgery {i} on {} is on the wrong side of the marker",
                    s.curve
                )));
            }
        }
        let mut curves: Vec<String> = self.surgeries.iter().map(|s| s.curve.to_string()).collect();
        curves.sort();
        let before = curves.len();
        curves.dedup();
        if curves.len() != before {
            return Err(Error::InvalidTarget("schedule repeats a surgery curve".into()));
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "format_version": "1",
            "genus": self.genus,
            "marker_index": self.marker_index,
            "surgeries": self.surgeries.iter().map(TorusSurgerySpec::to_json).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |m: &str| Error::Serialization(format!("schedule: {m}"));
        let genus = v.get("genus").and_then(Value::as_u64).ok_or_else(|| bad("genus"))? as u32;
        let marker_index = v
            .get("marker_index")
            .and_then(Value::as_u64)
            .ok_or_else(|| bad("marker_index"))? as usize;
        let mut surgeries = Vec::new();
        for s in v
            .get("surgeries")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("surgeries"))?
        {
            surgeries.push(TorusSurgerySpec::from_json(s)?);
        }
        let out = SurgerySchedule { genus, surgeries, marker_index };
        out.validate()?;
        Ok(out)
    }
}

/// Lay out the surgeries for a target.
///
/// With `t' = b + c` and offset `o = a*g`: the curves `a_{o+1}..a_{o+t'+n}`
/// receive `(1,0,r)` surgeries, the first `t'` with `r = 1` and the last `n`
/// with `r = 0`; the `(0,1,1)` surgeries run over `b_{t'}..b_{t'+n}` when
/// `a = 0` (reading `b_0` as `y`), or over `b_{o+t'+1}..b_{o+t'+n}` when the
/// surface block is present. Lens conversions replace `c` of the loops that
/// would otherwise stay free with `(0,p_i,1)` surgeries; the `y` loop is
/// converted only when no free surface loop is available (`a = 0, b = 0`).
pub fn make_schedule(t: &TargetSpec) -> Result<SurgerySchedule> {
    let h = genus_formula(t);
    let o = t.a as u32 * t.g;
    let tp = t.b + t.c;
    let mut symplectic: Vec<TorusSurgerySpec> = Vec::new();
    let mut type_change: Vec<TorusSurgerySpec> = Vec::new();

    // (1,0,r) surgeries on the a-curves.
    for i in 1..=(tp + t.n) {
        let idx = o + i;
        let r = if i <= tp { 1 } else { 0 };
        let spec = TorusSurgerySpec::new(CurveLabel::A(idx), 1, 0, r)?;
        if r == 0 {
            type_change.push(spec);
        } else {
            symplectic.push(spec);
        }
    }

    // (0,1,1) surgeries on the b-curves (or y).
    if t.a == 0 {
        if tp == 0 {
            symplectic.push(TorusSurgerySpec::new(CurveLabel::Y, 0, 1, 1)?);
            for j in 1..=t.n {
                symplectic.push(TorusSurgerySpec::new(CurveLabel::B(j), 0, 1, 1)?);
            }
        } else {
            for j in tp..=(tp + t.n) {
                symplectic.push(TorusSurgerySpec::new(CurveLabel::B(j), 0, 1, 1)?);
            }
        }
    } else {
        for j in (o + tp + 1)..=(o + tp + t.n) {
            symplectic.push(TorusSurgerySpec::new(CurveLabel::B(j), 0, 1, 1)?);
        }
    }

    // Lens conversions on otherwise-free loops.
    let mut convert: Vec<CurveLabel> = Vec::new();
    if t.c > 0 {
        if t.a == 1 {
            for j in (o + t.b + 1)..=(o + tp) {
                convert.push(CurveLabel::B(j));
            }
        } else if t.b >= 1 {
            for j in t.b..=(tp - 1) {
                convert.push(CurveLabel::B(j));
            }
        } else {
            for j in 1..=(tp - 1) {
                convert.push(CurveLabel::B(j));
            }
            convert.push(CurveLabel::Y);
        }
    }
    if convert.len() != t.lens_orders.len() {
        return Err(Error::InvalidTarget(format!(
            "lens conversion mismatch: {} loops for {} orders",
            convert.len(),
            t.lens_orders.len()
        )));
    }
    for (curve, p) in convert.into_iter().zip(&t.lens_orders) {
        symplectic.push(TorusSurgerySpec::new(curve, 0, *p as i64, 1)?);
    }

    let marker_index = symplectic.len();
    let mut surgeries = symplectic;
    surgeries.extend(type_change);
    let schedule = SurgerySchedule { genus: h, surgeries, marker_index };
    schedule.validate()?;
    Ok(schedule)
}

/// Execute a schedule starting from the standard genus-h diagram.
pub fn execute(s: &SurgerySchedule) -> Result<ProductFourManifold> {
    s.validate()?;
    let mut m = ProductFourManifold::torus_times_sigma(s.genus);
    for (i, spec) in s.surgeries.iter().enumerate() {
        if i == s.marker_index {
            m = m.mark_perturbation()?;
        }
        m = m.apply_torus_surgery(spec.clone())?;
    }
    if s.surgeries.len() == s.marker_index {
        m = m.mark_perturbation()?;
    }
    Ok(m)
}

/// Certificate verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Verified,
    AbelianOnly,
    Failed,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Verified => "verified",
            Verdict::AbelianOnly => "abelian-only",
            Verdict::Failed => "failed",
        }
    }
}

/// Machine-checkable record of a target verification.
#[derive(Clone, Debug)]
pub struct Certificate {
    pub target: TargetSpec,
    pub normalized_diagram: crate::diagram::FramedLinkDiagram,
    pub recognition: RecognitionResult,
    pub h1_expected: AbelianGroup,
    pub h1_computed: AbelianGroup,
    pub h1_match: bool,
    pub locus_expected: u32,
    pub locus_count: u32,
    pub locus_match: bool,
    pub parity_ok: bool,
    pub summands_match: bool,
    pub trace: MoveTrace,
    pub verdict: Verdict,
}

impl Certificate {
    pub fn to_json(&self) -> Value {
        json!({
            "format_version": "1",
            "h1": {
                "computed": self.h1_computed.to_json(),
                "expected": self.h1_expected.to_json(),
                "match": self.h1_match,
            },
            "loci": {
                "count": self.locus_count,
                "expected": self.locus_expected,
                "match": self.locus_match,
                "parity_ok": self.parity_ok,
            },
            "normalized_diagram": self.normalized_diagram.to_json(),
            "orientation_note":
                "lens summands are identified by order; the q-class is fixed only up to orientation",
            "recognition": self.recognition.to_json(),
            "summands_match": self.summands_match,
            "target": self.target.to_json(),
            "trace": {
                "final_hash": self.trace.final_diagram.digest(),
                "initial_hash": self.trace.initial.digest(),
                "steps": self.trace.steps.iter().map(|s| s.to_json()).collect::<Vec<_>>(),
            },
            "verdict": self.verdict.as_str(),
        })
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("certificate serializes")
    }
}

/// Normalize the 3-manifold factor, recognize its summands and compare all
/// invariants against the target.
pub fn verify(m: &ProductFourManifold, t: &TargetSpec) -> Result<Certificate> {
    let h1_expected = t.expected_homology();
    let (nf, trace) = normalize(&m.three_manifold)?;
    let h1_computed = first_homology(&nf, Ambient::ProductWithCircle)?;
    let recognition = recognize(&nf)?;

    let h1_match = h1_expected == h1_computed;
    let locus_count = m.ledger.type_change_count() as u32;
    let locus_match = locus_count == t.n;
    let parity_ok = m.ledger.check_parity();

    let expected = t.expected_summands();
    let mut got: Vec<SummandKey> = Vec::new();
    let mut unknowns = false;
    for s in &recognition.summands {
        match summand_key(s) {
            Some(k) => got.push(k),
            None if matches!(s, Summand::S3) => {}
            None => unknowns = true,
        }
    }
    got.sort_unstable();
    let summands_match = !unknowns && got == expected;

    let verdict = if !h1_match || !locus_match || !parity_ok {
        Verdict::Failed
    } else if summands_match && recognition.confidence == Confidence::Certified {
        Verdict::Verified
    } else {
        Verdict::AbelianOnly
    };

    Ok(Certificate {
        target: t.clone(),
        normalized_diagram: nf,
        recognition,
        h1_expected,
        h1_computed,
        h1_match,
        locus_expected: t.n,
        locus_count,
        locus_match,
        parity_ok,
        summands_match,
        trace,
        verdict,
    })
}

/// Plan, execute and verify in one call.
pub fn construct_and_verify(t: &TargetSpec) -> Result<Certificate> {
    let schedule = make_schedule(t)?;
    let m = execute(&schedule)?;
    verify(&m, t)
}

/// Phase tag of a scheduled surgery (mirrors the ledger phases).
pub fn phase_of(s: &TorusSurgerySpec) -> Phase {
    if s.is_type_change() {
        Phase::TypeChange
    } else {
        Phase::Symplectic
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariants::Ambient;

    fn target(a: u8, g: u32, b: u32, c: u32, p: &[u64], n: u32) -> TargetSpec {
        TargetSpec::new(a, g, b, c, p.to_vec(), n).unwrap()
    }

    #[test]
    fn genus_formula_cases() {
        // Surface factor alone: h = g + n.
        assert_eq!(genus_formula(&target(1, 4, 0, 0, &[], 2)), 6);
        // Sphere products alone: h = t + n.
        assert_eq!(genus_formula(&target(0, 0, 3, 0, &[], 1)), 4);
        // Mixed with a lens space: h = b + c + n.
        assert_eq!(genus_formula(&target(0, 0, 1, 1, &[2], 1)), 3);
    }

    #[test]
    fn genus_formula_monotone() {
        let base = target(1, 1, 1, 1, &[3], 1);
        let h0 = genus_formula(&base);
        assert!(genus_formula(&target(1, 2, 1, 1, &[3], 1)) > h0);
        assert!(genus_formula(&target(1, 1, 2, 1, &[3], 1)) > h0);
        assert!(genus_formula(&target(1, 1, 1, 2, &[3, 3], 1)) > h0);
        assert!(genus_formula(&target(1, 1, 1, 1, &[3], 2)) > h0);
    }

    #[test]
    fn target_validation() {
        assert!(TargetSpec::new(0, 0, 0, 0, vec![], 0).is_err());
        assert!(TargetSpec::new(0, 0, 0, 1, vec![1], 1).is_err());
        assert!(TargetSpec::new(0, 0, 0, 1, vec![], 1).is_err());
        assert!(TargetSpec::new(2, 0, 0, 0, vec![], 1).is_err());
        assert!(TargetSpec::new(0, 3, 0, 0, vec![], 1).is_err());
    }

    #[test]
    fn schedule_pure_surface_target() {
        // One type-change locus on the genus-2 surface block: h = 3, two
        // surgeries on the third handle pair.
        let t = target(1, 2, 0, 0, &[], 1);
        let s = make_schedule(&t).unwrap();
        assert_eq!(s.genus, 3);
        assert_eq!(s.surgeries.len(), 2);
        assert_eq!(s.marker_index, 1);
        assert_eq!(s.surgeries[0].curve, CurveLabel::B(3));
        assert_eq!((s.surgeries[0].q, s.surgeries[0].r), (1, 1));
        assert_eq!(s.surgeries[1].curve, CurveLabel::A(3));
        assert_eq!((s.surgeries[1].p, s.surgeries[1].r), (1, 0));
    }

    #[test]
    fn schedule_sphere_products() {
        // b = 2, n = 1: h = 3; a-surgeries on a1..a3 with r = 1,1,0 and
        // b-surgeries on b2, b3.
        let t = target(0, 0, 2, 0, &[], 1);
        let s = make_schedule(&t).unwrap();
        assert_eq!(s.genus, 3);
        let names: Vec<String> = s.surgeries.iter().map(|x| x.curve.to_string()).collect();
        assert_eq!(names, vec!["a1", "a2", "b2", "b3", "a3"]);
        assert_eq!(s.marker_index, 4);
    }

    #[test]
    fn schedule_t_zero_uses_y() {
        let t = target(0, 0, 0, 0, &[], 1);
        let s = make_schedule(&t).unwrap();
        assert_eq!(s.genus, 1);
        let names: Vec<String> = s.surgeries.iter().map(|x| x.curve.to_string()).collect();
        assert_eq!(names, vec!["y", "b1", "a1"]);
    }

    #[test]
    fn schedule_never_names_x() {
        for t in [
            target(0, 0, 2, 1, &[3], 2),
            target(1, 3, 0, 2, &[2, 5], 1),
            target(0, 0, 0, 2, &[4, 4], 3),
        ] {
            let s = make_schedule(&t).unwrap();
            assert!(s.surgeries.iter().all(|x| x.curve != CurveLabel::X));
        }
    }

    #[test]
    fn execute_t_zero_case() {
        let t = target(0, 0, 0, 0, &[], 1);
        let m = execute(&make_schedule(&t).unwrap()).unwrap();
        assert_eq!(m.three_manifold.components().len(), 6);
        let h1 = first_homology(&m.three_manifold, Ambient::ThreeManifold).unwrap();
        assert_eq!(h1, AbelianGroup::trivial());
        assert_eq!(m.ledger.type_change_count(), 1);
    }

    #[test]
    fn execute_untouched_block_survives() {
        let t = target(1, 2, 0, 0, &[], 1);
        let m = execute(&make_schedule(&t).unwrap()).unwrap();
        let h1 = first_homology(&m.three_manifold, Ambient::ThreeManifold).unwrap();
        assert_eq!(h1, AbelianGroup::free(5));
        assert_eq!(m.ledger.type_change_count(), 1);
    }

    #[test]
    fn verify_sphere_products() {
        let t = target(0, 0, 2, 0, &[], 3);
        let cert = construct_and_verify(&t).unwrap();
        assert_eq!(cert.h1_expected, AbelianGroup::free(3));
        assert!(cert.h1_match, "{}", cert.to_json_string());
        assert_eq!(cert.verdict, Verdict::Verified, "{}", cert.to_json_string());
        assert!(cert.trace.verify_chain());
    }

    #[test]
    fn verify_lens_target() {
        let t = target(0, 0, 0, 1, &[2], 1);
        let cert = construct_and_verify(&t).unwrap();
        assert_eq!(
            cert.h1_expected,
            AbelianGroup { rank: 1, torsion: vec![2] }
        );
        assert_eq!(cert.verdict, Verdict::Verified, "{}", cert.to_json_string());
    }

    #[test]
    fn verify_torus_block() {
        let t = target(1, 1, 0, 0, &[], 2);
        let cert = construct_and_verify(&t).unwrap();
        assert_eq!(cert.h1_expected, AbelianGroup::free(4));
        assert_eq!(cert.verdict, Verdict::Verified, "{}", cert.to_json_string());
    }

    #[test]
    fn verify_detects_wrong_target() {
        let t = target(0, 0, 2, 0, &[], 1);
        let m = execute(&make_schedule(&t).unwrap()).unwrap();
        let wrong = target(0, 0, 1, 0, &[], 1);
        let cert = verify(&m, &wrong).unwrap();
        assert_eq!(cert.verdict, Verdict::Failed);
        assert!(!cert.h1_match);
    }

    #[test]
    fn schedule_json_round_trip() {
        let t = target(1, 2, 1, 1, &[5], 2);
        let s = make_schedule(&t).unwrap();
        let back = SurgerySchedule::from_json(&s.to_json()).unwrap();
        assert_eq!(s, back);
        let tv = TargetSpec::from_json(&t.to_json()).unwrap();
        assert_eq!(t, tv);
    }
}
