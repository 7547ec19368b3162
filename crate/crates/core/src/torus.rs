//! The 4-manifold layer: products of a circle with a surgered 3-manifold.
//!
//! A `(p, q, r)` torus surgery along a curve carried by one of the standard
//! tori acts on the circle-product 4-manifold as the product of the circle
//! with a Dehn surgery on the 3-manifold factor. The translation attaches a
//! meridian with rational coefficient `r/l` to the curve's diagram
//! component, where `l` is the coefficient multiplying the curve's
//! generator. Surgeries with `r = 0` create a type-change locus and are
//! admissible only after the perturbation marker; surgeries with `r != 0`
//! belong to the symplectic phase. The ledger records every locus (homology
//! class flag, self-intersection, type jump) and the characteristic numbers
//! of the ambient 4-manifold.

use num_rational::Rational64;
use serde_json::{json, Value};

use crate::diagram::{ComponentId, CurveLabel, FramedLinkDiagram};
use crate::error::{Error, Result};

/// Which standard torus carries the surgery curve.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TorusKind {
    /// The torus spanned by the two circle directions; carries `y`.
    XyTorus,
    /// A torus spanned by the `y` direction and a surface curve; carries
    /// `a_i` or `b_i`.
    YCurveTorus,
}

/// A `(p, q, r)` torus surgery along the curve carrying a named generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusSurgerySpec {
    pub curve: CurveLabel,
    pub p: i64,
    pub q: i64,
    pub r: i64,
    pub kind: TorusKind,
}

impl TorusSurgerySpec {
    pub fn new(curve: CurveLabel, p: i64, q: i64, r: i64) -> Result<Self> {
        if curve == CurveLabel::X {
            return Err(Error::InvalidTarget(
                "the x loop is never a surgery curve".into(),
            ));
        }
        if p == 0 && q == 0 {
            return Err(Error::InvalidTarget("(p, q) must not be (0, 0)".into()));
        }
        if p != 0 && q != 0 && num_integer::gcd(p, q) != 1 {
            return Err(Error::InvalidTarget(format!(
                "surgery curve coefficients ({p}, {q}) are not coprime"
            )));
        }
        let kind = match curve {
            CurveLabel::Y => TorusKind::XyTorus,
            _ => TorusKind::YCurveTorus,
        };
        Ok(TorusSurgerySpec { curve, p, q, r, kind })
    }

    /// The coefficient multiplying the named curve's generator. Mixed
    /// surgeries (both p and q nonzero) are outside the Dehn translation.
    pub fn loop_coefficient(&self) -> Result<i64> {
        match (self.p, self.q) {
            (l, 0) => Ok(l),
            (0, l) => Ok(l),
            _ => Err(Error::InvalidTarget(format!(
                "({}, {}, {}) has two nonzero curve coefficients; not translatable",
                self.p, self.q, self.r
            ))),
        }
    }

    pub fn is_type_change(&self) -> bool {
        self.r == 0
    }

    pub fn to_json(&self) -> Value {
        json!({
            "curve": self.curve.to_string(),
            "kind": match self.kind {
                TorusKind::XyTorus => "xy-torus",
                TorusKind::YCurveTorus => "y-curve-torus",
            },
            "p": self.p,
            "q": self.q,
            "r": self.r,
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |m: &str| Error::Serialization(format!("surgery spec: {m}"));
        let curve = v
            .get("curve")
            .and_then(Value::as_str)
            .and_then(CurveLabel::parse)
            .ok_or_else(|| bad("curve"))?;
        let p = v.get("p").and_then(Value::as_i64).ok_or_else(|| bad("p"))?;
        let q = v.get("q").and_then(Value::as_i64).ok_or_else(|| bad("q"))?;
        let r = v.get("r").and_then(Value::as_i64).ok_or_else(|| bad("r"))?;
        TorusSurgerySpec::new(curve, p, q, r)
    }
}

/// Homology-class status of a type-change locus.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LocusClass {
    Nullhomologous,
    BlownUpNontrivial,
}

/// Bookkeeping for one type-change locus (the core torus of an `r = 0`
/// surgery).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocusRecord {
    pub id: u32,
    pub source: TorusSurgerySpec,
    pub class: LocusClass,
    pub self_intersection: i64,
    pub type_jump: (u32, u32),
}

impl LocusRecord {
    pub fn to_json(&self) -> Value {
        json!({
            "class": match self.class {
                LocusClass::Nullhomologous => "nullhomologous",
                LocusClass::BlownUpNontrivial => "blown-up-nontrivial",
            },
            "id": self.id,
            "jump": [self.type_jump.0, self.type_jump.1],
            "self_intersection": self.self_intersection,
            "source": self.source.to_json(),
        })
    }
}

/// Phase of a surgery in the construction schedule.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Phase {
    Symplectic,
    TypeChange,
}

/// Characteristic numbers of the ambient closed 4-manifold.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CharNumbers {
    pub euler: i64,
    pub signature: i64,
}

impl CharNumbers {
    pub const fn new(euler: i64, signature: i64) -> Self {
        CharNumbers { euler, signature }
    }

    /// A circle-product 4-manifold.
    pub const fn circle_product() -> Self {
        CharNumbers::new(0, 0)
    }

    /// The complex projective plane.
    pub const fn cp2() -> Self {
        CharNumbers::new(3, 1)
    }

    /// The complex projective plane with reversed orientation.
    pub const fn cp2_bar() -> Self {
        CharNumbers::new(3, -1)
    }

    /// The elliptic surface E(n).
    pub const fn elliptic_surface(n: i64) -> Self {
        CharNumbers::new(12 * n, -8 * n)
    }

    pub fn to_json(&self) -> Value {
        json!({ "euler": self.euler, "signature": self.signature })
    }
}

/// Fiber sum along a surface with the given Euler characteristic:
/// `chi = chi_a + chi_b - 2 chi(F)`, signatures add (Novikov additivity).
pub fn char_fiber_sum(a: CharNumbers, b: CharNumbers, fiber_euler: i64) -> CharNumbers {
    CharNumbers::new(a.euler + b.euler - 2 * fiber_euler, a.signature + b.signature)
}

/// Connected sum: `chi = chi_a + chi_b - 2`, signatures add.
pub fn char_connected_sum(a: CharNumbers, b: CharNumbers) -> CharNumbers {
    CharNumbers::new(a.euler + b.euler - 2, a.signature + b.signature)
}

/// Connected sum of `k` copies of one summand.
pub fn char_connected_sum_copies(m: CharNumbers, k: i64) -> Option<CharNumbers> {
    if k <= 0 {
        return None;
    }
    Some(CharNumbers::new(
        k * m.euler - 2 * (k - 1),
        k * m.signature,
    ))
}

/// Whether E(n) has the characteristic numbers of the connected sum of
/// `2n - 1` projective planes and `10n - 1` reversed ones.
pub fn en_decomposition_check(n: i64) -> bool {
    if n < 1 {
        return false;
    }
    let lhs = CharNumbers::elliptic_surface(n);
    let planes = char_connected_sum_copies(CharNumbers::cp2(), 2 * n - 1);
    let bars = char_connected_sum_copies(CharNumbers::cp2_bar(), 10 * n - 1);
    match (planes, bars) {
        (Some(a), Some(b)) => char_connected_sum(a, b) == lhs,
        _ => false,
    }
}

/// Per-construction ledger: loci, surgery history with phases, perturbation
/// marker.
#[derive(Clone, Debug, Default)]
pub struct GcsLedger {
    pub loci: Vec<LocusRecord>,
    pub history: Vec<(TorusSurgerySpec, Phase)>,
    pub perturbation_marker: Option<usize>,
}

impl GcsLedger {
    pub fn type_change_count(&self) -> usize {
        self.loci.len()
    }

    /// Every locus jump stays within one parity class.
    pub fn check_parity(&self) -> bool {
        self.loci
            .iter()
            .all(|l| (l.type_jump.0 % 2) == (l.type_jump.1 % 2))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "loci": self.loci.iter().map(LocusRecord::to_json).collect::<Vec<_>>(),
            "perturbation_marker": self.perturbation_marker,
            "phases": self
                .history
                .iter()
                .map(|(s, phase)| {
                    json!({
                        "phase": match phase {
                            Phase::Symplectic => "symplectic",
                            Phase::TypeChange => "type-change",
                        },
                        "surgery": s.to_json(),
                    })
                })
                .collect::<Vec<_>>(),
        })
    }
}

/// Standalone parity check, usable on any ledger.
pub fn check_parity(ledger: &GcsLedger) -> bool {
    ledger.check_parity()
}

/// A product of the circle with a surgered 3-manifold, with its ledger and
/// characteristic numbers.
#[derive(Clone, Debug)]
pub struct ProductFourManifold {
    pub circle: CurveLabel,
    pub three_manifold: FramedLinkDiagram,
    pub ledger: GcsLedger,
    pub char_numbers: CharNumbers,
}

impl ProductFourManifold {
    /// Wrap a surgery presentation of the 3-manifold factor.
    pub fn new(three_manifold: FramedLinkDiagram) -> Self {
        ProductFourManifold {
            circle: CurveLabel::X,
            three_manifold,
            ledger: GcsLedger::default(),
            char_numbers: CharNumbers::circle_product(),
        }
    }

    /// The product with the circle of the standard genus-h surface product.
    pub fn torus_times_sigma(h: u32) -> Self {
        Self::new(FramedLinkDiagram::s1_sigma(h))
    }

    fn curve_component(&self, curve: CurveLabel) -> Result<ComponentId> {
        self.three_manifold
            .find_curve(curve)
            .ok_or_else(|| Error::UnknownCurve(curve.to_string()))
    }

    /// Set the perturbation marker, after which type-change surgeries are
    /// admissible. Idempotent.
    pub fn mark_perturbation(mut self) -> Result<Self> {
        if self.ledger.perturbation_marker.is_none() {
            self.ledger.perturbation_marker = Some(self.ledger.history.len());
        }
        Ok(self)
    }

    /// Apply a torus surgery via the Dehn translation. Type-change
    /// surgeries require the marker; every surgery leaves the
    /// characteristic numbers unchanged.
    pub fn apply_torus_surgery(mut self, spec: TorusSurgerySpec) -> Result<Self> {
        let l = spec.loop_coefficient()?;
        if l == 0 {
            return Err(Error::InvalidTarget(
                "loop coefficient must be nonzero for the Dehn translation".into(),
            ));
        }
        let comp = self.curve_component(spec.curve)?;
        let phase = if spec.is_type_change() {
            if self.ledger.perturbation_marker.is_none() {
                return Err(Error::PhaseViolation(format!(
                    "type-change surgery on {} before the perturbation marker",
                    spec.curve
                )));
            }
            Phase::TypeChange
        } else {
            Phase::Symplectic
        };
        let framing = Rational64::new(spec.r, l);
        self.three_manifold = self.three_manifold.add_meridian(comp, framing)?;
        if phase == Phase::TypeChange {
            let id = self.ledger.loci.len() as u32;
            self.ledger.loci.push(LocusRecord {
                id,
                source: spec.clone(),
                class: LocusClass::Nullhomologous,
                self_intersection: 0,
                type_jump: (0, 2),
            });
        }
        self.ledger.history.push((spec, phase));
        Ok(self)
    }

    /// Blow up a point on a type-change locus: the locus class becomes
    /// nontrivial with self-intersection -1; the ambient manifold gains
    /// `(+1, -1)` in `(euler, signature)`. Other loci are untouched.
    pub fn blow_up_locus(mut self, locus: u32) -> Result<Self> {
        let rec = self
            .ledger
            .loci
            .iter_mut()
            .find(|l| l.id == locus)
            .ok_or(Error::UnknownLocus(locus))?;
        rec.class = LocusClass::BlownUpNontrivial;
        rec.self_intersection = -1;
        self.char_numbers.euler += 1;
        self.char_numbers.signature -= 1;
        Ok(self)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "char": self.char_numbers.to_json(),
            "circle": self.circle.to_string(),
            "format_version": "1",
            "ledger": self.ledger.to_json(),
            "three_manifold": self.three_manifold.to_json(),
        })
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("manifold serializes")
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |m: &str| Error::Serialization(format!("manifold: {m}"));
        let three_manifold = FramedLinkDiagram::from_json(
            v.get("three_manifold").ok_or_else(|| bad("three_manifold"))?,
        )?;
        let ledger_v = v.get("ledger").ok_or_else(|| bad("ledger"))?;
        let mut ledger = GcsLedger::default();
        ledger.perturbation_marker = ledger_v
            .get("perturbation_marker")
            .and_then(Value::as_u64)
            .map(|x| x as usize);
        for entry in ledger_v
            .get("phases")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("phases"))?
        {
            let spec =
                TorusSurgerySpec::from_json(entry.get("surgery").ok_or_else(|| bad("surgery"))?)?;
            let phase = match entry.get("phase").and_then(Value::as_str) {
                Some("symplectic") => Phase::Symplectic,
                Some("type-change") => Phase::TypeChange,
                _ => return Err(bad("phase")),
            };
            ledger.history.push((spec, phase));
        }
        for entry in ledger_v
            .get("loci")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("loci"))?
        {
            let id = entry.get("id").and_then(Value::as_u64).ok_or_else(|| bad("locus id"))? as u32;
            let source =
                TorusSurgerySpec::from_json(entry.get("source").ok_or_else(|| bad("locus source"))?)?;
            let class = match entry.get("class").and_then(Value::as_str) {
                Some("nullhomologous") => LocusClass::Nullhomologous,
                Some("blown-up-nontrivial") => LocusClass::BlownUpNontrivial,
                _ => return Err(bad("locus class")),
            };
            let self_intersection = entry
                .get("self_intersection")
                .and_then(Value::as_i64)
                .ok_or_else(|| bad("self_intersection"))?;
            let jump = entry
                .get("jump")
                .and_then(Value::as_array)
                .ok_or_else(|| bad("jump"))?;
            let type_jump = (
                jump.first().and_then(Value::as_u64).ok_or_else(|| bad("jump"))? as u32,
                jump.get(1).and_then(Value::as_u64).ok_or_else(|| bad("jump"))? as u32,
            );
            ledger.loci.push(LocusRecord {
                id,
                source,
                class,
                self_intersection,
                type_jump,
            });
        }
        let char_v = v.get("char").ok_or_else(|| bad("char"))?;
        let char_numbers = CharNumbers::new(
            char_v.get("euler").and_then(Value::as_i64).ok_or_else(|| bad("euler"))?,
            char_v
                .get("signature")
                .and_then(Value::as_i64)
                .ok_or_else(|| bad("signature"))?,
        );
        Ok(ProductFourManifold {
            circle: CurveLabel::X,
            three_manifold,
            ledger,
            char_numbers,
        })
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(s).map_err(|e| Error::Serialization(e.to_string()))?;
        Self::from_json(&v)
    }
}
