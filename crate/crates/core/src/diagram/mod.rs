//! Framed links in the 3-sphere as planar-diagram codes.
//!
//! A diagram is a set of components (each an oriented circle carrying a
//! rational surgery coefficient and an optional curve label), a list of
//! crossings, and an assignment of arcs to components. Arcs are the edges of
//! the underlying 4-valent graph: a component passing through k crossing
//! slots is cut into k arcs, and every arc id occurs exactly twice across the
//! crossing list, once as a start and once as an end. Components that meet no
//! crossing are recorded as crossing-free loops.
//!
//! Crossing convention: the four arcs are listed counterclockwise starting
//! from the incoming under-arc, so slot 0 is the under-strand entering, slot
//! 2 the under-strand leaving. The sign is the usual orientation sign; for a
//! positive crossing the over-strand runs from slot 3 to slot 1, for a
//! negative one from slot 1 to slot 3.
//!
//! All builders emit unknotted components with the positive-clasp convention,
//! so linking numbers of builder output are nonnegative unless a move
//! introduces a negative twist.

pub mod assemble;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_rational::Rational64;
use num_traits::Zero;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use assemble::{Assembler, Pattern};

pub type ArcId = u32;
pub type ComponentId = u32;

/// A crossing: four arc ids in counterclockwise order starting from the
/// incoming under-arc, plus the orientation sign.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Crossing {
    pub arcs: [ArcId; 4],
    pub sign: i8,
}

impl Crossing {
    pub fn under_in(&self) -> ArcId {
        self.arcs[0]
    }

    pub fn under_out(&self) -> ArcId {
        self.arcs[2]
    }

    pub fn over_in(&self) -> ArcId {
        if self.sign > 0 {
            self.arcs[3]
        } else {
            self.arcs[1]
        }
    }

    pub fn over_out(&self) -> ArcId {
        if self.sign > 0 {
            self.arcs[1]
        } else {
            self.arcs[3]
        }
    }
}

/// Curve names carried by components of the standard diagrams.
///
/// `x` is reserved: it generates the circle factor of the product 4-manifold
/// and never appears as a diagram component.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CurveLabel {
    X,
    Y,
    A(u32),
    B(u32),
}

impl CurveLabel {
    pub fn parse(s: &str) -> Option<CurveLabel> {
        match s {
            "x" => Some(CurveLabel::X),
            "y" => Some(CurveLabel::Y),
            _ => {
                let (kind, idx) = s.split_at(1);
                let i: u32 = idx.parse().ok()?;
                if i == 0 {
                    return None;
                }
                match kind {
                    "a" => Some(CurveLabel::A(i)),
                    "b" => Some(CurveLabel::B(i)),
                    _ => None,
                }
            }
        }
    }
}

impl fmt::Display for CurveLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurveLabel::X => write!(f, "x"),
            CurveLabel::Y => write!(f, "y"),
            CurveLabel::A(i) => write!(f, "a{i}"),
            CurveLabel::B(i) => write!(f, "b{i}"),
        }
    }
}

/// Per-component data: id, exact rational framing, optional label.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentData {
    pub id: ComponentId,
    pub framing: Rational64,
    pub label: Option<String>,
}

/// A framed link diagram.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FramedLinkDiagram {
    pub(crate) components: Vec<ComponentData>,
    pub(crate) crossings: Vec<Crossing>,
    pub(crate) arcs: BTreeMap<ArcId, ComponentId>,
    pub(crate) free_loops: BTreeSet<ComponentId>,
}

/// Outcome of [`FramedLinkDiagram::validate`]; collects every violation
/// rather than stopping at the first.
#[derive(Clone, Debug, Default)]
pub struct ValidationReport {
    pub violations: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl FramedLinkDiagram {
    /// Empty diagram: surgery on nothing, i.e. the 3-sphere.
    pub fn empty() -> Self {
        FramedLinkDiagram {
            components: Vec::new(),
            crossings: Vec::new(),
            arcs: BTreeMap::new(),
            free_loops: BTreeSet::new(),
        }
    }

    /// A crossing-free unknot with the given framing.
    pub fn unknot(framing: Rational64) -> Self {
        let mut a = Assembler::new();
        a.component(framing, None);
        a.assemble()
    }

    /// Hopf link with framings `f1`, `f2`; two positive crossings, linking
    /// number +1.
    pub fn hopf(f1: Rational64, f2: Rational64) -> Self {
        let mut a = Assembler::new();
        let c0 = a.component(f1, None);
        let c1 = a.component(f2, None);
        a.clasp(c0, c1, 1);
        a.assemble()
    }

    /// Linear chain of unknots with consecutive components Hopf-linked
    /// (linking number +1). One-element chains coincide with `unknot`.
    pub fn chain(framings: &[Rational64]) -> Result<Self> {
        if framings.is_empty() {
            return Err(Error::Precondition("chain requires at least one framing".into()));
        }
        let mut a = Assembler::new();
        let ids: Vec<ComponentId> = framings.iter().map(|f| a.component(*f, None)).collect();
        for w in ids.windows(2) {
            a.clasp(w[0], w[1], 1);
        }
        Ok(a.assemble())
    }

    /// Borromean rings with the given framings: six crossings, all pairwise
    /// linking numbers zero.
    pub fn borromean(f1: Rational64, f2: Rational64, f3: Rational64) -> Self {
        let mut a = Assembler::new();
        let u = a.component(f1, None);
        let v = a.component(f2, None);
        let w = a.component(f3, None);
        a.triple(u, v, w);
        a.assemble()
    }

    /// Standard surgery presentation of the product of a circle with a
    /// closed orientable surface of genus `h`: a 0-framed `y` component and,
    /// for each handle, a pair `(a_i, b_i)` forming a Borromean triple with
    /// `y`. All framings are 0 and all pairwise linking numbers vanish.
    ///
    /// For `h = 0` this is the single 0-framed unknot.
    pub fn s1_sigma(h: u32) -> Self {
        let mut a = Assembler::new();
        let y = a.component(Rational64::zero(), Some(CurveLabel::Y.to_string()));
        for i in 1..=h {
            let ai = a.component(Rational64::zero(), Some(CurveLabel::A(i).to_string()));
            let bi = a.component(Rational64::zero(), Some(CurveLabel::B(i).to_string()));
            a.triple(y, ai, bi);
        }
        a.assemble()
    }

    pub fn components(&self) -> &[ComponentData] {
        &self.components
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    pub fn arcs(&self) -> &BTreeMap<ArcId, ComponentId> {
        &self.arcs
    }

    pub fn component(&self, id: ComponentId) -> Result<&ComponentData> {
        self.components
            .iter()
            .find(|c| c.id == id)
            .ok_or(Error::UnknownComponent(id))
    }

    pub fn component_ids(&self) -> Vec<ComponentId> {
        self.components.iter().map(|c| c.id).collect()
    }

    /// Number of crossing-free loops a component is drawn with (0 or 1).
    pub fn zero_crossing_loops(&self, id: ComponentId) -> u32 {
        u32::from(self.free_loops.contains(&id))
    }

    pub fn find_label(&self, label: &str) -> Option<ComponentId> {
        self.components
            .iter()
            .find(|c| c.label.as_deref() == Some(label))
            .map(|c| c.id)
    }

    pub fn find_curve(&self, curve: CurveLabel) -> Option<ComponentId> {
        self.find_label(&curve.to_string())
    }

    /// True when every framing is an integer.
    pub fn all_integer_framings(&self) -> bool {
        self.components.iter().all(|c| c.framing.is_integer())
    }

    /// Indices of crossings in which the component participates.
    pub fn crossings_of(&self, id: ComponentId) -> Vec<usize> {
        self.crossings
            .iter()
            .enumerate()
            .filter(|(_, x)| {
                x.arcs.iter().any(|a| self.arcs.get(a) == Some(&id))
            })
            .map(|(i, _)| i)
            .collect()
    }

    /// Sum of signs over crossings where both strands belong to `id`.
    pub fn writhe(&self, id: ComponentId) -> i64 {
        self.crossings
            .iter()
            .filter(|x| {
                self.arcs.get(&x.under_in()) == Some(&id) && self.arcs.get(&x.over_in()) == Some(&id)
            })
            .map(|x| i64::from(x.sign))
            .sum()
    }

    /// Linking number of two distinct components: half the signed crossing
    /// count between them. Always an integer for a valid diagram.
    pub fn linking_number(&self, i: ComponentId, j: ComponentId) -> i64 {
        debug_assert_ne!(i, j);
        let mut total: i64 = 0;
        for x in &self.crossings {
            let under = self.arcs.get(&x.under_in()).copied();
            let over = self.arcs.get(&x.over_in()).copied();
            if (under == Some(i) && over == Some(j)) || (under == Some(j) && over == Some(i)) {
                total += i64::from(x.sign);
            }
        }
        debug_assert_eq!(total % 2, 0, "odd signed crossing count between components");
        total / 2
    }

    /// Linking via only the crossings where `i` runs under `j`. Equals
    /// [`linking_number`](Self::linking_number) for valid diagrams and serves
    /// as an independent route in tests.
    pub fn linking_number_under_over(&self, i: ComponentId, j: ComponentId) -> i64 {
        self.crossings
            .iter()
            .filter(|x| {
                self.arcs.get(&x.under_in()) == Some(&i) && self.arcs.get(&x.over_in()) == Some(&j)
            })
            .map(|x| i64::from(x.sign))
            .sum()
    }

    /// The linking matrix: framings on the diagonal, pairwise linking numbers
    /// off it. Rows and columns follow component order (sorted by id).
    pub fn linking_matrix(&self) -> Result<Vec<Vec<Rational64>>> {
        let report = self.validate();
        if !report.is_valid() {
            return Err(Error::MalformedDiagram(report.violations.join("; ")));
        }
        let n = self.components.len();
        let mut m = vec![vec![Rational64::zero(); n]; n];
        for (i, ci) in self.components.iter().enumerate() {
            m[i][i] = ci.framing;
            for (j, cj) in self.components.iter().enumerate().skip(i + 1) {
                let lk = Rational64::from_integer(self.linking_number(ci.id, cj.id));
                m[i][j] = lk;
                m[j][i] = lk;
            }
        }
        Ok(m)
    }

    /// Integer linking matrix; errors when a rational framing is present.
    pub fn integer_linking_matrix(&self) -> Result<Vec<Vec<i64>>> {
        let m = self.linking_matrix()?;
        let mut out = Vec::with_capacity(m.len());
        for row in &m {
            let mut r = Vec::with_capacity(row.len());
            for v in row {
                if !v.is_integer() {
                    return Err(Error::RationalFraming(v.to_string()));
                }
                r.push(v.to_integer());
            }
            out.push(r);
        }
        Ok(out)
    }

    /// Check arc pairing, component partition and crossing consistency.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        let mut seen = BTreeSet::new();
        for c in &self.components {
            if !seen.insert(c.id) {
                report.violations.push(format!("duplicate component id {}", c.id));
            }
            if c.framing.denom().is_zero() {
                report.violations.push(format!("component {}: zero denominator", c.id));
            }
            if c.label.as_deref() == Some("x") {
                report
                    .violations
                    .push("label x is reserved for the circle factor".into());
            }
        }

        // Arc slot bookkeeping: each arc exactly one start and one end.
        let mut starts: BTreeMap<ArcId, u32> = BTreeMap::new();
        let mut ends: BTreeMap<ArcId, u32> = BTreeMap::new();
        for (k, x) in self.crossings.iter().enumerate() {
            if x.sign != 1 && x.sign != -1 {
                report.violations.push(format!("crossing {k}: sign {} not ±1", x.sign));
                continue;
            }
            for a in &x.arcs {
                if !self.arcs.contains_key(a) {
                    report
                        .violations
                        .push(format!("crossing {k}: unknown arc {a}"));
                }
            }
            *ends.entry(x.under_in()).or_default() += 1;
            *starts.entry(x.under_out()).or_default() += 1;
            *ends.entry(x.over_in()).or_default() += 1;
            *starts.entry(x.over_out()).or_default() += 1;

            let ui = self.arcs.get(&x.under_in());
            let uo = self.arcs.get(&x.under_out());
            if ui.is_some() && uo.is_some() && ui != uo {
                report
                    .violations
                    .push(format!("crossing {k}: under-strand switches component"));
            }
            let oi = self.arcs.get(&x.over_in());
            let oo = self.arcs.get(&x.over_out());
            if oi.is_some() && oo.is_some() && oi != oo {
                report
                    .violations
                    .push(format!("crossing {k}: over-strand switches component"));
            }
        }
        for (arc, comp) in &self.arcs {
            let s = starts.get(arc).copied().unwrap_or(0);
            let e = ends.get(arc).copied().unwrap_or(0);
            if s != 1 || e != 1 {
                report.violations.push(format!(
                    "arc {arc} appears {s} time(s) as start and {e} as end (expected 1 and 1)"
                ));
            }
            if self.components.iter().all(|c| c.id != *comp) {
                report
                    .violations
                    .push(format!("arc {arc} assigned to unknown component {comp}"));
            }
        }

        // Free-loop consistency: loops have no arcs, non-loops have some.
        let arc_comps: BTreeSet<ComponentId> = self.arcs.values().copied().collect();
        for c in &self.components {
            let has_arcs = arc_comps.contains(&c.id);
            let is_loop = self.free_loops.contains(&c.id);
            if has_arcs && is_loop {
                report
                    .violations
                    .push(format!("component {} marked crossing-free but has arcs", c.id));
            }
            if !has_arcs && !is_loop {
                report
                    .violations
                    .push(format!("component {} has no arcs and is not a crossing-free loop", c.id));
            }
        }
        for id in &self.free_loops {
            if self.components.iter().all(|c| c.id != *id) {
                report
                    .violations
                    .push(format!("crossing-free loop {id} is not a component"));
            }
        }
        report
    }

    /// Disjoint union; the second diagram's components and arcs are shifted
    /// past the first's.
    pub fn disjoint_union(&self, other: &FramedLinkDiagram) -> FramedLinkDiagram {
        let comp_shift = self.components.iter().map(|c| c.id + 1).max().unwrap_or(0);
        let arc_shift = self.arcs.keys().map(|a| a + 1).max().unwrap_or(0);
        let mut out = self.clone();
        for c in &other.components {
            out.components.push(ComponentData {
                id: c.id + comp_shift,
                framing: c.framing,
                label: c.label.clone(),
            });
        }
        for x in &other.crossings {
            out.crossings.push(Crossing {
                arcs: [
                    x.arcs[0] + arc_shift,
                    x.arcs[1] + arc_shift,
                    x.arcs[2] + arc_shift,
                    x.arcs[3] + arc_shift,
                ],
                sign: x.sign,
            });
        }
        for (a, c) in &other.arcs {
            out.arcs.insert(a + arc_shift, c + comp_shift);
        }
        for l in &other.free_loops {
            out.free_loops.insert(l + comp_shift);
        }
        out.components.sort_by_key(|c| c.id);
        out.canonicalize();
        out
    }

    /// Insert a new unknotted component clasping only `target` (linking
    /// number +1) with the given framing, labeled `m_<target>`.
    pub fn add_meridian(&self, target: ComponentId, framing: Rational64) -> Result<FramedLinkDiagram> {
        let tgt = self.component(target)?;
        let label = match &tgt.label {
            Some(l) => format!("m_{l}"),
            None => format!("m_{target}"),
        };
        let mut view = assemble::StructuralView::recover(self)?;
        let m = view.add_component(framing, Some(label));
        view.push_pattern(Pattern::Clasp {
            over: target,
            under: m,
            sign: 1,
        });
        Ok(view.assemble())
    }

    /// Canonical form for serialization and hashing. Diagrams that decompose
    /// into the tangle vocabulary are regenerated from their pattern
    /// multiset, which makes the arc numbering independent of construction
    /// history; anything else falls back to a dense renumbering.
    pub(crate) fn canonicalize(&mut self) {
        self.components.sort_by_key(|c| c.id);
        if let Ok(view) = assemble::StructuralView::recover(self) {
            *self = view.assemble();
            return;
        }
        // Dense arc renumbering in order of first appearance across sorted
        // crossings.
        let mut order: Vec<&Crossing> = self.crossings.iter().collect();
        order.sort_by_key(|x| (x.arcs, x.sign));
        let mut remap: BTreeMap<ArcId, ArcId> = BTreeMap::new();
        let mut next: ArcId = 0;
        for x in order {
            for a in &x.arcs {
                remap.entry(*a).or_insert_with(|| {
                    let v = next;
                    next += 1;
                    v
                });
            }
        }
        let mut new_arcs = BTreeMap::new();
        for (a, c) in &self.arcs {
            if let Some(na) = remap.get(a) {
                new_arcs.insert(*na, *c);
            }
        }
        self.arcs = new_arcs;
        for x in &mut self.crossings {
            for a in &mut x.arcs {
                *a = remap[a];
            }
        }
        self.crossings.sort_by_key(|x| (x.arcs, x.sign));
    }

    /// Canonical JSON value: sorted keys, components sorted by id, crossings
    /// encoded as flat 5-tuples `[a, b, c, d, sign]`.
    pub fn to_json(&self) -> Value {
        let mut comps = Vec::new();
        for c in &self.components {
            let mut obj = Map::new();
            obj.insert(
                "framing".into(),
                json!({ "den": *c.framing.denom(), "num": *c.framing.numer() }),
            );
            obj.insert("id".into(), json!(c.id));
            if let Some(l) = &c.label {
                obj.insert("label".into(), json!(l));
            }
            comps.push(Value::Object(obj));
        }
        let crossings: Vec<Value> = self
            .crossings
            .iter()
            .map(|x| {
                json!([x.arcs[0], x.arcs[1], x.arcs[2], x.arcs[3], x.sign])
            })
            .collect();
        let arcs: Map<String, Value> = self
            .arcs
            .iter()
            .map(|(a, c)| (a.to_string(), json!(c)))
            .collect();
        json!({
            "arcs": arcs,
            "components": comps,
            "crossings": crossings,
            "format_version": "1",
        })
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("diagram serializes")
    }

    pub fn from_json(v: &Value) -> Result<FramedLinkDiagram> {
        let bad = |m: &str| Error::Serialization(format!("diagram: {m}"));
        let obj = v.as_object().ok_or_else(|| bad("expected object"))?;
        match obj.get("format_version").and_then(Value::as_str) {
            Some("1") => {}
            _ => return Err(bad("missing or unsupported format_version")),
        }
        let mut components = Vec::new();
        for c in obj
            .get("components")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("components must be an array"))?
        {
            let c = c.as_object().ok_or_else(|| bad("component must be an object"))?;
            let id = c
                .get("id")
                .and_then(Value::as_u64)
                .ok_or_else(|| bad("component id"))? as ComponentId;
            let f = c
                .get("framing")
                .and_then(Value::as_object)
                .ok_or_else(|| bad("component framing"))?;
            let num = f.get("num").and_then(Value::as_i64).ok_or_else(|| bad("framing num"))?;
            let den = f.get("den").and_then(Value::as_i64).ok_or_else(|| bad("framing den"))?;
            if den == 0 {
                return Err(bad("framing denominator zero"));
            }
            let label = c.get("label").and_then(Value::as_str).map(String::from);
            components.push(ComponentData {
                id,
                framing: Rational64::new(num, den),
                label,
            });
        }
        let mut crossings = Vec::new();
        for x in obj
            .get("crossings")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("crossings must be an array"))?
        {
            let t = x.as_array().ok_or_else(|| bad("crossing must be an array"))?;
            if t.len() != 5 {
                return Err(bad("crossing must be [a, b, c, d, sign]"));
            }
            let mut arcs = [0u32; 4];
            for (i, slot) in arcs.iter_mut().enumerate() {
                *slot = t[i].as_u64().ok_or_else(|| bad("crossing arc id"))? as ArcId;
            }
            let sign = t[4].as_i64().ok_or_else(|| bad("crossing sign"))?;
            if sign != 1 && sign != -1 {
                return Err(bad("crossing sign must be ±1"));
            }
            crossings.push(Crossing { arcs, sign: sign as i8 });
        }
        let mut arcs = BTreeMap::new();
        for (a, c) in obj
            .get("arcs")
            .and_then(Value::as_object)
            .ok_or_else(|| bad("arcs must be an object"))?
        {
            let arc: ArcId = a.parse().map_err(|_| bad("arc key must be an integer"))?;
            let comp = c.as_u64().ok_or_else(|| bad("arc component"))? as ComponentId;
            arcs.insert(arc, comp);
        }
        let with_arcs: BTreeSet<ComponentId> = arcs.values().copied().collect();
        let free_loops = components
            .iter()
            .map(|c| c.id)
            .filter(|id| !with_arcs.contains(id))
            .collect();
        let mut d = FramedLinkDiagram {
            components,
            crossings,
            arcs,
            free_loops,
        };
        d.canonicalize();
        let report = d.validate();
        if !report.is_valid() {
            return Err(Error::MalformedDiagram(report.violations.join("; ")));
        }
        Ok(d)
    }

    pub fn from_json_str(s: &str) -> Result<FramedLinkDiagram> {
        let v: Value =
            serde_json::from_str(s).map_err(|e| Error::Serialization(e.to_string()))?;
        Self::from_json(&v)
    }

    /// Stable hex digest of the canonical serialization.
    pub fn digest(&self) -> String {
        use sha2::{Digest, Sha256};
        let compact = serde_json::to_string(&self.to_json()).expect("diagram serializes");
        let out = Sha256::digest(compact.as_bytes());
        out.iter().map(|b| format!("{b:02x}")).collect()
    }

    /// Restrict the diagram to a subset of components (used when splitting
    /// into connected classes). Crossings touching components outside the
    /// subset are dropped, so this is only meaningful when `keep` is closed
    /// under sharing crossings.
    pub(crate) fn restrict(&self, keep: &BTreeSet<ComponentId>) -> FramedLinkDiagram {
        let mut out = FramedLinkDiagram::empty();
        for c in &self.components {
            if keep.contains(&c.id) {
                out.components.push(c.clone());
            }
        }
        for x in &self.crossings {
            if self.arcs.get(&x.under_in()).map_or(false, |c| keep.contains(c)) {
                out.crossings.push(*x);
            }
        }
        for (a, c) in &self.arcs {
            if keep.contains(c) {
                out.arcs.insert(*a, *c);
            }
        }
        for l in &self.free_loops {
            if keep.contains(l) {
                out.free_loops.insert(*l);
            }
        }
        out.canonicalize();
        out
    }

    /// Partition component ids into classes connected by shared crossings.
    pub fn connectivity_classes(&self) -> Vec<BTreeSet<ComponentId>> {
        let ids = self.component_ids();
        let mut parent: BTreeMap<ComponentId, ComponentId> =
            ids.iter().map(|&i| (i, i)).collect();
        fn find(parent: &mut BTreeMap<ComponentId, ComponentId>, i: ComponentId) -> ComponentId {
            let p = parent[&i];
            if p == i {
                i
            } else {
                let r = find(parent, p);
                parent.insert(i, r);
                r
            }
        }
        for x in &self.crossings {
            let u = self.arcs[&x.under_in()];
            let o = self.arcs[&x.over_in()];
            let (ru, ro) = (find(&mut parent, u), find(&mut parent, o));
            if ru != ro {
                parent.insert(ru, ro);
            }
        }
        let mut classes: BTreeMap<ComponentId, BTreeSet<ComponentId>> = BTreeMap::new();
        for &i in &ids {
            let r = find(&mut parent, i);
            classes.entry(r).or_default().insert(i);
        }
        classes.into_values().collect()
    }
}

/// Positive-integer framing helper used throughout tests.
pub fn frame(n: i64) -> Rational64 {
    Rational64::from_integer(n)
}

/// `p/q` framing helper.
pub fn frac(p: i64, q: i64) -> Rational64 {
    Rational64::new(p, q)
}

#[cfg(test)]
pub(crate) mod tests_support {
    use super::*;

    /// Left-handed trefoil with framing 0: a valid diagram with a knotted
    /// component, outside the tangle vocabulary of the builders.
    pub fn trefoil() -> FramedLinkDiagram {
        let mut arcs = BTreeMap::new();
        for a in 0..6u32 {
            arcs.insert(a, 0);
        }
        let mut d = FramedLinkDiagram {
            components: vec![ComponentData {
                id: 0,
                framing: Rational64::zero(),
                label: None,
            }],
            crossings: vec![
                Crossing { arcs: [0, 3, 1, 4], sign: -1 },
                Crossing { arcs: [2, 5, 3, 0], sign: -1 },
                Crossing { arcs: [4, 1, 5, 2], sign: -1 },
            ],
            arcs,
            free_loops: BTreeSet::new(),
        };
        d.canonicalize();
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknot_is_free_loop() {
        let d = FramedLinkDiagram::unknot(frame(0));
        assert_eq!(d.components().len(), 1);
        assert!(d.crossings().is_empty());
        assert_eq!(d.zero_crossing_loops(0), 1);
        assert!(d.validate().is_valid());
        assert_eq!(d.linking_matrix().unwrap(), vec![vec![frame(0)]]);
    }

    #[test]
    fn hopf_two_equal_sign_crossings() {
        let d = FramedLinkDiagram::hopf(frame(4), frame(1));
        assert!(d.validate().is_valid());
        assert_eq!(d.crossings().len(), 2);
        assert_eq!(d.crossings()[0].sign, d.crossings()[1].sign);
        assert_eq!(d.linking_number(0, 1), 1);
        let m = d.linking_matrix().unwrap();
        assert_eq!(m, vec![vec![frame(4), frame(1)], vec![frame(1), frame(1)]]);
    }

    #[test]
    fn chain_of_one_is_unknot() {
        let d = FramedLinkDiagram::chain(&[frame(5)]).unwrap();
        assert_eq!(d, FramedLinkDiagram::unknot(frame(5)));
    }

    #[test]
    fn chain_matrix_is_tridiagonal() {
        let d = FramedLinkDiagram::chain(&[frame(3), frame(2)]).unwrap();
        let m = d.integer_linking_matrix().unwrap();
        assert_eq!(m, vec![vec![3, 1], vec![1, 2]]);
    }

    #[test]
    fn borromean_pairwise_unlinked() {
        let d = FramedLinkDiagram::borromean(frame(0), frame(0), frame(1));
        assert!(d.validate().is_valid());
        assert_eq!(d.crossings().len(), 6);
        for i in 0..3u32 {
            for j in (i + 1)..3 {
                assert_eq!(d.linking_number(i, j), 0, "pair ({i},{j})");
            }
        }
    }

    #[test]
    fn s1_sigma_zero_matrix() {
        for h in 0..=8u32 {
            let d = FramedLinkDiagram::s1_sigma(h);
            assert!(d.validate().is_valid(), "h={h}");
            assert_eq!(d.components().len(), (2 * h + 1) as usize);
            let m = d.integer_linking_matrix().unwrap();
            for (i, row) in m.iter().enumerate() {
                for (j, v) in row.iter().enumerate() {
                    assert_eq!(*v, 0, "h={h} entry ({i},{j})");
                }
            }
        }
    }

    #[test]
    fn s1_sigma_labels() {
        let d = FramedLinkDiagram::s1_sigma(3);
        assert_eq!(d.find_curve(CurveLabel::Y), Some(0));
        assert_eq!(d.find_curve(CurveLabel::A(3)), Some(5));
        assert_eq!(d.find_curve(CurveLabel::B(3)), Some(6));
        assert_eq!(d.find_curve(CurveLabel::A(4)), None);
    }

    #[test]
    fn meridian_of_unknot_is_hopf() {
        let d = FramedLinkDiagram::unknot(frame(0));
        let d = d.add_meridian(0, frame(1)).unwrap();
        assert!(d.validate().is_valid());
        let m = d.integer_linking_matrix().unwrap();
        assert_eq!(m, vec![vec![0, 1], vec![1, 1]]);
        assert_eq!(d.component(1).unwrap().label.as_deref(), Some("m_0"));
    }

    #[test]
    fn meridian_on_sigma_block() {
        let d = FramedLinkDiagram::s1_sigma(1);
        let a1 = d.find_curve(CurveLabel::A(1)).unwrap();
        let d = d.add_meridian(a1, frame(0)).unwrap();
        assert!(d.validate().is_valid());
        assert_eq!(d.components().len(), 4);
        let m = d.integer_linking_matrix().unwrap();
        let mut ones = 0;
        for (i, row) in m.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                if i != j && *v != 0 {
                    assert_eq!(*v, 1);
                    ones += 1;
                }
            }
        }
        assert_eq!(ones, 2, "single off-diagonal pair of 1s");
    }

    #[test]
    fn disjoint_union_block_matrix() {
        let a = FramedLinkDiagram::unknot(frame(0));
        let b = FramedLinkDiagram::unknot(frame(0));
        let d = a.disjoint_union(&b);
        assert_eq!(d.integer_linking_matrix().unwrap(), vec![vec![0, 0], vec![0, 0]]);
    }

    #[test]
    fn validate_names_bad_arc() {
        let mut d = FramedLinkDiagram::hopf(frame(0), frame(0));
        // Damage: retarget one crossing slot to a fresh arc id that appears once.
        d.arcs.insert(99, 0);
        d.crossings[0].arcs[0] = 99;
        let report = d.validate();
        assert!(!report.is_valid());
        assert!(report.violations.iter().any(|v| v.contains("99")));
    }

    #[test]
    fn validate_unknown_arc_reference() {
        let mut d = FramedLinkDiagram::hopf(frame(0), frame(0));
        d.crossings[0].arcs[1] = 77;
        let report = d.validate();
        assert!(!report.is_valid());
        assert!(report.violations.iter().any(|v| v.contains("unknown arc 77")));
    }

    #[test]
    fn json_round_trip() {
        for d in [
            FramedLinkDiagram::unknot(frac(5, 2)),
            FramedLinkDiagram::hopf(frame(4), frame(1)),
            FramedLinkDiagram::s1_sigma(2),
            FramedLinkDiagram::s1_sigma(1).add_meridian(1, frame(1)).unwrap(),
        ] {
            let s = d.to_json_string();
            let back = FramedLinkDiagram::from_json_str(&s).unwrap();
            assert_eq!(d, back);
            assert_eq!(s, back.to_json_string());
        }
    }

    #[test]
    fn linking_number_two_routes_agree() {
        // Half the signed crossing count must agree with the one-sided count
        // over crossings where i runs under j.
        let diagrams = [
            FramedLinkDiagram::hopf(frame(2), frame(3)),
            FramedLinkDiagram::borromean(frame(0), frame(0), frame(0)),
            FramedLinkDiagram::s1_sigma(3),
            FramedLinkDiagram::chain(&[frame(2), frame(3), frame(2)]).unwrap(),
        ];
        for d in &diagrams {
            let ids = d.component_ids();
            for &i in &ids {
                for &j in &ids {
                    if i < j {
                        let lk = d.linking_number(i, j);
                        assert_eq!(lk, d.linking_number_under_over(i, j), "pair ({i},{j})");
                        assert_eq!(lk, d.linking_number_under_over(j, i), "pair ({j},{i})");
                    }
                }
            }
        }
    }
}
