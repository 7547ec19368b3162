//! Surgery calculus on framed links in the 3-sphere.
//!
//! The crate is organized around a pipeline:
//!
//! - [`diagram`] — planar-diagram-coded framed links with exact rational
//!   framings, plus builders for the standard diagrams (unknots, Hopf links,
//!   chains, Borromean triples, circle-times-surface presentations).
//! - [`invariants`] — Smith normal form, first homology of the surgered
//!   manifold, Wirtinger presentations with surgery relators, Tietze
//!   simplification, and summand recognition.
//! - [`calculus`] — a rewrite engine for Kirby/Rolfsen moves where every
//!   applied rule is checked to preserve first homology, producing an
//!   auditable trace.
//! - [`torus`] — the 4-manifold layer: circle-product manifolds, torus
//!   surgeries translated to Dehn surgeries on the 3-manifold factor, the
//!   type-change-locus ledger and characteristic numbers.
//! - [`planner`] — turns a target connected sum into a surgery schedule,
//!   executes it, and verifies the outcome at the invariant level, emitting
//!   a machine-checkable certificate.
//!
//! All arithmetic is exact (integers and reduced rationals); nothing in the
//! crate touches floating point.

pub mod calculus;
pub mod diagram;
pub mod error;
pub mod invariants;
pub mod planner;
pub mod torus;

pub use diagram::{ComponentData, Crossing, CurveLabel, FramedLinkDiagram};
pub use error::{Error, Result};
pub use invariants::{AbelianGroup, GroupPresentation, RecognitionResult, SmithForm};
pub use planner::{Certificate, SurgerySchedule, TargetSpec};
pub use torus::{CharNumbers, GcsLedger, LocusRecord, ProductFourManifold, TorusSurgerySpec};


