//! Exact and floating-point Fréchet-distance algorithms together with
//! constructions that compile CNF-SAT / orthogonal-vectors instances into
//! curve pairs whose Fréchet distance encodes satisfiability, plus the
//! measurement and verification machinery around them.
//!
//! Module map:
//! * [`geometry`] — points, curves, exact-rational and float coordinates;
//! * [`frechet`] — discrete DP (value, decision, witness) and the
//!   free-space continuous decision/value;
//! * [`sat`] — CNF formulas, DIMACS, the brute-force oracle, variable
//!   splits and assignment enumeration;
//! * [`reduction_plane`] — the planar clause/assignment-gadget
//!   construction, its imbalanced variant, the symmetric-point map, and
//!   the distance-table / symmetry checkers;
//! * [`or_gadget`] — the U-shape OR-composition over bucketed pair
//!   families and the family property checks;
//! * [`reduction_highdim`] — the five-dimensional quarter-circle
//!   construction with near-unit packedness;
//! * [`packedness`] — ball-clipped arc length and the packedness
//!   estimator;
//! * [`ov`] — orthogonal vectors: brute force, CNF translation, and
//!   vector-driven curves;
//! * [`harness`] — verification campaigns and scaling benchmarks;
//! * [`json`] — the curve/instance interchange formats.

pub mod error;
pub mod frechet;
pub mod geometry;
pub mod harness;
pub mod instance;
pub mod json;
pub mod or_gadget;
pub mod ov;
pub mod packedness;
pub mod reduction_highdim;
pub mod reduction_plane;
pub mod report;
pub mod sat;

pub use error::{Error, Result};
