//! Curve-pair instances produced by the reductions, with provenance.

use crate::geometry::{Curve, Scalar};

/// Which construction produced an instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReductionKind {
    /// Planar construction over the full assignment sets of a half split.
    Plane,
    /// Planar construction over an imbalanced prefix split.
    Imbalanced,
    /// U-shape OR-composition over bucketed planar pairs.
    OrPacked,
    /// U-shape OR-composition over five-dimensional quarter-circle pairs.
    HighDim,
}

impl ReductionKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ReductionKind::Plane => "plane",
            ReductionKind::Imbalanced => "imbalanced",
            ReductionKind::OrPacked => "or_packed",
            ReductionKind::HighDim => "highdim",
        }
    }

    pub fn parse(s: &str) -> Option<ReductionKind> {
        match s {
            "plane" => Some(ReductionKind::Plane),
            "imbalanced" => Some(ReductionKind::Imbalanced),
            "or_packed" | "or-packed" => Some(ReductionKind::OrPacked),
            "highdim" => Some(ReductionKind::HighDim),
            _ => None,
        }
    }
}

/// The intended distance gap: satisfiable instances admit traversals of
/// width at most `accept`; unsatisfiable ones exceed `reject_above`.
#[derive(Debug, Clone, PartialEq)]
pub struct Gap {
    pub accept: Scalar,
    pub reject_above: Scalar,
}

/// Construction parameters, populated per kind.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct InstanceParams {
    /// Gadget separation parameter (rational for planar kinds, float for
    /// the five-dimensional one).
    pub epsilon: Option<Scalar>,
    /// Split exponent for the imbalanced variant.
    pub gamma: Option<f64>,
    /// Prefix length of the variable split.
    pub ell_split: Option<usize>,
    /// Bucket count per side fed into the OR-composition.
    pub buckets: Option<usize>,
    /// Rejection threshold claimed for the pair family.
    pub beta: Option<f64>,
    /// Packedness claimed for the pair family.
    pub claimed_packedness: Option<f64>,
}

/// A constructed curve pair plus provenance.
#[derive(Debug, Clone)]
pub struct ReductionInstance {
    pub kind: ReductionKind,
    pub p1: Curve,
    pub p2: Curve,
    pub gap: Gap,
    pub params: InstanceParams,
    /// SHA-256 of the source formula's canonical DIMACS, when built from one.
    pub formula_sha256: Option<String>,
    pub num_vars: Option<usize>,
    pub num_clauses: Option<usize>,
}
