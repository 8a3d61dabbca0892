//! The orthogonal-vectors problem, the CNF-to-OV translation, and
//! OV-driven curve construction.
//!
//! A clause splits the partial assignments of each half into those that
//! already satisfy it and those that do not; writing a 1 for "does not
//! satisfy", a satisfying assignment pair is exactly a pair of orthogonal
//! vectors. Conversely any 0/1 vector pair drives the planar construction
//! directly, with bit 0 playing the satisfied role.

use crate::error::{Error, Result};
use crate::geometry::Scalar;
use crate::instance::{Gap, InstanceParams, ReductionInstance, ReductionKind};
use crate::reduction_plane::{curves_from_bit_rows, sat_bit_rows, GadgetConstants};
use crate::sat::{enumerate_assignments, CnfFormula, VariableSplit};
use std::fmt::Write as _;

/// Two sets of 0/1 vectors of common dimension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OvInstance {
    dim: usize,
    s1: Vec<Vec<bool>>,
    s2: Vec<Vec<bool>>,
}

impl OvInstance {
    pub fn new(s1: Vec<Vec<bool>>, s2: Vec<Vec<bool>>) -> Result<Self> {
        if s1.is_empty() || s2.is_empty() {
            return Err(Error::Empty { what: "vector set" });
        }
        let dim = s1[0].len();
        if dim == 0 {
            return Err(Error::Empty { what: "vector dimension" });
        }
        if s1.iter().chain(&s2).any(|v| v.len() != dim) {
            return Err(Error::Format { what: "OV instance", msg: "vectors of differing dimension".into() });
        }
        Ok(OvInstance { dim, s1, s2 })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn s1(&self) -> &[Vec<bool>] {
        &self.s1
    }

    pub fn s2(&self) -> &[Vec<bool>] {
        &self.s2
    }

    /// Text form: one 0/1 string per line, the two sets separated by `---`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for v in &self.s1 {
            for &b in v {
                out.push(if b { '1' } else { '0' });
            }
            out.push('\n');
        }
        out.push_str("---\n");
        for v in &self.s2 {
            for &b in v {
                out.push(if b { '1' } else { '0' });
            }
            out.push('\n');
        }
        out
    }

    /// Parses the two-section text form.
    pub fn parse(text: &str) -> Result<Self> {
        let mut sections: Vec<Vec<Vec<bool>>> = vec![Vec::new()];
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if line == "---" {
                sections.push(Vec::new());
                continue;
            }
            let row = parse_bits(line, idx + 1)?;
            sections.last_mut().unwrap().push(row);
        }
        if sections.len() != 2 {
            return Err(Error::Format {
                what: "OV instance",
                msg: format!("expected two sections separated by '---', found {}", sections.len()),
            });
        }
        let s2 = sections.pop().unwrap();
        let s1 = sections.pop().unwrap();
        OvInstance::new(s1, s2)
    }

    /// Builds the instance from two single-section files.
    pub fn from_sections(s1_text: &str, s2_text: &str) -> Result<Self> {
        let parse_section = |text: &str| -> Result<Vec<Vec<bool>>> {
            let mut rows = Vec::new();
            for (idx, raw) in text.lines().enumerate() {
                let line = raw.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                rows.push(parse_bits(line, idx + 1)?);
            }
            Ok(rows)
        };
        OvInstance::new(parse_section(s1_text)?, parse_section(s2_text)?)
    }
}

fn parse_bits(line: &str, line_no: usize) -> Result<Vec<bool>> {
    line.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            _ => Err(Error::Format { what: "OV vector", msg: format!("line {line_no}: invalid character '{c}'") }),
        })
        .collect()
}

/// First orthogonal pair `(u, v)` in index order, or `None`. Quadratic scan;
/// the integer inner product is zero iff no coordinate is 1 in both.
pub fn ov_brute(inst: &OvInstance) -> Option<(usize, usize)> {
    for (i, u) in inst.s1.iter().enumerate() {
        for (j, v) in inst.s2.iter().enumerate() {
            if u.iter().zip(v).all(|(&a, &b)| !(a && b)) {
                return Some((i, j));
            }
        }
    }
    None
}

/// Translates a formula into an OV instance over a variable split: one
/// vector per partial assignment, bit `i` set iff the assignment does *not*
/// satisfy clause `C_{i+1}`. The formula is satisfiable iff an orthogonal
/// pair exists. An empty half contributes the single empty assignment,
/// which satisfies nothing.
pub fn cnf_to_ov(formula: &CnfFormula, split: &VariableSplit) -> Result<OvInstance> {
    let a1s = enumerate_assignments(&split.v1())?;
    let a2s = enumerate_assignments(&split.v2())?;
    let invert = |rows: Vec<Vec<bool>>| -> Vec<Vec<bool>> {
        rows.into_iter()
            .map(|row| row.into_iter().map(|sat| !sat).collect())
            .collect()
    };
    OvInstance::new(
        invert(sat_bit_rows(formula, &a1s)),
        invert(sat_bit_rows(formula, &a2s)),
    )
}

/// Drives the planar construction directly from vectors: bit 0 plays the
/// satisfied role, bit 1 the falsified one. The discrete Fréchet distance
/// of the result is at most 1 iff the instance has an orthogonal pair.
pub fn ov_to_curves(constants: &GadgetConstants, inst: &OvInstance) -> Result<ReductionInstance> {
    let to_rows = |vectors: &[Vec<bool>]| -> Vec<Vec<bool>> {
        vectors
            .iter()
            .map(|v| v.iter().map(|&bit| !bit).collect())
            .collect()
    };
    let (p1, p2) = curves_from_bit_rows(constants, &to_rows(&inst.s1), &to_rows(&inst.s2))?;
    Ok(ReductionInstance {
        kind: ReductionKind::Plane,
        p1,
        p2,
        gap: Gap { accept: Scalar::int(1), reject_above: constants.one_plus_eps() },
        params: InstanceParams {
            epsilon: Some(Scalar::Rational(constants.epsilon().clone())),
            ..Default::default()
        },
        formula_sha256: Some(ov_sha256(inst)),
        num_vars: None,
        num_clauses: Some(inst.dim),
    })
}

fn ov_sha256(inst: &OvInstance) -> String {
    use sha2::{Digest, Sha256};
    let digest = Sha256::digest(inst.to_text().as_bytes());
    let mut hex = String::with_capacity(64);
    for b in digest {
        let _ = write!(hex, "{b:02x}");
    }
    hex
}
