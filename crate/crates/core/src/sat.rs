//! CNF formulas, partial assignments, DIMACS I/O and the brute-force
//! satisfiability oracle.
//!
//! The oracle is deliberately naive (exhaustive enumeration) so it can serve
//! as unimpeachable ground truth for the reductions. Assignments enumerate in
//! lexicographic order with T before F, so bucket partitions are reproducible.

use crate::error::{Error, Result};
use std::fmt::Write as _;

/// Variable cap for the brute-force oracle.
pub const BRUTE_FORCE_CAP: usize = 24;
/// Cap on `|V|` for full assignment enumeration.
pub const ENUMERATION_CAP: usize = 20;

/// A CNF formula: clauses of signed 1-based literals over variables `1..=N`.
/// Clause width is unbounded; clauses may repeat literals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CnfFormula {
    num_vars: usize,
    clauses: Vec<Vec<i32>>,
}

impl CnfFormula {
    pub fn new(num_vars: usize, clauses: Vec<Vec<i32>>) -> Result<Self> {
        if num_vars == 0 {
            return Err(Error::OutOfRange { what: "num_vars", detail: "must be >= 1".into() });
        }
        if clauses.is_empty() {
            return Err(Error::Empty { what: "clause list" });
        }
        for c in &clauses {
            for &lit in c {
                if lit == 0 || lit.unsigned_abs() as usize > num_vars {
                    return Err(Error::OutOfRange {
                        what: "literal",
                        detail: format!("{lit} not valid for {num_vars} variables"),
                    });
                }
            }
        }
        Ok(CnfFormula { num_vars, clauses })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    pub fn clauses(&self) -> &[Vec<i32>] {
        &self.clauses
    }

    /// 1-based clause access, matching the construction indices.
    pub fn clause(&self, i: usize) -> &[i32] {
        &self.clauses[i - 1]
    }

    /// Canonical DIMACS text.
    pub fn to_dimacs(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "p cnf {} {}", self.num_vars, self.clauses.len());
        for c in &self.clauses {
            for lit in c {
                let _ = write!(out, "{lit} ");
            }
            let _ = writeln!(out, "0");
        }
        out
    }

    /// Hex SHA-256 of the canonical DIMACS serialization.
    pub fn sha256(&self) -> String {
        use sha2::{Digest, Sha256};
        let digest = Sha256::digest(self.to_dimacs().as_bytes());
        let mut hex = String::with_capacity(64);
        for b in digest {
            let _ = write!(hex, "{b:02x}");
        }
        hex
    }
}

/// Truth values for an ordered subset of the variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialAssignment {
    vars: Vec<u32>,
    values: Vec<bool>,
}

impl PartialAssignment {
    pub fn new(vars: Vec<u32>, values: Vec<bool>) -> Result<Self> {
        if vars.len() != values.len() {
            return Err(Error::Format { what: "partial assignment", msg: "domain and value lengths differ".into() });
        }
        Ok(PartialAssignment { vars, values })
    }

    /// The assignment on an empty domain.
    pub fn empty() -> Self {
        PartialAssignment { vars: vec![], values: vec![] }
    }

    pub fn vars(&self) -> &[u32] {
        &self.vars
    }

    pub fn values(&self) -> &[bool] {
        &self.values
    }

    pub fn get(&self, var: u32) -> Option<bool> {
        self.vars.iter().position(|&v| v == var).map(|i| self.values[i])
    }

    /// Merges two assignments with disjoint domains into one.
    pub fn union(&self, other: &PartialAssignment) -> PartialAssignment {
        let mut vars = self.vars.clone();
        let mut values = self.values.clone();
        vars.extend_from_slice(&other.vars);
        values.extend_from_slice(&other.values);
        PartialAssignment { vars, values }
    }
}

/// Does the partial assignment alone satisfy the clause? Variables outside
/// the domain are not consulted.
pub fn sat_partial(a: &PartialAssignment, clause: &[i32]) -> bool {
    clause.iter().any(|&lit| {
        let var = lit.unsigned_abs();
        match a.get(var) {
            Some(v) => v == (lit > 0),
            None => false,
        }
    })
}

/// Evaluates a full assignment against the whole formula.
pub fn satisfies(formula: &CnfFormula, a: &PartialAssignment) -> bool {
    formula.clauses().iter().all(|c| sat_partial(a, c))
}

/// A contiguous prefix split of the variables `1..=N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VariableSplit {
    num_vars: usize,
    ell: usize,
}

impl VariableSplit {
    pub fn new(num_vars: usize, ell: usize) -> Result<Self> {
        if num_vars < 2 {
            return Err(Error::OutOfRange { what: "num_vars", detail: "split needs at least 2 variables".into() });
        }
        if ell == 0 || ell >= num_vars {
            return Err(Error::OutOfRange { what: "ell", detail: format!("{ell} not in [1, {}]", num_vars - 1) });
        }
        Ok(VariableSplit { num_vars, ell })
    }

    /// Equal halves (`ell = round(N/2)`), the default partition.
    pub fn halves(num_vars: usize) -> Result<Self> {
        split_variables(num_vars, 1.0)
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn v1(&self) -> Vec<u32> {
        (1..=self.ell as u32).collect()
    }

    pub fn v2(&self) -> Vec<u32> {
        (self.ell as u32 + 1..=self.num_vars as u32).collect()
    }
}

/// Splits the variables at `ell = round(N / (gamma + 1))` (half-up), clamped
/// so both sides stay non-empty. `gamma = 1` reproduces the halved split.
pub fn split_variables(num_vars: usize, gamma: f64) -> Result<VariableSplit> {
    if !(0.0..=1.0).contains(&gamma) {
        return Err(Error::OutOfRange { what: "gamma", detail: format!("{gamma} not in [0, 1]") });
    }
    if num_vars < 2 {
        return Err(Error::OutOfRange { what: "num_vars", detail: "split needs at least 2 variables".into() });
    }
    let raw = num_vars as f64 / (gamma + 1.0);
    let ell = (raw + 0.5).floor() as usize;
    let ell = ell.clamp(1, num_vars - 1);
    VariableSplit::new(num_vars, ell)
}

/// All `2^|V|` assignments of the ordered variable set, lexicographic with
/// T before F (deterministic, hash-free).
pub fn enumerate_assignments(vars: &[u32]) -> Result<Vec<PartialAssignment>> {
    if vars.len() > ENUMERATION_CAP {
        return Err(Error::CapExceeded { what: "assignment enumeration", limit: ENUMERATION_CAP, requested: vars.len() });
    }
    let k = vars.len();
    let total = 1usize << k;
    let mut out = Vec::with_capacity(total);
    for g in 0..total {
        // bit (k-1-j) of g drives variable j; 0 means T, so ascending g is
        // lexicographic with T first
        let values = (0..k).map(|j| (g >> (k - 1 - j)) & 1 == 0).collect();
        out.push(PartialAssignment { vars: vars.to_vec(), values });
    }
    Ok(out)
}

/// Exhaustive satisfiability: the lexicographically first (T before F)
/// satisfying assignment, or `None`.
pub fn brute_force_sat(formula: &CnfFormula) -> Result<Option<PartialAssignment>> {
    brute_force_sat_capped(formula, BRUTE_FORCE_CAP)
}

pub fn brute_force_sat_capped(formula: &CnfFormula, cap: usize) -> Result<Option<PartialAssignment>> {
    let n = formula.num_vars();
    if n > cap {
        return Err(Error::CapExceeded { what: "brute-force SAT", limit: cap, requested: n });
    }
    // Bitmask clause tests: bit (n-1-j) set in `mask` means variable j+1 is F.
    let mut pos = Vec::with_capacity(formula.num_clauses());
    let mut neg = Vec::with_capacity(formula.num_clauses());
    for c in formula.clauses() {
        let mut p: u64 = 0;
        let mut q: u64 = 0;
        for &lit in c {
            let bit = 1u64 << (n - lit.unsigned_abs() as usize);
            if lit > 0 {
                p |= bit;
            } else {
                q |= bit;
            }
        }
        pos.push(p);
        neg.push(q);
    }
    for g in 0u64..(1u64 << n) {
        // variable j is T iff its bit in g is 0
        let true_mask = !g;
        if pos.iter().zip(&neg).all(|(&p, &q)| p & true_mask != 0 || q & g != 0) {
            let vars: Vec<u32> = (1..=n as u32).collect();
            let values = (0..n).map(|j| (g >> (n - 1 - j)) & 1 == 0).collect();
            return Ok(Some(PartialAssignment { vars, values }));
        }
    }
    Ok(None)
}

/// Parses DIMACS CNF: `c` comments, a `p cnf N M` header, then
/// zero-terminated clauses. The declared clause count must match.
pub fn parse_dimacs(text: &str) -> Result<CnfFormula> {
    let mut num_vars: Option<usize> = None;
    let mut declared: usize = 0;
    let mut clauses: Vec<Vec<i32>> = Vec::new();
    let mut current: Vec<i32> = Vec::new();
    let mut header_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
            continue;
        }
        if line.starts_with('p') {
            if num_vars.is_some() {
                return Err(Error::Dimacs { line: line_no, msg: "duplicate header".into() });
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 4 || parts[1] != "cnf" {
                return Err(Error::Dimacs { line: line_no, msg: format!("malformed header '{line}'") });
            }
            let n: usize = parts[2]
                .parse()
                .map_err(|_| Error::Dimacs { line: line_no, msg: format!("bad variable count '{}'", parts[2]) })?;
            declared = parts[3]
                .parse()
                .map_err(|_| Error::Dimacs { line: line_no, msg: format!("bad clause count '{}'", parts[3]) })?;
            if n == 0 {
                return Err(Error::Dimacs { line: line_no, msg: "variable count must be >= 1".into() });
            }
            num_vars = Some(n);
            header_line = line_no;
            continue;
        }
        let n = num_vars.ok_or(Error::Dimacs { line: line_no, msg: "clause before header".into() })?;
        for tok in line.split_whitespace() {
            let lit: i32 = tok
                .parse()
                .map_err(|_| Error::Dimacs { line: line_no, msg: format!("bad literal '{tok}'") })?;
            if lit == 0 {
                if current.is_empty() {
                    return Err(Error::Dimacs { line: line_no, msg: "empty clause".into() });
                }
                clauses.push(std::mem::take(&mut current));
            } else {
                if lit.unsigned_abs() as usize > n {
                    return Err(Error::Dimacs { line: line_no, msg: format!("literal {lit} out of range (N = {n})") });
                }
                current.push(lit);
            }
        }
    }

    let num_vars = num_vars.ok_or(Error::Dimacs { line: 1, msg: "missing header".into() })?;
    if !current.is_empty() {
        return Err(Error::Dimacs { line: text.lines().count(), msg: "unterminated clause".into() });
    }
    if clauses.len() != declared {
        return Err(Error::Dimacs {
            line: header_line,
            msg: format!("header declares {declared} clauses, found {}", clauses.len()),
        });
    }
    CnfFormula::new(num_vars, clauses)
}
