//! The planar SAT-to-curves construction.
//!
//! Clause gadgets are single points: parity of the clause index selects the
//! x-slot, satisfaction selects the y-level nearer to the other side. An
//! assignment gadget strings one clause gadget per clause behind a
//! synchronization point `r_k`. The two curves interleave assignment gadgets
//! with control points so that a width-1 traversal exists iff some pair of
//! partial assignments satisfies every clause; unsatisfiable inputs force
//! width `> 1 + eps`. All coordinates are exact rationals and every check in
//! this module is tolerance-free.

use crate::error::{Error, Result};
use crate::geometry::{concat, squared_distance, Curve, Point, Scalar};
use crate::instance::{Gap, InstanceParams, ReductionInstance, ReductionKind};
use crate::report::{CheckRecord, VerificationReport};
use crate::sat::{enumerate_assignments, sat_partial, CnfFormula, PartialAssignment, VariableSplit};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

/// The two curves of a construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    One,
    Two,
}

impl Side {
    pub fn index(&self) -> usize {
        match self {
            Side::One => 1,
            Side::Two => 2,
        }
    }

    pub fn other(&self) -> Side {
        match self {
            Side::One => Side::Two,
            Side::Two => Side::One,
        }
    }
}

fn ratio(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// The fixed gadget points for a given separation `eps` (default 1/1000).
#[derive(Debug, Clone)]
pub struct GadgetConstants {
    epsilon: BigRational,
}

impl GadgetConstants {
    /// The standard constants with `eps = 1/1000`.
    pub fn standard() -> Self {
        GadgetConstants { epsilon: ratio(1, 1000) }
    }

    /// Constants for an arbitrary separation in `(0, 1/2)`. Whether the
    /// distance lemma still holds for this value is what
    /// [`check_distance_table`] decides.
    pub fn with_epsilon(epsilon: BigRational) -> Result<Self> {
        if !epsilon.is_positive() || epsilon >= ratio(1, 2) {
            return Err(Error::OutOfRange { what: "epsilon", detail: format!("{epsilon} not in (0, 1/2)") });
        }
        Ok(GadgetConstants { epsilon })
    }

    pub fn epsilon(&self) -> &BigRational {
        &self.epsilon
    }

    /// The rejection threshold `1 + eps`.
    pub fn one_plus_eps(&self) -> Scalar {
        Scalar::Rational(BigRational::one() + &self.epsilon)
    }

    fn pt(&self, x: BigRational, y: BigRational) -> Point {
        Point::from_rationals(vec![x, y])
    }

    /// Clause-gadget point `c^parity_{side, sat}`.
    pub fn clause_point(&self, side: Side, parity: usize, sat: bool) -> Point {
        let x = ratio(parity as i64 % 2, 3);
        let half = ratio(1, 2);
        let y = match (side, sat) {
            (Side::One, true) => half - &self.epsilon,
            (Side::One, false) => half + &self.epsilon,
            (Side::Two, true) => -&half + &self.epsilon,
            (Side::Two, false) => -&half - &self.epsilon,
        };
        self.pt(x, y)
    }

    /// Synchronization point `r_k`.
    pub fn r(&self, side: Side) -> Point {
        match side {
            Side::One => self.pt(ratio(-1, 3), ratio(1, 2)),
            Side::Two => self.pt(ratio(-1, 3), ratio(-1, 2)),
        }
    }

    pub fn s1(&self) -> Point {
        self.pt(ratio(-1, 3), ratio(1, 5))
    }

    pub fn t1(&self) -> Point {
        self.pt(ratio(1, 3), ratio(1, 5))
    }

    pub fn s2(&self) -> Point {
        self.pt(ratio(-1, 3), ratio(0, 1))
    }

    pub fn t2(&self) -> Point {
        self.pt(ratio(1, 3), ratio(0, 1))
    }

    pub fn s2_star(&self) -> Point {
        self.pt(ratio(-1, 3), ratio(-4, 5))
    }

    pub fn t2_star(&self) -> Point {
        self.pt(ratio(1, 3), ratio(-4, 5))
    }

    /// Every vertex that may appear on the first curve, labeled.
    pub fn q1(&self) -> Vec<(&'static str, Point)> {
        vec![
            ("s1", self.s1()),
            ("t1", self.t1()),
            ("r1", self.r(Side::One)),
            ("c1F0", self.clause_point(Side::One, 0, false)),
            ("c1T0", self.clause_point(Side::One, 0, true)),
            ("c1F1", self.clause_point(Side::One, 1, false)),
            ("c1T1", self.clause_point(Side::One, 1, true)),
        ]
    }

    /// Every vertex that may appear on the second curve, labeled.
    pub fn q2(&self) -> Vec<(&'static str, Point)> {
        vec![
            ("s2", self.s2()),
            ("t2", self.t2()),
            ("r2", self.r(Side::Two)),
            ("s2*", self.s2_star()),
            ("t2*", self.t2_star()),
            ("c2F0", self.clause_point(Side::Two, 0, false)),
            ("c2T0", self.clause_point(Side::Two, 0, true)),
            ("c2F1", self.clause_point(Side::Two, 1, false)),
            ("c2T1", self.clause_point(Side::Two, 1, true)),
        ]
    }
}

/// Satisfaction rows: `rows[a][i]` is `sat(assignments[a], C_{i+1})`.
pub fn sat_bit_rows(formula: &CnfFormula, assignments: &[PartialAssignment]) -> Vec<Vec<bool>> {
    assignments
        .iter()
        .map(|a| formula.clauses().iter().map(|c| sat_partial(a, c)).collect())
        .collect()
}

/// The clause gadget `CG(a, i)`: one point, selected by the parity of the
/// 1-based clause index and by `sat(a, C_i)`.
pub fn clause_gadget(
    constants: &GadgetConstants,
    formula: &CnfFormula,
    a: &PartialAssignment,
    side: Side,
    clause_index: usize,
) -> Result<Point> {
    if clause_index == 0 || clause_index > formula.num_clauses() {
        return Err(Error::OutOfRange {
            what: "clause index",
            detail: format!("{clause_index} not in [1, {}]", formula.num_clauses()),
        });
    }
    let sat = sat_partial(a, formula.clause(clause_index));
    Ok(constants.clause_point(side, clause_index % 2, sat))
}

fn gadget_from_bits(constants: &GadgetConstants, side: Side, bits: &[bool]) -> Curve {
    let mut points = Vec::with_capacity(bits.len() + 1);
    points.push(constants.r(side));
    for (idx, &sat) in bits.iter().enumerate() {
        points.push(constants.clause_point(side, (idx + 1) % 2, sat));
    }
    Curve::new(points).expect("gadget points share mode and dimension")
}

/// The assignment gadget `AG(a) = r_k ∘ CG(a,1) ∘ ... ∘ CG(a,M)`.
pub fn assignment_gadget(
    constants: &GadgetConstants,
    formula: &CnfFormula,
    a: &PartialAssignment,
    side: Side,
) -> Curve {
    let bits: Vec<bool> = formula.clauses().iter().map(|c| sat_partial(a, c)).collect();
    gadget_from_bits(constants, side, &bits)
}

/// Assembles the two curves from per-assignment satisfaction rows. This is
/// the shared core of the SAT-driven and the vector-driven constructions.
pub fn curves_from_bit_rows(
    constants: &GadgetConstants,
    rows1: &[Vec<bool>],
    rows2: &[Vec<bool>],
) -> Result<(Curve, Curve)> {
    if rows1.is_empty() || rows2.is_empty() {
        return Err(Error::Empty { what: "assignment set" });
    }
    let m = rows1[0].len();
    if m == 0 {
        return Err(Error::Empty { what: "clause set" });
    }
    if rows1.iter().chain(rows2).any(|r| r.len() != m) {
        return Err(Error::Format { what: "satisfaction rows", msg: "ragged row widths".into() });
    }

    // P1 = ◯_a (s1 ∘ AG(a) ∘ t1)
    let mut parts1 = Vec::with_capacity(rows1.len() * 3);
    for bits in rows1 {
        parts1.push(Curve::single(constants.s1()));
        parts1.push(gadget_from_bits(constants, Side::One, bits));
        parts1.push(Curve::single(constants.t1()));
    }
    let p1 = concat(&parts1)?;

    // P2 = s2 ∘ s2* ∘ (◯_a AG(a)) ∘ t2* ∘ t2
    let mut parts2 = Vec::with_capacity(rows2.len() + 4);
    parts2.push(Curve::single(constants.s2()));
    parts2.push(Curve::single(constants.s2_star()));
    for bits in rows2 {
        parts2.push(gadget_from_bits(constants, Side::Two, bits));
    }
    parts2.push(Curve::single(constants.t2_star()));
    parts2.push(Curve::single(constants.t2()));
    let p2 = concat(&parts2)?;

    debug_assert_eq!(p1.len(), rows1.len() * (m + 3));
    debug_assert_eq!(p2.len(), rows2.len() * (m + 1) + 4);
    Ok((p1, p2))
}

/// Builds the planar instance for explicit assignment lists (the full
/// enumerations, or any bucket subsets of them).
pub fn build_plane_curves(
    constants: &GadgetConstants,
    formula: &CnfFormula,
    split: &VariableSplit,
    a1s: &[PartialAssignment],
    a2s: &[PartialAssignment],
) -> Result<ReductionInstance> {
    let rows1 = sat_bit_rows(formula, a1s);
    let rows2 = sat_bit_rows(formula, a2s);
    let (p1, p2) = curves_from_bit_rows(constants, &rows1, &rows2)?;
    Ok(ReductionInstance {
        kind: ReductionKind::Plane,
        p1,
        p2,
        gap: Gap { accept: Scalar::int(1), reject_above: constants.one_plus_eps() },
        params: InstanceParams {
            epsilon: Some(Scalar::Rational(constants.epsilon().clone())),
            ell_split: Some(split.ell()),
            ..Default::default()
        },
        formula_sha256: Some(formula.sha256()),
        num_vars: Some(formula.num_vars()),
        num_clauses: Some(formula.num_clauses()),
    })
}

/// The imbalanced variant: splits the variables at `ell = round(N/(gamma+1))`
/// and uses the full assignment enumerations of both sides. `gamma = 1`
/// reproduces the halved construction exactly.
pub fn build_imbalanced(
    constants: &GadgetConstants,
    formula: &CnfFormula,
    gamma: f64,
) -> Result<ReductionInstance> {
    let split = crate::sat::split_variables(formula.num_vars(), gamma)?;
    let a1s = enumerate_assignments(&split.v1())?;
    let a2s = enumerate_assignments(&split.v2())?;
    let mut instance = build_plane_curves(constants, formula, &split, &a1s, &a2s)?;
    instance.kind = ReductionKind::Imbalanced;
    instance.params.gamma = Some(gamma);
    Ok(instance)
}

/// The symmetric-point map between two fixed assignment gadgets: the point at
/// curve parameter `t` on the gadget of `from_side` corresponds to the point
/// at the same parameter on the opposite gadget (`r_1 <-> r_2`, clause
/// gadgets to clause gadgets, interpolated linearly in between). Applying the
/// map twice returns to the starting point.
pub fn sym(
    constants: &GadgetConstants,
    formula: &CnfFormula,
    a1: &PartialAssignment,
    a2: &PartialAssignment,
    from_side: Side,
    t: &Scalar,
) -> Result<Point> {
    let opposite = match from_side {
        Side::One => assignment_gadget(constants, formula, a2, Side::Two),
        Side::Two => assignment_gadget(constants, formula, a1, Side::One),
    };
    opposite.eval(t)
}

/// Exhaustively verifies the pairwise-distance table of the construction's
/// vertex sets: no distance falls in `(1, 1+eps]`, and the set of pairs at
/// distance at most 1 is exactly the five expected families. Also reports
/// the largest separation for which the empty-band half still holds.
pub fn check_distance_table(constants: &GadgetConstants) -> VerificationReport {
    let mut report = VerificationReport::new("distance-table");
    let one = BigRational::one();
    let threshold_sq = {
        let t = &one + constants.epsilon();
        &t * &t
    };

    let q1 = constants.q1();
    let q2 = constants.q2();
    let mut min_above_one: Option<BigRational> = None;
    let mut band_violations = Vec::new();
    let mut family_mismatches = Vec::new();

    for (n1, p) in &q1 {
        for (n2, q) in &q2 {
            let sq = match squared_distance(p, q).expect("rational points") {
                Scalar::Rational(r) => r,
                Scalar::Float(_) => unreachable!(),
            };
            if sq > one {
                min_above_one = Some(match min_above_one.take() {
                    None => sq.clone(),
                    Some(m) => m.min(sq.clone()),
                });
                if sq <= threshold_sq {
                    band_violations.push(format!("({n1}, {n2}) squared {sq}"));
                }
            }
            let le_one = sq <= one;
            if le_one != expected_le_one(n1, n2) {
                family_mismatches.push(format!("({n1}, {n2}) squared {sq} le_one={le_one}"));
            }
        }
    }

    report.push(CheckRecord::of(
        "distance-table-empty-band",
        format!("no pair of the {}x{} vertex sets in (1, 1+eps], eps = {}", q1.len(), q2.len(), constants.epsilon()),
        band_violations.is_empty(),
        band_violations.join("; "),
    ));
    report.push(CheckRecord::of(
        "distance-table-le1-families",
        "pairs at distance <= 1 are exactly the five expected families",
        family_mismatches.is_empty(),
        family_mismatches.join("; "),
    ));
    if let Some(min_sq) = min_above_one {
        // diagnostic: the band stays empty for any eps' with (1+eps')^2 < min_sq
        let eps_max = min_sq.to_f64().map(|v| v.sqrt() - 1.0).unwrap_or(f64::NAN);
        report.push(CheckRecord::pass(
            "distance-table-max-epsilon",
            format!("empty band holds up to eps < {eps_max:.6}"),
        ));
    }
    report
}

/// Membership in the five families of pairs at distance at most 1.
fn expected_le_one(n1: &str, n2: &str) -> bool {
    if n2 == "s2" || n2 == "t2" {
        return true;
    }
    if n1 == "s1" {
        return n2 != "t2*";
    }
    if n1 == "t1" {
        return n2 != "s2*";
    }
    if n1 == "r1" && n2 == "r2" {
        return true;
    }
    if let (Some(c1), Some(c2)) = (parse_clause_label(n1), parse_clause_label(n2)) {
        let (sat1, p1) = c1;
        let (sat2, p2) = c2;
        return p1 == p2 && (sat1 || sat2);
    }
    false
}

fn parse_clause_label(name: &str) -> Option<(bool, char)> {
    let mut chars = name.chars();
    if chars.next()? != 'c' {
        return None;
    }
    let _side = chars.next()?;
    let sat = chars.next()? == 'T';
    let parity = chars.next()?;
    Some((sat, parity))
}

/// Samples on-gadget point pairs at distance at most `1 + eps` and verifies
/// both symmetric-point inequalities `||p2 - sym(p1)|| <= 1/9` and
/// `||sym(p2) - p1|| <= 1/9` with exact rational arithmetic.
pub fn check_sym_lemma(constants: &GadgetConstants, samples: usize, seed: u64) -> VerificationReport {
    let mut report = VerificationReport::with_seed("sym-lemma", seed, format!("samples={samples}"));
    if samples == 0 {
        report.push(CheckRecord::fail("sym-lemma-samples", "samples must be >= 1", "samples=0"));
        return report;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let one = BigRational::one();
    let limit_sq = {
        let t = &one + constants.epsilon();
        &t * &t
    };
    let ninth_sq = ratio(1, 81);

    let mut accepted = 0usize;
    let mut attempts = 0usize;
    let max_attempts = samples.saturating_mul(400);
    let mut violations = Vec::new();

    while accepted < samples && attempts < max_attempts {
        attempts += 1;
        // a random pair of gadgets: satisfaction rows are all that matters
        let m = rng.random_range(1..=6);
        let bits1: Vec<bool> = (0..m).map(|_| rng.random_bool(0.5)).collect();
        let bits2: Vec<bool> = (0..m).map(|_| rng.random_bool(0.5)).collect();
        let g1 = gadget_from_bits(constants, Side::One, &bits1);
        let g2 = gadget_from_bits(constants, Side::Two, &bits2);

        // exact rational parameters in [0, M]
        let den = 64i64;
        let t1 = ratio(rng.random_range(0..=(m as i64) * den), den);
        let t2 = ratio(rng.random_range(0..=(m as i64) * den), den);
        let p1 = g1.eval(&Scalar::Rational(t1.clone())).unwrap();
        let p2 = g2.eval(&Scalar::Rational(t2.clone())).unwrap();

        let sq = match squared_distance(&p1, &p2).unwrap() {
            Scalar::Rational(r) => r,
            Scalar::Float(_) => unreachable!(),
        };
        if sq > limit_sq {
            continue;
        }
        accepted += 1;

        let sym_p1 = g2.eval(&Scalar::Rational(t1.clone())).unwrap();
        let sym_p2 = g1.eval(&Scalar::Rational(t2.clone())).unwrap();
        for (label, a, b) in [("p2 vs sym(p1)", &p2, &sym_p1), ("p1 vs sym(p2)", &p1, &sym_p2)] {
            let d = match squared_distance(a, b).unwrap() {
                Scalar::Rational(r) => r,
                Scalar::Float(_) => unreachable!(),
            };
            if d > ninth_sq {
                violations.push(format!("{label}: squared {d} at t1={t1}, t2={t2}, bits1={bits1:?}, bits2={bits2:?}"));
            }
        }
    }

    report.push(CheckRecord::of(
        "sym-lemma-coverage",
        format!("{accepted} accepted pairs out of {attempts} attempts"),
        accepted == samples,
        format!("only {accepted}/{samples} accepted"),
    ));
    report.push(CheckRecord::of(
        "sym-lemma-within-ninth",
        "all accepted pairs keep both symmetric images within 1/9 (exact)",
        violations.is_empty(),
        violations.join("; "),
    ));
    report
}
