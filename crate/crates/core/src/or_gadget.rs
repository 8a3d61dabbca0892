//! The U-shape OR-composition.
//!
//! Takes any family of curve pairs `(P1^j, P2^j)` whose pairwise Fréchet
//! behavior encodes per-bucket satisfiability, and strings translated copies
//! of them between hook-shaped connector curves on a `rho = 1/sqrt(2)` grid.
//! Any low-width traversal of the assembled pair must align exactly one
//! block in parallel, realizing a logical OR over the buckets: the second
//! curve carries one more U-shape than the first, and only a bucket pair at
//! distance <= 1 lets the traversal absorb the surplus.
//!
//! The family is validated against the geometric side conditions it must
//! satisfy: every `P1^j` inside the unit ball around `(0, rho)`, every
//! `P2^j` inside the unit ball around the origin.

use crate::error::{Error, Result};
use crate::frechet::{continuous_decision, discrete_decision};
use crate::geometry::{concat, translate_x, Curve, Point, Scalar};
use crate::instance::{Gap, InstanceParams, ReductionInstance, ReductionKind};
use crate::packedness::{estimate_packedness, Effort};
use crate::report::{CheckRecord, VerificationReport};
use crate::reduction_plane::{build_plane_curves, GadgetConstants};
use crate::sat::{
    brute_force_sat, enumerate_assignments, CnfFormula, PartialAssignment, VariableSplit,
};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

/// The grid unit `1/sqrt(2)`: diagonal steps of `(rho, rho)` have length 1.
pub const RHO: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Containment slack for the unit-ball family invariants (float mode).
const BALL_TOL: f64 = 1e-9;

/// `U_L(j)`: the left hook, 5 vertices starting at `(j rho, 0)`.
pub fn u_left(j: u32) -> Curve {
    let j = f64::from(j);
    Curve::float2(&[
        (j * RHO, 0.0),
        ((j - 1.0) * RHO, RHO),
        ((j - 1.0) * RHO, 3.0 * RHO),
        ((j - 1.0) * RHO, 2.0 * RHO),
        ((j - 1.0) * RHO, RHO),
    ])
}

/// `U_R(j)`: the right hook, 5 vertices ending at `(j rho, 0)`.
pub fn u_right(j: u32) -> Curve {
    let j = f64::from(j);
    Curve::float2(&[
        ((j + 1.0) * RHO, RHO),
        ((j + 1.0) * RHO, 2.0 * RHO),
        ((j + 1.0) * RHO, 3.0 * RHO),
        ((j + 1.0) * RHO, RHO),
        (j * RHO, 0.0),
    ])
}

/// `U(j) = U_L(j) ∘ U_R(j)`, 10 vertices.
pub fn u_shape(j: u32) -> Curve {
    concat(&[u_left(j), u_right(j)]).expect("hooks share mode")
}

/// One curve pair of a family, with the bucket assignments it was built from
/// (needed to locate the witness bucket of a satisfiable formula).
#[derive(Debug, Clone)]
pub struct FamilyPair {
    pub p1: Curve,
    pub p2: Curve,
    pub bucket1: Vec<PartialAssignment>,
    pub bucket2: Vec<PartialAssignment>,
}

/// A family of curve pairs ready for the OR-composition, together with the
/// claims (rejection threshold, packedness) the composition relies on.
#[derive(Debug, Clone)]
pub struct PairFamily {
    pairs: Vec<FamilyPair>,
    /// Claimed rejection threshold: unsatisfiable buckets exceed this width.
    pub beta: f64,
    /// Claimed packedness of the individual pair curves.
    pub claimed_packedness: f64,
    pub provenance: FamilyProvenance,
}

#[derive(Debug, Clone)]
pub struct FamilyProvenance {
    pub kind: ReductionKind,
    pub buckets_per_side: usize,
    pub epsilon: Option<Scalar>,
    pub formula_sha256: Option<String>,
    pub num_vars: Option<usize>,
    pub num_clauses: Option<usize>,
}

impl PairFamily {
    /// Validates the unit-ball side conditions and wraps the pairs.
    pub fn new(pairs: Vec<FamilyPair>, beta: f64, claimed_packedness: f64, provenance: FamilyProvenance) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::Empty { what: "pair family" });
        }
        if beta.is_nan() || beta <= 1.0 {
            return Err(Error::OutOfRange { what: "beta", detail: format!("{beta} must be > 1") });
        }
        for (j, pair) in pairs.iter().enumerate() {
            let over1 = max_dist_from(&pair.p1, 0.0, RHO);
            if over1 > 1.0 + BALL_TOL {
                return Err(Error::OutOfRange {
                    what: "family invariant",
                    detail: format!("pair {j}: P1 point at distance {over1} from (0, rho)"),
                });
            }
            let over2 = max_dist_from(&pair.p2, 0.0, 0.0);
            if over2 > 1.0 + BALL_TOL {
                return Err(Error::OutOfRange {
                    what: "family invariant",
                    detail: format!("pair {j}: P2 point at distance {over2} from origin"),
                });
            }
        }
        Ok(PairFamily { pairs, beta, claimed_packedness, provenance })
    }

    pub fn pairs(&self) -> &[FamilyPair] {
        &self.pairs
    }
}

/// Max distance of the curve's vertices (first two coordinates) from a
/// planar anchor; higher coordinates count toward the distance.
fn max_dist_from(c: &Curve, x: f64, y: f64) -> f64 {
    let d = c.dim();
    let xs = c.flat_f64();
    let mut worst: f64 = 0.0;
    for i in 0..c.len() {
        let mut sq = (xs[i * d] - x).powi(2) + (xs[i * d + 1] - y).powi(2);
        for k in 2..d {
            sq += xs[i * d + k] * xs[i * d + k];
        }
        worst = worst.max(sq.sqrt());
    }
    worst
}

/// Splits an assignment list into `buckets` contiguous slices whose sizes
/// differ by at most one (larger slices first).
pub fn partition_assignments(assignments: &[PartialAssignment], buckets: usize) -> Result<Vec<Vec<PartialAssignment>>> {
    if buckets == 0 || buckets > assignments.len() {
        return Err(Error::OutOfRange {
            what: "bucket count",
            detail: format!("{buckets} not in [1, {}]", assignments.len()),
        });
    }
    let base = assignments.len() / buckets;
    let extra = assignments.len() % buckets;
    let mut out = Vec::with_capacity(buckets);
    let mut start = 0;
    for b in 0..buckets {
        let size = base + usize::from(b < extra);
        out.push(assignments[start..start + size].to_vec());
        start += size;
    }
    Ok(out)
}

/// The asymptotically balanced bucket count `Theta(2^{(1-gamma)/(1+gamma) * N/2})`,
/// rounded to the nearest integer in `[1, 2^{N/2}]`.
pub fn suggested_bucket_count(num_vars: usize, gamma: f64) -> usize {
    let half = num_vars as f64 / 2.0;
    let exponent = (1.0 - gamma) / (1.0 + gamma) * half;
    let raw = f64::exp2(exponent).round() as usize;
    raw.clamp(1, 1usize << (num_vars / 2).max(1))
}

/// Builds the planar bucket family: partitions both assignment enumerations
/// into `buckets` slices and constructs one planar pair per bucket
/// combination (floats, ready for the rho-grid assembly).
pub fn plane_pair_family(
    constants: &GadgetConstants,
    formula: &CnfFormula,
    split: &VariableSplit,
    buckets: usize,
) -> Result<PairFamily> {
    let a1s = enumerate_assignments(&split.v1())?;
    let a2s = enumerate_assignments(&split.v2())?;
    let b1 = partition_assignments(&a1s, buckets)?;
    let b2 = partition_assignments(&a2s, buckets)?;

    let mut pairs = Vec::with_capacity(buckets * buckets);
    for bucket1 in &b1 {
        for bucket2 in &b2 {
            let inst = build_plane_curves(constants, formula, split, bucket1, bucket2)?;
            pairs.push(FamilyPair {
                p1: inst.p1.to_float(),
                p2: inst.p2.to_float(),
                bucket1: bucket1.clone(),
                bucket2: bucket2.clone(),
            });
        }
    }

    let eps = constants.epsilon().clone();
    let beta = 1.0 + crate::geometry::Scalar::Rational(eps.clone()).to_f64();
    let bucket_size = a1s.len().max(a2s.len()) as f64 / buckets as f64;
    let claimed_packedness = formula.num_clauses() as f64 * bucket_size;
    PairFamily::new(
        pairs,
        beta,
        claimed_packedness,
        FamilyProvenance {
            kind: ReductionKind::OrPacked,
            buckets_per_side: buckets,
            epsilon: Some(Scalar::Rational(eps)),
            formula_sha256: Some(formula.sha256()),
            num_vars: Some(formula.num_vars()),
            num_clauses: Some(formula.num_clauses()),
        },
    )
}

/// Assembles the OR-composition:
/// the first curve chains `U_L(2j) ∘ tr_{2j rho}(P1^j) ∘ U_R(2j)` over all
/// pairs, the second starts with `U(1)` and chains
/// `tr_{2j rho}(P2^j) ∘ U(2j+1)`.
pub fn build_or_curves(family: &PairFamily) -> Result<ReductionInstance> {
    let mut parts1 = Vec::new();
    let mut parts2 = vec![u_shape(1)];
    for (idx, pair) in family.pairs.iter().enumerate() {
        let j = (idx + 1) as u32;
        let shift = Scalar::float(2.0 * f64::from(j) * RHO);
        parts1.push(u_left(2 * j));
        parts1.push(translate_x(&pad_to_dim(&pair.p1, 2)?, &shift)?);
        parts1.push(u_right(2 * j));
        parts2.push(translate_x(&pad_to_dim(&pair.p2, 2)?, &shift)?);
        parts2.push(u_shape(2 * j + 1));
    }
    let p1 = concat(&parts1)?;
    let p2 = concat(&parts2)?;

    let reject = family.beta.min(1.2);
    Ok(ReductionInstance {
        kind: family.provenance.kind,
        p1,
        p2,
        gap: Gap { accept: Scalar::float(1.0), reject_above: Scalar::float(reject) },
        params: InstanceParams {
            epsilon: family.provenance.epsilon.clone(),
            buckets: Some(family.provenance.buckets_per_side),
            beta: Some(family.beta),
            claimed_packedness: Some(family.claimed_packedness),
            ..Default::default()
        },
        formula_sha256: family.provenance.formula_sha256.clone(),
        num_vars: family.provenance.num_vars,
        num_clauses: family.provenance.num_clauses,
    })
}

/// Embeds a curve into `dim` dimensions (the hooks live in the plane; the
/// five-dimensional pairs bring their own embedding of the hooks instead).
fn pad_to_dim(c: &Curve, dim: usize) -> Result<Curve> {
    if c.dim() == dim {
        return Ok(c.clone());
    }
    if c.dim() < dim {
        let points = c
            .points()
            .iter()
            .map(|p| {
                let mut v = p.to_f64_vec();
                v.resize(dim, 0.0);
                Point::from_f64(&v)
            })
            .collect();
        return Curve::new(points);
    }
    Err(Error::DimensionMismatch { left: c.dim(), right: dim })
}

/// Lifts the planar hooks into the family's dimension when needed, then
/// assembles. Five-dimensional families embed the rho-grid into the first
/// two coordinates.
pub fn build_or_curves_embedded(family: &PairFamily) -> Result<ReductionInstance> {
    let dim = family.pairs[0].p1.dim();
    if dim == 2 {
        return build_or_curves(family);
    }
    // pad the hooks up to the family's dimension
    let mut parts1 = Vec::new();
    let mut parts2 = vec![pad_to_dim(&u_shape(1), dim)?];
    for (idx, pair) in family.pairs.iter().enumerate() {
        let j = (idx + 1) as u32;
        let shift = Scalar::float(2.0 * f64::from(j) * RHO);
        parts1.push(pad_to_dim(&u_left(2 * j), dim)?);
        parts1.push(translate_x(&pair.p1, &shift)?);
        parts1.push(pad_to_dim(&u_right(2 * j), dim)?);
        parts2.push(translate_x(&pair.p2, &shift)?);
        parts2.push(pad_to_dim(&u_shape(2 * j + 1), dim)?);
    }
    let p1 = concat(&parts1)?;
    let p2 = concat(&parts2)?;
    let reject = family.beta.min(1.2);
    Ok(ReductionInstance {
        kind: family.provenance.kind,
        p1,
        p2,
        gap: Gap { accept: Scalar::float(1.0), reject_above: Scalar::float(reject) },
        params: InstanceParams {
            epsilon: family.provenance.epsilon.clone(),
            buckets: Some(family.provenance.buckets_per_side),
            beta: Some(family.beta),
            claimed_packedness: Some(family.claimed_packedness),
            ..Default::default()
        },
        formula_sha256: family.provenance.formula_sha256.clone(),
        num_vars: family.provenance.num_vars,
        num_clauses: family.provenance.num_clauses,
    })
}

/// Checks the family side conditions against the formula and oracle:
///
/// * a satisfiable formula has a bucket pair at discrete width <= 1
///   (located via the brute-force witness);
/// * for an unsatisfiable formula, sampled prefix/suffix paddings
///   (the constrained ones staying above-left of `(-rho, rho)` resp.
///   above-right of `(rho, rho)`) never admit width `beta`;
/// * every `P1^j` sits in the unit ball around `(0, rho)`, every `P2^j`
///   around the origin;
/// * the packedness estimate of each pair curve stays within `[c/8, 8c]`
///   of the claimed packedness.
pub fn check_property_pg(family: &PairFamily, formula: &CnfFormula, seed: u64) -> VerificationReport {
    let mut report = VerificationReport::with_seed("pair-family", seed, format!("pairs={}", family.pairs.len()));
    let witness = brute_force_sat(formula).ok().flatten();

    // (i) witness bucket at width <= 1
    if let Some(w) = &witness {
        let mut found = false;
        for pair in &family.pairs {
            let hit1 = pair.bucket1.iter().any(|a| agrees(w, a));
            let hit2 = pair.bucket2.iter().any(|a| agrees(w, a));
            if hit1 && hit2 {
                let ok = discrete_decision(&pair.p1, &pair.p2, &Scalar::float(1.0)).unwrap_or(false);
                report.push(CheckRecord::of(
                    "family-witness-bucket-accepts",
                    "bucket pair containing the satisfying witness has width <= 1",
                    ok,
                    format!("witness {:?}", w.values()),
                ));
                found = true;
                break;
            }
        }
        if !found {
            report.push(CheckRecord::fail(
                "family-witness-bucket-accepts",
                "witness bucket lookup",
                "no bucket pair contains the witness".to_string(),
            ));
        }
    } else {
        // (ii) sampled paddings never drop the width to beta. Planar
        // families reject continuously; the five-dimensional ones only
        // discretely (interpolation along the pure-e5 excursion admits
        // sub-1 continuous traversals there), so the decision procedure
        // follows the family kind.
        let continuous = family.provenance.kind != ReductionKind::HighDim;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut violations = Vec::new();
        for (j, pair) in family.pairs.iter().enumerate() {
            for trial in 0..4 {
                let sigma1 = random_constrained(&mut rng, -6.0, -RHO, RHO, 6.0);
                let pi1 = random_constrained(&mut rng, RHO, 6.0, RHO, 6.0);
                let sigma2 = random_box(&mut rng, -1.5, 1.5);
                let pi2 = random_box(&mut rng, -1.5, 1.5);
                let e1 = concat_padded(&sigma1, &pad_to_dim(&pair.p1, pair.p1.dim()).unwrap(), &pi1);
                let e2 = concat_padded(&sigma2, &pair.p2, &pi2);
                // the five-dimensional unsat width sits exactly at beta
                // (boundary family), so the discrete probe aims halfway
                // into the gap
                let verdict = if continuous {
                    continuous_decision(&e1, &e2, family.beta)
                } else {
                    let probe = 1.0 + (family.beta - 1.0) / 2.0;
                    crate::frechet::discrete_decision_with_tol(&e1, &e2, &Scalar::float(probe), 0.0)
                };
                match verdict {
                    Ok(false) => {}
                    Ok(true) => violations.push(format!("pair {j} trial {trial} admitted width {}", family.beta)),
                    Err(e) => violations.push(format!("pair {j} trial {trial}: {e}")),
                }
            }
        }
        report.push(CheckRecord::of(
            "family-unsat-rejects-padded",
            format!(
                "padded unsatisfiable pairs exceed beta = {} ({} decision)",
                family.beta,
                if continuous { "continuous" } else { "discrete" }
            ),
            violations.is_empty(),
            violations.join("; "),
        ));
    }

    // (iv)/(v) unit-ball containment (also enforced at construction)
    let mut worst1: f64 = 0.0;
    let mut worst2: f64 = 0.0;
    for pair in &family.pairs {
        worst1 = worst1.max(max_dist_from(&pair.p1, 0.0, RHO));
        worst2 = worst2.max(max_dist_from(&pair.p2, 0.0, 0.0));
    }
    report.push(CheckRecord::of(
        "family-p1-in-unit-ball",
        format!("max |P1^j - (0, rho)| = {worst1:.6}"),
        worst1 <= 1.0 + BALL_TOL,
        format!("{worst1}"),
    ));
    report.push(CheckRecord::of(
        "family-p2-in-unit-ball",
        format!("max |P2^j| = {worst2:.6}"),
        worst2 <= 1.0 + BALL_TOL,
        format!("{worst2}"),
    ));

    // (iii) packedness bracket. The estimator is cubic in the vertex count,
    // so inside campaigns only curves up to the cap are measured; the
    // acceptance suite runs the bracket on dedicated instances. Planar
    // families meet an 8x slack; the five-dimensional ones carry a larger
    // measured constant (see reduction_highdim::PACKEDNESS_UPPER_SLACK).
    let claim = family.claimed_packedness;
    let upper_slack = if family.provenance.kind == ReductionKind::HighDim {
        crate::reduction_highdim::PACKEDNESS_UPPER_SLACK
    } else {
        8.0
    };
    let mut out_of_bracket = Vec::new();
    let mut measured = 0usize;
    for (j, pair) in family.pairs.iter().enumerate() {
        for (side, curve) in [(1, &pair.p1), (2, &pair.p2)] {
            if curve.len() > PACKEDNESS_CHECK_CAP {
                continue;
            }
            measured += 1;
            match estimate_packedness(curve, Effort::Fast) {
                Ok(est) => {
                    if est.value < claim / 8.0 || est.value > claim * upper_slack {
                        out_of_bracket.push(format!("pair {j} side {side}: estimate {:.3} vs claim {claim:.3}", est.value));
                    }
                }
                Err(e) => out_of_bracket.push(format!("pair {j} side {side}: {e}")),
            }
        }
    }
    report.push(CheckRecord::of(
        "family-packedness-bracket",
        format!(
            "estimates within [c/8, {upper_slack}c] of claim c = {claim:.3} ({measured}/{} curves measured, cap {PACKEDNESS_CHECK_CAP} vertices)",
            2 * family.pairs.len()
        ),
        out_of_bracket.is_empty(),
        out_of_bracket.join("; "),
    ));

    report
}

/// Largest curve the in-campaign packedness bracket measures.
pub const PACKEDNESS_CHECK_CAP: usize = 200;

/// Does the full witness extend the partial assignment?
fn agrees(witness: &PartialAssignment, partial: &PartialAssignment) -> bool {
    partial
        .vars()
        .iter()
        .zip(partial.values())
        .all(|(v, val)| witness.get(*v) == Some(*val))
}

fn random_constrained(rng: &mut ChaCha8Rng, x_lo: f64, x_hi: f64, y_lo: f64, y_hi: f64) -> Curve {
    let len = rng.random_range(1..=4);
    Curve::float2(
        &(0..len)
            .map(|_| (rng.random_range(x_lo..x_hi), rng.random_range(y_lo..y_hi)))
            .collect::<Vec<_>>(),
    )
}

fn random_box(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> Curve {
    let len = rng.random_range(1..=4);
    Curve::float2(
        &(0..len)
            .map(|_| (rng.random_range(lo..hi), rng.random_range(lo..hi)))
            .collect::<Vec<_>>(),
    )
}

fn concat_padded(prefix: &Curve, body: &Curve, suffix: &Curve) -> Curve {
    let dim = body.dim();
    let parts = [
        pad_to_dim(prefix, dim).unwrap(),
        body.clone(),
        pad_to_dim(suffix, dim).unwrap(),
    ];
    concat(&parts).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frechet::discrete_decision_with_tol;

    fn formula(n: usize, clauses: &[&[i32]]) -> CnfFormula {
        CnfFormula::new(n, clauses.iter().map(|c| c.to_vec()).collect()).unwrap()
    }

    #[test]
    fn u_left_vertices() {
        let u = u_left(2);
        let expect = [
            (2.0 * RHO, 0.0),
            (RHO, RHO),
            (RHO, 3.0 * RHO),
            (RHO, 2.0 * RHO),
            (RHO, RHO),
        ];
        for (p, e) in u.points().iter().zip(expect) {
            let v = p.to_f64_vec();
            assert!((v[0] - e.0).abs() < 1e-15 && (v[1] - e.1).abs() < 1e-15);
        }
        assert_eq!(u_shape(3).len(), 10);
    }

    #[test]
    fn grid_connector_distance_is_one() {
        // (2j rho, 0) to ((2j±1) rho, rho) is a unit step
        for j in 1..=4u32 {
            for sgn in [-1.0, 1.0] {
                let a = Point::from_f64(&[2.0 * f64::from(j) * RHO, 0.0]);
                let b = Point::from_f64(&[(2.0 * f64::from(j) + sgn) * RHO, RHO]);
                let d = crate::geometry::distance(&a, &b).unwrap();
                assert!((d - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn partition_shapes() {
        let a = enumerate_assignments(&[1, 2, 3]).unwrap();
        let b = partition_assignments(&a, 2).unwrap();
        assert_eq!(b.iter().map(Vec::len).collect::<Vec<_>>(), vec![4, 4]);
        let b = partition_assignments(&a, 3).unwrap();
        assert_eq!(b.iter().map(Vec::len).collect::<Vec<_>>(), vec![3, 3, 2]);
        // union preserves order with no overlap
        let rejoined: Vec<_> = b.into_iter().flatten().collect();
        assert_eq!(rejoined, a);
        assert!(partition_assignments(&a, 0).is_err());
        assert!(partition_assignments(&a, 9).is_err());
    }

    #[test]
    fn or_vertex_counts() {
        let f = formula(2, &[&[1, 2]]);
        let split = VariableSplit::halves(2).unwrap();
        let family = plane_pair_family(&GadgetConstants::standard(), &f, &split, 1).unwrap();
        assert_eq!(family.pairs().len(), 1);
        assert_eq!(family.pairs()[0].p1.len(), 8);
        assert_eq!(family.pairs()[0].p2.len(), 8);
        let inst = build_or_curves(&family).unwrap();
        // |R1| = sum(|P1^j| + 10); |R2| = 10 + sum(|P2^j| + 10)
        assert_eq!(inst.p1.len(), 18);
        assert_eq!(inst.p2.len(), 28);
    }

    #[test]
    fn block_recovery_after_untranslation() {
        let f = formula(4, &[&[1, 2], &[3, -4]]);
        let split = VariableSplit::halves(4).unwrap();
        let family = plane_pair_family(&GadgetConstants::standard(), &f, &split, 2).unwrap();
        let inst = build_or_curves(&family).unwrap();
        // strip the hooks around block j and undo the shift
        let mut offset = 0;
        for (idx, pair) in family.pairs().iter().enumerate() {
            let j = (idx + 1) as f64;
            offset += 5; // U_L
            let block = Curve::new(inst.p1.points()[offset..offset + pair.p1.len()].to_vec()).unwrap();
            let back = translate_x(&block, &Scalar::float(-2.0 * j * RHO)).unwrap();
            for (a, b) in back.points().iter().zip(pair.p1.points()) {
                let (a, b) = (a.to_f64_vec(), b.to_f64_vec());
                assert!((a[0] - b[0]).abs() < 1e-12 && (a[1] - b[1]).abs() < 1e-12);
            }
            offset += pair.p1.len() + 5; // block + U_R
        }
        // R2 has exactly one more hook than R1
        let hooks1 = family.pairs().len() * 10;
        let hooks2 = (family.pairs().len() + 1) * 10;
        assert_eq!(inst.p1.len() - hooks1, family.pairs().iter().map(|p| p.p1.len()).sum::<usize>());
        assert_eq!(inst.p2.len() - hooks2, family.pairs().iter().map(|p| p.p2.len()).sum::<usize>());
    }

    #[test]
    fn or_semantics_small_formulas() {
        let cases: Vec<(CnfFormula, bool)> = vec![
            (formula(2, &[&[1, 2]]), true),
            (formula(2, &[&[1], &[-1]]), false),
            (formula(4, &[&[1, 3], &[-2, 4], &[-1, -3]]), true),
            (formula(4, &[&[1], &[-1], &[2, 3]]), false),
        ];
        for (f, expect_sat) in cases {
            assert_eq!(brute_force_sat(&f).unwrap().is_some(), expect_sat);
            for buckets in [1usize, 2] {
                if (1usize << (f.num_vars() / 2)) < buckets {
                    continue;
                }
                let split = VariableSplit::halves(f.num_vars()).unwrap();
                let family = plane_pair_family(&GadgetConstants::standard(), &f, &split, buckets).unwrap();
                let inst = build_or_curves(&family).unwrap();
                let accept = discrete_decision(&inst.p1, &inst.p2, &Scalar::float(1.0)).unwrap();
                assert_eq!(accept, expect_sat, "N={} buckets={buckets}", f.num_vars());
                if !expect_sat {
                    let delta = inst.gap.reject_above.to_f64() - 1e-6;
                    assert!(!discrete_decision_with_tol(&inst.p1, &inst.p2, &Scalar::float(delta), 0.0).unwrap());
                    assert!(!continuous_decision(&inst.p1, &inst.p2, delta).unwrap());
                } else {
                    assert!(continuous_decision(&inst.p1, &inst.p2, 1.0).unwrap());
                }
            }
        }
    }

    #[test]
    fn family_invariant_violation_is_rejected() {
        let far = Curve::float2(&[(5.0, 5.0), (6.0, 5.0)]);
        let near = Curve::float2(&[(0.0, 0.0), (0.1, 0.1)]);
        let pair = FamilyPair { p1: far, p2: near, bucket1: vec![], bucket2: vec![] };
        let prov = FamilyProvenance {
            kind: ReductionKind::OrPacked,
            buckets_per_side: 1,
            epsilon: None,
            formula_sha256: None,
            num_vars: None,
            num_clauses: None,
        };
        assert!(PairFamily::new(vec![pair], 1.001, 1.0, prov).is_err());
    }

    #[test]
    fn property_pg_checks_pass_both_ways() {
        let sat_f = formula(4, &[&[1, 3], &[2, -4]]);
        let unsat_f = formula(4, &[&[1], &[-1], &[2, 3]]);
        for (f, _sat) in [(sat_f, true), (unsat_f, false)] {
            let split = VariableSplit::halves(4).unwrap();
            let family = plane_pair_family(&GadgetConstants::standard(), &f, &split, 2).unwrap();
            let report = check_property_pg(&family, &f, 3);
            assert!(report.passed(), "{}", report.to_json());
        }
    }

    #[test]
    fn suggested_bucket_counts() {
        assert_eq!(suggested_bucket_count(8, 1.0), 1); // balanced: one bucket
        let l = suggested_bucket_count(8, 0.0); // gamma 0: ~2^{N/2}
        assert_eq!(l, 16);
        assert!(suggested_bucket_count(6, 0.5) >= 1);
    }
}
