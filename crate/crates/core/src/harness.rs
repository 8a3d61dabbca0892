//! End-to-end verification campaigns and scaling benchmarks.
//!
//! A campaign draws random formulas (plus crafted corner cases), builds the
//! requested instance kinds, and checks the accept/reject behavior of both
//! Fréchet decisions against the brute-force oracle, attaching the
//! gadget-level lemma checks of each kind. Reports are deterministic given
//! (seed, config): items derive their RNG streams from the campaign seed
//! and no wall-clock data enters a report.

use crate::error::Result;
use crate::frechet::{continuous_decision, discrete_decision_with_tol, discrete_frechet};
use crate::geometry::Scalar;
use crate::instance::ReductionInstance;
use crate::or_gadget::{build_or_curves, check_property_pg, plane_pair_family};
use crate::packedness::{estimate_packedness, Effort};
use crate::reduction_highdim::{
    check_highdim_distances, highdim_pair_family, packedness_claim_check, DEFAULT_EPSILON,
};
use crate::reduction_plane::{build_imbalanced, build_plane_curves, check_distance_table, check_sym_lemma, GadgetConstants};
use crate::report::{CheckRecord, VerificationReport};
use crate::sat::{brute_force_sat, enumerate_assignments, CnfFormula, VariableSplit};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::fmt::Write as _;
use std::time::Instant;

/// Which reduction to exercise, with its parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KindSpec {
    Plane,
    Imbalanced { gamma: f64 },
    OrPacked { buckets: usize },
    HighDim { epsilon: f64, buckets: usize },
}

impl KindSpec {
    pub fn label(&self) -> String {
        match self {
            KindSpec::Plane => "plane".into(),
            KindSpec::Imbalanced { gamma } => format!("imbalanced(gamma={gamma})"),
            KindSpec::OrPacked { buckets } => format!("or_packed(ell={buckets})"),
            KindSpec::HighDim { epsilon, buckets } => format!("highdim(eps={epsilon}, ell={buckets})"),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        match self {
            KindSpec::Plane => serde_json::json!({"kind": "plane"}),
            KindSpec::Imbalanced { gamma } => serde_json::json!({"kind": "imbalanced", "gamma": gamma}),
            KindSpec::OrPacked { buckets } => serde_json::json!({"kind": "or_packed", "ell": buckets}),
            KindSpec::HighDim { epsilon, buckets } => {
                serde_json::json!({"kind": "highdim", "epsilon": epsilon, "ell": buckets})
            }
        }
    }

    pub fn from_json(v: &serde_json::Value) -> Option<KindSpec> {
        match v.get("kind")?.as_str()? {
            "plane" => Some(KindSpec::Plane),
            "imbalanced" => Some(KindSpec::Imbalanced { gamma: v.get("gamma")?.as_f64()? }),
            "or_packed" => Some(KindSpec::OrPacked { buckets: v.get("ell")?.as_u64()? as usize }),
            "highdim" => Some(KindSpec::HighDim {
                epsilon: v.get("epsilon")?.as_f64()?,
                buckets: v.get("ell")?.as_u64()? as usize,
            }),
            _ => None,
        }
    }
}

/// Campaign parameters. The default mirrors the standing verification
/// suite: 200 random formulas over N in {2,4,6,8,10} at densities 2 and 4,
/// corner cases included, all four kinds.
#[derive(Debug, Clone)]
pub struct CampaignConfig {
    pub seed: u64,
    pub var_counts: Vec<usize>,
    pub trials_per_count: usize,
    pub densities: Vec<f64>,
    pub kinds: Vec<KindSpec>,
    pub include_crafted: bool,
}

impl Default for CampaignConfig {
    fn default() -> Self {
        CampaignConfig {
            seed: 0x0F5E_C4E7,
            var_counts: vec![2, 4, 6, 8, 10],
            trials_per_count: 40,
            densities: vec![2.0, 4.0],
            kinds: vec![
                KindSpec::Plane,
                KindSpec::Imbalanced { gamma: 0.5 },
                KindSpec::OrPacked { buckets: 2 },
                KindSpec::HighDim { epsilon: DEFAULT_EPSILON, buckets: 2 },
            ],
            include_crafted: true,
        }
    }
}

impl CampaignConfig {
    /// Canonical one-line snapshot (part of the report, so keep it stable).
    pub fn snapshot(&self) -> String {
        let mut s = String::new();
        let _ = write!(
            s,
            "seed={} vars={:?} trials={} densities={:?} crafted={} kinds=[",
            self.seed, self.var_counts, self.trials_per_count, self.densities, self.include_crafted
        );
        for (i, k) in self.kinds.iter().enumerate() {
            if i > 0 {
                s.push(',');
            }
            s.push_str(&k.label());
        }
        s.push(']');
        s
    }
}

/// Random formula with planted clauses of width up to 3 (distinct variables,
/// random signs).
pub fn random_formula(num_vars: usize, num_clauses: usize, rng: &mut ChaCha8Rng) -> CnfFormula {
    let width = 3.min(num_vars);
    let clauses = (0..num_clauses.max(1))
        .map(|_| {
            let mut vars: Vec<u32> = (1..=num_vars as u32).collect();
            let mut clause = Vec::with_capacity(width);
            for _ in 0..width {
                let idx = rng.random_range(0..vars.len());
                let v = vars.swap_remove(idx);
                clause.push(if rng.random_bool(0.5) { v as i32 } else { -(v as i32) });
            }
            clause
        })
        .collect();
    CnfFormula::new(num_vars, clauses).expect("generated formula is well-formed")
}

/// Appends a contradiction on x1, forcing unsatisfiability.
pub fn force_unsat(formula: &CnfFormula) -> CnfFormula {
    let mut clauses = formula.clauses().to_vec();
    clauses.push(vec![1]);
    clauses.push(vec![-1]);
    CnfFormula::new(formula.num_vars(), clauses).expect("still well-formed")
}

/// Crafted corner cases for a variable count: a single wide clause,
/// duplicated clauses, and a forced-unsat wrapper.
pub fn crafted_formulas(num_vars: usize, rng: &mut ChaCha8Rng) -> Vec<CnfFormula> {
    let single = CnfFormula::new(num_vars, vec![(1..=num_vars as i32).collect()]).unwrap();
    let dup_clause: Vec<i32> = vec![1, -(2.min(num_vars) as i32)];
    let duplicated = CnfFormula::new(num_vars, vec![dup_clause.clone(), dup_clause.clone(), dup_clause]).unwrap();
    let forced = force_unsat(&random_formula(num_vars, 2 * num_vars, rng));
    vec![single, duplicated, forced]
}

fn sub_seed(seed: u64, index: u64) -> u64 {
    // splitmix64 step keeps item streams independent of ordering
    let mut z = seed.wrapping_add(index.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Builds an instance of the requested kind. Bucket counts are clamped so
/// every bucket is non-empty (and, for the five-dimensional kind, has at
/// least 2 assignments — see the module notes there).
pub fn build_instance(formula: &CnfFormula, kind: &KindSpec) -> Result<ReductionInstance> {
    let constants = GadgetConstants::standard();
    match kind {
        KindSpec::Plane => {
            let split = VariableSplit::halves(formula.num_vars())?;
            let a1s = enumerate_assignments(&split.v1())?;
            let a2s = enumerate_assignments(&split.v2())?;
            build_plane_curves(&constants, formula, &split, &a1s, &a2s)
        }
        KindSpec::Imbalanced { gamma } => build_imbalanced(&constants, formula, *gamma),
        KindSpec::OrPacked { buckets } => {
            let split = VariableSplit::halves(formula.num_vars())?;
            let max_buckets = 1usize << split.ell().min(formula.num_vars() - split.ell());
            let family = plane_pair_family(&constants, formula, &split, (*buckets).clamp(1, max_buckets))?;
            build_or_curves(&family)
        }
        KindSpec::HighDim { epsilon, buckets } => {
            let split = VariableSplit::halves(formula.num_vars())?;
            let min_half = split.ell().min(formula.num_vars() - split.ell());
            let max_buckets = (1usize << min_half) / 2;
            let family = highdim_pair_family(formula, &split, (*buckets).clamp(1, max_buckets.max(1)), *epsilon)?;
            crate::or_gadget::build_or_curves_embedded(&family)
        }
    }
}

/// Verifies one formula against one kind: builds the instance, consults the
/// brute-force oracle, checks both Fréchet decisions at the instance's gap,
/// the vertex-count formulas, and the kind's gadget-level lemma checks.
pub fn verify_reduction(formula: &CnfFormula, kind: &KindSpec, seed: u64) -> VerificationReport {
    let mut report = VerificationReport::with_seed(
        format!("verify[{}]", kind.label()),
        seed,
        format!("N={} M={} sha={}", formula.num_vars(), formula.num_clauses(), &formula.sha256()[..12]),
    );
    let witness = match brute_force_sat(formula) {
        Ok(w) => w,
        Err(e) => {
            report.push(CheckRecord::fail("oracle", "brute-force SAT", e.to_string()));
            return report;
        }
    };
    let satisfiable = witness.is_some();
    let ctx = format!("N={} M={} sat={} kind={}", formula.num_vars(), formula.num_clauses(), satisfiable, kind.label());
    // failure witnesses embed everything needed to replay the item
    let witness_blob = serde_json::json!({
        "kind_spec": kind.to_json(),
        "seed": seed,
        "satisfiable": satisfiable,
        "dimacs": formula.to_dimacs(),
    })
    .to_string();

    let inst = match build_instance(formula, kind) {
        Ok(i) => i,
        Err(e) => {
            report.push(CheckRecord::fail("build", ctx, format!("{e} | {witness_blob}")));
            return report;
        }
    };

    match kind {
        KindSpec::Plane | KindSpec::Imbalanced { .. } => {
            verify_planar_instance(&mut report, formula, &inst, satisfiable, &ctx, &witness_blob);
            let constants = GadgetConstants::standard();
            report.merge(check_distance_table(&constants));
            report.merge(check_sym_lemma(&constants, 50, sub_seed(seed, 101)));
        }
        KindSpec::OrPacked { .. } => {
            verify_or_instance(&mut report, &inst, satisfiable, &ctx, &witness_blob);
            let constants = GadgetConstants::standard();
            let split = VariableSplit::halves(formula.num_vars()).expect("built above");
            let buckets = inst.params.buckets.unwrap_or(1);
            if let Ok(family) = plane_pair_family(&constants, formula, &split, buckets) {
                report.merge(check_property_pg(&family, formula, sub_seed(seed, 7)));
            }
        }
        KindSpec::HighDim { epsilon, .. } => {
            verify_highdim_instance(&mut report, &inst, satisfiable, *epsilon, &ctx, &witness_blob);
            report.merge(check_highdim_distances(*epsilon, 40, sub_seed(seed, 13)));
            let split = VariableSplit::halves(formula.num_vars()).expect("built above");
            let buckets = inst.params.buckets.unwrap_or(1);
            if let Ok(family) = highdim_pair_family(formula, &split, buckets, *epsilon) {
                if let Some(pair) = family.pairs().first() {
                    // same size cap as the family check: the estimator is
                    // cubic and the acceptance suite owns the big cases
                    if pair.p2.len() <= crate::or_gadget::PACKEDNESS_CHECK_CAP {
                        report.merge(packedness_claim_check(
                            &pair.p2,
                            *epsilon,
                            formula.num_clauses(),
                            pair.bucket2.len(),
                            true,
                        ));
                    }
                }
            }
        }
    }
    report
}

fn verify_planar_instance(
    report: &mut VerificationReport,
    formula: &CnfFormula,
    inst: &ReductionInstance,
    satisfiable: bool,
    ctx: &str,
    witness: &str,
) {
    // exact discrete decisions at 1 and 1 + eps
    let accept = discrete_decision_with_tol(&inst.p1, &inst.p2, &inst.gap.accept, 0.0).unwrap();
    report.push(CheckRecord::of(
        "discrete-accept-iff-sat",
        format!("{ctx}: exact decision at 1"),
        accept == satisfiable,
        witness,
    ));
    let within_reject = discrete_decision_with_tol(&inst.p1, &inst.p2, &inst.gap.reject_above, 0.0).unwrap();
    report.push(CheckRecord::of(
        "discrete-gap",
        format!("{ctx}: exact decision at 1+eps matches satisfiability (no value in the gap)"),
        within_reject == satisfiable,
        witness,
    ));

    // continuous decisions on the float conversion
    let f1 = inst.p1.to_float();
    let f2 = inst.p2.to_float();
    let cont_accept = continuous_decision(&f1, &f2, 1.0).unwrap();
    report.push(CheckRecord::of(
        "continuous-accept-iff-sat",
        format!("{ctx}: free-space decision at 1"),
        cont_accept == satisfiable,
        witness,
    ));
    if !satisfiable {
        let cont_reject = continuous_decision(&f1, &f2, inst.gap.reject_above.to_f64()).unwrap();
        report.push(CheckRecord::of(
            "continuous-reject",
            format!("{ctx}: free-space decision at 1+eps rejects"),
            !cont_reject,
            witness,
        ));
    }

    // vertex-count formulas
    let ell = inst.params.ell_split.unwrap_or(formula.num_vars() / 2);
    let m = formula.num_clauses();
    let expect1 = (1usize << ell) * (m + 3);
    let expect2 = (1usize << (formula.num_vars() - ell)) * (m + 1) + 4;
    report.push(CheckRecord::of(
        "vertex-counts",
        format!("{ctx}: |P1| = 2^ell (M+3), |P2| = 2^(N-ell) (M+1) + 4"),
        inst.p1.len() == expect1 && inst.p2.len() == expect2,
        format!("got ({}, {}), expected ({expect1}, {expect2}) | {witness}", inst.p1.len(), inst.p2.len()),
    ));
}

fn verify_or_instance(
    report: &mut VerificationReport,
    inst: &ReductionInstance,
    satisfiable: bool,
    ctx: &str,
    witness: &str,
) {
    let accept = discrete_decision_with_tol(&inst.p1, &inst.p2, &inst.gap.accept, 1e-9).unwrap();
    report.push(CheckRecord::of(
        "or-discrete-accept-iff-sat",
        format!("{ctx}: discrete decision at 1"),
        accept == satisfiable,
        witness,
    ));
    let cont = continuous_decision(&inst.p1, &inst.p2, 1.0).unwrap();
    report.push(CheckRecord::of(
        "or-continuous-accept-iff-sat",
        format!("{ctx}: continuous decision at 1"),
        cont == satisfiable,
        witness,
    ));
    if !satisfiable {
        let delta = inst.gap.reject_above.to_f64() - 1e-6;
        let rejected_d = !discrete_decision_with_tol(&inst.p1, &inst.p2, &Scalar::float(delta), 0.0).unwrap();
        let rejected_c = !continuous_decision(&inst.p1, &inst.p2, delta).unwrap();
        report.push(CheckRecord::of(
            "or-rejects-at-threshold",
            format!("{ctx}: rejection at min(beta, 1.2) - 1e-6 = {delta}"),
            rejected_d && rejected_c,
            format!("discrete={rejected_d} continuous={rejected_c} | {witness}"),
        ));
    }
}

fn verify_highdim_instance(
    report: &mut VerificationReport,
    inst: &ReductionInstance,
    satisfiable: bool,
    epsilon: f64,
    ctx: &str,
    witness: &str,
) {
    let accept = discrete_decision_with_tol(&inst.p1, &inst.p2, &inst.gap.accept, 1e-9).unwrap();
    report.push(CheckRecord::of(
        "highdim-discrete-accept-iff-sat",
        format!("{ctx}: discrete decision at 1"),
        accept == satisfiable,
        witness,
    ));
    if satisfiable {
        let cont = continuous_decision(&inst.p1, &inst.p2, 1.0).unwrap();
        report.push(CheckRecord::of(
            "highdim-continuous-accepts-sat",
            format!("{ctx}: continuous decision at 1 accepts"),
            cont,
            witness,
        ));
    } else {
        // rejection is discrete for this family (see reduction_highdim)
        let delta = 1.0 + epsilon / 2.0;
        let rejected = !discrete_decision_with_tol(&inst.p1, &inst.p2, &Scalar::float(delta), 0.0).unwrap();
        report.push(CheckRecord::of(
            "highdim-discrete-rejects",
            format!("{ctx}: discrete rejection at 1 + eps/2"),
            rejected,
            witness,
        ));
    }
}

/// Runs the whole campaign: random formulas per variable count and density,
/// crafted corner cases, every kind. Items execute in parallel; the merged
/// report is in deterministic item order.
pub fn run_campaign(config: &CampaignConfig) -> VerificationReport {
    let mut report = VerificationReport::with_seed("campaign", config.seed, config.snapshot());
    if config.kinds.is_empty() {
        report.push(CheckRecord::fail("campaign-config", "kind list", "no kinds requested"));
        return report;
    }
    if config.var_counts.is_empty() {
        report.push(CheckRecord::fail("campaign-config", "variable counts", "no variable counts requested"));
        return report;
    }

    // deterministic item list
    let mut items: Vec<(CnfFormula, KindSpec, u64)> = Vec::new();
    let mut index = 0u64;
    for &n in &config.var_counts {
        let n = n.max(2);
        let mut rng = ChaCha8Rng::seed_from_u64(sub_seed(config.seed, 1000 + n as u64));
        for t in 0..config.trials_per_count {
            let density = config.densities[t % config.densities.len().max(1)];
            let m = ((n as f64 * density).round() as usize).max(1);
            let formula = random_formula(n, m, &mut rng);
            for kind in &config.kinds {
                items.push((formula.clone(), *kind, sub_seed(config.seed, index)));
                index += 1;
            }
        }
        if config.include_crafted {
            for formula in crafted_formulas(n, &mut rng) {
                for kind in &config.kinds {
                    items.push((formula.clone(), *kind, sub_seed(config.seed, index)));
                    index += 1;
                }
            }
        }
    }

    let sub_reports: Vec<VerificationReport> = items
        .par_iter()
        .map(|(formula, kind, seed)| verify_reduction(formula, kind, *seed))
        .collect();
    for sub in sub_reports {
        report.merge(sub);
    }
    report
}

/// One measured row of the scaling table.
#[derive(Debug, Clone)]
pub struct ScalingRow {
    pub kind: String,
    pub n: usize,
    pub m: usize,
    pub dp_cells: usize,
    pub c_estimate: Option<f64>,
    pub t_discrete_ms: f64,
    pub t_continuous_ms: f64,
}

/// Timing rows plus the fitted log-log slope of the discrete DP column.
#[derive(Debug, Clone)]
pub struct ScalingTable {
    pub rows: Vec<ScalingRow>,
    pub discrete_slope: f64,
}

impl ScalingTable {
    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{:<12} {:>7} {:>7} {:>12} {:>10} {:>14} {:>16}", "kind", "n", "m", "dp_cells", "c_est", "t_discrete_ms", "t_continuous_ms");
        for r in &self.rows {
            let c = r.c_estimate.map_or("-".to_string(), |c| format!("{c:.2}"));
            let _ = writeln!(
                out,
                "{:<12} {:>7} {:>7} {:>12} {:>10} {:>14.3} {:>16.3}",
                r.kind, r.n, r.m, r.dp_cells, c, r.t_discrete_ms, r.t_continuous_ms
            );
        }
        let _ = writeln!(out, "fitted discrete log-log slope: {:.3}", self.discrete_slope);
        out
    }
}

/// Times the discrete DP and the continuous decision on instances grown to
/// the requested vertex counts; reports medians over `reps` runs after one
/// warmup, plus the fitted slope of `ln t` against `ln n`.
///
/// Both timings run on the float form of the curves: that is the classic
/// O(nm) grid computation whose growth the bench illustrates. (The
/// exact-rational discrete path interns the handful of distinct gadget
/// points, which collapses its constant factor so far that instances this
/// small are dominated by setup cost.)
pub fn bench_scaling(kind: &KindSpec, sizes: &[usize], reps: usize) -> Result<ScalingTable> {
    if sizes.is_empty() {
        return Err(crate::error::Error::Empty { what: "size list" });
    }
    if sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(crate::error::Error::OutOfRange { what: "sizes", detail: "must be strictly ascending".into() });
    }
    let reps = reps.max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(0xBE);
    let mut rows = Vec::with_capacity(sizes.len());

    for &target in sizes {
        // choose a half-split exponent and clause count landing near the
        // target vertex count: |P1| = 2^k (M + 3)
        let k = ((target / 4).max(1)).ilog2().min(10) as usize;
        let m = ((target >> k).max(4)) - 3;
        let formula = random_formula(2 * k, m, &mut rng);
        let inst = build_instance(&formula, kind)?;

        let time_once = |f: &dyn Fn()| -> f64 {
            let start = Instant::now();
            f();
            start.elapsed().as_secs_f64() * 1e3
        };
        let median = |samples: &mut Vec<f64>| -> f64 {
            samples.sort_by(f64::total_cmp);
            samples[samples.len() / 2]
        };

        let f1 = inst.p1.to_float();
        let f2 = inst.p2.to_float();
        let run_discrete = || {
            let _ = discrete_frechet(&f1, &f2).unwrap();
        };
        run_discrete(); // warmup
        let mut t_d: Vec<f64> = (0..reps).map(|_| time_once(&run_discrete)).collect();

        let run_continuous = || {
            let _ = continuous_decision(&f1, &f2, 1.0).unwrap();
        };
        run_continuous();
        let mut t_c: Vec<f64> = (0..reps).map(|_| time_once(&run_continuous)).collect();

        let c_estimate = match kind {
            KindSpec::OrPacked { .. } | KindSpec::HighDim { .. } => {
                Some(estimate_packedness(&f1, Effort::Fast)?.value)
            }
            _ => None,
        };

        rows.push(ScalingRow {
            kind: kind.label(),
            n: f1.len(),
            m: f2.len(),
            dp_cells: f1.len() * f2.len(),
            c_estimate,
            t_discrete_ms: median(&mut t_d),
            t_continuous_ms: median(&mut t_c),
        });
    }

    let slope = fit_loglog_slope(
        &rows.iter().map(|r| r.n as f64).collect::<Vec<_>>(),
        &rows.iter().map(|r| r.t_discrete_ms.max(1e-6)).collect::<Vec<_>>(),
    );
    Ok(ScalingTable { rows, discrete_slope: slope })
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn fit_loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let num: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    if den == 0.0 {
        return f64::NAN;
    }
    num / den
}

/// Replays a failure witness (the JSON blob attached to failed check
/// records): parses the embedded DIMACS and kind and re-runs the exact
/// verification item.
pub fn replay_witness(witness_json: &str) -> Result<VerificationReport> {
    let v: serde_json::Value = serde_json::from_str(witness_json)
        .map_err(|e| crate::error::Error::Format { what: "witness JSON", msg: e.to_string() })?;
    let kind = v
        .get("kind_spec")
        .and_then(KindSpec::from_json)
        .ok_or(crate::error::Error::Format { what: "witness JSON", msg: "missing or invalid kind_spec".into() })?;
    let dimacs = v
        .get("dimacs")
        .and_then(serde_json::Value::as_str)
        .ok_or(crate::error::Error::Format { what: "witness JSON", msg: "missing dimacs".into() })?;
    let seed = v.get("seed").and_then(serde_json::Value::as_u64).unwrap_or(0);
    let formula = crate::sat::parse_dimacs(dimacs)?;
    Ok(verify_reduction(&formula, &kind, seed))
}
