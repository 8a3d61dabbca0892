//! Acceptance suite: every standing correctness claim of the toolkit, one
//! test per criterion, each printing a single PASS/FAIL line (run with
//! `cargo test --test acceptance -- --nocapture` to see them).

mod common;

use common::{brute_force_frechet, formula_suite, random_float_curve};
use frechet_reductions::frechet::{
    continuous_decision, continuous_value, discrete_decision_with_tol, discrete_frechet, FrechetValue,
};
use frechet_reductions::geometry::{Curve, Point, Scalar};
use frechet_reductions::harness::{bench_scaling, fit_loglog_slope, KindSpec};
use frechet_reductions::or_gadget::{build_or_curves, plane_pair_family, RHO};
use frechet_reductions::packedness::{estimate_packedness, Effort};
use frechet_reductions::reduction_highdim::{
    build_highdim_pair, check_highdim_distances, highdim_pair_family, packedness_claim,
    packedness_claim_check, PACKEDNESS_UPPER_SLACK,
};
use frechet_reductions::reduction_plane::{
    build_imbalanced, build_plane_curves, check_distance_table, check_sym_lemma, GadgetConstants,
};
use frechet_reductions::sat::{
    brute_force_sat, enumerate_assignments, split_variables, CnfFormula, VariableSplit,
};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::time::Instant;

fn criterion<F>(number: u32, title: &str, body: F)
where
    F: FnOnce() -> Result<String, String>,
{
    match body() {
        Ok(detail) => println!("ACCEPTANCE {number:>2} PASS  {title} — {detail}"),
        Err(reason) => {
            println!("ACCEPTANCE {number:>2} FAIL  {title} — {reason}");
            panic!("criterion {number} ({title}) failed: {reason}");
        }
    }
}

fn build_full_plane(formula: &CnfFormula) -> frechet_reductions::instance::ReductionInstance {
    let constants = GadgetConstants::standard();
    let split = VariableSplit::halves(formula.num_vars()).unwrap();
    let a1s = enumerate_assignments(&split.v1()).unwrap();
    let a2s = enumerate_assignments(&split.v2()).unwrap();
    build_plane_curves(&constants, formula, &split, &a1s, &a2s).unwrap()
}

#[test]
fn criterion_01_distance_table() {
    criterion(1, "distance-table lemma, exact over all 63 vertex pairs", || {
        let start = Instant::now();
        let constants = GadgetConstants::standard();
        assert_eq!(constants.q1().len() * constants.q2().len(), 63);
        let report = check_distance_table(&constants);
        if !report.passed() {
            return Err(report.to_json());
        }
        let elapsed = start.elapsed();
        if elapsed.as_secs_f64() >= 1.0 {
            return Err(format!("took {elapsed:?}, budget is 1 s"));
        }
        Ok(format!("63 exact pairs, empty band and the five <=1 families verified in {elapsed:?}"))
    });
}

#[test]
fn criterion_02_planar_discrete_end_to_end() {
    criterion(2, "planar reduction: discrete distance <= 1 iff satisfiable, exact", || {
        let start = Instant::now();
        let suite = formula_suite(&[2, 4, 6, 8, 10]);
        if suite.len() < 200 {
            return Err(format!("suite too small: {}", suite.len()));
        }
        let one = Scalar::int(1);
        let reject = Scalar::ratio(1001, 1000);
        let failures: Vec<String> = suite
            .par_iter()
            .filter_map(|f| {
                let sat = brute_force_sat(f).unwrap().is_some();
                let inst = build_full_plane(f);
                let accept = discrete_decision_with_tol(&inst.p1, &inst.p2, &one, 0.0).unwrap();
                if accept != sat {
                    return Some(format!("decision at 1 = {accept}, sat = {sat}: {}", f.to_dimacs()));
                }
                if !sat {
                    let in_gap = discrete_decision_with_tol(&inst.p1, &inst.p2, &reject, 0.0).unwrap();
                    if in_gap {
                        return Some(format!("unsat accepted at 1.001: {}", f.to_dimacs()));
                    }
                }
                None
            })
            .collect();
        if !failures.is_empty() {
            return Err(format!("{} failures; first: {}", failures.len(), failures[0]));
        }
        let elapsed = start.elapsed();
        if elapsed.as_secs_f64() >= 300.0 {
            return Err(format!("took {elapsed:?}, budget is 5 min"));
        }
        Ok(format!("{} formulas, zero failures in {elapsed:?}", suite.len()))
    });
}

#[test]
fn criterion_03_planar_continuous_end_to_end() {
    criterion(3, "planar reduction: free-space decision accepts at 1 iff satisfiable, rejects unsat at 1.001", || {
        let suite = formula_suite(&[2, 4, 6, 8, 10]);
        let failures: Vec<String> = suite
            .par_iter()
            .filter_map(|f| {
                let sat = brute_force_sat(f).unwrap().is_some();
                let inst = build_full_plane(f);
                let p1 = inst.p1.to_float();
                let p2 = inst.p2.to_float();
                let accept = continuous_decision(&p1, &p2, 1.0).unwrap();
                if accept != sat {
                    return Some(format!("continuous at 1 = {accept}, sat = {sat}: {}", f.to_dimacs()));
                }
                if !sat && continuous_decision(&p1, &p2, 1.001).unwrap() {
                    return Some(format!("unsat accepted at 1.001: {}", f.to_dimacs()));
                }
                None
            })
            .collect();
        if !failures.is_empty() {
            return Err(format!("{} failures; first: {}", failures.len(), failures[0]));
        }
        Ok(format!("{} formulas, zero failures", suite.len()))
    });
}

#[test]
fn criterion_04_sym_lemma() {
    criterion(4, "symmetric-point lemma on 10^4 sampled close pairs, exact", || {
        let report = check_sym_lemma(&GadgetConstants::standard(), 10_000, 0x515);
        if !report.passed() {
            return Err(report.to_json());
        }
        Ok("10000 accepted on-gadget pairs within 1+eps, all symmetric images within 1/9".into())
    });
}

#[test]
fn criterion_05_imbalanced_split() {
    criterion(5, "imbalanced splits: correctness and exact vertex counts for gamma in {0, 1/2, 1}", || {
        let suite = formula_suite(&[2, 4, 6, 8, 10]);
        let constants = GadgetConstants::standard();
        let one = Scalar::int(1);
        let reject = Scalar::ratio(1001, 1000);
        for gamma in [0.0, 0.5, 1.0] {
            let failures: Vec<String> = suite
                .par_iter()
                .filter_map(|f| {
                    let sat = brute_force_sat(f).unwrap().is_some();
                    let inst = build_imbalanced(&constants, f, gamma).unwrap();
                    let ell = split_variables(f.num_vars(), gamma).unwrap().ell();
                    let m = f.num_clauses();
                    let expect1 = (1usize << ell) * (m + 3);
                    let expect2 = (1usize << (f.num_vars() - ell)) * (m + 1) + 4;
                    if inst.p1.len() != expect1 || inst.p2.len() != expect2 {
                        return Some(format!(
                            "gamma={gamma}: counts ({}, {}) != ({expect1}, {expect2})",
                            inst.p1.len(),
                            inst.p2.len()
                        ));
                    }
                    let accept = discrete_decision_with_tol(&inst.p1, &inst.p2, &one, 0.0).unwrap();
                    if accept != sat {
                        return Some(format!("gamma={gamma}: decision {accept} != sat {sat}: {}", f.to_dimacs()));
                    }
                    if !sat && discrete_decision_with_tol(&inst.p1, &inst.p2, &reject, 0.0).unwrap() {
                        return Some(format!("gamma={gamma}: unsat accepted at 1.001"));
                    }
                    None
                })
                .collect();
            if !failures.is_empty() {
                return Err(format!("gamma={gamma}: {} failures; first: {}", failures.len(), failures[0]));
            }
        }
        Ok(format!("{} formulas x 3 gammas, zero failures", suite.len()))
    });
}

#[test]
fn criterion_06_or_gadget() {
    criterion(6, "OR-composition: accept at 1, reject unsat at min(beta,1.2)-1e-6, exact vertex counts", || {
        let suite = formula_suite(&[2, 4, 6, 8]);
        let constants = GadgetConstants::standard();
        let failures: Vec<String> = suite
            .par_iter()
            .flat_map_iter(|f| [(f, 1usize), (f, 2usize)])
            .filter_map(|(f, buckets)| {
                let max_buckets = 1usize << (f.num_vars() / 2);
                if buckets > max_buckets {
                    return None;
                }
                let sat = brute_force_sat(f).unwrap().is_some();
                let split = VariableSplit::halves(f.num_vars()).unwrap();
                let family = plane_pair_family(&constants, f, &split, buckets).unwrap();
                let inst = build_or_curves(&family).unwrap();

                // |R1| = sum(|P1^j| + 10), |R2| = sum(|P2^j| + 10) + 10
                let expect1: usize = family.pairs().iter().map(|p| p.p1.len() + 10).sum();
                let expect2: usize = family.pairs().iter().map(|p| p.p2.len() + 10).sum::<usize>() + 10;
                if inst.p1.len() != expect1 || inst.p2.len() != expect2 {
                    return Some(format!("counts ({}, {}) != ({expect1}, {expect2})", inst.p1.len(), inst.p2.len()));
                }

                let d_accept = discrete_decision_with_tol(&inst.p1, &inst.p2, &Scalar::float(1.0), 1e-9).unwrap();
                let c_accept = continuous_decision(&inst.p1, &inst.p2, 1.0).unwrap();
                if d_accept != sat || c_accept != sat {
                    return Some(format!(
                        "ell={buckets}: accept(d={d_accept}, c={c_accept}) != sat {sat}: {}",
                        f.to_dimacs()
                    ));
                }
                if !sat {
                    let delta = 1.001_f64.min(1.2) - 1e-6;
                    let d_rej = !discrete_decision_with_tol(&inst.p1, &inst.p2, &Scalar::float(delta), 0.0).unwrap();
                    let c_rej = !continuous_decision(&inst.p1, &inst.p2, delta).unwrap();
                    if !d_rej || !c_rej {
                        return Some(format!("ell={buckets}: unsat not rejected at {delta}"));
                    }
                }
                None
            })
            .collect();
        if !failures.is_empty() {
            return Err(format!("{} failures; first: {}", failures.len(), failures[0]));
        }
        Ok(format!("{} formulas x ell in {{1,2}}, zero failures", suite.len()))
    });
}

#[test]
fn criterion_07_packedness_brackets() {
    criterion(7, "packedness: planar growth, OR bracket [c/8, 8c], five-dimensional brackets", || {
        // (a) the full planar construction's packedness grows with the
        // number of assignments (it is not o(n)-packed): fitted slope of
        // log(estimate) against log(2^{N/2}) at least 0.9
        let mut rng = ChaCha8Rng::seed_from_u64(0x9ac);
        let mut sizes = Vec::new();
        let mut estimates = Vec::new();
        for n in [4usize, 6, 8] {
            let f = frechet_reductions::harness::random_formula(n, 4, &mut rng);
            let inst = build_full_plane(&f);
            let est = estimate_packedness(&inst.p1.to_float(), Effort::Fast).unwrap();
            sizes.push(f64::exp2(n as f64 / 2.0));
            estimates.push(est.value);
        }
        let slope = fit_loglog_slope(&sizes, &estimates);
        if slope < 0.9 {
            return Err(format!("planar growth slope {slope:.3} < 0.9 (estimates {estimates:?})"));
        }

        // (b) assembled OR instances within [c/8, 8c] of c = M 2^{N/2} / ell
        for (n, m, buckets) in [(4usize, 4usize, 1usize), (4, 8, 2), (6, 4, 2), (6, 8, 1)] {
            let f = frechet_reductions::harness::random_formula(n, m, &mut rng);
            let split = VariableSplit::halves(n).unwrap();
            let family = plane_pair_family(&GadgetConstants::standard(), &f, &split, buckets).unwrap();
            let inst = build_or_curves(&family).unwrap();
            let c = m as f64 * f64::exp2(n as f64 / 2.0) / buckets as f64;
            for curve in [&inst.p1, &inst.p2] {
                let est = estimate_packedness(curve, Effort::Fast).unwrap().value;
                if est < c / 8.0 || est > 8.0 * c {
                    return Err(format!("or-packed N={n} M={m} ell={buckets}: estimate {est:.3} outside [{:.3}, {:.3}]", c / 8.0, 8.0 * c));
                }
            }
        }

        // (c) five-dimensional pairs: the reference configuration (M=4,
        // bucket 8) meets the literal 8x bracket; a wider sweep meets the
        // recalibrated documented slack
        let eps = 1e-4;
        {
            let f = frechet_reductions::harness::random_formula(6, 4, &mut rng);
            let split = VariableSplit::halves(6).unwrap();
            let a1 = enumerate_assignments(&split.v1()).unwrap();
            let a2 = enumerate_assignments(&split.v2()).unwrap();
            let (p1, p2) = build_highdim_pair(&f, &a1, &a2, eps).unwrap();
            let claim = packedness_claim(eps, 4, 8);
            if (claim - 1.32).abs() > 1e-9 {
                return Err(format!("claim formula drifted: {claim}"));
            }
            for curve in [&p1, &p2] {
                let est = estimate_packedness(curve, Effort::Fast).unwrap().value;
                if est < claim / 8.0 || est > 8.0 * claim {
                    return Err(format!("highdim reference config: estimate {est:.3} outside [{:.3}, {:.3}]", claim / 8.0, 8.0 * claim));
                }
            }
        }
        for (n, m) in [(4usize, 2usize), (4, 6), (6, 6), (8, 4)] {
            let f = frechet_reductions::harness::random_formula(n, m, &mut rng);
            let split = VariableSplit::halves(n).unwrap();
            let family = highdim_pair_family(&f, &split, 1, eps).unwrap();
            for pair in family.pairs() {
                for (curve, bucket, second) in [(&pair.p1, pair.bucket1.len(), false), (&pair.p2, pair.bucket2.len(), true)] {
                    let report = packedness_claim_check(curve, eps, m, bucket, second);
                    if !report.passed() {
                        return Err(format!("highdim sweep N={n} M={m}: {}", report.to_json()));
                    }
                }
            }
        }
        Ok(format!(
            "planar slope {slope:.2}; OR instances within 8x; five-dimensional pairs within 8x at the reference config and {PACKEDNESS_UPPER_SLACK}x across the sweep"
        ))
    });
}

#[test]
fn criterion_08_highdim_distance_lemma() {
    criterion(8, "five-dimensional distance families at eps = 1e-4, with the boundary family at exactly 1+eps", || {
        let eps = 1e-4;
        let report = check_highdim_distances(eps, 2000, 0x8d);
        if !report.passed() {
            return Err(report.to_json());
        }
        // the anchor-to-anchor identity: squared distance is exactly
        // rho^2((1-400 eps)^2 + 1 + (18 sqrt(eps))^2) = 1 - 238 eps + 80000 eps^2
        let f = frechet_reductions::harness::random_formula(4, 3, &mut ChaCha8Rng::seed_from_u64(1));
        let split = VariableSplit::halves(4).unwrap();
        let a1 = enumerate_assignments(&split.v1()).unwrap();
        let a2 = enumerate_assignments(&split.v2()).unwrap();
        let (p1, p2) = build_highdim_pair(&f, &a1, &a2, eps).unwrap();
        // s1(a^1) is the first vertex of the first curve; r2(a^1) is the
        // third vertex of the second curve (after s2, s2*)
        let s1 = p1.point(0);
        let r2 = p2.point(2);
        let sq = frechet_reductions::geometry::squared_distance(s1, r2).unwrap().to_f64();
        let exact = 0.5 * ((1.0 - 400.0 * eps).powi(2) + 1.0 + 324.0 * eps);
        let expansion = 1.0 - 238.0 * eps + 80_000.0 * eps * eps;
        let rel_exact = ((sq - exact) / exact).abs();
        let rel_expansion = ((sq - expansion) / expansion).abs();
        if rel_exact > 1e-6 {
            return Err(format!("s1-r2 identity off: {sq} vs {exact} (rel {rel_exact:.2e})"));
        }
        if rel_expansion > 1e-9 {
            return Err(format!("s1-r2 expansion off: {sq} vs {expansion} (rel {rel_expansion:.2e})"));
        }
        Ok(format!(
            "2000 samples clean; s1-r2 squared = {sq:.8} matches the exact form (rel {rel_exact:.1e}) and 1 - 238 eps + 80000 eps^2"
        ))
    });
}

#[test]
fn criterion_09_ov_equivalence() {
    criterion(9, "orthogonal-vectors route agrees with SAT and with the curve decision", || {
        use frechet_reductions::ov::{cnf_to_ov, ov_brute, ov_to_curves, OvInstance};
        let suite = formula_suite(&[2, 4, 6, 8, 10]);
        let failures: Vec<String> = suite
            .par_iter()
            .filter_map(|f| {
                let split = VariableSplit::halves(f.num_vars()).unwrap();
                let ov = cnf_to_ov(f, &split).unwrap();
                let sat = brute_force_sat(f).unwrap().is_some();
                if ov_brute(&ov).is_some() != sat {
                    return Some(format!("OV disagreement: {}", f.to_dimacs()));
                }
                None
            })
            .collect();
        if !failures.is_empty() {
            return Err(format!("{} OV/SAT disagreements; first: {}", failures.len(), failures[0]));
        }

        let constants = GadgetConstants::standard();
        let mut rng = ChaCha8Rng::seed_from_u64(0x0f);
        for trial in 0..200 {
            let d = rng.random_range(1..=6);
            let mk = |rng: &mut ChaCha8Rng| -> Vec<Vec<bool>> {
                (0..rng.random_range(1..=8))
                    .map(|_| (0..d).map(|_| rng.random_bool(0.4)).collect())
                    .collect()
            };
            let inst = OvInstance::new(mk(&mut rng), mk(&mut rng)).unwrap();
            let curves = ov_to_curves(&constants, &inst).unwrap();
            let accept = discrete_decision_with_tol(&curves.p1, &curves.p2, &Scalar::int(1), 0.0).unwrap();
            if accept != ov_brute(&inst).is_some() {
                return Err(format!("trial {trial}: curve decision disagrees with the quadratic scan"));
            }
        }
        Ok(format!("{} formulas + 200 random instances, zero disagreements", suite.len()))
    });
}

#[test]
fn criterion_10_algorithmic_cross_checks() {
    criterion(10, "DP equals path enumeration (500 trials); continuous upper bounded by discrete (1000 pairs)", || {
        let mut rng = ChaCha8Rng::seed_from_u64(0xc6);
        for trial in 0..500 {
            let a = random_float_curve(&mut rng, 6);
            let b = random_float_curve(&mut rng, 6);
            let (dp, _) = discrete_frechet(&a, &b).unwrap();
            let oracle = brute_force_frechet(&a, &b);
            match (&dp, &oracle) {
                (FrechetValue::Float(x), FrechetValue::Float(y)) => {
                    if x != y {
                        return Err(format!("trial {trial}: DP {x} != enumeration {y}"));
                    }
                }
                _ => return Err("mode mismatch".into()),
            }
        }
        // a handful of exact-rational trials through the same oracle
        for trial in 0..50 {
            let len1 = rng.random_range(1..=5);
            let len2 = rng.random_range(1..=5);
            let mk = |rng: &mut ChaCha8Rng, len: usize| {
                Curve::new(
                    (0..len)
                        .map(|_| {
                            Point::rational2(
                                (rng.random_range(-8..8), rng.random_range(1..5)),
                                (rng.random_range(-8..8), rng.random_range(1..5)),
                            )
                        })
                        .collect(),
                )
                .unwrap()
            };
            let a = mk(&mut rng, len1);
            let b = mk(&mut rng, len2);
            let (dp, _) = discrete_frechet(&a, &b).unwrap();
            if dp != brute_force_frechet(&a, &b) {
                return Err(format!("rational trial {trial}: DP disagrees with enumeration"));
            }
        }

        let tol = 1e-6;
        for trial in 0..1000 {
            let a = random_float_curve(&mut rng, 10);
            let b = random_float_curve(&mut rng, 10);
            let (dp, _) = discrete_frechet(&a, &b).unwrap();
            let bracket = continuous_value(&a, &b, tol).unwrap();
            if bracket.upper > dp.distance_f64() + tol {
                return Err(format!(
                    "trial {trial}: continuous upper {} exceeds discrete {} + {tol}",
                    bracket.upper,
                    dp.distance_f64()
                ));
            }
        }
        Ok("500 float + 50 exact enumeration matches; 1000 continuous/discrete sandwiches".into())
    });
}

#[test]
fn criterion_11_scaling_sanity() {
    criterion(11, "discrete DP time scaling on plane instances (informational)", || {
        let table = bench_scaling(&KindSpec::Plane, &[128, 256, 512, 1024], 5).unwrap();
        let slope = table.discrete_slope;
        let detail = format!(
            "fitted slope {slope:.3} over n = {:?}",
            table.rows.iter().map(|r| r.n).collect::<Vec<_>>()
        );
        if !(1.7..=2.3).contains(&slope) {
            // informational criterion: warn, don't fail
            println!("ACCEPTANCE 11 WARN  slope {slope:.3} outside [1.7, 2.3] — {detail}");
        }
        Ok(detail)
    });
}

#[test]
fn or_gadget_u_shape_unit_steps() {
    // the grid geometry the OR traversals rely on: hook connectors are unit
    // steps, and the stitched hook pairs stay within width 1
    for j in 1..=3u32 {
        let a = Point::from_f64(&[2.0 * f64::from(j) * RHO, 0.0]);
        for sgn in [-1.0, 1.0] {
            let b = Point::from_f64(&[(2.0 * f64::from(j) + sgn) * RHO, RHO]);
            let d = frechet_reductions::geometry::distance(&a, &b).unwrap();
            assert!((d - 1.0).abs() < 1e-12);
        }
    }
}
