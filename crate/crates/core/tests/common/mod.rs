//! Shared fixtures for the integration suites: the standing formula suite
//! and an independent brute-force Fréchet oracle.
#![allow(dead_code)] // each test target uses its own subset

use frechet_reductions::frechet::FrechetValue;
use frechet_reductions::geometry::{Curve, Scalar, ScalarMode};
use frechet_reductions::harness::{crafted_formulas, random_formula};
use frechet_reductions::sat::CnfFormula;
use num_rational::BigRational;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

pub const SUITE_SEED: u64 = 0xACCE;

/// The standing formula suite: per variable count, 20 random formulas at
/// each density in {2, 4} plus the crafted corner cases (a single wide
/// clause, duplicated clauses, a forced-unsat wrapper).
pub fn formula_suite(var_counts: &[usize]) -> Vec<CnfFormula> {
    let mut out = Vec::new();
    for &n in var_counts {
        let mut rng = ChaCha8Rng::seed_from_u64(SUITE_SEED ^ (n as u64) << 8);
        for density in [2.0, 4.0] {
            let m = ((n as f64 * density) as usize).max(1);
            for _ in 0..20 {
                out.push(random_formula(n, m, &mut rng));
            }
        }
        out.extend(crafted_formulas(n, &mut rng));
    }
    out
}

/// Exhaustive discrete Fréchet distance: minimum over every monotone
/// lattice path of the maximal pairwise distance. Exponential; for curves
/// of at most ~8 vertices only. Independent of the DP implementation.
pub fn brute_force_frechet(p1: &Curve, p2: &Curve) -> FrechetValue {
    match p1.mode() {
        ScalarMode::Float => {
            let d = |i: usize, j: usize| -> f64 {
                p1.point(i)
                    .to_f64_vec()
                    .iter()
                    .zip(p2.point(j).to_f64_vec())
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum()
            };
            fn walk(
                i: usize,
                j: usize,
                n: usize,
                m: usize,
                d: &dyn Fn(usize, usize) -> f64,
            ) -> f64 {
                let here = d(i, j);
                if i + 1 == n && j + 1 == m {
                    return here;
                }
                let mut best = f64::INFINITY;
                if i + 1 < n && j + 1 < m {
                    best = best.min(walk(i + 1, j + 1, n, m, d));
                }
                if i + 1 < n {
                    best = best.min(walk(i + 1, j, n, m, d));
                }
                if j + 1 < m {
                    best = best.min(walk(i, j + 1, n, m, d));
                }
                here.max(best)
            }
            FrechetValue::Float(walk(0, 0, p1.len(), p2.len(), &d).sqrt())
        }
        ScalarMode::Rational => {
            let d = |i: usize, j: usize| -> BigRational {
                match frechet_reductions::geometry::squared_distance(p1.point(i), p2.point(j)).unwrap() {
                    Scalar::Rational(r) => r,
                    Scalar::Float(_) => unreachable!(),
                }
            };
            fn walk(
                i: usize,
                j: usize,
                n: usize,
                m: usize,
                d: &dyn Fn(usize, usize) -> BigRational,
            ) -> BigRational {
                let here = d(i, j);
                if i + 1 == n && j + 1 == m {
                    return here;
                }
                let mut best: Option<BigRational> = None;
                let mut consider = |v: BigRational| {
                    best = Some(match best.take() {
                        None => v,
                        Some(b) => b.min(v),
                    });
                };
                if i + 1 < n && j + 1 < m {
                    consider(walk(i + 1, j + 1, n, m, d));
                }
                if i + 1 < n {
                    consider(walk(i + 1, j, n, m, d));
                }
                if j + 1 < m {
                    consider(walk(i, j + 1, n, m, d));
                }
                here.max(best.unwrap())
            }
            FrechetValue::RationalSquared(walk(0, 0, p1.len(), p2.len(), &d))
        }
    }
}

pub fn random_float_curve(rng: &mut ChaCha8Rng, max_len: usize) -> Curve {
    let len = rng.random_range(1..=max_len);
    Curve::float2(
        &(0..len)
            .map(|_| (rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)))
            .collect::<Vec<_>>(),
    )
}
