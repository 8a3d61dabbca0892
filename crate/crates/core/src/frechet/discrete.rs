//! The O(nm) discrete Fréchet dynamic program.

use super::FrechetValue;
use crate::error::{Error, Result};
use crate::geometry::{squared_distance, Curve, Point, Scalar, ScalarMode, FLOAT_CMP_TOL};
use num_rational::BigRational;
use std::collections::HashMap;

/// A joint vertex walk: starts at `(0,0)`, ends at the last vertex pair,
/// each step advancing one or both indices by exactly 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscreteTraversal {
    steps: Vec<(usize, usize)>,
}

impl DiscreteTraversal {
    pub fn new(steps: Vec<(usize, usize)>, n: usize, m: usize) -> Result<Self> {
        let t = DiscreteTraversal { steps };
        t.validate(n, m)?;
        Ok(t)
    }

    pub fn steps(&self) -> &[(usize, usize)] {
        &self.steps
    }

    pub fn validate(&self, n: usize, m: usize) -> Result<()> {
        if self.steps.is_empty() {
            return Err(Error::InvalidTraversal("no steps".into()));
        }
        if self.steps[0] != (0, 0) {
            return Err(Error::InvalidTraversal("must start at (0, 0)".into()));
        }
        if *self.steps.last().unwrap() != (n - 1, m - 1) {
            return Err(Error::InvalidTraversal(format!("must end at ({}, {})", n - 1, m - 1)));
        }
        for w in self.steps.windows(2) {
            let (di, dj) = (w[1].0 as i64 - w[0].0 as i64, w[1].1 as i64 - w[0].1 as i64);
            if !matches!((di, dj), (1, 0) | (0, 1) | (1, 1)) {
                return Err(Error::InvalidTraversal(format!("illegal step {:?} -> {:?}", w[0], w[1])));
            }
        }
        Ok(())
    }
}

fn check_pair(p1: &Curve, p2: &Curve) -> Result<()> {
    if p1.dim() != p2.dim() {
        return Err(Error::DimensionMismatch { left: p1.dim(), right: p2.dim() });
    }
    if p1.mode() != p2.mode() {
        return Err(Error::ScalarModeMismatch { context: "Fréchet input curves" });
    }
    Ok(())
}

/// Exact discrete Fréchet distance with a witness traversal.
///
/// The witness is deterministic: at equal cost the walk prefers the diagonal
/// step, then advancing the first curve, then the second.
pub fn discrete_frechet(p1: &Curve, p2: &Curve) -> Result<(FrechetValue, DiscreteTraversal)> {
    check_pair(p1, p2)?;
    match p1.mode() {
        ScalarMode::Float => Ok(dp_float(p1, p2)),
        ScalarMode::Rational => Ok(dp_rational(p1, p2)),
    }
}

/// Decision form with the default float tolerance.
pub fn discrete_decision(p1: &Curve, p2: &Curve, delta: &Scalar) -> Result<bool> {
    discrete_decision_with_tol(p1, p2, delta, FLOAT_CMP_TOL)
}

/// Decides whether a traversal of width `delta` exists. Rational mode
/// compares squared distances against `delta^2` exactly.
pub fn discrete_decision_with_tol(p1: &Curve, p2: &Curve, delta: &Scalar, tol: f64) -> Result<bool> {
    if delta.is_negative() {
        return Err(Error::OutOfRange { what: "delta", detail: "must be >= 0".into() });
    }
    let (value, _) = discrete_frechet(p1, p2)?;
    value.le_threshold(delta, tol)
}

/// Width of a given traversal: the max synchronized distance. Exact in
/// rational mode.
pub fn traversal_width(p1: &Curve, p2: &Curve, t: &DiscreteTraversal) -> Result<FrechetValue> {
    check_pair(p1, p2)?;
    t.validate(p1.len(), p2.len())?;
    match p1.mode() {
        ScalarMode::Float => {
            let mut best = 0.0f64;
            for &(i, j) in t.steps() {
                let sq = squared_distance(p1.point(i), p2.point(j))?.to_f64();
                best = best.max(sq);
            }
            Ok(FrechetValue::Float(best.sqrt()))
        }
        ScalarMode::Rational => {
            let mut best: Option<BigRational> = None;
            for &(i, j) in t.steps() {
                let sq = match squared_distance(p1.point(i), p2.point(j))? {
                    Scalar::Rational(r) => r,
                    Scalar::Float(_) => unreachable!(),
                };
                best = Some(match best {
                    None => sq,
                    Some(b) => b.max(sq),
                });
            }
            Ok(FrechetValue::RationalSquared(best.unwrap()))
        }
    }
}

/// Cost-to-go table walk shared by both modes: `g` holds, for every cell, the
/// best achievable width (as a comparable key) from that cell to the end.
fn extract_walk<K: Copy + PartialOrd>(g: &[K], n: usize, m: usize) -> Vec<(usize, usize)> {
    let bound = g[0];
    let mut steps = vec![(0usize, 0usize)];
    let (mut i, mut j) = (0usize, 0usize);
    while (i, j) != (n - 1, m - 1) {
        let candidates = [(i + 1, j + 1), (i + 1, j), (i, j + 1)];
        let mut moved = false;
        for &(ni, nj) in &candidates {
            if ni < n && nj < m && g[ni * m + nj] <= bound {
                steps.push((ni, nj));
                i = ni;
                j = nj;
                moved = true;
                break;
            }
        }
        debug_assert!(moved, "walk stuck at ({i}, {j})");
        if !moved {
            break;
        }
    }
    steps
}

fn dp_float(p1: &Curve, p2: &Curve) -> (FrechetValue, DiscreteTraversal) {
    let (n, m) = (p1.len(), p2.len());
    let d = p1.dim();
    let a = p1.flat_f64();
    let b = p2.flat_f64();
    let sq = |i: usize, j: usize| -> f64 {
        let mut s = 0.0;
        for k in 0..d {
            let diff = a[i * d + k] - b[j * d + k];
            s += diff * diff;
        }
        s
    };
    let mut g = vec![0.0f64; n * m];
    for i in (0..n).rev() {
        for j in (0..m).rev() {
            let here = sq(i, j);
            let succ = if i + 1 == n && j + 1 == m {
                None
            } else if i + 1 == n {
                Some(g[i * m + j + 1])
            } else if j + 1 == m {
                Some(g[(i + 1) * m + j])
            } else {
                Some(g[(i + 1) * m + j + 1].min(g[(i + 1) * m + j]).min(g[i * m + j + 1]))
            };
            g[i * m + j] = match succ {
                Some(s) => here.max(s),
                None => here,
            };
        }
    }
    let steps = extract_walk(&g, n, m);
    (FrechetValue::Float(g[0].sqrt()), DiscreteTraversal { steps })
}

/// Rational DP: vertices are interned (the constructions repeat a handful of
/// gadget points thousands of times), distinct pair distances are computed
/// exactly once, and the DP itself runs on integer ranks of the sorted
/// distinct squared distances.
fn dp_rational(p1: &Curve, p2: &Curve) -> (FrechetValue, DiscreteTraversal) {
    let (ids1, reps1) = intern(p1);
    let (ids2, reps2) = intern(p2);
    let (u1, u2) = (reps1.len(), reps2.len());

    let mut pair_sq = Vec::with_capacity(u1 * u2);
    for a in &reps1 {
        for b in &reps2 {
            match squared_distance(a, b).expect("validated") {
                Scalar::Rational(r) => pair_sq.push(r),
                Scalar::Float(_) => unreachable!(),
            }
        }
    }
    let mut sorted = pair_sq.clone();
    sorted.sort();
    sorted.dedup();
    let rank: Vec<u32> = pair_sq
        .iter()
        .map(|v| sorted.binary_search(v).unwrap() as u32)
        .collect();

    let (n, m) = (p1.len(), p2.len());
    let cell = |i: usize, j: usize| rank[ids1[i] * u2 + ids2[j]];
    let mut g = vec![0u32; n * m];
    for i in (0..n).rev() {
        for j in (0..m).rev() {
            let here = cell(i, j);
            let succ = if i + 1 == n && j + 1 == m {
                None
            } else if i + 1 == n {
                Some(g[i * m + j + 1])
            } else if j + 1 == m {
                Some(g[(i + 1) * m + j])
            } else {
                Some(g[(i + 1) * m + j + 1].min(g[(i + 1) * m + j]).min(g[i * m + j + 1]))
            };
            g[i * m + j] = match succ {
                Some(s) => here.max(s),
                None => here,
            };
        }
    }
    let steps = extract_walk(&g, n, m);
    let value = sorted[g[0] as usize].clone();
    (FrechetValue::RationalSquared(value), DiscreteTraversal { steps })
}

fn intern(c: &Curve) -> (Vec<usize>, Vec<Point>) {
    let mut map: HashMap<Vec<BigRational>, usize> = HashMap::new();
    let mut reps = Vec::new();
    let mut ids = Vec::with_capacity(c.len());
    for p in c.points() {
        let key: Vec<BigRational> = p.coords().iter().map(|s| s.as_rational().unwrap().clone()).collect();
        let id = *map.entry(key).or_insert_with(|| {
            reps.push(p.clone());
            reps.len() - 1
        });
        ids.push(id);
    }
    (ids, reps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::concat;

    #[test]
    fn parallel_unit_segments() {
        let p1 = Curve::float2(&[(0.0, 0.0), (1.0, 0.0)]);
        let p2 = Curve::float2(&[(0.0, 1.0), (1.0, 1.0)]);
        let (v, t) = discrete_frechet(&p1, &p2).unwrap();
        assert_eq!(v.distance_f64(), 1.0);
        assert_eq!(t.steps(), &[(0, 0), (1, 1)]);
        assert!(discrete_decision(&p1, &p2, &Scalar::float(1.0)).unwrap());
        assert!(!discrete_decision_with_tol(&p1, &p2, &Scalar::float(0.999), 0.0).unwrap());
    }

    #[test]
    fn identical_curves_have_distance_zero() {
        let p = Curve::float2(&[(0.0, 0.0), (2.0, 1.0), (4.0, -1.0)]);
        let (v, t) = discrete_frechet(&p, &p).unwrap();
        assert_eq!(v.distance_f64(), 0.0);
        assert_eq!(traversal_width(&p, &p, &t).unwrap().distance_f64(), 0.0);
    }

    #[test]
    fn decision_consistent_with_value() {
        let p1 = Curve::float2(&[(0.0, 0.0), (3.0, 1.0), (5.0, 0.0)]);
        let p2 = Curve::float2(&[(0.0, 2.0), (4.0, 3.0)]);
        let (v, _) = discrete_frechet(&p1, &p2).unwrap();
        assert!(discrete_decision(&p1, &p2, &Scalar::float(v.distance_f64())).unwrap());
    }

    #[test]
    fn symmetry() {
        let p1 = Curve::float2(&[(0.0, 0.0), (1.0, 2.0), (3.0, 1.0)]);
        let p2 = Curve::float2(&[(0.5, -1.0), (2.0, 0.5)]);
        let (a, _) = discrete_frechet(&p1, &p2).unwrap();
        let (b, _) = discrete_frechet(&p2, &p1).unwrap();
        assert_eq!(a.distance_f64(), b.distance_f64());
    }

    #[test]
    fn witness_width_equals_value_exactly() {
        let p1 = Curve::new(vec![
            Point::rational2((0, 1), (0, 1)),
            Point::rational2((1, 3), (1, 2)),
            Point::rational2((2, 3), (0, 1)),
        ])
        .unwrap();
        let p2 = Curve::new(vec![
            Point::rational2((0, 1), (1, 1)),
            Point::rational2((1, 2), (3, 2)),
        ])
        .unwrap();
        let (v, t) = discrete_frechet(&p1, &p2).unwrap();
        assert_eq!(traversal_width(&p1, &p2, &t).unwrap(), v);
    }

    #[test]
    fn single_vertex_curves() {
        let p = Curve::single(Point::from_f64(&[0.0, 0.0]));
        let q = Curve::float2(&[(0.0, 1.0), (0.0, 2.0), (0.0, 1.5)]);
        let (v, t) = discrete_frechet(&p, &q).unwrap();
        assert_eq!(v.distance_f64(), 2.0);
        assert_eq!(t.steps(), &[(0, 0), (0, 1), (0, 2)]);
    }

    #[test]
    fn rational_value_is_exact_squared() {
        // vertical offset of 1 + 2/1000 between flat curves
        let top = Curve::new(vec![
            Point::rational2((0, 1), (501, 1000)),
            Point::rational2((1, 3), (501, 1000)),
        ])
        .unwrap();
        let bottom = Curve::new(vec![
            Point::rational2((0, 1), (-501, 1000)),
            Point::rational2((1, 3), (-501, 1000)),
        ])
        .unwrap();
        let (v, _) = discrete_frechet(&top, &bottom).unwrap();
        match v {
            FrechetValue::RationalSquared(sq) => {
                assert_eq!(Scalar::Rational(sq), Scalar::ratio(251_001, 250_000));
            }
            FrechetValue::Float(_) => panic!("expected rational"),
        }
    }

    #[test]
    fn traversal_validation_rejects_bad_shapes() {
        let c = Curve::float2(&[(0.0, 0.0), (1.0, 0.0)]);
        assert!(DiscreteTraversal::new(vec![(0, 0)], 2, 2).is_err());
        assert!(DiscreteTraversal::new(vec![(0, 0), (0, 0), (1, 1)], 2, 2).is_err());
        let ok = DiscreteTraversal::new(vec![(0, 0), (1, 1)], 2, 2).unwrap();
        assert!(traversal_width(&c, &c, &ok).is_ok());
    }

    #[test]
    fn interning_matches_plain_dp_on_repeated_vertices() {
        let a = Point::rational2((0, 1), (0, 1));
        let b = Point::rational2((1, 2), (1, 3));
        let p1 = concat(&[
            Curve::new(vec![a.clone(), b.clone()]).unwrap(),
            Curve::new(vec![a.clone(), b.clone(), a.clone()]).unwrap(),
        ])
        .unwrap();
        let p2 = Curve::new(vec![b.clone(), a, b]).unwrap();
        let (v, t) = discrete_frechet(&p1, &p2).unwrap();
        assert_eq!(traversal_width(&p1, &p2, &t).unwrap(), v);
        // float cross-check
        let (vf, _) = discrete_frechet(&p1.to_float(), &p2.to_float()).unwrap();
        assert!((v.distance_f64() - vf.distance_f64()).abs() < 1e-12);
    }
}
