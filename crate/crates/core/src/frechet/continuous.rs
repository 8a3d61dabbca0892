//! Free-space diagram decision and bisection value for the continuous
//! Fréchet distance.

use crate::error::{Error, Result};
use crate::geometry::Curve;

/// Symmetric tolerance band applied to free-interval emptiness tests.
pub const FREE_SPACE_EPS: f64 = 1e-12;

/// A two-sided bracket on the continuous Fréchet distance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistanceBracket {
    pub lower: f64,
    pub upper: f64,
}

/// One cell of the free-space diagram: the free sub-intervals of its left
/// and bottom edges (each within `[0, 1]`, or absent when the edge carries
/// no free point at the given threshold).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FreeSpaceCell {
    /// Segment index into the first curve.
    pub i: usize,
    /// Segment index into the second curve.
    pub j: usize,
    pub left: Option<(f64, f64)>,
    pub bottom: Option<(f64, f64)>,
}

/// The free intervals of cell `(i, j)` at threshold `delta` — a diagnostic
/// view of the decision procedure's raw material.
pub fn free_space_cell(p1: &Curve, p2: &Curve, i: usize, j: usize, delta: f64) -> Result<FreeSpaceCell> {
    if p1.dim() != p2.dim() {
        return Err(Error::DimensionMismatch { left: p1.dim(), right: p2.dim() });
    }
    if i + 1 >= p1.len() || j + 1 >= p2.len() {
        return Err(Error::OutOfRange { what: "cell index", detail: format!("({i}, {j})") });
    }
    let p = Flat::of(p1)?;
    let q = Flat::of(p2)?;
    let delta_sq = delta * delta;
    Ok(FreeSpaceCell {
        i,
        j,
        left: free_interval(p.pt(i), q.pt(j), q.pt(j + 1), delta_sq, FREE_SPACE_EPS),
        bottom: free_interval(q.pt(j), p.pt(i), p.pt(i + 1), delta_sq, FREE_SPACE_EPS),
    })
}

type Interval = Option<(f64, f64)>;

struct Flat {
    dim: usize,
    n: usize,
    xs: Vec<f64>,
}

impl Flat {
    fn of(c: &Curve) -> Result<Flat> {
        let xs = c.flat_f64();
        if xs.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Flat { dim: c.dim(), n: c.len(), xs })
    }

    fn pt(&self, i: usize) -> &[f64] {
        &self.xs[i * self.dim..(i + 1) * self.dim]
    }
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Free sub-interval of the edge "point `p` against segment `a -> b`",
/// i.e. the `t in [0,1]` with `||p - (a + t(b-a))|| <= delta`.
fn free_interval(p: &[f64], a: &[f64], b: &[f64], delta_sq: f64, eps: f64) -> Interval {
    let mut uu = 0.0;
    let mut uv = 0.0;
    let mut vv = 0.0;
    for k in 0..p.len() {
        let u = a[k] - p[k];
        let v = b[k] - a[k];
        uu += u * u;
        uv += u * v;
        vv += v * v;
    }
    if vv <= 0.0 {
        // degenerate segment
        return if uu <= delta_sq + eps { Some((0.0, 1.0)) } else { None };
    }
    let t_star = -uv / vv;
    let min_sq = (uu - uv * uv / vv).max(0.0);
    if min_sq > delta_sq + eps {
        return None;
    }
    let s = ((delta_sq - min_sq).max(0.0) / vv).sqrt();
    clamp_interval((t_star - s).max(0.0), (t_star + s).min(1.0), eps)
}

fn clamp_interval(lo: f64, hi: f64, eps: f64) -> Interval {
    if lo <= hi {
        Some((lo, hi))
    } else if lo - hi <= eps {
        let mid = 0.5 * (lo + hi);
        Some((mid, mid))
    } else {
        None
    }
}

fn clip_from(iv: Interval, a: f64, eps: f64) -> Interval {
    iv.and_then(|(lo, hi)| clamp_interval(lo.max(a), hi, eps))
}

fn reaches_end(iv: Interval, eps: f64) -> bool {
    matches!(iv, Some((_, hi)) if hi >= 1.0 - eps)
}

fn starts_at_zero(iv: Interval, eps: f64) -> bool {
    matches!(iv, Some((lo, _)) if lo <= eps)
}

/// Monotone reachability through the free-space diagram. Cells are processed
/// row by row; the outer top and right boundaries get a final sliding pass
/// (a traversal may park one curve at its endpoint while the other finishes).
fn decide(p: &Flat, q: &Flat, delta: f64, eps: f64) -> bool {
    let delta_sq = delta * delta;
    let within = |a: &[f64], b: &[f64]| sq_dist(a, b) <= delta_sq + eps;

    // explicit endpoint conditions
    if !within(p.pt(0), q.pt(0)) || !within(p.pt(p.n - 1), q.pt(q.n - 1)) {
        return false;
    }
    if p.n == 1 {
        return (0..q.n).all(|j| within(p.pt(0), q.pt(j)));
    }
    if q.n == 1 {
        return (0..p.n).all(|i| within(p.pt(i), q.pt(0)));
    }

    let n1 = p.n - 1;
    let m1 = q.n - 1;

    // reachable horizontal edges of the current row (y = j), plus the free
    // intervals of the top boundary edges (filled during the last row)
    let mut hr: Vec<Interval> = vec![None; n1];
    let mut top_free: Vec<Interval> = vec![None; n1];
    // bottom boundary: contiguous prefix from the corner
    {
        let mut alive = true;
        for (i, slot) in hr.iter_mut().enumerate() {
            let f = free_interval(q.pt(0), p.pt(i), p.pt(i + 1), delta_sq, eps);
            *slot = if alive && starts_at_zero(f, eps) { f } else { None };
            alive = alive && reaches_end(*slot, eps);
        }
    }

    // right boundary bookkeeping for the final sliding pass
    let mut right_reach: Vec<Interval> = vec![None; m1];
    let mut right_free: Vec<Interval> = vec![None; m1];

    let mut left_alive = true;
    for j in 0..m1 {
        // left boundary edge of this row
        let lf = free_interval(p.pt(0), q.pt(j), q.pt(j + 1), delta_sq, eps);
        let mut vr: Interval = if left_alive && starts_at_zero(lf, eps) { lf } else { None };
        left_alive = left_alive && starts_at_zero(lf, eps) && reaches_end(lf, eps);

        for i in 0..n1 {
            let vf_right = free_interval(p.pt(i + 1), q.pt(j), q.pt(j + 1), delta_sq, eps);
            let hf_top = free_interval(q.pt(j + 1), p.pt(i), p.pt(i + 1), delta_sq, eps);

            let new_vr = if hr[i].is_some() {
                vf_right
            } else if let Some((a, _)) = vr {
                clip_from(vf_right, a, eps)
            } else {
                None
            };
            let new_hr = if vr.is_some() {
                hf_top
            } else if let Some((a, _)) = hr[i] {
                clip_from(hf_top, a, eps)
            } else {
                None
            };
            hr[i] = new_hr;
            if j == m1 - 1 {
                top_free[i] = hf_top;
            }
            vr = new_vr;
            if i == n1 - 1 {
                right_reach[j] = vr;
                right_free[j] = vf_right;
            }
        }
    }

    // slide along the top boundary (y = m-1, first curve finishing alone)
    let mut cur: Interval = None;
    for i in 0..n1 {
        let slid = if i > 0 && cur.is_some() && reaches_end(top_free[i - 1], eps) && starts_at_zero(top_free[i], eps) {
            top_free[i]
        } else {
            None
        };
        cur = match (hr[i], slid) {
            (Some(a), Some(b)) => Some((a.0.min(b.0), a.1.max(b.1))),
            (a, None) => a,
            (None, b) => b,
        };
    }
    if reaches_end(cur, eps) {
        return true;
    }

    // slide along the right boundary (x = n-1, second curve finishing alone)
    let mut cur: Interval = None;
    for j in 0..m1 {
        let slid = if j > 0 && cur.is_some() && reaches_end(right_free[j - 1], eps) && starts_at_zero(right_free[j], eps) {
            right_free[j]
        } else {
            None
        };
        cur = match (right_reach[j], slid) {
            (Some(a), Some(b)) => Some((a.0.min(b.0), a.1.max(b.1))),
            (a, None) => a,
            (None, b) => b,
        };
    }
    reaches_end(cur, eps)
}

/// Decides whether the continuous Fréchet distance is at most `delta`.
/// Rational curves are converted to doubles (nearest representable).
pub fn continuous_decision(p1: &Curve, p2: &Curve, delta: f64) -> Result<bool> {
    if !delta.is_finite() || delta < 0.0 {
        return Err(Error::OutOfRange { what: "delta", detail: format!("{delta} must be >= 0") });
    }
    if p1.dim() != p2.dim() {
        return Err(Error::DimensionMismatch { left: p1.dim(), right: p2.dim() });
    }
    let p = Flat::of(p1)?;
    let q = Flat::of(p2)?;
    Ok(decide(&p, &q, delta, FREE_SPACE_EPS))
}

/// Brackets the continuous Fréchet distance by bisection on the decision.
/// The bracket is valid modulo decision correctness (see [`FREE_SPACE_EPS`]).
pub fn continuous_value(p1: &Curve, p2: &Curve, tol: f64) -> Result<DistanceBracket> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::OutOfRange { what: "tol", detail: format!("{tol} must be > 0") });
    }
    if p1.dim() != p2.dim() {
        return Err(Error::DimensionMismatch { left: p1.dim(), right: p2.dim() });
    }
    let p = Flat::of(p1)?;
    let q = Flat::of(p2)?;

    // endpoints must pair up, so their distances bound the value from below
    let mut lo = sq_dist(p.pt(0), q.pt(0))
        .max(sq_dist(p.pt(p.n - 1), q.pt(q.n - 1)))
        .sqrt();
    // any traversal stays within the max pairwise vertex distance
    let mut hi = 0.0f64;
    for i in 0..p.n {
        for j in 0..q.n {
            hi = hi.max(sq_dist(p.pt(i), q.pt(j)));
        }
    }
    let mut hi = hi.sqrt();

    if decide(&p, &q, lo, FREE_SPACE_EPS) {
        return Ok(DistanceBracket { lower: lo, upper: lo });
    }
    let mut iterations = 0;
    while hi - lo > tol && iterations < 200 {
        let mid = 0.5 * (lo + hi);
        if decide(&p, &q, mid, FREE_SPACE_EPS) {
            hi = mid;
        } else {
            lo = mid;
        }
        iterations += 1;
    }
    Ok(DistanceBracket { lower: lo, upper: hi })
}
