//! Points and polygonal curves in `R^d` with two coordinate modes.
//!
//! Every value is either exact-rational or double-precision, never mixed
//! within one point or curve. The planar constructions use only rational
//! coordinates, so their threshold comparisons (against 1, `(1+eps)^2`, ...)
//! are performed exactly on squared distances; the constructions involving
//! `1/sqrt(2)` use floats with an explicit comparison tolerance.
//!
//! A curve with vertices `p_0, ..., p_{n-1}` is the piecewise-linear map
//! `t -> (1-l) p_i + l p_{i+1}` for `t = i + l`, parameterized over
//! `[0, n-1]` (the 0-indexed analogue of the usual `[0, n]` convention,
//! related by an affine shift of the vertex index).

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;

/// Default tolerance for float-mode threshold comparisons. The constructions
/// keep a gap of at least 1e-3 between accept and reject distances, so a 1e-9
/// band cannot flip a verdict.
pub const FLOAT_CMP_TOL: f64 = 1e-9;

/// Coordinate mode of a point or curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScalarMode {
    Rational,
    Float,
}

/// One coordinate: an exact rational (kept in lowest terms by
/// `num_rational`) or a double.
#[derive(Debug, Clone, PartialEq)]
pub enum Scalar {
    Rational(BigRational),
    Float(f64),
}

impl Scalar {
    pub fn int(v: i64) -> Self {
        Scalar::Rational(BigRational::from_integer(BigInt::from(v)))
    }

    /// Exact rational `p/q`.
    pub fn ratio(p: i64, q: i64) -> Self {
        assert!(q != 0, "zero denominator");
        Scalar::Rational(BigRational::new(BigInt::from(p), BigInt::from(q)))
    }

    pub fn float(v: f64) -> Self {
        Scalar::Float(v)
    }

    pub fn mode(&self) -> ScalarMode {
        match self {
            Scalar::Rational(_) => ScalarMode::Rational,
            Scalar::Float(_) => ScalarMode::Float,
        }
    }

    /// Nearest double. Rationals convert via `num`'s `ToPrimitive`.
    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Rational(r) => r.to_f64().unwrap_or(f64::NAN),
            Scalar::Float(f) => *f,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(r) => Some(r),
            Scalar::Float(_) => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        match self {
            Scalar::Rational(_) => true,
            Scalar::Float(f) => f.is_finite(),
        }
    }

    fn binop(&self, other: &Scalar, ctx: &'static str, f_r: fn(&BigRational, &BigRational) -> BigRational, f_f: fn(f64, f64) -> f64) -> Scalar {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(f_r(a, b)),
            (Scalar::Float(a), Scalar::Float(b)) => Scalar::Float(f_f(*a, *b)),
            _ => panic!("scalar mode mismatch in {ctx}"),
        }
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        self.binop(other, "add", |a, b| a + b, |a, b| a + b)
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        self.binop(other, "sub", |a, b| a - b, |a, b| a - b)
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        self.binop(other, "mul", |a, b| a * b, |a, b| a * b)
    }

    /// Exact order within one mode; errors on mixed modes.
    pub fn try_cmp(&self, other: &Scalar) -> Result<Ordering> {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Ok(a.cmp(b)),
            (Scalar::Float(a), Scalar::Float(b)) => Ok(a.total_cmp(b)),
            _ => Err(Error::ScalarModeMismatch { context: "comparison" }),
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_negative(),
            Scalar::Float(f) => *f < 0.0,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => write!(f, "{r}"),
            Scalar::Float(v) => write!(f, "{v}"),
        }
    }
}

/// A point in `R^d`. All coordinates share one scalar mode.
#[derive(Debug, Clone, PartialEq)]
pub struct Point {
    coords: Vec<Scalar>,
}

impl Point {
    pub fn new(coords: Vec<Scalar>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::Empty { what: "point coordinates" });
        }
        let mode = coords[0].mode();
        if coords.iter().any(|c| c.mode() != mode) {
            return Err(Error::ScalarModeMismatch { context: "point coordinates" });
        }
        Ok(Point { coords })
    }

    /// 2-D rational point from `(p, q)` coordinate fractions.
    pub fn rational2(x: (i64, i64), y: (i64, i64)) -> Self {
        Point { coords: vec![Scalar::ratio(x.0, x.1), Scalar::ratio(y.0, y.1)] }
    }

    pub fn from_f64(coords: &[f64]) -> Self {
        Point { coords: coords.iter().map(|&c| Scalar::Float(c)).collect() }
    }

    pub fn from_rationals(coords: Vec<BigRational>) -> Self {
        Point { coords: coords.into_iter().map(Scalar::Rational).collect() }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn mode(&self) -> ScalarMode {
        self.coords[0].mode()
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.coords
    }

    pub fn coord(&self, i: usize) -> &Scalar {
        &self.coords[i]
    }

    pub fn to_f64_vec(&self) -> Vec<f64> {
        self.coords.iter().map(Scalar::to_f64).collect()
    }

    pub fn to_float(&self) -> Point {
        Point::from_f64(&self.to_f64_vec())
    }
}

/// Exact squared Euclidean distance; rational in rational mode.
pub fn squared_distance(p: &Point, q: &Point) -> Result<Scalar> {
    if p.dim() != q.dim() {
        return Err(Error::DimensionMismatch { left: p.dim(), right: q.dim() });
    }
    if p.mode() != q.mode() {
        return Err(Error::ScalarModeMismatch { context: "squared_distance" });
    }
    match p.mode() {
        ScalarMode::Rational => {
            let mut acc = BigRational::zero();
            for (a, b) in p.coords.iter().zip(&q.coords) {
                let d = a.as_rational().unwrap() - b.as_rational().unwrap();
                acc += &d * &d;
            }
            Ok(Scalar::Rational(acc))
        }
        ScalarMode::Float => {
            let mut acc = 0.0;
            for (a, b) in p.coords.iter().zip(&q.coords) {
                let d = a.to_f64() - b.to_f64();
                acc += d * d;
            }
            Ok(Scalar::Float(acc))
        }
    }
}

/// Euclidean distance as a double. Exact threshold comparisons must go
/// through [`squared_distance`].
pub fn distance(p: &Point, q: &Point) -> Result<f64> {
    Ok(squared_distance(p, q)?.to_f64().sqrt())
}

/// Compares a squared distance against a threshold `delta`, i.e. decides
/// `sqrt(sq) <= delta`. Exact in rational mode; float mode applies `tol`
/// to the unsquared threshold.
pub fn le_threshold(sq: &Scalar, delta: &Scalar, tol: f64) -> Result<bool> {
    match (sq, delta) {
        (Scalar::Rational(s), Scalar::Rational(d)) => {
            if d.is_negative() {
                return Ok(false);
            }
            Ok(*s <= d * d)
        }
        (Scalar::Float(s), Scalar::Float(d)) => Ok(s.sqrt() <= d + tol),
        _ => Err(Error::ScalarModeMismatch { context: "threshold comparison" }),
    }
}

/// A polygonal curve: a non-empty vertex list of common dimension and mode.
/// Consecutive duplicate vertices are allowed (zero-length segments).
#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    points: Vec<Point>,
}

impl Curve {
    pub fn new(points: Vec<Point>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Empty { what: "curve" });
        }
        let dim = points[0].dim();
        let mode = points[0].mode();
        for p in &points {
            if p.dim() != dim {
                return Err(Error::DimensionMismatch { left: dim, right: p.dim() });
            }
            if p.mode() != mode {
                return Err(Error::ScalarModeMismatch { context: "curve vertices" });
            }
        }
        Ok(Curve { points })
    }

    /// 2-D float curve from coordinate pairs.
    pub fn float2(pts: &[(f64, f64)]) -> Self {
        Curve { points: pts.iter().map(|&(x, y)| Point::from_f64(&[x, y])).collect() }
    }

    pub fn single(p: Point) -> Self {
        Curve { points: vec![p] }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    #[must_use]
    pub fn is_empty(&self) -> bool {
        false // non-empty by construction
    }

    pub fn dim(&self) -> usize {
        self.points[0].dim()
    }

    pub fn mode(&self) -> ScalarMode {
        self.points[0].mode()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &Point {
        &self.points[i]
    }

    pub fn first(&self) -> &Point {
        &self.points[0]
    }

    pub fn last(&self) -> &Point {
        self.points.last().unwrap()
    }

    /// Converts to float mode (each rational rounds to the nearest double).
    pub fn to_float(&self) -> Curve {
        Curve { points: self.points.iter().map(Point::to_float).collect() }
    }

    /// Flat row-major coordinate buffer, converting to doubles.
    pub fn flat_f64(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.len() * self.dim());
        for p in &self.points {
            out.extend(p.coords().iter().map(Scalar::to_f64));
        }
        out
    }

    /// Piecewise-linear evaluation at `t` in `[0, len-1]`. Integer `t`
    /// returns the vertex itself, so exact coordinates are preserved.
    pub fn eval(&self, t: &Scalar) -> Result<Point> {
        if t.mode() != self.mode() {
            return Err(Error::ScalarModeMismatch { context: "eval parameter" });
        }
        match t {
            Scalar::Rational(r) => {
                let upper = BigRational::from_integer(BigInt::from(self.len() as i64 - 1));
                if r.is_negative() || *r > upper {
                    return Err(Error::OutOfRange { what: "eval parameter", detail: format!("{r} not in [0, {}]", self.len() - 1) });
                }
                let i = r.floor().to_integer().to_usize().unwrap().min(self.len().saturating_sub(2));
                let lambda = r - BigRational::from_integer(BigInt::from(i as i64));
                if lambda.is_zero() || self.len() == 1 {
                    return Ok(self.points[i].clone());
                }
                let a = &self.points[i];
                let b = &self.points[i + 1];
                let one = BigRational::from_integer(BigInt::from(1));
                let coords = a
                    .coords()
                    .iter()
                    .zip(b.coords())
                    .map(|(ca, cb)| {
                        let (ca, cb) = (ca.as_rational().unwrap(), cb.as_rational().unwrap());
                        Scalar::Rational(&(&one - &lambda) * ca + &lambda * cb)
                    })
                    .collect();
                Point::new(coords)
            }
            Scalar::Float(t) => {
                let upper = (self.len() - 1) as f64;
                if !t.is_finite() || *t < 0.0 || *t > upper {
                    return Err(Error::OutOfRange { what: "eval parameter", detail: format!("{t} not in [0, {upper}]") });
                }
                let i = (t.floor() as usize).min(self.len().saturating_sub(2));
                let lambda = t - i as f64;
                if lambda == 0.0 || self.len() == 1 {
                    return Ok(self.points[i].clone());
                }
                let a = self.points[i].to_f64_vec();
                let b = self.points[i + 1].to_f64_vec();
                let coords: Vec<f64> = a.iter().zip(&b).map(|(ca, cb)| (1.0 - lambda) * ca + lambda * cb).collect();
                Ok(Point::from_f64(&coords))
            }
        }
    }

    /// Total arc length as a double. Zero-length segments contribute 0.
    pub fn total_length_f64(&self) -> f64 {
        let flat = self.flat_f64();
        let d = self.dim();
        let mut acc = 0.0;
        for w in 0..self.len().saturating_sub(1) {
            let mut s = 0.0;
            for k in 0..d {
                let diff = flat[(w + 1) * d + k] - flat[w * d + k];
                s += diff * diff;
            }
            acc += s.sqrt();
        }
        acc
    }
}

/// Concatenation: the vertex lists joined in order. The implicit connecting
/// segment between adjacent endpoints is exactly what the vertex list
/// realizes, so no extra vertices appear.
pub fn concat(parts: &[Curve]) -> Result<Curve> {
    if parts.is_empty() {
        return Err(Error::Empty { what: "concat input" });
    }
    let dim = parts[0].dim();
    let mode = parts[0].mode();
    let mut points = Vec::with_capacity(parts.iter().map(Curve::len).sum());
    for c in parts {
        if c.dim() != dim {
            return Err(Error::DimensionMismatch { left: dim, right: c.dim() });
        }
        if c.mode() != mode {
            return Err(Error::ScalarModeMismatch { context: "concat" });
        }
        points.extend(c.points().iter().cloned());
    }
    Curve::new(points)
}

/// Translates every vertex by `z` along coordinate 0.
pub fn translate_x(curve: &Curve, z: &Scalar) -> Result<Curve> {
    if z.mode() != curve.mode() {
        return Err(Error::ScalarModeMismatch { context: "translate_x" });
    }
    let points = curve
        .points()
        .iter()
        .map(|p| {
            let mut coords = p.coords().to_vec();
            coords[0] = coords[0].add(z);
            Point { coords }
        })
        .collect();
    Ok(Curve { points })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seg(a: (f64, f64), b: (f64, f64)) -> Curve {
        Curve::float2(&[a, b])
    }

    #[test]
    fn concat_of_single_points() {
        let c = concat(&[
            Curve::single(Point::from_f64(&[0.0, 0.0])),
            Curve::single(Point::from_f64(&[1.0, 0.0])),
        ])
        .unwrap();
        assert_eq!(c.len(), 2);
    }

    #[test]
    fn concat_identity_and_associativity() {
        let p = seg((0.0, 0.0), (1.0, 1.0));
        assert_eq!(concat(std::slice::from_ref(&p)).unwrap(), p);
        let q = seg((2.0, 0.0), (3.0, 1.0));
        let r = seg((4.0, 0.0), (5.0, 1.0));
        let left = concat(&[concat(&[p.clone(), q.clone()]).unwrap(), r.clone()]).unwrap();
        let right = concat(&[p, concat(&[q, r]).unwrap()]).unwrap();
        assert_eq!(left, right);
    }

    #[test]
    fn concat_rejects_mode_mismatch() {
        let f = seg((0.0, 0.0), (1.0, 0.0));
        let r = Curve::new(vec![Point::rational2((0, 1), (0, 1))]).unwrap();
        assert!(concat(&[f, r]).is_err());
    }

    #[test]
    fn translate_single_point_and_inverse() {
        let p = Curve::new(vec![Point::rational2((0, 1), (0, 1))]).unwrap();
        let z = Scalar::ratio(2, 7);
        let shifted = translate_x(&p, &z).unwrap();
        assert_eq!(shifted.point(0).coord(0), &Scalar::ratio(2, 7));
        let back = translate_x(&shifted, &Scalar::ratio(-2, 7)).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn translate_preserves_pairwise_distances() {
        let c = Curve::float2(&[(0.0, 0.0), (1.5, 2.0), (-3.0, 0.25)]);
        let t = translate_x(&c, &Scalar::float(std::f64::consts::SQRT_2)).unwrap();
        for i in 0..c.len() {
            for j in 0..c.len() {
                let a = squared_distance(c.point(i), c.point(j)).unwrap().to_f64();
                let b = squared_distance(t.point(i), t.point(j)).unwrap().to_f64();
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn eval_midpoint_and_vertices() {
        let c = seg((0.0, 0.0), (2.0, 0.0));
        let mid = c.eval(&Scalar::float(0.5)).unwrap();
        assert_eq!(mid.to_f64_vec(), vec![1.0, 0.0]);
        assert_eq!(c.eval(&Scalar::float(0.0)).unwrap(), *c.first());
    }

    #[test]
    fn eval_between_second_pair() {
        // (0,0)∘(1,0)∘(1,1) at t = 1.25 -> (1, 0.25)
        let c = Curve::float2(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0)]);
        let p = c.eval(&Scalar::float(1.25)).unwrap();
        assert_eq!(p.to_f64_vec(), vec![1.0, 0.25]);
    }

    #[test]
    fn eval_exact_rational() {
        let c = Curve::new(vec![
            Point::rational2((0, 1), (0, 1)),
            Point::rational2((1, 1), (0, 1)),
            Point::rational2((1, 1), (1, 1)),
        ])
        .unwrap();
        let p = c.eval(&Scalar::ratio(5, 4)).unwrap();
        assert_eq!(p.coord(0), &Scalar::int(1));
        assert_eq!(p.coord(1), &Scalar::ratio(1, 4));
        // integer parameter returns the vertex exactly
        assert_eq!(c.eval(&Scalar::int(2)).unwrap(), *c.last());
        assert!(c.eval(&Scalar::ratio(9, 4)).is_err());
    }

    #[test]
    fn squared_distance_exact() {
        // ||r1 - r2|| = 1 on the synchronization points
        let r1 = Point::rational2((-1, 3), (1, 2));
        let r2 = Point::rational2((-1, 3), (-1, 2));
        assert_eq!(squared_distance(&r1, &r2).unwrap(), Scalar::int(1));
        assert_eq!(distance(&r1, &r2).unwrap(), 1.0);
        assert_eq!(squared_distance(&r1, &r1).unwrap(), Scalar::int(0));
        // (1+2eps)^2 with eps = 1/1000, exactly 251001/250000
        let a = Point::rational2((0, 1), (501, 1000));
        let b = Point::rational2((0, 1), (-501, 1000));
        assert_eq!(squared_distance(&a, &b).unwrap(), Scalar::ratio(251_001, 250_000));
    }

    #[test]
    fn threshold_comparison_is_exact() {
        let sq = Scalar::ratio(251_001, 250_000); // (1 + 2/1000)^2
        assert!(!le_threshold(&sq, &Scalar::ratio(1001, 1000), 0.0).unwrap());
        assert!(le_threshold(&sq, &Scalar::ratio(1002, 1000), 0.0).unwrap());
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let p2 = Point::from_f64(&[0.0, 0.0]);
        let p3 = Point::from_f64(&[0.0, 0.0, 0.0]);
        assert!(squared_distance(&p2, &p3).is_err());
    }

    #[test]
    fn degenerate_segments_have_zero_length() {
        let c = Curve::float2(&[(0.0, 0.0), (0.0, 0.0), (3.0, 4.0)]);
        assert!((c.total_length_f64() - 5.0).abs() < 1e-12);
    }
}
