//! JSON interchange formats for curves and reduction instances.
//!
//! Curve files look like `{"dim": 2, "mode": "rational", "points":
//! [["-1/3", "1/2"], ...]}`: rational coordinates are `p/q` strings
//! (exact round-trip), float coordinates are JSON numbers. Instance files
//! wrap two curves with a provenance record.

use crate::error::{Error, Result};
use crate::geometry::{Curve, Point, Scalar, ScalarMode};
use crate::instance::{Gap, InstanceParams, ReductionInstance, ReductionKind};
use num_rational::BigRational;
use serde_json::{json, Map, Value};
use std::str::FromStr;

fn scalar_to_value(s: &Scalar) -> Value {
    match s {
        Scalar::Rational(r) => Value::String(r.to_string()),
        Scalar::Float(f) => json!(f),
    }
}

fn scalar_from_value(v: &Value, mode: ScalarMode) -> Result<Scalar> {
    match (mode, v) {
        (ScalarMode::Rational, Value::String(s)) => {
            let r = BigRational::from_str(s)
                .map_err(|e| Error::Format { what: "rational coordinate", msg: format!("'{s}': {e}") })?;
            Ok(Scalar::Rational(r))
        }
        (ScalarMode::Float, Value::Number(n)) => {
            let f = n.as_f64().ok_or(Error::Format { what: "float coordinate", msg: format!("{n}") })?;
            Ok(Scalar::Float(f))
        }
        (ScalarMode::Rational, other) => {
            Err(Error::Format { what: "rational coordinate", msg: format!("expected \"p/q\" string, got {other}") })
        }
        (ScalarMode::Float, other) => {
            Err(Error::Format { what: "float coordinate", msg: format!("expected number, got {other}") })
        }
    }
}

/// Serializes a curve to the interchange JSON value.
pub fn curve_to_json(curve: &Curve) -> Value {
    let mode = match curve.mode() {
        ScalarMode::Rational => "rational",
        ScalarMode::Float => "float",
    };
    let points: Vec<Value> = curve
        .points()
        .iter()
        .map(|p| Value::Array(p.coords().iter().map(scalar_to_value).collect()))
        .collect();
    json!({ "dim": curve.dim(), "mode": mode, "points": points })
}

/// Parses a curve from its interchange JSON value.
pub fn curve_from_json(v: &Value) -> Result<Curve> {
    let obj = v.as_object().ok_or(Error::Format { what: "curve JSON", msg: "not an object".into() })?;
    let dim = obj
        .get("dim")
        .and_then(Value::as_u64)
        .ok_or(Error::Format { what: "curve JSON", msg: "missing integer 'dim'".into() })? as usize;
    let mode = match obj.get("mode").and_then(Value::as_str) {
        Some("rational") => ScalarMode::Rational,
        Some("float") => ScalarMode::Float,
        other => {
            return Err(Error::Format { what: "curve JSON", msg: format!("mode must be 'rational' or 'float', got {other:?}") })
        }
    };
    let points_json = obj
        .get("points")
        .and_then(Value::as_array)
        .ok_or(Error::Format { what: "curve JSON", msg: "missing array 'points'".into() })?;
    let mut points = Vec::with_capacity(points_json.len());
    for pv in points_json {
        let coords_json = pv
            .as_array()
            .ok_or(Error::Format { what: "curve JSON", msg: "point is not an array".into() })?;
        if coords_json.len() != dim {
            return Err(Error::DimensionMismatch { left: dim, right: coords_json.len() });
        }
        let coords = coords_json
            .iter()
            .map(|cv| scalar_from_value(cv, mode))
            .collect::<Result<Vec<_>>>()?;
        points.push(Point::new(coords)?);
    }
    Curve::new(points)
}

pub fn curve_to_string(curve: &Curve) -> String {
    serde_json::to_string_pretty(&curve_to_json(curve)).expect("curve serialization")
}

pub fn curve_from_str(text: &str) -> Result<Curve> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::Format { what: "curve JSON", msg: e.to_string() })?;
    curve_from_json(&v)
}

/// Serializes an instance: both curves plus the provenance sidecar record.
pub fn instance_to_json(inst: &ReductionInstance) -> Value {
    let mut params = Map::new();
    if let Some(eps) = &inst.params.epsilon {
        params.insert("epsilon".into(), scalar_to_value(eps));
    }
    if let Some(g) = inst.params.gamma {
        params.insert("gamma".into(), json!(g));
    }
    if let Some(l) = inst.params.ell_split {
        params.insert("ell_split".into(), json!(l));
    }
    if let Some(b) = inst.params.buckets {
        params.insert("buckets".into(), json!(b));
    }
    if let Some(b) = inst.params.beta {
        params.insert("beta".into(), json!(b));
    }
    if let Some(c) = inst.params.claimed_packedness {
        params.insert("claimed_packedness".into(), json!(c));
    }
    let mut provenance = Map::new();
    provenance.insert("kind".into(), json!(inst.kind.as_str()));
    provenance.insert("params".into(), Value::Object(params));
    if let Some(h) = &inst.formula_sha256 {
        provenance.insert("formula_sha256".into(), json!(h));
    }
    if let Some(n) = inst.num_vars {
        provenance.insert("num_vars".into(), json!(n));
    }
    if let Some(m) = inst.num_clauses {
        provenance.insert("num_clauses".into(), json!(m));
    }
    json!({
        "provenance": Value::Object(provenance),
        "gap": {
            "accept": scalar_to_value(&inst.gap.accept),
            "reject_above": scalar_to_value(&inst.gap.reject_above),
        },
        "p1": curve_to_json(&inst.p1),
        "p2": curve_to_json(&inst.p2),
    })
}

pub fn instance_to_string(inst: &ReductionInstance) -> String {
    serde_json::to_string_pretty(&instance_to_json(inst)).expect("instance serialization")
}

/// Parses an instance file.
pub fn instance_from_json(v: &Value) -> Result<ReductionInstance> {
    let obj = v.as_object().ok_or(Error::Format { what: "instance JSON", msg: "not an object".into() })?;
    let prov = obj
        .get("provenance")
        .and_then(Value::as_object)
        .ok_or(Error::Format { what: "instance JSON", msg: "missing 'provenance'".into() })?;
    let kind_str = prov
        .get("kind")
        .and_then(Value::as_str)
        .ok_or(Error::Format { what: "instance JSON", msg: "missing 'provenance.kind'".into() })?;
    let kind = ReductionKind::parse(kind_str)
        .ok_or(Error::Format { what: "instance JSON", msg: format!("unknown kind '{kind_str}'") })?;
    let p1 = curve_from_json(obj.get("p1").ok_or(Error::Format { what: "instance JSON", msg: "missing 'p1'".into() })?)?;
    let p2 = curve_from_json(obj.get("p2").ok_or(Error::Format { what: "instance JSON", msg: "missing 'p2'".into() })?)?;
    let scalar_mode = p1.mode();

    let gap_obj = obj
        .get("gap")
        .and_then(Value::as_object)
        .ok_or(Error::Format { what: "instance JSON", msg: "missing 'gap'".into() })?;
    let gap = Gap {
        accept: scalar_from_value(
            gap_obj.get("accept").ok_or(Error::Format { what: "instance JSON", msg: "missing 'gap.accept'".into() })?,
            scalar_mode,
        )?,
        reject_above: scalar_from_value(
            gap_obj
                .get("reject_above")
                .ok_or(Error::Format { what: "instance JSON", msg: "missing 'gap.reject_above'".into() })?,
            scalar_mode,
        )?,
    };

    let mut params = InstanceParams::default();
    if let Some(pobj) = prov.get("params").and_then(Value::as_object) {
        if let Some(eps) = pobj.get("epsilon") {
            // epsilon keeps the mode of its curves
            params.epsilon = Some(scalar_from_value(eps, scalar_mode)?);
        }
        params.gamma = pobj.get("gamma").and_then(Value::as_f64);
        params.ell_split = pobj.get("ell_split").and_then(Value::as_u64).map(|v| v as usize);
        params.buckets = pobj.get("buckets").and_then(Value::as_u64).map(|v| v as usize);
        params.beta = pobj.get("beta").and_then(Value::as_f64);
        params.claimed_packedness = pobj.get("claimed_packedness").and_then(Value::as_f64);
    }

    Ok(ReductionInstance {
        kind,
        p1,
        p2,
        gap,
        params,
        formula_sha256: prov.get("formula_sha256").and_then(Value::as_str).map(String::from),
        num_vars: prov.get("num_vars").and_then(Value::as_u64).map(|v| v as usize),
        num_clauses: prov.get("num_clauses").and_then(Value::as_u64).map(|v| v as usize),
    })
}

pub fn instance_from_str(text: &str) -> Result<ReductionInstance> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::Format { what: "instance JSON", msg: e.to_string() })?;
    instance_from_json(&v)
}
