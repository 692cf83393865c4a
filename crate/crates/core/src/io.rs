//! Body description files and structured-text report export.
//!
//! Bodies are JSON documents:
//! `{"type":"polygon","vertices":[["num/den","num/den"],...]}` |
//! `{"type":"arcgon","arcs":[{"center":[x,y],"radius":r,"from":a,"to":b}]}` |
//! `{"type":"fourier","a0":v,"terms":[[j,aj,bj],...]}`.
//! Rational coordinates serialize as `"p/q"` strings; plain numbers are
//! accepted for polygon vertices and converted to the exactly equal
//! rational, so parsing loses nothing.

use crate::body::{Arc, Arcgon, Body, ConvexPolygon, FourierBody, SmoothBody};
use crate::convexity::ConvexityReport;
use crate::kernel::{rat_from_f64, Rat, Rat2, P2};
use crate::perturb::{CutConstruction, PerturbationTrace, SmoothCertificate};
use crate::GeoError;
use num_bigint::BigInt;
use serde_json::{json, Map, Value};
use std::str::FromStr;

/// Canonical string form of an exact rational: `"num/den"` in lowest terms.
pub fn rat_string(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parse a rational from a JSON value: a `"p/q"` or integer string, or any
/// JSON number (converted exactly).
pub fn parse_rat(v: &Value) -> Result<Rat, GeoError> {
    match v {
        Value::Number(n) => {
            let f = n
                .as_f64()
                .ok_or_else(|| GeoError::Parse(format!("number out of range: {n}")))?;
            if !f.is_finite() {
                return Err(GeoError::Parse(format!("non-finite number: {n}")));
            }
            Ok(rat_from_f64(f))
        }
        Value::String(s) => {
            let (num, den) = match s.split_once('/') {
                Some((a, b)) => (a.trim(), b.trim()),
                None => (s.trim(), "1"),
            };
            let n = BigInt::from_str(num)
                .map_err(|e| GeoError::Parse(format!("bad numerator {num:?}: {e}")))?;
            let d = BigInt::from_str(den)
                .map_err(|e| GeoError::Parse(format!("bad denominator {den:?}: {e}")))?;
            if d == BigInt::from(0) {
                return Err(GeoError::Parse("zero denominator".into()));
            }
            Ok(Rat::new(n, d))
        }
        other => Err(GeoError::Parse(format!("expected rational, got {other}"))),
    }
}

fn parse_f64(v: &Value) -> Result<f64, GeoError> {
    v.as_f64()
        .filter(|f| f.is_finite())
        .ok_or_else(|| GeoError::Parse(format!("expected finite number, got {v}")))
}

fn point_json(p: &Rat2) -> Value {
    json!([rat_string(&p.x), rat_string(&p.y)])
}

fn parse_point(v: &Value) -> Result<Rat2, GeoError> {
    let arr = v
        .as_array()
        .filter(|a| a.len() == 2)
        .ok_or_else(|| GeoError::Parse(format!("expected [x, y], got {v}")))?;
    Ok(Rat2::new(parse_rat(&arr[0])?, parse_rat(&arr[1])?))
}

/// Parse a body description document.
pub fn parse_body_str(s: &str) -> Result<Body, GeoError> {
    let v: Value =
        serde_json::from_str(s).map_err(|e| GeoError::Parse(format!("invalid JSON: {e}")))?;
    parse_body(&v)
}

pub fn parse_body(v: &Value) -> Result<Body, GeoError> {
    let typ = v
        .get("type")
        .and_then(Value::as_str)
        .ok_or_else(|| GeoError::Parse("missing \"type\" field".into()))?;
    match typ {
        "polygon" => {
            let verts = v
                .get("vertices")
                .and_then(Value::as_array)
                .ok_or_else(|| GeoError::Parse("polygon needs \"vertices\"".into()))?;
            let pts: Vec<Rat2> = verts.iter().map(parse_point).collect::<Result<_, _>>()?;
            let poly = ConvexPolygon::new(pts)
                .map_err(|e| GeoError::Parse(format!("invalid polygon: {e}")))?;
            Ok(Body::Polygon(poly))
        }
        "arcgon" => {
            let arcs_v = v
                .get("arcs")
                .and_then(Value::as_array)
                .ok_or_else(|| GeoError::Parse("arcgon needs \"arcs\"".into()))?;
            let mut arcs = Vec::with_capacity(arcs_v.len());
            for a in arcs_v {
                let center = a
                    .get("center")
                    .and_then(Value::as_array)
                    .filter(|c| c.len() == 2)
                    .ok_or_else(|| GeoError::Parse("arc needs \"center\":[x,y]".into()))?;
                arcs.push(Arc {
                    center: P2::new(parse_f64(&center[0])?, parse_f64(&center[1])?),
                    radius: parse_f64(
                        a.get("radius")
                            .ok_or_else(|| GeoError::Parse("arc needs \"radius\"".into()))?,
                    )?,
                    from: parse_f64(
                        a.get("from")
                            .ok_or_else(|| GeoError::Parse("arc needs \"from\"".into()))?,
                    )?,
                    to: parse_f64(
                        a.get("to")
                            .ok_or_else(|| GeoError::Parse("arc needs \"to\"".into()))?,
                    )?,
                });
            }
            let body =
                Arcgon::new(arcs).map_err(|e| GeoError::Parse(format!("invalid arcgon: {e}")))?;
            Ok(Body::Smooth(SmoothBody::Arcgon(body)))
        }
        "fourier" => {
            let a0 = parse_f64(
                v.get("a0")
                    .ok_or_else(|| GeoError::Parse("fourier needs \"a0\"".into()))?,
            )?;
            let terms_v = v
                .get("terms")
                .and_then(Value::as_array)
                .ok_or_else(|| GeoError::Parse("fourier needs \"terms\"".into()))?;
            let mut terms = Vec::with_capacity(terms_v.len());
            for t in terms_v {
                let arr = t
                    .as_array()
                    .filter(|a| a.len() == 3)
                    .ok_or_else(|| GeoError::Parse("fourier term must be [j, aj, bj]".into()))?;
                let j = arr[0]
                    .as_u64()
                    .ok_or_else(|| GeoError::Parse("frequency must be a positive integer".into()))?;
                terms.push((j as u32, parse_f64(&arr[1])?, parse_f64(&arr[2])?));
            }
            let body = FourierBody::new(a0, terms)
                .map_err(|e| GeoError::Parse(format!("invalid fourier body: {e}")))?;
            Ok(Body::Smooth(SmoothBody::Fourier(body)))
        }
        other => Err(GeoError::Parse(format!("unknown body type {other:?}"))),
    }
}

pub fn body_json(body: &Body) -> Value {
    match body {
        Body::Polygon(p) => json!({
            "type": "polygon",
            "vertices": p.vertices().iter().map(point_json).collect::<Vec<_>>(),
        }),
        Body::Smooth(SmoothBody::Arcgon(a)) => json!({
            "type": "arcgon",
            "arcs": a.arcs().iter().map(|arc| json!({
                "center": [arc.center.x, arc.center.y],
                "radius": arc.radius,
                "from": arc.from,
                "to": arc.to,
            })).collect::<Vec<_>>(),
        }),
        Body::Smooth(SmoothBody::Fourier(f)) => json!({
            "type": "fourier",
            "a0": f.a0,
            "terms": f.terms.iter().map(|&(j, a, b)| json!([j, a, b])).collect::<Vec<_>>(),
        }),
    }
}

pub fn body_to_string(body: &Body) -> String {
    serde_json::to_string_pretty(&body_json(body)).expect("json serialization")
}

fn cut_json(c: &CutConstruction) -> Value {
    json!({
        "corner": point_json(&c.corner),
        "support_normal": point_json(&c.support_normal),
        "p_index": c.p_index,
        "q_index": c.q_index,
        "p": point_json(&c.p),
        "q": point_json(&c.q),
        "edge_i": c.edge_i,
        "edge_i1": c.edge_i1,
        "edge_j": c.edge_j,
        "edge_m": c.edge_m,
        "s": point_json(&c.s),
        "s1": point_json(&c.s1),
        "s2": point_json(&c.s2),
        "t": point_json(&c.t),
        "t1": point_json(&c.t1),
        "t2": point_json(&c.t2),
        "tau": rat_string(&c.tau),
        "sigma": rat_string(&c.sigma),
        "lambda": rat_string(&c.lambda),
        "lq_offset": rat_string(&c.lq_offset),
        "psi_q": c.psi_q,
        "psi_p": c.psi_p,
        "y": point_json(&c.y),
        "z": point_json(&c.z),
    })
}

/// Structured export of a perturbation run, suitable for replay.
pub fn trace_json(trace: &PerturbationTrace) -> Value {
    let steps: Vec<Value> = trace
        .steps
        .iter()
        .map(|s| {
            let mut obj = Map::new();
            obj.insert("hull_count".into(), json!(s.hull_count));
            obj.insert("snapped".into(), json!(s.snapped));
            obj.insert(
                "polygon".into(),
                body_json(&Body::Polygon(s.polygon.clone())),
            );
            if let Some(cut) = &s.cut {
                obj.insert("cut".into(), cut_json(cut));
            }
            if let Some(after) = &s.polygon_after_cut {
                obj.insert(
                    "polygon_after_cut".into(),
                    body_json(&Body::Polygon(after.clone())),
                );
            }
            Value::Object(obj)
        })
        .collect();
    json!({
        "eps": trace.eps,
        "counts": trace.counts(),
        "steps": steps,
    })
}

/// Structured export of a convexity-point verification.
pub fn report_json(r: &ConvexityReport) -> Value {
    json!({
        "symmetric": r.symmetric,
        "center": r.center.as_ref().map(point_json),
        "candidates": r.candidates.iter()
            .map(|(p, i)| json!({"point": point_json(p), "corner": i}))
            .collect::<Vec<_>>(),
        "verified": r.verified.iter().map(point_json).collect::<Vec<_>>(),
        "affine_independent_triple": r.affine_independent_triple.as_ref()
            .map(|(a, b, c)| json!([point_json(a), point_json(b), point_json(c)])),
    })
}

/// Structured export of a smoothing certificate.
pub fn certificate_json(c: &SmoothCertificate) -> Value {
    json!({
        "target_count": c.target_count,
        "accepted_radius": c.accepted_radius,
        "steps": c.steps.iter().map(|s| json!({
            "radius": s.radius,
            "delta": s.delta,
            "hedgehog_hull_count": s.hedgehog_hull_count,
            "containment_ok": s.containment_ok,
        })).collect::<Vec<_>>(),
    })
}
