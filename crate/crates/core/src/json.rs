//! JSON encodings of paths, orbits, profiles, catalogs, certificates and
//! audit reports.
//!
//! Keys are emitted in sorted order. Exact rationals travel as `"p/q"`
//! strings; enclosures of irrational values as
//! `{"approx": true, "lo": …, "hi": …}`. A bare JSON number read where a
//! real is expected becomes a tight enclosure of that float.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use serde_json::{json, Map, Value};

use crate::bott::{BottData, BottJump, JumpAtOne, LocalHomology};
use crate::chomology::audit::{Counting, Perfection, Step, StepStatus, Window};
use crate::chomology::{
    AuditReport, ConvexityReport, Mode, MorseRow, MorseTable, Orbit, OrbitCatalog, PrequantProfile,
    Resonance,
};
use crate::cijt::{Check, CijtCertificate};
use crate::error::{Error, Result};
use crate::number::{parse_rational, rational_to_string, Interval, Rational, Real};
use crate::sympath::{Block, Generator, SymplecticPath, Tolerances};

pub const SCHEMA_VERSION: u32 = 1;

fn perr(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key)
        .ok_or_else(|| perr(format!("missing field {key:?}")))
}

fn as_i64(v: &Value, what: &str) -> Result<i64> {
    v.as_i64()
        .ok_or_else(|| perr(format!("{what} must be an integer")))
}

fn as_u64(v: &Value, what: &str) -> Result<u64> {
    v.as_u64()
        .ok_or_else(|| perr(format!("{what} must be a non-negative integer")))
}

fn as_f64(v: &Value, what: &str) -> Result<f64> {
    v.as_f64()
        .ok_or_else(|| perr(format!("{what} must be a number")))
}

fn as_array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array()
        .ok_or_else(|| perr(format!("{what} must be an array")))
}

fn int(v: &Value, key: &str) -> Result<i64> {
    as_i64(field(v, key)?, key)
}

fn uint(v: &Value, key: &str) -> Result<u64> {
    as_u64(field(v, key)?, key)
}

fn small(v: &Value, key: &str) -> Result<u32> {
    u32::try_from(uint(v, key)?).map_err(|_| perr(format!("{key} out of range")))
}

/// Canonical text form: sorted keys, two-space indentation.
pub fn to_canonical_string(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON values always serialize")
}

pub fn parse_str(s: &str) -> Result<Value> {
    serde_json::from_str(s).map_err(|e| perr(e.to_string()))
}

// numbers

pub fn rational_json(r: &Rational) -> Value {
    Value::String(rational_to_string(r))
}

pub fn rational_from_json(v: &Value) -> Result<Rational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) if n.is_i64() => {
            Ok(Rational::from_integer(n.as_i64().unwrap_or(0) as i128))
        }
        _ => Err(perr(format!("expected an exact rational, got {v}"))),
    }
}

pub fn real_json(r: &Real) -> Value {
    match r {
        Real::Exact(q) => rational_json(q),
        Real::Approx(i) => json!({"approx": true, "lo": i.lo, "hi": i.hi}),
    }
}

pub fn real_from_json(v: &Value) -> Result<Real> {
    match v {
        Value::String(_) => Ok(Real::Exact(rational_from_json(v)?)),
        Value::Number(n) if n.is_i64() => Ok(Real::Exact(rational_from_json(v)?)),
        Value::Number(n) => {
            let x = n.as_f64().ok_or_else(|| perr("bad number"))?;
            Ok(Real::Approx(Interval::around(
                x,
                4.0 * f64::EPSILON * x.abs().max(1.0),
            )))
        }
        Value::Object(_) => {
            let lo = as_f64(field(v, "lo")?, "lo")?;
            let hi = as_f64(field(v, "hi")?, "hi")?;
            if lo.is_nan() || hi.is_nan() || lo > hi {
                return Err(perr("enclosure needs lo ≤ hi"));
            }
            Ok(Real::Approx(Interval::new(lo, hi)))
        }
        _ => Err(perr(format!("expected a real, got {v}"))),
    }
}

fn matrix_json(m: &DMatrix<f64>) -> Value {
    Value::Array(
        (0..m.nrows())
            .map(|i| Value::Array((0..m.ncols()).map(|j| json!(m[(i, j)])).collect()))
            .collect(),
    )
}

fn matrix_from_json(v: &Value) -> Result<DMatrix<f64>> {
    let rows = as_array(v, "matrix")?;
    let r = rows.len();
    let mut data = Vec::new();
    let mut c = None;
    for row in rows {
        let row = as_array(row, "matrix row")?;
        if *c.get_or_insert(row.len()) != row.len() {
            return Err(perr("ragged matrix"));
        }
        for x in row {
            data.push(as_f64(x, "matrix entry")?);
        }
    }
    Ok(DMatrix::from_row_slice(r, c.unwrap_or(0), &data))
}

// paths

fn block_json(b: &Block) -> Value {
    match b {
        Block::Rotation { angle } => json!({"rotation": real_json(angle)}),
        Block::Hyperbolic {
            log_scale,
            half_turns,
        } => json!({"log_scale": log_scale, "half_turns": half_turns}),
    }
}

fn hyperbolic_from_json(v: &Value) -> Result<Block> {
    match v {
        Value::Number(_) => Block::hyperbolic(as_f64(v, "λ")?),
        Value::Object(_) if v.get("lambda").is_some() => {
            Block::hyperbolic(as_f64(field(v, "lambda")?, "lambda")?)
        }
        Value::Object(_) => {
            let log_scale = as_f64(field(v, "log_scale")?, "log_scale")?;
            if log_scale == 0.0 {
                return Err(Error::Domain(
                    "hyperbolic block needs a nonzero log scale".into(),
                ));
            }
            Ok(Block::Hyperbolic {
                log_scale,
                half_turns: int(v, "half_turns")?,
            })
        }
        _ => Err(perr("hyperbolic parameter must be λ or an object")),
    }
}

fn block_from_json(v: &Value) -> Result<Block> {
    match v.get("rotation") {
        Some(a) => Ok(Block::rotation(real_from_json(a)?)),
        None => hyperbolic_from_json(v),
    }
}

pub fn generator_json(g: &Generator) -> Value {
    let (kind, params) = match g {
        Generator::Blocks(bs) if bs.iter().all(|b| matches!(b, Block::Rotation { .. })) => (
            "rotation_sum",
            bs.iter()
                .map(|b| match b {
                    Block::Rotation { angle } => real_json(angle),
                    Block::Hyperbolic { .. } => unreachable!(),
                })
                .collect(),
        ),
        Generator::Blocks(bs) if bs.iter().all(|b| matches!(b, Block::Hyperbolic { .. })) => {
            ("hyperbolic_sum", bs.iter().map(block_json).collect())
        }
        Generator::Blocks(bs) => ("blocks", bs.iter().map(block_json).collect()),
        Generator::ExpSymmetric(a) => ("exp_symmetric", vec![matrix_json(a)]),
        Generator::DirectSum(gs) => ("direct_sum", gs.iter().map(generator_json).collect()),
        Generator::Product(gs) => ("product", gs.iter().map(generator_json).collect()),
        Generator::Iterate(inner, k) => ("iterate", vec![generator_json(inner), json!(k)]),
        Generator::Inverse(inner) => ("inverse", vec![generator_json(inner)]),
    };
    json!({"kind": kind, "params": params})
}

pub fn generator_from_json(v: &Value) -> Result<Generator> {
    let kind = field(v, "kind")?
        .as_str()
        .ok_or_else(|| perr("kind must be a string"))?;
    let params = as_array(field(v, "params")?, "params")?;
    let sub = |i: usize| -> Result<&Value> {
        params
            .get(i)
            .ok_or_else(|| perr(format!("{kind} needs parameter {i}")))
    };
    Ok(match kind {
        "rotation_sum" => {
            Generator::rotation_sum(params.iter().map(real_from_json).collect::<Result<_>>()?)
        }
        "hyperbolic_sum" => Generator::Blocks(
            params
                .iter()
                .map(hyperbolic_from_json)
                .collect::<Result<_>>()?,
        ),
        "blocks" => Generator::Blocks(params.iter().map(block_from_json).collect::<Result<_>>()?),
        "exp_symmetric" => Generator::ExpSymmetric(matrix_from_json(sub(0)?)?),
        "direct_sum" => Generator::DirectSum(
            params
                .iter()
                .map(generator_from_json)
                .collect::<Result<_>>()?,
        ),
        "product" => Generator::Product(
            params
                .iter()
                .map(generator_from_json)
                .collect::<Result<_>>()?,
        ),
        "iterate" => {
            let k = u32::try_from(as_u64(sub(1)?, "iterate count")?)
                .map_err(|_| perr("iterate count out of range"))?;
            Generator::Iterate(Box::new(generator_from_json(sub(0)?)?), k)
        }
        "inverse" => Generator::Inverse(Box::new(generator_from_json(sub(0)?)?)),
        other => return Err(perr(format!("unknown generator kind {other:?}"))),
    })
}

pub fn path_json(p: &SymplecticPath) -> Value {
    let mut m = Map::new();
    m.insert("dim2n".into(), json!(p.dim2n));
    if let Some(g) = &p.generator {
        m.insert("generator".into(), generator_json(g));
    }
    if !p.samples.is_empty() {
        m.insert(
            "samples".into(),
            Value::Array(
                p.samples
                    .iter()
                    .map(|(t, s)| json!([t, matrix_json(s)]))
                    .collect(),
            ),
        );
    }
    Value::Object(m)
}

pub fn path_from_json(v: &Value, tol: &Tolerances) -> Result<SymplecticPath> {
    let dim = uint(v, "dim2n")? as usize;
    let generator = v.get("generator").map(generator_from_json).transpose()?;
    let samples = match v.get("samples") {
        Some(s) => as_array(s, "samples")?
            .iter()
            .map(|pair| {
                let pair = as_array(pair, "sample")?;
                if pair.len() != 2 {
                    return Err(perr("sample must be [t, matrix]"));
                }
                Ok((
                    as_f64(&pair[0], "sample time")?,
                    matrix_from_json(&pair[1])?,
                ))
            })
            .collect::<Result<Vec<_>>>()?,
        None => Vec::new(),
    };
    let path = match (generator, samples.is_empty()) {
        (None, true) => return Err(perr("path needs a generator or samples")),
        (None, false) => SymplecticPath::from_samples(dim, samples, tol)?,
        (Some(g), _) => {
            let mut p = SymplecticPath::from_generator(g)?;
            p.samples = samples;
            if !p.samples.is_empty() {
                p.validate(tol)?;
            }
            p
        }
    };
    if path.dim2n != dim {
        return Err(Error::Structural(format!(
            "dim2n is {dim} but the path has dimension {}",
            path.dim2n
        )));
    }
    Ok(path)
}

pub fn tolerances_json(t: &Tolerances) -> Value {
    json!({
        "sympl": t.sympl,
        "rank": t.rank,
        "time": t.time,
        "step": t.step,
        "integrality": t.integrality,
    })
}

// orbits

fn degree_map_json(m: &BTreeMap<i64, u64>, shift: i64) -> Value {
    Value::Object(
        m.iter()
            .map(|(d, r)| ((d + shift).to_string(), json!(r)))
            .collect(),
    )
}

fn degree_map_from_json(v: &Value, shift: i64) -> Result<BTreeMap<i64, u64>> {
    let obj = v
        .as_object()
        .ok_or_else(|| perr("degree map must be an object"))?;
    obj.iter()
        .map(|(k, r)| {
            let d: i64 = k
                .trim()
                .parse()
                .map_err(|_| perr(format!("bad degree {k:?}")))?;
            Ok((d - shift, as_u64(r, "rank")?))
        })
        .collect()
}

pub fn orbit_json(o: &Orbit) -> Value {
    let d = &o.data;
    let jumps: Vec<Value> = d
        .jumps
        .iter()
        .map(|j| {
            let mut m = Map::new();
            match &j.angle {
                Real::Exact(a) => {
                    m.insert("angle_num".into(), json!(a.numer()));
                    m.insert("angle_den".into(), json!(a.denom()));
                }
                approx => {
                    m.insert("angle".into(), real_json(approx));
                }
            }
            m.insert("s_plus".into(), json!(j.s_plus));
            m.insert("s_minus".into(), json!(j.s_minus));
            m.insert("nu".into(), json!(j.nu));
            Value::Object(m)
        })
        .collect();
    // plain maps carry absolute degrees of the simple orbit
    let lh = match &d.local_homology {
        None => Value::Null,
        Some(l) if l.period == 1 => degree_map_json(&l.offsets[0], d.b_at_one),
        Some(l) => json!({
            "period": l.period,
            "offsets": l.offsets.iter().map(|m| degree_map_json(m, 0)).collect::<Vec<_>>(),
        }),
    };
    json!({
        "name": o.name,
        "dim2n": d.dim2n,
        "b_at_one": d.b_at_one,
        "jumps": jumps,
        "jump_at_one": d.jump_at_one.map_or(Value::Null, |j| json!({"s": j.s, "nu": j.nu})),
        "elliptic_height": d.elliptic_height,
        "local_homology": lh,
    })
}

pub fn orbit_from_json(v: &Value) -> Result<Orbit> {
    let name = field(v, "name")?
        .as_str()
        .ok_or_else(|| perr("name must be a string"))?
        .to_string();
    let b_at_one = int(v, "b_at_one")?;
    let jumps = as_array(field(v, "jumps")?, "jumps")?
        .iter()
        .map(|j| {
            let angle = match j.get("angle") {
                Some(a) => real_from_json(a)?,
                None => {
                    let den = int(j, "angle_den")?;
                    if den == 0 {
                        return Err(perr("angle_den must be nonzero"));
                    }
                    Real::Exact(Rational::new(int(j, "angle_num")? as i128, den as i128))
                }
            };
            Ok(BottJump {
                angle,
                s_plus: small(j, "s_plus")?,
                s_minus: small(j, "s_minus")?,
                nu: small(j, "nu")?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let jump_at_one = match v.get("jump_at_one") {
        None | Some(Value::Null) => None,
        Some(j) => Some(JumpAtOne {
            s: small(j, "s")?,
            nu: small(j, "nu")?,
        }),
    };
    let local_homology = match v.get("local_homology") {
        None | Some(Value::Null) => None,
        Some(l) if l.get("period").is_some() && l.get("offsets").is_some() => {
            let period = small(l, "period")?;
            let offsets = as_array(field(l, "offsets")?, "offsets")?
                .iter()
                .map(|m| degree_map_from_json(m, 0))
                .collect::<Result<Vec<_>>>()?;
            if period == 0 || offsets.len() != period as usize {
                return Err(perr(
                    "local_homology needs one offset map per iterate in the period",
                ));
            }
            Some(LocalHomology { period, offsets })
        }
        Some(l) => Some(LocalHomology::constant(degree_map_from_json(l, b_at_one)?)),
    };
    let data = BottData {
        dim2n: uint(v, "dim2n")? as usize,
        b_at_one,
        jump_at_one,
        jumps,
        elliptic_height: small(v, "elliptic_height")?,
        local_homology,
    };
    data.validate()?;
    Ok(Orbit { name, data })
}

/// A bare array of orbit records, or an object with an `orbits` field.
pub fn orbits_from_json(v: &Value) -> Result<Vec<Orbit>> {
    let arr = match v {
        Value::Array(a) => a,
        _ => as_array(field(v, "orbits")?, "orbits")?,
    };
    arr.iter().map(orbit_from_json).collect()
}

pub fn profile_json(p: &PrequantProfile) -> Value {
    json!({
        "name": p.name,
        "n": p.n,
        "betti": p.betti,
        "I": p.i_index,
        "c_B": p.c_b,
        "r_B": p.r_b(),
        "k_minus": p.k_minus(),
    })
}

pub fn profile_from_json(v: &Value) -> Result<PrequantProfile> {
    let betti = as_array(field(v, "betti")?, "betti")?
        .iter()
        .map(|b| as_u64(b, "Betti number"))
        .collect::<Result<Vec<_>>>()?;
    let p = PrequantProfile {
        name: v
            .get("name")
            .and_then(Value::as_str)
            .unwrap_or("custom")
            .to_string(),
        n: uint(v, "n")? as usize,
        betti,
        i_index: int(v, "I")?,
        c_b: uint(v, "c_B")?,
    };
    p.validate()?;
    Ok(p)
}

pub fn catalog_json(c: &OrbitCatalog) -> Value {
    json!({
        "schema_version": SCHEMA_VERSION,
        "profile": profile_json(&c.profile),
        "orbits": c.orbits.iter().map(orbit_json).collect::<Vec<_>>(),
        "claimed_complete": c.claimed_complete,
    })
}

pub fn catalog_from_json(v: &Value) -> Result<OrbitCatalog> {
    let c = OrbitCatalog {
        profile: profile_from_json(field(v, "profile")?)?,
        orbits: orbits_from_json(v)?,
        claimed_complete: field(v, "claimed_complete")?
            .as_bool()
            .ok_or_else(|| perr("claimed_complete must be a boolean"))?,
    };
    c.validate()?;
    Ok(c)
}

// certificates

fn check_json(c: &Check) -> Value {
    json!({
        "id": c.id,
        "orbit": c.orbit,
        "pass": c.pass,
        "lhs": c.lhs,
        "relation": c.relation,
        "rhs": c.rhs,
    })
}

fn check_from_json(v: &Value) -> Result<Check> {
    let s = |k: &str| -> Result<String> {
        Ok(field(v, k)?
            .as_str()
            .ok_or_else(|| perr(format!("{k} must be a string")))?
            .to_string())
    };
    Ok(Check {
        id: s("id")?,
        orbit: uint(v, "orbit")? as usize,
        pass: field(v, "pass")?
            .as_bool()
            .ok_or_else(|| perr("pass must be a boolean"))?,
        lhs: s("lhs")?,
        relation: s("relation")?,
        rhs: s("rhs")?,
    })
}

pub fn certificate_json(c: &CijtCertificate) -> Value {
    json!({
        "schema_version": SCHEMA_VERSION,
        "N": c.n,
        "N0": c.n0,
        "k": c.k_factor,
        "m": c.m,
        "delta": c.delta,
        "q": c.q_param,
        "epsilon": rational_json(&c.epsilon),
        "frac_delta": c.frac_delta.as_ref().map_or(Value::Null, rational_json),
        "mirrored": c.mirrored,
        "checks": c.checks.iter().map(check_json).collect::<Vec<_>>(),
        "summary": c.summary(),
        "passed": c.passed(),
    })
}

pub fn certificate_from_json(v: &Value) -> Result<CijtCertificate> {
    let list = |k: &str| -> Result<Vec<u64>> {
        as_array(field(v, k)?, k)?
            .iter()
            .map(|x| as_u64(x, k))
            .collect()
    };
    Ok(CijtCertificate {
        n: uint(v, "N")?,
        n0: uint(v, "N0")?,
        k_factor: uint(v, "k")?,
        m: list("m")?,
        delta: list("delta")?
            .into_iter()
            .map(|d| {
                u8::try_from(d)
                    .ok()
                    .filter(|d| *d <= 1)
                    .ok_or_else(|| perr("delta entries are 0 or 1"))
            })
            .collect::<Result<_>>()?,
        q_param: uint(v, "q")?,
        epsilon: rational_from_json(field(v, "epsilon")?)?,
        frac_delta: match v.get("frac_delta") {
            None | Some(Value::Null) => None,
            Some(f) => Some(rational_from_json(f)?),
        },
        mirrored: v.get("mirrored").and_then(Value::as_bool).unwrap_or(false),
        checks: match v.get("checks") {
            Some(cs) => as_array(cs, "checks")?
                .iter()
                .map(check_from_json)
                .collect::<Result<_>>()?,
            None => Vec::new(),
        },
    })
}

// reports

fn mode_str(m: Mode) -> &'static str {
    match m {
        Mode::Positive => "positive",
        Mode::Negative => "negative",
    }
}

fn step_json(s: &Step) -> Value {
    let status = match s.status {
        StepStatus::Pass => "pass",
        StepStatus::Fail => "fail",
        StepStatus::Skipped => "skipped",
    };
    json!({"name": s.name, "status": status, "detail": s.detail})
}

pub fn convexity_json(c: &ConvexityReport) -> Value {
    json!({
        "mode": mode_str(c.mode),
        "threshold": c.threshold,
        "pass": c.pass,
        "good_only": c.good_only,
        "offending": c.offending.as_ref().map_or(Value::Null, |(o, k, mu)| json!({"orbit": o, "iterate": k, "index": mu})),
        "closure": c.closure.iter().map(|(o, k)| json!({"orbit": o, "checked_up_to": k})).collect::<Vec<_>>(),
    })
}

pub fn resonance_json(r: &Resonance) -> Value {
    json!({
        "lhs": real_json(&r.lhs),
        "rhs": rational_json(&r.rhs),
        "defect": real_json(&r.defect),
        "pass": r.pass,
        "orbits": r.per_orbit.iter().map(|(o, chi, d)| json!({"orbit": o, "mean_chi": rational_json(chi), "mean_index": real_json(d)})).collect::<Vec<_>>(),
    })
}

fn morse_row_json(r: &MorseRow) -> Value {
    json!({
        "degree": r.degree,
        "c": r.c,
        "b": r.b,
        "partial_c": r.partial_c,
        "partial_b": r.partial_b,
        "ok": r.ok,
    })
}

fn opt_row(r: &Option<MorseRow>) -> Value {
    r.as_ref().map_or(Value::Null, morse_row_json)
}

pub fn morse_json(m: &MorseTable) -> Value {
    json!({
        "cutoff": m.cutoff,
        "rows": m.rows.iter().map(morse_row_json).collect::<Vec<_>>(),
        "last": opt_row(&m.last),
        "pass": m.pass,
        "pointwise": m.pointwise,
        "first_violation": opt_row(&m.first_violation),
        "first_pointwise_violation": opt_row(&m.first_pointwise_violation),
        "alternating_c": m.alternating_c,
        "alternating_b": m.alternating_b,
    })
}

fn window_json(w: &Window) -> Value {
    json!({
        "lo": w.lo,
        "hi": w.hi,
        "required": w.required,
        "distinct_orbits": w.distinct_orbits,
        "exclusive": w.exclusive,
        "pass": w.pass,
        "rows": w.rows.iter().map(|r| json!({
            "degree": r.degree,
            "b0": r.b0,
            "c": r.c,
            "contributors": r.contributors.iter().map(|c| json!({"orbit": c.orbit, "iterate": c.iterate, "rank": c.rank})).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
    })
}

fn counting_json(c: &Counting) -> Value {
    json!({
        "top_degree": c.top_degree,
        "witnesses": c.witnesses,
        "alternating_c": c.alternating_c,
        "alternating_b": c.alternating_b,
        "predicted": rational_json(&c.predicted),
        "expected_c": rational_json(&c.expected_c),
        "morse_top": [c.morse_top.0, c.morse_top.1],
        "pass": c.pass,
    })
}

fn perfection_json(p: &Perfection) -> Value {
    json!({
        "geometrically_perfect": p.geometrically_perfect,
        "even_orbits": p.even_orbits,
        "even_count": p.even_orbits.len(),
        "r_B": p.r_b,
        "hypotheses": p.hypotheses,
        "pass": p.pass,
    })
}

fn opt<T>(x: &Option<T>, f: impl Fn(&T) -> Value) -> Value {
    x.as_ref().map_or(Value::Null, f)
}

pub fn report_json(r: &AuditReport, tol: &Tolerances) -> Value {
    json!({
        "schema_version": SCHEMA_VERSION,
        "verdict": r.verdict.label(),
        "reason": r.verdict.reason(),
        "failing": r.failing(),
        "steps": r.steps.iter().map(step_json).collect::<Vec<_>>(),
        "threshold": r.threshold,
        "convexity": opt(&r.convexity, convexity_json),
        "resonance": opt(&r.resonance, resonance_json),
        "certificate": opt(&r.certificate, certificate_json),
        "euler_sum": opt(&r.euler_sum, |(a, b)| json!({"lhs": rational_json(a), "rhs": rational_json(b), "pass": a == b})),
        "window": opt(&r.window, window_json),
        "extended_window": opt(&r.extended_window, window_json),
        "counting": opt(&r.counting, counting_json),
        "morse": opt(&r.morse, morse_json),
        "elliptic_witnesses": r.elliptic_witnesses,
        "sdm_witnesses": r.sdm_witnesses,
        "non_hyperbolic_witnesses": r.non_hyperbolic_witnesses,
        "case_analysis": r.case_analysis,
        "perfection": opt(&r.perfection, perfection_json),
        "tolerances": tolerances_json(tol),
    })
}
