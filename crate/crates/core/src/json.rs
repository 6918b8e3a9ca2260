//! JSON encodings of fields, elements, matrices, frames and reports.
//!
//! Elements of degree-1 fields are bare integers, otherwise little-endian
//! coefficient lists. Vector indices, blocks and triples are 1-based.

use serde_json::{json, Map, Value};

use crate::combinatorics::{
    CorrespondenceReport, Design, DesignExtraction, GammaReport, IncoherenceReport, IncoherentSet, SimplexRecord,
    SrgReport, TwoGraph, TwoGraphParams,
};
use crate::equivalence::{Obstruction, Strategy, SwitchingCertificate, UnitaryVerdict};
use crate::error::{Error, Result};
use crate::frames::{EquiangularParams, EtfReport, FrameSystem, GerzonReport, NaimarkReport, TightnessReport};
use crate::geometry::{Discriminant, HermitianSpace};
use crate::gf::{Case, Elem, Field, Involution, SquareClass};
use crate::linalg::Matrix;
use crate::search::{Dedup, NTarget, SearchMode, SearchResult, SearchSpec, DEFAULT_BUDGET};

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn get<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| parse_err(format!("missing key \"{key}\"")))
}

fn as_usize(v: &Value, what: &str) -> Result<usize> {
    v.as_u64().map(|x| x as usize).ok_or_else(|| parse_err(format!("{what} must be a non-negative integer")))
}

fn as_array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| parse_err(format!("{what} must be a list")))
}

/// Parse a JSON document.
pub fn parse(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| parse_err(e.to_string()))
}

// ---- fields and elements ----

pub fn field_to_json(f: &Field) -> Value {
    json!({
        "p": f.p(),
        "degree": f.degree(),
        "modulus": f.modulus(),
        "involution": match f.involution() {
            Involution::Identity => "identity",
            Involution::Frobenius => "frobenius",
        },
    })
}

pub fn field_from_json(v: &Value) -> Result<Field> {
    let p = get(v, "p")?.as_u64().ok_or_else(|| parse_err("p must be an integer"))?;
    let m = match v.get("degree") {
        Some(d) => d.as_u64().ok_or_else(|| parse_err("degree must be an integer"))? as u32,
        None => 1,
    };
    let involution = match v.get("involution").and_then(Value::as_str) {
        None | Some("identity") => Involution::Identity,
        Some("frobenius") => Involution::Frobenius,
        Some(other) => return Err(parse_err(format!("unknown involution \"{other}\""))),
    };
    let modulus: Option<Vec<i64>> = match v.get("modulus") {
        None | Some(Value::Null) => None,
        Some(m) => Some(
            as_array(m, "modulus")?
                .iter()
                .map(|c| c.as_i64().ok_or_else(|| parse_err("modulus coefficients must be integers")))
                .collect::<Result<_>>()?,
        ),
    };
    Field::new(p, m, modulus.as_deref(), involution)
}

pub fn elem_to_json(f: &Field, x: Elem) -> Value {
    if f.degree() == 1 {
        json!(x.index())
    } else {
        json!(f.coeffs(x))
    }
}

pub fn elem_from_json(f: &Field, v: &Value) -> Result<Elem> {
    match v {
        Value::Number(n) => n.as_i64().map(|x| f.from_int(x)).ok_or_else(|| parse_err("element must be an integer")),
        Value::Array(cs) => {
            let coeffs: Vec<i64> =
                cs.iter().map(|c| c.as_i64().ok_or_else(|| parse_err("coefficients must be integers"))).collect::<Result<_>>()?;
            f.from_coeffs(&coeffs)
        }
        _ => Err(parse_err("element must be an integer or a coefficient list")),
    }
}

fn elems_to_json(f: &Field, xs: &[Elem]) -> Value {
    Value::Array(xs.iter().map(|&x| elem_to_json(f, x)).collect())
}

fn opt_elem(f: &Field, x: Option<Elem>) -> Value {
    x.map_or(Value::Null, |x| elem_to_json(f, x))
}

pub fn matrix_to_json(m: &Matrix) -> Value {
    Value::Array(m.to_rows().iter().map(|r| elems_to_json(m.field(), r)).collect())
}

pub fn matrix_from_json(f: &Field, v: &Value) -> Result<Matrix> {
    let rows = as_array(v, "matrix")?;
    let rows: Vec<Vec<Elem>> = rows
        .iter()
        .map(|r| as_array(r, "matrix row")?.iter().map(|x| elem_from_json(f, x)).collect())
        .collect::<Result<_>>()?;
    if rows.is_empty() {
        return Ok(Matrix::zeros(f, 0, 0));
    }
    Matrix::from_rows(f, rows)
}

// ---- spaces and frames ----

pub fn space_to_json(s: &HermitianSpace) -> Value {
    json!({ "field": field_to_json(s.field()), "form": matrix_to_json(s.form()) })
}

pub fn space_from_json(v: &Value) -> Result<HermitianSpace> {
    let f = field_from_json(get(v, "field")?)?;
    HermitianSpace::new(matrix_from_json(&f, get(v, "form")?)?)
}

pub fn frame_to_json(fs: &FrameSystem) -> Value {
    json!({
        "field": field_to_json(fs.field()),
        "form": matrix_to_json(fs.space().form()),
        "vectors": matrix_to_json(fs.synthesis()),
    })
}

/// Accepts a frame object, or any object carrying one under "frame". The form
/// defaults to the identity.
pub fn frame_from_json(v: &Value) -> Result<FrameSystem> {
    if v.get("vectors").is_none() {
        if let Some(inner) = v.get("frame") {
            return frame_from_json(inner);
        }
    }
    let f = field_from_json(get(v, "field")?)?;
    let vectors = matrix_from_json(&f, get(v, "vectors")?)?;
    match v.get("form") {
        None | Some(Value::Null) => FrameSystem::standard(vectors),
        Some(form) => FrameSystem::new(HermitianSpace::new(matrix_from_json(&f, form)?)?, vectors),
    }
}

// ---- index helpers ----

fn one_based(idx: &[usize]) -> Value {
    json!(idx.iter().map(|i| i + 1).collect::<Vec<_>>())
}

fn zero_based(v: &Value, n: usize, what: &str) -> Result<Vec<usize>> {
    as_array(v, what)?
        .iter()
        .map(|x| {
            let i = as_usize(x, what)?;
            if i == 0 || i > n {
                return Err(parse_err(format!("{what} entry {i} outside 1..={n}")));
            }
            Ok(i - 1)
        })
        .collect()
}

/// 1-based vector index.
pub fn index_from_json(v: &Value, n: usize, what: &str) -> Result<usize> {
    let i = as_usize(v, what)?;
    if i == 0 || i > n {
        return Err(parse_err(format!("{what} {i} outside 1..={n}")));
    }
    Ok(i - 1)
}

pub fn indices_from_json(v: &Value, n: usize, what: &str) -> Result<Vec<usize>> {
    zero_based(v, n, what)
}

// ---- frame reports ----

fn class_str(c: SquareClass) -> &'static str {
    match c {
        SquareClass::Zero => "zero",
        SquareClass::Square => "square",
        SquareClass::Nonsquare => "nonsquare",
    }
}

pub fn discriminant_to_json(f: &Field, d: &Discriminant) -> Value {
    json!({ "class": class_str(d.class), "representative": elem_to_json(f, d.representative) })
}

pub fn params_to_json(f: &Field, p: EquiangularParams) -> Value {
    json!({ "a": elem_to_json(f, p.a), "b": elem_to_json(f, p.b) })
}

pub fn tightness_to_json(f: &Field, r: &TightnessReport) -> Value {
    json!({
        "tight": r.tight,
        "c": opt_elem(f, r.c),
        "is_frame_for_ambient": r.is_frame_for_ambient,
        "is_frame_for_span": r.is_frame_for_span,
        "totally_isotropic_tight": r.totally_isotropic_tight,
        "span_dim": r.span_dim,
        "gram_rank": r.gram_rank,
        "c_ambiguous": r.c_ambiguous,
    })
}

pub fn etf_to_json(f: &Field, r: &EtfReport) -> Value {
    json!({
        "verdict": r.verdict,
        "a": elem_to_json(f, r.params.a),
        "b": elem_to_json(f, r.params.b),
        "c": opt_elem(f, r.c),
        "n": r.n,
        "span_dim": r.span_dim,
        "ambient_dim": r.ambient_dim,
        "tight": r.tight,
        "welch_holds": r.welch_holds,
        "triple_sum_target": opt_elem(f, r.triple_sum_target),
        "triple_sum_holds": r.triple_sum_holds,
        "triple_sum_failures": r.triple_sum_failures.iter().map(|&(j, k)| [j + 1, k + 1]).collect::<Vec<_>>(),
        "certification_applicable": r.certification_applicable,
        "certified": r.certified,
        "failure_reasons": r.failure_reasons,
    })
}

pub fn gerzon_to_json(r: &GerzonReport) -> Value {
    json!({ "bound": r.bound, "within": r.within, "saturated": r.saturated })
}

pub fn naimark_to_json(f: &Field, r: &NaimarkReport) -> Value {
    json!({
        "complement": frame_to_json(&r.complement),
        "scale": elem_to_json(f, r.scale),
        "c": elem_to_json(f, r.c),
        "complement_dim": r.complement_dim,
        "orthogonal": r.orthogonal,
        "image_matches_kernel": r.image_matches_kernel,
        "complement_c": elem_to_json(f, r.complement_c),
        "etf_params": r.etf_params.map(|(a, b, c)| elems_to_json(f, &[a, b, c])),
        "discriminant_law": r.discriminant_law,
    })
}

// ---- equivalence ----

pub fn strategy_str(s: Strategy) -> &'static str {
    match s {
        Strategy::Auto => "auto",
        Strategy::Triples => "triples",
        Strategy::General => "general",
    }
}

pub fn strategy_from_str(s: &str) -> Result<Strategy> {
    match s {
        "auto" => Ok(Strategy::Auto),
        "triples" => Ok(Strategy::Triples),
        "general" => Ok(Strategy::General),
        _ => Err(parse_err(format!("unknown strategy \"{s}\""))),
    }
}

fn obstruction_to_json(f: &Field, o: &Obstruction) -> Value {
    let mut m = Map::new();
    m.insert("description".into(), json!(o.describe()));
    let kind = match o {
        Obstruction::Norm { j } => {
            m.insert("indices".into(), one_based(&[*j]));
            "norm"
        }
        Obstruction::DoubleProduct { j, k } => {
            m.insert("indices".into(), one_based(&[*j, *k]));
            "double_product"
        }
        Obstruction::TripleProduct { j, k, l } => {
            m.insert("indices".into(), one_based(&[*j, *k, *l]));
            "triple_product"
        }
        Obstruction::MProduct { indices, first, second } => {
            m.insert("indices".into(), one_based(indices));
            m.insert("first".into(), elem_to_json(f, *first));
            m.insert("second".into(), elem_to_json(f, *second));
            "m_product"
        }
        Obstruction::KernelMismatch => "kernel_mismatch",
    };
    m.insert("kind".into(), json!(kind));
    Value::Object(m)
}

pub fn switching_to_json(f: &Field, c: &SwitchingCertificate) -> Value {
    json!({
        "equivalent": c.equivalent,
        "strategy": strategy_str(c.strategy),
        "t_diag": c.t_diag.as_ref().map(|t| elems_to_json(f, t)),
        "obstruction": c.obstruction.as_ref().map(|o| obstruction_to_json(f, o)),
    })
}

pub fn unitary_to_json(v: &UnitaryVerdict) -> Value {
    json!({ "equivalent": v.equivalent, "reason": v.reason })
}

// ---- two-graphs and designs ----

pub fn two_graph_to_json(f: Option<&Field>, tg: &TwoGraph) -> Value {
    let coherent: Vec<[usize; 3]> = tg.coherent().iter().map(|t| [t[0] + 1, t[1] + 1, t[2] + 1]).collect();
    let mut m = Map::new();
    m.insert("n".into(), json!(tg.n()));
    m.insert("coherent".into(), json!(coherent));
    if let (Some(f), Some(beta)) = (f, tg.beta()) {
        m.insert("beta".into(), elem_to_json(f, beta));
    }
    Value::Object(m)
}

/// Reads {"n", "coherent"}; a "two_graph" wrapper is also accepted.
pub fn two_graph_from_json(v: &Value) -> Result<TwoGraph> {
    if v.get("coherent").is_none() {
        if let Some(inner) = v.get("two_graph") {
            return two_graph_from_json(inner);
        }
    }
    let n = as_usize(get(v, "n")?, "n")?;
    let triples = as_array(get(v, "coherent")?, "coherent")?
        .iter()
        .map(|t| {
            let idx = zero_based(t, n, "triple")?;
            <[usize; 3]>::try_from(idx).map_err(|_| parse_err("triples must have three entries"))
        })
        .collect::<Result<Vec<_>>>()?;
    TwoGraph::new(n, triples)
}

pub fn two_graph_params_to_json(p: &TwoGraphParams) -> Value {
    json!({
        "regular": p.regular,
        "ell": p.ell,
        "m_quad": p.m_quad,
        "seidel": p.seidel,
        "seidel_two_eigenvalues": p.seidel_two_eigenvalues,
        "seidel_alpha": p.seidel_alpha,
    })
}

pub fn srg_to_json(r: &SrgReport) -> Value {
    json!({
        "strongly_regular": r.strongly_regular,
        "params": r.params.as_ref().map(|p| json!({
            "v": p.v, "k": p.k, "lambda": p.lambda, "mu": p.mu, "modular": p.modular,
        })),
        "failure": r.failure,
    })
}

pub fn correspondence_to_json(r: &CorrespondenceReport) -> Value {
    json!({
        "etf": r.etf,
        "two_graph_regular": r.two_graph_regular,
        "agree": r.agree,
        "n_even": r.n_even,
        "params": two_graph_params_to_json(&r.params),
    })
}

pub fn design_to_json(d: &Design) -> Value {
    json!({
        "points": d.n_points,
        "blocks": d.blocks.iter().map(|b| one_based(b)).collect::<Vec<_>>(),
        "t": d.t,
        "k": d.k,
        "is_design": d.is_design,
        "lambda": d.lambda,
        "lambda2": d.lambda2,
        "r": d.r,
        "identities_hold": d.identities_hold,
        "intersection_numbers": d.intersection_numbers,
        "quasi_symmetric": d.quasi_symmetric,
        "fisher": {
            "applicable": d.fisher.applicable,
            "holds": d.fisher.holds,
            "symmetric": d.fisher.symmetric,
            "r_equals_k": d.fisher.r_equals_k,
        },
    })
}

/// Reads {"points", "blocks", "t"}. A bare block list is accepted too, with
/// points taken as the largest entry; `t` overrides the file.
pub fn design_input_from_json(v: &Value, t: Option<usize>) -> Result<(usize, Vec<Vec<usize>>, usize)> {
    let (raw, points, file_t) = match v {
        Value::Array(_) => (v, None, None),
        _ => (
            get(v, "blocks")?,
            v.get("points").map(|p| as_usize(p, "points")).transpose()?,
            v.get("t").map(|t| as_usize(t, "t")).transpose()?,
        ),
    };
    let blocks: Vec<Vec<usize>> = as_array(raw, "blocks")?
        .iter()
        .map(|b| as_array(b, "block")?.iter().map(|x| as_usize(x, "point")).collect())
        .collect::<Result<_>>()?;
    let points = points.unwrap_or_else(|| blocks.iter().flatten().copied().max().unwrap_or(0));
    let blocks = blocks
        .into_iter()
        .map(|b| {
            b.into_iter()
                .map(|x| {
                    if x == 0 || x > points {
                        Err(Error::InvalidBlock(format!("point {x} outside 1..={points}")))
                    } else {
                        Ok(x - 1)
                    }
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    let t = t.or(file_t).unwrap_or(2);
    Ok((points, blocks, t))
}

// ---- simplices and incoherence ----

pub fn simplex_record_to_json(f: &Field, r: &SimplexRecord) -> Value {
    json!({
        "kappa": one_based(&r.kappa),
        "s": r.s,
        "c_prime": elem_to_json(f, r.c_prime),
        "discriminant": discriminant_to_json(f, &r.discriminant),
        "predicted_class": class_str(r.predicted_class),
        "discriminant_matches": r.discriminant_matches,
        "criteria": r.criteria,
    })
}

pub fn incoherent_set_to_json(f: &Field, s: &IncoherentSet) -> Value {
    json!({
        "indices": one_based(&s.indices),
        "beta": elem_to_json(f, s.beta),
        "linearly_independent": s.linearly_independent,
        "minimally_dependent": s.minimally_dependent,
    })
}

pub fn incoherence_to_json(f: &Field, r: &IncoherenceReport) -> Value {
    json!({
        "beta": elem_to_json(f, r.beta),
        "inc": r.inc,
        "witness": incoherent_set_to_json(f, &r.witness),
        "inc_neg": r.inc_neg,
        "inc_min": r.inc_min,
        "bound_applicable": r.bound_applicable,
        "bound_holds": r.bound_holds,
        "almost_nice": r.almost_nice,
    })
}

pub fn gamma_to_json(f: &Field, r: &GammaReport) -> Value {
    json!({
        "outside": r.outside + 1,
        "gamma1": one_based(&r.gamma1),
        "gamma2": one_based(&r.gamma2),
        "g1": r.g1,
        "g2": r.g2,
        "rho": elem_to_json(f, r.rho),
        "spans_ambient": r.spans_ambient,
        "root_check": r.root_check,
        "smallest_root_check": r.smallest_root_check,
        "intersection_check": r.intersection_check,
        "intersection_failures": one_based(&r.intersection_failures),
    })
}

pub fn design_extraction_to_json(r: &DesignExtraction) -> Value {
    json!({
        "g1": r.g1,
        "g2": r.g2,
        "ell": r.ell,
        "b1": design_to_json(&r.b1),
        "b2": design_to_json(&r.b2),
        "merged": r.merged.as_ref().map(design_to_json),
        "lambda_formula_holds": r.lambda_formula_holds,
        "sum_identity_holds": r.sum_identity_holds,
        "predicted_s": r.predicted_s,
        "quasi_symmetric_check": r.quasi_symmetric_check,
        "symmetric_check": r.symmetric_check,
        "four_design_check": r.four_design_check,
        "geometric_hypotheses": r.geometric_hypotheses,
    })
}

// ---- search ----

/// Reads a search spec: {"field", "form", "a", "b", "n_target": int | "max",
/// "mode", "dedup", "etf_only", "budget"}.
pub fn search_spec_from_json(v: &Value) -> Result<SearchSpec> {
    let space = space_from_json(v)?;
    let f = space.field().clone();
    let a = elem_from_json(&f, get(v, "a")?)?;
    let b = elem_from_json(&f, get(v, "b")?)?;
    let n_target = match v.get("n_target") {
        None => NTarget::Max,
        Some(Value::String(s)) if s == "max" => NTarget::Max,
        Some(x) => NTarget::Exact(as_usize(x, "n_target")?),
    };
    let mut spec = SearchSpec::new(space, a, b, n_target);
    if let Some(m) = v.get("mode") {
        spec.mode = match m.as_str() {
            Some("all") => SearchMode::All,
            Some("first") => SearchMode::First,
            Some("count") => SearchMode::Count,
            _ => return Err(parse_err("mode must be all, first or count")),
        };
    }
    if let Some(d) = v.get("dedup") {
        spec.dedup = match d.as_str() {
            Some("none") => Dedup::None,
            Some("projective") => Dedup::Projective,
            Some("switching_class") => Dedup::SwitchingClass,
            _ => return Err(parse_err("dedup must be none, projective or switching_class")),
        };
    }
    if let Some(e) = v.get("etf_only") {
        spec.etf_only = e.as_bool().ok_or_else(|| parse_err("etf_only must be a boolean"))?;
    }
    spec.budget = match v.get("budget") {
        Some(b) => b.as_u64().ok_or_else(|| parse_err("budget must be an integer"))?,
        None => DEFAULT_BUDGET,
    };
    Ok(spec)
}

pub fn search_spec_to_json(spec: &SearchSpec) -> Value {
    let f = spec.space.field();
    json!({
        "field": field_to_json(f),
        "form": matrix_to_json(spec.space.form()),
        "a": elem_to_json(f, spec.a),
        "b": elem_to_json(f, spec.b),
        "n_target": match spec.n_target {
            NTarget::Exact(n) => json!(n),
            NTarget::Max => json!("max"),
        },
        "mode": match spec.mode {
            SearchMode::All => "all",
            SearchMode::First => "first",
            SearchMode::Count => "count",
        },
        "dedup": match spec.dedup {
            Dedup::None => "none",
            Dedup::Projective => "projective",
            Dedup::SwitchingClass => "switching_class",
        },
        "etf_only": spec.etf_only,
        "budget": spec.budget,
    })
}

pub fn search_result_to_json(spec: &SearchSpec, r: &SearchResult) -> Value {
    json!({
        "spec": search_spec_to_json(spec),
        "n": r.n,
        "count": r.count,
        "systems": r.systems.iter().map(frame_to_json).collect::<Vec<_>>(),
        "stats": {
            "candidates": r.stats.candidates,
            "nodes_visited": r.stats.nodes_visited,
            "pruned": r.stats.pruned,
            "wall_time_ms": r.stats.wall_time_ms,
        },
    })
}

pub fn case_str(c: Case) -> &'static str {
    match c {
        Case::O => "O",
        Case::U => "U",
    }
}
