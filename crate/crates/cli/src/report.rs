//! Report assembly and canonical serialization.
//!
//! Everything outside the `timing` object is a pure function of the inputs,
//! so reports from runs that differ only in thread count or wall time are
//! byte-identical once `timing` is dropped.

use std::io::Write;
use std::path::Path;

use anyhow::Context;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use vinberg_core::bounds::{
    covolume_from_area, facet_upper_bound, float_str, rank_lower_bound, ConstantsRegistry,
};
use vinberg_core::cone::FiniteVolumeOutcome;
use vinberg_core::diagram::CoxeterDiagram;
use vinberg_core::engine::{distance_key, RunVerdict, VinbergState, RATIONAL_FIELD_DEGREE};
use vinberg_core::forms::{ControlVector, QuadraticForm};
use vinberg_core::ratmat::Rat;
use vinberg_core::roots::admissible_norms;
use vinberg_core::Error;

pub const REPORT_SCHEMA: &str = "vinberg-report/1";

pub fn sha256_hex(s: &str) -> String {
    let mut hasher = Sha256::new();
    hasher.update(s.as_bytes());
    hasher
        .finalize()
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

pub fn bigints_json(v: &[num_bigint::BigInt]) -> Value {
    Value::Array(v.iter().map(|x| json!(x.to_string())).collect())
}

pub fn exit_code(verdict: &RunVerdict) -> u8 {
    match verdict {
        RunVerdict::FiniteVolume => 0,
        RunVerdict::FacetBoundExceeded { .. } => 10,
        RunVerdict::BudgetExhausted => 11,
    }
}

pub fn verdict_name(verdict: &RunVerdict) -> &'static str {
    match verdict {
        RunVerdict::FiniteVolume => "finite_volume",
        RunVerdict::FacetBoundExceeded { .. } => "facet_bound_exceeded",
        RunVerdict::BudgetExhausted => "budget_exhausted",
    }
}

pub fn verdict_detail(verdict: &RunVerdict) -> String {
    match verdict {
        RunVerdict::FiniteVolume => {
            "the accepted walls bound a finite-volume Coxeter polyhedron; the form is reflective"
                .into()
        }
        RunVerdict::FacetBoundExceeded { cap } => format!(
            "more than {cap} walls accepted; if the cap dominates the true facet bound \
             for this covolume class, the automorphism group does not contain a maximal \
             arithmetic hyperbolic reflection group"
        ),
        RunVerdict::BudgetExhausted => {
            "the examination budget ran out before a verdict; rerun with a larger --budget \
             (a cache file resumes the search)"
                .into()
        }
    }
}

pub struct ReportContext<'a> {
    pub form: &'a QuadraticForm,
    pub u0: &'a ControlVector,
    pub verdict: &'a RunVerdict,
    pub state: &'a VinbergState,
    pub cap_mode: &'a str,
    pub cap_value: u64,
    pub budget: u64,
    pub outcome: &'a FiniteVolumeOutcome,
    pub essential: &'a [usize],
    pub diagram: &'a CoxeterDiagram,
    pub area: Option<&'a Rat>,
    pub registry: Option<&'a ConstantsRegistry>,
    pub elapsed_ms: u128,
    pub threads: usize,
}

pub fn build_report(ctx: &ReportContext) -> anyhow::Result<Value> {
    let form = ctx.form;
    let (pos, neg) = form.signature().context("form signature")?;
    let gram_json: Vec<Value> = form.gram().iter().map(|row| bigints_json(row)).collect();
    let norms = admissible_norms(form).context("admissible norms")?;

    let roots_json: Vec<Value> = ctx
        .state
        .accepted
        .iter()
        .map(|r| {
            json!({
                "e": bigints_json(&r.e.0),
                "norm": r.norm.to_string(),
                "level": r.level.to_string(),
                "distance": distance_key(ctx.u0, &r.norm, &r.level).to_string(),
            })
        })
        .collect();
    let gram_roots: Vec<Value> = ctx
        .state
        .accepted
        .iter()
        .map(|a| {
            Value::Array(
                ctx.state
                    .accepted
                    .iter()
                    .map(|b| json!(form.inner(&a.e, &b.e).to_string()))
                    .collect(),
            )
        })
        .collect();

    let rays_json: Vec<Value> = ctx
        .outcome
        .report
        .rays
        .iter()
        .map(|r| {
            json!({
                "v": bigints_json(&r.v),
                "vv": r.vv.to_string(),
                "vu0": r.vu0.to_string(),
                "class": r.class.as_str(),
                "tight": r.tight,
            })
        })
        .collect();
    let lineality_json: Vec<Value> = ctx
        .outcome
        .cone
        .lineality
        .iter()
        .map(|row| bigints_json(row))
        .collect();

    let mut polyhedron = Map::new();
    polyhedron.insert("finite_volume".into(), json!(ctx.outcome.finite));
    polyhedron.insert("essential_facets".into(), json!(ctx.essential));
    polyhedron.insert(
        "lineality_dim".into(),
        json!(ctx.outcome.report.lineality_dim),
    );
    polyhedron.insert("lineality".into(), Value::Array(lineality_json));
    polyhedron.insert(
        "vertex_counts".into(),
        json!({
            "proper": ctx.outcome.report.proper,
            "ideal": ctx.outcome.report.ideal,
            "spacelike": ctx.outcome.report.spacelike,
        }),
    );
    polyhedron.insert("rays".into(), Value::Array(rays_json));
    if let Some(area) = ctx.area {
        polyhedron.insert("area".into(), json!(area.to_string()));
    }

    let mut report = Map::new();
    report.insert("schema".into(), json!(REPORT_SCHEMA));
    report.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
    report.insert(
        "form".into(),
        json!({
            "dim": form.dim(),
            "gram": gram_json,
            "det": form.det().to_string(),
            "signature": [pos, neg],
            "digest": sha256_hex(&form.canonical_string()),
        }),
    );
    report.insert(
        "control".into(),
        json!({
            "vector": bigints_json(&ctx.u0.vector().0),
            "q": ctx.u0.q().to_string(),
        }),
    );
    report.insert(
        "admissible_norms".into(),
        Value::Array(norms.iter().map(|s| json!(s.to_string())).collect()),
    );
    report.insert(
        "run".into(),
        json!({
            "verdict": verdict_name(ctx.verdict),
            "verdict_detail": verdict_detail(ctx.verdict),
            "exit_code": exit_code(ctx.verdict),
            "facet_cap": { "mode": ctx.cap_mode, "value": ctx.cap_value },
            "budget": ctx.budget,
            "stats": {
                "batches": ctx.state.stats.batches,
                "pairs_examined": ctx.state.stats.pairs_examined,
                "candidates_seen": ctx.state.stats.candidates_seen,
                "fv_checks": ctx.state.stats.fv_checks,
            },
            "distance_log": ctx.state.distance_log.iter()
                .map(|k| json!(k.to_string())).collect::<Vec<_>>(),
        }),
    );
    report.insert("accepted".into(), Value::Array(roots_json));
    report.insert("gram_roots".into(), Value::Array(gram_roots));
    report.insert("diagram".into(), ctx.diagram.to_json());
    report.insert("polyhedron".into(), Value::Object(polyhedron));
    if let Some(reg) = ctx.registry {
        report.insert("bounds".into(), bounds_section(ctx, reg)?);
    }
    report.insert(
        "timing".into(),
        json!({ "total_ms": ctx.elapsed_ms as u64, "threads": ctx.threads }),
    );
    Ok(Value::Object(report))
}

/// Effective-bound consistency data. Needs a covolume, which is only
/// exactly known for finite 2-dimensional chambers; missing registry
/// constants degrade this section instead of failing the run.
fn bounds_section(ctx: &ReportContext, reg: &ConstantsRegistry) -> anyhow::Result<Value> {
    let mut out = Map::new();
    out.insert(
        "registry_digest".into(),
        json!(sha256_hex(&reg.canonical_string())),
    );
    out.insert("n".into(), json!(reg.n));
    out.insert("deg".into(), json!(RATIONAL_FIELD_DEGREE));
    let Some(area) = ctx.area else {
        return Ok(Value::Object(out));
    };
    let vol = covolume_from_area(area);
    out.insert("covolume".into(), json!(float_str(&vol)));
    match facet_upper_bound(reg, RATIONAL_FIELD_DEGREE, &vol) {
        Ok(b) => {
            let f = ctx.essential.len() as u64;
            let rank_lower = match rank_lower_bound(reg, &vol) {
                Ok(r) => r,
                Err(Error::MissingConstants { missing, .. }) => {
                    out.insert("missing".into(), json!(missing));
                    return Ok(Value::Object(out));
                }
                Err(e) => return Err(e.into()),
            };
            out.insert(
                "facet_upper".into(),
                json!({
                    "separation": float_str(&b.separation),
                    "ball": float_str(&b.ball),
                    "f_nk": float_str(&b.f_nk),
                    "v1": float_str(&b.v1),
                    "v2": float_str(&b.v2),
                    "total": float_str(&b.total),
                    "f_bound": b.f_bound,
                }),
            );
            out.insert("rank_lower".into(), json!(rank_lower));
            out.insert("essential_facet_count".into(), json!(f));
            out.insert(
                "consistent".into(),
                json!(rank_lower <= f && f <= b.f_bound),
            );
        }
        Err(Error::MissingConstants { missing, .. }) => {
            out.insert("missing".into(), json!(missing));
        }
        Err(e) => return Err(e.into()),
    }
    Ok(Value::Object(out))
}

/// Canonical bytes: pretty JSON with sorted keys and a trailing newline.
pub fn canonical_bytes(v: &Value) -> Vec<u8> {
    let mut bytes = serde_json::to_vec_pretty(v).expect("report serializes");
    bytes.push(b'\n');
    bytes
}

pub fn atomic_write(path: &Path, bytes: &[u8]) -> anyhow::Result<()> {
    let parent = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(parent)
        .with_context(|| format!("creating temporary file near {}", path.display()))?;
    tmp.write_all(bytes).context("writing temporary file")?;
    tmp.persist(path)
        .with_context(|| format!("replacing {}", path.display()))?;
    Ok(())
}
