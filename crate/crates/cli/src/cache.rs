//! Resumable session cache: the full engine state, keyed by digests of the
//! form and the control vector so a stale file can never silently steer a
//! different run.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use num_bigint::BigInt;
use serde_json::{json, Value};

use vinberg_core::engine::{verify_invariants, RunStats, VinbergState};
use vinberg_core::forms::{ControlVector, LorentzVector, QuadraticForm};
use vinberg_core::ratmat::Rat;
use vinberg_core::roots::{admissible_norms, Root};
use vinberg_core::Error;

use crate::report::{atomic_write, bigints_json, sha256_hex};

pub const CACHE_SCHEMA: &str = "vinberg-cache/1";

pub fn save(
    path: &Path,
    form: &QuadraticForm,
    u0: &ControlVector,
    state: &VinbergState,
) -> anyhow::Result<()> {
    let accepted: Vec<Value> = state
        .accepted
        .iter()
        .map(|r| {
            json!({
                "e": bigints_json(&r.e.0),
                "norm": r.norm.to_string(),
                "level": r.level.to_string(),
            })
        })
        .collect();
    let frontier: Vec<Value> = state
        .frontier
        .iter()
        .map(|(s, a)| json!([s.to_string(), a.to_string()]))
        .collect();
    let doc = json!({
        "schema": CACHE_SCHEMA,
        "form_digest": sha256_hex(&form.canonical_string()),
        "control": bigints_json(&u0.vector().0),
        "accepted": accepted,
        "frontier": frontier,
        "stats": {
            "batches": state.stats.batches,
            "pairs_examined": state.stats.pairs_examined,
            "candidates_seen": state.stats.candidates_seen,
            "fv_checks": state.stats.fv_checks,
        },
        "distance_log": state.distance_log.iter()
            .map(|k| k.to_string()).collect::<Vec<String>>(),
    });
    let mut bytes = serde_json::to_vec_pretty(&doc)?;
    bytes.push(b'\n');
    atomic_write(path, &bytes)
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::CacheInvalid(msg.into())
}

fn str_field<'a>(obj: &'a Value, key: &str) -> Result<&'a str, Error> {
    obj.get(key)
        .and_then(Value::as_str)
        .ok_or_else(|| invalid(format!("missing string field {key}")))
}

fn big_from(v: &Value, what: &str) -> Result<BigInt, Error> {
    v.as_str()
        .and_then(|s| BigInt::from_str(s).ok())
        .ok_or_else(|| invalid(format!("{what} is not an integer string")))
}

fn big_vec(v: &Value, what: &str) -> Result<Vec<BigInt>, Error> {
    v.as_array()
        .ok_or_else(|| invalid(format!("{what} is not an array")))?
        .iter()
        .map(|x| big_from(x, what))
        .collect()
}

fn u64_field(obj: &Value, key: &str) -> Result<u64, Error> {
    obj.get(key)
        .and_then(Value::as_u64)
        .ok_or_else(|| invalid(format!("missing counter {key}")))
}

pub fn load(
    path: &Path,
    form: &QuadraticForm,
    u0: &ControlVector,
) -> Result<VinbergState, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| invalid(format!("reading {}: {e}", path.display())))?;
    let doc: Value =
        serde_json::from_str(&text).map_err(|e| invalid(format!("cache JSON: {e}")))?;
    if !doc.is_object() {
        return Err(invalid("cache must be a JSON object"));
    }
    let schema = str_field(&doc, "schema")?;
    if schema != CACHE_SCHEMA {
        return Err(invalid(format!(
            "unsupported cache schema {schema}, expected {CACHE_SCHEMA}"
        )));
    }
    if str_field(&doc, "form_digest")? != sha256_hex(&form.canonical_string()) {
        return Err(Error::CacheMismatch(
            "cache was written for a different form".into(),
        ));
    }
    let control = big_vec(
        doc.get("control").ok_or_else(|| invalid("missing control"))?,
        "control entry",
    )?;
    if control != u0.vector().0 {
        return Err(Error::CacheMismatch(
            "cache was written for a different control vector".into(),
        ));
    }

    let mut accepted = Vec::new();
    for entry in doc
        .get("accepted")
        .and_then(Value::as_array)
        .ok_or_else(|| invalid("missing accepted array"))?
    {
        let e = big_vec(
            entry.get("e").ok_or_else(|| invalid("root without e"))?,
            "root coordinate",
        )?;
        let norm = big_from(
            entry.get("norm").ok_or_else(|| invalid("root without norm"))?,
            "root norm",
        )?;
        let level = big_from(
            entry.get("level").ok_or_else(|| invalid("root without level"))?,
            "root level",
        )?;
        accepted.push(Root { e: LorentzVector(e), norm, level });
    }

    let mut frontier = BTreeMap::new();
    for pair in doc
        .get("frontier")
        .and_then(Value::as_array)
        .ok_or_else(|| invalid("missing frontier array"))?
    {
        let items = pair
            .as_array()
            .filter(|a| a.len() == 2)
            .ok_or_else(|| invalid("frontier entry is not a pair"))?;
        let s = big_from(&items[0], "frontier norm")?;
        let a = big_from(&items[1], "frontier level")?;
        if a.sign() != num_bigint::Sign::Plus {
            return Err(invalid("frontier level must be positive"));
        }
        if frontier.insert(s, a).is_some() {
            return Err(invalid("duplicate frontier norm"));
        }
    }
    let expected: Vec<BigInt> = admissible_norms(form)?;
    if frontier.keys().cloned().collect::<Vec<_>>() != expected {
        return Err(invalid("frontier does not cover the admissible norms"));
    }

    let stats_doc = doc.get("stats").ok_or_else(|| invalid("missing stats"))?;
    let stats = RunStats {
        batches: u64_field(stats_doc, "batches")?,
        pairs_examined: u64_field(stats_doc, "pairs_examined")?,
        candidates_seen: u64_field(stats_doc, "candidates_seen")?,
        fv_checks: u64_field(stats_doc, "fv_checks")?,
    };

    let mut distance_log = Vec::new();
    for k in doc
        .get("distance_log")
        .and_then(Value::as_array)
        .ok_or_else(|| invalid("missing distance_log"))?
    {
        let s = k
            .as_str()
            .ok_or_else(|| invalid("distance key is not a string"))?;
        let r = Rat::from_str(s).map_err(|_| invalid(format!("bad distance key {s}")))?;
        distance_log.push(r);
    }

    let state = VinbergState { accepted, frontier, stats, distance_log };
    verify_invariants(form, u0, &state)
        .map_err(|e| invalid(format!("cache fails invariants: {e}")))?;
    Ok(state)
}
