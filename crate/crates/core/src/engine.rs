//! The wall-search engine: accept mirrors in order of distance from the
//! control point, stopping at a finite-volume chamber, a facet cap, or an
//! examination budget.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use rayon::prelude::*;

use crate::arith;
use crate::bounds::{auto_facet_cap, ConstantsRegistry};
use crate::chamber::{simple_system, stabilizer_roots};
use crate::cone::finite_volume_test;
use crate::error::Error;
use crate::forms::{ControlVector, QuadraticForm};
use crate::ratmat::Rat;
use crate::roots::{admissible_norms, enumerate_roots_at, is_crystallographic, Root};
use crate::Result;

/// Field degree used when the engine resolves `FacetCap::Auto`; the forms
/// handled here are defined over the rationals.
pub const RATIONAL_FIELD_DEGREE: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FacetCap {
    /// Stop once more than this many walls are accepted.
    Explicit(u64),
    /// Derive the cap from the constants registry; requires the
    /// `covolume_cap` entry.
    Auto,
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub facet_cap: FacetCap,
    /// Maximum number of (norm, level) pairs examined, cumulative across
    /// resumed runs.
    pub batch_budget: u64,
    /// Run the finite-volume test after every batch instead of only after
    /// batches that accepted a wall. Verdict-equivalent; for diagnostics.
    pub check_every_batch: bool,
    /// Registry used to resolve `FacetCap::Auto`.
    pub registry: Option<ConstantsRegistry>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            facet_cap: FacetCap::Explicit(10_000),
            batch_budget: 100_000,
            check_every_batch: false,
            registry: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RunVerdict {
    /// The accepted walls bound a finite-volume Coxeter polyhedron: the
    /// form is reflective.
    FiniteVolume,
    /// More walls accepted than the facet cap allows. When the cap
    /// dominates the true facet bound for the relevant covolume class,
    /// this certifies the automorphism group contains no maximal
    /// arithmetic hyperbolic reflection group; it does not by itself
    /// decide reflectivity in any stronger sense.
    FacetBoundExceeded { cap: u64 },
    /// The examination budget ran out first; resume with a larger budget.
    BudgetExhausted,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RunStats {
    /// Batches processed (tie groups of equal mirror distance).
    pub batches: u64,
    /// (norm, level) pairs enumerated, cumulative across resumes.
    pub pairs_examined: u64,
    /// Candidate roots produced by enumeration before the chamber filter.
    pub candidates_seen: u64,
    /// Finite-volume tests performed.
    pub fv_checks: u64,
}

/// Resumable search state. `accepted` starts as the stabilizer chamber;
/// `frontier` maps each admissible norm to the next unexamined level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VinbergState {
    pub accepted: Vec<Root>,
    pub frontier: BTreeMap<BigInt, BigInt>,
    pub stats: RunStats,
    /// Distance keys of processed batches, in order; non-decreasing.
    pub distance_log: Vec<Rat>,
}

/// `sinh^2` of the distance from the control point to the mirror of a root
/// with norm `s` at level `a`: `a^2 / (s |q|)`.
pub fn distance_key(u0: &ControlVector, s: &BigInt, a: &BigInt) -> Rat {
    Rat::new(a * a, s * u0.q().abs())
}

/// A candidate is admissible when its mirror is non-obtuse against every
/// accepted wall.
pub fn accept_filter(form: &QuadraticForm, accepted: &[Root], cand: &Root) -> bool {
    accepted.iter().all(|r| !form.inner(&cand.e, &r.e).is_positive())
}

/// Fresh state: stabilizer chamber plus a frontier at level 1 for every
/// admissible norm.
pub fn initial_state(form: &QuadraticForm, u0: &ControlVector) -> Result<VinbergState> {
    form.is_admissible()?;
    let stab = stabilizer_roots(form, u0)?;
    let chamber = simple_system(form, &stab)?;
    let mut frontier = BTreeMap::new();
    for s in admissible_norms(form)? {
        frontier.insert(s, BigInt::one());
    }
    Ok(VinbergState {
        accepted: chamber,
        frontier,
        stats: RunStats::default(),
        distance_log: Vec::new(),
    })
}

/// All frontier pairs at the minimal distance key. The frontier always has
/// one entry per admissible norm, so this is a full scan.
fn frontier_group(u0: &ControlVector, state: &VinbergState) -> (Rat, Vec<(BigInt, BigInt)>) {
    let keys: Vec<(Rat, BigInt, BigInt)> = state
        .frontier
        .iter()
        .map(|(s, a)| (distance_key(u0, s, a), s.clone(), a.clone()))
        .collect();
    let min = keys.iter().map(|k| k.0.clone()).min().expect("frontier is never empty");
    let pairs = keys
        .into_iter()
        .filter(|k| k.0 == min)
        .map(|k| (k.1, k.2))
        .collect();
    (min, pairs)
}

struct Batch {
    key: Rat,
    pairs: usize,
    candidates: Vec<Root>,
}

/// Pop the minimal tie group and enumerate its candidates. Enumeration
/// fans out over the group; the merge is a deterministic sort, so thread
/// count never affects results.
fn next_batch(
    form: &QuadraticForm,
    u0: &ControlVector,
    state: &mut VinbergState,
) -> Result<Batch> {
    let (key, pairs) = frontier_group(u0, state);
    for (s, a) in &pairs {
        state.frontier.insert(s.clone(), a + BigInt::one());
    }
    let enumerated: Vec<Result<Vec<Root>>> = pairs
        .par_iter()
        .map(|(s, a)| enumerate_roots_at(form, u0, s, a))
        .collect();
    let mut candidates = Vec::new();
    for r in enumerated {
        candidates.extend(r?);
    }
    candidates.sort_by(|x, y| {
        (&x.norm, &x.level, &x.e).cmp(&(&y.norm, &y.level, &y.e))
    });
    Ok(Batch { key, pairs: pairs.len(), candidates })
}

/// The cap in force for this configuration: the explicit value, or the
/// registry-derived bound for `FacetCap::Auto`.
pub fn resolve_cap(form: &QuadraticForm, config: &RunConfig) -> Result<u64> {
    match &config.facet_cap {
        FacetCap::Explicit(c) => Ok(*c),
        FacetCap::Auto => {
            let n = form.dim() - 1;
            let reg = config.registry.as_ref().ok_or_else(|| Error::MissingConstants {
                n,
                missing: vec!["registry".into()],
            })?;
            if reg.n != n {
                return Err(Error::Invalid(format!(
                    "registry is for n = {}, form has n = {n}",
                    reg.n
                )));
            }
            auto_facet_cap(reg, RATIONAL_FIELD_DEGREE)
        }
    }
}

pub fn run(
    form: &QuadraticForm,
    u0: &ControlVector,
    config: &RunConfig,
) -> Result<(RunVerdict, VinbergState)> {
    let state = initial_state(form, u0)?;
    run_with_state(form, u0, config, state)
}

/// Resume (or start) from an explicit state. Interrupting a run at any
/// budget and resuming with the remainder is observationally identical to
/// one uninterrupted run.
pub fn run_with_state(
    form: &QuadraticForm,
    u0: &ControlVector,
    config: &RunConfig,
    mut state: VinbergState,
) -> Result<(RunVerdict, VinbergState)> {
    form.is_admissible()?;
    let cap = resolve_cap(form, config)?;
    let dim = form.dim();
    if state.accepted.len() as u64 > cap {
        return Ok((RunVerdict::FacetBoundExceeded { cap }, state));
    }
    if state.accepted.len() >= dim {
        let fv = finite_volume_test(form, u0, &state.accepted)?;
        state.stats.fv_checks += 1;
        if fv.finite {
            return Ok((RunVerdict::FiniteVolume, state));
        }
    }
    loop {
        // A tie group is atomic: either the budget covers the whole group
        // or the run stops before it.
        let (_, pending) = frontier_group(u0, &state);
        if state.stats.pairs_examined + pending.len() as u64 > config.batch_budget {
            return Ok((RunVerdict::BudgetExhausted, state));
        }
        let batch = next_batch(form, u0, &mut state)?;
        state.stats.batches += 1;
        state.stats.pairs_examined += batch.pairs as u64;
        state.stats.candidates_seen += batch.candidates.len() as u64;
        debug_assert!(state.distance_log.last().is_none_or(|k| k <= &batch.key));
        state.distance_log.push(batch.key);
        let mut accepted_any = false;
        for cand in batch.candidates {
            if accept_filter(form, &state.accepted, &cand) {
                state.accepted.push(cand);
                accepted_any = true;
                if state.accepted.len() as u64 > cap {
                    return Ok((RunVerdict::FacetBoundExceeded { cap }, state));
                }
            }
        }
        if (accepted_any || config.check_every_batch) && state.accepted.len() >= dim {
            let fv = finite_volume_test(form, u0, &state.accepted)?;
            state.stats.fv_checks += 1;
            if fv.finite {
                return Ok((RunVerdict::FiniteVolume, state));
            }
        }
    }
}

/// Re-derive every invariant of a final state from scratch: cached norms
/// and levels, primitivity, the crystallographic condition, pairwise
/// non-obtuseness, and monotonicity of the distance log.
pub fn verify_invariants(
    form: &QuadraticForm,
    u0: &ControlVector,
    state: &VinbergState,
) -> Result<()> {
    for (idx, r) in state.accepted.iter().enumerate() {
        if form.norm(&r.e) != r.norm {
            return Err(Error::NotRoot(format!("cached norm is wrong for root {idx}")));
        }
        if form.inner(&r.e, u0.vector()) != -&r.level {
            return Err(Error::NotRoot(format!("cached level is wrong for root {idx}")));
        }
        if r.level.is_negative() {
            return Err(Error::NotRoot(format!("root {idx} points away from the control point")));
        }
        if !arith::is_primitive(&r.e.0) {
            return Err(Error::NotRoot(format!("root {idx} is imprimitive")));
        }
        if !is_crystallographic(form, &r.e) {
            return Err(Error::NotRoot(format!("root {idx} is not crystallographic")));
        }
    }
    for i in 0..state.accepted.len() {
        for j in i + 1..state.accepted.len() {
            let inner = form.inner(&state.accepted[i].e, &state.accepted[j].e);
            if inner.is_positive() {
                return Err(Error::ObtusePair { i, j, value: inner.to_string() });
            }
        }
    }
    for w in state.distance_log.windows(2) {
        if w[0] > w[1] {
            return Err(Error::Invalid("distance log is not monotone".into()));
        }
    }
    Ok(())
}
