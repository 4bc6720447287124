use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;
use std::time::Instant;

use anyhow::{anyhow, bail, Context};
use clap::Parser;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use vinberg_cli::{cache, report};
use vinberg_core::bounds::ConstantsRegistry;
use vinberg_core::cone::{facet_recovery, finite_volume_test};
use vinberg_core::diagram::{area_gauss_bonnet, build_diagram};
use vinberg_core::engine::{self, FacetCap, RunConfig, RunVerdict};
use vinberg_core::forms::{ControlVector, LorentzVector, QuadraticForm};

/// Decide whether an integral quadratic form of signature (n, 1) is
/// reflective by building its fundamental Coxeter polyhedron.
#[derive(Parser)]
#[command(name = "vinberg", version)]
struct Args {
    /// Form to test: path to a JSON file, or inline diagonal entries as
    /// "-1,1,1" (a "diag:" prefix is accepted too).
    #[arg(long, allow_hyphen_values = true)]
    form: Option<String>,

    /// Control vector as comma separated integers; default: automatic.
    #[arg(long, allow_hyphen_values = true)]
    control: Option<String>,

    /// Facet cap: a positive integer, or "auto" to derive it from the
    /// registry's covolume_cap entry.
    #[arg(long, default_value = "10000")]
    facet_cap: String,

    /// Cumulative number of (norm, level) pairs the search may examine.
    #[arg(long, default_value_t = 100_000)]
    budget: u64,

    /// Write the canonical JSON report to this path.
    #[arg(long)]
    out: Option<PathBuf>,

    /// Write the Coxeter diagram in DOT format to this path.
    #[arg(long)]
    dot: Option<PathBuf>,

    /// Constants registry JSON; default: the built-in registry for n = 2
    /// or 3 when one exists.
    #[arg(long)]
    registry: Option<PathBuf>,

    /// Override one registry constant as NAME=VALUE; repeatable.
    #[arg(long = "constant", value_name = "NAME=VALUE")]
    constants: Vec<String>,

    /// Session cache: resume from this file when it exists, rewrite it on
    /// exit.
    #[arg(long, visible_alias = "resume")]
    cache: Option<PathBuf>,

    /// Worker threads for shell enumeration. Results never depend on this.
    #[arg(long, default_value_t = 1)]
    threads: usize,

    /// Print the built-in constants registry for hyperbolic dimension N
    /// and exit.
    #[arg(long, value_name = "N")]
    list_constants: Option<usize>,
}

fn main() -> ExitCode {
    match run(Args::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(args: Args) -> anyhow::Result<u8> {
    if let Some(n) = args.list_constants {
        let reg = ConstantsRegistry::builtin_default(n)
            .ok_or_else(|| anyhow!("no built-in constants registry for n = {n}"))?;
        println!("{}", serde_json::to_string_pretty(&reg.to_json())?);
        return Ok(0);
    }

    let form_arg = args
        .form
        .as_deref()
        .ok_or_else(|| anyhow!("a form is required: --form PATH or --form diag:-1,1,1"))?;
    let form = parse_form(form_arg)?;
    form.is_admissible()?;
    let u0 = match &args.control {
        Some(text) => ControlVector::new(&form, LorentzVector(parse_int_list(text)?))?,
        None => auto_control(&form)?,
    };

    if args.threads == 0 {
        bail!("--threads must be at least 1");
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(args.threads)
        .build_global()
        .context("initializing the thread pool")?;

    let n = form.dim() - 1;
    let mut registry = match &args.registry {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading registry {}", path.display()))?;
            Some(ConstantsRegistry::from_json(&text)?)
        }
        None => ConstantsRegistry::builtin_default(n),
    };
    if !args.constants.is_empty() {
        let reg = registry.get_or_insert_with(|| ConstantsRegistry::new(n));
        for spec in &args.constants {
            let (name, value) = spec
                .split_once('=')
                .ok_or_else(|| anyhow!("--constant needs NAME=VALUE, got {spec}"))?;
            reg.set(name.trim(), value.trim(), "command line override");
        }
    }
    if let Some(reg) = &registry {
        if reg.n != n {
            bail!("registry is for n = {}, the form needs n = {n}", reg.n);
        }
    }

    let cap_mode;
    let facet_cap = if args.facet_cap == "auto" {
        cap_mode = "auto";
        FacetCap::Auto
    } else {
        cap_mode = "explicit";
        let value = args.facet_cap.parse::<u64>().with_context(|| {
            format!("--facet-cap must be a number or \"auto\", got {}", args.facet_cap)
        })?;
        FacetCap::Explicit(value)
    };
    let config = RunConfig {
        facet_cap,
        batch_budget: args.budget,
        check_every_batch: false,
        registry: registry.clone(),
    };

    let (state, resumed) = match &args.cache {
        Some(path) if path.exists() => (cache::load(path, &form, &u0)?, true),
        _ => (engine::initial_state(&form, &u0)?, false),
    };

    let started = Instant::now();
    let (verdict, state) = engine::run_with_state(&form, &u0, &config, state)?;
    let elapsed_ms = started.elapsed().as_millis();
    engine::verify_invariants(&form, &u0, &state)?;

    let outcome = finite_volume_test(&form, &u0, &state.accepted)?;
    let essential = facet_recovery(&outcome.cone);
    let diagram = build_diagram(&form, &state.accepted)?;
    let area = if form.dim() == 3 && outcome.finite {
        Some(area_gauss_bonnet(&form, &u0, &state.accepted)?)
    } else {
        None
    };
    let cap_value = engine::resolve_cap(&form, &config)?;

    let report_value = report::build_report(&report::ReportContext {
        form: &form,
        u0: &u0,
        verdict: &verdict,
        state: &state,
        cap_mode,
        cap_value,
        budget: args.budget,
        outcome: &outcome,
        essential: &essential,
        diagram: &diagram,
        area: area.as_ref(),
        registry: registry.as_ref(),
        elapsed_ms,
        threads: args.threads,
    })?;
    if let Some(out) = &args.out {
        report::atomic_write(out, &report::canonical_bytes(&report_value))
            .with_context(|| format!("writing report {}", out.display()))?;
    }
    if let Some(dot) = &args.dot {
        report::atomic_write(dot, diagram.to_dot().as_bytes())
            .with_context(|| format!("writing diagram {}", dot.display()))?;
    }
    if let Some(path) = &args.cache {
        cache::save(path, &form, &u0, &state)
            .with_context(|| format!("writing cache {}", path.display()))?;
    }

    let (pos, neg) = form.signature()?;
    println!(
        "form: dim = {}, det = {}, signature = ({pos}, {neg})",
        form.dim(),
        form.det()
    );
    println!("control: {} with (u0, u0) = {}", u0.vector(), u0.q());
    if resumed {
        println!("resumed from cache: {} walls in hand", state.accepted.len());
    }
    let stab = state.accepted.iter().filter(|r| r.level.is_zero()).count();
    println!(
        "walls: {} accepted ({stab} stabilizer, {} at positive distance)",
        state.accepted.len(),
        state.accepted.len() - stab
    );
    println!(
        "vertices: {} proper, {} ideal, {} spacelike rays, lineality dimension {}",
        outcome.report.proper,
        outcome.report.ideal,
        outcome.report.spacelike,
        outcome.report.lineality_dim
    );
    if let Some(area) = &area {
        println!("area: {area} pi");
    }
    println!("verdict: {}", report::verdict_detail(&verdict));
    if matches!(verdict, RunVerdict::BudgetExhausted) && args.cache.is_none() {
        println!("hint: pass --cache FILE to make the next run resume here");
    }

    Ok(report::exit_code(&verdict))
}

fn parse_form(spec: &str) -> anyhow::Result<QuadraticForm> {
    if let Some(diag) = spec.strip_prefix("diag:") {
        let entries = parse_int_list(diag)?;
        return Ok(QuadraticForm::from_diagonal_big(entries)?);
    }
    // Bare comma list: inline diagonal entries.
    if let Ok(entries) = parse_int_list(spec) {
        return Ok(QuadraticForm::from_diagonal_big(entries)?);
    }
    let text = std::fs::read_to_string(spec)
        .with_context(|| format!("reading form file {spec}"))?;
    Ok(QuadraticForm::from_json(&text)?)
}

fn parse_int_list(text: &str) -> anyhow::Result<Vec<BigInt>> {
    text.split(',')
        .map(|t| {
            BigInt::from_str(t.trim()).map_err(|_| anyhow!("not an integer: {}", t.trim()))
        })
        .collect()
}

/// Deterministic default control vector: the first negative-norm basis
/// vector, then the timelike vector of smallest sup-norm in a small box,
/// scanning each coordinate in the order 0, 1, -1, 2, -2, ...
fn auto_control(form: &QuadraticForm) -> anyhow::Result<ControlVector> {
    let dim = form.dim();
    for i in 0..dim {
        if form.gram()[i][i].is_negative() {
            let mut v = vec![BigInt::zero(); dim];
            v[i] = BigInt::from(1);
            return Ok(ControlVector::new(form, LorentzVector(v))?);
        }
    }
    let mut x = vec![0i64; dim];
    for radius in 1..=10 {
        if let Some(hit) = scan_box(form, radius, &mut x, 0) {
            let v = LorentzVector(hit.iter().map(|&c| BigInt::from(c)).collect());
            return Ok(ControlVector::new(form, v)?);
        }
    }
    bail!("no timelike vector with coordinates up to 10 found; pass --control");
}

fn scan_box(form: &QuadraticForm, radius: i64, x: &mut Vec<i64>, i: usize) -> Option<Vec<i64>> {
    if i == x.len() {
        if x.iter().all(|&v| v.abs() < radius) {
            return None; // covered by a smaller radius
        }
        let v = LorentzVector(x.iter().map(|&c| BigInt::from(c)).collect());
        if form.norm(&v).is_negative() {
            return Some(x.clone());
        }
        return None;
    }
    let mut value = 0i64;
    loop {
        x[i] = value;
        if let Some(hit) = scan_box(form, radius, x, i + 1) {
            return Some(hit);
        }
        value = if value > 0 { -value } else { -value + 1 };
        if value > radius {
            x[i] = 0;
            return None;
        }
    }
}
