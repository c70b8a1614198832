use std::collections::hash_map::RandomState;
use std::fmt::Display;
use std::fs;
use std::hash::BuildHasher;
use std::path::{Path, PathBuf};
use std::time::SystemTime;

use netepi::dynamics::{
    abm_run, gillespie_run, gillespie_well_mixed, init_state, summarize_trajectory, RateParams, RunOptions, SimError,
    Trajectory,
};
use netepi::experiments::{
    beta_grid, experiment_density_comparison, experiment_intervention_timing, experiment_scope_sweep, experiment_sirs,
    sweep, DensityComparisonConfig, ExperimentError, ExperimentTable, InterventionTimingConfig, NetworkSource,
    ScopeSweepConfig, SirsConfig, SweepSpec,
};
use netepi::graph::{
    generate, metrics_report, read_edge_list_file, write_edge_list, EdgeListOptions, GeneratorParams, GraphError,
    GraphModel,
};
use netepi::ode::{ode_sir, ode_sirs, FractionState, OdeSolution};
use netepi::rng::{derive_seed, INIT_STREAM, RUN_STREAM};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::json;

use crate::config::{parse_config_with_seed, ConfigError, EngineKind, Network, RunConfig};
use crate::{
    Command, CommonExpArgs, Exp01Args, Exp02Args, Exp03Args, Exp04Args, GenerateArgs, MetricsArgs, ModelArgs,
    NetworkKind, SeedArg, SimulateArgs, SweepArgs,
};

pub const EXIT_USAGE: u8 = 1;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_RUNTIME: u8 = 3;

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    fn input(msg: impl Display) -> Self {
        Self {
            code: EXIT_INPUT,
            message: msg.to_string(),
        }
    }

    fn runtime(msg: impl Display) -> Self {
        Self {
            code: EXIT_RUNTIME,
            message: msg.to_string(),
        }
    }
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::input(e)
    }
}

impl From<GraphError> for Failure {
    fn from(e: GraphError) -> Self {
        Failure::input(e)
    }
}

impl From<SimError> for Failure {
    fn from(e: SimError) -> Self {
        match e {
            SimError::InvalidParameter(_) | SimError::Graph(_) => Failure::input(e),
            _ => Failure::runtime(e),
        }
    }
}

impl From<ExperimentError> for Failure {
    fn from(e: ExperimentError) -> Self {
        match e {
            ExperimentError::InvalidSpec(_) | ExperimentError::Graph(_) => Failure::input(e),
            _ => Failure::runtime(e),
        }
    }
}

type CmdResult = Result<(), Failure>;

pub fn dispatch(command: Command) -> CmdResult {
    match command {
        Command::Generate(a) => cmd_generate(a),
        Command::Metrics(a) => cmd_metrics(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Exp01(a) => cmd_exp01(a),
        Command::Exp02(a) => cmd_exp02(a),
        Command::Exp03(a) => cmd_exp03(a),
        Command::Exp04(a) => cmd_exp04(a),
    }
}

fn read_text(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))
}

fn parse_json<T: DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = read_text(path)?;
    let mut de = serde_json::Deserializer::from_str(&text);
    let value =
        serde_path_to_error::deserialize(&mut de).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    de.end()
        .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    Ok(value)
}

fn write_file(path: &Path, contents: &str) -> CmdResult {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Failure::runtime(format!("cannot create {}: {e}", dir.display())))?;
    }
    fs::write(path, contents).map_err(|e| Failure::runtime(format!("cannot write {}: {e}", path.display())))
}

fn manifest_path(path: &Path) -> PathBuf {
    let mut name = path.as_os_str().to_owned();
    name.push(".manifest.json");
    PathBuf::from(name)
}

/// Writes `contents` to `path` and the manifest next to it.
fn write_with_manifest(path: &Path, contents: &str, manifest: &serde_json::Value) -> CmdResult {
    write_file(path, contents)?;
    let mut text = serde_json::to_string_pretty(manifest).expect("manifest serializes");
    text.push('\n');
    write_file(&manifest_path(path), &text)
}

fn manifest(command: &str, body: serde_json::Value) -> serde_json::Value {
    json!({
        "command": command,
        "version": env!("CARGO_PKG_VERSION"),
        "parameters": body,
    })
}

fn cmd_generate(args: GenerateArgs) -> CmdResult {
    let (model, seed) = match args.model {
        ModelArgs::Er { n, p, seed } => (GraphModel::Er { n, p }, seed),
        ModelArgs::Ws { n, k, p_rewire, seed } => (GraphModel::Ws { n, k, p_rewire }, seed),
        ModelArgs::Ba { n, m, seed } => (GraphModel::Ba { n, m }, seed),
    };
    let g = generate(&GeneratorParams { model, seed })?;
    let text = write_edge_list(&g);
    match args.output {
        Some(path) => write_with_manifest(
            &path,
            &text,
            &manifest(
                "generate",
                json!({ "model": model, "seed": seed, "nodes": g.node_count(), "edges": g.edge_count() }),
            ),
        ),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_metrics(args: MetricsArgs) -> CmdResult {
    let loaded = read_edge_list_file(
        &args.input,
        EdgeListOptions {
            compact_ids: args.compact_ids,
        },
    )?;
    if loaded.self_loops_skipped > 0 || loaded.duplicates_collapsed > 0 {
        eprintln!(
            "note: skipped {} self-loops, collapsed {} duplicate edges",
            loaded.self_loops_skipped, loaded.duplicates_collapsed
        );
    }
    let report = metrics_report(&loaded.graph, args.k_min)?;
    let mut text = serde_json::to_string_pretty(&report).expect("report serializes");
    text.push('\n');
    match args.output {
        Some(path) => write_with_manifest(
            &path,
            &text,
            &manifest(
                "metrics",
                json!({
                    "input": args.input,
                    "compact_ids": args.compact_ids,
                    "k_min": args.k_min,
                    "self_loops_skipped": loaded.self_loops_skipped,
                    "duplicates_collapsed": loaded.duplicates_collapsed,
                }),
            ),
        ),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn fresh_seed() -> u64 {
    RandomState::new().hash_one(SystemTime::now())
}

/// Summary of a single run, shared by all engines.
#[derive(Debug, Serialize)]
struct RunSummary {
    engine: EngineKind,
    population: usize,
    peak_infected_fraction: f64,
    peak_time: f64,
    final_recovered_fraction: f64,
    epidemic_scope: f64,
    /// Events (Gillespie) or steps (agent-based model); absent for the ODE.
    #[serde(skip_serializing_if = "Option::is_none")]
    events: Option<u64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    interventions_applied: Vec<f64>,
    seed: u64,
}

impl RunSummary {
    fn from_trajectory(engine: EngineKind, t: &Trajectory, seed: u64) -> Result<Self, Failure> {
        let s = summarize_trajectory(t)?;
        Ok(Self {
            engine,
            population: t.population,
            peak_infected_fraction: s.peak_infected_fraction,
            peak_time: s.peak_time,
            final_recovered_fraction: s.final_recovered_fraction,
            epidemic_scope: s.epidemic_scope,
            events: Some(s.total_events),
            interventions_applied: t.interventions_applied.clone(),
            seed,
        })
    }

    fn from_ode(sol: &OdeSolution, population: usize, seed: u64) -> Self {
        let (start, end) = (sol.points[0].1, sol.last());
        let (peak_time, peak) =
            sol.points.iter().fold(
                (0.0, f64::NEG_INFINITY),
                |acc, (t, x)| if x.i > acc.1 { (*t, x.i) } else { acc },
            );
        Self {
            engine: EngineKind::Ode,
            population,
            peak_infected_fraction: peak,
            peak_time,
            final_recovered_fraction: end.r,
            epidemic_scope: (end.r - start.r - start.i).max(0.0),
            events: None,
            interventions_applied: Vec::new(),
            seed,
        }
    }
}

/// Runs the configured engine, returning the trajectory CSV and summary.
fn run_config(cfg: &RunConfig) -> Result<(String, RunSummary), Failure> {
    let seed = cfg.init.seed;
    let initial = cfg.init.initial()?;
    let opts = RunOptions {
        record_stride: cfg.record_stride,
        ..RunOptions::new(cfg.t_max, derive_seed(seed, RUN_STREAM))
    };
    let run_on = |g: &netepi::graph::Graph| -> Result<(String, RunSummary), Failure> {
        let init = init_state(g, initial, derive_seed(seed, INIT_STREAM))?;
        let t = gillespie_run(g, &cfg.rates, &init, &opts, &cfg.interventions)?;
        Ok((t.to_csv(), RunSummary::from_trajectory(cfg.engine, &t, seed)?))
    };
    match (cfg.engine, cfg.network()) {
        (
            EngineKind::Gillespie,
            Network::Generated {
                model,
                seed: graph_seed,
            },
        ) => run_on(&generate(&GeneratorParams {
            model,
            seed: graph_seed,
        })?),
        (EngineKind::Gillespie, Network::EdgeList(b)) => {
            let loaded = read_edge_list_file(
                &b.path,
                EdgeListOptions {
                    compact_ids: b.compact_ids,
                },
            )?;
            run_on(&loaded.graph)
        }
        (engine, Network::WellMixed(w)) => {
            let i0 = initial.resolve(w.n)?;
            // Per-contact rate times mean contacts, as in the mass-action engines.
            let effective = RateParams::new(cfg.rates.beta * w.k_avg, cfg.rates.gamma, cfg.rates.alpha)?;
            match engine {
                EngineKind::Gillespie => {
                    let t = gillespie_well_mixed(w.n, w.k_avg, &cfg.rates, (w.n - i0, i0, 0), &opts)?;
                    Ok((t.to_csv(), RunSummary::from_trajectory(engine, &t, seed)?))
                }
                EngineKind::Abm => {
                    if !effective.is_sir() {
                        return Err(Failure::input("the agent-based engine supports SIR only (alpha = 0)"));
                    }
                    let steps = cfg.t_max.ceil() as usize;
                    let t = abm_run(w.n, &effective, (w.n - i0, i0, 0), steps, derive_seed(seed, RUN_STREAM))?;
                    Ok((t.to_csv(), RunSummary::from_trajectory(engine, &t, seed)?))
                }
                EngineKind::Ode => {
                    let x0 = FractionState::seeded(i0 as f64 / w.n as f64)?;
                    let sol = if effective.is_sir() {
                        ode_sir(&effective, x0, cfg.t_max, cfg.dt)?
                    } else {
                        ode_sirs(&effective, x0, cfg.t_max, cfg.dt)?
                    };
                    Ok((sol.to_csv(), RunSummary::from_ode(&sol, w.n, seed)))
                }
            }
        }
        (engine, _) => unreachable!("engine {engine:?} validated to need a well-mixed population"),
    }
}

fn cmd_simulate(args: SimulateArgs) -> CmdResult {
    let text = read_text(&args.config)?;
    let seed = match args.seed {
        None => None,
        Some(SeedArg::Value(v)) => Some(v),
        Some(SeedArg::Auto) => {
            let s = fresh_seed();
            println!("seed: {s}");
            Some(s)
        }
    };
    let mut cfg =
        parse_config_with_seed(&text, seed).map_err(|e| Failure::input(format!("{}: {e}", args.config.display())))?;
    if let Some(p) = args.trajectory {
        cfg.output.trajectory = p;
    }
    if let Some(p) = args.summary {
        cfg.output.summary = p;
    }
    let (csv, summary) = run_config(&cfg)?;
    let m = manifest("simulate", serde_json::to_value(&cfg).expect("config serializes"));
    write_with_manifest(&cfg.output.trajectory, &csv, &m)?;
    let mut summary_text = serde_json::to_string_pretty(&summary).expect("summary serializes");
    summary_text.push('\n');
    write_with_manifest(&cfg.output.summary, &summary_text, &m)
}

fn write_table(command: &str, table: &ExperimentTable, path: &Path, parameters: serde_json::Value) -> CmdResult {
    let csv = table.to_csv()?;
    write_with_manifest(path, &csv, &manifest(command, parameters))?;
    eprintln!("wrote {} rows to {}", table.rows.len(), path.display());
    Ok(())
}

fn cmd_sweep(args: SweepArgs) -> CmdResult {
    let spec: SweepSpec = parse_json(&args.spec)?;
    let table = sweep(&spec, "sweep")?;
    write_table(
        "sweep",
        &table,
        &args.output,
        serde_json::to_value(&spec).expect("spec serializes"),
    )
}

/// Loads an experiment config file, or the defaults.
fn load_or_default<T: DeserializeOwned + Default>(path: &Option<PathBuf>) -> Result<T, Failure> {
    path.as_deref().map_or_else(|| Ok(T::default()), parse_json)
}

fn apply_common(common: &CommonExpArgs, replicates: &mut usize, seed: &mut u64, t_max: &mut f64) {
    if let Some(r) = common.replicates {
        *replicates = r;
    }
    if let Some(s) = common.seed {
        *seed = s;
    }
    if let Some(t) = common.t_max {
        *t_max = t;
    }
}

fn default_source(kind: NetworkKind) -> NetworkSource {
    let defaults = ScopeSweepConfig::default().networks;
    let label = match kind {
        NetworkKind::Ba => "BA",
        NetworkKind::Er => "ER",
        NetworkKind::Ws => "WS",
        NetworkKind::WellMixed => "well-mixed",
        NetworkKind::All => unreachable!("expanded by the caller"),
    };
    defaults
        .into_iter()
        .find(|n| n.label() == label)
        .expect("default network present")
}

fn cmd_exp01(args: Exp01Args) -> CmdResult {
    let mut cfg: ScopeSweepConfig = load_or_default(&args.common.config)?;
    apply_common(&args.common, &mut cfg.replicates, &mut cfg.base_seed, &mut cfg.t_max);
    if !args.network.is_empty() && !args.network.contains(&NetworkKind::All) {
        let mut kinds = args.network.clone();
        if !kinds.contains(&NetworkKind::Er) {
            kinds.insert(0, NetworkKind::Er);
        }
        kinds.dedup();
        cfg.networks = kinds.into_iter().map(default_source).collect();
    }
    if args.beta_max.is_some() || args.beta_step.is_some() {
        let max = args.beta_max.unwrap_or(0.3);
        let step = args.beta_step.unwrap_or(0.01);
        if !(max >= 0.0 && step > 0.0) {
            return Err(Failure::input(format!("invalid beta grid: max {max}, step {step}")));
        }
        cfg.betas = beta_grid(max, step);
    }
    if let Some(g) = args.gamma {
        cfg.gamma = g;
    }
    let table = experiment_scope_sweep(&cfg)?;
    write_table(
        "exp01",
        &table,
        &args.output,
        serde_json::to_value(&cfg).expect("config serializes"),
    )
}

fn cmd_exp02(args: Exp02Args) -> CmdResult {
    let mut cfg: DensityComparisonConfig = load_or_default(&args.common.config)?;
    apply_common(&args.common, &mut cfg.replicates, &mut cfg.base_seed, &mut cfg.t_max);
    if let Some(n) = args.n {
        cfg.n = n;
    }
    if let Some(d) = args.densities {
        cfg.densities = d;
    }
    if let Some(b) = args.beta {
        cfg.beta = b;
    }
    let table = experiment_density_comparison(&cfg)?;
    write_table(
        "exp02",
        &table,
        &args.output,
        serde_json::to_value(&cfg).expect("config serializes"),
    )
}

fn cmd_exp03(args: Exp03Args) -> CmdResult {
    let mut cfg: InterventionTimingConfig = load_or_default(&args.common.config)?;
    apply_common(&args.common, &mut cfg.replicates, &mut cfg.base_seed, &mut cfg.t_max);
    if let Some(v) = args.n {
        cfg.n = v;
    }
    if let Some(v) = args.m {
        cfg.m = v;
    }
    if let Some(v) = args.cap {
        cfg.cap = v;
    }
    if let Some(v) = args.beta {
        cfg.beta = v;
    }
    if let Some(v) = args.triggers {
        cfg.triggers = v;
    }
    if let Some(v) = args.delay_fraction {
        cfg.delay_fraction = v;
    }
    let table = experiment_intervention_timing(&cfg)?;
    write_table(
        "exp03",
        &table,
        &args.output,
        serde_json::to_value(&cfg).expect("config serializes"),
    )
}

fn cmd_exp04(args: Exp04Args) -> CmdResult {
    let mut cfg: SirsConfig = load_or_default(&args.common.config)?;
    apply_common(&args.common, &mut cfg.replicates, &mut cfg.base_seed, &mut cfg.t_max);
    if let Some(v) = args.beta {
        cfg.beta = v;
    }
    if let Some(v) = args.alpha {
        cfg.alpha = v;
    }
    if args.no_control {
        cfg.include_sir_control = false;
    }
    let result = experiment_sirs(&cfg)?;
    let params = serde_json::to_value(&cfg).expect("config serializes");
    write_table("exp04", &result.table, &args.output, params.clone())?;
    if let Some(dir) = &args.curves_dir {
        for curve in &result.curves {
            let path = dir.join(format!("exp04_{}_alpha{}.csv", curve.network, curve.alpha));
            let body = json!({ "experiment": params, "network": curve.network, "alpha": curve.alpha });
            write_with_manifest(&path, &curve.to_csv(), &manifest("exp04", body))?;
        }
    }
    Ok(())
}
