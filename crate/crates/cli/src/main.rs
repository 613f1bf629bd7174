use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use pulseloop::config::{ProfileConfig, ProfileKind};
use pulseloop::experiments::{sweep, ParamGrid, SweepScenario};
use pulseloop::export::{write_sweep_csv, write_trajectory_csv};
use pulseloop::papercheck::run_papercheck;
use pulseloop::propagator::DEFAULT_STEPS;
use pulseloop::{
    bloch_to_state, gate_from_simulation, parse_sequence, propagate, BlochVector, Error, FluctuatedPulse,
    FluctuationProfile, GridSpec, PulseSequence,
};

/// Largest `|m·n+|` accepted by `phases`.
const BASIS_OVERLAP_LIMIT: f64 = 1e-6;

#[derive(Parser)]
#[command(name = "pulseloop", version, about = "Composite pulses under fluctuations: trajectories and phases")]
struct Cli {
    /// Integration steps per unit time [default: 16384]
    #[arg(long, global = true, env = "PULSELOOP_STEPS")]
    steps: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Propagate a basis state and write the trajectory as CSV.
    Simulate(RunArgs),
    /// Split the phases of both basis states and rebuild the gate (JSON).
    Phases(RunArgs),
    /// Run every reproduction check and print pass/fail.
    Papercheck {
        #[arg(long)]
        json: bool,
    },
    /// Run a scenario over a parameter grid and write CSV.
    Sweep(SweepArgs),
}

#[derive(Args, Default)]
struct ProfileArgs {
    /// Profile JSON file
    #[arg(long)]
    profile: Option<PathBuf>,
    /// Profile builder: piecewise_sine, global_sine or tabulated
    #[arg(long, value_parser = parse_kind)]
    kind: Option<ProfileKind>,
    #[arg(long, allow_negative_numbers = true)]
    f0: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    g0: Option<f64>,
    #[arg(long)]
    xi: Option<f64>,
    #[arg(long)]
    eta: Option<f64>,
}

#[derive(Args)]
struct RunArgs {
    /// Pulse sequence, e.g. "90x 180y 90x"
    #[arg(long)]
    seq: Option<String>,
    #[command(flatten)]
    profile: ProfileArgs,
    /// Initial Bloch vector n+ as nx,ny,nz [default: 0,1,0]
    #[arg(long, allow_hyphen_values = true)]
    basis: Option<String>,
    /// Output file (stdout when absent)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write every N-th grid node
    #[arg(long)]
    every: Option<usize>,
    /// Run configuration JSON; flags take precedence
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct SweepArgs {
    /// piecewise_sine, global_sine or ha_hb
    #[arg(long, value_parser = parse_scenario)]
    scenario: Option<SweepScenario>,
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    f0: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    g0: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    xi: Option<Vec<u32>>,
    /// Defaults to η = ξ at every point
    #[arg(long, value_delimiter = ',')]
    eta: Option<Vec<u32>>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RunConfig {
    sequence: Option<String>,
    profile: Option<ProfileConfig>,
    steps: Option<usize>,
    basis: Option<[f64; 3]>,
    out: Option<PathBuf>,
    every: Option<usize>,
    scenario: Option<SweepScenario>,
    grid: Option<ParamGrid>,
}

/// Exit 2 for bad input, 1 for numeric failures.
enum Failure {
    Usage(String),
    Numeric(String),
}

impl Failure {
    fn usage(e: impl ToString) -> Self {
        Failure::Usage(e.to_string())
    }

    fn numeric(e: impl ToString) -> Self {
        Failure::Numeric(e.to_string())
    }
}

type CmdResult = Result<ExitCode, Failure>;

fn parse_kind(s: &str) -> Result<ProfileKind, String> {
    serde_json::from_value(serde_json::Value::String(s.into())).map_err(|_| format!("unknown profile kind {s:?}"))
}

fn parse_scenario(s: &str) -> Result<SweepScenario, String> {
    serde_json::from_value(serde_json::Value::String(s.into())).map_err(|_| format!("unknown scenario {s:?}"))
}

fn load_config(path: Option<&Path>) -> Result<RunConfig, Failure> {
    let Some(path) = path else { return Ok(RunConfig::default()) };
    let text = fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn grid_spec(cli_steps: Option<usize>, cfg: &RunConfig) -> Result<GridSpec, Failure> {
    GridSpec::new(cli_steps.or(cfg.steps).unwrap_or(DEFAULT_STEPS)).map_err(Failure::usage)
}

fn parse_basis(text: &str) -> Result<BlochVector, Failure> {
    let parts: Vec<f64> = text
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|e| Failure::usage(format!("--basis {text:?}: {e}")))?;
    match parts[..] {
        [x, y, z] => BlochVector::from_direction(x, y, z).map_err(Failure::usage),
        _ => Err(Failure::usage(format!("--basis needs three components, got {text:?}"))),
    }
}

/// File values first, then inline flags on top.
fn resolve_profile(args: &ProfileArgs, from_config: Option<ProfileConfig>, seq: &PulseSequence) -> Result<Option<FluctuationProfile>, Failure> {
    let mut cfg = match &args.profile {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
            Some(ProfileConfig::from_json(&text).map_err(Failure::usage)?)
        }
        None => from_config,
    };
    let inline = args.kind.is_some() || args.f0.is_some() || args.g0.is_some() || args.xi.is_some() || args.eta.is_some();
    if inline {
        if cfg.is_none() && args.kind.is_none() {
            return Err(Failure::usage("inline profile values need --kind or --profile"));
        }
        let base = cfg.get_or_insert_with(|| ProfileConfig {
            kind: args.kind.unwrap_or(ProfileKind::PiecewiseSine),
            f0: None,
            g0: None,
            xi: None,
            eta: None,
            samples: None,
        });
        if let Some(k) = args.kind {
            base.kind = k;
        }
        base.f0 = args.f0.or(base.f0);
        base.g0 = args.g0.or(base.g0);
        base.xi = args.xi.or(base.xi);
        base.eta = args.eta.or(base.eta);
    }
    cfg.map(|c| c.build(seq).map_err(Failure::usage)).transpose()
}

struct Prepared {
    seq: PulseSequence,
    profile: Option<FluctuationProfile>,
    basis: BlochVector,
    grid: GridSpec,
    out: Option<PathBuf>,
    every: usize,
}

fn prepare(args: &RunArgs, steps: Option<usize>) -> Result<Prepared, Failure> {
    let cfg = load_config(args.config.as_deref())?;
    if cfg.scenario.is_some() || cfg.grid.is_some() {
        return Err(Failure::usage("\"scenario\" and \"grid\" are only valid for sweep"));
    }
    let text = args
        .seq
        .clone()
        .or(cfg.sequence.clone())
        .ok_or_else(|| Failure::usage("no pulse sequence: pass --seq or set \"sequence\""))?;
    let seq = parse_sequence(&text).map_err(|e| Failure::usage(Error::from(e)))?;
    let grid = grid_spec(steps, &cfg)?;
    let basis = match (&args.basis, cfg.basis) {
        (Some(text), _) => parse_basis(text)?,
        (None, Some([x, y, z])) => BlochVector::from_direction(x, y, z).map_err(Failure::usage)?,
        (None, None) => BlochVector::PLUS_Y,
    };
    let profile = resolve_profile(&args.profile, cfg.profile, &seq)?;
    let every = args.every.or(cfg.every).unwrap_or(1);
    if every == 0 {
        return Err(Failure::usage("--every must be at least 1"));
    }
    Ok(Prepared { seq, profile, basis, grid, out: args.out.clone().or(cfg.out), every })
}

fn with_output(out: Option<&Path>, write: impl FnOnce(&mut dyn Write) -> io::Result<()>) -> Result<(), Failure> {
    let result = match out {
        Some(path) => fs::File::create(path).and_then(|f| {
            let mut w = io::BufWriter::new(f);
            write(&mut w)?;
            w.flush()
        }),
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            write(&mut lock)
        }
    };
    result.map_err(|e| Failure::usage(format!("cannot write output: {e}")))
}

fn cmd_simulate(args: &RunArgs, steps: Option<usize>) -> CmdResult {
    let p = prepare(args, steps)?;
    let profile = p.profile.unwrap_or_else(FluctuationProfile::zero);
    let h = FluctuatedPulse::new(p.seq, profile);
    let traj = propagate(&h, &bloch_to_state(&p.basis), &p.grid).map_err(Failure::numeric)?;
    with_output(p.out.as_deref(), |w| write_trajectory_csv(w, &traj, p.every))?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_phases(args: &RunArgs, steps: Option<usize>) -> CmdResult {
    let p = prepare(args, steps)?;
    let report = gate_from_simulation(&p.seq, p.profile.as_ref(), &p.basis, &p.grid).map_err(|e| match e {
        Error::NonCyclic { fidelity, total_phase } => Failure::numeric(format!(
            "basis state does not return to itself: fidelity {fidelity:.12}, phase {total_phase:.6}"
        )),
        other => Failure::numeric(other),
    })?;
    if report.max_drive_overlap > BASIS_OVERLAP_LIMIT {
        return Err(Failure::numeric(format!(
            "max |m(t)·n+(t)| = {:.3e} exceeds {BASIS_OVERLAP_LIMIT:e}; the phase split needs a basis whose path stays orthogonal to the drive axis",
            report.max_drive_overlap
        )));
    }
    let json = serde_json::to_string_pretty(&report).expect("reports serialize");
    with_output(p.out.as_deref(), |w| writeln!(w, "{json}"))?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_papercheck(json: bool, steps: Option<usize>) -> CmdResult {
    let grid = grid_spec(steps, &RunConfig::default())?;
    let report = run_papercheck(&grid);
    if json {
        println!("{}", serde_json::to_string_pretty(&report).expect("reports serialize"));
    } else {
        println!("steps per unit time: {}", report.steps_per_unit_time);
        for c in &report.criteria {
            println!("{c}");
        }
    }
    Ok(if report.passed() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn cmd_sweep(args: &SweepArgs, steps: Option<usize>) -> CmdResult {
    let cfg = load_config(args.config.as_deref())?;
    if cfg.sequence.is_some() || cfg.profile.is_some() || cfg.basis.is_some() || cfg.every.is_some() {
        return Err(Failure::usage("sweep configs take only \"scenario\", \"grid\", \"steps\" and \"out\""));
    }
    let grid = grid_spec(steps, &cfg)?;
    let scenario = args
        .scenario
        .or(cfg.scenario)
        .ok_or_else(|| Failure::usage("no scenario: pass --scenario or set \"scenario\""))?;
    let base = cfg.grid.unwrap_or(ParamGrid { f0: vec![], g0: vec![], xi: vec![], eta: vec![] });
    let params = ParamGrid {
        f0: args.f0.clone().unwrap_or(base.f0),
        g0: args.g0.clone().unwrap_or(base.g0),
        xi: args.xi.clone().unwrap_or(base.xi),
        eta: args.eta.clone().unwrap_or(base.eta),
    };
    params.points().map_err(Failure::usage)?;
    let rows = sweep(scenario, &params, &grid).map_err(Failure::numeric)?;
    let out = args.out.clone().or(cfg.out);
    with_output(out.as_deref(), |w| write_sweep_csv(w, &rows))?;
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Simulate(a) => cmd_simulate(a, cli.steps),
        Command::Phases(a) => cmd_phases(a, cli.steps),
        Command::Papercheck { json } => cmd_papercheck(*json, cli.steps),
        Command::Sweep(a) => cmd_sweep(a, cli.steps),
    };
    match result {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Numeric(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
