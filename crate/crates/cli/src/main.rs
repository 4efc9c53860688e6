use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{error::ErrorKind, Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use slocc_core::convert::{build_protocol, deterministic_convertible, pmax, simulate_protocol, Optimality};
use slocc_core::critical::{criticality_report, scale_to_critical, ScalingOptions, ScalingStatus, NORMALIZATION_TOL};
use slocc_core::genericity::{benchmark_census, genericity_report};
use slocc_core::io;
use slocc_core::slip::{f2, f4};
use slocc_core::stabilizer::{
    gtilde_triviality_probe, lie_stabilizer_dim, Gate, SearchOptions, Verdict, DEFAULT_SVD_CUTOFF,
};
use slocc_core::{Error, PureState};

/// SLOCC analysis of n-qubit pure states.
#[derive(Debug, Parser, Serialize)]
#[command(name = "slocc", version)]
struct Cli {
    /// Numerical tolerance [default: 1e-10 for scaling and criticality, 1e-8 for symmetry searches].
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output file (default: stdout).
    #[arg(long, global = true)]
    #[serde(skip)]
    out: Option<PathBuf>,
    /// Omit the wall-clock timestamp so repeated runs are byte-identical.
    #[arg(long, global = true)]
    #[serde(skip)]
    no_timestamp: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "snake_case")]
enum Command {
    /// Write a named state as a state file.
    Gen(GenArgs),
    /// Invariant polynomials, criticality and tangent rank of a state.
    Analyze { state: PathBuf },
    /// Scale a state to its critical representative.
    Scale {
        state: PathBuf,
        #[arg(long, default_value_t = 10_000)]
        max_iter: usize,
        /// Also write the representative as a state file.
        #[arg(long)]
        state_out: Option<PathBuf>,
    },
    /// Stabilizer probe: tangent kernel, discrete and phase searches.
    Stab {
        state: PathBuf,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Optimal success probability of psi -> g psi.
    Pmax(ConversionArgs),
    /// Measurement protocol for psi -> g psi, with Monte Carlo simulation.
    Protocol {
        #[command(flatten)]
        conversion: ConversionArgs,
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
    },
    /// Stabilizer census over Haar-random states.
    Genericity {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Stabilizer census over the fixed benchmark battery.
    Census {
        #[command(flatten)]
        budget: BudgetArgs,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum StateName {
    W,
    Ghz,
    Ln,
    Gabcd,
    Haar,
}

#[derive(Debug, Args, Serialize)]
struct GenArgs {
    name: StateName,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    a: Option<Complex64>,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    b: Option<Complex64>,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    c: Option<Complex64>,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    d: Option<Complex64>,
    /// Keep the textbook coefficients instead of normalizing.
    #[arg(long)]
    unnormalized: bool,
}

#[derive(Debug, Args, Serialize)]
struct BudgetArgs {
    #[arg(long, default_value_t = 32)]
    restarts: usize,
    #[arg(long, default_value_t = 3000)]
    max_sweeps: usize,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize, PartialEq)]
#[serde(rename_all = "snake_case")]
enum StabilizerVerdictArg {
    /// Run the stabilizer probe on the source state.
    Auto,
    Trivial,
    Nontrivial,
}

#[derive(Debug, Args, Serialize)]
struct ConversionArgs {
    state: PathBuf,
    chain: PathBuf,
    /// How to decide whether p_max is the optimum or a lower bound.
    #[arg(long, value_enum, default_value_t = StabilizerVerdictArg::Auto)]
    stabilizer_verdict: StabilizerVerdictArg,
    #[command(flatten)]
    budget: BudgetArgs,
}

fn parse_complex(s: &str) -> Result<Complex64, String> {
    s.replace(' ', "").parse::<Complex64>().map_err(|_| format!("not a complex number: {s:?} (try 2, -1.5i or 2+1i)"))
}

#[derive(Serialize)]
struct ReportEnvelope<'a> {
    tool: &'static str,
    version: &'static str,
    command: &'a str,
    params: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    timestamp_unix: Option<u64>,
    payload: Value,
}

enum Outcome {
    Report { payload: Value, exit: u8 },
    Raw(String),
}

fn report(payload: impl Serialize) -> Result<Outcome, Error> {
    Ok(Outcome::Report { payload: serde_json::to_value(payload)?, exit: 0 })
}

const SCALING_TOL: f64 = 1e-10;

fn search_budget(cli: &Cli, b: &BudgetArgs) -> SearchOptions {
    SearchOptions {
        restarts: b.restarts,
        max_sweeps: b.max_sweeps,
        seed: cli.seed,
        tol: cli.tol.unwrap_or(SearchOptions::default().tol),
    }
}

fn run(cli: &Cli) -> Result<Outcome, Error> {
    match &cli.command {
        Command::Gen(args) => gen(cli, args).map(|psi| Outcome::Raw(io::state_to_json(&psi))),
        Command::Analyze { state } => {
            let psi = io::read_state(state)?;
            let unit = psi.normalized()?;
            let lie = lie_stabilizer_dim(&psi, DEFAULT_SVD_CUTOFF);
            let f4v = if !psi.n().is_multiple_of(2) && psi.n() >= 3 { Some(f4(&psi)?) } else { None };
            report(json!({
                "n": psi.n(),
                "norm": psi.norm(),
                "f2": f2(&psi),
                "f4": f4v,
                "criticality": criticality_report(&unit, cli.tol.unwrap_or(SCALING_TOL))?,
                "lie_dim": lie.lie_dim,
                "singular_values": lie.singular_values,
            }))
        }
        Command::Scale { state, max_iter, state_out } => {
            let psi = io::read_state(state)?;
            let opts =
                ScalingOptions { max_iter: *max_iter, ..ScalingOptions::with_tol(cli.tol.unwrap_or(SCALING_TOL)) };
            let res = scale_to_critical(&psi, &opts)?;
            if let Some(path) = state_out {
                io::write_state(path, &res.representative)?;
            }
            let exit = if res.status == ScalingStatus::MaxIter { 2 } else { 0 };
            Ok(Outcome::Report { payload: serde_json::to_value(&res)?, exit })
        }
        Command::Stab { state, budget } => {
            let psi = io::read_state(state)?;
            psi.require_normalized(NORMALIZATION_TOL)?;
            let probe = gtilde_triviality_probe(&psi, &search_budget(cli, budget));
            let exit = if probe.failed_gate == Some(Gate::ScalingNotConverged) { 2 } else { 0 };
            Ok(Outcome::Report { payload: serde_json::to_value(&probe)?, exit })
        }
        Command::Pmax(args) => {
            let (psi, chain, verdict) = conversion_inputs(cli, args)?;
            let optimality = Optimality::from_stabilizer(verdict == Some(Verdict::Trivial));
            let plan = pmax(&psi, &chain, optimality)?;
            let det = deterministic_convertible(&psi, &chain)?;
            report(json!({
                "p_max": plan.p_max,
                "per_party_lambda": plan.per_party_lambda,
                "optimality_status": plan.optimality,
                "stabilizer_verdict": verdict,
                "deterministic": det.deterministic,
                "unitarity_defects": det.unitarity_defects,
                "connector": plan.connector,
                "target": plan.target,
            }))
        }
        Command::Protocol { conversion, trials } => {
            let (psi, chain, verdict) = conversion_inputs(cli, conversion)?;
            let optimality = Optimality::from_stabilizer(verdict == Some(Verdict::Trivial));
            let plan = build_protocol(&psi, &chain, optimality)?;
            let stats = simulate_protocol(&plan, &psi, *trials, cli.seed)?;
            let se = stats.standard_error(plan.p_max);
            report(json!({
                "p_max": plan.p_max,
                "per_party_lambda": plan.per_party_lambda,
                "optimality_status": plan.optimality,
                "stabilizer_verdict": verdict,
                "measurements": plan.measurements,
                "completeness_residuals": plan.measurements.iter().map(|m| m.completeness_residual()).collect::<Vec<_>>(),
                "stats": stats,
                "standard_error": se,
            }))
        }
        Command::Genericity { n, samples, budget } => {
            report(genericity_report(*n, *samples, cli.seed, &search_budget(cli, budget))?)
        }
        Command::Census { budget } => report(benchmark_census(&search_budget(cli, budget))),
    }
}

fn gen(cli: &Cli, args: &GenArgs) -> Result<PureState, Error> {
    let normalized = !args.unnormalized;
    let need_n = || args.n.ok_or_else(|| Error::Domain(format!("{:?} needs --n", args.name)));
    match args.name {
        StateName::W => PureState::w(need_n()?, normalized),
        StateName::Ghz => PureState::ghz(need_n()?, normalized),
        StateName::Ln => PureState::ln(need_n()?, normalized),
        StateName::Haar => PureState::sample_haar(need_n()?, cli.seed),
        StateName::Gabcd => {
            if args.n.is_some_and(|n| n != 4) {
                return Err(Error::Domain("gabcd is a four-qubit family".into()));
            }
            match (args.a, args.b, args.c, args.d) {
                (Some(a), Some(b), Some(c), Some(d)) => PureState::gabcd(a, b, c, d, normalized),
                _ => Err(Error::Domain("gabcd needs all of --a --b --c --d".into())),
            }
        }
    }
}

fn conversion_inputs(
    cli: &Cli,
    args: &ConversionArgs,
) -> Result<(PureState, slocc_core::LocalOperatorChain, Option<Verdict>), Error> {
    let psi = io::read_state(&args.state)?;
    let chain = io::read_chain(&args.chain)?;
    if chain.len() != psi.n() {
        return Err(Error::QubitMismatch { expected: psi.n(), found: chain.len() });
    }
    let verdict = match args.stabilizer_verdict {
        StabilizerVerdictArg::Auto => Some(gtilde_triviality_probe(&psi, &search_budget(cli, &args.budget)).verdict),
        StabilizerVerdictArg::Trivial => Some(Verdict::Trivial),
        StabilizerVerdictArg::Nontrivial => Some(Verdict::NonTrivial),
    };
    Ok((psi, chain, verdict))
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Gen(_) => "gen",
        Command::Analyze { .. } => "analyze",
        Command::Scale { .. } => "scale",
        Command::Stab { .. } => "stab",
        Command::Pmax(_) => "pmax",
        Command::Protocol { .. } => "protocol",
        Command::Genericity { .. } => "genericity",
        Command::Census { .. } => "census",
    }
}

fn emit(out: Option<&Path>, text: &str) -> std::io::Result<()> {
    match out {
        Some(p) => fs::write(p, format!("{text}\n")),
        None => writeln!(std::io::stdout().lock(), "{text}"),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    let (text, code) = match run(&cli) {
        Ok(Outcome::Raw(text)) => (text, 0),
        Ok(Outcome::Report { payload, exit }) => {
            let mut params = serde_json::to_value(&cli).expect("params serialize");
            if let Value::Object(m) = &mut params {
                m.remove("command");
                m.insert("args".into(), serde_json::to_value(&cli.command).expect("args serialize"));
            }
            let envelope = ReportEnvelope {
                tool: "slocc",
                version: env!("CARGO_PKG_VERSION"),
                command: command_name(&cli.command),
                params,
                timestamp_unix: (!cli.no_timestamp)
                    .then(|| SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)),
                payload,
            };
            (serde_json::to_string_pretty(&envelope).expect("report serializes"), exit)
        }
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    if let Err(e) = emit(cli.out.as_deref(), &text) {
        eprintln!("error: cannot write output: {e}");
        return ExitCode::from(1);
    }
    ExitCode::from(code)
}
