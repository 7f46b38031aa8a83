//! Command-line front end shared by the `bellcorr` binary and the tests.

use std::f64::consts::PI;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::json;

use crate::bell::{bell_spectrum_of, BellSpectrum};
use crate::certify::{certify, random_spectra, CertificationReport};
use crate::dynamics::{FieldChannel, Tau};
use crate::linalg::{c, CMatrix, TwoQubitState};
use crate::nonmarkov::{composition_states, composition_violation, nonmarkovianity_measure, Convention};
use crate::oracle::SearchConfig;
use crate::trajectory::{tau_grid, trajectory_table, Table};

/// Initial state of the reproduced figures, `0.9 |1+><1+| + 0.1 |1-><1-|`.
pub const FIGURE_INITIAL: [f64; 4] = [0.9, 0.1, 0.0, 0.0];
/// Tolerance on the normalisation of a user-supplied spectrum.
pub const INITIAL_SUM_TOL: f64 = 1e-9;

#[derive(Debug, Parser)]
#[command(
    name = "bellcorr",
    version,
    about = "Correlation dynamics of two qubits in local random external fields",
    long_about = "Correlation dynamics of two qubits in local random external fields.\n\n\
        Time is the dimensionless tau = g t. The qubit frequency (--omega) is \
        accepted for bookkeeping only: the dynamics is written in the frame \
        rotating at that frequency, so it has no effect on any output."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Trajectory of T, D, C, E for a Bell-diagonal initial state.
    Evolve(CommonArgs),
    /// Trajectory from 0.9|1+><1+| + 0.1|1-><1-| (frozen discord / classical correlations).
    Figure2(CommonArgs),
    /// Figure 2 trajectory plus ancilla entanglement E_anc and I_E.
    Figure3(CommonArgs),
    /// Certify the closed-form closest states against the brute-force oracles.
    Verify(VerifyArgs),
    /// Ancilla-protocol non-Markovianity I_E along the time grid.
    Nonmarkov(CommonArgs),
    /// Distance between direct and restarted evolution.
    Composition(CompositionArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Coupling rate g; an absolute time column t = tau/g is added when g != 1.
    #[arg(long, default_value_t = 1.0)]
    pub g: f64,
    /// Qubit frequency. Ignored by the dynamics (rotating frame).
    #[arg(long)]
    pub omega: Option<f64>,
    /// End of the time grid in units of tau = g t.
    #[arg(long = "tau-max", default_value_t = PI)]
    pub tau_max: f64,
    /// Number of grid intervals; the grid has steps + 1 points.
    #[arg(long, default_value_t = 2000)]
    pub steps: usize,
    /// Initial state: a JSON file, inline JSON, or four comma-separated Bell weights
    /// (lambda_1p,lambda_1m,lambda_2p,lambda_2m).
    #[arg(long)]
    pub initial: Option<String>,
    /// I_E convention: rhp (increase counting) or literal.
    #[arg(long, default_value = "rhp")]
    pub convention: Convention,
    /// Output path; standard output when absent.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Seed for the oracle searches and random states.
    #[arg(long, default_value_t = 2011)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Number of random Bell-diagonal states (ignored with --initial).
    #[arg(long, default_value_t = 100)]
    pub n: usize,
}

#[derive(Debug, Clone, Args)]
pub struct CompositionArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long)]
    pub tau1: f64,
    #[arg(long)]
    pub tau2: f64,
}

/// Exit status of a failed command.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    BadInput(String),
    #[error("{0}")]
    Unsupported(String),
    #[error("{0}")]
    Certification(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::BadInput(_) => 2,
            CliError::Unsupported(_) => 3,
            CliError::Certification(_) => 4,
        }
    }
}

impl From<crate::Error> for CliError {
    fn from(e: crate::Error) -> Self {
        CliError::BadInput(e.to_string())
    }
}

/// Validated run parameters.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub channel: FieldChannel,
    pub tau_max: f64,
    pub steps: usize,
    pub initial: Option<InitialState>,
    pub convention: Convention,
    pub output: Option<PathBuf>,
    pub format: Format,
    pub seed: u64,
}

impl RunConfig {
    pub fn from_args(args: &CommonArgs) -> Result<Self, CliError> {
        let mut channel = FieldChannel::new(args.g)?;
        if let Some(omega) = args.omega {
            channel = channel.with_omega(omega);
        }
        if !(args.tau_max.is_finite() && args.tau_max > 0.0) {
            return Err(CliError::BadInput(format!("--tau-max must be positive, got {}", args.tau_max)));
        }
        if args.steps < 2 {
            return Err(CliError::BadInput(format!("--steps must be at least 2, got {}", args.steps)));
        }
        let initial = args.initial.as_deref().map(load_initial).transpose()?;
        Ok(Self {
            channel,
            tau_max: args.tau_max,
            steps: args.steps,
            initial,
            convention: args.convention,
            output: args.output.clone(),
            format: args.format,
            seed: args.seed,
        })
    }

    pub fn grid(&self) -> Result<Vec<f64>, CliError> {
        Ok(tau_grid(self.tau_max, self.steps)?)
    }

    pub fn search_config(&self) -> SearchConfig {
        SearchConfig {
            seed: self.seed,
            ..SearchConfig::default()
        }
    }

    /// Bell spectrum of the initial state, defaulting to the figure state.
    pub fn bell_initial(&self) -> Result<BellSpectrum, CliError> {
        match &self.initial {
            None => Ok(BellSpectrum::new(FIGURE_INITIAL)?),
            Some(InitialState::Bell(s)) => Ok(*s),
            Some(InitialState::Matrix(rho)) => {
                let d = bell_spectrum_of(rho);
                if d.is_bell_diagonal() {
                    Ok(d.spectrum)
                } else {
                    Err(CliError::Unsupported(format!(
                        "initial state is not Bell-diagonal (Bell-basis residual {:.3e}); \
                         only the analytic Bell-diagonal path is available",
                        d.residual
                    )))
                }
            }
        }
    }
}

/// Initial state given on the command line.
#[derive(Debug, Clone, PartialEq)]
pub enum InitialState {
    Bell(BellSpectrum),
    Matrix(Box<TwoQubitState>),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct InitialFile {
    bell: Option<[f64; 4]>,
    matrix: Option<[[[f64; 2]; 4]; 4]>,
}

/// Parses the initial-state JSON document: `{"bell": [λ1p, λ1m, λ2p, λ2m]}`
/// or `{"matrix": 4×4 nested [re, im] pairs}`.
pub fn parse_initial_json(text: &str) -> Result<InitialState, CliError> {
    let file: InitialFile = serde_json::from_str(text)
        .map_err(|e| CliError::BadInput(format!("invalid initial-state JSON: {e}")))?;
    match (file.bell, file.matrix) {
        (Some(w), None) => Ok(InitialState::Bell(BellSpectrum::normalized(w, INITIAL_SUM_TOL)?)),
        (None, Some(m)) => {
            let mat = CMatrix::<4>::from_fn(|i, j| c(m[i][j][0], m[i][j][1]));
            Ok(InitialState::Matrix(Box::new(TwoQubitState::new(mat)?)))
        }
        _ => Err(CliError::BadInput(
            "initial-state JSON needs exactly one of \"bell\" or \"matrix\"".into(),
        )),
    }
}

/// `--initial` accepts inline JSON, four comma-separated weights, or a path.
pub fn load_initial(arg: &str) -> Result<InitialState, CliError> {
    let trimmed = arg.trim();
    if trimmed.starts_with('{') {
        return parse_initial_json(trimmed);
    }
    let parts: Vec<&str> = trimmed.split(',').collect();
    if parts.len() == 4 {
        if let Ok(w) = parts
            .iter()
            .map(|p| p.trim().parse::<f64>())
            .collect::<Result<Vec<f64>, _>>()
        {
            let w = [w[0], w[1], w[2], w[3]];
            return Ok(InitialState::Bell(BellSpectrum::normalized(w, INITIAL_SUM_TOL)?));
        }
    }
    let text = fs::read_to_string(trimmed)
        .map_err(|e| CliError::BadInput(format!("cannot read initial state '{trimmed}': {e}")))?;
    parse_initial_json(&text)
}

fn emit(cfg: &RunConfig, body: &[u8], stdout: &mut dyn Write) -> Result<(), CliError> {
    match &cfg.output {
        Some(path) => fs::write(path, body)
            .map_err(|e| CliError::BadInput(format!("cannot write '{}': {e}", path.display()))),
        None => stdout
            .write_all(body)
            .map_err(|e| CliError::BadInput(format!("cannot write output: {e}"))),
    }
}

fn encode_table(table: &Table, format: Format) -> Vec<u8> {
    match format {
        Format::Csv => {
            let mut buf = Vec::new();
            table.write_csv(&mut buf).expect("writing to memory");
            buf
        }
        Format::Json => json_bytes(&table.to_json()),
    }
}

fn json_bytes<T: serde::Serialize>(value: &T) -> Vec<u8> {
    let mut buf = serde_json::to_vec_pretty(value).expect("serialisable report");
    buf.push(b'\n');
    buf
}

fn reject_initial(cfg: &RunConfig, command: &str) -> Result<(), CliError> {
    if cfg.initial.is_some() {
        return Err(CliError::BadInput(format!(
            "{command} uses a fixed initial state; drop --initial"
        )));
    }
    Ok(())
}

pub fn cmd_evolve(cfg: &RunConfig, stdout: &mut dyn Write) -> Result<(), CliError> {
    let initial = cfg.bell_initial()?;
    let table = trajectory_table(&initial, &cfg.channel, &cfg.grid()?, None)?;
    emit(cfg, &encode_table(&table, cfg.format), stdout)
}

pub fn cmd_figure2(cfg: &RunConfig, stdout: &mut dyn Write) -> Result<(), CliError> {
    reject_initial(cfg, "figure2")?;
    cmd_evolve(cfg, stdout)
}

pub fn cmd_figure3(cfg: &RunConfig, stdout: &mut dyn Write) -> Result<(), CliError> {
    reject_initial(cfg, "figure3")?;
    let initial = BellSpectrum::new(FIGURE_INITIAL)?;
    let table = trajectory_table(&initial, &cfg.channel, &cfg.grid()?, Some(cfg.convention))?;
    emit(cfg, &encode_table(&table, cfg.format), stdout)
}

pub fn cmd_nonmarkov(cfg: &RunConfig, stdout: &mut dyn Write) -> Result<(), CliError> {
    reject_initial(cfg, "nonmarkov")?;
    let grid = cfg.grid()?;
    let trace = nonmarkovianity_measure(&grid, cfg.convention)?;
    let with_time = cfg.channel.g() != 1.0;
    let mut columns = vec!["tau"];
    if with_time {
        columns.push("t");
    }
    columns.extend(["E_anc", "I_E"]);
    let mut table = Table::new(columns);
    for k in 0..grid.len() {
        let mut row = vec![trace.tau_grid[k]];
        if with_time {
            row.push(cfg.channel.time_at(Tau::new(trace.tau_grid[k])?));
        }
        row.extend([trace.e_anc[k], trace.i_e[k]]);
        table.push(row);
    }
    emit(cfg, &encode_table(&table, cfg.format), stdout)
}

pub fn cmd_composition(
    cfg: &RunConfig,
    tau1: f64,
    tau2: f64,
    stdout: &mut dyn Write,
) -> Result<(), CliError> {
    if tau1.partial_cmp(&tau2) != Some(std::cmp::Ordering::Less) {
        return Err(CliError::BadInput(format!("--tau1 ({tau1}) must be smaller than --tau2 ({tau2})")));
    }
    let (t1, t2) = (Tau::new(tau1)?, Tau::new(tau2)?);
    let initial = cfg.bell_initial()?;
    let (direct, restarted) = composition_states(&initial, t1, t2)?;
    let distance = composition_violation(&initial, t1, t2)?;
    let report = json!({
        "initial": initial.weights(),
        "tau1": tau1,
        "tau2": tau2,
        "g": cfg.channel.g(),
        "direct": direct.weights(),
        "restarted": restarted.weights(),
        "trace_distance": distance,
    });
    emit(cfg, &json_bytes(&report), stdout)
}

/// Runs the certification. Uses only `--initial` when given, otherwise `n`
/// seeded random Bell-diagonal states.
pub fn verification_report(cfg: &RunConfig, n: usize) -> Result<CertificationReport, CliError> {
    let spectra = match cfg.initial {
        Some(_) => vec![cfg.bell_initial()?],
        None => random_spectra(n, cfg.seed),
    };
    if spectra.is_empty() {
        return Err(CliError::BadInput("--n must be positive".into()));
    }
    Ok(certify(&spectra, &cfg.search_config()))
}

pub fn cmd_verify(cfg: &RunConfig, n: usize, stdout: &mut dyn Write) -> Result<(), CliError> {
    let report = verification_report(cfg, n)?;
    emit(cfg, &json_bytes(&report), stdout)?;
    if report.passed {
        Ok(())
    } else {
        let dump = serde_json::to_string(&report.failures).expect("serialisable failures");
        Err(CliError::Certification(format!(
            "{} state(s) disagree with the analytic closest states by >= {} bits: {dump}",
            report.failures.len(),
            report.tolerance
        )))
    }
}

fn dispatch(cli: Cli, stdout: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Evolve(a) => cmd_evolve(&RunConfig::from_args(&a)?, stdout),
        Command::Figure2(a) => cmd_figure2(&RunConfig::from_args(&a)?, stdout),
        Command::Figure3(a) => cmd_figure3(&RunConfig::from_args(&a)?, stdout),
        Command::Nonmarkov(a) => cmd_nonmarkov(&RunConfig::from_args(&a)?, stdout),
        Command::Verify(a) => cmd_verify(&RunConfig::from_args(&a.common)?, a.n, stdout),
        Command::Composition(a) => {
            cmd_composition(&RunConfig::from_args(&a.common)?, a.tau1, a.tau2, stdout)
        }
    }
}

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let rendered = e.render().to_string();
            if code == 0 {
                let _ = stdout.write_all(rendered.as_bytes());
            } else {
                let _ = stderr.write_all(rendered.as_bytes());
            }
            return code;
        }
    };
    match dispatch(cli, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
