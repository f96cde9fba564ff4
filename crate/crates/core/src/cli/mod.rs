//! Command-line frontend.
//!
//! Every subcommand reads its options from flags, then from an optional
//! `key = value` file given with `--config`, then from built-in defaults.
//! Keys are the long flag names (`lambda = 0.54`, `check-radon = true`).

mod commands;
mod parse;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{ArgAction, Args, CommandFactory, FromArgMatches, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::states::{DensityMatrix, TwoModeState};

pub use parse::{parse_angle, parse_angle_map, parse_config_text, parse_values};

#[derive(Parser, Debug, Clone, Serialize)]
#[command(
    name = "tomobell",
    version,
    about = "Tomographic and pseudospin CHSH tests on two-mode states"
)]
pub struct Cli {
    /// Key-value config file; flags on the command line take precedence.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Clone, Serialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Closed-form tomogram on an (X1, X2, θ1, θ2) grid, optionally checked
    /// against a numerical Radon projection of the Wigner function.
    Tomogram(TomogramArgs),
    /// Sign-binned probabilities versus θ1 + θ2.
    Probs(ProbsArgs),
    /// CHSH value versus a state parameter.
    BellScan(BellScanArgs),
    /// Pseudospin CHSH value versus θu at fixed θv, θu', θv'.
    Pseudospin(PseudospinArgs),
    /// Bell-angle optimization.
    Optimize(OptimizeArgs),
    /// Monte Carlo homodyne outcomes with sign-binned estimates.
    Sample(SampleArgs),
    /// Single-mode reconstruction of a Wigner function or density matrix.
    Reconstruct(ReconstructArgs),
    /// All figure datasets with a checksum manifest.
    Figures(FiguresArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Tomogram(_) => "tomogram",
            Command::Probs(_) => "probs",
            Command::BellScan(_) => "bell-scan",
            Command::Pseudospin(_) => "pseudospin",
            Command::Optimize(_) => "optimize",
            Command::Sample(_) => "sample",
            Command::Reconstruct(_) => "reconstruct",
            Command::Figures(_) => "figures",
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StateKind {
    /// Two-mode squeezed vacuum (`--lambda` or `--s`).
    #[value(alias = "squeezed-vacuum")]
    Epr,
    /// (|00> + |nn>)/√2 (`--n`).
    #[value(alias = "fock")]
    FockPair,
    /// Pair-coherent state (`--r`).
    #[value(alias = "pc")]
    PairCoherent,
    /// Two-mode density matrix read from `--rho`.
    Explicit,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct StateArgs {
    #[arg(long, value_enum, default_value = "epr")]
    pub state: StateKind,
    /// λ = tanh s of the squeezed vacuum: a value, `a,b,c` or `start:stop:step`.
    #[arg(long, num_args = 1.., action = ArgAction::Set)]
    pub lambda: Option<Vec<String>>,
    /// Squeezing parameter s of the squeezed vacuum, instead of λ.
    #[arg(long, num_args = 1.., action = ArgAction::Set, conflicts_with = "lambda")]
    pub s: Option<Vec<String>>,
    /// Fock number of the pair superposition.
    #[arg(long, num_args = 1.., action = ArgAction::Set)]
    pub n: Option<Vec<String>>,
    /// Pair-coherent amplitude.
    #[arg(long, num_args = 1.., action = ArgAction::Set)]
    pub r: Option<Vec<String>>,
    /// JSON density matrix for `--state explicit`.
    #[arg(long)]
    pub rho: Option<PathBuf>,
}

/// A state with the scanned parameter value it came from.
#[derive(Debug, Clone)]
pub struct ParamState {
    pub parameter: f64,
    pub state: TwoModeState,
}

impl StateArgs {
    fn reject(&self, present: bool, flag: &str) -> Result<()> {
        if present {
            let kind = self
                .state
                .to_possible_value()
                .map(|v| v.get_name().to_string())
                .unwrap_or_default();
            return Err(Error::config(format!(
                "--{flag} does not apply to --state {kind}"
            )));
        }
        Ok(())
    }

    /// All states described by the flags, one per parameter value.
    pub fn states(&self) -> Result<Vec<ParamState>> {
        let values = |v: &Option<Vec<String>>, default: f64| -> Result<Vec<f64>> {
            match v {
                Some(a) => {
                    let out = parse::parse_value_args(a)?;
                    if out.is_empty() {
                        return Err(Error::config("empty parameter list"));
                    }
                    Ok(out)
                }
                None => Ok(vec![default]),
            }
        };
        let out: Vec<ParamState> = match self.state {
            StateKind::Epr => {
                self.reject(self.n.is_some(), "n")?;
                self.reject(self.r.is_some(), "r")?;
                self.reject(self.rho.is_some(), "rho")?;
                if self.s.is_some() {
                    values(&self.s, 0.0)?
                        .into_iter()
                        .map(|s| {
                            Ok(ParamState {
                                parameter: s,
                                state: TwoModeState::from_squeezing(s)?,
                            })
                        })
                        .collect::<Result<_>>()?
                } else {
                    values(&self.lambda, 0.54)?
                        .into_iter()
                        .map(|l| {
                            Ok(ParamState {
                                parameter: l,
                                state: TwoModeState::squeezed_vacuum(l)?,
                            })
                        })
                        .collect::<Result<_>>()?
                }
            }
            StateKind::FockPair => {
                self.reject(self.lambda.is_some() || self.s.is_some(), "lambda")?;
                self.reject(self.r.is_some(), "r")?;
                self.reject(self.rho.is_some(), "rho")?;
                values(&self.n, 1.0)?
                    .into_iter()
                    .map(|n| {
                        if n.fract() != 0.0 || !(1.0..=f64::from(u32::MAX)).contains(&n) {
                            return Err(Error::config(format!(
                                "--n {n} must be a positive integer"
                            )));
                        }
                        Ok(ParamState {
                            parameter: n,
                            state: TwoModeState::fock_pair(n as u32)?,
                        })
                    })
                    .collect::<Result<_>>()?
            }
            StateKind::PairCoherent => {
                self.reject(self.lambda.is_some() || self.s.is_some(), "lambda")?;
                self.reject(self.n.is_some(), "n")?;
                self.reject(self.rho.is_some(), "rho")?;
                values(&self.r, 1.05)?
                    .into_iter()
                    .map(|r| {
                        Ok(ParamState {
                            parameter: r,
                            state: TwoModeState::pair_coherent(r)?,
                        })
                    })
                    .collect::<Result<_>>()?
            }
            StateKind::Explicit => {
                self.reject(self.lambda.is_some() || self.s.is_some(), "lambda")?;
                self.reject(self.n.is_some(), "n")?;
                self.reject(self.r.is_some(), "r")?;
                let path = self
                    .rho
                    .as_ref()
                    .ok_or_else(|| Error::config("--state explicit needs --rho <density.json>"))?;
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Error::Io(format!("reading {}: {e}", path.display())))?;
                let dm = DensityMatrix::from_json_str(&text)?;
                vec![ParamState {
                    parameter: 0.0,
                    state: TwoModeState::explicit(dm)?,
                }]
            }
        };
        Ok(out)
    }

    /// The single state described by the flags.
    pub fn single(&self) -> Result<ParamState> {
        let mut all = self.states()?;
        if all.len() != 1 {
            return Err(Error::config(format!(
                "this command takes one parameter value, got {}",
                all.len()
            )));
        }
        Ok(all.remove(0))
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BellMode {
    /// Sign-binned homodyne correlations.
    Tomographic,
    /// Pseudospin correlations.
    Pseudospin,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PseudospinSource {
    /// Closed forms where they agree with the Fock-basis value, the Fock
    /// value otherwise.
    Auto,
    /// Closed forms.
    Closed,
    /// Expectation values in the truncated Fock basis.
    Fock,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProbsMethod {
    Closed,
    /// Quadrant integration of the tomogram.
    Numeric,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct TomogramArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub state: StateArgs,
    /// Mode-1 homodyne angles.
    #[arg(long, default_value = "0")]
    pub theta1: String,
    /// Mode-2 homodyne angles.
    #[arg(long, default_value = "0,pi/4,pi/2")]
    pub theta2: String,
    /// Half-width of the X grid; defaults to twice the quadrature spread.
    #[arg(long)]
    pub x_max: Option<f64>,
    /// Points per axis of the X grid.
    #[arg(long, default_value_t = 9)]
    pub x_points: usize,
    /// Compare with a numerical Radon projection of the Wigner function.
    #[arg(long)]
    pub check_radon: bool,
    /// Largest accepted |closed form - Radon|.
    #[arg(long, default_value_t = 1e-6)]
    pub radon_tol: f64,
    /// Output CSV; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct ProbsArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub state: StateArgs,
    /// Fixed mode-1 angle; θ2 sweeps θ1 + θ2 over [0, 2π].
    #[arg(long, default_value = "0")]
    pub theta1: String,
    #[arg(long, default_value_t = 361)]
    pub points: usize,
    #[arg(long, value_enum, default_value = "closed")]
    pub method: ProbsMethod,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct BellScanArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub state: StateArgs,
    #[arg(long, value_enum, default_value = "tomographic")]
    pub mode: BellMode,
    /// Fixed settings: `t1=..,t1p=..,t2=..,t2p=..` (tomographic) or
    /// `tu=..,tup=..,tv=..,tvp=..` (pseudospin; `tu` omitted means maximized).
    #[arg(long)]
    pub angles: Option<String>,
    /// Maximize over all four angles at every parameter value.
    #[arg(long)]
    pub optimize: bool,
    #[arg(long, value_enum, default_value = "auto")]
    pub source: PseudospinSource,
    /// Fock cutoff for pseudospin expectation values.
    #[arg(long, default_value_t = 64)]
    pub cutoff: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// JSON summary; next to `--out` when absent.
    #[arg(long)]
    pub summary: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct PseudospinArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub state: StateArgs,
    /// `tv=..,tup=..,tvp=..`; defaults to the figure settings of the state.
    #[arg(long)]
    pub angles: Option<String>,
    /// Range of θu as start:stop:step.
    #[arg(long, default_value = "-pi:pi:pi/180")]
    pub theta_u: String,
    #[arg(long, value_enum, default_value = "auto")]
    pub source: PseudospinSource,
    #[arg(long, default_value_t = 64)]
    pub cutoff: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Where to write the pair-coherent closed-form check.
    #[arg(long)]
    pub discrepancy: Option<PathBuf>,
    /// Write the truncated two-mode density matrix used as JSON.
    #[arg(long)]
    pub write_density: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct OptimizeArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub state: StateArgs,
    #[arg(long, value_enum, default_value = "tomographic")]
    pub mode: BellMode,
    #[arg(long, default_value_t = 24)]
    pub grid: usize,
    #[arg(long, default_value_t = 8)]
    pub refine_top: usize,
    #[arg(long, value_enum, default_value = "auto")]
    pub source: PseudospinSource,
    #[arg(long, default_value_t = 64)]
    pub cutoff: usize,
    /// JSON summary; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct SampleArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub state: StateArgs,
    #[arg(long, default_value = "0")]
    pub theta1: String,
    #[arg(long, default_value = "0")]
    pub theta2: String,
    #[arg(long, default_value_t = 100_000)]
    pub count: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 0)]
    pub stream: u64,
    /// Variance inflation of the rejection envelope.
    #[arg(long, default_value_t = crate::sampling::DEFAULT_INFLATION)]
    pub inflation: f64,
    /// Output CSV; a JSON sidecar is written next to it.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SingleModeKind {
    Vacuum,
    Fock,
    Coherent,
    Thermal,
    /// One mode of the squeezed vacuum (`--lambda`).
    Epr,
    /// One mode of the Fock pair superposition (`--n`).
    FockPair,
    /// One mode of the pair-coherent state (`--r`).
    PairCoherent,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReconstructMethod {
    /// Fock-basis density matrix by the kernel integral.
    Kernel,
    /// Wigner function by filtered back-projection.
    Wigner,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct ReconstructArgs {
    #[arg(long, value_enum, default_value = "vacuum")]
    pub state: SingleModeKind,
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    #[arg(long, default_value_t = 0.0)]
    pub alpha_re: f64,
    #[arg(long, default_value_t = 0.0)]
    pub alpha_im: f64,
    #[arg(long, default_value_t = 0.5)]
    pub nbar: f64,
    #[arg(long, default_value_t = 0.54)]
    pub lambda: f64,
    #[arg(long, default_value_t = 1.05)]
    pub r: f64,
    #[arg(long, value_enum, default_value = "kernel")]
    pub method: ReconstructMethod,
    /// Fock cutoff of the kernel reconstruction.
    #[arg(long, default_value_t = 6)]
    pub cutoff: usize,
    /// Phase-space grid of the Wigner reconstruction, as start:stop:step.
    #[arg(long, default_value = "-2:2:0.25")]
    pub grid: String,
    /// Output: density JSON (kernel) or Wigner CSV.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct FiguresArgs {
    #[arg(long, default_value = "figures")]
    pub out_dir: PathBuf,
    /// Points of every angular sweep over a full period.
    #[arg(long, default_value_t = 361)]
    pub points: usize,
    /// Amplitude sweep of the pair-coherent CHSH curve.
    #[arg(long, default_value = "0.3:1.5:0.01")]
    pub r_range: String,
    #[arg(long, default_value_t = 64)]
    pub cutoff: usize,
}

/// Parses arguments, merging a `--config` file under the flags.
pub fn parse_args<I, T>(args: I) -> std::result::Result<Cli, ParseFailure>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let first = Cli::try_parse_from(&argv).map_err(ParseFailure::Clap)?;
    let Some(path) = first.config.clone() else {
        return Ok(first);
    };
    let text = std::fs::read_to_string(&path).map_err(|e| {
        ParseFailure::Config(Error::Io(format!("reading config {}: {e}", path.display())))
    })?;
    let pairs = parse_config_text(&text).map_err(ParseFailure::Config)?;
    let name = first.command.name();
    let root = Cli::command();
    let sub = root.find_subcommand(name).expect("subcommand exists");
    let mut injected: Vec<OsString> = Vec::new();
    for (key, value) in pairs {
        let arg = sub
            .get_arguments()
            .find(|a| a.get_long() == Some(key.as_str()) && key != "config")
            .ok_or_else(|| {
                ParseFailure::Config(Error::config(format!(
                    "config key `{key}` is not an option of `{name}`"
                )))
            })?;
        if matches!(arg.get_action(), ArgAction::SetTrue) {
            let on: bool = value.parse().map_err(|_| {
                ParseFailure::Config(Error::config(format!(
                    "config key `{key}` needs true or false, got `{value}`"
                )))
            })?;
            if on {
                injected.push(format!("--{key}").into());
            }
        } else {
            injected.push(format!("--{key}").into());
            injected.push(value.into());
        }
    }
    let pos = argv
        .iter()
        .position(|a| a.to_str() == Some(name))
        .ok_or_else(|| ParseFailure::Config(Error::config("subcommand not found in arguments")))?;
    let mut merged = argv[..=pos].to_vec();
    merged.extend(injected);
    merged.extend_from_slice(&argv[pos + 1..]);
    let cmd = Cli::command().mut_subcommand(name, |s| s.args_override_self(true));
    let matches = cmd
        .try_get_matches_from(merged)
        .map_err(ParseFailure::Clap)?;
    Cli::from_arg_matches(&matches).map_err(ParseFailure::Clap)
}

#[derive(Debug)]
pub enum ParseFailure {
    Clap(clap::Error),
    Config(Error),
}

/// Runs a parsed command, writing reports to `out` and diagnostics to `err`.
pub fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    commands::execute(cli, out, err)
}

/// Entry point of the binary; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

/// [`run`] with explicit output streams.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match parse_args(args) {
        Ok(c) => c,
        Err(ParseFailure::Clap(e)) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
            } else {
                let _ = write!(out, "{text}");
            }
            return code;
        }
        Err(ParseFailure::Config(e)) => {
            let _ = writeln!(err, "error: {e}");
            return e.exit_code();
        }
    };
    match execute(&cli, out, err) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
