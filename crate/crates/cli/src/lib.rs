//! `nongauss` command-line interface: CSV/JSON emission for the measure,
//! SWAP-test, negativity, sample-bound and shadow experiments.

mod commands;
pub mod grid;
pub mod output;
mod selftest;
pub mod state;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use grid::Grid;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("config {path}: {reason}")]
    Config { path: PathBuf, reason: String },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Core(#[from] nongauss_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if e.is_numerical() => 3,
            _ => 2,
        }
    }
}

impl From<grid::GridError> for CliError {
    fn from(e: grid::GridError) -> Self {
        CliError::Usage(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(name = "nongauss", version, about = "Beam-splitter non-Gaussianity, SWAP-test, cubic-phase and shadow experiments")]
struct Cli {
    /// JSON config file; sections keyed by subcommand, flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// CSV of N_Eα for a family of input states: family,param,mean_photon,alpha,value
    Measure(MeasureArgs),
    /// JSON report of a simulated PNR SWAP test
    SwapSim(SwapArgs),
    /// CSV of the cubic-phase Wigner negativity: x,W,err
    Negativity(NegativityArgs),
    /// CSV of the negativity-estimation sample lower bound: x,r_opt,mean_photon,dr,N
    Bound(BoundArgs),
    /// JSON purity estimate from homodyne classical shadows
    Shadow(ShadowArgs),
    /// Run the built-in invariant checks
    Selftest,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// Fock states |n⟩; param = n
    Fock,
    /// (|0⟩ + |n⟩)/√2; param = n
    ZeroN,
    /// Minimal-energy cubic phase state; param = x = γe^{3r}
    Cubic,
    /// Even cat ∝ |α⟩ + |−α⟩; param = α
    Cat,
}

impl Family {
    fn name(self) -> &'static str {
        match self {
            Family::Fock => "fock",
            Family::ZeroN => "zero-n",
            Family::Cubic => "cubic",
            Family::Cat => "cat",
        }
    }
}

macro_rules! merge {
    ($a:ident, $b:ident; $($f:ident),*) => {
        Self { $($f: $a.$f.or($b.$f)),* }
    };
}

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
struct MeasureArgs {
    #[arg(long)]
    family: Option<Family>,
    /// Parameter grid: `a..b`, `start:stop:count[:log]` or a list.
    #[arg(long, visible_alias = "n", allow_hyphen_values = true)]
    #[serde(alias = "n")]
    param: Option<Grid>,
    /// Rényi order(s) [default: 2]
    #[arg(long)]
    alpha: Option<Grid>,
    /// Per-mode photon-number cutoff [default: 60]
    #[arg(long)]
    cutoff: Option<usize>,
    /// Squeezing of the cat family [default: 0]
    #[arg(long, allow_hyphen_values = true)]
    squeeze: Option<f64>,
}

impl MeasureArgs {
    fn merge(self, cfg: Self) -> Self {
        merge!(self, cfg; family, param, alpha, cutoff, squeeze)
    }
}

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
struct SwapArgs {
    /// Input state, e.g. `fock:1`, `coherent:1,0.5`, `cat:2`, `cubic:0.1,0`, `thermal:0.5`.
    #[arg(long)]
    state: Option<String>,
    /// Second state: run the plain SWAP test on state ⊗ with instead of the
    /// four-copy non-Gaussianity protocol.
    #[arg(long)]
    with: Option<String>,
    /// Detector cap M [default: 10]
    #[arg(long = "M")]
    #[serde(rename = "M")]
    m: Option<usize>,
    /// Number of shots [default: 100000]
    #[arg(long)]
    shots: Option<usize>,
    /// [default: 0]
    #[arg(long)]
    seed: Option<u64>,
    /// [default: 60]
    #[arg(long)]
    cutoff: Option<usize>,
}

impl SwapArgs {
    fn merge(self, cfg: Self) -> Self {
        merge!(self, cfg; state, with, m, shots, seed, cutoff)
    }
}

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
struct NegativityArgs {
    /// Grid of x = γe^{3r} [default: 0.01:100:41:log]
    #[arg(long)]
    x: Option<Grid>,
}

impl NegativityArgs {
    fn merge(self, cfg: Self) -> Self {
        merge!(self, cfg; x)
    }
}

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
struct BoundArgs {
    /// Grid of x = γe^{3r} [default: 1:40:20:log]
    #[arg(long)]
    x: Option<Grid>,
    /// Additive error ε [default: 0.1]
    #[arg(long)]
    epsilon: Option<f64>,
    /// Failure probability δ [default: 0.05]
    #[arg(long)]
    delta: Option<f64>,
}

impl BoundArgs {
    fn merge(self, cfg: Self) -> Self {
        merge!(self, cfg; x, epsilon, delta)
    }
}

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
struct ShadowArgs {
    /// Input state (see swap-sim).
    #[arg(long)]
    state: Option<String>,
    /// Number of homodyne samples [default: 100000]
    #[arg(long = "N")]
    #[serde(rename = "N")]
    n: Option<usize>,
    /// Photon-number cap M of the reconstruction [default: 10]
    #[arg(long = "M")]
    #[serde(rename = "M")]
    m: Option<usize>,
    /// [default: 0]
    #[arg(long)]
    seed: Option<u64>,
    /// [default: 60]
    #[arg(long)]
    cutoff: Option<usize>,
}

impl ShadowArgs {
    fn merge(self, cfg: Self) -> Self {
        merge!(self, cfg; state, n, m, seed, cutoff)
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
struct ConfigFile {
    measure: Option<MeasureArgs>,
    swap_sim: Option<SwapArgs>,
    negativity: Option<NegativityArgs>,
    bound: Option<BoundArgs>,
    shadow: Option<ShadowArgs>,
}

fn load_config(path: &Path) -> Result<ConfigFile, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.into(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|e| CliError::Config {
        path: path.into(),
        reason: e.to_string(),
    })
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var("NONGAUSS_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("NONGAUSS_THREADS = `{v}` is not a nonnegative integer")))?;
    if n > 0 {
        // a pool may already exist when run() is called twice in one process
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(())
}

/// The emitted text and the exit code it carries (nonzero only for
/// failed self-tests).
fn execute(cli: Cli) -> Result<(String, i32), CliError> {
    configure_threads()?;
    let cfg = match &cli.config {
        Some(p) => load_config(p)?,
        None => ConfigFile::default(),
    };
    let text = match cli.command {
        Command::Measure(a) => commands::measure(a.merge(cfg.measure.unwrap_or_default())),
        Command::SwapSim(a) => commands::swap_sim(a.merge(cfg.swap_sim.unwrap_or_default())),
        Command::Negativity(a) => commands::negativity(a.merge(cfg.negativity.unwrap_or_default())),
        Command::Bound(a) => commands::bound(a.merge(cfg.bound.unwrap_or_default())),
        Command::Shadow(a) => commands::shadow(a.merge(cfg.shadow.unwrap_or_default())),
        Command::Selftest => {
            let (text, failed) = selftest::run();
            return Ok((text, i32::from(failed > 0)));
        }
    }?;
    Ok((text, 0))
}

/// Parses `argv` (program name first), runs the command and returns the
/// process exit code: 0 success, 1 self-test failure, 2 invalid
/// arguments or config, 3 numerical failure.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let out = cli.out.clone();
    let result = execute(cli).and_then(|(text, code)| match &out {
        Some(p) => std::fs::write(p, text)
            .map(|_| code)
            .map_err(|source| CliError::Io { path: p.clone(), source }),
        None => {
            print!("{text}");
            Ok(code)
        }
    });
    result.unwrap_or_else(|e| {
        eprintln!("error: {e}");
        e.exit_code()
    })
}
