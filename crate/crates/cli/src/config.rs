//! Command-line flags, config files and the resolved experiment configuration.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use monoapprox::bounds::{DetBranch, BERRY_ESSEEN_C0, DEFAULT_UPPER_CONSTANT};
use monoapprox::wavelet::Mode;
use monoapprox::{Budget, FamilySpec};
use serde::Serialize;

use crate::{CliError, Result};

#[derive(Debug, Parser)]
#[command(name = "monoapprox", version, about = "Approximation of monotone functions: experiments and bounds")]
#[command(args_override_self = true)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fit one algorithm on one family and report its L1 error.
    Approximate(RunArgs),
    /// Sweep m (deterministic) or n (Monte Carlo) and fit the error rate.
    Convergence(RunArgs),
    /// Tabulate the closed-form complexity bounds.
    Bounds(RunArgs),
    /// Run the property suite.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Algo {
    Det,
    Mc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Default, Args)]
pub struct RunArgs {
    /// Dimension.
    #[arg(long)]
    pub d: Option<usize>,
    /// Target accuracy; fractions like `1/15` are accepted.
    #[arg(long, value_parser = parse_real)]
    pub eps: Option<f64>,
    /// Grid size of the deterministic algorithm.
    #[arg(long)]
    pub m: Option<u64>,
    /// Number of samples.
    #[arg(long)]
    pub n: Option<u64>,
    /// Maximal number of active variables.
    #[arg(long)]
    pub k: Option<usize>,
    /// Resolution.
    #[arg(long)]
    pub r: Option<u32>,
    /// Master seed.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub replications: Option<usize>,
    /// Test family, e.g. `boxbslash`, `step:m=3`, `levelset:t=2,b=4,p=0.3`.
    #[arg(long)]
    pub family: Option<String>,
    #[arg(long, value_enum)]
    pub algo: Option<Algo>,
    /// Monte Carlo output mode: linear, hat (sign) or bar (generalized).
    #[arg(long)]
    pub mode: Option<String>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write output here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Deterministic branch of the upper bound: theorem or proof.
    #[arg(long)]
    pub det_branch: Option<String>,
    /// File of `key=value` lines mirroring the long flags.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Probe points for Monte Carlo error estimates.
    #[arg(long)]
    pub probes: Option<usize>,
    /// Cap on the number of samples actually drawn.
    #[arg(long)]
    pub max_samples: Option<u64>,
    /// Cell-enumeration cap; overrides MONOAPPROX_BUDGET_CELLS.
    #[arg(long)]
    pub budget_cells: Option<u64>,
    /// Grid sizes swept by `convergence --algo det`.
    #[arg(long, value_delimiter = ',')]
    pub ms: Option<Vec<u64>>,
    /// Sample sizes swept by `convergence --algo mc`.
    #[arg(long, value_delimiter = ',')]
    pub ns: Option<Vec<u64>>,
    /// Accuracies tabulated by `bounds`.
    #[arg(long, value_delimiter = ',', value_parser = parse_real)]
    pub eps_list: Option<Vec<f64>>,
    /// Dimensions tabulated by `bounds`.
    #[arg(long, value_delimiter = ',')]
    pub d_list: Option<Vec<usize>>,
    /// Constant of the randomized upper-bound branch.
    #[arg(long)]
    pub upper_constant: Option<f64>,
    /// Berry–Esseen constant of the lower-bound certificate.
    #[arg(long)]
    pub c0: Option<f64>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct VerifyArgs {
    /// Run only these properties (comma separated).
    #[arg(long, value_delimiter = ',')]
    pub only: Option<Vec<String>>,
    /// List the property names and exit.
    #[arg(long)]
    pub list: bool,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub budget_cells: Option<u64>,
    #[arg(long)]
    pub config: Option<PathBuf>,
}

/// A real number or a fraction `a/b`.
pub fn parse_real(s: &str) -> std::result::Result<f64, String> {
    let bad = |_| format!("`{s}` is not a number or fraction");
    match s.split_once('/') {
        Some((a, b)) => {
            let a: f64 = a.trim().parse().map_err(bad)?;
            let b: f64 = b.trim().parse().map_err(bad)?;
            Ok(a / b)
        }
        None => s.trim().parse().map_err(bad),
    }
}

/// Parse `key=value` lines; `#` starts a comment.
pub fn parse_config_file(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("config line {}: expected key=value", no + 1)))?;
        let key = k.trim().replace('_', "-");
        if key == "config" {
            return Err(CliError::Usage("config files cannot include other config files".into()));
        }
        out.push((key, v.trim().to_string()));
    }
    Ok(out)
}

fn find_config(args: &[OsString]) -> Option<PathBuf> {
    let mut it = args.iter().skip(2);
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if s == "--config" {
            return it.next().map(PathBuf::from);
        }
        if let Some(p) = s.strip_prefix("--config=") {
            return Some(PathBuf::from(p));
        }
    }
    None
}

/// Parse the command line, splicing in a config file so explicit flags win.
pub fn parse_with_config(args: Vec<OsString>) -> std::result::Result<Cli, clap::Error> {
    let Some(path) = find_config(&args) else {
        return Cli::try_parse_from(args);
    };
    let entries = read_config(&path).map_err(|e| {
        clap::Error::raw(clap::error::ErrorKind::Io, format!("{}: {e}\n", path.display()))
    })?;
    let mut spliced: Vec<OsString> = args[..2.min(args.len())].to_vec();
    for (k, v) in entries {
        spliced.push(format!("--{k}").into());
        spliced.push(v.into());
    }
    spliced.extend(args.into_iter().skip(2));
    Cli::try_parse_from(spliced)
}

fn read_config(path: &Path) -> Result<Vec<(String, String)>> {
    parse_config_file(&std::fs::read_to_string(path)?)
}

/// Everything a run depends on, after defaults are applied. Echoed in JSON output.
#[derive(Debug, Clone, Serialize)]
pub struct ExperimentConfig {
    pub subcommand: &'static str,
    pub d: Option<usize>,
    pub eps: Option<f64>,
    pub m: Option<u64>,
    pub n: Option<u64>,
    pub k: Option<usize>,
    pub r: Option<u32>,
    pub seed: u64,
    pub replications: usize,
    pub family: Option<FamilySpec>,
    pub algo: Algo,
    pub mode: Mode,
    pub format: Format,
    pub det_branch: DetBranch,
    pub probes: usize,
    pub max_samples: u64,
    pub budget_cells: u64,
    pub ms: Option<Vec<u64>>,
    pub ns: Option<Vec<u64>>,
    pub eps_list: Option<Vec<f64>>,
    pub d_list: Option<Vec<usize>>,
    pub upper_constant: f64,
    pub c0: f64,
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

pub const DEFAULT_PROBES: usize = 1 << 16;
pub const DEFAULT_MAX_SAMPLES: u64 = 1 << 20;

impl ExperimentConfig {
    pub fn resolve(subcommand: &'static str, a: &RunArgs) -> Result<Self> {
        let family = a
            .family
            .as_deref()
            .map(str::parse::<FamilySpec>)
            .transpose()?;
        let mode = a.mode.as_deref().unwrap_or("hat").parse::<Mode>()?;
        let det_branch = a.det_branch.as_deref().unwrap_or("theorem").parse()?;
        let budget_cells = a.budget_cells.unwrap_or_else(|| Budget::from_env().cells);
        let replications = a.replications.unwrap_or(1);
        if replications == 0 {
            return Err(CliError::Usage("--replications must be at least 1".into()));
        }
        Ok(Self {
            subcommand,
            d: a.d,
            eps: a.eps,
            m: a.m,
            n: a.n,
            k: a.k,
            r: a.r,
            seed: a.seed.unwrap_or(0),
            replications,
            family,
            algo: a.algo.unwrap_or(Algo::Det),
            mode,
            format: a.format.unwrap_or(Format::Csv),
            det_branch,
            probes: a.probes.unwrap_or(DEFAULT_PROBES),
            max_samples: a.max_samples.unwrap_or(DEFAULT_MAX_SAMPLES),
            budget_cells,
            ms: a.ms.clone(),
            ns: a.ns.clone(),
            eps_list: a.eps_list.clone(),
            d_list: a.d_list.clone(),
            upper_constant: a.upper_constant.unwrap_or(DEFAULT_UPPER_CONSTANT),
            c0: a.c0.unwrap_or(BERRY_ESSEEN_C0),
            out: a.out.clone(),
        })
    }

    pub fn budget(&self) -> Budget {
        Budget::new(self.budget_cells)
    }

    pub fn require_d(&self) -> Result<usize> {
        match self.d {
            Some(0) => Err(CliError::Usage("--d must be positive".into())),
            Some(d) => Ok(d),
            None => Err(CliError::Usage("missing --d".into())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_lines() {
        let kv = parse_config_file("d = 3\n# comment\nfamily=step:m=3  # trailing\n\nmax_samples=10\n").unwrap();
        assert_eq!(
            kv,
            vec![
                ("d".to_string(), "3".to_string()),
                ("family".to_string(), "step:m=3".to_string()),
                ("max-samples".to_string(), "10".to_string()),
            ]
        );
        assert!(parse_config_file("nonsense").is_err());
        assert!(parse_config_file("config=x").is_err());
    }

    #[test]
    fn fractions() {
        assert_eq!(parse_real("1/15").unwrap(), 1.0 / 15.0);
        assert_eq!(parse_real("0.25").unwrap(), 0.25);
        assert!(parse_real("a/2").is_err());
    }

    #[test]
    fn later_flags_override_earlier() {
        let cli = Cli::try_parse_from(["monoapprox", "approximate", "--d", "2", "--d", "3"]).unwrap();
        let Command::Approximate(a) = cli.command else { panic!() };
        assert_eq!(a.d, Some(3));
    }
}
