//! Run configuration: command-line flags over an optional TOML file over
//! defaults. `RHOP_PRECISION` sets the tier when no flag does.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rhop_core::measures::Contour;
use rhop_core::verify::Suite;
use rhop_core::{Error, Precision, Result};
use serde::Deserialize;

pub const PRECISION_ENV: &str = "RHOP_PRECISION";

#[derive(Parser, Debug)]
#[command(name = "rhop", version, about = "Orthogonal polynomials, their Riemann-Hilbert problems and determinant identities")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub flags: Flags,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    /// Moments of a weight (`k,re,im` on the circle, `j,m` on the line)
    Moments,
    /// Recurrence coefficients `a_n, b_n, k_n` of a line weight
    Oprl,
    /// Verblunsky coefficients by the Levinson recursion
    Opuc,
    /// Hankel determinants `ln D_0 .. ln D_n`
    Hankel,
    /// Toeplitz determinants `ln Δ_0 .. ln Δ_n`
    Toeplitz,
    /// Jacobi matrix (JSON) or its spectral measure (CSV)
    Jacobi,
    /// CMV matrix bands
    Cmv,
    /// Toda flow of a Jacobi matrix
    Toda,
    /// Verblunsky coefficients by the Schur algorithm
    Schur,
    /// Wall polynomials and Pinter-Nevai residuals
    Wall,
    /// Solve (circle) or assemble (line) the orthogonal-polynomial RHP
    RhpSolve,
    /// Assemble the RHP solution from polynomials and check it
    RhpVerify,
    /// One-point function of the polynomial ensemble
    Onepoint,
    /// Relative determinant as a t-integral against brute force
    Reldet,
    /// Strong Szegő limit for e^{s cos θ}
    Szego,
    /// Hankel analog of the strong Szegő limit
    HankelLimit,
    /// Decay of finite-section Toeplitz inverse errors
    TinvDecay,
    /// Cross-method agreement suites
    VerifyAll,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Moments => "moments",
            Command::Oprl => "oprl",
            Command::Opuc => "opuc",
            Command::Hankel => "hankel",
            Command::Toeplitz => "toeplitz",
            Command::Jacobi => "jacobi",
            Command::Cmv => "cmv",
            Command::Toda => "toda",
            Command::Schur => "schur",
            Command::Wall => "wall",
            Command::RhpSolve => "rhp-solve",
            Command::RhpVerify => "rhp-verify",
            Command::Onepoint => "onepoint",
            Command::Reldet => "reldet",
            Command::Szego => "szego",
            Command::HankelLimit => "hankel-limit",
            Command::TinvDecay => "tinv-decay",
            Command::VerifyAll => "verify-all",
        }
    }
}

#[derive(ValueEnum, Deserialize, Debug, Clone, Copy, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(ValueEnum, Deserialize, Debug, Clone, Copy, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum ContourArg {
    Line,
    Circle,
}

impl From<ContourArg> for Contour {
    fn from(c: ContourArg) -> Self {
        match c {
            ContourArg::Line => Contour::Line,
            ContourArg::Circle => Contour::Circle,
        }
    }
}

/// Every setting, as flags; all optional so that the file and defaults can
/// fill in.
#[derive(Args, Deserialize, Debug, Clone, Default)]
#[serde(deny_unknown_fields)]
pub struct Flags {
    /// TOML file with any of the settings below
    #[arg(long, global = true)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// Weight spec, e.g. `onepluscos`, `expcos:s=1`, `sampled:w.csv`
    #[arg(long, global = true)]
    pub weight: Option<String>,
    /// Second weight for `reldet`
    #[arg(long, global = true)]
    pub weight2: Option<String>,
    /// Contour for `sampled:` weights
    #[arg(long, global = true, value_enum)]
    pub contour: Option<ContourArg>,
    /// Degree (or largest degree)
    #[arg(long, global = true)]
    pub n: Option<usize>,
    /// double | extended | exact
    #[arg(long, global = true)]
    pub precision: Option<String>,
    /// Mode cutoff M of the circle RHP solver
    #[arg(long, global = true)]
    pub modes: Option<usize>,
    /// Gauss-Legendre nodes in t
    #[arg(long, global = true)]
    pub tnodes: Option<usize>,
    /// Output file; standard output when absent
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Seed for randomized suites
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Jacobi matrix size for `toda`
    #[arg(long, global = true)]
    pub size: Option<usize>,
    /// Flow time for `toda`
    #[arg(long, global = true)]
    pub t: Option<f64>,
    /// Parameter s of e^{s cos θ} for `szego`
    #[arg(long, global = true)]
    pub s: Option<f64>,
    /// fast | full
    #[arg(long, global = true)]
    pub suite: Option<String>,
    /// Digits of the rational Bessel moments in `szego`
    #[arg(long, global = true)]
    pub digits: Option<u32>,
}

/// Resolved settings for one run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub weight: Option<String>,
    pub weight2: Option<String>,
    pub contour: Contour,
    pub n: Option<usize>,
    pub precision: Precision,
    pub modes: Option<usize>,
    pub tnodes: usize,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub seed: u64,
    pub size: Option<usize>,
    pub t: f64,
    pub s: f64,
    pub suite: Suite,
    pub digits: u32,
}

fn read_file(path: &Path) -> Result<Flags> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read config '{}': {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| Error::Parse(format!("config '{}': {e}", path.display())))
}

impl RunConfig {
    pub fn resolve(command: Command, flags: Flags, env_precision: Option<String>) -> Result<Self> {
        let file = match &flags.config {
            Some(p) => read_file(p)?,
            None => Flags::default(),
        };
        macro_rules! pick {
            ($f:ident) => {
                flags.$f.clone().or(file.$f.clone())
            };
        }
        let precision = match flags.precision.clone().or(env_precision).or(file.precision.clone()) {
            Some(p) => p.parse()?,
            None => Precision::Double,
        };
        let suite = match pick!(suite) {
            Some(s) => s.parse()?,
            None => Suite::Fast,
        };
        let cfg = RunConfig {
            command,
            weight: pick!(weight),
            weight2: pick!(weight2),
            contour: pick!(contour).map(Contour::from).unwrap_or(Contour::Line),
            n: pick!(n),
            precision,
            modes: pick!(modes),
            tnodes: pick!(tnodes).unwrap_or(24),
            out: pick!(out),
            format: pick!(format),
            seed: pick!(seed).unwrap_or(0),
            size: pick!(size),
            t: pick!(t).unwrap_or(1.0),
            s: pick!(s).unwrap_or(1.0),
            suite,
            digits: pick!(digits).unwrap_or(200),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<()> {
        let positive = [("modes", self.modes), ("size", self.size), ("tnodes", Some(self.tnodes))];
        for (name, v) in positive {
            if v == Some(0) {
                return Err(Error::InvalidInput(format!("{name} must be positive")));
            }
        }
        if self.digits == 0 {
            return Err(Error::InvalidInput("digits must be positive".into()));
        }
        if !self.t.is_finite() || !self.s.is_finite() {
            return Err(Error::InvalidInput("t and s must be finite".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flags(args: &[&str]) -> (Command, Flags) {
        let cli = Cli::try_parse_from(args).unwrap();
        (cli.command, cli.flags)
    }

    #[test]
    fn flags_override_file_and_env_overrides_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.toml");
        std::fs::write(&path, "n = 5\nprecision = \"exact\"\nweight = \"gauss\"\n").unwrap();
        let p = path.to_str().unwrap();
        let (c, f) = flags(&["rhop", "oprl", "--config", p, "--n", "7"]);
        let cfg = RunConfig::resolve(c, f, None).unwrap();
        assert_eq!((cfg.n, cfg.precision, cfg.weight.as_deref()), (Some(7), Precision::Exact, Some("gauss")));
        let (c, f) = flags(&["rhop", "oprl", "--config", p]);
        let cfg = RunConfig::resolve(c, f, Some("extended".into())).unwrap();
        assert_eq!(cfg.precision, Precision::Extended);
        let (c, f) = flags(&["rhop", "oprl", "--config", p, "--precision", "double"]);
        assert_eq!(RunConfig::resolve(c, f, Some("extended".into())).unwrap().precision, Precision::Double);
    }

    #[test]
    fn unknown_keys_and_bad_values_are_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.toml");
        std::fs::write(&path, "n = 5\nbogus = 1\n").unwrap();
        let (c, f) = flags(&["rhop", "opuc", "--config", path.to_str().unwrap()]);
        assert!(matches!(RunConfig::resolve(c, f, None), Err(Error::Parse(_))));
        let (c, f) = flags(&["rhop", "opuc", "--modes", "0"]);
        assert!(RunConfig::resolve(c, f, None).is_err());
        let (c, f) = flags(&["rhop", "opuc", "--precision", "quad"]);
        assert!(RunConfig::resolve(c, f, None).is_err());
    }
}
