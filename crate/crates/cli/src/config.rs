//! Run configuration: flags over a key=value file over `DLL_PREC_BITS` over defaults.

use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, ValueEnum};
use dll_core::painleve::Convention;
use dll_core::WeightParams;
use serde::Serialize;

use crate::exit::Failure;

pub const DEFAULT_BITS: u32 = 256;
pub const PREC_ENV: &str = "DLL_PREC_BITS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        <Self as ValueEnum>::from_str(s, true)
    }
}

/// Every flag is optional here so that a config file can supply it.
#[derive(Debug, Clone, Default, Args)]
pub struct RunArgs {
    #[arg(long)]
    pub alpha: Option<u32>,
    #[arg(long, allow_negative_numbers = true)]
    pub mu: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub zeta: Option<f64>,
    #[arg(long)]
    pub t: Option<f64>,
    #[arg(long)]
    pub t0: Option<f64>,
    #[arg(long)]
    pub t1: Option<f64>,
    /// Single degree; `verify` otherwise runs 1..=nmax.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub nmax: Option<usize>,
    #[arg(long)]
    pub kmax: Option<usize>,
    /// Significand bits; defaults to $DLL_PREC_BITS, then 256.
    #[arg(long = "prec-bits")]
    pub prec_bits: Option<u32>,
    /// Identity tolerance for `moments`/`verify`, local step tolerance for `evolve`.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Output file, written atomically; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// key=value file; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// prop11 or cor12.
    #[arg(long)]
    pub convention: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub alpha: Option<u32>,
    pub mu: Option<f64>,
    pub zeta: Option<f64>,
    pub t: Option<f64>,
    pub t0: Option<f64>,
    pub t1: Option<f64>,
    pub n: Option<usize>,
    pub nmax: Option<usize>,
    pub kmax: Option<usize>,
    pub prec_bits: u32,
    pub tol: Option<f64>,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub convention: Convention,
}

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T, Failure> {
    value
        .parse()
        .map_err(|_| Failure::validation(format!("cannot parse {key} = {value:?}")))
}

/// Reads `key=value` lines. `#` starts a comment; keys accept `-` or `_`.
pub fn read_config_file(path: &Path) -> Result<RunArgs, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::validation(format!("cannot read config {}: {e}", path.display())))?;
    let mut args = RunArgs::default();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Failure::validation(format!("{}:{}: expected key=value", path.display(), i + 1))
        })?;
        let key = key.trim().replace('_', "-");
        let value = value.trim();
        match key.as_str() {
            "alpha" => args.alpha = Some(parse(&key, value)?),
            "mu" => args.mu = Some(parse(&key, value)?),
            "zeta" => args.zeta = Some(parse(&key, value)?),
            "t" => args.t = Some(parse(&key, value)?),
            "t0" => args.t0 = Some(parse(&key, value)?),
            "t1" => args.t1 = Some(parse(&key, value)?),
            "n" => args.n = Some(parse(&key, value)?),
            "nmax" => args.nmax = Some(parse(&key, value)?),
            "kmax" => args.kmax = Some(parse(&key, value)?),
            "prec-bits" => args.prec_bits = Some(parse(&key, value)?),
            "tol" => args.tol = Some(parse(&key, value)?),
            "format" => args.format = Some(parse(&key, value)?),
            "out" => args.out = Some(PathBuf::from(value)),
            "convention" => args.convention = Some(value.to_string()),
            other => {
                return Err(Failure::validation(format!(
                    "{}:{}: unknown key {other:?}",
                    path.display(),
                    i + 1
                )))
            }
        }
    }
    Ok(args)
}

impl RunConfig {
    pub fn resolve(flags: RunArgs) -> Result<Self, Failure> {
        Self::resolve_with_env(flags, std::env::var(PREC_ENV).ok())
    }

    pub fn resolve_with_env(flags: RunArgs, env_bits: Option<String>) -> Result<Self, Failure> {
        let file = match &flags.config {
            Some(p) => read_config_file(p)?,
            None => RunArgs::default(),
        };
        let env_bits = env_bits
            .map(|v| parse::<u32>(PREC_ENV, v.trim()))
            .transpose()?;
        let convention = flags
            .convention
            .or(file.convention)
            .map(|c| c.parse::<Convention>().map_err(Failure::from))
            .transpose()?
            .unwrap_or_default();
        Ok(Self {
            alpha: flags.alpha.or(file.alpha),
            mu: flags.mu.or(file.mu),
            zeta: flags.zeta.or(file.zeta),
            t: flags.t.or(file.t),
            t0: flags.t0.or(file.t0),
            t1: flags.t1.or(file.t1),
            n: flags.n.or(file.n),
            nmax: flags.nmax.or(file.nmax),
            kmax: flags.kmax.or(file.kmax),
            prec_bits: flags.prec_bits.or(file.prec_bits).or(env_bits).unwrap_or(DEFAULT_BITS),
            tol: flags.tol.or(file.tol),
            format: flags.format.or(file.format).unwrap_or_default(),
            out: flags.out.or(file.out),
            convention,
        })
    }

    pub fn require<T: Copy>(&self, value: Option<T>, flag: &str) -> Result<T, Failure> {
        value.ok_or_else(|| Failure::usage(format!("missing required --{flag}")))
    }

    /// Weight at `t`, with `alpha`, `mu`, `zeta` required.
    pub fn weight(&self, t: f64) -> Result<WeightParams, Failure> {
        let alpha = self.require(self.alpha, "alpha")?;
        let mu = self.require(self.mu, "mu")?;
        let zeta = self.require(self.zeta, "zeta")?;
        Ok(WeightParams::new(alpha, mu, zeta, t)?)
    }

    /// Decimal digits written for high-precision values.
    pub fn digits(&self) -> usize {
        dll_core::Mp::decimal_digits(self.prec_bits)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    #[test]
    fn flags_override_file_and_env() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(f, "# grid\nalpha = 3\nmu=1 # trailing\nprec_bits = 128\n\nconvention=cor12").unwrap();
        let flags = RunArgs {
            alpha: Some(2),
            config: Some(f.path().to_path_buf()),
            ..Default::default()
        };
        let c = RunConfig::resolve_with_env(flags, Some("512".into())).unwrap();
        assert_eq!(c.alpha, Some(2));
        assert_eq!(c.mu, Some(1.0));
        assert_eq!(c.prec_bits, 128);
        assert_eq!(c.convention, Convention::Reciprocal);
    }

    #[test]
    fn env_sets_the_default_precision() {
        let c = RunConfig::resolve_with_env(RunArgs::default(), Some("512".into())).unwrap();
        assert_eq!(c.prec_bits, 512);
        let c = RunConfig::resolve_with_env(RunArgs::default(), None).unwrap();
        assert_eq!(c.prec_bits, DEFAULT_BITS);
        assert!(RunConfig::resolve_with_env(RunArgs::default(), Some("many".into())).is_err());
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(f, "beta = 1").unwrap();
        let flags = RunArgs {
            config: Some(f.path().to_path_buf()),
            ..Default::default()
        };
        assert_eq!(RunConfig::resolve_with_env(flags, None).unwrap_err().code, 2);
    }
}
