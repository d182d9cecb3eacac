//! Run settings: defaults, an optional TOML file, then command-line flags.

use std::path::{Path, PathBuf};

use clap::Args;
use ffred::algebra::FieldCtx;
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub p: u32,
    pub n: u32,
    /// Coefficients of the `F_q` modulus, low to high.
    pub modulus: Option<Vec<u32>>,
    pub d: u64,
    #[serde(rename = "N")]
    pub int_bound: u64,
    pub s_max: u64,
    pub seed: u64,
    pub out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> RunConfig {
        RunConfig { p: 3, n: 1, modulus: None, d: 3, int_bound: 30, s_max: 6, seed: 1, out: None }
    }
}

/// Flags shared by every subcommand.
#[derive(Args, Clone, Debug, Default)]
pub struct GlobalArgs {
    /// TOML file with run settings; flags override it
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Characteristic
    #[arg(long, global = true)]
    pub p: Option<u32>,
    /// Extension degree of F_q over F_p
    #[arg(long, global = true)]
    pub n: Option<u32>,
    /// Modulus of F_q, comma-separated coefficients low to high
    #[arg(long, global = true, value_delimiter = ',')]
    pub modulus: Option<Vec<u32>>,
    /// Degree bound for ring searches
    #[arg(long, global = true)]
    pub d: Option<u64>,
    /// Integer quantifier bound
    #[arg(long = "N", global = true)]
    pub int_bound: Option<u64>,
    /// Largest coded integer exponent
    #[arg(long = "smax", global = true)]
    pub s_max: Option<u64>,
    /// Sampling seed
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Write the report here instead of stdout
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn load(args: &GlobalArgs) -> Result<RunConfig, CliError> {
        let mut cfg = match &args.config {
            Some(path) => Self::from_file(path)?,
            None => RunConfig::default(),
        };
        macro_rules! take {
            ($($field:ident),*) => { $(if let Some(v) = args.$field.clone() { cfg.$field = v; })* };
        }
        take!(p, n, d, int_bound, s_max, seed);
        if args.modulus.is_some() {
            cfg.modulus = args.modulus.clone();
        }
        if args.out.is_some() {
            cfg.out = args.out.clone();
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn from_file(path: &Path) -> Result<RunConfig, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.d == 0 || self.int_bound == 0 || self.s_max == 0 {
            return Err(CliError::Usage("d, N and smax must be at least 1".into()));
        }
        if let Some(m) = &self.modulus {
            if m.len() as u32 != self.n + 1 {
                return Err(CliError::Usage(format!("a modulus of degree {} does not match n = {}", m.len() as i64 - 1, self.n)));
            }
        }
        self.field().map(|_| ())
    }

    pub fn field(&self) -> Result<FieldCtx, CliError> {
        let f = match &self.modulus {
            Some(m) => FieldCtx::with_modulus(self.p, m),
            None => FieldCtx::new(self.p, self.n),
        };
        f.map_err(|e| CliError::Usage(e.to_string()))
    }

    /// The settings echoed into reports; the output path is left out so
    /// reports do not depend on where they are written.
    pub fn echo(&self) -> serde_json::Value {
        serde_json::json!({
            "p": self.p,
            "n": self.n,
            "modulus": self.modulus,
            "d": self.d,
            "N": self.int_bound,
            "s_max": self.s_max,
            "seed": self.seed,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults() {
        let cfg = RunConfig::load(&GlobalArgs::default()).unwrap();
        assert_eq!((cfg.p, cfg.n, cfg.d, cfg.int_bound, cfg.s_max), (3, 1, 3, 30, 6));
    }

    #[test]
    fn toml_then_flags() {
        let cfg: RunConfig = toml::from_str("p = 5\nN = 12\n").unwrap();
        assert_eq!((cfg.p, cfg.int_bound, cfg.s_max), (5, 12, 6));
        assert!(toml::from_str::<RunConfig>("q = 5").is_err());
        let args = GlobalArgs { p: Some(7), ..GlobalArgs::default() };
        assert_eq!(RunConfig::load(&args).unwrap().p, 7);
    }

    #[test]
    fn rejects_bad_settings() {
        for args in [
            GlobalArgs { p: Some(4), ..GlobalArgs::default() },
            GlobalArgs { d: Some(0), ..GlobalArgs::default() },
            // x^2 - 1 is reducible
            GlobalArgs { n: Some(2), modulus: Some(vec![2, 0, 1]), ..GlobalArgs::default() },
            GlobalArgs { modulus: Some(vec![1, 1]), n: Some(2), ..GlobalArgs::default() },
        ] {
            assert!(RunConfig::load(&args).is_err(), "{args:?}");
        }
        // x^2 + 1 is irreducible over F_3
        let ok = GlobalArgs { n: Some(2), modulus: Some(vec![1, 0, 1]), ..GlobalArgs::default() };
        assert!(RunConfig::load(&ok).is_ok());
    }
}
