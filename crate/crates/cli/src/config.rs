//! Run configuration: a TOML document, overridden by command-line flags.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub input: InputSpec,
    pub active: ActiveSpec,
    pub screening: ScreeningSpec,
    pub fci: FciSpec,
    pub mapping: MappingSpec,
    pub vqe: VqeSpec,
    pub output: Option<PathBuf>,
}

/// Exactly one of `fcidump` and `host`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct InputSpec {
    pub fcidump: Option<PathBuf>,
    pub host: Option<PathBuf>,
}

/// For an FCIDUMP, `orbitals` defaults to every orbital not in `frozen` and
/// the electron counts to the header's `NELEC`/`MS2` minus the frozen pairs.
/// For a host, `orbitals` is required and the counts default to the
/// mean-field occupations.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ActiveSpec {
    pub orbitals: Option<Vec<usize>>,
    pub frozen: Vec<usize>,
    pub n_alpha: Option<usize>,
    pub n_beta: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScreeningSpec {
    pub dc: String,
    /// `false` projects the bare interaction.
    pub screen: bool,
}

impl Default for ScreeningSpec {
    fn default() -> Self {
        ScreeningSpec {
            dc: "hf".into(),
            screen: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FciSpec {
    pub states: usize,
    pub method: String,
}

impl Default for FciSpec {
    fn default() -> Self {
        FciSpec {
            states: 4,
            method: "dense".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MappingSpec {
    pub encoding: String,
    /// Defaults to tapering whenever the encoding is parity.
    pub taper: Option<bool>,
}

impl Default for MappingSpec {
    fn default() -> Self {
        MappingSpec {
            encoding: "parity".into(),
            taper: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct VqeSpec {
    /// Determinant label such as `"ab"`; defaults to the lowest diagonal energy.
    pub reference: Option<String>,
    pub screening: String,
    pub optimizer: String,
    /// `"zero"` or `"random"` (uniform in `[-0.5, 0.5)`, seeded by `seed`).
    pub initial: String,
    /// 0 selects the exact backend.
    pub shots: u64,
    pub seed: u64,
    pub tolerance: f64,
    pub max_evaluations: usize,
    pub initial_step: f64,
    pub depolarizing: f64,
}

impl Default for VqeSpec {
    fn default() -> Self {
        VqeSpec {
            reference: None,
            screening: "spin".into(),
            optimizer: "cobyla".into(),
            initial: "zero".into(),
            shots: 0,
            seed: 0,
            tolerance: 1e-6,
            max_evaluations: 500,
            initial_step: 0.5,
            depolarizing: 0.0,
        }
    }
}

impl RunConfig {
    /// Reads a config; relative paths inside it are taken from its directory.
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::config(format!("cannot read config {}: {e}", path.display())))?;
        let mut cfg: RunConfig =
            toml::from_str(&text).map_err(|e| CliError::config(format!("{}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new(""));
        let rebase = |p: &mut Option<PathBuf>| {
            if let Some(x) = p {
                if x.is_relative() {
                    *x = base.join(&*x);
                }
            }
        };
        rebase(&mut cfg.input.fcidump);
        rebase(&mut cfg.input.host);
        rebase(&mut cfg.output);
        Ok(cfg)
    }

    /// Checks that the input mode is unambiguous and its file exists.
    pub fn validate_input(&self) -> Result<(), CliError> {
        match (&self.input.fcidump, &self.input.host) {
            (Some(_), Some(_)) => Err(CliError::config("give either an FCIDUMP or a host, not both")),
            (None, None) => Err(CliError::config("no input: set input.fcidump or input.host")),
            (Some(p), None) | (None, Some(p)) => {
                if p.is_file() {
                    Ok(())
                } else {
                    Err(CliError::input(format!("input file {} does not exist", p.display())))
                }
            }
        }
    }

    pub fn output_dir(&self) -> PathBuf {
        self.output.clone().unwrap_or_else(|| PathBuf::from("."))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_fill_an_empty_document() {
        let cfg: RunConfig = toml::from_str("").unwrap();
        assert_eq!(cfg, RunConfig::default());
        assert_eq!(cfg.vqe.max_evaluations, 500);
        assert_eq!(cfg.screening.dc, "hf");
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(toml::from_str::<RunConfig>("[vqe]\nshot = 10\n").is_err());
        assert!(toml::from_str::<RunConfig>("colour = 1\n").is_err());
    }

    #[test]
    fn both_inputs_is_a_config_error() {
        let cfg = RunConfig {
            input: InputSpec {
                fcidump: Some("a".into()),
                host: Some("b".into()),
            },
            ..RunConfig::default()
        };
        assert_eq!(cfg.validate_input().unwrap_err().code, crate::error::EXIT_CONFIG);
    }
}
