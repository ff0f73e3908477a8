//! Turns a run configuration into active-space integrals.

use qembed_core::integrals::read_fcidump;
use qembed_core::screening::{downfold, host_active_space, HostSpec, ScreeningReport};
use qembed_core::{ActiveSpace, DoubleCounting, ModelHost, OrbitalIntegrals};

use crate::config::RunConfig;
use crate::error::CliError;

/// Integrals on exactly the active orbitals, with the sector to solve in.
pub struct Problem {
    pub ints: OrbitalIntegrals,
    pub n_alpha: usize,
    pub n_beta: usize,
    /// Active orbital indices in the input's numbering.
    pub orbitals: Vec<usize>,
    pub frozen: Vec<usize>,
    pub screening: Option<ScreeningReport>,
}

impl Problem {
    pub fn ms(&self) -> f64 {
        (self.n_alpha as f64 - self.n_beta as f64) / 2.0
    }

    pub fn n_orb(&self) -> usize {
        self.ints.n_orb()
    }
}

pub fn load(cfg: &RunConfig) -> Result<Problem, CliError> {
    cfg.validate_input()?;
    match (&cfg.input.fcidump, &cfg.input.host) {
        (Some(path), None) => from_fcidump(cfg, path),
        (None, Some(path)) => from_host(cfg, path),
        _ => unreachable!("validate_input admits exactly one input"),
    }
}

fn from_fcidump(cfg: &RunConfig, path: &std::path::Path) -> Result<Problem, CliError> {
    let dump = read_fcidump(path)?;
    let h = &dump.header;
    let twice_alpha = h.nelec as i64 + h.ms2;
    if twice_alpha < 0 || twice_alpha % 2 != 0 || twice_alpha / 2 > h.nelec as i64 {
        return Err(CliError::input(format!(
            "{}: NELEC={} and MS2={} are inconsistent",
            path.display(),
            h.nelec,
            h.ms2
        )));
    }
    let total_alpha = (twice_alpha / 2) as usize;
    let total_beta = h.nelec - total_alpha;
    let spec = &cfg.active;
    let frozen = spec.frozen.clone();
    let orbitals = spec
        .orbitals
        .clone()
        .unwrap_or_else(|| (0..h.norb).filter(|i| !frozen.contains(i)).collect());
    let core = |total: usize, spin: &str| {
        total.checked_sub(frozen.len()).ok_or_else(|| {
            CliError::config(format!("{} frozen orbitals need more {spin} electrons than the file holds", frozen.len()))
        })
    };
    let n_alpha = match spec.n_alpha {
        Some(n) => n,
        None => core(total_alpha, "alpha")?,
    };
    let n_beta = match spec.n_beta {
        Some(n) => n,
        None => core(total_beta, "beta")?,
    };
    let active = ActiveSpace::new(orbitals.clone(), n_alpha, n_beta, frozen.clone())?;
    Ok(Problem {
        ints: dump.integrals.fold(&active)?,
        n_alpha,
        n_beta,
        orbitals,
        frozen,
        screening: None,
    })
}

fn from_host(cfg: &RunConfig, path: &std::path::Path) -> Result<Problem, CliError> {
    let spec = &cfg.active;
    let orbitals = spec
        .orbitals
        .clone()
        .ok_or_else(|| CliError::config("a host input needs active.orbitals"))?;
    if !spec.frozen.is_empty() {
        return Err(CliError::config("frozen orbitals only apply to FCIDUMP input"));
    }
    let dc: DoubleCounting = cfg.screening.dc.parse()?;
    let host = ModelHost::from_spec(&HostSpec::load(path)?)?;
    let mut active = host_active_space(&host, &orbitals)?;
    if spec.n_alpha.is_some() || spec.n_beta.is_some() {
        active = active.with_electrons(
            spec.n_alpha.unwrap_or(active.n_alpha()),
            spec.n_beta.unwrap_or(active.n_beta()),
        )?;
    }
    let out = downfold(&host, &active, dc, cfg.screening.screen)?;
    Ok(Problem {
        ints: out.integrals,
        n_alpha: active.n_alpha(),
        n_beta: active.n_beta(),
        orbitals,
        frozen: Vec::new(),
        screening: Some(out.report),
    })
}
