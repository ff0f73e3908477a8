//! Static constrained-RPA screening of a model host.
//!
//! The environment polarizability is the static sum over occupied `i` and
//! empty `a` host orbitals
//!
//! ```text
//! χ_pq = Σ_ia f_ia · 4/(ε_i − ε_a) · φ_i(p)φ_a(p) φ_i(q)φ_a(q)
//! ```
//!
//! with transitions between two active orbitals left out. The screened
//! interaction is `W = (1 − v χ)⁻¹ v`, and the effective active-space
//! interaction is its projection on orbital-pair densities.

mod host;

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

pub use host::{aufbau, HostSpec, MeanField, ModelHost, OnSite, SoftCoulomb};

use crate::error::{Error, Result};
use crate::integrals::{ActiveSpace, OrbitalIntegrals};

/// Orbital pairs closer than this in energy across the occupation boundary
/// make `χ` ill-defined.
pub const MIN_GAP: f64 = 1e-8;

/// `(1 − vχ)` counts as singular beyond this condition number.
pub const MAX_CONDITION: f64 = 1e12;

#[derive(Debug, Clone, PartialEq)]
pub struct Polarizability {
    pub chi: DMatrix<f64>,
    /// Transitions summed.
    pub transitions: usize,
    /// Transitions skipped because both orbitals are active.
    pub excluded: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScreenedInteraction {
    pub w: DMatrix<f64>,
    /// 2-norm condition number of `1 − vχ`.
    pub condition: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DoubleCounting {
    None,
    #[default]
    Hf,
}

impl DoubleCounting {
    pub fn name(&self) -> &'static str {
        match self {
            DoubleCounting::None => "none",
            DoubleCounting::Hf => "hf",
        }
    }
}

impl fmt::Display for DoubleCounting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DoubleCounting {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "none" => Ok(DoubleCounting::None),
            "hf" => Ok(DoubleCounting::Hf),
            _ => Err(Error::InvalidArgument(format!("unknown double counting '{s}' (expected none or hf)"))),
        }
    }
}

/// Static polarizability of `host`, leaving out transitions whose two
/// orbitals both belong to `exclude`.
///
/// Each transition contributes the rank-one term
/// `(occ_i − occ_a)/2 · 4/(ε_i − ε_a) · u uᵀ`, `u_p = φ_i(p) φ_a(p)`, which is
/// negative semi-definite because `ε_i < ε_a`; the weight is 1 for a
/// doubly occupied `i` and an empty `a`.
pub fn static_polarizability(host: &ModelHost, exclude: Option<&ActiveSpace>) -> Result<Polarizability> {
    let n_orb = host.n_orbitals();
    let mut active = vec![false; n_orb];
    if let Some(space) = exclude {
        for &i in space.orbital_indices() {
            if i >= n_orb {
                return Err(Error::IndexOutOfRange { index: i, n_orb });
            }
            active[i] = true;
        }
    }
    let eps = host.energies();
    let occ = host.occupations();
    let phi = host.orbitals();
    let n = host.n_sites();

    let mut chi = DMatrix::zeros(n, n);
    let mut transitions = 0;
    let mut excluded = 0;
    for i in 0..n_orb {
        for a in i + 1..n_orb {
            if occ[i] <= occ[a] {
                continue;
            }
            let gap = eps[a] - eps[i];
            if gap < MIN_GAP {
                return Err(Error::IllConditionedHost {
                    occupied: i,
                    empty: a,
                    gap,
                });
            }
            if active[i] && active[a] {
                excluded += 1;
                continue;
            }
            let weight = 0.5 * (occ[i] - occ[a]) * 4.0 / (eps[i] - eps[a]);
            let u = phi.column(i).component_mul(&phi.column(a));
            chi.ger(weight, &u, &u, 1.0);
            transitions += 1;
        }
    }
    Ok(Polarizability {
        chi,
        transitions,
        excluded,
    })
}

/// `W = (1 − v χ)⁻¹ v`, symmetrized.
pub fn screened_interaction(v_bare: &DMatrix<f64>, chi: &Polarizability) -> Result<ScreenedInteraction> {
    let n = v_bare.nrows();
    if v_bare.ncols() != n || chi.chi.nrows() != n || chi.chi.ncols() != n {
        return Err(Error::InvalidArgument(format!(
            "v is {}x{} but chi is {}x{}",
            v_bare.nrows(),
            v_bare.ncols(),
            chi.chi.nrows(),
            chi.chi.ncols()
        )));
    }
    let a = DMatrix::<f64>::identity(n, n) - v_bare * &chi.chi;
    let sv = a.clone().singular_values();
    let (smax, smin) = sv.iter().fold((0.0f64, f64::INFINITY), |(hi, lo), &s| (hi.max(s), lo.min(s)));
    let condition = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    if !(condition < MAX_CONDITION) {
        return Err(Error::ScreeningDivergence { condition });
    }
    let w = a
        .lu()
        .solve(v_bare)
        .ok_or(Error::ScreeningDivergence { condition })?;
    let w = (&w + w.transpose()) * 0.5;
    Ok(ScreenedInteraction { w, condition })
}

/// Largest `|λ|` of `v χ`; the Neumann series of `W` converges below 1.
pub fn spectral_radius(v_bare: &DMatrix<f64>, chi: &Polarizability) -> f64 {
    (v_bare * &chi.chi)
        .complex_eigenvalues()
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
}

/// Active-space integrals from a screened interaction.
///
/// `(ij|kl) = Σ_pq φ_i(p)φ_j(p) w_pq φ_k(q)φ_l(q)` and
/// `t_ij = δ_ij ε_i − DC_ij`, where the `hf` double counting is
/// `DC_ij = Σ_kl [(ij|kl) − ½(ik|jl)] D_lk` with `D` the mean-field active
/// occupations. The scalar offset is zero.
pub fn effective_integrals(
    host: &ModelHost,
    active: &ActiveSpace,
    w: &ScreenedInteraction,
    dc: DoubleCounting,
) -> Result<OrbitalIntegrals> {
    let idx = active.orbital_indices();
    for &i in idx {
        if i >= host.n_orbitals() {
            return Err(Error::IndexOutOfRange {
                index: i,
                n_orb: host.n_orbitals(),
            });
        }
    }
    let n_sites = host.n_sites();
    if w.w.nrows() != n_sites {
        return Err(Error::InvalidArgument(format!(
            "screened interaction is {}x{} for a {n_sites}-site host",
            w.w.nrows(),
            w.w.ncols()
        )));
    }
    let m = idx.len();
    let phi = host.orbitals();
    // Pair densities ρ_ij(p) as columns, pair index i*m + j.
    let rho = DMatrix::from_fn(n_sites, m * m, |p, c| phi[(p, idx[c / m])] * phi[(p, idx[c % m])]);
    let g = rho.transpose() * &w.w * &rho;
    // ρ_ij = ρ_ji exactly; averaging with the transpose makes (ij|kl) = (kl|ij) exact too.
    let g = (&g + g.transpose()) * 0.5;
    let mut sym = vec![0.0; m.pow(4)];
    for ij in 0..m * m {
        for kl in 0..m * m {
            sym[ij * m * m + kl] = g[(ij, kl)];
        }
    }
    let eri = |v: &[f64], i: usize, j: usize, k: usize, l: usize| v[((i * m + j) * m + k) * m + l];

    let eps = host.energies();
    let occ = host.occupations();
    let mut t = DMatrix::from_fn(m, m, |i, j| if i == j { eps[idx[i]] } else { 0.0 });
    if dc == DoubleCounting::Hf {
        for i in 0..m {
            for j in 0..m {
                let mut dc_ij = 0.0;
                for k in 0..m {
                    let d = occ[idx[k]];
                    if d != 0.0 {
                        dc_ij += (eri(&sym, i, j, k, k) - 0.5 * eri(&sym, i, k, j, k)) * d;
                    }
                }
                t[(i, j)] -= dc_ij;
            }
        }
        t = (&t + t.transpose()) * 0.5;
    }
    OrbitalIntegrals::new(0.0, t, sym)
}

/// Record of one downfolding run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScreeningReport {
    pub n_sites: usize,
    pub n_electrons: f64,
    pub active_orbitals: Vec<usize>,
    pub active_energies: Vec<f64>,
    pub active_occupations: Vec<f64>,
    pub mean_field: MeanField,
    pub scf_iterations: usize,
    pub one_body_reference: String,
    pub dc_scheme: DoubleCounting,
    pub screened: bool,
    pub transitions: usize,
    pub excluded_transitions: usize,
    pub condition_number: f64,
    pub spectral_radius: f64,
    pub e0: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Downfolded {
    pub integrals: OrbitalIntegrals,
    pub report: ScreeningReport,
}

/// Full pipeline: cRPA `χ`, `W` and effective integrals. With
/// `screen = false` the bare interaction is projected instead.
pub fn downfold(host: &ModelHost, active: &ActiveSpace, dc: DoubleCounting, screen: bool) -> Result<Downfolded> {
    let chi = if screen {
        static_polarizability(host, Some(active))?
    } else {
        Polarizability {
            chi: DMatrix::zeros(host.n_sites(), host.n_sites()),
            transitions: 0,
            excluded: 0,
        }
    };
    let w = screened_interaction(host.v_bare(), &chi)?;
    let integrals = effective_integrals(host, active, &w, dc)?;
    let idx = active.orbital_indices();
    let report = ScreeningReport {
        n_sites: host.n_sites(),
        n_electrons: host.n_electrons(),
        active_orbitals: idx.to_vec(),
        active_energies: idx.iter().map(|&i| host.energies()[i]).collect(),
        active_occupations: idx.iter().map(|&i| host.occupations()[i]).collect(),
        mean_field: host.mean_field(),
        scf_iterations: host.scf_iterations(),
        one_body_reference: format!("{} orbital energies", host.mean_field()),
        dc_scheme: dc,
        screened: screen,
        transitions: chi.transitions,
        excluded_transitions: chi.excluded,
        condition_number: w.condition,
        spectral_radius: spectral_radius(host.v_bare(), &chi),
        e0: integrals.e0(),
    };
    Ok(Downfolded { integrals, report })
}

/// Active space over host orbitals with electron counts taken from the
/// mean-field occupations.
pub fn host_active_space(host: &ModelHost, orbitals: &[usize]) -> Result<ActiveSpace> {
    let mut n_alpha = 0;
    let mut n_beta = 0;
    for &i in orbitals {
        let o = *host.occupations().get(i).ok_or(Error::IndexOutOfRange {
            index: i,
            n_orb: host.n_orbitals(),
        })?;
        if o >= 1.0 {
            n_alpha += 1;
        }
        if o >= 2.0 {
            n_beta += 1;
        }
    }
    ActiveSpace::new(orbitals.to_vec(), n_alpha, n_beta, Vec::new())
}

/// `v + vχv + vχvχv + …` truncated after `terms` products.
pub fn neumann_series(v_bare: &DMatrix<f64>, chi: &DMatrix<f64>, terms: usize) -> DMatrix<f64> {
    let vc = v_bare * chi;
    let mut term = v_bare.clone();
    let mut sum = v_bare.clone();
    for _ in 0..terms {
        term = &vc * term;
        sum += &term;
    }
    sum
}
