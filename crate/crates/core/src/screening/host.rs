//! Finite model hosts: a site-basis one-body matrix, a density-density
//! interaction `v_pq` and a closed-form mean field.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const ORTHONORMAL_TOL: f64 = 1e-10;
const SYMMETRIC_TOL: f64 = 1e-12;
const SCF_TOL: f64 = 1e-10;
const SCF_MAX_ITERATIONS: usize = 500;
const SCF_MIXING: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MeanField {
    /// Eigenstates of the bare one-body matrix.
    None,
    /// Restricted Hartree-Fock of the site model.
    #[default]
    HartreeFock,
}

impl MeanField {
    pub fn name(&self) -> &'static str {
        match self {
            MeanField::None => "none",
            MeanField::HartreeFock => "hartree-fock",
        }
    }
}

impl fmt::Display for MeanField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MeanField {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "none" | "bare" => Ok(MeanField::None),
            "hartree-fock" | "hf" => Ok(MeanField::HartreeFock),
            _ => Err(Error::InvalidArgument(format!("unknown mean field '{s}'"))),
        }
    }
}

/// `U / sqrt(1 + (d/a)²)` between sites at `positions`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SoftCoulomb {
    pub u: f64,
    #[serde(default = "one")]
    pub a: f64,
    /// Site coordinates; defaults to `0, 1, 2, …`.
    #[serde(default)]
    pub positions: Option<Vec<f64>>,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OnSite {
    Uniform(f64),
    PerSite(Vec<f64>),
}

/// Text description of a host, as read from TOML.
///
/// The one-body matrix is either `one_body` or built from `onsite`,
/// `chain_hopping` (nearest neighbours along the site order) and explicit
/// `hoppings = [[i, j, t], …]`. The interaction is either `v_bare` or `coulomb`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HostSpec {
    pub n_sites: usize,
    pub n_electrons: usize,
    #[serde(default)]
    pub onsite: Option<OnSite>,
    #[serde(default)]
    pub chain_hopping: Option<f64>,
    #[serde(default)]
    pub periodic: bool,
    #[serde(default)]
    pub hoppings: Vec<(usize, usize, f64)>,
    #[serde(default)]
    pub one_body: Option<Vec<Vec<f64>>>,
    #[serde(default)]
    pub v_bare: Option<Vec<Vec<f64>>>,
    #[serde(default)]
    pub coulomb: Option<SoftCoulomb>,
    #[serde(default)]
    pub mean_field: MeanField,
}

impl HostSpec {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        HostSpec::from_toml(&text).map_err(|e| match e {
            Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    fn square(&self, rows: &[Vec<f64>], what: &str) -> Result<DMatrix<f64>> {
        let n = self.n_sites;
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidHost(format!("{what} must be {n}x{n}")));
        }
        Ok(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
    }

    pub fn one_body_matrix(&self) -> Result<DMatrix<f64>> {
        let n = self.n_sites;
        if let Some(rows) = &self.one_body {
            if self.onsite.is_some() || self.chain_hopping.is_some() || !self.hoppings.is_empty() {
                return Err(Error::InvalidHost(
                    "give either one_body or onsite/hopping terms, not both".into(),
                ));
            }
            return self.square(rows, "one_body");
        }
        let mut h = DMatrix::zeros(n, n);
        match &self.onsite {
            Some(OnSite::Uniform(e)) => h.fill_diagonal(*e),
            Some(OnSite::PerSite(e)) => {
                if e.len() != n {
                    return Err(Error::InvalidHost(format!("onsite has {} entries for {n} sites", e.len())));
                }
                for (i, x) in e.iter().enumerate() {
                    h[(i, i)] = *x;
                }
            }
            None => {}
        }
        let mut bonds = self.hoppings.clone();
        if let Some(t) = self.chain_hopping {
            bonds.extend((0..n.saturating_sub(1)).map(|i| (i, i + 1, t)));
            if self.periodic && n > 2 {
                bonds.push((n - 1, 0, t));
            }
        }
        for (i, j, t) in bonds {
            if i >= n || j >= n || i == j {
                return Err(Error::InvalidHost(format!("bad hopping between sites {i} and {j}")));
            }
            h[(i, j)] += t;
            h[(j, i)] += t;
        }
        Ok(h)
    }

    pub fn interaction_matrix(&self) -> Result<DMatrix<f64>> {
        let n = self.n_sites;
        match (&self.v_bare, &self.coulomb) {
            (Some(rows), None) => self.square(rows, "v_bare"),
            (None, Some(c)) => {
                let pos: Vec<f64> = match &c.positions {
                    Some(p) if p.len() == n => p.clone(),
                    Some(p) => {
                        return Err(Error::InvalidHost(format!("{} positions for {n} sites", p.len())))
                    }
                    None => (0..n).map(|i| i as f64).collect(),
                };
                if c.a <= 0.0 || c.u < 0.0 {
                    return Err(Error::InvalidHost("coulomb needs u >= 0 and a > 0".into()));
                }
                Ok(DMatrix::from_fn(n, n, |i, j| {
                    let d = (pos[i] - pos[j]) / c.a;
                    c.u / (1.0 + d * d).sqrt()
                }))
            }
            (None, None) => Ok(DMatrix::zeros(n, n)),
            (Some(_), Some(_)) => Err(Error::InvalidHost("give either v_bare or coulomb, not both".into())),
        }
    }
}

/// Mean-field orbitals of a host and its bare interaction.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelHost {
    orbitals: DMatrix<f64>,
    energies: Vec<f64>,
    occupations: Vec<f64>,
    v_bare: DMatrix<f64>,
    mean_field: MeanField,
    scf_iterations: usize,
}

impl ModelHost {
    /// Validates orthonormal columns, ascending energies, aufbau
    /// occupations in `{0, 1, 2}` and a symmetric interaction.
    pub fn new(
        orbitals: DMatrix<f64>,
        energies: Vec<f64>,
        occupations: Vec<f64>,
        v_bare: DMatrix<f64>,
    ) -> Result<Self> {
        let n_sites = orbitals.nrows();
        let n_orb = orbitals.ncols();
        if n_sites == 0 || n_orb == 0 {
            return Err(Error::InvalidHost("host has no sites or orbitals".into()));
        }
        if energies.len() != n_orb || occupations.len() != n_orb {
            return Err(Error::InvalidHost(format!(
                "{n_orb} orbitals but {} energies and {} occupations",
                energies.len(),
                occupations.len()
            )));
        }
        if v_bare.nrows() != n_sites || v_bare.ncols() != n_sites {
            return Err(Error::InvalidHost(format!("v_bare must be {n_sites}x{n_sites}")));
        }
        let overlap = orbitals.transpose() * &orbitals;
        let dev = (overlap - DMatrix::<f64>::identity(n_orb, n_orb)).abs().max();
        if dev > ORTHONORMAL_TOL {
            return Err(Error::InvalidHost(format!("orbitals are not orthonormal (deviation {dev:.2e})")));
        }
        if energies.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::InvalidHost("orbital energies must be nondecreasing".into()));
        }
        if occupations.iter().any(|&o| o != 0.0 && o != 1.0 && o != 2.0) {
            return Err(Error::InvalidHost("occupations must be 0, 1 or 2".into()));
        }
        if occupations.windows(2).any(|w| w[1] > w[0]) {
            return Err(Error::InvalidHost("occupations must not increase with energy".into()));
        }
        let asym = (&v_bare - v_bare.transpose()).abs().max();
        if asym > SYMMETRIC_TOL {
            return Err(Error::InvalidHost(format!("v_bare is not symmetric (deviation {asym:.2e})")));
        }
        Ok(ModelHost {
            orbitals,
            energies,
            occupations,
            v_bare,
            mean_field: MeanField::None,
            scf_iterations: 0,
        })
    }

    /// Diagonalizes the one-body matrix of `spec`, then (for Hartree-Fock)
    /// iterates the site-density Fock matrix
    /// `F = h + diag(Σ_r v_pr D_rr) − ½ v ∘ D` with linear density mixing.
    pub fn from_spec(spec: &HostSpec) -> Result<Self> {
        let n = spec.n_sites;
        if n == 0 {
            return Err(Error::InvalidHost("n_sites must be positive".into()));
        }
        if spec.n_electrons > 2 * n {
            return Err(Error::InvalidHost(format!(
                "{} electrons do not fit on {n} sites",
                spec.n_electrons
            )));
        }
        let h = spec.one_body_matrix()?;
        let v = spec.interaction_matrix()?;
        if (&h - h.transpose()).abs().max() > SYMMETRIC_TOL {
            return Err(Error::InvalidHost("one-body matrix is not symmetric".into()));
        }
        let occupations = aufbau(n, spec.n_electrons);
        let (mut energies, mut orbitals) = eigh(&h);
        let mut iterations = 0;
        if spec.mean_field == MeanField::HartreeFock {
            let mut density = density_matrix(&orbitals, &occupations);
            loop {
                iterations += 1;
                let (_, trial) = eigh(&fock_matrix(&h, &v, &density));
                let new = density_matrix(&trial, &occupations);
                let change = (&new - &density).abs().max();
                if change < SCF_TOL {
                    (energies, orbitals) = eigh(&fock_matrix(&h, &v, &new));
                    break;
                }
                if iterations >= SCF_MAX_ITERATIONS {
                    return Err(Error::NotConverged {
                        iterations,
                        residual: change,
                    });
                }
                density = &density * (1.0 - SCF_MIXING) + new * SCF_MIXING;
            }
        }
        let mut host = ModelHost::new(orbitals, energies, occupations, v)?;
        host.mean_field = spec.mean_field;
        host.scf_iterations = iterations;
        Ok(host)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        ModelHost::from_spec(&HostSpec::load(path)?)
    }

    pub fn n_sites(&self) -> usize {
        self.orbitals.nrows()
    }

    pub fn n_orbitals(&self) -> usize {
        self.orbitals.ncols()
    }

    /// Column `i` is orbital `i` in the site basis.
    pub fn orbitals(&self) -> &DMatrix<f64> {
        &self.orbitals
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn occupations(&self) -> &[f64] {
        &self.occupations
    }

    pub fn v_bare(&self) -> &DMatrix<f64> {
        &self.v_bare
    }

    pub fn mean_field(&self) -> MeanField {
        self.mean_field
    }

    pub fn scf_iterations(&self) -> usize {
        self.scf_iterations
    }

    pub fn n_electrons(&self) -> f64 {
        self.occupations.iter().sum()
    }
}

/// Spin-summed aufbau filling: 2 per orbital, a trailing 1 for odd counts.
pub fn aufbau(n_orb: usize, n_electrons: usize) -> Vec<f64> {
    (0..n_orb)
        .map(|i| (n_electrons.saturating_sub(2 * i)).min(2) as f64)
        .collect()
}

/// Ascending eigenpairs with a deterministic sign: the largest-magnitude
/// component of every eigenvector is positive.
pub(crate) fn eigh(m: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let eig = SymmetricEigen::new(m.clone());
    let n = m.nrows();
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]).then(a.cmp(&b)));
    let energies = idx.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vecs = DMatrix::zeros(n, n);
    for (c, &i) in idx.iter().enumerate() {
        let mut col = eig.eigenvectors.column(i).clone_owned();
        let lead = col.iter().copied().fold(0.0f64, |m, x| if x.abs() > m.abs() + 1e-12 { x } else { m });
        if lead < 0.0 {
            col.neg_mut();
        }
        vecs.set_column(c, &col);
    }
    (energies, vecs)
}

fn density_matrix(orbitals: &DMatrix<f64>, occupations: &[f64]) -> DMatrix<f64> {
    let n = orbitals.nrows();
    let mut d = DMatrix::zeros(n, n);
    for (i, &o) in occupations.iter().enumerate() {
        if o != 0.0 {
            let c = orbitals.column(i);
            d += (c * c.transpose()) * o;
        }
    }
    d
}

fn fock_matrix(h: &DMatrix<f64>, v: &DMatrix<f64>, d: &DMatrix<f64>) -> DMatrix<f64> {
    let n = h.nrows();
    let mut f = h - v.component_mul(d) * 0.5;
    for p in 0..n {
        f[(p, p)] += (0..n).map(|r| v[(p, r)] * d[(r, r)]).sum::<f64>();
    }
    f
}
