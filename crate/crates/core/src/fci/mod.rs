//! Full configuration interaction in the Slater-determinant basis.

mod davidson;
mod determinant;
mod spin;

use std::fmt::Write as _;
use std::sync::Arc;

use nalgebra::{DMatrix, SymmetricEigen};

pub use davidson::{davidson, DavidsonOptions, DavidsonResult};
pub use determinant::{matrix_element, DeterminantBasis, SlaterDeterminant, MAX_DIMENSION};
pub use spin::{s_squared, spin_defect};

pub(crate) use determinant::{annihilate, create};

use crate::error::{Error, Result};
use crate::integrals::{ActiveSpace, OrbitalIntegrals};
use crate::units::HARTREE_TO_EV;

/// Davidson non-convergence falls back to dense diagonalization up to this size.
pub const DENSE_FALLBACK_LIMIT: usize = 2000;

/// Eigenvalues closer than this are treated as one multiplet when
/// resolving spin within a degenerate block.
const DEGENERACY_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FciMethod {
    #[default]
    Dense,
    Davidson,
}

impl std::str::FromStr for FciMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "dense" => Ok(FciMethod::Dense),
            "davidson" => Ok(FciMethod::Davidson),
            other => Err(Error::InvalidArgument(format!(
                "unknown FCI method '{other}' (expected dense or davidson)"
            ))),
        }
    }
}

/// A state expanded in a determinant basis.
#[derive(Debug, Clone)]
pub struct CiVector {
    pub basis: Arc<DeterminantBasis>,
    pub coeffs: Vec<f64>,
}

impl CiVector {
    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    pub fn s_squared(&self) -> f64 {
        spin::s_squared(&self.basis, &self.coeffs)
    }

    /// Determinants with `|amplitude| >= threshold`, largest first.
    pub fn leading(&self, threshold: f64) -> Vec<(SlaterDeterminant, f64)> {
        let mut out: Vec<(SlaterDeterminant, f64)> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| c.abs() >= threshold)
            .map(|(i, &c)| (self.basis.get(i), c))
            .collect();
        out.sort_by(|a, b| b.1.abs().total_cmp(&a.1.abs()).then(a.0.cmp(&b.0)));
        out
    }
}

#[derive(Debug, Clone)]
pub struct Spectrum {
    pub energies: Vec<f64>,
    pub states: Vec<CiVector>,
    pub s_squared: Vec<f64>,
    /// Spin projection `M_S` of the sector.
    pub sz: f64,
    pub n_alpha: usize,
    pub n_beta: usize,
    pub method: FciMethod,
}

impl Spectrum {
    pub fn ground_energy(&self) -> f64 {
        self.energies[0]
    }

    /// Plain-text report: energies in Hartree and eV, `⟨S²⟩`, and leading
    /// determinants with `|c| >= 0.05`.
    pub fn report(&self) -> String {
        let mut out = String::new();
        let n_orb = self.states.first().map_or(0, |s| s.basis.n_orb());
        let _ = writeln!(
            out,
            "# FCI spectrum  n_alpha={} n_beta={} M_S={} dim={} method={:?}",
            self.n_alpha,
            self.n_beta,
            self.sz,
            self.states.first().map_or(0, |s| s.basis.len()),
            self.method
        );
        let _ = writeln!(
            out,
            "# {:>5} {:>22} {:>22} {:>18} {:>12}",
            "state", "energy_hartree", "energy_ev", "excitation_ev", "s_squared"
        );
        let e0 = self.energies[0];
        for (i, ((e, s2), st)) in self.energies.iter().zip(&self.s_squared).zip(&self.states).enumerate() {
            let _ = writeln!(
                out,
                "  {:>5} {:>22.12} {:>22.10} {:>18.10} {:>12.8}",
                i,
                e,
                e * HARTREE_TO_EV,
                (e - e0) * HARTREE_TO_EV,
                s2
            );
            for (det, c) in st.leading(0.05) {
                let _ = writeln!(out, "          |{}>  {:>+.8}", det.label(n_orb), c);
            }
        }
        out
    }
}

/// Sparse Hamiltonian in compressed-row form over a determinant basis.
pub struct SparseHamiltonian {
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
    diagonal: Vec<f64>,
}

impl SparseHamiltonian {
    pub fn build(basis: &DeterminantBasis, ints: &OrbitalIntegrals) -> Result<Self> {
        check_orbitals(basis, ints)?;
        let dim = basis.len();
        let mut row_ptr = Vec::with_capacity(dim + 1);
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        let mut diagonal = vec![0.0; dim];
        let mut conn = Vec::new();
        row_ptr.push(0);
        for (i, det) in basis.iter().enumerate() {
            basis.connected(&det, &mut conn);
            conn.sort_unstable();
            for &j in &conn {
                let x = matrix_element(&det, &basis.get(j), ints);
                if j == i {
                    diagonal[i] = x;
                }
                if x != 0.0 || j == i {
                    cols.push(j);
                    vals.push(x);
                }
            }
            row_ptr.push(cols.len());
        }
        Ok(SparseHamiltonian {
            row_ptr,
            cols,
            vals,
            diagonal,
        })
    }

    pub fn dim(&self) -> usize {
        self.diagonal.len()
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.diagonal
    }

    pub fn apply(&self, x: &[f64], y: &mut [f64]) {
        for (i, yi) in y.iter_mut().enumerate() {
            let mut acc = 0.0;
            for p in self.row_ptr[i]..self.row_ptr[i + 1] {
                acc += self.vals[p] * x[self.cols[p]];
            }
            *yi = acc;
        }
    }

    /// Stored entries `(column, value)` of row `i`, including the diagonal.
    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        (self.row_ptr[i]..self.row_ptr[i + 1]).map(move |p| (self.cols[p], self.vals[p]))
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let n = self.dim();
        let mut m = DMatrix::zeros(n, n);
        for i in 0..n {
            for p in self.row_ptr[i]..self.row_ptr[i + 1] {
                m[(i, self.cols[p])] = self.vals[p];
            }
        }
        m
    }
}

fn check_orbitals(basis: &DeterminantBasis, ints: &OrbitalIntegrals) -> Result<()> {
    if basis.n_orb() != ints.n_orb() {
        return Err(Error::InvalidArgument(format!(
            "basis spans {} orbitals but integrals span {}",
            basis.n_orb(),
            ints.n_orb()
        )));
    }
    Ok(())
}

/// Dense Hamiltonian matrix over `basis`.
pub fn hamiltonian_matrix(basis: &DeterminantBasis, ints: &OrbitalIntegrals) -> Result<DMatrix<f64>> {
    Ok(SparseHamiltonian::build(basis, ints)?.to_dense())
}

/// Lowest `k` eigenpairs of the active-space Hamiltonian.
///
/// `ints` are folded onto `active` first (frozen orbitals become part of the
/// scalar and one-body terms).
pub fn solve(ints: &OrbitalIntegrals, active: &ActiveSpace, k: usize, method: FciMethod) -> Result<Spectrum> {
    let folded = ints.fold(active)?;
    solve_folded(&folded, active.n_alpha(), active.n_beta(), k, method)
}

/// [`solve`] for integrals that already span exactly the active orbitals.
pub fn solve_folded(
    ints: &OrbitalIntegrals,
    n_alpha: usize,
    n_beta: usize,
    k: usize,
    method: FciMethod,
) -> Result<Spectrum> {
    let basis = Arc::new(DeterminantBasis::new(ints.n_orb(), n_alpha, n_beta)?);
    let dim = basis.len();
    if k == 0 || k > dim {
        return Err(Error::InvalidArgument(format!(
            "requested {k} states but the sector has dimension {dim}"
        )));
    }
    let ham = SparseHamiltonian::build(&basis, ints)?;

    let dense = |ham: &SparseHamiltonian| -> (Vec<f64>, Vec<Vec<f64>>) {
        let eig = SymmetricEigen::new(ham.to_dense());
        let mut idx: Vec<usize> = (0..dim).collect();
        idx.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]).then(a.cmp(&b)));
        let values = idx.iter().map(|&i| eig.eigenvalues[i]).collect();
        let vectors = idx
            .iter()
            .map(|&i| eig.eigenvectors.column(i).iter().copied().collect())
            .collect();
        (values, vectors)
    };

    let (mut values, mut vectors, used) = match method {
        FciMethod::Dense => {
            let (v, x) = dense(&ham);
            (v, x, FciMethod::Dense)
        }
        FciMethod::Davidson => {
            match davidson(|x, y| ham.apply(x, y), ham.diagonal(), k, &DavidsonOptions::default()) {
                Ok(res) => (res.eigenvalues, res.eigenvectors, FciMethod::Davidson),
                Err(Error::NotConverged { .. }) if dim <= DENSE_FALLBACK_LIMIT => {
                    let (v, x) = dense(&ham);
                    (v, x, FciMethod::Dense)
                }
                Err(e) => return Err(e),
            }
        }
    };

    resolve_spin_multiplets(&basis, &values, &mut vectors);
    values.truncate(k);
    vectors.truncate(k);
    for v in &mut vectors {
        fix_phase(v);
    }
    let states: Vec<CiVector> = vectors
        .into_iter()
        .map(|coeffs| CiVector {
            basis: Arc::clone(&basis),
            coeffs,
        })
        .collect();
    let s_squared = states.iter().map(CiVector::s_squared).collect();
    Ok(Spectrum {
        energies: values,
        states,
        s_squared,
        sz: 0.5 * (n_alpha as f64 - n_beta as f64),
        n_alpha,
        n_beta,
        method: used,
    })
}

/// Within each block of degenerate eigenvalues, rotates the eigenvectors so
/// they also diagonalize `S²`.
fn resolve_spin_multiplets(basis: &DeterminantBasis, values: &[f64], vectors: &mut [Vec<f64>]) {
    let mut start = 0;
    while start < values.len() {
        let mut end = start + 1;
        while end < values.len() && (values[end] - values[start]).abs() < DEGENERACY_TOL {
            end += 1;
        }
        if end - start > 1 {
            let block: Vec<&[f64]> = vectors[start..end].iter().map(|v| v.as_slice()).collect();
            let m = spin::s_squared_matrix(basis, &block);
            let d = end - start;
            let eig = SymmetricEigen::new(DMatrix::from_fn(d, d, |i, j| m[i][j]));
            let mut idx: Vec<usize> = (0..d).collect();
            idx.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
            let rotated: Vec<Vec<f64>> = idx
                .iter()
                .map(|&c| {
                    let mut v = vec![0.0; basis.len()];
                    for (r, old) in vectors[start..end].iter().enumerate() {
                        let w = eig.eigenvectors[(r, c)];
                        for (x, y) in v.iter_mut().zip(old) {
                            *x += w * y;
                        }
                    }
                    v
                })
                .collect();
            for (slot, v) in vectors[start..end].iter_mut().zip(rotated) {
                *slot = v;
            }
        }
        start = end;
    }
}

/// Makes the largest-magnitude amplitude positive.
fn fix_phase(v: &mut [f64]) {
    let mut best = 0;
    for (i, x) in v.iter().enumerate() {
        if x.abs() > v[best].abs() + 1e-12 {
            best = i;
        }
    }
    if v[best] < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}
