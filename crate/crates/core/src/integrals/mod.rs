//! One- and two-body coefficients of an active-space Hamiltonian.
//!
//! Two-body integrals are stored in chemist notation `(ij|kl)`, so the
//! Hamiltonian reads
//!
//! ```text
//! H = e0 + Σ_ij,σ t_ij a†_iσ a_jσ + ½ Σ_ijkl,στ (ij|kl) a†_iσ a†_kτ a_lτ a_jσ
//! ```
//!
//! The physicist-ordered coefficient `v_ijkl` of `½ Σ v_ijkl a†_i a†_j a_k a_l`
//! is `(il|jk)`; [`OrbitalIntegrals::physicist`] is the only place that
//! permutation happens.

mod fcidump;

pub use fcidump::{format_fcidump, load_fcidump, read_fcidump, write_fcidump, Fcidump, FcidumpHeader};

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Tolerance for Hermiticity and permutational symmetry checks.
pub const SYMMETRY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct OrbitalIntegrals {
    n_orb: usize,
    e0: f64,
    t: DMatrix<f64>,
    v: Vec<f64>,
}

impl OrbitalIntegrals {
    /// Builds integrals from a one-body matrix and a dense `n⁴` chemist-notation
    /// array indexed `((i*n + j)*n + k)*n + l`.
    pub fn new(e0: f64, t: DMatrix<f64>, v: Vec<f64>) -> Result<Self> {
        let n_orb = t.nrows();
        if n_orb == 0 {
            return Err(Error::InvalidArgument("at least one orbital is required".into()));
        }
        if t.ncols() != n_orb {
            return Err(Error::InvalidArgument(format!(
                "one-body matrix is {}x{}",
                t.nrows(),
                t.ncols()
            )));
        }
        if v.len() != n_orb.pow(4) {
            return Err(Error::InvalidArgument(format!(
                "two-body array has {} entries, expected {}",
                v.len(),
                n_orb.pow(4)
            )));
        }
        let ints = OrbitalIntegrals { n_orb, e0, t, v };
        let report = ints.validate();
        if report.max_one_body_asymmetry > SYMMETRY_TOL {
            return Err(Error::Asymmetric {
                what: "one-body matrix",
                deviation: report.max_one_body_asymmetry,
            });
        }
        if report.max_two_body_asymmetry > SYMMETRY_TOL {
            return Err(Error::Asymmetric {
                what: "two-body integrals",
                deviation: report.max_two_body_asymmetry,
            });
        }
        Ok(ints)
    }

    pub fn zeros(n_orb: usize) -> Self {
        assert!(n_orb > 0, "at least one orbital is required");
        OrbitalIntegrals {
            n_orb,
            e0: 0.0,
            t: DMatrix::zeros(n_orb, n_orb),
            v: vec![0.0; n_orb.pow(4)],
        }
    }

    pub fn builder(n_orb: usize) -> IntegralsBuilder {
        IntegralsBuilder {
            inner: OrbitalIntegrals::zeros(n_orb),
        }
    }

    pub fn n_orb(&self) -> usize {
        self.n_orb
    }

    pub fn e0(&self) -> f64 {
        self.e0
    }

    pub fn one_body(&self) -> &DMatrix<f64> {
        &self.t
    }

    pub fn t(&self, i: usize, j: usize) -> f64 {
        self.t[(i, j)]
    }

    /// Chemist-notation `(ij|kl)`.
    #[inline]
    pub fn eri(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        self.v[self.index(i, j, k, l)]
    }

    /// Physicist-ordered `v_ijkl = (il|jk)`.
    #[inline]
    pub fn physicist(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        self.eri(i, l, j, k)
    }

    /// Raw chemist-notation storage.
    pub fn two_body(&self) -> &[f64] {
        &self.v
    }

    #[inline]
    fn index(&self, i: usize, j: usize, k: usize, l: usize) -> usize {
        let n = self.n_orb;
        ((i * n + j) * n + k) * n + l
    }

    pub fn with_e0(mut self, e0: f64) -> Self {
        self.e0 = e0;
        self
    }

    /// Largest deviations from Hermiticity of `t` and from 8-fold symmetry of `v`.
    pub fn validate(&self) -> SymmetryReport {
        let n = self.n_orb;
        let mut dt: f64 = 0.0;
        for i in 0..n {
            for j in 0..i {
                dt = dt.max((self.t[(i, j)] - self.t[(j, i)]).abs());
            }
        }
        let mut dv: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let x = self.eri(i, j, k, l);
                        for y in [
                            self.eri(j, i, k, l),
                            self.eri(i, j, l, k),
                            self.eri(j, i, l, k),
                            self.eri(k, l, i, j),
                            self.eri(l, k, i, j),
                            self.eri(k, l, j, i),
                            self.eri(l, k, j, i),
                        ] {
                            dv = dv.max((x - y).abs());
                        }
                    }
                }
            }
        }
        SymmetryReport {
            max_one_body_asymmetry: dt,
            max_two_body_asymmetry: dv,
            passed: dt <= SYMMETRY_TOL && dv <= SYMMETRY_TOL,
        }
    }

    /// Folds doubly occupied orbitals into the scalar and one-body parts.
    ///
    /// The surviving orbitals keep their relative order.
    pub fn freeze_core(&self, frozen: &[usize]) -> Result<Self> {
        let n = self.n_orb;
        let mut is_frozen = vec![false; n];
        for &f in frozen {
            if f >= n {
                return Err(Error::IndexOutOfRange { index: f, n_orb: n });
            }
            if is_frozen[f] {
                return Err(Error::InvalidArgument(format!("orbital {f} frozen twice")));
            }
            is_frozen[f] = true;
        }
        let keep: Vec<usize> = (0..n).filter(|&i| !is_frozen[i]).collect();
        if keep.is_empty() {
            return Err(Error::InvalidArgument("no orbitals left after freezing".into()));
        }

        let mut e0 = self.e0;
        for &f in frozen {
            e0 += 2.0 * self.t[(f, f)];
            for &g in frozen {
                e0 += 2.0 * self.eri(f, f, g, g) - self.eri(f, g, g, f);
            }
        }

        let m = keep.len();
        let mut t = DMatrix::zeros(m, m);
        for (a, &i) in keep.iter().enumerate() {
            for (b, &j) in keep.iter().enumerate() {
                let mut x = self.t[(i, j)];
                for &f in frozen {
                    x += 2.0 * self.eri(i, j, f, f) - self.eri(i, f, f, j);
                }
                t[(a, b)] = x;
            }
        }
        let sub = self.restrict(&keep)?;
        Ok(OrbitalIntegrals {
            n_orb: m,
            e0,
            t,
            v: sub.v,
        })
    }

    /// Plain restriction to a subset of orbitals (in the given order).
    /// Dropped orbitals are treated as empty; nothing is folded.
    pub fn restrict(&self, keep: &[usize]) -> Result<Self> {
        let n = self.n_orb;
        for &i in keep {
            if i >= n {
                return Err(Error::IndexOutOfRange { index: i, n_orb: n });
            }
        }
        if keep.is_empty() {
            return Err(Error::InvalidArgument("empty orbital selection".into()));
        }
        let m = keep.len();
        let t = DMatrix::from_fn(m, m, |a, b| self.t[(keep[a], keep[b])]);
        let mut v = vec![0.0; m.pow(4)];
        for (a, &i) in keep.iter().enumerate() {
            for (b, &j) in keep.iter().enumerate() {
                for (c, &k) in keep.iter().enumerate() {
                    for (d, &l) in keep.iter().enumerate() {
                        v[((a * m + b) * m + c) * m + d] = self.eri(i, j, k, l);
                    }
                }
            }
        }
        Ok(OrbitalIntegrals {
            n_orb: m,
            e0: self.e0,
            t,
            v,
        })
    }

    /// Integrals over the orbitals of `active`: frozen orbitals are folded,
    /// the rest of the complement is dropped.
    pub fn fold(&self, active: &ActiveSpace) -> Result<Self> {
        active.check_against(self.n_orb)?;
        let frozen = self.freeze_core(active.frozen_indices())?;
        // Map original indices to positions in the frozen-reduced set.
        let survivors: Vec<usize> = (0..self.n_orb)
            .filter(|i| !active.frozen_indices().contains(i))
            .collect();
        let keep: Vec<usize> = active
            .orbital_indices()
            .iter()
            .map(|i| survivors.iter().position(|s| s == i).expect("validated"))
            .collect();
        frozen.restrict(&keep)
    }
}

/// Mutable construction of [`OrbitalIntegrals`]; every setter writes all
/// symmetry-equivalent entries.
#[derive(Debug, Clone)]
pub struct IntegralsBuilder {
    inner: OrbitalIntegrals,
}

impl IntegralsBuilder {
    pub fn e0(mut self, e0: f64) -> Self {
        self.inner.e0 = e0;
        self
    }

    pub fn set_e0(&mut self, e0: f64) -> &mut Self {
        self.inner.e0 = e0;
        self
    }

    pub fn set_one_body(&mut self, i: usize, j: usize, value: f64) -> &mut Self {
        self.inner.t[(i, j)] = value;
        self.inner.t[(j, i)] = value;
        self
    }

    pub fn one_body(mut self, i: usize, j: usize, value: f64) -> Self {
        self.set_one_body(i, j, value);
        self
    }

    pub fn set_eri(&mut self, i: usize, j: usize, k: usize, l: usize, value: f64) -> &mut Self {
        for (a, b, c, d) in permutations(i, j, k, l) {
            let idx = self.inner.index(a, b, c, d);
            self.inner.v[idx] = value;
        }
        self
    }

    pub fn eri(mut self, i: usize, j: usize, k: usize, l: usize, value: f64) -> Self {
        self.set_eri(i, j, k, l, value);
        self
    }

    pub fn n_orb(&self) -> usize {
        self.inner.n_orb
    }

    pub fn build(self) -> OrbitalIntegrals {
        self.inner
    }
}

/// The eight index tuples equivalent to `(ij|kl)` for real orbitals.
pub(crate) fn permutations(
    i: usize,
    j: usize,
    k: usize,
    l: usize,
) -> [(usize, usize, usize, usize); 8] {
    [
        (i, j, k, l),
        (j, i, k, l),
        (i, j, l, k),
        (j, i, l, k),
        (k, l, i, j),
        (l, k, i, j),
        (k, l, j, i),
        (l, k, j, i),
    ]
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetryReport {
    pub max_one_body_asymmetry: f64,
    pub max_two_body_asymmetry: f64,
    pub passed: bool,
}

/// Orbitals and electron counts of an active space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActiveSpace {
    orbital_indices: Vec<usize>,
    n_alpha: usize,
    n_beta: usize,
    frozen_indices: Vec<usize>,
}

impl ActiveSpace {
    pub fn new(
        orbital_indices: Vec<usize>,
        n_alpha: usize,
        n_beta: usize,
        frozen_indices: Vec<usize>,
    ) -> Result<Self> {
        if orbital_indices.is_empty() {
            return Err(Error::InvalidActiveSpace("no active orbitals".into()));
        }
        if orbital_indices.len() > 32 {
            return Err(Error::InvalidActiveSpace(format!(
                "{} active orbitals exceeds the 32-orbital limit",
                orbital_indices.len()
            )));
        }
        let mut seen = std::collections::BTreeSet::new();
        for &i in orbital_indices.iter().chain(&frozen_indices) {
            if !seen.insert(i) {
                return Err(Error::InvalidActiveSpace(format!(
                    "orbital {i} listed more than once (active and frozen sets must be disjoint)"
                )));
            }
        }
        let n = orbital_indices.len();
        if n_alpha > n || n_beta > n {
            return Err(Error::InvalidActiveSpace(format!(
                "{n_alpha} alpha / {n_beta} beta electrons do not fit in {n} orbitals"
            )));
        }
        Ok(ActiveSpace {
            orbital_indices,
            n_alpha,
            n_beta,
            frozen_indices,
        })
    }

    /// All `n_orb` orbitals active, nothing frozen.
    pub fn full(n_orb: usize, n_alpha: usize, n_beta: usize) -> Result<Self> {
        ActiveSpace::new((0..n_orb).collect(), n_alpha, n_beta, Vec::new())
    }

    pub fn orbital_indices(&self) -> &[usize] {
        &self.orbital_indices
    }

    pub fn frozen_indices(&self) -> &[usize] {
        &self.frozen_indices
    }

    pub fn n_orb(&self) -> usize {
        self.orbital_indices.len()
    }

    pub fn n_alpha(&self) -> usize {
        self.n_alpha
    }

    pub fn n_beta(&self) -> usize {
        self.n_beta
    }

    /// Twice the spin projection, `n_alpha - n_beta`.
    pub fn ms2(&self) -> i64 {
        self.n_alpha as i64 - self.n_beta as i64
    }

    /// Same orbitals with different electron counts.
    pub fn with_electrons(&self, n_alpha: usize, n_beta: usize) -> Result<Self> {
        ActiveSpace::new(
            self.orbital_indices.clone(),
            n_alpha,
            n_beta,
            self.frozen_indices.clone(),
        )
    }

    /// The active space re-indexed onto the folded orbitals `0..n_orb()`.
    pub fn folded(&self) -> ActiveSpace {
        ActiveSpace {
            orbital_indices: (0..self.n_orb()).collect(),
            n_alpha: self.n_alpha,
            n_beta: self.n_beta,
            frozen_indices: Vec::new(),
        }
    }

    pub(crate) fn check_against(&self, n_orb: usize) -> Result<()> {
        for &i in self.orbital_indices.iter().chain(&self.frozen_indices) {
            if i >= n_orb {
                return Err(Error::IndexOutOfRange { index: i, n_orb });
            }
        }
        Ok(())
    }
}
