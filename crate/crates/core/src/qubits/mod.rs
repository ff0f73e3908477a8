//! Qubit representations of the active-space Hamiltonian.
//!
//! Qubit `p` carries spin-orbital `p` (alpha block first), so with the parity
//! encoding qubit `n_orb - 1` stores the alpha-electron parity and qubit
//! `2 n_orb - 1` the total parity. [`taper_parity`] removes those two.

mod encoding;
mod pauli;

use std::collections::HashMap;

use num_complex::Complex64;

pub use encoding::{Encoding, FermionEncoding};
pub use pauli::{PauliOperator, PauliString, DENSE_QUBIT_LIMIT, SIMPLIFY_TOL};

pub(crate) use pauli::compress;

use crate::error::{Error, Result};
use crate::fci::SlaterDeterminant;
use crate::integrals::{ActiveSpace, OrbitalIntegrals};

/// Qubit Hamiltonian of `ints` folded onto `active`.
pub fn map_hamiltonian(ints: &OrbitalIntegrals, active: &ActiveSpace, encoding: Encoding) -> Result<PauliOperator> {
    let folded = ints.fold(active)?;
    Ok(map_folded(&folded, encoding))
}

/// Qubit Hamiltonian on `2 n_orb` qubits for integrals over exactly the
/// orbitals to be mapped.
pub fn map_folded(ints: &OrbitalIntegrals, encoding: Encoding) -> PauliOperator {
    let n = ints.n_orb();
    let n_modes = 2 * n;
    let enc = FermionEncoding::new(encoding, n_modes);
    let mut acc: HashMap<PauliString, Complex64> = HashMap::new();
    let mut push = |terms: Vec<(PauliString, Complex64)>, coef: f64| {
        for (p, c) in terms {
            *acc.entry(p).or_default() += c * coef;
        }
    };

    push(vec![(PauliString::IDENTITY, Complex64::new(1.0, 0.0))], ints.e0());

    for spin in 0..2 {
        let off = spin * n;
        for i in 0..n {
            for j in 0..n {
                let t = ints.t(i, j);
                if t != 0.0 {
                    push(enc.product(&[(i + off, true), (j + off, false)]), t);
                }
            }
        }
    }

    // ½ Σ (ij|kl) a†_iσ a†_kτ a_lτ a_jσ
    for s in 0..2 {
        for u in 0..2 {
            let (os, ou) = (s * n, u * n);
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        for l in 0..n {
                            let v = ints.eri(i, j, k, l);
                            if v == 0.0 {
                                continue;
                            }
                            if s == u && (i == k || j == l) {
                                continue;
                            }
                            push(
                                enc.product(&[(i + os, true), (k + ou, true), (l + ou, false), (j + os, false)]),
                                0.5 * v,
                            );
                        }
                    }
                }
            }
        }
    }

    let mut terms: Vec<(PauliString, Complex64)> = acc.into_iter().collect();
    terms.sort_by(|a, b| a.0.cmp(&b.0));
    PauliOperator::from_terms(n_modes, terms).simplify()
}

/// Eigenvalues of `Z` on the alpha- and beta-number parity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ParitySector {
    /// `(-1)^{N_α}`
    pub alpha: i8,
    /// `(-1)^{N_β}`
    pub beta: i8,
}

impl ParitySector {
    pub fn new(alpha: i8, beta: i8) -> Result<Self> {
        if alpha.abs() != 1 || beta.abs() != 1 {
            return Err(Error::InvalidArgument(format!(
                "parities must be +1 or -1, got {alpha} and {beta}"
            )));
        }
        Ok(ParitySector { alpha, beta })
    }

    pub fn from_electrons(n_alpha: usize, n_beta: usize) -> Self {
        let p = |n: usize| if n % 2 == 0 { 1 } else { -1 };
        ParitySector {
            alpha: p(n_alpha),
            beta: p(n_beta),
        }
    }
}

/// Mask of the two parity qubits of a `n_qubits` parity-encoded register.
pub fn parity_qubits(n_qubits: usize) -> u64 {
    (1u64 << (n_qubits / 2 - 1)) | (1u64 << (n_qubits - 1))
}

/// Replaces the alpha-parity qubit `n/2 - 1` and the total-parity qubit
/// `n - 1` of a parity-encoded operator by their eigenvalues.
pub fn taper_parity(op: &PauliOperator, sector: ParitySector) -> Result<PauliOperator> {
    let n = op.n_qubits();
    if n < 2 || n % 2 != 0 {
        return Err(Error::InvalidArgument(format!(
            "parity tapering needs an even register of at least 2 qubits, got {n}"
        )));
    }
    let alpha_q = n / 2 - 1;
    let total = f64::from(sector.alpha * sector.beta);
    op.substitute_z(parity_qubits(n), |q| {
        if q == alpha_q {
            f64::from(sector.alpha)
        } else {
            total
        }
    })
}

/// Basis index of a parity-encoded state after the two parity qubits are removed.
pub fn taper_basis_state(bits: u64, n_qubits: usize) -> u64 {
    compress(bits, parity_qubits(n_qubits))
}

/// Encoding of one active space onto qubits, optionally parity-tapered.
#[derive(Debug, Clone)]
pub struct QubitMapping {
    n_orb: usize,
    sector: Option<ParitySector>,
    enc: FermionEncoding,
}

impl QubitMapping {
    /// Tapering needs the parity encoding; the sector fixes which parity
    /// eigenvalues replace the two removed qubits.
    pub fn new(encoding: Encoding, n_orb: usize, sector: Option<ParitySector>) -> Result<Self> {
        if sector.is_some() && encoding != Encoding::Parity {
            return Err(Error::InvalidArgument(format!(
                "parity tapering requires the parity encoding, not {encoding}"
            )));
        }
        if n_orb == 0 || 2 * n_orb > 64 {
            return Err(Error::InvalidArgument(format!("cannot map {n_orb} orbitals")));
        }
        Ok(QubitMapping {
            n_orb,
            sector,
            enc: FermionEncoding::new(encoding, 2 * n_orb),
        })
    }

    pub fn encoding(&self) -> Encoding {
        self.enc.kind()
    }

    pub fn n_orb(&self) -> usize {
        self.n_orb
    }

    pub fn sector(&self) -> Option<ParitySector> {
        self.sector
    }

    pub fn n_qubits(&self) -> usize {
        if self.sector.is_some() {
            2 * self.n_orb - 2
        } else {
            2 * self.n_orb
        }
    }

    fn finish(&self, op: PauliOperator) -> Result<PauliOperator> {
        match self.sector {
            Some(s) => taper_parity(&op, s),
            None => Ok(op),
        }
    }

    /// Maps integrals already folded onto the `n_orb` active orbitals.
    pub fn hamiltonian(&self, folded: &OrbitalIntegrals) -> Result<PauliOperator> {
        if folded.n_orb() != self.n_orb {
            return Err(Error::InvalidArgument(format!(
                "integrals have {} orbitals, mapping expects {}",
                folded.n_orb(),
                self.n_orb
            )));
        }
        self.finish(map_folded(folded, self.enc.kind()))
    }

    /// `Σ coeff · Π ladder` over spin-orbitals, mapped and tapered.
    pub fn fermion_operator(&self, terms: &[(f64, Vec<(usize, bool)>)]) -> Result<PauliOperator> {
        self.finish(self.enc.fermion_operator(terms))
    }

    /// Qubit basis index holding a determinant.
    pub fn basis_state(&self, det: &SlaterDeterminant) -> Result<u64> {
        let occ = det.spin_orbitals(self.n_orb);
        let bits = self.enc.encode_occupation(occ);
        match self.sector {
            None => Ok(bits),
            Some(s) => {
                let found = ParitySector::from_electrons(det.alpha.count_ones() as usize, det.beta.count_ones() as usize);
                if found != s {
                    return Err(Error::InvalidArgument(format!(
                        "determinant {} lies outside the tapered parity sector",
                        det.label(self.n_orb)
                    )));
                }
                Ok(taper_basis_state(bits, 2 * self.n_orb))
            }
        }
    }
}
