use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qubits::PauliOperator;

/// Largest register simulated by the statevector backend.
pub const MAX_QUBITS: usize = 24;

/// `2ⁿ` amplitudes; basis index `b` has qubit `q` in state `(b >> q) & 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Statevector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

impl Statevector {
    pub fn basis_state(n_qubits: usize, bits: u64) -> Result<Self> {
        if n_qubits > MAX_QUBITS {
            return Err(Error::TooManyQubits {
                qubits: n_qubits,
                limit: MAX_QUBITS,
            });
        }
        let dim = 1usize << n_qubits;
        if bits as usize >= dim {
            return Err(Error::InvalidArgument(format!(
                "basis state {bits:#b} does not fit in {n_qubits} qubits"
            )));
        }
        let mut amps = vec![Complex64::default(); dim];
        amps[bits as usize] = Complex64::new(1.0, 0.0);
        Ok(Statevector { n_qubits, amps })
    }

    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let dim = amps.len();
        if !dim.is_power_of_two() {
            return Err(Error::InvalidArgument(format!("{dim} amplitudes is not a power of two")));
        }
        Ok(Statevector {
            n_qubits: dim.trailing_zeros() as usize,
            amps,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn inner(&self, other: &Statevector) -> Complex64 {
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum()
    }

    /// `|⟨self|other⟩|²`
    pub fn fidelity(&self, other: &Statevector) -> f64 {
        self.inner(other).norm_sqr()
    }

    fn check(&self, op: &PauliOperator) -> Result<()> {
        if op.n_qubits() != self.n_qubits {
            return Err(Error::QubitMismatch {
                left: op.n_qubits(),
                right: self.n_qubits,
            });
        }
        Ok(())
    }

    /// `⟨ψ|O|ψ⟩` with its imaginary part.
    pub fn expectation_complex(&self, op: &PauliOperator) -> Result<Complex64> {
        self.check(op)?;
        let mut total = Complex64::default();
        for (p, c) in op.terms() {
            let mut acc = Complex64::default();
            for (b, amp) in self.amps.iter().enumerate() {
                if amp.re == 0.0 && amp.im == 0.0 {
                    continue;
                }
                let b = b as u64;
                acc += self.amps[(b ^ p.x) as usize].conj() * p.phase_on(b) * amp;
            }
            total += c * acc;
        }
        Ok(total)
    }

    /// Real expectation of a Hermitian operator.
    pub fn expectation(&self, op: &PauliOperator) -> Result<f64> {
        let e = self.expectation_complex(op)?;
        if op.is_hermitian() && e.im.abs() > 1e-10 * (1.0 + e.re.abs()) {
            return Err(Error::InvalidArgument(format!(
                "expectation of a Hermitian operator has imaginary part {:.3e}",
                e.im
            )));
        }
        Ok(e.re)
    }

    pub fn apply_operator(&self, op: &PauliOperator) -> Result<Statevector> {
        self.check(op)?;
        Ok(Statevector {
            n_qubits: self.n_qubits,
            amps: op.apply(&self.amps),
        })
    }

    /// Applies a 2×2 unitary `[[m00, m01], [m10, m11]]` to qubit `q`.
    pub fn apply_single_qubit(&mut self, q: usize, m: [[Complex64; 2]; 2]) {
        let bit = 1usize << q;
        for b in 0..self.amps.len() {
            if b & bit != 0 {
                continue;
            }
            let a0 = self.amps[b];
            let a1 = self.amps[b | bit];
            self.amps[b] = m[0][0] * a0 + m[0][1] * a1;
            self.amps[b | bit] = m[1][0] * a0 + m[1][1] * a1;
        }
    }
}
