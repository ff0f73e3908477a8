//! Finite-shot estimation of Pauli expectation values.

use num_complex::Complex64;
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::statevector::Statevector;
use crate::error::{Error, Result};
use crate::qubits::{PauliOperator, PauliString};

/// Sample mean and its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub stderr: f64,
}

/// Greedy partition of the non-identity terms into qubit-wise commuting
/// groups, in term order.
pub fn qubitwise_groups(op: &PauliOperator) -> Vec<Vec<(PauliString, f64)>> {
    let mut groups: Vec<Vec<(PauliString, f64)>> = Vec::new();
    for (p, c) in op.terms() {
        if p.is_identity() {
            continue;
        }
        match groups
            .iter_mut()
            .find(|g| g.iter().all(|(q, _)| q.qubitwise_commutes(p)))
        {
            Some(g) => g.push((*p, c.re)),
            None => groups.push(vec![(*p, c.re)]),
        }
    }
    groups
}

/// Estimates `⟨ψ|O|ψ⟩` by measuring each qubit-wise commuting group of `op`
/// `shots` times in its rotated basis.
///
/// The identity coefficient is added exactly. Group standard errors are
/// combined in quadrature. The same `seed` reproduces the same estimate.
pub fn sample_expectation(state: &Statevector, op: &PauliOperator, shots: u64, seed: u64) -> Result<Estimate> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_with(state, op, shots, &mut rng)
}

pub(crate) fn sample_with(
    state: &Statevector,
    op: &PauliOperator,
    shots: u64,
    rng: &mut ChaCha8Rng,
) -> Result<Estimate> {
    if shots == 0 {
        return Err(Error::InvalidArgument("shots must be at least 1".into()));
    }
    if op.n_qubits() != state.n_qubits() {
        return Err(Error::QubitMismatch {
            left: op.n_qubits(),
            right: state.n_qubits(),
        });
    }
    if op.max_imaginary() > 1e-12 {
        return Err(Error::InvalidArgument(
            "sampled operators must have real coefficients".into(),
        ));
    }

    let mut value = op.constant().re;
    let mut variance = 0.0;
    for group in qubitwise_groups(op) {
        let mut rotated = state.clone();
        let (x, z) = group.iter().fold((0u64, 0u64), |(x, z), (p, _)| (x | p.x, z | p.z));
        for q in 0..state.n_qubits() {
            let bit = 1u64 << q;
            match (x & bit != 0, z & bit != 0) {
                (true, false) => rotated.apply_single_qubit(q, hadamard()),
                (true, true) => rotated.apply_single_qubit(q, hadamard_s_dagger()),
                _ => {}
            }
        }
        let probs = rotated.probabilities();
        let dist = WeightedIndex::new(&probs)
            .map_err(|e| Error::InvalidArgument(format!("cannot sample state: {e}")))?;

        let mut sum = 0.0;
        let mut sum_sq = 0.0;
        for _ in 0..shots {
            let b = dist.sample(rng) as u64;
            let shot: f64 = group
                .iter()
                .map(|(p, c)| {
                    if (b & p.support()).count_ones() % 2 == 0 {
                        *c
                    } else {
                        -*c
                    }
                })
                .sum();
            sum += shot;
            sum_sq += shot * shot;
        }
        let n = shots as f64;
        let mean = sum / n;
        value += mean;
        if shots > 1 {
            let var = ((sum_sq - n * mean * mean) / (n - 1.0)).max(0.0);
            variance += var / n;
        }
    }
    Ok(Estimate {
        value,
        stderr: variance.sqrt(),
    })
}

fn hadamard() -> [[Complex64; 2]; 2] {
    let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    [[h, h], [h, -h]]
}

/// `H S†`, taking the `Y` eigenbasis to the computational basis.
fn hadamard_s_dagger() -> [[Complex64; 2]; 2] {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    [
        [Complex64::new(h, 0.0), Complex64::new(0.0, -h)],
        [Complex64::new(h, 0.0), Complex64::new(0.0, h)],
    ]
}
