use std::fmt::Write as _;

use nalgebra::SymmetricEigen;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::ansatz::UccsdAnsatz;
use super::optimize::{minimize, Algorithm, MinimizeOptions};
use super::sampling::sample_with;
use crate::error::{Error, Result};
use crate::qubits::{PauliOperator, DENSE_QUBIT_LIMIT};
use crate::units::HARTREE_TO_EV;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Backend {
    Exact,
    Shots { shots: u64, seed: u64 },
}

impl Backend {
    pub fn shots(&self) -> u64 {
        match self {
            Backend::Exact => 0,
            Backend::Shots { shots, .. } => *shots,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Backend::Exact => "exact",
            Backend::Shots { .. } => "shots",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InitialPoint {
    #[default]
    Zero,
    /// Uniform in `[-0.5, 0.5)` per parameter.
    Random { seed: u64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct VqeOptions {
    pub backend: Backend,
    pub algorithm: Algorithm,
    pub initial: InitialPoint,
    pub minimize: MinimizeOptions,
    /// Hartree; distance to the exact ground energy counted as converged.
    pub tolerance: f64,
    /// Global depolarizing probability applied to every energy.
    pub depolarizing: f64,
    /// Energy that counts as converged-to; defaults to the lowest eigenvalue
    /// of the whole register, which may lie in another particle-number sector.
    pub reference_energy: Option<f64>,
}

impl Default for VqeOptions {
    fn default() -> Self {
        VqeOptions {
            backend: Backend::Exact,
            algorithm: Algorithm::Cobyla,
            initial: InitialPoint::Zero,
            minimize: MinimizeOptions::default(),
            tolerance: 1e-6,
            depolarizing: 0.0,
            reference_energy: None,
        }
    }
}

/// One objective evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct VqeRecord {
    pub iteration: usize,
    pub params: Vec<f64>,
    pub energy: f64,
    pub best_energy: f64,
    pub stderr: Option<f64>,
    pub shots: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VqeTrace {
    pub records: Vec<VqeRecord>,
    pub final_params: Vec<f64>,
    /// Backend energy at the final parameters (re-sampled for shots).
    pub final_energy: f64,
    pub final_stderr: Option<f64>,
    /// Noiseless energy at the final parameters.
    pub final_exact_energy: f64,
    /// Lowest eigenvalue of the qubit Hamiltonian, when small enough to diagonalize.
    pub exact_ground_energy: Option<f64>,
    pub converged: bool,
    pub exhausted: bool,
    pub backend: Backend,
    pub algorithm: Algorithm,
}

impl VqeTrace {
    pub fn evaluations(&self) -> usize {
        self.records.len()
    }

    /// `iteration,energy_hartree,energy_ev`, plus `stderr_hartree` for shots.
    pub fn to_csv(&self) -> String {
        let shots = matches!(self.backend, Backend::Shots { .. });
        let mut out = String::from("iteration,energy_hartree,energy_ev");
        if shots {
            out.push_str(",stderr_hartree");
        }
        out.push('\n');
        for r in &self.records {
            let _ = write!(out, "{},{:.12},{:.9}", r.iteration, r.energy, r.energy * HARTREE_TO_EV);
            if shots {
                let _ = write!(out, ",{:.12}", r.stderr.unwrap_or(0.0));
            }
            out.push('\n');
        }
        out
    }
}

/// Lowest eigenvalue of a Hermitian qubit operator by dense diagonalization.
pub fn ground_energy(op: &PauliOperator) -> Result<f64> {
    if op.max_imaginary() < 1e-12 {
        let m = op.to_dense_real()?;
        return Ok(SymmetricEigen::new(m).eigenvalues.iter().copied().fold(f64::INFINITY, f64::min));
    }
    // A complex Hermitian H = A + iB has the spectrum of [[A, −B], [B, A]] doubled.
    let m = op.to_dense()?;
    let n = m.nrows();
    let mut real = nalgebra::DMatrix::<f64>::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            let c = m[(i, j)];
            real[(i, j)] = c.re;
            real[(i + n, j + n)] = c.re;
            real[(i, j + n)] = -c.im;
            real[(i + n, j)] = c.im;
        }
    }
    Ok(SymmetricEigen::new(real).eigenvalues.iter().copied().fold(f64::INFINITY, f64::min))
}

/// Optimizes the ansatz energy `⟨ψ(θ)|H|ψ(θ)⟩` and records every evaluation.
pub fn run_vqe(ham: &PauliOperator, ansatz: &UccsdAnsatz, opts: &VqeOptions) -> Result<VqeTrace> {
    if ansatz.is_empty() {
        return Err(Error::EmptyAnsatz);
    }
    if ham.n_qubits() != ansatz.n_qubits() {
        return Err(Error::QubitMismatch {
            left: ham.n_qubits(),
            right: ansatz.n_qubits(),
        });
    }
    if !(0.0..=1.0).contains(&opts.depolarizing) {
        return Err(Error::InvalidArgument(format!(
            "depolarizing probability {} outside [0, 1]",
            opts.depolarizing
        )));
    }
    if let Backend::Shots { shots: 0, .. } = opts.backend {
        return Err(Error::InvalidArgument("shots must be at least 1".into()));
    }

    let p = opts.depolarizing;
    let mixed = ham.constant().re;
    let depolarize = |e: f64| (1.0 - p) * e + p * mixed;

    // Evaluation k of a shots run draws from stream k of the seeded generator.
    let evaluate = |theta: &[f64], stream: u64| -> Result<(f64, Option<f64>)> {
        let psi = ansatz.apply(theta)?;
        match opts.backend {
            Backend::Exact => Ok((depolarize(psi.expectation(ham)?), None)),
            Backend::Shots { shots, seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(stream);
                let est = sample_with(&psi, ham, shots, &mut rng)?;
                Ok((depolarize(est.value), Some((1.0 - p) * est.stderr)))
            }
        }
    };

    let x0: Vec<f64> = match opts.initial {
        InitialPoint::Zero => vec![0.0; ansatz.n_params()],
        InitialPoint::Random { seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..ansatz.n_params()).map(|_| rng.random_range(-0.5..0.5)).collect()
        }
    };

    let mut records: Vec<VqeRecord> = Vec::new();
    let mut failure: Option<Error> = None;
    let objective = |theta: &[f64]| -> f64 {
        if failure.is_some() {
            return f64::INFINITY;
        }
        match evaluate(theta, records.len() as u64) {
            Ok((energy, stderr)) => {
                let best = records.last().map_or(energy, |r| r.best_energy.min(energy));
                records.push(VqeRecord {
                    iteration: records.len() + 1,
                    params: theta.to_vec(),
                    energy,
                    best_energy: best,
                    stderr,
                    shots: opts.backend.shots(),
                });
                energy
            }
            Err(e) => {
                failure = Some(e);
                f64::INFINITY
            }
        }
    };
    let min = minimize(objective, &x0, opts.algorithm, &opts.minimize)?;
    if let Some(e) = failure {
        return Err(e);
    }

    let (final_energy, final_stderr) = evaluate(&min.x, u64::MAX)?;
    let final_exact_energy = depolarize(ansatz.apply(&min.x)?.expectation(ham)?);
    let exact_ground_energy = if ham.n_qubits() <= DENSE_QUBIT_LIMIT {
        Some(ground_energy(ham)?)
    } else {
        None
    };
    let converged = opts.reference_energy.or(exact_ground_energy).is_some_and(|e_ref| {
        let window = match final_stderr {
            Some(s) => opts.tolerance.max(5.0 * s),
            None => opts.tolerance,
        };
        (final_energy - e_ref).abs() <= window
    });

    Ok(VqeTrace {
        records,
        final_params: min.x,
        final_energy,
        final_stderr,
        final_exact_energy,
        exact_ground_energy,
        converged,
        exhausted: min.exhausted,
        backend: opts.backend,
        algorithm: opts.algorithm,
    })
}
