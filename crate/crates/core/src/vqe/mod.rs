//! Variational quantum eigensolver on a statevector simulator.

mod ansatz;
mod optimize;
mod run;
mod sampling;
mod statevector;

pub use ansatz::{build_uccsd, DropReason, Excitation, ReferenceState, Screening, UccsdAnsatz};
pub use optimize::{minimize, Algorithm, MinimizeOptions, Minimum};
pub use run::{ground_energy, run_vqe, Backend, InitialPoint, VqeOptions, VqeRecord, VqeTrace};
pub use sampling::{qubitwise_groups, sample_expectation, Estimate};
pub use statevector::{Statevector, MAX_QUBITS};

/// `⟨ψ|O|ψ⟩` for a Hermitian operator.
pub fn expectation(state: &Statevector, op: &crate::qubits::PauliOperator) -> crate::Result<f64> {
    state.expectation(op)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fci::{self, FciMethod, SlaterDeterminant};
    use crate::qubits::{Encoding, ParitySector, QubitMapping};
    use crate::testing::nv_like;
    use crate::OrbitalIntegrals;
    use num_complex::Complex64;

    /// e-manifold of the NV-like model with `a` folded in.
    fn e_manifold() -> OrbitalIntegrals {
        nv_like().freeze_core(&[0]).unwrap()
    }

    fn setup(reference: &str, screening: Screening) -> (crate::PauliOperator, UccsdAnsatz, f64) {
        let ints = e_manifold();
        let mapping = QubitMapping::new(Encoding::Parity, 2, Some(ParitySector::from_electrons(1, 1))).unwrap();
        let ham = mapping.hamiltonian(&ints).unwrap();
        let det = SlaterDeterminant::parse_label(reference).unwrap();
        let ans = build_uccsd(&det, &mapping, screening, Some(&ints)).unwrap();
        let e_fci = fci::solve_folded(&ints, 1, 1, 1, FciMethod::Dense).unwrap().ground_energy();
        (ham, ans, e_fci)
    }

    #[test]
    fn reference_energy_is_the_fci_diagonal() {
        let ints = e_manifold();
        let basis = fci::DeterminantBasis::new(2, 1, 1).unwrap();
        for enc in Encoding::ALL {
            for taper in [false, true] {
                if taper && enc != Encoding::Parity {
                    continue;
                }
                let sector = taper.then(|| ParitySector::from_electrons(1, 1));
                let mapping = QubitMapping::new(enc, 2, sector).unwrap();
                let ham = mapping.hamiltonian(&ints).unwrap();
                for d in basis.iter() {
                    let ans = build_uccsd(&d, &mapping, Screening::Off, None).unwrap();
                    let psi = ans.apply(&vec![0.0; ans.n_params()]).unwrap();
                    let e = expectation(&psi, &ham).unwrap();
                    assert!((e - fci::matrix_element(&d, &d, &ints)).abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn reference_b_has_one_parameter_and_reaches_fci() {
        let (ham, ans, e_fci) = setup("ab", Screening::Symmetry);
        assert_eq!(ans.n_qubits(), 2);
        assert_eq!(ans.n_params(), 1);
        let trace = run_vqe(&ham, &ans, &VqeOptions::default()).unwrap();
        assert!(trace.converged);
        assert!((trace.final_energy - e_fci).abs() < 1e-6);
        assert!(trace.records.iter().all(|r| r.energy >= e_fci - 1e-9));
    }

    #[test]
    fn reference_a_reaches_fci_with_spin_screening() {
        let (ham, ans, e_fci) = setup("20", Screening::Spin);
        assert_eq!(ans.n_params(), 3);
        let trace = run_vqe(&ham, &ans, &VqeOptions::default()).unwrap();
        assert!((trace.final_energy - e_fci).abs() < 1e-6, "{} vs {e_fci}", trace.final_energy);
        assert!(trace.evaluations() <= 500);
        // Only the closed-shell block is coupled to "20".
        let (_, sym, _) = setup("20", Screening::Symmetry);
        assert_eq!(sym.n_params(), 1);
    }

    #[test]
    fn one_parameter_scan_is_a_rotation() {
        let (_, ans, _) = setup("ab", Screening::Symmetry);
        let mapping = QubitMapping::new(Encoding::Parity, 2, Some(ParitySector::from_electrons(1, 1))).unwrap();
        let ba = mapping.basis_state(&SlaterDeterminant::parse_label("ba").unwrap()).unwrap() as usize;
        let ab = ans.reference().bits as usize;
        for k in 0..=20 {
            let theta = k as f64 * std::f64::consts::PI / 20.0;
            let psi = ans.apply(&[theta]).unwrap();
            let p = psi.probabilities();
            assert!((p[ab] - theta.cos().powi(2)).abs() < 1e-12);
            assert!((p[ba] - theta.sin().powi(2)).abs() < 1e-12);
        }
    }

    #[test]
    fn dense_quadratic_form_matches() {
        let ints = crate::testing::random_integrals(2, 8, 1.0);
        let mapping = QubitMapping::new(Encoding::BravyiKitaev, 2, None).unwrap();
        let ham = mapping.hamiltonian(&ints).unwrap();
        let dense = ham.to_dense().unwrap();
        let amps: Vec<Complex64> = (0..16).map(|i| Complex64::new((i as f64).sin(), (i as f64 * 0.7).cos())).collect();
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        let psi = Statevector::from_amplitudes(amps.iter().map(|a| a / norm).collect()).unwrap();
        let v = nalgebra::DVector::from_vec(psi.amplitudes().to_vec());
        let oracle = (v.adjoint() * &dense * &v)[(0, 0)].re;
        assert!((expectation(&psi, &ham).unwrap() - oracle).abs() < 1e-12);
    }

    #[test]
    fn empty_ansatz_is_reported() {
        let mapping = QubitMapping::new(Encoding::JordanWigner, 1, None).unwrap();
        let det = SlaterDeterminant::parse_label("2").unwrap();
        let ans = build_uccsd(&det, &mapping, Screening::Spin, None).unwrap();
        let ham = mapping.hamiltonian(&OrbitalIntegrals::zeros(1)).unwrap();
        assert!(matches!(run_vqe(&ham, &ans, &VqeOptions::default()), Err(crate::Error::EmptyAnsatz)));
    }

    #[test]
    fn depolarizing_biases_toward_the_mixed_energy() {
        let (ham, ans, e_fci) = setup("ab", Screening::Symmetry);
        let opts = VqeOptions {
            depolarizing: 0.1,
            ..VqeOptions::default()
        };
        let trace = run_vqe(&ham, &ans, &opts).unwrap();
        let mixed = ham.constant().re;
        assert!((trace.final_energy - (0.9 * e_fci + 0.1 * mixed)).abs() < 1e-6);
    }
}
