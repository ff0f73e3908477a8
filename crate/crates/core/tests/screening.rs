use std::path::PathBuf;

use nalgebra::{DMatrix, SymmetricEigen};
use proptest::prelude::*;
use qembed_core::screening::{
    aufbau, downfold, effective_integrals, host_active_space, neumann_series, screened_interaction,
    spectral_radius, static_polarizability, HostSpec,
};
use qembed_core::testing::random_symmetric;
use qembed_core::{ActiveSpace, DoubleCounting, ModelHost, Polarizability};

fn eigh(m: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let e = SymmetricEigen::new(m.clone());
    let mut idx: Vec<usize> = (0..m.nrows()).collect();
    idx.sort_by(|&a, &b| e.eigenvalues[a].total_cmp(&e.eigenvalues[b]));
    let vals = idx.iter().map(|&i| e.eigenvalues[i]).collect();
    let vecs = DMatrix::from_fn(m.nrows(), m.nrows(), |r, c| e.eigenvectors[(r, idx[c])]);
    (vals, vecs)
}

/// Positive definite interaction `s · (A Aᵀ/n + I/2)`.
fn random_interaction(n: usize, seed: u64, s: f64) -> DMatrix<f64> {
    let a = random_symmetric(n, seed ^ 0x5eed);
    (&a * a.transpose() / n as f64 + DMatrix::identity(n, n) * 0.5) * s
}

fn random_host(n: usize, n_electrons: usize, seed: u64, s: f64) -> (ModelHost, DMatrix<f64>) {
    let h = random_symmetric(n, seed);
    let (eps, phi) = eigh(&h);
    let host = ModelHost::new(phi, eps, aufbau(n, n_electrons), random_interaction(n, seed, s)).unwrap();
    (host, h)
}

/// Spin-summed site density of the lowest `n_electrons / 2` orbitals.
fn density(h: &DMatrix<f64>, n_electrons: usize) -> Vec<f64> {
    let (_, phi) = eigh(h);
    (0..h.nrows())
        .map(|p| (0..n_electrons / 2).map(|i| 2.0 * phi[(p, i)].powi(2)).sum())
        .collect()
}

fn is_nsd(m: &DMatrix<f64>, tol: f64) -> bool {
    SymmetricEigen::new(m.clone()).eigenvalues.iter().all(|&l| l <= tol)
}

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

#[test]
fn polarizability_is_the_density_response() {
    for seed in 0..10 {
        let n = 3 + seed as usize % 4;
        let ne = 2 * (1 + seed as usize % (n - 1));
        let (host, h) = random_host(n, ne, seed, 1.0);
        let chi = static_polarizability(&host, None).unwrap().chi;
        let d = 1e-5;
        for q in 0..n {
            let mut plus = h.clone();
            let mut minus = h.clone();
            plus[(q, q)] += d;
            minus[(q, q)] -= d;
            let (np, nm) = (density(&plus, ne), density(&minus, ne));
            for p in 0..n {
                let fd = (np[p] - nm[p]) / (2.0 * d);
                assert!((fd - chi[(p, q)]).abs() < 1e-6, "seed {seed}: chi[{p},{q}] {} vs {fd}", chi[(p, q)]);
            }
        }
    }
}

#[test]
fn polarizability_is_symmetric_nsd_on_100_hosts() {
    for seed in 0..100u64 {
        let n = 2 + seed as usize % 7;
        let ne = 2 * (1 + seed as usize % (n - 1));
        let (host, _) = random_host(n, ne, seed, 1.0);
        let chi = static_polarizability(&host, None).unwrap().chi;
        assert!((&chi - chi.transpose()).abs().max() < 1e-14, "seed {seed}");
        assert!(is_nsd(&chi, 1e-12), "seed {seed}");
    }
}

#[test]
fn excluding_transitions_moves_chi_toward_zero() {
    for seed in 0..40u64 {
        let (host, _) = random_host(6, 6, seed, 1.0);
        let full = static_polarizability(&host, None).unwrap();
        let active = host_active_space(&host, &[2, 3]).unwrap();
        let part = static_polarizability(&host, Some(&active)).unwrap();
        assert_eq!(part.excluded, 1);
        assert_eq!(part.transitions + 1, full.transitions);
        // chi_full ⪯ chi_part ⪯ 0
        assert!(is_nsd(&part.chi, 1e-12));
        assert!(is_nsd(&(&full.chi - &part.chi), 1e-12));
    }
}

#[test]
fn neumann_series_agrees_below_unit_radius() {
    let mut checked = 0;
    for seed in 0..60u64 {
        let (host, _) = random_host(5, 4, seed, 0.3);
        let chi = static_polarizability(&host, None).unwrap();
        let rho = spectral_radius(host.v_bare(), &chi);
        if rho >= 0.9 {
            continue;
        }
        checked += 1;
        let w = screened_interaction(host.v_bare(), &chi).unwrap();
        let series = neumann_series(host.v_bare(), &chi.chi, 800);
        assert!((&w.w - series).abs().max() < 1e-8, "seed {seed}, radius {rho}");
    }
    assert!(checked >= 30, "only {checked} hosts below radius 0.9");
}

#[test]
fn screening_lowers_every_pair_interaction() {
    for seed in 0..20u64 {
        let (host, _) = random_host(6, 6, seed, 1.0);
        let active = host_active_space(&host, &[2, 3]).unwrap();
        let bare = downfold(&host, &active, DoubleCounting::None, false).unwrap().integrals;
        let screened = downfold(&host, &active, DoubleCounting::None, true).unwrap().integrals;
        for i in 0..2 {
            for j in 0..2 {
                assert!(screened.eri(i, j, i, j) <= bare.eri(i, j, i, j) + 1e-14, "seed {seed}");
            }
        }
    }
}

#[test]
fn filled_host_gives_the_bare_projection() {
    let (host, _) = random_host(4, 8, 9, 1.0);
    let active = ActiveSpace::new(vec![1, 2], 2, 2, Vec::new()).unwrap();
    let chi = static_polarizability(&host, None).unwrap();
    assert_eq!(chi.transitions, 0);
    assert_eq!(screened_interaction(host.v_bare(), &chi).unwrap().w, *host.v_bare());
    let a = downfold(&host, &active, DoubleCounting::Hf, true).unwrap();
    let b = downfold(&host, &active, DoubleCounting::Hf, false).unwrap();
    assert_eq!(a.integrals, b.integrals);
}

#[test]
fn bundled_host_is_deterministic_and_screened() {
    let spec = HostSpec::load(data("host8.toml")).unwrap();
    let host = ModelHost::from_spec(&spec).unwrap();
    let again = ModelHost::from_spec(&spec).unwrap();
    assert_eq!(host, again);
    let active = host_active_space(&host, &[3, 4]).unwrap();
    assert_eq!((active.n_alpha(), active.n_beta()), (1, 1));
    let a = downfold(&host, &active, DoubleCounting::Hf, true).unwrap();
    let b = downfold(&again, &active, DoubleCounting::Hf, true).unwrap();
    assert_eq!(a, b);
    assert!(a.report.spectral_radius < 1.0);
    let bare = downfold(&host, &active, DoubleCounting::Hf, false).unwrap();
    assert!(a.integrals.eri(0, 0, 0, 0) < bare.integrals.eri(0, 0, 0, 0));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn effective_integrals_have_eightfold_symmetry(seed in any::<u64>(), n in 3usize..8, m in 1usize..4) {
        let (host, _) = random_host(n, 2 * (n / 2), seed, 0.5);
        // A window of m orbitals straddling the Fermi level.
        let lo = (n / 2).saturating_sub(m / 2 + 1).min(n - m);
        let orbitals: Vec<usize> = (lo..lo + m).collect();
        let active = host_active_space(&host, &orbitals).unwrap();
        let chi = static_polarizability(&host, Some(&active)).unwrap();
        let w = screened_interaction(host.v_bare(), &chi).unwrap();
        for dc in [DoubleCounting::None, DoubleCounting::Hf] {
            let ints = effective_integrals(&host, &active, &w, dc).unwrap();
            let report = ints.validate();
            prop_assert!(report.max_two_body_asymmetry <= 1e-14);
            prop_assert!(report.max_one_body_asymmetry <= 1e-14);
            prop_assert_eq!(ints.e0(), 0.0);
        }
    }

    #[test]
    fn zero_chi_leaves_v_unchanged(seed in any::<u64>(), n in 1usize..7) {
        let v = random_interaction(n, seed, 1.0);
        let chi = Polarizability { chi: DMatrix::zeros(n, n), transitions: 0, excluded: 0 };
        prop_assert_eq!(screened_interaction(&v, &chi).unwrap().w, v);
    }
}
