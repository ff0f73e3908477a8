//! Seeded random instances shared by unit tests, integration tests and benches.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::integrals::OrbitalIntegrals;

/// Real integrals with full 8-fold symmetry, entries uniform in `[-scale, scale]`
/// and a diagonal-dominant Coulomb part so spectra look molecular.
pub fn random_integrals(n_orb: usize, seed: u64, scale: f64) -> OrbitalIntegrals {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut b = OrbitalIntegrals::builder(n_orb);
    for i in 0..n_orb {
        for j in 0..=i {
            b.set_one_body(i, j, scale * (2.0 * rng.random::<f64>() - 1.0));
        }
    }
    for i in 0..n_orb {
        for j in 0..=i {
            for k in 0..n_orb {
                for l in 0..=k {
                    if k * (k + 1) / 2 + l > i * (i + 1) / 2 + j {
                        continue;
                    }
                    let mut x = 0.3 * scale * (2.0 * rng.random::<f64>() - 1.0);
                    if i == j && k == l {
                        x = x.abs() + 0.5 * scale;
                    }
                    b.set_eri(i, j, k, l, x);
                }
            }
        }
    }
    b.set_e0(scale * (2.0 * rng.random::<f64>() - 1.0));
    b.build()
}

/// Random real symmetric matrix with entries uniform in `[-1, 1]`.
pub fn random_symmetric(n: usize, seed: u64) -> DMatrix<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..=i {
            let x = 2.0 * rng.random::<f64>() - 1.0;
            m[(i, j)] = x;
            m[(j, i)] = x;
        }
    }
    m
}

/// Three-orbital `(a, e_x, e_y)` model with a degenerate `e` pair, holding
/// 4 electrons in its ground configuration `a² e²`.
///
/// The `e` pair carries intra-orbital `U = U' + 2J`, inter-orbital `U'` and
/// exchange / pair hopping `J`, so `e²` orders as triplet `U' − J` below the
/// singlets `U' + J` (twice) and `U' + 3J`.
pub fn nv_like() -> OrbitalIntegrals {
    let (a, x, y) = (0, 1, 2);
    let u_prime = 0.40;
    let j = 0.035;
    OrbitalIntegrals::builder(3)
        .one_body(a, a, -1.0)
        .one_body(x, x, -0.3)
        .one_body(y, y, -0.3)
        .eri(a, a, a, a, 0.6)
        .eri(a, a, x, x, 0.45)
        .eri(a, a, y, y, 0.45)
        .eri(a, x, a, x, 0.03)
        .eri(a, y, a, y, 0.03)
        .eri(x, x, x, x, u_prime + 2.0 * j)
        .eri(y, y, y, y, u_prime + 2.0 * j)
        .eri(x, x, y, y, u_prime)
        .eri(x, y, x, y, j)
        .build()
}

/// Two-site Hubbard model: hopping `-t`, on-site `U`.
pub fn hubbard_dimer(t: f64, u: f64) -> OrbitalIntegrals {
    OrbitalIntegrals::builder(2)
        .one_body(0, 1, -t)
        .eri(0, 0, 0, 0, u)
        .eri(1, 1, 1, 1, u)
        .build()
}
