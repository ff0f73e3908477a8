//! Brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use nalgebra::DMatrix;
use qembed_core::OrbitalIntegrals;

/// `a_p` or `a†_p` on an occupation bitstring, with the sign counted from
/// occupied modes below `p`.
pub fn ladder(occ: u64, p: usize, create: bool) -> Option<(u64, f64)> {
    let bit = 1u64 << p;
    if (occ & bit != 0) == create {
        return None;
    }
    let sign = if (occ & (bit - 1)).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
    Some((occ ^ bit, sign))
}

/// Applies `ops` right to left, as written in a product.
pub fn apply_string(occ: u64, ops: &[(usize, bool)]) -> Option<(u64, f64)> {
    let mut state = occ;
    let mut sign = 1.0;
    for &(p, create) in ops.iter().rev() {
        let (s, f) = ladder(state, p, create)?;
        state = s;
        sign *= f;
    }
    Some((state, sign))
}

/// Second-quantized Hamiltonian on all `2^(2n)` occupations. Spin-orbital
/// `p` is alpha for `p < n` and beta `p − n` otherwise.
pub fn fock_hamiltonian(ints: &OrbitalIntegrals) -> DMatrix<f64> {
    let n = ints.n_orb();
    let modes = 2 * n;
    let dim = 1usize << modes;
    let mut h = DMatrix::zeros(dim, dim);
    for occ in 0..dim as u64 {
        h[(occ as usize, occ as usize)] += ints.e0();
        for s in 0..2 {
            for p in 0..n {
                for q in 0..n {
                    let t = ints.t(p, q);
                    if t == 0.0 {
                        continue;
                    }
                    if let Some((out, f)) = apply_string(occ, &[(p + s * n, true), (q + s * n, false)]) {
                        h[(out as usize, occ as usize)] += t * f;
                    }
                }
            }
        }
        for s in 0..2 {
            for u in 0..2 {
                for p in 0..n {
                    for q in 0..n {
                        for r in 0..n {
                            for w in 0..n {
                                let v = ints.eri(p, q, r, w);
                                if v == 0.0 {
                                    continue;
                                }
                                let ops = [(p + s * n, true), (r + u * n, true), (w + u * n, false), (q + s * n, false)];
                                if let Some((out, f)) = apply_string(occ, &ops) {
                                    h[(out as usize, occ as usize)] += 0.5 * v * f;
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    h
}

pub fn sorted_eigenvalues(m: DMatrix<f64>) -> Vec<f64> {
    let mut e: Vec<f64> = m.symmetric_eigen().eigenvalues.iter().copied().collect();
    e.sort_by(f64::total_cmp);
    e
}

/// Hermitian part of a complex dense matrix as a real symmetric matrix of
/// twice the size, which has every eigenvalue twice.
pub fn real_embedding(m: &DMatrix<num_complex::Complex64>) -> DMatrix<f64> {
    let n = m.nrows();
    DMatrix::from_fn(2 * n, 2 * n, |i, j| {
        let z = m[(i % n, j % n)];
        match (i < n, j < n) {
            (true, true) | (false, false) => z.re,
            (true, false) => -z.im,
            (false, true) => z.im,
        }
    })
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}
