//! Fermion-to-qubit encodings as binary transformations `q = β n (mod 2)`.
//!
//! Each encoding is fixed by a lower-triangular GF(2) matrix `β` mapping mode
//! occupations to qubit states. From `β` follow the update set `U(j)` (qubits
//! that flip with `n_j`), the parity set `P(j)` (qubits whose parity is
//! `Σ_{k<j} n_k`) and the flip set `F(j)` (qubits besides `j` whose parity with
//! `q_j` is `n_j`). The Majorana operators are
//!
//! ```text
//! c_j = X_U(j) X_j Z_P(j)        d_j = X_U(j) Y_j Z_{P(j) Δ F(j)}
//! ```
//!
//! and `a†_j = (c_j − i d_j)/2`, `a_j = (c_j + i d_j)/2`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use super::pauli::{PauliOperator, PauliString};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Encoding {
    #[default]
    JordanWigner,
    Parity,
    BravyiKitaev,
}

impl Encoding {
    pub const ALL: [Encoding; 3] = [Encoding::JordanWigner, Encoding::Parity, Encoding::BravyiKitaev];

    pub fn short_name(&self) -> &'static str {
        match self {
            Encoding::JordanWigner => "jw",
            Encoding::Parity => "parity",
            Encoding::BravyiKitaev => "bk",
        }
    }
}

impl fmt::Display for Encoding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

impl FromStr for Encoding {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "jw" | "jordan-wigner" | "jordan_wigner" => Ok(Encoding::JordanWigner),
            "parity" => Ok(Encoding::Parity),
            "bk" | "bravyi-kitaev" | "bravyi_kitaev" => Ok(Encoding::BravyiKitaev),
            _ => Err(Error::UnsupportedEncoding(s.to_string())),
        }
    }
}

/// Single-qubit-string expansion of a ladder operator product.
pub(crate) type Terms = Vec<(PauliString, Complex64)>;

#[derive(Debug, Clone)]
pub struct FermionEncoding {
    kind: Encoding,
    n_modes: usize,
    /// Row `i`: modes whose occupations XOR into qubit `i`.
    forward: Vec<u64>,
    /// Row `k`: qubits whose states XOR into occupation `n_k`.
    inverse: Vec<u64>,
    creation: Vec<Terms>,
    annihilation: Vec<Terms>,
}

impl FermionEncoding {
    pub fn new(kind: Encoding, n_modes: usize) -> Self {
        assert!(n_modes <= 64, "at most 64 modes");
        let forward: Vec<u64> = match kind {
            Encoding::JordanWigner => (0..n_modes).map(|i| 1u64 << i).collect(),
            Encoding::Parity => (0..n_modes).map(|i| low_mask(i + 1)).collect(),
            Encoding::BravyiKitaev => (0..n_modes)
                .map(|i| {
                    // Fenwick tree: qubit i stores modes (i - lowbit(i+1), i].
                    let lowbit = (i + 1) & (i + 1).wrapping_neg();
                    low_mask(i + 1) & !low_mask(i + 1 - lowbit)
                })
                .collect(),
        };
        let inverse = invert_lower_triangular(&forward);

        let mut creation = Vec::with_capacity(n_modes);
        let mut annihilation = Vec::with_capacity(n_modes);
        for j in 0..n_modes {
            let update = (j + 1..n_modes)
                .filter(|&i| forward[i] >> j & 1 == 1)
                .fold(0u64, |m, i| m | 1 << i);
            let parity = inverse[..j].iter().fold(0u64, |m, row| m ^ row);
            let flip = inverse[j] & !(1u64 << j);
            let remainder = parity ^ flip;
            let x = update | 1 << j;
            let c = PauliString::new(x, parity);
            let d = PauliString::new(x, remainder | 1 << j);
            let half = 0.5;
            creation.push(vec![(c, Complex64::new(half, 0.0)), (d, Complex64::new(0.0, -half))]);
            annihilation.push(vec![(c, Complex64::new(half, 0.0)), (d, Complex64::new(0.0, half))]);
        }
        FermionEncoding {
            kind,
            n_modes,
            forward,
            inverse,
            creation,
            annihilation,
        }
    }

    pub fn kind(&self) -> Encoding {
        self.kind
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    /// Qubit basis state holding the given mode occupations.
    pub fn encode_occupation(&self, occ: u64) -> u64 {
        self.forward
            .iter()
            .enumerate()
            .fold(0u64, |q, (i, row)| q | (((row & occ).count_ones() as u64 & 1) << i))
    }

    pub fn decode_occupation(&self, qubits: u64) -> u64 {
        self.inverse
            .iter()
            .enumerate()
            .fold(0u64, |n, (k, row)| n | (((row & qubits).count_ones() as u64 & 1) << k))
    }

    pub(crate) fn ladder(&self, mode: usize, dagger: bool) -> &Terms {
        if dagger {
            &self.creation[mode]
        } else {
            &self.annihilation[mode]
        }
    }

    pub fn creation(&self, mode: usize) -> PauliOperator {
        PauliOperator::from_terms(self.n_modes, self.creation[mode].iter().copied())
    }

    pub fn annihilation(&self, mode: usize) -> PauliOperator {
        PauliOperator::from_terms(self.n_modes, self.annihilation[mode].iter().copied())
    }

    /// Pauli expansion of `ops[0] · ops[1] · …`, each `(mode, is_creation)`.
    pub(crate) fn product(&self, ops: &[(usize, bool)]) -> Terms {
        let mut acc: Terms = vec![(PauliString::IDENTITY, Complex64::new(1.0, 0.0))];
        for &(mode, dagger) in ops {
            let factor = self.ladder(mode, dagger);
            let mut next = Vec::with_capacity(acc.len() * factor.len());
            for (p, c) in &acc {
                for (q, d) in factor {
                    let (k, r) = p.multiply(q);
                    next.push((r, c * d * i_power(k)));
                }
            }
            acc = next;
        }
        acc
    }

    /// Qubit operator of `Σ coeff · Π ladder`, e.g. an excitation operator.
    pub fn fermion_operator(&self, terms: &[(f64, Vec<(usize, bool)>)]) -> PauliOperator {
        let mut op = PauliOperator::zero(self.n_modes);
        for (coef, ops) in terms {
            for (p, c) in self.product(ops) {
                op.add_term(p, c * *coef);
            }
        }
        op.simplify()
    }
}

#[inline]
pub(crate) fn i_power(k: u8) -> Complex64 {
    match k & 3 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

fn low_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Inverse over GF(2) of a unit lower-triangular matrix given by row masks.
fn invert_lower_triangular(rows: &[u64]) -> Vec<u64> {
    let n = rows.len();
    let mut inv: Vec<u64> = Vec::with_capacity(n);
    for i in 0..n {
        debug_assert!(rows[i] >> i & 1 == 1 && rows[i] >> (i + 1) == 0);
        // n_i = q_i ⊕ (⊕_{k<i, row_i has k} n_k)
        let mut r = 1u64 << i;
        for k in 0..i {
            if rows[i] >> k & 1 == 1 {
                r ^= inv[k];
            }
        }
        inv.push(r);
    }
    inv
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bravyi_kitaev_matrix_for_four_modes() {
        let enc = FermionEncoding::new(Encoding::BravyiKitaev, 4);
        assert_eq!(enc.forward, vec![0b0001, 0b0011, 0b0100, 0b1111]);
        let enc = FermionEncoding::new(Encoding::BravyiKitaev, 8);
        assert_eq!(enc.forward[7], 0xff);
        assert_eq!(enc.forward[5], 0b0011_0000);
    }

    #[test]
    fn encode_decode_inverse() {
        for kind in Encoding::ALL {
            for n in [1, 3, 5, 6, 7] {
                let enc = FermionEncoding::new(kind, n);
                for occ in 0..(1u64 << n) {
                    assert_eq!(enc.decode_occupation(enc.encode_occupation(occ)), occ);
                }
            }
        }
    }

    #[test]
    fn canonical_anticommutation() {
        for kind in Encoding::ALL {
            let n = 5;
            let enc = FermionEncoding::new(kind, n);
            for i in 0..n {
                for j in 0..n {
                    let a = enc.annihilation(i);
                    let ad = enc.creation(j);
                    let anti = &(&a * &ad) + &(&ad * &a);
                    if i == j {
                        assert_eq!(anti, PauliOperator::identity(n), "{kind} {i}");
                    } else {
                        assert!(anti.is_empty(), "{kind} {i} {j}");
                    }
                    let aa = &(&a * &enc.annihilation(j)) + &(&enc.annihilation(j) * &a);
                    assert!(aa.is_empty());
                }
            }
        }
    }

    #[test]
    fn creation_acts_on_encoded_vacuum() {
        // a†_j on the encoded occupation state yields the encoded state with n_j set,
        // signed by the parity of occupied modes below j.
        for kind in Encoding::ALL {
            let n = 6;
            let enc = FermionEncoding::new(kind, n);
            for occ in [0b000000u64, 0b010110, 0b101001] {
                for j in 0..n {
                    let mut psi = vec![Complex64::default(); 1 << n];
                    psi[enc.encode_occupation(occ) as usize] = Complex64::new(1.0, 0.0);
                    let out = enc.creation(j).apply(&psi);
                    if occ >> j & 1 == 1 {
                        assert!(out.iter().all(|c| c.norm() < 1e-14));
                        continue;
                    }
                    let target = enc.encode_occupation(occ | 1 << j) as usize;
                    let sign = if (occ & low_mask(j)).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
                    assert!((out[target] - Complex64::new(sign, 0.0)).norm() < 1e-14, "{kind}");
                }
            }
        }
    }

    #[test]
    fn unknown_encoding_name() {
        assert!(matches!("vc".parse::<Encoding>(), Err(Error::UnsupportedEncoding(_))));
        assert_eq!("BK".parse::<Encoding>().unwrap(), Encoding::BravyiKitaev);
    }
}
