use std::collections::HashMap;

use super::determinant::{annihilate, bits, create, DeterminantBasis};

/// `S⁻ |ψ⟩ = Σ_p a†_pβ a_pα |ψ⟩`, keyed by combined spin-orbital occupation.
pub(crate) fn lower(basis: &DeterminantBasis, coeffs: &[f64]) -> HashMap<u64, f64> {
    let n = basis.n_orb();
    let mut out: HashMap<u64, f64> = HashMap::new();
    for (det, &c) in basis.iter().zip(coeffs) {
        if c == 0.0 {
            continue;
        }
        let occ = det.spin_orbitals(n);
        for p in bits(det.alpha & !det.beta) {
            let (mid, s1) = annihilate(occ, p).expect("alpha occupied");
            let (res, s2) = create(mid, p + n).expect("beta empty");
            *out.entry(res).or_insert(0.0) += s1 * s2 * c;
        }
    }
    out
}

fn dot(a: &HashMap<u64, f64>, b: &HashMap<u64, f64>) -> f64 {
    // Iterate the smaller map; sum in sorted key order for reproducibility.
    let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    let mut keys: Vec<&u64> = small.keys().collect();
    keys.sort_unstable();
    keys.into_iter()
        .filter_map(|k| large.get(k).map(|y| small[k] * y))
        .sum()
}

/// `⟨ψ|S²|ψ⟩` via `S² = S⁺S⁻ + S_z² − S_z`.
pub fn s_squared(basis: &DeterminantBasis, coeffs: &[f64]) -> f64 {
    let norm2: f64 = coeffs.iter().map(|c| c * c).sum();
    let sz = 0.5 * (basis.n_alpha() as f64 - basis.n_beta() as f64);
    let l = lower(basis, coeffs);
    dot(&l, &l) + norm2 * (sz * sz - sz)
}

/// Matrix of `S²` between the given states (all from the same sector).
pub(crate) fn s_squared_matrix(basis: &DeterminantBasis, states: &[&[f64]]) -> Vec<Vec<f64>> {
    let sz = 0.5 * (basis.n_alpha() as f64 - basis.n_beta() as f64);
    let lowered: Vec<_> = states.iter().map(|c| lower(basis, c)).collect();
    let mut m = vec![vec![0.0; states.len()]; states.len()];
    for i in 0..states.len() {
        for j in 0..=i {
            let overlap: f64 = states[i].iter().zip(states[j]).map(|(a, b)| a * b).sum();
            let x = dot(&lowered[i], &lowered[j]) + overlap * (sz * sz - sz);
            m[i][j] = x;
            m[j][i] = x;
        }
    }
    m
}

/// Distance of an `⟨S²⟩` value from the nearest `s(s+1)`, `s ∈ {0, ½, 1, …}`.
pub fn spin_defect(s2: f64) -> f64 {
    let s = (-1.0 + (1.0 + 4.0 * s2.max(0.0)).sqrt()) / 2.0;
    let s_half = (2.0 * s).round() / 2.0;
    (s2 - s_half * (s_half + 1.0)).abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fci::SlaterDeterminant;

    fn state(basis: &DeterminantBasis, amps: &[(&str, f64)]) -> Vec<f64> {
        let mut c = vec![0.0; basis.len()];
        for (label, a) in amps {
            let d = SlaterDeterminant::parse_label(label).unwrap();
            c[basis.index_of(&d).unwrap()] = *a;
        }
        c
    }

    #[test]
    fn aligned_spins_are_triplet() {
        let basis = DeterminantBasis::new(2, 2, 0).unwrap();
        let c = state(&basis, &[("aa", 1.0)]);
        assert!((s_squared(&basis, &c) - 2.0).abs() < 1e-14);
    }

    #[test]
    fn open_shell_combinations() {
        let basis = DeterminantBasis::new(2, 1, 1).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        // |x ȳ⟩ = a†_0 a†_3|0⟩ has label "ab"; |x̄ y⟩ = a†_2 a†_1|0⟩ = -a†_1 a†_2|0⟩
        // and a†_1 a†_2|0⟩ has label "ba".
        let plus = state(&basis, &[("ab", h), ("ba", -h)]);
        let minus = state(&basis, &[("ab", h), ("ba", h)]);
        assert!((s_squared(&basis, &plus) - 2.0).abs() < 1e-14);
        assert!(s_squared(&basis, &minus).abs() < 1e-14);
        let closed = state(&basis, &[("20", 1.0)]);
        assert!(s_squared(&basis, &closed).abs() < 1e-14);
    }

    #[test]
    fn defect_of_valid_values() {
        for s2 in [0.0, 0.75, 2.0, 3.75, 6.0] {
            assert!(spin_defect(s2) < 1e-12);
        }
        assert!((spin_defect(1.0) - 0.25).abs() < 1e-12);
    }
}
