use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::integrals::{ActiveSpace, OrbitalIntegrals};

/// Largest determinant space we are willing to enumerate.
pub const MAX_DIMENSION: u128 = 10_000_000;

/// Occupation bitstrings per spin channel; bit `p` is spatial orbital `p`.
///
/// The state is `a†_{P1} a†_{P2} … a†_{Pk} |0⟩` with spin-orbitals
/// `P1 < P2 < …` in alpha-block-then-beta-block order (spin-orbital
/// `p` is `(p, α)` for `p < n` and `(p - n, β)` otherwise). This is the
/// same phase convention the Jordan-Wigner computational basis carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SlaterDeterminant {
    pub alpha: u64,
    pub beta: u64,
}

impl SlaterDeterminant {
    pub fn new(alpha: u64, beta: u64) -> Self {
        SlaterDeterminant { alpha, beta }
    }

    /// Combined spin-orbital occupation for `n_orb` spatial orbitals.
    pub fn spin_orbitals(&self, n_orb: usize) -> u64 {
        self.alpha | (self.beta << n_orb)
    }

    pub fn from_spin_orbitals(occ: u64, n_orb: usize) -> Self {
        let mask = low_mask(n_orb);
        SlaterDeterminant {
            alpha: occ & mask,
            beta: (occ >> n_orb) & mask,
        }
    }

    /// Per-orbital occupation label: `2` doubly occupied, `a`/`b` single
    /// alpha/beta, `0` empty.
    pub fn label(&self, n_orb: usize) -> String {
        (0..n_orb)
            .map(|p| {
                match (self.alpha >> p & 1, self.beta >> p & 1) {
                    (1, 1) => '2',
                    (1, 0) => 'a',
                    (0, 1) => 'b',
                    _ => '0',
                }
            })
            .collect()
    }

    pub fn parse_label(label: &str) -> Result<Self> {
        let mut d = SlaterDeterminant::new(0, 0);
        for (p, c) in label.chars().enumerate() {
            match c {
                '2' => {
                    d.alpha |= 1 << p;
                    d.beta |= 1 << p;
                }
                'a' | 'u' => d.alpha |= 1 << p,
                'b' | 'd' => d.beta |= 1 << p,
                '0' | '.' => {}
                _ => {
                    return Err(Error::InvalidArgument(format!(
                        "bad occupation character '{c}' in '{label}'"
                    )))
                }
            }
        }
        Ok(d)
    }
}

#[inline]
pub(crate) fn low_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Annihilates spin-orbital `p`; returns the new occupation and the sign
/// `(-1)^(# occupied below p)`.
#[inline]
pub(crate) fn annihilate(occ: u64, p: usize) -> Option<(u64, f64)> {
    if occ >> p & 1 == 0 {
        return None;
    }
    let sign = parity_below(occ, p);
    Some((occ & !(1 << p), sign))
}

#[inline]
pub(crate) fn create(occ: u64, p: usize) -> Option<(u64, f64)> {
    if occ >> p & 1 == 1 {
        return None;
    }
    let sign = parity_below(occ, p);
    Some((occ | (1 << p), sign))
}

#[inline]
fn parity_below(occ: u64, p: usize) -> f64 {
    if (occ & low_mask(p)).count_ones() % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// All determinants of a fixed `(n_alpha, n_beta)` sector, alpha-major.
#[derive(Debug, Clone)]
pub struct DeterminantBasis {
    n_orb: usize,
    n_alpha: usize,
    n_beta: usize,
    alpha_strings: Vec<u64>,
    beta_strings: Vec<u64>,
    alpha_index: HashMap<u64, usize>,
    beta_index: HashMap<u64, usize>,
}

impl DeterminantBasis {
    pub fn new(n_orb: usize, n_alpha: usize, n_beta: usize) -> Result<Self> {
        if n_orb > 32 {
            return Err(Error::InvalidActiveSpace(format!(
                "{n_orb} orbitals exceeds the 32-orbital limit"
            )));
        }
        if n_alpha > n_orb || n_beta > n_orb {
            return Err(Error::InvalidActiveSpace(format!(
                "{n_alpha}/{n_beta} electrons do not fit in {n_orb} orbitals"
            )));
        }
        let dim = binomial(n_orb, n_alpha) * binomial(n_orb, n_beta);
        if dim > MAX_DIMENSION {
            return Err(Error::DimensionTooLarge {
                dim,
                limit: MAX_DIMENSION,
            });
        }
        let alpha_strings = combinations(n_orb, n_alpha);
        let beta_strings = combinations(n_orb, n_beta);
        let index = |s: &[u64]| s.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        Ok(DeterminantBasis {
            n_orb,
            n_alpha,
            n_beta,
            alpha_index: index(&alpha_strings),
            beta_index: index(&beta_strings),
            alpha_strings,
            beta_strings,
        })
    }

    pub fn for_active_space(active: &ActiveSpace) -> Result<Self> {
        DeterminantBasis::new(active.n_orb(), active.n_alpha(), active.n_beta())
    }

    pub fn n_orb(&self) -> usize {
        self.n_orb
    }

    pub fn n_alpha(&self) -> usize {
        self.n_alpha
    }

    pub fn n_beta(&self) -> usize {
        self.n_beta
    }

    pub fn len(&self) -> usize {
        self.alpha_strings.len() * self.beta_strings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, index: usize) -> SlaterDeterminant {
        let nb = self.beta_strings.len();
        SlaterDeterminant::new(self.alpha_strings[index / nb], self.beta_strings[index % nb])
    }

    pub fn index_of(&self, det: &SlaterDeterminant) -> Option<usize> {
        let ia = self.alpha_index.get(&det.alpha)?;
        let ib = self.beta_index.get(&det.beta)?;
        Some(ia * self.beta_strings.len() + ib)
    }

    pub fn iter(&self) -> impl Iterator<Item = SlaterDeterminant> + '_ {
        self.alpha_strings.iter().flat_map(move |&a| {
            self.beta_strings
                .iter()
                .map(move |&b| SlaterDeterminant::new(a, b))
        })
    }

    pub fn determinants(&self) -> Vec<SlaterDeterminant> {
        self.iter().collect()
    }

    /// Indices of all determinants reachable from `det` by at most a
    /// double excitation (including `det` itself).
    pub(crate) fn connected(&self, det: &SlaterDeterminant, out: &mut Vec<usize>) {
        out.clear();
        let n = self.n_orb;
        let nb = self.beta_strings.len();
        let ia = self.alpha_index[&det.alpha];
        let ib = self.beta_index[&det.beta];
        out.push(ia * nb + ib);

        let singles = |s: u64| -> Vec<u64> {
            let mut v = Vec::new();
            for p in bits(s) {
                for q in bits(!s & low_mask(n)) {
                    v.push(s & !(1 << p) | (1 << q));
                }
            }
            v
        };
        let doubles = |s: u64| -> Vec<u64> {
            let mut v = Vec::new();
            let occ: Vec<usize> = bits(s).collect();
            let vir: Vec<usize> = bits(!s & low_mask(n)).collect();
            for (x, &p) in occ.iter().enumerate() {
                for &q in &occ[x + 1..] {
                    for (y, &r) in vir.iter().enumerate() {
                        for &u in &vir[y + 1..] {
                            v.push(s & !(1 << p) & !(1 << q) | (1 << r) | (1 << u));
                        }
                    }
                }
            }
            v
        };

        let sa = singles(det.alpha);
        let sb = singles(det.beta);
        for a in &sa {
            out.push(self.alpha_index[a] * nb + ib);
        }
        for b in &sb {
            out.push(ia * nb + self.beta_index[b]);
        }
        for a in doubles(det.alpha) {
            out.push(self.alpha_index[&a] * nb + ib);
        }
        for b in doubles(det.beta) {
            out.push(ia * nb + self.beta_index[&b]);
        }
        for a in &sa {
            let ja = self.alpha_index[a];
            for b in &sb {
                out.push(ja * nb + self.beta_index[b]);
            }
        }
    }
}

pub(crate) fn bits(mut s: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if s == 0 {
            None
        } else {
            let p = s.trailing_zeros() as usize;
            s &= s - 1;
            Some(p)
        }
    })
}

pub(crate) fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: u128 = 1;
    for i in 0..k {
        r = r * (n - i) as u128 / (i + 1) as u128;
    }
    r
}

/// `k`-subsets of `0..n` as bitstrings, in lexicographic order of the
/// sorted index tuples.
fn combinations(n: usize, k: usize) -> Vec<u64> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(idx.iter().fold(0u64, |acc, &i| acc | (1 << i)));
        // advance
        let mut pos = k;
        while pos > 0 {
            pos -= 1;
            if idx[pos] < n - k + pos {
                idx[pos] += 1;
                for q in pos + 1..k {
                    idx[q] = idx[q - 1] + 1;
                }
                break;
            }
            if pos == 0 {
                return out;
            }
        }
        if k == 0 {
            return out;
        }
    }
}

/// Spin-orbital view of the integrals used by the Slater-Condon rules.
struct SpinOrbitals<'a> {
    ints: &'a OrbitalIntegrals,
    n: usize,
}

impl SpinOrbitals<'_> {
    #[inline]
    fn split(&self, p: usize) -> (usize, usize) {
        if p < self.n {
            (p, 0)
        } else {
            (p - self.n, 1)
        }
    }

    #[inline]
    fn h(&self, p: usize, q: usize) -> f64 {
        let (i, s) = self.split(p);
        let (j, t) = self.split(q);
        if s == t {
            self.ints.t(i, j)
        } else {
            0.0
        }
    }

    /// `⟨pq|rs⟩ = (pr|qs)` with spin selection.
    #[inline]
    fn coulomb(&self, p: usize, q: usize, r: usize, s: usize) -> f64 {
        let (i, sp) = self.split(p);
        let (j, sq) = self.split(q);
        let (k, sr) = self.split(r);
        let (l, ss) = self.split(s);
        if sp == sr && sq == ss {
            self.ints.eri(i, k, j, l)
        } else {
            0.0
        }
    }

    #[inline]
    fn antisym(&self, p: usize, q: usize, r: usize, s: usize) -> f64 {
        self.coulomb(p, q, r, s) - self.coulomb(p, q, s, r)
    }
}

/// `⟨d1|H|d2⟩` by the Slater-Condon rules. `ints` must span the same
/// orbitals as the determinants.
pub fn matrix_element(
    d1: &SlaterDeterminant,
    d2: &SlaterDeterminant,
    ints: &OrbitalIntegrals,
) -> f64 {
    let n = ints.n_orb();
    let so = SpinOrbitals { ints, n };
    let o1 = d1.spin_orbitals(n);
    let o2 = d2.spin_orbitals(n);
    let diff = o1 ^ o2;
    match diff.count_ones() {
        0 => {
            let occ: Vec<usize> = bits(o1).collect();
            let mut e = ints.e0();
            for (x, &p) in occ.iter().enumerate() {
                e += so.h(p, p);
                for &q in &occ[..x] {
                    e += so.antisym(p, q, p, q);
                }
            }
            e
        }
        2 => {
            let m = (o1 & diff).trailing_zeros() as usize;
            let p = (o2 & diff).trailing_zeros() as usize;
            let (mid, s1) = annihilate(o2, p).expect("p occupied in d2");
            let (res, s2) = create(mid, m).expect("m empty after removal");
            debug_assert_eq!(res, o1);
            let mut x = so.h(m, p);
            for q in bits(o1 & o2) {
                x += so.antisym(m, q, p, q);
            }
            s1 * s2 * x
        }
        4 => {
            let mut only1 = bits(o1 & diff);
            let (m1, m2) = (only1.next().unwrap(), only1.next().unwrap());
            let mut only2 = bits(o2 & diff);
            let (p1, p2) = (only2.next().unwrap(), only2.next().unwrap());
            // a†_m1 a†_m2 a_p2 a_p1 |d2⟩
            let (s, sign_a) = annihilate(o2, p1).unwrap();
            let (s, sign_b) = annihilate(s, p2).unwrap();
            let (s, sign_c) = create(s, m2).unwrap();
            let (s, sign_d) = create(s, m1).unwrap();
            debug_assert_eq!(s, o1);
            sign_a * sign_b * sign_c * sign_d * so.antisym(m1, m2, p1, p2)
        }
        _ => 0.0,
    }
}
