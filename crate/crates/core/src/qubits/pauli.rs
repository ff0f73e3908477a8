//! Pauli strings in symplectic form and weighted sums of them.
//!
//! A string with masks `(x, z)` denotes `⊗_q i^{x_q z_q} X_q^{x_q} Z_q^{z_q}`,
//! i.e. `(1,0) = X`, `(0,1) = Z`, `(1,1) = Y`, so every string is Hermitian
//! and phases live only in the operator coefficients.
//!
//! Labels are written qubit 0 first: `"XIZ"` is `X_0 Z_2`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Coefficients with modulus below this are dropped by [`PauliOperator::simplify`].
pub const SIMPLIFY_TOL: f64 = 1e-12;

/// Largest register accepted by [`PauliOperator::to_dense`].
pub const DENSE_QUBIT_LIMIT: usize = 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct PauliString {
    pub x: u64,
    pub z: u64,
}

const I_POWERS: [Complex64; 4] = [
    Complex64::new(1.0, 0.0),
    Complex64::new(0.0, 1.0),
    Complex64::new(-1.0, 0.0),
    Complex64::new(0.0, -1.0),
];

impl PauliString {
    pub const IDENTITY: PauliString = PauliString { x: 0, z: 0 };

    pub fn new(x: u64, z: u64) -> Self {
        PauliString { x, z }
    }

    pub fn x(q: usize) -> Self {
        PauliString { x: 1 << q, z: 0 }
    }

    pub fn y(q: usize) -> Self {
        PauliString { x: 1 << q, z: 1 << q }
    }

    pub fn z(q: usize) -> Self {
        PauliString { x: 0, z: 1 << q }
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    pub fn support(&self) -> u64 {
        self.x | self.z
    }

    pub fn weight(&self) -> u32 {
        self.support().count_ones()
    }

    /// `self · other = i^k · (self ⊕ other)`; returns `(k mod 4, product)`.
    #[inline]
    pub fn multiply(&self, other: &PauliString) -> (u8, PauliString) {
        let x = self.x ^ other.x;
        let z = self.z ^ other.z;
        // σ(a)σ(b) = i^{|a_x a_z| + |b_x b_z| + 2|a_z b_x| - |c_x c_z|} σ(c)
        let k = (self.x & self.z).count_ones() as i64 + (other.x & other.z).count_ones() as i64
            + 2 * (self.z & other.x).count_ones() as i64
            - (x & z).count_ones() as i64;
        (k.rem_euclid(4) as u8, PauliString { x, z })
    }

    pub fn commutes_with(&self, other: &PauliString) -> bool {
        ((self.x & other.z).count_ones() + (self.z & other.x).count_ones()) % 2 == 0
    }

    /// Qubit-wise commutation: on every shared qubit the single-qubit factors agree.
    pub fn qubitwise_commutes(&self, other: &PauliString) -> bool {
        let shared = self.support() & other.support();
        (self.x ^ other.x) & shared == 0 && (self.z ^ other.z) & shared == 0
    }

    /// `⟨b ⊕ x| P |b⟩` for computational basis state `b`.
    #[inline]
    pub fn phase_on(&self, b: u64) -> Complex64 {
        let k = (self.x & self.z).count_ones() + 2 * (self.z & b).count_ones();
        I_POWERS[(k % 4) as usize]
    }

    pub fn label(&self, n_qubits: usize) -> String {
        (0..n_qubits)
            .map(|q| match (self.x >> q & 1, self.z >> q & 1) {
                (0, 0) => 'I',
                (1, 0) => 'X',
                (1, 1) => 'Y',
                _ => 'Z',
            })
            .collect()
    }

    pub fn from_label(label: &str) -> Result<Self> {
        if label.len() > 64 {
            return Err(Error::InvalidArgument(format!("label '{label}' longer than 64 qubits")));
        }
        let mut p = PauliString::IDENTITY;
        for (q, c) in label.chars().enumerate() {
            match c {
                'I' => {}
                'X' => p.x |= 1 << q,
                'Y' => {
                    p.x |= 1 << q;
                    p.z |= 1 << q;
                }
                'Z' => p.z |= 1 << q,
                _ => {
                    return Err(Error::InvalidArgument(format!(
                        "bad Pauli character '{c}' in '{label}'"
                    )))
                }
            }
        }
        Ok(p)
    }

    /// Drops qubits set in `mask`, shifting higher qubits down.
    pub fn remove_qubits(&self, mask: u64) -> PauliString {
        PauliString {
            x: compress(self.x, mask),
            z: compress(self.z, mask),
        }
    }
}

/// Removes the bit positions in `mask` from `v`, packing the rest.
pub(crate) fn compress(v: u64, mask: u64) -> u64 {
    let mut out = 0u64;
    let mut dst = 0;
    for src in 0..64 {
        if mask >> src & 1 == 1 {
            continue;
        }
        out |= (v >> src & 1) << dst;
        dst += 1;
    }
    out
}

/// Weighted sum of Pauli strings on a fixed register.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliOperator {
    n_qubits: usize,
    terms: BTreeMap<PauliString, Complex64>,
}

impl PauliOperator {
    pub fn zero(n_qubits: usize) -> Self {
        assert!(n_qubits <= 64, "at most 64 qubits");
        PauliOperator {
            n_qubits,
            terms: BTreeMap::new(),
        }
    }

    pub fn identity(n_qubits: usize) -> Self {
        PauliOperator::from_term(n_qubits, PauliString::IDENTITY, Complex64::new(1.0, 0.0))
    }

    pub fn from_term(n_qubits: usize, p: PauliString, c: Complex64) -> Self {
        let mut op = PauliOperator::zero(n_qubits);
        op.add_term(p, c);
        op
    }

    pub fn from_terms<I>(n_qubits: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (PauliString, Complex64)>,
    {
        let mut op = PauliOperator::zero(n_qubits);
        for (p, c) in terms {
            op.add_term(p, c);
        }
        op
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PauliString, &Complex64)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, p: &PauliString) -> Complex64 {
        self.terms.get(p).copied().unwrap_or_default()
    }

    pub fn add_term(&mut self, p: PauliString, c: Complex64) {
        debug_assert!(
            self.n_qubits == 64 || p.support() >> self.n_qubits == 0,
            "term outside register"
        );
        *self.terms.entry(p).or_default() += c;
    }

    fn check(&self, other: &PauliOperator) -> Result<()> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::QubitMismatch {
                left: self.n_qubits,
                right: other.n_qubits,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &PauliOperator) -> Result<PauliOperator> {
        self.check(other)?;
        let mut out = self.clone();
        for (p, c) in &other.terms {
            out.add_term(*p, *c);
        }
        Ok(out.simplify())
    }

    pub fn multiply(&self, other: &PauliOperator) -> Result<PauliOperator> {
        self.check(other)?;
        let mut out = PauliOperator::zero(self.n_qubits);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let (k, p) = a.multiply(b);
                out.add_term(p, ca * cb * I_POWERS[k as usize]);
            }
        }
        Ok(out.simplify())
    }

    pub fn scale(&self, s: Complex64) -> PauliOperator {
        PauliOperator {
            n_qubits: self.n_qubits,
            terms: self.terms.iter().map(|(p, c)| (*p, c * s)).collect(),
        }
    }

    /// Merges duplicates (already merged on insert) and drops `|c| < 1e-12`.
    pub fn simplify(mut self) -> PauliOperator {
        self.terms.retain(|_, c| c.norm() >= SIMPLIFY_TOL);
        self
    }

    pub fn adjoint(&self) -> PauliOperator {
        PauliOperator {
            n_qubits: self.n_qubits,
            terms: self.terms.iter().map(|(p, c)| (*p, c.conj())).collect(),
        }
    }

    pub fn max_imaginary(&self) -> f64 {
        self.terms.values().map(|c| c.im.abs()).fold(0.0, f64::max)
    }

    pub fn max_real(&self) -> f64 {
        self.terms.values().map(|c| c.re.abs()).fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self) -> bool {
        self.max_imaginary() < SIMPLIFY_TOL
    }

    /// Coefficient of the identity string.
    pub fn constant(&self) -> Complex64 {
        self.coefficient(&PauliString::IDENTITY)
    }

    /// `y += self · x` on a `2ⁿ` amplitude vector.
    pub fn apply_into(&self, x: &[Complex64], y: &mut [Complex64]) {
        debug_assert_eq!(x.len(), 1usize << self.n_qubits);
        for (p, c) in &self.terms {
            for (b, amp) in x.iter().enumerate() {
                if *amp == Complex64::default() {
                    continue;
                }
                let b = b as u64;
                y[(b ^ p.x) as usize] += c * p.phase_on(b) * amp;
            }
        }
    }

    pub fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        let mut y = vec![Complex64::default(); x.len()];
        self.apply_into(x, &mut y);
        y
    }

    /// Dense `2ⁿ × 2ⁿ` matrix in the computational basis; basis index `b`
    /// has qubit `q` in state `(b >> q) & 1`.
    pub fn to_dense(&self) -> Result<DMatrix<Complex64>> {
        if self.n_qubits > DENSE_QUBIT_LIMIT {
            return Err(Error::TooManyQubits {
                qubits: self.n_qubits,
                limit: DENSE_QUBIT_LIMIT,
            });
        }
        let dim = 1usize << self.n_qubits;
        let mut m = DMatrix::zeros(dim, dim);
        for (p, c) in &self.terms {
            for b in 0..dim as u64 {
                m[((b ^ p.x) as usize, b as usize)] += c * p.phase_on(b);
            }
        }
        Ok(m)
    }

    /// Real part of the dense matrix; errors if any imaginary entry survives.
    pub fn to_dense_real(&self) -> Result<DMatrix<f64>> {
        let m = self.to_dense()?;
        let max_im = m.iter().map(|c| c.im.abs()).fold(0.0, f64::max);
        if max_im > 1e-10 {
            return Err(Error::InvalidArgument(format!(
                "operator has complex matrix elements (max imaginary part {max_im:.3e})"
            )));
        }
        Ok(m.map(|c| c.re))
    }

    /// Drops the qubits in `mask`, which must carry no X/Y component; every
    /// Z on a dropped qubit `q` is replaced by `eigenvalue(q)`.
    pub fn substitute_z(&self, mask: u64, eigenvalue: impl Fn(usize) -> f64) -> Result<PauliOperator> {
        let removed = mask.count_ones() as usize;
        let mut out = PauliOperator::zero(self.n_qubits - removed);
        for (p, c) in &self.terms {
            if p.x & mask != 0 {
                return Err(Error::SymmetryViolation {
                    qubit: (p.x & mask).trailing_zeros() as usize,
                });
            }
            let mut factor = 1.0;
            let mut zs = p.z & mask;
            while zs != 0 {
                let q = zs.trailing_zeros() as usize;
                factor *= eigenvalue(q);
                zs &= zs - 1;
            }
            out.add_term(p.remove_qubits(mask), c * factor);
        }
        Ok(out.simplify())
    }

    /// Text form: one `coefficient label` line per term. Real coefficients are
    /// written as plain numbers, complex ones as `re+imi`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (p, c) in &self.terms {
            let coef = if c.im == 0.0 {
                format!("{:e}", c.re)
            } else {
                format!("{:e}{:+e}i", c.re, c.im)
            };
            out.push_str(&coef);
            out.push(' ');
            out.push_str(&p.label(self.n_qubits));
            out.push('\n');
        }
        out
    }

    /// Parses [`PauliOperator::to_text`] output; the qubit count is the label
    /// length (or `n_qubits` when the text has no terms).
    pub fn from_text(text: &str, n_qubits: Option<usize>) -> Result<PauliOperator> {
        let mut op: Option<PauliOperator> = n_qubits.map(PauliOperator::zero);
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |msg: String| Error::InvalidArgument(format!("line {}: {msg}", i + 1));
            let mut parts = line.split_whitespace();
            let (Some(coef), Some(label), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(bad(format!("expected 'coefficient label', got '{line}'")));
            };
            let c = parse_complex(coef).ok_or_else(|| bad(format!("bad coefficient '{coef}'")))?;
            let p = PauliString::from_label(label).map_err(|e| bad(e.to_string()))?;
            let op = op.get_or_insert_with(|| PauliOperator::zero(label.len()));
            if label.len() != op.n_qubits {
                return Err(bad(format!(
                    "label '{label}' has {} qubits, expected {}",
                    label.len(),
                    op.n_qubits
                )));
            }
            op.add_term(p, c);
        }
        op.ok_or_else(|| Error::InvalidArgument("empty operator text without qubit count".into()))
    }
}

fn parse_complex(s: &str) -> Option<Complex64> {
    if let Some(body) = s.strip_suffix('i') {
        // split at the last sign that is not part of an exponent
        let bytes = body.as_bytes();
        let pos = (1..bytes.len())
            .rev()
            .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'))?;
        let re: f64 = body[..pos].parse().ok()?;
        let im: f64 = body[pos..].parse().ok()?;
        Some(Complex64::new(re, im))
    } else {
        s.parse::<f64>().ok().map(|re| Complex64::new(re, 0.0))
    }
}

impl fmt::Display for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl Add for &PauliOperator {
    type Output = PauliOperator;

    fn add(self, rhs: &PauliOperator) -> PauliOperator {
        PauliOperator::add(self, rhs).expect("qubit count mismatch")
    }
}

impl Sub for &PauliOperator {
    type Output = PauliOperator;

    fn sub(self, rhs: &PauliOperator) -> PauliOperator {
        PauliOperator::add(self, &-rhs).expect("qubit count mismatch")
    }
}

impl Mul for &PauliOperator {
    type Output = PauliOperator;

    fn mul(self, rhs: &PauliOperator) -> PauliOperator {
        self.multiply(rhs).expect("qubit count mismatch")
    }
}

impl Neg for &PauliOperator {
    type Output = PauliOperator;

    fn neg(self) -> PauliOperator {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Kronecker composition of single-qubit matrices, qubit 0 least significant.
    fn kron_dense(op: &PauliOperator) -> DMatrix<Complex64> {
        let i2 = DMatrix::<Complex64>::identity(2, 2);
        let x = DMatrix::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)]);
        let y = DMatrix::from_row_slice(2, 2, &[c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)]);
        let z = DMatrix::from_row_slice(2, 2, &[c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)]);
        let n = op.n_qubits();
        let mut total = DMatrix::zeros(1 << n, 1 << n);
        for (p, coef) in op.terms() {
            let mut m = DMatrix::<Complex64>::identity(1, 1);
            for q in (0..n).rev() {
                let f = match (p.x >> q & 1, p.z >> q & 1) {
                    (0, 0) => &i2,
                    (1, 0) => &x,
                    (1, 1) => &y,
                    _ => &z,
                };
                m = m.kronecker(f);
            }
            total += m * *coef;
        }
        total
    }

    #[test]
    fn single_qubit_products() {
        let (k, p) = PauliString::x(0).multiply(&PauliString::z(0));
        assert_eq!(p, PauliString::y(0));
        assert_eq!(I_POWERS[k as usize], c(0.0, -1.0));
        let (k, p) = PauliString::z(0).multiply(&PauliString::x(0));
        assert_eq!(p, PauliString::y(0));
        assert_eq!(I_POWERS[k as usize], c(0.0, 1.0));
        let (k, p) = PauliString::y(0).multiply(&PauliString::y(0));
        assert!(p.is_identity());
        assert_eq!(k, 0);
    }

    #[test]
    fn x_times_z_operator() {
        let x = PauliOperator::from_term(1, PauliString::x(0), c(1.0, 0.0));
        let z = PauliOperator::from_term(1, PauliString::z(0), c(1.0, 0.0));
        let xz = &x * &z;
        assert_eq!(xz.len(), 1);
        assert_eq!(xz.coefficient(&PauliString::y(0)), c(0.0, -1.0));
    }

    #[test]
    fn cancellation_and_mismatch() {
        let a = PauliOperator::from_terms(
            2,
            [
                (PauliString::from_label("XZ").unwrap(), c(0.5, 0.0)),
                (PauliString::from_label("IY").unwrap(), c(-0.25, 0.1)),
            ],
        );
        assert!((&a - &a).is_empty());
        assert!(a.add(&PauliOperator::zero(3)).is_err());
        assert!(a.multiply(&PauliOperator::zero(1)).is_err());
    }

    #[test]
    fn dense_small_cases() {
        let z = PauliOperator::from_term(1, PauliString::z(0), c(1.0, 0.0));
        let m = z.to_dense().unwrap();
        assert_eq!(m[(0, 0)], c(1.0, 0.0));
        assert_eq!(m[(1, 1)], c(-1.0, 0.0));
        let id = PauliOperator::identity(2).to_dense().unwrap();
        assert_eq!(id, DMatrix::identity(4, 4));
        assert!(PauliOperator::identity(15).to_dense().is_err());
    }

    #[test]
    fn direct_dense_matches_kronecker() {
        let labels = ["XYZI", "IIZZ", "YYXX", "ZIIY", "IIII"];
        let op = PauliOperator::from_terms(
            4,
            labels
                .iter()
                .enumerate()
                .map(|(i, l)| (PauliString::from_label(l).unwrap(), c(0.3 * i as f64 - 0.4, 0.1 * i as f64))),
        );
        let diff = (op.to_dense().unwrap() - kron_dense(&op)).norm();
        assert!(diff < 1e-14);
    }

    #[test]
    fn text_round_trip() {
        let op = PauliOperator::from_terms(
            3,
            [
                (PauliString::from_label("XIZ").unwrap(), c(0.1 + 0.2, 0.0)),
                (PauliString::from_label("YYI").unwrap(), c(-1.0 / 3.0, 2e-17)),
                (PauliString::IDENTITY, c(-7.5e-3, 0.0)),
            ],
        );
        let back = PauliOperator::from_text(&op.to_text(), None).unwrap();
        assert_eq!(back, op);
        assert_eq!(PauliOperator::from_text("", Some(2)).unwrap(), PauliOperator::zero(2));
        assert!(PauliOperator::from_text("0.5 XQ", None).is_err());
        assert!(PauliOperator::from_text("0.5 XI\n0.5 X", None).is_err());
    }

    #[test]
    fn substitution_removes_qubits() {
        let op = PauliOperator::from_terms(
            3,
            [
                (PauliString::from_label("XZZ").unwrap(), c(1.0, 0.0)),
                (PauliString::from_label("ZIZ").unwrap(), c(2.0, 0.0)),
            ],
        );
        let out = op.substitute_z(0b010, |_| -1.0).unwrap();
        assert_eq!(out.n_qubits(), 2);
        assert_eq!(out.coefficient(&PauliString::from_label("XZ").unwrap()), c(-1.0, 0.0));
        assert_eq!(out.coefficient(&PauliString::from_label("ZZ").unwrap()), c(2.0, 0.0));
        assert!(matches!(
            op.substitute_z(0b001, |_| 1.0),
            Err(Error::SymmetryViolation { qubit: 0 })
        ));
    }
}
