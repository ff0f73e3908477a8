//! Unitary coupled-cluster singles and doubles.
//!
//! Excitations run from occupied to virtual spin-orbitals of the reference
//! determinant: singles `i → a`, then doubles `(i, j) → (a, b)` with `i < j`
//! and `a < b`, each list lexicographic. The generator of `T` is
//! `G = T − T†` with `T = a†_a a_i` or `a†_a a†_b a_j a_i`.
//!
//! The ansatz state is `e^{θ_0 G_0} e^{θ_1 G_1} ⋯ e^{θ_{K−1} G_{K−1}} |ref⟩`,
//! so the last generator (a double, when present) acts on the reference first.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use super::statevector::Statevector;
use crate::error::{Error, Result};
use crate::fci::{annihilate, create, DeterminantBasis, SlaterDeterminant, SparseHamiltonian};
use crate::integrals::OrbitalIntegrals;
use crate::qubits::{PauliOperator, QubitMapping};

/// Hamiltonian couplings below this do not join symmetry blocks.
const BLOCK_TOL: f64 = 1e-12;

/// Which generators survive enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Screening {
    /// Every occupied-to-virtual excitation.
    Off,
    /// Drop excitations that change `S_z`.
    #[default]
    Spin,
    /// `Spin`, and drop excitations whose target determinant is not coupled
    /// to the reference through the Hamiltonian (another symmetry block).
    Symmetry,
}

impl Screening {
    pub fn name(&self) -> &'static str {
        match self {
            Screening::Off => "off",
            Screening::Spin => "spin",
            Screening::Symmetry => "symmetry",
        }
    }
}

impl fmt::Display for Screening {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Screening {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "off" | "none" => Ok(Screening::Off),
            "spin" | "sz" => Ok(Screening::Spin),
            "symmetry" | "on" => Ok(Screening::Symmetry),
            _ => Err(Error::InvalidArgument(format!(
                "unknown screening '{s}' (expected off, spin or symmetry)"
            ))),
        }
    }
}

/// Spin-orbital excitation `from → to`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Excitation {
    pub from: Vec<usize>,
    pub to: Vec<usize>,
}

impl Excitation {
    pub fn rank(&self) -> usize {
        self.from.len()
    }

    /// `Δ(2 S_z)`, counting alpha spin-orbitals `< n_orb` as +1.
    pub fn delta_ms2(&self, n_orb: usize) -> i64 {
        let spin = |p: &usize| if *p < n_orb { 1i64 } else { -1 };
        self.to.iter().map(spin).sum::<i64>() - self.from.iter().map(spin).sum::<i64>()
    }

    /// Ladder sequence of `T`, leftmost operator first.
    fn ladder(&self) -> Vec<(usize, bool)> {
        let mut ops: Vec<(usize, bool)> = self.to.iter().map(|&a| (a, true)).collect();
        ops.extend(self.from.iter().rev().map(|&i| (i, false)));
        ops
    }

    fn ladder_adjoint(&self) -> Vec<(usize, bool)> {
        let mut ops: Vec<(usize, bool)> = self.from.iter().map(|&i| (i, true)).collect();
        ops.extend(self.to.iter().rev().map(|&a| (a, false)));
        ops
    }

    /// `T |occ⟩` as `(occupation, sign)`, or `None` if it vanishes.
    pub fn apply_to(&self, occ: u64) -> Option<(u64, f64)> {
        let mut occ = occ;
        let mut sign = 1.0;
        for &(p, dagger) in self.ladder().iter().rev() {
            let (next, s) = if dagger { create(occ, p)? } else { annihilate(occ, p)? };
            occ = next;
            sign *= s;
        }
        Some((occ, sign))
    }
}

impl fmt::Display for Excitation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |v: &[usize]| v.iter().map(usize::to_string).collect::<Vec<_>>().join(",");
        write!(f, "{}->{}", list(&self.from), list(&self.to))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DropReason {
    SpinFlip,
    OtherSymmetryBlock,
    LeavesTaperedSector,
    Vanishes,
}

/// Reference determinant as a basis state of the mapped register.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReferenceState {
    pub bits: u64,
    pub n_qubits: usize,
}

impl ReferenceState {
    pub fn statevector(&self) -> Result<Statevector> {
        Statevector::basis_state(self.n_qubits, self.bits)
    }
}

#[derive(Debug, Clone)]
pub struct UccsdAnsatz {
    reference: ReferenceState,
    determinant: SlaterDeterminant,
    n_orb: usize,
    screening: Screening,
    excitations: Vec<Excitation>,
    generators: Vec<PauliOperator>,
    dropped: Vec<(Excitation, DropReason)>,
}

impl UccsdAnsatz {
    pub fn reference(&self) -> ReferenceState {
        self.reference
    }

    pub fn reference_determinant(&self) -> SlaterDeterminant {
        self.determinant
    }

    pub fn n_qubits(&self) -> usize {
        self.reference.n_qubits
    }

    pub fn n_orb(&self) -> usize {
        self.n_orb
    }

    pub fn n_params(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn screening(&self) -> Screening {
        self.screening
    }

    pub fn excitations(&self) -> &[Excitation] {
        &self.excitations
    }

    pub fn generators(&self) -> &[PauliOperator] {
        &self.generators
    }

    pub fn dropped(&self) -> &[(Excitation, DropReason)] {
        &self.dropped
    }

    /// One line per parameter, e.g. `theta_0  single  0->1`.
    pub fn describe(&self) -> String {
        let mut out = String::new();
        for (k, e) in self.excitations.iter().enumerate() {
            let kind = if e.rank() == 1 { "single" } else { "double" };
            out.push_str(&format!("theta_{k}  {kind}  {e}\n"));
        }
        out
    }

    /// `Π_k exp(θ_k G_k) |ref⟩`.
    ///
    /// Each generator has eigenvalues `0, ±i`, so `G³ = −G` and
    /// `exp(θG) = 1 + sin θ G + (1 − cos θ) G²`.
    pub fn apply(&self, params: &[f64]) -> Result<Statevector> {
        if params.len() != self.generators.len() {
            return Err(Error::InvalidArgument(format!(
                "ansatz has {} parameters, got {}",
                self.generators.len(),
                params.len()
            )));
        }
        let mut psi = self.reference.statevector()?.amplitudes().to_vec();
        let mut g1 = vec![Complex64::default(); psi.len()];
        let mut g2 = vec![Complex64::default(); psi.len()];
        for (g, &theta) in self.generators.iter().zip(params).rev() {
            if theta == 0.0 {
                continue;
            }
            g1.fill(Complex64::default());
            g2.fill(Complex64::default());
            g.apply_into(&psi, &mut g1);
            g.apply_into(&g1, &mut g2);
            let (s, c) = theta.sin_cos();
            for ((p, a), b) in psi.iter_mut().zip(&g1).zip(&g2) {
                *p += a * s + b * (1.0 - c);
            }
        }
        Statevector::from_amplitudes(psi)
    }
}

/// Enumerates singles and doubles of `reference` and maps them.
///
/// `ints` (folded onto the mapped orbitals) is required for
/// [`Screening::Symmetry`].
pub fn build_uccsd(
    reference: &SlaterDeterminant,
    mapping: &QubitMapping,
    screening: Screening,
    ints: Option<&OrbitalIntegrals>,
) -> Result<UccsdAnsatz> {
    let n = mapping.n_orb();
    let mask = if n >= 64 { u64::MAX } else { (1u64 << n) - 1 };
    if reference.alpha & !mask != 0 || reference.beta & !mask != 0 {
        return Err(Error::InvalidArgument(format!(
            "reference occupies orbitals beyond the {n} mapped ones"
        )));
    }
    let bits = mapping.basis_state(reference)?;
    let occ = reference.spin_orbitals(n);

    let block = match screening {
        Screening::Symmetry => {
            let ints = ints.ok_or_else(|| {
                Error::InvalidArgument("symmetry screening needs the active-space integrals".into())
            })?;
            Some(coupled_block(reference, ints)?)
        }
        _ => None,
    };

    let occupied: Vec<usize> = (0..2 * n).filter(|&p| occ >> p & 1 == 1).collect();
    let virtuals: Vec<usize> = (0..2 * n).filter(|&p| occ >> p & 1 == 0).collect();
    let mut candidates = Vec::new();
    for &i in &occupied {
        for &a in &virtuals {
            candidates.push(Excitation { from: vec![i], to: vec![a] });
        }
    }
    for (x, &i) in occupied.iter().enumerate() {
        for &j in &occupied[x + 1..] {
            for (y, &a) in virtuals.iter().enumerate() {
                for &b in &virtuals[y + 1..] {
                    candidates.push(Excitation {
                        from: vec![i, j],
                        to: vec![a, b],
                    });
                }
            }
        }
    }

    let mut excitations = Vec::new();
    let mut generators = Vec::new();
    let mut dropped = Vec::new();
    for e in candidates {
        if screening != Screening::Off && e.delta_ms2(n) != 0 {
            dropped.push((e, DropReason::SpinFlip));
            continue;
        }
        if let Some(block) = &block {
            let target = e.apply_to(occ).map(|(o, _)| SlaterDeterminant::from_spin_orbitals(o, n));
            if !target.is_some_and(|d| block.contains(&d)) {
                dropped.push((e, DropReason::OtherSymmetryBlock));
                continue;
            }
        }
        let g = match mapping.fermion_operator(&[(1.0, e.ladder()), (-1.0, e.ladder_adjoint())]) {
            Ok(g) => g,
            Err(Error::SymmetryViolation { .. }) => {
                dropped.push((e, DropReason::LeavesTaperedSector));
                continue;
            }
            Err(err) => return Err(err),
        };
        if g.is_empty() {
            dropped.push((e, DropReason::Vanishes));
            continue;
        }
        excitations.push(e);
        generators.push(g);
    }

    Ok(UccsdAnsatz {
        reference: ReferenceState {
            bits,
            n_qubits: mapping.n_qubits(),
        },
        determinant: *reference,
        n_orb: n,
        screening,
        excitations,
        generators,
        dropped,
    })
}

/// Determinants of the reference's sector reachable through non-zero
/// Hamiltonian couplings.
fn coupled_block(reference: &SlaterDeterminant, ints: &OrbitalIntegrals) -> Result<Vec<SlaterDeterminant>> {
    let basis = DeterminantBasis::new(
        ints.n_orb(),
        reference.alpha.count_ones() as usize,
        reference.beta.count_ones() as usize,
    )?;
    let start = basis
        .index_of(reference)
        .ok_or_else(|| Error::InvalidArgument("reference is not in its own sector".into()))?;
    let ham = SparseHamiltonian::build(&basis, ints)?;
    let mut seen = vec![false; basis.len()];
    let mut queue = VecDeque::from([start]);
    seen[start] = true;
    while let Some(i) = queue.pop_front() {
        for (j, h) in ham.row(i) {
            if !seen[j] && h.abs() > BLOCK_TOL {
                seen[j] = true;
                queue.push_back(j);
            }
        }
    }
    Ok((0..basis.len()).filter(|&i| seen[i]).map(|i| basis.get(i)).collect())
}
