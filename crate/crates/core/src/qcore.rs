//! Gate and statevector primitives.
//!
//! Qubit 0 is the top wire of a circuit diagram and the most significant bit
//! of a basis index, so `|q0 q1 ... q(n-1)>` maps to index
//! `q0 * 2^(n-1) + ... + q(n-1)`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::FRAC_1_SQRT_2;
use core::fmt;

use num_complex::Complex64;
#[allow(unused_imports)] // inherent methods shadow these when std is linked
use num_traits::Float;

use crate::error::{Error, Result};
use crate::linalg::CMatrix;

pub type Amplitude = Complex64;

/// Tolerance for unitarity and norm checks.
pub const UNITARY_TOL: f64 = 1e-10;

/// Largest register for which dense unitaries are built.
pub const MAX_DENSE_QUBITS: usize = 10;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisLabel {
    /// Computational basis of an n-qubit data register.
    DataRegister,
    /// Configuration basis `psi_0 .. psi_Tbar` of the walk line.
    WalkLine,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Statevector {
    amps: Vec<Amplitude>,
    basis: BasisLabel,
}

impl Statevector {
    pub fn new(amps: Vec<Amplitude>, basis: BasisLabel) -> Result<Self> {
        if amps.is_empty() {
            return Err(Error::Degenerate("empty statevector"));
        }
        if basis == BasisLabel::DataRegister && !amps.len().is_power_of_two() {
            return Err(Error::Domain(format!(
                "data-register dimension {} is not a power of two",
                amps.len()
            )));
        }
        if amps.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::NonFinite("amplitude"));
        }
        Ok(Self { amps, basis })
    }

    /// Computational basis state `|index>` on `n` qubits.
    pub fn basis_state(n: usize, index: usize) -> Self {
        let mut amps = vec![ZERO; 1 << n];
        amps[index] = ONE;
        Self {
            amps,
            basis: BasisLabel::DataRegister,
        }
    }

    /// Basis vector `e_index` of a walk line of the given dimension.
    pub fn line_site(dim: usize, index: usize) -> Self {
        let mut amps = vec![ZERO; dim];
        amps[index] = ONE;
        Self {
            amps,
            basis: BasisLabel::WalkLine,
        }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    #[inline]
    pub fn basis(&self) -> BasisLabel {
        self.basis
    }

    /// Qubit count of a data-register state.
    pub fn qubits(&self) -> usize {
        self.amps.len().trailing_zeros() as usize
    }

    #[inline]
    pub fn amps(&self) -> &[Amplitude] {
        &self.amps
    }

    pub fn into_amps(self) -> Vec<Amplitude> {
        self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &Statevector) -> Amplitude {
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum()
    }

    /// Euclidean distance `||self - other||`.
    pub fn distance(&self, other: &Statevector) -> f64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GateKind {
    X,
    H,
    S,
    ControlledS,
    Swap,
    SigmaCascade,
    ControlledH,
}

impl GateKind {
    pub fn name(self) -> &'static str {
        match self {
            GateKind::X => "X",
            GateKind::H => "H",
            GateKind::S => "S",
            GateKind::ControlledS => "CS",
            GateKind::Swap => "SWAP",
            GateKind::SigmaCascade => "SIGMA",
            GateKind::ControlledH => "CH",
        }
    }

    /// Fixed arity, or `None` for the variable-width swap cascade.
    pub fn arity(self) -> Option<usize> {
        match self {
            GateKind::X | GateKind::H | GateKind::S => Some(1),
            GateKind::ControlledS | GateKind::Swap | GateKind::ControlledH => Some(2),
            GateKind::SigmaCascade => None,
        }
    }

    /// Local matrix for fixed-arity kinds; for two-qubit gates the first wire
    /// is the more significant bit.
    pub fn matrix(self) -> Option<CMatrix> {
        let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
        let m = match self {
            GateKind::X => CMatrix::from_rows(&[&[ZERO, ONE], &[ONE, ZERO]]),
            GateKind::H => CMatrix::from_rows(&[&[h, h], &[h, -h]]),
            GateKind::S => CMatrix::diagonal(&[ONE, I]),
            GateKind::ControlledS => CMatrix::diagonal(&[ONE, ONE, ONE, I]),
            GateKind::Swap => CMatrix::from_rows(&[
                &[ONE, ZERO, ZERO, ZERO],
                &[ZERO, ZERO, ONE, ZERO],
                &[ZERO, ONE, ZERO, ZERO],
                &[ZERO, ZERO, ZERO, ONE],
            ]),
            GateKind::ControlledH => CMatrix::from_rows(&[
                &[ONE, ZERO, ZERO, ZERO],
                &[ZERO, ONE, ZERO, ZERO],
                &[ZERO, ZERO, h, h],
                &[ZERO, ZERO, h, -h],
            ]),
            GateKind::SigmaCascade => return None,
        };
        Some(m)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Gate {
    pub kind: GateKind,
    pub wires: Vec<usize>,
}

impl Gate {
    pub fn new(kind: GateKind, wires: Vec<usize>) -> Self {
        Self { kind, wires }
    }

    pub fn h(q: usize) -> Self {
        Self::new(GateKind::H, vec![q])
    }

    pub fn cs(control: usize, target: usize) -> Self {
        Self::new(GateKind::ControlledS, vec![control, target])
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        match self.kind.arity() {
            Some(k) if k != self.wires.len() => {
                return Err(Error::WireCount {
                    kind: self.kind.name(),
                    expected: k,
                    found: self.wires.len(),
                })
            }
            None if self.wires.len() < 2 => return Err(Error::SigmaTooShort(self.wires.len())),
            _ => {}
        }
        for (i, &w) in self.wires.iter().enumerate() {
            if w >= n {
                return Err(Error::WireOutOfRange { wire: w, n });
            }
            if self.wires[..i].contains(&w) {
                return Err(Error::DuplicateWire(w));
            }
        }
        Ok(())
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.kind.name())?;
        for w in &self.wires {
            write!(f, " {w}")?;
        }
        Ok(())
    }
}

/// Checks every fixed-arity gate matrix for unitarity.
pub fn self_test() -> Result<()> {
    for kind in [
        GateKind::X,
        GateKind::H,
        GateKind::S,
        GateKind::ControlledS,
        GateKind::Swap,
        GateKind::ControlledH,
    ] {
        let m = kind.matrix().expect("fixed arity");
        if !m.is_unitary(1e-12) {
            return Err(Error::Domain(format!("{} matrix is not unitary", kind.name())));
        }
    }
    Ok(())
}

/// A circuit over the Kitaev basis `{H, CS}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circuit {
    n: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(n: usize, gates: Vec<Gate>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Degenerate("circuit with zero qubits"));
        }
        for g in &gates {
            if !matches!(g.kind, GateKind::H | GateKind::ControlledS) {
                return Err(Error::UnsupportedGate(format!("{g}")));
            }
            g.validate(n)?;
        }
        Ok(Self { n, gates })
    }

    #[inline]
    pub fn qubits(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    /// Total gate count `T`.
    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn hadamard_count(&self) -> usize {
        self.gates.iter().filter(|g| g.kind == GateKind::H).count()
    }

    pub fn controlled_s_count(&self) -> usize {
        self.gates.iter().filter(|g| g.kind == GateKind::ControlledS).count()
    }

    /// `4n(T_CS + 2 T_H)`.
    pub fn program_size_bound(&self) -> usize {
        4 * self.n * (self.controlled_s_count() + 2 * self.hadamard_count())
    }
}

/// Applies `gate` to a data-register state, returning a new state.
pub fn apply_gate(state: &Statevector, gate: &Gate) -> Result<Statevector> {
    if state.basis != BasisLabel::DataRegister {
        return Err(Error::WrongBasis);
    }
    let n = state.qubits();
    gate.validate(n)?;
    let mut amps = state.amps.clone();
    match gate.kind {
        GateKind::SigmaCascade => {
            let swap = GateKind::Swap.matrix().expect("swap");
            for pair in gate.wires.windows(2) {
                apply_two(&mut amps, n, pair[0], pair[1], &swap);
            }
        }
        kind => {
            let m = kind.matrix().expect("fixed arity");
            match gate.wires.as_slice() {
                [q] => apply_one(&mut amps, n, *q, &m),
                [a, b] => apply_two(&mut amps, n, *a, *b, &m),
                _ => unreachable!("validated arity"),
            }
        }
    }
    Ok(Statevector {
        amps,
        basis: BasisLabel::DataRegister,
    })
}

#[inline]
fn bit_mask(n: usize, q: usize) -> usize {
    1 << (n - 1 - q)
}

fn apply_one(amps: &mut [Amplitude], n: usize, q: usize, m: &CMatrix) {
    let mask = bit_mask(n, q);
    for i in 0..amps.len() {
        if i & mask != 0 {
            continue;
        }
        let (a0, a1) = (amps[i], amps[i | mask]);
        amps[i] = m[(0, 0)] * a0 + m[(0, 1)] * a1;
        amps[i | mask] = m[(1, 0)] * a0 + m[(1, 1)] * a1;
    }
}

fn apply_two(amps: &mut [Amplitude], n: usize, hi: usize, lo: usize, m: &CMatrix) {
    let (mh, ml) = (bit_mask(n, hi), bit_mask(n, lo));
    for i in 0..amps.len() {
        if i & (mh | ml) != 0 {
            continue;
        }
        let idx = [i, i | ml, i | mh, i | mh | ml];
        let v = idx.map(|k| amps[k]);
        for (r, &k) in idx.iter().enumerate() {
            amps[k] = (0..4).map(|c| m[(r, c)] * v[c]).sum();
        }
    }
}

/// Cyclic shift of cell contents realised by the swap cascade:
/// `(x1, x2, ..., xm) -> (x2, ..., xm, x1)`.
pub fn apply_sigma<T: Clone>(cells: &[T]) -> Result<Vec<T>> {
    if cells.len() < 2 {
        return Err(Error::SigmaTooShort(cells.len()));
    }
    let mut out = Vec::with_capacity(cells.len());
    out.extend_from_slice(&cells[1..]);
    out.push(cells[0].clone());
    Ok(out)
}

/// Embeds a gate as a dense `2^n x 2^n` matrix.
fn embed(gate: &Gate, n: usize) -> CMatrix {
    let dim = 1 << n;
    if gate.kind == GateKind::SigmaCascade {
        let mut acc = CMatrix::identity(dim);
        for pair in gate.wires.windows(2) {
            let s = embed(&Gate::new(GateKind::Swap, pair.to_vec()), n);
            acc = &s * &acc;
        }
        return acc;
    }
    let local = gate.kind.matrix().expect("fixed arity");
    let masks: Vec<usize> = gate.wires.iter().map(|&w| bit_mask(n, w)).collect();
    let all: usize = masks.iter().sum();
    let local_index = |i: usize| {
        masks
            .iter()
            .fold(0usize, |acc, &m| (acc << 1) | usize::from(i & m != 0))
    };
    let mut out = CMatrix::zeros(dim);
    for r in 0..dim {
        for c in 0..dim {
            if r & !all == c & !all {
                out[(r, c)] = local[(local_index(r), local_index(c))];
            }
        }
    }
    out
}

/// Dense product `U_T ... U_1` of the circuit.
pub fn circuit_unitary(circuit: &Circuit) -> Result<CMatrix> {
    gates_unitary(circuit.n, circuit.gates.iter())
}

/// Dense product of an arbitrary gate sequence on `n` qubits.
pub fn gates_unitary<'a>(n: usize, gates: impl IntoIterator<Item = &'a Gate>) -> Result<CMatrix> {
    if n > MAX_DENSE_QUBITS {
        return Err(Error::Capacity {
            what: "dense unitary qubit count",
            limit: MAX_DENSE_QUBITS,
        });
    }
    let mut acc = CMatrix::identity(1 << n);
    for g in gates {
        g.validate(n)?;
        acc = &embed(g, n) * &acc;
    }
    Ok(acc)
}
