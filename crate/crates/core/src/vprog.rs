//! The programmable circuit V and the compiler from Kitaev-basis circuits
//! to V programs.
//!
//! One iteration of V runs five phases over a classical swap program, a
//! two-bit cursor, the data register and a classical Hadamard program:
//!
//! 1. rotate the swap program up by one;
//! 2. if the lower-most swap bit is 0, cycle the cursor `⟳ → ⊣ → ⊢ → ⟳`;
//! 3. rotate all data qubits but the last up by one;
//! 4. on `⟳` swap the last two data qubits, on `⊢` apply `CS` between them
//!    and then `H` on the last one if the top Hadamard bit is 1;
//! 5. rotate the Hadamard program up by one.
//!
//! Data qubits are tracked as labelled wires: the register keeps its state
//! in circuit-qubit order and `order[pos]` names the qubit currently held at
//! position `pos`, so the permutation phases only reorder labels.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::qcore::{apply_gate, BasisLabel, Circuit, Gate, GateKind, Statevector};

/// Four-state cursor, encoded as two classical bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Cursor {
    /// `∅`, inactive.
    Empty,
    /// `⟳`, cycle all data qubits.
    Cycle,
    /// `⊣`, cycle all but the last data qubit.
    HoldCycle,
    /// `⊢`, apply a gate to the last two data qubits.
    Gate,
}

impl Cursor {
    pub const ACTIVE: [Cursor; 3] = [Cursor::Cycle, Cursor::HoldCycle, Cursor::Gate];

    pub fn bits(self) -> u8 {
        match self {
            Cursor::Empty => 0b00,
            Cursor::Cycle => 0b01,
            Cursor::HoldCycle => 0b10,
            Cursor::Gate => 0b11,
        }
    }

    pub fn from_bits(bits: u8) -> Cursor {
        match bits & 0b11 {
            0b00 => Cursor::Empty,
            0b01 => Cursor::Cycle,
            0b10 => Cursor::HoldCycle,
            _ => Cursor::Gate,
        }
    }

    /// The Phase II permutation.
    pub fn advance(self) -> Cursor {
        match self {
            Cursor::Empty => Cursor::Empty,
            Cursor::Cycle => Cursor::HoldCycle,
            Cursor::HoldCycle => Cursor::Gate,
            Cursor::Gate => Cursor::Cycle,
        }
    }

    #[inline]
    pub fn is_active(self) -> bool {
        self != Cursor::Empty
    }
}

/// One gate block: `CS(control, target)` followed by `H(target)` when
/// `hadamard` is set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GatePass {
    pub control: usize,
    pub target: usize,
    pub hadamard: bool,
}

impl GatePass {
    pub fn gates(&self) -> Vec<Gate> {
        let mut out = vec![Gate::cs(self.control, self.target)];
        if self.hadamard {
            out.push(Gate::h(self.target));
        }
        out
    }
}

/// Program-region initialisation for V.
///
/// Each iteration consumes one swap bit and one Hadamard bit, so both strings
/// have length `iterations`. The last swap bit is the stop bit (always 1 for
/// compiled programs). `data_order[pos]` is the circuit qubit loaded into data
/// position `pos`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VProgram {
    pub n: usize,
    pub swap_bits: Vec<bool>,
    pub hadamard_bits: Vec<bool>,
    pub data_order: Vec<usize>,
    pub iterations: usize,
}

impl VProgram {
    pub fn validate(&self) -> Result<()> {
        if self.swap_bits.len() != self.iterations || self.hadamard_bits.len() != self.iterations {
            return Err(Error::Domain(alloc::format!(
                "program strings ({} swap, {} hadamard) disagree with {} iterations",
                self.swap_bits.len(),
                self.hadamard_bits.len(),
                self.iterations
            )));
        }
        if self.data_order.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: self.data_order.len(),
            });
        }
        let mut seen = vec![false; self.n];
        for &q in &self.data_order {
            if q >= self.n || seen[q] {
                return Err(Error::Domain(alloc::format!(
                    "data order {:?} is not a permutation",
                    self.data_order
                )));
            }
            seen[q] = true;
        }
        Ok(())
    }

    /// Program length: the number of V iterations (equal to the swap and
    /// Hadamard string lengths).
    #[inline]
    pub fn len(&self) -> usize {
        self.iterations
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.iterations == 0
    }

    /// Swap plus Hadamard program qubits.
    pub fn program_qubits(&self) -> usize {
        self.swap_bits.len() + self.hadamard_bits.len()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VState {
    pub cursor: Cursor,
    pub swap: Vec<bool>,
    pub hadamard: Vec<bool>,
    /// `order[pos]` is the circuit qubit held at data position `pos`.
    pub order: Vec<usize>,
    pub data: Statevector,
}

impl VState {
    /// Loads a program and an input state.
    ///
    /// The first iteration's Phase I must expose the program's final bit, so
    /// the swap register starts rotated down by one; the cursor starts at `⊢`
    /// so the first iteration is a gate block.
    pub fn load(prog: &VProgram, input: &Statevector) -> Result<Self> {
        prog.validate()?;
        if input.basis() != BasisLabel::DataRegister {
            return Err(Error::WrongBasis);
        }
        if input.qubits() != prog.n {
            return Err(Error::DimensionMismatch {
                expected: prog.n,
                found: input.qubits(),
            });
        }
        let mut swap = prog.swap_bits.clone();
        if !swap.is_empty() {
            swap.rotate_right(1);
        }
        Ok(Self {
            cursor: Cursor::Gate,
            swap,
            hadamard: prog.hadamard_bits.clone(),
            order: prog.data_order.clone(),
            data: input.clone(),
        })
    }
}

/// One pass of V (Phases I to V).
pub fn iterate_v(state: &VState) -> VState {
    let mut next = state.clone();
    let n = next.order.len();

    // Phase I
    if next.swap.len() >= 2 {
        next.swap.rotate_left(1);
    }
    // Phase II
    if next.swap.last() == Some(&false) {
        next.cursor = next.cursor.advance();
    }
    // Phase III
    if n >= 3 {
        next.order[..n - 1].rotate_left(1);
    }
    // Phase IV
    if n >= 2 {
        let (pen, last) = (next.order[n - 2], next.order[n - 1]);
        match next.cursor {
            Cursor::Cycle => next.order.swap(n - 2, n - 1),
            Cursor::Gate => {
                let mut gates = vec![Gate::cs(pen, last)];
                if next.hadamard.first() == Some(&true) {
                    gates.push(Gate::h(last));
                }
                for g in &gates {
                    next.data = apply_gate(&next.data, g).expect("wires come from the order permutation");
                }
            }
            Cursor::Empty | Cursor::HoldCycle => {}
        }
    }
    // Phase V
    if next.hadamard.len() >= 2 {
        next.hadamard.rotate_left(1);
    }
    next
}

/// Runs a program on `input` and returns the data register in circuit-qubit
/// order.
pub fn simulate_program(prog: &VProgram, input: &Statevector) -> Result<Statevector> {
    let mut state = VState::load(prog, input)?;
    for _ in 0..prog.iterations {
        state = iterate_v(&state);
    }
    Ok(state.data)
}

/// Lowers a circuit to gate blocks: `CS(c,t)` directly followed by `H(t)`
/// fuses into one block, and a lone `H(q)` becomes `CS(p,q)^3` followed by
/// `(I⊗H) CS(p,q)` for a partner `p` picked by the router.
fn lower(circuit: &Circuit) -> Vec<Lowered> {
    let gates = circuit.gates();
    let mut out = Vec::new();
    let mut i = 0;
    while i < gates.len() {
        let g = &gates[i];
        match g.kind {
            GateKind::ControlledS => {
                let (c, t) = (g.wires[0], g.wires[1]);
                let fuse = gates
                    .get(i + 1)
                    .is_some_and(|h| h.kind == GateKind::H && h.wires[0] == t);
                out.push(Lowered::Pass(GatePass {
                    control: c,
                    target: t,
                    hadamard: fuse,
                }));
                i += if fuse { 2 } else { 1 };
            }
            GateKind::H => {
                out.push(Lowered::Hadamard(g.wires[0]));
                i += 1;
            }
            _ => unreachable!("circuits hold only Kitaev-basis gates"),
        }
    }
    out
}

enum Lowered {
    Pass(GatePass),
    Hadamard(usize),
}

/// Accumulates passes while tracking where each qubit sits.
struct Router {
    n: usize,
    /// Data order at load time.
    order_at_load: Vec<usize>,
    order: Vec<usize>,
    /// Swap bits for passes 1, 2, ... (pass 0 needs none).
    swap: Vec<bool>,
    hadamard: Vec<bool>,
    passes: Vec<GatePass>,
}

impl Router {
    fn first(n: usize, pass: GatePass) -> Self {
        let mut order = vec![pass.control];
        order.extend((0..n).filter(|&q| q != pass.control && q != pass.target));
        order.push(pass.target);
        let mut r = Router {
            n,
            order_at_load: order.clone(),
            order,
            swap: Vec::new(),
            hadamard: vec![pass.hadamard],
            passes: vec![pass],
        };
        r.hold_rotate();
        r
    }

    fn hold_rotate(&mut self) {
        let n = self.n;
        if n >= 3 {
            self.order[..n - 1].rotate_left(1);
        }
    }

    fn full_rotate(&mut self) {
        self.order.rotate_left(1);
    }

    fn position(&self, q: usize) -> usize {
        self.order.iter().position(|&x| x == q).expect("qubit present")
    }

    /// Full rotations needed to bring `target` to the last slot, in `1..=n`.
    fn cycle_count(&self, target: usize) -> usize {
        let r = (self.position(target) + 1) % self.n;
        if r == 0 {
            self.n
        } else {
            r
        }
    }

    /// Partial rotations (including the gate block's own) needed to bring
    /// block index `idx` to the penultimate slot, in `2..=n`.
    fn hold_count(&self, idx: usize) -> usize {
        let m = self.n - 1;
        if m == 1 {
            return 2;
        }
        let s = (idx + 1) % m;
        if s < 2 {
            s + m
        } else {
            s
        }
    }

    fn push(&mut self, beta: bool, hadamard: bool) {
        self.swap.push(beta);
        self.hadamard.push(hadamard);
    }

    /// Emits the cycle, hold-cycle and gate passes for `pass`.
    fn route(&mut self, pass: GatePass) {
        let cycles = self.cycle_count(pass.target);
        for k in 0..cycles {
            self.push(k != 0, false);
            self.full_rotate();
        }
        let idx = self.position(pass.control);
        let holds = self.hold_count(idx);
        for k in 0..holds - 1 {
            self.push(k != 0, false);
            self.hold_rotate();
        }
        self.push(false, pass.hadamard);
        self.hold_rotate();
        debug_assert_eq!(self.order[self.n - 2], pass.control);
        debug_assert_eq!(self.order[self.n - 1], pass.target);
        self.passes.push(pass);
    }

    /// Partner for a lone Hadamard on `q`: the qubit that reaches the
    /// penultimate slot with the fewest hold-cycle passes.
    fn hadamard_partner(&self, q: usize) -> usize {
        let mut probe = self.order.clone();
        probe.rotate_left(self.cycle_count(q) % self.n);
        debug_assert_eq!(probe[self.n - 1], q);
        if self.n >= 3 {
            probe[1]
        } else {
            probe[0]
        }
    }
}

/// Compiles a Kitaev-basis circuit into a V program.
pub fn compile(circuit: &Circuit) -> Result<VProgram> {
    Ok(compile_with_passes(circuit)?.0)
}

/// Compiles and also returns the gate blocks in execution order.
pub fn compile_with_passes(circuit: &Circuit) -> Result<(VProgram, Vec<GatePass>)> {
    let n = circuit.qubits();
    if n < 2 {
        return Err(Error::Domain(alloc::format!(
            "controlled-S needs two wires; circuit has {n} qubit(s)"
        )));
    }
    let lowered = lower(circuit);
    if lowered.is_empty() {
        let prog = VProgram {
            n,
            swap_bits: Vec::new(),
            hadamard_bits: Vec::new(),
            data_order: (0..n).collect(),
            iterations: 0,
        };
        return Ok((prog, Vec::new()));
    }

    let mut router: Option<Router> = None;
    let emit = |pass: GatePass, router: &mut Option<Router>| match router {
        None => *router = Some(Router::first(n, pass)),
        Some(r) => r.route(pass),
    };
    for item in lowered {
        match item {
            Lowered::Pass(p) => emit(p, &mut router),
            Lowered::Hadamard(q) => {
                let partner = match &router {
                    None => (0..n).find(|&x| x != q).expect("n >= 2"),
                    Some(r) => r.hadamard_partner(q),
                };
                for k in 0..4 {
                    let pass = GatePass {
                        control: partner,
                        target: q,
                        hadamard: k == 3,
                    };
                    emit(pass, &mut router);
                }
            }
        }
    }
    let mut r = router.expect("non-empty circuit");
    // stop bit
    r.swap.push(true);
    let iterations = r.swap.len();
    debug_assert_eq!(iterations, r.hadamard.len());
    let prog = VProgram {
        n,
        swap_bits: r.swap,
        hadamard_bits: r.hadamard,
        data_order: r.order_at_load,
        iterations,
    };
    Ok((prog, r.passes))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{circuit_unitary, Amplitude};

    fn appendix_circuit() -> Circuit {
        Circuit::new(3, vec![Gate::cs(1, 2), Gate::h(2), Gate::cs(2, 0)]).unwrap()
    }

    fn column(u: &crate::linalg::CMatrix, j: usize) -> Vec<Amplitude> {
        (0..u.dim()).map(|i| u[(i, j)]).collect()
    }

    fn assert_program_matches(circuit: &Circuit) {
        let prog = compile(circuit).unwrap();
        let u = circuit_unitary(circuit).unwrap();
        for x in 0..1usize << circuit.qubits() {
            let input = Statevector::basis_state(circuit.qubits(), x);
            let out = simulate_program(&prog, &input).unwrap();
            let expect = Statevector::new(column(&u, x), BasisLabel::DataRegister).unwrap();
            assert!(out.distance(&expect) < 1e-10, "input {x}");
        }
        assert!(prog.len() <= circuit.program_size_bound());
    }

    #[test]
    fn appendix_compiles_to_published_programming() {
        let prog = compile(&appendix_circuit()).unwrap();
        let bits = |v: &[bool]| {
            v.iter()
                .map(|&b| if b { '1' } else { '0' })
                .collect::<alloc::string::String>()
        };
        assert_eq!(bits(&prog.swap_bits), "0001");
        assert_eq!(bits(&prog.hadamard_bits), "1000");
        assert_eq!(prog.data_order, vec![1, 0, 2]);
        assert_eq!(prog.iterations, 4);
        assert_program_matches(&appendix_circuit());
    }

    #[test]
    fn single_cs_on_last_wires_is_one_block() {
        let c = Circuit::new(2, vec![Gate::cs(0, 1)]).unwrap();
        let prog = compile(&c).unwrap();
        assert_eq!(prog.iterations, 1);
        let out = simulate_program(&prog, &Statevector::basis_state(2, 3)).unwrap();
        assert!((out.amps()[3] - Amplitude::new(0.0, 1.0)).norm() < 1e-12);
    }

    #[test]
    fn empty_circuit_is_identity() {
        let c = Circuit::new(3, vec![]).unwrap();
        let prog = compile(&c).unwrap();
        assert!(prog.is_empty() && prog.swap_bits.is_empty() && prog.hadamard_bits.is_empty());
        let x = Statevector::basis_state(3, 5);
        assert_eq!(simulate_program(&prog, &x).unwrap(), x);
    }

    #[test]
    fn lone_hadamard_uses_controlled_s_trick() {
        let c = Circuit::new(2, vec![Gate::h(0)]).unwrap();
        assert_program_matches(&c);
        let prog = compile(&c).unwrap();
        let out = simulate_program(&prog, &Statevector::basis_state(2, 0)).unwrap();
        let r = core::f64::consts::FRAC_1_SQRT_2;
        assert!((out.amps()[0].re - r).abs() < 1e-12 && (out.amps()[2].re - r).abs() < 1e-12);
    }

    #[test]
    fn one_qubit_circuit_rejected() {
        let c = Circuit::new(1, vec![Gate::h(0)]).unwrap();
        assert!(compile(&c).is_err());
    }

    #[test]
    fn mixed_circuits_match() {
        let cases = [
            vec![Gate::cs(0, 1), Gate::cs(1, 0), Gate::h(1), Gate::h(0)],
            vec![Gate::h(2), Gate::cs(0, 2), Gate::h(3), Gate::cs(3, 1), Gate::h(3)],
            vec![Gate::cs(2, 0), Gate::cs(2, 0), Gate::h(1), Gate::cs(1, 2)],
        ];
        for gates in cases {
            let n = gates.iter().flat_map(|g| g.wires.iter()).max().unwrap() + 1;
            assert_program_matches(&Circuit::new(n.max(2), gates).unwrap());
        }
    }

    fn state(cursor: Cursor, swap: &[bool], hadamard: &[bool]) -> VState {
        VState {
            cursor,
            swap: swap.to_vec(),
            hadamard: hadamard.to_vec(),
            order: vec![0, 1, 2],
            data: Statevector::basis_state(3, 0b011),
        }
    }

    #[test]
    fn behaviour_one_cycles_everything() {
        // top swap bit 1 becomes the lower-most after Phase I
        let s = state(Cursor::Cycle, &[true, false, true], &[false, true]);
        let next = iterate_v(&s);
        assert_eq!(next.cursor, Cursor::Cycle);
        assert_eq!(next.swap, vec![false, true, true]);
        assert_eq!(next.hadamard, vec![true, false]);
        assert_eq!(next.order, vec![1, 2, 0]);
        assert_eq!(next.data, s.data);
    }

    #[test]
    fn behaviour_three_applies_gate() {
        let s = state(Cursor::HoldCycle, &[false, true, true], &[true, false]);
        let next = iterate_v(&s);
        assert_eq!(next.cursor, Cursor::Gate);
        assert_eq!(next.order, vec![1, 0, 2]);
        // CS(0, 2) leaves |011> alone, then H on qubit 2
        let r = core::f64::consts::FRAC_1_SQRT_2;
        assert!((next.data.amps()[0b010].re - r).abs() < 1e-12);
        assert!((next.data.amps()[0b011].re + r).abs() < 1e-12);
    }

    #[test]
    fn phase_two_is_idle_on_set_bit() {
        let s = state(Cursor::Cycle, &[true, true], &[false]);
        assert_eq!(iterate_v(&s).cursor, Cursor::Cycle);
    }

    #[test]
    fn cursor_visits_each_state_once_per_block() {
        let mut c = Cursor::Cycle;
        let mut seen = vec![c];
        for _ in 0..2 {
            c = c.advance();
            seen.push(c);
        }
        assert_eq!(seen, Cursor::ACTIVE.to_vec());
        assert_eq!(c.advance(), Cursor::Cycle);
        assert_eq!(Cursor::Empty.advance(), Cursor::Empty);
        for c in [Cursor::Empty, Cursor::Cycle, Cursor::HoldCycle, Cursor::Gate] {
            assert_eq!(Cursor::from_bits(c.bits()), c);
        }
    }
}
