//! The ring Hamiltonian restricted to the configurations reachable from
//! `psi_0`, the check that it is a unit-hopping line in the rotated basis,
//! and the local-projector initial Hamiltonian with its kernel counters.

use alloc::collections::VecDeque;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::hash::{BuildHasher, Hash};
use core::ops::Range;

use hashbrown::hash_table::{Entry, HashTable};
use hashbrown::DefaultHashBuilder;

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::qcore::{Amplitude, Gate, GateKind};
use crate::ring::{initial_configuration, Bit, DataLabel, RingConfiguration};
use crate::rules::{enumerate_trajectory_with, GateEvent, RuleTable, DEFAULT_STEP_CAP};
use crate::vprog::{Cursor, VProgram};

/// Largest data register the restricted Hamiltonian is built for.
pub const MAX_RESTRICTED_QUBITS: usize = 4;
/// Default cap on the restricted basis size.
pub const DEFAULT_BASIS_CAP: usize = 1 << 23;
/// Tolerance for the effective-Hamiltonian comparison.
pub const EQUIVALENCE_TOL: f64 = 1e-10;

/// One basis vector: a configuration and a computational-basis string of
/// the data register, indexed in circuit-qubit order (qubit 0 is the most
/// significant bit).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BasisState {
    pub config: RingConfiguration,
    pub data_basis: usize,
}

/// Coordinate-form Hermitian matrix on the reachable basis. Basis index is
/// `config_index * 2^n + data_basis`.
#[derive(Debug, Clone)]
pub struct SparseHamiltonian {
    n: usize,
    labels: Vec<DataLabel>,
    configs: Vec<RingConfiguration>,
    entries: Vec<(u32, u32, Amplitude)>,
}

impl SparseHamiltonian {
    pub fn dim(&self) -> usize {
        self.configs.len() << self.n
    }

    pub fn qubits(&self) -> usize {
        self.n
    }

    pub fn labels(&self) -> &[DataLabel] {
        &self.labels
    }

    pub fn configs(&self) -> &[RingConfiguration] {
        &self.configs
    }

    /// Entries sorted by `(row, col)`, duplicates merged.
    pub fn entries(&self) -> &[(u32, u32, Amplitude)] {
        &self.entries
    }

    pub fn basis_state(&self, index: usize) -> BasisState {
        BasisState {
            config: self.configs[index >> self.n].clone(),
            data_basis: index & ((1 << self.n) - 1),
        }
    }

    pub fn index_of(&self, state: &BasisState) -> Option<usize> {
        self.configs
            .iter()
            .position(|c| *c == state.config)
            .map(|i| (i << self.n) | state.data_basis)
    }

    /// Exact structural Hermiticity: every `(r, c, v)` has a partner
    /// `(c, r, v*)` within `tol`.
    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.entries.iter().all(|&(r, c, v)| {
            self.entries
                .binary_search_by(|&(r2, c2, _)| (r2, c2).cmp(&(c, r)))
                .is_ok_and(|k| (self.entries[k].2 - v.conj()).norm() <= tol)
        })
    }

    /// Largest number of stored entries in any row.
    pub fn max_row_entries(&self) -> usize {
        let mut best = 0;
        let mut run = 0;
        let mut last = None;
        for &(r, _, _) in &self.entries {
            if Some(r) == last {
                run += 1;
            } else {
                run = 1;
                last = Some(r);
            }
            best = best.max(run);
        }
        best
    }

    /// Dense `H x`.
    pub fn apply(&self, x: &[Amplitude]) -> Result<Vec<Amplitude>> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: x.len(),
            });
        }
        let mut y = vec![Amplitude::new(0.0, 0.0); x.len()];
        for &(r, c, v) in &self.entries {
            y[r as usize] += v * x[c as usize];
        }
        Ok(y)
    }
}

fn hash_of<T: Hash>(builder: &DefaultHashBuilder, value: &T) -> u64 {
    builder.hash_one(value)
}

/// Column of the event's unitary at basis string `x`: up to two
/// `(x', amplitude)` pairs.
fn event_column(
    event: Option<&GateEvent>,
    labels: &[DataLabel],
    n: usize,
    x: usize,
) -> Result<([(usize, Amplitude); 2], usize)> {
    let zero = Amplitude::new(0.0, 0.0);
    let one = Amplitude::new(1.0, 0.0);
    let Some(event) = event else {
        return Ok(([(x, one), (0, zero)], 1));
    };
    let mask = |l: DataLabel| -> Result<usize> {
        let q = labels
            .iter()
            .position(|&m| m == l)
            .ok_or_else(|| Error::Domain(format!("event label {l} is not a data qubit")))?;
        Ok(1 << (n - 1 - q))
    };
    Ok(match *event {
        GateEvent::ControlledS {
            control,
            target,
            adjoint,
        } => {
            let m = mask(control)? | mask(target)?;
            let phase = if x & m == m {
                Amplitude::new(0.0, if adjoint { -1.0 } else { 1.0 })
            } else {
                one
            };
            ([(x, phase), (0, zero)], 1)
        }
        GateEvent::Hadamard { target } => {
            let m = mask(target)?;
            let r = core::f64::consts::FRAC_1_SQRT_2;
            let sign = if x & m != 0 { -r } else { r };
            (
                [(x & !m, Amplitude::new(r, 0.0)), (x | m, Amplitude::new(sign, 0.0))],
                2,
            )
        }
    })
}

/// Reachable configurations from `psi_0` under all forward and backward
/// terms, in discovery order, with the forward edges and projector weights.
struct Closure {
    configs: Vec<RingConfiguration>,
    edges: Vec<(usize, usize, Option<GateEvent>)>,
    diagonal: Vec<f64>,
}

fn closure(prog: &VProgram, labels: &[DataLabel], config_cap: usize) -> Result<Closure> {
    let start = initial_configuration(prog, labels)?;
    let table = RuleTable::new(start.layout());
    let builder = DefaultHashBuilder::default();
    let mut index: HashTable<usize> = HashTable::new();
    let mut configs: Vec<RingConfiguration> = Vec::new();
    let mut queue = VecDeque::new();

    let mut intern =
        |c: RingConfiguration, configs: &mut Vec<RingConfiguration>, queue: &mut VecDeque<usize>| -> Result<usize> {
            let h = hash_of(&builder, &c);
            match index.entry(h, |&i| configs[i] == c, |&i| hash_of(&builder, &configs[i])) {
                Entry::Occupied(o) => Ok(*o.get()),
                Entry::Vacant(v) => {
                    let i = configs.len();
                    if i >= config_cap {
                        return Err(Error::Capacity {
                            what: "restricted basis",
                            limit: config_cap,
                        });
                    }
                    v.insert(i);
                    configs.push(c);
                    queue.push_back(i);
                    Ok(i)
                }
            }
        };

    intern(start, &mut configs, &mut queue)?;
    let mut edges = Vec::new();
    let mut diagonal = Vec::new();
    while let Some(i) = queue.pop_front() {
        let cur = configs[i].clone();
        for step in table.forward_steps(&cur)? {
            let j = intern(step.config, &mut configs, &mut queue)?;
            edges.push((i, j, step.event));
        }
        for step in table.backward_steps(&cur)? {
            intern(step.config, &mut configs, &mut queue)?;
        }
        if diagonal.len() <= i {
            diagonal.resize(i + 1, 0.0);
        }
        // g + g† of a projector term with weight 1/2
        diagonal[i] = table.projectors(&cur).len() as f64;
    }
    diagonal.resize(configs.len(), 0.0);
    Ok(Closure {
        configs,
        edges,
        diagonal,
    })
}

/// Restricted Hamiltonian with default labels and cap.
pub fn build_restricted(prog: &VProgram) -> Result<SparseHamiltonian> {
    let labels = DataLabel::defaults(prog.n)?;
    build_restricted_with(prog, &labels, DEFAULT_BASIS_CAP)
}

pub fn build_restricted_with(prog: &VProgram, labels: &[DataLabel], basis_cap: usize) -> Result<SparseHamiltonian> {
    let n = prog.n;
    if n > MAX_RESTRICTED_QUBITS {
        return Err(Error::Capacity {
            what: "restricted data register",
            limit: MAX_RESTRICTED_QUBITS,
        });
    }
    let basis_cap = basis_cap.min(u32::MAX as usize);
    let cl = closure(prog, labels, basis_cap >> n)?;
    let d = 1usize << n;
    let mut entries = Vec::with_capacity(cl.edges.len() * d * 4 + cl.configs.len() * d);
    for &(i, j, ref event) in &cl.edges {
        for x in 0..d {
            let (col, k) = event_column(event.as_ref(), labels, n, x)?;
            for &(y, a) in &col[..k] {
                let (r, c) = ((j * d + y) as u32, (i * d + x) as u32);
                entries.push((r, c, a));
                entries.push((c, r, a.conj()));
            }
        }
    }
    for (i, &w) in cl.diagonal.iter().enumerate() {
        if w != 0.0 {
            for x in 0..d {
                let r = (i * d + x) as u32;
                entries.push((r, r, Amplitude::new(w, 0.0)));
            }
        }
    }
    entries.sort_unstable_by_key(|&(r, c, _)| (r, c));
    let mut merged: Vec<(u32, u32, Amplitude)> = Vec::with_capacity(entries.len());
    for e in entries {
        match merged.last_mut() {
            Some(last) if (last.0, last.1) == (e.0, e.1) => last.2 += e.2,
            _ => merged.push(e),
        }
    }
    Ok(SparseHamiltonian {
        n,
        labels: labels.to_vec(),
        configs: cl.configs,
        entries: merged,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquivalenceReport {
    pub tbar: usize,
    pub configurations: usize,
    pub blocks_checked: usize,
    pub max_deviation: f64,
    /// `(t, t')` of the largest deviation.
    pub worst_block: (usize, usize),
}

/// Checks that, in the basis `config_t ⊗ U_t|x⟩`, the restricted
/// Hamiltonian is the unit-hopping line with unit end projectors tensored
/// with the identity on the data register.
pub fn check_effective_equivalence(prog: &VProgram) -> Result<EquivalenceReport> {
    let labels = DataLabel::defaults(prog.n)?;
    let traj = enumerate_trajectory_with(prog, &labels, DEFAULT_STEP_CAP)?;
    let ham = build_restricted_with(prog, &labels, DEFAULT_BASIS_CAP)?;
    let tbar = traj.tbar();
    let n = prog.n;
    let d = 1usize << n;

    if ham.configs.len() != traj.steps.len() {
        return Err(Error::Domain(format!(
            "closure holds {} configurations but the trajectory has {}",
            ham.configs.len(),
            traj.steps.len()
        )));
    }
    let builder = DefaultHashBuilder::default();
    let mut step_of: HashTable<usize> = HashTable::new();
    for (t, c) in traj.steps.iter().enumerate() {
        step_of.insert_unique(hash_of(&builder, c), t, |&s| hash_of(&builder, &traj.steps[s]));
    }
    let mut time_of = Vec::with_capacity(ham.configs.len());
    for c in &ham.configs {
        let t = step_of
            .find(hash_of(&builder, c), |&s| traj.steps[s] == *c)
            .ok_or_else(|| {
                Error::Domain(format!(
                    "reachable configuration off the trajectory:\n{}",
                    crate::ring::render(c)
                ))
            })?;
        time_of.push(*t);
    }

    // accumulated event unitaries, stored once per distinct prefix
    let mut unitaries = vec![CMatrix::identity(d)];
    let mut unitary_at = Vec::with_capacity(tbar + 1);
    unitary_at.push(0usize);
    for e in &traj.events {
        if let Some(e) = e {
            let g = e
                .to_gate(&labels)?
                .ok_or_else(|| Error::Domain(format!("adjoint event {e} on a forward trajectory")))?;
            let m = embed_gate(n, &g)?;
            let next = &m * unitaries.last().expect("non-empty");
            unitaries.push(next);
        }
        unitary_at.push(unitaries.len() - 1);
    }

    let expected = |tr: usize, tc: usize| -> f64 {
        if tr.abs_diff(tc) == 1 || (tr == tc && (tr == 0 || tr == tbar)) {
            1.0
        } else {
            0.0
        }
    };

    let mut report = EquivalenceReport {
        tbar,
        configurations: ham.configs.len(),
        blocks_checked: 0,
        max_deviation: 0.0,
        worst_block: (0, 0),
    };
    let mut seen_blocks = vec![[false; 3]; tbar + 1];
    let mut k = 0;
    let entries = &ham.entries;
    while k < entries.len() {
        let cr = entries[k].0 as usize >> n;
        let mut end = k;
        while end < entries.len() && (entries[end].0 as usize >> n) == cr {
            end += 1;
        }
        let mut blocks: Vec<(usize, CMatrix)> = Vec::new();
        for &(r, c, v) in &entries[k..end] {
            let cc = c as usize >> n;
            let slot = match blocks.iter().position(|(b, _)| *b == cc) {
                Some(p) => p,
                None => {
                    blocks.push((cc, CMatrix::zeros(d)));
                    blocks.len() - 1
                }
            };
            blocks[slot].1[(r as usize & (d - 1), c as usize & (d - 1))] = v;
        }
        for (cc, b) in blocks {
            let (tr, tc) = (time_of[cr], time_of[cc]);
            let ur = &unitaries[unitary_at[tr]];
            let uc = &unitaries[unitary_at[tc]];
            let rotated = &ur.adjoint() * &(&b * uc);
            let want = expected(tr, tc);
            let dev = rotated.max_abs_diff(&CMatrix::identity(d).scale(want));
            if tr.abs_diff(tc) <= 1 {
                seen_blocks[tr][tc + 1 - tr] = true;
            }
            report.blocks_checked += 1;
            if dev > report.max_deviation {
                report.max_deviation = dev;
                report.worst_block = (tr, tc);
            }
        }
        k = end;
    }
    // blocks the line requires but the Hamiltonian lacks
    for (t, seen) in seen_blocks.iter().enumerate().take(tbar + 1) {
        for (slot, tc) in [(0usize, t.wrapping_sub(1)), (1, t), (2, t + 1)] {
            if tc <= tbar && expected(t, tc) != 0.0 && !seen[slot] && report.max_deviation < 1.0 {
                report.max_deviation = 1.0;
                report.worst_block = (t, tc);
            }
        }
    }
    if report.max_deviation > EQUIVALENCE_TOL {
        return Err(Error::Equivalence {
            row: report.worst_block.0,
            col: report.worst_block.1,
            deviation: report.max_deviation,
        });
    }
    Ok(report)
}

fn embed_gate(n: usize, g: &Gate) -> Result<CMatrix> {
    debug_assert!(matches!(g.kind, GateKind::H | GateKind::ControlledS));
    crate::qcore::gates_unitary(n, core::iter::once(g))
}

/// Eight-state site value: `cursor bits * 2 + line bit`.
pub type LocalState = u8;

pub fn local_state(cursor: Cursor, bit: bool) -> LocalState {
    (cursor.bits() << 1) | u8::from(bit)
}

pub fn local_parts(s: LocalState) -> (Cursor, bool) {
    (Cursor::from_bits(s >> 1), s & 1 == 1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PenaltyKind {
    /// `I - |∅⊢;11⟩⟨∅⊢;11|` on the two sites left of the swap-data boundary.
    Anchor,
    /// Seven projectors: right site as desired, left site anything else.
    Chain,
}

/// Sum of diagonal projectors on the pair `(left, left + 1 mod K)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PenaltyTerm {
    pub left: usize,
    pub kind: PenaltyKind,
    /// Penalised `(left, right)` local-state pairs.
    pub forbidden: Vec<(LocalState, LocalState)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PenaltyHamiltonian {
    sites: usize,
    desired: Vec<LocalState>,
    terms: Vec<PenaltyTerm>,
}

/// Local-projector Hamiltonian whose unique zero-energy state is `psi_0`
/// with the data cells set to `data_input` (circuit-qubit order, qubit 0 the
/// most significant bit).
pub fn build_hinit(prog: &VProgram, data_input: usize) -> Result<PenaltyHamiltonian> {
    let labels = DataLabel::defaults(prog.n)?;
    let start = initial_configuration(prog, &labels)?;
    if data_input >> prog.n != 0 {
        return Err(Error::Domain(format!(
            "data input {data_input} does not fit in {} qubits",
            prog.n
        )));
    }
    let layout = *start.layout();
    let k = layout.sites();
    let desired: Vec<LocalState> = start
        .glyphs()
        .iter()
        .map(|g| {
            let bit = match g.bit() {
                Bit::Zero => false,
                Bit::One => true,
                Bit::Data(l) => (data_input >> (prog.n - 1 - l.index())) & 1 == 1,
            };
            local_state(g.cursor(), bit)
        })
        .collect();

    let anchor_left = layout.last_swap() - 1;
    let mut terms = Vec::with_capacity(k);
    let pair = |left: usize| (desired[left], desired[(left + 1) % k]);
    let (dl, dr) = pair(anchor_left);
    let mut forbidden = Vec::with_capacity(63);
    for a in 0..8 {
        for b in 0..8 {
            if (a, b) != (dl, dr) {
                forbidden.push((a, b));
            }
        }
    }
    terms.push(PenaltyTerm {
        left: anchor_left,
        kind: PenaltyKind::Anchor,
        forbidden,
    });
    // slide leftwards around the ring from the anchor
    for step in 1..k {
        let left = (anchor_left + k - step) % k;
        let (dl, dr) = pair(left);
        terms.push(PenaltyTerm {
            left,
            kind: PenaltyKind::Chain,
            forbidden: (0..8).filter(|&a| a != dl).map(|a| (a, dr)).collect(),
        });
    }
    Ok(PenaltyHamiltonian {
        sites: k,
        desired,
        terms,
    })
}

/// Largest ring for the exhaustive scan.
pub const MAX_EXHAUSTIVE_SITES: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CountMethod {
    Exhaustive,
    TransferMatrix,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroundCount {
    pub count: u128,
    pub witness: Option<Vec<LocalState>>,
    pub method: CountMethod,
}

/// Zero-penalty tally over a slice of the exhaustive index range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RangeCount {
    pub count: u64,
    /// Smallest zero-penalty index in the range.
    pub witness: Option<u64>,
}

impl RangeCount {
    pub fn merge(self, other: RangeCount) -> RangeCount {
        RangeCount {
            count: self.count + other.count,
            witness: match (self.witness, other.witness) {
                (Some(a), Some(b)) => Some(a.min(b)),
                (a, b) => a.or(b),
            },
        }
    }
}

impl PenaltyHamiltonian {
    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn desired(&self) -> &[LocalState] {
        &self.desired
    }

    pub fn terms(&self) -> &[PenaltyTerm] {
        &self.terms
    }

    /// The same Hamiltonian without its anchor projector.
    pub fn without_anchor(&self) -> PenaltyHamiltonian {
        PenaltyHamiltonian {
            sites: self.sites,
            desired: self.desired.clone(),
            terms: self
                .terms
                .iter()
                .filter(|t| t.kind != PenaltyKind::Anchor)
                .cloned()
                .collect(),
        }
    }

    /// Energy of a glyph-basis state: the number of violated projectors.
    pub fn penalty(&self, states: &[LocalState]) -> Result<u32> {
        if states.len() != self.sites {
            return Err(Error::DimensionMismatch {
                expected: self.sites,
                found: states.len(),
            });
        }
        let k = self.sites;
        Ok(self
            .terms
            .iter()
            .map(|t| {
                let p = (states[t.left], states[(t.left + 1) % k]);
                t.forbidden.iter().filter(|&&f| f == p).count() as u32
            })
            .sum())
    }

    /// Per-pair 8x8 allowed tables; pairs with no term allow everything.
    fn allowed(&self) -> Vec<[[bool; 8]; 8]> {
        let mut out = vec![[[true; 8]; 8]; self.sites];
        for t in &self.terms {
            for &(a, b) in &t.forbidden {
                out[t.left][a as usize][b as usize] = false;
            }
        }
        out
    }

    /// Exhaustive index space size `8^K`.
    pub fn exhaustive_len(&self) -> Result<u64> {
        if self.sites > MAX_EXHAUSTIVE_SITES {
            return Err(Error::Capacity {
                what: "exhaustive scan ring size",
                limit: MAX_EXHAUSTIVE_SITES,
            });
        }
        Ok(1u64 << (3 * self.sites))
    }

    /// Site `0` is the most significant base-8 digit.
    pub fn decode(&self, index: u64) -> Vec<LocalState> {
        let k = self.sites;
        (0..k).map(|i| ((index >> (3 * (k - 1 - i))) & 7) as u8).collect()
    }

    pub fn encode(&self, states: &[LocalState]) -> u64 {
        states.iter().fold(0u64, |acc, &s| (acc << 3) | u64::from(s))
    }

    /// Counts zero-penalty states with exhaustive index in `range`.
    pub fn scan_range(&self, range: Range<u64>) -> Result<RangeCount> {
        let total = self.exhaustive_len()?;
        let allowed = self.allowed();
        let k = self.sites;
        let mut out = RangeCount::default();
        let mut digits = vec![0usize; k];
        for idx in range.start..range.end.min(total) {
            for (i, d) in digits.iter_mut().enumerate() {
                *d = ((idx >> (3 * (k - 1 - i))) & 7) as usize;
            }
            if (0..k).all(|i| allowed[i][digits[i]][digits[(i + 1) % k]]) {
                out.count += 1;
                out.witness.get_or_insert(idx);
            }
        }
        Ok(out)
    }

    /// Closed-walk count of the per-edge compatibility matrices around the
    /// ring, with one zero-penalty witness.
    pub fn transfer_count(&self) -> Result<GroundCount> {
        let allowed = self.allowed();
        let k = self.sites;
        let overflow = || Error::Capacity {
            what: "transfer-matrix count",
            limit: usize::MAX,
        };
        // suffix[i] = T_i T_{i+1} ... T_{K-1}
        let identity = {
            let mut m = [[0u128; 8]; 8];
            for (i, row) in m.iter_mut().enumerate() {
                row[i] = 1;
            }
            m
        };
        let mut suffix = vec![identity; k + 1];
        for i in (0..k).rev() {
            let mut m = [[0u128; 8]; 8];
            for a in 0..8 {
                for b in 0..8 {
                    if !allowed[i][a][b] {
                        continue;
                    }
                    for c in 0..8 {
                        let v = suffix[i + 1][b][c];
                        m[a][c] = m[a][c].checked_add(v).ok_or_else(overflow)?;
                    }
                }
            }
            suffix[i] = m;
        }
        let mut count = 0u128;
        for (a, row) in suffix[0].iter().enumerate() {
            count = count.checked_add(row[a]).ok_or_else(overflow)?;
        }
        let witness = (0..8).find(|&a| suffix[0][a][a] > 0).map(|a0| {
            let mut states = vec![a0 as u8];
            let mut prev = a0;
            for i in 1..k {
                let b = (0..8)
                    .find(|&b| allowed[i - 1][prev][b] && suffix[i][b][a0] > 0)
                    .expect("closed walk continues");
                states.push(b as u8);
                prev = b;
            }
            states
        });
        Ok(GroundCount {
            count,
            witness,
            method: CountMethod::TransferMatrix,
        })
    }

    /// Exhaustive scan for `K <= 8`, transfer matrix otherwise.
    pub fn count_ground_configs(&self) -> Result<GroundCount> {
        if self.sites <= MAX_EXHAUSTIVE_SITES {
            let r = self.scan_range(0..self.exhaustive_len()?)?;
            Ok(GroundCount {
                count: u128::from(r.count),
                witness: r.witness.map(|w| self.decode(w)),
                method: CountMethod::Exhaustive,
            })
        } else {
            self.transfer_count()
        }
    }
}

/// Convenience: kernel count for a program and input.
pub fn count_ground_configs(h: &PenaltyHamiltonian) -> Result<GroundCount> {
    h.count_ground_configs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::Circuit;
    use crate::vprog::compile;

    fn appendix_program() -> VProgram {
        VProgram {
            n: 3,
            swap_bits: vec![false, false, false, true],
            hadamard_bits: vec![true, false, false, false],
            data_order: vec![1, 0, 2],
            iterations: 4,
        }
    }

    fn one_cs() -> VProgram {
        compile(&Circuit::new(2, vec![Gate::cs(0, 1)]).unwrap()).unwrap()
    }

    #[test]
    fn appendix_closure_has_48_configurations() {
        let h = build_restricted(&appendix_program()).unwrap();
        assert_eq!(h.configs().len(), 48);
        assert_eq!(h.dim(), 48 * 8);
        assert!(h.is_hermitian(0.0));
        assert!(h.max_row_entries() <= 4);
    }

    #[test]
    fn start_diagonal_is_one() {
        let h = build_restricted(&appendix_program()).unwrap();
        for x in 0..8u32 {
            let k = h.entries().binary_search_by(|&(r, c, _)| (r, c).cmp(&(x, x))).unwrap();
            assert_eq!(h.entries()[k].2, Amplitude::new(1.0, 0.0));
        }
    }

    #[test]
    fn hadamard_row_has_two_entries() {
        let h = build_restricted(&appendix_program()).unwrap();
        let r = core::f64::consts::FRAC_1_SQRT_2;
        let mut found = false;
        for &(row, col, v) in h.entries() {
            if (v.re.abs() - r).abs() < 1e-15 {
                let partner = h
                    .entries()
                    .iter()
                    .filter(|e| e.1 == col && (e.2.re.abs() - r).abs() < 1e-15)
                    .count();
                assert_eq!(partner, 2, "row {row} col {col}");
                found = true;
            }
        }
        assert!(found);
    }

    #[test]
    fn appendix_equivalence_is_exact() {
        let rep = check_effective_equivalence(&appendix_program()).unwrap();
        assert_eq!(rep.tbar, 47);
        assert!(rep.max_deviation <= 1e-12, "{rep:?}");
    }

    #[test]
    fn minimal_program_equivalence() {
        let rep = check_effective_equivalence(&one_cs()).unwrap();
        assert!(rep.tbar >= 1);
        assert!(rep.max_deviation <= 1e-12);
    }

    #[test]
    fn psi0_has_zero_penalty() {
        let prog = appendix_program();
        for x in 0..8 {
            let h = build_hinit(&prog, x).unwrap();
            assert_eq!(h.penalty(h.desired()).unwrap(), 0);
        }
    }

    #[test]
    fn single_site_flip_is_penalised() {
        let prog = appendix_program();
        let h = build_hinit(&prog, 0b101).unwrap();
        for site in 0..h.sites() {
            for v in 0..8 {
                let mut s = h.desired().to_vec();
                if s[site] == v {
                    continue;
                }
                s[site] = v;
                assert!(h.penalty(&s).unwrap() >= 1, "site {site} value {v}");
            }
        }
    }

    #[test]
    fn small_ring_kernel_is_unique() {
        let prog = one_cs();
        let h = build_hinit(&prog, 0b10).unwrap();
        assert!(h.sites() <= MAX_EXHAUSTIVE_SITES);
        let ex = h.count_ground_configs().unwrap();
        assert_eq!(ex.method, CountMethod::Exhaustive);
        assert_eq!(ex.count, 1);
        assert_eq!(ex.witness.as_deref(), Some(h.desired()));
        let tm = h.transfer_count().unwrap();
        assert_eq!(tm.count, 1);
        assert_eq!(tm.witness.as_deref(), Some(h.desired()));
        let loose = h.without_anchor();
        let a = loose.count_ground_configs().unwrap().count;
        assert!(a > 1);
        assert_eq!(loose.transfer_count().unwrap().count, a);
    }

    #[test]
    fn transfer_matrix_on_large_ring() {
        let h = build_hinit(&appendix_program(), 3).unwrap();
        let c = h.count_ground_configs().unwrap();
        assert_eq!(c.method, CountMethod::TransferMatrix);
        assert_eq!(c.count, 1);
        assert_eq!(c.witness.as_deref(), Some(h.desired()));
    }

    #[test]
    fn scan_ranges_merge() {
        let h = build_hinit(&one_cs(), 1).unwrap().without_anchor();
        let total = h.exhaustive_len().unwrap();
        let whole = h.scan_range(0..total).unwrap();
        let halves = h
            .scan_range(0..total / 3)
            .unwrap()
            .merge(h.scan_range(total / 3..total).unwrap());
        assert_eq!(whole, halves);
    }

    #[test]
    fn oversized_register_rejected() {
        let c = Circuit::new(5, vec![Gate::cs(0, 1)]).unwrap();
        let prog = compile(&c).unwrap();
        assert!(matches!(build_restricted(&prog), Err(Error::Capacity { .. })));
    }
}
