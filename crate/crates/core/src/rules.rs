//! Two-site transition rules on the ring and the forward trajectory they
//! generate from `psi_0`.
//!
//! Every term reads the cursor and line content of sites `i` and `i + 1`
//! (mod `K`), requires the cursor at `i + 1` to be empty, and hands the
//! active cursor on to `i + 1`. Projector terms are diagonal and mark the
//! start and stop states.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::qcore::{Circuit, Gate};
use crate::ring::{initial_configuration, Bit, DataLabel, RingConfiguration, RingLayout};
use crate::vprog::{Cursor, VProgram};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RuleKind {
    GeneralSwap,
    StartProjector,
    StopProjector,
    SecondStopProjector,
    SwapRegionTail,
    SwapDataBoundaryCycle,
    SwapDataBoundaryPass,
    DataTail,
    DataHadamardBoundary,
    HadamardSwapBoundary,
}

impl RuleKind {
    pub fn is_projector(self) -> bool {
        matches!(
            self,
            RuleKind::StartProjector | RuleKind::StopProjector | RuleKind::SecondStopProjector
        )
    }

    pub fn is_stop(self) -> bool {
        matches!(self, RuleKind::StopProjector | RuleKind::SecondStopProjector)
    }
}

/// Line-content requirement at one site.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BitPattern {
    Zero,
    One,
    /// Any program bit or data cell, carried along by the term.
    Any,
}

impl BitPattern {
    #[inline]
    pub fn matches(self, bit: Bit) -> bool {
        match self {
            BitPattern::Zero => bit == Bit::Zero,
            BitPattern::One => bit == Bit::One,
            BitPattern::Any => true,
        }
    }
}

/// Gate a term applies to the data register.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GateAction {
    /// `CS` with the left site as control and the right site as target.
    ControlledS,
    /// `H` on the data cell at the left site.
    Hadamard,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransitionRule {
    pub site: usize,
    pub kind: RuleKind,
    pub before: [Cursor; 2],
    pub after: [Cursor; 2],
    pub before_bits: [BitPattern; 2],
    /// Whether the two line cells trade places.
    pub swaps_bits: bool,
    pub action: Option<GateAction>,
    /// Coefficient in the Hamiltonian: 1 for hops, 1/2 for projectors.
    pub weight: f64,
}

impl TransitionRule {
    pub fn after_bits(&self) -> [BitPattern; 2] {
        if self.swaps_bits {
            [self.before_bits[1], self.before_bits[0]]
        } else {
            self.before_bits
        }
    }

    fn matches_at(&self, config: &RingConfiguration, cursors: [Cursor; 2], bits: [BitPattern; 2]) -> bool {
        let l = config.layout();
        let (a, b) = (config.glyph(self.site), config.glyph(l.next(self.site)));
        a.cursor() == cursors[0] && b.cursor() == cursors[1] && bits[0].matches(a.bit()) && bits[1].matches(b.bit())
    }

    /// Whether the term's bra (the configuration it acts on) matches.
    pub fn matches_forward(&self, config: &RingConfiguration) -> bool {
        self.matches_at(config, self.before, self.before_bits)
    }

    /// Whether the term's ket (the configuration it produces) matches.
    pub fn matches_backward(&self, config: &RingConfiguration) -> bool {
        self.matches_at(config, self.after, self.after_bits())
    }

    fn rewrite(&self, config: &RingConfiguration, cursors: [Cursor; 2]) -> RingConfiguration {
        let l = *config.layout();
        let j = l.next(self.site);
        let mut glyphs = config.glyphs().to_vec();
        let (mut a, mut b) = (glyphs[self.site], glyphs[j]);
        if self.swaps_bits {
            let (ba, bb) = (a.bit(), b.bit());
            a = a.with_bit(bb);
            b = b.with_bit(ba);
        }
        glyphs[self.site] = a.with_cursor(cursors[0]);
        glyphs[j] = b.with_cursor(cursors[1]);
        RingConfiguration::from_parts(l, glyphs)
    }

    /// The gate this term applies, resolved to data labels in `config` (the
    /// configuration on the unbarred side).
    fn event_in(&self, config: &RingConfiguration, adjoint: bool) -> Option<GateEvent> {
        let l = config.layout();
        let label = |site: usize| match config.glyph(site).bit() {
            Bit::Data(d) => d,
            _ => unreachable!("gate terms only sit on data cells"),
        };
        self.action.map(|a| match a {
            GateAction::ControlledS => GateEvent::ControlledS {
                control: label(self.site),
                target: label(l.next(self.site)),
                adjoint,
            },
            GateAction::Hadamard => GateEvent::Hadamard {
                target: label(self.site),
            },
        })
    }
}

/// Gate applied to the data register by one transition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GateEvent {
    ControlledS {
        control: DataLabel,
        target: DataLabel,
        adjoint: bool,
    },
    Hadamard {
        target: DataLabel,
    },
}

impl GateEvent {
    /// Circuit gate on qubit indices, where `labels[q]` names qubit `q`.
    /// Adjoint events have no single Kitaev gate and yield `None`.
    pub fn to_gate(&self, labels: &[DataLabel]) -> Result<Option<Gate>> {
        let q = |l: DataLabel| {
            labels
                .iter()
                .position(|&x| x == l)
                .ok_or_else(|| Error::Domain(format!("event label {l} is not a data qubit")))
        };
        Ok(match *self {
            GateEvent::ControlledS { adjoint: true, .. } => None,
            GateEvent::ControlledS { control, target, .. } => Some(Gate::cs(q(control)?, q(target)?)),
            GateEvent::Hadamard { target } => Some(Gate::h(q(target)?)),
        })
    }

    pub fn tag(&self) -> String {
        format!("{self}")
    }

    /// Parses `CS a b`, `CSdg a b` or `H a`.
    pub fn parse_tag(s: &str) -> Result<GateEvent> {
        let bad = || Error::Domain(format!("malformed event tag {s:?}"));
        let label = |t: &str| {
            let mut cs = t.chars();
            match (cs.next(), cs.next()) {
                (Some(c), None) => DataLabel::new(c),
                _ => Err(bad()),
            }
        };
        let parts: Vec<&str> = s.split_whitespace().collect();
        match parts.as_slice() {
            ["CS", c, t] | ["CSdg", c, t] => Ok(GateEvent::ControlledS {
                control: label(c)?,
                target: label(t)?,
                adjoint: parts[0] == "CSdg",
            }),
            ["H", t] => Ok(GateEvent::Hadamard { target: label(t)? }),
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for GateEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GateEvent::ControlledS {
                control,
                target,
                adjoint,
            } => write!(f, "{} {control} {target}", if *adjoint { "CSdg" } else { "CS" }),
            GateEvent::Hadamard { target } => write!(f, "H {target}"),
        }
    }
}

/// Builder shorthand for one term.
fn term(
    site: usize,
    kind: RuleKind,
    before: [Cursor; 2],
    after: [Cursor; 2],
    before_bits: [BitPattern; 2],
    swaps_bits: bool,
    action: Option<GateAction>,
) -> TransitionRule {
    TransitionRule {
        site,
        kind,
        before,
        after,
        before_bits,
        swaps_bits,
        action,
        weight: if kind.is_projector() { 0.5 } else { 1.0 },
    }
}

fn projector(site: usize, kind: RuleKind, cursors: [Cursor; 2], bits: [BitPattern; 2]) -> TransitionRule {
    term(site, kind, cursors, cursors, bits, false, None)
}

/// Every term of every site, in site order.
pub fn rule_set(layout: &RingLayout) -> Vec<TransitionRule> {
    use BitPattern::{Any, One, Zero};
    use Cursor::{Cycle, Empty, Gate, HoldCycle};

    let tail = layout.last_swap() - 1;
    let data_tail = layout.last_data() - 1;
    let mut out = Vec::new();
    for i in 0..layout.sites() {
        let hop = |q: Cursor| ([q, Empty], [Empty, q]);
        if i == tail {
            out.push(projector(i, RuleKind::StartProjector, [Empty, Gate], [One, One]));
            out.push(projector(i, RuleKind::StopProjector, [Gate, Empty], [One, Zero]));
            out.push(projector(i, RuleKind::SecondStopProjector, [Gate, Empty], [One, One]));
            for q in [HoldCycle, Cycle] {
                let (b, a) = hop(q);
                out.push(term(i, RuleKind::SwapRegionTail, b, a, [Any, Any], true, None));
            }
            let (b, a) = hop(Gate);
            out.push(term(i, RuleKind::SwapRegionTail, b, a, [Zero, Any], true, None));
        } else if i == layout.last_swap() {
            for q in Cursor::ACTIVE {
                out.push(term(
                    i,
                    RuleKind::SwapDataBoundaryCycle,
                    [q, Empty],
                    [Empty, q.advance()],
                    [Zero, Any],
                    false,
                    None,
                ));
                let (b, a) = hop(q);
                out.push(term(i, RuleKind::SwapDataBoundaryPass, b, a, [One, Any], false, None));
            }
        } else if i == data_tail {
            let (b, a) = hop(HoldCycle);
            out.push(term(i, RuleKind::DataTail, b, a, [Any, Any], false, None));
            let (b, a) = hop(Cycle);
            out.push(term(i, RuleKind::DataTail, b, a, [Any, Any], true, None));
            let (b, a) = hop(Gate);
            out.push(term(
                i,
                RuleKind::DataTail,
                b,
                a,
                [Any, Any],
                false,
                Some(GateAction::ControlledS),
            ));
        } else if i == layout.last_data() {
            for q in [HoldCycle, Cycle] {
                let (b, a) = hop(q);
                out.push(term(i, RuleKind::DataHadamardBoundary, b, a, [Any, Any], false, None));
            }
            let (b, a) = hop(Gate);
            out.push(term(i, RuleKind::DataHadamardBoundary, b, a, [Any, Zero], false, None));
            out.push(term(
                i,
                RuleKind::DataHadamardBoundary,
                b,
                a,
                [Any, One],
                false,
                Some(GateAction::Hadamard),
            ));
        } else if i == layout.last_hadamard() {
            for q in Cursor::ACTIVE {
                let (b, a) = hop(q);
                out.push(term(i, RuleKind::HadamardSwapBoundary, b, a, [Any, Any], false, None));
            }
        } else {
            for q in Cursor::ACTIVE {
                let (b, a) = hop(q);
                out.push(term(i, RuleKind::GeneralSwap, b, a, [Any, Any], true, None));
            }
        }
    }
    out
}

/// Site-indexed rule lookup.
#[derive(Debug, Clone)]
pub struct RuleTable {
    layout: RingLayout,
    by_site: Vec<Vec<TransitionRule>>,
}

/// One application of a forward or backward term.
#[derive(Debug, Clone, PartialEq)]
pub struct Step {
    pub config: RingConfiguration,
    pub rule: TransitionRule,
    pub event: Option<GateEvent>,
}

impl RuleTable {
    pub fn new(layout: &RingLayout) -> Self {
        let mut by_site = vec![Vec::new(); layout.sites()];
        for r in rule_set(layout) {
            by_site[r.site].push(r);
        }
        Self {
            layout: *layout,
            by_site,
        }
    }

    pub fn layout(&self) -> &RingLayout {
        &self.layout
    }

    pub fn rules_at(&self, site: usize) -> &[TransitionRule] {
        &self.by_site[site]
    }

    fn check_layout(&self, config: &RingConfiguration) -> Result<usize> {
        if *config.layout() != self.layout {
            return Err(Error::Domain(String::from(
                "configuration layout differs from the rule table",
            )));
        }
        config
            .active_site()
            .ok_or_else(|| Error::Domain(String::from("configuration has no single active cursor")))
    }

    /// All forward (non-projector) terms applicable to `config`.
    pub fn forward_steps(&self, config: &RingConfiguration) -> Result<Vec<Step>> {
        let a = self.check_layout(config)?;
        Ok(self.by_site[a]
            .iter()
            .filter(|r| !r.kind.is_projector() && r.matches_forward(config))
            .map(|r| Step {
                config: r.rewrite(config, r.after),
                rule: *r,
                event: r.event_in(config, false),
            })
            .collect())
    }

    /// All backward (adjoint) terms applicable to `config`. Events are the
    /// inverse gates, labelled from the predecessor's side.
    pub fn backward_steps(&self, config: &RingConfiguration) -> Result<Vec<Step>> {
        let a = self.check_layout(config)?;
        let site = self.layout.prev(a);
        Ok(self.by_site[site]
            .iter()
            .filter(|r| !r.kind.is_projector() && r.matches_backward(config))
            .map(|r| {
                let prev = r.rewrite(config, r.before);
                let event = r.event_in(&prev, true);
                Step {
                    config: prev,
                    rule: *r,
                    event,
                }
            })
            .collect())
    }

    /// Projector terms whose pattern matches `config`.
    pub fn projectors(&self, config: &RingConfiguration) -> Vec<RuleKind> {
        let tail = self.layout.last_swap() - 1;
        self.by_site[tail]
            .iter()
            .filter(|r| r.kind.is_projector() && r.matches_forward(config))
            .map(|r| r.kind)
            .collect()
    }

    /// The unique forward neighbour, or `None` at a stop state.
    pub fn successor(&self, config: &RingConfiguration) -> Result<Option<(RingConfiguration, Option<GateEvent>)>> {
        let mut steps = self.forward_steps(config)?;
        match steps.len() {
            0 => Ok(None),
            1 => {
                let s = steps.pop().expect("one step");
                Ok(Some((s.config, s.event)))
            }
            k => Err(Error::Integrity {
                step: 0,
                forward: k,
                backward: self.backward_steps(config)?.len(),
            }),
        }
    }

    /// The unique backward neighbour, or `None` at a start state.
    pub fn predecessor(&self, config: &RingConfiguration) -> Result<Option<(RingConfiguration, Option<GateEvent>)>> {
        let mut steps = self.backward_steps(config)?;
        match steps.len() {
            0 => Ok(None),
            1 => {
                let s = steps.pop().expect("one step");
                Ok(Some((s.config, s.event)))
            }
            k => Err(Error::Integrity {
                step: 0,
                forward: self.forward_steps(config)?.len(),
                backward: k,
            }),
        }
    }
}

pub fn successor(config: &RingConfiguration) -> Result<Option<(RingConfiguration, Option<GateEvent>)>> {
    RuleTable::new(config.layout()).successor(config)
}

pub fn predecessor(config: &RingConfiguration) -> Result<Option<(RingConfiguration, Option<GateEvent>)>> {
    RuleTable::new(config.layout()).predecessor(config)
}

pub const DEFAULT_STEP_CAP: usize = 1_000_000;

/// `psi_0 ... psi_Tbar`; `events[t]` is the gate applied going from step
/// `t` to step `t + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub labels: Vec<DataLabel>,
    pub steps: Vec<RingConfiguration>,
    pub events: Vec<Option<GateEvent>>,
}

impl Trajectory {
    /// `T̄`, the number of transitions.
    pub fn tbar(&self) -> usize {
        self.steps.len() - 1
    }

    pub fn layout(&self) -> &RingLayout {
        self.steps[0].layout()
    }

    /// Forward gate events in order.
    pub fn gate_events(&self) -> impl Iterator<Item = &GateEvent> {
        self.events.iter().flatten()
    }

    /// Event list as circuit gates on qubit indices.
    pub fn event_circuit(&self) -> Result<Circuit> {
        let mut gates = Vec::new();
        for e in self.gate_events() {
            gates.extend(e.to_gate(&self.labels)?);
        }
        Circuit::new(self.labels.len(), gates)
    }
}

/// Walks forward from `psi_0` to the stop state, checking at each step that
/// exactly one forward and at most one backward term matches.
pub fn enumerate_trajectory(prog: &VProgram) -> Result<Trajectory> {
    let labels = DataLabel::defaults(prog.n)?;
    enumerate_trajectory_with(prog, &labels, DEFAULT_STEP_CAP)
}

pub fn enumerate_trajectory_with(prog: &VProgram, labels: &[DataLabel], cap: usize) -> Result<Trajectory> {
    let start = initial_configuration(prog, labels)?;
    let table = RuleTable::new(start.layout());
    if !table.projectors(&start).contains(&RuleKind::StartProjector) {
        return Err(Error::Domain(String::from(
            "initial configuration does not match the start pattern",
        )));
    }
    let bit_tally = |c: &RingConfiguration| {
        let ones = |v: Vec<bool>| v.iter().filter(|&&b| b).count();
        (ones(c.swap_bits()), ones(c.hadamard_bits()))
    };
    let tally0 = bit_tally(&start);
    let mut steps = vec![start];
    let mut events = Vec::new();
    loop {
        let t = steps.len() - 1;
        let cur = &steps[t];
        let fwd = table.forward_steps(cur)?;
        let bwd = table.backward_steps(cur)?;
        let expected_bwd = usize::from(t > 0);
        if fwd.len() > 1 || bwd.len() != expected_bwd {
            return Err(Error::Integrity {
                step: t,
                forward: fwd.len(),
                backward: bwd.len(),
            });
        }
        if t > 0 && bwd[0].config != steps[t - 1] {
            return Err(Error::Integrity {
                step: t,
                forward: fwd.len(),
                backward: bwd.len(),
            });
        }
        let Some(next) = fwd.into_iter().next() else {
            if !table.projectors(cur).iter().any(|k| k.is_stop()) {
                return Err(Error::NoStop { step: t });
            }
            break;
        };
        if t + 1 > cap {
            return Err(Error::Runaway { cap });
        }
        if bit_tally(&next.config) != tally0 {
            return Err(Error::Domain(format!("program bits changed at step {}", t + 1)));
        }
        events.push(next.event);
        steps.push(next.config);
    }
    Ok(Trajectory {
        labels: labels.to_vec(),
        steps,
        events,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{parse, render};

    fn appendix_program() -> VProgram {
        VProgram {
            n: 3,
            swap_bits: vec![false, false, false, true],
            hadamard_bits: vec![true, false, false, false],
            data_order: vec![1, 0, 2],
            iterations: 4,
        }
    }

    fn rgb() -> Vec<DataLabel> {
        DataLabel::parse_list("rgb").unwrap()
    }

    #[test]
    fn appendix_first_steps() {
        let prog = appendix_program();
        let traj = enumerate_trajectory_with(&prog, &rgb(), DEFAULT_STEP_CAP).unwrap();
        let rows: Vec<String> = traj.steps.iter().map(render).collect();
        assert_eq!(rows[1], ".....|g..|....\n00011|grb|1000");
        assert_eq!(rows[2], ".....|.g.|....\n00011|rgb|1000");
        assert_eq!(rows[3], ".....|..g|....\n00011|rgb|1000");
        assert_eq!(rows[4], ".....|...|g...\n00011|rgb|1000");
        assert_eq!(traj.events[2].unwrap().tag(), "CS g b");
        assert_eq!(traj.events[3].unwrap().tag(), "H b");
    }

    #[test]
    fn appendix_length_and_events() {
        let traj = enumerate_trajectory_with(&appendix_program(), &rgb(), DEFAULT_STEP_CAP).unwrap();
        assert_eq!(traj.steps.len(), 48);
        let tags: Vec<String> = traj.gate_events().map(GateEvent::tag).collect();
        assert_eq!(tags, ["CS g b", "H b", "CS b r"]);
        let table = RuleTable::new(traj.layout());
        assert!(table.successor(traj.steps.last().unwrap()).unwrap().is_none());
        assert!(table.predecessor(&traj.steps[0]).unwrap().is_none());
        for w in traj.steps.windows(2) {
            let (next, _) = table.successor(&w[0]).unwrap().unwrap();
            assert_eq!(next, w[1]);
            let (prev, _) = table.predecessor(&w[1]).unwrap().unwrap();
            assert_eq!(prev, w[0]);
        }
    }

    #[test]
    fn swap_data_cycling() {
        let c = parse("....c|...|....\n00010|abc|1000").unwrap();
        let (n, e) = successor(&c).unwrap().unwrap();
        assert_eq!(render(&n), ".....|h..|....\n00010|abc|1000");
        assert!(e.is_none());
        let c = parse("....g|...|....\n00011|abc|1000").unwrap();
        let (n, _) = successor(&c).unwrap().unwrap();
        assert_eq!(render(&n), ".....|g..|....\n00011|abc|1000");
    }

    #[test]
    fn hadamard_event_on_set_bit() {
        let c = parse(".....|..g|....\n00011|abc|1000").unwrap();
        let (_, e) = successor(&c).unwrap().unwrap();
        assert_eq!(
            e,
            Some(GateEvent::Hadamard {
                target: DataLabel::new('c').unwrap()
            })
        );
        let c = parse(".....|..g|....\n00011|abc|0100").unwrap();
        let (_, e) = successor(&c).unwrap().unwrap();
        assert_eq!(e, None);
    }

    #[test]
    fn event_tags_roundtrip() {
        for s in ["CS a b", "CSdg z q", "H c"] {
            assert_eq!(GateEvent::parse_tag(s).unwrap().tag(), s);
        }
        assert!(GateEvent::parse_tag("X a").is_err());
    }

    #[test]
    fn projector_weights() {
        let l = RingLayout::new(3, 2, 1).unwrap();
        for r in rule_set(&l) {
            assert_eq!(r.kind.is_projector(), r.weight == 0.5);
            if r.kind.is_projector() {
                assert_eq!(r.before, r.after);
            }
        }
    }
}
