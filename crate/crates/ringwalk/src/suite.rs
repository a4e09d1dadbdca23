//! Seeded random circuits and the worked three-qubit example.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ringwalk_core::qcore::{Circuit, Gate};
use ringwalk_core::ring::DataLabel;
use ringwalk_core::Result;

use crate::formats::{parse_circuit, parse_dump, DumpRecord};

/// Seed of the randomized acceptance suite.
pub const SUITE_SEED: u64 = 0x5eed_0001;

/// Three-qubit worked example: `CS 1 2`, `H 2`, `CS 2 0`.
pub const APPENDIX_CIRCUIT: &str = include_str!("../fixtures/appendix_circuit.txt");
/// Its 48-step trajectory with qubits 0, 1, 2 labelled `r`, `g`, `b`.
pub const APPENDIX_TRACE: &str = include_str!("../fixtures/appendix_trace.txt");
pub const APPENDIX_LABELS: &str = "rgb";

pub fn appendix_circuit() -> Circuit {
    parse_circuit(APPENDIX_CIRCUIT).expect("appendix circuit fixture parses")
}

pub fn appendix_labels() -> Vec<DataLabel> {
    DataLabel::parse_list(APPENDIX_LABELS).expect("appendix labels are valid")
}

pub fn appendix_trace() -> Vec<DumpRecord> {
    parse_dump(APPENDIX_TRACE).expect("appendix trace fixture parses")
}

/// Random `{H, CS}` circuit on `2..=max_qubits` qubits with
/// `1..=max_gates` gates.
pub fn random_circuit(rng: &mut impl Rng, max_qubits: usize, max_gates: usize) -> Result<Circuit> {
    let n = rng.random_range(2..=max_qubits.max(2));
    let len = rng.random_range(1..=max_gates.max(1));
    let gates = (0..len)
        .map(|_| {
            if rng.random_bool(0.5) {
                Gate::h(rng.random_range(0..n))
            } else {
                let c = rng.random_range(0..n);
                let t = (c + rng.random_range(1..n)) % n;
                Gate::cs(c, t)
            }
        })
        .collect();
    Circuit::new(n, gates)
}

/// `count` circuits from a fixed seed.
pub fn random_suite(seed: u64, count: usize, max_qubits: usize, max_gates: usize) -> Result<Vec<Circuit>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| random_circuit(&mut rng, max_qubits, max_gates))
        .collect()
}
