//! Dense state-vector simulation of small gate circuits.

mod circuit;
mod gate;
mod sampling;
mod state;
mod turns;
mod unitary;

pub use circuit::{Circuit, GateOp, Segment, MAX_QUBITS};
pub use gate::{gate_matrix, unitarity_defect, GateKind, Matrix, Pauli};
pub use sampling::{sample_shots, sample_shots_with, shot_rng, OutcomeCounts, Parallelism};
pub use state::{
    apply_circuit, apply_circuit_with_faults, bit_label, outcome_distribution, parse_bits,
    StateVector, PROBABILITY_FLOOR,
};
pub use turns::Turns;
pub use unitary::{
    circuit_unitary, fitted_phase, kron_all, phase_equivalent, phase_residual, MAX_UNITARY_QUBITS,
};
