//! Encoded computation on protected factors: the collective-flip code with
//! two-body gates, and the `J = 0` qubit of four spins.

mod circuit;
mod frame;
mod j0;
mod lie;

pub use circuit::{
    gate_cycles, ideal_logical_unitary, run_encoded_circuit_under_decoupling, CircuitOutcome,
    ControlLimits, Gate, GateRecord, GateRecordKind,
};
pub use frame::{
    encoded_gate_generator, encoded_swap_check, gate_hamiltonian, logical_gate_hamiltonian,
    logical_swap, GateKind, LogicalFrame, SwapCheck, MAX_FRAME_QUBITS,
};
pub use j0::{j0_noiseless_qubit, J0Qubit, J0Verification};
pub use lie::lie_algebra_dimension;
