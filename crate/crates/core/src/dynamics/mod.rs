//! System-bath models, bang-bang cycle schedules and exact piecewise evolution.

mod experiments;
mod model;
mod schedule;
mod sim;

pub use experiments::{
    cycle_count, decoupling_sweep, loglog_slope, pulse_error_experiment, CycleRounding,
    PulseErrorOutcome, ScheduleFamily, SweepPoint, SweepResult, SweepSetup,
};
pub use model::{collective_sum, CouplingKind, NoiseModel, DEFAULT_STRENGTH, MAX_TOTAL_QUBITS};
pub use schedule::{CycleSchedule, Segment};
pub use sim::{
    average_hamiltonian, cycle_propagator, evolve, evolve_with, fast_modulated_gate_schedule,
    phase_insensitive_distance, SegmentHamiltonians,
};
