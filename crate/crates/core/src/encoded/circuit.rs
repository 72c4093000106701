use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::dynamics::{cycle_propagator, CycleSchedule, NoiseModel, SegmentHamiltonians};
use crate::error::{Error, Result};
use crate::linalg::{matexp, Operator};
use crate::pauli::PauliString;
use crate::scalar::{Complex, Real};

use super::frame::{gate_hamiltonian, logical_gate_hamiltonian, GateKind, LogicalFrame};

/// One gate of an encoded circuit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Gate {
    pub kind: GateKind,
    pub angle: f64,
    /// Requested wall time; derived from the strength limit when absent.
    pub duration: Option<f64>,
}

impl Gate {
    pub fn new(kind: GateKind, angle: f64) -> Self {
        Self {
            kind,
            angle,
            duration: None,
        }
    }

    pub fn with_duration(mut self, duration: f64) -> Self {
        self.duration = Some(duration);
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GateRecordKind {
    XRot,
    ZRot,
    Exchange,
    Physical,
}

/// Circuit-file form of a gate: `{kind, targets, angle}` with 1-based
/// targets (logical qubits, or the physical site for `physical`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GateRecord {
    pub kind: GateRecordKind,
    pub targets: Vec<usize>,
    pub angle: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub duration: Option<f64>,
    /// Pauli axis of a `physical` gate.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub axis: Option<char>,
}

impl GateRecord {
    pub fn to_gate(&self) -> Result<Gate> {
        if !self.angle.is_finite() {
            return Err(Error::Parse(format!(
                "gate angle {} is not finite",
                self.angle
            )));
        }
        let t = &self.targets;
        let kind = match (self.kind, t.as_slice(), self.axis) {
            (GateRecordKind::XRot, &[j], None) => GateKind::XRot(j),
            (GateRecordKind::ZRot, &[j], None) => GateKind::ZRot(j),
            (GateRecordKind::Exchange, &[i, j], None) => GateKind::Exchange(i, j),
            (GateRecordKind::Physical, &[s], Some(a)) => {
                GateKind::Physical(s, a.to_ascii_uppercase())
            }
            _ => {
                return Err(Error::Parse(format!(
                    "{:?} gate with targets {t:?} and axis {:?} is malformed",
                    self.kind, self.axis
                )))
            }
        };
        Ok(Gate {
            kind,
            angle: self.angle,
            duration: self.duration,
        })
    }
}

/// Weak/slow control limits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ControlLimits {
    /// Largest `|angle| / duration`.
    pub max_strength: f64,
    /// Smallest `duration / T_c`.
    pub min_cycles_per_gate: usize,
}

impl Default for ControlLimits {
    fn default() -> Self {
        Self {
            max_strength: 0.2,
            min_cycles_per_gate: 10,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircuitOutcome {
    pub cycle_time: f64,
    pub total_cycles: usize,
    pub total_time: f64,
    /// Process fidelity `sum_k |tr(V^dagger A_k)|^2 / D^2` of the codespace
    /// channel against the ideal logical circuit.
    pub process_fidelity: f64,
}

/// Ideal logical unitary of a circuit.
pub fn ideal_logical_unitary<T: Real>(n: usize, circuit: &[Gate]) -> Result<Operator<T>> {
    let mut u = Operator::identity(1 << (n - 2));
    for g in circuit {
        let h = logical_gate_hamiltonian::<T>(n, g.kind)?;
        u = &matexp(&h, T::lit(g.angle))? * &u;
    }
    Ok(u)
}

/// Whole cycles a gate occupies.
pub fn gate_cycles(gate: &Gate, cycle_time: f64, limits: &ControlLimits) -> Result<usize> {
    if !(cycle_time > 0.0 && cycle_time.is_finite()) {
        return Err(Error::Precondition(format!(
            "cycle time {cycle_time} must be positive"
        )));
    }
    let min_cycles = limits.min_cycles_per_gate.max(1);
    let cycles = match gate.duration {
        Some(d) => {
            if !(d > 0.0 && d.is_finite()) {
                return Err(Error::Precondition(format!(
                    "gate duration {d} must be positive"
                )));
            }
            let c = (d / cycle_time).round() as usize;
            if c < min_cycles {
                return Err(Error::Precondition(format!(
                    "gate duration {d} is {} cycles of {cycle_time}, need at least {min_cycles}",
                    d / cycle_time
                )));
            }
            c
        }
        None => {
            let needed =
                (gate.angle.abs() / limits.max_strength / cycle_time - 1e-9).ceil() as usize;
            needed.max(min_cycles)
        }
    };
    let strength = gate.angle.abs() / (cycles as f64 * cycle_time);
    if strength > limits.max_strength * (1.0 + 1e-12) {
        return Err(Error::Precondition(format!(
            "gate strength {strength} exceeds the weak-control limit {}",
            limits.max_strength
        )));
    }
    Ok(cycles)
}

fn check_commutant(n: usize, kind: GateKind) -> Result<()> {
    let flips = [
        PauliString::collective(n, 'X')?,
        PauliString::collective(n, 'Z')?,
    ];
    for term in kind.pauli_terms(n)? {
        for g in &flips {
            if !term.commutes(g)? {
                return Err(Error::Symmetry {
                    residual: 2.0,
                    detail: format!("{kind:?} term {term} anticommutes with {g}"),
                });
            }
        }
    }
    Ok(())
}

/// Runs the circuit with each gate Hamiltonian switched on at constant
/// strength while the flip decoupler cycles underneath.
pub fn run_encoded_circuit_under_decoupling<T: Real>(
    frame: &LogicalFrame<T>,
    circuit: &[Gate],
    model: &NoiseModel<T>,
    cycle_time: f64,
    limits: &ControlLimits,
) -> Result<CircuitOutcome> {
    let n = frame.n();
    if model.n() != n {
        return Err(Error::Shape(format!(
            "model has {} system qubits, frame has {n}",
            model.n()
        )));
    }
    let plan = circuit
        .iter()
        .map(|g| {
            check_commutant(n, g.kind)?;
            Ok((g, gate_cycles(g, cycle_time, limits)?))
        })
        .collect::<Result<Vec<_>>>()?;

    let h0 = model.total_hamiltonian()?;
    let bath = model.bath_state();
    let bath_dim = model.bath_dim();
    let code = frame.codespace();
    let dcode = frame.code_dim();
    // column x: |x_L> (x) |bath>
    let mut states = code.kronecker(&DMatrix::from_column_slice(
        bath_dim,
        1,
        bath.amplitudes().as_slice(),
    ));

    let base = CycleSchedule::flip_cycle(n, cycle_time)?;
    let mut total_cycles = 0;
    for (gate, cycles) in &plan {
        let strength = gate.angle / (*cycles as f64 * cycle_time);
        let hg = gate_hamiltonian::<T>(n, gate.kind)?
            .scale_real(T::lit(strength))
            .kron(&Operator::identity(bath_dim));
        let h = &h0 + &hg;
        let u = cycle_propagator(&base, SegmentHamiltonians::Constant(&h), bath_dim)?;
        for _ in 0..*cycles {
            states = u.matrix() * states;
        }
        total_cycles += cycles;
    }

    let ideal = ideal_logical_unitary::<T>(n, circuit)?;
    // A_k[a, x] = (<a_L| (x) <k|) U |x_L, bath>
    let mut fid = 0.0;
    for k in 0..bath_dim {
        let rows: Vec<usize> = (0..code.nrows()).map(|s| s * bath_dim + k).collect();
        let slice = DMatrix::from_fn(code.nrows(), dcode, |r, x| states[(rows[r], x)]);
        let a = code.adjoint() * slice;
        let overlap: Complex<T> = ideal
            .matrix()
            .iter()
            .zip(a.iter())
            .map(|(v, a)| v.conj() * a)
            .sum();
        fid += overlap.norm_sqr().as_f64();
    }
    let process_fidelity = (fid / (dcode * dcode) as f64).clamp(0.0, 1.0);
    Ok(CircuitOutcome {
        cycle_time,
        total_cycles,
        total_time: total_cycles as f64 * cycle_time,
        process_fidelity,
    })
}
