use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::DecouplingGroup;
use crate::linalg::{fidelity, matexp, reduced_density, Operator, StateVector};
use crate::scalar::Real;
use crate::subsystem::{FactorKind, SubsystemDecomposition};

use super::model::NoiseModel;
use super::schedule::CycleSchedule;
use super::sim::evolve;

/// Which cycle to run at each sweep point.
#[derive(Debug, Clone, Copy)]
pub enum ScheduleFamily<'a, T: Real> {
    /// `[delta - P_x - delta - P_z]^2` with collective flips.
    Flip,
    /// Equal dwell in every element of the group.
    Uniform(&'a DecouplingGroup<T>),
}

impl<T: Real> ScheduleFamily<'_, T> {
    pub fn build(&self, n: usize, cycle_time: f64) -> Result<CycleSchedule<T>> {
        match self {
            Self::Flip => CycleSchedule::flip_cycle(n, cycle_time),
            Self::Uniform(g) => {
                if g.dim() != 1 << n {
                    return Err(Error::Shape(format!(
                        "group dim {} vs {n} system qubits",
                        g.dim()
                    )));
                }
                CycleSchedule::uniform_group(g, cycle_time)
            }
        }
    }
}

/// How a total time that is not a whole number of cycles is handled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CycleRounding {
    /// Reject unless `T_total / T_c` is an integer (to 1e-9 relative).
    #[default]
    Exact,
    /// Round to the nearest whole number of cycles (at least one).
    Nearest,
}

/// Whole cycles that fit in `t_total`.
pub fn cycle_count(t_total: f64, cycle_time: f64, rounding: CycleRounding) -> Result<usize> {
    if !(t_total > 0.0 && t_total.is_finite() && cycle_time > 0.0 && cycle_time.is_finite()) {
        return Err(Error::Precondition(format!(
            "total time {t_total} and cycle time {cycle_time} must be positive"
        )));
    }
    let ratio = t_total / cycle_time;
    let whole = ratio.round();
    match rounding {
        CycleRounding::Exact if (ratio - whole).abs() > 1e-9 * ratio.max(1.0) || whole < 1.0 => {
            Err(Error::Precondition(format!(
                "total time {t_total} is not a whole number of cycles of {cycle_time}"
            )))
        }
        _ => Ok(whole.max(1.0) as usize),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub cycle_time: f64,
    pub cycles: usize,
    /// `cycles * cycle_time`, which may differ from the requested total.
    pub simulated_time: f64,
    pub fidelity: f64,
    /// Same evolution with no pulses.
    pub baseline_fidelity: f64,
}

impl SweepPoint {
    pub fn infidelity(&self) -> f64 {
        1.0 - self.fidelity
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub seed: u64,
    pub points: Vec<SweepPoint>,
}

impl SweepResult {
    /// Least-squares slope of `log(1 - F)` against `log T_c`.
    pub fn loglog_slope(&self) -> Option<f64> {
        loglog_slope(
            &self
                .points
                .iter()
                .map(|p| (p.cycle_time, p.infidelity()))
                .collect::<Vec<_>>(),
        )
    }
}

/// Least-squares slope of `log y` against `log x`; `None` if any value is
/// non-positive or fewer than two points are given.
pub fn loglog_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 || points.iter().any(|&(x, y)| x <= 0.0 || y <= 0.0) {
        return None;
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let k = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / k;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Inputs shared by every point of a decoupling sweep.
#[derive(Debug, Clone, Copy)]
pub struct SweepSetup<'a, T: Real> {
    pub model: &'a NoiseModel<T>,
    pub family: ScheduleFamily<'a, T>,
    /// Initial system state.
    pub psi0: &'a StateVector<T>,
    pub total_time: f64,
    pub rounding: CycleRounding,
}

impl<T: Real> SweepSetup<'_, T> {
    /// Decoupled and free fidelities of the reduced system state after the
    /// total time, for one cycle time.
    pub fn point(&self, h: &Operator<T>, cycle_time: f64) -> Result<SweepPoint> {
        let model = self.model;
        if self.psi0.dim() != model.system_dim() {
            return Err(Error::Shape(format!(
                "initial state dim {} vs system dim {}",
                self.psi0.dim(),
                model.system_dim()
            )));
        }
        let cycles = cycle_count(self.total_time, cycle_time, self.rounding)?;
        let schedule = self
            .family
            .build(model.n(), cycle_time)?
            .with_cycles(cycles);
        let simulated_time = cycles as f64 * schedule.cycle_time();
        let joint = self.psi0.kron(&model.bath_state());
        let dims = [model.system_dim(), model.bath_dim()];

        let out = evolve(&schedule, h, &joint, model.bath_dim())?;
        let f = fidelity(self.psi0, &reduced_density(&out, &[0], &dims)?)?;

        let free = joint.apply(&matexp(h, T::lit(simulated_time))?)?;
        let f0 = fidelity(self.psi0, &reduced_density(&free, &[0], &dims)?)?;
        Ok(SweepPoint {
            cycle_time,
            cycles,
            simulated_time,
            fidelity: f.as_f64(),
            baseline_fidelity: f0.as_f64(),
        })
    }
}

/// Runs every cycle time in order. Points are independent; callers wanting
/// parallelism can map [`SweepSetup::point`] themselves.
pub fn decoupling_sweep<T: Real>(
    setup: &SweepSetup<'_, T>,
    cycle_times: &[f64],
) -> Result<SweepResult> {
    let h = setup.model.total_hamiltonian()?;
    let points = cycle_times
        .iter()
        .map(|&tc| setup.point(&h, tc))
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepResult {
        seed: setup.model.seed(),
        points,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PulseErrorOutcome {
    pub epsilon: f64,
    pub cycles: usize,
    /// Fidelity of the `C_J`-reduced state with the encoded logical state.
    pub encoded_fidelity: f64,
    /// Fidelity of the reduced system state for the unencoded `|0...0>`.
    pub reference_fidelity: f64,
}

/// Faulty-pulse run: every pulse `g` becomes `g exp(-i eps E)`.
///
/// The logical state lives in the commutant factor `C_J` of `block`, with
/// the group factor in its first basis state.
#[allow(clippy::too_many_arguments)]
pub fn pulse_error_experiment<T: Real>(
    model: &NoiseModel<T>,
    schedule: &CycleSchedule<T>,
    dec: &SubsystemDecomposition<T>,
    block: usize,
    logical: &StateVector<T>,
    error_generator: &Operator<T>,
    epsilon: f64,
) -> Result<PulseErrorOutcome> {
    let defect = error_generator.hermiticity_defect().as_f64();
    if defect > T::default_policy().hermiticity {
        return Err(Error::Hermiticity(defect));
    }
    if dec.dim() != model.system_dim() {
        return Err(Error::Shape(format!(
            "decomposition dim {} vs system dim {}",
            dec.dim(),
            model.system_dim()
        )));
    }
    let faulty = schedule.with_pulse_error(error_generator, epsilon)?;
    let h = model.total_hamiltonian()?;
    let bath = model.bath_state();
    let bath_dim = model.bath_dim();

    let cofactor = StateVector::basis(dec.block(block)?.irrep_dim, 0)?;
    let encoded = dec.encode(block, FactorKind::Commutant, logical, &cofactor)?;
    let out = evolve(&faulty, &h, &encoded.kron(&bath), bath_dim)?;
    let rho_c = dec.factor_state(block, FactorKind::Commutant, &out, bath_dim)?;
    let encoded_fidelity = fidelity(logical, &rho_c)?.as_f64();

    let reference = StateVector::basis(model.system_dim(), 0)?;
    let out = evolve(&faulty, &h, &reference.kron(&bath), bath_dim)?;
    let dims = [model.system_dim(), bath_dim];
    let reference_fidelity = fidelity(&reference, &reduced_density(&out, &[0], &dims)?)?.as_f64();
    Ok(PulseErrorOutcome {
        epsilon,
        cycles: schedule.cycles(),
        encoded_fidelity,
        reference_fidelity,
    })
}
