use nalgebra::ComplexField;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::DecouplingGroup;
use crate::linalg::{matexp, Operator};
use crate::pauli::PauliString;
use crate::scalar::Real;

/// Free evolution for `duration`, then optionally an instantaneous pulse
/// taken from the schedule's pulse palette.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub duration: f64,
    pub pulse_after: Option<usize>,
}

/// One bang-bang cycle, repeated `cycles` times.
#[derive(Debug, Clone)]
pub struct CycleSchedule<T: Real> {
    segments: Vec<Segment>,
    pulses: Vec<Operator<T>>,
    cycle_time: f64,
    cycles: usize,
}

impl<T: Real> CycleSchedule<T> {
    pub fn new(segments: Vec<Segment>, pulses: Vec<Operator<T>>, cycles: usize) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::Precondition("schedule has no segments".into()));
        }
        if let Some(p) = pulses.first() {
            for (k, q) in pulses.iter().enumerate() {
                p.ensure_same_dim(q, &format!("pulse {k}"))?;
                let defect = q.unitarity_defect().as_f64();
                if defect > T::default_policy().unitarity {
                    return Err(Error::Unitarity(defect));
                }
            }
        }
        for (k, s) in segments.iter().enumerate() {
            if !(s.duration.is_finite() && s.duration >= 0.0) {
                return Err(Error::Precondition(format!(
                    "segment {k} has duration {}",
                    s.duration
                )));
            }
            if let Some(p) = s.pulse_after {
                if p >= pulses.len() {
                    return Err(Error::Shape(format!(
                        "segment {k} refers to pulse {p} of {}",
                        pulses.len()
                    )));
                }
            }
        }
        let cycle_time = segments.iter().map(|s| s.duration).sum();
        if cycle_time <= 0.0 {
            return Err(Error::Precondition("cycle time must be positive".into()));
        }
        Ok(Self {
            segments,
            pulses,
            cycle_time,
            cycles,
        })
    }

    /// `[delta - P_x - delta - P_z]^2` with `delta = T_c / 4` and collective pulses.
    pub fn flip_cycle(n: usize, cycle_time: f64) -> Result<Self> {
        if !(cycle_time > 0.0 && cycle_time.is_finite()) {
            return Err(Error::Precondition(format!(
                "cycle time {cycle_time} must be positive"
            )));
        }
        let px = PauliString::collective(n, 'X')?.to_operator();
        let pz = PauliString::collective(n, 'Z')?.to_operator();
        let delta = cycle_time / 4.0;
        let segments = [0, 1, 0, 1]
            .into_iter()
            .map(|p| Segment {
                duration: delta,
                pulse_after: Some(p),
            })
            .collect();
        Self::new(segments, vec![px, pz], 1)
    }

    /// Equal dwell in every element of `g`, visiting them in the group's
    /// element order; pulse `k` is `g_{k+1} g_k^dagger`.
    pub fn uniform_group(g: &DecouplingGroup<T>, cycle_time: f64) -> Result<Self> {
        if !(cycle_time > 0.0 && cycle_time.is_finite()) {
            return Err(Error::Precondition(format!(
                "cycle time {cycle_time} must be positive"
            )));
        }
        let order = g.order();
        let elems = g.elements();
        let delta = cycle_time / order as f64;
        let pulses: Vec<Operator<T>> = (0..order)
            .map(|k| &elems[(k + 1) % order] * &elems[k].adjoint())
            .collect();
        let segments = (0..order)
            .map(|k| Segment {
                duration: delta,
                pulse_after: Some(k),
            })
            .collect();
        Self::new(segments, pulses, 1)
    }

    pub fn with_cycles(mut self, cycles: usize) -> Self {
        self.cycles = cycles;
        self
    }

    /// Every pulse `P` replaced by `P exp(-i eps E)`.
    pub fn with_pulse_error(&self, generator: &Operator<T>, epsilon: f64) -> Result<Self> {
        let mut out = self.clone();
        if self.pulses.is_empty() {
            return Ok(out);
        }
        self.pulses[0].ensure_same_dim(generator, "pulse error generator")?;
        let kick = matexp(generator, T::lit(epsilon))?;
        out.pulses = self.pulses.iter().map(|p| p * &kick).collect();
        Ok(out)
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn pulses(&self) -> &[Operator<T>] {
        &self.pulses
    }

    pub fn cycle_time(&self) -> f64 {
        self.cycle_time
    }

    pub fn cycles(&self) -> usize {
        self.cycles
    }

    /// System dimension the pulses act on, if the schedule has any.
    pub fn system_dim(&self) -> Option<usize> {
        self.pulses.first().map(Operator::dim)
    }

    /// Cumulative pulse products `g_k` in force during segment `k` (`g_0 = 1`).
    pub fn toggling_frames(&self, system_dim: usize) -> Vec<Operator<T>> {
        let mut frames = Vec::with_capacity(self.segments.len());
        let mut g = Operator::identity(system_dim);
        for s in &self.segments {
            frames.push(g.clone());
            if let Some(p) = s.pulse_after {
                g = &self.pulses[p] * &g;
            }
        }
        frames
    }

    /// Product of all pulses in one cycle.
    pub fn cycle_pulse_product(&self, system_dim: usize) -> Operator<T> {
        let mut g = Operator::identity(system_dim);
        for s in &self.segments {
            if let Some(p) = s.pulse_after {
                g = &self.pulses[p] * &g;
            }
        }
        g
    }

    /// True when the pulses of one cycle multiply to a phase times identity.
    pub fn is_cyclic(&self, system_dim: usize, tol: f64) -> bool {
        proportional_to_identity(&self.cycle_pulse_product(system_dim), tol)
    }
}

pub(crate) fn proportional_to_identity<T: Real>(u: &Operator<T>, tol: f64) -> bool {
    let phase = u.get(0, 0);
    if (phase.modulus().as_f64() - 1.0).abs() > tol {
        return false;
    }
    let target = Operator::identity(u.dim()).scale(phase);
    u.max_abs_diff(&target).as_f64() <= tol
}
