use crate::error::{Error, Result};
use crate::group::AlgebraBasis;
use crate::linalg::{eigh, exp_from_eigen, HermitianEigen, Operator, StateVector};
use crate::scalar::{Complex, NumericPolicy, Real};

use super::schedule::CycleSchedule;

/// Segment Hamiltonians on `system (x) bath`: one shared, or one per segment.
#[derive(Debug, Clone, Copy)]
pub enum SegmentHamiltonians<'a, T: Real> {
    Constant(&'a Operator<T>),
    PerSegment(&'a [Operator<T>]),
}

impl<'a, T: Real> SegmentHamiltonians<'a, T> {
    fn get(&self, k: usize) -> &'a Operator<T> {
        match self {
            Self::Constant(h) => h,
            Self::PerSegment(hs) => &hs[k],
        }
    }

    fn distinct(&self) -> usize {
        match self {
            Self::Constant(_) => 1,
            Self::PerSegment(hs) => hs.len(),
        }
    }

    fn index(&self, k: usize) -> usize {
        match self {
            Self::Constant(_) => 0,
            Self::PerSegment(_) => k,
        }
    }
}

fn lift<T: Real>(p: &Operator<T>, bath_dim: usize) -> Operator<T> {
    if bath_dim == 1 {
        p.clone()
    } else {
        p.kron(&Operator::identity(bath_dim))
    }
}

fn check_dims<T: Real>(
    schedule: &CycleSchedule<T>,
    joint_dim: usize,
    bath_dim: usize,
) -> Result<()> {
    if bath_dim == 0 || !joint_dim.is_multiple_of(bath_dim) {
        return Err(Error::Shape(format!(
            "joint dim {joint_dim} not divisible by bath dim {bath_dim}"
        )));
    }
    if let Some(d) = schedule.system_dim() {
        if d * bath_dim != joint_dim {
            return Err(Error::Shape(format!(
                "pulses on dim {d} x bath {bath_dim} vs Hamiltonian dim {joint_dim}"
            )));
        }
    }
    Ok(())
}

/// Propagator of one cycle:
/// `P_N exp(-i H_N d_N) ... P_1 exp(-i H_1 d_1)`, pulses lifted to `P (x) 1`.
pub fn cycle_propagator<T: Real>(
    schedule: &CycleSchedule<T>,
    hamiltonians: SegmentHamiltonians<'_, T>,
    bath_dim: usize,
) -> Result<Operator<T>> {
    let segments = schedule.segments();
    if let SegmentHamiltonians::PerSegment(hs) = hamiltonians {
        if hs.len() != segments.len() {
            return Err(Error::Shape(format!(
                "{} Hamiltonians for {} segments",
                hs.len(),
                segments.len()
            )));
        }
    }
    let dim = hamiltonians.get(0).dim();
    check_dims(schedule, dim, bath_dim)?;
    let tol = T::default_policy().hermiticity;
    let mut eigs: Vec<Option<HermitianEigen<T>>> = vec![None; hamiltonians.distinct()];
    let pulses: Vec<Operator<T>> = schedule
        .pulses()
        .iter()
        .map(|p| lift(p, bath_dim))
        .collect();
    let mut u = Operator::identity(dim);
    for (k, s) in segments.iter().enumerate() {
        let h = hamiltonians.get(k);
        if h.dim() != dim {
            return Err(Error::Shape(format!(
                "segment {k} Hamiltonian dim {} vs {dim}",
                h.dim()
            )));
        }
        let slot = &mut eigs[hamiltonians.index(k)];
        if slot.is_none() {
            *slot = Some(eigh(h, tol)?);
        }
        let step = exp_from_eigen(slot.as_ref().expect("filled above"), T::lit(s.duration));
        u = &step * &u;
        if let Some(p) = s.pulse_after {
            u = &pulses[p] * &u;
        }
    }
    Ok(u)
}

/// Runs `schedule.cycles()` cycles from `psi0`.
pub fn evolve<T: Real>(
    schedule: &CycleSchedule<T>,
    h: &Operator<T>,
    psi0: &StateVector<T>,
    bath_dim: usize,
) -> Result<StateVector<T>> {
    evolve_with(schedule, SegmentHamiltonians::Constant(h), psi0, bath_dim)
}

pub fn evolve_with<T: Real>(
    schedule: &CycleSchedule<T>,
    hamiltonians: SegmentHamiltonians<'_, T>,
    psi0: &StateVector<T>,
    bath_dim: usize,
) -> Result<StateVector<T>> {
    let u = cycle_propagator(schedule, hamiltonians, bath_dim)?;
    if psi0.dim() != u.dim() {
        return Err(Error::Shape(format!(
            "state dim {} vs Hamiltonian dim {}",
            psi0.dim(),
            u.dim()
        )));
    }
    let mut amps = psi0.amplitudes().clone();
    for _ in 0..schedule.cycles() {
        amps = u.matrix() * amps;
    }
    Ok(StateVector::from_vector_unchecked(amps))
}

/// First-order average Hamiltonian `(1/T_c) sum_k d_k g_k^dagger H g_k`
/// over the toggling frames of one cycle.
pub fn average_hamiltonian<T: Real>(
    h: &Operator<T>,
    schedule: &CycleSchedule<T>,
    bath_dim: usize,
) -> Result<Operator<T>> {
    check_dims(schedule, h.dim(), bath_dim)?;
    let sys = h.dim() / bath_dim;
    if !schedule.is_cyclic(sys, T::default_policy().unitarity.max(1e-10)) {
        return Err(Error::Precondition(
            "pulses of one cycle do not multiply to the identity".into(),
        ));
    }
    let mut acc = Operator::zeros(h.dim());
    for (g, s) in schedule
        .toggling_frames(sys)
        .iter()
        .zip(schedule.segments())
    {
        let g = lift(g, bath_dim);
        let term = &(&g.adjoint() * h) * &g;
        acc = &acc + &term.scale_real(T::lit(s.duration));
    }
    Ok(acc.scale_real(T::lit(1.0 / schedule.cycle_time())))
}

/// Lab-frame segment Hamiltonians `g_k H g_k^dagger` that look like `H` in
/// every toggling frame. `H` must lie in the group algebra.
pub fn fast_modulated_gate_schedule<T: Real>(
    h_gate: &Operator<T>,
    schedule: &CycleSchedule<T>,
    group_algebra: &AlgebraBasis<T>,
    policy: &NumericPolicy,
) -> Result<Vec<Operator<T>>> {
    if h_gate.dim() != group_algebra.dim() {
        return Err(Error::Shape(format!(
            "gate dim {} vs group dim {}",
            h_gate.dim(),
            group_algebra.dim()
        )));
    }
    let residual = group_algebra.residual(h_gate);
    if residual > policy.membership {
        return Err(Error::Symmetry {
            residual,
            detail: "fast-modulated gate Hamiltonian must lie in the group algebra".into(),
        });
    }
    Ok(schedule
        .toggling_frames(h_gate.dim())
        .iter()
        .map(|g| &(g * h_gate) * &g.adjoint())
        .collect())
}

/// Operator distance `min_phi |U - e^{i phi} V|_F` normalized by `sqrt(d)`.
pub fn phase_insensitive_distance<T: Real>(u: &Operator<T>, v: &Operator<T>) -> f64 {
    let overlap = v.hs_inner(u);
    let mag = overlap.norm_sqr().as_f64().sqrt();
    let phase = if mag > 0.0 {
        overlap.unscale(T::lit(mag))
    } else {
        Complex::new(T::one(), T::zero())
    };
    (u - &v.scale(phase)).frobenius_norm().as_f64() / (u.dim() as f64).sqrt()
}
