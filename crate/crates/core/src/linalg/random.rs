//! Seeded random operators and states for tests and experiments.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::linalg::{Operator, StateVector};
use crate::scalar::{Complex, Real};

fn gaussian<T: Real, R: Rng + ?Sized>(rng: &mut R) -> Complex<T> {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex::new(T::lit(re), T::lit(im))
}

/// Gaussian-unitary-ensemble sample, scaled so entries have unit variance.
pub fn random_hermitian<T: Real, R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Operator<T> {
    let g = DMatrix::from_fn(dim, dim, |_, _| gaussian::<T, R>(rng));
    let half = Complex::new(T::lit(0.5), T::zero());
    Operator::from_matrix((&g + g.adjoint()) * half)
}

/// Uniformly (Haar) distributed pure state.
pub fn random_state<T: Real, R: Rng + ?Sized>(dim: usize, rng: &mut R) -> StateVector<T> {
    let v = DVector::from_fn(dim, |_, _| gaussian::<T, R>(rng));
    StateVector::normalized(v).expect("gaussian vector is nonzero")
}

/// Full-rank random density operator `G G^dagger / tr(G G^dagger)`.
pub fn random_density<T: Real, R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Operator<T> {
    let g = DMatrix::from_fn(dim, dim, |_, _| gaussian::<T, R>(rng));
    let rho = &g * g.adjoint();
    let tr = rho.trace();
    Operator::from_matrix(rho / tr)
}
