use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::linalg::Operator;
use crate::scalar::{Complex, Real};

/// Normalized pure state.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector<T: Real> {
    amps: DVector<Complex<T>>,
}

impl<T: Real> StateVector<T> {
    /// Accepts amplitudes already normalized within the policy's unitarity tolerance.
    pub fn new(amps: DVector<Complex<T>>) -> Result<Self> {
        if amps.is_empty() {
            return Err(Error::Shape("empty state vector".into()));
        }
        let tol = T::default_policy().unitarity.max(1e-12);
        let norm = amps.norm().as_f64();
        if (norm - 1.0).abs() > tol {
            return Err(Error::Precondition(format!("state norm {norm} is not 1")));
        }
        Ok(Self { amps })
    }

    /// Rescales to unit norm.
    pub fn normalized(amps: DVector<Complex<T>>) -> Result<Self> {
        let norm = amps.norm();
        if amps.is_empty() || norm <= T::zero() {
            return Err(Error::Precondition("cannot normalize a zero vector".into()));
        }
        Ok(Self {
            amps: amps / Complex::new(norm, T::zero()),
        })
    }

    pub fn from_slice(amps: &[Complex<T>]) -> Result<Self> {
        Self::normalized(DVector::from_column_slice(amps))
    }

    pub(crate) fn from_vector_unchecked(amps: DVector<Complex<T>>) -> Self {
        Self { amps }
    }

    /// Computational basis state `|index>`.
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(Error::Shape(format!(
                "basis index {index} out of range for dim {dim}"
            )));
        }
        let mut amps = DVector::zeros(dim);
        amps[index] = Complex::new(T::one(), T::zero());
        Ok(Self { amps })
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &DVector<Complex<T>> {
        &self.amps
    }

    pub fn into_amplitudes(self) -> DVector<Complex<T>> {
        self.amps
    }

    pub fn norm(&self) -> T {
        self.amps.norm()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &Self) -> Complex<T> {
        self.amps.dotc(&other.amps)
    }

    pub fn kron(&self, other: &Self) -> Self {
        Self {
            amps: self.amps.kronecker(&other.amps),
        }
    }

    /// Applies an operator without renormalizing.
    pub fn apply(&self, op: &Operator<T>) -> Result<Self> {
        if op.dim() != self.dim() {
            return Err(Error::Shape(format!(
                "operator dim {} vs state dim {}",
                op.dim(),
                self.dim()
            )));
        }
        Ok(Self {
            amps: op.matrix() * &self.amps,
        })
    }

    /// `|self><self|`.
    pub fn density(&self) -> Operator<T> {
        Operator::from_matrix(&self.amps * self.amps.adjoint())
    }
}
