//! Scalar abstraction and the numeric tolerance policy.

use std::fmt::{Debug, Display, LowerExp};

use nalgebra::RealField;
use num_traits::{FromPrimitive, ToPrimitive};

/// Complex number over the crate's real scalar.
pub type Complex<T> = nalgebra::Complex<T>;

/// Real scalar the numerical core is generic over (`f32` or `f64`).
pub trait Real:
    RealField + Copy + FromPrimitive + ToPrimitive + Debug + Display + LowerExp + Send + Sync + 'static
{
    /// Tolerances appropriate to the precision of this scalar.
    fn default_policy() -> NumericPolicy;

    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("scalar convertible to f64")
    }
}

impl Real for f64 {
    fn default_policy() -> NumericPolicy {
        NumericPolicy::default()
    }
}

impl Real for f32 {
    fn default_policy() -> NumericPolicy {
        NumericPolicy {
            rank_cutoff: 1e-5,
            hermiticity: 1e-5,
            unitarity: 1e-5,
            element_equality: 1e-4,
            membership: 1e-4,
            degeneracy_gap: 1e-3,
            traceless: 1e-5,
        }
    }
}

#[cfg(test)]
pub(crate) fn c<T: Real>(re: f64, im: f64) -> Complex<T> {
    Complex::new(T::lit(re), T::lit(im))
}

/// Every tolerance the library uses, in one place.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NumericPolicy {
    /// Singular values below `rank_cutoff * sigma_max` count as zero.
    pub rank_cutoff: f64,
    /// Max entry of `|H - H^dagger|` accepted as Hermitian.
    pub hermiticity: f64,
    /// Max entry of `|U^dagger U - I|` accepted as unitary.
    pub unitarity: f64,
    /// Normalized Hilbert-Schmidt distance under which two phase-canonical
    /// group elements are identified.
    pub element_equality: f64,
    /// Residual norm below which an operator lies in a subspace.
    pub membership: f64,
    /// Minimum eigenvalue gap separating clusters of a generic element.
    pub degeneracy_gap: f64,
    /// Max `|tr E| / d` for an error generator.
    pub traceless: f64,
}

impl Default for NumericPolicy {
    fn default() -> Self {
        Self {
            rank_cutoff: 1e-10,
            hermiticity: 1e-10,
            unitarity: 1e-10,
            element_equality: 1e-8,
            membership: 1e-8,
            degeneracy_gap: 1e-6,
            traceless: 1e-10,
        }
    }
}
