use nalgebra::ComplexField;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::scalar::{Complex, Real};

/// Dense square complex matrix acting on a finite-dimensional Hilbert space.
#[derive(Clone, PartialEq)]
pub struct Operator<T: Real> {
    mat: DMatrix<Complex<T>>,
    label: Option<String>,
}

impl<T: Real> Operator<T> {
    pub fn new(mat: DMatrix<Complex<T>>) -> Result<Self> {
        if mat.nrows() != mat.ncols() || mat.nrows() == 0 {
            return Err(Error::Shape(format!(
                "operator must be square and non-empty, got {}x{}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        if mat.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Precondition(
                "operator has non-finite entries".into(),
            ));
        }
        Ok(Self { mat, label: None })
    }

    /// Wraps a matrix already known to be square.
    pub(crate) fn from_matrix(mat: DMatrix<Complex<T>>) -> Self {
        debug_assert_eq!(mat.nrows(), mat.ncols());
        Self { mat, label: None }
    }

    pub fn from_fn(dim: usize, f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        Self::from_matrix(DMatrix::from_fn(dim, dim, f))
    }

    /// Row-major entries.
    pub fn from_row_slice(dim: usize, entries: &[Complex<T>]) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::Shape(format!(
                "expected {} entries for a {dim}x{dim} operator, got {}",
                dim * dim,
                entries.len()
            )));
        }
        Self::new(DMatrix::from_row_slice(dim, dim, entries))
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_matrix(DMatrix::identity(dim, dim))
    }

    pub fn zeros(dim: usize) -> Self {
        Self::from_matrix(DMatrix::zeros(dim, dim))
    }

    pub fn diagonal(diag: &[Complex<T>]) -> Self {
        let n = diag.len();
        Self::from_fn(n, |i, j| {
            if i == j {
                diag[i]
            } else {
                Complex::new(T::zero(), T::zero())
            }
        })
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex<T>> {
        &self.mat
    }

    pub fn into_matrix(self) -> DMatrix<Complex<T>> {
        self.mat
    }

    pub fn get(&self, row: usize, col: usize) -> Complex<T> {
        self.mat[(row, col)]
    }

    pub fn adjoint(&self) -> Self {
        Self::from_matrix(self.mat.adjoint())
    }

    pub fn trace(&self) -> Complex<T> {
        self.mat.trace()
    }

    pub fn kron(&self, other: &Self) -> Self {
        Self::from_matrix(self.mat.kronecker(&other.mat))
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        Self::from_matrix(&self.mat * s)
    }

    pub fn scale_real(&self, s: T) -> Self {
        self.scale(Complex::new(s, T::zero()))
    }

    /// `[self, other] = self*other - other*self`.
    pub fn commutator(&self, other: &Self) -> Self {
        Self::from_matrix(&self.mat * &other.mat - &other.mat * &self.mat)
    }

    /// Normalized Hilbert-Schmidt inner product `tr(A^dagger B) / d`.
    pub fn hs_inner(&self, other: &Self) -> Complex<T> {
        let d = T::from_usize(self.dim()).unwrap();
        self.mat.dotc(&other.mat) / Complex::new(d, T::zero())
    }

    pub fn frobenius_norm(&self) -> T {
        self.mat.norm()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> T {
        self.mat
            .iter()
            .fold(T::zero(), |acc, z| acc.max(z.modulus()))
    }

    pub fn hermiticity_defect(&self) -> T {
        let mut worst = T::zero();
        let n = self.dim();
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.mat[(i, j)] - self.mat[(j, i)].conj()).modulus());
            }
        }
        worst
    }

    pub fn unitarity_defect(&self) -> T {
        let prod = self.mat.adjoint() * &self.mat;
        let n = self.dim();
        let mut worst = T::zero();
        for i in 0..n {
            for j in 0..n {
                let target = if i == j { T::one() } else { T::zero() };
                worst = worst.max((prod[(i, j)] - Complex::new(target, T::zero())).modulus());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect().as_f64() <= tol
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_defect().as_f64() <= tol
    }

    /// `(self + self^dagger) / 2`.
    pub fn hermitian_part(&self) -> Self {
        let half = Complex::new(T::lit(0.5), T::zero());
        Self::from_matrix((&self.mat + self.mat.adjoint()) * half)
    }

    /// Maximum-entry distance between two operators of equal dimension.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.mat
            .iter()
            .zip(other.mat.iter())
            .fold(T::zero(), |acc, (a, b)| acc.max((*a - *b).modulus()))
    }

    pub fn ensure_same_dim(&self, other: &Self, what: &str) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::Shape(format!(
                "{what}: dimension {} vs {}",
                self.dim(),
                other.dim()
            )));
        }
        Ok(())
    }

    /// Converts to another scalar precision.
    pub fn cast<U: Real>(&self) -> Operator<U> {
        Operator::from_matrix(
            self.mat
                .map(|z| Complex::new(U::lit(z.re.as_f64()), U::lit(z.im.as_f64()))),
        )
    }
}

impl<T: Real> fmt::Debug for Operator<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Operator")
            .field("dim", &self.dim())
            .field("label", &self.label)
            .finish_non_exhaustive()
    }
}

impl<'a, T: Real> Mul<&'a Operator<T>> for &'a Operator<T> {
    type Output = Operator<T>;
    fn mul(self, rhs: &'a Operator<T>) -> Operator<T> {
        Operator::from_matrix(&self.mat * &rhs.mat)
    }
}

impl<T: Real> Mul for Operator<T> {
    type Output = Operator<T>;
    fn mul(self, rhs: Operator<T>) -> Operator<T> {
        Operator::from_matrix(self.mat * rhs.mat)
    }
}

impl<'a, T: Real> Add<&'a Operator<T>> for &'a Operator<T> {
    type Output = Operator<T>;
    fn add(self, rhs: &'a Operator<T>) -> Operator<T> {
        Operator::from_matrix(&self.mat + &rhs.mat)
    }
}

impl<T: Real> Add for Operator<T> {
    type Output = Operator<T>;
    fn add(self, rhs: Operator<T>) -> Operator<T> {
        Operator::from_matrix(self.mat + rhs.mat)
    }
}

impl<'a, T: Real> Sub<&'a Operator<T>> for &'a Operator<T> {
    type Output = Operator<T>;
    fn sub(self, rhs: &'a Operator<T>) -> Operator<T> {
        Operator::from_matrix(&self.mat - &rhs.mat)
    }
}

impl<T: Real> Sub for Operator<T> {
    type Output = Operator<T>;
    fn sub(self, rhs: Operator<T>) -> Operator<T> {
        Operator::from_matrix(self.mat - rhs.mat)
    }
}

impl<T: Real> Neg for Operator<T> {
    type Output = Operator<T>;
    fn neg(self) -> Operator<T> {
        Operator::from_matrix(-self.mat)
    }
}

/// Kronecker product of a list of operators, left factor most significant.
pub fn kron_all<T: Real>(factors: &[Operator<T>]) -> Operator<T> {
    let mut iter = factors.iter();
    let first = match iter.next() {
        Some(f) => f.clone(),
        None => return Operator::identity(1),
    };
    iter.fold(first, |acc, f| acc.kron(f))
}
