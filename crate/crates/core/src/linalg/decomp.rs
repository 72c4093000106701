use nalgebra::ComplexField;
use nalgebra::{DMatrix, SymmetricEigen, SVD};

use crate::error::{Error, Result};
use crate::linalg::Operator;
use crate::scalar::{Complex, Real};

/// Eigendecomposition of a Hermitian operator with ascending eigenvalues.
#[derive(Debug, Clone)]
pub struct HermitianEigen<T: Real> {
    pub values: Vec<T>,
    /// Column `k` is the eigenvector for `values[k]`.
    pub vectors: DMatrix<Complex<T>>,
}

/// Diagonalizes `h`, which must be Hermitian within `tol`.
pub fn eigh<T: Real>(h: &Operator<T>, tol: f64) -> Result<HermitianEigen<T>> {
    let defect = h.hermiticity_defect().as_f64();
    if defect > tol {
        return Err(Error::Hermiticity(defect));
    }
    Ok(eigh_unchecked(h.hermitian_part().matrix()))
}

pub(crate) fn eigh_unchecked<T: Real>(h: &DMatrix<Complex<T>>) -> HermitianEigen<T> {
    let eig = SymmetricEigen::new(h.clone());
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[a]
            .partial_cmp(&eig.eigenvalues[b])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = DMatrix::from_fn(h.nrows(), order.len(), |i, j| {
        eig.eigenvectors[(i, order[j])]
    });
    HermitianEigen { values, vectors }
}

/// `exp(-i H t)` for Hermitian `H`, via the eigendecomposition of `H`.
pub fn matexp<T: Real>(h: &Operator<T>, t: T) -> Result<Operator<T>> {
    let eig = eigh(h, T::default_policy().hermiticity)?;
    Ok(exp_from_eigen(&eig, t))
}

/// Reassembles `V diag(exp(-i lambda t)) V^dagger` from a precomputed decomposition.
pub fn exp_from_eigen<T: Real>(eig: &HermitianEigen<T>, t: T) -> Operator<T> {
    let phases: Vec<Complex<T>> = eig
        .values
        .iter()
        .map(|&l| {
            let theta = -l * t;
            Complex::new(theta.cos(), theta.sin())
        })
        .collect();
    let mut scaled = eig.vectors.clone();
    for (j, mut col) in scaled.column_iter_mut().enumerate() {
        col *= phases[j];
    }
    Operator::from_matrix(scaled * eig.vectors.adjoint())
}

/// Orthonormal basis (as columns) of the null space of `m`, treating singular
/// values below `rel_cutoff * sigma_max` as zero.
pub fn nullspace<T: Real>(m: &DMatrix<Complex<T>>, rel_cutoff: f64) -> DMatrix<Complex<T>> {
    let cols = m.ncols();
    if m.nrows() == 0 || m.iter().all(|z| z.modulus() == T::zero()) {
        return DMatrix::identity(cols, cols);
    }
    // nalgebra only returns min(rows, cols) right singular vectors.
    let padded;
    let work = if m.nrows() < cols {
        padded = m
            .clone()
            .resize_vertically(cols, Complex::new(T::zero(), T::zero()));
        &padded
    } else {
        m
    };
    let svd = SVD::new(work.clone(), false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let sigma_max = svd.singular_values.iter().fold(T::zero(), |a, &s| a.max(s));
    let cutoff = sigma_max * T::lit(rel_cutoff);
    let null_rows: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&k| svd.singular_values[k] <= cutoff)
        .collect();
    DMatrix::from_fn(cols, null_rows.len(), |i, j| v_t[(null_rows[j], i)].conj())
}

/// Orthonormal basis (as columns) of the column span of `m`.
pub fn range_basis<T: Real>(m: &DMatrix<Complex<T>>, rel_cutoff: f64) -> DMatrix<Complex<T>> {
    let rows = m.nrows();
    if m.ncols() == 0 || m.iter().all(|z| z.modulus() == T::zero()) {
        return DMatrix::zeros(rows, 0);
    }
    let svd = SVD::new(m.clone(), true, false);
    let u = svd.u.expect("left singular vectors requested");
    let sigma_max = svd.singular_values.iter().fold(T::zero(), |a, &s| a.max(s));
    let cutoff = sigma_max * T::lit(rel_cutoff);
    let mut keep: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&k| svd.singular_values[k] > cutoff)
        .collect();
    keep.sort_by(|&a, &b| {
        svd.singular_values[b]
            .partial_cmp(&svd.singular_values[a])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    DMatrix::from_fn(rows, keep.len(), |i, j| u[(i, keep[j])])
}

/// Groups ascending eigenvalues into clusters separated by more than `gap`.
/// Returns index ranges into the sorted eigenvalue list.
pub(crate) fn cluster_eigenvalues<T: Real>(values: &[T], gap: f64) -> Vec<std::ops::Range<usize>> {
    let mut clusters = Vec::new();
    let mut start = 0;
    for k in 1..=values.len() {
        if k == values.len() || (values[k] - values[k - 1]).as_f64() > gap {
            clusters.push(start..k);
            start = k;
        }
    }
    clusters
}

/// Smallest spacing between neighbouring clusters, or infinity for a single cluster.
pub(crate) fn min_cluster_gap<T: Real>(values: &[T], clusters: &[std::ops::Range<usize>]) -> f64 {
    clusters
        .windows(2)
        .map(|w| (values[w[1].start] - values[w[0].end - 1]).as_f64())
        .fold(f64::INFINITY, f64::min)
}
