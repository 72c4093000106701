//! Dense complex matrix substrate: operators, states, Hermitian
//! exponentials, partial traces and fidelities. `hbar = 1` throughout.

mod decomp;
mod operator;
pub mod random;
mod state;

pub(crate) use decomp::{cluster_eigenvalues, eigh_unchecked, min_cluster_gap};
pub use decomp::{eigh, exp_from_eigen, matexp, nullspace, range_basis, HermitianEigen};
pub use operator::{kron_all, Operator};
pub use state::StateVector;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::scalar::{Complex, Real};

/// Splits a tensor-product layout into offsets for the kept and traced factors.
fn factor_offsets(keep: &[usize], dims: &[usize]) -> Result<(Vec<usize>, Vec<usize>)> {
    if keep.is_empty() {
        return Err(Error::Shape(
            "partial trace needs at least one kept factor".into(),
        ));
    }
    let mut kept: Vec<usize> = keep.to_vec();
    kept.sort_unstable();
    kept.dedup();
    if kept.len() != keep.len() || *kept.last().unwrap() >= dims.len() {
        return Err(Error::Shape(format!(
            "invalid kept factors {keep:?} for dims {dims:?}"
        )));
    }
    let mut strides = vec![1usize; dims.len()];
    for k in (0..dims.len().saturating_sub(1)).rev() {
        strides[k] = strides[k + 1] * dims[k + 1];
    }
    let traced: Vec<usize> = (0..dims.len()).filter(|k| !kept.contains(k)).collect();
    let offsets = |factors: &[usize]| -> Vec<usize> {
        let mut out = vec![0usize];
        for &f in factors {
            out = out
                .iter()
                .flat_map(|&base| {
                    let stride = strides[f];
                    (0..dims[f]).map(move |digit| base + digit * stride)
                })
                .collect();
        }
        out
    };
    Ok((offsets(&kept), offsets(&traced)))
}

fn check_dims(total: usize, dims: &[usize]) -> Result<()> {
    if dims.contains(&0) || dims.iter().product::<usize>() != total {
        return Err(Error::Shape(format!(
            "subsystem dims {dims:?} inconsistent with total dimension {total}"
        )));
    }
    Ok(())
}

/// Traces out every factor of `dims` not listed in `keep` (0-based, first factor
/// most significant).
pub fn partial_trace<T: Real>(
    rho: &Operator<T>,
    keep: &[usize],
    dims: &[usize],
) -> Result<Operator<T>> {
    check_dims(rho.dim(), dims)?;
    let (kept, traced) = factor_offsets(keep, dims)?;
    let m = rho.matrix();
    let out = DMatrix::from_fn(kept.len(), kept.len(), |a, b| {
        traced
            .iter()
            .fold(Complex::new(T::zero(), T::zero()), |acc, &t| {
                acc + m[(kept[a] + t, kept[b] + t)]
            })
    });
    Ok(Operator::from_matrix(out))
}

/// Reduced density operator of a pure state, without forming `|psi><psi|`.
pub fn reduced_density<T: Real>(
    psi: &StateVector<T>,
    keep: &[usize],
    dims: &[usize],
) -> Result<Operator<T>> {
    check_dims(psi.dim(), dims)?;
    let (kept, traced) = factor_offsets(keep, dims)?;
    let v = psi.amplitudes();
    let out = DMatrix::from_fn(kept.len(), kept.len(), |a, b| {
        traced
            .iter()
            .fold(Complex::new(T::zero(), T::zero()), |acc, &t| {
                acc + v[kept[a] + t] * v[kept[b] + t].conj()
            })
    });
    Ok(Operator::from_matrix(out))
}

/// `<psi|rho|psi>` clamped to `[0, 1]`.
pub fn fidelity<T: Real>(psi: &StateVector<T>, rho: &Operator<T>) -> Result<T> {
    if psi.dim() != rho.dim() {
        return Err(Error::Shape(format!(
            "state dim {} vs density dim {}",
            psi.dim(),
            rho.dim()
        )));
    }
    let v = psi.amplitudes();
    let value = v.dotc(&(rho.matrix() * v)).re;
    Ok(value.max(T::zero()).min(T::one()))
}

/// Column-major vectorization `vec(A)` into a single column.
pub(crate) fn vectorize<T: Real>(op: &Operator<T>) -> nalgebra::DVector<Complex<T>> {
    nalgebra::DVector::from_column_slice(op.matrix().as_slice())
}

/// Inverse of [`vectorize`].
pub(crate) fn unvectorize<T: Real>(v: impl Iterator<Item = Complex<T>>, dim: usize) -> Operator<T> {
    let data: Vec<Complex<T>> = v.collect();
    Operator::from_matrix(DMatrix::from_column_slice(dim, dim, &data))
}
