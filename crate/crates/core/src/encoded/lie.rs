use nalgebra::DVector;

use crate::linalg::Operator;
use crate::scalar::Real;

/// Real dimension of the Lie algebra generated by `{i H_k}` under
/// commutators, found by iterated closure with Gram-Schmidt on the real
/// coordinates of each anti-Hermitian matrix.
pub fn lie_algebra_dimension<T: Real>(hamiltonians: &[Operator<T>], rel_cutoff: f64) -> usize {
    let Some(first) = hamiltonians.first() else {
        return 0;
    };
    let d = first.dim();
    let max_dim = d * d;
    let mut basis: Vec<(Operator<T>, DVector<f64>)> = Vec::new();
    let mut frontier: Vec<Operator<T>> = Vec::new();
    for h in hamiltonians {
        if let Some(entry) = orthogonalize(&basis, h, rel_cutoff) {
            frontier.push(entry.0.clone());
            basis.push(entry);
        }
    }
    while !frontier.is_empty() && basis.len() < max_dim {
        let mut next = Vec::new();
        for a in &frontier {
            let snapshot: Vec<Operator<T>> = basis.iter().map(|(op, _)| op.clone()).collect();
            for b in &snapshot {
                // [iA, iB] = -[A, B]; i[A, B] is Hermitian, so keep working with Hermitian reps.
                let c = a
                    .commutator(b)
                    .scale(crate::Complex::new(T::zero(), T::one()));
                if let Some(entry) = orthogonalize(&basis, &c, rel_cutoff) {
                    next.push(entry.0.clone());
                    basis.push(entry);
                }
            }
        }
        frontier = next;
    }
    basis.len()
}

fn coordinates<T: Real>(h: &Operator<T>) -> DVector<f64> {
    let m = h.matrix();
    DVector::from_iterator(
        2 * m.len(),
        m.iter().flat_map(|z| [z.re.as_f64(), z.im.as_f64()]),
    )
}

fn orthogonalize<T: Real>(
    basis: &[(Operator<T>, DVector<f64>)],
    h: &Operator<T>,
    rel_cutoff: f64,
) -> Option<(Operator<T>, DVector<f64>)> {
    let mut v = coordinates(h);
    let scale = v.norm();
    if scale == 0.0 {
        return None;
    }
    for _ in 0..2 {
        for (_, b) in basis {
            let proj = b.dot(&v);
            v -= b * proj;
        }
    }
    let norm = v.norm();
    if norm <= rel_cutoff * scale {
        return None;
    }
    Some((h.scale_real(T::lit(1.0 / scale)), v / norm))
}
