use nalgebra::{DMatrix, SVD};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::group::DecouplingGroup;
use crate::linalg::{nullspace, range_basis, unvectorize, vectorize, Operator};
use crate::scalar::{Complex, NumericPolicy, Real};

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AlgebraTag {
    GroupAlgebra,
    Commutant,
    Center,
}

/// Basis of a matrix algebra, orthonormal under `<A, B> = tr(A^dagger B) / d`.
#[derive(Debug, Clone)]
pub struct AlgebraBasis<T: Real> {
    dim: usize,
    basis_ops: Vec<Operator<T>>,
    tag: AlgebraTag,
}

impl<T: Real> AlgebraBasis<T> {
    /// Builds from orthonormal (Euclidean) columns of vectorized operators.
    fn from_columns(dim: usize, cols: &DMatrix<Complex<T>>, tag: AlgebraTag) -> Self {
        let scale = Complex::new(T::from_usize(dim).unwrap().sqrt(), T::zero());
        let basis_ops = cols
            .column_iter()
            .map(|c| unvectorize(c.iter().map(|z| *z * scale), dim))
            .collect();
        Self {
            dim,
            basis_ops,
            tag,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Dimension of the algebra as a vector space.
    pub fn len(&self) -> usize {
        self.basis_ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis_ops.is_empty()
    }

    pub fn tag(&self) -> AlgebraTag {
        self.tag
    }

    pub fn basis(&self) -> &[Operator<T>] {
        &self.basis_ops
    }

    /// Orthogonal (Hilbert-Schmidt) projection of `x` onto the span.
    pub fn project(&self, x: &Operator<T>) -> Operator<T> {
        let mut acc = Operator::zeros(self.dim);
        for b in &self.basis_ops {
            acc = &acc + &b.scale(b.hs_inner(x));
        }
        acc
    }

    /// Frobenius distance from `x` to the span, relative to `|x|` when `x` is nonzero.
    pub fn residual(&self, x: &Operator<T>) -> f64 {
        let norm = x.frobenius_norm().as_f64();
        let r = (x - &self.project(x)).frobenius_norm().as_f64();
        if norm > 0.0 {
            r / norm
        } else {
            0.0
        }
    }

    pub fn contains(&self, x: &Operator<T>, tol: f64) -> bool {
        self.residual(x) <= tol
    }

    /// Max entry of `|Gram - I|` under the normalized inner product.
    pub fn gram_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, a) in self.basis_ops.iter().enumerate() {
            for (j, b) in self.basis_ops.iter().enumerate() {
                let target = if i == j { 1.0 } else { 0.0 };
                let g = a.hs_inner(b);
                worst = worst.max((g.re.as_f64() - target).hypot(g.im.as_f64()));
            }
        }
        worst
    }

    /// Largest relative residual of a pairwise product leaving the span.
    pub fn closure_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for a in &self.basis_ops {
            for b in &self.basis_ops {
                worst = worst.max(self.residual(&(a * b)));
            }
        }
        worst
    }

    /// Random Hermitian element; the algebras here are closed under adjoint.
    pub fn random_hermitian<R: Rng + ?Sized>(&self, rng: &mut R) -> Operator<T> {
        let mut acc = Operator::zeros(self.dim);
        for b in &self.basis_ops {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            acc = &acc + &b.scale(Complex::new(T::lit(re), T::lit(im)));
        }
        acc.hermitian_part()
    }

    /// Orthogonal projector onto the span, as a `d^2 x d^2` matrix on `vec(X)`.
    pub fn superoperator(&self) -> DMatrix<Complex<T>> {
        let d2 = self.dim * self.dim;
        let mut p = DMatrix::zeros(d2, d2);
        let inv = Complex::new(T::one() / T::from_usize(self.dim).unwrap(), T::zero());
        for b in &self.basis_ops {
            let v = vectorize(b);
            p += &v * v.adjoint() * inv;
        }
        p
    }
}

/// Span of the group elements.
pub fn group_algebra_basis<T: Real>(g: &DecouplingGroup<T>) -> AlgebraBasis<T> {
    group_algebra_basis_with(g, &T::default_policy())
}

pub fn group_algebra_basis_with<T: Real>(
    g: &DecouplingGroup<T>,
    policy: &NumericPolicy,
) -> AlgebraBasis<T> {
    let d = g.dim();
    let mut m = DMatrix::zeros(d * d, g.order());
    for (k, e) in g.elements().iter().enumerate() {
        m.set_column(k, &vectorize(e));
    }
    AlgebraBasis::from_columns(
        d,
        &range_basis(&m, policy.rank_cutoff),
        AlgebraTag::GroupAlgebra,
    )
}

/// Joint null space of `O -> O g - g O` over the generators.
pub fn commutant_basis<T: Real>(g: &DecouplingGroup<T>) -> AlgebraBasis<T> {
    commutant_basis_with(g, &T::default_policy())
}

pub fn commutant_basis_with<T: Real>(
    g: &DecouplingGroup<T>,
    policy: &NumericPolicy,
) -> AlgebraBasis<T> {
    let d = g.dim();
    let d2 = d * d;
    let gens = g.generators();
    let mut stacked = DMatrix::zeros(d2 * gens.len(), d2);
    let id = DMatrix::<Complex<T>>::identity(d, d);
    for (k, gen) in gens.iter().enumerate() {
        // column-major vec: vec(O g) = (g^T (x) I) vec(O), vec(g O) = (I (x) g) vec(O)
        let map = gen.matrix().transpose().kronecker(&id) - id.kronecker(gen.matrix());
        stacked.view_mut((k * d2, 0), (d2, d2)).copy_from(&map);
    }
    AlgebraBasis::from_columns(
        d,
        &nullspace(&stacked, policy.rank_cutoff),
        AlgebraTag::Commutant,
    )
}

/// Intersection of the group algebra and its commutant, found from the
/// principal angles between the two spans.
pub fn center_basis<T: Real>(g: &DecouplingGroup<T>) -> AlgebraBasis<T> {
    let policy = T::default_policy();
    center_from(
        &group_algebra_basis_with(g, &policy),
        &commutant_basis_with(g, &policy),
        &policy,
    )
}

pub(crate) fn center_from<T: Real>(
    algebra: &AlgebraBasis<T>,
    commutant: &AlgebraBasis<T>,
    policy: &NumericPolicy,
) -> AlgebraBasis<T> {
    let d = algebra.dim;
    let cross = DMatrix::from_fn(algebra.len(), commutant.len(), |i, j| {
        algebra.basis_ops[i].hs_inner(&commutant.basis_ops[j])
    });
    let svd = SVD::new(cross, true, false);
    let u = svd.u.expect("left singular vectors requested");
    let mut basis_ops = Vec::new();
    for (s, &sigma) in svd.singular_values.iter().enumerate() {
        if 1.0 - sigma.as_f64() <= policy.membership {
            let mut acc = Operator::zeros(d);
            for (i, a) in algebra.basis_ops.iter().enumerate() {
                acc = &acc + &a.scale(u[(i, s)]);
            }
            basis_ops.push(acc);
        }
    }
    // Re-orthonormalize against accumulated rounding.
    let mut m = DMatrix::zeros(d * d, basis_ops.len());
    for (k, b) in basis_ops.iter().enumerate() {
        m.set_column(k, &vectorize(b));
    }
    AlgebraBasis::from_columns(d, &range_basis(&m, policy.rank_cutoff), AlgebraTag::Center)
}
