//! Finite decoupling groups, the group-averaging projector and the
//! associated operator algebras.

mod algebra;
pub mod description;
mod element;

pub use description::{GroupSpec, Preset};

pub(crate) use algebra::center_from;
pub use algebra::{
    center_basis, commutant_basis, commutant_basis_with, group_algebra_basis,
    group_algebra_basis_with, AlgebraBasis, AlgebraTag,
};

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::linalg::Operator;
use crate::pauli::PauliString;
use crate::scalar::{Complex, NumericPolicy, Real};
use element::{Element, ElementIndex};

/// Default closure bound; admits the symmetric group on seven sites.
pub const DEFAULT_MAX_ORDER: usize = 10080;

/// Which construction produced a group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case", tag = "preset")]
pub enum GroupKind {
    Trivial { n: usize },
    CollectiveFlips { n: usize },
    SymmetricGroup { n: usize },
    FullPauli { n: usize },
    Custom,
}

/// Finite unitary group, stored modulo global phase.
#[derive(Debug, Clone)]
pub struct DecouplingGroup<T: Real> {
    dim: usize,
    elements: Vec<Element<T>>,
    generator_indices: Vec<usize>,
    name: String,
    kind: GroupKind,
}

impl<T: Real> DecouplingGroup<T> {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Positions of the input generators in [`Self::elements`].
    pub fn generator_indices(&self) -> &[usize] {
        &self.generator_indices
    }

    /// Phase-canonical element `k` as a dense operator. Element 0 is the identity.
    pub fn element(&self, k: usize) -> Operator<T> {
        self.elements[k].to_operator()
    }

    pub fn elements(&self) -> Vec<Operator<T>> {
        self.elements.iter().map(Element::to_operator).collect()
    }

    pub fn generators(&self) -> Vec<Operator<T>> {
        self.generator_indices
            .iter()
            .map(|&k| self.element(k))
            .collect()
    }

    /// `g^dagger X g` for element `k`.
    pub fn conjugate_by(&self, k: usize, x: &Operator<T>) -> Operator<T> {
        Operator::from_matrix(self.elements[k].conjugate(x.matrix()))
    }

    /// Index of the element equal to `op` modulo global phase, if any.
    pub fn index_of(&self, op: &Operator<T>) -> Option<usize> {
        let policy = T::default_policy();
        let mut e = Element::from_dense(op.matrix().clone());
        e.canonicalize();
        let mut index = ElementIndex::new(self.dim, policy.element_equality);
        for (k, el) in self.elements.iter().enumerate() {
            index.insert(el, k);
        }
        index.find(&e, &self.elements)
    }

    /// The same abstract group acting as `g (x) I` on a system-bath space.
    pub fn lift(&self, bath_dim: usize) -> Self {
        Self {
            dim: self.dim * bath_dim,
            elements: self.elements.iter().map(|e| e.lift(bath_dim)).collect(),
            generator_indices: self.generator_indices.clone(),
            name: format!("{} (x) I_{bath_dim}", self.name),
            kind: GroupKind::Custom,
        }
    }

    /// Replaces each stored element by `phase_k * g_k`; the projector is
    /// insensitive to such a change.
    pub fn rephased(&self, phases: &[Complex<T>]) -> Self {
        let mut out = self.clone();
        for (e, &p) in out.elements.iter_mut().zip(phases) {
            let m = e.to_dense() * p;
            *e = Element::from_dense(m);
        }
        out
    }

    fn check_dim(&self, x: &Operator<T>) -> Result<()> {
        if x.dim() != self.dim {
            return Err(Error::Shape(format!(
                "operator dim {} vs group dim {}",
                x.dim(),
                self.dim
            )));
        }
        Ok(())
    }

    /// Group average `(1/|G|) sum_g g^dagger X g`, the orthogonal projector onto
    /// the commutant.
    pub fn project_onto_commutant(&self, x: &Operator<T>) -> Result<Operator<T>> {
        self.check_dim(x)?;
        let mut acc = DMatrix::from_element(self.dim, self.dim, Complex::new(T::zero(), T::zero()));
        for e in &self.elements {
            acc += e.conjugate(x.matrix());
        }
        let inv = T::one() / T::from_usize(self.order()).unwrap();
        Ok(Operator::from_matrix(acc * Complex::new(inv, T::zero())))
    }
}

/// Closes `generators` under multiplication, identifying elements that agree
/// up to a global phase.
pub fn close_group<T: Real>(
    generators: &[Operator<T>],
    max_order: usize,
) -> Result<DecouplingGroup<T>> {
    let dim = match generators.first() {
        Some(g) => g.dim(),
        None => {
            return Err(Error::Precondition(
                "an empty generator list has no dimension; use close_group_in".into(),
            ))
        }
    };
    close_group_in(dim, generators, max_order)
}

/// [`close_group`] with an explicit Hilbert-space dimension, so the empty
/// generator set yields the trivial group.
pub fn close_group_in<T: Real>(
    dim: usize,
    generators: &[Operator<T>],
    max_order: usize,
) -> Result<DecouplingGroup<T>> {
    close_group_with_policy(dim, generators, max_order, &T::default_policy())
}

pub fn close_group_with_policy<T: Real>(
    dim: usize,
    generators: &[Operator<T>],
    max_order: usize,
    policy: &NumericPolicy,
) -> Result<DecouplingGroup<T>> {
    if dim == 0 {
        return Err(Error::Shape("group dimension must be positive".into()));
    }
    for (k, g) in generators.iter().enumerate() {
        if g.dim() != dim {
            return Err(Error::Shape(format!(
                "generator {k} has dim {} (expected {dim})",
                g.dim()
            )));
        }
        let defect = g.unitarity_defect().as_f64();
        if defect > policy.unitarity {
            return Err(Error::Unitarity(defect));
        }
    }
    let gens: Vec<Element<T>> = generators
        .iter()
        .map(|g| {
            let mut e = Element::from_dense(g.matrix().clone());
            e.canonicalize();
            e
        })
        .collect();

    let mut index = ElementIndex::new(dim, policy.element_equality);
    let identity = Element::from_dense(DMatrix::identity(dim, dim));
    index.insert(&identity, 0);
    let mut elements = vec![identity];
    let mut head = 0;
    while head < elements.len() {
        for g in &gens {
            let mut next = elements[head].mul(g);
            next.canonicalize();
            if index.find(&next, &elements).is_none() {
                if elements.len() >= max_order {
                    return Err(Error::GroupTooLarge { max_order });
                }
                index.insert(&next, elements.len());
                elements.push(next);
            }
        }
        head += 1;
    }
    let generator_indices = gens
        .iter()
        .map(|g| {
            index
                .find(g, &elements)
                .expect("generator is in its own closure")
        })
        .collect();
    Ok(DecouplingGroup {
        dim,
        elements,
        generator_indices,
        name: "custom".into(),
        kind: GroupKind::Custom,
    })
}

/// `{I}` on `n` qubits.
pub fn trivial<T: Real>(n: usize) -> Result<DecouplingGroup<T>> {
    let dim = qubit_dim(n)?;
    let mut g = close_group_in::<T>(dim, &[], 1)?;
    g.name = "trivial".into();
    g.kind = GroupKind::Trivial { n };
    Ok(g)
}

/// Collective pi-rotations `{I, X^n, Y^n, Z^n}` generated by `X^n` and `Z^n`.
pub fn collective_flips<T: Real>(n: usize) -> Result<DecouplingGroup<T>> {
    qubit_dim(n)?;
    let gens = [
        PauliString::collective(n, 'X')?.to_operator(),
        PauliString::collective(n, 'Z')?.to_operator(),
    ];
    let mut g = close_group(&gens, DEFAULT_MAX_ORDER)?;
    g.name = "collective_flips".into();
    g.kind = GroupKind::CollectiveFlips { n };
    Ok(g)
}

/// Natural representation of the permutation group on `n` qubits, generated
/// by adjacent transpositions.
pub fn symmetric_group<T: Real>(n: usize) -> Result<DecouplingGroup<T>> {
    let dim = qubit_dim(n)?;
    let gens: Vec<Operator<T>> = (0..n.saturating_sub(1))
        .map(|i| swap_operator(n, i, i + 1))
        .collect();
    let mut g = close_group_in(dim, &gens, DEFAULT_MAX_ORDER)?;
    g.name = "symmetric_group".into();
    g.kind = GroupKind::SymmetricGroup { n };
    Ok(g)
}

/// Pauli group on `n` qubits modulo phase; acts irreducibly.
pub fn full_pauli<T: Real>(n: usize) -> Result<DecouplingGroup<T>> {
    let dim = qubit_dim(n)?;
    let mut gens = Vec::new();
    for site in 0..n {
        gens.push(PauliString::single(n, site, 'X')?.to_operator());
        gens.push(PauliString::single(n, site, 'Z')?.to_operator());
    }
    let mut g = close_group_in(dim, &gens, DEFAULT_MAX_ORDER)?;
    g.name = "full_pauli".into();
    g.kind = GroupKind::FullPauli { n };
    Ok(g)
}

/// Permutation matrix exchanging qubits `a` and `b` (0-based, site 0 most significant).
pub fn swap_operator<T: Real>(n: usize, a: usize, b: usize) -> Operator<T> {
    let dim = 1usize << n;
    let (ba, bb) = (1usize << (n - 1 - a), 1usize << (n - 1 - b));
    let one = Complex::new(T::one(), T::zero());
    let zero = Complex::new(T::zero(), T::zero());
    Operator::from_fn(dim, |row, col| {
        let (xa, xb) = (col & ba != 0, col & bb != 0);
        let mut target = col & !(ba | bb);
        if xa {
            target |= bb;
        }
        if xb {
            target |= ba;
        }
        if row == target {
            one
        } else {
            zero
        }
    })
}

fn qubit_dim(n: usize) -> Result<usize> {
    if n == 0 || n > 12 {
        return Err(Error::Size(format!(
            "group presets support 1..=12 qubits, got {n}"
        )));
    }
    Ok(1usize << n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::random::random_hermitian;
    use rand::{Rng, SeedableRng};

    #[test]
    fn flip_group_has_four_elements() {
        for n in [2usize, 4, 6] {
            let g = collective_flips::<f64>(n).unwrap();
            assert_eq!(g.order(), 4);
            for letter in ['X', 'Y', 'Z'] {
                let p = PauliString::collective(n, letter)
                    .unwrap()
                    .to_operator::<f64>();
                assert!(g.index_of(&p).is_some(), "{letter}^{n} missing");
            }
            assert!(g.element(0).max_abs_diff(&Operator::identity(1 << n)) < 1e-15);
        }
    }

    #[test]
    fn empty_generators_give_trivial_group() {
        let g = close_group_in::<f64>(8, &[], DEFAULT_MAX_ORDER).unwrap();
        assert_eq!(g.order(), 1);
        assert!(g.generator_indices().is_empty());
        assert!(matches!(
            close_group::<f64>(&[], 10),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn symmetric_group_orders() {
        assert_eq!(symmetric_group::<f64>(3).unwrap().order(), 6);
        assert_eq!(symmetric_group::<f64>(4).unwrap().order(), 24);
        assert_eq!(symmetric_group::<f64>(5).unwrap().order(), 120);
    }

    #[test]
    fn pauli_group_modulo_phase() {
        assert_eq!(full_pauli::<f64>(1).unwrap().order(), 4);
        assert_eq!(full_pauli::<f64>(2).unwrap().order(), 16);
    }

    #[test]
    fn closure_bound_is_enforced() {
        let gens: Vec<Operator<f64>> = (0..3).map(|i| swap_operator(4, i, i + 1)).collect();
        assert!(matches!(
            close_group(&gens, 23),
            Err(Error::GroupTooLarge { max_order: 23 })
        ));
    }

    #[test]
    fn irrational_rotation_is_rejected_as_too_large() {
        // rotation by 1 radian generates an infinite group
        let (s, c) = 1f64.sin_cos();
        let u = Operator::from_row_slice(
            2,
            &[
                Complex::new(c, 0.),
                Complex::new(-s, 0.),
                Complex::new(s, 0.),
                Complex::new(c, 0.),
            ],
        )
        .unwrap();
        assert!(matches!(
            close_group(&[u], 500),
            Err(Error::GroupTooLarge { .. })
        ));
    }

    #[test]
    fn non_unitary_generator_rejected() {
        let m = Operator::<f64>::identity(2).scale_real(2.0);
        assert!(matches!(close_group(&[m], 10), Err(Error::Unitarity(_))));
    }

    #[test]
    fn dense_generators_close_correctly() {
        // Hadamard and S generate a finite projective group (the 1-qubit Clifford group, order 24)
        let h = 0.5f64.sqrt();
        let had = Operator::from_row_slice(
            2,
            &[
                Complex::new(h, 0.),
                Complex::new(h, 0.),
                Complex::new(h, 0.),
                Complex::new(-h, 0.),
            ],
        )
        .unwrap();
        let s = Operator::diagonal(&[Complex::new(1., 0.), Complex::new(0., 1.)]);
        let g = close_group(&[had, s], 1000).unwrap();
        assert_eq!(g.order(), 24);
    }

    #[test]
    fn projector_kills_single_qubit_errors_of_flip_group() {
        let n = 2;
        let g = collective_flips::<f64>(n).unwrap();
        for site in 0..n {
            for letter in ['X', 'Y', 'Z'] {
                let e = PauliString::single(n, site, letter)
                    .unwrap()
                    .to_operator::<f64>();
                assert!(g.project_onto_commutant(&e).unwrap().max_abs() < 1e-15);
            }
        }
        let id = Operator::identity(4);
        assert!(g.project_onto_commutant(&id).unwrap().max_abs_diff(&id) < 1e-15);
        let xx = PauliString::collective(2, 'X')
            .unwrap()
            .to_operator::<f64>();
        assert!(g.project_onto_commutant(&xx).unwrap().max_abs_diff(&xx) < 1e-15);
    }

    #[test]
    fn projector_rejects_wrong_dim() {
        let g = collective_flips::<f64>(2).unwrap();
        assert!(matches!(
            g.project_onto_commutant(&Operator::identity(8)),
            Err(Error::Shape(_))
        ));
    }

    #[test]
    fn projector_properties_on_random_inputs() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for g in [
            symmetric_group::<f64>(3).unwrap(),
            collective_flips(4).unwrap(),
        ] {
            let x = random_hermitian::<f64, _>(g.dim(), &mut rng);
            let p = g.project_onto_commutant(&x).unwrap();
            let pp = g.project_onto_commutant(&p).unwrap();
            assert!(pp.max_abs_diff(&p) < 1e-12);
            assert!(p.is_hermitian(1e-12));
            assert!((p.trace() - x.trace()).norm() < 1e-10);
            for h in g.elements() {
                assert!(p.commutator(&h).max_abs() < 1e-10);
            }
            let phases: Vec<Complex<f64>> = (0..g.order())
                .map(|_| Complex::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU)))
                .collect();
            let q = g.rephased(&phases).project_onto_commutant(&x).unwrap();
            assert!(q.max_abs_diff(&p) < 1e-12);
        }
    }

    #[test]
    fn lifted_group_acts_on_system_factor() {
        let g = collective_flips::<f64>(2).unwrap();
        let lifted = g.lift(2);
        assert_eq!(lifted.dim(), 8);
        let x = g.element(1).kron(&Operator::identity(2));
        assert!(lifted.element(1).max_abs_diff(&x) < 1e-15);
    }
}
