//! Block decomposition `H = (+)_J C_J (x) D_J` of a decoupling group's
//! action, plus the noiselessness classifier for candidate coding factors.

mod classify;
mod dims;

pub use classify::{
    classify_noiseless, FactorKind, FactorVerdict, NoiselessReason, NoiselessnessReport,
};
pub use dims::symmetric_subsystem_dim;

use nalgebra::ComplexField;
use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::group::{
    center_from, commutant_basis_with, group_algebra_basis_with, AlgebraBasis, DecouplingGroup,
    GroupKind,
};
use crate::linalg::{cluster_eigenvalues, eigh_unchecked, min_cluster_gap, Operator, StateVector};
use crate::scalar::{Complex, NumericPolicy, Real};

/// Seed used by [`decompose`] when the caller does not supply one.
pub const DEFAULT_DECOMPOSE_SEED: u64 = 0x5eed_0001;
/// Random draws attempted before reporting a degeneracy.
pub const MAX_DRAWS: usize = 8;
/// Largest Hilbert-space dimension accepted by [`decompose`].
pub const MAX_DECOMPOSE_DIM: usize = 256;

/// One isotypic block `H_J = C_J (x) D_J`.
#[derive(Debug, Clone)]
pub struct SubsystemBlock<T: Real> {
    /// Position in the decomposition's deterministic block order.
    pub id: usize,
    /// `2J` for the permutation-group presets, where `n_J = 2J + 1`.
    pub twice_j: Option<u32>,
    /// `n_J = dim C_J`.
    pub multiplicity: usize,
    /// `d_J = dim D_J`.
    pub irrep_dim: usize,
    /// `d x (n_J d_J)` isometry; column `l * d_J + m` is `|J, l, m>`.
    pub isometry: DMatrix<Complex<T>>,
}

impl<T: Real> SubsystemBlock<T> {
    pub fn block_dim(&self) -> usize {
        self.multiplicity * self.irrep_dim
    }

    /// `J` as a float, when defined.
    pub fn spin(&self) -> Option<f64> {
        self.twice_j.map(|t| t as f64 / 2.0)
    }

    pub fn factor_dim(&self, factor: FactorKind) -> usize {
        match factor {
            FactorKind::Commutant => self.multiplicity,
            FactorKind::Group => self.irrep_dim,
        }
    }

    /// Projector onto `H_J`.
    pub fn projector(&self) -> Operator<T> {
        Operator::from_matrix(&self.isometry * self.isometry.adjoint())
    }
}

#[derive(Debug, Clone)]
pub struct SubsystemDecomposition<T: Real> {
    dim: usize,
    blocks: Vec<SubsystemBlock<T>>,
    basis_change: Operator<T>,
}

impl<T: Real> SubsystemDecomposition<T> {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn blocks(&self) -> &[SubsystemBlock<T>] {
        &self.blocks
    }

    pub fn block(&self, id: usize) -> Result<&SubsystemBlock<T>> {
        self.blocks
            .get(id)
            .ok_or_else(|| Error::Shape(format!("no block {id} (have {})", self.blocks.len())))
    }

    /// Block with the given `2J` label.
    pub fn block_with_spin(&self, twice_j: u32) -> Option<&SubsystemBlock<T>> {
        self.blocks.iter().find(|b| b.twice_j == Some(twice_j))
    }

    /// Unitary whose columns are all the block isometries side by side.
    pub fn basis_change(&self) -> &Operator<T> {
        &self.basis_change
    }

    /// `(n_J, d_J)` pairs in block order.
    pub fn shape(&self) -> Vec<(usize, usize)> {
        self.blocks
            .iter()
            .map(|b| (b.multiplicity, b.irrep_dim))
            .collect()
    }

    /// `B^dagger X B` in the block basis.
    pub fn conjugate(&self, x: &Operator<T>) -> Operator<T> {
        &(&self.basis_change.adjoint() * x) * &self.basis_change
    }

    fn offsets(&self) -> Vec<usize> {
        let mut acc = 0;
        self.blocks
            .iter()
            .map(|b| {
                let o = acc;
                acc += b.block_dim();
                o
            })
            .collect()
    }

    /// Largest entry of `B^dagger X B` outside the diagonal blocks.
    pub fn off_block_residual(&self, x: &Operator<T>) -> f64 {
        let y = self.conjugate(x);
        let owner: Vec<usize> = self
            .blocks
            .iter()
            .enumerate()
            .flat_map(|(k, b)| std::iter::repeat_n(k, b.block_dim()))
            .collect();
        let mut worst: f64 = 0.0;
        for i in 0..self.dim {
            for j in 0..self.dim {
                if owner[i] != owner[j] {
                    worst = worst.max(y.get(i, j).modulus().as_f64());
                }
            }
        }
        worst
    }

    /// Largest deviation of `X` from the form `(+)_J 1_{n_J} (x) N_J`.
    pub fn group_form_residual(&self, x: &Operator<T>) -> f64 {
        self.tensor_form_residual(x, FactorKind::Group)
    }

    /// Largest deviation of `X` from the form `(+)_J M_J (x) 1_{d_J}`.
    pub fn commutant_form_residual(&self, x: &Operator<T>) -> f64 {
        self.tensor_form_residual(x, FactorKind::Commutant)
    }

    fn tensor_form_residual(&self, x: &Operator<T>, acts_on: FactorKind) -> f64 {
        let y = self.conjugate(x);
        let mut worst = self.off_block_residual(x);
        for (b, off) in self.blocks.iter().zip(self.offsets()) {
            let (n, d) = (b.multiplicity, b.irrep_dim);
            let entry = |l: usize, m: usize, lp: usize, mp: usize| {
                y.get(off + l * d + m, off + lp * d + mp)
            };
            match acts_on {
                FactorKind::Group => {
                    // average the n diagonal copies, compare every sub-block
                    for m in 0..d {
                        for mp in 0..d {
                            let mut avg = Complex::new(T::zero(), T::zero());
                            for l in 0..n {
                                avg += entry(l, m, l, mp);
                            }
                            avg /= Complex::new(T::from_usize(n).unwrap(), T::zero());
                            for l in 0..n {
                                for lp in 0..n {
                                    let target = if l == lp {
                                        avg
                                    } else {
                                        Complex::new(T::zero(), T::zero())
                                    };
                                    worst = worst
                                        .max((entry(l, m, lp, mp) - target).modulus().as_f64());
                                }
                            }
                        }
                    }
                }
                FactorKind::Commutant => {
                    for l in 0..n {
                        for lp in 0..n {
                            let mut avg = Complex::new(T::zero(), T::zero());
                            for m in 0..d {
                                avg += entry(l, m, lp, m);
                            }
                            avg /= Complex::new(T::from_usize(d).unwrap(), T::zero());
                            for m in 0..d {
                                for mp in 0..d {
                                    let target = if m == mp {
                                        avg
                                    } else {
                                        Complex::new(T::zero(), T::zero())
                                    };
                                    worst = worst
                                        .max((entry(l, m, lp, mp) - target).modulus().as_f64());
                                }
                            }
                        }
                    }
                }
            }
        }
        worst
    }

    /// Embeds `logical (x) cofactor` (ordered as `C_J (x) D_J`) into `H_J`.
    /// With `factor = Commutant` the logical state lives in `C_J`, otherwise in `D_J`.
    pub fn encode(
        &self,
        block: usize,
        factor: FactorKind,
        logical: &StateVector<T>,
        cofactor: &StateVector<T>,
    ) -> Result<StateVector<T>> {
        let b = self.block(block)?;
        let (c_state, d_state) = match factor {
            FactorKind::Commutant => (logical, cofactor),
            FactorKind::Group => (cofactor, logical),
        };
        if c_state.dim() != b.multiplicity || d_state.dim() != b.irrep_dim {
            return Err(Error::Shape(format!(
                "block {block} needs C_J dim {} and D_J dim {}, got {} and {}",
                b.multiplicity,
                b.irrep_dim,
                c_state.dim(),
                d_state.dim()
            )));
        }
        let coords = c_state.kron(d_state);
        StateVector::normalized(&b.isometry * coords.amplitudes())
    }

    /// Block coordinates `V_J^dagger psi`, ordered as `C_J (x) D_J`.
    pub fn decode(&self, block: usize, psi: &StateVector<T>) -> Result<DVector<Complex<T>>> {
        let b = self.block(block)?;
        if psi.dim() != self.dim {
            return Err(Error::Shape(format!(
                "state dim {} vs {}",
                psi.dim(),
                self.dim
            )));
        }
        Ok(b.isometry.adjoint() * psi.amplitudes())
    }

    /// Reduced (unnormalized when leakage occurs) density operator on one factor
    /// of block `block`, for a state on `system (x) bath` with the given bath dimension.
    pub fn factor_state(
        &self,
        block: usize,
        factor: FactorKind,
        psi: &StateVector<T>,
        bath_dim: usize,
    ) -> Result<Operator<T>> {
        let b = self.block(block)?;
        if psi.dim() != self.dim * bath_dim {
            return Err(Error::Shape(format!(
                "state dim {} vs system {} x bath {bath_dim}",
                psi.dim(),
                self.dim
            )));
        }
        let (n, d) = (b.multiplicity, b.irrep_dim);
        let amps = psi.amplitudes();
        // coords[(l*d + m), bath]
        let sys = DMatrix::from_fn(self.dim, bath_dim, |s, k| amps[s * bath_dim + k]);
        let coords = b.isometry.adjoint() * sys;
        let keep = b.factor_dim(factor);
        let out = DMatrix::from_fn(keep, keep, |a, a2| {
            let mut acc = Complex::new(T::zero(), T::zero());
            for k in 0..bath_dim {
                match factor {
                    FactorKind::Commutant => {
                        for m in 0..d {
                            acc += coords[(a * d + m, k)] * coords[(a2 * d + m, k)].conj();
                        }
                    }
                    FactorKind::Group => {
                        for l in 0..n {
                            acc += coords[(l * d + a, k)] * coords[(l * d + a2, k)].conj();
                        }
                    }
                }
            }
            acc
        });
        Ok(Operator::from_matrix(out))
    }
}

/// Algebras computed once and shared by the decomposition and classifier.
#[derive(Debug, Clone)]
pub struct GroupAlgebras<T: Real> {
    pub group_algebra: AlgebraBasis<T>,
    pub commutant: AlgebraBasis<T>,
    pub center: AlgebraBasis<T>,
}

impl<T: Real> GroupAlgebras<T> {
    pub fn new(g: &DecouplingGroup<T>, policy: &NumericPolicy) -> Self {
        let group_algebra = group_algebra_basis_with(g, policy);
        let commutant = commutant_basis_with(g, policy);
        let center = center_from(&group_algebra, &commutant, policy);
        Self {
            group_algebra,
            commutant,
            center,
        }
    }
}

pub fn decompose<T: Real>(g: &DecouplingGroup<T>) -> Result<SubsystemDecomposition<T>> {
    decompose_with(g, DEFAULT_DECOMPOSE_SEED, &T::default_policy())
}

pub fn decompose_with<T: Real>(
    g: &DecouplingGroup<T>,
    seed: u64,
    policy: &NumericPolicy,
) -> Result<SubsystemDecomposition<T>> {
    if g.dim() > MAX_DECOMPOSE_DIM {
        return Err(Error::Size(format!(
            "decomposition supports dimension <= {MAX_DECOMPOSE_DIM}, got {}",
            g.dim()
        )));
    }
    let algebras = GroupAlgebras::new(g, policy);
    decompose_from(g, &algebras, seed, policy)
}

/// Decomposition from precomputed algebras.
pub fn decompose_from<T: Real>(
    g: &DecouplingGroup<T>,
    algebras: &GroupAlgebras<T>,
    seed: u64,
    policy: &NumericPolicy,
) -> Result<SubsystemDecomposition<T>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let isotypic = isotypic_subspaces(algebras, &mut rng, policy)?;
    let mut blocks = Vec::with_capacity(isotypic.len());
    for v in &isotypic {
        blocks.push(factorize_block(v, &algebras.commutant, &mut rng, policy)?);
    }

    // Deterministic order: larger blocks first, then smaller irreps, then by
    // the character signature tr(P_J g) over the group's element order.
    let signatures: Vec<Vec<(i64, i64)>> = blocks
        .iter()
        .map(|b| {
            (0..g.order())
                .map(|k| {
                    let t = (b.isometry.adjoint() * g.element(k).matrix() * &b.isometry).trace();
                    (
                        (t.re.as_f64() * 1e6).round() as i64,
                        (t.im.as_f64() * 1e6).round() as i64,
                    )
                })
                .collect()
        })
        .collect();
    let mut order: Vec<usize> = (0..blocks.len()).collect();
    order.sort_by(|&a, &b| {
        let (ba, bb) = (&blocks[a], &blocks[b]);
        bb.block_dim()
            .cmp(&ba.block_dim())
            .then(ba.irrep_dim.cmp(&bb.irrep_dim))
            .then_with(|| signatures[b].cmp(&signatures[a]))
    });
    let spin_labels = matches!(g.kind(), GroupKind::SymmetricGroup { .. });
    let mut blocks: Vec<SubsystemBlock<T>> = order
        .into_iter()
        .map(|k| blocks[k].clone())
        .enumerate()
        .map(|(id, mut b)| {
            b.id = id;
            b.twice_j = spin_labels.then(|| (b.multiplicity - 1) as u32);
            b
        })
        .collect();
    blocks.shrink_to_fit();

    let d = g.dim();
    let mut basis = DMatrix::zeros(d, d);
    let mut col = 0;
    for b in &blocks {
        basis
            .view_mut((0, col), (d, b.block_dim()))
            .copy_from(&b.isometry);
        col += b.block_dim();
    }
    if col != d {
        return Err(Error::Degeneracy {
            attempts: MAX_DRAWS,
            detail: format!("blocks cover dimension {col} of {d}"),
        });
    }
    Ok(SubsystemDecomposition {
        dim: d,
        blocks,
        basis_change: Operator::from_matrix(basis),
    })
}

/// Eigenspaces of a generic Hermitian central element: the `H_J`.
fn isotypic_subspaces<T: Real>(
    algebras: &GroupAlgebras<T>,
    rng: &mut ChaCha8Rng,
    policy: &NumericPolicy,
) -> Result<Vec<DMatrix<Complex<T>>>> {
    let expected = algebras.center.len();
    let mut last = String::new();
    for _ in 0..MAX_DRAWS {
        let z = algebras.center.random_hermitian(rng);
        let eig = eigh_unchecked(z.matrix());
        let clusters = cluster_eigenvalues(&eig.values, policy.degeneracy_gap);
        let gap = min_cluster_gap(&eig.values, &clusters);
        if clusters.len() == expected && gap > policy.degeneracy_gap {
            return Ok(clusters
                .into_iter()
                .map(|r| eig.vectors.columns(r.start, r.len()).into_owned())
                .collect());
        }
        last = format!(
            "central element gave {} clusters, expected {expected}",
            clusters.len()
        );
    }
    Err(Error::Degeneracy {
        attempts: MAX_DRAWS,
        detail: last,
    })
}

/// Splits one isotypic subspace into `n_J` orthogonal copies of `D_J` with
/// matched bases.
fn factorize_block<T: Real>(
    v: &DMatrix<Complex<T>>,
    commutant: &AlgebraBasis<T>,
    rng: &mut ChaCha8Rng,
    policy: &NumericPolicy,
) -> Result<SubsystemBlock<T>> {
    let m = v.ncols();
    let mut last = String::new();
    for _ in 0..MAX_DRAWS {
        let c = commutant.random_hermitian(rng);
        let restricted = v.adjoint() * c.matrix() * v;
        let eig = eigh_unchecked(&restricted);
        let clusters = cluster_eigenvalues(&eig.values, policy.degeneracy_gap);
        let d_j = clusters[0].len();
        if clusters.iter().any(|r| r.len() != d_j) || clusters.len() * d_j != m {
            last =
                format!("restricted commutant element has unequal clusters in a block of dim {m}");
            continue;
        }
        let n_j = clusters.len();
        let copies: Vec<DMatrix<Complex<T>>> = clusters
            .iter()
            .map(|r| v * eig.vectors.columns(r.start, r.len()))
            .collect();
        let reference = &copies[0];

        // Transport the reference basis into copy l with P_l C' P_1, which acts
        // as a scalar multiple of |l><1| (x) 1 on this block.
        let transport = commutant.random_hermitian(rng);
        let mut isometry = DMatrix::zeros(v.nrows(), m);
        isometry
            .view_mut((0, 0), (v.nrows(), d_j))
            .copy_from(reference);
        let mut ok = true;
        for (l, copy) in copies.iter().enumerate().skip(1) {
            let moved = copy * (copy.adjoint() * transport.matrix() * reference);
            let scale = moved.column(0).norm();
            if scale.as_f64() < 1e-3 {
                ok = false;
                break;
            }
            let cols = moved / Complex::new(scale, T::zero());
            isometry
                .view_mut((0, l * d_j), (v.nrows(), d_j))
                .copy_from(&cols);
        }
        if !ok {
            last = "transport element nearly annihilated a copy".into();
            continue;
        }
        return Ok(SubsystemBlock {
            id: 0,
            twice_j: None,
            multiplicity: n_j,
            irrep_dim: d_j,
            isometry,
        });
    }
    Err(Error::Degeneracy {
        attempts: MAX_DRAWS,
        detail: last,
    })
}
