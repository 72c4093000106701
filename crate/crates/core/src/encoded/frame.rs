use nalgebra::{ComplexField, DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{matexp, Operator};
use crate::pauli::{logical_generators_flip_code, PauliString, Phase};
use crate::scalar::{Complex, Real};

/// Largest physical qubit count for which a frame is built.
pub const MAX_FRAME_QUBITS: usize = 12;

/// Gate generators of the flip code. Logical qubits are numbered `1..=n-2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GateKind {
    /// `Xbar_j = X_1 X_{j+1}`.
    XRot(usize),
    /// `Zbar_j = Z_{j+1} Z_n`.
    ZRot(usize),
    /// `sigma_{i+1} . sigma_{j+1}`, the logical Heisenberg coupling.
    Exchange(usize, usize),
    /// Bare single-qubit `sigma_axis` on a physical site (1-based); not an
    /// encoded gate, and rejected wherever commutant membership is required.
    Physical(usize, char),
}

impl GateKind {
    fn check(&self, n: usize) -> Result<()> {
        let k = n - 2;
        let ok = |j: usize| (1..=k).contains(&j);
        match *self {
            Self::XRot(j) | Self::ZRot(j) if ok(j) => Ok(()),
            Self::Exchange(i, j) if ok(i) && ok(j) && i != j => Ok(()),
            Self::Physical(s, a) if (1..=n).contains(&s) && matches!(a, 'X' | 'Y' | 'Z') => Ok(()),
            _ => Err(Error::Precondition(format!(
                "gate {self:?} invalid for {k} logical qubits"
            ))),
        }
    }

    /// Physical generator as a sum of unit-coefficient Pauli strings.
    pub fn pauli_terms(&self, n: usize) -> Result<Vec<PauliString>> {
        check_n(n)?;
        self.check(n)?;
        Ok(match *self {
            Self::XRot(j) => vec![PauliString::on_sites(n, &[0, j], 'X')?],
            Self::ZRot(j) => vec![PauliString::on_sites(n, &[j, n - 1], 'Z')?],
            Self::Exchange(i, j) => ['X', 'Y', 'Z']
                .iter()
                .map(|&a| PauliString::on_sites(n, &[i, j], a))
                .collect::<Result<_>>()?,
            Self::Physical(s, a) => vec![PauliString::single(n, s - 1, a)?],
        })
    }

    /// The same generator written on `k = n - 2` logical qubits.
    pub fn logical_terms(&self, n: usize) -> Result<Vec<PauliString>> {
        check_n(n)?;
        self.check(n)?;
        let k = n - 2;
        match *self {
            Self::XRot(j) => Ok(vec![PauliString::single(k, j - 1, 'X')?]),
            Self::ZRot(j) => Ok(vec![PauliString::single(k, j - 1, 'Z')?]),
            Self::Exchange(i, j) => ['X', 'Y', 'Z']
                .iter()
                .map(|&a| PauliString::on_sites(k, &[i - 1, j - 1], a))
                .collect(),
            Self::Physical(..) => Err(Error::Symmetry {
                residual: 1.0,
                detail: format!("{self:?} has no logical action"),
            }),
        }
    }

    /// Rotation angle convention: the gate for angle `theta` is
    /// `exp(-i theta G)` with `G = P/2` for rotations and `(S - 1)/4` for the
    /// exchange `S`, so `theta = pi` on an exchange is a SWAP and `pi/2` its square root.
    fn shape(&self) -> (f64, f64) {
        match self {
            Self::Exchange(..) => (0.25, -0.25),
            _ => (0.5, 0.0),
        }
    }
}

fn check_n(n: usize) -> Result<()> {
    if n < 4 || !n.is_multiple_of(2) || n > MAX_FRAME_QUBITS {
        return Err(Error::Precondition(format!(
            "flip code needs an even qubit count in 4..={MAX_FRAME_QUBITS}, got {n}"
        )));
    }
    Ok(())
}

fn dense_sum<T: Real>(n: usize, terms: &[PauliString], scale: f64, shift: f64) -> Operator<T> {
    let dim = 1 << n;
    let mut m = DMatrix::zeros(dim, dim);
    for p in terms {
        p.add_to_matrix(&mut m, Complex::new(T::lit(scale), T::zero()));
    }
    for i in 0..dim {
        m[(i, i)] += Complex::new(T::lit(shift), T::zero());
    }
    Operator::new(m).expect("finite Pauli sum")
}

/// Physical two-body Hamiltonian of a gate kind (unit coefficients, no shift).
pub fn encoded_gate_generator<T: Real>(n: usize, kind: GateKind) -> Result<Operator<T>> {
    Ok(dense_sum(n, &kind.pauli_terms(n)?, 1.0, 0.0))
}

/// Hamiltonian `G` with `exp(-i theta G)` the gate, on the physical qubits.
pub fn gate_hamiltonian<T: Real>(n: usize, kind: GateKind) -> Result<Operator<T>> {
    let (scale, shift) = kind.shape();
    Ok(dense_sum(n, &kind.pauli_terms(n)?, scale, shift))
}

/// Hamiltonian `G` on the logical qubits.
pub fn logical_gate_hamiltonian<T: Real>(n: usize, kind: GateKind) -> Result<Operator<T>> {
    let (scale, shift) = kind.shape();
    Ok(dense_sum(n - 2, &kind.logical_terms(n)?, scale, shift))
}

/// `n - 2` logical qubits in one joint eigenspace of `(X^n, Z^n)`.
#[derive(Debug, Clone)]
pub struct LogicalFrame<T: Real> {
    n: usize,
    block_id: usize,
    signs: (i8, i8),
    logical_x: Vec<PauliString>,
    logical_z: Vec<PauliString>,
    codespace: DMatrix<Complex<T>>,
}

impl<T: Real> LogicalFrame<T> {
    /// `block_id` 0..=3 selects the eigenvalue pair of `(X^n, Z^n)`:
    /// `(+,+)`, `(+,-)`, `(-,+)`, `(-,-)`.
    ///
    /// Codespace column `x` is `prod_j Xbar_j^{x_j} |0_L>`, with logical qubit 1
    /// the most significant bit of `x` and `|0_L>` the `+1` eigenstate of every
    /// `Zbar_j`.
    pub fn build(n: usize, block_id: usize) -> Result<Self> {
        check_n(n)?;
        if block_id > 3 {
            return Err(Error::Precondition(format!(
                "block id {block_id} not in 0..=3"
            )));
        }
        let signs = (
            if block_id < 2 { 1 } else { -1 },
            if block_id.is_multiple_of(2) { 1 } else { -1 },
        );
        let (logical_x, logical_z) = logical_generators_flip_code(n)?;
        let sign = |s: i8| {
            if s > 0 {
                Phase::PLUS_ONE
            } else {
                Phase::MINUS_ONE
            }
        };
        let mut stabilizers = vec![
            PauliString::collective(n, 'X')?.with_phase(sign(signs.0)),
            PauliString::collective(n, 'Z')?.with_phase(sign(signs.1)),
        ];
        stabilizers.extend(logical_z.iter().cloned());

        let dim = 1usize << n;
        let project = |v: DVector<Complex<T>>| -> DVector<Complex<T>> {
            stabilizers.iter().fold(v, |acc, s| {
                let sv = s.apply(&acc).expect("sizes agree");
                (acc + sv) * Complex::new(T::lit(0.5), T::zero())
            })
        };
        let mut zero_l = None;
        for k in 0..dim {
            let mut e = DVector::from_element(dim, Complex::new(T::zero(), T::zero()));
            e[k] = Complex::new(T::one(), T::zero());
            let v = project(e);
            let norm = v.norm();
            if norm.as_f64() > 0.1 {
                zero_l = Some(v / Complex::new(norm, T::zero()));
                break;
            }
        }
        let mut zero_l = zero_l.expect("stabilizer state exists");
        let lead = zero_l
            .iter()
            .copied()
            .find(|z| z.modulus().as_f64() > 1e-8)
            .expect("nonzero state");
        let fix = lead.conj() / Complex::new(lead.modulus(), T::zero());
        zero_l *= fix;

        let k = n - 2;
        let mut codespace = DMatrix::zeros(dim, 1 << k);
        for x in 0..(1usize << k) {
            let mut v = zero_l.clone();
            for (j, xj) in logical_x.iter().enumerate() {
                if (x >> (k - 1 - j)) & 1 == 1 {
                    v = xj.apply(&v)?;
                }
            }
            codespace.set_column(x, &v);
        }
        Ok(Self {
            n,
            block_id,
            signs,
            logical_x,
            logical_z,
            codespace,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn block_id(&self) -> usize {
        self.block_id
    }

    /// Eigenvalues of `(X^n, Z^n)` on the codespace.
    pub fn signs(&self) -> (i8, i8) {
        self.signs
    }

    pub fn logical_qubits(&self) -> usize {
        self.n - 2
    }

    pub fn code_dim(&self) -> usize {
        1 << (self.n - 2)
    }

    pub fn logical_x(&self) -> &[PauliString] {
        &self.logical_x
    }

    pub fn logical_z(&self) -> &[PauliString] {
        &self.logical_z
    }

    /// `2^n x 2^(n-2)` isometry onto the codespace.
    pub fn codespace(&self) -> &DMatrix<Complex<T>> {
        &self.codespace
    }

    pub fn projector(&self) -> Operator<T> {
        Operator::from_matrix(&self.codespace * self.codespace.adjoint())
    }

    /// `V^dagger O V`.
    pub fn restrict(&self, op: &Operator<T>) -> Result<Operator<T>> {
        if op.dim() != self.codespace.nrows() {
            return Err(Error::Shape(format!(
                "operator dim {} vs 2^{}",
                op.dim(),
                self.n
            )));
        }
        Ok(Operator::from_matrix(
            self.codespace.adjoint() * op.matrix() * &self.codespace,
        ))
    }

    /// Largest entry of `(1 - P) O V`: how far `O` moves codewords out of the code.
    pub fn leakage(&self, op: &Operator<T>) -> Result<f64> {
        let ov = op.matrix() * &self.codespace;
        let inside = &self.codespace * (self.codespace.adjoint() * &ov);
        Ok((ov - inside)
            .iter()
            .map(|z| z.modulus().as_f64())
            .fold(0.0, f64::max))
    }
}

/// Outcome of comparing the exchange unitary with a logical SWAP.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SwapCheck {
    pub passed: bool,
    /// Normalized distance to logical SWAP, minimized over a global phase.
    pub residual: f64,
    /// Largest amplitude leaked out of the codespace.
    pub leakage: f64,
}

/// Checks that `exp(-i (pi/4) (sigma_{i+1} . sigma_{j+1} - 1))` acts on the
/// codespace as the SWAP of logical qubits `i` and `j`.
pub fn encoded_swap_check<T: Real>(
    frame: &LogicalFrame<T>,
    i: usize,
    j: usize,
    tol: f64,
) -> Result<SwapCheck> {
    let k = frame.logical_qubits();
    if !(1 <= i && i < j && j <= k) {
        return Err(Error::Precondition(format!(
            "need 1 <= i < j <= {k}, got ({i}, {j})"
        )));
    }
    let n = frame.n();
    let h = dense_sum::<T>(n, &GateKind::Exchange(i, j).pauli_terms(n)?, 1.0, -1.0);
    let u = matexp(&h, T::lit(std::f64::consts::FRAC_PI_4))?;
    let restricted = frame.restrict(&u)?;
    let target = logical_swap::<T>(k, i, j);
    let residual = crate::dynamics::phase_insensitive_distance(&restricted, &target);
    let leakage = frame.leakage(&u)?;
    Ok(SwapCheck {
        passed: residual < tol && leakage < tol,
        residual,
        leakage,
    })
}

/// Permutation matrix swapping logical qubits `i` and `j` (1-based).
pub fn logical_swap<T: Real>(k: usize, i: usize, j: usize) -> Operator<T> {
    crate::group::swap_operator(k, i - 1, j - 1)
}
