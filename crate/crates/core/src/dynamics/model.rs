use nalgebra::{ComplexField, DMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{random, Operator, StateVector};
use crate::pauli::PauliString;
use crate::scalar::{Complex, Real};

/// Largest total qubit count (system plus bath) simulated densely.
pub const MAX_TOTAL_QUBITS: usize = 12;
/// Default coupling strength `lambda`.
pub const DEFAULT_STRENGTH: f64 = 0.1;

const AXES: [char; 3] = ['X', 'Y', 'Z'];
// keeps the bath state independent of the coupling draws
const BATH_STATE_STREAM: u64 = 0xba7e_57a7e;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CouplingKind {
    /// Errors `sigma_a^(i)`, one bath operator per qubit and axis (`3n` terms).
    Independent,
    /// Errors `sum_i sigma_a^(i)`, one bath operator per axis (3 terms).
    Collective,
    /// Caller-supplied `(E, B)` pairs.
    Custom,
}

/// System of `n` qubits linearly coupled to a bath of `m` qubits:
/// `H = H_S (x) 1 + 1 (x) H_B + sum_a E_a (x) B_a`.
#[derive(Debug, Clone)]
pub struct NoiseModel<T: Real> {
    n: usize,
    m: usize,
    kind: CouplingKind,
    strength: f64,
    seed: u64,
    /// `c[a][i][k]` flattened as `(a * sites + i) * m + k`; `sites` is 1 for collective.
    couplings: Vec<f64>,
    bath_frequencies: Vec<f64>,
    bath_exchange: f64,
    system_hamiltonian: Operator<T>,
    custom_terms: Vec<(Operator<T>, Operator<T>)>,
}

impl<T: Real> NoiseModel<T> {
    /// Seeded model: `omega_k ~ U[0.5, 1.5]`, then `c ~ lambda * N(0, 1)` in
    /// `(a, i, k)` order, both from one ChaCha8 stream.
    pub fn seeded(
        n: usize,
        m: usize,
        kind: CouplingKind,
        strength: f64,
        seed: u64,
    ) -> Result<Self> {
        check_size(n, m)?;
        if kind == CouplingKind::Custom {
            return Err(Error::Precondition(
                "use NoiseModel::custom for custom couplings".into(),
            ));
        }
        if !strength.is_finite() {
            return Err(Error::Precondition(format!(
                "coupling strength {strength} is not finite"
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let bath_frequencies: Vec<f64> = (0..m).map(|_| rng.random_range(0.5..1.5)).collect();
        let sites = if kind == CouplingKind::Independent {
            n
        } else {
            1
        };
        let couplings = (0..3 * sites * m)
            .map(|_| {
                let g: f64 = StandardNormal.sample(&mut rng);
                strength * g
            })
            .collect();
        Ok(Self {
            n,
            m,
            kind,
            strength,
            seed,
            couplings,
            bath_frequencies,
            bath_exchange: 0.0,
            system_hamiltonian: Operator::zeros(1 << n),
            custom_terms: Vec::new(),
        })
    }

    /// Model with explicit `(E_a, B_a)` pairs and bath level splittings.
    pub fn custom(
        n: usize,
        m: usize,
        terms: Vec<(Operator<T>, Operator<T>)>,
        bath_frequencies: Vec<f64>,
        seed: u64,
    ) -> Result<Self> {
        check_size(n, m)?;
        if bath_frequencies.len() != m {
            return Err(Error::Shape(format!(
                "{} bath frequencies for {m} bath qubits",
                bath_frequencies.len()
            )));
        }
        let tol = T::default_policy();
        for (k, (e, b)) in terms.iter().enumerate() {
            if e.dim() != 1 << n || b.dim() != 1 << m {
                return Err(Error::Shape(format!(
                    "coupling term {k} has dims {} x {}",
                    e.dim(),
                    b.dim()
                )));
            }
            for op in [e, b] {
                let defect = op.hermiticity_defect().as_f64();
                if defect > tol.hermiticity {
                    return Err(Error::Hermiticity(defect));
                }
            }
            let tr = e.trace().modulus().as_f64() / e.dim() as f64;
            if tr > tol.traceless {
                return Err(Error::Precondition(format!(
                    "error operator {k} is not traceless"
                )));
            }
        }
        Ok(Self {
            n,
            m,
            kind: CouplingKind::Custom,
            strength: 0.0,
            seed,
            couplings: Vec::new(),
            bath_frequencies,
            bath_exchange: 0.0,
            system_hamiltonian: Operator::zeros(1 << n),
            custom_terms: terms,
        })
    }

    pub fn with_system_hamiltonian(mut self, h: Operator<T>) -> Result<Self> {
        if h.dim() != 1 << self.n {
            return Err(Error::Shape(format!("H_S dim {} vs 2^{}", h.dim(), self.n)));
        }
        let defect = h.hermiticity_defect().as_f64();
        if defect > T::default_policy().hermiticity {
            return Err(Error::Hermiticity(defect));
        }
        self.system_hamiltonian = h;
        Ok(self)
    }

    /// Adds `J sum_k sigma^(k) . sigma^(k+1)` between neighbouring bath qubits.
    pub fn with_bath_exchange(mut self, j: f64) -> Self {
        self.bath_exchange = j;
        self
    }

    /// Same model with every system-bath coupling set to zero.
    pub fn without_coupling(mut self) -> Self {
        self.couplings.iter_mut().for_each(|c| *c = 0.0);
        self.custom_terms.clear();
        self.strength = 0.0;
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn kind(&self) -> CouplingKind {
        self.kind
    }

    pub fn strength(&self) -> f64 {
        self.strength
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn system_dim(&self) -> usize {
        1 << self.n
    }

    pub fn bath_dim(&self) -> usize {
        1 << self.m
    }

    pub fn couplings(&self) -> &[f64] {
        &self.couplings
    }

    pub fn bath_frequencies(&self) -> &[f64] {
        &self.bath_frequencies
    }

    pub fn system_hamiltonian(&self) -> &Operator<T> {
        &self.system_hamiltonian
    }

    fn sites(&self) -> usize {
        match self.kind {
            CouplingKind::Independent => self.n,
            _ => 1,
        }
    }

    /// Coefficient `c_{a,i,k}` (`i` ignored for collective coupling).
    pub fn coupling(&self, axis: usize, site: usize, bath: usize) -> f64 {
        let i = if self.kind == CouplingKind::Collective {
            0
        } else {
            site
        };
        self.couplings[(axis * self.sites() + i) * self.m + bath]
    }

    /// The error operators `E_a` on the system.
    pub fn error_operators(&self) -> Vec<Operator<T>> {
        match self.kind {
            CouplingKind::Independent => (0..self.n)
                .flat_map(|i| AXES.iter().map(move |&a| (i, a)))
                .map(|(i, a)| single(self.n, i, a).to_operator())
                .collect(),
            CouplingKind::Collective => AXES.iter().map(|&a| collective_sum(self.n, a)).collect(),
            CouplingKind::Custom => self.custom_terms.iter().map(|(e, _)| e.clone()).collect(),
        }
    }

    /// `H_B = sum_k omega_k sigma_z^(k) / 2` plus the optional exchange chain.
    pub fn bath_hamiltonian(&self) -> Operator<T> {
        let dim = self.bath_dim();
        let mut h = DMatrix::zeros(dim, dim);
        for (k, &w) in self.bath_frequencies.iter().enumerate() {
            single(self.m, k, 'Z').add_to_matrix(&mut h, Complex::new(T::lit(w / 2.0), T::zero()));
        }
        if self.bath_exchange != 0.0 {
            for k in 0..self.m.saturating_sub(1) {
                for a in AXES {
                    let p = PauliString::on_sites(self.m, &[k, k + 1], a).expect("sites in range");
                    p.add_to_matrix(&mut h, Complex::new(T::lit(self.bath_exchange), T::zero()));
                }
            }
        }
        Operator::new(h).expect("finite bath Hamiltonian")
    }

    /// `sum_a E_a (x) B_a` on the joint space.
    pub fn coupling_hamiltonian(&self) -> Operator<T> {
        let (n, m) = (self.n, self.m);
        let dim = 1 << (n + m);
        if self.kind == CouplingKind::Custom {
            let mut h = Operator::zeros(dim);
            for (e, b) in &self.custom_terms {
                h = &h + &e.kron(b);
            }
            return h;
        }
        let mut h = DMatrix::zeros(dim, dim);
        for (ai, &a) in AXES.iter().enumerate() {
            for i in 0..n {
                for k in 0..m {
                    let c = self.coupling(ai, i, k);
                    if c == 0.0 {
                        continue;
                    }
                    let p = PauliString::on_sites(n + m, &[i, n + k], a).expect("sites in range");
                    p.add_to_matrix(&mut h, Complex::new(T::lit(c), T::zero()));
                }
            }
        }
        Operator::from_matrix(h)
    }

    /// `H = H_S (x) 1 + 1 (x) H_B + H_SB`.
    pub fn total_hamiltonian(&self) -> Result<Operator<T>> {
        check_size(self.n, self.m)?;
        let sys = self
            .system_hamiltonian
            .kron(&Operator::identity(self.bath_dim()));
        let bath = Operator::identity(self.system_dim()).kron(&self.bath_hamiltonian());
        Ok(&(&sys + &bath) + &self.coupling_hamiltonian())
    }

    /// Seeded random pure initial state of the bath.
    pub fn bath_state(&self) -> StateVector<T> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed ^ BATH_STATE_STREAM);
        random::random_state(self.bath_dim(), &mut rng)
    }
}

fn check_size(n: usize, m: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::Precondition(
            "system needs at least one qubit".into(),
        ));
    }
    if n + m > MAX_TOTAL_QUBITS {
        return Err(Error::Size(format!(
            "{n} system + {m} bath qubits exceeds the dense limit of {MAX_TOTAL_QUBITS}"
        )));
    }
    Ok(())
}

fn single(n: usize, site: usize, axis: char) -> PauliString {
    PauliString::single(n, site, axis).expect("site in range")
}

/// `sum_i sigma_a^(i)`.
pub fn collective_sum<T: Real>(n: usize, axis: char) -> Operator<T> {
    let dim = 1 << n;
    let mut h = DMatrix::zeros(dim, dim);
    for i in 0..n {
        single(n, i, axis).add_to_matrix(&mut h, Complex::new(T::one(), T::zero()));
    }
    Operator::from_matrix(h)
}
