use nalgebra::ComplexField;
use std::collections::HashMap;

use nalgebra::DMatrix;

use crate::linalg::Operator;
use crate::scalar::{Complex, Real};

/// Unitary with exactly one nonzero entry per column: `M e_j = phases[j] e_{perm[j]}`.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Monomial<T: Real> {
    pub perm: Vec<usize>,
    pub phases: Vec<Complex<T>>,
}

impl<T: Real> Monomial<T> {
    pub fn try_from_dense(m: &DMatrix<Complex<T>>, tol: f64) -> Option<Self> {
        let d = m.nrows();
        let mut perm = vec![0; d];
        let mut phases = vec![Complex::new(T::zero(), T::zero()); d];
        let mut seen = vec![false; d];
        for j in 0..d {
            let mut hit = None;
            for i in 0..d {
                if m[(i, j)].modulus().as_f64() > tol {
                    if hit.is_some() {
                        return None;
                    }
                    hit = Some(i);
                }
            }
            let i = hit?;
            if seen[i] {
                return None;
            }
            seen[i] = true;
            perm[j] = i;
            phases[j] = m[(i, j)];
        }
        Some(Self { perm, phases })
    }

    pub fn to_dense(&self) -> DMatrix<Complex<T>> {
        let d = self.perm.len();
        let mut m = DMatrix::from_element(d, d, Complex::new(T::zero(), T::zero()));
        for j in 0..d {
            m[(self.perm[j], j)] = self.phases[j];
        }
        m
    }

    /// `self * rhs`.
    pub fn mul(&self, rhs: &Self) -> Self {
        let perm = rhs.perm.iter().map(|&k| self.perm[k]).collect();
        let phases = rhs
            .phases
            .iter()
            .zip(&rhs.perm)
            .map(|(&b, &k)| b * self.phases[k])
            .collect();
        Self { perm, phases }
    }

    /// `self^dagger X self`, entrywise.
    pub fn conjugate(&self, x: &DMatrix<Complex<T>>) -> DMatrix<Complex<T>> {
        DMatrix::from_fn(x.nrows(), x.ncols(), |a, b| {
            self.phases[a].conj() * x[(self.perm[a], self.perm[b])] * self.phases[b]
        })
    }

    /// Makes the first nonzero entry in row-major order real-positive.
    pub fn canonicalize(&mut self) {
        let col = self
            .perm
            .iter()
            .position(|&r| r == 0)
            .expect("row 0 occupied");
        let p = self.phases[col];
        let unit = p.conj() / Complex::new(p.modulus(), T::zero());
        for z in &mut self.phases {
            *z *= unit;
        }
    }

    pub fn lift(&self, bath_dim: usize) -> Self {
        let d = self.perm.len();
        let mut perm = Vec::with_capacity(d * bath_dim);
        let mut phases = Vec::with_capacity(d * bath_dim);
        for s in 0..d {
            for b in 0..bath_dim {
                perm.push(self.perm[s] * bath_dim + b);
                phases.push(self.phases[s]);
            }
        }
        Self { perm, phases }
    }
}

/// Storage for a group element: monomial when possible, dense otherwise.
#[derive(Debug, Clone)]
pub(crate) enum Element<T: Real> {
    Monomial(Monomial<T>),
    Dense(DMatrix<Complex<T>>),
}

impl<T: Real> Element<T> {
    pub fn from_dense(m: DMatrix<Complex<T>>) -> Self {
        match Monomial::try_from_dense(&m, 1e-10) {
            Some(mono) => Element::Monomial(mono),
            None => Element::Dense(m),
        }
    }

    pub fn to_dense(&self) -> DMatrix<Complex<T>> {
        match self {
            Element::Monomial(m) => m.to_dense(),
            Element::Dense(m) => m.clone(),
        }
    }

    pub fn to_operator(&self) -> Operator<T> {
        Operator::from_matrix(self.to_dense())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        match (self, rhs) {
            (Element::Monomial(a), Element::Monomial(b)) => Element::Monomial(a.mul(b)),
            _ => Element::from_dense(self.to_dense() * rhs.to_dense()),
        }
    }

    pub fn conjugate(&self, x: &DMatrix<Complex<T>>) -> DMatrix<Complex<T>> {
        match self {
            Element::Monomial(m) => m.conjugate(x),
            Element::Dense(g) => g.adjoint() * x * g,
        }
    }

    pub fn canonicalize(&mut self) {
        match self {
            Element::Monomial(m) => m.canonicalize(),
            Element::Dense(g) => {
                let scale = g.iter().fold(T::zero(), |a, z| a.max(z.modulus()));
                let thresh = scale * T::lit(1e-4);
                // row-major scan
                let (rows, cols) = g.shape();
                let first = (0..rows)
                    .flat_map(|i| (0..cols).map(move |j| (i, j)))
                    .map(|(i, j)| g[(i, j)])
                    .find(|z| z.modulus() > thresh)
                    .expect("nonzero unitary");
                let unit = first.conj() / Complex::new(first.modulus(), T::zero());
                *g *= unit;
            }
        }
    }

    pub fn lift(&self, bath_dim: usize) -> Self {
        match self {
            Element::Monomial(m) => Element::Monomial(m.lift(bath_dim)),
            Element::Dense(g) => {
                Element::Dense(g.kronecker(&DMatrix::identity(bath_dim, bath_dim)))
            }
        }
    }
}

/// Finds previously seen elements up to a tolerance.
pub(crate) struct ElementIndex<T: Real> {
    tol: f64,
    dim: usize,
    by_perm: HashMap<Vec<usize>, Vec<usize>>,
    dense: Vec<(f64, f64, usize)>,
    weights: DMatrix<Complex<T>>,
}

impl<T: Real> ElementIndex<T> {
    pub fn new(dim: usize, tol: f64) -> Self {
        // Fixed pseudo-random weights; any deterministic choice works.
        let weights = DMatrix::from_fn(dim, dim, |i, j| {
            let s = ((i * 7919 + j * 104_729 + 13) % 1009) as f64 / 1009.0;
            Complex::new(T::lit(0.5 + s), T::lit(s - 0.25))
        });
        Self {
            tol,
            dim,
            by_perm: HashMap::new(),
            dense: Vec::new(),
            weights,
        }
    }

    fn fingerprint(&self, m: &DMatrix<Complex<T>>) -> (f64, f64) {
        let f = self
            .weights
            .iter()
            .zip(m.iter())
            .fold(Complex::new(T::zero(), T::zero()), |acc, (w, a)| {
                acc + *w * *a
            });
        (f.re.as_f64(), f.im.as_f64())
    }

    fn same(&self, a: &Element<T>, b: &Element<T>) -> bool {
        let (da, db) = (a.to_dense(), b.to_dense());
        let dist = (da - db).norm().as_f64() / (self.dim as f64).sqrt();
        dist < self.tol
    }

    pub fn find(&self, e: &Element<T>, store: &[Element<T>]) -> Option<usize> {
        match e {
            Element::Monomial(m) => {
                self.by_perm
                    .get(&m.perm)?
                    .iter()
                    .copied()
                    .find(|&k| match &store[k] {
                        Element::Monomial(other) => {
                            let dist: f64 = m
                                .phases
                                .iter()
                                .zip(&other.phases)
                                .map(|(a, b)| (*a - *b).norm_sqr().as_f64())
                                .sum::<f64>()
                                .sqrt();
                            dist / (self.dim as f64).sqrt() < self.tol
                        }
                        dense => self.same(e, dense),
                    })
            }
            Element::Dense(g) => {
                let (re, im) = self.fingerprint(g);
                let slack = 1e-6 * (self.dim as f64);
                self.dense
                    .iter()
                    .filter(|(r, i, _)| (r - re).abs() < slack && (i - im).abs() < slack)
                    .map(|&(_, _, k)| k)
                    .find(|&k| self.same(e, &store[k]))
            }
        }
    }

    pub fn insert(&mut self, e: &Element<T>, index: usize) {
        match e {
            Element::Monomial(m) => self.by_perm.entry(m.perm.clone()).or_default().push(index),
            Element::Dense(g) => {
                let (re, im) = self.fingerprint(g);
                self.dense.push((re, im, index));
            }
        }
    }
}
