//! Exact n-qubit Pauli strings in the binary symplectic representation.
//!
//! A string carries a phase `i^k` times a tensor product of the Hermitian
//! single-qubit matrices `I, X = sigma_x, Y = sigma_y, Z = sigma_z`, with site 0
//! the most significant tensor factor. Under this convention the product
//! `Z X` equals `+i Y`, so the operator written `Y_j = Z_j X_j` elsewhere in
//! this crate is the string `+iY` on site `j`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg::Operator;
use crate::scalar::{Complex, Real};

/// Largest qubit count a [`PauliString`] can hold.
pub const MAX_QUBITS: usize = 64;
/// Largest qubit count accepted by [`centralizer_strings`].
pub const MAX_CENTRALIZER_QUBITS: usize = 12;

/// Element of `{+1, +i, -1, -i}`, stored as the exponent of `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Phase(u8);

impl Phase {
    pub const PLUS_ONE: Phase = Phase(0);
    pub const PLUS_I: Phase = Phase(1);
    pub const MINUS_ONE: Phase = Phase(2);
    pub const MINUS_I: Phase = Phase(3);

    pub fn from_exponent(k: i64) -> Self {
        Phase(k.rem_euclid(4) as u8)
    }

    pub fn exponent(self) -> u8 {
        self.0
    }

    pub fn to_complex<T: Real>(self) -> Complex<T> {
        let (re, im) = match self.0 {
            0 => (1.0, 0.0),
            1 => (0.0, 1.0),
            2 => (-1.0, 0.0),
            _ => (0.0, -1.0),
        };
        Complex::new(T::lit(re), T::lit(im))
    }

    fn prefix(self) -> &'static str {
        ["+", "+i", "-", "-i"][self.0 as usize]
    }
}

impl std::ops::Mul for Phase {
    type Output = Phase;
    fn mul(self, rhs: Phase) -> Phase {
        Phase((self.0 + rhs.0) % 4)
    }
}

/// Phase-tracked Pauli operator on `n` qubits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PauliString {
    n: usize,
    /// Bit `j` set iff site `j` carries an X-component.
    x: u64,
    /// Bit `j` set iff site `j` carries a Z-component.
    z: u64,
    phase: Phase,
}

fn mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

impl PauliString {
    pub fn identity(n: usize) -> Result<Self> {
        Self::from_bits(n, 0, 0, Phase::PLUS_ONE)
    }

    /// Builds a string from symplectic bit masks (bit `j` is site `j`).
    pub fn from_bits(n: usize, x: u64, z: u64, phase: Phase) -> Result<Self> {
        if n == 0 || n > MAX_QUBITS {
            return Err(Error::Precondition(format!(
                "pauli strings need 1..={MAX_QUBITS} qubits, got {n}"
            )));
        }
        if (x | z) & !mask(n) != 0 {
            return Err(Error::Shape(format!("bit mask exceeds {n} qubits")));
        }
        Ok(Self { n, x, z, phase })
    }

    /// One letter per site from `I, X, Y, Z`.
    pub fn from_letters(letters: &str, phase: Phase) -> Result<Self> {
        let n = letters.chars().count();
        let (mut x, mut z) = (0u64, 0u64);
        for (j, ch) in letters.chars().enumerate() {
            let (xb, zb) = match ch {
                'I' => (0, 0),
                'X' => (1, 0),
                'Y' => (1, 1),
                'Z' => (0, 1),
                other => return Err(Error::Parse(format!("invalid pauli letter {other:?}"))),
            };
            x |= xb << j;
            z |= zb << j;
        }
        Self::from_bits(n, x, z, phase)
    }

    /// Single-site letter on site `site` (0-based).
    pub fn single(n: usize, site: usize, letter: char) -> Result<Self> {
        if site >= n {
            return Err(Error::Shape(format!(
                "site {site} out of range for {n} qubits"
            )));
        }
        let letters: String = (0..n)
            .map(|j| if j == site { letter } else { 'I' })
            .collect();
        Self::from_letters(&letters, Phase::PLUS_ONE)
    }

    /// The same letter on every site, e.g. `X^{(x)n}`.
    pub fn collective(n: usize, letter: char) -> Result<Self> {
        Self::from_letters(
            &std::iter::repeat_n(letter, n).collect::<String>(),
            Phase::PLUS_ONE,
        )
    }

    /// Letter on each of the given sites, identity elsewhere.
    pub fn on_sites(n: usize, sites: &[usize], letter: char) -> Result<Self> {
        let mut letters = vec!['I'; n];
        for &s in sites {
            if s >= n {
                return Err(Error::Shape(format!(
                    "site {s} out of range for {n} qubits"
                )));
            }
            letters[s] = letter;
        }
        Self::from_letters(&letters.into_iter().collect::<String>(), Phase::PLUS_ONE)
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn x_bits(&self) -> u64 {
        self.x
    }

    pub fn z_bits(&self) -> u64 {
        self.z
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn with_phase(mut self, phase: Phase) -> Self {
        self.phase = phase;
        self
    }

    /// Phase-free representative (projective Pauli group element).
    pub fn unsigned(self) -> Self {
        self.with_phase(Phase::PLUS_ONE)
    }

    pub fn letter(&self, site: usize) -> char {
        match ((self.x >> site) & 1, (self.z >> site) & 1) {
            (0, 0) => 'I',
            (1, 0) => 'X',
            (1, 1) => 'Y',
            _ => 'Z',
        }
    }

    pub fn weight(&self) -> u32 {
        (self.x | self.z).count_ones()
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    pub fn is_hermitian(&self) -> bool {
        self.phase.0.is_multiple_of(2)
    }

    fn check_size(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::Shape(format!(
                "pauli strings on {} and {} qubits",
                self.n, other.n
            )));
        }
        Ok(())
    }

    /// Exact product `self * other`, phase included.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_size(other)?;
        let mut k = i64::from(self.phase.0) + i64::from(other.phase.0);
        for j in 0..self.n {
            let (x1, z1) = ((self.x >> j) & 1, (self.z >> j) & 1);
            let (x2, z2) = ((other.x >> j) & 1, (other.z >> j) & 1);
            k += site_phase(x1 as i64, z1 as i64, x2 as i64, z2 as i64);
        }
        Ok(Self {
            n: self.n,
            x: self.x ^ other.x,
            z: self.z ^ other.z,
            phase: Phase::from_exponent(k),
        })
    }

    /// Symplectic parity: true iff the two strings commute.
    pub fn commutes(&self, other: &Self) -> Result<bool> {
        self.check_size(other)?;
        Ok(self.commutes_unchecked(other))
    }

    fn commutes_unchecked(&self, other: &Self) -> bool {
        ((self.x & other.z).count_ones() + (self.z & other.x).count_ones()).is_multiple_of(2)
    }

    /// Dense `2^n x 2^n` matrix.
    pub fn to_operator<T: Real>(&self) -> Operator<T> {
        let dim = 1usize << self.n;
        let zero = Complex::new(T::zero(), T::zero());
        let mut m = DMatrix::from_element(dim, dim, zero);
        self.add_to_matrix(&mut m, Complex::new(T::one(), T::zero()));
        Operator::from_matrix(m).with_label(self.to_string())
    }

    /// `m += coeff * P` without materializing `P`.
    ///
    /// # Panics
    /// If `m` is not `2^n x 2^n`.
    pub fn add_to_matrix<T: Real>(&self, m: &mut DMatrix<Complex<T>>, coeff: Complex<T>) {
        let dim = 1usize << self.n;
        assert_eq!(m.shape(), (dim, dim), "matrix shape vs {} qubits", self.n);
        // Row r has its single nonzero at column r ^ flip, with site 0 the most
        // significant bit of the index.
        let flip = self.flip_mask();
        for col in 0..dim {
            m[(col ^ flip, col)] += coeff * self.column_phase(col).to_complex::<T>();
        }
    }

    /// Basis-index mask flipped by the X/Y letters (site 0 is the most
    /// significant bit).
    fn flip_mask(&self) -> usize {
        (0..self.n)
            .filter(|&j| (self.x >> j) & 1 == 1)
            .map(|j| 1usize << (self.n - 1 - j))
            .sum()
    }

    /// Phase of the single nonzero entry in column `col`.
    fn column_phase(&self, col: usize) -> Phase {
        // sigma acting on |b>: X|b>=|1-b>, Z|b>=(-1)^b|b>, Y|b>=i(-1)^b|1-b>
        let mut k = i64::from(self.phase.0);
        for j in 0..self.n {
            let b = ((col >> (self.n - 1 - j)) & 1) as i64;
            match self.letter(j) {
                'Z' => k += 2 * b,
                'Y' => k += 1 + 2 * b,
                _ => {}
            }
        }
        Phase::from_exponent(k)
    }

    /// `P v` without materializing `P`.
    pub fn apply<T: Real>(&self, v: &DVector<Complex<T>>) -> Result<DVector<Complex<T>>> {
        let dim = 1usize << self.n;
        if v.len() != dim {
            return Err(Error::Shape(format!(
                "vector of length {} vs {} qubits",
                v.len(),
                self.n
            )));
        }
        let flip = self.flip_mask();
        let mut out = DVector::from_element(dim, Complex::new(T::zero(), T::zero()));
        for col in 0..dim {
            out[col ^ flip] = self.column_phase(col).to_complex::<T>() * v[col];
        }
        Ok(out)
    }

    fn letters(&self) -> String {
        (0..self.n).map(|j| self.letter(j)).collect()
    }

    fn canonical_key(&self, other: &Self) -> Ordering {
        let seq = |m: u64| -> Vec<u64> { (0..self.n).map(|j| (m >> j) & 1).collect() };
        seq(self.z)
            .cmp(&seq(other.z))
            .then_with(|| seq(self.x).cmp(&seq(other.x)))
            .then_with(|| self.phase.cmp(&other.phase))
    }
}

/// Exponent of `i` picked up by `sigma(x1,z1) * sigma(x2,z2)` on one site.
fn site_phase(x1: i64, z1: i64, x2: i64, z2: i64) -> i64 {
    match (x1, z1) {
        (0, 0) => 0,
        (1, 1) => z2 - x2,
        (1, 0) => z2 * (2 * x2 - 1),
        _ => x2 * (1 - 2 * z2),
    }
}

impl PartialOrd for PauliString {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Canonical order: lexicographic on z bits (site 0 first), then x bits.
impl Ord for PauliString {
    fn cmp(&self, other: &Self) -> Ordering {
        self.n.cmp(&other.n).then_with(|| self.canonical_key(other))
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.phase.prefix(), self.letters())
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (phase, rest) = if let Some(r) = s.strip_prefix("+i") {
            (Phase::PLUS_I, r)
        } else if let Some(r) = s.strip_prefix("-i") {
            (Phase::MINUS_I, r)
        } else if let Some(r) = s.strip_prefix('+') {
            (Phase::PLUS_ONE, r)
        } else if let Some(r) = s.strip_prefix('-') {
            (Phase::MINUS_ONE, r)
        } else {
            return Err(Error::Parse(format!(
                "pauli string {s:?} lacks a phase prefix"
            )));
        };
        Self::from_letters(rest, phase)
    }
}

impl serde::Serialize for PauliString {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for PauliString {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Every phase-free string on `n` qubits commuting with all `generators`, in
/// canonical order.
pub fn centralizer_strings(n: usize, generators: &[PauliString]) -> Result<Vec<PauliString>> {
    if n == 0 || n > MAX_CENTRALIZER_QUBITS {
        return Err(Error::Precondition(format!(
            "centralizer enumeration supports 1..={MAX_CENTRALIZER_QUBITS} qubits, got {n}"
        )));
    }
    if let Some(g) = generators.iter().find(|g| g.n != n) {
        return Err(Error::Shape(format!("generator {g} is not on {n} qubits")));
    }
    let full = 1u64 << n;
    let mut out = Vec::new();
    for z in 0..full {
        for x in 0..full {
            let p = PauliString {
                n,
                x,
                z,
                phase: Phase::PLUS_ONE,
            };
            if generators.iter().all(|g| p.commutes_unchecked(g)) {
                out.push(p);
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Logical operators of the collective-flip code: `Xbar_j = X_1 X_{j+1}` and
/// `Zbar_j = Z_{j+1} Z_n` for `j = 1..=n-2` (1-based sites).
pub fn logical_generators_flip_code(n: usize) -> Result<(Vec<PauliString>, Vec<PauliString>)> {
    if n < 4 || !n.is_multiple_of(2) {
        return Err(Error::Precondition(format!(
            "flip code needs an even qubit count >= 4, got {n}"
        )));
    }
    let mut xs = Vec::with_capacity(n - 2);
    let mut zs = Vec::with_capacity(n - 2);
    for j in 1..=n - 2 {
        xs.push(PauliString::on_sites(n, &[0, j], 'X')?);
        zs.push(PauliString::on_sites(n, &[j, n - 1], 'Z')?);
    }
    Ok((xs, zs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    #[test]
    fn z_times_x_is_plus_i_y() {
        let prod = p("+Z").mul(&p("+X")).unwrap();
        assert_eq!(prod, p("+iY"));
        // cross-check against the dense product
        let dense = &p("+Z").to_operator::<f64>() * &p("+X").to_operator::<f64>();
        assert!(dense.max_abs_diff(&prod.to_operator()) < 1e-15);
    }

    #[test]
    fn identity_is_neutral() {
        let q = p("-iXYZI");
        let id = PauliString::identity(4).unwrap();
        assert_eq!(q.mul(&id).unwrap(), q);
        assert_eq!(id.mul(&q).unwrap(), q);
    }

    #[test]
    fn two_site_product_matches_dense() {
        let a = p("+XZ");
        let b = p("+ZX");
        let dense = &a.to_operator::<f64>() * &b.to_operator::<f64>();
        assert!(dense.max_abs_diff(&a.mul(&b).unwrap().to_operator()) < 1e-15);
    }

    #[test]
    fn size_mismatch_is_shape_error() {
        assert!(matches!(p("+X").mul(&p("+XX")), Err(Error::Shape(_))));
        assert!(matches!(p("+X").commutes(&p("+XX")), Err(Error::Shape(_))));
    }

    #[test]
    fn commutation_examples() {
        assert!(p("+XX").commutes(&p("+ZZ")).unwrap());
        assert!(!p("+XI").commutes(&p("+ZI")).unwrap());
    }

    #[test]
    fn commutation_matches_dense_exhaustively_n3() {
        let all = centralizer_strings(3, &[]).unwrap();
        assert_eq!(all.len(), 64);
        let mats: Vec<Operator<f64>> = all.iter().map(|s| s.to_operator()).collect();
        let mut checked = 0;
        for (a, ma) in all.iter().zip(&mats) {
            for (b, mb) in all.iter().zip(&mats) {
                let dense = ma.commutator(mb).max_abs() < 1e-12;
                assert_eq!(a.commutes(b).unwrap(), dense, "{a} vs {b}");
                checked += 1;
            }
        }
        assert_eq!(checked, 4096);
    }

    #[test]
    fn centralizer_of_bell_stabilizers() {
        let c = centralizer_strings(2, &[p("+XX"), p("+ZZ")]).unwrap();
        let names: Vec<String> = c.iter().map(|s| s.to_string()).collect();
        assert_eq!(names, vec!["+II", "+XX", "+ZZ", "+YY"]);
    }

    #[test]
    fn centralizer_counts_match_brute_force() {
        for n in [2usize, 4, 6] {
            let gens = [
                PauliString::collective(n, 'X').unwrap(),
                PauliString::collective(n, 'Z').unwrap(),
            ];
            let c = centralizer_strings(n, &gens).unwrap();
            assert_eq!(c.len(), 4usize.pow(n as u32 - 1), "n = {n}");
        }
        assert_eq!(centralizer_strings(3, &[]).unwrap().len(), 64);
    }

    #[test]
    fn centralizer_is_canonically_ordered_and_verified_densely() {
        let n = 5;
        let gens = [PauliString::collective(n, 'X').unwrap(), p("+ZZIII")];
        let c = centralizer_strings(n, &gens).unwrap();
        assert!(c.windows(2).all(|w| w[0] < w[1]));
        let gm: Vec<Operator<f64>> = gens.iter().map(|g| g.to_operator()).collect();
        for s in &c {
            let m = s.to_operator::<f64>();
            for g in &gm {
                assert!(m.commutator(g).max_abs() < 1e-12);
            }
        }
    }

    #[test]
    fn flip_code_logicals_n4() {
        let (xs, zs) = logical_generators_flip_code(4).unwrap();
        let xs: Vec<String> = xs.iter().map(|s| s.to_string()).collect();
        let zs_s: Vec<String> = zs.iter().map(|s| s.to_string()).collect();
        assert_eq!(xs, vec!["+XXII", "+XIXI"]);
        assert_eq!(zs_s, vec!["+IZIZ", "+IIZZ"]);
        let (x, _) = logical_generators_flip_code(4).unwrap();
        assert!(!x[0].commutes(&zs[0]).unwrap());
    }

    #[test]
    fn flip_code_rejects_bad_sizes() {
        for n in [2, 3, 5] {
            assert!(matches!(
                logical_generators_flip_code(n),
                Err(Error::Precondition(_))
            ));
        }
    }

    #[test]
    fn flip_code_commutation_table_n6() {
        let n = 6;
        let (xs, zs) = logical_generators_flip_code(n).unwrap();
        assert_eq!(xs.len(), 4);
        let gens = [
            PauliString::collective(n, 'X').unwrap(),
            PauliString::collective(n, 'Z').unwrap(),
        ];
        for j in 0..xs.len() {
            for g in &gens {
                assert!(xs[j].commutes(g).unwrap() && zs[j].commutes(g).unwrap());
            }
            for k in 0..xs.len() {
                assert!(xs[j].commutes(&xs[k]).unwrap());
                assert!(zs[j].commutes(&zs[k]).unwrap());
                assert_eq!(xs[j].commutes(&zs[k]).unwrap(), j != k);
            }
        }
    }

    #[test]
    fn text_format_rejects_garbage() {
        assert!("XZ".parse::<PauliString>().is_err());
        assert!("+XQ".parse::<PauliString>().is_err());
        assert!("+".parse::<PauliString>().is_err());
    }

    fn arb_string(n: usize) -> impl Strategy<Value = PauliString> {
        let m = mask(n);
        (any::<u64>(), any::<u64>(), 0u8..4)
            .prop_map(move |(x, z, k)| PauliString::from_bits(n, x & m, z & m, Phase(k)).unwrap())
    }

    proptest! {
        #[test]
        fn product_is_associative((a, b, c) in (1usize..=6).prop_flat_map(|n| (arb_string(n), arb_string(n), arb_string(n)))) {
            let left = a.mul(&b).unwrap().mul(&c).unwrap();
            let right = a.mul(&b.mul(&c).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }

        #[test]
        fn product_materializes_exactly((a, b) in (1usize..=4).prop_flat_map(|n| (arb_string(n), arb_string(n)))) {
            let dense = &a.to_operator::<f64>() * &b.to_operator::<f64>();
            prop_assert!(dense.max_abs_diff(&a.mul(&b).unwrap().to_operator()) == 0.0);
        }

        #[test]
        fn text_round_trip(a in (1usize..=10).prop_flat_map(arb_string)) {
            let text = a.to_string();
            prop_assert_eq!(text.parse::<PauliString>().unwrap(), a);
        }

        #[test]
        fn vector_action_matches_dense(a in (1usize..=5).prop_flat_map(arb_string), seed in any::<u64>()) {
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let v = crate::linalg::random::random_state::<f64, _>(1 << a.num_qubits(), &mut rng);
            let dense = a.to_operator::<f64>().matrix() * v.amplitudes();
            prop_assert!((a.apply(v.amplitudes()).unwrap() - dense).norm() < 1e-14);
        }
    }
}
