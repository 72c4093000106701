//! Independent reference implementations shared by the integration tests.
#![allow(dead_code)]

use nalgebra::DMatrix;
use noiseless::linalg::{Operator, StateVector};
use noiseless::Complex;

pub type C = Complex<f64>;

pub fn c(re: f64, im: f64) -> C {
    Complex::new(re, im)
}

/// 2x2 Pauli matrix by letter.
pub fn sigma(letter: char) -> DMatrix<C> {
    let (o, z, i) = (c(1.0, 0.0), c(0.0, 0.0), c(0.0, 1.0));
    match letter {
        'I' => DMatrix::from_row_slice(2, 2, &[o, z, z, o]),
        'X' => DMatrix::from_row_slice(2, 2, &[z, o, o, z]),
        'Y' => DMatrix::from_row_slice(2, 2, &[z, -i, i, z]),
        'Z' => DMatrix::from_row_slice(2, 2, &[o, z, z, -o]),
        _ => panic!("bad letter {letter}"),
    }
}

/// Kronecker product of Pauli letters, leftmost factor most significant.
pub fn pauli(letters: &str) -> DMatrix<C> {
    letters
        .chars()
        .fold(DMatrix::from_element(1, 1, c(1.0, 0.0)), |acc, l| {
            acc.kronecker(&sigma(l))
        })
}

/// `sigma_a` on `site` of `n` qubits.
pub fn on_site(n: usize, site: usize, letter: char) -> DMatrix<C> {
    let s: String = (0..n)
        .map(|j| if j == site { letter } else { 'I' })
        .collect();
    pauli(&s)
}

pub fn op(m: DMatrix<C>) -> Operator<f64> {
    Operator::new(m).unwrap()
}

/// `exp(-i H t)` by Taylor series with scaling and squaring.
pub fn taylor_expm(h: &DMatrix<C>, t: f64) -> DMatrix<C> {
    let a = h * c(0.0, -t);
    let norm = a.iter().map(|z| z.norm()).sum::<f64>().max(1e-300);
    let squarings = (norm.log2().ceil().max(0.0) as u32) + 2;
    let a = a / c(2f64.powi(squarings as i32), 0.0);
    let dim = h.nrows();
    let mut term = DMatrix::<C>::identity(dim, dim);
    let mut sum = term.clone();
    for k in 1..30 {
        term = &term * &a / c(k as f64, 0.0);
        sum += &term;
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

pub fn max_diff(a: &DMatrix<C>, b: &DMatrix<C>) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn bell() -> StateVector<f64> {
    let s = 0.5f64.sqrt();
    StateVector::from_slice(&[c(s, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(s, 0.0)]).unwrap()
}
