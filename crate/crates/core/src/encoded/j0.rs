use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dynamics::collective_sum;
use crate::error::{Error, Result};
use crate::group::symmetric_group;
use crate::linalg::{fidelity, matexp, random, Operator, StateVector};
use crate::scalar::{Complex, Real};
use crate::subsystem::{decompose, FactorKind, SubsystemDecomposition};

/// Noiseless qubit carried by the `J = 0` sector of four spins.
#[derive(Debug, Clone)]
pub struct J0Qubit<T: Real> {
    decomposition: SubsystemDecomposition<T>,
    block: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct J0Verification {
    pub samples: usize,
    /// Largest `1 - F` of the subsystem-reduced state over all samples.
    pub max_infidelity: f64,
    /// Largest `|S_a psi|` over the sector basis and the three collective spins.
    pub max_collective_action: f64,
}

/// Locates the `J = 0` sector of the `S_4` decomposition.
pub fn j0_noiseless_qubit<T: Real>(n: usize) -> Result<J0Qubit<T>> {
    if n != 4 {
        return Err(Error::Precondition(format!(
            "the J = 0 qubit is built on 4 spins, got {n}"
        )));
    }
    let dec = decompose(&symmetric_group::<T>(4)?)?;
    let b = dec.block_with_spin(0).ok_or_else(|| Error::Degeneracy {
        attempts: 1,
        detail: "no J = 0 sector found".into(),
    })?;
    let block = b.id;
    Ok(J0Qubit {
        decomposition: dec,
        block,
    })
}

impl<T: Real> J0Qubit<T> {
    /// `16 x 2` isometry onto the sector.
    pub fn isometry(&self) -> &DMatrix<Complex<T>> {
        &self.decomposition.blocks()[self.block].isometry
    }

    /// Position of the sector in the `S_4` decomposition.
    pub fn block(&self) -> usize {
        self.block
    }

    pub fn decomposition(&self) -> &SubsystemDecomposition<T> {
        &self.decomposition
    }

    /// Applies `samples` seeded collective rotations `exp(-i sum_a theta_a S_a)`,
    /// `theta_a ~ U[-pi, pi]`, to seeded random logical states.
    pub fn verify(&self, samples: usize, seed: u64) -> Result<J0Verification> {
        let spins: Vec<Operator<T>> = ['X', 'Y', 'Z']
            .iter()
            .map(|&a| collective_sum(4, a))
            .collect();
        let mut max_collective_action: f64 = 0.0;
        for col in self.isometry().column_iter() {
            for s in &spins {
                max_collective_action =
                    max_collective_action.max((s.matrix() * col).norm().as_f64());
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut max_infidelity: f64 = 0.0;
        let pi = std::f64::consts::PI;
        for _ in 0..samples {
            let theta: [f64; 3] = std::array::from_fn(|_| rng.random_range(-pi..pi));
            let h = spins
                .iter()
                .zip(theta)
                .fold(Operator::zeros(16), |acc, (s, t)| {
                    &acc + &s.scale_real(T::lit(t))
                });
            let u = matexp(&h, T::one())?;
            let logical = random::random_state::<T, _>(2, &mut rng);
            let one = StateVector::basis(1, 0)?;
            let psi = self
                .decomposition
                .encode(self.block, FactorKind::Group, &logical, &one)?;
            let out = psi.apply(&u)?;
            let rho = self
                .decomposition
                .factor_state(self.block, FactorKind::Group, &out, 1)?;
            let f = fidelity(&logical, &rho)?.as_f64();
            max_infidelity = max_infidelity.max(1.0 - f);
        }
        Ok(J0Verification {
            samples,
            max_infidelity,
            max_collective_action,
        })
    }
}
