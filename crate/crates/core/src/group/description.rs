//! Serializable description of a decoupling group.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Operator;
use crate::scalar::{Complex, NumericPolicy, Real};

use super::DEFAULT_MAX_ORDER;
use super::{
    close_group_with_policy, collective_flips, full_pauli, symmetric_group, trivial,
    DecouplingGroup,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Preset {
    Trivial,
    CollectiveFlips,
    SymmetricGroup,
    FullPauli,
}

/// Either a preset on `n` qubits or explicit generators.
///
/// Each generator is a row-major list of `[re, im]` entries; the dimension
/// is the square root of its length.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<Preset>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub generators: Vec<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_order: Option<usize>,
}

impl GroupSpec {
    pub fn preset(preset: Preset, n: usize) -> Self {
        Self {
            preset: Some(preset),
            n: Some(n),
            generators: Vec::new(),
            max_order: None,
        }
    }

    pub fn explicit(generators: Vec<Vec<[f64; 2]>>) -> Self {
        Self {
            preset: None,
            n: None,
            generators,
            max_order: None,
        }
    }

    /// Qubit count when the group acts on qubits.
    pub fn qubits(&self) -> Option<usize> {
        match self.preset {
            Some(_) => self.n,
            None => {
                let dim = self.explicit_dim().ok()?;
                dim.is_power_of_two().then(|| dim.trailing_zeros() as usize)
            }
        }
    }

    fn explicit_dim(&self) -> Result<usize> {
        let first = self
            .generators
            .first()
            .ok_or_else(|| Error::Parse("group needs a preset or at least one generator".into()))?;
        let dim = (first.len() as f64).sqrt().round() as usize;
        if dim == 0 || dim * dim != first.len() {
            return Err(Error::Parse(format!(
                "generator with {} entries is not square",
                first.len()
            )));
        }
        Ok(dim)
    }

    pub fn validate(&self) -> Result<()> {
        match (self.preset, self.n, self.generators.is_empty()) {
            (Some(_), Some(_), true) => Ok(()),
            (Some(p), None, _) => Err(Error::Parse(format!("preset {p:?} needs n"))),
            (Some(_), _, false) => Err(Error::Parse(
                "give either a preset or generators, not both".into(),
            )),
            (None, Some(_), _) => Err(Error::Parse("n only applies to presets".into())),
            (None, None, _) => {
                let dim = self.explicit_dim()?;
                match self.generators.iter().position(|g| g.len() != dim * dim) {
                    Some(k) => Err(Error::Parse(format!("generator {k} is not {dim}x{dim}"))),
                    None => Ok(()),
                }
            }
        }
    }

    pub fn build<T: Real>(&self, policy: &NumericPolicy) -> Result<DecouplingGroup<T>> {
        self.validate()?;
        if let (Some(preset), Some(n)) = (self.preset, self.n) {
            return match preset {
                Preset::Trivial => trivial(n),
                Preset::CollectiveFlips => collective_flips(n),
                Preset::SymmetricGroup => symmetric_group(n),
                Preset::FullPauli => full_pauli(n),
            };
        }
        let dim = self.explicit_dim()?;
        let gens = self
            .generators
            .iter()
            .map(|g| {
                let entries: Vec<Complex<T>> = g
                    .iter()
                    .map(|&[re, im]| Complex::new(T::lit(re), T::lit(im)))
                    .collect();
                Operator::from_row_slice(dim, &entries)
            })
            .collect::<Result<Vec<_>>>()?;
        close_group_with_policy(
            dim,
            &gens,
            self.max_order.unwrap_or(DEFAULT_MAX_ORDER),
            policy,
        )
    }
}
