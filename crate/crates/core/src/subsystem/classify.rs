use nalgebra::ComplexField;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::DecouplingGroup;
use crate::linalg::Operator;
use crate::scalar::{NumericPolicy, Real};
use crate::subsystem::{GroupAlgebras, SubsystemDecomposition};

/// Which tensor factor of a block carries the code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FactorKind {
    /// `C_J`, acted on by the commutant.
    Commutant,
    /// `D_J`, acted on by the group algebra.
    Group,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiselessReason {
    ProjectedErrorsVanish,
    ProjectedErrorsCentral,
    ErrorsInCommutantActTriviallyOnDj,
    NotNoiseless,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactorVerdict {
    pub block: usize,
    pub twice_j: Option<u32>,
    pub factor: FactorKind,
    /// Dimension of the factor; only factors of dimension > 1 can hold information.
    pub dimension: usize,
    pub noiseless: bool,
    pub reason: NoiselessReason,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoiselessnessReport {
    pub error_count: usize,
    /// `max_a |P(E_a)| / |E_a|`.
    pub projected_norm: f64,
    /// `max_a` relative distance of `P(E_a)` from the center.
    pub center_residual: f64,
    /// `max_a` relative distance of `P(E_a)` from the commutant.
    pub commutant_residual: f64,
    /// `max_a` relative distance of the raw `E_a` from the commutant, i.e.
    /// whether the errors are already symmetric without any decoupling.
    pub raw_commutant_residual: f64,
    pub verdicts: Vec<FactorVerdict>,
}

impl NoiselessnessReport {
    pub fn verdict(&self, block: usize, factor: FactorKind) -> Option<&FactorVerdict> {
        self.verdicts
            .iter()
            .find(|v| v.block == block && v.factor == factor)
    }

    pub fn all_noiseless(&self, factor: FactorKind) -> bool {
        self.verdicts
            .iter()
            .filter(|v| v.factor == factor)
            .all(|v| v.noiseless)
    }

    pub fn none_noiseless(&self, factor: FactorKind) -> bool {
        self.verdicts
            .iter()
            .filter(|v| v.factor == factor)
            .all(|v| !v.noiseless)
    }
}

/// Decides, for every block, whether `C_J` and `D_J` are noiseless under the
/// error space spanned by `errors`.
///
/// `C_J` is noiseless iff every `P(E_a)` lies in the center (with `P(E_a) = 0`
/// as the special case); `D_J` is noiseless iff every `P(E_a)` lies in the
/// commutant.
pub fn classify_noiseless<T: Real>(
    g: &DecouplingGroup<T>,
    algebras: &GroupAlgebras<T>,
    dec: &SubsystemDecomposition<T>,
    errors: &[Operator<T>],
    policy: &NumericPolicy,
) -> Result<NoiselessnessReport> {
    let d = g.dim() as f64;
    for (k, e) in errors.iter().enumerate() {
        if e.dim() != g.dim() {
            return Err(Error::Shape(format!(
                "error {k} has dim {} vs group dim {}",
                e.dim(),
                g.dim()
            )));
        }
        let tr = e.trace().modulus().as_f64() / d;
        if tr > policy.traceless {
            return Err(Error::Precondition(format!(
                "error operator {k} is not traceless (|tr|/d = {tr:e})"
            )));
        }
    }

    let mut projected_norm: f64 = 0.0;
    let mut center_residual: f64 = 0.0;
    let mut commutant_residual: f64 = 0.0;
    let mut raw_commutant_residual: f64 = 0.0;
    for e in errors {
        let norm = e.frobenius_norm().as_f64();
        if norm == 0.0 {
            continue;
        }
        let p = g.project_onto_commutant(e)?;
        let pn = p.frobenius_norm().as_f64() / norm;
        projected_norm = projected_norm.max(pn);
        if pn > policy.membership {
            center_residual = center_residual.max(algebras.center.residual(&p) * pn);
            commutant_residual = commutant_residual.max(algebras.commutant.residual(&p) * pn);
        }
        raw_commutant_residual = raw_commutant_residual.max(algebras.commutant.residual(e));
    }

    let (c_ok, c_reason, c_residual) = if projected_norm <= policy.membership {
        (true, NoiselessReason::ProjectedErrorsVanish, projected_norm)
    } else if center_residual <= policy.membership {
        (
            true,
            NoiselessReason::ProjectedErrorsCentral,
            center_residual,
        )
    } else {
        (false, NoiselessReason::NotNoiseless, center_residual)
    };
    let (d_ok, d_reason) = if commutant_residual <= policy.membership {
        (true, NoiselessReason::ErrorsInCommutantActTriviallyOnDj)
    } else {
        (false, NoiselessReason::NotNoiseless)
    };

    let mut verdicts = Vec::with_capacity(2 * dec.blocks().len());
    for b in dec.blocks() {
        verdicts.push(FactorVerdict {
            block: b.id,
            twice_j: b.twice_j,
            factor: FactorKind::Commutant,
            dimension: b.multiplicity,
            noiseless: c_ok,
            reason: c_reason,
            residual: c_residual,
        });
        verdicts.push(FactorVerdict {
            block: b.id,
            twice_j: b.twice_j,
            factor: FactorKind::Group,
            dimension: b.irrep_dim,
            noiseless: d_ok,
            reason: d_reason,
            residual: commutant_residual,
        });
    }
    Ok(NoiselessnessReport {
        error_count: errors.len(),
        projected_norm,
        center_residual,
        commutant_residual,
        raw_commutant_residual,
        verdicts,
    })
}
