use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("operator is not Hermitian (max |H - H^dagger| = {0:e})")]
    Hermiticity(f64),

    #[error("operator is not unitary (max |U^dagger U - I| = {0:e})")]
    Unitarity(f64),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("group closure exceeded {max_order} elements (continuous group?)")]
    GroupTooLarge { max_order: usize },

    #[error("could not separate degenerate spectrum after {attempts} draws: {detail}")]
    Degeneracy { attempts: usize, detail: String },

    #[error("operator outside the required algebra (residual {residual:e}): {detail}")]
    Symmetry { residual: f64, detail: String },

    #[error("dimension too large: {0}")]
    Size(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
