use thiserror::Error;

use crate::group::ProblemId;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// The control lies outside the problem's causal cone.
    #[error("control ({u1}, {u2}, {u3}) is not admissible for {problem}")]
    InadmissibleControl {
        problem: ProblemId,
        u1: f64,
        u2: f64,
        u3: f64,
    },

    #[error("multiplier nu = {0} must be nonpositive")]
    PositiveMultiplier(f64),

    #[error("covector ({h1}, {h2}, {h3}) violates the unit normalization: {detail}")]
    Normalization {
        h1: f64,
        h2: f64,
        h3: f64,
        detail: &'static str,
    },

    #[error("degenerate covector: {0}")]
    DegenerateCovector(&'static str),

    #[error("covector left the admissible region at t = {t}")]
    LeftAdmissibleRegion { t: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("schedule piece {index} is not admissible: {reason}")]
    InadmissiblePiece { index: usize, reason: String },

    #[error("trajectory grids do not match: {0}")]
    GridMismatch(String),

    #[error("target is outside the attainable set")]
    OutsideAttainableSet,

    #[error("shooting did not converge from any start (best residual {best_residual:e})")]
    NoConvergence { best_residual: f64 },
}
