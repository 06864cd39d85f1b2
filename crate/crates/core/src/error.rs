use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid Cartan type: {0}")]
    InvalidType(String),
    #[error("invalid grading: {0}")]
    InvalidGrading(String),
    #[error("characteristic {0:?} is not dominant")]
    NotDominant(Vec<i64>),
    #[error("characteristic {0:?} does not define an integral element")]
    NonIntegral(Vec<i64>),
    #[error("the zero element has no sl2-triple")]
    ZeroElement,
    #[error("element is not homogeneous of degree 1")]
    NotHomogeneous,
    #[error("element is not ad-nilpotent")]
    NotNilpotent,
    #[error("no element of the fixed Cartan subalgebra completes this element to an sl2-triple")]
    NonToral,
    #[error("element does not lie in V_2(h)")]
    NotInV2,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("orbits belong to different gradings")]
    GradingMismatch,
    #[error("unknown orbit id {0}")]
    UnknownOrbit(usize),
    #[error("inconsistent closure decisions: cycle through orbits {0:?}")]
    Cycle(Vec<usize>),
    #[error("closure relation is not transitive: {0} > {1} > {2} but not {0} > {2}")]
    NotTransitive(usize, usize, usize),
    #[error("fixture {case}: row {row}: {reason}")]
    Fixture {
        case: String,
        row: usize,
        reason: String,
    },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
