use thiserror::Error;

/// Why a curve failed the admissibility test at a point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Degeneracy {
    /// Tangent with vanishing first component.
    IsotropicTangent,
    /// `γ′ × γ″` vanishes.
    Inflection,
    /// Projection of `γ″` on the absolute plane is lightlike.
    LightlikeNormal,
    /// `y″² − z″²` changes sign along the sampled range.
    SignatureChange,
}

impl std::fmt::Display for Degeneracy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Degeneracy::IsotropicTangent => "isotropic tangent",
            Degeneracy::Inflection => "inflection point",
            Degeneracy::LightlikeNormal => "lightlike normal projection",
            Degeneracy::SignatureChange => "causal character of the normal changes",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("empty domain [{0}, {1}]")]
    DomainEmpty(f64, f64),
    #[error("step {h:e} is below the round-off floor {min:e}")]
    StepTooSmall { h: f64, min: f64 },
    #[error("domain of length {len} is shorter than 8 steps of {h}")]
    DomainTooNarrow { len: f64, h: f64 },
    #[error("curve is not in arc-length form: x(s) - s varies by {spread:e}")]
    NotArcLength { spread: f64 },
    #[error("empty evaluation grid")]
    EmptyGrid,
    #[error("grid point {s} lies outside the curve domain [{lo}, {hi}]")]
    OutsideDomain { s: f64, lo: f64, hi: f64 },
    #[error("grid needs at least {needed} points, got {got}")]
    GridTooSmall { needed: usize, got: usize },
    #[error("curve is not admissible at s = {s}: {reason}")]
    Inadmissible { s: f64, reason: Degeneracy },
    #[error("isotropic tangent (x' = 0) at t = {t}")]
    IsotropicTangent { t: f64 },
    #[error("parameter runs against the arc length (x' = {dx} < 0)")]
    ReversedParameter { dx: f64 },
    #[error("jet of order {requested} requested, curve provides up to {available}")]
    JetOrderTooLow { requested: usize, available: usize },
    #[error("Q1 is lightlike at s = {s}")]
    Q1Lightlike { s: f64 },
    #[error("Bertrand mate is not admissible at s = {s}: {reason}")]
    MateInadmissible { s: f64, reason: Degeneracy },
    #[error("unknown curve '{0}'")]
    UnknownName(String),
    #[error("parameter constraint violated: {0}")]
    ParamConstraintViolated(String),
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
