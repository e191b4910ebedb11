use crate::entities::PrimitiveKind;
use crate::metrics::Unit;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("time {t} outside valid span [{start}, {end}]")]
    OutOfRange { t: f64, start: f64, end: f64 },
    #[error("history of `{0}` has a single sample, span is undefined")]
    DegenerateSpan(String),
    #[error("invalid time interval [{start}, {end}]: start must precede end")]
    InvalidInterval { start: f64, end: f64 },
    #[error("invalid space-time history for `{object}`: {reason}")]
    InvalidHistory { object: String, reason: String },
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error("orientation undefined for `{0}`")]
    OrientationUndefined(String),
    #[error("movement direction undefined: ground-plane displacement below tolerance")]
    DirectionUndefined,
    #[error("facing undefined: oriented points coincide")]
    FacingUndefined,
    #[error("unsupported primitive pair: {0} vs {1}")]
    UnsupportedPair(PrimitiveKind, PrimitiveKind),
    #[error("unit mismatch: {0} vs {1}")]
    UnitMismatch(Unit, Unit),
    #[error("degenerate geometry: {0}")]
    Degenerate(String),
    #[error("missing joints for {part} of `{person}` at t={t}: {joints}")]
    PartialPose {
        person: String,
        part: String,
        t: f64,
        joints: String,
    },
    #[error("insufficient samples for `{0}`: at least two resolvable frames are required")]
    InsufficientSamples(String),
    #[error("unknown predicate {name}/{arity}")]
    UnknownPredicate { name: String, arity: usize },
    #[error("invalid scene: {0}")]
    InvalidScene(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("{0}")]
    Rule(String),
}

impl Error {
    /// Geometric undefinedness: the predicate does not apply to the
    /// arguments at this instant, as opposed to a malformed query.
    pub fn is_undefined(&self) -> bool {
        matches!(
            self,
            Error::OutOfRange { .. }
                | Error::OrientationUndefined(_)
                | Error::DirectionUndefined
                | Error::FacingUndefined
                | Error::UnsupportedPair(..)
                | Error::UnitMismatch(..)
                | Error::Degenerate(_)
                | Error::PartialPose { .. }
        )
    }
}
