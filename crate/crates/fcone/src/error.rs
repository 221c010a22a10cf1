//! Error type shared by all modules.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DomainError {
    #[error("genus part {i} out of range 0..={g}")]
    GenusOutOfRange { i: u32, g: u32 },

    #[error("mark {mark} outside 1..={n}")]
    MarkOutOfRange { mark: u32, n: u32 },

    #[error("forbidden boundary pair ({i}, {marks}) on (g, n) = ({g}, {n})")]
    ForbiddenPair {
        i: u32,
        marks: String,
        g: u32,
        n: u32,
    },

    #[error("index {index} does not belong to the boundary index set of (g, n) = ({g}, {n})")]
    NotInIndexSet { index: String, g: u32, n: u32 },

    #[error("ambient mismatch: (g, n) = ({g1}, {n1}) vs ({g2}, {n2})")]
    AmbientMismatch { g1: u32, n1: u32, g2: u32, n2: u32 },

    #[error("expected a divisor class on the {expected} space, found one on the {found} space")]
    WrongSpace {
        expected: &'static str,
        found: &'static str,
    },

    #[error("{op} is undefined for (g, n) = ({g}, {n})")]
    ExcludedInstance { op: &'static str, g: u32, n: u32 },

    #[error("delta_(1, {{}}) vanishes on the pseudostable space and cannot carry a coefficient")]
    OneEmptyOnPs,

    #[error("lambda and delta_irr vanish on genus-zero spaces and cannot carry a coefficient")]
    GenusZeroRelation,

    #[error("adjoint coefficient out of range: {name} = {value}")]
    CoefficientOutOfRange { name: String, value: String },

    #[error("adjoint parameters must cover every boundary class; missing {0}")]
    MissingAlpha(String),

    #[error("not Q-Gorenstein: the admissible reduction differs from the divisorial part")]
    NotQGorenstein,

    #[error("enumeration would exceed the cap of {cap} subsets")]
    EnumerationCapExceeded { cap: u64 },

    #[error("admissible count needs about 2^{exponent} values and is not materialized")]
    CountTooLarge { exponent: u64 },

    #[error("invalid {family} curve: {reason}")]
    InvalidCurve {
        family: &'static str,
        reason: String,
    },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("expected an ample-model result carrying an admissible subset")]
    NotAnUpsilonTResult,
}

pub type Result<T> = std::result::Result<T, DomainError>;
