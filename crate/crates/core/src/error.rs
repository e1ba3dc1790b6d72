use thiserror::Error;

/// Everything that can go wrong inside the toolkit.
///
/// Variants fall in three groups: invalid input (the caller broke a
/// precondition), capacity (a configured limit stopped the computation),
/// and internal inconsistency (a result contradicted a proven bound, which
/// always indicates a bug).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("coefficient list is empty")]
    EmptyCoefficients,
    #[error("coefficient {value} at position {index} is not positive")]
    NonPositiveCoefficient { index: usize, value: i64 },
    #[error("coefficient sum {u_total} exceeds the cap of {cap}")]
    CoefficientsTooLarge { u_total: u64, cap: u64 },
    #[error("cannot parse {what} from {input:?}")]
    Parse { what: &'static str, input: String },

    #[error("set is empty")]
    EmptyInput,
    #[error("set contains the element {0} more than once")]
    DuplicateElements(i64),
    #[error("{0:?} is not a canonical set (minimum 0, strictly increasing, gcd 1)")]
    NotCanonical(Vec<i64>),
    #[error("k must be at least 1")]
    ZeroK,
    #[error("diameter {diameter} is smaller than k - 1 = {needed}")]
    DiameterTooSmall { diameter: i64, needed: i64 },

    #[error("form has arity {arity}; expected a binary form")]
    NotBinary { arity: usize },
    #[error("form has arity {arity}; expected a ternary form")]
    NotTernary { arity: usize },
    #[error("coefficients {0:?} are not pairwise distinct")]
    NotStrictlyIncreasing(Vec<u64>),
    #[error("coefficients ({0}, {1}) are not coprime")]
    NotCoprime(u64, u64),

    #[error("known values lack the exact value of N_f(2)")]
    MissingBaseValue,
    #[error("known values are not strictly increasing in the set size: N_f({lo}) = {lo_value} but N_f({hi}) = {hi_value}")]
    InconsistentKnown {
        lo: usize,
        lo_value: u64,
        hi: usize,
        hi_value: u64,
    },
    #[error("N_f({k}) is only bracketed in [{lower}, {best}] at diameter {diameter}; minimizers are not certified")]
    NotCertifiedExact {
        k: usize,
        lower: u64,
        best: u64,
        diameter: i64,
    },

    #[error("{what} exceeded the limit of {limit}")]
    CapacityExceeded { what: &'static str, limit: u64 },
    #[error("integer overflow while evaluating the form")]
    Overflow,

    #[error("witness realizes {got} values but {expected} were expected")]
    WitnessMismatch { expected: u64, got: u64 },
    #[error("certified lower bound {lower} exceeds a realized value {best} for N_f({k})")]
    CertificateViolation { k: usize, lower: u64, best: u64 },
}

impl Error {
    /// True for errors raised by a configured limit rather than bad input.
    pub fn is_capacity(&self) -> bool {
        matches!(self, Error::CapacityExceeded { .. } | Error::Overflow)
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
