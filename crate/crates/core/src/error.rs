use thiserror::Error;

/// Errors raised by the library.
///
/// Variants are grouped by how the command-line front end reports them:
/// parse failures, validation failures (a structure violates its axioms),
/// and resource caps.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("cyclotomic level mismatch: {left} vs {right}")]
    LevelMismatch { left: u32, right: u32 },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("group axiom violated: {0}")]
    GroupAxiom(String),

    #[error("not a subgroup: {0}")]
    NotSubgroup(String),

    #[error("groupoid axiom violated: {0}")]
    GroupoidAxiom(String),

    #[error("not a functor: {0}")]
    NotFunctor(String),

    #[error("not invariant under simultaneous conjugation: value at ({g}, {h}) differs after conjugating by {s}")]
    NotClassInvariant { g: usize, h: usize, s: usize },

    #[error("2-cocycle condition fails at ({0}, {1}, {2})")]
    CocycleViolation(usize, usize, usize),

    #[error("2-representation axiom violated: {0}")]
    TwoRep(TwoRepViolation),

    #[error("unsupported input: {0}")]
    Unsupported(String),

    #[error("size cap exceeded: {what} reached {size}, cap is {cap}")]
    SizeCap { what: String, size: usize, cap: usize },

    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },

    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
}

impl Error {
    pub(crate) fn parse(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            location: location.into(),
            message: message.into(),
        }
    }

    /// True for errors caused by malformed input text.
    pub fn is_parse(&self) -> bool {
        matches!(self, Error::Parse { .. })
    }

    /// True for errors caused by exceeding a configured size cap.
    pub fn is_size_cap(&self) -> bool {
        matches!(self, Error::SizeCap { .. })
    }
}

/// First violated axiom found while validating a 2-representation.
///
/// Indices are group element indices and (0-based) points of `[n]`.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TwoRepViolation {
    #[error("sigma({g}) is not a permutation of [n]")]
    NotPermutation { g: usize },

    #[error("sigma is not a homomorphism: sigma({g})sigma({h}) != sigma({g}{h}) at point {point}")]
    NotHomomorphism { g: usize, h: usize, point: usize },

    #[error("zero coherence scalar c_{{{g},{h}}}({j})")]
    ZeroCoherence { g: usize, h: usize, j: usize },

    #[error("zero unit scalar d({j})")]
    ZeroUnit { j: usize },

    #[error("associativity fails for (g, h, k) = ({g}, {h}, {k}) at column {j}")]
    Associativity { g: usize, h: usize, k: usize, j: usize },

    #[error("left unit law c_{{1,{g}}}({j}) = d(sigma_{g}({j})) fails")]
    LeftUnit { g: usize, j: usize },

    #[error("right unit law c_{{{g},1}}({j}) = d({j}) fails")]
    RightUnit { g: usize, j: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
