use thiserror::Error;

use crate::zmodule::QmodZ;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("multiplication table is not square or has entries out of range: {0}")]
    MalformedTable(String),
    #[error("index 0 is not a two-sided identity")]
    NoIdentity,
    #[error("element {0} has no two-sided inverse")]
    NoInverse(usize),
    #[error("multiplication is not associative on ({0}, {1}, {2})")]
    NonAssociative(usize, usize, usize),
    #[error("generated group exceeds the closure bound {0}")]
    ClosureExceedsBound(usize),
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("not a subgroup: {0}")]
    NotASubgroup(String),
    #[error("not a homomorphism: {0}")]
    NotAHomomorphism(String),
    #[error("invalid module: {0}")]
    InvalidModule(String),
    #[error("coefficient module must be cyclic, got invariant factors {0:?}")]
    NonCyclicCoefficients(Vec<u64>),
    #[error("exponent of the abelianized band ({exponent}) does not divide the coefficient order {modulus}")]
    ExponentMismatch { exponent: u64, modulus: u64 },
    #[error("cochain degree {0} exceeds the supported range")]
    DegreeTooHigh(usize),
    #[error("group order {order} exceeds the configured bound {bound}")]
    SizeBound { order: usize, bound: usize },
    #[error("cochain of degree {0} is not a cocycle")]
    NotACocycle(usize),
    #[error("pairing is not {0}")]
    NonEquivariantPairing(String),
    #[error("cochains live over different groups or modules: {0}")]
    Mismatch(String),
    #[error("invalid place '{place}': {reason}")]
    InvalidPlace { place: String, reason: String },
    #[error("search space of {size} assignments exceeds the bound {bound}")]
    SearchSpaceExceeded { size: u128, bound: u128 },
    #[error("invalid extension: {0}")]
    InvalidExtension(String),
    #[error("no local section at place '{0}'")]
    NotLocallyNeutral(String),
    #[error("cup product b∪e is not a coboundary in degree 3 (generator {generator}, obstruction {certificate:?})")]
    GlobalH3Obstruction { generator: usize, certificate: Vec<u64> },
    #[error("model axioms fail: {0}")]
    AxiomFailure(String),
    #[error("invalid Q/Z value '{0}'")]
    InvalidFraction(String),
    #[error("value {value} does not define a homomorphism on a generator of order {order}")]
    OrderMismatch { value: QmodZ, order: u64 },
    #[error("document error: {0}")]
    Document(String),
}

impl Error {
    /// Process exit status: 1 for an obstruction found by the computation,
    /// 2 for bad input, 3 for a model that violates its axioms.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::AxiomFailure(_) => 3,
            Error::NotLocallyNeutral(_) | Error::GlobalH3Obstruction { .. } => 1,
            _ => 2,
        }
    }
}
