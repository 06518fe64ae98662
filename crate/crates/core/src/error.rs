use num_bigint::BigInt;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("matrix is not unimodular (determinant {det})")]
    NotUnimodular { det: BigInt },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("malformed fan: {0}")]
    MalformedFan(String),
    #[error("fan is not smooth and complete: {0}")]
    FanInvalid(String),
    #[error("divisors are defined on different fans")]
    FanMismatch,
    #[error("cone {cone} index out of range")]
    ConeOutOfRange { cone: usize },
    #[error("cone {cone} does not give a vertex of the polytope (inequality of ray {ray} violated)")]
    NotAVertex { cone: usize, ray: usize },
    #[error("polytope is unbounded in the chart")]
    UnboundedPolytope,
    #[error("origin is not a point of the charted polytope")]
    NotNormalized,
    #[error("{0} is not prime")]
    InvalidPrime(u64),
    #[error("no m <= {bound} separates any Frobenius jets")]
    NoWitness { bound: u64 },
    #[error("size {size} exceeds the configured cap {cap}")]
    SizeLimit { size: u128, cap: usize },
    #[error("degree cap {cap} too small: witness needs degree {needed}")]
    CapTooSmall { cap: u64, needed: u64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
