use alloc::string::String;
use core::fmt;

/// Errors shared by all modules of the crate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    /// The modulus passed to [`crate::Prime::new`] is not prime.
    NotPrime(u64),
    /// Two values built over different primes were combined.
    PrimeMismatch { left: u64, right: u64 },
    /// Two points or functions of different dimension were combined.
    DimensionMismatch { expected: usize, got: usize },
    /// An operation requiring a nonzero test function received zero.
    ZeroFunction,
    /// Canonicalization would exceed the term budget (scale spread too wide).
    CanonicalBudget { would_need: u128, budget: u128 },
    /// A polynomial expected to be homogeneous is not.
    NotHomogeneous,
    /// The polynomial has a zero on the unit sphere; witness is a residue
    /// class `z mod p^depth` certified by the Hensel criterion.
    NotElliptic { witness: String, depth: u32 },
    /// The residue tree exceeded its node or depth budget; ellipticity is
    /// undecided.
    BudgetExceeded { nodes: u64, depth: u32 },
    /// A spectral integral diverges (negative-sign symbol with d*alpha >= n
    /// against a spectrum not vanishing near the origin).
    Divergent { detail: String },
    /// The requested quotient grid cannot host the function; `required` is
    /// the smallest admissible truncation level.
    WindowTooSmall { required: i64 },
    /// The requested quotient grid exceeds the desk-scale oracle budget.
    OracleTooLarge { points: u128, limit: u128 },
    /// An argument had to lie in the span of the radial indicators chi_r.
    NotInW,
    /// alpha is outside the admissible range of the operation.
    AlphaOutOfRange { detail: String },
    /// Input validation failure (parsing, schema, parameter range).
    InvalidInput(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NotPrime(p) => write!(f, "{p} is not prime"),
            Error::PrimeMismatch { left, right } => {
                write!(f, "prime mismatch: {left} vs {right}")
            }
            Error::DimensionMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
            Error::ZeroFunction => write!(f, "operation undefined for the zero function"),
            Error::CanonicalBudget { would_need, budget } => write!(
                f,
                "canonicalization would need {would_need} terms (budget {budget}); \
                 reduce the spread of ball scales"
            ),
            Error::NotHomogeneous => write!(f, "polynomial is not homogeneous"),
            Error::NotElliptic { witness, depth } => write!(
                f,
                "polynomial has a zero on the unit sphere near {witness} (mod p^{depth})"
            ),
            Error::BudgetExceeded { nodes, depth } => write!(
                f,
                "residue tree budget exceeded ({nodes} nodes, depth {depth}): inconclusive"
            ),
            Error::Divergent { detail } => write!(f, "divergent integral: {detail}"),
            Error::WindowTooSmall { required } => {
                write!(f, "quotient window too small: need K >= {required}")
            }
            Error::OracleTooLarge { points, limit } => write!(
                f,
                "oracle grid of {points} points exceeds desk-scale limit {limit}"
            ),
            Error::NotInW => write!(f, "test function is not in the span of the chi_r"),
            Error::AlphaOutOfRange { detail } => write!(f, "alpha out of range: {detail}"),
            Error::InvalidInput(s) => write!(f, "invalid input: {s}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}
