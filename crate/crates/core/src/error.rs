use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension degree {degree} out of range (1..={max})")]
    DegreeOutOfRange { degree: u32, max: u32 },
    #[error("{what}: {value} exceeds configured bound {bound}")]
    BoundExceeded { what: &'static str, value: u128, bound: u128 },
    #[error("curve is singular (discriminant zero)")]
    SingularCurve,
    #[error("point is not defined over the curve's field")]
    FieldMismatch,
    #[error("point does not satisfy the curve equation")]
    NotOnCurve,
    #[error("prime {0} equals the characteristic")]
    BadPrime(u64),
    #[error("{0} is not a negative discriminant")]
    BadDiscriminant(i64),
    #[error("operands belong to different orders")]
    OwnerMismatch,
    #[error("form ({0}, {1}, {2}) is not primitive")]
    NonInvertible(i64, i64, i64),
    #[error("lattice is not of full rank")]
    DegenerateLattice,
    #[error("ideal owner of conductor {owner} does not contain the base order of conductor {base}")]
    OwnerNotAbove { owner: u64, base: u64 },
    #[error("cokernel has torsion of exponent {exponent}")]
    HasTorsion { exponent: u64 },
    #[error("modules are defined over different base orders")]
    BaseMismatch,
    #[error("order action is not realizable on {ell}-power torsion")]
    DenominatorClash { ell: u64 },
    #[error("internal cross-check failed: {0}")]
    CrossCheckMismatch(String),
    #[error("order of conductor {conductor} is not a subring of the endomorphism ring")]
    NotSubring { conductor: u64 },
    #[error("subgroup is not stable under Frobenius")]
    NotGaloisStable,
    #[error("matrix is singular modulo {0}")]
    SingularMatrix(u64),
    #[error("unsupported case: {0}")]
    UnsupportedCase(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    /// Stable machine-readable tag used in error reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NotPrime(_) => "not_prime",
            Error::DegreeOutOfRange { .. } => "degree_out_of_range",
            Error::BoundExceeded { .. } => "bound_exceeded",
            Error::SingularCurve => "singular_curve",
            Error::FieldMismatch => "field_mismatch",
            Error::NotOnCurve => "not_on_curve",
            Error::BadPrime(_) => "bad_prime",
            Error::BadDiscriminant(_) => "bad_discriminant",
            Error::OwnerMismatch => "owner_mismatch",
            Error::NonInvertible(..) => "non_invertible",
            Error::DegenerateLattice => "degenerate_lattice",
            Error::OwnerNotAbove { .. } => "owner_not_above",
            Error::HasTorsion { .. } => "has_torsion",
            Error::BaseMismatch => "base_mismatch",
            Error::DenominatorClash { .. } => "denominator_clash",
            Error::CrossCheckMismatch(_) => "cross_check_mismatch",
            Error::NotSubring { .. } => "not_subring",
            Error::NotGaloisStable => "not_galois_stable",
            Error::SingularMatrix(_) => "singular_matrix",
            Error::UnsupportedCase(_) => "unsupported_case",
            Error::InvalidInput(_) => "invalid_input",
        }
    }

    pub fn is_bound_violation(&self) -> bool {
        matches!(self, Error::BoundExceeded { .. })
    }

    pub(crate) fn bound(what: &'static str, value: impl Into<u128>, bound: impl Into<u128>) -> Self {
        Error::BoundExceeded { what, value: value.into(), bound: bound.into() }
    }
}
