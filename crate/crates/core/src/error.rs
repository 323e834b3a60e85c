use thiserror::Error;

/// Errors raised by the exact and numeric routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{value} is not coprime to {modulus}")]
    NotCoprime { value: i64, modulus: u64 },

    #[error("invalid modulus {modulus}: {reason}")]
    InvalidModulus { modulus: u64, reason: &'static str },

    #[error("division by zero in Q(zeta_{0})")]
    DivisionByZero(u64),

    #[error("elements live in different fields: Q(zeta_{left}) vs Q(zeta_{right})")]
    FieldMismatch { left: u64, right: u64 },

    #[error("cannot embed Q(zeta_{from}) into Q(zeta_{to}): {from} does not divide {to}")]
    NotDivisible { from: u64, to: u64 },

    #[error("zeta({0}) / pi^{0} is only known to be rational for even k >= 2")]
    OddZetaIndex(u32),

    #[error("(Z/{0}Z)^x is not cyclic")]
    NotCyclic(u64),

    #[error(
        "field Q(zeta_{conductor}) has degree {phi}, above the bound {bound} (raise --max-phi)"
    )]
    PhiGuard {
        conductor: u64,
        phi: u64,
        bound: u64,
    },

    #[error("moduli {0:?} are not pairwise coprime")]
    NotPairwiseCoprime(Vec<u64>),

    #[error("domain error: {0}")]
    Domain(String),
}

pub type Result<T> = std::result::Result<T, Error>;
