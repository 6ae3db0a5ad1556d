//! Exact rational-phase arithmetic and error-tracked complex evaluation.
//!
//! A sum of roots of unity is built as a [`CycloSum`], which is exact, then
//! evaluated once into a [`ComplexHP`]. Summation order never matters.

mod cyclo;
mod hp;
mod phase;

pub use cyclo::{cyclosum_eval, CycloSum};
pub use hp::{decimal, decimal_digits, pi, ComplexHP, DEFAULT_PRECISION, MIN_PRECISION};
pub use phase::{phase_add, PhaseRational};

pub(crate) use hp::{ulp, up, GUARD_BITS};

/// `principal_sqrt(z)`: see [`ComplexHP::principal_sqrt`].
pub fn principal_sqrt(z: &ComplexHP) -> crate::Result<ComplexHP> {
    z.principal_sqrt()
}
