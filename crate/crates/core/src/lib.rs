//! Quadratic Gauss sums computed three ways: directly as exact sums of roots
//! of unity, as traces of a finite quantum evolution on a toroidal phase space,
//! and as discrete time-sliced path integrals on the same space.
//!
//! Every finite sum is first accumulated exactly as a [`CycloSum`] (integer
//! multiplicities of rational phases) and evaluated once at a requested MPFR
//! precision into a [`ComplexHP`] that carries an a priori error bound.
//!
//! Modules:
//! - [`phasecalc`]: rational phases, exact phase sums, error-tracked complex numbers.
//! - [`gauss`]: Gauss sums, the Landsberg-Schaar identity, Legendre symbols.
//! - [`torus`]: the N-dimensional toroidal system, its kernels and traces.
//! - [`cylinder`]: theta functions and the propagator on the circle.
//! - [`report`]: verification reports shared by all checks.

pub mod cylinder;
pub mod error;
pub mod gauss;
pub mod phasecalc;
pub mod report;
pub mod torus;

pub use error::{Error, Result};
pub use phasecalc::{phase_add, ComplexHP, CycloSum, PhaseRational, DEFAULT_PRECISION};
pub use report::VerificationReport;
