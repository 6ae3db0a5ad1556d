//! Finite quantum mechanics on a toroidal phase space.
//!
//! Angle and angular momentum are both periodic, so the Hilbert space is
//! `C^N` with `N = 2q`. With `ħ = I = 1` the free Hamiltonian `H = L²/2` is
//! observed at the allowed time `t = 2πp/N`, i.e. `p` steps of `Δt = 2π/N`.
//! The trace of `exp(-iHt)` is computed
//!
//! - spectrally, in the angular-momentum basis where `H` is diagonal;
//! - as a product of `p` single-step position-space kernels;
//! - by enumerating all `N^(p-1)` discrete cyclic paths;
//! - by the closed form obtained after inserting the winding sum.
//!
//! Equality of the first and last is the Landsberg-Schaar identity.

mod basis;
mod kernel;
mod paths;
mod trace;

pub use basis::{momentum_basis, overlap, position_basis, position_op_apply, Basis, StateVector};
pub use kernel::{
    evolve_by_power, exact_power_phases, single_step_kernel, single_step_kernel_for_dim,
    single_step_phase, spectral_kernel, spectral_single_step, KernelMatrix,
};
pub use paths::{
    brute_force_path_sum, brute_force_trace, path_count, path_phase_sum, DEFAULT_PATH_BUDGET,
};
pub use trace::{
    trace_method1, trace_method2, winding_closed_form, winding_even_value, winding_sum,
};

use rug::Float;

use crate::error::{domain, Result};
use crate::phasecalc::pi;

/// The toroidal system for the Gauss-sum pair `(q, p)`: `N = 2q` states,
/// evolved for `p` elementary steps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TorusSystem {
    q: u64,
    p: u64,
}

impl TorusSystem {
    pub const INERTIA: u64 = 1;
    pub const HBAR: u64 = 1;

    pub fn new(q: u64, p: u64) -> Result<Self> {
        if q == 0 || p == 0 {
            return domain("torus system needs q >= 1 and p >= 1");
        }
        Ok(Self { q, p })
    }

    /// System with `N` states; `N` must be even.
    pub fn with_dim(n: u64, p: u64) -> Result<Self> {
        if !n.is_multiple_of(2) {
            return domain(format!("dimension N = {n} must be even (N = 2q)"));
        }
        Self::new(n / 2, p)
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// `N = 2q`.
    pub fn dim(&self) -> u64 {
        2 * self.q
    }

    /// `t = 2π·p·I/(N·ħ)`.
    pub fn time(&self, prec: u32) -> Float {
        Float::with_val(prec, pi(prec) * 2u32 * self.p) / self.dim()
    }

    /// `Δt = t/p = 2π/N`.
    pub fn time_step(&self, prec: u32) -> Float {
        Float::with_val(prec, pi(prec) * 2u32) / self.dim()
    }
}

/// The observation times `t_m = 2π·m·I/(N·ħ)`, `m = 1..=m_max`, with `ħ = 1`.
///
/// Periodicity of the momentum wave function only admits these times, and
/// the derivation needs `N` even.
pub fn allowed_times(n: u64, inertia: f64, m_max: u64) -> Result<Vec<f64>> {
    if n == 0 || !n.is_multiple_of(2) {
        return domain(format!(
            "allowed times need an even number of states N, got {n}"
        ));
    }
    if inertia.is_nan() || inertia <= 0.0 {
        return domain("moment of inertia must be positive");
    }
    Ok((1..=m_max)
        .map(|m| std::f64::consts::TAU * m as f64 * inertia / n as f64)
        .collect())
}
