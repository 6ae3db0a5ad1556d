//! Rotor on a circle: angle periodic, angular momentum unbounded.
//!
//! The propagator has a spectral series over angular-momentum eigenstates and
//! an image series over windings of the unrolled circle; they agree, which in
//! trace form is the theta-function transformation `θ(τ) = θ(1/τ)/√τ` with
//! `θ(τ) = Σ_n exp(-πn²τ)`.
//!
//! Every series here is a Gaussian in its summation index and is truncated
//! to `|n| <= M` with the majorant
//!
//! ```text
//!   Σ_{n >= m} exp(-a·n²) <= exp(-a·m²) / (1 - exp(-a·(2m + 1)))     (a > 0)
//! ```
//!
//! which follows from `n² >= m² + (n - m)(2m + 1)` for `n >= m`.

use rug::float::Round;
use rug::Float;

use crate::error::{domain, Result};
use crate::gauss::{real_sqrt, verify_landsberg_schaar};
use crate::phasecalc::{pi, ulp, up, ComplexHP, GUARD_BITS};
use crate::report::{params, VerificationReport};

/// Upper bound on `Σ_{n >= start} exp(-rate·n²)`.
pub fn gaussian_tail_majorant(rate: &Float, start: u64) -> Float {
    let down = |x: &Float, k: u64| -> Float {
        Float::with_val_round(64, x * Float::with_val(128, k), Round::Down).0
    };
    let lead_exp = -down(rate, start * start);
    let lead = up(lead_exp.exp_ref());
    let ratio_exp = -down(rate, 2 * start + 1);
    let ratio = up(ratio_exp.exp_ref());
    let denom = Float::with_val_round(64, 1 - ratio, Round::Down).0;
    if denom <= 0 {
        return Float::with_val(64, rug::float::Special::Infinity);
    }
    up(&lead / &denom)
}

/// Smallest `M >= 1` with `2·majorant(rate, M + 1) <= target`.
fn truncation_for(rate: &Float, target: &Float) -> u64 {
    let mut m = 1u64;
    while up(&gaussian_tail_majorant(rate, m + 1) * 2u32) > *target {
        m = if m < 16 { m + 1 } else { m + m / 8 };
    }
    m
}

/// A truncated series value together with a bound on the discarded tail.
#[derive(Debug, Clone)]
pub struct SeriesValue {
    pub value: ComplexHP,
    pub tail_bound: Float,
}

impl SeriesValue {
    /// Rounding error plus truncation tail.
    pub fn total_bound(&self) -> Float {
        up(self.value.err_bound() + &self.tail_bound)
    }
}

/// Theta-series argument `τ` (`Re τ > 0`) with truncation `M`.
#[derive(Debug, Clone)]
pub struct ThetaParams {
    tau: ComplexHP,
    truncation: u64,
    tail_bound: Float,
}

impl ThetaParams {
    pub fn new(tau: ComplexHP, truncation: u64) -> Result<Self> {
        if !tau.re().is_sign_positive() || tau.re().is_zero() {
            return domain("theta series needs Re(tau) > 0");
        }
        if truncation == 0 {
            return domain("theta truncation must be at least 1");
        }
        let rate = Self::rate(&tau);
        let tail_bound = up(&gaussian_tail_majorant(&rate, truncation + 1) * 2u32);
        Ok(Self {
            tau,
            truncation,
            tail_bound,
        })
    }

    /// Choose the smallest truncation whose tail bound is below `target`.
    pub fn auto(tau: ComplexHP, target: &Float) -> Result<Self> {
        if !tau.re().is_sign_positive() || tau.re().is_zero() {
            return domain("theta series needs Re(tau) > 0");
        }
        let m = truncation_for(&Self::rate(&tau), target);
        Self::new(tau, m)
    }

    pub fn from_f64(re: f64, im: f64, truncation: u64, prec: u32) -> Result<Self> {
        Self::new(ComplexHP::from_f64(re, im, prec), truncation)
    }

    /// `π·Re(τ)` rounded down, the Gaussian rate of `|exp(-πn²τ)|`.
    fn rate(tau: &ComplexHP) -> Float {
        let p = Float::with_val_round(64, rug::float::Constant::Pi, Round::Down).0;
        let re = Float::with_val_round(64, tau.re(), Round::Down).0;
        Float::with_val_round(64, &p * &re, Round::Down).0
    }

    pub fn tau(&self) -> &ComplexHP {
        &self.tau
    }

    pub fn truncation(&self) -> u64 {
        self.truncation
    }

    pub fn tail_bound(&self) -> &Float {
        &self.tail_bound
    }
}

/// `Σ_{n=-M}^{M} exp(-πn²τ)`.
///
/// Terms follow the recurrence `x^((n+1)²) = x^(n²)·x^(2n+1)` with
/// `x = exp(-πτ)`, carried with extra guard bits.
pub fn theta_truncated(params: &ThetaParams) -> Result<SeriesValue> {
    let prec = params.tau.precision_bits();
    let m = params.truncation;
    let w = prec + GUARD_BITS + 64 - m.leading_zeros();
    let tau = ComplexHP::from_parts(
        params.tau.re().clone(),
        params.tau.im().clone(),
        w,
        params.tau.err_bound().clone(),
    );
    let minus_pi = ComplexHP::from_real(Float::with_val(w, -pi(w)), w, ulp(w, 2));
    let x = tau.mul(&minus_pi).exp();
    let x2 = x.mul(&x);
    let mut square = x.clone(); // x^(n²)
    let mut odd = x.clone(); // x^(2n-1)
    let mut sum = ComplexHP::zero(w);
    for n in 1..=m {
        if n > 1 {
            odd = odd.mul(&x2);
            square = square.mul(&odd);
        }
        sum = sum.add(&square);
    }
    let value = sum.scale_i64(2).add(&ComplexHP::one(w));
    let value = ComplexHP::from_parts(
        value.re().clone(),
        value.im().clone(),
        prec,
        value.err_bound().clone(),
    );
    Ok(SeriesValue {
        value,
        tail_bound: params.tail_bound.clone(),
    })
}

/// Compare `θ(τ)` with `θ(1/τ)/√τ`, principal root. The tolerance is the sum
/// of both truncation tails (the second scaled by `|1/√τ|`) and the rounding
/// bounds of both sides.
pub fn verify_jacobi(params: &ThetaParams) -> Result<VerificationReport> {
    let prec = params.tau.precision_bits();
    let lhs = theta_truncated(params)?;
    let inv = params.tau.recip()?;
    let target = if params.tail_bound > ulp(prec, 0) {
        params.tail_bound.clone()
    } else {
        ulp(prec, 0)
    };
    let dual = ThetaParams::auto(inv, &target)?;
    let dual_value = theta_truncated(&dual)?;
    let inv_root = params.tau.principal_sqrt()?.recip()?;
    let rhs = dual_value.value.mul(&inv_root);
    let scaled_tail = up(&inv_root.abs_upper() * &dual_value.tail_bound);
    let tolerance =
        up(&up(&lhs.tail_bound + &scaled_tail) + &up(lhs.value.err_bound() + rhs.err_bound()));
    let ps = params_for_tau(params, dual.truncation);
    Ok(VerificationReport::compare(ps, lhs.value, rhs, tolerance))
}

fn params_for_tau(theta: &ThetaParams, dual_truncation: u64) -> Vec<(String, String)> {
    params([
        ("tau_re", theta.tau.re_decimal(20)),
        ("tau_im", theta.tau.im_decimal(20)),
        ("truncation", theta.truncation.to_string()),
        ("dual_truncation", dual_truncation.to_string()),
    ])
}

/// Rotor propagator inputs. Time carries a strictly negative imaginary part.
#[derive(Debug, Clone)]
pub struct CylinderKernelParams {
    inertia: Float,
    hbar: Float,
    t: ComplexHP,
    theta0: Float,
    theta: Float,
    truncation: u64,
}

impl CylinderKernelParams {
    pub fn new(
        inertia: Float,
        hbar: Float,
        t: ComplexHP,
        theta0: Float,
        theta: Float,
        truncation: u64,
    ) -> Result<Self> {
        if !t.im().is_sign_negative() || t.im().is_zero() {
            return domain(
                "for real t the kernel series only converges in the distribution sense; \
                 give t a negative imaginary part",
            );
        }
        if inertia <= 0 || hbar <= 0 {
            return domain("moment of inertia and hbar must be positive");
        }
        let prec = t.precision_bits();
        let two_pi = Float::with_val(prec, pi(prec) * 2u32);
        for angle in [&theta0, &theta] {
            if angle.is_sign_negative() && !angle.is_zero() || *angle >= two_pi {
                return domain("angles must lie in [0, 2π)");
            }
        }
        if truncation == 0 {
            return domain("kernel truncation must be at least 1");
        }
        Ok(Self {
            inertia,
            hbar,
            t,
            theta0,
            theta,
            truncation,
        })
    }

    /// `I = ħ = 1`, `t = t_re + i·t_im`.
    pub fn unit(
        t_re: f64,
        t_im: f64,
        theta0: f64,
        theta: f64,
        truncation: u64,
        prec: u32,
    ) -> Result<Self> {
        Self::new(
            Float::with_val(prec, 1),
            Float::with_val(prec, 1),
            ComplexHP::from_f64(t_re, t_im, prec),
            Float::with_val(prec, theta0),
            Float::with_val(prec, theta),
            truncation,
        )
    }

    /// Units with `2πI = ħ`: `ħ = 1`, `I = 1/(2π)`.
    pub fn two_pi_inertia_units(
        t_re: f64,
        t_im: f64,
        theta0: f64,
        theta: f64,
        truncation: u64,
        prec: u32,
    ) -> Result<Self> {
        let inertia = Float::with_val(prec + GUARD_BITS, pi(prec + GUARD_BITS) * 2u32).recip();
        Self::new(
            Float::with_val(prec, inertia),
            Float::with_val(prec, 1),
            ComplexHP::from_f64(t_re, t_im, prec),
            Float::with_val(prec, theta0),
            Float::with_val(prec, theta),
            truncation,
        )
    }

    /// Replace the truncation by the smallest one meeting `target` for both
    /// the spectral and the image series.
    pub fn with_auto_truncation(mut self, target: &Float) -> Self {
        let spectral = truncation_for(&self.spectral_rate(), target);
        let image = truncation_for(&self.image_rate(), target);
        self.truncation = spectral.max(image);
        self
    }

    pub fn truncation(&self) -> u64 {
        self.truncation
    }

    fn prec(&self) -> u32 {
        self.t.precision_bits()
    }

    fn delta(&self) -> Float {
        Float::with_val(self.prec(), &self.theta - &self.theta0)
    }

    /// `ħ·|Im t|/(2I)`, rounded down.
    fn spectral_rate(&self) -> Float {
        let b = Float::with_val_round(64, self.t.im().abs_ref(), Round::Down).0;
        let num = Float::with_val_round(64, &self.hbar * &b, Round::Down).0;
        let den = up(&self.inertia * 2u32);
        Float::with_val_round(64, &num / &den, Round::Down).0
    }

    /// `4π²·I·|Im t|/(2ħ|t|²)`, rounded down.
    fn image_rate(&self) -> Float {
        let b = Float::with_val_round(64, self.t.im().abs_ref(), Round::Down).0;
        let t2 = up(&up(&self.t.abs_upper_exact()) * &up(&self.t.abs_upper_exact()));
        let num = Float::with_val_round(64, &self.inertia * &b, Round::Down).0;
        let den = up(&up(&self.hbar * 2u32) * &t2);
        let base = Float::with_val_round(64, &num / &den, Round::Down).0;
        let p = Float::with_val_round(64, rug::float::Constant::Pi, Round::Down).0;
        let four_pi2 = Float::with_val_round(64, &p * &p, Round::Down).0 * 4u32;
        Float::with_val_round(64, &base * &four_pi2, Round::Down).0
    }
}

/// `(1/2π) Σ_{n=-M}^{M} exp(-iħn²t/(2I))·exp(in(θ - θ₀))`.
pub fn spectral_kernel(params: &CylinderKernelParams) -> Result<SeriesValue> {
    let prec = params.prec();
    let w = prec + GUARD_BITS;
    let zero = Float::new(64);
    // -iħt/(2I) as a complex coefficient of n²
    let c = Float::with_val(w, &params.hbar / &params.inertia) / 2u32;
    let coeff = params
        .t
        .mul(&ComplexHP::from_parts(Float::new(w), -c, w, zero.clone()));
    let delta = params.delta();
    let mut sum = ComplexHP::zero(w);
    let m = params.truncation as i64;
    for n in -m..=m {
        let quad = coeff.scale_i64(n * n);
        let lin = ComplexHP::from_parts(
            Float::new(w),
            Float::with_val(w, &delta * n),
            w,
            zero.clone(),
        );
        sum = sum.add(&quad.add(&lin).exp());
    }
    let inv_two_pi = ComplexHP::from_real(Float::with_val(w, pi(w) * 2u32).recip(), w, ulp(w, 1));
    let value = sum.mul(&inv_two_pi);
    let value = ComplexHP::from_parts(
        value.re().clone(),
        value.im().clone(),
        prec,
        value.err_bound().clone(),
    );
    let tail = up(&gaussian_tail_majorant(&params.spectral_rate(), params.truncation + 1) * 2u32);
    let tail = up(&tail * &up(inv_two_pi.abs_upper_exact()));
    Ok(SeriesValue {
        value,
        tail_bound: tail,
    })
}

/// `Σ_{n=-M}^{M} (I/(2πiħt))^(1/2)·exp((iI/(2ħt))·(θ - θ₀ - 2πn)²)`, principal root.
pub fn image_kernel(params: &CylinderKernelParams) -> Result<SeriesValue> {
    let prec = params.prec();
    let w = prec + GUARD_BITS;
    let zero = Float::new(64);
    let t = ComplexHP::from_parts(
        params.t.re().clone(),
        params.t.im().clone(),
        w,
        params.t.err_bound().clone(),
    );
    let two_pi = Float::with_val(w, pi(w) * 2u32);
    let inertia = ComplexHP::from_real(params.inertia.clone(), w, zero.clone());
    // I/(2πiħt)
    let denom = t.mul(&ComplexHP::from_parts(
        Float::new(w),
        Float::with_val(w, &two_pi * &params.hbar),
        w,
        ulp(w, 2),
    ));
    let prefactor = inertia.div(&denom)?.principal_sqrt()?;
    // iI/(2ħt)
    let two_hbar_t = t.scale(&Float::with_val(w, &params.hbar * 2u32));
    let quad = ComplexHP::from_parts(Float::new(w), params.inertia.clone(), w, zero.clone())
        .div(&two_hbar_t)?;
    let delta = params.delta();
    let mut sum = ComplexHP::zero(w);
    let m = params.truncation as i64;
    for n in -m..=m {
        let shift = Float::with_val(w, &two_pi * n);
        let x = Float::with_val(w, &delta - &shift);
        let x2 = ComplexHP::from_real(
            Float::with_val(w, &x * &x),
            w,
            up(&up(&x * &x) * &ulp(w, 3)),
        );
        sum = sum.add(&quad.mul(&x2).exp());
    }
    let value = sum.mul(&prefactor);
    let value = ComplexHP::from_parts(
        value.re().clone(),
        value.im().clone(),
        prec,
        value.err_bound().clone(),
    );
    let tail = up(&gaussian_tail_majorant(&params.image_rate(), params.truncation) * 2u32);
    let tail = up(&tail * &prefactor.abs_upper_exact());
    Ok(SeriesValue {
        value,
        tail_bound: tail,
    })
}

/// Kernel-level comparison of the spectral and image series.
pub fn verify_kernel_equality(params: &CylinderKernelParams) -> Result<VerificationReport> {
    let a = spectral_kernel(params)?;
    let b = image_kernel(params)?;
    let tolerance = up(&a.total_bound() + &b.total_bound());
    let ps = params_list(params);
    Ok(VerificationReport::compare(ps, a.value, b.value, tolerance))
}

fn params_list(p: &CylinderKernelParams) -> Vec<(String, String)> {
    params([
        ("t_re", p.t.re_decimal(12)),
        ("t_im", p.t.im_decimal(12)),
        ("theta0", crate::phasecalc::decimal(&p.theta0, 12)),
        ("theta", crate::phasecalc::decimal(&p.theta, 12)),
        ("truncation", p.truncation.to_string()),
    ])
}

/// Precision needed to resolve the gap at `eps`: its leading term is
/// `exp(-π/(ε p²))`, or `exp(-4π/(ε p²))` when the first correction vanishes
/// (possible for even `p` only).
fn limit_precision(base: u32, eps: &Float, p: u64) -> u32 {
    let k2 = if p.is_multiple_of(2) { 4.0 } else { 1.0 };
    let e = eps.to_f64();
    let bits = k2 * std::f64::consts::PI / (e * (p * p) as f64) / std::f64::consts::LN_2;
    base + bits.ceil() as u32 + 64
}

/// Approach the Landsberg-Schaar identity through the theta function at
/// `τ = 2iq/p + ε` for each `ε` in a strictly decreasing list.
///
/// For each `ε` the report has
///
/// - `lhs = conj(√(pε)·θ(τ))`, which tends to `(1/√p) Σ_{n<p} exp(2πin²q/p)`;
/// - `rhs` = that limit, evaluated exactly;
/// - `abs_diff` = the gap, which shrinks like `exp(-π/(εp²))`;
/// - `tolerance` = the a priori bound `2√p·Σ_{k>=1} exp(-πk²/(εp²))` plus
///   truncation and rounding.
///
/// `gap_dual` records the same gap measured with `conj(√(pε)·θ(1/τ)/√τ)`,
/// and `jacobi_residual` the distance between the two normalized sides.
pub fn regularized_ls_limit(
    q: u64,
    p: u64,
    eps_list: &[Float],
    prec: u32,
) -> Result<Vec<VerificationReport>> {
    if q == 0 || p == 0 {
        return domain("limit needs positive p and q");
    }
    for e in eps_list {
        if !e.is_sign_positive() || e.is_zero() || !e.is_finite() {
            return domain(
                "epsilon must be strictly positive; epsilon = 0 is the distributional boundary",
            );
        }
    }
    if eps_list.windows(2).any(|w| w[1] >= w[0]) {
        return domain("epsilon list must be strictly decreasing");
    }
    eps_list
        .iter()
        .map(|eps| limit_step(q, p, eps, prec))
        .collect()
}

fn limit_step(q: u64, p: u64, eps: &Float, prec: u32) -> Result<VerificationReport> {
    let w = limit_precision(prec, eps, p);
    let target = ulp(w, -8);
    let tau = ComplexHP::from_parts(
        Float::with_val(w, eps),
        Float::with_val(w, Float::with_val(w, 2 * q) / p),
        w,
        Float::new(64),
    );
    let tau = tau.with_extra_err(&ulp(w, 1));
    let eps_hp = ComplexHP::from_real(Float::with_val(w, eps), w, Float::new(64));
    let norm = real_sqrt(p, w).mul(&eps_hp.principal_sqrt()?);

    let direct = theta_truncated(&ThetaParams::auto(tau.clone(), &target)?)?;
    let a = direct.value.mul(&norm).conj();

    let dual = theta_truncated(&ThetaParams::auto(tau.recip()?, &target)?)?;
    let b = dual
        .value
        .mul(&tau.principal_sqrt()?.recip()?)
        .mul(&norm)
        .conj();

    let exact = verify_landsberg_schaar(q, p, w)?.lhs;

    // analytic gap bound: |S_k| <= p for the linear Gauss sums S_k
    let rate = {
        let pi_down = Float::with_val_round(64, rug::float::Constant::Pi, Round::Down).0;
        let den = up(&up(Float::with_val(64, eps)) * (p * p));
        Float::with_val_round(64, &pi_down / &den, Round::Down).0
    };
    let root_p = up(Float::with_val(64, p).sqrt_ref());
    let gap_bound = up(&up(&gaussian_tail_majorant(&rate, 1) * 2u32) * &root_p);
    let numeric = up(&norm.abs_upper_exact() * &up(&direct.tail_bound + direct.value.err_bound()));
    let tolerance = up(&up(&gap_bound + &numeric) + &up(a.err_bound() + exact.err_bound()));

    let gap_dual = b.dist(&exact);
    let residual = a.dist(&b);
    let ps = params([
        ("p", p.to_string()),
        ("q", q.to_string()),
        ("eps", crate::phasecalc::decimal(eps, 17)),
        ("working_bits", w.to_string()),
        ("gap_dual", crate::phasecalc::decimal(&gap_dual, 6)),
        ("jacobi_residual", crate::phasecalc::decimal(&residual, 6)),
    ]);
    Ok(VerificationReport::compare(ps, a, exact, tolerance))
}
