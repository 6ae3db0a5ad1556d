use std::cmp::Ordering;
use std::fmt;

use rug::float::{Constant, Round};
use rug::ops::AssignRound;
use rug::Float;

use super::PhaseRational;
use crate::error::{Error, Result};

/// Precision used when the caller does not ask for one.
pub const DEFAULT_PRECISION: u32 = 256;

/// Smallest precision accepted by evaluation routines.
pub const MIN_PRECISION: u32 = 16;

/// Extra bits carried internally by transcendental evaluations before the
/// final rounding to the caller's precision.
pub(crate) const GUARD_BITS: u32 = 32;

/// Precision of the error-bound register. Bounds are always rounded upward.
const BOUND_PREC: u32 = 64;

/// Round `val` upward into the error-bound register.
pub(crate) fn up<T>(val: T) -> Float
where
    Float: AssignRound<T, Round = Round, Ordering = Ordering>,
{
    Float::with_val_round(BOUND_PREC, val, Round::Up).0
}

/// `2^(k - prec)`, the rounding unit scaled by `2^k`.
pub(crate) fn ulp(prec: u32, k: i32) -> Float {
    Float::with_val(BOUND_PREC, Float::i_exp(1, k - prec as i32))
}

/// A complex number with MPFR real and imaginary parts and an a priori bound
/// on its distance from the exact value it approximates.
///
/// Error bounds propagate as follows, `p` being the working precision:
///
/// - `a ± b`: `err(a) + err(b) + |a ± b|·2^(1-p)`
/// - `a · b`: `|a|·err(b) + |b|·err(a) + err(a)·err(b) + |a|·|b|·2^(2-p)`
///
/// so the bound never decreases along a chain of operations.
#[derive(Debug, Clone)]
pub struct ComplexHP {
    re: Float,
    im: Float,
    prec: u32,
    err: Float,
}

impl ComplexHP {
    /// Build from components, rounding them to `prec` and accounting for that
    /// rounding in the bound on top of `err`.
    pub fn from_parts(re: Float, im: Float, prec: u32, err: Float) -> Self {
        let exact = re.prec() <= prec && im.prec() <= prec;
        let re = Float::with_val(prec, re);
        let im = Float::with_val(prec, im);
        let mut err = up(err);
        if !exact {
            let mag = up(re.hypot_ref(&im));
            err = up(&err + up(&mag * &ulp(prec, 1)));
        }
        Self { re, im, prec, err }
    }

    pub fn zero(prec: u32) -> Self {
        Self::from_i64(0, 0, prec)
    }

    pub fn one(prec: u32) -> Self {
        Self::from_i64(1, 0, prec)
    }

    /// Gaussian integer `re + i·im`. Exact whenever both parts fit in `prec` bits.
    pub fn from_i64(re: i64, im: i64, prec: u32) -> Self {
        let (re, o1) = Float::with_val_round(prec, re, Round::Nearest);
        let (im, o2) = Float::with_val_round(prec, im, Round::Nearest);
        let err = if o1 == Ordering::Equal && o2 == Ordering::Equal {
            Float::new(BOUND_PREC)
        } else {
            up(&up(re.hypot_ref(&im)) * &ulp(prec, 1))
        };
        Self { re, im, prec, err }
    }

    pub fn from_f64(re: f64, im: f64, prec: u32) -> Self {
        let (re, o1) = Float::with_val_round(prec, re, Round::Nearest);
        let (im, o2) = Float::with_val_round(prec, im, Round::Nearest);
        let err = if o1 == Ordering::Equal && o2 == Ordering::Equal {
            Float::new(BOUND_PREC)
        } else {
            up(&up(re.hypot_ref(&im)) * &ulp(prec, 1))
        };
        Self { re, im, prec, err }
    }

    /// A real number, carrying its own error bound.
    pub fn from_real(x: Float, prec: u32, err: Float) -> Self {
        Self::from_parts(x, Float::new(prec), prec, err)
    }

    /// `exp(2πi·phase)`.
    pub fn from_phase(phase: PhaseRational, prec: u32) -> Self {
        let (s, c) = unit_sin_cos(phase, prec + GUARD_BITS);
        Self {
            re: Float::with_val(prec, c),
            im: Float::with_val(prec, s),
            prec,
            err: ulp(prec, 2),
        }
    }

    pub fn re(&self) -> &Float {
        &self.re
    }

    pub fn im(&self) -> &Float {
        &self.im
    }

    pub fn precision_bits(&self) -> u32 {
        self.prec
    }

    pub fn err_bound(&self) -> &Float {
        &self.err
    }

    pub fn re_f64(&self) -> f64 {
        self.re.to_f64()
    }

    pub fn im_f64(&self) -> f64 {
        self.im.to_f64()
    }

    /// Widen the error bound by `extra`, e.g. for a known truncation error.
    pub fn with_extra_err(mut self, extra: &Float) -> Self {
        self.err = up(&self.err + extra);
        self
    }

    /// Modulus, rounded to nearest at working precision.
    pub fn abs(&self) -> Float {
        Float::with_val(self.prec, self.re.hypot_ref(&self.im))
    }

    /// Upper bound on the modulus of the stored value.
    pub fn abs_upper(&self) -> Float {
        up(self.re.hypot_ref(&self.im))
    }

    /// Upper bound on the modulus of the exact value.
    pub(crate) fn abs_upper_exact(&self) -> Float {
        up(&self.abs_upper() + &self.err)
    }

    pub fn conj(&self) -> Self {
        Self {
            re: self.re.clone(),
            im: Float::with_val(self.prec, -&self.im),
            prec: self.prec,
            err: self.err.clone(),
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            re: Float::with_val(self.prec, -&self.re),
            im: Float::with_val(self.prec, -&self.im),
            prec: self.prec,
            err: self.err.clone(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let prec = self.prec.min(other.prec);
        let re = Float::with_val(prec, &self.re + &other.re);
        let im = Float::with_val(prec, &self.im + &other.im);
        let round = up(&up(re.hypot_ref(&im)) * &ulp(prec, 1));
        let err = up(&up(&self.err + &other.err) + &round);
        Self { re, im, prec, err }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let prec = self.prec.min(other.prec);
        let w = prec + GUARD_BITS;
        let ac = Float::with_val(w, &self.re * &other.re);
        let bd = Float::with_val(w, &self.im * &other.im);
        let ad = Float::with_val(w, &self.re * &other.im);
        let bc = Float::with_val(w, &self.im * &other.re);
        let re = Float::with_val(prec, &ac - &bd);
        let im = Float::with_val(prec, &ad + &bc);
        let a = self.abs_upper();
        let b = other.abs_upper();
        let prop = up(&up(&a * &other.err) + &up(&b * &self.err));
        let prop = up(&prop + &up(&self.err * &other.err));
        let round = up(&up(&a * &b) * &ulp(prec, 2));
        Self {
            re,
            im,
            prec,
            err: up(&prop + &round),
        }
    }

    /// Multiply by an exactly known real scalar.
    pub fn scale(&self, x: &Float) -> Self {
        let re = Float::with_val(self.prec, &self.re * x);
        let im = Float::with_val(self.prec, &self.im * x);
        let ax = up(x.abs_ref());
        let round = up(&up(&ax * &self.abs_upper()) * &ulp(self.prec, 1));
        let err = up(&up(&ax * &self.err) + &round);
        Self {
            re,
            im,
            prec: self.prec,
            err,
        }
    }

    pub fn scale_i64(&self, k: i64) -> Self {
        self.scale(&Float::with_val(64, k))
    }

    /// `1/z`, refusing values whose modulus does not exceed their error bound.
    pub fn recip(&self) -> Result<Self> {
        let prec = self.prec;
        let w = prec + GUARD_BITS;
        let mag = Float::with_val(w, self.re.hypot_ref(&self.im));
        let margin = Float::with_val_round(BOUND_PREC, &mag - &self.err, Round::Down).0;
        if margin <= 0 {
            return Err(Error::PrecisionExhausted { bits: prec });
        }
        let norm = Float::with_val(w, &mag * &mag);
        let re = Float::with_val(prec, &self.re / &norm);
        let im = Float::with_val(prec, -Float::with_val(w, &self.im / &norm));
        // |1/z - 1/(z+d)| <= |d| / (|z| (|z| - |d|))
        let mag_down = Float::with_val_round(BOUND_PREC, &mag, Round::Down).0;
        let denom = Float::with_val_round(BOUND_PREC, &mag_down * &margin, Round::Down).0;
        let prop = up(&self.err / &denom);
        let round = up(&ulp(prec, 3) / &mag_down);
        Ok(Self {
            re,
            im,
            prec,
            err: up(&prop + &round),
        })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.recip()?))
    }

    /// Non-negative integer power by repeated multiplication.
    pub fn powi(&self, n: u32) -> Self {
        let mut acc = Self::one(self.prec);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Principal square root: argument in `(-π/2, π/2]`, so negative reals map
    /// to the positive imaginary axis.
    ///
    /// The propagated bound `err/sqrt(|z| - err)` holds for inputs whose error
    /// disc does not straddle the cut along the negative real axis.
    pub fn principal_sqrt(&self) -> Result<Self> {
        let prec = self.prec;
        let w = prec + GUARD_BITS;
        let mag = Float::with_val(w, self.re.hypot_ref(&self.im));
        let margin = Float::with_val_round(BOUND_PREC, &mag - &self.err, Round::Down).0;
        if margin <= 0 || mag.is_zero() {
            return Err(Error::PrecisionExhausted { bits: prec });
        }
        // sqrt((|z| + |x|)/2) is the larger component; the other follows from y/(2·that)
        let big = Float::with_val(w, self.re.abs_ref()) + &mag;
        let big = Float::with_val(w, big / 2u32).sqrt();
        let small = Float::with_val(w, &self.im / &big) / 2u32;
        let (re, im) = if self.re.is_sign_positive() || self.re.is_zero() {
            (big, small)
        } else if self.im.is_sign_negative() && !self.im.is_zero() {
            (small.abs(), -big)
        } else {
            (small.abs(), big)
        };
        let re = Float::with_val(prec, re);
        let im = Float::with_val(prec, im);
        let mut root_margin = margin;
        root_margin.sqrt_round(Round::Down);
        let prop = up(&self.err / &root_margin);
        let round = up(&up(re.hypot_ref(&im)) * &ulp(prec, 2));
        Ok(Self {
            re,
            im,
            prec,
            err: up(&prop + &round),
        })
    }

    /// `exp(z)`. The bound covers rounding and, for input error `e <= 1/2`,
    /// the propagated `|exp(z)|·2e`.
    pub fn exp(&self) -> Self {
        let prec = self.prec;
        let w = prec + GUARD_BITS;
        let scale = Float::with_val(w, self.re.exp_ref());
        let (s, c) = Float::with_val(w, &self.im).sin_cos(Float::new(w));
        let re = Float::with_val(prec, &scale * &c);
        let im = Float::with_val(prec, &scale * &s);
        let m = up(&scale);
        let mut err = up(&m * &ulp(prec, 2));
        if !self.err.is_zero() {
            let factor = up(&self.err * 2u32);
            err = up(&err + up(&m * &factor));
        }
        Self { re, im, prec, err }
    }

    /// Upper bound on `|self - other|` between the stored values.
    pub fn dist(&self, other: &Self) -> Float {
        let prec = self.prec.max(other.prec) + GUARD_BITS;
        let dr = Float::with_val(prec, &self.re - &other.re);
        let di = Float::with_val(prec, &self.im - &other.im);
        up(dr.hypot_ref(&di))
    }

    /// True when the exact values could coincide within `tol`.
    pub fn within(&self, other: &Self, tol: &Float) -> bool {
        let slack = up(&up(&self.err + &other.err) + tol);
        self.dist(other) <= slack
    }

    /// Decimal rendering of the real part with `digits` significant digits.
    pub fn re_decimal(&self, digits: usize) -> String {
        decimal(&self.re, digits)
    }

    pub fn im_decimal(&self, digits: usize) -> String {
        decimal(&self.im, digits)
    }
}

/// Decimal digits that faithfully render a `prec`-bit float.
pub fn decimal_digits(prec: u32) -> usize {
    (prec as f64 * std::f64::consts::LOG10_2).ceil() as usize + 1
}

/// Deterministic scientific-notation decimal string.
pub fn decimal(x: &Float, digits: usize) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    x.to_string_radix(10, Some(digits.max(2)))
}

/// `π` at `prec` bits.
pub fn pi(prec: u32) -> Float {
    Float::with_val(prec, Constant::Pi)
}

/// `(sin, cos)` of `2π·phase`, correctly rounded at `prec` bits for the
/// rational quarter-turns and to within one unit otherwise.
pub(crate) fn unit_sin_cos(phase: PhaseRational, prec: u32) -> (Float, Float) {
    let num = phase.num();
    let den = phase.den();
    // exact values on the quarter turns keep trivial sums exactly cancelling
    match (num, den) {
        (0, 1) => return (Float::new(prec), Float::with_val(prec, 1)),
        (1, 4) => return (Float::with_val(prec, 1), Float::new(prec)),
        (1, 2) => return (Float::new(prec), Float::with_val(prec, -1)),
        (3, 4) => return (Float::with_val(prec, -1), Float::new(prec)),
        _ => {}
    }
    // reduce to the nearest half turn so the argument stays in [-π, π]
    let signed = if 2 * num > den {
        num as i128 - den as i128
    } else {
        num as i128
    };
    let angle = Float::with_val(prec + 8, Constant::Pi) * 2u32 * Float::with_val(64, signed as i64);
    let angle = angle / den;
    let (s, c) = angle.sin_cos(Float::new(prec + 8));
    (Float::with_val(prec, s), Float::with_val(prec, c))
}

impl fmt::Display for ComplexHP {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(20);
        write!(
            f,
            "{} + {}i (±{})",
            decimal(&self.re, digits),
            decimal(&self.im, digits),
            decimal(&self.err, 3)
        )
    }
}
