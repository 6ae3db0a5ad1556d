//! Quadratic Gauss sums, their closed forms, and quadratic reciprocity.
//!
//! The Landsberg-Schaar identity, for positive integers `p` and `q`:
//!
//! ```text
//!   (1/√p) Σ_{n<p} exp(2πi n²q/p)  =  (exp(iπ/4)/√(2q)) Σ_{n<2q} exp(-πi n²p/(2q))
//! ```

use num_integer::Integer;
use rug::Float;

use crate::error::{domain, Error, Result};
use crate::phasecalc::{ulp, ComplexHP, CycloSum, PhaseRational, GUARD_BITS};
use crate::report::{params, VerificationReport};

/// Sign of the exponent in a Gauss sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

/// `Σ_{n=0}^{count-1} exp(±2πi·coeff·(n - shift)²/modulus)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GaussSumSpec {
    pub coeff: i64,
    pub modulus: u64,
    pub shift: i64,
    pub sign: Sign,
    pub count: u64,
}

impl GaussSumSpec {
    pub fn new(coeff: i64, modulus: u64, shift: i64, sign: Sign, count: u64) -> Result<Self> {
        if modulus == 0 {
            return domain("Gauss sum modulus must be at least 1");
        }
        if count == 0 {
            return domain("Gauss sum needs at least one summand");
        }
        Ok(Self {
            coeff,
            modulus,
            shift,
            sign,
            count,
        })
    }

    /// The same sum with `coeff/modulus` in lowest terms. Each summand is
    /// unchanged, so this is always value-preserving; the summation range is
    /// never touched.
    pub fn reduced(&self) -> Self {
        let g = (self.coeff.unsigned_abs()).gcd(&self.modulus).max(1);
        Self {
            coeff: self.coeff / g as i64,
            modulus: self.modulus / g,
            ..*self
        }
    }

    pub fn sum(&self) -> CycloSum {
        let m = self.modulus as i128;
        let mut counts = vec![0i64; self.modulus as usize];
        let c = self.coeff as i128;
        for n in 0..self.count as i128 {
            let d = n - self.shift as i128;
            let e = (c * (d * d).rem_euclid(m)).rem_euclid(m);
            let e = match self.sign {
                Sign::Plus => e,
                Sign::Minus => (m - e) % m,
            };
            counts[e as usize] += 1;
        }
        CycloSum::from_residue_counts(self.modulus, &counts)
    }
}

/// `Σ_{n=0}^{p-1} exp(2πi·n²q/p)`.
pub fn quad_gauss_sum(q: u64, p: u64) -> CycloSum {
    assert!(p >= 1 && q >= 1);
    GaussSumSpec::new(q as i64, p, 0, Sign::Plus, p)
        .expect("valid spec")
        .sum()
}

/// `Σ_{n=0}^{2q-1} exp(-πi·n²p/(2q))`.
pub fn dual_gauss_sum(q: u64, p: u64) -> CycloSum {
    assert!(p >= 1 && q >= 1);
    GaussSumSpec::new(p as i64, 4 * q, 0, Sign::Minus, 2 * q)
        .expect("valid spec")
        .sum()
}

/// `Σ_{n=0}^{2r-1} exp(2πi·(n-s)²/(4r))`, equal to `√(2ri)` for every `s`.
pub fn appendix_sum_plus(r: u64, s: i64) -> CycloSum {
    assert!(r >= 1);
    GaussSumSpec::new(1, 4 * r, s, Sign::Plus, 2 * r)
        .expect("valid spec")
        .sum()
}

/// `Σ_{k=0}^{2r-1} exp(-2πi·(k-s)²/(4r))`, equal to `√(2r/i)` for every `s`.
pub fn appendix_sum_minus(r: u64, s: i64) -> CycloSum {
    assert!(r >= 1);
    GaussSumSpec::new(1, 4 * r, s, Sign::Minus, 2 * r)
        .expect("valid spec")
        .sum()
}

/// `√(2r)·exp(±iπ/4)`.
pub fn appendix_closed_form(r: u64, sign: Sign, prec: u32) -> ComplexHP {
    let eighth = match sign {
        Sign::Plus => PhaseRational::new(1, 8),
        Sign::Minus => PhaseRational::new(-1, 8),
    };
    ComplexHP::from_phase(eighth, prec).mul(&real_sqrt(2 * r, prec))
}

/// `√n` as an error-tracked real.
pub fn real_sqrt(n: u64, prec: u32) -> ComplexHP {
    let root = Float::with_val(prec + GUARD_BITS, n).sqrt();
    ComplexHP::from_real(root, prec, Float::new(64))
}

/// `1/√n` as an error-tracked real.
pub fn real_inv_sqrt(n: u64, prec: u32) -> ComplexHP {
    let root = Float::with_val(prec + GUARD_BITS, n).recip_sqrt();
    ComplexHP::from_real(root, prec, Float::new(64))
}

/// `2^(8 - precision_bits) · terms`.
pub fn default_tolerance(precision_bits: u32, terms: u64) -> Float {
    Float::with_val(64, terms) * ulp(precision_bits, 8)
}

/// Both sides of the Landsberg-Schaar identity, each evaluated from its own
/// exact sum. The tolerance defaults to `2^(8 - bits)·(p + 2q)`.
pub fn verify_landsberg_schaar(q: u64, p: u64, precision_bits: u32) -> Result<VerificationReport> {
    verify_landsberg_schaar_with(q, p, precision_bits, None)
}

pub fn verify_landsberg_schaar_with(
    q: u64,
    p: u64,
    precision_bits: u32,
    tolerance: Option<Float>,
) -> Result<VerificationReport> {
    if p == 0 || q == 0 {
        return domain("Landsberg-Schaar needs positive p and q");
    }
    let prec = precision_bits;
    let quad = quad_gauss_sum(q, p);
    let dual = dual_gauss_sum(q, p);
    let lhs = quad.eval(prec)?.mul(&real_inv_sqrt(p, prec));
    let rhs = ComplexHP::from_phase(PhaseRational::new(1, 8), prec)
        .mul(&dual.eval(prec)?)
        .mul(&real_inv_sqrt(2 * q, prec));
    let m = p.gcd(&q);
    let tolerance = tolerance.unwrap_or_else(|| default_tolerance(prec, p + 2 * q));
    let ps = params([
        ("p", p),
        ("q", q),
        ("m", m),
        ("p_reduced", p / m),
        ("q_reduced", q / m),
    ]);
    Ok(VerificationReport::compare(ps, lhs, rhs, tolerance).with_exact(quad, dual))
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

const TRIAL_LIMIT: u64 = 1_000_000;

/// Deterministic primality: trial division below 10⁶, Miller-Rabin with a
/// witness set that is exact for all 64-bit integers above that.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < TRIAL_LIMIT {
        let mut d = 2u64;
        while d * d <= n {
            if n.is_multiple_of(d) {
                return false;
            }
            d += 1;
        }
        return true;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn require_odd_prime(p: u64) -> Result<()> {
    if p == 2 || !is_prime(p) {
        return Err(Error::Domain(format!("{p} is not an odd prime")));
    }
    Ok(())
}

/// Legendre symbol `(a|p)` by Euler's criterion `a^((p-1)/2) mod p`.
pub fn legendre_symbol(a: i64, p: u64) -> Result<i8> {
    require_odd_prime(p)?;
    let residue = a.rem_euclid(p as i64) as u64;
    if residue == 0 {
        return Ok(0);
    }
    Ok(match pow_mod(residue, (p - 1) / 2, p) {
        1 => 1,
        x if x == p - 1 => -1,
        x => unreachable!("Euler criterion gave {x} mod prime {p}"),
    })
}

/// `(p|q)(q|p) = (-1)^(((p-1)/2)((q-1)/2))`, checked in exact integers.
pub fn verify_reciprocity(p: u64, q: u64) -> Result<VerificationReport> {
    require_odd_prime(p)?;
    require_odd_prime(q)?;
    if p == q {
        return domain(format!("reciprocity needs distinct primes, got {p} twice"));
    }
    let product = legendre_symbol(p as i64, q)? as i64 * legendre_symbol(q as i64, p)? as i64;
    let sign = if ((p - 1) / 2 * ((q - 1) / 2)).is_multiple_of(2) {
        1
    } else {
        -1
    };
    let ps = params([("p", p), ("q", q)]);
    Ok(VerificationReport::compare(
        ps,
        ComplexHP::from_i64(product, 0, 64),
        ComplexHP::from_i64(sign, 0, 64),
        Float::new(64),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{PI, TAU};

    const P: u32 = 256;

    /// Independent f64 summation oracle.
    fn direct(count: u64, f: impl Fn(f64) -> f64) -> (f64, f64) {
        (0..count).fold((0.0, 0.0), |(re, im), n| {
            let a = f(n as f64);
            (re + a.cos(), im + a.sin())
        })
    }

    fn close(v: &ComplexHP, (re, im): (f64, f64)) -> bool {
        (v.re_f64() - re).abs() < 1e-12 && (v.im_f64() - im).abs() < 1e-12
    }

    fn tiny() -> Float {
        Float::with_val(64, Float::i_exp(1, -230))
    }

    #[test]
    fn quad_examples() {
        let v = quad_gauss_sum(1, 3).eval(P).unwrap();
        assert!(close(&v, (0.0, 3f64.sqrt())));
        assert!(close(&v, direct(3, |n| TAU * n * n / 3.0)));
        assert_eq!(quad_gauss_sum(1, 1), CycloSum::phase(PhaseRational::ZERO));
        let v = quad_gauss_sum(1, 4).eval(P).unwrap();
        assert!(v.within(&ComplexHP::from_i64(2, 2, P), &tiny()));
    }

    #[test]
    fn dual_examples() {
        let v = dual_gauss_sum(1, 3).eval(P).unwrap();
        assert!(v.within(&ComplexHP::from_i64(1, 1, P), &tiny()));
        assert!(close(&v, direct(2, |n| -PI * n * n * 3.0 / 2.0)));
        let v = dual_gauss_sum(1, 1).eval(P).unwrap();
        assert!(v.within(&ComplexHP::from_i64(1, -1, P), &tiny()));
        let v = dual_gauss_sum(1, 2).eval(P).unwrap();
        assert!(v.within(&ComplexHP::zero(P), &tiny()));
    }

    #[test]
    fn landsberg_schaar_examples() {
        let r = verify_landsberg_schaar(1, 3, P).unwrap();
        assert!(r.pass);
        assert!(r.lhs.within(&ComplexHP::from_i64(0, 1, P), &tiny()));
        assert!(r.rhs.within(&ComplexHP::from_i64(0, 1, P), &tiny()));

        let r = verify_landsberg_schaar(1, 1, P).unwrap();
        assert!(r.pass);
        assert!(r.rhs.within(&ComplexHP::one(P), &tiny()));

        let r = verify_landsberg_schaar(1, 2, P).unwrap();
        assert!(r.pass);
        assert!(r.lhs.within(&ComplexHP::zero(P), &tiny()));
        assert!(r.rhs.within(&ComplexHP::zero(P), &tiny()));
        assert_eq!(r.param("m"), Some("1"));
    }

    #[test]
    fn landsberg_schaar_small_grid() {
        for p in 1..=12 {
            for q in 1..=12 {
                let r = verify_landsberg_schaar(q, p, 128).unwrap();
                assert!(r.pass, "p={p} q={q} diff={}", r.abs_diff);
            }
        }
    }

    #[test]
    fn general_case_reduction() {
        for (p, q) in [(6u64, 4u64), (9, 6), (10, 15), (12, 8), (20, 30)] {
            let r = verify_landsberg_schaar(q, p, P).unwrap();
            let m = p.gcd(&q);
            assert_eq!(r.param("p_reduced").unwrap(), (p / m).to_string());
            let reduced = verify_landsberg_schaar(q / m, p / m, P).unwrap();
            assert!(!reduced.pass || r.pass);
            assert!(r.pass);
        }
    }

    #[test]
    fn tolerance_override_is_respected() {
        let r = verify_landsberg_schaar_with(2, 3, P, Some(Float::new(64))).unwrap();
        assert_eq!(r.tolerance, 0);
        assert_eq!(r.pass, r.abs_diff <= 0);
        let r = verify_landsberg_schaar(2, 3, 64).unwrap();
        assert_eq!(r.tolerance, default_tolerance(64, 7));
    }

    #[test]
    fn appendix_examples() {
        let one_plus_i = ComplexHP::from_i64(1, 1, P);
        let one_minus_i = ComplexHP::from_i64(1, -1, P);
        assert!(appendix_sum_plus(1, 0)
            .eval(P)
            .unwrap()
            .within(&one_plus_i, &tiny()));
        assert!(appendix_sum_plus(1, 5)
            .eval(P)
            .unwrap()
            .within(&one_plus_i, &tiny()));
        let v = appendix_sum_plus(2, 0).eval(P).unwrap();
        assert!(close(&v, direct(4, |n| TAU * n * n / 8.0)));
        assert!(v.within(&appendix_closed_form(2, Sign::Plus, P), &tiny()));

        assert!(appendix_sum_minus(1, 0)
            .eval(P)
            .unwrap()
            .within(&one_minus_i, &tiny()));
        assert!(appendix_sum_minus(1, 2)
            .eval(P)
            .unwrap()
            .within(&one_minus_i, &tiny()));
        let v = appendix_sum_minus(3, 1).eval(P).unwrap();
        assert!(close(
            &v,
            direct(6, |k| -TAU * (k - 1.0) * (k - 1.0) / 12.0)
        ));
        assert!(v.within(&appendix_closed_form(3, Sign::Minus, P), &tiny()));
    }

    #[test]
    fn appendix_shift_invariance_and_conjugation() {
        for r in 1..=40u64 {
            let base = appendix_sum_plus(r, 0);
            for s in -3 * r as i64..=3 * r as i64 {
                let shifted = appendix_sum_plus(r, s);
                // (n - s) runs over a complete residue system mod 2r, and
                // (x + 2r)² ≡ x² mod 4r, so the multiset of phases is unchanged
                assert_eq!(shifted, base, "r={r} s={s}");
                assert_eq!(appendix_sum_minus(r, s), shifted.conj());
            }
        }
    }

    #[test]
    fn gauss_magnitude_law() {
        for m in 1..=500u64 {
            let v = quad_gauss_sum(1, m).eval(128).unwrap();
            let expected = match m % 4 {
                2 => 0.0,
                0 => (2.0 * m as f64).sqrt(),
                _ => (m as f64).sqrt(),
            };
            let got = v.abs().to_f64();
            assert!((got - expected).abs() < 1e-9, "m={m}: {got} vs {expected}");
        }
    }

    #[test]
    fn spec_reduction_preserves_value() {
        let spec = GaussSumSpec::new(6, 20, 3, Sign::Plus, 7).unwrap();
        let red = spec.reduced();
        assert_eq!((red.coeff, red.modulus, red.count), (3, 10, 7));
        assert_eq!(red.sum(), spec.sum());
        assert!(GaussSumSpec::new(1, 0, 0, Sign::Plus, 1).is_err());
        assert!(GaussSumSpec::new(1, 3, 0, Sign::Plus, 0).is_err());
    }

    #[test]
    fn legendre_examples() {
        assert_eq!(legendre_symbol(2, 7).unwrap(), 1);
        assert_eq!(legendre_symbol(3, 5).unwrap(), -1);
        assert_eq!(legendre_symbol(10, 5).unwrap(), 0);
        assert_eq!(legendre_symbol(-1, 7).unwrap(), -1);
        assert_eq!(legendre_symbol(-1, 13).unwrap(), 1);
        assert!(matches!(legendre_symbol(1, 9), Err(Error::Domain(_))));
        assert!(matches!(legendre_symbol(1, 2), Err(Error::Domain(_))));
    }

    #[test]
    fn legendre_matches_square_enumeration() {
        for p in (3..200u64).filter(|&p| is_prime(p)) {
            let squares: std::collections::HashSet<u64> = (1..p).map(|x| x * x % p).collect();
            for a in 0..p {
                let expected = if a == 0 {
                    0
                } else if squares.contains(&a) {
                    1
                } else {
                    -1
                };
                assert_eq!(legendre_symbol(a as i64, p).unwrap(), expected);
            }
        }
    }

    #[test]
    fn reciprocity_examples() {
        for (p, q) in [(3, 5), (3, 7), (5, 13)] {
            assert!(verify_reciprocity(p, q).unwrap().pass);
        }
        let r = verify_reciprocity(3, 7).unwrap();
        assert_eq!(r.lhs.re_f64(), -1.0);
        assert!(verify_reciprocity(3, 3).is_err());
        assert!(verify_reciprocity(3, 9).is_err());
        assert!(verify_reciprocity(2, 3).is_err());
    }

    #[test]
    fn primality() {
        let small: Vec<u64> = (0..30).filter(|&n| is_prime(n)).collect();
        assert_eq!(small, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert!(is_prime(1_000_003));
        assert!(!is_prime(1_000_001)); // 101 · 9901
        assert!(!is_prime(3_215_031_751)); // strong pseudoprime to bases 2, 3, 5, 7
        assert!(is_prime(18_446_744_073_709_551_557));
    }
}
