use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_integer::Integer;

/// A rational number of turns, `num/den` reduced modulo 1, standing for the
/// unit phase `exp(2πi·num/den)`.
///
/// The representation is canonical: `0 <= num < den` and `gcd(num, den) = 1`,
/// so two values compare equal exactly when the phases they denote are equal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PhaseRational {
    num: u64,
    den: u64,
}

impl PhaseRational {
    /// The trivial phase `exp(0) = 1`.
    pub const ZERO: Self = Self { num: 0, den: 1 };

    /// Reduce `num/den` modulo 1. Panics if `den == 0`.
    pub fn new(num: i128, den: u64) -> Self {
        assert!(den > 0, "phase denominator must be positive");
        let residue = num.rem_euclid(den as i128) as u64;
        let g = residue.gcd(&den);
        Self {
            num: residue / g,
            den: den / g,
        }
    }

    /// Phase of `n/den` for a value already reduced into `0..den`.
    pub(crate) fn from_residue(residue: u64, den: u64) -> Self {
        debug_assert!(residue < den);
        let g = residue.gcd(&den);
        Self {
            num: residue / g,
            den: den / g,
        }
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    /// Multiply the angle by an integer, i.e. raise the phase to a power.
    pub fn scale(self, k: i64) -> Self {
        Self::new(self.num as i128 * k as i128, self.den)
    }
}

impl Default for PhaseRational {
    fn default() -> Self {
        Self::ZERO
    }
}

/// Sum of two phases modulo 1: the angle of the product of the unit complex
/// numbers they represent.
pub fn phase_add(a: PhaseRational, b: PhaseRational) -> PhaseRational {
    let den = a.den.lcm(&b.den);
    let num = a.num as u128 * (den / a.den) as u128 + b.num as u128 * (den / b.den) as u128;
    PhaseRational::from_residue((num % den as u128) as u64, den)
}

impl Add for PhaseRational {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        phase_add(self, rhs)
    }
}

impl Neg for PhaseRational {
    type Output = Self;

    fn neg(self) -> Self {
        if self.num == 0 {
            self
        } else {
            Self {
                num: self.den - self.num,
                den: self.den,
            }
        }
    }
}

impl Sub for PhaseRational {
    type Output = Self;

    fn sub(self, rhs: Self) -> Self {
        phase_add(self, -rhs)
    }
}

impl fmt::Display for PhaseRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ph(n: i128, d: u64) -> PhaseRational {
        PhaseRational::new(n, d)
    }

    #[test]
    fn add_examples() {
        assert_eq!(phase_add(ph(1, 4), ph(1, 4)), ph(1, 2));
        assert_eq!(phase_add(ph(3, 4), ph(1, 2)), ph(1, 4));
        assert_eq!(phase_add(ph(0, 1), ph(5, 7)), ph(5, 7));
    }

    #[test]
    fn canonical_form() {
        let p = ph(-3, 12);
        assert_eq!((p.num(), p.den()), (3, 4));
        assert_eq!(ph(8, 4), PhaseRational::ZERO);
        assert_eq!(ph(0, 9).den(), 1);
        assert_eq!(ph(5, 3).to_string(), "2/3");
    }

    #[test]
    fn negation_and_scale() {
        assert_eq!(-ph(1, 3), ph(2, 3));
        assert_eq!(-PhaseRational::ZERO, PhaseRational::ZERO);
        assert_eq!(ph(1, 8).scale(4), ph(1, 2));
        assert_eq!(ph(1, 8).scale(-1), ph(7, 8));
    }

    fn arb_phase() -> impl Strategy<Value = PhaseRational> {
        (any::<i64>(), 1u64..100_000).prop_map(|(n, d)| ph(n as i128, d))
    }

    proptest! {
        #[test]
        fn group_laws(a in arb_phase(), b in arb_phase(), c in arb_phase()) {
            prop_assert_eq!(phase_add(a, b), phase_add(b, a));
            prop_assert_eq!(phase_add(phase_add(a, b), c), phase_add(a, phase_add(b, c)));
            prop_assert_eq!(phase_add(a, PhaseRational::ZERO), a);
            let inverse = ph((a.den() - a.num()) as i128, a.den());
            prop_assert_eq!(phase_add(a, inverse), PhaseRational::ZERO);
        }

        #[test]
        fn always_reduced(n in any::<i64>(), d in 1u64..1_000_000) {
            let p = ph(n as i128, d);
            prop_assert!(p.num() < p.den());
            prop_assert_eq!(p.num().gcd(&p.den()), 1);
        }
    }
}
