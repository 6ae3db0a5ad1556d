use std::collections::btree_map::{BTreeMap, Entry};
use std::ops::{Add, AddAssign};

use num_integer::Integer;
use rug::Float;

use super::hp::{ulp, unit_sin_cos, up, GUARD_BITS, MIN_PRECISION};
use super::{ComplexHP, PhaseRational};
use crate::error::{Error, Result};

/// An exact finite sum `Σ c_j·exp(2πi·r_j)` with integer multiplicities.
///
/// Terms are keyed by canonical [`PhaseRational`], so merging two sums is
/// exact and independent of the order in which terms were produced. No zero
/// coefficient is ever stored. No relations between roots of unity are used,
/// so e.g. `1 + exp(πi)` stays a two-term sum that evaluates to zero.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CycloSum {
    terms: BTreeMap<PhaseRational, i64>,
}

impl CycloSum {
    pub fn new() -> Self {
        Self::default()
    }

    /// A single phase with multiplicity one.
    pub fn phase(p: PhaseRational) -> Self {
        let mut s = Self::new();
        s.add_term(p, 1);
        s
    }

    /// `Σ_k counts[k]·exp(2πi·k/den)`, the form produced by bucketing
    /// integer exponents modulo `den`.
    pub fn from_residue_counts(den: u64, counts: &[i64]) -> Self {
        assert_eq!(counts.len() as u64, den, "one count per residue");
        let mut s = Self::new();
        for (k, &c) in counts.iter().enumerate() {
            s.add_term(PhaseRational::from_residue(k as u64, den), c);
        }
        s
    }

    pub fn add_term(&mut self, p: PhaseRational, coeff: i64) {
        if coeff == 0 {
            return;
        }
        match self.terms.entry(p) {
            Entry::Vacant(v) => {
                v.insert(coeff);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if *o.get() == 0 {
                    o.remove();
                }
            }
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, p: &PhaseRational) -> i64 {
        self.terms.get(p).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&PhaseRational, &i64)> {
        self.terms.iter()
    }

    /// Least common multiple of the denominators; 1 for the empty sum.
    pub fn order(&self) -> u64 {
        self.terms.keys().fold(1, |acc, p| acc.lcm(&p.den()))
    }

    pub fn total_abs_coeff(&self) -> u64 {
        self.terms.values().map(|c| c.unsigned_abs()).sum()
    }

    /// Complex conjugate: every phase negated.
    pub fn conj(&self) -> Self {
        let mut s = Self::new();
        for (p, &c) in &self.terms {
            s.add_term(-*p, c);
        }
        s
    }

    /// Multiply every phase by `exp(2πi·shift)`.
    pub fn rotate(&self, shift: PhaseRational) -> Self {
        let mut s = Self::new();
        for (p, &c) in &self.terms {
            s.add_term(*p + shift, c);
        }
        s
    }

    pub fn scale(&self, k: i64) -> Self {
        let mut s = Self::new();
        for (p, &c) in &self.terms {
            s.add_term(*p, c * k);
        }
        s
    }

    /// Exact product: phases add, multiplicities multiply.
    pub fn mul(&self, other: &Self) -> Self {
        let mut s = Self::new();
        for (a, &ca) in &self.terms {
            for (b, &cb) in &other.terms {
                s.add_term(*a + *b, ca * cb);
            }
        }
        s
    }

    /// Evaluate at `precision_bits`.
    ///
    /// The returned bound is `terms · Σ|c| · 2^(3 - precision_bits)`. Terms
    /// are evaluated and summed with guard bits before one final rounding.
    pub fn eval(&self, precision_bits: u32) -> Result<ComplexHP> {
        if precision_bits < MIN_PRECISION {
            return Err(Error::PrecisionTooLow {
                bits: precision_bits,
                min: MIN_PRECISION,
            });
        }
        let w = precision_bits + GUARD_BITS + bits_for(self.total_abs_coeff());
        let mut re = Float::new(w);
        let mut im = Float::new(w);
        for (p, &c) in &self.terms {
            let (s, co) = unit_sin_cos(*p, w);
            re += co * c;
            im += s * c;
        }
        let n = Float::with_val(64, self.len() as u64);
        let total = Float::with_val(64, self.total_abs_coeff());
        let err = up(&up(&n * &total) * &ulp(precision_bits, 3));
        Ok(ComplexHP::from_parts(
            Float::with_val(precision_bits, re),
            Float::with_val(precision_bits, im),
            precision_bits,
            err,
        ))
    }
}

/// `cyclosum_eval(s, bits)`.
pub fn cyclosum_eval(s: &CycloSum, precision_bits: u32) -> Result<ComplexHP> {
    s.eval(precision_bits)
}

fn bits_for(n: u64) -> u32 {
    64 - n.leading_zeros()
}

impl AddAssign<&CycloSum> for CycloSum {
    fn add_assign(&mut self, rhs: &CycloSum) {
        for (p, &c) in &rhs.terms {
            self.add_term(*p, c);
        }
    }
}

impl Add for &CycloSum {
    type Output = CycloSum;

    fn add(self, rhs: &CycloSum) -> CycloSum {
        let mut s = self.clone();
        s += rhs;
        s
    }
}

impl FromIterator<(PhaseRational, i64)> for CycloSum {
    fn from_iter<I: IntoIterator<Item = (PhaseRational, i64)>>(iter: I) -> Self {
        let mut s = Self::new();
        for (p, c) in iter {
            s.add_term(p, c);
        }
        s
    }
}
