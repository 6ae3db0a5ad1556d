use rug::Float;

use crate::error::{domain, Result};
use crate::gauss::real_inv_sqrt;
use crate::phasecalc::{ComplexHP, CycloSum, PhaseRational, GUARD_BITS};

/// Representation in which a [`StateVector`]'s coefficients are expressed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Basis {
    /// Amplitudes `a_k` on the angular-momentum eigenvectors `f_k`.
    Momentum,
    /// Values `f(j)` on the angle grid `j = 0..N-1`, i.e. amplitudes on `b_j`.
    Position,
}

/// A vector of `C^N`. Indices are read modulo `N`, so `a_k = a_{k+N}`.
#[derive(Debug, Clone)]
pub struct StateVector {
    coefficients: Vec<ComplexHP>,
    basis: Basis,
}

impl StateVector {
    pub fn new(coefficients: Vec<ComplexHP>, basis: Basis) -> Self {
        assert!(!coefficients.is_empty());
        Self {
            coefficients,
            basis,
        }
    }

    pub fn dim(&self) -> usize {
        self.coefficients.len()
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn coefficients(&self) -> &[ComplexHP] {
        &self.coefficients
    }

    pub fn coefficient(&self, index: i64) -> &ComplexHP {
        let n = self.dim() as i64;
        &self.coefficients[index.rem_euclid(n) as usize]
    }

    /// `⟨self|other⟩ = Σ_j conj(self_j)·other_j`.
    pub fn inner(&self, other: &Self) -> Result<ComplexHP> {
        if self.basis != other.basis || self.dim() != other.dim() {
            return domain("inner product needs vectors of equal dimension in the same basis");
        }
        let prec = self.coefficients[0].precision_bits();
        Ok(self
            .coefficients
            .iter()
            .zip(&other.coefficients)
            .fold(ComplexHP::zero(prec), |acc, (a, b)| {
                acc.add(&a.conj().mul(b))
            }))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.basis != other.basis || self.dim() != other.dim() {
            return domain("cannot add vectors of different shape or basis");
        }
        Ok(Self::new(
            self.coefficients
                .iter()
                .zip(&other.coefficients)
                .map(|(a, b)| a.add(b))
                .collect(),
            self.basis,
        ))
    }

    /// Amplitudes `a_k = ⟨f_k|v⟩` of a grid-sampled vector.
    pub fn to_momentum(&self) -> Result<Self> {
        if self.basis != Basis::Position {
            return domain("to_momentum expects a position-representation vector");
        }
        let n = self.dim() as u64;
        let prec = self.coefficients[0].precision_bits();
        let coefficients = (0..n)
            .map(|k| {
                (0..n).fold(ComplexHP::zero(prec), |acc, j| {
                    acc.add(
                        &overlap(n, j, k, prec)
                            .conj()
                            .mul(&self.coefficients[j as usize]),
                    )
                })
            })
            .collect();
        Ok(Self::new(coefficients, Basis::Momentum))
    }
}

/// `⟨r|k⟩ = exp(2πi·k·r/N)/√N`.
pub fn overlap(n: u64, r: u64, k: u64, prec: u32) -> ComplexHP {
    let phase = PhaseRational::new(k as i128 * r as i128, n);
    ComplexHP::from_phase(phase, prec).mul(&real_inv_sqrt(n, prec))
}

/// `f_k(θ) = exp(2πi·k·θ/N)/√N` for `k = 0..N-1`, sampled on the grid.
pub fn momentum_basis(n: u64, prec: u32) -> Vec<StateVector> {
    (0..n)
        .map(|k| {
            let samples = (0..n).map(|j| overlap(n, j, k, prec)).collect();
            StateVector::new(samples, Basis::Position)
        })
        .collect()
}

/// `b_r(θ) = (1/N) Σ_k exp(2πi(θ - r)k/N)` for `r = 0..N-1`, sampled on the
/// grid from the defining sum (which collapses to the indicator of `r`).
pub fn position_basis(n: u64, prec: u32) -> Vec<StateVector> {
    let inv_n = Float::with_val(prec + GUARD_BITS, n).recip();
    let inv_n = ComplexHP::from_real(inv_n, prec, Float::new(64));
    (0..n)
        .map(|r| {
            let samples = (0..n)
                .map(|j| {
                    let sum: CycloSum = (0..n)
                        .map(|k| {
                            (
                                PhaseRational::new((j as i128 - r as i128) * k as i128, n),
                                1,
                            )
                        })
                        .collect();
                    sum.eval(prec)
                        .expect("precision checked by caller")
                        .mul(&inv_n)
                })
                .collect();
            StateVector::new(samples, Basis::Position)
        })
        .collect()
}

/// Apply the exponentiated position operator, `b_r ↦ exp(2πi·r/N)·b_r`.
pub fn position_op_apply(v: &StateVector) -> Result<StateVector> {
    if v.basis != Basis::Position {
        return domain("position operator acts on position-representation vectors");
    }
    let n = v.dim() as u64;
    let prec = v.coefficients[0].precision_bits();
    Ok(StateVector::new(
        v.coefficients
            .iter()
            .enumerate()
            .map(|(r, c)| ComplexHP::from_phase(PhaseRational::new(r as i128, n), prec).mul(c))
            .collect(),
        Basis::Position,
    ))
}
