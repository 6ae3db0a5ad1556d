use rug::{Assign, Float};

use super::{Basis, TorusSystem};
use crate::error::{domain, Result};
use crate::phasecalc::{ulp, up, ComplexHP, CycloSum, PhaseRational, GUARD_BITS};

/// An `N×N` matrix of evolution amplitudes `⟨r| exp(-iH·steps·Δt) |s⟩`.
#[derive(Debug, Clone)]
pub struct KernelMatrix {
    dim: usize,
    entries: Vec<ComplexHP>,
    basis: Basis,
    steps: u64,
}

impl KernelMatrix {
    pub fn new(dim: usize, entries: Vec<ComplexHP>, basis: Basis, steps: u64) -> Self {
        assert_eq!(entries.len(), dim * dim);
        Self {
            dim,
            entries,
            basis,
            steps,
        }
    }

    pub fn identity(dim: usize, basis: Basis, prec: u32) -> Self {
        let entries = (0..dim * dim)
            .map(|i| ComplexHP::from_i64((i / dim == i % dim) as i64, 0, prec))
            .collect();
        Self::new(dim, entries, basis, 0)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }

    pub fn get(&self, row: usize, col: usize) -> &ComplexHP {
        &self.entries[row * self.dim + col]
    }

    pub fn entries(&self) -> &[ComplexHP] {
        &self.entries
    }

    fn precision(&self) -> u32 {
        self.entries[0].precision_bits()
    }

    fn max_abs(&self) -> Float {
        self.entries
            .iter()
            .map(ComplexHP::abs_upper)
            .fold(Float::new(64), |a, b| if b > a { b } else { a })
    }

    fn max_err(&self) -> Float {
        self.entries
            .iter()
            .map(|e| e.err_bound().clone())
            .fold(Float::new(64), |a, b| if b > a { b } else { a })
    }

    /// Matrix product. Every entry of the result carries the uniform bound
    /// `N·(|A|·e_B + |B|·e_A + e_A·e_B) + N·|A|·|B|·2^(3-p)`, where `|·|` and
    /// `e` are the largest entry modulus and error of each factor.
    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let prec = self.precision().min(other.precision());
        let w = prec + GUARD_BITS + 8;
        let (am, bm) = (self.max_abs(), other.max_abs());
        let (ae, be) = (self.max_err(), other.max_err());
        let per_term = up(&up(&am * &be) + &up(&bm * &ae));
        let per_term = up(&per_term + &up(&ae * &be));
        let round = up(&up(&am * &bm) * &ulp(prec, 3));
        let err = up(&up(&per_term + &round) * n as u64);

        let mut entries = Vec::with_capacity(n * n);
        let mut t = Float::new(w);
        for i in 0..n {
            for j in 0..n {
                let mut re = Float::new(w);
                let mut im = Float::new(w);
                for k in 0..n {
                    let a = self.get(i, k);
                    let b = other.get(k, j);
                    t.assign(a.re() * b.re());
                    re += &t;
                    t.assign(a.im() * b.im());
                    re -= &t;
                    t.assign(a.re() * b.im());
                    im += &t;
                    t.assign(a.im() * b.re());
                    im += &t;
                }
                entries.push(ComplexHP::from_parts(re, im, prec, err.clone()));
            }
        }
        Self::new(n, entries, self.basis, self.steps + other.steps)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let entries = (0..n * n).map(|i| self.get(i % n, i / n).conj()).collect();
        Self::new(n, entries, self.basis, self.steps)
    }

    pub fn trace(&self) -> ComplexHP {
        (1..self.dim).fold(self.get(0, 0).clone(), |acc, i| acc.add(self.get(i, i)))
    }

    /// Largest entrywise distance between the stored values.
    pub fn max_dist(&self, other: &Self) -> Float {
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.dist(b))
            .fold(Float::new(64), |a, b| if b > a { b } else { a })
    }

    /// `max |(U·U†)_{ij} - δ_ij|`.
    pub fn unitarity_defect(&self) -> Float {
        let prod = self.matmul(&self.adjoint());
        prod.max_dist(&Self::identity(self.dim, self.basis, self.precision()))
    }
}

/// Exact phase of the closed-form single-step entry, `(s - s')²/(2N)` turns.
pub fn single_step_phase(n: u64, row: u64, col: u64) -> PhaseRational {
    let d = row as i128 - col as i128;
    PhaseRational::new(d * d, 2 * n)
}

/// `1/√(iN)`, principal branch.
pub(crate) fn inv_sqrt_i_n(n: u64, prec: u32) -> Result<ComplexHP> {
    ComplexHP::from_i64(0, n as i64, prec)
        .principal_sqrt()?
        .recip()
}

/// Single-step kernel `(1/√(iN))·exp(2πi(s - s')²/(2N))` for even `N`.
pub fn single_step_kernel_for_dim(n: u64, prec: u32) -> Result<KernelMatrix> {
    if n == 0 || !n.is_multiple_of(2) {
        return domain(format!(
            "single-step closed form needs an even number of states, got N = {n}"
        ));
    }
    let norm = inv_sqrt_i_n(n, prec)?;
    let entries = (0..n * n)
        .map(|i| ComplexHP::from_phase(single_step_phase(n, i / n, i % n), prec).mul(&norm))
        .collect();
    Ok(KernelMatrix::new(n as usize, entries, Basis::Position, 1))
}

pub fn single_step_kernel(sys: &TorusSystem, prec: u32) -> Result<KernelMatrix> {
    single_step_kernel_for_dim(sys.dim(), prec)
}

/// Spectral kernel `Σ_k ⟨r|k⟩⟨k|s⟩ exp(-iπk²·steps/N)` from exact sums.
pub fn spectral_kernel(n: u64, steps: u64, prec: u32) -> Result<KernelMatrix> {
    let inv_n = ComplexHP::from_real(
        Float::with_val(prec + GUARD_BITS, n).recip(),
        prec,
        Float::new(64),
    );
    // entries depend on (r - s) mod N only
    let by_diff: Vec<ComplexHP> = (0..n)
        .map(|d| {
            let sum: CycloSum = (0..n as i128)
                .map(|k| {
                    let turns = 2 * k * d as i128 - k * k * steps as i128;
                    (PhaseRational::new(turns, 2 * n), 1)
                })
                .collect();
            Ok(sum.eval(prec)?.mul(&inv_n))
        })
        .collect::<Result<_>>()?;
    let entries = (0..n * n)
        .map(|i| {
            let d = (i / n + n - i % n) % n;
            by_diff[d as usize].clone()
        })
        .collect();
    Ok(KernelMatrix::new(
        n as usize,
        entries,
        Basis::Position,
        steps,
    ))
}

/// Single-step kernel computed spectrally.
pub fn spectral_single_step(n: u64, prec: u32) -> Result<KernelMatrix> {
    spectral_kernel(n, 1, prec)
}

/// `(single-step kernel)^p` by `p` successive multiplications.
pub fn evolve_by_power(sys: &TorusSystem, prec: u32) -> Result<KernelMatrix> {
    let step = single_step_kernel(sys, prec)?;
    let mut acc = step.clone();
    for _ in 1..sys.p() {
        acc = acc.matmul(&step);
    }
    Ok(acc)
}

/// Unnormalized `p`-th power of the single-step phase matrix, computed in
/// exact arithmetic. Entry `(r, s)` is the exact path sum from `r` to `s`.
pub fn exact_power_phases(sys: &TorusSystem) -> Vec<CycloSum> {
    let n = sys.dim();
    let step: Vec<CycloSum> = (0..n * n)
        .map(|i| CycloSum::phase(single_step_phase(n, i / n, i % n)))
        .collect();
    let mut acc = step.clone();
    for _ in 1..sys.p() {
        let mut next = Vec::with_capacity((n * n) as usize);
        for r in 0..n {
            for s in 0..n {
                let mut entry = CycloSum::new();
                for k in 0..n {
                    let phase = single_step_phase(n, k, s);
                    entry += &acc[(r * n + k) as usize].rotate(phase);
                }
                next.push(entry);
            }
        }
        acc = next;
    }
    acc
}
