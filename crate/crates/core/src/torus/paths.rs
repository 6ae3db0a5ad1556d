use rayon::prelude::*;

use super::kernel::inv_sqrt_i_n;
use super::TorusSystem;
use crate::error::{Error, Result};
use crate::phasecalc::{ComplexHP, CycloSum};

/// Default ceiling on the number of enumerated paths.
pub const DEFAULT_PATH_BUDGET: u128 = 10_000_000;

/// `N^(p-1)`, the number of intermediate sequences `s_1..s_{p-1}` joining two
/// fixed endpoints. Saturates instead of overflowing.
pub fn path_count(sys: &TorusSystem) -> u128 {
    let n = sys.dim() as u128;
    (1..sys.p()).fold(1u128, |acc, _| acc.saturating_mul(n))
}

fn check_budget(required: u128, budget: u128) -> Result<()> {
    if required > budget {
        return Err(Error::BudgetExceeded { required, budget });
    }
    Ok(())
}

/// Histogram of `Σ_i (s_i - s_{i-1})² mod 2N` over all paths with `s_0 = from`,
/// `s_p = to`, with the first free step fixed to `first` (when `p > 1`).
fn action_histogram(n: u64, p: u64, from: u64, to: u64, first: Option<u64>) -> Vec<i64> {
    let modulus = 2 * n as i64;
    let sq = |a: u64, b: u64| {
        let d = a as i64 - b as i64;
        d * d
    };
    let mut counts = vec![0i64; modulus as usize];
    let Some(first) = first else {
        counts[(sq(to, from) % modulus) as usize] += 1;
        return counts;
    };
    let free = (p - 1) as usize;
    // odometer over s_2..s_{p-1}; s_1 = first
    let mut path = vec![0u64; free];
    path[0] = first;
    loop {
        let mut action = sq(path[0], from);
        for w in path.windows(2) {
            action += sq(w[1], w[0]);
        }
        action += sq(to, path[free - 1]);
        counts[(action % modulus) as usize] += 1;

        let mut i = free;
        loop {
            i -= 1;
            if i == 0 {
                return counts;
            }
            path[i] += 1;
            if path[i] < n {
                break;
            }
            path[i] = 0;
        }
    }
}

/// Exact unnormalized path sum `Σ_{s_1..s_{p-1}} exp(2πi Σ_i (s_i - s_{i-1})²/(2N))`
/// with `s_0 = r`, `s_p = s`, by explicit enumeration of every path.
///
/// The outer `s_1` range is split across worker threads; partial histograms
/// merge exactly.
pub fn path_phase_sum(sys: &TorusSystem, r: u64, s: u64, budget: u128) -> Result<CycloSum> {
    check_budget(path_count(sys), budget)?;
    let n = sys.dim();
    let p = sys.p();
    let (r, s) = (r % n, s % n);
    let counts = if p == 1 {
        action_histogram(n, p, r, s, None)
    } else {
        (0..n)
            .into_par_iter()
            .map(|first| action_histogram(n, p, r, s, Some(first)))
            .reduce(
                || vec![0i64; 2 * n as usize],
                |mut a, b| {
                    a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                    a
                },
            )
    };
    Ok(CycloSum::from_residue_counts(2 * n, &counts))
}

/// Kernel entry `⟨r| exp(-iHt) |s⟩ = (iN)^(-p/2) · (path sum)`, with the
/// normalization taken as `(1/√(iN))^p` on the principal branch.
pub fn brute_force_path_sum(
    sys: &TorusSystem,
    r: u64,
    s: u64,
    budget: u128,
    prec: u32,
) -> Result<ComplexHP> {
    let sum = path_phase_sum(sys, r, s, budget)?;
    let norm = inv_sqrt_i_n(sys.dim(), prec)?.powi(sys.p() as u32);
    Ok(sum.eval(prec)?.mul(&norm))
}

/// Trace from closed paths, enumerating `N^p` paths in total.
pub fn brute_force_trace(sys: &TorusSystem, budget: u128, prec: u32) -> Result<ComplexHP> {
    let n = sys.dim();
    let required = path_count(sys).saturating_mul(n as u128);
    check_budget(required, budget)?;
    let mut total = CycloSum::new();
    for s in 0..n {
        total += &path_phase_sum(sys, s, s, budget)?;
    }
    let norm = inv_sqrt_i_n(n, prec)?.powi(sys.p() as u32);
    Ok(total.eval(prec)?.mul(&norm))
}
