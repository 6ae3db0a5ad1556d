use num_integer::Integer;

use super::TorusSystem;
use crate::error::Result;
use crate::gauss::{quad_gauss_sum, real_sqrt};
use crate::phasecalc::{ComplexHP, CycloSum, PhaseRational};

/// Trace in the angular-momentum basis, where `exp(-iHt)|k⟩ = exp(-iπk²p/N)|k⟩`:
/// `Σ_{k=0}^{N-1} exp(-iπk²p/N)`.
pub fn trace_method1(sys: &TorusSystem) -> CycloSum {
    let n = sys.dim();
    let p = sys.p() as i128;
    (0..n as i128)
        .map(|k| (PhaseRational::new(-k * k * p, 2 * n), 1))
        .collect()
}

/// Trace from the path integral after the winding-sum insertion:
/// `(√(2q)/√(ip)) Σ_{k=0}^{p-1} exp(2πik²q/p)` for coprime `p, q`.
///
/// For `p = m·p'`, `q = m·q'` with `gcd(p', q') = 1` the trace is `m` times
/// the trace of the reduced system (the spectral sum has period `2q'`), and
/// the closed form is applied to `(q', p')` only.
pub fn trace_method2(sys: &TorusSystem, prec: u32) -> Result<ComplexHP> {
    let m = sys.p().gcd(&sys.q());
    let (p, q) = (sys.p() / m, sys.q() / m);
    let gauss = quad_gauss_sum(q, p).eval(prec)?;
    let root_ip = ComplexHP::from_i64(0, p as i64, prec).principal_sqrt()?;
    let value = real_sqrt(2 * q, prec).div(&root_ip)?.mul(&gauss);
    Ok(if m == 1 {
        value
    } else {
        value.scale_i64(m as i64)
    })
}

/// `Σ_{l=0}^{N-1} Σ_{k=0}^{p-1} exp(2πi(kN + lp)²/(2Np))`.
pub fn winding_sum(n: u64, p: u64) -> CycloSum {
    let den = 2 * n * p;
    let mut counts = vec![0i64; den as usize];
    for l in 0..n {
        for k in 0..p {
            let x = (k * n + l * p) as u128;
            counts[(x * x % den as u128) as usize] += 1;
        }
    }
    CycloSum::from_residue_counts(den, &counts)
}

fn sqrt_i_times(x: u64, prec: u32) -> Result<ComplexHP> {
    ComplexHP::from_i64(0, x as i64, prec).principal_sqrt()
}

/// Closed form of [`winding_sum`] as stated with the path-integral
/// derivation, where its hypotheses hold:
///
/// - `p` odd, `gcd(p, N) = 1`: `√(iNp)`;
/// - `p = 2r`, `gcd(p, N/2) = 1`: `√((1 + (-1)^r)·iNp)`.
///
/// Returns `None` outside those hypotheses. The even branch disagrees with
/// the sum by a factor `√2` whenever `r` is even; see [`winding_even_value`].
pub fn winding_closed_form(n: u64, p: u64, prec: u32) -> Result<Option<ComplexHP>> {
    if !n.is_multiple_of(2) || n == 0 || p == 0 {
        return Ok(None);
    }
    if p % 2 == 1 {
        if p.gcd(&n) != 1 {
            return Ok(None);
        }
        return sqrt_i_times(n * p, prec).map(Some);
    }
    if p.gcd(&(n / 2)) != 1 {
        return Ok(None);
    }
    if (p / 2) % 2 == 1 {
        return Ok(Some(ComplexHP::zero(prec)));
    }
    sqrt_i_times(2 * n * p, prec).map(Some)
}

/// Value of [`winding_sum`] for `p = 2r` coprime to `N/2`:
/// `(1 + (-1)^r)·√(iNp)`.
pub fn winding_even_value(n: u64, p: u64, prec: u32) -> Result<Option<ComplexHP>> {
    if !n.is_multiple_of(2) || n == 0 || p == 0 || !p.is_multiple_of(2) || p.gcd(&(n / 2)) != 1 {
        return Ok(None);
    }
    if (p / 2) % 2 == 1 {
        return Ok(Some(ComplexHP::zero(prec)));
    }
    Ok(Some(sqrt_i_times(n * p, prec)?.scale_i64(2)))
}
