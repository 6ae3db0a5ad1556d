use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::Float;
use torusgauss::cylinder::{
    regularized_ls_limit, verify_jacobi, verify_kernel_equality, CylinderKernelParams, ThetaParams,
};
use torusgauss::gauss::{
    appendix_closed_form, appendix_sum_minus, appendix_sum_plus, is_prime,
    verify_landsberg_schaar_with, verify_reciprocity, Sign,
};
use torusgauss::report::params;
use torusgauss::torus::{
    brute_force_path_sum, brute_force_trace, evolve_by_power, path_count, spectral_kernel,
    trace_method1, trace_method2, TorusSystem,
};
use torusgauss::{ComplexHP, Error, VerificationReport};

use crate::{apply_tolerance, run_parallel, CliError, RunSummary, SweepConfig};

/// Tolerance for two error-tracked values of the same exact quantity: both
/// error bounds plus one unit at the working precision.
fn hp_tolerance(a: &ComplexHP, b: &ComplexHP, prec: u32) -> Float {
    let slack = Float::with_val(64, Float::i_exp(1, -(prec as i32)));
    Float::with_val(64, a.err_bound() + b.err_bound()) + slack
}

fn compare_hp(
    ps: Vec<(String, String)>,
    a: ComplexHP,
    b: ComplexHP,
    prec: u32,
) -> VerificationReport {
    let tol = hp_tolerance(&a, &b, prec);
    VerificationReport::compare(ps, a, b, tol)
}

pub fn cmd_verify_ls(cfg: &SweepConfig) -> Result<RunSummary, CliError> {
    cfg.validate()?;
    let started = Instant::now();
    let cases: Vec<(u64, u64)> = cfg
        .p_range
        .iter()
        .flat_map(|p| cfg.q_range.iter().map(move |q| (p, q)))
        .collect();
    let reports = run_parallel(&cases, cfg.parallelism, |&(p, q)| {
        Ok(verify_landsberg_schaar_with(
            q,
            p,
            cfg.precision_bits,
            cfg.tolerance_override.clone(),
        )?)
    })?;
    Ok(RunSummary::from_reports(reports, Vec::new(), started))
}

/// Method 1, Method 2, the matrix-power trace and (budget permitting) the
/// brute-force path trace, each compared against Method 1.
pub fn cmd_trace_compare(
    q: u64,
    p: u64,
    prec: u32,
    budget: u128,
    tolerance: Option<&Float>,
) -> Result<RunSummary, CliError> {
    let started = Instant::now();
    let sys = TorusSystem::new(q, p)?;
    let m1 = trace_method1(&sys).eval(prec)?;
    let mut others = vec![
        ("method2", trace_method2(&sys, prec)?),
        ("matrix_power", evolve_by_power(&sys, prec)?.trace()),
    ];
    let mut skipped = Vec::new();
    match brute_force_trace(&sys, budget, prec) {
        Ok(v) => others.push(("brute_force", v)),
        Err(e @ Error::BudgetExceeded { .. }) => {
            skipped.push(format!("brute_force q={q} p={p}: {e}"))
        }
        Err(e) => return Err(e.into()),
    }
    let mut reports: Vec<_> = others
        .into_iter()
        .map(|(name, v)| {
            let ps = params([
                ("q", q.to_string()),
                ("p", p.to_string()),
                ("method", name.to_string()),
            ]);
            compare_hp(ps, m1.clone(), v, prec)
        })
        .collect();
    apply_tolerance(&mut reports, tolerance);
    Ok(RunSummary::from_reports(reports, skipped, started))
}

/// Shift samples used per `r`: small, comparable to `r`, and beyond `2r`.
pub fn appendix_shifts(r: u64) -> [i64; 7] {
    let r = r as i64;
    [0, 1, -1, r, -r, 2 * r + 1, -(3 * r + 2)]
}

/// Both appendix sums for `r = 1..=r_max` at every shift sample, against
/// the closed form. A case also fails if the exact sum differs from the
/// unshifted one or is not the conjugate of its partner.
pub fn cmd_appendix(
    r_max: u64,
    prec: u32,
    jobs: usize,
    tolerance: Option<&Float>,
) -> Result<RunSummary, CliError> {
    if r_max == 0 {
        return Err(CliError::Usage("--r-max must be at least 1".into()));
    }
    let started = Instant::now();
    let cases: Vec<(u64, i64, Sign)> = (1..=r_max)
        .flat_map(|r| {
            appendix_shifts(r)
                .into_iter()
                .flat_map(move |s| [(r, s, Sign::Plus), (r, s, Sign::Minus)])
        })
        .collect();
    let mut reports = run_parallel(&cases, jobs, |&(r, s, sign)| {
        let (sum, base, partner) = match sign {
            Sign::Plus => (
                appendix_sum_plus(r, s),
                appendix_sum_plus(r, 0),
                appendix_sum_minus(r, s),
            ),
            Sign::Minus => (
                appendix_sum_minus(r, s),
                appendix_sum_minus(r, 0),
                appendix_sum_plus(r, s),
            ),
        };
        let exact_ok = sum == base && sum.conj() == partner;
        let value = sum.eval(prec)?;
        let closed = appendix_closed_form(r, sign, prec);
        let ps = params([
            ("r", r.to_string()),
            ("shift", s.to_string()),
            (
                "sign",
                if sign == Sign::Plus { "+" } else { "-" }.to_string(),
            ),
            ("exact_invariants", exact_ok.to_string()),
        ]);
        let mut rep = compare_hp(ps, value, closed, prec);
        rep.pass &= exact_ok;
        Ok(rep)
    })?;
    if let Some(tol) = tolerance {
        for r in &mut reports {
            let exact_ok = r.param("exact_invariants") == Some("true");
            r.tolerance = tol.clone();
            r.pass = exact_ok && r.abs_diff <= *tol;
        }
    }
    Ok(RunSummary::from_reports(reports, Vec::new(), started))
}

/// Reciprocity for every ordered pair of distinct odd primes below `bound`.
pub fn cmd_reciprocity(bound: u64, jobs: usize) -> Result<RunSummary, CliError> {
    let started = Instant::now();
    let primes: Vec<u64> = (3..bound).filter(|&n| is_prime(n)).collect();
    let cases: Vec<(u64, u64)> = primes
        .iter()
        .flat_map(|&p| {
            primes
                .iter()
                .filter(move |&&q| q != p)
                .map(move |&q| (p, q))
        })
        .collect();
    let reports = run_parallel(&cases, jobs, |&(p, q)| Ok(verify_reciprocity(p, q)?))?;
    Ok(RunSummary::from_reports(reports, Vec::new(), started))
}

pub fn default_tau_grid() -> Vec<(f64, f64)> {
    [0.25, 0.5, 1.0, 1.5, 2.0, 4.0]
        .into_iter()
        .map(|t| (t, 0.0))
        .collect()
}

/// Seeded `τ` with `Re τ ∈ [0.1, 10]` and `|Im τ| <= Re τ / 2`.
pub fn random_taus(count: usize, seed: u64) -> Vec<(f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let re: f64 = rng.gen_range(0.1..=10.0);
            let im: f64 = rng.gen_range(-re / 2.0..=re / 2.0);
            (re, im)
        })
        .collect()
}

/// Theta transformation at each `τ`, with truncations chosen so that the
/// tails fall below one unit at the working precision.
pub fn cmd_jacobi(
    taus: &[(f64, f64)],
    prec: u32,
    jobs: usize,
    tolerance: Option<&Float>,
) -> Result<RunSummary, CliError> {
    let started = Instant::now();
    let target = Float::with_val(64, Float::i_exp(1, -(prec as i32)));
    let mut reports = run_parallel(taus, jobs, |&(re, im)| {
        if !(re.is_finite() && im.is_finite()) {
            return Err(CliError::Usage(format!("tau {re}+{im}i is not finite")));
        }
        let theta = ThetaParams::auto(ComplexHP::from_f64(re, im, prec), &target)?;
        Ok(verify_jacobi(&theta)?)
    })?;
    apply_tolerance(&mut reports, tolerance);
    Ok(RunSummary::from_reports(reports, Vec::new(), started))
}

/// 5×5 grid of `(θ, t)` with `θ₀ = 0` and `Im t ∈ [-10, -0.1]`.
pub fn kernel_grid() -> Vec<(f64, (f64, f64))> {
    let thetas = [0.0, 1.0, 2.5, 4.0, 6.0];
    let times = [
        (0.0, -0.1),
        (0.5, -0.5),
        (0.0, -1.0),
        (2.0, -3.0),
        (0.0, -10.0),
    ];
    thetas
        .iter()
        .flat_map(|&th| times.iter().map(move |&t| (th, t)))
        .collect()
}

/// Spectral against image series of the circle propagator (`I = ħ = 1`).
pub fn cmd_kernel_jacobi(
    grid: &[(f64, (f64, f64))],
    prec: u32,
    jobs: usize,
    tolerance: Option<&Float>,
) -> Result<RunSummary, CliError> {
    let started = Instant::now();
    let target = Float::with_val(64, Float::i_exp(1, -(prec as i32)));
    let mut reports = run_parallel(grid, jobs, |&(theta, (t_re, t_im))| {
        let k = CylinderKernelParams::unit(t_re, t_im, 0.0, theta, 1, prec)?
            .with_auto_truncation(&target);
        Ok(verify_kernel_equality(&k)?)
    })?;
    apply_tolerance(&mut reports, tolerance);
    Ok(RunSummary::from_reports(reports, Vec::new(), started))
}

/// Regularized approach to the Landsberg-Schaar value. Besides each gap
/// being within its bound, every gap must be strictly below the previous one.
pub fn cmd_limit(
    q: u64,
    p: u64,
    eps: &[Float],
    prec: u32,
    tolerance: Option<&Float>,
) -> Result<RunSummary, CliError> {
    let started = Instant::now();
    let mut reports = regularized_ls_limit(q, p, eps, prec)?;
    apply_tolerance(&mut reports, tolerance);
    for i in 0..reports.len() {
        let decreasing = i == 0 || reports[i].abs_diff < reports[i - 1].abs_diff;
        reports[i]
            .params
            .push(("gap_decreasing".into(), decreasing.to_string()));
        reports[i].pass &= decreasing;
    }
    Ok(RunSummary::from_reports(reports, Vec::new(), started))
}

/// Every kernel entry of `exp(-iHt)` on the `N`-dimensional torus after `p`
/// steps, by path enumeration, against the matrix power and spectral form.
pub fn cmd_path_oracle(
    n: u64,
    p: u64,
    prec: u32,
    budget: u128,
    jobs: usize,
    tolerance: Option<&Float>,
) -> Result<RunSummary, CliError> {
    let started = Instant::now();
    let sys = TorusSystem::with_dim(n, p)?;
    let power = evolve_by_power(&sys, prec)?;
    let spectral = spectral_kernel(n, p, prec)?;
    let required = path_count(&sys);
    if required > budget {
        let note = format!(
            "path enumeration N={n} p={p}: {}",
            Error::BudgetExceeded { required, budget }
        );
        return Ok(RunSummary::from_reports(Vec::new(), vec![note], started));
    }
    let cases: Vec<(u64, u64)> = (0..n).flat_map(|r| (0..n).map(move |s| (r, s))).collect();
    let per_entry = run_parallel(&cases, jobs, |&(r, s)| {
        let brute = brute_force_path_sum(&sys, r, s, budget, prec)?;
        let mk = |name: &str| {
            params([
                ("n", n.to_string()),
                ("p", p.to_string()),
                ("r", r.to_string()),
                ("s", s.to_string()),
                ("against", name.to_string()),
            ])
        };
        let (ri, si) = (r as usize, s as usize);
        Ok([
            compare_hp(
                mk("matrix_power"),
                brute.clone(),
                power.get(ri, si).clone(),
                prec,
            ),
            compare_hp(mk("spectral"), brute, spectral.get(ri, si).clone(), prec),
        ])
    })?;
    let mut reports: Vec<_> = per_entry.into_iter().flatten().collect();
    apply_tolerance(&mut reports, tolerance);
    Ok(RunSummary::from_reports(reports, Vec::new(), started))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::IntRange;

    fn cfg(p: (u64, u64), q: (u64, u64)) -> SweepConfig {
        SweepConfig {
            p_range: IntRange::new(p.0, p.1).unwrap(),
            q_range: IntRange::new(q.0, q.1).unwrap(),
            ..SweepConfig::default()
        }
    }

    #[test]
    fn verify_ls_examples() {
        let s = cmd_verify_ls(&cfg((1, 10), (1, 10))).unwrap();
        assert_eq!((s.total, s.passed), (100, 100));
        let s = cmd_verify_ls(&cfg((2, 2), (1, 1))).unwrap();
        assert_eq!(s.total, 1);
        assert!(s.reports[0]
            .lhs
            .within(&ComplexHP::zero(64), &Float::with_val(64, 1e-60)));
        let s = cmd_verify_ls(&cfg((1, 1), (1, 1))).unwrap();
        assert!(s.reports[0]
            .rhs
            .within(&ComplexHP::one(64), &Float::with_val(64, 1e-60)));
    }

    #[test]
    fn trace_compare_examples() {
        let s = cmd_trace_compare(1, 3, 256, 1_000_000, None).unwrap();
        assert_eq!(s.failed, 0);
        assert!(s.reports[0]
            .lhs
            .within(&ComplexHP::from_i64(1, 1, 64), &Float::with_val(64, 1e-60)));
        let s = cmd_trace_compare(1, 1, 256, 1_000_000, None).unwrap();
        assert!(s.reports[0]
            .lhs
            .within(&ComplexHP::from_i64(1, -1, 64), &Float::with_val(64, 1e-60)));
        let s = cmd_trace_compare(3, 5, 256, 1000, None).unwrap();
        assert_eq!((s.total, s.failed, s.skipped.len()), (2, 0, 1));
    }

    #[test]
    fn appendix_and_reciprocity() {
        let s = cmd_appendix(50, 256, 0, None).unwrap();
        assert_eq!((s.total, s.failed), (2 * 50 * 7, 0));
        let s = cmd_reciprocity(100, 0).unwrap();
        assert_eq!(s.total, 24 * 23);
        assert_eq!(s.failed, 0);
    }

    #[test]
    fn limit_example() {
        let eps = crate::config::parse_decimal_list("0.1,0.01,0.001").unwrap();
        let s = cmd_limit(1, 3, &eps, 128, None).unwrap();
        assert_eq!((s.total, s.failed), (3, 0));
        assert!(cmd_limit(
            1,
            3,
            &eps[..1]
                .iter()
                .chain(&eps[..1])
                .cloned()
                .collect::<Vec<_>>(),
            128,
            None
        )
        .is_err());
    }

    #[test]
    fn path_oracle_and_budget() {
        let s = cmd_path_oracle(4, 3, 192, 1_000_000, 0, None).unwrap();
        assert_eq!((s.total, s.failed), (2 * 16, 0));
        let s = cmd_path_oracle(6, 4, 192, 10, 0, None).unwrap();
        assert_eq!((s.total, s.skipped.len()), (0, 1));
        assert!(cmd_path_oracle(3, 2, 192, 100, 0, None).is_err());
    }

    #[test]
    fn tolerance_override_can_fail_cases() {
        let tiny = Float::with_val(64, 0);
        let s = cmd_jacobi(&[(1.0, 0.0)], 256, 1, Some(&tiny)).unwrap();
        assert_eq!(
            s.exit_code(),
            if s.reports[0].abs_diff == 0 { 0 } else { 1 }
        );
        let big = Float::with_val(64, 1);
        assert_eq!(
            cmd_jacobi(&random_taus(5, 9), 256, 2, Some(&big))
                .unwrap()
                .failed,
            0
        );
    }
}
