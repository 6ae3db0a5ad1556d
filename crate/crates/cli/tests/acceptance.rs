//! Acceptance suite. Prints one PASS/FAIL line per criterion.
//!
//! A criterion listed in `KNOWN_FAILURES` is expected to report FAIL; the run
//! still succeeds only if its failing cases are exactly the documented ones.
//! Any other FAIL, or an unexpected PASS, makes the process exit nonzero.

use std::process::{Command, ExitCode};
use std::time::Instant;

use num_integer::Integer;
use rug::Float;
use torusgauss::cylinder::{theta_truncated, ThetaParams};
use torusgauss::gauss;
use torusgauss::gauss::{verify_landsberg_schaar, Sign};
use torusgauss::phasecalc::decimal;
use torusgauss::torus::{
    brute_force_path_sum, evolve_by_power, path_count, single_step_kernel_for_dim, spectral_kernel,
    trace_method1, trace_method2, winding_closed_form, winding_even_value, winding_sum,
    TorusSystem,
};
use torusgauss_cli::commands::{
    appendix_shifts, cmd_jacobi, cmd_kernel_jacobi, cmd_limit, cmd_reciprocity, cmd_verify_ls,
    default_tau_grid, kernel_grid, random_taus,
};
use torusgauss_cli::config::parse_decimal_list;
use torusgauss_cli::output::{to_csv, to_json};
use torusgauss_cli::{IntRange, OutputFormat, SweepConfig};

const P: u32 = 256;
const SEED: u64 = 20_240_601;
const KNOWN_FAILURES: &[u32] = &[5];

type Criterion = (u32, &'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
    /// For a known failure: whether the failing cases match the analysis.
    failure_explained: bool,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Self {
            pass,
            detail: detail.into(),
            failure_explained: false,
        }
    }
}

fn tol(x: f64) -> Float {
    Float::with_val(64, x)
}

fn c1_landsberg_schaar() -> Outcome {
    let cfg = SweepConfig {
        p_range: IntRange::new(1, 50).unwrap(),
        q_range: IntRange::new(1, 50).unwrap(),
        precision_bits: P,
        ..SweepConfig::default()
    };
    let s = cmd_verify_ls(&cfg).unwrap();
    let small = s.reports.iter().all(|r| r.abs_diff < tol(1e-60));
    Outcome::new(
        s.total == 2500 && s.failed == 0 && small,
        format!(
            "{} pairs, {} passed, worst |diff| {:.3e}",
            s.total,
            s.passed,
            s.worst_abs_diff.to_f64()
        ),
    )
}

fn c2_three_way_kernels() -> Outcome {
    let mut entries = 0;
    let mut bad = Vec::new();
    let mut max_paths = 0u128;
    for n in [2u64, 4, 6] {
        for p in 1..=4u64 {
            let sys = TorusSystem::with_dim(n, p).unwrap();
            max_paths = max_paths.max(path_count(&sys));
            let power = evolve_by_power(&sys, P).unwrap();
            let spectral = spectral_kernel(n, p, P).unwrap();
            for r in 0..n {
                for s in 0..n {
                    let brute = brute_force_path_sum(&sys, r, s, 1_000, P).unwrap();
                    let (ri, si) = (r as usize, s as usize);
                    let d1 = brute.dist(power.get(ri, si));
                    let d2 = brute.dist(spectral.get(ri, si));
                    let d3 = power.get(ri, si).dist(spectral.get(ri, si));
                    if d1 >= 1e-30 || d2 >= 1e-30 || d3 >= 1e-30 {
                        bad.push(format!("N={n} p={p} ({r},{s})"));
                    }
                    entries += 1;
                }
            }
        }
    }
    Outcome::new(
        bad.is_empty() && max_paths <= 216,
        format!("{entries} entries, max {max_paths} paths per entry, mismatches {bad:?}"),
    )
}

fn c3_trace_theorem() -> Outcome {
    let mut worst = Float::new(64);
    let mut bad = Vec::new();
    for q in 1..=20u64 {
        for p in 1..=20u64 {
            let sys = TorusSystem::new(q, p).unwrap();
            let d = trace_method1(&sys)
                .eval(P)
                .unwrap()
                .dist(&trace_method2(&sys, P).unwrap());
            if d >= 1e-60 {
                bad.push((q, p));
            }
            if d > worst {
                worst = d;
            }
        }
    }
    Outcome::new(
        bad.is_empty(),
        format!(
            "400 (q, p), worst |diff| {:.3e}, failing {bad:?}",
            worst.to_f64()
        ),
    )
}

fn c4_appendix() -> Outcome {
    let mut cases = 0;
    let mut bad = Vec::new();
    for r in 1..=200u64 {
        let plus_form = gauss::appendix_closed_form(r, Sign::Plus, P);
        let minus_form = gauss::appendix_closed_form(r, Sign::Minus, P);
        let base_plus = gauss::appendix_sum_plus(r, 0);
        let base_minus = gauss::appendix_sum_minus(r, 0);
        for s in appendix_shifts(r) {
            let plus = gauss::appendix_sum_plus(r, s);
            let minus = gauss::appendix_sum_minus(r, s);
            let exact = plus == base_plus && minus == base_minus && plus.conj() == minus;
            let vp = plus.eval(P).unwrap();
            let vm = minus.eval(P).unwrap();
            let close = vp.dist(&plus_form) < 1e-60 && vm.dist(&minus_form) < 1e-60;
            // conjugation also at the evaluated level
            let conj = vp.conj().dist(&vm) < 1e-60;
            if !(exact && close && conj) {
                bad.push((r, s));
            }
            cases += 2;
        }
    }
    Outcome::new(
        bad.is_empty(),
        format!("{cases} sums (7 shifts per r), failing {bad:?}"),
    )
}

fn c5_winding() -> Outcome {
    let mut odd_cases = 0;
    let mut odd_bad = Vec::new();
    for n in (2..=40u64).step_by(2) {
        for p in (1..=25u64).step_by(2).filter(|p| p.gcd(&n) == 1) {
            let sum = winding_sum(n, p).eval(P).unwrap();
            let form = winding_closed_form(n, p, P).unwrap().unwrap();
            if sum.dist(&form) >= 1e-60 {
                odd_bad.push((n, p));
            }
            odd_cases += 1;
        }
    }
    let mut even_cases = 0;
    let mut even_bad = Vec::new();
    let mut explained = true;
    let root2 = Float::with_val(P, 2).sqrt();
    for n in (2..=40u64).step_by(2) {
        for p in (2..=24u64).step_by(2).filter(|p| p.gcd(&(n / 2)) == 1) {
            let sum = winding_sum(n, p).eval(P).unwrap();
            let form = winding_closed_form(n, p, P).unwrap().unwrap();
            even_cases += 1;
            if sum.dist(&form) < 1e-60 {
                continue;
            }
            even_bad.push((n, p));
            // analysis: only r = p/2 even fails, the sum is (1 + (-1)^r)·√(iNp)
            // and the stated form is √2 times smaller
            let corrected = winding_even_value(n, p, P).unwrap().unwrap();
            let ratio_ok = form.scale(&root2).dist(&sum) < 1e-60;
            explained &= (p / 2) % 2 == 0 && sum.dist(&corrected) < 1e-60 && ratio_ok;
        }
    }
    let expected_bad = even_bad.len()
        == (2..=40u64)
            .step_by(2)
            .map(|n| {
                (2..=24u64)
                    .step_by(2)
                    .filter(|p| p.gcd(&(n / 2)) == 1 && (p / 2) % 2 == 0)
                    .count()
            })
            .sum::<usize>();
    let pass = odd_bad.is_empty() && even_bad.is_empty();
    let mut out = Outcome::new(
        pass,
        format!(
            "odd p: {odd_cases} cases, {} mismatches; even p: {even_cases} cases, {} mismatches \
             (all with r = p/2 even; sum = 2√(iNp) = √2 × stated form)",
            odd_bad.len(),
            even_bad.len()
        ),
    );
    out.failure_explained = odd_bad.is_empty() && explained && expected_bad;
    out
}

fn c6_unitarity() -> Outcome {
    let mut bad = Vec::new();
    for n in (2..=64u64).step_by(2) {
        let k = single_step_kernel_for_dim(n, P).unwrap();
        let modulus = Float::with_val(P, n).sqrt().recip();
        let const_mod = k
            .entries()
            .iter()
            .all(|e| Float::with_val(P, e.abs() - &modulus).abs() < 1e-50);
        if !(k.unitarity_defect() < 1e-50 && const_mod) {
            bad.push(n);
        }
    }
    Outcome::new(
        bad.is_empty(),
        format!("32 even N up to 64, failing {bad:?}"),
    )
}

fn c7_jacobi() -> Outcome {
    let mut taus = default_tau_grid();
    taus.extend(random_taus(100, SEED));
    let s = cmd_jacobi(&taus, P, 0, None).unwrap();
    let theta1 = theta_truncated(&ThetaParams::from_f64(1.0, 0.0, 10, P).unwrap())
        .unwrap()
        .value;
    let digits_ok = (theta1.re_f64() - 1.086434811213308).abs() < 5e-13 && theta1.im_f64() == 0.0;
    Outcome::new(
        s.total == 106 && s.failed == 0 && digits_ok,
        format!(
            "{} τ, {} passed; θ(1) = {}",
            s.total,
            s.passed,
            theta1.re_decimal(16)
        ),
    )
}

fn c8_kernel_jacobi() -> Outcome {
    let s = cmd_kernel_jacobi(&kernel_grid(), P, 0, None).unwrap();
    Outcome::new(
        s.total == 25 && s.failed == 0,
        format!(
            "5×5 (θ, t) grid, {} passed, worst |diff| {:.3e}",
            s.passed,
            s.worst_abs_diff.to_f64()
        ),
    )
}

fn c9_reciprocity() -> Outcome {
    let s = cmd_reciprocity(100, 0).unwrap();
    let exact = s
        .reports
        .iter()
        .all(|r| r.tolerance == 0 && r.abs_diff == 0);
    Outcome::new(
        s.total == 24 * 23 && s.failed == 0 && exact,
        format!("{} ordered prime pairs, {} passed", s.total, s.passed),
    )
}

fn c10_regularized_limit() -> Outcome {
    let eps = parse_decimal_list("0.1,0.01,0.001").unwrap();
    let mut lines = Vec::new();
    let mut ok = true;
    for (q, p) in [(1u64, 1u64), (1, 3), (2, 3)] {
        let s = cmd_limit(q, p, &eps, P, None).unwrap();
        let gaps: Vec<String> = s.reports.iter().map(|r| decimal(&r.abs_diff, 4)).collect();
        let decreasing = s.reports.windows(2).all(|w| w[1].abs_diff < w[0].abs_diff);
        // the target is the Landsberg-Schaar value itself
        let target = verify_landsberg_schaar(q, p, P).unwrap().lhs;
        let same_target = s.reports.iter().all(|r| r.rhs.dist(&target) < 1e-60);
        ok &= decreasing && same_target && s.failed == 0;
        lines.push(format!("(q={q},p={p}) gaps [{}]", gaps.join(", ")));
    }
    Outcome::new(ok, lines.join("; "))
}

fn c11_determinism() -> Outcome {
    let cfg = |jobs| SweepConfig {
        p_range: IntRange::new(1, 20).unwrap(),
        q_range: IntRange::new(1, 20).unwrap(),
        precision_bits: P,
        tolerance_override: None,
        output_format: OutputFormat::Json,
        parallelism: jobs,
    };
    let a = cmd_verify_ls(&cfg(4)).unwrap();
    let b = cmd_verify_ls(&cfg(4)).unwrap();
    let serial = cmd_verify_ls(&cfg(1)).unwrap();
    let same_json = to_json(&a) == to_json(&b) && to_json(&a) == to_json(&serial);
    let same_csv = to_csv(&a).unwrap() == to_csv(&b).unwrap();
    let pass_sets =
        |s: &torusgauss_cli::RunSummary| s.reports.iter().map(|r| r.pass).collect::<Vec<_>>();
    let same_verdicts =
        pass_sets(&a) == pass_sets(&serial) && a.worst_abs_diff == serial.worst_abs_diff;

    let run = |jobs: &str| {
        Command::new(env!("CARGO_BIN_EXE_torusgauss"))
            .args([
                "verify-ls",
                "--p",
                "1..12",
                "--q",
                "1..12",
                "--format",
                "json",
                "--jobs",
                jobs,
            ])
            .output()
            .expect("binary runs")
    };
    let (x, y, z) = (run("3"), run("3"), run("1"));
    let same_process = x.status.success() && x.stdout == y.stdout && x.stdout == z.stdout;
    Outcome::new(
        same_json && same_csv && same_verdicts && same_process,
        format!(
            "in-process json {same_json}, csv {same_csv}, serial/parallel verdicts {same_verdicts}, \
             binary stdout {same_process} ({} bytes)",
            x.stdout.len()
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        (
            1,
            "Landsberg-Schaar sweep (p, q) in [1,50]^2",
            c1_landsberg_schaar,
        ),
        (2, "three-way torus kernel agreement", c2_three_way_kernels),
        (3, "trace theorem, methods 1 and 2", c3_trace_theorem),
        (4, "appendix closed forms and exact invariants", c4_appendix),
        (5, "winding identity", c5_winding),
        (6, "single-step unitarity and modulus", c6_unitarity),
        (7, "theta transformation", c7_jacobi),
        (8, "kernel-form theta transformation", c8_kernel_jacobi),
        (9, "quadratic reciprocity", c9_reciprocity),
        (10, "regularized limit gaps decrease", c10_regularized_limit),
        (11, "determinism", c11_determinism),
    ];
    let mut unexpected = 0;
    for (id, name, run) in criteria {
        let started = Instant::now();
        let o = run();
        let secs = started.elapsed().as_secs_f64();
        println!(
            "{} criterion {id:>2}: {name}: {} [{secs:.2}s]",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
        let known = KNOWN_FAILURES.contains(&id);
        match (o.pass, known) {
            (true, false) => {}
            (false, true) if o.failure_explained => {
                println!("     criterion {id:>2}: known failure, failing cases match the recorded analysis");
            }
            (false, true) => {
                println!("     criterion {id:>2}: failure does NOT match the recorded analysis");
                unexpected += 1;
            }
            (true, true) => {
                println!(
                    "     criterion {id:>2}: expected to fail but passed; revisit the analysis"
                );
                unexpected += 1;
            }
            (false, false) => unexpected += 1,
        }
    }
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{unexpected} unexpected acceptance outcome(s)");
        ExitCode::FAILURE
    }
}
