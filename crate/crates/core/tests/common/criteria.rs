//! End-to-end checks of the solver's headline guarantees. Each returns a
//! one-line summary on success and a description of the first violation on
//! failure.

use std::time::Instant;

use homcont::bench::{gevp, katsura, random_dense, GevpInstance};
use homcont::slp::compile_system;
use homcont::tracker::{correct, predict, solve_with_start};
use homcont::{
    make_homotopy, parse_system, random_gamma, solve_system, track, PathStatus, Predictor, TrackerSettings,
};

use super::*;

pub type Outcome = Result<String, String>;

fn settings(threads: usize) -> TrackerSettings {
    TrackerSettings { threads, ..TrackerSettings::default() }
}

/// Circle-and-axes homotopy with `γ = 0.6+0.8i`: four Regular paths, each tied to its
/// start point, ending on the four target solutions.
pub fn circle_success() -> Outcome {
    let clock = Instant::now();
    let starts = circle_start_solutions();
    let paths = track(&circle_start(), &circle_target(), &starts, c(0.6, 0.8), &settings(1))
        .map_err(|e| e.to_string())?;
    let elapsed = clock.elapsed().as_secs_f64();
    if paths.len() != 4 {
        return Err(format!("{} paths", paths.len()));
    }
    for (k, (p, s)) in paths.iter().zip(&starts).enumerate() {
        if !p.status.is_regular() {
            return Err(format!("path {} is {}", k + 1, p.status));
        }
        if &p.start_point != s {
            return Err(format!("path {} is out of start order", k + 1));
        }
    }
    let ends: Vec<_> = paths.iter().map(|p| p.end_point.clone()).collect();
    if !same_point_sets(&ends, &circle_solutions(), 1e-6) {
        return Err(format!("endpoints {ends:?}"));
    }
    if elapsed >= 1.0 {
        return Err(format!("took {elapsed:.3} s"));
    }
    Ok(format!("4 regular paths, {elapsed:.3} s"))
}

/// Same homotopy with `γ = 1`: at least two failed or duplicated paths and
/// every step-size failure near `t = 0.0476`.
pub fn circle_failure() -> Outcome {
    let clock = Instant::now();
    let paths =
        track(&circle_start(), &circle_target(), &circle_start_solutions(), c(1.0, 0.0), &settings(1))
            .map_err(|e| e.to_string())?;
    let report = homcont::tracker::collect_solutions(c(1.0, 0.0), paths);
    let elapsed = clock.elapsed().as_secs_f64();
    let bad = report.paths.iter().filter(|p| !p.status.is_regular()).count() + report.duplicates;
    if bad < 2 {
        return Err(format!("only {bad} failed or duplicated paths"));
    }
    let mut times = Vec::new();
    for p in &report.paths {
        if let PathStatus::MinStepFailure(t) = p.status {
            if !(0.037..=0.058).contains(&t) {
                return Err(format!("min-step failure at t = {t}"));
            }
            times.push(format!("{}", p.status));
        }
    }
    if elapsed >= 1.0 {
        return Err(format!("took {elapsed:.3} s"));
    }
    Ok(format!("{bad} bad paths {}, {elapsed:.3} s", times.join(" ")))
}

/// Katsura 2..8 reach the Bézout count, and generic dense systems in two
/// variables of degree three have nine solutions for nearly every seed.
pub fn solution_counts() -> Outcome {
    for n in 2..=8 {
        let clock = Instant::now();
        let report = solve_system(&katsura(n), 0, &settings(1)).map_err(|e| e.to_string())?;
        let elapsed = clock.elapsed().as_secs_f64();
        let want = 1usize << (n - 1);
        let got = report.solutions.len();
        if got != want {
            return Err(format!("katsura {n}: {got} solutions, expected {want}"));
        }
        if let Some(s) = report.solutions.iter().find(|s| s.residual > 1e-8) {
            return Err(format!("katsura {n}: residual {:e}", s.residual));
        }
        if n == 8 && elapsed >= 60.0 {
            return Err(format!("katsura 8 took {elapsed:.1} s"));
        }
    }
    let mut good = 0;
    for seed in 0..100 {
        let report =
            solve_system(&random_dense(2, 3, seed), seed, &settings(1)).map_err(|e| e.to_string())?;
        if report.solutions.len() == 9 && report.all_regular() {
            good += 1;
        }
    }
    if good < 95 {
        return Err(format!("random dense: {good}/100 seeds complete"));
    }
    Ok(format!("katsura 2..8 complete, random dense {good}/100"))
}

/// Eigenvalues found by tracking agree with the roots of the expanded
/// characteristic polynomial.
pub fn gevp_oracle() -> Outcome {
    let mut worst: f64 = 0.0;
    for n in 2..=8 {
        let g = gevp(n, n as u64);
        let report =
            solve_with_start(&g.start, &g.target, &g.start_solutions, random_gamma(n as u64), &settings(1))
                .map_err(|e| e.to_string())?;
        if report.solutions.len() != n || !report.all_regular() {
            return Err(format!(
                "n = {n}: {} solutions, {} failures",
                report.solutions.len(),
                report.failures
            ));
        }
        let found: Vec<_> = report.solutions.iter().map(|s| GevpInstance::eigenvalue(&s.point)).collect();
        let roots = poly_roots(&det_pencil(&g.a, &g.b));
        let d = multiset_distance(&found, &roots);
        if d > 1e-6 {
            return Err(format!("n = {n}: eigenvalues off by {d:e}"));
        }
        worst = worst.max(d);
    }
    Ok(format!("n = 2..8, worst eigenvalue error {worst:.1e}"))
}

/// Compiled programs against the dense oracle and finite differences on 100
/// dense systems with `n ≤ 4`, `d ≤ 5`.
pub fn slp_suite() -> Outcome {
    let mut r = rng(5);
    let mut count = 0;
    for n in 1..=4 {
        for d in 1..=5u32 {
            for seed in 0..5 {
                let sys = random_dense(n, d, 1000 * n as u64 + 10 * d as u64 + seed);
                let program = compile_system(&sys);
                let x = random_point(&mut r, n);
                let (values, jac) = program.evaluate(&x).map_err(|e| e.to_string())?;
                for (got, want) in values.iter().zip(eval_reordered(&sys, &x)) {
                    if (got - want).norm() > 1e-12 * want.norm().max(1.0) {
                        return Err(format!("n={n} d={d}: value {got} vs {want}"));
                    }
                }
                let fd = central_difference_jacobian(|p| eval_reordered(&sys, p), &x, 1e-5);
                for (got, want) in jac.iter().zip(&fd) {
                    if (got - want).norm() > 1e-6 * want.norm().max(1.0) {
                        return Err(format!("n={n} d={d}: derivative {got} vs {want}"));
                    }
                }
                let base = homcont::compile_horner(&sys, &homcont::slp::frequency_order(&sys));
                if base.op_counts().muls > naive_mul_count(&sys) {
                    return Err(format!("n={n} d={d}: too many multiplications"));
                }
                count += 1;
            }
        }
    }
    Ok(format!("{count} systems"))
}

/// Katsura 11 smoke run.
pub fn katsura_eleven() -> Outcome {
    let clock = Instant::now();
    let report = solve_system(&katsura(11), 0, &settings(1)).map_err(|e| e.to_string())?;
    let elapsed = clock.elapsed().as_secs_f64();
    let regular = report.paths.iter().filter(|p| p.status.is_regular()).count();
    let total = report.paths.len();
    if total != 1024 || regular * 100 < total * 99 {
        return Err(format!("{regular}/{total} regular"));
    }
    if elapsed >= 120.0 {
        return Err(format!("took {elapsed:.1} s"));
    }
    Ok(format!("{regular}/{total} regular, {} distinct, {elapsed:.2} s", report.solutions.len()))
}

/// Closed-form checks of the predictors and the corrector.
pub fn tracker_micro() -> Outcome {
    let sys = |text: &str| parse_system(text).unwrap();
    let one = c(1.0, 0.0);

    // x² - 1 at t = 0, x² - 2 at t = 1: path x = √(1+t).
    let h = make_homotopy(sys("ring x\npoly x^2-1"), sys("ring x\npoly x^2-2"), one).unwrap();
    let p = predict(&h, &[one], 0.0, 0.1, Predictor::RungeKutta4).map_err(|e| e.to_string())?;
    let rk_err = (p[0] - c(1.1f64.sqrt(), 0.0)).norm();
    if rk_err > 1e-6 {
        return Err(format!("RK4 step error {rk_err:e}"));
    }

    // x - 1 at t = 0, x - 2 at t = 1: path x = 1 + t.
    let h = make_homotopy(sys("ring x\npoly x-1"), sys("ring x\npoly x-2"), one).unwrap();
    let p = predict(&h, &[one], 0.0, 0.3, Predictor::Tangent).map_err(|e| e.to_string())?;
    let tangent_err = (p[0] - c(1.3, 0.0)).norm();
    if tangent_err > 1e-15 {
        return Err(format!("tangent step error {tangent_err:e}"));
    }

    let f = sys("ring x\npoly x^2-2");
    let h = make_homotopy(f.clone(), f, one).unwrap();
    let strict = TrackerSettings {
        corrector_tolerance: 1e-15,
        max_corrector_iterations: 4,
        ..TrackerSettings::default()
    };
    let r = correct(&h, &[c(1.5, 0.0)], 0.5, &strict);
    let newton_err = (r.point[0] - c(2f64.sqrt(), 0.0)).norm();
    if newton_err > 1e-12 || r.iterations > 4 {
        return Err(format!("newton error {newton_err:e} after {} iterations", r.iterations));
    }
    Ok(format!(
        "rk4 {rk_err:.1e}, tangent {tangent_err:.1e}, newton {newton_err:.1e} in {} its",
        r.iterations
    ))
}
