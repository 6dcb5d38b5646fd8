//! Predictor-corrector path tracking with adaptive step control.
//!
//! A path is followed from `t = 0` to `t = 1` by alternating a predictor step
//! (integrating the Davidenko equation `dx/dt = -H_x⁻¹ H_t`) with Newton
//! corrections at the new `t`. Successful steps grow the step size, failed
//! corrections shrink it; a path is abandoned once the step falls below its
//! floor or the point runs off to infinity. Endpoints are polished against
//! the target system itself.
//!
//! Paths share no mutable state, so [`track`] may fan them out over a thread
//! pool; results are returned in input order and do not depend on the schedule.

use std::fmt;

use num_complex::Complex64;
use rayon::prelude::*;
use thiserror::Error;

use crate::homotopy::{
    make_homotopy, random_gamma, total_degree_start, Homotopy, HomotopyError, HomotopyValue,
    HomotopyWorkspace,
};
use crate::linalg::{inf_norm, lu_factor_in_place, lu_solve_factored, LinalgError};
use crate::poly::PolynomialSystem;
use crate::slp::{compile_system, SlProgram, SlpWorkspace};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TrackerError {
    #[error("invalid tracker settings: {0}")]
    InvalidSettings(String),
    #[error(transparent)]
    Homotopy(#[from] HomotopyError),
    #[error("failed to build thread pool: {0}")]
    ThreadPool(String),
}

/// Failure of a single predictor or corrector evaluation.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum StepError {
    #[error(transparent)]
    Singular(#[from] LinalgError),
    #[error(transparent)]
    Evaluation(#[from] HomotopyError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Predictor {
    /// Euler step along the tangent.
    Tangent,
    /// Classical fourth-order Runge-Kutta.
    RungeKutta4,
}

/// Step-control parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct TrackerSettings {
    pub predictor: Predictor,
    pub initial_step: f64,
    pub min_step: f64,
    pub max_step: f64,
    pub corrector_tolerance: f64,
    pub max_corrector_iterations: usize,
    pub step_increase_factor: f64,
    pub step_decrease_factor: f64,
    pub successes_before_increase: usize,
    pub divergence_threshold: f64,
    pub endpoint_tolerance: f64,
    /// Worker threads used by [`track`]; 1 runs paths sequentially on the
    /// calling thread, 0 uses the global pool.
    pub threads: usize,
}

impl Default for TrackerSettings {
    fn default() -> Self {
        TrackerSettings {
            predictor: Predictor::RungeKutta4,
            initial_step: 0.05,
            min_step: 1e-6,
            max_step: 0.1,
            corrector_tolerance: 1e-6,
            max_corrector_iterations: 3,
            step_increase_factor: 2.0,
            step_decrease_factor: 0.5,
            successes_before_increase: 3,
            divergence_threshold: 1e6,
            endpoint_tolerance: 1e-8,
            threads: 1,
        }
    }
}

impl TrackerSettings {
    pub fn validate(&self) -> Result<(), TrackerError> {
        let bad = |msg: &str| Err(TrackerError::InvalidSettings(msg.to_string()));
        if !(self.min_step > 0.0
            && self.min_step <= self.initial_step
            && self.initial_step <= self.max_step
            && self.max_step <= 1.0)
        {
            return bad("steps must satisfy 0 < min_step <= initial_step <= max_step <= 1");
        }
        if !(self.step_decrease_factor > 0.0
            && self.step_decrease_factor < 1.0
            && self.step_increase_factor > 1.0)
        {
            return bad("step factors must satisfy 0 < decrease < 1 < increase");
        }
        if !(self.corrector_tolerance > 0.0
            && self.endpoint_tolerance > 0.0
            && self.divergence_threshold > 0.0)
        {
            return bad("tolerances and divergence threshold must be positive");
        }
        if self.max_corrector_iterations == 0 || self.successes_before_increase == 0 {
            return bad("iteration counts must be at least 1");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PathStatus {
    Regular,
    /// Step size fell below `min_step` at the given `t`.
    MinStepFailure(f64),
    /// The path left the ball of radius `divergence_threshold` (or overflowed).
    Infinity(f64),
    /// Reached `t = 1` but the endpoint polish did not converge.
    SingularEndpoint,
    NumericalFailure(f64),
}

impl PathStatus {
    pub fn is_regular(&self) -> bool {
        matches!(self, PathStatus::Regular)
    }

    /// True when the path reached `t = 1`.
    pub fn reached_end(&self) -> bool {
        matches!(self, PathStatus::Regular | PathStatus::SingularEndpoint)
    }

    pub fn failure_time(&self) -> Option<f64> {
        match *self {
            PathStatus::MinStepFailure(t) | PathStatus::Infinity(t) | PathStatus::NumericalFailure(t) => {
                Some(t)
            }
            _ => None,
        }
    }

    /// Stable machine-readable name.
    pub fn tag(&self) -> &'static str {
        match self {
            PathStatus::Regular => "regular",
            PathStatus::MinStepFailure(_) => "min_step_failure",
            PathStatus::Infinity(_) => "infinity",
            PathStatus::SingularEndpoint => "singular_endpoint",
            PathStatus::NumericalFailure(_) => "numerical_failure",
        }
    }
}

/// Compact rendering: failures print as `[M,t=0.04762]`.
impl fmt::Display for PathStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PathStatus::Regular => write!(f, "regular"),
            PathStatus::SingularEndpoint => write!(f, "[S]"),
            PathStatus::MinStepFailure(t) => write!(f, "[M,t={t:.5}]"),
            PathStatus::Infinity(t) => write!(f, "[I,t={t:.5}]"),
            PathStatus::NumericalFailure(t) => write!(f, "[N,t={t:.5}]"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrackedPath {
    pub start_point: Vec<Complex64>,
    /// Last point reached; the solution when the path succeeded.
    pub end_point: Vec<Complex64>,
    pub status: PathStatus,
    /// `‖f(end_point)‖∞` against the target system.
    pub residual: f64,
    pub steps_taken: usize,
    pub newton_iterations_total: usize,
}

/// Result of a Newton run.
#[derive(Debug, Clone, PartialEq)]
pub struct Correction {
    pub point: Vec<Complex64>,
    pub converged: bool,
    pub iterations: usize,
    /// Size of the last Newton update, `‖Δx‖∞`.
    pub last_update: f64,
}

/// One attempted step, recorded by [`track_path_traced`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepRecord {
    /// Time the step started from.
    pub t: f64,
    /// Nominal step size; the actual step is `min(dt, 1 - t)`.
    pub dt: f64,
    pub accepted: bool,
}

/// Number of Newton iterations allowed when polishing an endpoint at `t = 1`.
const POLISH_ITERATIONS: usize = 10;

/// Number of Newton iterations allowed by [`refine`].
pub const REFINE_ITERATIONS: usize = 30;

fn finite(v: &[Complex64]) -> bool {
    v.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// Scratch state for tracking paths of one homotopy.
struct Tracker<'a> {
    h: &'a Homotopy,
    ws: HomotopyWorkspace,
    val: HomotopyValue,
    lu: Vec<Complex64>,
    perm: Vec<usize>,
    k: [Vec<Complex64>; 4],
    tmp: Vec<Complex64>,
}

impl<'a> Tracker<'a> {
    fn new(h: &'a Homotopy) -> Self {
        let n = h.dim();
        let z = || vec![Complex64::new(0.0, 0.0); n];
        Tracker {
            h,
            ws: h.workspace(),
            val: HomotopyValue::new(n),
            lu: vec![Complex64::new(0.0, 0.0); n * n],
            perm: Vec::with_capacity(n),
            k: [z(), z(), z(), z()],
            tmp: z(),
        }
    }

    /// Writes `-H_x⁻¹ H_t` at `(x, t)` into `out`.
    fn rhs(&mut self, x: &[Complex64], t: f64, out: &mut [Complex64]) -> Result<(), StepError> {
        let n = self.h.dim();
        self.h.evaluate_into(x, t, &mut self.ws, &mut self.val)?;
        self.lu.copy_from_slice(self.val.hx.as_slice());
        lu_factor_in_place(n, n, &mut self.lu, &mut self.perm)?;
        for (o, ht) in out.iter_mut().zip(&self.val.ht) {
            *o = -ht;
        }
        lu_solve_factored(n, &self.lu, &self.perm, out);
        if !finite(out) {
            return Err(StepError::Singular(LinalgError::SingularMatrix { column: 0 }));
        }
        Ok(())
    }

    fn predict(
        &mut self,
        x: &[Complex64],
        t: f64,
        dt: f64,
        predictor: Predictor,
    ) -> Result<Vec<Complex64>, StepError> {
        let mut k = std::mem::take(&mut self.k);
        let mut tmp = std::mem::take(&mut self.tmp);
        let result = (|| match predictor {
            Predictor::Tangent => {
                self.rhs(x, t, &mut k[0])?;
                Ok(x.iter().zip(&k[0]).map(|(xi, ki)| xi + ki * dt).collect())
            }
            Predictor::RungeKutta4 => {
                let [k1, k2, k3, k4] = &mut k;
                self.rhs(x, t, k1)?;
                axpy(&mut tmp, x, k1, 0.5 * dt);
                self.rhs(&tmp, t + 0.5 * dt, k2)?;
                axpy(&mut tmp, x, k2, 0.5 * dt);
                self.rhs(&tmp, t + 0.5 * dt, k3)?;
                axpy(&mut tmp, x, k3, dt);
                self.rhs(&tmp, t + dt, k4)?;
                Ok((0..x.len())
                    .map(|i| x[i] + (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]) * (dt / 6.0))
                    .collect())
            }
        })();
        self.k = k;
        self.tmp = tmp;
        result
    }

    /// Newton iterations on `H(·, t)` starting from `x`.
    fn correct(&mut self, x: &[Complex64], t: f64, tolerance: f64, max_iterations: usize) -> Correction {
        let n = self.h.dim();
        let mut point = x.to_vec();
        let mut last_update = f64::INFINITY;
        for it in 1..=max_iterations {
            if self.h.evaluate_into(&point, t, &mut self.ws, &mut self.val).is_err() {
                return Correction { point, converged: false, iterations: it, last_update };
            }
            self.lu.copy_from_slice(self.val.hx.as_slice());
            if lu_factor_in_place(n, n, &mut self.lu, &mut self.perm).is_err() {
                return Correction { point, converged: false, iterations: it, last_update };
            }
            self.tmp.copy_from_slice(&self.val.h);
            lu_solve_factored(n, &self.lu, &self.perm, &mut self.tmp);
            for (p, d) in point.iter_mut().zip(&self.tmp) {
                *p -= d;
            }
            last_update = inf_norm(&self.tmp);
            if !last_update.is_finite() || !finite(&point) {
                return Correction { point, converged: false, iterations: it, last_update };
            }
            if last_update <= tolerance * inf_norm(&point).max(1.0) {
                return Correction { point, converged: true, iterations: it, last_update };
            }
        }
        Correction { point, converged: false, iterations: max_iterations, last_update }
    }

    fn target_residual(&mut self, x: &[Complex64]) -> f64 {
        let mut values = vec![Complex64::new(0.0, 0.0); self.h.dim()];
        match self.h.evaluate_target_into(x, &mut self.ws, &mut values, &mut []) {
            Ok(()) => inf_norm(&values),
            Err(_) => f64::INFINITY,
        }
    }

    fn track(
        &mut self,
        x0: &[Complex64],
        s: &TrackerSettings,
        mut trace: Option<&mut Vec<StepRecord>>,
    ) -> TrackedPath {
        let n = self.h.dim();
        let mut path = TrackedPath {
            start_point: x0.to_vec(),
            end_point: x0.to_vec(),
            status: PathStatus::NumericalFailure(0.0),
            residual: f64::INFINITY,
            steps_taken: 0,
            newton_iterations_total: 0,
        };
        if x0.len() != n || !finite(x0) {
            return path;
        }
        match self.h.evaluate_into(x0, 0.0, &mut self.ws, &mut self.val) {
            Ok(()) if inf_norm(&self.val.h) <= s.corrector_tolerance => {}
            _ => {
                path.residual = self.target_residual(x0);
                return path;
            }
        }

        let mut x = x0.to_vec();
        let mut t = 0.0_f64;
        let mut dt = s.initial_step;
        let mut successes = 0;
        let status = loop {
            if t >= 1.0 {
                break None;
            }
            let (step, t_next) = if t + dt >= 1.0 { (1.0 - t, 1.0) } else { (dt, t + dt) };
            let accepted = match self.predict(&x, t, step, s.predictor) {
                Ok(guess) => {
                    let c = self.correct(&guess, t_next, s.corrector_tolerance, s.max_corrector_iterations);
                    path.newton_iterations_total += c.iterations;
                    c.converged.then_some(c.point)
                }
                Err(StepError::Evaluation(_)) => break Some(PathStatus::Infinity(t)),
                Err(StepError::Singular(_)) => None,
            };
            if let Some(trace) = trace.as_deref_mut() {
                trace.push(StepRecord { t, dt, accepted: accepted.is_some() });
            }
            match accepted {
                Some(next) => {
                    x = next;
                    t = t_next;
                    path.steps_taken += 1;
                    if inf_norm(&x) > s.divergence_threshold {
                        break Some(PathStatus::Infinity(t));
                    }
                    successes += 1;
                    if successes >= s.successes_before_increase {
                        dt = (dt * s.step_increase_factor).min(s.max_step);
                        successes = 0;
                    }
                }
                None => {
                    successes = 0;
                    dt *= s.step_decrease_factor;
                    if dt < s.min_step {
                        break Some(PathStatus::MinStepFailure(t));
                    }
                }
            }
        };

        path.status = match status {
            Some(failure) => failure,
            None => {
                let polish =
                    polish_target(self.h.target_program(), &x, s.endpoint_tolerance, POLISH_ITERATIONS);
                path.newton_iterations_total += polish.iterations;
                if finite(&polish.point) {
                    x = polish.point;
                }
                let residual = self.target_residual(&x);
                if polish.converged && residual <= s.endpoint_tolerance {
                    PathStatus::Regular
                } else {
                    PathStatus::SingularEndpoint
                }
            }
        };
        path.residual = self.target_residual(&x);
        path.end_point = x;
        path
    }
}

fn axpy(out: &mut [Complex64], x: &[Complex64], k: &[Complex64], a: f64) {
    for ((o, xi), ki) in out.iter_mut().zip(x).zip(k) {
        *o = xi + ki * a;
    }
}

/// Newton's method on a compiled system (value + Jacobian program).
fn polish_target(program: &SlProgram, x: &[Complex64], tolerance: f64, max_iterations: usize) -> Correction {
    let n = program.input_arity();
    let mut ws = SlpWorkspace::new(program);
    let mut values = vec![Complex64::new(0.0, 0.0); n];
    let mut jac = vec![Complex64::new(0.0, 0.0); n * n];
    let mut perm = Vec::with_capacity(n);
    let mut point = x.to_vec();
    let mut last_update = f64::INFINITY;
    for it in 1..=max_iterations {
        if program.evaluate_into(&point, &mut ws, &mut values, &mut jac).is_err()
            || lu_factor_in_place(n, n, &mut jac, &mut perm).is_err()
        {
            return Correction { point, converged: false, iterations: it, last_update };
        }
        lu_solve_factored(n, &jac, &perm, &mut values);
        last_update = inf_norm(&values);
        let next: Vec<Complex64> = point.iter().zip(&values).map(|(p, d)| p - d).collect();
        if !last_update.is_finite() || !finite(&next) {
            return Correction { point, converged: false, iterations: it, last_update };
        }
        point = next;
        if last_update <= tolerance * inf_norm(&point).max(1.0) {
            return Correction { point, converged: true, iterations: it, last_update };
        }
    }
    Correction { point, converged: false, iterations: max_iterations, last_update }
}

/// Tangent of the solution path: `dx/dt = -H_x⁻¹ H_t`.
pub fn davidenko_rhs(h: &Homotopy, x: &[Complex64], t: f64) -> Result<Vec<Complex64>, StepError> {
    let mut out = vec![Complex64::new(0.0, 0.0); h.dim()];
    Tracker::new(h).rhs(x, t, &mut out)?;
    Ok(out)
}

/// One predictor step of size `dt` from `(x, t)`.
pub fn predict(
    h: &Homotopy,
    x: &[Complex64],
    t: f64,
    dt: f64,
    predictor: Predictor,
) -> Result<Vec<Complex64>, StepError> {
    Tracker::new(h).predict(x, t, dt, predictor)
}

/// Newton corrector at fixed `t` using the settings' tolerance and iteration cap.
pub fn correct(h: &Homotopy, x: &[Complex64], t: f64, settings: &TrackerSettings) -> Correction {
    Tracker::new(h).correct(x, t, settings.corrector_tolerance, settings.max_corrector_iterations)
}

/// Follows the path starting at `x0` from `t = 0` to `t = 1`. Failures are
/// reported through [`TrackedPath::status`].
pub fn track_path(h: &Homotopy, x0: &[Complex64], settings: &TrackerSettings) -> TrackedPath {
    Tracker::new(h).track(x0, settings, None)
}

/// [`track_path`] that also returns every attempted step.
pub fn track_path_traced(
    h: &Homotopy,
    x0: &[Complex64],
    settings: &TrackerSettings,
) -> (TrackedPath, Vec<StepRecord>) {
    let mut trace = Vec::new();
    let path = Tracker::new(h).track(x0, settings, Some(&mut trace));
    (path, trace)
}

/// Tracks every start solution through a pre-built homotopy, preserving order.
pub fn track_homotopy(
    h: &Homotopy,
    start_solutions: &[Vec<Complex64>],
    settings: &TrackerSettings,
) -> Result<Vec<TrackedPath>, TrackerError> {
    settings.validate()?;
    if settings.threads == 1 {
        let mut tracker = Tracker::new(h);
        return Ok(start_solutions.iter().map(|x| tracker.track(x, settings, None)).collect());
    }
    let run = || {
        start_solutions
            .par_iter()
            .map_init(|| Tracker::new(h), |tracker, x| tracker.track(x, settings, None))
            .collect()
    };
    if settings.threads == 0 {
        return Ok(run());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(settings.threads)
        .build()
        .map_err(|e| TrackerError::ThreadPool(e.to_string()))?;
    Ok(pool.install(run))
}

/// Tracks the homotopy `(1-t)·start + γ·t·target` from each start solution.
pub fn track(
    start: &PolynomialSystem,
    target: &PolynomialSystem,
    start_solutions: &[Vec<Complex64>],
    gamma: Complex64,
    settings: &TrackerSettings,
) -> Result<Vec<TrackedPath>, TrackerError> {
    let h = make_homotopy(start.clone(), target.clone(), gamma)?;
    track_homotopy(&h, start_solutions, settings)
}

/// A distinct endpoint.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub point: Vec<Complex64>,
    pub status: PathStatus,
    pub residual: f64,
    pub steps: usize,
    /// Number of paths that ended here; more than one signals path jumping
    /// or a singular solution.
    pub multiplicity: usize,
    /// Index of the representative path.
    pub path_index: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub gamma: Complex64,
    pub paths: Vec<TrackedPath>,
    pub solutions: Vec<Solution>,
    /// Paths that did not reach `t = 1`.
    pub failures: usize,
    /// Paths whose endpoint coincided with an earlier one.
    pub duplicates: usize,
}

impl SolveReport {
    pub fn regular_solutions(&self) -> impl Iterator<Item = &Solution> {
        self.solutions.iter().filter(|s| s.status.is_regular())
    }

    pub fn all_regular(&self) -> bool {
        self.paths.iter().all(|p| p.status.is_regular())
    }
}

/// Relative distance below which two endpoints count as the same solution.
pub const DEDUP_TOLERANCE: f64 = 1e-4;

pub fn same_point(a: &[Complex64], b: &[Complex64]) -> bool {
    let diff = a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
    diff <= DEDUP_TOLERANCE * inf_norm(a).max(1.0)
}

/// Collapses endpoints that reached `t = 1` into distinct solutions, keeping
/// the smallest-residual representative of each cluster.
pub fn collect_solutions(gamma: Complex64, paths: Vec<TrackedPath>) -> SolveReport {
    let mut solutions: Vec<Solution> = Vec::new();
    let mut failures = 0;
    let mut duplicates = 0;
    for (index, p) in paths.iter().enumerate() {
        if !p.status.reached_end() {
            failures += 1;
            continue;
        }
        match solutions.iter_mut().find(|s| same_point(&s.point, &p.end_point)) {
            Some(s) => {
                duplicates += 1;
                s.multiplicity += 1;
                if p.residual < s.residual {
                    s.point = p.end_point.clone();
                    s.status = p.status;
                    s.residual = p.residual;
                    s.steps = p.steps_taken;
                    s.path_index = index;
                }
            }
            None => solutions.push(Solution {
                point: p.end_point.clone(),
                status: p.status,
                residual: p.residual,
                steps: p.steps_taken,
                multiplicity: 1,
                path_index: index,
            }),
        }
    }
    SolveReport { gamma, paths, solutions, failures, duplicates }
}

/// Black-box solver: total-degree start system, random `γ` drawn from `seed`,
/// all paths tracked, endpoints deduplicated.
pub fn solve_system(
    target: &PolynomialSystem,
    seed: u64,
    settings: &TrackerSettings,
) -> Result<SolveReport, TrackerError> {
    let (start, start_solutions) = total_degree_start(target)?;
    let gamma = random_gamma(seed);
    let paths = track(&start, target, &start_solutions, gamma, settings)?;
    Ok(collect_solutions(gamma, paths))
}

/// Tracks from a caller-supplied start system and deduplicates the endpoints.
pub fn solve_with_start(
    start: &PolynomialSystem,
    target: &PolynomialSystem,
    start_solutions: &[Vec<Complex64>],
    gamma: Complex64,
    settings: &TrackerSettings,
) -> Result<SolveReport, TrackerError> {
    let paths = track(start, target, start_solutions, gamma, settings)?;
    Ok(collect_solutions(gamma, paths))
}

/// Newton refinement of `approx` on `system` (at most [`REFINE_ITERATIONS`]
/// steps, stopping once `‖Δx‖∞ ≤ tolerance·max(1, ‖x‖∞)`).
pub fn refine(system: &PolynomialSystem, approx: &[Complex64], tolerance: f64) -> Correction {
    if approx.len() != system.nvars() || !system.is_square() {
        return Correction {
            point: approx.to_vec(),
            converged: false,
            iterations: 0,
            last_update: f64::INFINITY,
        };
    }
    let program = compile_system(system);
    polish_target(&program, approx, tolerance, REFINE_ITERATIONS)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_system;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sys(text: &str) -> PolynomialSystem {
        parse_system(text).unwrap()
    }

    #[test]
    fn default_settings_are_valid() {
        TrackerSettings::default().validate().unwrap();
    }

    #[test]
    fn invalid_settings_rejected() {
        let cases: [fn(&mut TrackerSettings); 7] = [
            |s| s.min_step = 0.0,
            |s| s.initial_step = 0.5,
            |s| s.max_step = 2.0,
            |s| s.step_decrease_factor = 1.5,
            |s| s.step_increase_factor = 1.0,
            |s| s.corrector_tolerance = -1.0,
            |s| s.max_corrector_iterations = 0,
        ];
        for f in cases {
            let mut s = TrackerSettings::default();
            f(&mut s);
            assert!(matches!(s.validate(), Err(TrackerError::InvalidSettings(_))));
        }
    }

    #[test]
    fn constant_path_has_zero_tangent() {
        let f = sys("ring x, y\npoly x^2+(y-5)^2-16\npoly x*y");
        let h = make_homotopy(f.clone(), f, c(1.0, 0.0)).unwrap();
        let v = davidenko_rhs(&h, &[c(0.0, 0.0), c(1.0, 0.0)], 0.3).unwrap();
        assert!(v.iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn linear_path_tangent() {
        // (1-t)(x-1) + t(x-2) = x - 1 - t, so x(t) = 1 + t.
        let h = make_homotopy(sys("ring x\npoly x-1"), sys("ring x\npoly x-2"), c(1.0, 0.0)).unwrap();
        let v = davidenko_rhs(&h, &[c(1.0, 0.0)], 0.0).unwrap();
        assert_eq!(v, vec![c(1.0, 0.0)]);
        let p = predict(&h, &[c(1.0, 0.0)], 0.0, 0.3, Predictor::Tangent).unwrap();
        assert!((p[0] - c(1.3, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn corrector_at_exact_solution() {
        let h = make_homotopy(sys("ring x\npoly x-1"), sys("ring x\npoly x-2"), c(1.0, 0.0)).unwrap();
        let r = correct(&h, &[c(1.5, 0.0)], 0.5, &TrackerSettings::default());
        assert!(r.converged);
        assert_eq!(r.iterations, 1);
        assert!(r.last_update <= 1e-15);
    }

    #[test]
    fn corrector_singular_jacobian() {
        let f = sys("ring x\npoly x^2");
        let h = make_homotopy(f.clone(), f, c(1.0, 0.0)).unwrap();
        let r = correct(&h, &[c(0.0, 0.0)], 0.5, &TrackerSettings::default());
        assert!(!r.converged);
    }

    #[test]
    fn refine_examples() {
        let r = refine(&sys("ring x, y\npoly x^2-1\npoly y^2-1"), &[c(0.99999, 0.0), c(1.00001, 0.0)], 1e-14);
        assert!(r.converged);
        assert!((r.point[0] - 1.0).norm() < 1e-12 && (r.point[1] - 1.0).norm() < 1e-12);

        let r = refine(&sys("ring x\npoly x^2"), &[c(0.0, 0.0)], 1e-12);
        assert!(!r.converged);

        let r = refine(&sys("ring x\npoly x^2-2"), &[c(1.0, 0.0), c(1.0, 0.0)], 1e-12);
        assert!(!r.converged);
    }

    #[test]
    fn status_rendering() {
        assert_eq!(PathStatus::MinStepFailure(0.0476190).to_string(), "[M,t=0.04762]");
        assert_eq!(PathStatus::Regular.to_string(), "regular");
        assert_eq!(PathStatus::Infinity(0.5).tag(), "infinity");
        assert_eq!(PathStatus::SingularEndpoint.failure_time(), None);
    }

    #[test]
    fn bad_start_point_is_numerical_failure() {
        let h = make_homotopy(sys("ring x\npoly x-1"), sys("ring x\npoly x-2"), c(1.0, 0.0)).unwrap();
        let s = TrackerSettings::default();
        let p = track_path(&h, &[c(5.0, 0.0)], &s);
        assert_eq!(p.status, PathStatus::NumericalFailure(0.0));
        let p = track_path(&h, &[c(1.0, 0.0), c(0.0, 0.0)], &s);
        assert_eq!(p.status, PathStatus::NumericalFailure(0.0));
    }

    #[test]
    fn empty_start_list() {
        let s = sys("ring x\npoly x-1");
        let out = track(&s, &s, &[], c(1.0, 0.0), &TrackerSettings::default()).unwrap();
        assert!(out.is_empty());
    }

    #[test]
    fn dedup_keeps_smallest_residual() {
        let mk = |x: f64, r: f64, status| TrackedPath {
            start_point: vec![c(0.0, 0.0)],
            end_point: vec![c(x, 0.0)],
            status,
            residual: r,
            steps_taken: 1,
            newton_iterations_total: 1,
        };
        let paths = vec![
            mk(1.0, 1e-9, PathStatus::Regular),
            mk(1.0 + 1e-7, 1e-12, PathStatus::Regular),
            mk(2.0, 1e-9, PathStatus::Regular),
            mk(0.5, 1.0, PathStatus::MinStepFailure(0.3)),
        ];
        let report = collect_solutions(c(1.0, 0.0), paths);
        assert_eq!(report.solutions.len(), 2);
        assert_eq!(report.duplicates, 1);
        assert_eq!(report.failures, 1);
        assert_eq!(report.solutions[0].residual, 1e-12);
        assert_eq!(report.solutions[0].multiplicity, 2);
        assert_eq!(report.solutions[0].path_index, 1);
    }
}
