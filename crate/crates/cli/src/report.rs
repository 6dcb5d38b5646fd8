//! Output records shared by the subcommands.

use std::fmt::Write;

use homcont::tracker::SolveReport;
use homcont::{Complex64, PathStatus};
use serde::Serialize;

#[derive(Debug, Serialize)]
pub struct JsonSolution {
    pub point: Vec<[f64; 2]>,
    pub status: String,
    pub residual: f64,
    pub steps: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_fail: Option<f64>,
    /// Bracketed status marker; only used for human output.
    #[serde(skip)]
    label: String,
}

#[derive(Debug, Serialize)]
pub struct JsonReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<[f64; 2]>,
    pub solutions: Vec<JsonSolution>,
    pub failures: usize,
    pub duplicates: usize,
    pub wall_time_s: f64,
}

fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

impl JsonSolution {
    fn new(point: &[Complex64], status: PathStatus, residual: f64, steps: usize) -> Self {
        JsonSolution {
            point: point.iter().copied().map(pair).collect(),
            status: status.tag().to_string(),
            residual,
            steps,
            t_fail: status.failure_time(),
            label: status.to_string(),
        }
    }

    pub fn refined(point: &[Complex64], converged: bool, residual: f64, iterations: usize) -> Self {
        let status = if converged { "converged" } else { "not_converged" };
        JsonSolution {
            point: point.iter().copied().map(pair).collect(),
            status: status.to_string(),
            residual,
            steps: iterations,
            t_fail: None,
            label: status.to_string(),
        }
    }
}

impl JsonReport {
    /// One entry per tracked path, in start-solution order.
    pub fn per_path(report: &SolveReport, wall_time_s: f64) -> Self {
        let solutions = report
            .paths
            .iter()
            .map(|p| JsonSolution::new(&p.end_point, p.status, p.residual, p.steps_taken))
            .collect();
        JsonReport {
            gamma: Some(pair(report.gamma)),
            solutions,
            failures: report.failures,
            duplicates: report.duplicates,
            wall_time_s,
        }
    }

    /// One entry per distinct endpoint.
    pub fn distinct(report: &SolveReport, wall_time_s: f64) -> Self {
        let solutions = report
            .solutions
            .iter()
            .map(|s| JsonSolution::new(&s.point, s.status, s.residual, s.steps))
            .collect();
        JsonReport {
            gamma: Some(pair(report.gamma)),
            solutions,
            failures: report.failures,
            duplicates: report.duplicates,
            wall_time_s,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }

    /// Plain-text table. Failed paths print only their status marker.
    pub fn human(&self, per_path: bool) -> String {
        let mut out = String::new();
        if let Some([re, im]) = self.gamma {
            writeln!(out, "gamma = {}", complex(Complex64::new(re, im))).unwrap();
        }
        for (k, s) in self.solutions.iter().enumerate() {
            if s.t_fail.is_some() {
                writeln!(out, "{:>4}  {}", k + 1, s.label).unwrap();
                continue;
            }
            let coords: Vec<String> =
                s.point.iter().map(|&[re, im]| complex(Complex64::new(re, im))).collect();
            writeln!(
                out,
                "{:>4}  {{{}}}  {}  residual {:.1e}  steps {}",
                k + 1,
                coords.join(", "),
                s.label,
                s.residual,
                s.steps
            )
            .unwrap();
        }
        let noun = if per_path { "paths" } else { "solutions" };
        writeln!(
            out,
            "{} {noun}, {} failed, {} duplicates, {:.3} s",
            self.solutions.len(),
            self.failures,
            self.duplicates,
            self.wall_time_s
        )
        .unwrap();
        out
    }
}

/// Ten decimal places with trailing zeros dropped; parts below
/// `1e-10` print as zero.
fn real(x: f64) -> String {
    if x.abs() < 1e-10 {
        return "0".to_string();
    }
    let s = format!("{x:.10}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    s.to_string()
}

fn complex(z: Complex64) -> String {
    let (re, im) = (real(z.re), real(z.im));
    match (re.as_str(), im.as_str()) {
        (_, "0") => re,
        ("0", _) => format!("{im}i"),
        _ if im.starts_with('-') => format!("{re}{im}i"),
        _ => format!("{re}+{im}i"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_formatting() {
        assert_eq!(complex(Complex64::new(0.6, 0.8)), "0.6+0.8i");
        assert_eq!(complex(Complex64::new(1e-14, -3.0)), "-3i");
        assert_eq!(complex(Complex64::new(9.0, -1e-12)), "9");
        assert_eq!(complex(Complex64::new(-0.5, -0.25)), "-0.5-0.25i");
        assert_eq!(complex(Complex64::new(0.0, 0.0)), "0");
    }
}
