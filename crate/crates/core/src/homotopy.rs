//! The linear homotopy `H(x, t) = (1 - t)·g(x) + γ·t·f(x)` between a start
//! system `g` and a target system `f`, and the total-degree start system.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::linalg::ComplexMatrix;
use crate::poly::{total_degree, Monomial, PolyError, Polynomial, PolynomialSystem};
use crate::slp::{compile_system, SlProgram, SlpError, SlpWorkspace};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HomotopyError {
    #[error("start and target differ in shape: {0}")]
    DimensionMismatch(String),
    #[error("gamma must be a finite non-zero complex number")]
    InvalidGamma,
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Slp(#[from] SlpError),
}

/// Builds `xᵢ^dᵢ - 1` with `dᵢ = deg fᵢ`, together with all `∏dᵢ` start
/// solutions (tuples of roots of unity, last coordinate varying fastest).
pub fn total_degree_start(
    target: &PolynomialSystem,
) -> Result<(PolynomialSystem, Vec<Vec<Complex64>>), HomotopyError> {
    total_degree(target)?;
    let n = target.nvars();
    let degrees = target.degrees();
    let polys = degrees
        .iter()
        .enumerate()
        .map(|(i, &d)| {
            let mut e = vec![0; n];
            e[i] = d;
            let mut p = Polynomial::zero(n);
            p.add_term(Monomial::new(e), Complex64::new(1.0, 0.0));
            p.add_term(Monomial::one(n), Complex64::new(-1.0, 0.0));
            p
        })
        .collect();
    let start = PolynomialSystem::new(target.variables().to_vec(), polys);

    let roots: Vec<Vec<Complex64>> = degrees
        .iter()
        .map(|&d| (0..d).map(|k| Complex64::from_polar(1.0, TAU * f64::from(k) / f64::from(d))).collect())
        .collect();
    let mut solutions = vec![Vec::with_capacity(n)];
    for r in &roots {
        solutions = solutions
            .into_iter()
            .flat_map(|prefix| {
                r.iter().map(move |z| {
                    let mut p = prefix.clone();
                    p.push(*z);
                    p
                })
            })
            .collect();
    }
    Ok((start, solutions))
}

/// A point drawn uniformly from the unit circle, determined by `seed`.
pub fn random_gamma(seed: u64) -> Complex64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let angle: f64 = rng.random::<f64>() * TAU;
    Complex64::from_polar(1.0, angle)
}

/// Compiled homotopy between `start` (at `t = 0`) and `gamma·target` (at `t = 1`).
#[derive(Debug, Clone)]
pub struct Homotopy {
    start: PolynomialSystem,
    target: PolynomialSystem,
    gamma: Complex64,
    start_program: SlProgram,
    target_program: SlProgram,
}

pub fn make_homotopy(
    start: PolynomialSystem,
    target: PolynomialSystem,
    gamma: Complex64,
) -> Result<Homotopy, HomotopyError> {
    Homotopy::new(start, target, gamma)
}

/// Scratch space for [`Homotopy::evaluate_into`]; one per concurrent caller.
#[derive(Debug, Clone)]
pub struct HomotopyWorkspace {
    start_ws: SlpWorkspace,
    target_ws: SlpWorkspace,
    g: Vec<Complex64>,
    gx: Vec<Complex64>,
    f: Vec<Complex64>,
    fx: Vec<Complex64>,
}

/// `H`, `∂H/∂x` and `∂H/∂t` at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct HomotopyValue {
    pub h: Vec<Complex64>,
    pub hx: ComplexMatrix,
    pub ht: Vec<Complex64>,
}

impl HomotopyValue {
    pub fn new(n: usize) -> Self {
        HomotopyValue {
            h: vec![Complex64::new(0.0, 0.0); n],
            hx: ComplexMatrix::zeros(n, n),
            ht: vec![Complex64::new(0.0, 0.0); n],
        }
    }
}

impl Homotopy {
    pub fn new(
        start: PolynomialSystem,
        target: PolynomialSystem,
        gamma: Complex64,
    ) -> Result<Self, HomotopyError> {
        if gamma == Complex64::new(0.0, 0.0) || !gamma.re.is_finite() || !gamma.im.is_finite() {
            return Err(HomotopyError::InvalidGamma);
        }
        if start.nvars() != target.nvars() || start.len() != target.len() {
            return Err(HomotopyError::DimensionMismatch(format!(
                "start is {}x{}, target is {}x{}",
                start.len(),
                start.nvars(),
                target.len(),
                target.nvars()
            )));
        }
        if !target.is_square() {
            return Err(PolyError::NotSquare { polys: target.len(), vars: target.nvars() }.into());
        }
        let start_program = compile_system(&start);
        let target_program = compile_system(&target);
        Ok(Homotopy { start, target, gamma, start_program, target_program })
    }

    pub fn start(&self) -> &PolynomialSystem {
        &self.start
    }

    pub fn target(&self) -> &PolynomialSystem {
        &self.target
    }

    pub fn gamma(&self) -> Complex64 {
        self.gamma
    }

    pub fn start_program(&self) -> &SlProgram {
        &self.start_program
    }

    pub fn target_program(&self) -> &SlProgram {
        &self.target_program
    }

    /// Number of equations (and unknowns).
    pub fn dim(&self) -> usize {
        self.target.nvars()
    }

    pub fn workspace(&self) -> HomotopyWorkspace {
        let n = self.dim();
        let zeros = |k| vec![Complex64::new(0.0, 0.0); k];
        HomotopyWorkspace {
            start_ws: SlpWorkspace::new(&self.start_program),
            target_ws: SlpWorkspace::new(&self.target_program),
            g: zeros(n),
            gx: zeros(n * n),
            f: zeros(n),
            fx: zeros(n * n),
        }
    }

    /// Evaluates `H`, `H_x` and `H_t = γ·f - g` at `(x, t)`.
    pub fn evaluate_into(
        &self,
        x: &[Complex64],
        t: f64,
        ws: &mut HomotopyWorkspace,
        out: &mut HomotopyValue,
    ) -> Result<(), HomotopyError> {
        self.start_program.evaluate_into(x, &mut ws.start_ws, &mut ws.g, &mut ws.gx)?;
        self.target_program.evaluate_into(x, &mut ws.target_ws, &mut ws.f, &mut ws.fx)?;
        let a = Complex64::new(1.0 - t, 0.0);
        let b = self.gamma * t;
        for i in 0..self.dim() {
            out.h[i] = a * ws.g[i] + b * ws.f[i];
            out.ht[i] = self.gamma * ws.f[i] - ws.g[i];
        }
        for ((h, g), f) in out.hx.as_mut_slice().iter_mut().zip(&ws.gx).zip(&ws.fx) {
            *h = a * g + b * f;
        }
        let finite = |z: &Complex64| z.re.is_finite() && z.im.is_finite();
        if !(out.h.iter().all(finite) && out.ht.iter().all(finite) && out.hx.is_finite()) {
            return Err(SlpError::Overflow.into());
        }
        Ok(())
    }

    pub fn evaluate(&self, x: &[Complex64], t: f64) -> Result<HomotopyValue, HomotopyError> {
        let mut ws = self.workspace();
        let mut out = HomotopyValue::new(self.dim());
        self.evaluate_into(x, t, &mut ws, &mut out)?;
        Ok(out)
    }

    /// Target values and Jacobian (without `γ`) at `x`.
    pub fn evaluate_target_into(
        &self,
        x: &[Complex64],
        ws: &mut HomotopyWorkspace,
        values: &mut [Complex64],
        jacobian: &mut [Complex64],
    ) -> Result<(), HomotopyError> {
        self.target_program.evaluate_into(x, &mut ws.target_ws, values, jacobian)?;
        Ok(())
    }
}
