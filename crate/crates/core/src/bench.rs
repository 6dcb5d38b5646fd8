//! Benchmark families: random dense systems, Katsura, and generalized
//! eigenvalue problems written as polynomial systems.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::ComplexMatrix;
use crate::poly::{Polynomial, PolynomialSystem};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    RandomDense { n: usize, d: u32 },
    Katsura { n: usize },
    Gevp { n: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BenchmarkSpec {
    pub family: Family,
    pub seed: u64,
}

/// A complex number with independent `N(0, 1/2)` parts, so `E|z|² = 1`.
pub fn complex_normal<R: Rng>(rng: &mut R) -> Complex64 {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re * s, im * s)
}

/// Every exponent vector in `n` variables with total degree at most `d`.
pub fn monomials_up_to(n: usize, d: u32) -> Vec<Vec<u32>> {
    fn rec(n: usize, budget: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for e in 0..=budget {
            prefix.push(e);
            rec(n, budget - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, d, &mut Vec::with_capacity(n), &mut out);
    out
}

/// `n` polynomials in `n` variables, each with every monomial of degree at
/// most `d` and complex Gaussian coefficients.
///
/// Panics if `n` or `d` is zero.
pub fn random_dense(n: usize, d: u32, seed: u64) -> PolynomialSystem {
    assert!(n >= 1 && d >= 1, "random_dense needs n, d >= 1");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let monomials = monomials_up_to(n, d);
    let polys = (0..n)
        .map(|_| Polynomial::from_terms(n, monomials.iter().map(|e| (e.clone(), complex_normal(&mut rng)))))
        .collect();
    PolynomialSystem::with_default_names(polys)
}

/// The Katsura system in `u0..u{n-1}`: `n - 1` quadratic convolution
/// equations followed by the linear normalization.
///
/// Panics if `n` is zero.
pub fn katsura(n: usize) -> PolynomialSystem {
    assert!(n >= 1, "katsura needs n >= 1");
    let m = n as i64 - 1;
    let one = Complex64::new(1.0, 0.0);
    let unit = |k: i64| {
        let mut e = vec![0u32; n];
        e[k as usize] += 1;
        e
    };
    let mut polys = Vec::with_capacity(n);
    for i in 0..m {
        let mut p = Polynomial::zero(n);
        for j in -m..=m {
            let (a, b) = (j.abs(), (i - j).abs());
            if a > m || b > m {
                continue;
            }
            let mut e = unit(a);
            e[b as usize] += 1;
            p.add_term(crate::poly::Monomial::new(e), one);
        }
        p.add_term(crate::poly::Monomial::new(unit(i)), -one);
        polys.push(p);
    }
    let mut linear = Polynomial::zero(n);
    linear.add_term(crate::poly::Monomial::new(unit(0)), one);
    for j in 1..=m {
        linear.add_term(crate::poly::Monomial::new(unit(j)), Complex64::new(2.0, 0.0));
    }
    linear.add_term(crate::poly::Monomial::one(n), -one);
    polys.push(linear);
    let names = (0..n).map(|k| format!("u{k}")).collect();
    PolynomialSystem::new(names, polys)
}

/// A generalized eigenvalue problem `A v = λ B v` with the normalization
/// `c·v = 1`, paired with a start problem sharing the normalization.
#[derive(Debug, Clone, PartialEq)]
pub struct GevpInstance {
    pub a: ComplexMatrix,
    pub b: ComplexMatrix,
    pub c: Vec<Complex64>,
    pub target: PolynomialSystem,
    pub start: PolynomialSystem,
    pub start_solutions: Vec<Vec<Complex64>>,
}

impl GevpInstance {
    /// Eigenvalue coordinate of a solution point.
    pub fn eigenvalue(point: &[Complex64]) -> Complex64 {
        *point.last().expect("non-empty point")
    }
}

/// Equations `Σⱼ (A_ij - λ B_ij) vⱼ` for each row, then `c·v - 1`.
/// Variables are `v1..vn, lambda`.
fn gevp_system(a: &ComplexMatrix, b: &ComplexMatrix, c: &[Complex64]) -> PolynomialSystem {
    let n = c.len();
    let nv = n + 1;
    let unit = |k: usize| {
        let mut e = vec![0u32; nv];
        e[k] = 1;
        e
    };
    let mut polys = Vec::with_capacity(nv);
    for i in 0..n {
        let mut p = Polynomial::zero(nv);
        for j in 0..n {
            p.add_term(crate::poly::Monomial::new(unit(j)), a[(i, j)]);
            let mut e = unit(j);
            e[n] = 1;
            p.add_term(crate::poly::Monomial::new(e), -b[(i, j)]);
        }
        polys.push(p);
    }
    let mut norm = Polynomial::zero(nv);
    for (j, cj) in c.iter().enumerate() {
        norm.add_term(crate::poly::Monomial::new(unit(j)), *cj);
    }
    norm.add_term(crate::poly::Monomial::one(nv), Complex64::new(-1.0, 0.0));
    polys.push(norm);
    let mut names: Vec<String> = (1..=n).map(|k| format!("v{k}")).collect();
    names.push("lambda".to_string());
    PolynomialSystem::new(names, polys)
}

/// Builds a GEVP instance from explicit matrices. The start problem uses
/// `diag(1..n)` and the identity, whose solutions are `λ = k`, `v = e_k / c_k`.
///
/// Panics if the shapes disagree or some `c_k` is zero.
pub fn gevp_from_matrices(a: ComplexMatrix, b: ComplexMatrix, c: Vec<Complex64>) -> GevpInstance {
    let n = c.len();
    assert!(n >= 1);
    assert!(a.rows() == n && a.cols() == n && b.rows() == n && b.cols() == n);
    assert!(c.iter().all(|z| z.norm() > 0.0), "normalization weights must be non-zero");
    let mut a0 = ComplexMatrix::zeros(n, n);
    for k in 0..n {
        a0[(k, k)] = Complex64::new((k + 1) as f64, 0.0);
    }
    let b0 = ComplexMatrix::identity(n);
    let start = gevp_system(&a0, &b0, &c);
    let target = gevp_system(&a, &b, &c);
    let start_solutions = (0..n)
        .map(|k| {
            let mut p = vec![Complex64::new(0.0, 0.0); n + 1];
            p[k] = Complex64::new(1.0, 0.0) / c[k];
            p[n] = Complex64::new((k + 1) as f64, 0.0);
            p
        })
        .collect();
    GevpInstance { a, b, c, target, start, start_solutions }
}

/// Smallest normalization weight accepted before redrawing.
const MIN_WEIGHT: f64 = 1e-3;

/// Random `n×n` GEVP with complex Gaussian `A`, `B` and normalization weights.
pub fn gevp(n: usize, seed: u64) -> GevpInstance {
    assert!(n >= 1, "gevp needs n >= 1");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let matrix = |rng: &mut ChaCha8Rng| {
        let entries = (0..n * n).map(|_| complex_normal(rng)).collect();
        ComplexMatrix::from_row_major(n, n, entries)
    };
    let a = matrix(&mut rng);
    let b = matrix(&mut rng);
    let c = (0..n)
        .map(|_| loop {
            let z = complex_normal(&mut rng);
            if z.norm() >= MIN_WEIGHT {
                break z;
            }
        })
        .collect();
    gevp_from_matrices(a, b, c)
}

impl BenchmarkSpec {
    /// Target system of the benchmark (for GEVP, the eigenproblem system).
    pub fn target(&self) -> PolynomialSystem {
        match self.family {
            Family::RandomDense { n, d } => random_dense(n, d, self.seed),
            Family::Katsura { n } => katsura(n),
            Family::Gevp { n } => gevp(n, self.seed).target,
        }
    }
}
