//! Independent reference computations shared by the integration tests.
//!
//! Nothing here calls into the solver's evaluation, linear algebra or
//! tracking code; it only reads generated data (matrices, term maps).

#![allow(dead_code)]

pub mod criteria;

use homcont::bench::complex_normal;
use homcont::linalg::ComplexMatrix;
use homcont::{Complex64, PolynomialSystem};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_point<R: Rng>(rng: &mut R, n: usize) -> Vec<Complex64> {
    (0..n).map(|_| complex_normal(rng)).collect()
}

/// Max-modulus distance between two points.
pub fn dist(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Evaluates each polynomial by summing terms in reverse storage order, with
/// powers taken by `powu`. Differs from the library's dense evaluator in both
/// summation order and monomial construction.
pub fn eval_reordered(sys: &PolynomialSystem, x: &[Complex64]) -> Vec<Complex64> {
    sys.polys()
        .iter()
        .map(|p| {
            let terms: Vec<_> = p.terms().collect();
            terms
                .iter()
                .rev()
                .map(|(m, coef)| m.exponents().iter().zip(x).fold(**coef, |acc, (&e, xi)| acc * xi.powu(e)))
                .sum()
        })
        .collect()
}

/// Number of multiplications naive per-monomial evaluation spends: one per
/// unit of total degree of every term.
pub fn naive_mul_count(sys: &PolynomialSystem) -> usize {
    sys.polys().iter().flat_map(|p| p.terms().map(|(m, _)| m.degree() as usize)).sum()
}

/// Row-major Jacobian by central differences with step `h` along the real axis.
/// Valid for holomorphic maps, where the complex derivative equals the real
/// directional derivative.
pub fn central_difference_jacobian<F>(f: F, x: &[Complex64], h: f64) -> Vec<Complex64>
where
    F: Fn(&[Complex64]) -> Vec<Complex64>,
{
    let n = x.len();
    let m = f(x).len();
    let mut jac = vec![c(0.0, 0.0); m * n];
    for j in 0..n {
        let mut xp = x.to_vec();
        let mut xm = x.to_vec();
        xp[j] += h;
        xm[j] -= h;
        let (fp, fm) = (f(&xp), f(&xm));
        for i in 0..m {
            jac[i * n + j] = (fp[i] - fm[i]) / (2.0 * h);
        }
    }
    jac
}

/// Dense polynomial in one variable, coefficients lowest degree first.
pub type UniPoly = Vec<Complex64>;

fn uni_mul(a: &UniPoly, b: &UniPoly) -> UniPoly {
    let mut out = vec![c(0.0, 0.0); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn permutations(n: usize) -> Vec<(Vec<usize>, f64)> {
    // Heap's algorithm with sign tracking.
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    let mut cnt = vec![0usize; n];
    let mut sign = 1.0;
    out.push((p.clone(), sign));
    let mut i = 0;
    while i < n {
        if cnt[i] < i {
            if i % 2 == 0 {
                p.swap(0, i);
            } else {
                p.swap(cnt[i], i);
            }
            sign = -sign;
            out.push((p.clone(), sign));
            cnt[i] += 1;
            i = 0;
        } else {
            cnt[i] = 0;
            i += 1;
        }
    }
    out
}

/// Coefficients of `det(A - λB)` by the Leibniz permutation expansion.
pub fn det_pencil(a: &ComplexMatrix, b: &ComplexMatrix) -> UniPoly {
    let n = a.rows();
    let mut total = vec![c(0.0, 0.0); n + 1];
    for (perm, sign) in permutations(n) {
        let mut prod: UniPoly = vec![c(sign, 0.0)];
        for (i, &j) in perm.iter().enumerate() {
            prod = uni_mul(&prod, &vec![a[(i, j)], -b[(i, j)]]);
        }
        for (k, v) in prod.into_iter().enumerate() {
            total[k] += v;
        }
    }
    total
}

fn horner(p: &UniPoly, z: Complex64) -> Complex64 {
    p.iter().rev().fold(c(0.0, 0.0), |acc, a| acc * z + a)
}

fn derivative(p: &UniPoly) -> UniPoly {
    p.iter().enumerate().skip(1).map(|(k, a)| a * k as f64).collect()
}

/// All roots by Durand-Kerner simultaneous iteration, each then polished
/// with Newton on the original polynomial.
pub fn poly_roots(p: &UniPoly) -> Vec<Complex64> {
    let deg = p.len() - 1;
    let lead = p[deg];
    let monic: UniPoly = p.iter().map(|a| a / lead).collect();
    let seed = c(0.4, 0.9);
    let mut z: Vec<Complex64> = (0..deg).map(|k| seed.powu(k as u32)).collect();
    for _ in 0..2000 {
        let mut delta: f64 = 0.0;
        for i in 0..deg {
            let mut denom = c(1.0, 0.0);
            for j in 0..deg {
                if i != j {
                    denom *= z[i] - z[j];
                }
            }
            let step = horner(&monic, z[i]) / denom;
            z[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-15 {
            break;
        }
    }
    let dp = derivative(p);
    for r in z.iter_mut() {
        for _ in 0..5 {
            let d = horner(&dp, *r);
            if d.norm() == 0.0 {
                break;
            }
            *r -= horner(p, *r) / d;
        }
    }
    z
}

/// Greedy matching of two equally sized multisets of complex numbers;
/// returns the largest matched distance.
pub fn multiset_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let mut used = vec![false; b.len()];
    let mut worst: f64 = 0.0;
    for x in a {
        let (k, d) = b
            .iter()
            .enumerate()
            .filter(|(k, _)| !used[*k])
            .map(|(k, y)| (k, (x - y).norm()))
            .min_by(|p, q| p.1.total_cmp(&q.1))
            .unwrap();
        used[k] = true;
        worst = worst.max(d);
    }
    worst
}

/// Points of `a` matched one-to-one against `b` within `tol`, in any order.
pub fn same_point_sets(a: &[Vec<Complex64>], b: &[Vec<Complex64>], tol: f64) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut used = vec![false; b.len()];
    for p in a {
        match (0..b.len()).find(|&k| !used[k] && dist(p, &b[k]) <= tol) {
            Some(k) => used[k] = true,
            None => return false,
        }
    }
    true
}

/// The systems of the worked two-variable example.
pub fn circle_start() -> PolynomialSystem {
    homcont::parse_system("ring x, y\npoly x^2-1\npoly y^2-1").unwrap()
}

pub fn circle_target() -> PolynomialSystem {
    homcont::parse_system("ring x, y\npoly x^2+(y-5)^2-16\npoly x*y").unwrap()
}

/// Start solutions in the order (1,-1), (1,1), (-1,1), (-1,-1).
pub fn circle_start_solutions() -> Vec<Vec<Complex64>> {
    [[1.0, -1.0], [1.0, 1.0], [-1.0, 1.0], [-1.0, -1.0]]
        .iter()
        .map(|p| vec![c(p[0], 0.0), c(p[1], 0.0)])
        .collect()
}

/// The four solutions of the target system.
pub fn circle_solutions() -> Vec<Vec<Complex64>> {
    vec![
        vec![c(0.0, 0.0), c(9.0, 0.0)],
        vec![c(0.0, 0.0), c(1.0, 0.0)],
        vec![c(0.0, 3.0), c(0.0, 0.0)],
        vec![c(0.0, -3.0), c(0.0, 0.0)],
    ]
}
