//! Dense complex linear algebra: LU with partial pivoting and the ∞-norm.

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    #[error("matrix is numerically singular (pivot column {column})")]
    SingularMatrix { column: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

/// Row-major dense complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix { rows, cols, entries: vec![Complex64::new(0.0, 0.0); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        ComplexMatrix { rows: r, cols: c, entries: rows.iter().flatten().copied().collect() }
    }

    pub fn from_row_major(rows: usize, cols: usize, entries: Vec<Complex64>) -> Self {
        assert_eq!(rows * cols, entries.len());
        ComplexMatrix { rows, cols, entries }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn as_mut_slice(&mut self) -> &mut [Complex64] {
        &mut self.entries
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul_vec(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows).map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum()).collect()
    }

    pub fn mul_mat(&self, other: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = ComplexMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    /// Maximum absolute row sum.
    pub fn inf_norm(&self) -> f64 {
        (0..self.rows).map(|i| self.row(i).iter().map(|z| z.norm()).sum::<f64>()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.entries.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.entries[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.entries[i * self.cols + j]
    }
}

/// Largest modulus of the entries; 0 for an empty slice.
pub fn inf_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Relative pivot floor: a pivot is rejected when its modulus falls below this
/// fraction of the largest modulus originally present in its column.
pub const PIVOT_TOLERANCE: f64 = 1e-14;

/// Packed LU factors of a square matrix with row permutation `perm`, so that
/// `P·A = L·U` with unit-diagonal `L`.
#[derive(Debug, Clone)]
pub struct LuFactors {
    n: usize,
    lu: Vec<Complex64>,
    perm: Vec<usize>,
}

impl LuFactors {
    /// Factors `a` in place of a copy.
    pub fn new(a: &ComplexMatrix) -> Result<Self, LinalgError> {
        let mut lu = a.entries.clone();
        let mut perm = Vec::new();
        lu_factor_in_place(a.rows, a.cols, &mut lu, &mut perm)?;
        Ok(LuFactors { n: a.rows, lu, perm })
    }

    pub fn solve(&self, b: &[Complex64]) -> Result<Vec<Complex64>, LinalgError> {
        if b.len() != self.n {
            return Err(LinalgError::DimensionMismatch(format!(
                "rhs has length {}, matrix is {}x{}",
                b.len(),
                self.n,
                self.n
            )));
        }
        let mut x = b.to_vec();
        lu_solve_factored(self.n, &self.lu, &self.perm, &mut x);
        Ok(x)
    }

    /// Row permutation: row `i` of `P·A` is row `perm[i]` of `A`.
    pub fn permutation(&self) -> &[usize] {
        &self.perm
    }

    pub fn lower(&self) -> ComplexMatrix {
        let n = self.n;
        let mut l = ComplexMatrix::identity(n);
        for i in 0..n {
            for j in 0..i {
                l[(i, j)] = self.lu[i * n + j];
            }
        }
        l
    }

    pub fn upper(&self) -> ComplexMatrix {
        let n = self.n;
        let mut u = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                u[(i, j)] = self.lu[i * n + j];
            }
        }
        u
    }
}

/// Factors the row-major `n×n` matrix in `a` in place; `perm` is overwritten
/// with the row permutation.
pub fn lu_factor_in_place(
    rows: usize,
    cols: usize,
    a: &mut [Complex64],
    perm: &mut Vec<usize>,
) -> Result<(), LinalgError> {
    if rows != cols || a.len() != rows * cols {
        return Err(LinalgError::DimensionMismatch(format!("expected a square matrix, got {rows}x{cols}")));
    }
    let n = rows;
    perm.clear();
    perm.extend(0..n);
    let col_scale: Vec<f64> =
        (0..n).map(|k| (0..n).map(|i| a[i * n + k].norm()).fold(0.0, f64::max)).collect();
    for k in 0..n {
        let mut p = k;
        let mut best = a[k * n + k].norm();
        for i in k + 1..n {
            let m = a[i * n + k].norm();
            if m > best {
                best = m;
                p = i;
            }
        }
        if best == 0.0 || !best.is_finite() || best < PIVOT_TOLERANCE * col_scale[k] {
            return Err(LinalgError::SingularMatrix { column: k });
        }
        if p != k {
            for j in 0..n {
                a.swap(k * n + j, p * n + j);
            }
            perm.swap(k, p);
        }
        let pivot = a[k * n + k];
        for i in k + 1..n {
            let factor = a[i * n + k] / pivot;
            a[i * n + k] = factor;
            if factor != Complex64::new(0.0, 0.0) {
                for j in k + 1..n {
                    let u = a[k * n + j];
                    a[i * n + j] -= factor * u;
                }
            }
        }
    }
    Ok(())
}

/// Solves with factors from [`lu_factor_in_place`], overwriting `b` with the solution.
pub fn lu_solve_factored(n: usize, lu: &[Complex64], perm: &[usize], b: &mut [Complex64]) {
    let permuted: Vec<Complex64> = perm.iter().map(|&p| b[p]).collect();
    b.copy_from_slice(&permuted);
    for i in 0..n {
        let mut s = b[i];
        for j in 0..i {
            s -= lu[i * n + j] * b[j];
        }
        b[i] = s;
    }
    for i in (0..n).rev() {
        let mut s = b[i];
        for j in i + 1..n {
            s -= lu[i * n + j] * b[j];
        }
        b[i] = s / lu[i * n + i];
    }
}

/// Solves `A x = b` by LU with partial pivoting.
pub fn lu_solve(a: &ComplexMatrix, b: &[Complex64]) -> Result<Vec<Complex64>, LinalgError> {
    if a.rows != a.cols || b.len() != a.rows {
        return Err(LinalgError::DimensionMismatch(format!(
            "{}x{} matrix with rhs of length {}",
            a.rows,
            a.cols,
            b.len()
        )));
    }
    LuFactors::new(a)?.solve(b)
}
