//! Complex multivariate polynomials in expanded (monomial) form.
//!
//! A [`Polynomial`] is a sparse map from exponent vectors to coefficients;
//! no zero coefficient is ever stored. A [`PolynomialSystem`] pairs a list of
//! polynomials with the variable names they are written in.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use thiserror::Error;

/// Errors raised by polynomial-level operations.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum PolyError {
    #[error("dimension mismatch: expected {expected} coordinates, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("system is not square: {polys} polynomials in {vars} variables")]
    NotSquare { polys: usize, vars: usize },
    #[error("polynomial {index} is identically zero")]
    ZeroPolynomial { index: usize },
    #[error("non-finite coefficient")]
    NonFinite,
}

/// Exponent vector of a monomial; its length is the variable count.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    /// The monomial consisting of a single variable.
    pub fn var(nvars: usize, index: usize) -> Self {
        let mut e = vec![0; nvars];
        e[index] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Graded lexicographic comparison: higher total degree first, ties broken
    /// lexicographically with the first variable most significant.
    pub fn grlex_cmp(&self, other: &Monomial) -> Ordering {
        other.degree().cmp(&self.degree()).then_with(|| other.0.cmp(&self.0))
    }
}

/// A polynomial over the complex numbers in `nvars` variables.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Monomial, Complex64>,
    degree: u32,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial { nvars, terms: BTreeMap::new(), degree: 0 }
    }

    pub fn constant(nvars: usize, c: Complex64) -> Self {
        let mut p = Polynomial::zero(nvars);
        p.add_term(Monomial::one(nvars), c);
        p
    }

    pub fn var(nvars: usize, index: usize) -> Self {
        let mut p = Polynomial::zero(nvars);
        p.add_term(Monomial::var(nvars, index), Complex64::new(1.0, 0.0));
        p
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs, summing
    /// repeated monomials.
    ///
    /// Panics if an exponent vector does not have length `nvars`.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<u32>, Complex64)>,
    {
        let mut p = Polynomial::zero(nvars);
        for (e, c) in terms {
            p.add_term(Monomial::new(e), c);
        }
        p
    }

    /// Adds `c * m` in place.
    pub fn add_term(&mut self, m: Monomial, c: Complex64) {
        assert_eq!(m.nvars(), self.nvars, "monomial arity mismatch");
        if c == Complex64::new(0.0, 0.0) {
            return;
        }
        let entry = self.terms.entry(m.clone()).or_insert(Complex64::new(0.0, 0.0));
        *entry += c;
        if *entry == Complex64::new(0.0, 0.0) {
            self.terms.remove(&m);
            self.refresh_degree();
        } else {
            self.degree = self.degree.max(m.degree());
        }
    }

    fn refresh_degree(&mut self) {
        self.degree = self.terms.keys().map(Monomial::degree).max().unwrap_or(0);
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Maximum total degree over stored terms; 0 for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in exponent-vector lexicographic order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Complex64)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Complex64 {
        self.terms.get(m).copied().unwrap_or_default()
    }

    /// Terms sorted in graded lexicographic order (the printer's order).
    pub fn terms_grlex(&self) -> Vec<(&Monomial, &Complex64)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| a.0.grlex_cmp(b.0));
        v
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), *c);
        }
        out
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Polynomial {
        self.scale(Complex64::new(-1.0, 0.0))
    }

    pub fn scale(&self, s: Complex64) -> Polynomial {
        let mut out = Polynomial::zero(self.nvars);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c * s);
        }
        out
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, exp: u32) -> Polynomial {
        let mut out = Polynomial::constant(self.nvars, Complex64::new(1.0, 0.0));
        for _ in 0..exp {
            out = out.mul(self);
        }
        out
    }
}

/// Evaluates `p` at `x` term by term: each monomial is formed by repeated
/// multiplication and the products are summed in storage order.
///
/// Intentionally naive; it is the reference the straight-line programs are
/// checked against.
pub fn evaluate_dense(p: &Polynomial, x: &[Complex64]) -> Result<Complex64, PolyError> {
    if x.len() != p.nvars {
        return Err(PolyError::DimensionMismatch { expected: p.nvars, got: x.len() });
    }
    let mut sum = Complex64::new(0.0, 0.0);
    for (m, c) in &p.terms {
        let mut term = *c;
        for (xi, &e) in x.iter().zip(m.exponents()) {
            for _ in 0..e {
                term *= xi;
            }
        }
        sum += term;
    }
    Ok(sum)
}

/// A list of polynomials over a shared, named variable list.
#[derive(Debug, Clone, PartialEq)]
pub struct PolynomialSystem {
    variables: Vec<String>,
    polys: Vec<Polynomial>,
}

impl PolynomialSystem {
    /// Panics if any polynomial's arity differs from `variables.len()`.
    pub fn new(variables: Vec<String>, polys: Vec<Polynomial>) -> Self {
        for p in &polys {
            assert_eq!(p.nvars(), variables.len(), "polynomial arity mismatch");
        }
        PolynomialSystem { variables, polys }
    }

    /// Default variable names `x1..xn`.
    pub fn with_default_names(polys: Vec<Polynomial>) -> Self {
        let n = polys.first().map(Polynomial::nvars).unwrap_or(0);
        let variables = (1..=n).map(|i| format!("x{i}")).collect();
        PolynomialSystem::new(variables, polys)
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn polys(&self) -> &[Polynomial] {
        &self.polys
    }

    pub fn nvars(&self) -> usize {
        self.variables.len()
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    pub fn is_square(&self) -> bool {
        self.polys.len() == self.variables.len()
    }

    pub fn degrees(&self) -> Vec<u32> {
        self.polys.iter().map(Polynomial::degree).collect()
    }

    /// Checks the preconditions shared by every solver entry point.
    pub fn check_solvable(&self) -> Result<(), PolyError> {
        if !self.is_square() {
            return Err(PolyError::NotSquare { polys: self.polys.len(), vars: self.variables.len() });
        }
        if let Some(index) = self.polys.iter().position(Polynomial::is_zero) {
            return Err(PolyError::ZeroPolynomial { index });
        }
        let finite =
            self.polys.iter().flat_map(|p| p.terms.values()).all(|c| c.re.is_finite() && c.im.is_finite());
        if !finite {
            return Err(PolyError::NonFinite);
        }
        Ok(())
    }

    pub fn evaluate_dense(&self, x: &[Complex64]) -> Result<Vec<Complex64>, PolyError> {
        self.polys.iter().map(|p| evaluate_dense(p, x)).collect()
    }
}

/// Bézout number of a square system: the product of the degrees.
pub fn total_degree(sys: &PolynomialSystem) -> Result<u64, PolyError> {
    sys.check_solvable()?;
    Ok(sys.polys.iter().map(|p| u64::from(p.degree())).product())
}

fn fmt_coeff(c: &Complex64) -> String {
    let sign = if c.im.is_sign_negative() { '-' } else { '+' };
    format!("({:.16e}{}{:.16e}i)", c.re, sign, c.im.abs())
}

/// Writes a polynomial in canonical form: graded lexicographic term order,
/// every coefficient as a parenthesised `a+bi` pair with 17 significant digits.
pub fn format_polynomial(p: &Polynomial, variables: &[String]) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (k, (m, c)) in p.terms_grlex().into_iter().enumerate() {
        if k > 0 {
            out.push_str(" + ");
        }
        out.push_str(&fmt_coeff(c));
        for (name, &e) in variables.iter().zip(m.exponents()) {
            match e {
                0 => {}
                1 => {
                    out.push('*');
                    out.push_str(name);
                }
                _ => {
                    out.push('*');
                    out.push_str(name);
                    out.push('^');
                    out.push_str(&e.to_string());
                }
            }
        }
    }
    out
}

/// The system file format: a `ring` line followed by one `poly` line per equation.
impl fmt::Display for PolynomialSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ring {}", self.variables.join(", "))?;
        for p in &self.polys {
            writeln!(f, "poly {}", format_polynomial(p, &self.variables))?;
        }
        Ok(())
    }
}
