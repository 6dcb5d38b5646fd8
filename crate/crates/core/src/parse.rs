//! Reader for the text system format.
//!
//! ```text
//! # comment
//! ring x, y
//! poly x^2 + (y-5)^2 - 16
//! poly x*y
//! ```
//!
//! Expressions use `+ - * ^`, parentheses, decimal literals (optionally with
//! an exponent), and the imaginary unit `i`, either standalone or as a suffix
//! on a literal (`0.8i`). Precedence from tightest: `^`, unary minus, `*`,
//! binary `+ -`. Exponents must be non-negative integer literals.

use num_complex::Complex64;
use thiserror::Error;

use crate::poly::{Polynomial, PolynomialSystem};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParseError {
    #[error("{line}:{col}: syntax error: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("{line}:{col}: unknown identifier `{name}`")]
    UnknownIdentifier { line: usize, col: usize, name: String },
    #[error("{line}:{col}: exponent must be a non-negative integer literal")]
    BadExponent { line: usize, col: usize },
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Imag(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    Comma,
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    col: usize,
    // Source text of numeric literals, needed to validate exponents.
    text: String,
}

fn lex(src: &str, line: usize, col0: usize) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut k = 0;
    while k < chars.len() {
        let c = chars[k];
        let col = col0 + k;
        let single = match c {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ',' => Some(Tok::Comma),
            _ => None,
        };
        if let Some(tok) = single {
            out.push(Spanned { tok, col, text: c.to_string() });
            k += 1;
            continue;
        }
        if c.is_whitespace() {
            k += 1;
            continue;
        }
        if c.is_ascii_digit() || c == '.' {
            let start = k;
            while k < chars.len() && (chars[k].is_ascii_digit() || chars[k] == '.') {
                k += 1;
            }
            // Optional exponent, only when followed by digits.
            if k < chars.len() && (chars[k] == 'e' || chars[k] == 'E') {
                let mut j = k + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    while j < chars.len() && chars[j].is_ascii_digit() {
                        j += 1;
                    }
                    k = j;
                }
            }
            let text: String = chars[start..k].iter().collect();
            let value: f64 = text.parse().map_err(|_| ParseError::Syntax {
                line,
                col,
                msg: format!("malformed number `{text}`"),
            })?;
            let imaginary = k < chars.len()
                && chars[k] == 'i'
                && !chars.get(k + 1).is_some_and(|n| n.is_alphanumeric() || *n == '_');
            if imaginary {
                k += 1;
                out.push(Spanned { tok: Tok::Imag(value), col, text });
            } else {
                out.push(Spanned { tok: Tok::Num(value), col, text });
            }
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let start = k;
            while k < chars.len() && (chars[k].is_alphanumeric() || chars[k] == '_') {
                k += 1;
            }
            let text: String = chars[start..k].iter().collect();
            out.push(Spanned { tok: Tok::Ident(text.clone()), col, text });
            continue;
        }
        return Err(ParseError::Syntax { line, col, msg: format!("unexpected character `{c}`") });
    }
    Ok(out)
}

struct ExprParser<'a> {
    toks: Vec<Spanned>,
    pos: usize,
    line: usize,
    end_col: usize,
    vars: &'a [String],
}

impl<'a> ExprParser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |s| s.col)
    }

    fn syntax<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax { line: self.line, col: self.col(), msg: msg.into() })
    }

    fn expr(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = self.unary()?;
        while let Some(Tok::Star) = self.peek() {
            self.pos += 1;
            acc = acc.mul(&self.unary()?);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Polynomial, ParseError> {
        if let Some(Tok::Minus) = self.peek() {
            self.pos += 1;
            return Ok(self.unary()?.neg());
        }
        self.power()
    }

    fn power(&mut self) -> Result<Polynomial, ParseError> {
        let base = self.atom()?;
        if let Some(Tok::Caret) = self.peek() {
            self.pos += 1;
            let e = self.exponent()?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    // Right-associative tower of integer literals: 2^3^2 = 2^9.
    fn exponent(&mut self) -> Result<u32, ParseError> {
        let col = self.col();
        let bad = ParseError::BadExponent { line: self.line, col };
        let lit = match self.toks.get(self.pos) {
            Some(Spanned { tok: Tok::Num(_), text, .. }) => text.clone(),
            _ => return Err(bad),
        };
        if !lit.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad);
        }
        let base: u32 = lit.parse().map_err(|_| bad.clone())?;
        self.pos += 1;
        if let Some(Tok::Caret) = self.peek() {
            self.pos += 1;
            let rest = self.exponent()?;
            return base.checked_pow(rest).ok_or(bad);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Polynomial, ParseError> {
        let n = self.vars.len();
        let Some(sp) = self.toks.get(self.pos).cloned() else {
            return self.syntax("unexpected end of expression");
        };
        match sp.tok {
            Tok::Num(v) => {
                self.pos += 1;
                Ok(Polynomial::constant(n, Complex64::new(v, 0.0)))
            }
            Tok::Imag(v) => {
                self.pos += 1;
                Ok(Polynomial::constant(n, Complex64::new(0.0, v)))
            }
            Tok::Ident(name) => {
                self.pos += 1;
                if name == "i" {
                    return Ok(Polynomial::constant(n, Complex64::new(0.0, 1.0)));
                }
                match self.vars.iter().position(|v| *v == name) {
                    Some(idx) => Ok(Polynomial::var(n, idx)),
                    None => Err(ParseError::UnknownIdentifier { line: self.line, col: sp.col, name }),
                }
            }
            Tok::LParen => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return self.syntax("expected `)`");
                }
                self.pos += 1;
                Ok(inner)
            }
            _ => self.syntax(format!("unexpected token `{}`", sp.text)),
        }
    }
}

fn parse_expr_tokens(
    toks: Vec<Spanned>,
    vars: &[String],
    line: usize,
    end_col: usize,
) -> Result<Polynomial, ParseError> {
    let mut p = ExprParser { toks, pos: 0, line, end_col, vars };
    let poly = p.expr()?;
    if p.pos != p.toks.len() {
        return p.syntax("trailing input");
    }
    Ok(poly)
}

fn strip_comment(line: &str) -> &str {
    line.split('#').next().unwrap_or("")
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_alphabetic() || c == '_')
        && chars.all(|c| c.is_alphanumeric() || c == '_')
}

/// Parses a whole system file.
pub fn parse_system(text: &str) -> Result<PolynomialSystem, ParseError> {
    let mut variables: Option<Vec<String>> = None;
    let mut polys = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = strip_comment(raw);
        let trimmed = content.trim_start();
        if trimmed.trim().is_empty() {
            continue;
        }
        let indent = content.len() - trimmed.len();
        let (keyword, rest) = match trimmed.find(char::is_whitespace) {
            Some(k) => (&trimmed[..k], &trimmed[k..]),
            None => (trimmed, ""),
        };
        let rest_col = indent + keyword.len() + 1;
        match (keyword, &variables) {
            ("ring", None) => {
                let mut names = Vec::new();
                for (k, piece) in rest.split(',').enumerate() {
                    let name = piece.trim();
                    if !is_identifier(name) || name == "i" {
                        return Err(ParseError::Syntax {
                            line,
                            col: rest_col,
                            msg: format!("invalid variable name `{name}` at position {}", k + 1),
                        });
                    }
                    if names.iter().any(|n| n == name) {
                        return Err(ParseError::Syntax {
                            line,
                            col: rest_col,
                            msg: format!("duplicate variable `{name}`"),
                        });
                    }
                    names.push(name.to_string());
                }
                variables = Some(names);
            }
            ("ring", Some(_)) => {
                return Err(ParseError::Syntax {
                    line,
                    col: indent + 1,
                    msg: "duplicate `ring` declaration".into(),
                })
            }
            ("poly", Some(vars)) => {
                let toks = lex(rest, line, rest_col)?;
                polys.push(parse_expr_tokens(toks, vars, line, rest_col + rest.len())?);
            }
            ("poly", None) => {
                return Err(ParseError::Syntax {
                    line,
                    col: indent + 1,
                    msg: "`poly` before `ring` declaration".into(),
                })
            }
            _ => {
                return Err(ParseError::Syntax {
                    line,
                    col: indent + 1,
                    msg: format!("expected `ring` or `poly`, found `{keyword}`"),
                })
            }
        }
    }
    let Some(variables) = variables else {
        return Err(ParseError::Syntax {
            line: text.lines().count().max(1),
            col: 1,
            msg: "missing `ring` declaration".into(),
        });
    };
    Ok(PolynomialSystem::new(variables, polys))
}

/// Parses a constant complex expression such as `0.6+0.8i` or `-3*i`.
pub fn parse_complex(text: &str) -> Result<Complex64, ParseError> {
    let toks = lex(text, 1, 1)?;
    let p = parse_expr_tokens(toks, &[], 1, text.len() + 1)?;
    Ok(p.coefficient(&crate::poly::Monomial::one(0)))
}

/// Parses one solutions-file line: comma-separated complex constants.
pub fn parse_point(text: &str, line: usize) -> Result<Vec<Complex64>, ParseError> {
    let mut out = Vec::new();
    let mut col = 1;
    for piece in text.split(',') {
        let toks = lex(piece, line, col)?;
        let p = parse_expr_tokens(toks, &[], line, col + piece.len())?;
        out.push(p.coefficient(&crate::poly::Monomial::one(0)));
        col += piece.len() + 1;
    }
    Ok(out)
}

/// Parses a solutions file: one point per non-empty, non-comment line.
pub fn parse_points(text: &str) -> Result<Vec<Vec<Complex64>>, ParseError> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !strip_comment(l).trim().is_empty())
        .map(|(k, l)| parse_point(strip_comment(l), k + 1))
        .collect()
}

/// Formats a point as one solutions-file line.
pub fn format_point(point: &[Complex64]) -> String {
    point
        .iter()
        .map(|c| {
            let sign = if c.im.is_sign_negative() { '-' } else { '+' };
            format!("{:.16e}{}{:.16e}i", c.re, sign, c.im.abs())
        })
        .collect::<Vec<_>>()
        .join(", ")
}
