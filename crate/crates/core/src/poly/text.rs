use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed};

use super::{BiPoly, Monomial};
use crate::error::{Error, Result};
use crate::ring::{parse_rational, Rational};

fn monomial_text(m: &Monomial) -> Vec<String> {
    let mut parts = Vec::new();
    for (var, e) in [("x", m.h), ("y", m.k)] {
        match e {
            0 => {}
            1 => parts.push(var.to_string()),
            _ => parts.push(format!("{var}^{e}")),
        }
    }
    parts
}

fn monomial_latex(m: &Monomial) -> Vec<String> {
    let mut parts = Vec::new();
    for (var, e) in [("x", m.h), ("y", m.k)] {
        match e {
            0 => {}
            1 => parts.push(var.to_string()),
            _ => parts.push(format!("{var}^{{{e}}}")),
        }
    }
    parts
}

/// Writes terms leading-first with explicit `+`/`-` separators.
fn render(
    p: &BiPoly,
    f: &mut dyn fmt::Write,
    coeff: fn(&Rational) -> String,
    mono: fn(&Monomial) -> Vec<String>,
    joiner: &str,
) -> fmt::Result {
    if p.is_zero() {
        return f.write_str("0");
    }
    for (i, (m, c)) in p.terms().rev().enumerate() {
        let neg = c.is_negative();
        match (i, neg) {
            (0, true) => f.write_str("-")?,
            (0, false) => {}
            (_, true) => f.write_str(" - ")?,
            (_, false) => f.write_str(" + ")?,
        }
        let a = c.abs();
        let mut parts = mono(m);
        if parts.is_empty() || !a.is_one() {
            parts.insert(0, coeff(&a));
        }
        f.write_str(&parts.join(joiner))?;
    }
    Ok(())
}

fn coeff_text(c: &Rational) -> String {
    c.to_string()
}

fn coeff_latex(c: &Rational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("\\frac{{{}}}{{{}}}", c.numer(), c.denom())
    }
}

impl fmt::Display for BiPoly {
    /// Plain text such as `-x^3 + 18*x*y - 12`; [`FromStr`] reads it back.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        render(self, f, coeff_text, monomial_text, "*")
    }
}

impl BiPoly {
    /// LaTeX rendering, e.g. `x^{2} - 6 y`.
    pub fn to_latex(&self) -> String {
        let mut s = String::new();
        render(self, &mut s, coeff_latex, monomial_latex, " ").expect("writing to a String");
        s
    }
}

/// Parser for the plain-text form: a sum of terms, each term a product of
/// rational coefficients and powers of `x` and `y`. Parentheses are not
/// supported.
impl FromStr for BiPoly {
    type Err = Error;

    fn from_str(s: &str) -> Result<BiPoly> {
        let src: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if src.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let mut out = BiPoly::zero();
        let mut rest = src.as_str();
        let mut first = true;
        while !rest.is_empty() {
            let mut sign = Rational::one();
            if let Some(r) = rest.strip_prefix('-') {
                sign = -sign;
                rest = r;
            } else if let Some(r) = rest.strip_prefix('+') {
                rest = r;
            } else if !first {
                return Err(Error::Parse(format!("expected + or - in {s:?}")));
            }
            first = false;
            let end = rest.find(['+', '-']).unwrap_or(rest.len());
            let (term, tail) = rest.split_at(end);
            rest = tail;
            out = &out + &parse_term(term, s)?.scale(&sign);
        }
        Ok(out)
    }
}

fn parse_term(term: &str, whole: &str) -> Result<BiPoly> {
    if term.is_empty() {
        return Err(Error::Parse(format!("empty term in {whole:?}")));
    }
    let mut coeff = Rational::one();
    let mut mono = Monomial::ONE;
    let mut chars = term.char_indices().peekable();
    let mut expect_factor = true;
    while let Some(&(i, ch)) = chars.peek() {
        if ch == '*' {
            if expect_factor {
                return Err(Error::Parse(format!("dangling '*' in {whole:?}")));
            }
            chars.next();
            expect_factor = true;
            continue;
        }
        if ch == 'x' || ch == 'y' {
            chars.next();
            let mut e = 1u32;
            if let Some(&(_, '^')) = chars.peek() {
                chars.next();
                let start = chars.peek().map(|&(j, _)| j).unwrap_or(term.len());
                let mut stop = start;
                while let Some(&(j, c)) = chars.peek() {
                    if c.is_ascii_digit() {
                        stop = j + 1;
                        chars.next();
                    } else {
                        break;
                    }
                }
                e = term[start..stop]
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad exponent in {whole:?}")))?;
            }
            if ch == 'x' {
                mono.h += e;
            } else {
                mono.k += e;
            }
        } else if ch.is_ascii_digit() {
            let mut stop = i;
            while let Some(&(j, c)) = chars.peek() {
                if c.is_ascii_digit() || c == '/' {
                    stop = j + 1;
                    chars.next();
                } else {
                    break;
                }
            }
            coeff *= parse_rational(&term[i..stop])?;
        } else {
            return Err(Error::Parse(format!("unexpected {ch:?} in {whole:?}")));
        }
        expect_factor = false;
    }
    if expect_factor {
        return Err(Error::Parse(format!("dangling '*' in {whole:?}")));
    }
    Ok(BiPoly::term(coeff, mono.h, mono.k))
}
