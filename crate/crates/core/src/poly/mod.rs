//! Sparse bivariate polynomials with exact rational coefficients, plus the
//! generic matrix type and the exact linear algebra built on top of them.
//!
//! Monomials are ordered graded-lexicographically with `x` before `y`: a
//! higher total degree wins, and among equal degrees the larger power of `x`
//! wins. The leading term used by [`BiPoly::exact_divide`] is the maximum in
//! this order.

mod linalg;
mod matrix;
mod text;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::ring::Rational;

pub use linalg::{binomial_rational, LinearSolution};
pub use matrix::{Mat, PolyMatrix, QMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
}

/// Exponent pair `x^h y^k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub h: u32,
    pub k: u32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { h: 0, k: 0 };

    pub fn new(h: u32, k: u32) -> Self {
        Monomial { h, k }
    }

    pub fn degree(&self) -> u32 {
        self.h + self.k
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.h <= other.h && self.k <= other.k
    }

    /// All monomials of total degree exactly `d`, as `x^{d-i} y^i` for `i = 0..=d`.
    pub fn of_degree(d: u32) -> impl Iterator<Item = Monomial> {
        (0..=d).map(move |i| Monomial::new(d - i, i))
    }

    /// All monomials of total degree `<= d`, degree-ascending, each degree
    /// block laid out as in [`Monomial::of_degree`]. This is the coefficient
    /// layout used by every linear solve in the crate.
    pub fn up_to_degree(d: u32) -> impl Iterator<Item = Monomial> {
        (0..=d).flat_map(Monomial::of_degree)
    }

    /// Position of this monomial in the [`Monomial::up_to_degree`] layout.
    pub fn layout_index(&self) -> usize {
        let d = self.degree() as usize;
        d * (d + 1) / 2 + self.k as usize
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then(self.h.cmp(&other.h))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Mul for Monomial {
    type Output = Monomial;
    fn mul(self, rhs: Monomial) -> Monomial {
        Monomial::new(self.h + rhs.h, self.k + rhs.k)
    }
}

/// Sparse bivariate polynomial. Zero coefficients are never stored, so the
/// zero polynomial is the empty table.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct BiPoly {
    terms: BTreeMap<Monomial, Rational>,
}

impl BiPoly {
    pub fn zero() -> Self {
        BiPoly::default()
    }

    pub fn one() -> Self {
        BiPoly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        BiPoly::term(c, 0, 0)
    }

    pub fn term(c: Rational, h: u32, k: u32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::new(h, k), c);
        }
        BiPoly { terms }
    }

    pub fn x() -> Self {
        BiPoly::term(Rational::one(), 1, 0)
    }

    pub fn y() -> Self {
        BiPoly::term(Rational::one(), 0, 1)
    }

    /// Builds a polynomial from `(h, k, coefficient)` triples, summing repeats.
    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (u32, u32, Rational)>,
    {
        let mut p = BiPoly::zero();
        for (h, k, c) in terms {
            p.add_term(Monomial::new(h, k), c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                *existing += c;
                if existing.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.degree() == 0)
    }

    /// Total degree; `None` stands for the degree of the zero polynomial
    /// (minus infinity), so `None < Some(0)`.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, h: u32, k: u32) -> Rational {
        self.terms
            .get(&Monomial::new(h, k))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn leading_term(&self) -> Option<(Monomial, &Rational)> {
        self.terms.iter().next_back().map(|(m, c)| (*m, c))
    }

    /// The homogeneous component of total degree `d`.
    pub fn homogeneous_part(&self, d: u32) -> BiPoly {
        BiPoly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == d)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    /// Coefficient vector in the [`Monomial::up_to_degree`] layout. Terms of
    /// degree above `d` are an error.
    pub fn coefficient_vector(&self, d: u32) -> Result<Vec<Rational>> {
        let len = ((d + 1) * (d + 2) / 2) as usize;
        let mut v = vec![Rational::zero(); len];
        for (m, c) in &self.terms {
            if m.degree() > d {
                return Err(Error::Dimension(format!(
                    "polynomial of degree {} does not fit the degree-{d} layout",
                    m.degree()
                )));
            }
            v[m.layout_index()] = c.clone();
        }
        Ok(v)
    }

    pub fn from_coefficient_vector(v: &[Rational]) -> BiPoly {
        let mut p = BiPoly::zero();
        let d = (0u32..)
            .find(|d| ((d + 1) * (d + 2) / 2) as usize >= v.len())
            .unwrap();
        for (m, c) in Monomial::up_to_degree(d).zip(v) {
            p.add_term(m, c.clone());
        }
        p
    }

    pub fn scale(&self, c: &Rational) -> BiPoly {
        if c.is_zero() {
            return BiPoly::zero();
        }
        BiPoly {
            terms: self.terms.iter().map(|(m, a)| (*m, a * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: Monomial, c: &Rational) -> BiPoly {
        if c.is_zero() {
            return BiPoly::zero();
        }
        BiPoly {
            terms: self.terms.iter().map(|(t, a)| (*t * m, a * c)).collect(),
        }
    }

    /// Iterated partial derivative `d^order / d axis^order`.
    pub fn partial(&self, axis: Axis, order: u32) -> BiPoly {
        if order == 0 {
            return self.clone();
        }
        let mut out = BiPoly::zero();
        for (m, c) in &self.terms {
            let e = match axis {
                Axis::X => m.h,
                Axis::Y => m.k,
            };
            if e < order {
                continue;
            }
            let falling: u64 = (0..order as u64).map(|i| e as u64 - i).product();
            let nm = match axis {
                Axis::X => Monomial::new(m.h - order, m.k),
                Axis::Y => Monomial::new(m.h, m.k - order),
            };
            out.add_term(nm, c * Rational::from_integer(falling.into()));
        }
        out
    }

    pub fn dx(&self) -> BiPoly {
        self.partial(Axis::X, 1)
    }

    pub fn dy(&self) -> BiPoly {
        self.partial(Axis::Y, 1)
    }

    /// Mixed derivative `d_x^i d_y^j`.
    pub fn mixed_partial(&self, i: u32, j: u32) -> BiPoly {
        self.partial(Axis::X, i).partial(Axis::Y, j)
    }

    pub fn eval(&self, x: &Rational, y: &Rational) -> Rational {
        self.terms.iter().fold(Rational::zero(), |acc, (m, c)| {
            acc + c * crate::ring::Ring::pow(x, m.h) * crate::ring::Ring::pow(y, m.k)
        })
    }

    /// Exact quotient `q` with `self = q * d`, by multivariate division under
    /// the graded-lex order. Fails with [`Error::NotDivisible`] when a nonzero
    /// remainder appears.
    pub fn exact_divide(&self, d: &BiPoly) -> Result<BiPoly> {
        let (lm, lc) = match d.leading_term() {
            Some((m, c)) => (m, c.clone()),
            None => return Err(Error::Dimension("division by the zero polynomial".into())),
        };
        let not_divisible = || Error::NotDivisible {
            dividend: self.to_string(),
            divisor: d.to_string(),
        };
        let mut rem = self.clone();
        let mut quot = BiPoly::zero();
        while let Some((rm, rc)) = rem.leading_term() {
            if !lm.divides(&rm) {
                return Err(not_divisible());
            }
            let qm = Monomial::new(rm.h - lm.h, rm.k - lm.k);
            let qc = rc / &lc;
            rem = &rem - &d.mul_monomial(qm, &qc);
            quot.add_term(qm, qc);
        }
        Ok(quot)
    }
}

impl crate::ring::Ring for BiPoly {
    fn zero() -> Self {
        BiPoly::zero()
    }
    fn one() -> Self {
        BiPoly::one()
    }
    fn is_zero(&self) -> bool {
        BiPoly::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn from_u64(n: u64) -> Self {
        BiPoly::constant(Rational::from_integer(n.into()))
    }
}

impl From<Rational> for BiPoly {
    fn from(c: Rational) -> Self {
        BiPoly::constant(c)
    }
}

impl<'a> Add<&'a BiPoly> for &'a BiPoly {
    type Output = BiPoly;
    fn add(self, rhs: &BiPoly) -> BiPoly {
        let (mut big, small) = if self.terms.len() >= rhs.terms.len() {
            (self.clone(), rhs)
        } else {
            (rhs.clone(), self)
        };
        for (m, c) in &small.terms {
            big.add_term(*m, c.clone());
        }
        big
    }
}

impl<'a> Sub<&'a BiPoly> for &'a BiPoly {
    type Output = BiPoly;
    fn sub(self, rhs: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, -c);
        }
        out
    }
}

impl<'a> Mul<&'a BiPoly> for &'a BiPoly {
    type Output = BiPoly;
    fn mul(self, rhs: &BiPoly) -> BiPoly {
        let mut out = BiPoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(*m1 * *m2, c1 * c2);
            }
        }
        out
    }
}

impl Neg for &BiPoly {
    type Output = BiPoly;
    fn neg(self) -> BiPoly {
        BiPoly {
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr<BiPoly> for BiPoly {
            type Output = BiPoly;
            fn $method(self, rhs: BiPoly) -> BiPoly {
                $tr::$method(&self, &rhs)
            }
        }
        impl<'a> $tr<&'a BiPoly> for BiPoly {
            type Output = BiPoly;
            fn $method(self, rhs: &BiPoly) -> BiPoly {
                $tr::$method(&self, rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for BiPoly {
    type Output = BiPoly;
    fn neg(self) -> BiPoly {
        -&self
    }
}

/// Column vector `(x^m, x^{m-1} y, ..., y^m)^t`.
pub fn monomial_vector(m: u32) -> PolyMatrix {
    let entries = Monomial::of_degree(m)
        .map(|mono| BiPoly::term(Rational::one(), mono.h, mono.k))
        .collect();
    Mat::new(m as usize + 1, 1, entries)
}
