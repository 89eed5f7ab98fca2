//! Higher-order gradient and divergence on polynomial matrices, their duals
//! on moment functionals, and the factored-weight calculus used to apply
//! `div^{n}` to `Phi^{n} w` without ever evaluating `w`.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::moments::MomentFunctional;
use crate::poly::{binomial_rational, Axis, BiPoly, Mat, PolyMatrix, QMatrix};
use crate::ring::Rational;

/// `D_i^n = C(n,i) d_x^{n-i} d_y^i` applied to one polynomial.
pub fn d_op(i: u32, n: u32, p: &BiPoly) -> Result<BiPoly> {
    if i > n {
        return Err(Error::Index {
            index: i as usize,
            order: n as usize,
        });
    }
    Ok(p.mixed_partial(n - i, i)
        .scale(&binomial_rational(n as u64, i as u64)))
}

/// `D_i^n` applied entrywise.
pub fn apply_d(i: u32, n: u32, a: &PolyMatrix) -> Result<PolyMatrix> {
    a.try_map(|p| d_op(i, n, p))
}

/// `nabla^{n} A = (D_0^n A; D_1^n A; ...; D_n^n A)`, with `nabla^{0} A = A`.
pub fn nabla_n(a: &PolyMatrix, n: u32) -> PolyMatrix {
    let blocks: Vec<PolyMatrix> = (0..=n)
        .map(|i| apply_d(i, n, a).expect("index within order"))
        .collect();
    Mat::vstack(&blocks).expect("equal block shapes")
}

/// `div^{n}(B_0, ..., B_n) = sum_i D_i^n B_i`, with `div^{0} B = B`.
pub fn div_n(blocks: &[PolyMatrix], n: u32) -> Result<PolyMatrix> {
    check_blocks(blocks.iter().map(Mat::shape), n)?;
    let mut acc = PolyMatrix::zeros(blocks[0].rows(), blocks[0].cols());
    for (i, b) in blocks.iter().enumerate() {
        acc = acc.add(&apply_d(i as u32, n, b)?)?;
    }
    Ok(acc)
}

fn check_blocks(shapes: impl Iterator<Item = (usize, usize)>, n: u32) -> Result<()> {
    let shapes: Vec<_> = shapes.collect();
    if shapes.len() != n as usize + 1 {
        return Err(Error::Shape(format!(
            "div^{{{n}}} needs {} blocks, got {}",
            n + 1,
            shapes.len()
        )));
    }
    if shapes.windows(2).any(|w| w[0] != w[1]) {
        return Err(Error::Shape("div blocks must share one shape".into()));
    }
    Ok(())
}

/// Factored symmetry factor `w = exp(s) * prod f_i^{e_i}`, known only through
/// its logarithmic derivatives `w_x / w = s_x + sum e_i (f_i)_x / f_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightCarrier {
    s: BiPoly,
    factors: Vec<(BiPoly, Rational)>,
}

impl WeightCarrier {
    pub fn new(s: BiPoly, factors: Vec<(BiPoly, Rational)>) -> Result<Self> {
        for (i, (f, _)) in factors.iter().enumerate() {
            if f.is_constant() {
                return Err(Error::Parameter(format!("weight factor {f} is constant")));
            }
            if factors[..i].iter().any(|(g, _)| g == f) {
                return Err(Error::Parameter(format!("weight factor {f} is repeated")));
            }
        }
        Ok(WeightCarrier { s, factors })
    }

    /// `w = 1`.
    pub fn unit() -> Self {
        WeightCarrier {
            s: BiPoly::zero(),
            factors: Vec::new(),
        }
    }

    pub fn exponential(&self) -> &BiPoly {
        &self.s
    }

    pub fn factors(&self) -> &[(BiPoly, Rational)] {
        &self.factors
    }

    pub fn num_factors(&self) -> usize {
        self.factors.len()
    }

    /// Product weight `w_1(x,y) w_2(x,y)`; repeated factors have their
    /// exponents merged.
    pub fn product(&self, other: &WeightCarrier) -> Result<WeightCarrier> {
        let mut factors = self.factors.clone();
        for (g, e) in &other.factors {
            match factors.iter_mut().find(|(f, _)| f == g) {
                Some((_, e0)) => *e0 += e,
                None => factors.push((g.clone(), e.clone())),
            }
        }
        WeightCarrier::new(&self.s + &other.s, factors)
    }

    /// `w` itself when it is a polynomial (no exponential part and
    /// nonnegative integer exponents).
    pub fn as_polynomial(&self) -> Option<BiPoly> {
        if !self.s.is_zero() {
            return None;
        }
        let mut acc = BiPoly::one();
        for (f, e) in &self.factors {
            if !e.is_integer() || e < &Rational::zero() {
                return None;
            }
            let k: u32 = e.to_integer().try_into().ok()?;
            acc = &acc * &crate::ring::Ring::pow(f, k);
        }
        Some(acc)
    }

    /// `prod f_i^{k_i}` for a denominator exponent vector.
    pub fn denominator(&self, exps: &[u32]) -> BiPoly {
        self.factors
            .iter()
            .zip(exps)
            .fold(BiPoly::one(), |acc, ((f, _), &k)| {
                &acc * &crate::ring::Ring::pow(f, k)
            })
    }
}

/// `(numerator / prod f_i^{k_i}) * w` over the factor list of a
/// [`WeightCarrier`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CarrierTerm {
    pub numerator: BiPoly,
    pub denom_exponents: Vec<u32>,
}

impl CarrierTerm {
    /// `p * w`.
    pub fn from_poly(p: BiPoly, w: &WeightCarrier) -> Self {
        CarrierTerm {
            numerator: p,
            denom_exponents: vec![0; w.num_factors()],
        }
    }

    pub fn zero(w: &WeightCarrier) -> Self {
        CarrierTerm::from_poly(BiPoly::zero(), w)
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    /// Rewrites over the larger denominator `prod f_i^{target_i}`.
    fn raised_to(&self, target: &[u32], w: &WeightCarrier) -> BiPoly {
        let extra: Vec<u32> = target
            .iter()
            .zip(&self.denom_exponents)
            .map(|(t, k)| t - k)
            .collect();
        &self.numerator * &w.denominator(&extra)
    }

    /// Sum over the componentwise-max denominator.
    pub fn add(&self, other: &CarrierTerm, w: &WeightCarrier) -> CarrierTerm {
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return other.clone();
        }
        let target: Vec<u32> = self
            .denom_exponents
            .iter()
            .zip(&other.denom_exponents)
            .map(|(a, b)| *a.max(b))
            .collect();
        let numerator = &self.raised_to(&target, w) + &other.raised_to(&target, w);
        CarrierTerm {
            numerator,
            denom_exponents: target,
        }
    }

    pub fn scale(&self, c: &Rational) -> CarrierTerm {
        CarrierTerm {
            numerator: self.numerator.scale(c),
            denom_exponents: self.denom_exponents.clone(),
        }
    }

    pub fn mul_poly(&self, p: &BiPoly) -> CarrierTerm {
        CarrierTerm {
            numerator: &self.numerator * p,
            denom_exponents: self.denom_exponents.clone(),
        }
    }

    /// Exact partial derivative. With `N / prod f_i^{k_i} * w`, the factors
    /// that contribute are those with `e_i != k_i` and `d f_i != 0`; only
    /// their exponents grow, each by one.
    pub fn derivative(&self, w: &WeightCarrier, axis: Axis) -> CarrierTerm {
        if self.is_zero() {
            return self.clone();
        }
        let active: Vec<(usize, Rational, BiPoly)> = w
            .factors
            .iter()
            .zip(&self.denom_exponents)
            .enumerate()
            .filter_map(|(i, ((f, e), &k))| {
                let shift = e - Rational::from_integer(k.into());
                let df = f.partial(axis, 1);
                (!shift.is_zero() && !df.is_zero()).then_some((i, shift, df))
            })
            .collect();
        let prod_except = |skip: Option<usize>| -> BiPoly {
            active
                .iter()
                .filter(|(i, _, _)| Some(*i) != skip)
                .fold(BiPoly::one(), |acc, (i, _, _)| &acc * &w.factors[*i].0)
        };
        let all = prod_except(None);
        let n = &self.numerator;
        let mut numerator = &(&n.partial(axis, 1) + &(n * &w.s.partial(axis, 1))) * &all;
        for (i, shift, df) in &active {
            numerator = &numerator + &(&(n * df) * &prod_except(Some(*i))).scale(shift);
        }
        let mut denom_exponents = self.denom_exponents.clone();
        for (i, _, _) in &active {
            denom_exponents[*i] += 1;
        }
        CarrierTerm {
            numerator,
            denom_exponents,
        }
    }

    pub fn mixed_derivative(&self, w: &WeightCarrier, dx: u32, dy: u32) -> CarrierTerm {
        let mut t = self.clone();
        for _ in 0..dx {
            t = t.derivative(w, Axis::X);
        }
        for _ in 0..dy {
            t = t.derivative(w, Axis::Y);
        }
        t
    }

    /// The polynomial `P` with `self = P * w`, by exact division of the
    /// numerator by every accumulated factor power.
    pub fn into_polynomial(&self, w: &WeightCarrier) -> Result<BiPoly> {
        let mut p = self.numerator.clone();
        for ((f, _), &k) in w.factors.iter().zip(&self.denom_exponents) {
            for _ in 0..k {
                p = p.exact_divide(f)?;
            }
        }
        Ok(p)
    }
}

/// Alias kept for symmetry with [`div_n`] naming.
pub fn carrier_derivative(t: &CarrierTerm, w: &WeightCarrier, axis: Axis) -> CarrierTerm {
    t.derivative(w, axis)
}

/// `div^{n}` over matrices of carrier terms: `sum_i D_i^n B_i`.
pub fn carrier_div_n(
    blocks: &[Mat<CarrierTerm>],
    w: &WeightCarrier,
    n: u32,
) -> Result<Mat<CarrierTerm>> {
    check_blocks(blocks.iter().map(Mat::shape), n)?;
    let (rows, cols) = blocks[0].shape();
    let mut out = Vec::with_capacity(rows * cols);
    for r in 0..rows {
        for c in 0..cols {
            let mut acc = CarrierTerm::zero(w);
            for (i, b) in blocks.iter().enumerate() {
                let i = i as u32;
                let t = b
                    .get(r, c)
                    .mixed_derivative(w, n - i, i)
                    .scale(&binomial_rational(n as u64, i as u64));
                acc = acc.add(&t, w);
            }
            out.push(acc);
        }
    }
    Ok(Mat::new(rows, cols, out))
}

/// `<nabla^{n} u, (p_0, ..., p_n)^t> = (-1)^n sum_i <u, D_i^n p_i>`.
pub fn pair_nabla(u: &MomentFunctional, n: u32, stack: &[BiPoly]) -> Result<Rational> {
    if stack.len() != n as usize + 1 {
        return Err(Error::Shape(format!(
            "nabla^{{{n}}} pairing needs {} polynomials, got {}",
            n + 1,
            stack.len()
        )));
    }
    let mut acc = Rational::zero();
    for (i, p) in stack.iter().enumerate() {
        acc += u.pair_poly(&d_op(i as u32, n, p)?)?;
    }
    Ok(sign(n) * acc)
}

/// `<div^{n}(A_0 u, ..., A_n u), p> = (-1)^n sum_i <u, A_i D_i^n p>`,
/// evaluated entrywise over the common shape of the `A_i`.
pub fn pair_div(
    u: &MomentFunctional,
    n: u32,
    blocks: &[PolyMatrix],
    p: &BiPoly,
) -> Result<QMatrix> {
    check_blocks(blocks.iter().map(Mat::shape), n)?;
    let (rows, cols) = blocks[0].shape();
    let mut acc = QMatrix::zeros(rows, cols);
    for (i, a) in blocks.iter().enumerate() {
        let dp = d_op(i as u32, n, p)?;
        if dp.is_zero() {
            continue;
        }
        let weighted = a.map(|entry| entry * &dp);
        acc = acc.add(&u.pair(&weighted)?)?;
    }
    Ok(acc.scale(&sign(n)))
}

fn sign(n: u32) -> Rational {
    if n.is_multiple_of(2) {
        Rational::one()
    } else {
        -Rational::one()
    }
}
