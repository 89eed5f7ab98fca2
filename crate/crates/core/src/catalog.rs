//! Built-in families: the non-positive Krall-Sheffer case, the unit ball,
//! the simplex and three tensor products of univariate classical families.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::diff::WeightCarrier;
use crate::error::{Error, Result};
use crate::moments::ClosedFormDomain;
use crate::pearson::{FamilySpec, PearsonData};
use crate::poly::{Axis, BiPoly, Mat};
use crate::ring::{fraction_string, int, rat, Rational};

/// A univariate classical functional through its Pearson data
/// `(phi(t) u)' = psi(t) u`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Univariate {
    /// `exp(-t^2)`.
    Hermite,
    /// `t^alpha exp(-t)`.
    Laguerre { alpha: Rational },
    /// `(1 - t)^alpha (1 + t)^beta` on `[-1, 1]`.
    Jacobi { alpha: Rational, beta: Rational },
    /// `phi = t^2`, `psi = a t + b`. No factored weight.
    Bessel { a: Rational, b: Rational },
}

fn in_var(axis: Axis, coeffs: &[Rational]) -> BiPoly {
    BiPoly::from_terms(coeffs.iter().enumerate().map(|(i, c)| match axis {
        Axis::X => (i as u32, 0, c.clone()),
        Axis::Y => (0, i as u32, c.clone()),
    }))
}

impl Univariate {
    /// Coefficients of `phi` (degree `<= 2`) and `psi` (degree `<= 1`),
    /// constant term first.
    fn coefficients(&self) -> ([Rational; 3], [Rational; 2]) {
        let z = Rational::zero;
        match self {
            Univariate::Hermite => ([int(1), z(), z()], [z(), int(-2)]),
            Univariate::Laguerre { alpha } => ([z(), int(1), z()], [alpha + int(1), int(-1)]),
            Univariate::Jacobi { alpha, beta } => (
                [int(1), z(), int(-1)],
                [beta - alpha, -(alpha + beta + int(2))],
            ),
            Univariate::Bessel { a, b } => ([z(), z(), int(1)], [b.clone(), a.clone()]),
        }
    }

    pub fn phi(&self, axis: Axis) -> BiPoly {
        in_var(axis, &self.coefficients().0)
    }

    pub fn psi(&self, axis: Axis) -> BiPoly {
        in_var(axis, &self.coefficients().1)
    }

    pub fn weight(&self, axis: Axis) -> Option<WeightCarrier> {
        let t = in_var(axis, &[int(0), int(1)]);
        let (s, factors) = match self {
            Univariate::Hermite => (in_var(axis, &[int(0), int(0), int(-1)]), vec![]),
            Univariate::Laguerre { alpha } => (-&t, vec![(t, alpha.clone())]),
            Univariate::Jacobi { alpha, beta } => (
                BiPoly::zero(),
                vec![
                    (in_var(axis, &[int(1), int(-1)]), alpha.clone()),
                    (in_var(axis, &[int(1), int(1)]), beta.clone()),
                ],
            ),
            Univariate::Bessel { .. } => return None,
        };
        Some(WeightCarrier::new(s, factors).expect("distinct nonconstant factors"))
    }

    /// `mu_0..=mu_cap` from `h sum_j phi_j mu_{h-1+j} + sum_j psi_j mu_{h+j} = 0`.
    pub fn moments(&self, cap: u32) -> Result<Vec<Rational>> {
        let ([p0, p1, p2], [q0, q1]) = self.coefficients();
        let mut mu = vec![Rational::one()];
        for h in 0..cap as usize {
            let hq = int(h as i64);
            let den = &hq * &p2 + &q1;
            if den.is_zero() {
                return Err(Error::Parameter(format!(
                    "univariate moment {} is not determined",
                    h + 1
                )));
            }
            let prev = if h == 0 {
                Rational::zero()
            } else {
                &p0 * &mu[h - 1]
            };
            let num = &hq * (prev + &p1 * &mu[h]) + &q0 * &mu[h];
            mu.push(-num / den);
        }
        Ok(mu)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LambdaShape {
    Scalar,
    Diagonal,
}

/// Flags a catalog family is expected to show.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Expectations {
    pub condr_original: bool,
    pub condr_diagonal: Option<bool>,
    pub symmetrizable: bool,
    pub lambda_shape: LambdaShape,
    /// The construction needs the moment route (no factored weight).
    pub moment_route_only: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParamInfo {
    pub name: &'static str,
    pub default: &'static str,
    pub domain: &'static str,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub description: &'static str,
    pub params: Vec<ParamInfo>,
    pub expectations: Expectations,
}

fn param(name: &'static str, default: &'static str, domain: &'static str) -> ParamInfo {
    ParamInfo {
        name,
        default,
        domain,
    }
}

pub fn entries() -> Vec<CatalogEntry> {
    let exp = |orig, diag, shape, moment_only| Expectations {
        condr_original: orig,
        condr_diagonal: diag,
        symmetrizable: true,
        lambda_shape: shape,
        moment_route_only: moment_only,
    };
    vec![
        CatalogEntry {
            name: "krall-sheffer-intriguing",
            description: "Phi = (3y 1; 1 0), Psi = (-x, -y); symmetry factor exp(y^3 - xy) is not a weight",
            params: vec![],
            expectations: exp(true, None, LambdaShape::Scalar, false),
        },
        CatalogEntry {
            name: "ball",
            description: "unit disk, weight (1 - x^2 - y^2)^(mu - 1/2), with diagonal form (1 - x^2 - y^2) I",
            params: vec![param("mu", "1/2", "mu > -1/2")],
            expectations: exp(false, Some(true), LambdaShape::Scalar, false),
        },
        CatalogEntry {
            name: "simplex",
            description: "triangle, weight x^alpha y^beta (1 - x - y)^gamma, with diagonal form",
            params: vec![
                param("alpha", "0", "alpha > -1"),
                param("beta", "0", "beta > -1"),
                param("gamma", "0", "gamma > -1"),
            ],
            expectations: exp(true, Some(true), LambdaShape::Scalar, false),
        },
        CatalogEntry {
            name: "tensor-hermite-hermite",
            description: "Hermite in x times Hermite in y, weight exp(-x^2 - y^2)",
            params: vec![],
            expectations: exp(true, None, LambdaShape::Scalar, false),
        },
        CatalogEntry {
            name: "tensor-laguerre-jacobi",
            description: "Laguerre(alpha) in x times Jacobi in y, weight x^alpha exp(-x) (1 - y)^beta (1 + y)^gamma",
            params: vec![
                param("alpha", "0", "alpha > -1"),
                param("beta", "0", "beta > -1"),
                param("gamma", "0", "gamma > -1"),
            ],
            expectations: exp(true, None, LambdaShape::Diagonal, false),
        },
        CatalogEntry {
            name: "tensor-bessel-bessel",
            description: "Bessel in x times Bessel in y, Phi = diag(x^2, y^2), Psi = (2x + 2, 2y + 2); moment route only",
            params: vec![],
            expectations: exp(true, None, LambdaShape::Diagonal, true),
        },
    ]
}

pub fn entry(name: &str) -> Result<CatalogEntry> {
    entries()
        .into_iter()
        .find(|e| e.name == name)
        .ok_or_else(|| Error::UnknownFamily(name.to_string()))
}

fn p(s: &str) -> BiPoly {
    s.parse().expect("catalog polynomial")
}

fn sym(a: BiPoly, b: BiPoly, c: BiPoly) -> crate::poly::PolyMatrix {
    Mat::new(2, 2, vec![a, b.clone(), b, c])
}

/// Resolved parameters: defaults filled in, unknown names and values
/// outside the documented domains rejected.
fn resolve(
    e: &CatalogEntry,
    given: &BTreeMap<String, Rational>,
) -> Result<BTreeMap<String, Rational>> {
    for k in given.keys() {
        if !e.params.iter().any(|p| p.name == k) {
            return Err(Error::Parameter(format!(
                "family {:?} takes no parameter {k:?}",
                e.name
            )));
        }
    }
    let mut out = BTreeMap::new();
    for info in &e.params {
        let v = match given.get(info.name) {
            Some(v) => v.clone(),
            None => crate::ring::parse_rational(info.default)?,
        };
        let bound = if info.name == "mu" {
            rat(-1, 2)
        } else {
            int(-1)
        };
        if v <= bound {
            return Err(Error::Parameter(format!(
                "{} = {} is outside {}",
                info.name,
                fraction_string(&v),
                info.domain
            )));
        }
        out.insert(info.name.to_string(), v);
    }
    Ok(out)
}

fn tensor(fx: &Univariate, fy: &Univariate) -> PearsonData {
    let phi = sym(fx.phi(Axis::X), BiPoly::zero(), fy.phi(Axis::Y));
    let psi = [fx.psi(Axis::X), fy.psi(Axis::Y)];
    let weight = match (fx.weight(Axis::X), fy.weight(Axis::Y)) {
        (Some(a), Some(b)) => Some(a.product(&b).expect("factors in distinct variables")),
        _ => None,
    };
    PearsonData::new(phi, psi, weight).expect("tensor data within degree bounds")
}

/// The two univariate factors of a tensor family.
pub fn tensor_factors(
    name: &str,
    params: &BTreeMap<String, Rational>,
) -> Option<(Univariate, Univariate)> {
    let get = |k: &str| params.get(k).cloned().unwrap_or_else(Rational::zero);
    match name {
        "tensor-hermite-hermite" => Some((Univariate::Hermite, Univariate::Hermite)),
        "tensor-laguerre-jacobi" => Some((
            Univariate::Laguerre {
                alpha: get("alpha"),
            },
            Univariate::Jacobi {
                alpha: get("beta"),
                beta: get("gamma"),
            },
        )),
        "tensor-bessel-bessel" => {
            let b = Univariate::Bessel {
                a: int(2),
                b: int(2),
            };
            Some((b.clone(), b))
        }
        _ => None,
    }
}

pub fn load(name: &str, params: &BTreeMap<String, Rational>) -> Result<FamilySpec> {
    let e = entry(name)?;
    let params = resolve(&e, params)?;
    let get = |k: &str| params[k].clone();
    let (original, diagonal) = match name {
        "krall-sheffer-intriguing" => {
            let w = WeightCarrier::new(p("y^3 - x*y"), vec![])?;
            let data =
                PearsonData::new(sym(p("3*y"), p("1"), p("0")), [p("-x"), p("-y")], Some(w))?;
            (data, None)
        }
        "ball" => {
            let mu = get("mu");
            let disk = p("1 - x^2 - y^2");
            let w = WeightCarrier::new(BiPoly::zero(), vec![(disk.clone(), &mu - rat(1, 2))])?;
            let g = &mu * int(2) + int(2);
            let original = PearsonData::new(
                sym(p("x^2 - 1"), p("x*y"), p("y^2 - 1")),
                [p("x").scale(&g), p("y").scale(&g)],
                Some(w.clone()),
            )?;
            let h = -(&mu * int(2) + int(1));
            let diagonal = PearsonData::new(
                sym(disk.clone(), BiPoly::zero(), disk),
                [p("x").scale(&h), p("y").scale(&h)],
                Some(w),
            )?;
            (original, Some(diagonal))
        }
        "simplex" => {
            let (a, b, c) = (get("alpha"), get("beta"), get("gamma"));
            let z = p("1 - x - y");
            let w = WeightCarrier::new(
                BiPoly::zero(),
                vec![
                    (p("x"), a.clone()),
                    (p("y"), b.clone()),
                    (z.clone(), c.clone()),
                ],
            )?;
            let total = &a + &b + &c + int(3);
            let original = PearsonData::new(
                sym(p("x^2 - x"), p("x*y"), p("y^2 - y")),
                [
                    &p("x").scale(&total) - &BiPoly::constant(&a + int(1)),
                    &p("y").scale(&total) - &BiPoly::constant(&b + int(1)),
                ],
                Some(w.clone()),
            )?;
            let psi0 = &(&z.scale(&a) - &p("x").scale(&c)) + &p("1 - 2*x - y");
            let psi1 = &(&z.scale(&b) - &p("y").scale(&c)) + &p("1 - x - 2*y");
            let diagonal = PearsonData::new(
                sym(&p("x") * &z, BiPoly::zero(), &p("y") * &z),
                [psi0, psi1],
                Some(w),
            )?;
            (original, Some(diagonal))
        }
        _ => {
            let (fx, fy) = tensor_factors(name, &params).expect("tensor entry");
            (tensor(&fx, &fy), None)
        }
    };
    Ok(FamilySpec::new(name, params, original, diagonal))
}

/// Every entry at its default parameters.
pub fn load_defaults() -> Vec<FamilySpec> {
    entries()
        .iter()
        .map(|e| load(e.name, &BTreeMap::new()).expect("defaults are valid"))
        .collect()
}

/// Closed-form moment provider for a family, when one exists.
pub fn closed_form_domain(family: &FamilySpec) -> Option<ClosedFormDomain> {
    let params = family.params();
    match family.name() {
        "ball" => Some(ClosedFormDomain::Ball {
            mu: params["mu"].clone(),
        }),
        "simplex" => Some(ClosedFormDomain::Simplex {
            alpha: params["alpha"].clone(),
            beta: params["beta"].clone(),
            gamma: params["gamma"].clone(),
        }),
        name => tensor_factors(name, params).map(|(a, b)| ClosedFormDomain::Tensor(a, b)),
    }
}
