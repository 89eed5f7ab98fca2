//! The construction `Q_n^t = w^{-1} div^{n}(Phi^{n} w)` and the checks run
//! against it: orthogonality, Gram matrices, eigen-matrices, the leading
//! coefficient test, the `n!`-identity, the moment-level identity
//! `Q_n^t u = div^{n}(Phi^{n} u)` and a Gram-Schmidt oracle.

mod suite;

pub use suite::{
    family_moments, verify_family, DegreeReport, Failure, FailureKind, FormFlag,
    VerificationReport, VerifyConfig,
};

use num_traits::{One, Zero};
use serde::Serialize;

use crate::diff::{carrier_div_n, pair_div, CarrierTerm};
use crate::error::{Error, Result};
use crate::kron::kron_power;
use crate::moments::MomentFunctional;
use crate::pearson::{FamilySpec, FormChoice, FormUsed, PearsonData};
use crate::poly::{binomial_rational, BiPoly, LinearSolution, Mat, Monomial, PolyMatrix, QMatrix};
use crate::ring::{abs_numerator, int, Rational, Ring};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Route {
    /// Full `Phi^{n}` through the carrier calculus.
    Carrier,
    /// Diagonal `Phi`, one derivative per entry.
    DiagonalCarrier,
    /// Solved from moments, no symmetry factor needed.
    Moment,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RodriguesVector {
    pub n: u32,
    /// `Q_{n,0}, Q_{n-1,1}, ..., Q_{0,n}`.
    pub entries: Vec<BiPoly>,
    pub form: FormUsed,
    pub route: Route,
    /// Carrier terms `N / prod f^k` whose exact division produced the entries.
    pub certificate: Vec<CarrierTerm>,
}

impl RodriguesVector {
    /// `1 x (n+1)` row `Q_n^t`.
    pub fn row(&self) -> PolyMatrix {
        Mat::new(1, self.entries.len(), self.entries.clone())
    }

    /// Every entry is zero or of exact degree `n`.
    pub fn exact_degree(&self) -> bool {
        self.entries
            .iter()
            .all(|q| q.total_degree().is_none_or(|d| d == self.n))
    }
}

fn rows_of(phi_n: &PolyMatrix) -> Vec<PolyMatrix> {
    phi_n.vsplit(phi_n.rows()).expect("square Phi^{n}")
}

/// Carrier route on a given `Phi^{n}`.
pub fn rodrigues_from_power(
    data: &PearsonData,
    phi_n: &PolyMatrix,
    n: u32,
) -> Result<(Vec<BiPoly>, Vec<CarrierTerm>)> {
    let w = data
        .weight()
        .ok_or_else(|| Error::NoCarrier("form without symmetry factor".into()))?;
    let blocks: Vec<Mat<CarrierTerm>> = rows_of(phi_n)
        .iter()
        .map(|r| r.map(|p| CarrierTerm::from_poly(p.clone(), w)))
        .collect();
    let out = carrier_div_n(&blocks, w, n)?;
    let terms = out.entries().to_vec();
    let entries = terms
        .iter()
        .map(|t| t.into_polynomial(w))
        .collect::<Result<Vec<_>>>()?;
    Ok((entries, terms))
}

pub fn build_q(fam: &FamilySpec, n: u32, form: FormChoice) -> Result<RodriguesVector> {
    let (used, data) = fam.select(form)?;
    if data.weight().is_none() {
        return Err(Error::NoCarrier(fam.name().to_string()));
    }
    let phi_n = kron_power(data.phi(), n)?.body;
    let (entries, certificate) = rodrigues_from_power(data, &phi_n, n)?;
    Ok(RodriguesVector {
        n,
        entries,
        form: used,
        route: Route::Carrier,
        certificate,
    })
}

/// `Q_{n-i,i} = w^{-1} C(n,i) d_x^{n-i} d_y^i (p^{n-i} q^i w)` for
/// `Phi = diag(p, q)`.
pub fn build_q_diagonal_data(
    data: &PearsonData,
    n: u32,
) -> Result<(Vec<BiPoly>, Vec<CarrierTerm>)> {
    if !data.is_diagonal() {
        return Err(Error::Parameter("Phi is not diagonal".into()));
    }
    let w = data
        .weight()
        .ok_or_else(|| Error::NoCarrier("form without symmetry factor".into()))?;
    let (p, q) = (data.a(), data.c());
    let mut entries = Vec::new();
    let mut certificate = Vec::new();
    for i in 0..=n {
        let seed = &p.pow(n - i) * &q.pow(i);
        let t = CarrierTerm::from_poly(seed, w)
            .mixed_derivative(w, n - i, i)
            .scale(&binomial_rational(n as u64, i as u64));
        entries.push(t.into_polynomial(w)?);
        certificate.push(t);
    }
    Ok((entries, certificate))
}

pub fn build_q_diagonal(fam: &FamilySpec, n: u32) -> Result<RodriguesVector> {
    let (used, data) = fam.select(FormChoice::Diagonal)?;
    let (entries, certificate) = build_q_diagonal_data(data, n)?;
    Ok(RodriguesVector {
        n,
        entries,
        form: used,
        route: Route::DiagonalCarrier,
        certificate,
    })
}

/// `Q_n` from `<u, Q_{n,i} m> = (-1)^n sum_j <u, phi^{n}_{j,i} D_j^n m>`
/// for all `m` of degree `<= n`, assuming `deg Q_n <= n`.
pub fn build_q_moment(u: &MomentFunctional, phi_n: &PolyMatrix, n: u32) -> Result<Vec<BiPoly>> {
    let gram = u.moment_matrix(n)?;
    let blocks = rows_of(phi_n);
    let basis: Vec<Monomial> = Monomial::up_to_degree(n).collect();
    let mut rhs = vec![Vec::with_capacity(basis.len()); n as usize + 1];
    for m in &basis {
        let paired = pair_div(u, n, &blocks, &BiPoly::term(One::one(), m.h, m.k))?;
        for (i, v) in paired.entries().iter().enumerate() {
            rhs[i].push(v.clone());
        }
    }
    rhs.iter()
        .map(|b| match gram.solve(b) {
            LinearSolution::Unique(c) => Ok(BiPoly::from_coefficient_vector(&c)),
            _ => Err(Error::SingularMoments { degree: n }),
        })
        .collect()
}

/// Carrier route when the chosen form has a symmetry factor, moment route
/// otherwise.
pub fn construct(
    fam: &FamilySpec,
    u: &MomentFunctional,
    n: u32,
    form: FormChoice,
) -> Result<RodriguesVector> {
    let (used, data) = fam.select(form)?;
    let phi_n = kron_power(data.phi(), n)?.body;
    if data.weight().is_some() {
        let (entries, certificate) = rodrigues_from_power(data, &phi_n, n)?;
        return Ok(RodriguesVector {
            n,
            entries,
            form: used,
            route: Route::Carrier,
            certificate,
        });
    }
    Ok(RodriguesVector {
        n,
        entries: build_q_moment(u, &phi_n, n)?,
        form: used,
        route: Route::Moment,
        certificate: Vec::new(),
    })
}

/// `<u, Q_n x^{m-j} y^j>` as an `(n+1) x (m+1)` matrix.
pub fn pair_with_monomials(u: &MomentFunctional, q: &[BiPoly], m: u32) -> Result<QMatrix> {
    let mut out = QMatrix::zeros(q.len(), m as usize + 1);
    for (i, qi) in q.iter().enumerate() {
        for mono in Monomial::of_degree(m) {
            let v = u.pair_poly(&qi.mul_monomial(mono, &One::one()))?;
            out.set(i, mono.k as usize, v);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrthogonalityEntry {
    pub m: u32,
    /// Largest `|numerator|` among the entries of `<u, Q_n X_m^t>`.
    pub max_abs_numerator: String,
    pub zero: bool,
}

/// `<u, Q_n X_m^t>` for `m = 0..=up_to`.
pub fn verify_orthogonality(
    u: &MomentFunctional,
    q: &[BiPoly],
    up_to: u32,
) -> Result<Vec<OrthogonalityEntry>> {
    (0..=up_to)
        .map(|m| {
            let p = pair_with_monomials(u, q, m)?;
            let max = p
                .entries()
                .iter()
                .map(abs_numerator)
                .max()
                .unwrap_or_default();
            Ok(OrthogonalityEntry {
                m,
                zero: max.is_zero(),
                max_abs_numerator: max.to_string(),
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GramReport {
    #[serde(serialize_with = "crate::serial::ser_qmatrix")]
    pub h: QMatrix,
    pub nonsingular: bool,
    pub diagonal: bool,
}

/// `H_n = <u, Q_n Q_n^t>`.
pub fn gram(u: &MomentFunctional, q: &[BiPoly]) -> Result<GramReport> {
    let size = q.len();
    let mut h = QMatrix::zeros(size, size);
    for i in 0..size {
        for j in i..size {
            let v = u.pair_poly(&(&q[i] * &q[j]))?;
            h.set(j, i, v.clone());
            h.set(i, j, v);
        }
    }
    Ok(GramReport {
        nonsingular: h.is_nonsingular(),
        diagonal: h.is_diagonal(),
        h,
    })
}

/// Degree-`n` coefficients: row `i` holds the coefficients of
/// `x^n, x^{n-1} y, ..., y^n` in `Q_{n,i}`.
pub fn leading_matrix(q: &[BiPoly], n: u32) -> QMatrix {
    Mat::from_fn(q.len(), n as usize + 1, |i, j| {
        q[i].coeff(n - j as u32, j as u32)
    })
}

/// Entries independent modulo polynomials of degree `< n`.
pub fn ps_check(q: &[BiPoly], n: u32) -> bool {
    q.len() == n as usize + 1 && leading_matrix(q, n).rank() == q.len()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LambdaReport {
    #[serde(serialize_with = "crate::serial::ser_qmatrix")]
    pub lambda: QMatrix,
    pub nonsingular: bool,
    pub scalar: bool,
    pub diagonal: bool,
}

/// `Lambda_n` with `L[Q_n^t] = Q_n^t Lambda_n`, matching coefficients of
/// every monomial of degree `<= n`.
pub fn solve_lambda(data: &PearsonData, q: &[BiPoly], n: u32) -> Result<LambdaReport> {
    if !ps_check(q, n) {
        return Err(Error::Unsolvable { degree: n });
    }
    let size = q.len();
    let cols: Vec<Vec<_>> = q
        .iter()
        .map(|p| p.coefficient_vector(n))
        .collect::<Result<_>>()?;
    let len = cols[0].len();
    let basis = Mat::from_fn(len, size, |r, c| cols[c][r].clone());
    let mut lambda = QMatrix::zeros(size, size);
    for (j, qj) in q.iter().enumerate() {
        let target = data.apply_l(qj).coefficient_vector(n)?;
        match basis.solve(&target) {
            LinearSolution::Unique(v) => {
                for (i, x) in v.into_iter().enumerate() {
                    lambda.set(i, j, x);
                }
            }
            LinearSolution::Inconsistent => return Err(Error::NonzeroResidual { degree: n }),
            LinearSolution::Many { .. } => return Err(Error::Unsolvable { degree: n }),
        }
    }
    Ok(LambdaReport {
        nonsingular: lambda.is_nonsingular(),
        scalar: lambda.is_scalar(),
        diagonal: lambda.is_diagonal(),
        lambda,
    })
}

fn sign(n: u32) -> Rational {
    if n.is_multiple_of(2) {
        int(1)
    } else {
        int(-1)
    }
}

fn factorial(n: u32) -> Rational {
    (1..=n as i64).fold(int(1), |acc, i| acc * int(i))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FactorialReport {
    pub holds: bool,
    /// `det <u, Phi^{n}> != 0`.
    pub phi_n_pairing_nonsingular: bool,
    /// When the pairing is nonsingular, the entries are a PS with a
    /// nonsingular Gram matrix.
    pub wops_consistent: bool,
}

/// `<u, Q_n X_n^t> = (-1)^n n! <u, (Phi^{n})^t>`.
pub fn factorial_identity_check(
    u: &MomentFunctional,
    phi_n: &PolyMatrix,
    q: &[BiPoly],
    n: u32,
) -> Result<FactorialReport> {
    let lhs = pair_with_monomials(u, q, n)?;
    let paired = u.pair(phi_n)?;
    let rhs = paired.transpose().scale(&(sign(n) * factorial(n)));
    let nonsingular = paired.is_nonsingular();
    let wops = !nonsingular || (ps_check(q, n) && gram(u, q)?.nonsingular);
    Ok(FactorialReport {
        holds: lhs == rhs,
        phi_n_pairing_nonsingular: nonsingular,
        wops_consistent: wops,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DistributionalReport {
    pub holds: bool,
    /// Every monomial of degree `<= window` was checked.
    pub window: u32,
    pub failures: Vec<(u32, u32)>,
}

/// `<u, Q_{n,i} m> = (-1)^n sum_j <u, phi^{n}_{j,i} D_j^n m>` for all
/// monomials `m` of degree `<= window`.
pub fn distributional_identity_check(
    u: &MomentFunctional,
    phi_n: &PolyMatrix,
    q: &[BiPoly],
    n: u32,
    window: u32,
) -> Result<DistributionalReport> {
    let blocks = rows_of(phi_n);
    let mut failures = Vec::new();
    for m in Monomial::up_to_degree(window) {
        let mono = BiPoly::term(One::one(), m.h, m.k);
        let rhs = pair_div(u, n, &blocks, &mono)?;
        for (i, qi) in q.iter().enumerate() {
            if u.pair_poly(&(qi * &mono))? != *rhs.get(0, i) {
                failures.push((m.h, m.k));
                break;
            }
        }
    }
    Ok(DistributionalReport {
        holds: failures.is_empty(),
        window,
        failures,
    })
}

/// The monic WOPS: `P_{n-i,i} = x^{n-i} y^i + (lower)` with
/// `<u, P_{n-i,i} m> = 0` for every `m` of degree `< n`.
pub fn monic_wops(u: &MomentFunctional, n: u32) -> Result<Vec<BiPoly>> {
    if n == 0 {
        return Ok(vec![BiPoly::one()]);
    }
    let gram = u.moment_matrix(n - 1)?;
    let lower: Vec<Monomial> = Monomial::up_to_degree(n - 1).collect();
    Monomial::of_degree(n)
        .map(|lead| {
            let b: Vec<_> = lower
                .iter()
                .map(|m| u.moment(lead.h + m.h, lead.k + m.k).map(|v| -v.clone()))
                .collect::<Result<_>>()?;
            match gram.solve(&b) {
                LinearSolution::Unique(c) => {
                    let low = BiPoly::from_coefficient_vector(&c);
                    Ok(&low + &BiPoly::term(One::one(), lead.h, lead.k))
                }
                _ => Err(Error::SingularMoments { degree: n - 1 }),
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GramSchmidtReport {
    /// `C` with `Q_n = C P_n`.
    #[serde(serialize_with = "crate::serial::ser_qmatrix")]
    pub change_of_basis: QMatrix,
    pub nonsingular: bool,
    /// `Q_n - C P_n` vanishes identically.
    pub spans: bool,
}

pub fn gram_schmidt_check(u: &MomentFunctional, q: &[BiPoly], n: u32) -> Result<GramSchmidtReport> {
    let monic = monic_wops(u, n)?;
    let c = leading_matrix(q, n);
    let spans = q.iter().enumerate().all(|(i, qi)| {
        let combo = monic
            .iter()
            .enumerate()
            .fold(BiPoly::zero(), |acc, (j, pj)| &acc + &pj.scale(c.get(i, j)));
        combo == *qi
    });
    Ok(GramSchmidtReport {
        nonsingular: c.is_nonsingular(),
        spans,
        change_of_basis: c,
    })
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;
    use crate::catalog::load;
    use crate::moments::{closed_form_moments, moments_from_pearson_data, ClosedFormDomain};
    use crate::ring::{int, rat};

    fn p(s: &str) -> BiPoly {
        s.parse().unwrap()
    }

    fn ps(v: &[&str]) -> Vec<BiPoly> {
        v.iter().map(|s| p(s)).collect()
    }

    fn family(name: &str) -> FamilySpec {
        load(name, &BTreeMap::new()).unwrap()
    }

    fn intriguing_moments(cap: u32) -> MomentFunctional {
        let f = family("krall-sheffer-intriguing");
        moments_from_pearson_data(f.phi(), f.psi(), cap).unwrap()
    }

    #[test]
    fn intriguing_reproduction() {
        let f = family("krall-sheffer-intriguing");
        let want = [
            ps(&["1"]),
            ps(&["-x", "-y"]),
            ps(&["x^2 - 6*y", "2*x*y - 2", "y^2"]),
            ps(&[
                "-x^3 + 18*x*y - 12",
                "-3*x^2*y + 18*y^2 + 6*x",
                "-3*x*y^2 + 6*y",
                "-y^3",
            ]),
        ];
        for (n, w) in want.iter().enumerate() {
            let q = build_q(&f, n as u32, FormChoice::Auto).unwrap();
            assert_eq!(&q.entries, w, "n = {n}");
            assert_eq!(q.route, Route::Carrier);
            assert!(q.exact_degree());
        }
    }

    #[test]
    fn diagonal_examples() {
        let b = family("ball");
        assert_eq!(
            build_q(&b, 1, FormChoice::Auto).unwrap().entries,
            ps(&["-2*x", "-2*y"])
        );
        let s = family("simplex");
        assert_eq!(
            build_q_diagonal(&s, 1).unwrap().entries,
            ps(&["1 - 2*x - y", "1 - x - 2*y"])
        );
        let h = family("tensor-hermite-hermite");
        assert_eq!(
            build_q_diagonal(&h, 1).unwrap().entries,
            ps(&["-2*x", "-2*y"])
        );
        assert_eq!(build_q_diagonal(&h, 0).unwrap().entries, ps(&["1"]));
        assert!(build_q_diagonal(&family("krall-sheffer-intriguing"), 1).is_err());
        for n in 0..=4 {
            assert_eq!(
                build_q_diagonal(&s, n).unwrap().entries,
                build_q(&s, n, FormChoice::Diagonal).unwrap().entries
            );
        }
    }

    #[test]
    fn bessel_needs_the_moment_route() {
        let f = family("tensor-bessel-bessel");
        assert!(matches!(
            build_q(&f, 1, FormChoice::Auto),
            Err(Error::NoCarrier(_))
        ));
        let u = moments_from_pearson_data(f.phi(), f.psi(), 8).unwrap();
        let q = construct(&f, &u, 2, FormChoice::Auto).unwrap();
        assert_eq!(q.route, Route::Moment);
        assert!(verify_orthogonality(&u, &q.entries, 1)
            .unwrap()
            .iter()
            .all(|e| e.zero));
    }

    #[test]
    fn moment_route_matches_carrier_route() {
        let f = family("krall-sheffer-intriguing");
        let u = intriguing_moments(10);
        for n in 0..=3 {
            let phi_n = kron_power(f.phi(), n).unwrap().body;
            assert_eq!(
                build_q_moment(&u, &phi_n, n).unwrap(),
                build_q(&f, n, FormChoice::Auto).unwrap().entries
            );
        }
    }

    #[test]
    fn orthogonality_examples() {
        let u = intriguing_moments(8);
        let q3 = ps(&[
            "-x^3 + 18*x*y - 12",
            "-3*x^2*y + 18*y^2 + 6*x",
            "-3*x*y^2 + 6*y",
            "-y^3",
        ]);
        let t = verify_orthogonality(&u, &q3, 2).unwrap();
        assert!(t.iter().all(|e| e.zero));
        assert_eq!(u.pair_poly(&q3[0]).unwrap(), int(0));
        let ball = closed_form_moments(&ClosedFormDomain::Ball { mu: rat(1, 2) }, 4).unwrap();
        assert!(verify_orthogonality(&ball, &ps(&["-2*x", "-2*y"]), 0).unwrap()[0].zero);
        let nonzero = verify_orthogonality(&u, &ps(&["x*y"]), 0).unwrap();
        assert_eq!(nonzero[0].max_abs_numerator, "1");
    }

    #[test]
    fn gram_examples() {
        let u = intriguing_moments(6);
        let h1 = gram(&u, &ps(&["-x", "-y"])).unwrap();
        assert_eq!(h1.h.entries(), &[int(0), int(1), int(1), int(0)]);
        assert!(h1.nonsingular && !h1.diagonal);
        assert_eq!(gram(&u, &ps(&["1"])).unwrap().h.entries(), &[int(1)]);

        let s = closed_form_moments(
            &ClosedFormDomain::Simplex {
                alpha: int(0),
                beta: int(0),
                gamma: int(0),
            },
            4,
        )
        .unwrap();
        let hs = gram(&s, &ps(&["1 - 2*x - y", "1 - x - 2*y"])).unwrap();
        assert_eq!(
            hs.h.entries(),
            &[rat(1, 6), rat(1, 12), rat(1, 12), rat(1, 6)]
        );
        assert_eq!(hs.h.det(), rat(1, 48));
    }

    #[test]
    fn lambda_examples() {
        let f = family("krall-sheffer-intriguing");
        let q2 = build_q(&f, 2, FormChoice::Auto).unwrap();
        let l2 = solve_lambda(f.original(), &q2.entries, 2).unwrap();
        assert_eq!(l2.lambda, QMatrix::identity(3).scale(&int(-2)));
        assert!(l2.scalar && l2.nonsingular);
        let l0 = solve_lambda(f.original(), &ps(&["1"]), 0).unwrap();
        assert!(l0.lambda.is_zero());

        let b = family("ball");
        for n in 1..=4u32 {
            let q = build_q(&b, n, FormChoice::Auto).unwrap();
            let l = solve_lambda(b.original(), &q.entries, n).unwrap();
            let n = n as i64;
            assert_eq!(
                l.lambda,
                QMatrix::identity(n as usize + 1).scale(&int(n * (n + 2)))
            );
        }
        assert!(matches!(
            solve_lambda(f.original(), &ps(&["x", "x"]), 1),
            Err(Error::Unsolvable { degree: 1 })
        ));
        assert!(matches!(
            solve_lambda(f.original(), &ps(&["x", "y^2"]), 1),
            Err(Error::Unsolvable { .. }) | Err(Error::Dimension(_))
        ));
        assert!(matches!(
            solve_lambda(f.original(), &ps(&["x + 1", "y"]), 1),
            Err(Error::NonzeroResidual { degree: 1 })
        ));
    }

    #[test]
    fn ps_examples() {
        assert!(ps_check(&ps(&["x^2 - 6*y", "2*x*y - 2", "y^2"]), 2));
        assert!(!ps_check(&ps(&["x^2", "x^2", "y^2"]), 2));
        assert!(ps_check(&ps(&["3"]), 0));
    }

    #[test]
    fn factorial_identity_examples() {
        let f = family("krall-sheffer-intriguing");
        let u = intriguing_moments(8);
        for n in 0..=3 {
            let phi_n = kron_power(f.phi(), n).unwrap().body;
            let q = build_q(&f, n, FormChoice::Auto).unwrap();
            let r = factorial_identity_check(&u, &phi_n, &q.entries, n).unwrap();
            assert!(r.holds && r.wops_consistent, "n = {n}");
        }
        let s = family("simplex");
        let us = closed_form_moments(
            &ClosedFormDomain::Simplex {
                alpha: int(0),
                beta: int(0),
                gamma: int(0),
            },
            4,
        )
        .unwrap();
        let d = s.diagonal_reduction().unwrap();
        let phi_1 = kron_power(d.phi(), 1).unwrap().body;
        let q = build_q(&s, 1, FormChoice::Auto).unwrap();
        assert!(
            factorial_identity_check(&us, &phi_1, &q.entries, 1)
                .unwrap()
                .holds
        );
    }

    #[test]
    fn distributional_examples() {
        let f = family("krall-sheffer-intriguing");
        let u = intriguing_moments(10);
        for n in 0..=3 {
            let phi_n = kron_power(f.phi(), n).unwrap().body;
            let q = build_q(&f, n, FormChoice::Auto).unwrap();
            let r = distributional_identity_check(&u, &phi_n, &q.entries, n, n + 2).unwrap();
            assert!(r.holds, "n = {n}: {:?}", r.failures);
        }
        let phi_1 = kron_power(f.phi(), 1).unwrap().body;
        let bad = distributional_identity_check(&u, &phi_1, &ps(&["-x", "y"]), 1, 1).unwrap();
        assert!(!bad.holds);
    }

    #[test]
    fn gram_schmidt_examples() {
        let f = family("krall-sheffer-intriguing");
        let u = intriguing_moments(8);
        assert_eq!(
            monic_wops(&u, 2).unwrap(),
            ps(&["x^2 - 6*y", "x*y - 1", "y^2"])
        );
        for n in 0..=3 {
            let q = build_q(&f, n, FormChoice::Auto).unwrap();
            let r = gram_schmidt_check(&u, &q.entries, n).unwrap();
            assert!(r.spans && r.nonsingular, "n = {n}");
        }
    }

    #[test]
    fn corrupted_factor_is_not_divisible() {
        let b = family("ball");
        let d = b.diagonal_reduction().unwrap();
        let w =
            crate::diff::WeightCarrier::new(BiPoly::zero(), vec![(p("1 - x^2 - 2*y^2"), int(1))])
                .unwrap();
        let bad = FamilySpec::new(
            "bad",
            BTreeMap::new(),
            b.original().clone(),
            Some(d.with_weight(Some(w))),
        );
        let err = build_q(&bad, 1, FormChoice::Auto).unwrap_err();
        assert!(matches!(err, Error::NotDivisible { .. }), "{err:?}");
    }
}
