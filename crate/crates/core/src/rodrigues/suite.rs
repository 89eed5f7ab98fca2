//! Full verification run for one family: every check at every degree,
//! collected into a [`VerificationReport`].

use std::collections::BTreeMap;

use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use super::{
    build_q_diagonal_data, build_q_moment, construct, distributional_identity_check,
    factorial_identity_check, gram, gram_schmidt_check, ps_check, solve_lambda,
    verify_orthogonality, DistributionalReport, FactorialReport, GramReport, GramSchmidtReport,
    LambdaReport, OrthogonalityEntry, Route,
};
use crate::catalog::{closed_form_domain, Expectations, LambdaShape};
use crate::error::{Error, Result};
use crate::kron::KronCache;
use crate::moments::{
    closed_form_moments, moments_from_pearson_data, quasi_definite_check, MomentFunctional,
    Provenance, QuasiDefiniteReport,
};
use crate::pearson::{
    adjoint_violations, check_symmetrizable, condr_lemma_holds, solve_condr,
    verify_symmetry_factor, FamilySpec, FormChoice, FormUsed,
};
use crate::poly::BiPoly;
use crate::ring::{fraction_string, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyConfig {
    pub max_degree: u32,
    /// Defaults to `2 * max_degree + 2`.
    pub cap: Option<u32>,
    pub form: FormChoice,
    /// Catalog expectations to enforce, if any.
    pub expectations: Option<Expectations>,
}

impl VerifyConfig {
    pub fn new(max_degree: u32) -> Self {
        VerifyConfig {
            max_degree,
            cap: None,
            form: FormChoice::Auto,
            expectations: None,
        }
    }

    pub fn cap(&self) -> u32 {
        self.cap.unwrap_or(2 * self.max_degree + 2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FailureKind {
    Construction,
    Orthogonality,
    Residual,
    Check,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub kind: FailureKind,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FormFlag {
    pub form: FormUsed,
    /// `None` when the check does not apply to this form.
    pub value: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeReport {
    pub n: u32,
    pub q: Option<Vec<BiPoly>>,
    pub construction_error: Option<String>,
    pub exact_degree: bool,
    pub no_zero_entry: bool,
    pub orthogonality: Vec<OrthogonalityEntry>,
    pub orthogonal: bool,
    pub gram: Option<GramReport>,
    pub ps: bool,
    /// Eigen-matrix for the operator of the original form.
    pub lambda: Option<LambdaReport>,
    /// Eigen-matrix for the operator of the construction form, when it
    /// differs from the original.
    pub lambda_form: Option<LambdaReport>,
    pub lambda_error: Option<String>,
    pub factorial_identity: Option<FactorialReport>,
    pub distributional: Option<DistributionalReport>,
    pub gram_schmidt: Option<GramSchmidtReport>,
    /// `(a_{k0} Phi^{n})_x + (a_{k1} Phi^{n})_y = Phi^{n} Psi_k^n`.
    pub condr_lemma: Option<bool>,
    /// Diagonal carrier route agrees with the full carrier route.
    pub diagonal_route_agrees: Option<bool>,
    /// Moment route agrees with the carrier route.
    pub moment_route_agrees: Option<bool>,
    #[serde(skip)]
    failures: Vec<Failure>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub family: String,
    pub params: BTreeMap<String, String>,
    pub form_used: FormUsed,
    pub route: Route,
    pub max_degree: u32,
    pub cap: u32,
    pub moment_provenance: Provenance,
    pub closed_form_agreement: Option<bool>,
    pub condr: Vec<FormFlag>,
    pub symmetry_factor: Vec<FormFlag>,
    pub symmetrizable: Vec<FormFlag>,
    pub phireg: bool,
    #[serde(serialize_with = "crate::serial::ser_rational")]
    pub phireg_det: Rational,
    pub drift_independent: bool,
    pub adjoint_annihilation: Vec<FormFlag>,
    pub quasi_definite: QuasiDefiniteReport,
    pub degrees: Vec<DegreeReport>,
    pub warnings: Vec<String>,
    pub failures: Vec<Failure>,
    pub passed: bool,
}

impl VerificationReport {
    /// Most severe failure class, in the order construction, orthogonality,
    /// residual, other checks.
    pub fn worst_failure(&self) -> Option<FailureKind> {
        self.failures.iter().map(|f| f.kind).min()
    }
}

/// Moments from the first form whose Pearson relations pin them down,
/// falling back to a closed form.
pub fn family_moments(fam: &FamilySpec, cap: u32) -> Result<MomentFunctional> {
    let mut first_err = None;
    for (_, data) in fam.forms() {
        match moments_from_pearson_data(data.phi(), data.psi(), cap) {
            Ok(u) => return Ok(u),
            Err(e) => {
                first_err.get_or_insert(e);
            }
        }
    }
    if let Some(d) = closed_form_domain(fam) {
        return closed_form_moments(&d, cap);
    }
    Err(first_err.expect("at least one form"))
}

fn fail(out: &mut Vec<Failure>, kind: FailureKind, message: impl Into<String>) {
    out.push(Failure {
        kind,
        message: message.into(),
    });
}

struct Shared<'a> {
    fam: &'a FamilySpec,
    u: &'a MomentFunctional,
    form: FormChoice,
    used: FormUsed,
    cache: &'a KronCache,
    condr: Option<crate::pearson::CondR>,
    moments_regular: bool,
    cap: u32,
}

fn degree_report(s: &Shared<'_>, n: u32) -> DegreeReport {
    let (_, data) = s.fam.select(s.form).expect("form already selected");
    let phi_n = s.cache.power(n);
    let mut failures = Vec::new();
    let mut r = DegreeReport {
        n,
        q: None,
        construction_error: None,
        exact_degree: false,
        no_zero_entry: false,
        orthogonality: Vec::new(),
        orthogonal: false,
        gram: None,
        ps: false,
        lambda: None,
        lambda_form: None,
        lambda_error: None,
        factorial_identity: None,
        distributional: None,
        gram_schmidt: None,
        condr_lemma: None,
        diagonal_route_agrees: None,
        moment_route_agrees: None,
        failures: Vec::new(),
    };
    if n >= 1 {
        r.condr_lemma = s
            .condr
            .as_ref()
            .map(|c| condr_lemma_holds(c, data.phi(), &phi_n, n));
        if r.condr_lemma == Some(false) {
            fail(
                &mut failures,
                FailureKind::Check,
                format!("n = {n}: lemma identity for Psi_k^n fails"),
            );
        }
    }
    let q = match construct(s.fam, s.u, n, s.form) {
        Ok(q) => q,
        Err(e) => {
            fail(
                &mut failures,
                FailureKind::Construction,
                format!("n = {n}: {e}"),
            );
            r.construction_error = Some(e.to_string());
            r.failures = failures;
            return r;
        }
    };
    let entries = q.entries.clone();
    r.exact_degree = q.exact_degree();
    r.no_zero_entry = entries.iter().all(|e| !e.is_zero());
    if !r.exact_degree {
        fail(
            &mut failures,
            FailureKind::Construction,
            format!("n = {n}: entry of wrong degree"),
        );
    }

    if data.is_diagonal() && data.weight().is_some() {
        let agrees = build_q_diagonal_data(data, n).map(|(d, _)| d == entries);
        r.diagonal_route_agrees = Some(agrees.unwrap_or(false));
        if r.diagonal_route_agrees == Some(false) {
            fail(
                &mut failures,
                FailureKind::Construction,
                format!("n = {n}: diagonal route disagrees"),
            );
        }
    }
    if q.route != Route::Moment && s.moments_regular {
        let agrees = build_q_moment(s.u, &phi_n, n).map(|m| m == entries);
        r.moment_route_agrees = Some(agrees.unwrap_or(false));
        if r.moment_route_agrees == Some(false) {
            fail(
                &mut failures,
                FailureKind::Construction,
                format!("n = {n}: moment route disagrees"),
            );
        }
    }

    let math = |r: &mut DegreeReport, failures: &mut Vec<Failure>| -> Result<()> {
        r.orthogonality = verify_orthogonality(s.u, &entries, n)?;
        r.orthogonal = r.orthogonality.iter().filter(|e| e.m < n).all(|e| e.zero);
        if !r.orthogonal {
            fail(
                failures,
                FailureKind::Orthogonality,
                format!("n = {n}: <u, Q_n X_m^t> != 0 for some m < n"),
            );
        }
        let g = gram(s.u, &entries)?;
        if !g.nonsingular {
            fail(
                failures,
                FailureKind::Check,
                format!("n = {n}: H_n is singular"),
            );
        }
        r.gram = Some(g);
        r.ps = ps_check(&entries, n);
        if !r.ps {
            fail(
                failures,
                FailureKind::Check,
                format!("n = {n}: entries dependent modulo lower degree"),
            );
        }
        if s.used == FormUsed::Diagonal || data.is_diagonal() {
            let det = s.u.pair(data.phi())?.det();
            if !det.is_zero() && !r.no_zero_entry {
                fail(
                    failures,
                    FailureKind::Construction,
                    format!("n = {n}: zero entry in a diagonal family"),
                );
            }
        }
        let mut lambda_for = |d: &crate::pearson::PearsonData| match solve_lambda(d, &entries, n) {
            Ok(l) => Some(l),
            Err(e) => {
                fail(failures, FailureKind::Residual, format!("n = {n}: {e}"));
                r.lambda_error.get_or_insert(e.to_string());
                None
            }
        };
        r.lambda = lambda_for(s.fam.original());
        if s.used != FormUsed::Original {
            r.lambda_form = lambda_for(data);
        }
        let c = factorial_identity_check(s.u, &phi_n, &entries, n)?;
        if !c.holds || !c.wops_consistent {
            fail(
                failures,
                FailureKind::Check,
                format!("n = {n}: n!-identity or its WOPS consequence fails"),
            );
        }
        r.factorial_identity = Some(c);
        let window = (n + 2).min(s.cap - n);
        let d = distributional_identity_check(s.u, &phi_n, &entries, n, window)?;
        if !d.holds {
            fail(
                failures,
                FailureKind::Check,
                format!("n = {n}: Q_n^t u != div^{{n}}(Phi^{{n}} u)"),
            );
        }
        r.distributional = Some(d);
        let gs = gram_schmidt_check(s.u, &entries, n)?;
        if !gs.spans || !gs.nonsingular {
            fail(
                failures,
                FailureKind::Check,
                format!("n = {n}: monic WOPS does not span Q_n"),
            );
        }
        r.gram_schmidt = Some(gs);
        Ok(())
    };
    if let Err(e) = math(&mut r, &mut failures) {
        fail(&mut failures, FailureKind::Check, format!("n = {n}: {e}"));
    }
    r.q = Some(entries);
    r.failures = failures;
    r
}

fn lambda_shape_ok(degrees: &[DegreeReport], shape: LambdaShape) -> bool {
    let lambdas: Vec<&LambdaReport> = degrees.iter().filter_map(|d| d.lambda.as_ref()).collect();
    if lambdas.len() != degrees.len() {
        return false;
    }
    match shape {
        LambdaShape::Scalar => lambdas.iter().all(|l| l.scalar),
        LambdaShape::Diagonal => {
            lambdas.iter().all(|l| l.diagonal)
                && (degrees.len() < 3 || lambdas.iter().any(|l| !l.scalar))
        }
    }
}

pub fn verify_family(fam: &FamilySpec, cfg: &VerifyConfig) -> Result<VerificationReport> {
    let cap = cfg.cap();
    if cap < 2 * cfg.max_degree {
        return Err(Error::MomentCapExceeded {
            needed: 2 * cfg.max_degree,
            cap,
        });
    }
    let (used, data) = fam.select(cfg.form)?;
    let mut failures = Vec::new();
    let mut warnings = Vec::new();

    let u = family_moments(fam, cap)?;
    let closed_form_agreement = closed_form_domain(fam)
        .map(|d| closed_form_moments(&d, cap).map(|c| c.same_moments(&u)))
        .transpose()?;
    if closed_form_agreement == Some(false) {
        fail(
            &mut failures,
            FailureKind::Check,
            "recurrence moments disagree with the closed form",
        );
    }

    let forms = fam.forms();
    let flags = |f: &dyn Fn(&crate::pearson::PearsonData) -> Option<bool>| -> Vec<FormFlag> {
        forms
            .iter()
            .map(|(form, d)| FormFlag {
                form: *form,
                value: f(d),
            })
            .collect()
    };
    let condr = flags(&|d| Some(solve_condr(d.phi()).is_some()));
    let symmetry_factor = flags(&|d| verify_symmetry_factor(d).ok().map(|r| r.holds));
    let symmetrizable = flags(&|d| check_symmetrizable(d).ok());
    let adjoint_annihilation =
        flags(&|d| adjoint_violations(d, &u, cap).ok().map(|v| v.is_empty()));

    for (name, list) in [
        ("symmetry factor", &symmetry_factor),
        ("symmetrizability", &symmetrizable),
        ("adjoint annihilation <u, L[m]> = 0", &adjoint_annihilation),
    ] {
        for f in list.iter().filter(|f| f.value == Some(false)) {
            fail(
                &mut failures,
                FailureKind::Check,
                format!("{name} fails in the {:?} form", f.form),
            );
        }
    }
    let condr_used = solve_condr(data.phi());
    if condr_used.is_none() {
        warnings.push(format!(
            "structural condition fails for the {used:?} form; construction attempted anyway"
        ));
    }
    if !data.drift_independent() {
        warnings.push("d and e are not independent polynomials of exact degree 1".into());
    }
    let phireg_det = u.pair(data.phi())?.det();
    let phireg = !phireg_det.is_zero();
    if !phireg {
        fail(&mut failures, FailureKind::Check, "det <u, Phi> = 0");
    }
    let quasi_definite = quasi_definite_check(&u, cfg.max_degree)?;
    if !quasi_definite.consistent_with_quasi_definite {
        fail(
            &mut failures,
            FailureKind::Check,
            "a graded moment matrix is singular",
        );
    }

    let cache = KronCache::new(data.phi().clone())?;
    let shared = Shared {
        fam,
        u: &u,
        form: cfg.form,
        used,
        cache: &cache,
        condr: condr_used,
        moments_regular: quasi_definite.consistent_with_quasi_definite,
        cap,
    };
    let degrees: Vec<DegreeReport> = (0..=cfg.max_degree)
        .into_par_iter()
        .map(|n| degree_report(&shared, n))
        .collect();
    for d in &degrees {
        failures.extend(d.failures.iter().cloned());
    }

    if let Some(exp) = &cfg.expectations {
        let original = condr.first().and_then(|f| f.value);
        if original != Some(exp.condr_original) {
            fail(
                &mut failures,
                FailureKind::Check,
                "structural condition on the original form differs from the catalog expectation",
            );
        }
        let diagonal = condr.get(1).and_then(|f| f.value);
        if diagonal != exp.condr_diagonal {
            fail(
                &mut failures,
                FailureKind::Check,
                "structural condition on the diagonal form differs from the catalog expectation",
            );
        }
        if symmetrizable
            .iter()
            .any(|f| f.value != Some(exp.symmetrizable))
        {
            fail(
                &mut failures,
                FailureKind::Check,
                "symmetrizability differs from the catalog expectation",
            );
        }
        if !lambda_shape_ok(&degrees, exp.lambda_shape) {
            fail(
                &mut failures,
                FailureKind::Check,
                format!("Lambda_n is not {:?} as expected", exp.lambda_shape),
            );
        }
    }

    let route = degrees
        .iter()
        .find_map(|d| d.q.as_ref().map(|_| ()))
        .map(|_| {
            if data.weight().is_some() {
                Route::Carrier
            } else {
                Route::Moment
            }
        })
        .unwrap_or(Route::Carrier);
    Ok(VerificationReport {
        family: fam.name().to_string(),
        params: fam
            .params()
            .iter()
            .map(|(k, v)| (k.clone(), fraction_string(v)))
            .collect(),
        form_used: used,
        route,
        max_degree: cfg.max_degree,
        cap,
        moment_provenance: u.provenance(),
        closed_form_agreement,
        condr,
        symmetry_factor,
        symmetrizable,
        phireg,
        phireg_det,
        drift_independent: data.drift_independent(),
        adjoint_annihilation,
        quasi_definite,
        degrees,
        warnings,
        passed: failures.is_empty(),
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{entries, load};

    #[test]
    fn intriguing_passes() {
        let f = load("krall-sheffer-intriguing", &BTreeMap::new()).unwrap();
        let r = verify_family(&f, &VerifyConfig::new(4)).unwrap();
        assert!(r.passed, "{:?}", r.failures);
        assert_eq!(r.form_used, FormUsed::Original);
        assert_eq!(r.degrees.len(), 5);
        assert!(!r.degrees[1].gram.as_ref().unwrap().diagonal);
    }

    #[test]
    fn every_catalog_entry_passes_at_low_degree() {
        for e in entries() {
            let f = load(e.name, &BTreeMap::new()).unwrap();
            let cfg = VerifyConfig {
                expectations: Some(e.expectations.clone()),
                ..VerifyConfig::new(3)
            };
            let r = verify_family(&f, &cfg).unwrap();
            assert!(r.passed, "{}: {:?}", e.name, r.failures);
        }
    }

    #[test]
    fn ball_reports_original_condr_failure() {
        let f = load("ball", &BTreeMap::new()).unwrap();
        let r = verify_family(&f, &VerifyConfig::new(2)).unwrap();
        assert_eq!(r.form_used, FormUsed::Diagonal);
        assert_eq!(r.condr[0].value, Some(false));
        assert_eq!(r.condr[1].value, Some(true));
        assert!(r.passed);
    }

    #[test]
    fn small_cap_is_rejected() {
        let f = load("simplex", &BTreeMap::new()).unwrap();
        let cfg = VerifyConfig {
            cap: Some(3),
            ..VerifyConfig::new(2)
        };
        assert!(matches!(
            verify_family(&f, &cfg),
            Err(Error::MomentCapExceeded { .. })
        ));
    }
}
