//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any fails.

mod common;

use std::collections::BTreeMap;
use std::process::ExitCode;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use matrod::catalog::{closed_form_domain, entries, load, load_defaults};
use matrod::kron::{kron_explicit, kron_power, kron_recurrence, Recurrence};
use matrod::moments::{
    closed_form_moments, moments_from_pearson_data, quasi_definite_check, MomentFunctional,
    Provenance,
};
use matrod::pearson::{
    adjoint_violations, condr_lemma_holds, solve_condr, verify_symmetry_factor, FamilySpec,
    FormChoice, PearsonData,
};
use matrod::ring::{int, rat};
use matrod::rodrigues::{
    build_q, build_q_diagonal_data, verify_family, VerificationReport, VerifyConfig,
};
use matrod::{BiPoly, Error, Mat, PolyMatrix, QMatrix, Rational};

type Outcome = Result<(), String>;

fn p(s: &str) -> BiPoly {
    s.parse().unwrap()
}

fn family(name: &str, params: &[(&str, Rational)]) -> FamilySpec {
    let map = params
        .iter()
        .map(|(k, v)| (k.to_string(), v.clone()))
        .collect();
    load(name, &map).unwrap()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn label(f: &FamilySpec) -> String {
    let params: Vec<String> = f.params().iter().map(|(k, v)| format!("{k}={v}")).collect();
    if params.is_empty() {
        f.name().to_string()
    } else {
        format!("{}({})", f.name(), params.join(","))
    }
}

fn reproduction() -> Outcome {
    let f = family("krall-sheffer-intriguing", &[]);
    let want: [&[&str]; 4] = [
        &["1"],
        &["-x", "-y"],
        &["x^2 - 6*y", "2*x*y - 2", "y^2"],
        &[
            "-x^3 + 18*x*y - 12",
            "-3*x^2*y + 18*y^2 + 6*x",
            "-3*x*y^2 + 6*y",
            "-y^3",
        ],
    ];
    for (n, w) in want.iter().enumerate() {
        let q = build_q(&f, n as u32, FormChoice::Auto).map_err(|e| e.to_string())?;
        let got: Vec<String> = q.entries.iter().map(|e| e.to_string()).collect();
        let expected: Vec<String> = w.iter().map(|s| p(s).to_string()).collect();
        ensure(got == expected, || format!("n = {n}: got {got:?}"))?;
    }
    Ok(())
}

fn triple_agrees<R: matrod::Ring>(a: &Mat<R>, n: u32) -> bool {
    let e = kron_explicit(a, n).unwrap().body;
    kron_recurrence(a, n, Recurrence::I).unwrap().body == e
        && kron_recurrence(a, n, Recurrence::II).unwrap().body == e
}

fn kronecker() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for trial in 0..100 {
        let a: QMatrix = Mat::from_fn(2, 2, |_, _| {
            rat(rng.gen_range(-30..=30), rng.gen_range(1..=9))
        });
        for n in 0..=8 {
            ensure(triple_agrees(&a, n), || {
                format!("random matrix {trial} at n = {n}")
            })?;
        }
    }
    for f in load_defaults() {
        for (form, data) in f.forms() {
            for n in 0..=8 {
                ensure(triple_agrees(data.phi(), n), || {
                    format!("{} {form:?} Phi at n = {n}", f.name())
                })?;
            }
        }
    }
    let (a, want) = common::generic_second_power();
    ensure(
        kron_explicit(&a, 2).unwrap().body == want && triple_agrees(&a, 2),
        || "symbolic second power".into(),
    )
}

/// The desk-scale grid of families.
fn grid() -> Vec<FamilySpec> {
    let mut out = vec![
        family("krall-sheffer-intriguing", &[]),
        family("ball", &[("mu", rat(1, 2))]),
        family("ball", &[("mu", rat(3, 2))]),
    ];
    for bits in 0..8i64 {
        out.push(family(
            "simplex",
            &[
                ("alpha", int(bits & 1)),
                ("beta", int((bits >> 1) & 1)),
                ("gamma", int((bits >> 2) & 1)),
            ],
        ));
    }
    out.push(family("tensor-hermite-hermite", &[]));
    out.push(family(
        "tensor-laguerre-jacobi",
        &[("alpha", int(0)), ("beta", int(0)), ("gamma", int(0))],
    ));
    out
}

fn orthogonality(reports: &[VerificationReport]) -> Outcome {
    for r in reports {
        for d in &r.degrees {
            ensure(d.q.is_some(), || {
                format!("{} n = {}: {:?}", r.family, d.n, d.construction_error)
            })?;
            ensure(d.orthogonal, || format!("{} n = {}", r.family, d.n))?;
        }
    }
    Ok(())
}

fn eigen_matrices(grid: &[FamilySpec], reports: &[VerificationReport]) -> Outcome {
    for r in reports {
        for d in &r.degrees {
            ensure(d.lambda.is_some() && d.lambda_error.is_none(), || {
                format!("{} n = {}: {:?}", r.family, d.n, d.lambda_error)
            })?;
        }
    }
    let mut non_scalar_tensor = false;
    for (f, r) in grid.iter().zip(reports) {
        for d in &r.degrees {
            let l = &d.lambda.as_ref().unwrap().lambda;
            let n = d.n as i64;
            let size = d.n as usize + 1;
            match f.name() {
                "krall-sheffer-intriguing" => {
                    ensure(*l == QMatrix::identity(size).scale(&int(-n)), || {
                        format!("Lambda_{n} = {l}")
                    })?;
                }
                "ball" => {
                    let mu = &f.params()["mu"];
                    let v = int(n * (n - 1)) + (mu * int(2) + int(2)) * int(n);
                    ensure(*l == QMatrix::identity(size).scale(&v), || {
                        format!("{} Lambda_{n} = {l}", label(f))
                    })?;
                }
                name if name.starts_with("tensor") => {
                    non_scalar_tensor |= l.is_diagonal() && !l.is_scalar()
                }
                _ => {}
            }
        }
    }
    ensure(non_scalar_tensor, || {
        "no tensor family has a diagonal non-scalar Lambda_n".into()
    })
}

fn catalog_reports(grid: &[FamilySpec], reports: &[VerificationReport]) -> Vec<VerificationReport> {
    let mut out: Vec<VerificationReport> = grid
        .iter()
        .zip(reports)
        .filter(|(f, _)| {
            f.params().values().all(|v| v.is_integer() && v == &int(0))
                || f.name() == "ball" && f.params()["mu"] == rat(1, 2)
        })
        .map(|(_, r)| r.clone())
        .collect();
    let bessel = load("tensor-bessel-bessel", &BTreeMap::new()).unwrap();
    out.push(verify_family(&bessel, &VerifyConfig::new(6)).unwrap());
    out
}

fn per_degree(
    reports: &[VerificationReport],
    what: &str,
    ok: impl Fn(&matrod::rodrigues::DegreeReport) -> bool,
) -> Outcome {
    for r in reports {
        for d in r.degrees.iter().filter(|d| d.n <= 6) {
            ensure(ok(d), || {
                format!("{what} fails for {} at n = {}", r.family, d.n)
            })?;
        }
    }
    Ok(())
}

fn condr() -> Outcome {
    let intriguing = family("krall-sheffer-intriguing", &[]);
    let simplex = family("simplex", &[]);
    let ball = family("ball", &[]);
    let with_solution: Vec<(&str, &PolyMatrix)> = vec![
        ("krall-sheffer-intriguing", intriguing.phi()),
        ("simplex original", simplex.original().phi()),
        (
            "simplex diagonal",
            simplex.diagonal_reduction().unwrap().phi(),
        ),
        ("ball diagonal", ball.diagonal_reduction().unwrap().phi()),
    ];
    for (name, phi) in with_solution {
        let c = solve_condr(phi).ok_or_else(|| format!("no solution for {name}"))?;
        for n in 1..=6 {
            let phi_n = kron_power(phi, n).unwrap().body;
            ensure(condr_lemma_holds(&c, phi, &phi_n, n), || {
                format!("lemma identity fails for {name} at n = {n}")
            })?;
        }
    }
    ensure(solve_condr(ball.original().phi()).is_none(), || {
        "ball original form unexpectedly has a solution".into()
    })
}

fn pearson_moments(f: &FamilySpec, cap: u32) -> Option<MomentFunctional> {
    f.forms()
        .into_iter()
        .find_map(|(_, d)| moments_from_pearson_data(d.phi(), d.psi(), cap).ok())
}

fn moments() -> Outcome {
    let mut cases = vec![];
    for mu in [rat(-1, 4), int(0), rat(1, 2), int(1), rat(3, 2), rat(5, 2)] {
        cases.push(family("ball", &[("mu", mu)]));
    }
    let vals = [int(0), rat(1, 2), int(1), int(2)];
    for a in &vals {
        for b in &vals {
            for c in &vals {
                cases.push(family(
                    "simplex",
                    &[
                        ("alpha", a.clone()),
                        ("beta", b.clone()),
                        ("gamma", c.clone()),
                    ],
                ));
            }
        }
    }
    let bad: Vec<String> = cases
        .par_iter()
        .filter_map(|f| {
            let closed = closed_form_moments(&closed_form_domain(f).unwrap(), 12).unwrap();
            match pearson_moments(f, 12) {
                Some(u)
                    if u.provenance() == Provenance::PearsonRecurrence
                        && u.same_moments(&closed) =>
                {
                    None
                }
                _ => Some(label(f)),
            }
        })
        .collect();
    ensure(bad.is_empty(), || format!("disagreement for {bad:?}"))?;

    let f = family("krall-sheffer-intriguing", &[]);
    let u = moments_from_pearson_data(f.phi(), f.psi(), 12).map_err(|e| e.to_string())?;
    ensure(
        *u.moment(1, 1).unwrap() == int(1) && *u.moment(3, 0).unwrap() == int(6),
        || "mu_11 or mu_30".into(),
    )?;
    let v = adjoint_violations(f.original(), &u, 12).map_err(|e| e.to_string())?;
    ensure(v.is_empty(), || format!("<u, L[m]> != 0 for {v:?}"))
}

fn negative_controls() -> Outcome {
    let ball = family("ball", &[("mu", rat(3, 2))]);
    let orig = ball.original();
    let bumped = [&orig.psi()[0] + &p("1"), orig.psi()[1].clone()];
    let perturbed = PearsonData::new(orig.phi().clone(), bumped, orig.weight().cloned()).unwrap();
    ensure(verify_symmetry_factor(orig).unwrap().holds, || {
        "unperturbed ball fails the symmetry check".into()
    })?;
    ensure(!verify_symmetry_factor(&perturbed).unwrap().holds, || {
        "perturbed Psi still passes".into()
    })?;

    let flat = MomentFunctional::from_fn(4, |_, _| int(1));
    let qd = quasi_definite_check(&flat, 2).unwrap();
    ensure(
        !qd.consistent_with_quasi_definite && qd.determinants[1] == int(0),
        || "det M_1 = 0 not flagged".into(),
    )?;

    let diag = ball.diagonal_reduction().unwrap();
    let w = diag.weight().unwrap();
    let corrupted_factors: Vec<(BiPoly, Rational)> = w
        .factors()
        .iter()
        .map(|(_, e)| (p("1 - x^2 - 2*y^2"), e.clone()))
        .collect();
    let corrupted =
        matrod::diff::WeightCarrier::new(w.exponential().clone(), corrupted_factors).unwrap();
    let data = diag.with_weight(Some(corrupted));
    match build_q_diagonal_data(&data, 1) {
        Err(Error::NotDivisible { .. }) => Ok(()),
        other => Err(format!(
            "expected NotDivisible, got {:?}",
            other.map(|(q, _)| q)
        )),
    }
}

fn main() -> ExitCode {
    let grid = grid();
    let cfg = VerifyConfig::new(8);
    let reports: Vec<VerificationReport> = grid
        .par_iter()
        .map(|f| verify_family(f, &cfg).unwrap())
        .collect();
    let catalog = catalog_reports(&grid, &reports);
    let expected_names: Vec<&str> = entries().iter().map(|e| e.name).collect();
    let covered = expected_names
        .iter()
        .all(|n| catalog.iter().any(|r| r.family == *n));
    let catalog_check = |what: &str, ok: fn(&matrod::rodrigues::DegreeReport) -> bool| -> Outcome {
        ensure(covered, || "catalog coverage incomplete".into())?;
        per_degree(&catalog, what, ok)
    };

    let results: Vec<(&str, Outcome)> = vec![
        (
            "intriguing family reproduces Q_0..Q_3 exactly",
            reproduction(),
        ),
        (
            "Kronecker power: explicit formula and both recurrences agree",
            kronecker(),
        ),
        (
            "orthogonality <u, Q_n X_m^t> = 0 for m < n <= 8 on the family grid",
            orthogonality(&reports),
        ),
        (
            "eigen-matrices solve with zero residual and have the expected shape",
            eigen_matrices(&grid, &reports),
        ),
        (
            "<u, Q_n X_n^t> = (-1)^n n! <u, (Phi^{n})^t> for n <= 6 on the catalog",
            catalog_check("n!-identity", |d| {
                d.factorial_identity.as_ref().is_some_and(|c| c.holds)
            }),
        ),
        ("condR solutions and the lemma identity for n <= 6", condr()),
        ("Pearson moments match closed forms to cap 12", moments()),
        (
            "Q_n^t u = div^{n}(Phi^{n} u) for n <= 6 on the catalog",
            catalog_check("distributional identity", |d| {
                d.distributional.as_ref().is_some_and(|c| c.holds)
            }),
        ),
        (
            "monic WOPS from moments spans the space of Q_n for n <= 6 on the catalog",
            catalog_check("Gram-Schmidt", |d| {
                d.gram_schmidt
                    .as_ref()
                    .is_some_and(|g| g.nonsingular && g.spans)
            }),
        ),
        ("negative controls are detected", negative_controls()),
    ];

    let mut failed = 0;
    for (name, outcome) in &results {
        match outcome {
            Ok(()) => println!("PASS {name}"),
            Err(msg) => {
                failed += 1;
                println!("FAIL {name}: {msg}");
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        results.len() - failed,
        results.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
