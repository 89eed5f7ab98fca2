//! Output documents: polynomial lists and verification reports as JSON,
//! LaTeX and plain text.

use std::fmt::Write;

use serde::Serialize;

use crate::pearson::FormUsed;
use crate::poly::BiPoly;
use crate::rodrigues::{RodriguesVector, Route, VerificationReport};

#[derive(Debug, Clone, Serialize)]
struct DegreeDoc<'a> {
    n: u32,
    q: &'a [BiPoly],
}

#[derive(Debug, Clone, Serialize)]
struct GenerateDoc<'a> {
    family: &'a str,
    form: FormUsed,
    route: Route,
    degrees: Vec<DegreeDoc<'a>>,
}

pub fn generate_json(family: &str, qs: &[RodriguesVector]) -> String {
    let doc = GenerateDoc {
        family,
        form: qs.first().map_or(FormUsed::Original, |q| q.form),
        route: qs.first().map_or(Route::Carrier, |q| q.route),
        degrees: qs
            .iter()
            .map(|q| DegreeDoc {
                n: q.n,
                q: &q.entries,
            })
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("generate documents serialize") + "\n"
}

fn joined(q: &[BiPoly], f: impl Fn(&BiPoly) -> String) -> String {
    q.iter().map(f).collect::<Vec<_>>().join(", ")
}

/// One line per degree: `Q_n^t = (..., ...)`.
pub fn generate_text(qs: &[RodriguesVector]) -> String {
    let mut s = String::new();
    for q in qs {
        writeln!(
            s,
            "Q_{}^t = ({})",
            q.n,
            joined(&q.entries, |p| p.to_string())
        )
        .unwrap();
    }
    s
}

/// `eqnarray*` block with one row per degree.
pub fn generate_latex(qs: &[RodriguesVector]) -> String {
    let mut s = String::from("\\begin{eqnarray*}\n");
    for (i, q) in qs.iter().enumerate() {
        let body = if q.entries.len() == 1 {
            q.entries[0].to_latex()
        } else {
            format!("\\left({}\\right)", joined(&q.entries, BiPoly::to_latex))
        };
        let end = if i + 1 == qs.len() { "." } else { ", \\\\" };
        writeln!(s, "\\mathbb{{Q}}_{}^t &=& {body}{end}", q.n).unwrap();
    }
    s.push_str("\\end{eqnarray*}\n");
    s
}

pub fn report_json(r: &VerificationReport) -> String {
    serde_json::to_string_pretty(r).expect("reports serialize") + "\n"
}

fn flag(v: Option<bool>) -> &'static str {
    match v {
        Some(true) => "yes",
        Some(false) => "no",
        None => "n/a",
    }
}

pub fn report_text(r: &VerificationReport) -> String {
    let mut s = String::new();
    writeln!(s, "family: {}", r.family).unwrap();
    for (k, v) in &r.params {
        writeln!(s, "  {k} = {v}").unwrap();
    }
    writeln!(
        s,
        "form: {:?}, route: {:?}, degrees 0..={}, moment cap {}",
        r.form_used, r.route, r.max_degree, r.cap
    )
    .unwrap();
    for f in &r.condr {
        writeln!(
            s,
            "structural condition ({:?} form): {}",
            f.form,
            flag(f.value)
        )
        .unwrap();
    }
    for f in &r.symmetry_factor {
        writeln!(s, "symmetry factor ({:?} form): {}", f.form, flag(f.value)).unwrap();
    }
    for f in &r.symmetrizable {
        writeln!(s, "symmetrizable ({:?} form): {}", f.form, flag(f.value)).unwrap();
    }
    writeln!(s, "det <u, Phi> != 0: {}", flag(Some(r.phireg))).unwrap();
    writeln!(
        s,
        "moment matrices nonsingular (quasi-definite stand-in): {}",
        flag(Some(r.quasi_definite.consistent_with_quasi_definite))
    )
    .unwrap();
    for d in &r.degrees {
        let q = d.q.as_deref().map(|q| joined(q, |p| p.to_string()));
        writeln!(
            s,
            "n = {}: Q = ({})",
            d.n,
            q.unwrap_or_else(|| "construction failed".into())
        )
        .unwrap();
        let lambda = d.lambda.as_ref().map(|l| {
            if l.scalar {
                format!(
                    "scalar {}",
                    crate::ring::fraction_string(l.lambda.get(0, 0))
                )
            } else if l.diagonal {
                "diagonal".to_string()
            } else {
                "general".to_string()
            }
        });
        writeln!(
            s,
            "  orthogonal: {}, H_n nonsingular: {}, PS: {}, Lambda_n: {}",
            flag(Some(d.orthogonal)),
            flag(d.gram.as_ref().map(|g| g.nonsingular)),
            flag(Some(d.ps)),
            lambda.unwrap_or_else(|| "unsolved".into())
        )
        .unwrap();
        writeln!(
            s,
            "  n!-identity: {}, distributional identity: {}, monic WOPS spans: {}",
            flag(d.factorial_identity.as_ref().map(|c| c.holds)),
            flag(d.distributional.as_ref().map(|c| c.holds)),
            flag(d.gram_schmidt.as_ref().map(|g| g.spans && g.nonsingular))
        )
        .unwrap();
    }
    for w in &r.warnings {
        writeln!(s, "warning: {w}").unwrap();
    }
    for f in &r.failures {
        writeln!(s, "FAIL [{:?}] {}", f.kind, f.message).unwrap();
    }
    writeln!(
        s,
        "{}",
        if r.passed {
            "all checks passed"
        } else {
            "verification failed"
        }
    )
    .unwrap();
    s
}

/// Appendix listing the verified polynomials.
pub fn report_latex(r: &VerificationReport) -> String {
    let qs: Vec<RodriguesVector> = r
        .degrees
        .iter()
        .filter_map(|d| {
            d.q.as_ref().map(|q| RodriguesVector {
                n: d.n,
                entries: q.clone(),
                form: r.form_used,
                route: r.route,
                certificate: Vec::new(),
            })
        })
        .collect();
    let mut s = format!(
        "% {} ({})\n",
        r.family,
        if r.passed {
            "verified"
        } else {
            "verification failed"
        }
    );
    s.push_str(&generate_latex(&qs));
    s
}
