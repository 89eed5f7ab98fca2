//! JSON documents for polynomials, matrices, families and moment tables.
//!
//! Polynomials are written as `{"terms": [[h, k, "num/den"], ...]}` in
//! leading-first order. On input a plain string such as `"x^2 - 6*y"` is
//! accepted wherever a polynomial is expected.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize, Serializer};

use crate::diff::WeightCarrier;
use crate::error::{Error, Result};
use crate::moments::MomentFunctional;
use crate::pearson::{FamilySpec, PearsonData};
use crate::poly::{BiPoly, Mat, PolyMatrix, QMatrix};
use crate::ring::{fraction_string, parse_rational, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PolyDoc {
    Terms { terms: Vec<(u32, u32, String)> },
    Text(String),
}

impl PolyDoc {
    pub fn from_poly(p: &BiPoly) -> Self {
        PolyDoc::Terms {
            terms: p
                .terms()
                .rev()
                .map(|(m, c)| (m.h, m.k, fraction_string(c)))
                .collect(),
        }
    }

    pub fn to_poly(&self) -> Result<BiPoly> {
        match self {
            PolyDoc::Text(s) => s.parse(),
            PolyDoc::Terms { terms } => {
                let parsed = terms
                    .iter()
                    .map(|(h, k, c)| Ok((*h, *k, parse_rational(c)?)))
                    .collect::<Result<Vec<_>>>()?;
                Ok(BiPoly::from_terms(parsed))
            }
        }
    }
}

impl Serialize for BiPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolyDoc::from_poly(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for BiPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        PolyDoc::deserialize(d)?
            .to_poly()
            .map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixDoc<T> {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<T>>,
}

pub fn poly_matrix_doc(m: &PolyMatrix) -> MatrixDoc<BiPoly> {
    MatrixDoc {
        rows: m.rows(),
        cols: m.cols(),
        entries: m.to_rows(),
    }
}

pub fn rational_matrix_doc(m: &QMatrix) -> MatrixDoc<String> {
    MatrixDoc {
        rows: m.rows(),
        cols: m.cols(),
        entries: m
            .to_rows()
            .iter()
            .map(|r| r.iter().map(fraction_string).collect())
            .collect(),
    }
}

pub fn ser_rational<S: Serializer>(q: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&fraction_string(q))
}

pub fn ser_rationals<S: Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(fraction_string))
}

pub fn ser_qmatrix<S: Serializer>(m: &QMatrix, s: S) -> std::result::Result<S::Ok, S::Error> {
    rational_matrix_doc(m).serialize(s)
}

pub fn ser_opt_qmatrix<S: Serializer>(
    m: &Option<QMatrix>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    m.as_ref().map(rational_matrix_doc).serialize(s)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WeightDoc {
    #[serde(default = "BiPoly::zero")]
    pub s: BiPoly,
    #[serde(default)]
    pub factors: Vec<(BiPoly, String)>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FormDoc {
    pub phi: Vec<Vec<BiPoly>>,
    pub psi: Vec<BiPoly>,
    #[serde(default)]
    pub weight: Option<WeightDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FamilyDoc {
    pub name: String,
    pub phi: Vec<Vec<BiPoly>>,
    pub psi: Vec<BiPoly>,
    pub weight: Option<WeightDoc>,
    #[serde(default)]
    pub params: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagonal_reduction: Option<FormDoc>,
}

fn weight_doc(w: &WeightCarrier) -> WeightDoc {
    WeightDoc {
        s: w.exponential().clone(),
        factors: w
            .factors()
            .iter()
            .map(|(f, e)| (f.clone(), fraction_string(e)))
            .collect(),
    }
}

fn weight_from_doc(d: &WeightDoc) -> Result<WeightCarrier> {
    let factors = d
        .factors
        .iter()
        .map(|(f, e)| Ok((f.clone(), parse_rational(e)?)))
        .collect::<Result<Vec<_>>>()?;
    WeightCarrier::new(d.s.clone(), factors)
}

fn form_doc(p: &PearsonData) -> FormDoc {
    FormDoc {
        phi: p.phi().to_rows(),
        psi: p.psi().to_vec(),
        weight: p.weight().map(weight_doc),
    }
}

fn form_from_parts(
    phi: &[Vec<BiPoly>],
    psi: &[BiPoly],
    weight: Option<&WeightDoc>,
) -> Result<PearsonData> {
    let phi = Mat::from_rows(phi.to_vec())?;
    let psi: [BiPoly; 2] = psi
        .to_vec()
        .try_into()
        .map_err(|_| Error::Dimension("psi must have two entries".into()))?;
    let weight = weight.map(weight_from_doc).transpose()?;
    PearsonData::new(phi, psi, weight)
}

impl FamilyDoc {
    pub fn from_family(f: &FamilySpec) -> Self {
        let orig = form_doc(f.original());
        FamilyDoc {
            name: f.name().to_string(),
            phi: orig.phi,
            psi: orig.psi,
            weight: orig.weight,
            params: f
                .params()
                .iter()
                .map(|(k, v)| (k.clone(), fraction_string(v)))
                .collect(),
            diagonal_reduction: f.diagonal_reduction().map(form_doc),
        }
    }

    pub fn to_family(&self) -> Result<FamilySpec> {
        let original = form_from_parts(&self.phi, &self.psi, self.weight.as_ref())?;
        let diagonal = self
            .diagonal_reduction
            .as_ref()
            .map(|d| form_from_parts(&d.phi, &d.psi, d.weight.as_ref()))
            .transpose()?;
        let params = self
            .params
            .iter()
            .map(|(k, v)| Ok((k.clone(), parse_rational(v)?)))
            .collect::<Result<BTreeMap<_, _>>>()?;
        Ok(FamilySpec::new(
            self.name.clone(),
            params,
            original,
            diagonal,
        ))
    }
}

pub fn family_to_json(f: &FamilySpec) -> String {
    serde_json::to_string_pretty(&FamilyDoc::from_family(f)).expect("family documents serialize")
}

pub fn family_from_json(text: &str) -> Result<FamilySpec> {
    let doc: FamilyDoc = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    doc.to_family()
}

#[derive(Debug, Clone, Serialize)]
pub struct MomentsDoc {
    pub cap: u32,
    pub moments: Vec<(u32, u32, String)>,
}

pub fn moments_doc(u: &MomentFunctional) -> MomentsDoc {
    MomentsDoc {
        cap: u.cap(),
        moments: u
            .iter()
            .map(|(h, k, v)| (h, k, fraction_string(v)))
            .collect(),
    }
}
