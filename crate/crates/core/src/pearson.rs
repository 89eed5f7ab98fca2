//! Family data `(Phi, Psi, w)`, the second order operator
//! `L[p] = a p_xx + 2b p_xy + c p_yy + d p_x + e p_y`, symmetry factors,
//! symmetrizability and the structural condition
//! `(a_{k0} Phi)_x + (a_{k1} Phi)_y = Phi Psi_k`.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::diff::{CarrierTerm, WeightCarrier};
use crate::error::{Error, Result};
use crate::moments::MomentFunctional;
use crate::poly::{Axis, BiPoly, LinearSolution, Mat, Monomial, PolyMatrix};
use crate::ring::{int, Rational};

/// One Pearson form: symmetric `Phi` with entries of degree `<= 2`, drift
/// `Psi` of degree `<= 1` and an optional factored symmetry factor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PearsonData {
    phi: PolyMatrix,
    psi: [BiPoly; 2],
    weight: Option<WeightCarrier>,
}

impl PearsonData {
    pub fn new(phi: PolyMatrix, psi: [BiPoly; 2], weight: Option<WeightCarrier>) -> Result<Self> {
        if phi.shape() != (2, 2) {
            return Err(Error::Dimension(format!(
                "Phi must be 2x2, got {:?}",
                phi.shape()
            )));
        }
        if phi.get(0, 1) != phi.get(1, 0) {
            return Err(Error::Parameter("Phi must be symmetric".into()));
        }
        if phi.degree().is_some_and(|d| d > 2) {
            return Err(Error::Parameter(
                "entries of Phi must have degree <= 2".into(),
            ));
        }
        if psi.iter().any(|p| p.total_degree().is_some_and(|d| d > 1)) {
            return Err(Error::Parameter(
                "entries of Psi must have degree <= 1".into(),
            ));
        }
        Ok(PearsonData { phi, psi, weight })
    }

    pub fn phi(&self) -> &PolyMatrix {
        &self.phi
    }

    pub fn psi(&self) -> &[BiPoly; 2] {
        &self.psi
    }

    pub fn weight(&self) -> Option<&WeightCarrier> {
        self.weight.as_ref()
    }

    pub fn a(&self) -> &BiPoly {
        self.phi.get(0, 0)
    }

    pub fn b(&self) -> &BiPoly {
        self.phi.get(0, 1)
    }

    pub fn c(&self) -> &BiPoly {
        self.phi.get(1, 1)
    }

    pub fn is_diagonal(&self) -> bool {
        self.b().is_zero()
    }

    /// Same data with a replaced symmetry factor.
    pub fn with_weight(&self, weight: Option<WeightCarrier>) -> PearsonData {
        PearsonData {
            weight,
            ..self.clone()
        }
    }

    /// `Psi~ = Psi - (div Phi)^t = (d - a_x - b_y, e - b_x - c_y)`.
    pub fn tilde_psi(&self) -> [BiPoly; 2] {
        [
            &(&self.psi[0] - &self.a().dx()) - &self.b().dy(),
            &(&self.psi[1] - &self.b().dx()) - &self.c().dy(),
        ]
    }

    pub fn apply_l(&self, p: &BiPoly) -> BiPoly {
        let two_b = self.b().scale(&int(2));
        let second = &(&(self.a() * &p.mixed_partial(2, 0)) + &(&two_b * &p.mixed_partial(1, 1)))
            + &(self.c() * &p.mixed_partial(0, 2));
        let first = &(&self.psi[0] * &p.dx()) + &(&self.psi[1] * &p.dy());
        &second + &first
    }

    pub fn apply_l_matrix(&self, m: &PolyMatrix) -> PolyMatrix {
        m.map(|p| self.apply_l(p))
    }

    /// `d` and `e` have exact degree one with independent linear parts.
    pub fn drift_independent(&self) -> bool {
        let [d, e] = &self.psi;
        let det = d.coeff(1, 0) * e.coeff(0, 1) - d.coeff(0, 1) * e.coeff(1, 0);
        !det.is_zero()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilySpec {
    name: String,
    params: BTreeMap<String, Rational>,
    original: PearsonData,
    diagonal_reduction: Option<PearsonData>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FormChoice {
    #[default]
    Auto,
    Original,
    Diagonal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FormUsed {
    Original,
    Diagonal,
}

impl std::str::FromStr for FormChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(FormChoice::Auto),
            "original" => Ok(FormChoice::Original),
            "diagonal" => Ok(FormChoice::Diagonal),
            _ => Err(Error::Parse(format!("unknown form {s:?}"))),
        }
    }
}

impl FamilySpec {
    pub fn new(
        name: impl Into<String>,
        params: BTreeMap<String, Rational>,
        original: PearsonData,
        diagonal_reduction: Option<PearsonData>,
    ) -> Self {
        FamilySpec {
            name: name.into(),
            params,
            original,
            diagonal_reduction,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn params(&self) -> &BTreeMap<String, Rational> {
        &self.params
    }

    pub fn original(&self) -> &PearsonData {
        &self.original
    }

    pub fn diagonal_reduction(&self) -> Option<&PearsonData> {
        self.diagonal_reduction.as_ref()
    }

    pub fn phi(&self) -> &PolyMatrix {
        self.original.phi()
    }

    pub fn psi(&self) -> &[BiPoly; 2] {
        self.original.psi()
    }

    pub fn weight(&self) -> Option<&WeightCarrier> {
        self.original.weight()
    }

    /// `Auto` prefers the diagonal reduction when one is present. Asking for
    /// `Diagonal` on a family whose original `Phi` is already diagonal
    /// returns the original form.
    pub fn select(&self, choice: FormChoice) -> Result<(FormUsed, &PearsonData)> {
        match (choice, &self.diagonal_reduction) {
            (FormChoice::Original, _) | (FormChoice::Auto, None) => {
                Ok((FormUsed::Original, &self.original))
            }
            (FormChoice::Auto | FormChoice::Diagonal, Some(d)) => Ok((FormUsed::Diagonal, d)),
            (FormChoice::Diagonal, None) if self.original.is_diagonal() => {
                Ok((FormUsed::Original, &self.original))
            }
            (FormChoice::Diagonal, None) => Err(Error::Parameter(format!(
                "family {:?} has no diagonal form",
                self.name
            ))),
        }
    }

    /// Every form with its label, original first.
    pub fn forms(&self) -> Vec<(FormUsed, &PearsonData)> {
        let mut out = vec![(FormUsed::Original, &self.original)];
        if let Some(d) = &self.diagonal_reduction {
            out.push((FormUsed::Diagonal, d));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetryReport {
    pub holds: bool,
    /// `(Phi grad w - Psi~ w)_i` as carrier terms; zero when the identity holds.
    pub residuals: [CarrierTerm; 2],
}

/// Checks `a w_x + b w_y = (d - a_x - b_y) w` and
/// `b w_x + c w_y = (e - b_x - c_y) w` in the carrier calculus.
pub fn verify_symmetry_factor(data: &PearsonData) -> Result<SymmetryReport> {
    let w = data
        .weight()
        .ok_or_else(|| Error::NoCarrier("form without symmetry factor".into()))?;
    let one = CarrierTerm::from_poly(BiPoly::one(), w);
    let wx = one.derivative(w, Axis::X);
    let wy = one.derivative(w, Axis::Y);
    let tilde = data.tilde_psi();
    let residual = |r: usize| {
        let lhs = wx
            .mul_poly(data.phi().get(r, 0))
            .add(&wy.mul_poly(data.phi().get(r, 1)), w);
        lhs.add(&CarrierTerm::from_poly(-&tilde[r], w), w)
    };
    let residuals = [residual(0), residual(1)];
    Ok(SymmetryReport {
        holds: residuals.iter().all(CarrierTerm::is_zero),
        residuals,
    })
}

/// `alpha = ac - b^2`, `beta = c Psi~_0 - b Psi~_1`, `gamma = -b Psi~_0 + a Psi~_1`.
pub fn symmetrizability_data(data: &PearsonData) -> (BiPoly, BiPoly, BiPoly) {
    let [t0, t1] = data.tilde_psi();
    let (a, b, c) = (data.a(), data.b(), data.c());
    let alpha = &(a * c) - &(b * b);
    let beta = &(c * &t0) - &(b * &t1);
    let gamma = &(a * &t1) - &(b * &t0);
    (alpha, beta, gamma)
}

/// `d_y(beta / alpha) = d_x(gamma / alpha)`, compared after clearing the
/// common denominator.
pub fn check_symmetrizable(data: &PearsonData) -> Result<bool> {
    let (alpha, beta, gamma) = symmetrizability_data(data);
    if alpha.is_zero() {
        return Err(Error::DegenerateDeterminant);
    }
    let lhs = &(&beta.dy() * &alpha) - &(&beta * &alpha.dy());
    let rhs = &(&gamma.dx() * &alpha) - &(&gamma * &alpha.dx());
    Ok(lhs == rhs)
}

/// `Psi_0`, `Psi_1` with entries of degree `<= 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CondR {
    pub psi: [PolyMatrix; 2],
}

/// `a_{k0}, a_{k1}` for `k = 0, 1`: `(a, b)` and `(b, c)`.
fn phi_row(phi: &PolyMatrix, k: usize) -> (&BiPoly, &BiPoly) {
    (phi.get(k, 0), phi.get(k, 1))
}

/// Solves `(a_{k0} Phi)_x + (a_{k1} Phi)_y = Phi Psi_k` for `k = 0, 1` by
/// coefficient matching. `None` when either system is inconsistent. Free
/// unknowns of an underdetermined system are set to zero.
pub fn solve_condr(phi: &PolyMatrix) -> Option<CondR> {
    let basis = [BiPoly::one(), BiPoly::x(), BiPoly::y()];
    let top = phi.degree().unwrap_or(0) + 1;
    let monomials: Vec<Monomial> = Monomial::up_to_degree(top).collect();
    let solve_k = |k: usize| -> Option<PolyMatrix> {
        let (ak0, ak1) = phi_row(phi, k);
        let lhs = phi.map(|p| &(ak0 * p).dx() + &(ak1 * p).dy());
        // Unknown (l, j, t): coefficient t of entry (l, j) of Psi_k.
        let unknown = |l: usize, j: usize, t: usize| (l * 2 + j) * 3 + t;
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        for i in 0..2 {
            for j in 0..2 {
                for m in &monomials {
                    let mut row = vec![Rational::zero(); 12];
                    for l in 0..2 {
                        for (t, b) in basis.iter().enumerate() {
                            row[unknown(l, j, t)] += (phi.get(i, l) * b).coeff(m.h, m.k);
                        }
                    }
                    rows.push(row);
                    rhs.push(lhs.get(i, j).coeff(m.h, m.k));
                }
            }
        }
        let sol = Mat::from_rows(rows)
            .expect("rectangular system")
            .solve(&rhs);
        let v = match sol {
            LinearSolution::Inconsistent => return None,
            other => other.particular().expect("consistent system").to_vec(),
        };
        Some(Mat::from_fn(2, 2, |l, j| {
            BiPoly::from_terms([
                (0, 0, v[unknown(l, j, 0)].clone()),
                (1, 0, v[unknown(l, j, 1)].clone()),
                (0, 1, v[unknown(l, j, 2)].clone()),
            ])
        }))
    };
    Some(CondR {
        psi: [solve_k(0)?, solve_k(1)?],
    })
}

/// Tridiagonal `Psi_k^n` with `(a_{k0} Phi^{n})_x + (a_{k1} Phi^{n})_y = Phi^{n} Psi_k^n`.
pub fn psi_kn(condr: &CondR, phi: &PolyMatrix, n: u32, k: usize) -> PolyMatrix {
    assert!(n >= 1, "Psi_k^n is defined for n >= 1");
    let p = &condr.psi[k];
    let (ak0, ak1) = phi_row(phi, k);
    let div = &ak0.dx() + &ak1.dy();
    let size = n as usize + 1;
    Mat::from_fn(size, size, |r, c| {
        let j = c as i64;
        let n = n as i64;
        if r + 1 == c {
            p.get(0, 1).scale(&int(n + 1 - j))
        } else if r == c {
            &(&p.get(0, 0).scale(&int(n - j)) + &p.get(1, 1).scale(&int(j)))
                - &div.scale(&int(n - 1))
        } else if r == c + 1 {
            p.get(1, 0).scale(&int(j + 1))
        } else {
            BiPoly::zero()
        }
    })
}

/// Checks `(a_{k0} Phi^{n})_x + (a_{k1} Phi^{n})_y = Phi^{n} Psi_k^n` for
/// both `k`, given `Phi^{n}`.
pub fn condr_lemma_holds(condr: &CondR, phi: &PolyMatrix, phi_n: &PolyMatrix, n: u32) -> bool {
    (0..2).all(|k| {
        let (ak0, ak1) = phi_row(phi, k);
        let lhs = phi_n.map(|p| &(ak0 * p).dx() + &(ak1 * p).dy());
        let rhs = phi_n.mul(&psi_kn(condr, phi, n, k)).expect("square blocks");
        lhs == rhs
    })
}

/// Monomials `m` with `deg m <= max_degree` and `<u, L[m]> != 0`.
pub fn adjoint_violations(
    data: &PearsonData,
    u: &MomentFunctional,
    max_degree: u32,
) -> Result<Vec<Monomial>> {
    let mut bad = Vec::new();
    for m in Monomial::up_to_degree(max_degree) {
        let lm = data.apply_l(&BiPoly::term(Rational::from_integer(1.into()), m.h, m.k));
        if !u.pair_poly(&lm)?.is_zero() {
            bad.push(m);
        }
    }
    Ok(bad)
}
