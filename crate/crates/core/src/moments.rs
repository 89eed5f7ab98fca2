//! Moment functionals `u` given by tables `mu_{h,k} = <u, x^h y^k>`.
//!
//! Tables come from two providers: the Pearson recurrence engine, which
//! solves `div(Phi u) = Psi^t u` degree by degree, and closed-form
//! Beta/Dirichlet formulas for the ball, the simplex and tensor products.
//! All tables are normalized by `mu_{0,0} = 1`.

use num_traits::{One, Zero};

use crate::catalog::Univariate;
use crate::error::{Error, Result};
use crate::poly::{BiPoly, LinearSolution, Mat, Monomial, PolyMatrix, QMatrix};
use crate::ring::{int, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    PearsonRecurrence,
    ClosedForm,
    Supplied,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MomentFunctional {
    cap: u32,
    /// Indexed by [`Monomial::layout_index`].
    moments: Vec<Rational>,
    provenance: Provenance,
}

impl MomentFunctional {
    /// Table with every moment of degree `<= cap` given by `f(h, k)`.
    pub fn from_fn(cap: u32, mut f: impl FnMut(u32, u32) -> Rational) -> Self {
        MomentFunctional {
            cap,
            moments: Monomial::up_to_degree(cap).map(|m| f(m.h, m.k)).collect(),
            provenance: Provenance::Supplied,
        }
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn moment(&self, h: u32, k: u32) -> Result<&Rational> {
        if h + k > self.cap {
            return Err(Error::MomentCapExceeded {
                needed: h + k,
                cap: self.cap,
            });
        }
        Ok(&self.moments[Monomial::new(h, k).layout_index()])
    }

    /// `(h, k, mu_{h,k})` in the graded layout.
    pub fn iter(&self) -> impl Iterator<Item = (u32, u32, &Rational)> {
        Monomial::up_to_degree(self.cap)
            .zip(&self.moments)
            .map(|(m, v)| (m.h, m.k, v))
    }

    /// Same functional truncated to a smaller cap.
    pub fn truncated(&self, cap: u32) -> MomentFunctional {
        let cap = cap.min(self.cap);
        let len = ((cap + 1) * (cap + 2) / 2) as usize;
        MomentFunctional {
            cap,
            moments: self.moments[..len].to_vec(),
            provenance: self.provenance,
        }
    }

    /// Same table, ignoring provenance.
    pub fn same_moments(&self, other: &MomentFunctional) -> bool {
        self.cap == other.cap && self.moments == other.moments
    }

    pub fn pair_poly(&self, p: &BiPoly) -> Result<Rational> {
        let mut acc = Rational::zero();
        for (m, c) in p.terms() {
            acc += c * self.moment(m.h, m.k)?;
        }
        Ok(acc)
    }

    /// `<u, A>` entrywise.
    pub fn pair(&self, a: &PolyMatrix) -> Result<QMatrix> {
        a.try_map(|p| self.pair_poly(p))
    }

    /// Full graded moment matrix `<u, X X^t>` over all monomials of degree
    /// `<= n`.
    pub fn moment_matrix(&self, n: u32) -> Result<QMatrix> {
        let basis: Vec<Monomial> = Monomial::up_to_degree(n).collect();
        let size = basis.len();
        let mut m = QMatrix::zeros(size, size);
        for (i, a) in basis.iter().enumerate() {
            for (j, b) in basis.iter().enumerate() {
                m.set(i, j, self.moment(a.h + b.h, a.k + b.k)?.clone());
            }
        }
        Ok(m)
    }
}

/// Solves the two relations `<u, a m_x + b m_y + d m> = 0` and
/// `<u, b m_x + c m_y + e m> = 0` for every monomial `m` of degree
/// `< cap`, one total degree at a time, with `mu_{0,0} = 1`.
pub fn moments_from_pearson_data(
    phi: &PolyMatrix,
    psi: &[BiPoly; 2],
    cap: u32,
) -> Result<MomentFunctional> {
    if phi.shape() != (2, 2) {
        return Err(Error::Dimension("Phi must be 2x2".into()));
    }
    let rows = [
        [phi.get(0, 0), phi.get(0, 1), &psi[0]],
        [phi.get(1, 0), phi.get(1, 1), &psi[1]],
    ];
    let mut table = vec![Rational::one()];
    for t in 1..=cap {
        let mut lhs: Vec<Vec<Rational>> = Vec::new();
        let mut rhs = Vec::new();
        for m in Monomial::of_degree(t - 1) {
            let mono = BiPoly::term(Rational::one(), m.h, m.k);
            for [ax, ay, drift] in &rows {
                let rel = &(&(*ax * &mono.dx()) + &(*ay * &mono.dy())) + &(*drift * &mono);
                let mut row = vec![Rational::zero(); t as usize + 1];
                let mut known = Rational::zero();
                for (tm, c) in rel.terms() {
                    if tm.degree() == t {
                        row[tm.k as usize] += c;
                    } else {
                        known += c * &table[tm.layout_index()];
                    }
                }
                lhs.push(row);
                rhs.push(-known);
            }
        }
        let a = Mat::from_rows(lhs)?;
        match a.solve(&rhs) {
            LinearSolution::Unique(v) => table.extend(v),
            LinearSolution::Many { free, .. } => {
                return Err(Error::Underdetermined {
                    degree: t,
                    free: free.into_iter().map(|i| (t - i as u32, i as u32)).collect(),
                })
            }
            LinearSolution::Inconsistent => return Err(Error::Inconsistent { degree: t }),
        }
    }
    Ok(MomentFunctional {
        cap,
        moments: table,
        provenance: Provenance::PearsonRecurrence,
    })
}

/// Domains with closed-form normalized moments.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClosedFormDomain {
    /// Weight `(1 - x^2 - y^2)^{mu - 1/2}` on the unit disk.
    Ball { mu: Rational },
    /// Weight `x^alpha y^beta (1 - x - y)^gamma` on the triangle.
    Simplex {
        alpha: Rational,
        beta: Rational,
        gamma: Rational,
    },
    /// Product of two univariate functionals, `x` first.
    Tensor(Univariate, Univariate),
}

/// Rising factorial `(a)_n`.
fn rising(a: &Rational, n: u32) -> Rational {
    (0..n).fold(Rational::one(), |acc, i| acc * (a + int(i as i64)))
}

fn nonvanishing_rising(a: &Rational, n: u32, what: &str) -> Result<Rational> {
    let r = rising(a, n);
    if r.is_zero() {
        return Err(Error::Parameter(format!(
            "normalization of the {what} moments vanishes"
        )));
    }
    Ok(r)
}

pub fn closed_form_moments(domain: &ClosedFormDomain, cap: u32) -> Result<MomentFunctional> {
    let half = Rational::new(1.into(), 2.into());
    let mut moments = Vec::new();
    match domain {
        ClosedFormDomain::Ball { mu } => {
            // mu_{2i,2j} = (1/2)_i (1/2)_j / (mu + 3/2)_{i+j}
            let base = mu + Rational::new(3.into(), 2.into());
            for m in Monomial::up_to_degree(cap) {
                if m.h % 2 == 1 || m.k % 2 == 1 {
                    moments.push(Rational::zero());
                    continue;
                }
                let (i, j) = (m.h / 2, m.k / 2);
                let den = nonvanishing_rising(&base, i + j, "ball")?;
                moments.push(rising(&half, i) * rising(&half, j) / den);
            }
        }
        ClosedFormDomain::Simplex { alpha, beta, gamma } => {
            // (alpha+1)_h (beta+1)_k / (alpha+beta+gamma+3)_{h+k}
            let a1 = alpha + int(1);
            let b1 = beta + int(1);
            let total = alpha + beta + gamma + int(3);
            for m in Monomial::up_to_degree(cap) {
                let den = nonvanishing_rising(&total, m.h + m.k, "simplex")?;
                moments.push(rising(&a1, m.h) * rising(&b1, m.k) / den);
            }
        }
        ClosedFormDomain::Tensor(fx, fy) => {
            let mx = fx.moments(cap)?;
            let my = fy.moments(cap)?;
            for m in Monomial::up_to_degree(cap) {
                moments.push(&mx[m.h as usize] * &my[m.k as usize]);
            }
        }
    }
    Ok(MomentFunctional {
        cap,
        moments,
        provenance: Provenance::ClosedForm,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct QuasiDefiniteReport {
    /// `det M_n` for `n = 0..=N`.
    #[serde(serialize_with = "crate::serial::ser_rationals")]
    pub determinants: Vec<Rational>,
    /// All determinants nonzero. This is the moment-matrix stand-in for
    /// `dim V_n = n + 1`, not a proof of it.
    pub consistent_with_quasi_definite: bool,
}

pub fn quasi_definite_check(u: &MomentFunctional, n_max: u32) -> Result<QuasiDefiniteReport> {
    if 2 * n_max > u.cap() {
        return Err(Error::MomentCapExceeded {
            needed: 2 * n_max,
            cap: u.cap(),
        });
    }
    let determinants: Vec<Rational> = (0..=n_max)
        .map(|n| u.moment_matrix(n).map(|m| m.det()))
        .collect::<Result<_>>()?;
    let ok = determinants.iter().all(|d| !d.is_zero());
    Ok(QuasiDefiniteReport {
        determinants,
        consistent_with_quasi_definite: ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::rat;

    fn p(s: &str) -> BiPoly {
        s.parse().unwrap()
    }

    fn phi(a: &str, b: &str, c: &str) -> PolyMatrix {
        Mat::new(2, 2, vec![p(a), p(b), p(b), p(c)])
    }

    /// 2 h! k! / (h+k+2)!
    fn dirichlet(h: u32, k: u32) -> Rational {
        let f = |n: u32| (1..=n as i64).fold(int(1), |acc, i| acc * int(i));
        int(2) * f(h) * f(k) / f(h + k + 2)
    }

    #[test]
    fn intriguing_family_moments() {
        let u = moments_from_pearson_data(&phi("3*y", "1", "0"), &[p("-x"), p("-y")], 4).unwrap();
        assert_eq!(u.provenance(), Provenance::PearsonRecurrence);
        assert_eq!(*u.moment(0, 0).unwrap(), int(1));
        assert_eq!(*u.moment(1, 0).unwrap(), int(0));
        assert_eq!(*u.moment(0, 1).unwrap(), int(0));
        assert_eq!(*u.moment(1, 1).unwrap(), int(1));
        assert_eq!(*u.moment(2, 0).unwrap(), int(0));
        assert_eq!(*u.moment(0, 2).unwrap(), int(0));
        assert_eq!(*u.moment(3, 0).unwrap(), int(6));
        assert!(matches!(
            u.moment(3, 2),
            Err(Error::MomentCapExceeded { needed: 5, cap: 4 })
        ));
    }

    #[test]
    fn simplex_recurrence_matches_dirichlet() {
        let u = moments_from_pearson_data(
            &phi("x^2 - x", "x*y", "y^2 - y"),
            &[p("3*x - 1"), p("3*y - 1")],
            8,
        )
        .unwrap();
        assert_eq!(*u.moment(1, 0).unwrap(), rat(1, 3));
        assert_eq!(*u.moment(2, 0).unwrap(), rat(1, 6));
        assert_eq!(*u.moment(1, 1).unwrap(), rat(1, 12));
        for (h, k, v) in u.iter() {
            assert_eq!(*v, dirichlet(h, k), "mu_{h},{k}");
        }
    }

    #[test]
    fn ball_closed_form_values() {
        let u = closed_form_moments(&ClosedFormDomain::Ball { mu: rat(1, 2) }, 6).unwrap();
        assert_eq!(*u.moment(0, 0).unwrap(), int(1));
        assert_eq!(*u.moment(2, 0).unwrap(), rat(1, 4));
        assert_eq!(*u.moment(1, 0).unwrap(), int(0));
        assert_eq!(*u.moment(4, 0).unwrap(), rat(1, 8));
        assert_eq!(*u.moment(2, 2).unwrap(), rat(1, 24));
    }

    #[test]
    fn hermite_tensor_closed_form() {
        let u = closed_form_moments(
            &ClosedFormDomain::Tensor(Univariate::Hermite, Univariate::Hermite),
            8,
        )
        .unwrap();
        let dfact = |k: u32| (1..=k as i64).fold(int(1), |acc, i| acc * int(2 * i - 1));
        for (h, k, v) in u.iter() {
            let want = if h % 2 == 1 || k % 2 == 1 {
                int(0)
            } else {
                dfact(h / 2) * dfact(k / 2) / int(1 << ((h + k) / 2))
            };
            assert_eq!(*v, want);
        }
    }

    #[test]
    fn parameter_errors() {
        let bad = ClosedFormDomain::Simplex {
            alpha: int(-1),
            beta: int(-1),
            gamma: int(-1),
        };
        assert!(matches!(
            closed_form_moments(&bad, 2),
            Err(Error::Parameter(_))
        ));
        assert!(closed_form_moments(&ClosedFormDomain::Ball { mu: rat(-3, 2) }, 2).is_err());
    }

    #[test]
    fn pearson_failures_are_reported() {
        // Phi = 0, Psi = 0 leaves every moment free.
        let zero = PolyMatrix::zeros(2, 2);
        let err =
            moments_from_pearson_data(&zero, &[BiPoly::zero(), BiPoly::zero()], 2).unwrap_err();
        assert!(matches!(err, Error::Underdetermined { degree: 1, .. }));
        // d = 1 forces <u, 1> = 0, contradicting the normalization.
        let err = moments_from_pearson_data(&zero, &[p("1"), p("y")], 2).unwrap_err();
        assert!(matches!(err, Error::Inconsistent { degree: 1 }));
    }

    #[test]
    fn pairing_and_moment_matrix() {
        let u = moments_from_pearson_data(&phi("3*y", "1", "0"), &[p("-x"), p("-y")], 4).unwrap();
        assert_eq!(u.pair_poly(&BiPoly::one()).unwrap(), int(1));
        let ph = phi("3*y", "1", "0");
        let paired = u.pair(&ph).unwrap();
        assert_eq!(paired.entries(), &[int(0), int(1), int(1), int(0)]);
        assert_eq!(paired.det(), int(-1));
        let m1 = u.moment_matrix(1).unwrap();
        assert_eq!(
            m1.entries(),
            &[
                int(1),
                int(0),
                int(0),
                int(0),
                int(0),
                int(1),
                int(0),
                int(1),
                int(0)
            ]
        );
    }

    #[test]
    fn quasi_definiteness() {
        let simplex = closed_form_moments(
            &ClosedFormDomain::Simplex {
                alpha: int(0),
                beta: int(0),
                gamma: int(0),
            },
            6,
        )
        .unwrap();
        let r = quasi_definite_check(&simplex, 3).unwrap();
        assert!(r.consistent_with_quasi_definite);
        assert_eq!(r.determinants.len(), 4);

        let ks = moments_from_pearson_data(&phi("3*y", "1", "0"), &[p("-x"), p("-y")], 4).unwrap();
        let r = quasi_definite_check(&ks, 1).unwrap();
        assert_eq!(r.determinants[1], int(-1));

        let point = MomentFunctional::from_fn(2, |h, k| if h + k == 0 { int(1) } else { int(0) });
        let r = quasi_definite_check(&point, 1).unwrap();
        assert!(!r.consistent_with_quasi_definite);
        assert_eq!(r.determinants[1], int(0));
        assert!(quasi_definite_check(&point, 2).is_err());
    }
}
