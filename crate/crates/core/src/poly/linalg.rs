//! Exact linear algebra over the rationals. Rank and determinant use
//! fraction-free (Bareiss) elimination on integer-scaled rows; linear solves
//! use Gauss-Jordan reduction over the rationals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::QMatrix;
use crate::ring::Rational;

/// Outcome of an exact linear solve `A v = b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LinearSolution {
    Unique(Vec<Rational>),
    /// Infinitely many solutions; `particular` sets every free unknown to zero.
    Many {
        particular: Vec<Rational>,
        free: Vec<usize>,
    },
    Inconsistent,
}

impl LinearSolution {
    pub fn particular(&self) -> Option<&[Rational]> {
        match self {
            LinearSolution::Unique(v) => Some(v),
            LinearSolution::Many { particular, .. } => Some(particular),
            LinearSolution::Inconsistent => None,
        }
    }
}

pub fn binomial_rational(n: u64, k: u64) -> Rational {
    Rational::from_integer(BigInt::from(crate::ring::binomial(n, k)))
}

/// Each row multiplied by the lcm of its denominators.
fn integer_rows(m: &QMatrix) -> (Vec<Vec<BigInt>>, Rational) {
    let mut scale = Rational::one();
    let rows = (0..m.rows())
        .map(|i| {
            let l = m
                .row(i)
                .iter()
                .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
            scale *= Rational::from_integer(l.clone());
            m.row(i)
                .iter()
                .map(|q| q.numer() * (&l / q.denom()))
                .collect()
        })
        .collect();
    (rows, scale)
}

/// Bareiss elimination in place; returns (rank, sign of row swaps, final pivot).
fn bareiss(a: &mut [Vec<BigInt>], cols: usize) -> (usize, i32, BigInt) {
    let rows = a.len();
    let mut prev = BigInt::one();
    let mut rank = 0;
    let mut sign = 1;
    let mut col = 0;
    while rank < rows && col < cols {
        let Some(p) = (rank..rows).find(|&r| !a[r][col].is_zero()) else {
            col += 1;
            continue;
        };
        if p != rank {
            a.swap(p, rank);
            sign = -sign;
        }
        for r in rank + 1..rows {
            for c in col + 1..cols {
                let v = &a[rank][col] * &a[r][c] - &a[r][col] * &a[rank][c];
                a[r][c] = v / &prev;
            }
            a[r][col] = BigInt::zero();
        }
        prev = a[rank][col].clone();
        rank += 1;
        col += 1;
    }
    (rank, sign, prev)
}

impl QMatrix {
    pub fn rank(&self) -> usize {
        let (mut rows, _) = integer_rows(self);
        bareiss(&mut rows, self.cols()).0
    }

    pub fn det(&self) -> Rational {
        assert!(self.is_square(), "det of a non-square matrix");
        let n = self.rows();
        if n == 0 {
            return Rational::one();
        }
        let (mut rows, scale) = integer_rows(self);
        let (rank, sign, last) = bareiss(&mut rows, n);
        if rank < n {
            return Rational::zero();
        }
        Rational::from_integer(last * BigInt::from(sign)) / scale
    }

    pub fn is_nonsingular(&self) -> bool {
        self.is_square() && self.rank() == self.rows()
    }

    /// Solves `self * v = b` exactly.
    pub fn solve(&self, b: &[Rational]) -> LinearSolution {
        assert_eq!(b.len(), self.rows(), "right-hand side length");
        let (rows, cols) = self.shape();
        let mut aug: Vec<Vec<Rational>> = (0..rows)
            .map(|i| {
                let mut r = self.row(i).to_vec();
                r.push(b[i].clone());
                r
            })
            .collect();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(p) = (r..rows).find(|&i| !aug[i][c].is_zero()) else {
                continue;
            };
            aug.swap(p, r);
            let inv = aug[r][c].recip();
            for v in aug[r].iter_mut().skip(c) {
                *v *= &inv;
            }
            let pivot_row = aug[r].clone();
            for (i, row) in aug.iter_mut().enumerate() {
                if i != r && !row[c].is_zero() {
                    let f = row[c].clone();
                    for (v, pv) in row.iter_mut().zip(&pivot_row).skip(c) {
                        *v -= &f * pv;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        if aug[r..].iter().any(|row| !row[cols].is_zero()) {
            return LinearSolution::Inconsistent;
        }
        let mut x = vec![Rational::zero(); cols];
        for (i, &c) in pivots.iter().enumerate() {
            x[c] = aug[i][cols].clone();
        }
        if pivots.len() == cols {
            LinearSolution::Unique(x)
        } else {
            let free = (0..cols).filter(|c| !pivots.contains(c)).collect();
            LinearSolution::Many {
                particular: x,
                free,
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Mat;
    use crate::ring::{int, rat};

    fn q(rows: &[&[i64]]) -> QMatrix {
        Mat::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| int(v)).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(QMatrix::identity(3).rank(), 3);
        assert_eq!(QMatrix::zeros(3, 4).rank(), 0);
        assert_eq!(q(&[&[1, 2], &[2, 4]]).rank(), 1);
        assert_eq!(q(&[&[0, 1, 2], &[0, 2, 4], &[1, 0, 0]]).rank(), 2);
    }

    #[test]
    fn det_examples() {
        assert_eq!(q(&[&[1, 2], &[3, 4]]).det(), int(-2));
        assert_eq!(q(&[&[0, 1], &[1, 0]]).det(), int(-1));
        let h: QMatrix = Mat::from_rows(vec![
            vec![rat(1, 6), rat(1, 12)],
            vec![rat(1, 12), rat(1, 6)],
        ])
        .unwrap();
        assert_eq!(h.det(), rat(1, 48));
        assert_eq!(q(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]]).det(), int(0));
        assert_eq!(q(&[&[2, 0, 1], &[1, 3, 2], &[1, 1, 2]]).det(), int(6));
    }

    #[test]
    fn solve_cases() {
        let a = q(&[&[2, 1], &[1, 3]]);
        assert_eq!(
            a.solve(&[int(3), int(5)]),
            LinearSolution::Unique(vec![rat(4, 5), rat(7, 5)])
        );
        let s = q(&[&[1, 2], &[2, 4]]);
        assert_eq!(s.solve(&[int(1), int(3)]), LinearSolution::Inconsistent);
        match s.solve(&[int(1), int(2)]) {
            LinearSolution::Many { particular, free } => {
                assert_eq!(particular, vec![int(1), int(0)]);
                assert_eq!(free, vec![1]);
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
