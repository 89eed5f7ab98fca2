use std::fmt;

use super::{Axis, BiPoly};
use crate::error::{Error, Result};
use crate::ring::{Rational, Ring};

/// Dense row-major matrix over any [`Ring`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Mat<R> {
    rows: usize,
    cols: usize,
    data: Vec<R>,
}

pub type PolyMatrix = Mat<BiPoly>;
pub type QMatrix = Mat<Rational>;

impl<R: Clone> Mat<R> {
    pub fn new(rows: usize, cols: usize, data: Vec<R>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data length");
        Mat { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<R>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Shape("ragged rows".into()));
        }
        Ok(Mat::new(r, c, rows.into_iter().flatten().collect()))
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> R) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &R {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: R) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[R] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[R] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<R>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Mat::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn map<S: Clone>(&self, f: impl FnMut(&R) -> S) -> Mat<S> {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn try_map<S: Clone>(&self, f: impl FnMut(&R) -> Result<S>) -> Result<Mat<S>> {
        Ok(Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect::<Result<_>>()?,
        })
    }

    /// Stacks matrices with equal column counts vertically.
    pub fn vstack(blocks: &[Self]) -> Result<Self> {
        let cols = blocks.first().map_or(0, |b| b.cols);
        if blocks.iter().any(|b| b.cols != cols) {
            return Err(Error::Shape("vstack needs equal column counts".into()));
        }
        let rows = blocks.iter().map(|b| b.rows).sum();
        let data = blocks.iter().flat_map(|b| b.data.iter().cloned()).collect();
        Ok(Mat { rows, cols, data })
    }

    /// Splits into `count` vertically stacked blocks of equal height.
    pub fn vsplit(&self, count: usize) -> Result<Vec<Self>> {
        if count == 0 || !self.rows.is_multiple_of(count) {
            return Err(Error::Shape(format!(
                "{} rows cannot be split into {count} equal blocks",
                self.rows
            )));
        }
        let h = self.rows / count;
        Ok((0..count)
            .map(|b| Mat::from_fn(h, self.cols, |i, j| self.get(b * h + i, j).clone()))
            .collect())
    }
}

impl<R: Ring> Mat<R> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat::new(rows, cols, vec![R::zero(); rows * cols])
    }

    pub fn identity(n: usize) -> Self {
        Mat::from_fn(n, n, |i, j| if i == j { R::one() } else { R::zero() })
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(R::is_zero)
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self.get(i, j).is_zero()))
    }

    /// Diagonal with all diagonal entries equal.
    pub fn is_scalar(&self) -> bool {
        self.is_square()
            && self.is_diagonal()
            && (1..self.rows).all(|i| self.get(i, i) == self.get(0, 0))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.shape() != other.shape() {
            return Err(Error::Dimension(format!(
                "cannot add {:?} and {:?}",
                self.shape(),
                other.shape()
            )));
        }
        Ok(Mat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a.add(b))
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&R::one().neg()))
    }

    pub fn scale(&self, c: &R) -> Self {
        self.map(|a| a.mul(c))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {:?} by {:?}",
                self.shape(),
                other.shape()
            )));
        }
        Ok(Mat::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols).fold(R::zero(), |acc, l| {
                let a = self.get(i, l);
                if a.is_zero() {
                    acc
                } else {
                    acc.add(&a.mul(other.get(l, j)))
                }
            })
        }))
    }
}

impl PolyMatrix {
    /// Maximum entry degree, `None` for the zero matrix.
    pub fn degree(&self) -> Option<u32> {
        self.data.iter().filter_map(BiPoly::total_degree).max()
    }

    pub fn partial(&self, axis: Axis, order: u32) -> PolyMatrix {
        self.map(|p| p.partial(axis, order))
    }

    pub fn from_rational(m: &QMatrix) -> PolyMatrix {
        m.map(|c| BiPoly::constant(c.clone()))
    }

    /// Entrywise `(a_ij)` when every entry is constant.
    pub fn to_rational(&self) -> Option<QMatrix> {
        if self.data.iter().all(BiPoly::is_constant) {
            Some(self.map(|p| p.coeff(0, 0)))
        } else {
            None
        }
    }
}

impl<R: Clone + fmt::Display> fmt::Display for Mat<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for i in 0..self.rows {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str("[")?;
            for j in 0..self.cols {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}
