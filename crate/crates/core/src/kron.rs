//! Second-kind Kronecker powers `A^{n}` of a 2x2 matrix.
//!
//! `A^{n}` is the `(n+1) x (n+1)` matrix describing how the homogeneous
//! products `z_1^{n-i} z_2^i` transform under `z = A t`. Three construction
//! paths are provided (closed-form entries and two recurrences); they are
//! used as mutual oracles in the tests. `A^{0} = (1)` and `A^{1} = A`.

use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};
use crate::poly::{Mat, PolyMatrix};
use crate::ring::{binomial, Ring};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Recurrence {
    /// Rows `0..n` from `(a00, a01)`, row `n` from `(a10, a11)`.
    I,
    /// Row `0` from `(a00, a01)`, rows `1..=n` from `(a10, a11)`.
    II,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KronMatrix<R> {
    pub n: u32,
    pub body: Mat<R>,
}

fn check_2x2<R: Ring>(a: &Mat<R>) -> Result<()> {
    if a.shape() != (2, 2) {
        return Err(Error::Dimension(format!(
            "second-kind Kronecker power needs a 2x2 matrix, got {:?}",
            a.shape()
        )));
    }
    Ok(())
}

/// Entry `(i, j)` of `A^{n}` from the closed form
/// `sum_k C(n-i,k) C(i,j-k) a00^{n-i-k} a01^k a10^{i-j+k} a11^{j-k}`.
/// Only `k` with all four exponents nonnegative contribute.
pub fn kron_entry<R: Ring>(a: &Mat<R>, n: u32, i: u32, j: u32) -> R {
    let (a00, a01, a10, a11) = (a.get(0, 0), a.get(0, 1), a.get(1, 0), a.get(1, 1));
    let k_lo = j.saturating_sub(i);
    let k_hi = j.min(n - i);
    let mut acc = R::zero();
    for k in k_lo..=k_hi {
        let c = binomial((n - i) as u64, k as u64) * binomial(i as u64, (j - k) as u64);
        if c == 0 {
            continue;
        }
        let term = a00
            .pow(n - i - k)
            .mul(&a01.pow(k))
            .mul(&a10.pow(i + k - j))
            .mul(&a11.pow(j - k));
        acc = acc.add(&term.mul(&R::from_u64(c)));
    }
    acc
}

pub fn kron_explicit<R: Ring>(a: &Mat<R>, n: u32) -> Result<KronMatrix<R>> {
    check_2x2(a)?;
    let size = n as usize + 1;
    let body = Mat::from_fn(size, size, |i, j| kron_entry(a, n, i as u32, j as u32));
    Ok(KronMatrix { n, body })
}

/// One recurrence step `A^{n-1} -> A^{n}`.
pub fn kron_step<R: Ring>(a: &Mat<R>, prev: &Mat<R>, variant: Recurrence) -> Mat<R> {
    let n = prev.rows();
    let at = |i: usize, j: isize| -> R {
        if j < 0 || j as usize >= n {
            R::zero()
        } else {
            prev.get(i, j as usize).clone()
        }
    };
    Mat::from_fn(n + 1, n + 1, |i, j| {
        let j = j as isize;
        let (src, lo, hi) = match variant {
            Recurrence::I if i < n => (i, a.get(0, 0), a.get(0, 1)),
            Recurrence::I => (n - 1, a.get(1, 0), a.get(1, 1)),
            Recurrence::II if i == 0 => (0, a.get(0, 0), a.get(0, 1)),
            Recurrence::II => (i - 1, a.get(1, 0), a.get(1, 1)),
        };
        let mut v = R::zero();
        if !lo.is_zero() {
            v = v.add(&lo.mul(&at(src, j)));
        }
        if !hi.is_zero() {
            v = v.add(&hi.mul(&at(src, j - 1)));
        }
        v
    })
}

pub fn kron_recurrence<R: Ring>(a: &Mat<R>, n: u32, variant: Recurrence) -> Result<KronMatrix<R>> {
    check_2x2(a)?;
    let mut body = Mat::identity(1);
    for _ in 0..n {
        body = kron_step(a, &body, variant);
    }
    Ok(KronMatrix { n, body })
}

/// Default construction path (recurrence I).
pub fn kron_power<R: Ring>(a: &Mat<R>, n: u32) -> Result<KronMatrix<R>> {
    kron_recurrence(a, n, Recurrence::I)
}

/// Selector matrices `L^0 = [I_n | 0]` and `L^1 = [0 | I_n]`, both
/// `n x (n+1)` with `n = n_minus_1 + 1`.
pub fn selector<R: Ring>(n_minus_1: usize, k: u8) -> Mat<R> {
    let n = n_minus_1 + 1;
    let shift = usize::from(k != 0);
    Mat::from_fn(
        n,
        n + 1,
        |i, j| if j == i + shift { R::one() } else { R::zero() },
    )
}

/// Lazily grown, internally synchronized table of `A^{0}, A^{1}, ...`.
#[derive(Debug)]
pub struct KronCache {
    base: PolyMatrix,
    powers: Mutex<Vec<Arc<PolyMatrix>>>,
}

impl KronCache {
    pub fn new(base: PolyMatrix) -> Result<Self> {
        check_2x2(&base)?;
        Ok(KronCache {
            base,
            powers: Mutex::new(vec![Arc::new(Mat::identity(1))]),
        })
    }

    pub fn base(&self) -> &PolyMatrix {
        &self.base
    }

    pub fn power(&self, n: u32) -> Arc<PolyMatrix> {
        let mut powers = self.powers.lock().expect("kron cache poisoned");
        while powers.len() <= n as usize {
            let next = kron_step(&self.base, powers.last().unwrap(), Recurrence::I);
            powers.push(Arc::new(next));
        }
        Arc::clone(&powers[n as usize])
    }
}
