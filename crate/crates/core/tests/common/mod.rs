use std::collections::BTreeMap;

use matrod::Mat;

/// Polynomials in `a00, a01, a10, a11` with integer coefficients.
#[derive(Clone, PartialEq, Debug)]
pub struct Sym(BTreeMap<[u32; 4], i64>);

impl Sym {
    pub fn var(i: usize) -> Sym {
        let mut e = [0; 4];
        e[i] = 1;
        Sym(BTreeMap::from([(e, 1)]))
    }

    pub fn mono(c: i64, e: [u32; 4]) -> Sym {
        Sym(BTreeMap::from([(e, c)]))
    }

    pub fn plus(mut self, other: Sym) -> Sym {
        for (e, c) in other.0 {
            *self.0.entry(e).or_insert(0) += c;
        }
        self.0.retain(|_, c| *c != 0);
        self
    }
}

impl matrod::Ring for Sym {
    fn zero() -> Self {
        Sym(BTreeMap::new())
    }
    fn one() -> Self {
        Sym::mono(1, [0; 4])
    }
    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }
    fn add(&self, other: &Self) -> Self {
        self.clone().plus(other.clone())
    }
    fn mul(&self, other: &Self) -> Self {
        let mut out = Sym(BTreeMap::new());
        for (ea, ca) in &self.0 {
            for (eb, cb) in &other.0 {
                let e = [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2], ea[3] + eb[3]];
                out = out.plus(Sym::mono(ca * cb, e));
            }
        }
        out
    }
    fn neg(&self) -> Self {
        Sym(self.0.iter().map(|(e, c)| (*e, -c)).collect())
    }
    fn from_u64(n: u64) -> Self {
        if n == 0 {
            Sym(BTreeMap::new())
        } else {
            Sym::mono(n as i64, [0; 4])
        }
    }
}

/// The second power of the generic matrix `(a00 a01; a10 a11)`, entry by entry.
pub fn generic_second_power() -> (Mat<Sym>, Mat<Sym>) {
    let a = Mat::new(2, 2, (0..4).map(Sym::var).collect());
    let m = Sym::mono;
    let want = Mat::from_rows(vec![
        vec![m(1, [2, 0, 0, 0]), m(2, [1, 1, 0, 0]), m(1, [0, 2, 0, 0])],
        vec![
            m(1, [1, 0, 1, 0]),
            m(1, [1, 0, 0, 1]).plus(m(1, [0, 1, 1, 0])),
            m(1, [0, 1, 0, 1]),
        ],
        vec![m(1, [0, 0, 2, 0]), m(2, [0, 0, 1, 1]), m(1, [0, 0, 0, 2])],
    ])
    .unwrap();
    (a, want)
}
