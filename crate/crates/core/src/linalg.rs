//! Exact linear algebra over the rationals.
//!
//! Everything here is fraction-free: rows are scaled to primitive integer
//! vectors and elimination steps are cross-multiplications followed by
//! content removal, so intermediate growth stays bounded by the minors.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::poly::Rational;

/// Sparse vector with strictly increasing indices and nonzero entries.
pub type SparseVec = Vec<(usize, BigInt)>;

/// Clear denominators and divide by content; sign-normalized so the leading
/// entry is positive.
pub fn primitive_from_rationals(v: &[(usize, Rational)]) -> SparseVec {
    let mut lcm = BigInt::one();
    for (_, c) in v {
        lcm = lcm.lcm(c.denom());
    }
    let mut out: SparseVec = v
        .iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| (*i, c.numer() * (&lcm / c.denom())))
        .collect();
    out.sort_by_key(|e| e.0);
    make_primitive(&mut out);
    out
}

fn make_primitive(v: &mut SparseVec) {
    let mut g = BigInt::zero();
    for (_, c) in v.iter() {
        g = g.gcd(c);
        if g.is_one() {
            break;
        }
    }
    if v.first().is_some_and(|(_, c)| c.is_negative()) {
        g = -g;
    }
    if !g.is_zero() && !g.is_one() {
        for (_, c) in v.iter_mut() {
            *c = &*c / &g;
        }
    }
}

/// `a*u - b*w` on sparse vectors.
fn combine(a: &BigInt, u: &SparseVec, b: &BigInt, w: &SparseVec) -> SparseVec {
    let mut out = Vec::with_capacity(u.len() + w.len());
    let (mut i, mut j) = (0, 0);
    while i < u.len() || j < w.len() {
        let take_u = j >= w.len() || (i < u.len() && u[i].0 < w[j].0);
        let take_w = i >= u.len() || (j < w.len() && w[j].0 < u[i].0);
        if take_u {
            out.push((u[i].0, a * &u[i].1));
            i += 1;
        } else if take_w {
            out.push((w[j].0, -(b * &w[j].1)));
            j += 1;
        } else {
            let c = a * &u[i].1 - b * &w[j].1;
            if !c.is_zero() {
                out.push((u[i].0, c));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Incremental row echelon form for computing ranks of sparse families.
#[derive(Default)]
pub struct Echelon {
    pivots: HashMap<usize, SparseVec>,
}

impl Echelon {
    pub fn new() -> Echelon {
        Echelon::default()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Insert a vector; returns whether it increased the rank.
    pub fn insert(&mut self, v: SparseVec) -> bool {
        let mut v = v;
        make_primitive(&mut v);
        loop {
            let Some(&(lead, ref lc)) = v.first() else { return false };
            match self.pivots.get(&lead) {
                None => {
                    self.pivots.insert(lead, v);
                    return true;
                }
                Some(b) => {
                    let bl = &b[0].1;
                    let g = bl.gcd(lc);
                    let a = bl / &g;
                    let c = lc / &g;
                    let lc_owned = c;
                    let next = combine(&a, &v, &lc_owned, b);
                    v = next;
                    make_primitive(&mut v);
                }
            }
        }
    }

    pub fn insert_rational(&mut self, v: &[(usize, Rational)]) -> bool {
        self.insert(primitive_from_rationals(v))
    }
}

/// Rank of a family of sparse rational vectors.
pub fn rank_of<'a>(vectors: impl IntoIterator<Item = &'a Vec<(usize, Rational)>>) -> usize {
    let mut e = Echelon::new();
    for v in vectors {
        e.insert_rational(v);
    }
    e.rank()
}

/// Dense rational matrix determinant via Bareiss.
pub fn det_bareiss(m: &[Vec<Rational>]) -> Rational {
    let n = m.len();
    if n == 0 {
        return Rational::one();
    }
    // scale each row to integers, remembering the factors
    let mut scale = Rational::one();
    let mut a: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    for row in m {
        let mut l = BigInt::one();
        for c in row {
            l = l.lcm(c.denom());
        }
        scale /= Rational::from_integer(l.clone());
        a.push(row.iter().map(|c| c.numer() * (&l / c.denom())).collect());
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return Rational::zero();
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = num / &prev;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    Rational::from_integer(sign * &a[n - 1][n - 1]) * scale
}

/// Dense rank by Bareiss elimination.
pub fn rank_dense(m: &[Vec<Rational>]) -> usize {
    let mut e = Echelon::new();
    for row in m {
        let v: Vec<(usize, Rational)> = row
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (i, c.clone()))
            .collect();
        e.insert_rational(&v);
    }
    e.rank()
}

/// Inverse of a dense rational matrix by Gauss-Jordan; `None` if singular.
pub fn inverse(m: &[Vec<Rational>]) -> Option<Vec<Vec<Rational>>> {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            r
        })
        .collect();
    for k in 0..n {
        let p = (k..n).find(|&i| !a[i][k].is_zero())?;
        a.swap(k, p);
        let inv = Rational::one() / a[k][k].clone();
        for x in a[k].iter_mut() {
            *x *= &inv;
        }
        for i in 0..n {
            if i != k && !a[i][k].is_zero() {
                let f = a[i][k].clone();
                let pivot_row = a[k].clone();
                for (x, y) in a[i].iter_mut().zip(pivot_row.iter()) {
                    *x -= &f * y;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}
