//! Differential forms `Q[x] ⊗ Λ(dx_1, ..., dx_n)` and matrices over them.
//!
//! Basis forms are stored as bitmasks over the x-variables, oriented by
//! ascending index. Parameter variables have no differentials: coefficients
//! may involve them, but `d` only sees the x-directions.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::matrix::PolyMatrix;
use crate::poly::{Poly, Rational, Ring};

/// Sign of `dx_I ∧ dx_J`, or `None` when the two share an index.
fn basis_wedge(i: u32, j: u32) -> Option<bool> {
    if i & j != 0 {
        return None;
    }
    // count pairs (a in I, b in J) with a > b
    let mut inversions = 0;
    let mut rest = j;
    while rest != 0 {
        let b = rest.trailing_zeros();
        rest &= rest - 1;
        inversions += (i >> (b + 1)).count_ones();
    }
    Some(inversions % 2 == 1)
}

#[derive(Clone, PartialEq, Eq)]
pub struct Form {
    ring: Ring,
    terms: BTreeMap<u32, Poly>,
}

impl Form {
    pub fn zero(ring: &Ring) -> Form {
        Form { ring: ring.clone(), terms: BTreeMap::new() }
    }

    pub fn scalar(p: Poly) -> Form {
        let ring = p.ring().clone();
        let mut f = Form::zero(&ring);
        f.add_part(0, p);
        f
    }

    pub fn one(ring: &Ring) -> Form {
        Form::scalar(Poly::one(ring))
    }

    /// `dx_i` for an x-variable index.
    pub fn dx(ring: &Ring, i: usize) -> Form {
        assert!(i < ring.n(), "dx of a parameter variable");
        let mut f = Form::zero(ring);
        f.add_part(1 << i, Poly::one(ring));
        f
    }

    /// Coefficient `p` times the basis form given by sorted indices.
    pub fn basis(p: Poly, indices: &[usize]) -> Form {
        let ring = p.ring().clone();
        let mut mask = 0u32;
        let mut f = Form::scalar(p);
        for &i in indices {
            f = f.wedge(&Form::dx(&ring, i));
            mask |= 1 << i;
        }
        debug_assert!(f.is_zero() || f.terms.keys().all(|&k| k == mask));
        f
    }

    /// `dx_1 ∧ ... ∧ dx_n`.
    pub fn volume(ring: &Ring) -> Form {
        let mut f = Form::zero(ring);
        f.add_part((1u32 << ring.n()) - 1, Poly::one(ring));
        f
    }

    /// Exterior derivative of a function: `Σ ∂p/∂x_i dx_i`.
    pub fn d(p: &Poly) -> Form {
        let ring = p.ring();
        let mut f = Form::zero(ring);
        for i in 0..ring.n() {
            f.add_part(1 << i, p.derivative(i).expect("x-variable"));
        }
        f
    }

    /// Exterior derivative of a form.
    pub fn d_form(&self) -> Form {
        let mut out = Form::zero(&self.ring);
        for (&mask, p) in &self.terms {
            out = out.add(&Form::d(p).wedge(&Form::from_mask(&self.ring, mask)));
        }
        out
    }

    fn from_mask(ring: &Ring, mask: u32) -> Form {
        let mut f = Form::zero(ring);
        f.add_part(mask, Poly::one(ring));
        f
    }

    fn add_part(&mut self, mask: u32, p: Poly) {
        if p.is_zero() {
            return;
        }
        let sum = match self.terms.remove(&mask) {
            Some(q) => q.add(&p),
            None => p,
        };
        if !sum.is_zero() {
            self.terms.insert(mask, sum);
        }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// (basis bitmask, coefficient) pairs.
    pub fn parts(&self) -> impl Iterator<Item = (u32, &Poly)> {
        self.terms.iter().map(|(k, v)| (*k, v))
    }

    /// Form degree if homogeneous (zero counts as degree 0).
    pub fn degree(&self) -> Option<usize> {
        let mut degs = self.terms.keys().map(|k| k.count_ones() as usize);
        let first = degs.next().unwrap_or(0);
        degs.all(|d| d == first).then_some(first)
    }

    /// The degree-`k` component.
    pub fn part(&self, k: usize) -> Form {
        Form {
            ring: self.ring.clone(),
            terms: self.terms.iter().filter(|(m, _)| m.count_ones() as usize == k).map(|(m, p)| (*m, p.clone())).collect(),
        }
    }

    /// Coefficient of `dx_1 ∧ ... ∧ dx_n`.
    pub fn top_coefficient(&self) -> Poly {
        let top = (1u32 << self.ring.n()) - 1;
        self.terms.get(&top).cloned().unwrap_or_else(|| Poly::zero(&self.ring))
    }

    pub fn add(&self, other: &Form) -> Form {
        let mut out = self.clone();
        for (&m, p) in &other.terms {
            out.add_part(m, p.clone());
        }
        out
    }

    pub fn sub(&self, other: &Form) -> Form {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Form {
        Form { ring: self.ring.clone(), terms: self.terms.iter().map(|(m, p)| (*m, p.neg())).collect() }
    }

    pub fn scale(&self, c: &Rational) -> Form {
        let mut out = Form::zero(&self.ring);
        for (&m, p) in &self.terms {
            out.add_part(m, p.scale(c));
        }
        out
    }

    pub fn scale_poly(&self, q: &Poly) -> Form {
        let mut out = Form::zero(&self.ring);
        for (&m, p) in &self.terms {
            out.add_part(m, p.mul(q));
        }
        out
    }

    pub fn wedge(&self, other: &Form) -> Form {
        let mut out = Form::zero(&self.ring);
        for (&a, p) in &self.terms {
            for (&b, q) in &other.terms {
                if let Some(neg) = basis_wedge(a, b) {
                    let pq = p.mul(q);
                    out.add_part(a | b, if neg { pq.neg() } else { pq });
                }
            }
        }
        out
    }

    pub fn try_wedge(&self, other: &Form) -> Result<Form> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch);
        }
        Ok(self.wedge(other))
    }

    /// Apply a map to every coefficient.
    pub fn map_coefficients(&self, f: impl Fn(&Poly) -> Poly) -> Form {
        let mut out = Form::zero(&self.ring);
        for (&m, p) in &self.terms {
            out.add_part(m, f(p));
        }
        out
    }

    pub fn render(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(&m, p)| {
                let basis: Vec<String> =
                    (0..self.ring.n()).filter(|i| m & (1 << i) != 0).map(|i| format!("d{}", self.ring.var_name(i))).collect();
                if basis.is_empty() {
                    format!("({p})")
                } else {
                    format!("({p})*{}", basis.join("^"))
                }
            })
            .collect();
        parts.join(" + ")
    }
}

impl std::fmt::Debug for Form {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.render())
    }
}

/// Matrix with form entries; products use the wedge.
#[derive(Clone, PartialEq, Eq)]
pub struct FormMatrix {
    ring: Ring,
    rows: usize,
    cols: usize,
    data: Vec<Form>,
}

impl FormMatrix {
    pub fn zeros(ring: &Ring, rows: usize, cols: usize) -> FormMatrix {
        FormMatrix { ring: ring.clone(), rows, cols, data: vec![Form::zero(ring); rows * cols] }
    }

    pub fn identity(ring: &Ring, r: usize) -> FormMatrix {
        let mut m = FormMatrix::zeros(ring, r, r);
        for i in 0..r {
            m.set(i, i, Form::one(ring));
        }
        m
    }

    pub fn from_poly_matrix(m: &PolyMatrix) -> FormMatrix {
        FormMatrix {
            ring: m.ring().clone(),
            rows: m.rows(),
            cols: m.cols(),
            data: m.entries().map(|p| Form::scalar(p.clone())).collect(),
        }
    }

    /// Entrywise exterior derivative over the x-variables.
    pub fn d_entrywise(m: &PolyMatrix) -> FormMatrix {
        FormMatrix { ring: m.ring().clone(), rows: m.rows(), cols: m.cols(), data: m.entries().map(Form::d).collect() }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Form {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, f: Form) {
        self.data[i * self.cols + j] = f;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Form::is_zero)
    }

    fn zip(&self, other: &FormMatrix, f: impl Fn(&Form, &Form) -> Form) -> Result<FormMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Shape(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(FormMatrix {
            ring: self.ring.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect(),
        })
    }

    pub fn add(&self, other: &FormMatrix) -> Result<FormMatrix> {
        self.zip(other, Form::add)
    }

    pub fn sub(&self, other: &FormMatrix) -> Result<FormMatrix> {
        self.zip(other, Form::sub)
    }

    pub fn neg(&self) -> FormMatrix {
        self.map(Form::neg)
    }

    pub fn map(&self, f: impl Fn(&Form) -> Form) -> FormMatrix {
        FormMatrix { ring: self.ring.clone(), rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn part(&self, k: usize) -> FormMatrix {
        self.map(|f| f.part(k))
    }

    pub fn mul(&self, other: &FormMatrix) -> Result<FormMatrix> {
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = FormMatrix::zeros(&self.ring, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let idx = i * other.cols + j;
                        out.data[idx] = out.data[idx].add(&a.wedge(b));
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_poly(&self, m: &PolyMatrix) -> Result<FormMatrix> {
        self.mul(&FormMatrix::from_poly_matrix(m))
    }

    pub fn poly_mul(m: &PolyMatrix, f: &FormMatrix) -> Result<FormMatrix> {
        FormMatrix::from_poly_matrix(m).mul(f)
    }

    pub fn trace(&self) -> Result<Form> {
        if self.rows != self.cols {
            return Err(Error::Shape("trace of a non-square matrix".into()));
        }
        Ok((0..self.rows).fold(Form::zero(&self.ring), |acc, i| acc.add(self.get(i, i))))
    }
}

impl std::fmt::Debug for FormMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).render()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;

    fn r2() -> Ring {
        Ring::new(&["x", "y"], &[]).unwrap()
    }

    fn p(s: &str, r: &Ring) -> Poly {
        parse_poly(s, r).unwrap()
    }

    #[test]
    fn wedge_signs() {
        let r = r2();
        let dx = Form::dx(&r, 0);
        let dy = Form::dx(&r, 1);
        assert_eq!(dx.wedge(&dy), Form::volume(&r));
        assert!(dx.wedge(&dx).is_zero());
        assert_eq!(dy.wedge(&dx), Form::volume(&r).neg());
        let a = Form::basis(p("x", &r), &[1]);
        let b = Form::basis(p("y", &r), &[0]);
        assert_eq!(a.wedge(&b), Form::basis(p("-x*y", &r), &[0, 1]));
    }

    #[test]
    fn exterior_derivative() {
        let r = r2();
        let m = PolyMatrix::from_rows(&r, vec![vec![p("x", &r), p("-y", &r)], vec![p("y", &r), p("x", &r)]]).unwrap();
        let dm = FormMatrix::d_entrywise(&m);
        assert_eq!(*dm.get(0, 1), Form::dx(&r, 1).neg());
        assert_eq!(*dm.get(1, 1), Form::dx(&r, 0));
        assert!(FormMatrix::d_entrywise(&PolyMatrix::identity(&r, 2)).is_zero());
        let f = Form::basis(p("x^2*y", &r), &[0]);
        assert!(f.d_form().d_form().is_zero());
    }

    #[test]
    fn matrix_products_and_trace() {
        let r = r2();
        let dx = Form::dx(&r, 0);
        let dy = Form::dx(&r, 1);
        let mut m = FormMatrix::zeros(&r, 2, 2);
        m.set(0, 0, dx.clone());
        m.set(0, 1, dy.clone());
        m.set(1, 0, dy.neg());
        m.set(1, 1, dx.clone());
        let sq = m.mul(&m).unwrap();
        assert!(sq.is_zero());
        let mut n = FormMatrix::zeros(&r, 2, 2);
        n.set(0, 0, dx.clone());
        n.set(0, 1, dy.clone());
        n.set(1, 0, dy.clone());
        n.set(1, 1, dx.neg());
        let sq = n.mul(&n).unwrap();
        assert_eq!(*sq.get(0, 1), Form::volume(&r).scale(&crate::poly::rat(2)));
        assert_eq!(*sq.get(1, 0), Form::volume(&r).scale(&crate::poly::rat(-2)));
        assert!(sq.get(0, 0).is_zero() && sq.get(1, 1).is_zero());
        assert_eq!(FormMatrix::identity(&r, 3).trace().unwrap(), Form::scalar(Poly::from_int(&r, 3)));
        let mut one = FormMatrix::zeros(&r, 1, 1);
        one.set(0, 0, dx.clone());
        let mut two = FormMatrix::zeros(&r, 1, 1);
        two.set(0, 0, dy.clone());
        assert_eq!(*one.mul(&two).unwrap().get(0, 0), Form::volume(&r));
    }

    #[test]
    fn top_coefficients() {
        let r = r2();
        assert_eq!(Form::volume(&r).top_coefficient(), Poly::one(&r));
        assert!(Form::dx(&r, 0).top_coefficient().is_zero());
        assert_eq!(Form::basis(p("3*x*y", &r), &[0, 1]).top_coefficient(), p("3*x*y", &r));
    }

    #[test]
    fn parameters_have_no_differential() {
        let r = Ring::new(&["x", "y"], &["T1"]).unwrap();
        let w = p("x^2*T1", &r);
        assert_eq!(Form::d(&w), Form::basis(p("2*x*T1", &r), &[0]));
    }
}
