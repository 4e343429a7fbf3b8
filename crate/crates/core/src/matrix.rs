use std::fmt;

use crate::error::{Error, Result};
use crate::poly::{Poly, Rational, Ring};

/// Dense matrix of polynomials, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct PolyMatrix {
    ring: Ring,
    rows: usize,
    cols: usize,
    data: Vec<Poly>,
}

impl PolyMatrix {
    pub fn zeros(ring: &Ring, rows: usize, cols: usize) -> PolyMatrix {
        PolyMatrix { ring: ring.clone(), rows, cols, data: vec![Poly::zero(ring); rows * cols] }
    }

    pub fn identity(ring: &Ring, r: usize) -> PolyMatrix {
        PolyMatrix::scalar(&Poly::one(ring), r)
    }

    /// `p` times the identity.
    pub fn scalar(p: &Poly, r: usize) -> PolyMatrix {
        let mut m = PolyMatrix::zeros(p.ring(), r, r);
        for i in 0..r {
            m.set(i, i, p.clone());
        }
        m
    }

    pub fn from_rows(ring: &Ring, rows: Vec<Vec<Poly>>) -> Result<PolyMatrix> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::Shape("ragged matrix rows".into()));
            }
            for p in row {
                if p.ring() != ring {
                    return Err(Error::RingMismatch);
                }
                data.push(p);
            }
        }
        Ok(PolyMatrix { ring: ring.clone(), rows: r, cols: c, data })
    }

    pub fn from_columns(ring: &Ring, rows: usize, cols: &[Vec<Poly>]) -> PolyMatrix {
        let mut m = PolyMatrix::zeros(ring, rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            for (i, p) in col.iter().enumerate() {
                m.set(i, j, p.clone());
            }
        }
        m
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

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Poly {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: Poly) {
        self.data[i * self.cols + j] = p;
    }

    pub fn entries(&self) -> impl Iterator<Item = &Poly> {
        self.data.iter()
    }

    pub fn column(&self, j: usize) -> Vec<Poly> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Poly>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Poly::is_zero)
    }

    pub fn map(&self, f: impl Fn(&Poly) -> Poly) -> PolyMatrix {
        let data: Vec<Poly> = self.data.iter().map(f).collect();
        let ring = data.first().map_or_else(|| self.ring.clone(), |p| p.ring().clone());
        PolyMatrix { ring, rows: self.rows, cols: self.cols, data }
    }

    pub fn try_map(&self, target: &Ring, f: impl Fn(&Poly) -> Result<Poly>) -> Result<PolyMatrix> {
        let data = self.data.iter().map(f).collect::<Result<Vec<_>>>()?;
        Ok(PolyMatrix { ring: target.clone(), rows: self.rows, cols: self.cols, data })
    }

    pub fn mul(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        if self.ring != other.ring {
            return Err(Error::RingMismatch);
        }
        let mut out = PolyMatrix::zeros(&self.ring, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * out.cols + j;
                    out.data[idx] = out.data[idx].add(&a.mul(b));
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Poly]) -> Result<Vec<Poly>> {
        if v.len() != self.cols {
            return Err(Error::Shape("vector length".into()));
        }
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = Poly::zero(&self.ring);
                for (j, x) in v.iter().enumerate() {
                    let a = self.get(i, j);
                    if !a.is_zero() && !x.is_zero() {
                        acc = acc.add(&a.mul(x));
                    }
                }
                acc
            })
            .collect())
    }

    fn zip(&self, other: &PolyMatrix, f: impl Fn(&Poly, &Poly) -> Poly) -> Result<PolyMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Shape("entrywise operation on different shapes".into()));
        }
        Ok(PolyMatrix {
            ring: self.ring.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect(),
        })
    }

    pub fn add(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        self.zip(other, Poly::add)
    }

    pub fn sub(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        self.zip(other, Poly::sub)
    }

    pub fn neg(&self) -> PolyMatrix {
        self.map(Poly::neg)
    }

    pub fn scale(&self, c: &Rational) -> PolyMatrix {
        self.map(|p| p.scale(c))
    }

    pub fn scale_poly(&self, p: &Poly) -> PolyMatrix {
        self.map(|q| q.mul(p))
    }

    pub fn transpose(&self) -> PolyMatrix {
        let mut out = PolyMatrix::zeros(&self.ring, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &PolyMatrix) -> PolyMatrix {
        let mut out = PolyMatrix::zeros(&self.ring, self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        let b = other.get(k, l);
                        if !b.is_zero() {
                            out.set(i * other.rows + k, j * other.cols + l, a.mul(b));
                        }
                    }
                }
            }
        }
        out
    }

    /// Assemble `[[a, b], [c, d]]`.
    pub fn block2(a: &PolyMatrix, b: &PolyMatrix, c: &PolyMatrix, d: &PolyMatrix) -> Result<PolyMatrix> {
        if a.rows != b.rows || c.rows != d.rows || a.cols != c.cols || b.cols != d.cols {
            return Err(Error::Shape("inconsistent block sizes".into()));
        }
        let mut out = PolyMatrix::zeros(&a.ring, a.rows + c.rows, a.cols + b.cols);
        for (blk, r0, c0) in [(a, 0, 0), (b, 0, a.cols), (c, a.rows, 0), (d, a.rows, a.cols)] {
            for i in 0..blk.rows {
                for j in 0..blk.cols {
                    out.set(r0 + i, c0 + j, blk.get(i, j).clone());
                }
            }
        }
        Ok(out)
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, other: &PolyMatrix) -> PolyMatrix {
        let z1 = PolyMatrix::zeros(&self.ring, self.rows, other.cols);
        let z2 = PolyMatrix::zeros(&self.ring, other.rows, self.cols);
        PolyMatrix::block2(self, &z1, &z2, other).expect("block sizes agree")
    }

    /// Horizontal concatenation.
    pub fn hcat(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        if self.rows != other.rows {
            return Err(Error::Shape("hcat row mismatch".into()));
        }
        let mut cols = self.columns();
        cols.extend(other.columns());
        Ok(PolyMatrix::from_columns(&self.ring, self.rows, &cols))
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> PolyMatrix {
        let mut out = PolyMatrix::zeros(&self.ring, rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                out.set(a, b, self.get(i, j).clone());
            }
        }
        out
    }

    /// Determinant by fraction-free (Bareiss) elimination over the polynomial ring.
    pub fn det(&self) -> Result<Poly> {
        if !self.is_square() {
            return Err(Error::Shape("determinant of a non-square matrix".into()));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(Poly::one(&self.ring));
        }
        let mut m: Vec<Vec<Poly>> = (0..n).map(|i| (0..n).map(|j| self.get(i, j).clone()).collect()).collect();
        let mut sign = false;
        let mut prev = Poly::one(&self.ring);
        for k in 0..n - 1 {
            if m[k][k].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                    return Ok(Poly::zero(&self.ring));
                };
                m.swap(k, p);
                sign = !sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = m[i][j].mul(&m[k][k]).sub(&m[i][k].mul(&m[k][j]));
                    m[i][j] = num.div_exact(&prev).expect("Bareiss division is exact");
                }
                m[i][k] = Poly::zero(&self.ring);
            }
            prev = m[k][k].clone();
        }
        let d = m[n - 1][n - 1].clone();
        Ok(if sign { d.neg() } else { d })
    }

    /// Classical adjugate, `adj(M) M = det(M) I`.
    pub fn adjugate(&self) -> Result<PolyMatrix> {
        if !self.is_square() {
            return Err(Error::Shape("adjugate of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut out = PolyMatrix::zeros(&self.ring, n, n);
        if n == 1 {
            out.set(0, 0, Poly::one(&self.ring));
            return Ok(out);
        }
        for i in 0..n {
            for j in 0..n {
                let rows: Vec<usize> = (0..n).filter(|&r| r != j).collect();
                let cols: Vec<usize> = (0..n).filter(|&c| c != i).collect();
                let minor = self.submatrix(&rows, &cols).det()?;
                out.set(i, j, if (i + j) % 2 == 0 { minor } else { minor.neg() });
            }
        }
        Ok(out)
    }

    /// Inverse over the polynomial ring, when the determinant is a nonzero constant.
    pub fn inverse_if_unimodular(&self) -> Result<Option<PolyMatrix>> {
        let d = self.det()?;
        let Some(c) = d.as_constant() else { return Ok(None) };
        if num_traits::Zero::is_zero(&c) {
            return Ok(None);
        }
        let inv = num_traits::Inv::inv(c);
        Ok(Some(self.adjugate()?.scale(&inv)))
    }

    pub fn first_difference(&self, other: &PolyMatrix) -> Option<(usize, usize)> {
        if self.rows != other.rows || self.cols != other.cols {
            return Some((0, 0));
        }
        (0..self.rows)
            .flat_map(|i| (0..self.cols).map(move |j| (i, j)))
            .find(|&(i, j)| self.get(i, j) != other.get(i, j))
    }
}

impl fmt::Debug for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;

    fn m(ring: &Ring, rows: &[&[&str]]) -> PolyMatrix {
        PolyMatrix::from_rows(
            ring,
            rows.iter().map(|r| r.iter().map(|s| parse_poly(s, ring).unwrap()).collect()).collect(),
        )
        .unwrap()
    }

    #[test]
    fn determinant_and_adjugate() {
        let r = Ring::new(&["x", "y"], &[]).unwrap();
        let a = m(&r, &[&["x", "-y"], &["y", "x"]]);
        assert_eq!(a.det().unwrap(), parse_poly("x^2+y^2", &r).unwrap());
        let adj = a.adjugate().unwrap();
        let prod = adj.mul(&a).unwrap();
        assert_eq!(prod, PolyMatrix::scalar(&parse_poly("x^2+y^2", &r).unwrap(), 2));
        let b = m(&r, &[&["0", "1", "x"], &["1", "0", "y"], &["x", "y", "1"]]);
        // cofactor expansion by hand: 0*(0-y^2) - 1*(1-xy) + x*(y-0) = 2xy - 1
        assert_eq!(b.det().unwrap(), parse_poly("2*x*y - 1", &r).unwrap());
    }

    #[test]
    fn unimodular_inverse() {
        let r = Ring::new(&["x"], &[]).unwrap();
        let a = m(&r, &[&["1", "x"], &["0", "2"]]);
        let inv = a.inverse_if_unimodular().unwrap().unwrap();
        assert_eq!(a.mul(&inv).unwrap(), PolyMatrix::identity(&r, 2));
        let b = m(&r, &[&["x", "0"], &["0", "1"]]);
        assert!(b.inverse_if_unimodular().unwrap().is_none());
    }
}
