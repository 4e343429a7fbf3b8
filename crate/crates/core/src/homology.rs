//! Homology lengths of 2-periodic complexes.
//!
//! Two independent engines. The graded engine cuts the complex into
//! finite-dimensional strands of fixed internal degree and counts ranks
//! exactly. The Gröbner engine presents each homology module as a quotient of
//! a free module and counts standard monomials. They share nothing beyond the
//! polynomial layer, which makes them useful as oracles for each other.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::groebner::{buchberger_in, quotient_length, syzygies_of, FreeElem};
use crate::linalg::Echelon;
use crate::mf::{weighted_degree, TwoPeriodicComplex};
use crate::poly::{monomials_of_weighted_degree, Monomial, MonomialOrder, Poly, Rational};

/// Lengths of the even and odd homology of a 2-periodic complex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LengthSequence {
    pub even: usize,
    pub odd: usize,
    /// `(degree, even, odd)` for every strand with nonzero homology.
    pub by_degree: Vec<(i64, usize, usize)>,
    /// Highest degree examined.
    pub last_degree: Option<i64>,
    pub stabilized: bool,
}

impl LengthSequence {
    pub fn euler(&self) -> i64 {
        self.even as i64 - self.odd as i64
    }

    /// `(index, length)` pairs; the pattern repeats with period 2.
    pub fn window(&self, upto: usize) -> Vec<(usize, usize)> {
        (0..upto).map(|i| (i, if i % 2 == 0 { self.even } else { self.odd })).collect()
    }
}

/// Stopping data for the graded engine.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GradedOptions {
    /// Largest internal degree above the top generator shift that may be examined.
    pub degree_bound: i64,
    /// Top degree of the ring acting on the homology (e.g. the socle degree of a
    /// Milnor algebra); no stop is accepted before `max shift + socle_degree`.
    pub socle_degree: i64,
}

type SparseRat = Vec<(usize, Rational)>;

struct Strands<'a> {
    c: &'a TwoPeriodicComplex,
    weights: Vec<u32>,
    shifts: [Vec<i64>; 2],
    mono_cache: HashMap<i64, Vec<Monomial>>,
    rank_cache: HashMap<(usize, i64), (usize, usize)>,
    relations: [Vec<(FreeElem, i64)>; 2],
}

impl<'a> Strands<'a> {
    fn monomials(&mut self, d: i64) -> Vec<Monomial> {
        if d < 0 {
            return Vec::new();
        }
        let w = self.weights.clone();
        self.mono_cache
            .entry(d)
            .or_insert_with(|| monomials_of_weighted_degree(&w, d as u64).into_iter().map(Monomial).collect())
            .clone()
    }

    /// Basis index map of term `i` in degree `t`.
    fn basis(&mut self, i: usize, t: i64) -> HashMap<(usize, Monomial), usize> {
        let mut out = HashMap::new();
        let shifts = self.shifts[i].clone();
        for (k, s) in shifts.iter().enumerate() {
            for m in self.monomials(t - s) {
                let idx = out.len();
                out.insert((k, m), idx);
            }
        }
        out
    }

    fn vectorize(
        comps: impl Iterator<Item = (usize, Poly)>,
        basis: &HashMap<(usize, Monomial), usize>,
    ) -> Result<SparseRat> {
        let mut v: HashMap<usize, Rational> = HashMap::new();
        for (k, p) in comps {
            for (m, c) in p.terms() {
                let idx = basis
                    .get(&(k, m.clone()))
                    .ok_or_else(|| Error::NotGraded("differential does not respect the grading".into()))?;
                *v.entry(*idx).or_insert_with(|| Rational::from_integer(0.into())) += c;
            }
        }
        let mut out: SparseRat = v.into_iter().filter(|(_, c)| !num_traits::Zero::is_zero(c)).collect();
        out.sort_by_key(|e| e.0);
        Ok(out)
    }

    /// Degree-`t` part of the relation module of term `i`.
    fn relation_strand(&mut self, i: usize, t: i64, basis: &HashMap<(usize, Monomial), usize>) -> Result<Vec<SparseRat>> {
        let rels = self.relations[i].clone();
        let mut out = Vec::new();
        for (rel, deg) in &rels {
            for m in self.monomials(t - deg) {
                let comps = rel
                    .components
                    .iter()
                    .enumerate()
                    .filter(|(_, p)| !p.is_zero())
                    .map(|(k, p)| (k, p.mul_monomial(&m, &Rational::from_integer(1.into()))));
                out.push(Self::vectorize(comps, basis)?);
            }
        }
        Ok(out)
    }

    /// Images of the degree-`t` basis of term `src` under its outgoing differential.
    fn image_strand(
        &mut self,
        src: usize,
        t: i64,
        target_basis: &HashMap<(usize, Monomial), usize>,
    ) -> Result<(usize, Vec<SparseRat>)> {
        let d = if src == 0 { &self.c.d0 } else { &self.c.d1 };
        let d = d.clone();
        let basis = self.basis(src, t);
        let mut out = Vec::with_capacity(basis.len());
        for (k, m) in basis.keys() {
            let comps = (0..d.rows())
                .filter(|&l| !d.get(l, *k).is_zero())
                .map(|l| (l, d.get(l, *k).mul_monomial(m, &Rational::from_integer(1.into()))));
            out.push(Self::vectorize(comps, target_basis)?);
        }
        Ok((basis.len(), out))
    }

    /// `(rank of first, rank of first ∪ second)`.
    fn ranks(first: &[SparseRat], second: &[SparseRat]) -> (usize, usize) {
        let mut e = Echelon::new();
        for v in first {
            e.insert_rational(v);
        }
        let r = e.rank();
        for v in second {
            e.insert_rational(v);
        }
        (r, e.rank())
    }

    /// `(rank U_j, rank(U_j ∪ D_i C_i,t))` in the target degree `t + deg D_i`.
    fn image_ranks(&mut self, i: usize, t: i64, degs: [i64; 2]) -> Result<(usize, usize)> {
        if let Some(&r) = self.rank_cache.get(&(i, t)) {
            return Ok(r);
        }
        let j = 1 - i;
        let out_deg = t + degs[i];
        let there = self.basis(j, out_deg);
        let r = if there.is_empty() {
            (0, 0)
        } else {
            let u_there = self.relation_strand(j, out_deg, &there)?;
            let (_, images) = self.image_strand(i, t, &there)?;
            Self::ranks(&u_there, &images)
        };
        self.rank_cache.insert((i, t), r);
        Ok(r)
    }

    /// Homology of term `i` in degree `t`.
    fn homology_at(&mut self, i: usize, t: i64, degs: [i64; 2]) -> Result<usize> {
        let j = 1 - i;
        let dim = self.basis(i, t).len();
        if dim == 0 {
            return Ok(0);
        }
        let (ru, rall) = self.image_ranks(i, t, degs)?;
        let (_, r_in) = self.image_ranks(j, t - degs[j], degs)?;
        Ok(dim - (rall - ru) - r_in)
    }
}

/// Degree of a homogeneous module element, given generator shifts.
fn element_degree(e: &FreeElem, shifts: &[i64], weights: &[u32]) -> Result<Option<i64>> {
    let mut deg = None;
    for (k, p) in e.components.iter().enumerate() {
        if p.is_zero() {
            continue;
        }
        let d = weighted_degree(p, weights).ok_or_else(|| Error::NotGraded("relation is not homogeneous".into()))? + shifts[k];
        match deg {
            None => deg = Some(d),
            Some(x) if x != d => return Err(Error::NotGraded("relation is not homogeneous".into())),
            _ => {}
        }
    }
    Ok(deg)
}

/// Strand-by-strand homology of a graded 2-periodic complex.
pub fn graded_homology_lengths(c: &TwoPeriodicComplex, opts: GradedOptions) -> Result<LengthSequence> {
    let g = c.grading.as_ref().ok_or_else(|| Error::NotGraded("complex carries no grading".into()))?;
    if g.weights.len() != c.ring().arity() {
        return Err(Error::NotGraded("one weight per ring variable is required".into()));
    }
    if g.shifts0.len() != c.rank0() || g.shifts1.len() != c.rank1() {
        return Err(Error::Shape("one shift per free generator is required".into()));
    }
    if c.rank0() == 0 && c.rank1() == 0 {
        return Ok(LengthSequence { even: 0, odd: 0, by_degree: vec![], last_degree: None, stabilized: true });
    }
    let mut relations: [Vec<(FreeElem, i64)>; 2] = [Vec::new(), Vec::new()];
    for (i, shifts) in [&g.shifts0, &g.shifts1].into_iter().enumerate() {
        for rel in c.relation_module(i) {
            if let Some(d) = element_degree(&rel, shifts, &g.weights)? {
                relations[i].push((rel, d));
            }
        }
    }
    let mut s = Strands {
        c,
        weights: g.weights.clone(),
        shifts: [g.shifts0.clone(), g.shifts1.clone()],
        mono_cache: HashMap::new(),
        rank_cache: HashMap::new(),
        relations,
    };
    let all = g.shifts0.iter().chain(&g.shifts1);
    let lo = *all.clone().min().unwrap();
    let hi = *all.max().unwrap();
    let degs = [g.deg_d0, g.deg_d1];
    let estimate = hi + g.deg_d0.max(g.deg_d1) + opts.socle_degree;
    let wmax = i64::from(*g.weights.iter().max().unwrap_or(&1));
    let need = 2.max(wmax + 1);
    let cap = hi + opts.degree_bound;
    let mut even = 0;
    let mut odd = 0;
    let mut by_degree = Vec::new();
    let mut zero_run = 0;
    let mut t = lo;
    loop {
        let h0 = s.homology_at(0, t, degs)?;
        let h1 = s.homology_at(1, t, degs)?;
        even += h0;
        odd += h1;
        if h0 + h1 > 0 {
            by_degree.push((t, h0, h1));
            zero_run = 0;
        } else {
            zero_run += 1;
        }
        if t > estimate && zero_run >= need {
            return Ok(LengthSequence { even, odd, by_degree, last_degree: Some(t), stabilized: true });
        }
        if t >= cap {
            return Err(Error::BoundTooSmall { bound: opts.degree_bound });
        }
        t += 1;
    }
}

/// Generators of `{v in Q^{r_i} : D v ∈ U_j}`.
fn kernel_generators(c: &TwoPeriodicComplex, i: usize) -> Result<Vec<FreeElem>> {
    let ring = c.ring();
    let d = if i == 0 { &c.d0 } else { &c.d1 };
    let (r_src, r_tgt) = (d.cols(), d.rows());
    let mut cols: Vec<FreeElem> = d.columns().into_iter().map(FreeElem::new).collect();
    cols.extend(c.relation_module(1 - i));
    if r_tgt == 0 {
        return Ok((0..r_src).map(|k| FreeElem::unit(ring, r_src, k)).collect());
    }
    let syz = syzygies_of(ring, r_tgt, &cols)?;
    Ok(syz
        .into_iter()
        .map(|s| FreeElem::new(s.components[..r_src].to_vec()))
        .filter(|v| !v.is_zero())
        .collect())
}

fn homology_length_gb(c: &TwoPeriodicComplex, i: usize) -> Result<usize> {
    let ring = c.ring();
    let r = if i == 0 { c.rank0() } else { c.rank1() };
    if r == 0 {
        return Ok(0);
    }
    let ker = kernel_generators(c, i)?;
    if ker.is_empty() {
        return Ok(0);
    }
    let incoming = if i == 0 { &c.d1 } else { &c.d0 };
    let mut im: Vec<FreeElem> = incoming.columns().into_iter().map(FreeElem::new).filter(|v| !v.is_zero()).collect();
    im.extend(c.relation_module(i));
    let p = ker.len();
    if im.is_empty() {
        return Err(Error::InfiniteLength);
    }
    // relations among the kernel generators modulo the image
    let mut cols = ker.clone();
    cols.extend(im);
    let syz = syzygies_of(ring, r, &cols)?;
    let rel: Vec<FreeElem> =
        syz.into_iter().map(|s| FreeElem::new(s.components[..p].to_vec())).filter(|v| !v.is_zero()).collect();
    if rel.is_empty() {
        return Err(Error::InfiniteLength);
    }
    let gb = buchberger_in(ring, p, &rel, &MonomialOrder::Grevlex, false)?;
    quotient_length(&gb)
}

/// Homology lengths from Gröbner presentations of kernel modulo image.
pub fn gb_homology_lengths(c: &TwoPeriodicComplex) -> Result<LengthSequence> {
    let even = homology_length_gb(c, 0)?;
    let odd = homology_length_gb(c, 1)?;
    Ok(LengthSequence { even, odd, by_degree: vec![], last_degree: None, stabilized: true })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::PolyMatrix;
    use crate::mf::{hom_complex, hom_complex_graded, koszul_mf, tor_complex, tor_complex_graded, ComplexGrading};
    use crate::parse::parse_poly;
    use crate::poly::Ring;

    fn p(s: &str, r: &Ring) -> Poly {
        parse_poly(s, r).unwrap()
    }

    const OPTS: GradedOptions = GradedOptions { degree_bound: 20, socle_degree: 2 };

    #[test]
    fn node_ext_and_tor() {
        let r = Ring::new(&["x", "y"], &[]).unwrap();
        let e = koszul_mf(&[(p("x", &r), p("y", &r))]).unwrap();
        let h = hom_complex_graded(&e, &e, &[1, 1]).unwrap();
        let g = graded_homology_lengths(&h, OPTS).unwrap();
        assert_eq!((g.even, g.odd), (1, 0));
        let b = gb_homology_lengths(&hom_complex(&e, &e).unwrap()).unwrap();
        assert_eq!((b.even, b.odd), (1, 0));
        let pres = PolyMatrix::from_rows(&r, vec![vec![p("x", &r)]]).unwrap();
        let t = graded_homology_lengths(&tor_complex_graded(&e, &pres, &[1, 1]).unwrap(), OPTS).unwrap();
        assert_eq!((t.even, t.odd), (0, 1));
        let t = gb_homology_lengths(&tor_complex(&e, &pres).unwrap()).unwrap();
        assert_eq!((t.even, t.odd), (0, 1));
    }

    #[test]
    fn zero_and_contractible() {
        let r = Ring::new(&["x", "y"], &[]).unwrap();
        let z = TwoPeriodicComplex::zero(&r);
        assert_eq!(gb_homology_lengths(&z).unwrap().even, 0);
        // R --1--> R --0--> R over Q/(xy): contractible pair of identities
        let c = TwoPeriodicComplex {
            modulus: p("x*y", &r),
            d0: PolyMatrix::identity(&r, 1),
            d1: PolyMatrix::zeros(&r, 1, 1),
            relations0: vec![],
            relations1: vec![],
            grading: Some(ComplexGrading { weights: vec![1, 1], shifts0: vec![0], shifts1: vec![0], deg_d0: 0, deg_d1: 2 }),
        };
        // d1 d0 = 0 but d0 d1 = 0 too; homology of the identity side vanishes
        let g = graded_homology_lengths(&c, OPTS).unwrap();
        assert_eq!(g.even, 0);
        let b = gb_homology_lengths(&c).unwrap();
        assert_eq!(b.even, 0);
    }

    #[test]
    fn quadric_engines_agree() {
        let r = Ring::new(&["x", "y"], &[]).unwrap();
        let e = koszul_mf(&[(p("x", &r), p("x", &r)), (p("y", &r), p("y", &r))]).unwrap();
        let g = graded_homology_lengths(&hom_complex_graded(&e, &e, &[1, 1]).unwrap(), OPTS).unwrap();
        let b = gb_homology_lengths(&hom_complex(&e, &e).unwrap()).unwrap();
        assert_eq!((g.even, g.odd), (b.even, b.odd));
    }
}
