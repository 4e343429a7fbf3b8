//! Matrix factorizations and the 2-periodic complexes built from them.
//!
//! A factorization of `f` is a pair `A: E1 -> E0`, `B: E0 -> E1` of square
//! matrices with `AB = BA = f·I`; its module is `coker A` over `Q/f`.
//! Twisted factorizations live over `Q[T]` with potential `W = Σ f_i T_i` and
//! carry integer twists on every free summand so that `B` raises the total
//! twist by one.

use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::groebner::{buchberger_in, ideal_gb, syzygies_of, FreeElem};
use crate::matrix::PolyMatrix;
use crate::poly::{MonomialOrder, Poly, Rational, Ring};

/// Outcome of checking `AB = BA = f·I`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Validation {
    /// `None` when both identities hold; otherwise which product failed and where.
    pub violation: Option<Violation>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub product: &'static str,
    pub row: usize,
    pub col: usize,
}

impl Validation {
    pub fn ok(&self) -> bool {
        self.violation.is_none()
    }
}

fn check_products(a: &PolyMatrix, b: &PolyMatrix, f: &Poly) -> Result<Validation> {
    if !a.is_square() || !b.is_square() || a.rows() != b.rows() {
        return Err(Error::Shape("factorization matrices must be square of equal size".into()));
    }
    let target = PolyMatrix::scalar(f, a.rows());
    for (name, prod) in [("AB", a.mul(b)?), ("BA", b.mul(a)?)] {
        if let Some((row, col)) = prod.first_difference(&target) {
            return Ok(Validation { violation: Some(Violation { product: name, row, col }) });
        }
    }
    Ok(Validation { violation: None })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixFactorization {
    f: Poly,
    a: PolyMatrix,
    b: PolyMatrix,
}

impl MatrixFactorization {
    /// Build without checking the factorization identities.
    pub fn new_unchecked(f: Poly, a: PolyMatrix, b: PolyMatrix) -> MatrixFactorization {
        MatrixFactorization { f, a, b }
    }

    /// Build and validate.
    pub fn new(f: Poly, a: PolyMatrix, b: PolyMatrix) -> Result<MatrixFactorization> {
        let e = MatrixFactorization { f, a, b };
        let v = e.validate()?;
        if let Some(bad) = v.violation {
            return Err(Error::InvalidMf(format!("{} differs from f·I at ({}, {})", bad.product, bad.row, bad.col)));
        }
        Ok(e)
    }

    /// The zero object.
    pub fn zero(f: Poly) -> MatrixFactorization {
        let ring = f.ring().clone();
        MatrixFactorization { f, a: PolyMatrix::zeros(&ring, 0, 0), b: PolyMatrix::zeros(&ring, 0, 0) }
    }

    pub fn potential(&self) -> &Poly {
        &self.f
    }

    pub fn ring(&self) -> &Ring {
        self.f.ring()
    }

    /// `d1: E1 -> E0`.
    pub fn a(&self) -> &PolyMatrix {
        &self.a
    }

    /// `d0: E0 -> E1`.
    pub fn b(&self) -> &PolyMatrix {
        &self.b
    }

    pub fn rank(&self) -> usize {
        self.a.rows()
    }

    pub fn validate(&self) -> Result<Validation> {
        check_products(&self.a, &self.b, &self.f)
    }
}

/// Rank-`2^(k-1)` factorization of `Σ a_i b_i` as an iterated tensor product.
pub fn koszul_mf(pairs: &[(Poly, Poly)]) -> Result<MatrixFactorization> {
    let (first, rest) = pairs.split_first().ok_or_else(|| Error::Shape("koszul_mf needs at least one pair".into()))?;
    let rank_one = |(a, b): &(Poly, Poly)| -> Result<MatrixFactorization> {
        if a.ring() != b.ring() {
            return Err(Error::RingMismatch);
        }
        let ring = a.ring();
        Ok(MatrixFactorization {
            f: a.mul(b),
            a: PolyMatrix::from_rows(ring, vec![vec![a.clone()]])?,
            b: PolyMatrix::from_rows(ring, vec![vec![b.clone()]])?,
        })
    };
    let mut e = rank_one(first)?;
    for p in rest {
        e = tensor(&e, &rank_one(p)?)?;
    }
    Ok(e)
}

/// Block matrices of the tensor product. Sources are `[E1⊗F0, E0⊗F1]` and
/// targets `[E0⊗F0, E1⊗F1]`.
fn tensor_blocks(a1: &PolyMatrix, b1: &PolyMatrix, a2: &PolyMatrix, b2: &PolyMatrix) -> Result<(PolyMatrix, PolyMatrix)> {
    let ring = a1.ring();
    let i1 = PolyMatrix::identity(ring, a1.rows());
    let i2 = PolyMatrix::identity(ring, a2.rows());
    let d1 = PolyMatrix::block2(&a1.kron(&i2), &i1.kron(a2), &i1.kron(b2).neg(), &b1.kron(&i2))?;
    let d0 = PolyMatrix::block2(&b1.kron(&i2), &i1.kron(a2).neg(), &i1.kron(b2), &a1.kron(&i2))?;
    Ok((d1, d0))
}

/// Factorization of `f + h`; the zero object is absorbing.
pub fn tensor(e: &MatrixFactorization, g: &MatrixFactorization) -> Result<MatrixFactorization> {
    if e.ring() != g.ring() {
        return Err(Error::RingMismatch);
    }
    let f = e.f.add(&g.f);
    if e.rank() == 0 || g.rank() == 0 {
        return Ok(MatrixFactorization::zero(f));
    }
    let (a, b) = tensor_blocks(&e.a, &e.b, &g.a, &g.b)?;
    Ok(MatrixFactorization { f, a, b })
}

/// Factorization of `-f` with `E0^*` in even degree.
pub fn dual(e: &MatrixFactorization) -> MatrixFactorization {
    MatrixFactorization { f: e.f.neg(), a: e.b.transpose().neg(), b: e.a.transpose() }
}

/// `(A, B) -> (-B, -A)`.
pub fn shift(e: &MatrixFactorization) -> MatrixFactorization {
    MatrixFactorization { f: e.f.clone(), a: e.b.neg(), b: e.a.neg() }
}

pub fn direct_sum(e: &MatrixFactorization, g: &MatrixFactorization) -> Result<MatrixFactorization> {
    if e.f != g.f {
        return Err(Error::PotentialMismatch);
    }
    Ok(MatrixFactorization { f: e.f.clone(), a: e.a.direct_sum(&g.a), b: e.b.direct_sum(&g.b) })
}

/// Factorization whose cokernel is `Hom_R(coker A, R)`.
pub fn module_dual(e: &MatrixFactorization) -> MatrixFactorization {
    MatrixFactorization { f: e.f.clone(), a: e.a.transpose(), b: e.b.transpose() }
}

/// Conjugate by the isomorphism `(u0, u1)`: `(A, B) -> (u0 A u1^-1, u1 B u0^-1)`.
pub fn conjugate(
    e: &MatrixFactorization,
    u0: &PolyMatrix,
    u0_inv: &PolyMatrix,
    u1: &PolyMatrix,
    u1_inv: &PolyMatrix,
) -> Result<MatrixFactorization> {
    Ok(MatrixFactorization { f: e.f.clone(), a: u0.mul(&e.a)?.mul(u1_inv)?, b: u1.mul(&e.b)?.mul(u0_inv)? })
}

/// Factorization over `Q[T]` of `W = Σ f_i T_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistedMf {
    w: Poly,
    a: PolyMatrix,
    b: PolyMatrix,
    twists0: Vec<i64>,
    twists1: Vec<i64>,
}

impl TwistedMf {
    pub fn new(w: Poly, a: PolyMatrix, b: PolyMatrix, twists0: Vec<i64>, twists1: Vec<i64>) -> Result<TwistedMf> {
        let e = TwistedMf { w, a, b, twists0, twists1 };
        let v = e.validate()?;
        if let Some(bad) = v.violation {
            return Err(Error::InvalidMf(format!(
                "{} fails at ({}, {})",
                bad.product, bad.row, bad.col
            )));
        }
        Ok(e)
    }

    pub fn potential(&self) -> &Poly {
        &self.w
    }

    pub fn ring(&self) -> &Ring {
        self.w.ring()
    }

    pub fn a(&self) -> &PolyMatrix {
        &self.a
    }

    pub fn b(&self) -> &PolyMatrix {
        &self.b
    }

    pub fn twists(&self) -> (&[i64], &[i64]) {
        (&self.twists0, &self.twists1)
    }

    pub fn rank(&self) -> usize {
        self.a.rows()
    }

    /// Factorization identities plus T-degree bookkeeping. A T-degree mismatch is
    /// reported with product name `"twist A"` or `"twist B"`.
    pub fn validate(&self) -> Result<Validation> {
        let r = self.rank();
        if self.twists0.len() != r || self.twists1.len() != r {
            return Err(Error::Shape("one twist per free summand is required".into()));
        }
        let v = check_products(&self.a, &self.b, &self.w)?;
        if !v.ok() {
            return Ok(v);
        }
        for i in 0..r {
            for j in 0..r {
                let want_a = self.twists0[i] - self.twists1[j];
                if !t_degree_is(self.a.get(i, j), want_a) {
                    return Ok(Validation { violation: Some(Violation { product: "twist A", row: i, col: j }) });
                }
                let want_b = self.twists1[i] + 1 - self.twists0[j];
                if !t_degree_is(self.b.get(i, j), want_b) {
                    return Ok(Validation { violation: Some(Violation { product: "twist B", row: i, col: j }) });
                }
            }
        }
        Ok(v)
    }
}

fn t_degree_is(p: &Poly, want: i64) -> bool {
    p.is_zero() || p.t_homogeneous_degree().is_some_and(|d| i64::from(d) == want)
}

/// Tensor of twisted factorizations, propagating twists.
pub fn tensor_twisted(e: &TwistedMf, g: &TwistedMf) -> Result<TwistedMf> {
    if e.ring() != g.ring() {
        return Err(Error::RingMismatch);
    }
    let (a, b) = tensor_blocks(&e.a, &e.b, &g.a, &g.b)?;
    let mut t0 = Vec::new();
    for x in &e.twists0 {
        for y in &g.twists0 {
            t0.push(x + y);
        }
    }
    for x in &e.twists1 {
        for y in &g.twists1 {
            t0.push(x + y + 1);
        }
    }
    let mut t1 = Vec::new();
    for x in &e.twists1 {
        for y in &g.twists0 {
            t1.push(x + y);
        }
    }
    for x in &e.twists0 {
        for y in &g.twists1 {
            t1.push(x + y);
        }
    }
    TwistedMf::new(e.w.add(&g.w), a, b, t0, t1)
}

/// Tensor product of the rank-one factorizations `([f_i], [T_i])`.
pub fn koszul_twisted(ring: &Ring, f_list: &[Poly]) -> Result<TwistedMf> {
    if f_list.is_empty() {
        return Err(Error::Shape("koszul_twisted needs at least one polynomial".into()));
    }
    if ring.c() != f_list.len() {
        return Err(Error::Shape(format!(
            "{} polynomials but {} auxiliary variables",
            f_list.len(),
            ring.c()
        )));
    }
    let n = ring.n();
    let mut acc: Option<TwistedMf> = None;
    for (i, f) in f_list.iter().enumerate() {
        let f = f.embed(ring)?;
        if f.involves_t() {
            return Err(Error::InvalidMf("f_i must not involve the auxiliary variables".into()));
        }
        let t = Poly::var(ring, n + i);
        let one = TwistedMf::new(
            f.mul(&t),
            PolyMatrix::from_rows(ring, vec![vec![f.clone()]])?,
            PolyMatrix::from_rows(ring, vec![vec![t]])?,
            vec![0],
            vec![0],
        )?;
        acc = Some(match acc {
            None => one,
            Some(prev) => tensor_twisted(&prev, &one)?,
        });
    }
    Ok(acc.expect("nonempty"))
}

/// Substitute `T = a`, landing over the x-variables with potential `Σ a_i f_i`.
pub fn specialize_twisted(e: &TwistedMf, point: &[Rational]) -> Result<MatrixFactorization> {
    if point.iter().all(num_traits::Zero::is_zero) {
        return Err(Error::ZeroPoint);
    }
    let base = e.ring().base();
    let spec = |m: &PolyMatrix| m.try_map(&base, |p| p.specialize_t(point));
    MatrixFactorization::new(e.w.specialize_t(point)?, spec(&e.a)?, spec(&e.b)?)
}

/// Weighted degree of a nonzero homogeneous polynomial.
pub fn weighted_degree(p: &Poly, weights: &[u32]) -> Option<i64> {
    let mut deg = None;
    for (m, _) in p.terms() {
        let d: i64 = m.0.iter().zip(weights).map(|(&e, &w)| i64::from(e) * i64::from(w)).sum();
        match deg {
            None => deg = Some(d),
            Some(x) if x != d => return None,
            _ => {}
        }
    }
    deg
}

/// Internal degrees of the generators of `E0` and `E1` making `A` degree 0 and
/// `B` degree `deg f`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MfGrading {
    pub weights: Vec<u32>,
    pub alpha: Vec<i64>,
    pub beta: Vec<i64>,
    pub deg_f: i64,
}

/// Solve difference constraints `x_v - x_u = delta` over the generator degrees
/// of a bipartite map; one free constant per connected component.
fn solve_shifts(nodes: usize, edges: &[(usize, usize, i64)]) -> Result<Vec<i64>> {
    let mut adj: HashMap<usize, Vec<(usize, i64)>> = HashMap::new();
    for &(u, v, d) in edges {
        adj.entry(u).or_default().push((v, d));
        adj.entry(v).or_default().push((u, -d));
    }
    let mut val: Vec<Option<i64>> = vec![None; nodes];
    for root in 0..nodes {
        if val[root].is_some() {
            continue;
        }
        val[root] = Some(0);
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            let xu = val[u].unwrap();
            for &(v, d) in adj.get(&u).map(Vec::as_slice).unwrap_or(&[]) {
                match val[v] {
                    None => {
                        val[v] = Some(xu + d);
                        queue.push_back(v);
                    }
                    Some(xv) if xv != xu + d => {
                        return Err(Error::NotGraded("inconsistent generator degrees".into()));
                    }
                    _ => {}
                }
            }
        }
    }
    Ok(val.into_iter().map(Option::unwrap).collect())
}

pub fn infer_grading(e: &MatrixFactorization, weights: &[u32]) -> Result<MfGrading> {
    let r = e.rank();
    let deg_f = weighted_degree(&e.f, weights).ok_or_else(|| Error::NotGraded("potential is not quasi-homogeneous".into()))?;
    let mut edges = Vec::new();
    // nodes 0..r are E0 generators, r..2r are E1 generators
    for i in 0..r {
        for j in 0..r {
            let p = e.a.get(i, j);
            if !p.is_zero() {
                let d = weighted_degree(p, weights).ok_or_else(|| Error::NotGraded(format!("A[{i},{j}] is not homogeneous")))?;
                edges.push((i, r + j, d));
            }
            let q = e.b.get(j, i);
            if !q.is_zero() {
                let d = weighted_degree(q, weights).ok_or_else(|| Error::NotGraded(format!("B[{j},{i}] is not homogeneous")))?;
                // alpha_i + deg_f = beta_j + d
                edges.push((r + j, i, d - deg_f));
            }
        }
    }
    let x = solve_shifts(2 * r, &edges)?;
    Ok(MfGrading { weights: weights.to_vec(), alpha: x[..r].to_vec(), beta: x[r..].to_vec(), deg_f })
}

/// Grading data of a 2-periodic complex: the internal degree of every free
/// generator and the degrees of the two differentials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplexGrading {
    pub weights: Vec<u32>,
    pub shifts0: Vec<i64>,
    pub shifts1: Vec<i64>,
    pub deg_d0: i64,
    pub deg_d1: i64,
}

/// `C0 <-D1- C1 <-D0- C0` where each `C_i` is `Q^{r_i}` modulo the submodule
/// generated by `modulus·Q^{r_i}` and the listed relations.
#[derive(Debug, Clone)]
pub struct TwoPeriodicComplex {
    pub modulus: Poly,
    /// `C0 -> C1`
    pub d0: PolyMatrix,
    /// `C1 -> C0`
    pub d1: PolyMatrix,
    pub relations0: Vec<FreeElem>,
    pub relations1: Vec<FreeElem>,
    pub grading: Option<ComplexGrading>,
}

impl TwoPeriodicComplex {
    pub fn ring(&self) -> &Ring {
        self.modulus.ring()
    }

    pub fn rank0(&self) -> usize {
        self.d0.cols()
    }

    pub fn rank1(&self) -> usize {
        self.d1.cols()
    }

    /// Generators of the relation submodule `U_i` of `Q^{r_i}`.
    pub fn relation_module(&self, which: usize) -> Vec<FreeElem> {
        let (r, rel) = if which == 0 { (self.rank0(), &self.relations0) } else { (self.rank1(), &self.relations1) };
        let ring = self.ring();
        let mut gens = rel.clone();
        if !self.modulus.is_zero() {
            for k in 0..r {
                let mut e = FreeElem::zero(ring, r);
                e.components[k] = self.modulus.clone();
                gens.push(e);
            }
        }
        gens
    }

    /// Both compositions vanish modulo the relations.
    pub fn compositions_vanish(&self) -> Result<bool> {
        for (first, second, target) in [(&self.d0, &self.d1, 0), (&self.d1, &self.d0, 1)] {
            let prod = second.mul(first)?;
            let rank = prod.rows();
            let rels = self.relation_module(target);
            if rels.is_empty() {
                if !prod.is_zero() {
                    return Ok(false);
                }
                continue;
            }
            let gb = buchberger_in(self.ring(), rank, &rels, &MonomialOrder::Grevlex, false)?;
            for col in prod.columns() {
                if !gb.contains(&FreeElem::new(col)) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// The zero complex.
    pub fn zero(ring: &Ring) -> TwoPeriodicComplex {
        TwoPeriodicComplex {
            modulus: Poly::zero(ring),
            d0: PolyMatrix::zeros(ring, 0, 0),
            d1: PolyMatrix::zeros(ring, 0, 0),
            relations0: Vec::new(),
            relations1: Vec::new(),
            grading: None,
        }
    }
}

/// The 2-periodic complex of strict morphisms `Hom(E, F)`.
///
/// Even part `Hom(E0,F0) ⊕ Hom(E1,F1)`, odd part `Hom(E0,F1) ⊕ Hom(E1,F0)`,
/// with maps written on column-major vectorizations. The differential squares
/// to zero over `Q` itself, so no modulus is imposed: the homology is the
/// space of morphisms in the homotopy category.
pub fn hom_complex(e: &MatrixFactorization, g: &MatrixFactorization) -> Result<TwoPeriodicComplex> {
    if e.f != g.f {
        return Err(Error::PotentialMismatch);
    }
    let ring = e.ring();
    let (re, rg) = (e.rank(), g.rank());
    if re == 0 || rg == 0 {
        return Ok(TwoPeriodicComplex::zero(ring));
    }
    let ie = PolyMatrix::identity(ring, re);
    let ig = PolyMatrix::identity(ring, rg);
    let left = |m: &PolyMatrix| ie.kron(m);
    let right = |m: &PolyMatrix| m.transpose().kron(&ig);
    // D0(φ0, φ1) = (B_F φ0 - φ1 B_E, A_F φ1 - φ0 A_E)
    let d0 = PolyMatrix::block2(&left(&g.b), &right(&e.b).neg(), &right(&e.a).neg(), &left(&g.a))?;
    // D1(ψ01, ψ10) = (A_F ψ01 + ψ10 B_E, B_F ψ10 + ψ01 A_E)
    let d1 = PolyMatrix::block2(&left(&g.a), &right(&e.b), &right(&e.a), &left(&g.b))?;
    Ok(TwoPeriodicComplex {
        modulus: Poly::zero(ring),
        d0,
        d1,
        relations0: Vec::new(),
        relations1: Vec::new(),
        grading: None,
    })
}

/// `hom_complex` with generator degrees attached.
pub fn hom_complex_graded(e: &MatrixFactorization, g: &MatrixFactorization, weights: &[u32]) -> Result<TwoPeriodicComplex> {
    let mut c = hom_complex(e, g)?;
    if e.rank() == 0 || g.rank() == 0 {
        c.grading = Some(ComplexGrading {
            weights: weights.to_vec(),
            shifts0: vec![],
            shifts1: vec![],
            deg_d0: 0,
            deg_d1: 0,
        });
        return Ok(c);
    }
    let ge = infer_grading(e, weights)?;
    let gg = infer_grading(g, weights)?;
    let d = ge.deg_f;
    let vecs = |src: &[i64], dst: &[i64], off: i64| -> Vec<i64> {
        let mut out = Vec::with_capacity(src.len() * dst.len());
        for s in src {
            for t in dst {
                out.push(t - s - off);
            }
        }
        out
    };
    let mut shifts0 = vecs(&ge.alpha, &gg.alpha, 0);
    shifts0.extend(vecs(&ge.beta, &gg.beta, 0));
    let mut shifts1 = vecs(&ge.alpha, &gg.beta, d);
    shifts1.extend(vecs(&ge.beta, &gg.alpha, 0));
    c.grading = Some(ComplexGrading { weights: weights.to_vec(), shifts0, shifts1, deg_d0: 0, deg_d1: d });
    Ok(c)
}

/// `coker(E) ⊗ N` resolved 2-periodically: `C_i = E_i ⊗ N` with
/// `N = coker(presentation)` over `Q/f`. Even homology is `Tor_even`.
pub fn tor_complex(e: &MatrixFactorization, presentation: &PolyMatrix) -> Result<TwoPeriodicComplex> {
    let ring = e.ring();
    if presentation.ring() != ring {
        return Err(Error::RingMismatch);
    }
    let r = e.rank();
    let m = presentation.rows();
    let im = PolyMatrix::identity(ring, m);
    let rels = |_: ()| -> Vec<FreeElem> {
        let mut out = Vec::new();
        for i in 0..r {
            for col in presentation.columns() {
                let mut v = FreeElem::zero(ring, r * m);
                for (l, p) in col.into_iter().enumerate() {
                    v.components[i * m + l] = p;
                }
                if !v.is_zero() {
                    out.push(v);
                }
            }
        }
        out
    };
    Ok(TwoPeriodicComplex {
        modulus: e.f.clone(),
        d0: e.b.kron(&im),
        d1: e.a.kron(&im),
        relations0: rels(()),
        relations1: rels(()),
        grading: None,
    })
}

/// Degrees `(generators, relations)` making a presentation matrix degree 0.
pub fn presentation_grading(p: &PolyMatrix, weights: &[u32]) -> Result<(Vec<i64>, Vec<i64>)> {
    let (m, k) = (p.rows(), p.cols());
    let mut edges = Vec::new();
    for l in 0..m {
        for j in 0..k {
            let q = p.get(l, j);
            if !q.is_zero() {
                let d = weighted_degree(q, weights).ok_or_else(|| Error::NotGraded(format!("entry ({l},{j}) is not homogeneous")))?;
                edges.push((l, m + j, d));
            }
        }
    }
    let x = solve_shifts(m + k, &edges)?;
    Ok((x[..m].to_vec(), x[m..].to_vec()))
}

pub fn tor_complex_graded(e: &MatrixFactorization, presentation: &PolyMatrix, weights: &[u32]) -> Result<TwoPeriodicComplex> {
    let mut c = tor_complex(e, presentation)?;
    let ge = infer_grading(e, weights)?;
    let (gamma, _) = presentation_grading(presentation, weights)?;
    let combine = |s: &[i64]| -> Vec<i64> { s.iter().flat_map(|a| gamma.iter().map(move |g| a + g)).collect() };
    c.grading = Some(ComplexGrading {
        weights: weights.to_vec(),
        shifts0: combine(&ge.alpha),
        shifts1: combine(&ge.beta),
        deg_d0: ge.deg_f,
        deg_d1: 0,
    });
    Ok(c)
}

/// A factorization recovered from a periodic resolution, with the index `s`
/// such that its cokernel is the `s`-th syzygy of the input module.
#[derive(Debug, Clone)]
pub struct PeriodicMf {
    pub mf: MatrixFactorization,
    pub syzygy_index: usize,
}

/// Irredundant generators of `{v : D v ∈ g·Q^m}` modulo `g·Q^k`.
fn kernel_mod(d: &PolyMatrix, g: &Poly) -> Result<Vec<FreeElem>> {
    let ring = d.ring();
    let (m, k) = (d.rows(), d.cols());
    let mut cols: Vec<FreeElem> = d.columns().into_iter().map(FreeElem::new).collect();
    for l in 0..m {
        let mut e = FreeElem::zero(ring, m);
        e.components[l] = g.clone();
        cols.push(e);
    }
    let g_gb = ideal_gb(ring, std::slice::from_ref(g), &MonomialOrder::Grevlex)?;
    let mut gens: Vec<FreeElem> = syzygies_of(ring, m, &cols)?
        .into_iter()
        .map(|s| FreeElem::new(s.components[..k].iter().map(|p| g_gb.normal_form_poly(p)).collect()))
        .filter(|v| !v.is_zero())
        .collect();
    prune(ring, k, g, &mut gens)?;
    Ok(gens)
}

/// Drop generators lying in the span of the others plus `g·Q^k`.
fn prune(ring: &Ring, k: usize, g: &Poly, gens: &mut Vec<FreeElem>) -> Result<()> {
    let gk: Vec<FreeElem> = (0..k)
        .map(|l| {
            let mut e = FreeElem::zero(ring, k);
            e.components[l] = g.clone();
            e
        })
        .collect();
    // try removing high-degree generators first
    gens.sort_by_key(|v| std::cmp::Reverse(v.components.iter().filter_map(|p| p.terms().map(|(m, _)| m.total_degree()).max()).max()));
    let mut i = 0;
    while i < gens.len() {
        let others: Vec<FreeElem> = gens.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, v)| v.clone()).chain(gk.iter().cloned()).collect();
        let gb = buchberger_in(ring, k, &others, &MonomialOrder::Grevlex, false)?;
        if gb.contains(&gens[i]) {
            gens.remove(i);
        } else {
            i += 1;
        }
    }
    gens.reverse();
    Ok(())
}

/// Resolve `coker(presentation)` over `Q/g` until two consecutive square
/// differentials multiply to `g` times a unimodular matrix.
pub fn eisenbud_periodic_mf(presentation: &PolyMatrix, g: &Poly, max_steps: usize) -> Result<PeriodicMf> {
    let ring = presentation.ring();
    if g.ring() != ring {
        return Err(Error::RingMismatch);
    }
    let mut d = presentation.clone();
    if d.cols() == 0 {
        return Ok(PeriodicMf { mf: MatrixFactorization::zero(g.clone()), syzygy_index: 0 });
    }
    for step in 1..=max_steps {
        let ker = kernel_mod(&d, g)?;
        if ker.is_empty() {
            // finite projective dimension: the module is free up to this syzygy
            return Ok(PeriodicMf { mf: MatrixFactorization::zero(g.clone()), syzygy_index: 0 });
        }
        let cols: Vec<Vec<Poly>> = ker.into_iter().map(|v| v.components).collect();
        let next = PolyMatrix::from_columns(ring, d.cols(), &cols);
        if d.is_square() && next.is_square() && next.rows() == d.rows() {
            let prod = d.mul(&next)?;
            let c = prod.try_map(ring, |p| p.div_exact(g).ok_or(Error::NotInSubmodule));
            if let Ok(c) = c {
                if let Some(c_inv) = c.inverse_if_unimodular()? {
                    let mf = MatrixFactorization::new(g.clone(), d, next.mul(&c_inv)?)?;
                    return Ok(PeriodicMf { mf, syzygy_index: step - 1 });
                }
            }
        }
        d = next;
    }
    Err(Error::NoPeriodicityWithinBound(max_steps))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;
    use crate::poly::rat;

    fn ring(names: &[&str]) -> Ring {
        Ring::new(names, &[]).unwrap()
    }

    fn p(s: &str, r: &Ring) -> Poly {
        parse_poly(s, r).unwrap()
    }

    fn mat(r: &Ring, rows: &[&[&str]]) -> PolyMatrix {
        PolyMatrix::from_rows(r, rows.iter().map(|row| row.iter().map(|s| p(s, r)).collect()).collect()).unwrap()
    }

    #[test]
    fn validation_examples() {
        let r = ring(&["x", "y"]);
        let node = MatrixFactorization::new_unchecked(p("x*y", &r), mat(&r, &[&["x"]]), mat(&r, &[&["y"]]));
        assert!(node.validate().unwrap().ok());
        let q = MatrixFactorization::new_unchecked(
            p("x^2+y^2", &r),
            mat(&r, &[&["x", "-y"], &["y", "x"]]),
            mat(&r, &[&["x", "y"], &["-y", "x"]]),
        );
        assert!(q.validate().unwrap().ok());
        let bad = MatrixFactorization::new_unchecked(p("x+y", &r), mat(&r, &[&["x"]]), mat(&r, &[&["y"]]));
        let v = bad.validate().unwrap().violation.unwrap();
        assert_eq!((v.row, v.col), (0, 0));
    }

    #[test]
    fn koszul_and_tensor() {
        let r = ring(&["x", "y", "z", "w"]);
        let e = koszul_mf(&[(p("x", &r), p("y", &r))]).unwrap();
        assert_eq!(e.a(), &mat(&r, &[&["x"]]));
        let q = koszul_mf(&[(p("x", &r), p("x", &r)), (p("y", &r), p("y", &r))]).unwrap();
        assert_eq!(q.rank(), 2);
        assert_eq!(q.potential(), &p("x^2+y^2", &r));
        assert!(q.validate().unwrap().ok());
        let t = koszul_mf(&[(p("x", &r), p("y", &r)), (p("y", &r), p("x", &r))]).unwrap();
        assert_eq!(t.potential(), &p("2*x*y", &r));
        let xy = koszul_mf(&[(p("x", &r), p("y", &r))]).unwrap();
        let zw = koszul_mf(&[(p("z", &r), p("w", &r))]).unwrap();
        let s = tensor(&xy, &zw).unwrap();
        assert!(s.validate().unwrap().ok());
        assert_eq!(s.potential(), &p("x*y+z*w", &r));
        let z = tensor(&xy, &MatrixFactorization::zero(p("0", &r))).unwrap();
        assert_eq!(z.rank(), 0);
        let big = tensor(&q, &tensor(&q, &q).unwrap()).unwrap();
        assert_eq!(big.rank(), 32);
        assert!(big.validate().unwrap().ok());
    }

    #[test]
    fn dual_and_shift() {
        let r = ring(&["x", "y"]);
        let e = koszul_mf(&[(p("x", &r), p("y", &r))]).unwrap();
        let d = dual(&e);
        assert_eq!(d.potential(), &p("-x*y", &r));
        assert_eq!(d.a(), &mat(&r, &[&["-y"]]));
        assert_eq!(d.b(), &mat(&r, &[&["x"]]));
        assert!(d.validate().unwrap().ok());
        let s = shift(&e);
        assert_eq!((s.a(), s.b()), (&mat(&r, &[&["-y"]]), &mat(&r, &[&["-x"]])));
        let q = koszul_mf(&[(p("x", &r), p("x+y", &r)), (p("y", &r), p("y^2", &r))]).unwrap();
        let dd = dual(&dual(&q));
        // dual∘dual is conjugation by (I, -I)
        let i = PolyMatrix::identity(&r, 2);
        let back = conjugate(&q, &i, &i, &i.neg(), &i.neg()).unwrap();
        assert_eq!(dd, back);
        let sum = direct_sum(&q, &shift(&q)).unwrap();
        assert_eq!(dual(&sum), direct_sum(&dual(&q), &dual(&shift(&q))).unwrap());
    }

    #[test]
    fn hom_complex_squares_to_zero() {
        let r = ring(&["x", "y"]);
        let e = koszul_mf(&[(p("x", &r), p("y", &r))]).unwrap();
        let c = hom_complex(&e, &e).unwrap();
        assert!(c.compositions_vanish().unwrap());
        // the identity (φ0, φ1) = (1, 1) is a cycle
        let id = c.d0.mul_vec(&[p("1", &r), p("1", &r)]).unwrap();
        assert!(id.iter().all(Poly::is_zero));
        let q = koszul_mf(&[(p("x", &r), p("x", &r)), (p("y", &r), p("y", &r))]).unwrap();
        let c = hom_complex(&q, &shift(&q)).unwrap();
        assert!(c.d1.mul(&c.d0).unwrap().is_zero());
        assert!(c.d0.mul(&c.d1).unwrap().is_zero());
    }

    #[test]
    fn gradings() {
        let r = ring(&["x", "y"]);
        let q = koszul_mf(&[(p("x", &r), p("x", &r)), (p("y", &r), p("y^5", &r))]).unwrap();
        let g = infer_grading(&q, &[3, 1]).unwrap();
        assert_eq!(g.deg_f, 6);
        for i in 0..2 {
            for j in 0..2 {
                if let Some(d) = weighted_degree(q.a().get(i, j), &[3, 1]) {
                    assert_eq!(g.beta[j] - g.alpha[i], d);
                }
            }
        }
        let bad = koszul_mf(&[(p("x", &r), p("x+y^2", &r))]).unwrap();
        assert!(matches!(infer_grading(&bad, &[1, 1]), Err(Error::NotGraded(_))));
    }

    #[test]
    fn twisted_koszul() {
        let r = Ring::new(&["x", "y"], &["T1", "T2"]).unwrap();
        let f1 = p("x^2", &r);
        let f2 = p("y^2", &r);
        let k = koszul_twisted(&r, &[f1.clone()][..]).err();
        assert!(k.is_some());
        let e = koszul_twisted(&r, &[f1, f2]).unwrap();
        assert_eq!(e.rank(), 2);
        assert_eq!(e.a(), &mat(&r, &[&["x^2", "y^2"], &["-T2", "T1"]]));
        assert!(e.validate().unwrap().ok());
        let s = specialize_twisted(&e, &[rat(1), rat(0)]).unwrap();
        assert_eq!(s.potential(), &p("x^2", &r.base()));
        let s = specialize_twisted(&e, &[rat(2), rat(3)]).unwrap();
        assert_eq!(s.potential(), &p("2*x^2 + 3*y^2", &r.base()));
        assert_eq!(specialize_twisted(&e, &[rat(0), rat(0)]), Err(Error::ZeroPoint));
        let sq = tensor_twisted(&e, &e).unwrap();
        assert_eq!(sq.rank(), 8);
        assert!(sq.validate().unwrap().ok());
    }

    #[test]
    fn periodic_resolutions() {
        let r = ring(&["x", "y"]);
        let pm = eisenbud_periodic_mf(&mat(&r, &[&["x"]]), &p("x*y", &r), 6).unwrap();
        assert_eq!(pm.syzygy_index, 0);
        assert_eq!(pm.mf.a(), &mat(&r, &[&["x"]]));
        assert_eq!(pm.mf.b(), &mat(&r, &[&["y"]]));
        let pm = eisenbud_periodic_mf(&mat(&r, &[&["x", "y"]]), &p("x^2+y^2", &r), 6).unwrap();
        assert_eq!(pm.syzygy_index, 1);
        assert_eq!(pm.mf.rank(), 2);
        assert!(pm.mf.validate().unwrap().ok());
        let free = PolyMatrix::zeros(&r, 1, 0);
        assert_eq!(eisenbud_periodic_mf(&free, &p("x*y", &r), 4).unwrap().mf.rank(), 0);
    }

    #[test]
    fn tor_complex_node() {
        let r = ring(&["x", "y"]);
        let e = koszul_mf(&[(p("x", &r), p("y", &r))]).unwrap();
        let c = tor_complex_graded(&e, &mat(&r, &[&["x"]]), &[1, 1]).unwrap();
        assert!(c.compositions_vanish().unwrap());
        assert_eq!(c.grading.unwrap().deg_d0, 2);
    }
}
