//! Buchberger's algorithm for ideals and submodules of free modules.
//!
//! Module elements are ordered position-over-term: a term in component `i`
//! is larger than any term in component `j > i`, and terms in the same
//! component compare by the monomial order. Syzygies and cofactor tracking
//! both use the same device: generators are augmented with unit tag vectors
//! and the elimination property of the position-over-term order separates
//! the image part from the tag part.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::matrix::PolyMatrix;
use crate::poly::{Monomial, MonomialOrder, Poly, Rational, Ring};

/// Element of a free module `Q^s`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreeElem {
    pub components: Vec<Poly>,
}

impl FreeElem {
    pub fn new(components: Vec<Poly>) -> FreeElem {
        FreeElem { components }
    }

    pub fn zero(ring: &Ring, s: usize) -> FreeElem {
        FreeElem { components: vec![Poly::zero(ring); s] }
    }

    pub fn unit(ring: &Ring, s: usize, i: usize) -> FreeElem {
        let mut e = FreeElem::zero(ring, s);
        e.components[i] = Poly::one(ring);
        e
    }

    pub fn scalar(p: Poly) -> FreeElem {
        FreeElem { components: vec![p] }
    }

    pub fn rank(&self) -> usize {
        self.components.len()
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Poly::is_zero)
    }

    pub fn add(&self, other: &FreeElem) -> FreeElem {
        FreeElem { components: self.components.iter().zip(&other.components).map(|(a, b)| a.add(b)).collect() }
    }

    pub fn sub(&self, other: &FreeElem) -> FreeElem {
        FreeElem { components: self.components.iter().zip(&other.components).map(|(a, b)| a.sub(b)).collect() }
    }

    pub fn scale_poly(&self, p: &Poly) -> FreeElem {
        FreeElem { components: self.components.iter().map(|a| a.mul(p)).collect() }
    }

    pub fn scale(&self, c: &Rational) -> FreeElem {
        FreeElem { components: self.components.iter().map(|a| a.scale(c)).collect() }
    }
}

type Key = Vec<i64>;

/// Encodes (component, exponent) pairs as lexicographically comparable keys.
#[derive(Debug, Clone)]
struct KeyCodec {
    order: MonomialOrder,
    nvars: usize,
}

impl KeyCodec {
    fn key(&self, comp: usize, e: &[u32]) -> Key {
        let n = self.nvars;
        let mut k = Vec::with_capacity(n + 2);
        k.push(-(comp as i64));
        match &self.order {
            MonomialOrder::Lex => k.extend(e.iter().map(|&x| i64::from(x))),
            MonomialOrder::Grevlex => {
                k.push(e.iter().map(|&x| i64::from(x)).sum());
                k.extend(e.iter().rev().map(|&x| -i64::from(x)));
            }
            MonomialOrder::WeightedGrevlex(w) => {
                k.push(
                    e.iter()
                        .enumerate()
                        .map(|(i, &x)| i64::from(*w.get(i).unwrap_or(&1)) * i64::from(x))
                        .sum(),
                );
                k.extend(e.iter().rev().map(|&x| -i64::from(x)));
            }
        }
        k
    }

    fn decode(&self, k: &Key) -> (usize, Vec<u32>) {
        let comp = (-k[0]) as usize;
        let n = self.nvars;
        let e = match &self.order {
            MonomialOrder::Lex => k[1..].iter().map(|&x| x as u32).collect(),
            _ => (0..n).map(|i| (-k[2 + (n - 1 - i)]) as u32).collect(),
        };
        (comp, e)
    }

    fn shift(k: &Key, s: &Key) -> Key {
        k.iter().zip(s).map(|(a, b)| a + b).collect()
    }
}

#[derive(Debug, Clone, Default)]
struct MElem {
    terms: BTreeMap<Key, Rational>,
}

impl MElem {
    fn lead(&self) -> Option<(&Key, &Rational)> {
        self.terms.last_key_value()
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, k: Key, c: Rational) {
        use std::collections::btree_map::Entry;
        if c.is_zero() {
            return;
        }
        match self.terms.entry(k) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let s = o.get() + c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    fn make_monic(&mut self) {
        if let Some((_, lc)) = self.lead() {
            if !lc.is_one() {
                let inv = Rational::one() / lc.clone();
                for c in self.terms.values_mut() {
                    *c *= &inv;
                }
            }
        }
    }

    /// `self -= c * shift * g`, skipping the leading term of `g` when `skip_lead`.
    fn sub_multiple(&mut self, g: &MElem, shift: &Key, c: &Rational, skip_lead: bool) {
        let mut it = g.terms.iter().rev();
        if skip_lead {
            it.next();
        }
        for (k, x) in it {
            self.add_term(KeyCodec::shift(k, shift), -(c * x));
        }
    }
}

struct Lead {
    comp: usize,
    exps: Vec<u32>,
}

struct Engine {
    codec: KeyCodec,
}

impl Engine {
    fn lead_of(&self, g: &MElem) -> Lead {
        let (comp, exps) = self.codec.decode(g.lead().expect("nonzero").0);
        Lead { comp, exps }
    }

    fn find_divisor(&self, comp: usize, e: &[u32], basis: &[MElem], leads: &[Lead], active: &[bool]) -> Option<usize> {
        (0..basis.len()).find(|&i| {
            active[i] && leads[i].comp == comp && leads[i].exps.iter().zip(e).all(|(a, b)| a <= b)
        })
    }

    /// Full reduction. Returns the remainder.
    fn reduce(&self, f: MElem, basis: &[MElem], leads: &[Lead], active: &[bool]) -> MElem {
        let mut f = f;
        let mut rem = MElem::default();
        while let Some((k, c)) = f.terms.pop_last() {
            let (comp, e) = self.codec.decode(&k);
            match self.find_divisor(comp, &e, basis, leads, active) {
                Some(i) => {
                    let q: Vec<u32> = e.iter().zip(&leads[i].exps).map(|(a, b)| a - b).collect();
                    let shift = self.codec.key(0, &q);
                    let lc = basis[i].lead().unwrap().1;
                    let coef = &c / lc;
                    f.sub_multiple(&basis[i], &shift, &coef, true);
                }
                None => {
                    rem.terms.insert(k, c);
                }
            }
        }
        rem
    }

    /// Reduce leading terms only while they lie in components `< stop_comp`.
    fn top_reduce_below(&self, f: MElem, basis: &[MElem], leads: &[Lead], stop_comp: usize) -> MElem {
        let active = vec![true; basis.len()];
        let mut f = f;
        loop {
            let Some((k, c)) = f.lead().map(|(k, c)| (k.clone(), c.clone())) else { return f };
            let (comp, e) = self.codec.decode(&k);
            if comp >= stop_comp {
                return f;
            }
            let Some(i) = self.find_divisor(comp, &e, basis, leads, &active) else { return f };
            let q: Vec<u32> = e.iter().zip(&leads[i].exps).map(|(a, b)| a - b).collect();
            let shift = self.codec.key(0, &q);
            let coef = &c / basis[i].lead().unwrap().1;
            f.terms.pop_last();
            f.sub_multiple(&basis[i], &shift, &coef, true);
        }
    }

    fn spoly(&self, a: &MElem, la: &Lead, b: &MElem, lb: &Lead) -> MElem {
        let l: Vec<u32> = la.exps.iter().zip(&lb.exps).map(|(x, y)| *x.max(y)).collect();
        let qa: Vec<u32> = l.iter().zip(&la.exps).map(|(x, y)| x - y).collect();
        let qb: Vec<u32> = l.iter().zip(&lb.exps).map(|(x, y)| x - y).collect();
        let ca = a.lead().unwrap().1;
        let cb = b.lead().unwrap().1;
        let mut s = MElem::default();
        let sa = self.codec.key(0, &qa);
        let sb = self.codec.key(0, &qb);
        for (k, x) in a.terms.iter().rev().skip(1) {
            s.add_term(KeyCodec::shift(k, &sa), x / ca);
        }
        for (k, x) in b.terms.iter().rev().skip(1) {
            s.add_term(KeyCodec::shift(k, &sb), -(x / cb));
        }
        s
    }

    fn buchberger(&self, gens: Vec<MElem>, ideal_like: bool) -> Vec<MElem> {
        let mut basis: Vec<MElem> = Vec::new();
        let mut leads: Vec<Lead> = Vec::new();
        let mut active: Vec<bool> = Vec::new();
        // pairs keyed by (lcm key, i, j); the smallest lcm is processed first
        let mut pairs: BTreeSet<(Key, usize, usize)> = BTreeSet::new();

        let lcm_of = |a: &Lead, b: &Lead| -> Vec<u32> { a.exps.iter().zip(&b.exps).map(|(x, y)| *x.max(y)).collect() };

        let insert = |h: MElem,
                          basis: &mut Vec<MElem>,
                          leads: &mut Vec<Lead>,
                          active: &mut Vec<bool>,
                          pairs: &mut BTreeSet<(Key, usize, usize)>| {
            let lh = self.lead_of(&h);
            let hidx = basis.len();
            // Gebauer-Moller update
            let cands: Vec<usize> = (0..basis.len()).filter(|&g| active[g] && leads[g].comp == lh.comp).collect();
            let lcms: Vec<Vec<u32>> = cands.iter().map(|&g| lcm_of(&leads[g], &lh)).collect();
            let coprime =
                |g: usize| -> bool { ideal_like && leads[g].exps.iter().zip(&lh.exps).all(|(a, b)| *a == 0 || *b == 0) };
            let mut keep = vec![true; cands.len()];
            for a in 0..cands.len() {
                if coprime(cands[a]) {
                    continue;
                }
                for b in 0..cands.len() {
                    if a == b || !keep[b] {
                        continue;
                    }
                    let divides = lcms[b].iter().zip(&lcms[a]).all(|(x, y)| x <= y);
                    if divides && (lcms[b] != lcms[a] || b < a) {
                        keep[a] = false;
                        break;
                    }
                }
            }
            let new_pairs: Vec<(Key, usize, usize)> = (0..cands.len())
                .filter(|&a| keep[a] && !coprime(cands[a]))
                .map(|a| (self.codec.key(lh.comp, &lcms[a]), cands[a], hidx))
                .collect();
            // criterion B on old pairs
            let lhk = &lh.exps;
            pairs.retain(|(lk, i, j)| {
                let (comp, l) = self.codec.decode(lk);
                if comp != lh.comp || !lhk.iter().zip(&l).all(|(a, b)| a <= b) {
                    return true;
                }
                let li = lcm_of(&leads[*i], &lh);
                let lj = lcm_of(&leads[*j], &lh);
                li == l || lj == l
            });
            pairs.extend(new_pairs);
            for g in 0..basis.len() {
                if active[g] && leads[g].comp == lh.comp && lh.exps.iter().zip(&leads[g].exps).all(|(a, b)| a <= b) {
                    active[g] = false;
                }
            }
            basis.push(h);
            leads.push(lh);
            active.push(true);
        };

        for g in gens {
            let mut h = self.reduce(g, &basis, &leads, &active);
            if !h.is_zero() {
                h.make_monic();
                insert(h, &mut basis, &mut leads, &mut active, &mut pairs);
            }
        }
        while let Some(p) = pairs.pop_first() {
            let (_, i, j) = p;
            let s = self.spoly(&basis[i], &leads[i], &basis[j], &leads[j]);
            let all = vec![true; basis.len()];
            let mut h = self.reduce(s, &basis, &leads, &all);
            if !h.is_zero() {
                h.make_monic();
                insert(h, &mut basis, &mut leads, &mut active, &mut pairs);
            }
        }
        self.interreduce(basis, &active)
    }

    fn interreduce(&self, basis: Vec<MElem>, active: &[bool]) -> Vec<MElem> {
        let mut kept: Vec<MElem> = basis.into_iter().zip(active).filter(|(_, a)| **a).map(|(g, _)| g).collect();
        // drop elements whose lead is divisible by another lead
        let leads: Vec<Lead> = kept.iter().map(|g| self.lead_of(g)).collect();
        let mut keep = vec![true; kept.len()];
        for a in 0..kept.len() {
            for b in 0..kept.len() {
                if a == b || !keep[b] {
                    continue;
                }
                if leads[a].comp == leads[b].comp && leads[b].exps.iter().zip(&leads[a].exps).all(|(x, y)| x <= y) {
                    keep[a] = false;
                    break;
                }
            }
        }
        kept = kept.into_iter().zip(keep).filter(|(_, k)| *k).map(|(g, _)| g).collect();
        let leads: Vec<Lead> = kept.iter().map(|g| self.lead_of(g)).collect();
        let n = kept.len();
        for i in 0..n {
            let mut g = std::mem::take(&mut kept[i]);
            let (lk, lc) = g.terms.pop_last().unwrap();
            let mut mask = vec![true; n];
            mask[i] = false;
            let mut tail = self.reduce(g, &kept, &leads, &mask);
            tail.terms.insert(lk, lc);
            tail.make_monic();
            kept[i] = tail;
        }
        kept.sort_by(|a, b| a.lead().unwrap().0.cmp(b.lead().unwrap().0));
        kept
    }
}

fn to_melem(codec: &KeyCodec, e: &FreeElem, offset: usize) -> MElem {
    let mut m = MElem::default();
    for (i, p) in e.components.iter().enumerate() {
        for (mono, c) in p.terms() {
            m.terms.insert(codec.key(i + offset, mono.exps()), c.clone());
        }
    }
    m
}

fn from_melem(codec: &KeyCodec, ring: &Ring, m: &MElem, lo: usize, hi: usize) -> FreeElem {
    let mut comps = vec![Poly::zero(ring); hi - lo];
    for (k, c) in &m.terms {
        let (comp, e) = codec.decode(k);
        if comp >= lo && comp < hi {
            comps[comp - lo].add_term(Monomial(e), c.clone());
        }
    }
    FreeElem { components: comps }
}

/// A reduced Gröbner basis of a submodule of `Q^rank`.
#[derive(Debug, Clone)]
pub struct GroebnerBasis {
    ring: Ring,
    order: MonomialOrder,
    rank: usize,
    generators: Vec<FreeElem>,
    transformation: Option<Vec<Vec<Poly>>>,
    codec: KeyCodec,
    internal: Vec<MElem>,
    augmented: Option<Vec<MElem>>,
}

impl GroebnerBasis {
    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn generators(&self) -> &[FreeElem] {
        &self.generators
    }

    pub fn is_reduced(&self) -> bool {
        true
    }

    /// Row `i` expresses `generators()[i]` in the original generators.
    pub fn transformation(&self) -> Option<&[Vec<Poly>]> {
        self.transformation.as_deref()
    }

    /// Ideal case: generators as polynomials.
    pub fn polys(&self) -> Vec<Poly> {
        self.generators.iter().map(|g| g.components[0].clone()).collect()
    }

    pub fn is_unit(&self) -> bool {
        self.rank == 1 && self.leading_monomials().iter().any(|(_, m)| m.is_one())
    }

    /// Leading (component, monomial) pairs.
    pub fn leading_monomials(&self) -> Vec<(usize, Monomial)> {
        self.internal
            .iter()
            .map(|g| {
                let (c, e) = self.codec.decode(g.lead().unwrap().0);
                (c, Monomial(e))
            })
            .collect()
    }

    fn engine(&self) -> Engine {
        Engine { codec: self.codec.clone() }
    }

    fn leads(&self, elems: &[MElem]) -> Vec<Lead> {
        let e = self.engine();
        elems.iter().map(|g| e.lead_of(g)).collect()
    }

    /// Remainder with no term divisible by a leading term.
    pub fn normal_form(&self, e: &FreeElem) -> FreeElem {
        let eng = self.engine();
        let leads = self.leads(&self.internal);
        let active = vec![true; self.internal.len()];
        let r = eng.reduce(to_melem(&self.codec, e, 0), &self.internal, &leads, &active);
        from_melem(&self.codec, &self.ring, &r, 0, self.rank)
    }

    pub fn normal_form_poly(&self, p: &Poly) -> Poly {
        self.normal_form(&FreeElem::scalar(p.clone())).components.swap_remove(0)
    }

    pub fn contains(&self, e: &FreeElem) -> bool {
        self.normal_form(e).is_zero()
    }

    /// Every S-pair reduces to zero.
    pub fn s_pairs_reduce_to_zero(&self) -> bool {
        let eng = self.engine();
        let leads = self.leads(&self.internal);
        let active = vec![true; self.internal.len()];
        for i in 0..self.internal.len() {
            for j in i + 1..self.internal.len() {
                if leads[i].comp != leads[j].comp {
                    continue;
                }
                let s = eng.spoly(&self.internal[i], &leads[i], &self.internal[j], &leads[j]);
                if !eng.reduce(s, &self.internal, &leads, &active).is_zero() {
                    return false;
                }
            }
        }
        true
    }
}

/// Gröbner basis of the submodule generated by `gens` inside `Q^rank`.
pub fn buchberger_in(
    ring: &Ring,
    rank: usize,
    gens: &[FreeElem],
    order: &MonomialOrder,
    track_transformation: bool,
) -> Result<GroebnerBasis> {
    for g in gens {
        if g.rank() != rank {
            return Err(Error::Shape("generators live in different free modules".into()));
        }
        if g.components.iter().any(|p| p.ring() != ring) {
            return Err(Error::RingMismatch);
        }
    }
    let codec = KeyCodec { order: order.clone(), nvars: ring.arity() };
    let eng = Engine { codec: codec.clone() };
    let ideal_like = rank == 1 && !track_transformation;
    if !track_transformation {
        let internal = eng.buchberger(gens.iter().map(|g| to_melem(&codec, g, 0)).collect(), ideal_like);
        let generators = internal.iter().map(|m| from_melem(&codec, ring, m, 0, rank)).collect();
        return Ok(GroebnerBasis {
            ring: ring.clone(),
            order: order.clone(),
            rank,
            generators,
            transformation: None,
            codec,
            internal,
            augmented: None,
        });
    }
    let t = gens.len();
    let aug: Vec<MElem> = gens
        .iter()
        .enumerate()
        .map(|(j, g)| {
            let mut m = to_melem(&codec, g, 0);
            m.terms.insert(codec.key(rank + j, &vec![0; ring.arity()]), Rational::one());
            m
        })
        .collect();
    let full = eng.buchberger(aug, false);
    let mut internal = Vec::new();
    let mut generators = Vec::new();
    let mut transformation = Vec::new();
    let mut augmented = Vec::new();
    for m in full {
        let (comp, _) = codec.decode(m.lead().unwrap().0);
        if comp < rank {
            let mut img = MElem::default();
            for (k, c) in &m.terms {
                if codec.decode(k).0 < rank {
                    img.terms.insert(k.clone(), c.clone());
                }
            }
            generators.push(from_melem(&codec, ring, &m, 0, rank));
            transformation.push(from_melem(&codec, ring, &m, rank, rank + t).components);
            internal.push(img);
            augmented.push(m);
        }
    }
    Ok(GroebnerBasis {
        ring: ring.clone(),
        order: order.clone(),
        rank,
        generators,
        transformation: Some(transformation),
        codec,
        internal,
        augmented: Some(augmented),
    })
}

/// Gröbner basis of a nonempty list of generators.
pub fn buchberger(gens: &[FreeElem], order: &MonomialOrder, track_transformation: bool) -> Result<GroebnerBasis> {
    let first = gens.first().ok_or_else(|| Error::Shape("no generators".into()))?;
    let ring = first
        .components
        .first()
        .ok_or_else(|| Error::Shape("generators of rank zero".into()))?
        .ring()
        .clone();
    buchberger_in(&ring, first.rank(), gens, order, track_transformation)
}

/// Gröbner basis of an ideal (grevlex unless stated).
pub fn ideal_gb(ring: &Ring, polys: &[Poly], order: &MonomialOrder) -> Result<GroebnerBasis> {
    let gens: Vec<FreeElem> = polys.iter().map(|p| FreeElem::scalar(p.clone())).collect();
    buchberger_in(ring, 1, &gens, order, false)
}

pub fn normal_form(e: &FreeElem, gb: &GroebnerBasis) -> FreeElem {
    gb.normal_form(e)
}

/// Cofactors `c` with `e = sum c_i gens_i`, using a basis built with tracking.
pub fn lift_cofactors(e: &FreeElem, gb: &GroebnerBasis) -> Result<Vec<Poly>> {
    let aug = gb
        .augmented
        .as_ref()
        .ok_or_else(|| Error::Shape("Gröbner basis was built without a transformation".into()))?;
    let t = gb.transformation.as_ref().map_or(0, |t| t.first().map_or(0, Vec::len));
    let eng = gb.engine();
    let leads = gb.leads(aug);
    let r = eng.top_reduce_below(to_melem(&gb.codec, e, 0), aug, &leads, gb.rank);
    let img = from_melem(&gb.codec, &gb.ring, &r, 0, gb.rank);
    if !img.is_zero() {
        return Err(Error::NotInSubmodule);
    }
    // the tag part of the trivial number of generators; zero module edge case
    let tags = from_melem(&gb.codec, &gb.ring, &r, gb.rank, gb.rank + t);
    Ok(tags.components.into_iter().map(|p| p.neg()).collect())
}

/// Generators of the kernel of `m : Q^cols -> Q^rows`.
pub fn syzygies(m: &PolyMatrix) -> Result<Vec<FreeElem>> {
    let ring = m.ring().clone();
    let cols: Vec<FreeElem> = m.columns().into_iter().map(FreeElem::new).collect();
    syzygies_of(&ring, m.rows(), &cols)
}

/// Generators of the syzygy module of a list of elements of `Q^rank`.
pub fn syzygies_of(ring: &Ring, rank: usize, gens: &[FreeElem]) -> Result<Vec<FreeElem>> {
    let t = gens.len();
    if t == 0 {
        return Ok(Vec::new());
    }
    let codec = KeyCodec { order: MonomialOrder::Grevlex, nvars: ring.arity() };
    let eng = Engine { codec: codec.clone() };
    let aug: Vec<MElem> = gens
        .iter()
        .enumerate()
        .map(|(j, g)| {
            let mut m = to_melem(&codec, g, 0);
            m.terms.insert(codec.key(rank + j, &vec![0; ring.arity()]), Rational::one());
            m
        })
        .collect();
    let full = eng.buchberger(aug, false);
    Ok(full
        .iter()
        .filter(|m| codec.decode(m.lead().unwrap().0).0 >= rank)
        .map(|m| from_melem(&codec, ring, m, rank, rank + t))
        .collect())
}

/// Dimension of the affine vanishing locus (`-1` for the unit ideal).
pub fn krull_dimension(ideal: &GroebnerBasis) -> i64 {
    let nv = ideal.ring.arity();
    let leads: Vec<Monomial> = ideal.leading_monomials().into_iter().map(|(_, m)| m).collect();
    if leads.iter().any(Monomial::is_one) {
        return -1;
    }
    let mut best = 0i64;
    for mask in 0u64..(1u64 << nv) {
        let size = mask.count_ones() as i64;
        if size <= best {
            continue;
        }
        let independent = leads.iter().all(|m| m.0.iter().enumerate().any(|(i, &e)| e > 0 && mask & (1 << i) == 0));
        if independent {
            best = size;
        }
    }
    best
}

/// Standard monomials of `Q^rank / M`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StandardMonomialBasis {
    /// (component, monomial); for ideals the component is always 0.
    pub monomials: Vec<(usize, Monomial)>,
    pub finite: bool,
}

impl StandardMonomialBasis {
    pub fn dimension(&self) -> usize {
        self.monomials.len()
    }
}

/// Enumerate the standard monomials. For infinite quotients, `bound` caps the
/// total degree of the listed monomials (nothing is listed without one).
pub fn standard_monomials(gb: &GroebnerBasis, bound: Option<u32>) -> StandardMonomialBasis {
    let nv = gb.ring.arity();
    let leads = gb.leading_monomials();
    let mut out = Vec::new();
    let mut finite = true;
    for comp in 0..gb.rank {
        let ls: Vec<&Monomial> = leads.iter().filter(|(c, _)| *c == comp).map(|(_, m)| m).collect();
        let mut caps = vec![u32::MAX; nv];
        for m in &ls {
            let nz: Vec<usize> = (0..nv).filter(|&i| m.0[i] > 0).collect();
            if nz.is_empty() {
                caps = vec![0; nv];
            } else if nz.len() == 1 {
                caps[nz[0]] = caps[nz[0]].min(m.0[nz[0]]);
            }
        }
        if caps.iter().all(|&c| c == 0) && ls.iter().any(|m| m.is_one()) {
            continue;
        }
        let comp_finite = caps.iter().all(|&c| c != u32::MAX);
        if !comp_finite {
            finite = false;
        }
        let limit = if comp_finite { None } else { bound };
        if !comp_finite && limit.is_none() {
            continue;
        }
        let mut cur = vec![0u32; nv];
        enumerate_box(0, &caps, limit, 0, &mut cur, &ls, comp, &mut out);
    }
    out.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| MonomialOrder::Grevlex.cmp(&a.1, &b.1)));
    StandardMonomialBasis { monomials: out, finite }
}

#[allow(clippy::too_many_arguments)]
fn enumerate_box(
    i: usize,
    caps: &[u32],
    limit: Option<u32>,
    deg: u32,
    cur: &mut Vec<u32>,
    leads: &[&Monomial],
    comp: usize,
    out: &mut Vec<(usize, Monomial)>,
) {
    if i == caps.len() {
        let m = Monomial(cur.clone());
        if !leads.iter().any(|l| l.divides(&m)) {
            out.push((comp, m));
        }
        return;
    }
    let mut e = 0;
    loop {
        if e >= caps[i] || limit.is_some_and(|l| deg + e > l) {
            break;
        }
        cur[i] = e;
        // prune: if the partial monomial is already divisible, larger exponents stay divisible
        let partial = Monomial(cur.iter().enumerate().map(|(k, &x)| if k <= i { x } else { 0 }).collect());
        if leads.iter().any(|l| l.divides(&partial)) {
            break;
        }
        enumerate_box(i + 1, caps, limit, deg + e, cur, leads, comp, out);
        e += 1;
    }
    cur[i] = 0;
}

/// Length of `Q^rank / M`.
pub fn quotient_length(gb: &GroebnerBasis) -> Result<usize> {
    let b = standard_monomials(gb, None);
    if !b.finite {
        return Err(Error::InfiniteLength);
    }
    Ok(b.dimension())
}

/// Smallest `N <= cap` with `var^N` in the ideal.
pub fn power_membership(var: usize, ideal: &GroebnerBasis, cap: u32) -> Result<u32> {
    let ring = &ideal.ring;
    let x = Poly::var(ring, var);
    let mut p = x.clone();
    for n in 1..=cap {
        if ideal.normal_form_poly(&p).is_zero() {
            return Ok(n);
        }
        p = p.mul(&x);
    }
    Err(Error::CapExceeded { cap })
}

pub const DEFAULT_POWER_CAP: u32 = 64;

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

    fn gb(r: &Ring, gens: &[&str], order: MonomialOrder) -> GroebnerBasis {
        let ps: Vec<Poly> = gens.iter().map(|s| p(s, r)).collect();
        ideal_gb(r, &ps, &order).unwrap()
    }

    #[test]
    fn small_bases() {
        let r = r2();
        let g = gb(&r, &["x", "y"], MonomialOrder::Grevlex);
        assert_eq!(g.polys(), vec![p("y", &r), p("x", &r)]);
        let g = gb(&r, &["x^2 - y", "x^3"], MonomialOrder::Lex);
        let mut got = g.polys();
        got.sort_by_key(|q| q.render());
        let mut want = vec![p("x^2 - y", &r), p("x*y", &r), p("y^2", &r)];
        want.sort_by_key(|q| q.render());
        assert_eq!(got, want);
        let g = gb(&r, &["1", "x"], MonomialOrder::Grevlex);
        assert_eq!(g.polys(), vec![p("1", &r)]);
        assert!(g.is_unit());
    }

    #[test]
    fn normal_forms() {
        let r = r2();
        let g = gb(&r, &["x"], MonomialOrder::Grevlex);
        assert!(g.normal_form_poly(&p("x^2", &r)).is_zero());
        assert_eq!(g.normal_form_poly(&p("y", &r)), p("y", &r));
        let g = gb(&r, &["x^2 - y"], MonomialOrder::Lex);
        assert_eq!(g.normal_form_poly(&p("x^3 + x*y", &r)), p("2*x*y", &r));
    }

    #[test]
    fn cofactor_lifting() {
        let r = r2();
        let gens = vec![FreeElem::scalar(p("x^2 - y", &r)), FreeElem::scalar(p("y^2", &r))];
        let g = buchberger(&gens, &MonomialOrder::Grevlex, true).unwrap();
        for target in ["x*(x^2-y)", "0", "x^3*y - x*y^2 + y^3"] {
            let e = FreeElem::scalar(p(target, &r));
            let c = lift_cofactors(&e, &g).unwrap();
            let back = gens[0].components[0].mul(&c[0]).add(&gens[1].components[0].mul(&c[1]));
            assert_eq!(back, e.components[0]);
        }
        assert_eq!(lift_cofactors(&FreeElem::scalar(p("x", &r)), &g), Err(Error::NotInSubmodule));
        // transformation rows reproduce the basis
        let t = g.transformation().unwrap();
        for (row, ge) in t.iter().zip(g.generators()) {
            let back = gens[0].components[0].mul(&row[0]).add(&gens[1].components[0].mul(&row[1]));
            assert_eq!(back, ge.components[0]);
        }
    }

    #[test]
    fn syzygy_examples() {
        let r = r2();
        let m = PolyMatrix::from_rows(&r, vec![vec![p("x", &r), p("y", &r)]]).unwrap();
        let s = syzygies(&m).unwrap();
        assert_eq!(s.len(), 1);
        let v = &s[0].components;
        assert!(v[0] == p("y", &r) && v[1] == p("-x", &r) || v[0] == p("-y", &r) && v[1] == p("x", &r));
        assert!(syzygies(&PolyMatrix::identity(&r, 2)).unwrap().is_empty());
        let col = PolyMatrix::from_rows(&r, vec![vec![p("x", &r)], vec![p("y", &r)]]).unwrap();
        assert!(syzygies(&col).unwrap().is_empty());
    }

    #[test]
    fn dimensions() {
        let r = r2();
        assert_eq!(krull_dimension(&gb(&r, &["x"], MonomialOrder::Grevlex)), 1);
        assert_eq!(krull_dimension(&gb(&r, &["x", "y"], MonomialOrder::Grevlex)), 0);
        assert_eq!(krull_dimension(&gb(&r, &["x*y"], MonomialOrder::Grevlex)), 1);
        assert_eq!(krull_dimension(&gb(&r, &["x+1", "x"], MonomialOrder::Grevlex)), -1);
    }

    #[test]
    fn standard_monomial_examples() {
        let r = r2();
        let b = standard_monomials(&gb(&r, &["x", "y"], MonomialOrder::Grevlex), None);
        assert_eq!(b.dimension(), 1);
        let b = standard_monomials(&gb(&r, &["x^2", "y^3"], MonomialOrder::Grevlex), None);
        assert_eq!(b.dimension(), 6);
        let b = standard_monomials(&gb(&r, &["3*x^2", "3*y^2"], MonomialOrder::Grevlex), None);
        assert_eq!(b.dimension(), 4);
        let b = standard_monomials(&gb(&r, &["x"], MonomialOrder::Grevlex), Some(3));
        assert!(!b.finite);
        assert_eq!(b.dimension(), 4);
    }

    #[test]
    fn power_membership_examples() {
        let r = r2();
        assert_eq!(power_membership(0, &gb(&r, &["x^2", "y"], MonomialOrder::Grevlex), 64), Ok(2));
        assert_eq!(power_membership(0, &gb(&r, &["x"], MonomialOrder::Grevlex), 64), Ok(1));
        assert_eq!(power_membership(0, &gb(&r, &["3*x^2", "3*y^2"], MonomialOrder::Grevlex), 64), Ok(2));
        assert_eq!(
            power_membership(0, &gb(&r, &["y"], MonomialOrder::Grevlex), 5),
            Err(Error::CapExceeded { cap: 5 })
        );
    }

    #[test]
    fn module_basis_and_length() {
        let r = r2();
        // Q^2 / <(x, 0), (y, 0), (0, x^2), (0, y)> has length 1 + 2
        let gens = vec![
            FreeElem::new(vec![p("x", &r), p("0", &r)]),
            FreeElem::new(vec![p("y", &r), p("0", &r)]),
            FreeElem::new(vec![p("0", &r), p("x^2", &r)]),
            FreeElem::new(vec![p("0", &r), p("y", &r)]),
        ];
        let g = buchberger(&gens, &MonomialOrder::Grevlex, false).unwrap();
        assert_eq!(quotient_length(&g), Ok(3));
        assert!(g.s_pairs_reduce_to_zero());
    }
}
