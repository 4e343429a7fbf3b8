//! Sparse multivariate polynomials over the rationals.
//!
//! A [`Ring`] carries two blocks of variables: the base variables `x` (which
//! carry positive weights and are the only directions forms differentiate
//! along) and optional auxiliary variables `T` used for twisted potentials
//! `W = f_1 T_1 + ... + f_c T_c`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rat_frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

#[derive(Debug, PartialEq, Eq, Hash)]
struct RingData {
    x_vars: Vec<String>,
    t_vars: Vec<String>,
    x_weights: Vec<u32>,
}

/// Variable declaration shared by every polynomial living over it.
#[derive(Debug, Clone)]
pub struct Ring(Arc<RingData>);

impl PartialEq for Ring {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for Ring {}

impl Ring {
    pub fn new(x_vars: &[&str], t_vars: &[&str]) -> Result<Ring> {
        let w = vec![1; x_vars.len()];
        Ring::with_weights(x_vars, t_vars, &w)
    }

    pub fn with_weights(x_vars: &[&str], t_vars: &[&str], x_weights: &[u32]) -> Result<Ring> {
        Ring::from_parts(
            x_vars.iter().map(|s| s.to_string()).collect(),
            t_vars.iter().map(|s| s.to_string()).collect(),
            x_weights.to_vec(),
        )
    }

    pub fn from_parts(x_vars: Vec<String>, t_vars: Vec<String>, x_weights: Vec<u32>) -> Result<Ring> {
        if x_vars.is_empty() {
            return Err(Error::InvalidRing("at least one base variable is required".into()));
        }
        if x_weights.len() != x_vars.len() {
            return Err(Error::InvalidRing("one weight per base variable is required".into()));
        }
        if x_weights.contains(&0) {
            return Err(Error::InvalidRing("weights must be positive".into()));
        }
        let mut seen = std::collections::HashSet::new();
        for v in x_vars.iter().chain(t_vars.iter()) {
            let ok = !v.is_empty()
                && v.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                && v.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !ok {
                return Err(Error::InvalidRing(format!("invalid variable name `{v}`")));
            }
            if !seen.insert(v.clone()) {
                return Err(Error::InvalidRing(format!("duplicate variable `{v}`")));
            }
        }
        Ok(Ring(Arc::new(RingData { x_vars, t_vars, x_weights })))
    }

    /// Number of base variables `n`.
    pub fn n(&self) -> usize {
        self.0.x_vars.len()
    }

    /// Number of auxiliary variables `c`.
    pub fn c(&self) -> usize {
        self.0.t_vars.len()
    }

    pub fn arity(&self) -> usize {
        self.n() + self.c()
    }

    pub fn x_vars(&self) -> &[String] {
        &self.0.x_vars
    }

    pub fn t_vars(&self) -> &[String] {
        &self.0.t_vars
    }

    pub fn weights(&self) -> &[u32] {
        &self.0.x_weights
    }

    pub fn var_name(&self, i: usize) -> &str {
        if i < self.n() {
            &self.0.x_vars[i]
        } else {
            &self.0.t_vars[i - self.n()]
        }
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.0
            .x_vars
            .iter()
            .chain(self.0.t_vars.iter())
            .position(|v| v == name)
    }

    pub fn is_t_var(&self, i: usize) -> bool {
        i >= self.n()
    }

    /// The same base variables without any auxiliary variables.
    pub fn base(&self) -> Ring {
        if self.c() == 0 {
            return self.clone();
        }
        Ring(Arc::new(RingData {
            x_vars: self.0.x_vars.clone(),
            t_vars: Vec::new(),
            x_weights: self.0.x_weights.clone(),
        }))
    }

    /// Same variables, new base weights.
    pub fn reweighted(&self, weights: &[u32]) -> Result<Ring> {
        Ring::from_parts(self.0.x_vars.clone(), self.0.t_vars.clone(), weights.to_vec())
    }
}

/// Exponent vector over all variables of a ring (base block first).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(arity: usize) -> Monomial {
        Monomial(vec![0; arity])
    }

    pub fn var(arity: usize, i: usize, e: u32) -> Monomial {
        let mut v = vec![0; arity];
        v[i] = e;
        Monomial(v)
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming divisibility.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        Monomial(other.0.iter().zip(&self.0).map(|(a, b)| a - b).collect())
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Weighted degree in the base variables.
    pub fn weighted_degree(&self, ring: &Ring) -> u64 {
        ring.weights()
            .iter()
            .zip(&self.0)
            .map(|(&w, &e)| u64::from(w) * u64::from(e))
            .sum()
    }

    /// Total degree in the auxiliary variables.
    pub fn t_degree(&self, ring: &Ring) -> u32 {
        self.0[ring.n()..].iter().sum()
    }
}

/// Term orders. Variables are ranked in declaration order, base block first.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum MonomialOrder {
    #[default]
    Grevlex,
    Lex,
    WeightedGrevlex(Vec<u32>),
}

impl MonomialOrder {
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self {
            MonomialOrder::Lex => a.0.cmp(&b.0),
            MonomialOrder::Grevlex => a
                .total_degree()
                .cmp(&b.total_degree())
                .then_with(|| revlex(a, b)),
            MonomialOrder::WeightedGrevlex(w) => {
                let wd = |m: &Monomial| -> u64 {
                    m.0.iter()
                        .enumerate()
                        .map(|(i, &e)| u64::from(*w.get(i).unwrap_or(&1)) * u64::from(e))
                        .sum()
                };
                wd(a).cmp(&wd(b)).then_with(|| revlex(a, b))
            }
        }
    }

    pub fn name(&self) -> String {
        match self {
            MonomialOrder::Grevlex => "grevlex".into(),
            MonomialOrder::Lex => "lex".into(),
            MonomialOrder::WeightedGrevlex(w) => format!("wgrevlex{w:?}"),
        }
    }
}

fn revlex(a: &Monomial, b: &Monomial) -> Ordering {
    for (x, y) in a.0.iter().zip(&b.0).rev() {
        if x != y {
            return y.cmp(x);
        }
    }
    Ordering::Equal
}

/// Sparse polynomial; zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    ring: Ring,
    terms: BTreeMap<Monomial, Rational>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

impl Poly {
    pub fn zero(ring: &Ring) -> Poly {
        Poly { ring: ring.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(ring: &Ring, c: Rational) -> Poly {
        let mut p = Poly::zero(ring);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(ring.arity()), c);
        }
        p
    }

    pub fn one(ring: &Ring) -> Poly {
        Poly::constant(ring, Rational::one())
    }

    pub fn from_int(ring: &Ring, c: i64) -> Poly {
        Poly::constant(ring, rat(c))
    }

    pub fn var(ring: &Ring, i: usize) -> Poly {
        Poly::monomial(ring, Monomial::var(ring.arity(), i, 1), Rational::one())
    }

    pub fn monomial(ring: &Ring, m: Monomial, c: Rational) -> Poly {
        debug_assert_eq!(m.0.len(), ring.arity());
        let mut p = Poly::zero(ring);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn from_terms(ring: &Ring, terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Poly {
        let mut p = Poly::zero(ring);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// The constant term.
    pub fn constant_term(&self) -> Rational {
        self.coeff(&Monomial::one(self.ring.arity()))
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn as_constant(&self) -> Option<Rational> {
        self.is_constant().then(|| self.constant_term())
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    fn check_ring(&self, other: &Poly) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch);
        }
        Ok(())
    }

    pub fn arith(&self, other: &Poly, op: ArithOp) -> Result<Poly> {
        self.check_ring(other)?;
        Ok(match op {
            ArithOp::Add => self.add(other),
            ArithOp::Sub => self.sub(other),
            ArithOp::Mul => self.mul(other),
        })
    }

    pub fn add(&self, other: &Poly) -> Poly {
        debug_assert!(self.ring == other.ring);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        debug_assert!(self.ring == other.ring);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }

    pub fn neg(&self) -> Poly {
        Poly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        debug_assert!(self.ring == other.ring);
        let mut out = Poly::zero(&self.ring);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.ring);
        }
        Poly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.ring);
        }
        Poly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(t, x)| (t.mul(m), x * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut out = Poly::one(&self.ring);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                out = out.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        out
    }

    /// Formal partial derivative along a base variable.
    pub fn derivative(&self, var: usize) -> Result<Poly> {
        if var >= self.ring.arity() {
            return Err(Error::UnknownVariable(format!("index {var}")));
        }
        if self.ring.is_t_var(var) {
            return Err(Error::DerivativeInT(self.ring.var_name(var).to_string()));
        }
        let mut out = Poly::zero(&self.ring);
        for (m, c) in &self.terms {
            let e = m.0[var];
            if e > 0 {
                let mut m2 = m.clone();
                m2.0[var] -= 1;
                out.add_term(m2, c * rat(i64::from(e)));
            }
        }
        Ok(out)
    }

    /// Leading monomial and coefficient for the given order.
    pub fn leading(&self, order: &MonomialOrder) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().max_by(|a, b| order.cmp(a.0, b.0))
    }

    /// Simultaneous substitution. Variables absent from `assignment` are carried
    /// over by name into `target`.
    pub fn substitute(&self, target: &Ring, assignment: &HashMap<usize, Poly>) -> Result<Poly> {
        for p in assignment.values() {
            if p.ring() != target {
                return Err(Error::RingMismatch);
            }
        }
        let mut images: Vec<Poly> = Vec::with_capacity(self.ring.arity());
        for i in 0..self.ring.arity() {
            match assignment.get(&i) {
                Some(p) => images.push(p.clone()),
                None => {
                    let name = self.ring.var_name(i);
                    let j = target
                        .var_index(name)
                        .ok_or_else(|| Error::UnknownVariable(name.to_string()))?;
                    images.push(Poly::var(target, j));
                }
            }
        }
        let mut cache: HashMap<(usize, u32), Poly> = HashMap::new();
        let mut out = Poly::zero(target);
        for (m, c) in &self.terms {
            let mut t = Poly::constant(target, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let pw = cache
                    .entry((i, e))
                    .or_insert_with(|| images[i].pow(e))
                    .clone();
                t = t.mul(&pw);
                if t.is_zero() {
                    break;
                }
            }
            out = out.add(&t);
        }
        Ok(out)
    }

    /// Substitute rational values for the auxiliary variables, landing in the base ring.
    pub fn specialize_t(&self, values: &[Rational]) -> Result<Poly> {
        let c = self.ring.c();
        if values.len() != c {
            return Err(Error::Shape(format!("expected {c} values for the auxiliary variables")));
        }
        let base = self.ring.base();
        let n = self.ring.n();
        let mut out = Poly::zero(&base);
        for (m, coef) in &self.terms {
            let mut k = coef.clone();
            for (j, v) in values.iter().enumerate() {
                let e = m.0[n + j];
                if e > 0 {
                    k *= num_traits::pow(v.clone(), e as usize);
                }
            }
            out.add_term(Monomial(m.0[..n].to_vec()), k);
        }
        Ok(out)
    }

    /// Re-express the polynomial in another ring whose variables include all
    /// variables appearing here (matched by name).
    pub fn embed(&self, target: &Ring) -> Result<Poly> {
        let mut map = Vec::with_capacity(self.ring.arity());
        for i in 0..self.ring.arity() {
            let name = self.ring.var_name(i);
            map.push(target.var_index(name));
        }
        let mut out = Poly::zero(target);
        for (m, c) in &self.terms {
            let mut e = vec![0; target.arity()];
            for (i, &k) in m.0.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let j = map[i].ok_or_else(|| Error::UnknownVariable(self.ring.var_name(i).to_string()))?;
                e[j] = k;
            }
            out.add_term(Monomial(e), c.clone());
        }
        Ok(out)
    }

    /// Split into parts homogeneous for the base weights.
    pub fn weighted_degree_decompose(&self) -> BTreeMap<u64, Poly> {
        let mut out: BTreeMap<u64, Poly> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.weighted_degree(&self.ring))
                .or_insert_with(|| Poly::zero(&self.ring))
                .add_term(m.clone(), c.clone());
        }
        out
    }

    /// Weighted degree if the polynomial is quasi-homogeneous (zero gives `None`).
    pub fn homogeneous_degree(&self) -> Option<u64> {
        let mut it = self.terms.keys().map(|m| m.weighted_degree(&self.ring));
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    /// T-degree if every term has the same auxiliary degree.
    pub fn t_homogeneous_degree(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(|m| m.t_degree(&self.ring));
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    pub fn involves_t(&self) -> bool {
        self.terms.keys().any(|m| m.t_degree(&self.ring) > 0)
    }

    /// Exact division; `None` when `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &Poly) -> Option<Poly> {
        if divisor.is_zero() {
            return None;
        }
        let order = MonomialOrder::Lex;
        let (lm, lc) = divisor.leading(&order)?;
        let (lm, lc) = (lm.clone(), lc.clone());
        let mut rem = self.clone();
        let mut quot = Poly::zero(&self.ring);
        while let Some((m, c)) = rem.leading(&order) {
            if !lm.divides(m) {
                return None;
            }
            let q = lm.quotient_of(m);
            let k = c / &lc;
            rem = rem.sub(&divisor.mul_monomial(&q, &k));
            quot.add_term(q, k);
        }
        Some(quot)
    }

    /// Terms sorted by a given order, largest first.
    pub fn sorted_terms(&self, order: &MonomialOrder) -> Vec<(&Monomial, &Rational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| order.cmp(b.0, a.0));
        v
    }

    /// Render with grevlex-descending term order, in the parser's grammar.
    pub fn render(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (i, (m, c)) in self.sorted_terms(&MonomialOrder::Grevlex).into_iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if i == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let mono = render_monomial(&self.ring, m);
            if mono.is_empty() {
                s.push_str(&render_rational(&a));
            } else if a.is_one() {
                s.push_str(&mono);
            } else {
                s.push_str(&render_rational(&a));
                s.push('*');
                s.push_str(&mono);
            }
        }
        s
    }
}

pub fn render_rational(c: &Rational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

fn render_monomial(ring: &Ring, m: &Monomial) -> String {
    let mut parts = Vec::new();
    for (i, &e) in m.0.iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(ring.var_name(i).to_string()),
            _ => parts.push(format!("{}^{}", ring.var_name(i), e)),
        }
    }
    parts.join("*")
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({})", self.render())
    }
}

/// Enumerate all exponent vectors in `n` variables of weighted degree exactly `d`.
pub fn monomials_of_weighted_degree(weights: &[u32], d: u64) -> Vec<Vec<u32>> {
    fn rec(weights: &[u32], i: usize, left: u64, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i == weights.len() {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let w = u64::from(weights[i]);
        let mut e = 0u64;
        while e * w <= left {
            cur.push(e as u32);
            rec(weights, i + 1, left - e * w, cur, out);
            cur.pop();
            e += 1;
        }
    }
    let mut out = Vec::new();
    rec(weights, 0, d, &mut Vec::new(), &mut out);
    out
}
