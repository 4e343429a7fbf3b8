//! Rank strata of the Jacobian matrix of `(f_1, ..., f_c)` and the searches
//! for generic hypersurfaces `g = Σ a_i f_i` in the linear system.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::groebner::{ideal_gb, krull_dimension};
use crate::matrix::PolyMatrix;
use crate::poly::{MonomialOrder, Poly, Rational, Ring};

fn common_ring(f_list: &[Poly]) -> Result<Ring> {
    let ring = f_list.first().ok_or_else(|| Error::Shape("empty list of polynomials".into()))?.ring().clone();
    if f_list.iter().any(|f| f.ring() != &ring) {
        return Err(Error::RingMismatch);
    }
    Ok(ring)
}

/// `n x c` matrix with entry `(i, j) = ∂f_j/∂x_i`.
pub fn jacobian_matrix(f_list: &[Poly]) -> Result<PolyMatrix> {
    let ring = common_ring(f_list)?;
    let n = ring.n();
    let rows = (0..n).map(|i| f_list.iter().map(|f| f.derivative(i)).collect::<Result<Vec<_>>>()).collect::<Result<Vec<_>>>()?;
    PolyMatrix::from_rows(&ring, rows)
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    go(0, n, k, &mut cur, &mut out);
    out
}

/// All nonzero `k x k` minors.
pub fn minors(m: &PolyMatrix, k: usize) -> Result<Vec<Poly>> {
    let mut out = Vec::new();
    for rows in combinations(m.rows(), k) {
        for cols in combinations(m.cols(), k) {
            let d = m.submatrix(&rows, &cols).det()?;
            if !d.is_zero() {
                out.push(d);
            }
        }
    }
    Ok(out)
}

fn dimension_of(ring: &Ring, gens: &[Poly]) -> Result<i64> {
    if gens.is_empty() {
        return Ok(ring.arity() as i64);
    }
    Ok(krull_dimension(&ideal_gb(ring, gens, &MonomialOrder::Grevlex)?))
}

/// Dimension of the locus where the Jacobian matrix has rank at most `j`.
pub fn stratum_dimension(f_list: &[Poly], j: usize) -> Result<i64> {
    let ring = common_ring(f_list)?;
    let jm = jacobian_matrix(f_list)?;
    if j + 1 > jm.rows().min(jm.cols()) {
        return Ok(ring.n() as i64);
    }
    dimension_of(&ring, &minors(&jm, j + 1)?)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrataReport {
    /// `(j, generators of the (j+1)-minor ideal, dimension)` for `j = 0..=c`.
    pub strata: Vec<(usize, Vec<Poly>, i64)>,
    /// `dim Q/(f_1..f_i)` for `i = 1..=c`.
    pub prefix_dimensions: Vec<i64>,
    pub singular_locus_dimension: i64,
    pub regular_sequence_ok: bool,
    pub isolated_ok: bool,
    pub strata_ok: bool,
}

impl StrataReport {
    pub fn all_ok(&self) -> bool {
        self.regular_sequence_ok && self.isolated_ok && self.strata_ok
    }
}

pub fn check_assumptions(f_list: &[Poly]) -> Result<StrataReport> {
    let ring = common_ring(f_list)?;
    let n = ring.n() as i64;
    let c = f_list.len();
    let jm = jacobian_matrix(f_list)?;
    let mut strata = Vec::new();
    for j in 0..=c {
        let (gens, dim) = if j + 1 > jm.rows().min(jm.cols()) {
            (Vec::new(), n)
        } else {
            let g = minors(&jm, j + 1)?;
            let d = dimension_of(&ring, &g)?;
            (g, d)
        };
        strata.push((j, gens, dim));
    }
    let mut prefix_dimensions = Vec::new();
    for i in 1..=c {
        prefix_dimensions.push(dimension_of(&ring, &f_list[..i])?);
    }
    let regular_sequence_ok = prefix_dimensions.iter().enumerate().all(|(i, &d)| d == n - (i as i64 + 1));
    let mut sing = if c <= ring.n() { minors(&jm, c)? } else { Vec::new() };
    sing.extend(f_list.iter().cloned());
    let singular_locus_dimension = dimension_of(&ring, &sing)?;
    let isolated_ok = singular_locus_dimension <= 0;
    let strata_ok = strata.iter().filter(|(j, _, _)| *j < c).all(|(j, _, d)| *d <= *j as i64);
    Ok(StrataReport { strata, prefix_dimensions, singular_locus_dimension, regular_sequence_ok, isolated_ok, strata_ok })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChartDimension {
    /// Index of the parameter set to 1.
    pub chart: usize,
    pub dimension: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DwReport {
    pub charts: Vec<ChartDimension>,
    /// Maximum over the charts.
    pub dimension: i64,
    pub ok: bool,
}

/// Zero locus of `dW = Σ T_k df_k` in the chart `T_j = 1`, for every `j`.
pub fn dw_regular_section_check(f_list: &[Poly]) -> Result<DwReport> {
    let base = common_ring(f_list)?;
    let c = f_list.len();
    let jm = jacobian_matrix(f_list)?;
    let x_names: Vec<&str> = base.x_vars().iter().map(String::as_str).collect();
    let mut charts = Vec::new();
    for j in 0..c {
        let t_names: Vec<String> = (0..c).filter(|&k| k != j).map(|k| fresh_name(&base, k)).collect();
        let mut names: Vec<&str> = x_names.clone();
        names.extend(t_names.iter().map(String::as_str));
        let chart = Ring::new(&names, &[])?;
        let mut entries = Vec::new();
        for i in 0..jm.rows() {
            let mut e = Poly::zero(&chart);
            for k in 0..c {
                let coeff = jm.get(i, k).embed(&chart)?;
                let t = if k == j {
                    Poly::one(&chart)
                } else {
                    Poly::var(&chart, chart.var_index(&fresh_name(&base, k)).expect("declared"))
                };
                e = e.add(&coeff.mul(&t));
            }
            if !e.is_zero() {
                entries.push(e);
            }
        }
        charts.push(ChartDimension { chart: j, dimension: dimension_of(&chart, &entries)? });
    }
    let dimension = charts.iter().map(|c| c.dimension).max().unwrap_or(-1);
    Ok(DwReport { charts, dimension, ok: dimension < c as i64 })
}

fn fresh_name(ring: &Ring, k: usize) -> String {
    let mut name = format!("T{}", k + 1);
    while ring.var_index(&name).is_some() {
        name.insert(0, '_');
    }
    name
}

/// `Σ a_i f_i`.
pub fn linear_combination(f_list: &[Poly], point: &[Rational]) -> Result<Poly> {
    let ring = common_ring(f_list)?;
    if point.len() != f_list.len() {
        return Err(Error::Shape("point has the wrong number of coordinates".into()));
    }
    if point.iter().all(num_traits::Zero::is_zero) {
        return Err(Error::ZeroPoint);
    }
    Ok(f_list.iter().zip(point).fold(Poly::zero(&ring), |acc, (f, a)| acc.add(&f.scale(a))))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointCertificate {
    pub point: Vec<Rational>,
    pub g: Poly,
    /// Dimension of the critical locus of `g`.
    pub dimension: i64,
}

impl PointCertificate {
    pub fn reverify(&self, f_list: &[Poly]) -> Result<bool> {
        let g = linear_combination(f_list, &self.point)?;
        Ok(g == self.g && critical_dimension(&g)? == self.dimension && self.dimension <= 0)
    }
}

/// Dimension of `V(∂g/∂x_1, ..., ∂g/∂x_n)`.
pub fn critical_dimension(g: &Poly) -> Result<i64> {
    let ring = g.ring();
    let jac: Vec<Poly> = (0..ring.n()).map(|i| g.derivative(i)).collect::<Result<_>>()?;
    let jac: Vec<Poly> = jac.into_iter().filter(|p| !p.is_zero()).collect();
    dimension_of(ring, &jac).map(|d| if jac.is_empty() { ring.n() as i64 } else { d })
}

/// Certificate for `point` if `g` has isolated critical points.
pub fn certify_point(f_list: &[Poly], point: &[Rational]) -> Result<Option<PointCertificate>> {
    let g = linear_combination(f_list, point)?;
    let dimension = critical_dimension(&g)?;
    Ok((dimension <= 0).then(|| PointCertificate { point: point.to_vec(), g, dimension }))
}

/// Deterministic stream of distinct points of `P^{c-1}` with integer
/// coordinates in `[-bound, bound]`, scaled so the first nonzero coordinate is 1.
pub struct PointSampler {
    rng: ChaCha8Rng,
    c: usize,
    bound: i64,
    seen: BTreeSet<Vec<Rational>>,
}

impl PointSampler {
    pub fn new(c: usize, seed: u64, bound: i64) -> PointSampler {
        PointSampler { rng: ChaCha8Rng::seed_from_u64(seed), c, bound, seen: BTreeSet::new() }
    }
}

impl Iterator for PointSampler {
    type Item = Vec<Rational>;

    fn next(&mut self) -> Option<Vec<Rational>> {
        // duplicates become the norm once the box is nearly exhausted
        for _ in 0..MAX_DUPLICATE_DRAWS {
            let raw: Vec<i64> = (0..self.c).map(|_| self.rng.gen_range(-self.bound..=self.bound)).collect();
            let Some(&lead) = raw.iter().find(|&&v| v != 0) else { continue };
            let p: Vec<Rational> = raw.iter().map(|&v| Rational::new(v.into(), lead.into())).collect();
            if self.seen.insert(p.clone()) {
                return Some(p);
            }
        }
        None
    }
}

const MAX_DUPLICATE_DRAWS: usize = 10_000;

pub const DEFAULT_SEARCH_BOUND: i64 = 10;

/// First sampled point whose hypersurface has isolated critical points.
pub fn generic_hypersurface_search(f_list: &[Poly], trials: usize, seed: u64) -> Result<PointCertificate> {
    common_ring(f_list)?;
    for point in PointSampler::new(f_list.len(), seed, DEFAULT_SEARCH_BOUND).take(trials) {
        if let Some(cert) = certify_point(f_list, &point)? {
            return Ok(cert);
        }
    }
    Err(Error::SearchExhausted(trials))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;
    use crate::poly::rat;

    fn p(s: &str, r: &Ring) -> Poly {
        parse_poly(s, r).unwrap()
    }

    fn quadrics() -> Vec<Poly> {
        let r = Ring::new(&["x1", "x2", "x3", "x4"], &[]).unwrap();
        vec![
            p("1/2*(x1^2 + x2^2 + x3^2 + x4^2)", &r),
            p("1/2*(x1^2 + 2*x2^2 + 3*x3^2 + 4*x4^2)", &r),
        ]
    }

    #[test]
    fn jacobian_columns() {
        let f = quadrics();
        let j = jacobian_matrix(&f).unwrap();
        assert_eq!((j.rows(), j.cols()), (4, 2));
        assert_eq!(j.get(2, 1), &p("3*x3", f[0].ring()));
        let r = Ring::new(&["x", "y"], &[]).unwrap();
        let j = jacobian_matrix(&[p("x*y", &r)]).unwrap();
        assert_eq!(j.column(0), vec![p("y", &r), p("x", &r)]);
        assert!(jacobian_matrix(&[p("3", &r)]).unwrap().is_zero());
    }

    #[test]
    fn quadric_strata() {
        let f = quadrics();
        assert_eq!(stratum_dimension(&f, 0).unwrap(), 0);
        assert_eq!(stratum_dimension(&f, 1).unwrap(), 1);
        assert_eq!(stratum_dimension(&f, 2).unwrap(), 4);
        let rep = check_assumptions(&f).unwrap();
        assert!(rep.all_ok(), "{rep:?}");
        let dw = dw_regular_section_check(&f).unwrap();
        assert_eq!(dw.dimension, 1);
        assert!(dw.ok);
    }

    #[test]
    fn failing_assumptions() {
        let r = Ring::new(&["x", "y"], &[]).unwrap();
        let rep = check_assumptions(&[p("x^2", &r), p("x*y", &r)]).unwrap();
        assert!(!rep.regular_sequence_ok);
        let rep = check_assumptions(&[p("x*y", &r)]).unwrap();
        assert!(rep.all_ok());
        let dw = dw_regular_section_check(&[p("x*y", &r)]).unwrap();
        assert_eq!(dw.dimension, 0);
        let r4 = quadrics()[0].ring().clone();
        let same = vec![p("x1^2 + x2^2 + x3^2 + x4^2", &r4), p("x1^2 + x2^2 + x3^2 + x4^2", &r4)];
        assert!(!dw_regular_section_check(&same).unwrap().ok);
    }

    #[test]
    fn point_search() {
        let f = quadrics();
        let cert = certify_point(&f, &[rat(1), rat(1)]).unwrap().unwrap();
        assert_eq!(cert.dimension, 0);
        assert!(certify_point(&f, &[rat(1), rat(0)]).unwrap().is_some());
        assert!(certify_point(&f, &[rat(-2), rat(1)]).unwrap().is_none());
        assert_eq!(certify_point(&f, &[rat(0), rat(0)]), Err(Error::ZeroPoint));
        let found = generic_hypersurface_search(&f, 20, 1).unwrap();
        assert!(found.reverify(&f).unwrap());
        let a = generic_hypersurface_search(&f, 20, 5).unwrap();
        let b = generic_hypersurface_search(&f, 20, 5).unwrap();
        assert_eq!(a, b);
    }
}
