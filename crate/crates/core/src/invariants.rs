//! Numerical invariants of factorizations and modules: Milnor algebras, the
//! Jacobian complex, top Chern classes, the residue pairing, Euler
//! characteristics, Herbrand differences and theta, and the checks that tie
//! them together.

use std::collections::HashMap;

use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::connection::{chern_forms, Connection};
use crate::error::{Error, Result};
use crate::forms::Form;
use crate::groebner::{
    buchberger_in, ideal_gb, krull_dimension, lift_cofactors, power_membership, standard_monomials, FreeElem,
    GroebnerBasis, StandardMonomialBasis, DEFAULT_POWER_CAP,
};
use crate::homology::{gb_homology_lengths, graded_homology_lengths, GradedOptions, LengthSequence};
use crate::linalg::{rank_dense, Echelon};
use crate::matrix::PolyMatrix;
use crate::mf::{
    eisenbud_periodic_mf, hom_complex, hom_complex_graded, module_dual, specialize_twisted, tor_complex,
    tor_complex_graded, weighted_degree, MatrixFactorization, TwistedMf, TwoPeriodicComplex,
};
use crate::poly::{monomials_of_weighted_degree, Monomial, MonomialOrder, Poly, Rational, Ring};
use crate::strata::{certify_point, PointSampler, DEFAULT_SEARCH_BOUND};

fn partials(f: &Poly) -> Result<Vec<Poly>> {
    (0..f.ring().n()).map(|i| f.derivative(i)).collect()
}

/// `Q/(∂f/∂x_1, ..., ∂f/∂x_n)` with its standard monomial basis.
#[derive(Debug, Clone)]
pub struct MilnorAlgebra {
    pub f: Poly,
    pub jacobian_gb: GroebnerBasis,
    pub basis: StandardMonomialBasis,
    pub mu: usize,
}

pub fn milnor_algebra(f: &Poly) -> Result<MilnorAlgebra> {
    let ring = f.ring();
    let jac = partials(f)?;
    let jacobian_gb = ideal_gb(ring, &jac, &MonomialOrder::Grevlex)?;
    match krull_dimension(&jacobian_gb) {
        -1 => return Err(Error::NoCriticalPoint),
        0 => {}
        _ => return Err(Error::NonIsolated),
    }
    let basis = standard_monomials(&jacobian_gb, None);
    let mu = basis.dimension();
    Ok(MilnorAlgebra { f: f.clone(), jacobian_gb, basis, mu })
}

impl MilnorAlgebra {
    pub fn ring(&self) -> &Ring {
        self.f.ring()
    }

    pub fn normal_form(&self, p: &Poly) -> Poly {
        self.jacobian_gb.normal_form_poly(p)
    }

    pub fn basis_polys(&self) -> Vec<Poly> {
        self.basis
            .monomials
            .iter()
            .map(|(_, m)| Poly::monomial(self.ring(), m.clone(), Rational::one()))
            .collect()
    }

    /// Coordinates of the class of `p` on the standard monomial basis.
    pub fn coordinates(&self, p: &Poly) -> Vec<Rational> {
        let nf = self.normal_form(p);
        self.basis.monomials.iter().map(|(_, m)| nf.coeff(m)).collect()
    }

    /// Largest weighted degree of a basis monomial.
    pub fn socle_degree(&self, weights: &[u32]) -> i64 {
        self.basis
            .monomials
            .iter()
            .map(|(_, m)| m.0.iter().zip(weights).map(|(&e, &w)| i64::from(e) * i64::from(w)).sum::<i64>())
            .max()
            .unwrap_or(0)
    }
}

/// Degreewise homology of `Ω^0 -> Ω^1 -> ... -> Ω^n` with differential `df∧`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JacobianComplexReport {
    pub weights: Vec<u32>,
    pub degree_f: i64,
    pub bound: i64,
    /// Total dimension of `H^j` for `j = 0..=n`.
    pub homology: Vec<usize>,
    /// `(j, internal degree, dimension)` for every nonzero piece.
    pub by_degree: Vec<(usize, i64, usize)>,
    pub exact_below_top: bool,
    pub top_dimension: usize,
}

struct JacobianStrands {
    n: usize,
    weights: Vec<u32>,
    partials: Vec<Poly>,
    rank_cache: HashMap<(usize, i64), usize>,
}

impl JacobianStrands {
    fn basis(&self, j: usize, t: i64) -> HashMap<(u32, Monomial), usize> {
        let mut out = HashMap::new();
        for mask in 0u32..(1u32 << self.n) {
            if mask.count_ones() as usize != j {
                continue;
            }
            let wm: i64 = (0..self.n).filter(|i| mask & (1 << i) != 0).map(|i| i64::from(self.weights[i])).sum();
            if t - wm < 0 {
                continue;
            }
            for e in monomials_of_weighted_degree(&self.weights, (t - wm) as u64) {
                let idx = out.len();
                out.insert((mask, Monomial(e)), idx);
            }
        }
        out
    }

    fn dim(&self, j: usize, t: i64) -> usize {
        if j > self.n {
            return 0;
        }
        self.basis(j, t).len()
    }

    /// Rank of `df∧` on `Ω^j` in degree `t`.
    fn rank(&mut self, j: usize, t: i64, d: i64) -> usize {
        if j >= self.n {
            return 0;
        }
        if let Some(&r) = self.rank_cache.get(&(j, t)) {
            return r;
        }
        let src = self.basis(j, t);
        let tgt = self.basis(j + 1, t + d);
        let mut ech = Echelon::new();
        for (mask, m) in src.keys() {
            let mut v: HashMap<usize, Rational> = HashMap::new();
            for (i, p) in self.partials.iter().enumerate() {
                if mask & (1 << i) != 0 || p.is_zero() {
                    continue;
                }
                let before = (mask & ((1u32 << i) - 1)).count_ones();
                let sign = if before.is_multiple_of(2) { Rational::one() } else { -Rational::one() };
                let new_mask = mask | (1 << i);
                for (pm, c) in p.terms() {
                    let idx = tgt[&(new_mask, pm.mul(m))];
                    *v.entry(idx).or_insert_with(Rational::zero) += c * &sign;
                }
            }
            let mut sv: Vec<(usize, Rational)> = v.into_iter().filter(|(_, c)| !c.is_zero()).collect();
            sv.sort_by_key(|e| e.0);
            ech.insert_rational(&sv);
        }
        let r = ech.rank();
        self.rank_cache.insert((j, t), r);
        r
    }
}

/// Degreewise check that the complex is exact below the top and that the top
/// homology has total dimension `μ`. `bound` defaults to `n·deg f + max w`.
pub fn jacobian_complex_check(f: &Poly, weights: &[u32], bound: Option<i64>) -> Result<JacobianComplexReport> {
    let ring = f.ring();
    let n = ring.n();
    if ring.c() != 0 || weights.len() != n || weights.contains(&0) {
        return Err(Error::Shape("one positive weight per x-variable is required".into()));
    }
    if f.is_zero() {
        return Err(Error::NotGraded("zero potential".into()));
    }
    let d = weighted_degree(f, weights).ok_or_else(|| Error::NotGraded("potential is not quasi-homogeneous".into()))?;
    let wmax = i64::from(*weights.iter().max().unwrap());
    let bound = bound.unwrap_or(n as i64 * d + wmax);
    let mut s = JacobianStrands { n, weights: weights.to_vec(), partials: partials(f)?, rank_cache: HashMap::new() };
    let mut homology = vec![0usize; n + 1];
    let mut by_degree = Vec::new();
    for t in 0..=bound {
        for j in 0..=n {
            let dim = s.dim(j, t);
            if dim == 0 {
                continue;
            }
            let out = s.rank(j, t, d);
            let inc = if j == 0 { 0 } else { s.rank(j - 1, t - d, d) };
            let h = dim - out - inc;
            if h > 0 {
                if t > bound - wmax - 1 {
                    return Err(Error::BoundTooSmall { bound });
                }
                homology[j] += h;
                by_degree.push((j, t, h));
            }
        }
    }
    let exact_below_top = homology[..n].iter().all(|&h| h == 0);
    Ok(JacobianComplexReport {
        weights: weights.to_vec(),
        degree_f: d,
        bound,
        top_dimension: homology[n],
        homology,
        by_degree,
        exact_below_top,
    })
}

/// `ker(df∧)/im(df∧)` on the even form degrees.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hh0Report {
    /// `(2i, dimension)` for `2i <= n`.
    pub summands: Vec<(usize, usize)>,
    /// Every summand below the top form degree vanishes.
    pub only_top: bool,
}

pub fn hh0_adhoc(f: &Poly, weights: &[u32], bound: Option<i64>) -> Result<Hh0Report> {
    let rep = jacobian_complex_check(f, weights, bound)?;
    let n = rep.homology.len() - 1;
    let summands: Vec<(usize, usize)> = (0..=n).step_by(2).map(|j| (j, rep.homology[j])).collect();
    let only_top = summands.iter().all(|&(j, h)| j == n || h == 0);
    Ok(Hh0Report { summands, only_top })
}

/// Chern character forms and, for `n` even, the top class in the Milnor algebra.
#[derive(Debug, Clone)]
pub struct ChernClass {
    pub components: Vec<(usize, Form)>,
    pub top_class: Option<Poly>,
}

fn check_potential(e: &MatrixFactorization, milnor: &MilnorAlgebra) -> Result<()> {
    if e.potential() != &milnor.f {
        return Err(Error::PotentialMismatch);
    }
    Ok(())
}

pub fn chern_character(e: &MatrixFactorization, c: &Connection, milnor: &MilnorAlgebra) -> Result<ChernClass> {
    check_potential(e, milnor)?;
    let forms = chern_forms(e, c)?;
    let top_class = e.ring().n().is_multiple_of(2).then(|| milnor.normal_form(&forms.top.top_coefficient()));
    Ok(ChernClass { components: forms.components, top_class })
}

/// Normal form of `(2/n!) tr(dA' dB' ... dB')` modulo the Jacobian ideal.
pub fn top_chern_class(e: &MatrixFactorization, c: &Connection, milnor: &MilnorAlgebra) -> Result<Poly> {
    if !e.ring().n().is_multiple_of(2) {
        return Err(Error::OddDimensionTop);
    }
    chern_character(e, c, milnor)?.top_class.ok_or(Error::OddDimensionTop)
}

/// Top classes for the trivial connection followed by `count` random ones.
pub fn top_classes_across_connections(
    e: &MatrixFactorization,
    milnor: &MilnorAlgebra,
    count: usize,
    seed: u64,
) -> Result<Vec<Poly>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = vec![top_chern_class(e, &Connection::trivial(e), milnor)?];
    for k in 0..count {
        let c = Connection::random(e.ring(), e.rank(), (k % 2) as u32, &mut rng);
        out.push(top_chern_class(e, &c, milnor)?);
    }
    Ok(out)
}

/// Grothendieck residue `h ↦ Res[h dx / (∂_1 f, ..., ∂_n f)]` computed through
/// `x_i^{N_i} = Σ_j T_ij ∂_j f`.
#[derive(Debug, Clone)]
pub struct ResidueFunctional {
    pub milnor: MilnorAlgebra,
    pub powers: Vec<u32>,
    pub lift: PolyMatrix,
    pub det_t: Poly,
}

pub fn residue_functional(m: &MilnorAlgebra) -> Result<ResidueFunctional> {
    let ring = m.ring();
    let n = ring.n();
    let mut powers = Vec::with_capacity(n);
    for i in 0..n {
        match power_membership(i, &m.jacobian_gb, DEFAULT_POWER_CAP) {
            Ok(p) => powers.push(p),
            Err(Error::CapExceeded { .. }) => return Err(Error::NotPrimaryAtOrigin),
            Err(e) => return Err(e),
        }
    }
    let gens: Vec<FreeElem> = partials(&m.f)?.into_iter().map(FreeElem::scalar).collect();
    let tracked = buchberger_in(ring, 1, &gens, &MonomialOrder::Grevlex, true)?;
    let mut rows = Vec::with_capacity(n);
    for (i, &p) in powers.iter().enumerate() {
        rows.push(lift_cofactors(&FreeElem::scalar(Poly::var(ring, i).pow(p)), &tracked)?);
    }
    let lift = PolyMatrix::from_rows(ring, rows)?;
    let det_t = lift.det()?;
    Ok(ResidueFunctional { milnor: m.clone(), powers, lift, det_t })
}

impl ResidueFunctional {
    /// `x_i^{N_i} = Σ_j T_ij ∂_j f` for every `i`.
    pub fn re_expansion_holds(&self) -> Result<bool> {
        let ring = self.milnor.ring();
        let d = partials(&self.milnor.f)?;
        Ok((0..ring.n()).all(|i| {
            let sum = (0..ring.n()).fold(Poly::zero(ring), |acc, j| acc.add(&self.lift.get(i, j).mul(&d[j])));
            sum == Poly::var(ring, i).pow(self.powers[i])
        }))
    }

    /// Coefficient of `x^{N-1}` in `h·det T`.
    pub fn residue(&self, h: &Poly) -> Rational {
        let target: Vec<u32> = self.powers.iter().map(|&p| p - 1).collect();
        let mut acc = Rational::zero();
        for (m, c) in h.terms() {
            if m.0.iter().zip(&target).all(|(a, b)| a <= b) {
                let rest = Monomial(target.iter().zip(&m.0).map(|(b, a)| b - a).collect());
                let dc = self.det_t.coeff(&rest);
                if !dc.is_zero() {
                    acc += c * dc;
                }
            }
        }
        acc
    }

    /// `Res(b_i b_j)` on the standard monomial basis.
    pub fn gram_matrix(&self) -> Vec<Vec<Rational>> {
        let b = self.milnor.basis_polys();
        b.iter().map(|x| b.iter().map(|y| self.residue(&x.mul(y))).collect()).collect()
    }

    pub fn is_nondegenerate(&self) -> bool {
        rank_dense(&self.gram_matrix()) == self.milnor.mu
    }
}

/// `(-1)^{n(n-1)/2}`.
pub fn pv_sign(n: usize) -> Rational {
    if (n * n.saturating_sub(1) / 2).is_multiple_of(2) {
        Rational::one()
    } else {
        -Rational::one()
    }
}

/// Global scale of the pairing `⟨a, b⟩ = κ·(-1)^{n(n-1)/2}·Res(ab)`, fixed by
/// requiring the Riemann-Roch identity on the node `xy = x·y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairingNormalization {
    pub kappa: Rational,
}

impl PairingNormalization {
    pub fn calibrate() -> Result<PairingNormalization> {
        let ring = Ring::new(&["x", "y"], &[])?;
        let (x, y) = (Poly::var(&ring, 0), Poly::var(&ring, 1));
        let e = MatrixFactorization::new(
            x.mul(&y),
            PolyMatrix::from_rows(&ring, vec![vec![x]])?,
            PolyMatrix::from_rows(&ring, vec![vec![y]])?,
        )?;
        let milnor = milnor_algebra(e.potential())?;
        let res = residue_functional(&milnor)?;
        let chi = euler_char(&e, &e)?;
        let ch = top_chern_class(&e, &Connection::trivial(&e), &milnor)?.scale(&pv_sign(2));
        let raw = pv_sign(2) * res.residue(&ch.mul(&ch));
        if raw.is_zero() {
            return Err(Error::Shape("degenerate calibration".into()));
        }
        Ok(PairingNormalization { kappa: Rational::from_integer(chi.into()) / raw })
    }

    pub fn describe(&self) -> String {
        format!("<a,b> = {} * (-1)^(n(n-1)/2) * Res(a*b); ch_PV = (-1)^(n(n-1)/2) * c_top", crate::poly::render_rational(&self.kappa))
    }
}

/// `⟨a, b⟩` on the Milnor algebra.
pub fn pairing(res: &ResidueFunctional, norm: &PairingNormalization, a: &Poly, b: &Poly) -> Rational {
    let n = res.milnor.ring().n();
    &norm.kappa * pv_sign(n) * res.residue(&a.mul(b))
}

/// Choice of homology engine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Engine {
    /// Graded strands when the data is quasi-homogeneous, Gröbner otherwise.
    #[default]
    Auto,
    Graded,
    Groebner,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct HomologyOptions {
    pub engine: Engine,
    /// Overrides the default `(2μ + 2n)·max w`.
    pub degree_bound: Option<i64>,
}

fn graded_options(f: &Poly, weights: &[u32], opts: &HomologyOptions) -> Result<GradedOptions> {
    let milnor = milnor_algebra(f)?;
    let n = f.ring().n() as i64;
    let wmax = i64::from(*weights.iter().max().unwrap_or(&1));
    let degree_bound = opts.degree_bound.unwrap_or((2 * milnor.mu as i64 + 2 * n) * wmax);
    Ok(GradedOptions { degree_bound, socle_degree: milnor.socle_degree(weights) })
}

fn run_engine(
    f: &Poly,
    opts: &HomologyOptions,
    graded: impl FnOnce(&[u32]) -> Result<TwoPeriodicComplex>,
    plain: impl FnOnce() -> Result<TwoPeriodicComplex>,
) -> Result<LengthSequence> {
    let weights = f.ring().weights().to_vec();
    let try_graded = || -> Result<LengthSequence> {
        let c = graded(&weights)?;
        graded_homology_lengths(&c, graded_options(f, &weights, opts)?)
    };
    match opts.engine {
        Engine::Graded => try_graded(),
        Engine::Groebner => gb_homology_lengths(&plain()?),
        Engine::Auto => match try_graded() {
            Err(Error::NotGraded(_) | Error::NonIsolated | Error::NoCriticalPoint) => gb_homology_lengths(&plain()?),
            other => other,
        },
    }
}

/// Homology lengths of the Hom complex from `e` to `g`.
pub fn hom_lengths(e: &MatrixFactorization, g: &MatrixFactorization, opts: &HomologyOptions) -> Result<LengthSequence> {
    if e.potential() != g.potential() {
        return Err(Error::PotentialMismatch);
    }
    if e.rank() == 0 || g.rank() == 0 {
        return Ok(LengthSequence { even: 0, odd: 0, by_degree: vec![], last_degree: None, stabilized: true });
    }
    run_engine(e.potential(), opts, |w| hom_complex_graded(e, g, w), || hom_complex(e, g))
}

/// `χ(e, g) = len H^0 - len H^1` of the Hom complex.
pub fn euler_char(e: &MatrixFactorization, g: &MatrixFactorization) -> Result<i64> {
    euler_char_with(e, g, &HomologyOptions::default())
}

pub fn euler_char_with(e: &MatrixFactorization, g: &MatrixFactorization, opts: &HomologyOptions) -> Result<i64> {
    Ok(hom_lengths(e, g, opts)?.euler())
}

/// Stable `len Tor_even - len Tor_odd` of `coker A` against the module
/// presented by `presentation`.
pub fn theta(e: &MatrixFactorization, presentation: &PolyMatrix) -> Result<i64> {
    theta_with(e, presentation, &HomologyOptions::default())
}

pub fn theta_with(e: &MatrixFactorization, presentation: &PolyMatrix, opts: &HomologyOptions) -> Result<i64> {
    if e.rank() == 0 || presentation.rows() == 0 {
        return Ok(0);
    }
    Ok(run_engine(e.potential(), opts, |w| tor_complex_graded(e, presentation, w), || tor_complex(e, presentation))?
        .euler())
}

/// Factorization attached to a module over `Q/g`, with the syzygy index it
/// was read off at.
#[derive(Debug, Clone)]
pub struct RealizedModule {
    pub mf: MatrixFactorization,
    pub syzygy_index: usize,
}

pub const DEFAULT_MAX_STEPS: usize = 12;

/// Herbrand difference `h(M, N) = (-1)^{s_M + s_N} χ(E_M, E_N)`.
#[derive(Debug, Clone)]
pub struct HerbrandReport {
    pub h: i64,
    pub chi: i64,
    pub m: RealizedModule,
    pub n: RealizedModule,
}

pub fn realize_presentation(presentation: &PolyMatrix, g: &Poly) -> Result<RealizedModule> {
    let p = eisenbud_periodic_mf(presentation, g, DEFAULT_MAX_STEPS)?;
    Ok(RealizedModule { mf: p.mf, syzygy_index: p.syzygy_index })
}

fn signed(v: i64, s: usize) -> i64 {
    if s.is_multiple_of(2) {
        v
    } else {
        -v
    }
}

pub fn herbrand(m: &PolyMatrix, n: &PolyMatrix, g: &Poly, opts: &HomologyOptions) -> Result<HerbrandReport> {
    let m = realize_presentation(m, g)?;
    let n = realize_presentation(n, g)?;
    let chi = euler_char_with(&m.mf, &n.mf, opts)?;
    Ok(HerbrandReport { h: signed(chi, m.syzygy_index + n.syzygy_index), chi, m, n })
}

/// Both sides of `χ(e, g) = ⟨ch(e), ch(g)⟩`.
#[derive(Debug, Clone)]
pub struct PvReport {
    pub n: usize,
    pub chi: i64,
    pub pairing: Rational,
    pub ch_e: Option<Poly>,
    pub ch_g: Option<Poly>,
    pub equal: bool,
}

/// For odd `n` there is no top class and the right side is 0.
pub fn pv_check(
    e: &MatrixFactorization,
    g: &MatrixFactorization,
    norm: &PairingNormalization,
    opts: &HomologyOptions,
) -> Result<PvReport> {
    if e.potential() != g.potential() {
        return Err(Error::PotentialMismatch);
    }
    let n = e.ring().n();
    let chi = euler_char_with(e, g, opts)?;
    if n % 2 == 1 {
        return Ok(PvReport { n, chi, pairing: Rational::zero(), ch_e: None, ch_g: None, equal: chi == 0 });
    }
    let milnor = milnor_algebra(e.potential())?;
    let res = residue_functional(&milnor)?;
    let ch = |x: &MatrixFactorization| -> Result<Poly> {
        Ok(top_chern_class(x, &Connection::trivial(x), &milnor)?.scale(&pv_sign(n)))
    };
    let (ch_e, ch_g) = (ch(e)?, ch(g)?);
    let value = pairing(&res, norm, &ch_e, &ch_g);
    let equal = value == Rational::from_integer(chi.into());
    Ok(PvReport { n, chi, pairing: value, ch_e: Some(ch_e), ch_g: Some(ch_g), equal })
}

/// `θ(coker e, coker g)` against `-h(Hom(coker e, R), coker g)` on a hypersurface.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DaoReport {
    pub theta: i64,
    pub h_dual: i64,
    pub holds: bool,
}

pub fn dao_check_c1(e: &MatrixFactorization, g: &MatrixFactorization, opts: &HomologyOptions) -> Result<DaoReport> {
    if e.potential() != g.potential() {
        return Err(Error::PotentialMismatch);
    }
    let theta = theta_with(e, g.a(), opts)?;
    let h_dual = euler_char_with(&module_dual(e), g, opts)?;
    Ok(DaoReport { theta, h_dual, holds: theta == -h_dual })
}

/// A module over the complete intersection, either as a factorization over
/// `Q[T]` or by a presentation matrix over `Q`.
#[derive(Debug, Clone)]
pub enum ModuleData {
    Twisted(TwistedMf),
    Presentation(PolyMatrix),
}

#[derive(Debug, Clone)]
pub struct HcReport {
    pub point: Vec<Rational>,
    pub g: Poly,
    pub c: usize,
    /// Herbrand difference over `Q/g`.
    pub h: i64,
    pub hc: Rational,
    /// `None` unless data for `Hom(M, R)` was supplied.
    pub etac: Option<Rational>,
    pub syzygy_indices: (usize, usize),
}

fn realize(data: &ModuleData, g: &Poly, point: &[Rational]) -> Result<RealizedModule> {
    match data {
        ModuleData::Twisted(e) => {
            let mf = specialize_twisted(e, point)?;
            if mf.potential() != g {
                return Err(Error::PotentialMismatch);
            }
            Ok(RealizedModule { mf, syzygy_index: 0 })
        }
        ModuleData::Presentation(p) => realize_presentation(p, g),
    }
}

/// `h_c(M, N) = ½ h^{Q/g}(M, N)` with `g = Σ a_i f_i`, and
/// `η_c = (-1)^c h_c(Hom(M, R), N)` when `m_dual` is given.
pub fn hc_and_etac(
    f_list: &[Poly],
    m: &ModuleData,
    n: &ModuleData,
    m_dual: Option<&ModuleData>,
    point: &[Rational],
    opts: &HomologyOptions,
) -> Result<HcReport> {
    let g = crate::strata::linear_combination(f_list, point)?;
    let c = f_list.len();
    let half = Rational::new(1.into(), 2.into());
    let h_of = |x: &ModuleData, y: &ModuleData| -> Result<(i64, usize, usize)> {
        let ex = realize(x, &g, point)?;
        let ey = realize(y, &g, point)?;
        let chi = euler_char_with(&ex.mf, &ey.mf, opts)?;
        Ok((signed(chi, ex.syzygy_index + ey.syzygy_index), ex.syzygy_index, ey.syzygy_index))
    };
    let (h, sm, sn) = h_of(m, n)?;
    let etac = match m_dual {
        Some(d) => {
            let (hd, _, _) = h_of(d, n)?;
            let v = Rational::from_integer(hd.into()) * &half;
            Some(if c.is_multiple_of(2) { v } else { -v })
        }
        None => None,
    };
    Ok(HcReport {
        point: point.to_vec(),
        g,
        c,
        h,
        hc: Rational::from_integer(h.into()) * half,
        etac,
        syzygy_indices: (sm, sn),
    })
}

#[derive(Debug, Clone)]
pub struct CtopTrial {
    pub point: Vec<Rational>,
    pub g: Poly,
    pub mu: usize,
    pub top_class: Poly,
    pub vanishes: bool,
    /// The specialized factorization when the class does not vanish.
    pub counterexample: Option<MatrixFactorization>,
}

#[derive(Debug, Clone)]
pub struct CtopSuiteReport {
    pub trials: Vec<CtopTrial>,
    pub attempts: usize,
    pub all_vanish: bool,
}

/// `c^top(specialize(e, a))` in the Milnor algebra of `g = Σ a_i f_i` for
/// `trials` sampled points with isolated critical locus.
pub fn ctop_vanishing_suite(f_list: &[Poly], e: &TwistedMf, trials: usize, seed: u64) -> Result<CtopSuiteReport> {
    let max_attempts = 50 * trials + 100;
    let mut out = Vec::new();
    let mut attempts = 0;
    for point in PointSampler::new(f_list.len(), seed, DEFAULT_SEARCH_BOUND) {
        if out.len() == trials {
            break;
        }
        if attempts == max_attempts {
            return Err(Error::SearchExhausted(attempts));
        }
        attempts += 1;
        let Some(cert) = certify_point(f_list, &point)? else { continue };
        // the potential of e may be a multiple of Σ T_i f_i (tensor powers)
        let mf = specialize_twisted(e, &point)?;
        let milnor = match milnor_algebra(mf.potential()) {
            Ok(m) => m,
            Err(Error::NoCriticalPoint) => continue,
            Err(err) => return Err(err),
        };
        let top_class = top_chern_class(&mf, &Connection::trivial(&mf), &milnor)?;
        let vanishes = top_class.is_zero();
        out.push(CtopTrial {
            point,
            g: cert.g,
            mu: milnor.mu,
            top_class,
            vanishes,
            counterexample: (!vanishes).then_some(mf),
        });
    }
    if out.len() < trials {
        return Err(Error::SearchExhausted(attempts));
    }
    let all_vanish = out.iter().all(|t| t.vanishes);
    Ok(CtopSuiteReport { trials: out, attempts, all_vanish })
}

/// Top class computed after specializing versus the specialization of the
/// trace form computed over `Q[T]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctorialityReport {
    pub specialized_first: Poly,
    pub specialized_last: Poly,
    pub equal: bool,
}

pub fn functoriality_check(e: &TwistedMf, point: &[Rational]) -> Result<FunctorialityReport> {
    let spec = specialize_twisted(e, point)?;
    let milnor = milnor_algebra(spec.potential())?;
    let specialized_first = top_chern_class(&spec, &Connection::trivial(&spec), &milnor)?;
    let over_t = MatrixFactorization::new(e.potential().clone(), e.a().clone(), e.b().clone())?;
    if over_t.ring().n() % 2 != 0 {
        return Err(Error::OddDimensionTop);
    }
    let form = chern_forms(&over_t, &Connection::trivial(&over_t))?.top.top_coefficient();
    let specialized_last = milnor.normal_form(&form.specialize_t(point)?);
    let equal = specialized_first == specialized_last;
    Ok(FunctorialityReport { specialized_first, specialized_last, equal })
}

/// Collected invariants of a pair of modules or factorizations.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct InvariantReport {
    pub chi: Option<i64>,
    pub h: Option<i64>,
    pub theta: Option<i64>,
    pub hc: Option<Rational>,
    pub etac: Option<Rational>,
    pub pv_lhs: Option<Rational>,
    pub pv_rhs: Option<Rational>,
    pub ctop_vanishes: Option<bool>,
}

impl InvariantReport {
    /// `h = χ` and `pv_lhs = pv_rhs` whenever both sides are present.
    pub fn consistent(&self) -> bool {
        let h_ok = match (self.h, self.chi) {
            (Some(h), Some(c)) => h == c,
            _ => true,
        };
        let pv_ok = match (&self.pv_lhs, &self.pv_rhs) {
            (Some(a), Some(b)) => a == b,
            _ => true,
        };
        h_ok && pv_ok
    }
}
