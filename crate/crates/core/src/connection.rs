//! Connections `∇ = d + Γ` on the free summands of a factorization, the
//! Atiyah pair `[∇, δ]`, and the products of `1 + At` that feed the Chern
//! character.

use rand::Rng;

use crate::error::{Error, Result};
use crate::forms::{Form, FormMatrix};
use crate::matrix::PolyMatrix;
use crate::mf::MatrixFactorization;
use crate::poly::{monomials_of_weighted_degree, Monomial, Poly, Rational, Ring};

/// `∇_i = d + gamma_i` on `E_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Connection {
    pub gamma0: FormMatrix,
    pub gamma1: FormMatrix,
}

impl Connection {
    pub fn trivial(e: &MatrixFactorization) -> Connection {
        let r = e.rank();
        Connection { gamma0: FormMatrix::zeros(e.ring(), r, r), gamma1: FormMatrix::zeros(e.ring(), r, r) }
    }

    /// Random 1-form matrices with integer coefficients in `[-3, 3]` on
    /// monomials of total degree at most `degree`.
    pub fn random<R: Rng>(ring: &Ring, r: usize, degree: u32, rng: &mut R) -> Connection {
        let n = ring.n();
        let ones = vec![1u32; n];
        let monos: Vec<Monomial> = (0..=u64::from(degree))
            .flat_map(|d| monomials_of_weighted_degree(&ones, d))
            .map(|mut e| {
                e.resize(ring.arity(), 0);
                Monomial(e)
            })
            .collect();
        let one_form = |rng: &mut R| {
            let mut f = Form::zero(ring);
            for i in 0..n {
                let mut p = Poly::zero(ring);
                for m in &monos {
                    if rng.gen_bool(0.3) {
                        p.add_term(m.clone(), Rational::from_integer(rng.gen_range(-3i64..=3).into()));
                    }
                }
                f = f.add(&Form::dx(ring, i).scale_poly(&p));
            }
            f
        };
        let mat = |rng: &mut R| {
            let mut m = FormMatrix::zeros(ring, r, r);
            for i in 0..r {
                for j in 0..r {
                    m.set(i, j, one_form(rng));
                }
            }
            m
        };
        let gamma0 = mat(rng);
        let gamma1 = mat(rng);
        Connection { gamma0, gamma1 }
    }

    fn check(&self, e: &MatrixFactorization) -> Result<()> {
        let r = e.rank();
        for g in [&self.gamma0, &self.gamma1] {
            if g.rows() != r || g.cols() != r {
                return Err(Error::Shape(format!("connection matrices must be {r}x{r}")));
            }
        }
        Ok(())
    }
}

/// Atiyah pair `(∇0 A - A ∇1, ∇1 B - B ∇0)`, i.e.
/// `(dA + Γ0 A - A Γ1, dB + Γ1 B - B Γ0)`.
pub fn atiyah(e: &MatrixFactorization, c: &Connection) -> Result<(FormMatrix, FormMatrix)> {
    c.check(e)?;
    let at = |m: &PolyMatrix, g_tgt: &FormMatrix, g_src: &FormMatrix| -> Result<FormMatrix> {
        FormMatrix::d_entrywise(m).add(&g_tgt.mul_poly(m)?)?.sub(&FormMatrix::poly_mul(m, g_src)?)
    };
    Ok((at(e.a(), &c.gamma0, &c.gamma1)?, at(e.b(), &c.gamma1, &c.gamma0)?))
}

fn nabla(gamma: &FormMatrix, s: &[Form]) -> Result<Vec<Form>> {
    let mut out = Vec::with_capacity(s.len());
    for (i, si) in s.iter().enumerate() {
        let mut v = si.d_form();
        for (j, sj) in s.iter().enumerate() {
            v = v.add(&gamma.get(i, j).wedge(sj));
        }
        out.push(v);
    }
    Ok(out)
}

fn apply(m: &PolyMatrix, s: &[Form]) -> Vec<Form> {
    (0..m.rows())
        .map(|i| (0..m.cols()).fold(Form::zero(m.ring()), |acc, j| acc.add(&s[j].scale_poly(m.get(i, j)))))
        .collect()
}

/// The commutator `∇0(A s) - A(∇1 s)` evaluated on a section, with `d`
/// acting on the section's coefficients. Equals `At_A · s` exactly when the
/// Atiyah pair is linear over functions.
pub fn atiyah_on_section(e: &MatrixFactorization, c: &Connection, s: &[Poly]) -> Result<Vec<Form>> {
    c.check(e)?;
    let s: Vec<Form> = s.iter().map(|p| Form::scalar(p.clone())).collect();
    let lhs = nabla(&c.gamma0, &apply(e.a(), &s))?;
    let rhs = apply(e.a(), &nabla(&c.gamma1, &s)?);
    Ok(lhs.iter().zip(&rhs).map(|(a, b)| a.sub(b)).collect())
}

/// `Ψ = (id, At)` into the factorization of first-order jets, with target
/// differentials `[[A, 0], [dW, -B]]` and `[[B, 0], [dW, -A]]`.
#[derive(Debug, Clone)]
pub struct StrictMorphismData {
    /// `E0 -> E0 ⊕ Ω¹⊗E1`
    pub psi0: FormMatrix,
    /// `E1 -> E1 ⊕ Ω¹⊗E0`
    pub psi1: FormMatrix,
    /// source differentials as form matrices
    pub a: FormMatrix,
    pub b: FormMatrix,
    /// `E1 ⊕ Ω¹E0 -> E0 ⊕ Ω¹E1`
    pub target_d1: FormMatrix,
    /// `E0 ⊕ Ω¹E1 -> E1 ⊕ Ω¹E0`
    pub target_d0: FormMatrix,
}

impl StrictMorphismData {
    /// Both squares commute: `target_d1 Ψ1 = Ψ0 A` and `target_d0 Ψ0 = Ψ1 B`.
    pub fn is_strict(&self) -> Result<bool> {
        let left1 = self.target_d1.mul(&self.psi1)?;
        let right1 = self.psi0.mul(&self.a)?;
        let left0 = self.target_d0.mul(&self.psi0)?;
        let right0 = self.psi1.mul(&self.b)?;
        Ok(left1 == right1 && left0 == right0)
    }

    /// The target pair is itself a factorization of `f`.
    pub fn target_is_factorization(&self, f: &Poly) -> Result<bool> {
        let r2 = self.target_d0.rows();
        let fi = FormMatrix::from_poly_matrix(&PolyMatrix::scalar(f, r2));
        Ok(self.target_d1.mul(&self.target_d0)? == fi && self.target_d0.mul(&self.target_d1)? == fi)
    }
}

fn stack(top: &FormMatrix, bottom: &FormMatrix) -> FormMatrix {
    let mut m = FormMatrix::zeros(top.ring(), top.rows() + bottom.rows(), top.cols());
    for i in 0..top.rows() {
        for j in 0..top.cols() {
            m.set(i, j, top.get(i, j).clone());
        }
    }
    for i in 0..bottom.rows() {
        for j in 0..bottom.cols() {
            m.set(top.rows() + i, j, bottom.get(i, j).clone());
        }
    }
    m
}

fn block2(a: &FormMatrix, b: &FormMatrix, c: &FormMatrix, d: &FormMatrix) -> FormMatrix {
    let (r, s) = (a.rows(), a.cols());
    let mut m = FormMatrix::zeros(a.ring(), r + c.rows(), s + b.cols());
    for (blk, ro, co) in [(a, 0, 0), (b, 0, s), (c, r, 0), (d, r, s)] {
        for i in 0..blk.rows() {
            for j in 0..blk.cols() {
                m.set(ro + i, co + j, blk.get(i, j).clone());
            }
        }
    }
    m
}

pub fn psi(e: &MatrixFactorization, c: &Connection) -> Result<StrictMorphismData> {
    let (at_a, at_b) = atiyah(e, c)?;
    let ring = e.ring();
    let r = e.rank();
    let id = FormMatrix::identity(ring, r);
    let a = FormMatrix::from_poly_matrix(e.a());
    let b = FormMatrix::from_poly_matrix(e.b());
    let mut dw = FormMatrix::zeros(ring, r, r);
    let df = Form::d(e.potential());
    for i in 0..r {
        dw.set(i, i, df.clone());
    }
    let zero = FormMatrix::zeros(ring, r, r);
    Ok(StrictMorphismData {
        psi0: stack(&id, &at_b),
        psi1: stack(&id, &at_a),
        target_d1: block2(&a, &zero, &dw, &b.neg()),
        target_d0: block2(&b, &zero, &dw, &a.neg()),
        a,
        b,
    })
}

/// Alternating product of `j` factors `(1 + At_A)` and `(1 + At_B)`, the
/// rightmost being `1 + At_B`; an endomorphism of `E0` for even `j`.
pub fn psi_power(e: &MatrixFactorization, c: &Connection, j: usize) -> Result<FormMatrix> {
    let (at_a, at_b) = atiyah(e, c)?;
    alternating_product(e.ring(), e.rank(), &at_a, &at_b, j)
}

fn alternating_product(ring: &Ring, r: usize, first: &FormMatrix, second: &FormMatrix, j: usize) -> Result<FormMatrix> {
    let id = FormMatrix::identity(ring, r);
    let one_plus = |m: &FormMatrix| id.add(m);
    let (fa, fb) = (one_plus(first)?, one_plus(second)?);
    let mut acc = id.clone();
    for k in 0..j {
        let factor = if k % 2 == 0 { &fb } else { &fa };
        acc = factor.mul(&acc)?;
    }
    Ok(acc)
}

/// Chern character forms: component `2i` is
/// `(1/n!)(tr P0 - tr P1)` in form degree `2i`, with `P0` the `n`-fold
/// product on `E0` and `P1` the same product starting from `E1`.
#[derive(Debug, Clone)]
pub struct ChernForms {
    pub components: Vec<(usize, Form)>,
    /// `(2/n!) tr(At_A At_B ... At_B)` in top degree (n even), otherwise zero.
    pub top: Form,
}

pub fn chern_forms(e: &MatrixFactorization, c: &Connection) -> Result<ChernForms> {
    let ring = e.ring();
    let n = ring.n();
    let (at_a, at_b) = atiyah(e, c)?;
    let p0 = alternating_product(ring, e.rank(), &at_a, &at_b, n)?;
    let p1 = alternating_product(ring, e.rank(), &at_b, &at_a, n)?;
    let inv_fact = Rational::new(1.into(), (1..=n as u64).product::<u64>().into());
    let super_trace = p0.trace()?.sub(&p1.trace()?).scale(&inv_fact);
    let components = (0..=n / 2).map(|i| (2 * i, super_trace.part(2 * i))).filter(|(_, f)| !f.is_zero()).collect();
    let top = if n.is_multiple_of(2) {
        let mut prod = FormMatrix::identity(ring, e.rank());
        for k in 0..n {
            prod = prod.mul(if k % 2 == 0 { &at_a } else { &at_b })?;
        }
        prod.trace()?.scale(&(inv_fact * Rational::from_integer(2.into())))
    } else {
        Form::zero(ring)
    };
    Ok(ChernForms { components, top })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mf::koszul_mf;
    use crate::parse::parse_poly;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn p(s: &str, r: &Ring) -> Poly {
        parse_poly(s, r).unwrap()
    }

    #[test]
    fn trivial_node() {
        let r = Ring::new(&["x", "y"], &[]).unwrap();
        let e = koszul_mf(&[(p("x", &r), p("y", &r))]).unwrap();
        let c = Connection::trivial(&e);
        let (a, b) = atiyah(&e, &c).unwrap();
        assert_eq!(*a.get(0, 0), Form::dx(&r, 0));
        assert_eq!(*b.get(0, 0), Form::dx(&r, 1));
        assert!(psi(&e, &c).unwrap().is_strict().unwrap());
        assert_eq!(psi_power(&e, &c, 0).unwrap(), FormMatrix::identity(&r, 1));
        let p2 = psi_power(&e, &c, 2).unwrap();
        assert_eq!(p2.get(0, 0).part(2), Form::volume(&r));
        let ch = chern_forms(&e, &c).unwrap();
        assert_eq!(ch.top, Form::volume(&r));
    }

    #[test]
    fn zero_potential_identity() {
        let r = Ring::new(&["x"], &[]).unwrap();
        let z = PolyMatrix::zeros(&r, 1, 1);
        let e = MatrixFactorization::new(p("0", &r), z.clone(), z).unwrap();
        let s = psi(&e, &Connection::trivial(&e)).unwrap();
        assert!(s.is_strict().unwrap());
        assert!(s.target_is_factorization(e.potential()).unwrap());
    }

    #[test]
    fn random_connections_are_strict_and_linear() {
        let r = Ring::new(&["x", "y"], &[]).unwrap();
        let e = koszul_mf(&[(p("x", &r), p("x+y", &r)), (p("y", &r), p("y^2", &r))]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..5 {
            let c = Connection::random(&r, 2, 1, &mut rng);
            let s = psi(&e, &c).unwrap();
            assert!(s.is_strict().unwrap());
            assert!(s.target_is_factorization(e.potential()).unwrap());
            let (at_a, _) = atiyah(&e, &c).unwrap();
            let sec = vec![p("x^2 - 3*y", &r), p("x*y + 1", &r)];
            let via_op = atiyah_on_section(&e, &c, &sec).unwrap();
            let via_mat = at_a.mul_poly(&PolyMatrix::from_columns(&r, 2, std::slice::from_ref(&sec))).unwrap();
            for i in 0..2 {
                assert_eq!(via_op[i], *via_mat.get(i, 0));
            }
        }
    }
}
