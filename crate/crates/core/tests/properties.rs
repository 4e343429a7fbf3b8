use std::collections::HashMap;

use mfcalc::forms::{Form, FormMatrix};
use mfcalc::groebner::{buchberger_in, ideal_gb, quotient_length, syzygies};
use mfcalc::mf::{dual, koszul_mf, shift, tensor};
use mfcalc::*;
use proptest::prelude::*;

fn ring3() -> Ring {
    Ring::new(&["x", "y", "z"], &[]).unwrap()
}

fn poly_strategy(max_deg: u32, max_terms: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec((prop::collection::vec(0..=max_deg, 3), -5i64..=5, 1i64..=3), 0..=max_terms).prop_map(
        |terms| {
            let r = ring3();
            Poly::from_terms(&r, terms.into_iter().map(|(e, n, d)| (Monomial(e), rat_frac(n, d))))
        },
    )
}

fn one_form_strategy() -> impl Strategy<Value = Form> {
    prop::collection::vec(poly_strategy(1, 2), 3).prop_map(|cs| {
        let r = ring3();
        cs.iter().enumerate().fold(Form::zero(&r), |acc, (i, p)| acc.add(&Form::dx(&r, i).scale_poly(p)))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn render_parse_round_trip(p in poly_strategy(3, 6)) {
        let back = parse_poly(&p.render(), p.ring()).unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn ring_axioms(a in poly_strategy(2, 4), b in poly_strategy(2, 4), c in poly_strategy(2, 4)) {
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert!(a.sub(&a).is_zero());
    }

    #[test]
    fn derivatives_commute_and_obey_leibniz(a in poly_strategy(3, 5), b in poly_strategy(3, 5)) {
        let dxy = a.derivative(0).unwrap().derivative(1).unwrap();
        let dyx = a.derivative(1).unwrap().derivative(0).unwrap();
        prop_assert_eq!(dxy, dyx);
        let lhs = a.mul(&b).derivative(2).unwrap();
        let rhs = a.derivative(2).unwrap().mul(&b).add(&a.mul(&b.derivative(2).unwrap()));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn substitution_is_multiplicative(a in poly_strategy(2, 4), b in poly_strategy(2, 4), s in poly_strategy(1, 3)) {
        let r = ring3();
        let map = HashMap::from([(0usize, s.clone()), (2usize, s.add(&Poly::var(&r, 1)))]);
        let lhs = a.mul(&b).substitute(&r, &map).unwrap();
        let rhs = a.substitute(&r, &map).unwrap().mul(&b.substitute(&r, &map).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn normal_form_idempotent_and_linear(g1 in poly_strategy(2, 3), g2 in poly_strategy(2, 3),
                                         p in poly_strategy(3, 5), q in poly_strategy(3, 5)) {
        let r = ring3();
        let gb = ideal_gb(&r, &[g1, g2], &MonomialOrder::Grevlex).unwrap();
        let np = gb.normal_form_poly(&p);
        prop_assert_eq!(gb.normal_form_poly(&np), np.clone());
        prop_assert_eq!(gb.normal_form_poly(&p.add(&q)), np.add(&gb.normal_form_poly(&q)));
        prop_assert!(gb.contains(&FreeElem::scalar(p.sub(&np))));
        prop_assert!(gb.s_pairs_reduce_to_zero());
    }

    #[test]
    fn wedge_is_graded_commutative_and_associative(a in one_form_strategy(), b in one_form_strategy(),
                                                   c in one_form_strategy()) {
        prop_assert_eq!(a.wedge(&b), b.wedge(&a).neg());
        let ab = a.wedge(&b);
        prop_assert_eq!(ab.wedge(&c), c.wedge(&ab));
        prop_assert_eq!(ab.wedge(&c), a.wedge(&b.wedge(&c)));
        prop_assert!(a.wedge(&a).is_zero());
    }

    #[test]
    fn exterior_derivative(p in poly_strategy(3, 5), a in one_form_strategy(), b in one_form_strategy()) {
        prop_assert!(Form::d(&p).d_form().is_zero());
        let lhs = a.wedge(&b).d_form();
        let rhs = a.d_form().wedge(&b).sub(&a.wedge(&b.d_form()));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn supertrace_cyclicity(xs in prop::collection::vec(one_form_strategy(), 8),
                            p in poly_strategy(1, 2)) {
        let r = ring3();
        let mut x = FormMatrix::zeros(&r, 2, 2);
        let mut y = FormMatrix::zeros(&r, 2, 2);
        for k in 0..4 {
            x.set(k / 2, k % 2, xs[k].clone());
            y.set(k / 2, k % 2, xs[k + 4].wedge(&Form::dx(&r, 2)).add(&Form::scalar(p.clone())));
        }
        // x has odd degree; y mixes degrees 0 and 2, both even
        let lhs = x.mul(&y).unwrap().trace().unwrap();
        let rhs = y.mul(&x).unwrap().trace().unwrap();
        prop_assert_eq!(lhs, rhs);
        // tr(XX) = -tr(XX) for odd X
        prop_assert!(x.mul(&x).unwrap().trace().unwrap().is_zero());
    }

    #[test]
    fn syzygies_are_complete(a in poly_strategy(2, 3), b in poly_strategy(2, 3), c in poly_strategy(2, 3)) {
        prop_assume!(!a.is_zero() && !b.is_zero() && !c.is_zero());
        let r = ring3();
        let m = PolyMatrix::from_rows(&r, vec![vec![a.clone(), b.clone(), c.clone()]]).unwrap();
        let syz = syzygies(&m).unwrap();
        for s in &syz {
            prop_assert!(m.mul_vec(&s.components).unwrap().iter().all(Poly::is_zero));
        }
        prop_assume!(!syz.is_empty());
        let gb = buchberger_in(&r, 3, &syz, &MonomialOrder::Grevlex, false).unwrap();
        let z = Poly::zero(&r);
        for koszul in [
            vec![b.clone(), a.neg(), z.clone()],
            vec![c.clone(), z.clone(), a.neg()],
            vec![z.clone(), c.clone(), b.neg()],
        ] {
            prop_assert!(gb.contains(&FreeElem::new(koszul)));
        }
    }

    #[test]
    fn standard_monomial_count_is_order_independent(a in 1u32..=2, b in 1u32..=2, c in 1u32..=2,
                                                    qs in prop::collection::vec(prop::collection::vec(-3i64..=3, 4), 3)) {
        let r = ring3();
        // perturb the pure powers by affine-linear terms of lower degree
        let affine = |q: &[i64]| {
            (0..3).fold(Poly::from_int(&r, q[3]), |acc, i| acc.add(&Poly::var(&r, i).scale(&rat(q[i]))))
        };
        let gens: Vec<Poly> = [a, b, c]
            .iter()
            .enumerate()
            .map(|(i, &e)| Poly::var(&r, i).pow(e + 1).add(&affine(&qs[i])))
            .collect();
        let grevlex = quotient_length(&ideal_gb(&r, &gens, &MonomialOrder::Grevlex).unwrap()).unwrap();
        let lex = quotient_length(&ideal_gb(&r, &gens, &MonomialOrder::Lex).unwrap()).unwrap();
        prop_assert_eq!(grevlex, ((a + 1) * (b + 1) * (c + 1)) as usize);
        prop_assert_eq!(lex, grevlex);
    }

    #[test]
    fn factorization_constructions_validate(ps in prop::collection::vec(poly_strategy(2, 3), 4)) {
        let e = koszul_mf(&[(ps[0].clone(), ps[1].clone()), (ps[2].clone(), ps[3].clone())]).unwrap();
        prop_assert!(e.validate().unwrap().ok());
        prop_assert!(dual(&e).validate().unwrap().ok());
        prop_assert!(shift(&e).validate().unwrap().ok());
        let t = tensor(&e, &dual(&e)).unwrap();
        prop_assert!(t.validate().unwrap().ok());
        prop_assert!(t.potential().is_zero());
    }
}
