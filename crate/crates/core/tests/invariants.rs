use mfcalc::connection::Connection;
use mfcalc::invariants::*;
use mfcalc::mf::{direct_sum, koszul_mf, koszul_twisted, shift, tensor_twisted, MatrixFactorization};
use mfcalc::*;

fn ring(names: &[&str]) -> Ring {
    Ring::new(names, &[]).unwrap()
}

fn p(s: &str, r: &Ring) -> Poly {
    parse_poly(s, r).unwrap()
}

fn kos(pairs: &[(&str, &str)], r: &Ring) -> MatrixFactorization {
    koszul_mf(&pairs.iter().map(|(a, b)| (p(a, r), p(b, r))).collect::<Vec<_>>()).unwrap()
}

fn hessian_det(f: &Poly) -> Poly {
    let n = f.ring().n();
    let rows = (0..n)
        .map(|i| (0..n).map(|j| f.derivative(i).unwrap().derivative(j).unwrap()).collect())
        .collect();
    PolyMatrix::from_rows(f.ring(), rows).unwrap().det().unwrap()
}

#[test]
fn residue_of_hessian_is_milnor_number() {
    let r2 = ring(&["x", "y"]);
    let r3 = ring(&["x", "y", "z"]);
    for f in [
        p("x*y", &r2),
        p("x^2 + y^3", &r2),
        p("x^3 + y^3", &r2),
        p("x^2 + y^6", &r2),
        p("y*(x^2 - y^2)", &r2),
        p("x^3 + y^4", &r2),
        p("x^2*y + y^4", &r2),
        p("x*y + z^3", &r3),
        p("x^3 + y^3 + z^3", &r3),
    ] {
        let m = milnor_algebra(&f).unwrap();
        let res = residue_functional(&m).unwrap();
        assert_eq!(res.residue(&hessian_det(&f)), rat(m.mu as i64), "{f}");
        assert!(res.is_nondegenerate(), "{f}");
    }
}

#[test]
fn engines_agree_on_euler_characteristics() {
    let r2 = ring(&["x", "y"]);
    let r32 = Ring::with_weights(&["x", "y"], &[], &[3, 2]).unwrap();
    let r21 = Ring::with_weights(&["x", "y"], &[], &[2, 1]).unwrap();
    let graded = HomologyOptions { engine: Engine::Graded, degree_bound: None };
    let gb = HomologyOptions { engine: Engine::Groebner, degree_bound: None };
    let cases = [
        (kos(&[("x", "y")], &r2), kos(&[("x", "y")], &r2)),
        (kos(&[("x", "y")], &r2), kos(&[("y", "x")], &r2)),
        (kos(&[("x - y", "x + y")], &r2), kos(&[("x + y", "x - y")], &r2)),
        (kos(&[("x", "x"), ("y", "y^2")], &r32), kos(&[("x", "x"), ("y", "y^2")], &r32)),
        (kos(&[("x - y^2", "x + y^2")], &r21), kos(&[("x - y^2", "x + y^2")], &r21)),
    ];
    for (e, g) in &cases {
        let a = euler_char_with(e, g, &graded).unwrap();
        let b = euler_char_with(e, g, &gb).unwrap();
        assert_eq!(a, b, "{e:?} {g:?}");
    }
}

#[test]
fn euler_characteristic_is_biadditive_and_shift_odd() {
    let r2 = ring(&["x", "y"]);
    let e = kos(&[("x - y", "x + y")], &r2);
    let e2 = kos(&[("x + y", "x - y")], &r2);
    let s = direct_sum(&e, &e2).unwrap();
    for g in [&e, &e2] {
        assert_eq!(euler_char(&s, g).unwrap(), euler_char(&e, g).unwrap() + euler_char(&e2, g).unwrap());
        assert_eq!(euler_char(&e, &shift(g)).unwrap(), -euler_char(&e, g).unwrap());
    }
}

#[test]
fn riemann_roch_on_even_examples() {
    let norm = PairingNormalization::calibrate().unwrap();
    let opts = HomologyOptions::default();
    let r2 = ring(&["x", "y"]);
    let r31 = Ring::with_weights(&["x", "y"], &[], &[3, 1]).unwrap();
    let r4 = ring(&["x1", "x2", "x3", "x4"]);
    let quadric = kos(&[("1/2*(x3 - x2)", "x3 + x2"), ("3/2*(x4 - x1)", "x4 + x1")], &r4);
    let cases = vec![
        (kos(&[("x", "x"), ("y", "y")], &r2), kos(&[("x", "x"), ("y", "y")], &r2)),
        (kos(&[("x - y", "x + y")], &r2), kos(&[("x + y", "x - y")], &r2)),
        (kos(&[("x", "x"), ("y", "y^5")], &r31), kos(&[("x", "x"), ("y", "y^5")], &r31)),
        (kos(&[("x + y", "x^2 - x*y + y^2")], &r2), kos(&[("x + y", "x^2 - x*y + y^2")], &r2)),
        (kos(&[("y", "x^2 - y^2")], &r2), kos(&[("x - y", "x*y + y^2")], &r2)),
        (kos(&[("x1", "x2"), ("x3", "x4")], &r4), kos(&[("x1", "x2"), ("x3", "x4")], &r4)),
        (quadric.clone(), quadric.clone()),
    ];
    for (e, g) in &cases {
        let rep = pv_check(e, g, &norm, &opts).unwrap();
        assert!(rep.equal, "{rep:?}");
    }
    let s = direct_sum(&quadric, &shift(&quadric)).unwrap();
    let rep = pv_check(&quadric, &s, &norm, &opts).unwrap();
    assert_eq!((rep.chi, rep.pairing), (0, rat(0)));
}

#[test]
fn odd_dimension_euler_characteristic_vanishes() {
    let norm = PairingNormalization::calibrate().unwrap();
    let opts = HomologyOptions::default();
    let r1 = ring(&["x"]);
    let r3 = ring(&["x", "y", "z"]);
    let cases = vec![
        kos(&[("x", "x")], &r1),
        kos(&[("x", "x^2")], &r1),
        kos(&[("x", "y"), ("z", "z")], &r3),
        kos(&[("x", "x"), ("y", "y"), ("z", "z")], &r3),
    ];
    for e in &cases {
        let rep = pv_check(e, e, &norm, &opts).unwrap();
        assert_eq!(rep.chi, 0, "{e:?}");
        assert!(rep.equal);
    }
}

#[test]
fn top_class_is_connection_independent() {
    let r2 = ring(&["x", "y"]);
    let r32 = Ring::with_weights(&["x", "y"], &[], &[3, 2]).unwrap();
    // the cusp class is zero since its factorization category has torsion K_0;
    // for x^2 + y^2 the trace of dA dB already vanishes identically
    for (e, nonzero) in [
        (kos(&[("x", "y")], &r2), true),
        (kos(&[("x", "x"), ("y", "y^2")], &r32), false),
        (kos(&[("x - y^2", "x + y^2")], &r2), true),
        (kos(&[("x - y", "x + y")], &r2), true),
        (kos(&[("x", "x"), ("y", "y")], &r2), false),
    ] {
        let m = milnor_algebra(e.potential()).unwrap();
        let classes = top_classes_across_connections(&e, &m, 10, 11).unwrap();
        assert_eq!(!classes[0].is_zero(), nonzero, "{e:?} {}", classes[0]);
        assert!(classes.iter().all(|c| c == &classes[0]));
        let cc = chern_character(&e, &Connection::trivial(&e), &m).unwrap();
        assert_eq!(cc.top_class.as_ref(), Some(&classes[0]));
    }
}

#[test]
fn jacobian_complex_is_exact_below_top() {
    let r2 = ring(&["x", "y"]);
    for (f, w, mu) in [("x*y", [1, 1], 1), ("x^2 + y^3", [3, 2], 2), ("x^3 + y^3", [1, 1], 4)] {
        let rep = jacobian_complex_check(&p(f, &r2), &w, None).unwrap();
        assert!(rep.exact_below_top, "{f}");
        assert_eq!(rep.top_dimension, mu, "{f}");
        assert_eq!(milnor_algebra(&p(f, &r2)).unwrap().mu, mu);
    }
}

fn two_quadrics() -> (Ring, Vec<Poly>) {
    let rt = Ring::new(&["x1", "x2", "x3", "x4"], &["T1", "T2"]).unwrap();
    let base = rt.base();
    let f = vec![
        p("1/2*(x1^2 + x2^2 + x3^2 + x4^2)", &base),
        p("1/2*(x1^2 + 2*x2^2 + 3*x3^2 + 4*x4^2)", &base),
    ];
    (rt, f)
}

#[test]
fn top_class_vanishes_on_two_quadrics() {
    let (rt, f) = two_quadrics();
    let e = koszul_twisted(&rt, &f).unwrap();
    let e2 = tensor_twisted(&e, &e).unwrap();
    for (mf, trials) in [(&e, 20), (&e2, 5)] {
        let rep = ctop_vanishing_suite(&f, mf, trials, 42).unwrap();
        assert_eq!(rep.trials.len(), trials);
        assert!(rep.all_vanish);
    }
    let fr = functoriality_check(&e2, &[rat(-5), rat(2)]).unwrap();
    assert!(fr.equal);
}

#[test]
fn hc_scaling_invariance() {
    let (rt, f) = two_quadrics();
    let r = rt.base();
    let k = ModuleData::Presentation(PolyMatrix::from_rows(&r, vec![vec![p("x1", &r), p("x2", &r), p("x3", &r), p("x4", &r)]]).unwrap());
    let kos = ModuleData::Twisted(koszul_twisted(&rt, &f).unwrap());
    let opts = HomologyOptions::default();
    let a = hc_and_etac(&f, &k, &kos, None, &[rat(-5), rat(2)], &opts).unwrap();
    let b = hc_and_etac(&f, &k, &kos, None, &[rat(-10), rat(4)], &opts).unwrap();
    assert_eq!(a.hc, b.hc);
    assert_eq!(a.hc, rat(0));
}
