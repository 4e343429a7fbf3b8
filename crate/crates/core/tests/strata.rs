use mfcalc::strata::*;
use mfcalc::*;

fn quadrics(a: [i64; 4]) -> Vec<Poly> {
    let r = Ring::new(&["x1", "x2", "x3", "x4"], &[]).unwrap();
    let f1 = parse_poly("1/2*(x1^2 + x2^2 + x3^2 + x4^2)", &r).unwrap();
    let f2 = (0..4).fold(Poly::zero(&r), |acc, i| {
        acc.add(&Poly::var(&r, i).pow(2).scale(&rat_frac(a[i], 2)))
    });
    vec![f1, f2]
}

#[test]
fn strata_of_two_quadrics() {
    for a in [[1, 2, 3, 4], [-3, 0, 5, 7]] {
        let f = quadrics(a);
        let rep = check_assumptions(&f).unwrap();
        assert!(rep.all_ok(), "{a:?}");
        // the origin, then the union of the coordinate axes
        assert_eq!(rep.strata[0].2, 0);
        assert_eq!(rep.strata[1].2, 1);
        assert_eq!(rep.prefix_dimensions, vec![3, 2]);
        assert_eq!(dw_regular_section_check(&f).unwrap().dimension, 1);
    }
}

#[test]
fn repeated_weights_break_the_strata_bound() {
    // a_1 = a_2 makes the rank-1 locus contain the plane x3 = x4 = 0
    let f = quadrics([1, 1, 3, 4]);
    assert_eq!(stratum_dimension(&f, 1).unwrap(), 2);
    assert!(!check_assumptions(&f).unwrap().strata_ok);
}

#[test]
fn search_is_seeded_and_certified() {
    let f = quadrics([1, 2, 3, 4]);
    let mut seen = Vec::new();
    for seed in 0..5 {
        let c = generic_hypersurface_search(&f, 50, seed).unwrap();
        assert!(c.reverify(&f).unwrap());
        assert_eq!(c, generic_hypersurface_search(&f, 50, seed).unwrap());
        seen.push(c.point);
    }
    let points: Vec<Vec<Rational>> = PointSampler::new(2, 9, 10).take(200).collect();
    let mut dedup = points.clone();
    dedup.sort();
    dedup.dedup();
    assert_eq!(dedup.len(), points.len());
    assert!(points.iter().all(|p| p.iter().find(|c| !num_traits::Zero::is_zero(*c)) == Some(&rat(1))));
}
