use num_bigint::BigInt;

use fqzeta::congruence::{check_ax_katz, wan_sum, weil_restriction};
use fqzeta::ffield::make_field;
use fqzeta::isocrystal::{slopes, FIsocrystal};
use fqzeta::polygon::{newton_of_polynomial, Polygon, Slope};
use fqzeta::polysys::{count_affine, count_projective, CountOptions, PolySystem};
use fqzeta::rational::{rat, Rational};
use fqzeta::zeta::{
    curve_numerator, middle_factor_from_counts, middle_factor_symmetric, reconstruct_rational, zeta_series,
    CountSequence, WeilData, ZetaFunction,
};

fn opts() -> CountOptions {
    CountOptions::default()
}

fn projective(p: u64, a: usize, n: usize, polys: &[&str]) -> PolySystem {
    PolySystem::parse(&make_field(p, a).unwrap(), n, polys)
        .unwrap()
        .homogeneous(None)
        .unwrap()
}

fn counts(sys: &PolySystem, upto: usize) -> Vec<u64> {
    (1..=upto).map(|s| count_projective(sys, s, &opts()).unwrap()).collect()
}

fn int_rats(p: &[BigInt]) -> Vec<Rational> {
    p.iter().cloned().map(Rational::from_integer).collect()
}

#[test]
fn pade_reconstruction_agrees_with_curve_numerator() {
    for (p, eq) in [
        (2, "x1^2*x2 + x1*x2^2 + x0^3"),
        (3, "x1^2*x2 - x0^3 - 2*x0*x2^2 - x2^3"),
    ] {
        let sys = projective(p, 1, 3, &[eq]);
        let n = counts(&sys, 4);
        let series = zeta_series(&CountSequence::new(p, n.clone()), 4).unwrap();
        let reconstructed = reconstruct_rational(&series, 2, 2).unwrap();
        let weil = WeilData::curve(p, curve_numerator(&n[..1], 1, p).unwrap()).unwrap();
        assert_eq!(reconstructed, weil.zeta());
        for s in 1..=4 {
            assert_eq!(reconstructed.count(s).unwrap(), BigInt::from(n[s - 1]));
        }
    }
}

#[test]
fn frobenius_companion_slopes_match_newton_polygon() {
    // det(I - tA) = 1 + c1 t + c2 t^2 for A = [[0, -c2], [1, -c1]]
    for (p, eq) in [(2, "x1^2*x2 + x1*x2^2 + x0^3"), (2, "x1^2*x2 + x0*x1*x2 + x0^3 + x2^3")] {
        let sys = projective(p, 1, 3, &[eq]);
        let p1 = curve_numerator(&counts(&sys, 1), 1, p).unwrap();
        let c: Vec<Rational> = int_rats(&p1);
        let matrix = vec![vec![rat(0, 1), -c[2].clone()], vec![rat(1, 1), -c[1].clone()]];
        let m = FIsocrystal::new(p, 1, matrix).unwrap();
        let from_isocrystal = slopes(&m).unwrap().to_polygon();
        assert_eq!(from_isocrystal, newton_of_polynomial(&c, p).unwrap());
    }
}

#[test]
fn middle_factor_methods_agree_on_quadric() {
    let sys = projective(3, 1, 4, &["x0*x3 + x1*x2"]);
    let n = counts(&sys, 2);
    let newton = middle_factor_from_counts(3, 2, 2, &n).unwrap();
    let symmetric = middle_factor_symmetric(3, 2, 2, &n).unwrap();
    assert_eq!(newton, symmetric);
    let weil = WeilData::with_middle(3, 2, symmetric).unwrap();
    assert_eq!(
        weil.zeta().count(3).unwrap(),
        BigInt::from(count_projective(&sys, 3, &opts()).unwrap())
    );
}

#[test]
fn restriction_of_scalars_then_wan() {
    let f4 = make_field(2, 2).unwrap();
    let sys = PolySystem::parse(&f4, 2, &["x0^2 + u*x0*x1 + x1 + 1"]).unwrap();
    let restricted = weil_restriction(&sys).unwrap();
    let n = count_affine(&sys, 1, &opts()).unwrap();
    assert_eq!(count_affine(&restricted, 1, &opts()).unwrap(), n);
    for m in 1..=3 {
        let w = wan_sum(&restricted, m, &opts()).unwrap();
        assert!(w.report.verdict.passed());
    }
    assert!(check_ax_katz(&restricted, &opts()).unwrap().verdict.passed());
}

#[test]
fn json_documents_round_trip() {
    let sys = projective(2, 1, 3, &["x0^3*x1 + x1^3*x2 + x2^3*x0"]);
    let back = PolySystem::from_json_str(&sys.to_json().to_string()).unwrap();
    assert_eq!(counts(&back, 3), counts(&sys, 3));

    let weil = WeilData::curve(2, curve_numerator(&counts(&sys, 3), 3, 2).unwrap()).unwrap();
    assert_eq!(WeilData::from_json(&weil.to_json()).unwrap(), weil);

    let zeta = weil.zeta();
    assert_eq!(ZetaFunction::from_json(&zeta.to_json()).unwrap(), zeta);

    let polygon = newton_of_polynomial(&int_rats(&weil.factor(1)), 2).unwrap();
    assert_eq!(Polygon::from_json(&polygon.to_json()).unwrap(), polygon);

    let m = FIsocrystal::new(3, 2, vec![vec![rat(0, 1), rat(9, 1)], vec![rat(1, 1), rat(1, 3)]]).unwrap();
    let back = FIsocrystal::from_json(&m.to_json()).unwrap();
    assert_eq!(slopes(&back).unwrap(), slopes(&m).unwrap());
}

#[test]
fn curve_slopes_are_self_dual() {
    let curves = [
        (2, "x1^2*x2 + x1*x2^2 + x0^3", 1),
        (2, "x1^2*x2 + x0*x1*x2 + x0^3 + x2^3", 1),
        (3, "x1^2*x2 - x0^3 - 2*x0*x2^2 - x2^3", 1),
        (2, "x0^3*x1 + x1^3*x2 + x2^3*x0", 3),
    ];
    for (p, eq, g) in curves {
        let sys = projective(p, 1, 3, &[eq]);
        let p1 = curve_numerator(&counts(&sys, g), g, p).unwrap();
        let polygon = newton_of_polynomial(&int_rats(&p1), p).unwrap();
        let one = Slope::from_integer(1);
        let dual: Vec<_> = polygon.segments().iter().rev().map(|&(a, m)| (one - a, m)).collect();
        assert_eq!(polygon.segments(), dual.as_slice(), "{eq}");
    }
}
