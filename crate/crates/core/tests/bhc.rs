use nalgebra::Complex;
use num_bigint::BigInt;
use num_traits::ToPrimitive;

use sak_core::arith::{IntPoly, Rational};
use sak_core::bhc::{
    bhc_scan, defining_polynomial, intersect_with_subgroup, relation_lattice, write_csv, RationalCurve, SubgroupOutcome,
};
use sak_core::heights::{certified_roots, weil_height, AlgebraicNumber, Rect};

const TOL: f64 = 1e-9;

fn poly(cs: &[i64]) -> IntPoly {
    IntPoly::from_i64s(cs)
}

fn horner(p: &IntPoly, z: Complex<f64>) -> Complex<f64> {
    p.coeffs()
        .iter()
        .rev()
        .fold(Complex::new(0.0, 0.0), |acc, c| acc * z + c.to_f64().unwrap())
}

/// A box of half-width `1e-7` around `z` with rational corners.
fn rect_around(z: Complex<f64>) -> Rect {
    let scale = 1_000_000_000i64;
    let side = |x: f64| {
        let c = (x * scale as f64).round() as i64;
        [Rational::new(c - 100, scale), Rational::new(c + 100, scale)]
    };
    Rect {
        re: side(z.re),
        im: side(z.im),
    }
}

/// `sum_u 2 h(x_u)` rebuilt from the coordinate minimal polynomials and a
/// numerical root of the factor.
fn independent_height(coords: &[(IntPoly, IntPoly)], factor: &IntPoly, minpolys: &[IntPoly]) -> f64 {
    let root = certified_roots(factor).unwrap()[0].center;
    coords
        .iter()
        .zip(minpolys)
        .map(|((num, den), m)| {
            let x = horner(num, root) / horner(den, root);
            let a = AlgebraicNumber::new(m, rect_around(x)).unwrap();
            2.0 * weil_height(&a).unwrap().value
        })
        .sum()
}

fn check_scan(coords: &[(IntPoly, IntPoly)], bound: u32) -> Option<f64> {
    let curve = RationalCurve::new(coords).unwrap();
    let report = bhc_scan(&curve, bound).unwrap();
    for rec in &report.records {
        assert!(defining_polynomial(&curve, &rec.a).div_exact(&rec.factor).is_some());
        let h = independent_height(coords, &rec.factor, &rec.coordinate_minpolys);
        assert!(
            (rec.height - h).abs() < TOL * (1.0 + h),
            "{:?}: {} vs {h}",
            rec.a,
            rec.height
        );
    }
    report.max_height
}

#[test]
fn heights_match_independent_recomputation() {
    let one = poly(&[1]);
    check_scan(&[(poly(&[0, 1]), one.clone()), (poly(&[1, -1]), one.clone())], 6);
    check_scan(&[(poly(&[2, 1]), one.clone()), (poly(&[1, 0, 1]), poly(&[3, 1]))], 3);
}

#[test]
fn max_height_is_monotone_in_the_bound() {
    let one = poly(&[1]);
    let curves = [
        vec![(poly(&[0, 1]), one.clone()), (poly(&[1, -1]), one.clone())],
        vec![(poly(&[0, 1]), one.clone()), (poly(&[2, 1]), one.clone())],
    ];
    for coords in &curves {
        let mut last = f64::NEG_INFINITY;
        for b in 1..=7 {
            let m = check_scan(coords, b).unwrap_or(f64::NEG_INFINITY);
            assert!(m >= last - TOL, "bound {b}: {m} < {last}");
            last = m;
        }
    }
}

#[test]
fn relation_lattices() {
    let one = poly(&[1]);
    let free = RationalCurve::new(&[(poly(&[0, 1]), one.clone()), (poly(&[1, -1]), one.clone())]).unwrap();
    assert!(relation_lattice(&free).unwrap().is_trivial());
    // (T, T^2) satisfies x^2 / y = 1
    let dependent = RationalCurve::polynomial(&[poly(&[0, 1]), poly(&[0, 0, 1])]).unwrap();
    let lattice = relation_lattice(&dependent).unwrap();
    assert_eq!(lattice.rank(), 1);
    let v = &lattice.basis[0];
    assert!(v == &[BigInt::from(2), BigInt::from(-1)] || v == &[BigInt::from(-2), BigInt::from(1)]);
    assert_eq!(
        intersect_with_subgroup(&dependent, &[2, -1]).unwrap(),
        SubgroupOutcome::WholeCurve
    );
}

#[test]
fn csv_layout() {
    let curve = RationalCurve::polynomial(&[poly(&[0, 1]), poly(&[1, -1])]).unwrap();
    let report = bhc_scan(&curve, 1).unwrap();
    let mut buf = Vec::new();
    write_csv(&report.records, &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("a_vector,factor_poly,degree,height,root_of_unity_flag")
    );
    assert_eq!(lines.count(), report.records.len());
}
