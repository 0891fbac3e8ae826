use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

use sak_core::arith::Rational;
use sak_core::chow::{
    alpha_and_siu, chow_degree, chow_mul, graph_closure_class, toric_intersection_degree,
    toric_intersection_degree_by_ring, ChowClass, MultiProjRing,
};

fn ring_and_class() -> impl Strategy<Value = (MultiProjRing, ChowClass)> {
    prop::collection::vec(1u32..=3, 1..=3).prop_flat_map(|dims| {
        let ring = MultiProjRing::new(dims.clone()).unwrap();
        let n = dims.len();
        let exps = dims.iter().map(|&d| 0..=d).collect::<Vec<_>>();
        prop::collection::vec((exps, -4i64..=4), 1..=4).prop_map(move |terms| {
            let mut c = ChowClass::zero(&ring);
            for (e, k) in terms {
                assert_eq!(e.len(), n);
                c = c.add(&ChowClass::monomial(&ring, e, BigInt::from(k)).unwrap()).unwrap();
            }
            (ring.clone(), c)
        })
    })
}

fn matrix(tp: usize, t: usize, b: i64) -> impl Strategy<Value = Vec<Vec<BigInt>>> {
    prop::collection::vec(prop::collection::vec((-b..=b).prop_map(BigInt::from), t), tp)
}

proptest! {
    #[test]
    fn products_respect_truncation((ring, c) in ring_and_class()) {
        let sq = chow_mul(&c, &c).unwrap();
        for (e, k) in sq.terms() {
            prop_assert!(!k.is_zero());
            for (x, d) in e.iter().zip(ring.factor_dims()) {
                prop_assert!(x <= d);
            }
        }
    }

    #[test]
    fn hyperplane_products_have_nonnegative_degree(
        dims in prop::collection::vec(1u32..=2, 1..=3),
        weights in prop::collection::vec(prop::collection::vec(0i64..=3, 3), 6),
    ) {
        let ring = MultiProjRing::new(dims.clone()).unwrap();
        let n = dims.len();
        let mut acc = ChowClass::one(&ring);
        for w in weights.iter().take(ring.dimension() as usize) {
            let coeffs: Vec<BigInt> = w[..n].iter().map(|&x| BigInt::from(x)).collect();
            acc = chow_mul(&acc, &ChowClass::linear(&ring, &coeffs).unwrap()).unwrap();
        }
        prop_assert!(!chow_degree(&acc).is_negative());
    }

    #[test]
    fn closed_formula_matches_ring_on_larger_inputs(
        (t, a) in (3usize..=4, 2usize..=3).prop_flat_map(|(t, tp)| (Just(t), matrix(tp, t, 5))),
        s in 0usize..=4,
    ) {
        prop_assume!(s <= t);
        prop_assert_eq!(
            toric_intersection_degree(&a, t, s).unwrap(),
            toric_intersection_degree_by_ring(&a, t, s).unwrap()
        );
        prop_assert!(!toric_intersection_degree(&a, t, s).unwrap().is_negative());
    }
}

#[test]
fn documented_values() {
    let a = |rows: &[&[i64]]| -> Vec<Vec<BigInt>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    };
    assert_eq!(toric_intersection_degree(&a(&[&[2]]), 1, 0).unwrap(), BigInt::from(4));
    assert_eq!(toric_intersection_degree(&a(&[&[2]]), 1, 1).unwrap(), BigInt::from(2));
    assert_eq!(
        toric_intersection_degree(&a(&[&[2, 3]]), 2, 1).unwrap(),
        BigInt::from(20)
    );
    assert!(toric_intersection_degree(&a(&[&[2, 3]]), 2, 3).is_err());
    // the graph class of (2, 3) is (2 e1 + 3 e2 + e'1)
    let g = graph_closure_class(&a(&[&[2, 3]]), 2).unwrap();
    assert_eq!(g.coeff(&[1, 0, 0]), BigInt::from(2));
    assert_eq!(g.coeff(&[0, 1, 0]), BigInt::from(3));
    assert_eq!(g.coeff(&[0, 0, 1]), BigInt::from(1));
}

#[test]
fn alpha_values() {
    let r = alpha_and_siu(&BigInt::from(6), &BigInt::from(1), 2).unwrap();
    assert_eq!(r.alpha, Rational::new(6, 4));
    assert!(r.siu_holds && !r.trivial);
    let z = alpha_and_siu(&BigInt::from(0), &BigInt::from(0), 1).unwrap();
    assert!(z.trivial);
    assert_eq!(z.alpha, Rational::from_int(0));
    assert!(alpha_and_siu(&BigInt::from(-1), &BigInt::from(0), 1).is_err());
}
