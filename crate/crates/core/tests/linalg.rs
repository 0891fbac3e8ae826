use std::sync::Arc;

use num_bigint::BigInt;
use proptest::prelude::*;

use sak_core::arith::Rational;
use sak_core::linalg::{
    algebra_mul, d_span_rank, image_membership, integer_kernel, regular_representation, QAlgebra, RatMatrix,
};

fn q(x: i64) -> Rational {
    Rational::from_int(x)
}

fn algebras() -> Vec<Arc<QAlgebra>> {
    vec![
        Arc::new(QAlgebra::rationals()),
        Arc::new(QAlgebra::quadratic(-1)),
        Arc::new(QAlgebra::quadratic(5)),
        Arc::new(QAlgebra::matrix_algebra(2)),
        Arc::new(QAlgebra::matrix_algebra(3)),
        Arc::new(QAlgebra::quaternions(-1, -1)),
        Arc::new(QAlgebra::quaternions(2, -3)),
    ]
}

#[test]
fn associativity_and_unit_on_basis_triples() {
    for alg in algebras() {
        let n = alg.dim();
        let one = alg.one();
        for i in 0..n {
            let ei = alg.element(alg.basis(i)).unwrap();
            assert_eq!(algebra_mul(&one, &ei).unwrap(), ei);
            assert_eq!(algebra_mul(&ei, &one).unwrap(), ei);
            for j in 0..n {
                let ej = alg.element(alg.basis(j)).unwrap();
                let ij = algebra_mul(&ei, &ej).unwrap();
                for k in 0..n {
                    let ek = alg.element(alg.basis(k)).unwrap();
                    let left = algebra_mul(&ij, &ek).unwrap();
                    let right = algebra_mul(&ei, &algebra_mul(&ej, &ek).unwrap()).unwrap();
                    assert_eq!(left, right, "basis triple ({i}, {j}, {k})");
                }
            }
        }
    }
}

fn small_rational() -> impl Strategy<Value = Rational> {
    (-9i64..=9, 1i64..=4).prop_map(|(n, d)| Rational::new(n, d))
}

fn coeffs(n: usize) -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec(small_rational(), n)
}

/// 2x2 matrix product on `E_ab` coordinates `a * 2 + b`.
fn matmul2(x: &[Rational], y: &[Rational]) -> Vec<Rational> {
    let mut out = vec![q(0); 4];
    for a in 0..2 {
        for b in 0..2 {
            for c in 0..2 {
                out[a * 2 + c] += &(&x[a * 2 + b] * &y[b * 2 + c]);
            }
        }
    }
    out
}

#[test]
fn matrix_units_multiply_like_matrices() {
    let alg = Arc::new(QAlgebra::matrix_algebra(2));
    let e12 = alg.element(alg.basis(1)).unwrap();
    let e21 = alg.element(alg.basis(2)).unwrap();
    assert_eq!(algebra_mul(&e12, &e21).unwrap().coeffs(), alg.basis(0).as_slice());
}

proptest! {
    #[test]
    fn matrix_algebra_matches_matrix_product(x in coeffs(4), y in coeffs(4)) {
        let alg = Arc::new(QAlgebra::matrix_algebra(2));
        let prod = algebra_mul(&alg.element(x.clone()).unwrap(), &alg.element(y.clone()).unwrap()).unwrap();
        prop_assert_eq!(prod.coeffs().to_vec(), matmul2(&x, &y));
    }

    #[test]
    fn regular_representation_is_injective_homomorphism(which in 0usize..7, x in coeffs(9), y in coeffs(9)) {
        let alg = algebras()[which].clone();
        let n = alg.dim();
        let a = alg.element(x[..n].to_vec()).unwrap();
        let b = alg.element(y[..n].to_vec()).unwrap();
        let la = regular_representation(&alg, &a).unwrap();
        let lb = regular_representation(&alg, &b).unwrap();
        prop_assert_eq!(regular_representation(&alg, &algebra_mul(&a, &b).unwrap()).unwrap(), la.mul(&lb).unwrap());
        prop_assert_eq!(regular_representation(&alg, &alg.one()).unwrap(), RatMatrix::identity(n));
        prop_assert_eq!(la.is_zero(), a.is_zero());
    }

    #[test]
    fn d_span_rank_is_invariant_under_units(
        vs in prop::collection::vec(prop::collection::vec(coeffs(4), 3), 1..4),
        d in coeffs(4),
        pick in 0usize..3,
    ) {
        let alg = Arc::new(QAlgebra::quaternions(-1, -1));
        prop_assume!(d.iter().any(|x| !x.is_zero()));
        let base = d_span_rank(&alg, &vs).unwrap();
        let mut moved = vs.clone();
        let i = pick % moved.len();
        moved[i] = moved[i].iter().map(|c| alg.mul_coeffs(&d, c)).collect();
        prop_assert_eq!(d_span_rank(&alg, &moved).unwrap(), base);
    }

    #[test]
    fn integer_kernel_annihilates(rows in prop::collection::vec(prop::collection::vec(-4i64..=4, 4), 1..4)) {
        let a: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        let basis = integer_kernel(&a, 4);
        for v in &basis {
            for r in &a {
                let dot: BigInt = r.iter().zip(v).map(|(x, y)| x * y).sum();
                prop_assert_eq!(dot, BigInt::from(0));
            }
        }
        let m = RatMatrix::from_fn(a.len(), 4, |i, j| q(rows[i][j]));
        prop_assert_eq!(basis.len(), 4 - m.rank());
    }
}

/// Rank by fraction-free elimination in i128.
fn oracle_rank(mut m: Vec<Vec<i128>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| m[r][c] != 0) else {
            continue;
        };
        m.swap(rank, p);
        for r in 0..rows {
            if r != rank && m[r][c] != 0 {
                let (a, b) = (m[rank][c], m[r][c]);
                for k in 0..cols {
                    m[r][k] = m[r][k] * a - m[rank][k] * b;
                }
                let g = m[r].iter().fold(0i128, |g, &x| num_integer::gcd(g, x));
                if g > 1 {
                    m[r].iter_mut().for_each(|x| *x /= g);
                }
            }
        }
        rank += 1;
    }
    rank
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn membership_matches_elimination_on_larger_matrices(
        rows in 4usize..=6,
        cols in 4usize..=8,
        entries in prop::collection::vec(-3i64..=3, 48),
        y in prop::collection::vec(-3i64..=3, 6),
        in_span in any::<bool>(),
    ) {
        let m: Vec<Vec<i64>> = (0..rows).map(|i| entries[i * cols..(i + 1) * cols].to_vec()).collect();
        // half the cases use a target built from the columns
        let y: Vec<i64> = if in_span {
            (0..rows).map(|i| m[i].iter().zip(&y).map(|(a, b)| a * b).sum()).collect()
        } else {
            y[..rows].to_vec()
        };
        let rm = RatMatrix::from_fn(rows, cols, |i, j| q(m[i][j]));
        let yq: Vec<Rational> = y.iter().map(|&v| q(v)).collect();
        let base: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
        let aug: Vec<Vec<i128>> = base.iter().zip(&y).map(|(r, &v)| r.iter().copied().chain([v as i128]).collect()).collect();
        let expected = oracle_rank(base) == oracle_rank(aug);
        let got = image_membership(&rm, &yq).unwrap();
        prop_assert_eq!(got.member, expected);
        if in_span {
            prop_assert!(got.member);
        }
    }
}
