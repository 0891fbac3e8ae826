//! Graph closures of toric homomorphisms `G_m^t -> G_m^{t'}` inside
//! `(P^1)^t x (P^1)^{t'}` and their intersection degrees.
//!
//! A matrix `a` is stored with one row per target coordinate: `a[v][u]` is
//! the exponent of `x_u` in the `v`-th coordinate `y_v = prod_u x_u^{a[v][u]}`.
//! In the ring the first `t` factors carry `eps_u`, the last `t'` carry `eps'_v`.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::ring::{chow_degree, chow_mul, ChowClass, MultiProjRing};
use super::ChowError;

fn check_shape(a: &[Vec<BigInt>], t: usize) -> Result<(), ChowError> {
    if let Some(v) = a.iter().position(|row| row.len() != t) {
        return Err(ChowError::Invalid(format!(
            "row {v} of the exponent matrix has {} entries, expected {t}",
            a[v].len()
        )));
    }
    Ok(())
}

/// `prod_v (sum_u |a[v][u]| eps_u + eps'_v)` in `(P^1)^t x (P^1)^{t'}`.
pub fn graph_closure_class(a: &[Vec<BigInt>], t: usize) -> Result<ChowClass, ChowError> {
    check_shape(a, t)?;
    let tp = a.len();
    let ring = MultiProjRing::p1_power(t + tp);
    let mut acc = ChowClass::one(&ring);
    for (v, row) in a.iter().enumerate() {
        let mut coeffs: Vec<BigInt> = row.iter().map(|x| x.abs()).collect();
        coeffs.resize(t + tp, BigInt::zero());
        coeffs[t + v] = BigInt::one();
        acc = chow_mul(&acc, &ChowClass::linear(&ring, &coeffs)?)?;
    }
    Ok(acc)
}

/// `2 (eps_1 + ... + eps_t)` and `2 (eps'_1 + ... + eps'_{t'})`: the first
/// Chern classes of the boundary bundles pulled back from either side.
pub fn boundary_classes(t: usize, tp: usize) -> (ChowClass, ChowClass) {
    let ring = MultiProjRing::p1_power(t + tp);
    let two = BigInt::from(2);
    let side = |range: std::ops::Range<usize>| {
        let coeffs: Vec<BigInt> = (0..t + tp)
            .map(|i| {
                if range.contains(&i) {
                    two.clone()
                } else {
                    BigInt::zero()
                }
            })
            .collect();
        ChowClass::linear(&ring, &coeffs).expect("matching length")
    };
    (side(0..t), side(t..t + tp))
}

/// Degree of `c1(pr1^* M_t)^s c1(pr2^* M_{t'})^{t-s}` on the graph closure,
/// by the closed formula
/// `2^t s! (t-s)! sum |a[v_1][u_1] ... a[v_{t-s}][u_{t-s}]|`
/// over distinct `u_i` and increasing `v_1 < ... < v_{t-s}`.
pub fn toric_intersection_degree(a: &[Vec<BigInt>], t: usize, s: usize) -> Result<BigInt, ChowError> {
    check_shape(a, t)?;
    if s > t {
        return Err(ChowError::OutOfRange(format!("s = {s} exceeds t = {t}")));
    }
    let k = t - s;
    let abs: Vec<Vec<BigInt>> = a.iter().map(|row| row.iter().map(|x| x.abs()).collect()).collect();
    let mut used = vec![false; t];
    let sum = matching_sum(&abs, 0, k, &mut used);
    Ok(sum * (BigInt::one() << t) * factorial(s) * factorial(k))
}

/// Sum over increasing `v`-sequences of length `k` starting at row `from`,
/// paired with distinct unused columns, of the products of entries.
fn matching_sum(a: &[Vec<BigInt>], from: usize, k: usize, used: &mut [bool]) -> BigInt {
    if k == 0 {
        return BigInt::one();
    }
    let mut total = BigInt::zero();
    for v in from..a.len() {
        if a.len() - v < k {
            break;
        }
        for u in 0..used.len() {
            if used[u] || a[v][u].is_zero() {
                continue;
            }
            used[u] = true;
            total += &a[v][u] * matching_sum(a, v + 1, k - 1, used);
            used[u] = false;
        }
    }
    total
}

/// The same degree computed by multiplying out in the Chow ring.
pub fn toric_intersection_degree_by_ring(a: &[Vec<BigInt>], t: usize, s: usize) -> Result<BigInt, ChowError> {
    let graph = graph_closure_class(a, t)?;
    if s > t {
        return Err(ChowError::OutOfRange(format!("s = {s} exceeds t = {t}")));
    }
    Ok(toric_degree_on_class(&graph, t, s))
}

/// `deg(c1(pr1^* M_t)^s c1(pr2^* M_{t'})^{t-s} . graph)` for a precomputed
/// graph class over `(P^1)^t x (P^1)^{t'}`.
pub fn toric_degree_on_class(graph: &ChowClass, t: usize, s: usize) -> BigInt {
    let tp = graph.ring().num_factors() - t;
    let (m_src, m_tgt) = boundary_classes(t, tp);
    let c = chow_mul(&m_src.pow(s as u32), &m_tgt.pow((t - s) as u32)).expect("same ring");
    chow_degree(&chow_mul(&c, graph).expect("same ring"))
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    }

    #[test]
    fn graph_of_multiplication_by_two() {
        let g = graph_closure_class(&m(&[&[2]]), 1).unwrap();
        let r = MultiProjRing::p1_power(2);
        assert_eq!(g, ChowClass::linear(&r, &[BigInt::from(2), BigInt::from(1)]).unwrap());
    }

    #[test]
    fn identity_graph_is_diagonal() {
        let g = graph_closure_class(&m(&[&[1]]), 1).unwrap();
        let r = MultiProjRing::p1_power(2);
        assert_eq!(g, ChowClass::linear(&r, &[BigInt::from(1), BigInt::from(1)]).unwrap());
    }

    #[test]
    fn two_variable_graph() {
        let g = graph_closure_class(&m(&[&[2, 3]]), 2).unwrap();
        let r = MultiProjRing::p1_power(3);
        let want = ChowClass::linear(&r, &[BigInt::from(2), BigInt::from(3), BigInt::from(1)]).unwrap();
        assert_eq!(g, want);
    }

    #[test]
    fn small_degrees() {
        let a = m(&[&[2]]);
        assert_eq!(toric_intersection_degree(&a, 1, 0).unwrap(), BigInt::from(4));
        assert_eq!(toric_intersection_degree(&a, 1, 1).unwrap(), BigInt::from(2));
        let b = m(&[&[2, 3]]);
        assert_eq!(toric_intersection_degree(&b, 2, 1).unwrap(), BigInt::from(20));
        for s in 0..=2 {
            assert_eq!(
                toric_intersection_degree(&b, 2, s).unwrap(),
                toric_intersection_degree_by_ring(&b, 2, s).unwrap()
            );
        }
    }

    #[test]
    fn negative_exponents_use_absolute_values() {
        let a = m(&[&[-2, 3], &[1, -1]]);
        for s in 0..=2 {
            assert_eq!(
                toric_intersection_degree(&a, 2, s).unwrap(),
                toric_intersection_degree_by_ring(&a, 2, s).unwrap()
            );
        }
    }

    #[test]
    fn s_out_of_range() {
        assert!(matches!(
            toric_intersection_degree(&m(&[&[1]]), 1, 2),
            Err(ChowError::OutOfRange(_))
        ));
    }

    #[test]
    fn too_few_target_coordinates_gives_zero() {
        // t - s = 2 > t' = 1
        let a = m(&[&[1, 1]]);
        assert_eq!(toric_intersection_degree(&a, 2, 0).unwrap(), BigInt::zero());
        assert_eq!(toric_intersection_degree_by_ring(&a, 2, 0).unwrap(), BigInt::zero());
    }
}
