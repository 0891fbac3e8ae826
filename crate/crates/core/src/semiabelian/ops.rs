//! Pushforward, pullback, homomorphism checks and realizability.

use num_bigint::BigInt;

use super::{BlockExt, DMatrix, ExtClassMatrix, HomPair, SemiabelianDescriptor, SemiabelianError};
use crate::arith::Rational;
use crate::linalg::{d_span_rank_right, image_membership, integer_kernel, RatMatrix};

/// `(phi_tor)_* eta`: column `v` of the result is `sum_u phi_tor[v][u] eta_u`.
pub fn pushforward_ext(phi_tor: &RatMatrix, eta: &ExtClassMatrix) -> Result<ExtClassMatrix, SemiabelianError> {
    if phi_tor.cols() != eta.t {
        return Err(SemiabelianError::DimensionMismatch(format!(
            "phi_tor has {} columns but eta has toric rank {}",
            phi_tor.cols(),
            eta.t
        )));
    }
    let t_prime = phi_tor.rows();
    let blocks = eta
        .blocks
        .iter()
        .map(|b| {
            let mut out = BlockExt::zeros(b.rows(), t_prime, b.l(), b.dim());
            for i in 0..b.rows() {
                for v in 0..t_prime {
                    for k in 0..b.l() {
                        let mut acc = vec![Rational::zero(); b.dim()];
                        for u in 0..eta.t {
                            let a = phi_tor.get(v, u);
                            if a.is_zero() {
                                continue;
                            }
                            for (x, c) in acc.iter_mut().zip(b.get(i, u, k)) {
                                if !c.is_zero() {
                                    *x += &(a * c);
                                }
                            }
                        }
                        out.set(i, v, k, acc);
                    }
                }
            }
            out
        })
        .collect();
    Ok(ExtClassMatrix { t: t_prime, blocks })
}

/// `(phi_ab)^* mu`, applied to each column of `mu` independently. The block
/// matrix `phi_ab` (`r' x r`) acts on the dual side through its transpose:
/// entry `i` of the result is `sum_{i'} phi_ab[i'][i] mu_{i'}`, with the
/// algebra element multiplying from the left.
pub fn pullback_ext(phi_ab: &[DMatrix], mu: &ExtClassMatrix) -> Result<ExtClassMatrix, SemiabelianError> {
    if phi_ab.len() != mu.blocks.len() {
        return Err(SemiabelianError::DimensionMismatch(format!(
            "phi_ab has {} blocks but mu has {}",
            phi_ab.len(),
            mu.blocks.len()
        )));
    }
    let mut blocks = Vec::with_capacity(mu.blocks.len());
    for (b, (phi, m)) in phi_ab.iter().zip(&mu.blocks).enumerate() {
        if phi.rows() != m.rows() {
            return Err(SemiabelianError::DimensionMismatch(format!(
                "block {b}: phi_ab has {} rows but mu has {}",
                phi.rows(),
                m.rows()
            )));
        }
        if phi.algebra.dim() != m.dim() {
            return Err(SemiabelianError::DimensionMismatch(format!(
                "block {b}: algebra dimension {} against coefficient length {}",
                phi.algebra.dim(),
                m.dim()
            )));
        }
        let r = phi.cols();
        let mut out = BlockExt::zeros(r, mu.t, m.l(), m.dim());
        for i in 0..r {
            for j in 0..mu.t {
                for k in 0..m.l() {
                    let mut acc = vec![Rational::zero(); m.dim()];
                    for ip in 0..m.rows() {
                        let prod = phi.algebra.mul_coeffs(phi.get(ip, i), m.get(ip, j, k));
                        for (x, y) in acc.iter_mut().zip(prod) {
                            *x += &y;
                        }
                    }
                    out.set(i, j, k, acc);
                }
            }
        }
        blocks.push(out);
    }
    Ok(ExtClassMatrix { t: mu.t, blocks })
}

fn check_pair_shapes(g: &SemiabelianDescriptor, t_prime: usize, pair: &HomPair) -> Result<(), SemiabelianError> {
    if pair.phi_tor.cols() != g.t || pair.phi_tor.rows() != t_prime {
        return Err(SemiabelianError::DimensionMismatch(format!(
            "phi_tor is {}x{}, expected {t_prime}x{}",
            pair.phi_tor.rows(),
            pair.phi_tor.cols(),
            g.t
        )));
    }
    if pair.phi_ab.len() != g.blocks.len() {
        return Err(SemiabelianError::IncompatibleBlocks(format!(
            "phi_ab has {} blocks, the variety has {}",
            pair.phi_ab.len(),
            g.blocks.len()
        )));
    }
    for (b, (blk, phi)) in g.blocks.iter().zip(&pair.phi_ab).enumerate() {
        if *phi.algebra != *blk.algebra {
            return Err(SemiabelianError::IncompatibleBlocks(format!(
                "block {b}: phi_ab uses a different algebra"
            )));
        }
        if phi.rows() != blk.r_prime || phi.cols() != blk.r {
            return Err(SemiabelianError::DimensionMismatch(format!(
                "block {b}: phi_ab is {}x{}, expected {}x{}",
                phi.rows(),
                phi.cols(),
                blk.r_prime,
                blk.r
            )));
        }
    }
    Ok(())
}

/// Whether `pair` describes a homomorphism `G -> G'`, i.e.
/// `(n phi_tor)_* eta_G = (n phi_ab)^* eta_G'` after multiplying by the
/// torsion exponents. Both descriptors must express their Ext classes in the
/// same `gamma` basis.
pub fn is_homomorphism_pair(
    g: &SemiabelianDescriptor,
    g_prime: &SemiabelianDescriptor,
    pair: &HomPair,
) -> Result<bool, SemiabelianError> {
    if g.blocks.len() != g_prime.blocks.len() {
        return Err(SemiabelianError::IncompatibleBlocks(format!(
            "{} blocks against {}",
            g.blocks.len(),
            g_prime.blocks.len()
        )));
    }
    for (b, (x, y)) in g.blocks.iter().zip(&g_prime.blocks).enumerate() {
        if *x.algebra != *y.algebra || x.l != y.l {
            return Err(SemiabelianError::IncompatibleBlocks(format!(
                "block {b}: algebras or gamma ranks differ"
            )));
        }
        if y.r != x.r_prime {
            return Err(SemiabelianError::IncompatibleBlocks(format!(
                "block {b}: target multiplicity {} but the pair expects {}",
                y.r, x.r_prime
            )));
        }
    }
    check_pair_shapes(g, g_prime.t, pair)?;
    let n = Rational::from(pair.denominator().clone());
    let lhs = pushforward_ext(&pair.phi_tor.scale(&n), &g.eta)?;
    let phi_n: Vec<DMatrix> = pair.phi_ab.iter().map(|m| m.scale(&n)).collect();
    let rhs = pullback_ext(&phi_n, &g_prime.eta)?;
    for (b, (blk, (l, r))) in g.blocks.iter().zip(lhs.blocks.iter().zip(&rhs.blocks)).enumerate() {
        let e = Rational::from(BigInt::from(blk.e.max(g_prime.blocks[b].e)));
        if l.scale(&e) != r.scale(&e) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Searches for an Ext class `mu` of the target with
/// `(phi_tor)_* eta_G = (phi_ab)^* mu`. The system is solved one column and
/// one `gamma` coefficient at a time through the regular representation.
pub fn realizable_pair(
    g: &SemiabelianDescriptor,
    t_prime: usize,
    pair: &HomPair,
) -> Result<Option<ExtClassMatrix>, SemiabelianError> {
    check_pair_shapes(g, t_prime, pair)?;
    let target = pushforward_ext(&pair.phi_tor, &g.eta)?;
    let mut blocks = Vec::with_capacity(g.blocks.len());
    for ((blk, phi), tb) in g.blocks.iter().zip(&pair.phi_ab).zip(&target.blocks) {
        let n = blk.dim();
        let m = phi.transpose().left_action_matrix();
        let mut mu = BlockExt::zeros(blk.r_prime, t_prime, blk.l, n);
        for j in 0..t_prime {
            for k in 0..blk.l {
                let y: Vec<Rational> = (0..blk.r).flat_map(|i| tb.get(i, j, k).to_vec()).collect();
                if !image_membership(&m, &y)?.member {
                    return Ok(None);
                }
                let x = m.solve(&y)?.expect("membership implies a solution");
                for ip in 0..blk.r_prime {
                    mu.set(ip, j, k, x[ip * n..(ip + 1) * n].to_vec());
                }
            }
        }
        blocks.push(mu);
    }
    Ok(Some(ExtClassMatrix { t: t_prime, blocks }))
}

/// Whether some abelian part `phi_ab` with target multiplicity `r_prime`
/// (in every block) makes `(a, phi_ab)` realizable, for a single toric
/// column `a`. Per block this holds iff the vectors
/// `v_k = sum_j a_j c[.][j][k]` in `D^r` span a submodule of rank at most
/// `r_prime`: the image of a matrix in `D^{r x r'}` acting from the left is
/// the right span of its columns, and every right submodule with `r'`
/// generators arises this way.
pub fn exists_abelian_realization(
    g: &SemiabelianDescriptor,
    r_prime: usize,
    a: &[Rational],
) -> Result<bool, SemiabelianError> {
    if a.len() != g.t {
        return Err(SemiabelianError::DimensionMismatch(format!(
            "toric column has length {}, expected {}",
            a.len(),
            g.t
        )));
    }
    for (blk, eta) in g.blocks.iter().zip(&g.eta.blocks) {
        let vectors: Vec<Vec<Vec<Rational>>> = (0..blk.l)
            .map(|k| {
                (0..blk.r)
                    .map(|i| {
                        let mut acc = vec![Rational::zero(); blk.dim()];
                        for (j, aj) in a.iter().enumerate() {
                            if aj.is_zero() {
                                continue;
                            }
                            for (x, c) in acc.iter_mut().zip(eta.get(i, j, k)) {
                                *x += &(aj * c);
                            }
                        }
                        acc
                    })
                    .collect()
            })
            .collect();
        if d_span_rank_right(&blk.algebra, &vectors)? > r_prime {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelUpToTorsion {
    /// Basis of `ker(n phi_tor) ∩ Z^t` in Hermite normal form.
    pub toric: Vec<Vec<BigInt>>,
    /// Per block, a Q-basis of the kernel of `x -> phi_ab x` on `D^r`, each
    /// vector flattened to `r * dim` rationals.
    pub abelian: Vec<Vec<Vec<Rational>>>,
}

pub fn kernel_up_to_torsion(pair: &HomPair) -> KernelUpToTorsion {
    let n = Rational::from(pair.denominator().clone());
    let scaled = pair.phi_tor.scale(&n);
    let rows = scaled.to_integer_rows().expect("the denominator clears phi_tor");
    let toric = integer_kernel(&rows, scaled.cols());
    let abelian = pair
        .phi_ab
        .iter()
        .map(|m| m.scale(&n).left_action_matrix().nullspace())
        .collect();
    KernelUpToTorsion { toric, abelian }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::linalg::QAlgebra;
    use crate::semiabelian::{cubic_cone_model, two_generator_model};

    fn q(x: i64) -> Rational {
        Rational::from_int(x)
    }

    #[test]
    fn pushforward_combines_columns() {
        let g = two_generator_model();
        let phi = RatMatrix::from_i64_rows(&[&[2, 3]]);
        let out = pushforward_ext(&phi, &g.eta).unwrap();
        assert_eq!(out.t, 1);
        assert_eq!(out.blocks[0].get(0, 0, 0), &[q(2)]);
        assert_eq!(out.blocks[0].get(0, 0, 1), &[q(3)]);
    }

    #[test]
    fn pullback_scalar_action() {
        let qa = Arc::new(QAlgebra::rationals());
        let mut mu = BlockExt::zeros(1, 1, 1, 1);
        mu.set(0, 0, 0, vec![q(1)]);
        let mu = ExtClassMatrix { t: 1, blocks: vec![mu] };
        let phi = DMatrix::from_rational(qa.clone(), &RatMatrix::from_i64_rows(&[&[2]]));
        let out = pullback_ext(&[phi], &mu).unwrap();
        assert_eq!(out.blocks[0].get(0, 0, 0), &[q(2)]);
        // r = 2, r' = 1: phi = (1, 1) sends mu to (mu, mu)
        let phi = DMatrix::from_rational(qa, &RatMatrix::from_i64_rows(&[&[1, 1]]));
        let out = pullback_ext(&[phi], &mu).unwrap();
        assert_eq!(out.blocks[0].rows(), 2);
        assert_eq!(out.blocks[0].get(1, 0, 0), &[q(1)]);
    }

    #[test]
    fn footnote_family_witness() {
        let g = two_generator_model();
        let qa = g.blocks[0].algebra.clone();
        for n in 1..=5 {
            let pair = HomPair::new(
                RatMatrix::from_i64_rows(&[&[n, 1]]),
                vec![DMatrix::identity(qa.clone(), 1)],
            );
            let mu = realizable_pair(&g, 1, &pair).unwrap().expect("realizable");
            assert_eq!(mu.blocks[0].get(0, 0, 0), &[q(n)]);
            assert_eq!(mu.blocks[0].get(0, 0, 1), &[q(1)]);
            let gp = g.target_with(mu).unwrap();
            assert!(is_homomorphism_pair(&g, &gp, &pair).unwrap());
        }
        let pair = HomPair::new(RatMatrix::from_i64_rows(&[&[1, 0]]), vec![DMatrix::zeros(qa, 1, 1)]);
        assert_eq!(realizable_pair(&g, 1, &pair).unwrap(), None);
    }

    #[test]
    fn cubic_cone_small_cases() {
        let g = cubic_cone_model([1, 2, 3]);
        assert!(exists_abelian_realization(&g, 2, &[q(1), q(1), q(1)]).unwrap());
        assert!(!exists_abelian_realization(&g, 2, &[q(1), q(1), q(2)]).unwrap());
        assert!(exists_abelian_realization(&g, 2, &[q(0), q(0), q(0)]).unwrap());
    }

    #[test]
    fn kernel_examples() {
        let qa = Arc::new(QAlgebra::rationals());
        let pair = HomPair::new(
            RatMatrix::from_i64_rows(&[&[2, 3]]),
            vec![DMatrix::zeros(qa.clone(), 1, 1)],
        );
        let k = kernel_up_to_torsion(&pair);
        assert_eq!(k.toric, vec![vec![BigInt::from(3), BigInt::from(-2)]]);
        let half = HomPair::new(
            RatMatrix::from_rows(vec![vec![Rational::new(1, 2)]]).unwrap(),
            vec![DMatrix::identity(qa.clone(), 1)],
        );
        let one = HomPair::new(RatMatrix::identity(1), vec![DMatrix::identity(qa, 1)]);
        assert_eq!(kernel_up_to_torsion(&half), kernel_up_to_torsion(&one));
        assert!(kernel_up_to_torsion(&one).toric.is_empty());
    }

    #[test]
    fn noncommutative_realization_uses_right_span() {
        // Quaternions, r = 2, r' = 1, t = 1, l = 2 with v_1 = (1, j) and
        // v_2 = v_1 i = (i, ji). The right span has rank 1 while the left span
        // has rank 2, since i j != j i.
        let h = Arc::new(QAlgebra::quaternions(-1, -1));
        let i = vec![q(0), q(1), q(0), q(0)];
        let b = [h.unit().to_vec(), vec![q(0), q(0), q(1), q(0)]];
        let mut eta = BlockExt::zeros(2, 1, 2, 4);
        for (row, bi) in b.iter().enumerate() {
            eta.set(row, 0, 0, bi.clone());
            eta.set(row, 0, 1, h.mul_coeffs(bi, &i));
        }
        let blk = super::super::IsotypicBlock::new(h.clone(), 2, 1, 2, 1).unwrap();
        let g = SemiabelianDescriptor::new(
            1,
            vec![blk],
            ExtClassMatrix {
                t: 1,
                blocks: vec![eta],
            },
        )
        .unwrap();
        assert!(exists_abelian_realization(&g, 1, &[q(1)]).unwrap());
        let vectors: Vec<Vec<Vec<Rational>>> = (0..2)
            .map(|k| (0..2).map(|row| g.eta.blocks[0].get(row, 0, k).to_vec()).collect())
            .collect();
        assert_eq!(crate::linalg::d_span_rank(&h, &vectors).unwrap(), 2);
        let phi = DMatrix::from_entries(h, vec![vec![b[0].clone(), b[1].clone()]]).unwrap();
        let pair = HomPair::new(RatMatrix::identity(1), vec![phi]);
        let mu = realizable_pair(&g, 1, &pair).unwrap().expect("realizable");
        let gp = g.target_with(mu).unwrap();
        assert!(is_homomorphism_pair(&g, &gp, &pair).unwrap());
    }
}
