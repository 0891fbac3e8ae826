//! Ready-made descriptors over `D = Q`.

use std::sync::Arc;

use super::{BlockExt, ExtClassMatrix, IsotypicBlock, SemiabelianDescriptor};
use crate::arith::Rational;
use crate::linalg::QAlgebra;

/// A `G_m^3`-extension of `E^3` (`End E = Z`) with free `Gamma` of rank 3 and
/// columns `(n1 g1, g3, g2)`, `(n2 g2, g1, g3)`, `(n3 g3, g2, g1)`, with
/// target multiplicity 2. The toric columns admitting an abelian part are the
/// zeros of `(n1+n2+n3) a1 a2 a3 - n1 a1^3 - n2 a2^3 - n3 a3^3`.
pub fn cubic_cone_model(n: [i64; 3]) -> SemiabelianDescriptor {
    let q = Arc::new(QAlgebra::rationals());
    let mut eta = BlockExt::zeros(3, 3, 3, 1);
    // (row, column, gamma index, coefficient)
    let entries = [
        (0, 0, 0, n[0]),
        (1, 0, 2, 1),
        (2, 0, 1, 1),
        (0, 1, 1, n[1]),
        (1, 1, 0, 1),
        (2, 1, 2, 1),
        (0, 2, 2, n[2]),
        (1, 2, 1, 1),
        (2, 2, 0, 1),
    ];
    for (i, j, k, c) in entries {
        eta.set(i, j, k, vec![Rational::from_int(c)]);
    }
    let block = IsotypicBlock::new(q, 3, 1, 3, 2).expect("valid block");
    SemiabelianDescriptor::new(
        3,
        vec![block],
        ExtClassMatrix {
            t: 3,
            blocks: vec![eta],
        },
    )
    .expect("consistent shapes")
}

/// A `G_m^2`-extension of an elliptic curve given by two independent points
/// `eta_1 = g1`, `eta_2 = g2`, with target multiplicity 1. Its quotients
/// `(n, 1)` with Ext class `n eta_1 + eta_2` are pairwise non-isogenous.
pub fn two_generator_model() -> SemiabelianDescriptor {
    let q = Arc::new(QAlgebra::rationals());
    let mut eta = BlockExt::zeros(1, 2, 2, 1);
    eta.set(0, 0, 0, vec![Rational::one()]);
    eta.set(0, 1, 1, vec![Rational::one()]);
    let block = IsotypicBlock::new(q, 2, 1, 1, 1).expect("valid block");
    SemiabelianDescriptor::new(
        2,
        vec![block],
        ExtClassMatrix {
            t: 2,
            blocks: vec![eta],
        },
    )
    .expect("consistent shapes")
}
