//! Semiabelian varieties described by their Ext classes over isotypic blocks,
//! and the calculus of homomorphism pairs between them.
//!
//! An Ext class `eta_G` of `A = B_1^{r_1} x ... ` by `G_m^t` is stored per
//! block as coefficients `c[i][j][k]` in the block algebra `D`: the component
//! `eta_ij` equals `sum_k c[i][j][k] gamma_k` in `Gamma (x) Q`. Torsion of
//! `Gamma` is invisible in this representation.

mod json;
mod models;
mod ops;

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use thiserror::Error;

use crate::arith::Rational;
use crate::linalg::{LinalgError, QAlgebra, RatMatrix};

pub use json::{ext_to_json, BlockJson, CoeffJson, DescriptorJson, HomPairJson};
pub use models::{cubic_cone_model, two_generator_model};
pub use ops::{
    exists_abelian_realization, is_homomorphism_pair, kernel_up_to_torsion, pullback_ext, pushforward_ext,
    realizable_pair, KernelUpToTorsion,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SemiabelianError {
    #[error("invariant violated at {path}: {message}")]
    Invariant { path: String, message: String },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("incompatible block structures: {0}")]
    IncompatibleBlocks(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

fn invariant(path: impl Into<String>, message: impl Into<String>) -> SemiabelianError {
    SemiabelianError::Invariant {
        path: path.into(),
        message: message.into(),
    }
}

/// One isotypic factor `B^r` of the abelian quotient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsotypicBlock {
    pub algebra: Arc<QAlgebra>,
    /// Rank of `Gamma (x) Q` as a free `D`-module.
    pub l: usize,
    /// Positive integer annihilating the torsion of `Gamma`.
    pub e: u64,
    /// Multiplicity of `B` in the source.
    pub r: usize,
    /// Multiplicity of `B` in the target.
    pub r_prime: usize,
}

impl IsotypicBlock {
    pub fn new(algebra: Arc<QAlgebra>, l: usize, e: u64, r: usize, r_prime: usize) -> Result<Self, SemiabelianError> {
        if e == 0 {
            return Err(invariant("e", "torsion exponent must be at least 1"));
        }
        if r == 0 {
            return Err(invariant("r", "multiplicity r must be at least 1"));
        }
        Ok(IsotypicBlock {
            algebra,
            l,
            e,
            r,
            r_prime,
        })
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }
}

/// Ext coefficients of one block: an `rows x t` array of vectors in `D^l`,
/// each `D` element a coefficient vector of length `dim`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockExt {
    rows: usize,
    cols: usize,
    l: usize,
    dim: usize,
    data: Vec<Rational>,
}

impl BlockExt {
    pub fn zeros(rows: usize, cols: usize, l: usize, dim: usize) -> Self {
        BlockExt {
            rows,
            cols,
            l,
            dim,
            data: vec![Rational::zero(); rows * cols * l * dim],
        }
    }

    /// Builds from nested `[i][j][k]` coefficient vectors.
    pub fn from_nested(
        nested: Vec<Vec<Vec<Vec<Rational>>>>,
        cols: usize,
        l: usize,
        dim: usize,
        path: &str,
    ) -> Result<Self, SemiabelianError> {
        let rows = nested.len();
        let mut out = BlockExt::zeros(rows, cols, l, dim);
        for (i, row) in nested.into_iter().enumerate() {
            if row.len() != cols {
                return Err(invariant(
                    format!("{path}[{i}]"),
                    format!("expected {cols} columns (toric rank), found {}", row.len()),
                ));
            }
            for (j, entry) in row.into_iter().enumerate() {
                if entry.len() != l {
                    return Err(invariant(
                        format!("{path}[{i}][{j}]"),
                        format!("expected {l} gamma coefficients, found {}", entry.len()),
                    ));
                }
                for (k, c) in entry.into_iter().enumerate() {
                    if c.len() != dim {
                        return Err(invariant(
                            format!("{path}[{i}][{j}][{k}]"),
                            format!("expected {dim} algebra coordinates, found {}", c.len()),
                        ));
                    }
                    out.set(i, j, k, c);
                }
            }
        }
        Ok(out)
    }

    pub fn to_nested(&self) -> Vec<Vec<Vec<Vec<Rational>>>> {
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| (0..self.l).map(|k| self.get(i, j, k).to_vec()).collect())
                    .collect()
            })
            .collect()
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn offset(&self, i: usize, j: usize, k: usize) -> usize {
        ((i * self.cols + j) * self.l + k) * self.dim
    }

    /// Coefficient of `gamma_k` in entry `(i, j)`.
    pub fn get(&self, i: usize, j: usize, k: usize) -> &[Rational] {
        let o = self.offset(i, j, k);
        &self.data[o..o + self.dim]
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, v: Vec<Rational>) {
        assert_eq!(v.len(), self.dim);
        let o = self.offset(i, j, k);
        for (slot, x) in self.data[o..o + self.dim].iter_mut().zip(v) {
            *slot = x;
        }
    }

    pub fn scale(&self, c: &Rational) -> BlockExt {
        BlockExt {
            data: self.data.iter().map(|x| x * c).collect(),
            ..self.clone()
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Rational::is_zero)
    }
}

/// `eta` for every block; all blocks share the toric rank `t` (columns).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtClassMatrix {
    pub t: usize,
    pub blocks: Vec<BlockExt>,
}

impl ExtClassMatrix {
    pub fn scale(&self, c: &Rational) -> ExtClassMatrix {
        ExtClassMatrix {
            t: self.t,
            blocks: self.blocks.iter().map(|b| b.scale(c)).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemiabelianDescriptor {
    pub t: usize,
    pub blocks: Vec<IsotypicBlock>,
    pub eta: ExtClassMatrix,
}

impl SemiabelianDescriptor {
    pub fn new(t: usize, blocks: Vec<IsotypicBlock>, eta: ExtClassMatrix) -> Result<Self, SemiabelianError> {
        if eta.t != t {
            return Err(invariant("eta", format!("eta has {} columns but t = {t}", eta.t)));
        }
        if eta.blocks.len() != blocks.len() {
            return Err(invariant(
                "eta",
                format!("eta has {} blocks but {} are declared", eta.blocks.len(), blocks.len()),
            ));
        }
        for (b, (blk, e)) in blocks.iter().zip(&eta.blocks).enumerate() {
            if e.rows != blk.r || e.cols != t || e.l != blk.l || e.dim != blk.dim() {
                return Err(invariant(
                    format!("eta[{b}]"),
                    format!(
                        "shape {}x{}x{}x{} does not match r={}, t={t}, l={}, dim={}",
                        e.rows,
                        e.cols,
                        e.l,
                        e.dim,
                        blk.r,
                        blk.l,
                        blk.dim()
                    ),
                ));
            }
        }
        Ok(SemiabelianDescriptor { t, blocks, eta })
    }

    /// The target variety determined by an Ext class `mu` whose blocks have
    /// the target multiplicities `r_prime` of this descriptor. A block with
    /// `r_prime = 0` is kept with multiplicity zero.
    pub fn target_with(&self, mu: ExtClassMatrix) -> Result<SemiabelianDescriptor, SemiabelianError> {
        if mu.blocks.len() != self.blocks.len() {
            return Err(invariant(
                "mu",
                format!("mu has {} blocks, expected {}", mu.blocks.len(), self.blocks.len()),
            ));
        }
        let mut blocks = Vec::with_capacity(self.blocks.len());
        for (b, (blk, m)) in self.blocks.iter().zip(&mu.blocks).enumerate() {
            if m.rows != blk.r_prime || m.cols != mu.t || m.l != blk.l || m.dim != blk.dim() {
                return Err(invariant(
                    format!("mu[{b}]"),
                    format!("shape does not match r'={}, l={}", blk.r_prime, blk.l),
                ));
            }
            blocks.push(IsotypicBlock {
                algebra: Arc::clone(&blk.algebra),
                l: blk.l,
                e: blk.e,
                r: blk.r_prime,
                r_prime: blk.r_prime,
            });
        }
        Ok(SemiabelianDescriptor {
            t: mu.t,
            blocks,
            eta: mu,
        })
    }
}

/// A `rows x cols` matrix over a block algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DMatrix {
    pub algebra: Arc<QAlgebra>,
    rows: usize,
    cols: usize,
    data: Vec<Vec<Rational>>,
}

impl DMatrix {
    pub fn zeros(algebra: Arc<QAlgebra>, rows: usize, cols: usize) -> Self {
        let dim = algebra.dim();
        DMatrix {
            algebra,
            rows,
            cols,
            data: vec![vec![Rational::zero(); dim]; rows * cols],
        }
    }

    /// Identity `n x n` (the unit on the diagonal).
    pub fn identity(algebra: Arc<QAlgebra>, n: usize) -> Self {
        let mut m = DMatrix::zeros(algebra, n, n);
        for i in 0..n {
            m.data[i * n + i] = m.algebra.unit().to_vec();
        }
        m
    }

    pub fn from_entries(algebra: Arc<QAlgebra>, entries: Vec<Vec<Vec<Rational>>>) -> Result<Self, SemiabelianError> {
        let rows = entries.len();
        let cols = entries.first().map_or(0, Vec::len);
        let dim = algebra.dim();
        let mut data = Vec::with_capacity(rows * cols);
        for (i, row) in entries.into_iter().enumerate() {
            if row.len() != cols {
                return Err(invariant(format!("[{i}]"), "ragged matrix rows"));
            }
            for (j, x) in row.into_iter().enumerate() {
                if x.len() != dim {
                    return Err(invariant(
                        format!("[{i}][{j}]"),
                        format!("expected {dim} algebra coordinates, found {}", x.len()),
                    ));
                }
                data.push(x);
            }
        }
        Ok(DMatrix {
            algebra,
            rows,
            cols,
            data,
        })
    }

    /// Matrix over `Q` (the algebra must be one-dimensional with unit 1).
    pub fn from_rational(algebra: Arc<QAlgebra>, m: &RatMatrix) -> Self {
        let unit = algebra.unit().to_vec();
        let mut out = DMatrix::zeros(algebra, m.rows(), m.cols());
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                out.data[i * m.cols() + j] = unit.iter().map(|u| u * m.get(i, j)).collect();
            }
        }
        out
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &[Rational] {
        &self.data[i * self.cols + j]
    }

    pub fn to_nested(&self) -> Vec<Vec<Vec<Rational>>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).to_vec()).collect())
            .collect()
    }

    pub fn scale(&self, c: &Rational) -> DMatrix {
        DMatrix {
            data: self.data.iter().map(|x| x.iter().map(|y| y * c).collect()).collect(),
            ..self.clone()
        }
    }

    fn denominator_lcm(&self) -> BigInt {
        self.data
            .iter()
            .flatten()
            .fold(BigInt::one(), |acc, x| acc.lcm(&x.denom()))
    }

    /// The `Q`-linear map `D^cols -> D^rows`, `x -> (sum_j m_ij x_j)_i`, with
    /// left multiplication by the entries.
    pub fn left_action_matrix(&self) -> RatMatrix {
        let n = self.algebra.dim();
        let mut out = RatMatrix::zeros(self.rows * n, self.cols * n);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let l = self.algebra.left_mul_matrix(self.get(i, j));
                for a in 0..n {
                    for b in 0..n {
                        out.set(i * n + a, j * n + b, l.get(a, b).clone());
                    }
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> DMatrix {
        let mut out = DMatrix::zeros(Arc::clone(&self.algebra), self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.get(i, j).to_vec();
            }
        }
        out
    }
}

/// A candidate quasi-homomorphism `(phi_tor, phi_ab)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomPair {
    /// `t' x t`: row `v` lists the exponents of the source coordinates in the
    /// `v`-th target coordinate.
    pub phi_tor: RatMatrix,
    /// Per block, an `r' x r` matrix over the block algebra.
    pub phi_ab: Vec<DMatrix>,
    denominator: BigInt,
}

impl HomPair {
    pub fn new(phi_tor: RatMatrix, phi_ab: Vec<DMatrix>) -> Self {
        let denominator = phi_ab
            .iter()
            .fold(phi_tor.denominator_lcm(), |acc, m| acc.lcm(&m.denominator_lcm()));
        HomPair {
            phi_tor,
            phi_ab,
            denominator,
        }
    }

    /// Least positive integer `n` making `n phi_tor` integral and `n phi_ab`
    /// integral in the block bases.
    pub fn denominator(&self) -> &BigInt {
        &self.denominator
    }

    pub fn scale(&self, c: &Rational) -> HomPair {
        HomPair::new(self.phi_tor.scale(c), self.phi_ab.iter().map(|m| m.scale(c)).collect())
    }
}
