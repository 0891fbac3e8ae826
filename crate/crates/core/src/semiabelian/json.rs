//! JSON forms of descriptors and homomorphism pairs.
//!
//! Descriptor: `{t, blocks: [{algebra, l, e, r, r_prime}], eta}` where
//! `eta[b][i][j][k]` is the coefficient of `gamma_k` in entry `(i, j)` of
//! block `b`, either an array of `"p/q"` strings (algebra coordinates) or a
//! single rational when the algebra is one-dimensional.
//!
//! Pair: `{phi_tor: [[..]], phi_ab: [block][i'][i], denominator}`; the
//! denominator is optional and checked when present.

use std::sync::Arc;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::{
    invariant, BlockExt, DMatrix, ExtClassMatrix, HomPair, IsotypicBlock, SemiabelianDescriptor, SemiabelianError,
};
use crate::arith::poly::IntLiteral;
use crate::arith::Rational;
use crate::linalg::{QAlgebra, RatMatrix};

/// An algebra element: coordinates, or a bare rational in dimension one.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoeffJson {
    Scalar(Rational),
    Vector(Vec<Rational>),
}

impl CoeffJson {
    fn into_coords(self, dim: usize, path: &str) -> Result<Vec<Rational>, SemiabelianError> {
        let v = match self {
            CoeffJson::Scalar(x) if dim == 1 => vec![x],
            CoeffJson::Scalar(_) => {
                return Err(invariant(
                    path,
                    format!("a bare rational needs a one-dimensional algebra, this one has dimension {dim}"),
                ))
            }
            CoeffJson::Vector(v) => v,
        };
        if v.len() != dim {
            return Err(invariant(
                path,
                format!("expected {dim} algebra coordinates, found {}", v.len()),
            ));
        }
        Ok(v)
    }

    fn from_coords(v: &[Rational]) -> CoeffJson {
        CoeffJson::Vector(v.to_vec())
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlockJson {
    pub algebra: QAlgebra,
    pub l: usize,
    pub e: u64,
    pub r: usize,
    pub r_prime: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DescriptorJson {
    pub t: usize,
    pub blocks: Vec<BlockJson>,
    pub eta: Vec<Vec<Vec<Vec<CoeffJson>>>>,
}

fn ext_block_from_json(
    nested: Vec<Vec<Vec<CoeffJson>>>,
    rows: usize,
    cols: usize,
    l: usize,
    dim: usize,
    path: &str,
) -> Result<BlockExt, SemiabelianError> {
    if nested.len() != rows {
        return Err(invariant(path, format!("expected {rows} rows, found {}", nested.len())));
    }
    let mut coords = Vec::with_capacity(rows);
    for (i, row) in nested.into_iter().enumerate() {
        let mut r = Vec::with_capacity(row.len());
        for (j, entry) in row.into_iter().enumerate() {
            let mut e = Vec::with_capacity(entry.len());
            for (k, c) in entry.into_iter().enumerate() {
                e.push(c.into_coords(dim, &format!("{path}[{i}][{j}][{k}]"))?);
            }
            r.push(e);
        }
        coords.push(r);
    }
    BlockExt::from_nested(coords, cols, l, dim, path)
}

fn ext_block_to_json(b: &BlockExt) -> Vec<Vec<Vec<CoeffJson>>> {
    (0..b.rows())
        .map(|i| {
            (0..b.cols())
                .map(|j| (0..b.l()).map(|k| CoeffJson::from_coords(b.get(i, j, k))).collect())
                .collect()
        })
        .collect()
}

/// Nested JSON arrays for an Ext class, indexed `[block][i][j][k]`.
pub fn ext_to_json(ext: &ExtClassMatrix) -> serde_json::Value {
    let v: Vec<_> = ext.blocks.iter().map(ext_block_to_json).collect();
    serde_json::to_value(v).expect("serializable")
}

impl DescriptorJson {
    pub fn into_descriptor(self) -> Result<SemiabelianDescriptor, SemiabelianError> {
        if self.eta.len() != self.blocks.len() {
            return Err(invariant(
                "eta",
                format!("{} blocks declared but eta has {}", self.blocks.len(), self.eta.len()),
            ));
        }
        let mut blocks = Vec::with_capacity(self.blocks.len());
        let mut eta = Vec::with_capacity(self.blocks.len());
        for (b, (bj, nested)) in self.blocks.into_iter().zip(self.eta).enumerate() {
            let algebra = Arc::new(bj.algebra);
            let block = IsotypicBlock::new(algebra, bj.l, bj.e, bj.r, bj.r_prime).map_err(|e| match e {
                SemiabelianError::Invariant { path, message } => invariant(format!("blocks[{b}].{path}"), message),
                other => other,
            })?;
            eta.push(ext_block_from_json(
                nested,
                block.r,
                self.t,
                block.l,
                block.dim(),
                &format!("eta[{b}]"),
            )?);
            blocks.push(block);
        }
        SemiabelianDescriptor::new(self.t, blocks, ExtClassMatrix { t: self.t, blocks: eta })
    }

    pub fn from_descriptor(g: &SemiabelianDescriptor) -> Self {
        DescriptorJson {
            t: g.t,
            blocks: g
                .blocks
                .iter()
                .map(|b| BlockJson {
                    algebra: (*b.algebra).clone(),
                    l: b.l,
                    e: b.e,
                    r: b.r,
                    r_prime: b.r_prime,
                })
                .collect(),
            eta: g.eta.blocks.iter().map(ext_block_to_json).collect(),
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HomPairJson {
    pub phi_tor: RatMatrix,
    pub phi_ab: Vec<Vec<Vec<CoeffJson>>>,
    #[serde(default)]
    pub denominator: Option<IntLiteral>,
}

impl HomPairJson {
    /// Resolves block algebras from `g` and checks the declared denominator.
    pub fn into_pair(self, g: &SemiabelianDescriptor) -> Result<HomPair, SemiabelianError> {
        if self.phi_ab.len() != g.blocks.len() {
            return Err(invariant(
                "phi_ab",
                format!("expected {} blocks, found {}", g.blocks.len(), self.phi_ab.len()),
            ));
        }
        let mut phi_ab = Vec::with_capacity(g.blocks.len());
        for (b, (blk, rows)) in g.blocks.iter().zip(self.phi_ab).enumerate() {
            if rows.len() != blk.r_prime {
                return Err(invariant(
                    format!("phi_ab[{b}]"),
                    format!("expected {} rows (r'), found {}", blk.r_prime, rows.len()),
                ));
            }
            let mut entries = Vec::with_capacity(rows.len());
            for (i, row) in rows.into_iter().enumerate() {
                if row.len() != blk.r {
                    return Err(invariant(
                        format!("phi_ab[{b}][{i}]"),
                        format!("expected {} columns (r), found {}", blk.r, row.len()),
                    ));
                }
                let mut out_row = Vec::with_capacity(row.len());
                for (j, c) in row.into_iter().enumerate() {
                    out_row.push(c.into_coords(blk.dim(), &format!("phi_ab[{b}][{i}][{j}]"))?);
                }
                entries.push(out_row);
            }
            let m = if entries.is_empty() {
                DMatrix::zeros(Arc::clone(&blk.algebra), 0, blk.r)
            } else {
                DMatrix::from_entries(Arc::clone(&blk.algebra), entries)?
            };
            phi_ab.push(m);
        }
        if self.phi_tor.cols() != g.t {
            return Err(invariant(
                "phi_tor",
                format!("expected {} columns, found {}", g.t, self.phi_tor.cols()),
            ));
        }
        let pair = HomPair::new(self.phi_tor, phi_ab);
        if let Some(lit) = self.denominator {
            let declared: BigInt = lit
                .into_bigint::<serde_json::Error>()
                .map_err(|e| invariant("denominator", e.to_string()))?;
            if &declared != pair.denominator() {
                return Err(invariant(
                    "denominator",
                    format!(
                        "declared {declared} but the least common denominator is {}",
                        pair.denominator()
                    ),
                ));
            }
        }
        Ok(pair)
    }

    pub fn from_pair(pair: &HomPair) -> serde_json::Value {
        let phi_ab: Vec<Vec<Vec<CoeffJson>>> = pair
            .phi_ab
            .iter()
            .map(|m| {
                (0..m.rows())
                    .map(|i| (0..m.cols()).map(|j| CoeffJson::from_coords(m.get(i, j))).collect())
                    .collect()
            })
            .collect();
        serde_json::json!({
            "phi_tor": pair.phi_tor,
            "phi_ab": phi_ab,
            "denominator": pair.denominator().to_string(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semiabelian::cubic_cone_model;

    #[test]
    fn descriptor_round_trip() {
        let g = cubic_cone_model([1, 2, 3]);
        let text = serde_json::to_string(&DescriptorJson::from_descriptor(&g)).unwrap();
        let back: DescriptorJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back.into_descriptor().unwrap(), g);
    }

    #[test]
    fn reports_bad_coefficient_path() {
        let text = r#"{"t":1,"blocks":[{"algebra":{"dim":1,"constants":[[["1"]]],"unit":["1"]},
            "l":2,"e":1,"r":1,"r_prime":1}],"eta":[[[[["1"],["1","2"]]]]]}"#;
        let d: DescriptorJson = serde_json::from_str(text).unwrap();
        match d.into_descriptor() {
            Err(SemiabelianError::Invariant { path, .. }) => assert_eq!(path, "eta[0][0][0][1]"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn denominator_is_checked() {
        let g = cubic_cone_model([1, 1, 1]);
        let text = r#"{"phi_tor":[["1/2","1","0"]],"phi_ab":[[[1,0,0],[0,1,0]]],"denominator":3}"#;
        let p: HomPairJson = serde_json::from_str(text).unwrap();
        assert!(matches!(p.into_pair(&g), Err(SemiabelianError::Invariant { .. })));
        let text = r#"{"phi_tor":[["1/2","1","0"]],"phi_ab":[[[1,0,0],[0,1,0]]],"denominator":2}"#;
        let p: HomPairJson = serde_json::from_str(text).unwrap();
        assert_eq!(p.into_pair(&g).unwrap().denominator(), &BigInt::from(2));
    }
}
