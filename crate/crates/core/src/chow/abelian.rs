//! Intersection degrees of divisor classes on the abelian part of a model
//! cycle.
//!
//! Two descriptions are supported. For `E^g` with `E` an elliptic curve
//! without complex multiplication, `NS(E^g)` is the lattice of symmetric
//! integer `g x g` matrices, the product polarization `N` is the identity,
//! `f^* N` for `f: E^g -> E^{g'}` given by an integer matrix `P` is `P^T P`,
//! and the self-intersection of the class of `S` is `g! det S`; the model
//! cycle is `c1(N)^codim . [E^g]`. Otherwise a symmetric multilinear degree
//! table on a finite set of divisor symbols is supplied directly.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::Deserialize;

use super::ChowError;
use crate::arith::poly::IntLiteral;
use crate::arith::Rational;
use crate::linalg::RatMatrix;

/// A divisor class: a symmetric matrix for `E^g`, or symbol coordinates for
/// a table.
pub type DivisorClass = Vec<Rational>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AbelianDegreeData {
    EllipticPower {
        g: usize,
        codim: usize,
    },
    Table {
        /// Number of divisor symbols.
        symbols: usize,
        /// Dimension of the cycle the degrees are taken on.
        dim: usize,
        /// Degree of each product, keyed by the non-decreasing symbol tuple.
        degrees: BTreeMap<Vec<usize>, BigInt>,
        /// Coordinates of the polarization `N`.
        polarization: DivisorClass,
        /// Symbols declared nef; products of them must have non-negative degree.
        nef: Vec<usize>,
    },
}

impl AbelianDegreeData {
    /// Validates a degree table: index ranges, symmetry of duplicated
    /// entries, and non-negativity on the declared nef symbols.
    pub fn table(
        symbols: usize,
        dim: usize,
        entries: Vec<(Vec<usize>, BigInt)>,
        polarization: DivisorClass,
        nef: Vec<usize>,
    ) -> Result<Self, ChowError> {
        if polarization.len() != symbols {
            return Err(ChowError::Invalid(format!(
                "polarization has {} coordinates, expected {symbols}",
                polarization.len()
            )));
        }
        if let Some(&s) = nef.iter().find(|&&s| s >= symbols) {
            return Err(ChowError::Invalid(format!("nef symbol {s} out of range")));
        }
        let mut degrees = BTreeMap::new();
        for (k, (mut key, d)) in entries.into_iter().enumerate() {
            if key.len() != dim {
                return Err(ChowError::Invalid(format!(
                    "degrees[{k}] has {} symbols, the cycle has dimension {dim}",
                    key.len()
                )));
            }
            if let Some(&s) = key.iter().find(|&&s| s >= symbols) {
                return Err(ChowError::Invalid(format!("degrees[{k}] uses symbol {s} out of range")));
            }
            key.sort_unstable();
            if let Some(prev) = degrees.get(&key) {
                if prev != &d {
                    return Err(ChowError::Invalid(format!(
                        "degrees[{k}] is not symmetric: {key:?} given as both {prev} and {d}"
                    )));
                }
            }
            degrees.insert(key, d);
        }
        let data = AbelianDegreeData::Table {
            symbols,
            dim,
            degrees,
            polarization,
            nef,
        };
        data.check_nef()?;
        Ok(data)
    }

    fn check_nef(&self) -> Result<(), ChowError> {
        let AbelianDegreeData::Table { degrees, nef, .. } = self else {
            return Ok(());
        };
        for (key, d) in degrees {
            if d < &BigInt::from(0) && key.iter().all(|s| nef.contains(s)) {
                return Err(ChowError::Invalid(format!(
                    "product {key:?} of nef symbols has negative degree {d}"
                )));
            }
        }
        Ok(())
    }

    /// Dimension of the model cycle.
    pub fn cycle_dim(&self) -> usize {
        match self {
            AbelianDegreeData::EllipticPower { g, codim } => g.saturating_sub(*codim),
            AbelianDegreeData::Table { dim, .. } => *dim,
        }
    }

    pub fn polarization(&self) -> DivisorClass {
        match self {
            AbelianDegreeData::EllipticPower { g, .. } => identity(*g),
            AbelianDegreeData::Table { polarization, .. } => polarization.clone(),
        }
    }

    /// Coordinate count of a divisor class.
    pub fn class_len(&self) -> usize {
        match self {
            AbelianDegreeData::EllipticPower { g, .. } => g * g,
            AbelianDegreeData::Table { symbols, .. } => *symbols,
        }
    }

    /// `P^T P` for an integer or rational `g' x g` matrix `P`.
    pub fn pullback_of_polarization(&self, p: &RatMatrix) -> Result<DivisorClass, ChowError> {
        match self {
            AbelianDegreeData::EllipticPower { g, .. } => {
                if p.cols() != *g {
                    return Err(ChowError::Invalid(format!(
                        "abelian map has {} columns, expected g = {g}",
                        p.cols()
                    )));
                }
                let q = p.transpose().mul(p).expect("compatible shapes");
                Ok(q.entries().to_vec())
            }
            AbelianDegreeData::Table { .. } => Err(ChowError::Invalid(
                "a degree table needs the pulled-back class, not a matrix".into(),
            )),
        }
    }

    /// Degree of the product of `divisors` on the model cycle; zero unless
    /// their number equals the cycle dimension.
    pub fn degree(&self, divisors: &[&DivisorClass]) -> Result<Rational, ChowError> {
        if let Some(k) = divisors.iter().position(|d| d.len() != self.class_len()) {
            return Err(ChowError::Invalid(format!(
                "divisor {k} has {} coordinates, expected {}",
                divisors[k].len(),
                self.class_len()
            )));
        }
        if divisors.len() != self.cycle_dim() {
            return Ok(Rational::zero());
        }
        match self {
            AbelianDegreeData::EllipticPower { g, codim } => {
                if codim > g {
                    return Ok(Rational::zero());
                }
                let pol = identity(*g);
                let mut all: Vec<&DivisorClass> = divisors.to_vec();
                all.extend(std::iter::repeat(&pol).take(*codim));
                Ok(mixed_determinant(*g, &all))
            }
            AbelianDegreeData::Table { degrees, dim, .. } => {
                let mut total = Rational::zero();
                let mut idx = vec![0usize; *dim];
                table_sum(degrees, divisors, 0, &mut idx, Rational::one(), &mut total);
                Ok(total)
            }
        }
    }
}

fn identity(g: usize) -> DivisorClass {
    (0..g * g)
        .map(|k| {
            if k / g == k % g {
                Rational::one()
            } else {
                Rational::zero()
            }
        })
        .collect()
}

fn table_sum(
    degrees: &BTreeMap<Vec<usize>, BigInt>,
    divisors: &[&DivisorClass],
    pos: usize,
    idx: &mut Vec<usize>,
    weight: Rational,
    total: &mut Rational,
) {
    if pos == divisors.len() {
        let mut key = idx.clone();
        key.sort_unstable();
        if let Some(d) = degrees.get(&key) {
            *total += &(weight * Rational::from(d));
        }
        return;
    }
    for (s, c) in divisors[pos].iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        idx[pos] = s;
        table_sum(degrees, divisors, pos + 1, idx, &weight * c, total);
    }
}

/// Intersection number of the divisors with symmetric matrices `S_1..S_g`
/// on `E^g`: the polarization of `S -> g! det S`,
/// `sum_{T subset [g]} (-1)^{g-|T|} det(sum_{i in T} S_i)`.
fn mixed_determinant(g: usize, mats: &[&DivisorClass]) -> Rational {
    debug_assert_eq!(mats.len(), g);
    let mut total = Rational::zero();
    for mask in 0u64..(1u64 << g) {
        let mut sum = vec![Rational::zero(); g * g];
        for (i, m) in mats.iter().enumerate() {
            if mask >> i & 1 == 1 {
                for (x, y) in sum.iter_mut().zip(m.iter()) {
                    *x += y;
                }
            }
        }
        let det = if g == 0 {
            Rational::one()
        } else {
            RatMatrix::from_fn(g, g, |i, j| sum[i * g + j].clone())
                .determinant()
                .expect("square")
        };
        if (g - mask.count_ones() as usize) % 2 == 0 {
            total += &det;
        } else {
            total -= &det;
        }
    }
    total
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableEntryJson {
    pub symbols: Vec<usize>,
    pub degree: IntLiteral,
}

/// JSON form: `{"elliptic_power": {"g", "codim"}}` or
/// `{"table": {"symbols", "dim", "degrees": [{symbols, degree}], "polarization", "nef"}}`.
#[derive(Clone, Debug, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum AbelianDegreeJson {
    EllipticPower {
        g: usize,
        #[serde(default)]
        codim: usize,
    },
    Table {
        symbols: usize,
        dim: usize,
        degrees: Vec<TableEntryJson>,
        polarization: Vec<Rational>,
        #[serde(default)]
        nef: Vec<usize>,
    },
}

impl AbelianDegreeJson {
    pub fn into_data(self) -> Result<AbelianDegreeData, ChowError> {
        match self {
            AbelianDegreeJson::EllipticPower { g, codim } => {
                if codim > g {
                    return Err(ChowError::Invalid(format!("codim {codim} exceeds g = {g}")));
                }
                Ok(AbelianDegreeData::EllipticPower { g, codim })
            }
            AbelianDegreeJson::Table {
                symbols,
                dim,
                degrees,
                polarization,
                nef,
            } => {
                let mut entries = Vec::with_capacity(degrees.len());
                for (k, e) in degrees.into_iter().enumerate() {
                    let d = e
                        .degree
                        .into_bigint::<serde_json::Error>()
                        .map_err(|err| ChowError::Invalid(format!("degrees[{k}]: {err}")))?;
                    entries.push((e.symbols, d));
                }
                AbelianDegreeData::table(symbols, dim, entries, polarization, nef)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym(g: usize, v: &[i64]) -> DivisorClass {
        assert_eq!(v.len(), g * g);
        v.iter().map(|&x| Rational::from_int(x)).collect()
    }

    #[test]
    fn polarization_self_intersection_is_g_factorial() {
        for g in 1..=4 {
            let data = AbelianDegreeData::EllipticPower { g, codim: 0 };
            let n = data.polarization();
            let ds: Vec<&DivisorClass> = (0..g).map(|_| &n).collect();
            let fact: i64 = (1..=g as i64).product();
            assert_eq!(data.degree(&ds).unwrap(), Rational::from_int(fact));
        }
    }

    #[test]
    fn elliptic_curve_degree_is_matrix_entry() {
        let data = AbelianDegreeData::EllipticPower { g: 1, codim: 0 };
        let p = RatMatrix::from_i64_rows(&[&[3]]);
        let q = data.pullback_of_polarization(&p).unwrap();
        assert_eq!(data.degree(&[&q]).unwrap(), Rational::from_int(9));
    }

    #[test]
    fn mixed_product_on_surface() {
        // on E x E: diag(1,0) . diag(0,1) = 1 (two transverse fibres)
        let data = AbelianDegreeData::EllipticPower { g: 2, codim: 0 };
        let a = sym(2, &[1, 0, 0, 0]);
        let b = sym(2, &[0, 0, 0, 1]);
        assert_eq!(data.degree(&[&a, &b]).unwrap(), Rational::one());
        assert_eq!(data.degree(&[&a, &a]).unwrap(), Rational::zero());
    }

    #[test]
    fn codim_cuts_by_polarization() {
        // N . [E x E] is a curve with N-degree N^2 = 2
        let data = AbelianDegreeData::EllipticPower { g: 2, codim: 1 };
        let n = data.polarization();
        assert_eq!(data.degree(&[&n]).unwrap(), Rational::from_int(2));
        assert_eq!(data.degree(&[&n, &n]).unwrap(), Rational::zero());
    }

    #[test]
    fn table_is_multilinear() {
        let entries = vec![
            (vec![0, 0], BigInt::from(2)),
            (vec![1, 0], BigInt::from(3)),
            (vec![1, 1], BigInt::from(5)),
        ];
        let pol = vec![Rational::one(), Rational::zero()];
        let data = AbelianDegreeData::table(2, 2, entries, pol, vec![0, 1]).unwrap();
        let x = vec![Rational::from_int(1), Rational::from_int(2)];
        // (e0 + 2 e1)^2 = 2 + 4*3 + 4*5
        assert_eq!(data.degree(&[&x, &x]).unwrap(), Rational::from_int(34));
    }

    #[test]
    fn table_rejects_asymmetry_and_negative_nef() {
        let pol = vec![Rational::one(), Rational::zero()];
        let asym = vec![(vec![0, 1], BigInt::from(1)), (vec![1, 0], BigInt::from(2))];
        assert!(AbelianDegreeData::table(2, 2, asym, pol.clone(), vec![]).is_err());
        let neg = vec![(vec![0, 0], BigInt::from(-1))];
        assert!(AbelianDegreeData::table(2, 2, neg, pol, vec![0]).is_err());
    }
}
