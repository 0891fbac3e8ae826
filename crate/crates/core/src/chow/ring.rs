//! The Chow ring of `P^{n_1} x ... x P^{n_k}`, presented as
//! `Z[H_1, ..., H_k] / (H_1^{n_1+1}, ..., H_k^{n_k+1})`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::ChowError;
use crate::arith::poly::{bigint_to_json, IntLiteral};

/// A product of projective spaces, one entry per factor dimension.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiProjRing {
    factor_dims: Vec<u32>,
}

impl MultiProjRing {
    pub fn new(factor_dims: Vec<u32>) -> Result<Self, ChowError> {
        if let Some(i) = factor_dims.iter().position(|&n| n == 0) {
            return Err(ChowError::Invalid(format!("factor {i} has dimension 0")));
        }
        Ok(MultiProjRing { factor_dims })
    }

    /// `(P^1)^k`.
    pub fn p1_power(k: usize) -> Self {
        MultiProjRing {
            factor_dims: vec![1; k],
        }
    }

    pub fn factor_dims(&self) -> &[u32] {
        &self.factor_dims
    }

    pub fn num_factors(&self) -> usize {
        self.factor_dims.len()
    }

    /// Dimension of the ambient variety, i.e. the degree of the top class.
    pub fn dimension(&self) -> u32 {
        self.factor_dims.iter().sum()
    }

    /// The ring whose factors are those of `self` followed by those of `other`.
    pub fn product(&self, other: &MultiProjRing) -> MultiProjRing {
        let mut dims = self.factor_dims.clone();
        dims.extend_from_slice(&other.factor_dims);
        MultiProjRing { factor_dims: dims }
    }
}

/// An integral class, stored as exponent vector -> nonzero coefficient.
#[derive(Clone, PartialEq, Eq)]
pub struct ChowClass {
    ring: MultiProjRing,
    terms: BTreeMap<Vec<u32>, BigInt>,
}

impl ChowClass {
    pub fn zero(ring: &MultiProjRing) -> Self {
        ChowClass {
            ring: ring.clone(),
            terms: BTreeMap::new(),
        }
    }

    /// The fundamental class `[X]`.
    pub fn one(ring: &MultiProjRing) -> Self {
        Self::monomial(ring, vec![0; ring.num_factors()], BigInt::one()).expect("zero exponents")
    }

    /// `coeff * prod H_i^{e_i}`; exponents beyond a factor dimension give zero.
    pub fn monomial(ring: &MultiProjRing, exponents: Vec<u32>, coeff: BigInt) -> Result<Self, ChowError> {
        if exponents.len() != ring.num_factors() {
            return Err(ChowError::Invalid(format!(
                "exponent vector has length {}, ring has {} factors",
                exponents.len(),
                ring.num_factors()
            )));
        }
        let mut c = Self::zero(ring);
        if !coeff.is_zero() && exponents.iter().zip(&ring.factor_dims).all(|(e, n)| e <= n) {
            c.terms.insert(exponents, coeff);
        }
        Ok(c)
    }

    /// The hyperplane class of factor `i`.
    pub fn hyperplane(ring: &MultiProjRing, i: usize) -> Self {
        let mut e = vec![0; ring.num_factors()];
        e[i] = 1;
        Self::monomial(ring, e, BigInt::one()).expect("valid index")
    }

    /// `sum_i coeffs[i] H_i`.
    pub fn linear(ring: &MultiProjRing, coeffs: &[BigInt]) -> Result<Self, ChowError> {
        if coeffs.len() != ring.num_factors() {
            return Err(ChowError::Invalid(format!(
                "{} coefficients for a ring with {} factors",
                coeffs.len(),
                ring.num_factors()
            )));
        }
        let mut c = Self::zero(ring);
        for (i, a) in coeffs.iter().enumerate() {
            if !a.is_zero() {
                let mut e = vec![0; ring.num_factors()];
                e[i] = 1;
                c.terms.insert(e, a.clone());
            }
        }
        Ok(c)
    }

    pub fn ring(&self) -> &MultiProjRing {
        &self.ring
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &BigInt)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    pub fn coeff(&self, exponents: &[u32]) -> BigInt {
        self.terms.get(exponents).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The common codimension of all terms, or `None` for zero or mixed classes.
    pub fn codimension(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(|e| e.iter().sum::<u32>());
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    fn check_ring(&self, other: &ChowClass) -> Result<(), ChowError> {
        if self.ring != other.ring {
            return Err(ChowError::RingMismatch {
                left: self.ring.factor_dims.clone(),
                right: other.ring.factor_dims.clone(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &ChowClass) -> Result<ChowClass, ChowError> {
        self.check_ring(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, k: &BigInt) -> ChowClass {
        if k.is_zero() {
            return Self::zero(&self.ring);
        }
        ChowClass {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * k)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> ChowClass {
        let mut acc = Self::one(&self.ring);
        for _ in 0..k {
            acc = chow_mul(&acc, self).expect("same ring");
        }
        acc
    }

    /// Pulls back along the projection onto a block of consecutive factors:
    /// `self` lives on factors `offset..offset + self.ring.len()` of `target`.
    pub fn pullback_into(&self, target: &MultiProjRing, offset: usize) -> Result<ChowClass, ChowError> {
        let k = self.ring.num_factors();
        if offset + k > target.num_factors() || target.factor_dims[offset..offset + k] != self.ring.factor_dims[..] {
            return Err(ChowError::RingMismatch {
                left: self.ring.factor_dims.clone(),
                right: target.factor_dims.clone(),
            });
        }
        let mut out = Self::zero(target);
        for (e, c) in &self.terms {
            let mut full = vec![0; target.num_factors()];
            full[offset..offset + k].copy_from_slice(e);
            out.terms.insert(full, c.clone());
        }
        Ok(out)
    }

    fn add_term(&mut self, e: Vec<u32>, c: BigInt) {
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                if !c.is_zero() {
                    v.insert(c);
                }
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }
}

/// Product in the truncated polynomial ring; monomials with an exponent
/// above its factor dimension vanish.
pub fn chow_mul(a: &ChowClass, b: &ChowClass) -> Result<ChowClass, ChowError> {
    a.check_ring(b)?;
    let dims = &a.ring.factor_dims;
    let mut out = ChowClass::zero(&a.ring);
    let mut e = vec![0u32; dims.len()];
    for (ea, ca) in &a.terms {
        'pairs: for (eb, cb) in &b.terms {
            for i in 0..dims.len() {
                let s = ea[i] + eb[i];
                if s > dims[i] {
                    continue 'pairs;
                }
                e[i] = s;
            }
            out.add_term(e.clone(), ca * cb);
        }
    }
    Ok(out)
}

/// Coefficient of the class of a point, `prod H_i^{n_i}`.
pub fn chow_degree(c: &ChowClass) -> BigInt {
    c.coeff(&c.ring.factor_dims)
}

impl fmt::Display for ChowClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}")?;
            for (i, &x) in e.iter().enumerate() {
                match x {
                    0 => {}
                    1 => write!(f, "*H{}", i + 1)?,
                    _ => write!(f, "*H{}^{x}", i + 1)?,
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for ChowClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ChowClass({:?}: {self})", self.ring.factor_dims)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TermJson<C> {
    coeff: C,
    exponents: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ClassJson<C> {
    classes: Vec<TermJson<C>>,
    factors: Vec<u32>,
}

impl Serialize for ChowClass {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        ClassJson {
            factors: self.ring.factor_dims.clone(),
            classes: self
                .terms
                .iter()
                .map(|(e, c)| TermJson {
                    exponents: e.clone(),
                    coeff: bigint_to_json(c),
                })
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ChowClass {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let raw = ClassJson::<IntLiteral>::deserialize(deserializer)?;
        let ring = MultiProjRing::new(raw.factors).map_err(D::Error::custom)?;
        let mut out = ChowClass::zero(&ring);
        for (k, t) in raw.classes.into_iter().enumerate() {
            if t.exponents.len() != ring.num_factors() {
                return Err(D::Error::custom(format!(
                    "classes[{k}].exponents has length {}, expected {}",
                    t.exponents.len(),
                    ring.num_factors()
                )));
            }
            if let Some(i) = t.exponents.iter().zip(&ring.factor_dims).position(|(e, n)| e > n) {
                return Err(D::Error::custom(format!(
                    "classes[{k}].exponents[{i}] exceeds the factor dimension {}",
                    ring.factor_dims[i]
                )));
            }
            out.add_term(t.exponents, t.coeff.into_bigint()?);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn epsilon_squares_to_zero() {
        let r = MultiProjRing::p1_power(2);
        let e1 = ChowClass::hyperplane(&r, 0);
        assert!(chow_mul(&e1, &e1).unwrap().is_zero());
    }

    #[test]
    fn hand_expansion_in_p1_p1() {
        let r = MultiProjRing::p1_power(2);
        let a = ChowClass::linear(&r, &[big(2), big(1)]).unwrap();
        let b = ChowClass::linear(&r, &[big(0), big(2)]).unwrap();
        let p = chow_mul(&a, &b).unwrap();
        assert_eq!(p, ChowClass::monomial(&r, vec![1, 1], big(4)).unwrap());
        assert_eq!(chow_degree(&p), big(4));
    }

    #[test]
    fn below_truncation_survives() {
        let r = MultiProjRing::new(vec![2, 1]).unwrap();
        let h = ChowClass::hyperplane(&r, 0);
        let h2 = chow_mul(&h, &h).unwrap();
        assert_eq!(h2, ChowClass::monomial(&r, vec![2, 0], big(1)).unwrap());
        assert!(chow_mul(&h2, &h).unwrap().is_zero());
    }

    #[test]
    fn degree_of_lower_class_is_zero() {
        let r = MultiProjRing::p1_power(2);
        assert_eq!(chow_degree(&ChowClass::hyperplane(&r, 0)), big(0));
    }

    #[test]
    fn ring_mismatch_is_an_error() {
        let a = ChowClass::one(&MultiProjRing::p1_power(2));
        let b = ChowClass::one(&MultiProjRing::p1_power(3));
        assert!(matches!(chow_mul(&a, &b), Err(ChowError::RingMismatch { .. })));
    }

    #[test]
    fn zero_dimensional_factor_rejected() {
        assert!(MultiProjRing::new(vec![1, 0]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let r = MultiProjRing::new(vec![2, 1]).unwrap();
        let c = ChowClass::linear(&r, &[big(3), big(-5)]).unwrap().pow(2);
        let text = serde_json::to_string(&c).unwrap();
        assert_eq!(
            text,
            r#"{"classes":[{"coeff":-30,"exponents":[1,1]},{"coeff":9,"exponents":[2,0]}],"factors":[2,1]}"#
        );
        let back: ChowClass = serde_json::from_str(&text).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn json_rejects_overflowing_exponent() {
        let text = r#"{"factors":[1],"classes":[{"exponents":[2],"coeff":1}]}"#;
        assert!(serde_json::from_str::<ChowClass>(text).is_err());
    }
}
