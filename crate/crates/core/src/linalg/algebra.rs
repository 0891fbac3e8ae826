//! Finite-dimensional associative algebras over the rationals, presented by
//! structure constants.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::matrix::RatMatrix;
use super::LinalgError;
use crate::arith::Rational;

/// An associative unital Q-algebra with basis `e_0..e_{n-1}`, where
/// `e_i e_j = sum_k c[i][j][k] e_k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QAlgebra {
    dim: usize,
    constants: Vec<Rational>,
    unit: Vec<Rational>,
}

/// JSON form: `{dim, constants: n x n x n array of "p/q", unit}`.
#[derive(Serialize, Deserialize)]
struct QAlgebraRepr {
    dim: usize,
    constants: Vec<Vec<Vec<Rational>>>,
    unit: Vec<Rational>,
}

impl QAlgebra {
    /// Builds an algebra from `c[i][j][k]` and checks associativity on all
    /// basis triples and the two-sided unit law.
    pub fn new(constants: Vec<Vec<Vec<Rational>>>, unit: Vec<Rational>) -> Result<Self, LinalgError> {
        let n = unit.len();
        if n == 0 {
            return Err(LinalgError::InvalidAlgebra("dimension must be positive".into()));
        }
        if constants.len() != n
            || constants
                .iter()
                .any(|row| row.len() != n || row.iter().any(|v| v.len() != n))
        {
            return Err(LinalgError::InvalidAlgebra(format!(
                "structure constants must have shape {n}x{n}x{n}"
            )));
        }
        let alg = QAlgebra {
            dim: n,
            constants: constants.into_iter().flatten().flatten().collect(),
            unit,
        };
        alg.check_axioms()?;
        Ok(alg)
    }

    fn check_axioms(&self) -> Result<(), LinalgError> {
        let n = self.dim;
        for i in 0..n {
            let ei = self.basis(i);
            if self.mul_coeffs(&self.unit, &ei) != ei || self.mul_coeffs(&ei, &self.unit) != ei {
                return Err(LinalgError::InvalidAlgebra(format!(
                    "unit is not a two-sided identity on basis element {i}"
                )));
            }
        }
        for i in 0..n {
            for j in 0..n {
                let eij = self.basis_product(i, j);
                for k in 0..n {
                    let left = self.mul_coeffs(&eij, &self.basis(k));
                    let right = self.mul_coeffs(&self.basis(i), &self.basis_product(j, k));
                    if left != right {
                        return Err(LinalgError::InvalidAlgebra(format!(
                            "not associative on basis triple ({i}, {j}, {k})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn unit(&self) -> &[Rational] {
        &self.unit
    }

    /// Coefficient of `e_k` in `e_i e_j`.
    pub fn constant(&self, i: usize, j: usize, k: usize) -> &Rational {
        &self.constants[(i * self.dim + j) * self.dim + k]
    }

    pub fn basis(&self, i: usize) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); self.dim];
        v[i] = Rational::one();
        v
    }

    fn basis_product(&self, i: usize, j: usize) -> Vec<Rational> {
        (0..self.dim).map(|k| self.constant(i, j, k).clone()).collect()
    }

    /// Product of two coefficient vectors (lengths must equal `dim`).
    pub fn mul_coeffs(&self, a: &[Rational], b: &[Rational]) -> Vec<Rational> {
        let n = self.dim;
        let mut out = vec![Rational::zero(); n];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let xy = x * y;
                for (k, o) in out.iter_mut().enumerate() {
                    let c = self.constant(i, j, k);
                    if !c.is_zero() {
                        *o += &(&xy * c);
                    }
                }
            }
        }
        out
    }

    /// Matrix of left multiplication by `d`: column `j` holds `d e_j`.
    pub fn left_mul_matrix(&self, d: &[Rational]) -> RatMatrix {
        let n = self.dim;
        RatMatrix::from_fn(n, n, |k, j| {
            let mut acc = Rational::zero();
            for (i, x) in d.iter().enumerate() {
                let c = self.constant(i, j, k);
                if !x.is_zero() && !c.is_zero() {
                    acc += &(x * c);
                }
            }
            acc
        })
    }

    /// Coordinates of the unit as an element.
    pub fn one(self: &Arc<Self>) -> AlgebraElement {
        AlgebraElement {
            algebra: Arc::clone(self),
            coeffs: self.unit.clone(),
        }
    }

    pub fn element(self: &Arc<Self>, coeffs: Vec<Rational>) -> Result<AlgebraElement, LinalgError> {
        if coeffs.len() != self.dim {
            return Err(LinalgError::ElementLength {
                expected: self.dim,
                found: coeffs.len(),
            });
        }
        Ok(AlgebraElement {
            algebra: Arc::clone(self),
            coeffs,
        })
    }

    /// The field of rationals as a one-dimensional algebra.
    pub fn rationals() -> Self {
        QAlgebra {
            dim: 1,
            constants: vec![Rational::one()],
            unit: vec![Rational::one()],
        }
    }

    /// `Q(sqrt(d))` with basis `{1, sqrt(d)}`; `d = -1` gives `Q(i)`.
    pub fn quadratic(d: i64) -> Self {
        let mut c = vec![vec![vec![Rational::zero(); 2]; 2]; 2];
        c[0][0][0] = Rational::one();
        c[0][1][1] = Rational::one();
        c[1][0][1] = Rational::one();
        c[1][1][0] = Rational::from_int(d);
        QAlgebra::new(c, vec![Rational::one(), Rational::zero()]).expect("valid quadratic algebra")
    }

    /// The full matrix algebra `M_m(Q)` with basis of matrix units `E_ab`
    /// ordered as index `a * m + b`.
    pub fn matrix_algebra(m: usize) -> Self {
        let n = m * m;
        let mut c = vec![vec![vec![Rational::zero(); n]; n]; n];
        for a in 0..m {
            for b in 0..m {
                for d in 0..m {
                    // E_ab E_bd = E_ad
                    c[a * m + b][b * m + d][a * m + d] = Rational::one();
                }
            }
        }
        let mut unit = vec![Rational::zero(); n];
        for a in 0..m {
            unit[a * m + a] = Rational::one();
        }
        QAlgebra::new(c, unit).expect("valid matrix algebra")
    }

    /// The quaternion algebra `(a, b)_Q` with basis `{1, i, j, k}`,
    /// `i^2 = a`, `j^2 = b`, `ij = -ji = k`.
    pub fn quaternions(a: i64, b: i64) -> Self {
        let (a, b) = (Rational::from_int(a), Rational::from_int(b));
        let one = Rational::one();
        let mut c = vec![vec![vec![Rational::zero(); 4]; 4]; 4];
        let mut set = |i: usize, j: usize, k: usize, v: Rational| c[i][j][k] = v;
        for x in 0..4 {
            set(0, x, x, one.clone());
            set(x, 0, x, one.clone());
        }
        set(1, 1, 0, a.clone());
        set(2, 2, 0, b.clone());
        set(3, 3, 0, -(&a * &b));
        set(1, 2, 3, one.clone());
        set(2, 1, 3, -one.clone());
        set(1, 3, 2, a.clone());
        set(3, 1, 2, -a.clone());
        set(2, 3, 1, -b.clone());
        set(3, 2, 1, b.clone());
        QAlgebra::new(c, vec![one, Rational::zero(), Rational::zero(), Rational::zero()])
            .expect("valid quaternion algebra")
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("serializable")
    }
}

impl Serialize for QAlgebra {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let n = self.dim;
        let constants = (0..n)
            .map(|i| (0..n).map(|j| self.basis_product(i, j)).collect())
            .collect();
        QAlgebraRepr {
            dim: n,
            constants,
            unit: self.unit.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for QAlgebra {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = QAlgebraRepr::deserialize(deserializer)?;
        if repr.unit.len() != repr.dim {
            return Err(serde::de::Error::custom(format!(
                "unit has length {} but dim is {}",
                repr.unit.len(),
                repr.dim
            )));
        }
        QAlgebra::new(repr.constants, repr.unit).map_err(serde::de::Error::custom)
    }
}

/// An element of a specific algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraElement {
    algebra: Arc<QAlgebra>,
    coeffs: Vec<Rational>,
}

impl AlgebraElement {
    pub fn algebra(&self) -> &Arc<QAlgebra> {
        &self.algebra
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Rational::is_zero)
    }
}

fn same_algebra(a: &Arc<QAlgebra>, b: &Arc<QAlgebra>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// Product in the common algebra of `a` and `b`.
pub fn algebra_mul(a: &AlgebraElement, b: &AlgebraElement) -> Result<AlgebraElement, LinalgError> {
    if !same_algebra(&a.algebra, &b.algebra) {
        return Err(LinalgError::AlgebraMismatch);
    }
    Ok(AlgebraElement {
        algebra: Arc::clone(&a.algebra),
        coeffs: a.algebra.mul_coeffs(&a.coeffs, &b.coeffs),
    })
}

/// The matrix `l(d)` with `l(d) coords(x) = coords(d x)`.
pub fn regular_representation(algebra: &QAlgebra, d: &AlgebraElement) -> Result<RatMatrix, LinalgError> {
    if *d.algebra != *algebra {
        return Err(LinalgError::AlgebraMismatch);
    }
    Ok(algebra.left_mul_matrix(&d.coeffs))
}

/// Dimension over `algebra` of the left submodule of `algebra^r` spanned by
/// `vectors`, each given as `r` coefficient vectors. Requires the algebra to be
/// a division algebra; a Q-rank not divisible by the algebra dimension is
/// reported as an error.
pub fn d_span_rank(algebra: &QAlgebra, vectors: &[Vec<Vec<Rational>>]) -> Result<usize, LinalgError> {
    span_rank(algebra, vectors, true)
}

/// As [`d_span_rank`] for the right submodule `{sum v_m d_m}`. Equal to the
/// left version when the algebra is commutative.
pub fn d_span_rank_right(algebra: &QAlgebra, vectors: &[Vec<Vec<Rational>>]) -> Result<usize, LinalgError> {
    span_rank(algebra, vectors, false)
}

fn span_rank(algebra: &QAlgebra, vectors: &[Vec<Vec<Rational>>], left: bool) -> Result<usize, LinalgError> {
    let n = algebra.dim;
    let Some(r) = vectors.first().map(Vec::len) else {
        return Ok(0);
    };
    let mut rows = Vec::with_capacity(vectors.len() * n);
    for v in vectors {
        if v.len() != r {
            return Err(LinalgError::DimensionMismatch {
                left: (r, n),
                right: (v.len(), n),
            });
        }
        if let Some(bad) = v.iter().find(|x| x.len() != n) {
            return Err(LinalgError::ElementLength {
                expected: n,
                found: bad.len(),
            });
        }
        for b in 0..n {
            let e = algebra.basis(b);
            let mut row = Vec::with_capacity(r * n);
            for x in v {
                if left {
                    row.extend(algebra.mul_coeffs(&e, x));
                } else {
                    row.extend(algebra.mul_coeffs(x, &e));
                }
            }
            rows.push(row);
        }
    }
    let q_rank = RatMatrix::from_rows(rows)?.rank();
    if q_rank % n != 0 {
        return Err(LinalgError::NotDivisionAlgebra { q_rank, dim: n });
    }
    Ok(q_rank / n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| Rational::from_int(x)).collect()
    }

    #[test]
    fn gaussian_rationals_regular_rep() {
        let qi = Arc::new(QAlgebra::quadratic(-1));
        let i = qi.element(ints(&[0, 1])).unwrap();
        let l = regular_representation(&qi, &i).unwrap();
        assert_eq!(l, RatMatrix::from_i64_rows(&[&[0, -1], &[1, 0]]));
    }

    #[test]
    fn matrix_units_multiply() {
        let m2 = Arc::new(QAlgebra::matrix_algebra(2));
        let e12 = m2.element(ints(&[0, 1, 0, 0])).unwrap();
        let e21 = m2.element(ints(&[0, 0, 1, 0])).unwrap();
        assert_eq!(
            algebra_mul(&e12, &e21).unwrap().coeffs(),
            ints(&[1, 0, 0, 0]).as_slice()
        );
    }

    #[test]
    fn rational_product() {
        let q = Arc::new(QAlgebra::rationals());
        let a = q.element(vec![Rational::new(2, 3)]).unwrap();
        let b = q.element(vec![Rational::new(3, 4)]).unwrap();
        assert_eq!(algebra_mul(&a, &b).unwrap().coeffs(), &[Rational::new(1, 2)]);
    }

    #[test]
    fn rejects_non_associative_table() {
        // e1 e1 = e0 + e1 with e0 as unit would be fine; break it on purpose
        let mut c = vec![vec![vec![Rational::zero(); 2]; 2]; 2];
        c[0][0][0] = Rational::one();
        c[0][1][1] = Rational::one();
        c[1][0][1] = Rational::one();
        c[1][1][1] = Rational::one();
        assert!(QAlgebra::new(c.clone(), ints(&[1, 0])).is_ok());
        assert!(matches!(
            QAlgebra::new(c, ints(&[0, 1])),
            Err(LinalgError::InvalidAlgebra(_))
        ));
    }

    #[test]
    fn span_rank_examples() {
        let q = QAlgebra::rationals();
        let v = |xs: &[i64]| xs.iter().map(|&x| vec![Rational::from_int(x)]).collect::<Vec<_>>();
        assert_eq!(d_span_rank(&q, &[v(&[1, 0, 0]), v(&[0, 1, 0])]).unwrap(), 2);
        assert_eq!(d_span_rank(&q, &[v(&[1, 2, 3]), v(&[2, 4, 6])]).unwrap(), 1);
        let qi = QAlgebra::quadratic(-1);
        let w = vec![ints(&[1, 2]), ints(&[3, -1])];
        let iw: Vec<Vec<Rational>> = w.iter().map(|x| qi.mul_coeffs(&ints(&[0, 1]), x)).collect();
        assert_eq!(d_span_rank(&qi, &[w, iw]).unwrap(), 1);
        let m2 = QAlgebra::matrix_algebra(2);
        let e11 = vec![ints(&[1, 0, 0, 0])];
        assert!(matches!(
            d_span_rank(&m2, &[e11]),
            Err(LinalgError::NotDivisionAlgebra { q_rank: 2, dim: 4 })
        ));
    }

    #[test]
    fn json_round_trip() {
        let h = QAlgebra::quaternions(-1, -1);
        let s = serde_json::to_string(&h).unwrap();
        let back: QAlgebra = serde_json::from_str(&s).unwrap();
        assert_eq!(back, h);
    }
}
