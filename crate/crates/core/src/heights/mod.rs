//! Canonical heights on a split model `G_m^t x A`: the toric part through
//! Weil heights of algebraic coordinates, the abelian part through a
//! positive semidefinite quadratic form on a rational point lattice.

mod algebraic;
mod cover;
mod roots;

use num_traits::Zero;
use thiserror::Error;

use crate::arith::Rational;
use crate::linalg::RatMatrix;

pub(crate) use algebraic::integer_charpoly;
pub use algebraic::{
    cyclotomic, euler_phi, is_cyclotomic, minpoly_height, AlgebraicJson, AlgebraicNumber, Rect, DEGREE_CAP,
    MAX_CONDUCTOR,
};
pub use cover::{cover_grid, CoordKind};
pub use roots::{certified_roots, log_abs_bigint, log_mahler_measure, log_plus_abs, Certified, RootDisk};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HeightError {
    #[error("zero has no height")]
    ZeroInput,
    #[error("coordinate {0} lies on the boundary (it is zero)")]
    BoundaryPoint(usize),
    #[error("the rectangle does not isolate exactly one root")]
    NotIsolating,
    #[error("degree {0} exceeds the cap of {DEGREE_CAP}")]
    DegreeCap(usize),
    #[error("numerical certification failed: {0}")]
    Numeric(String),
    #[error("Gram matrix is not symmetric")]
    NotSymmetric,
    #[error("Gram matrix is not positive semidefinite")]
    NotPositiveSemidefinite,
    #[error("epsilon must be positive")]
    NonPositiveEpsilon,
    #[error("n_delta = {n} is too small: spacing 1/{n} exceeds the radius in coordinate {coord}")]
    InsufficientResolution { n: u64, coord: usize },
    #[error("invalid input: {0}")]
    Invalid(String),
}

/// A point of the torus `G_m^t` with algebraic coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct TorusPoint {
    coords: Vec<AlgebraicNumber>,
}

impl TorusPoint {
    /// Rejects zero coordinates, which would lie on the boundary of the
    /// compactification.
    pub fn new(coords: Vec<AlgebraicNumber>) -> Result<Self, HeightError> {
        if let Some(i) = coords.iter().position(AlgebraicNumber::is_zero) {
            return Err(HeightError::BoundaryPoint(i));
        }
        Ok(TorusPoint { coords })
    }

    pub fn from_rationals(qs: &[Rational]) -> Result<Self, HeightError> {
        Self::new(qs.iter().map(AlgebraicNumber::from_rational).collect())
    }

    pub fn coords(&self) -> &[AlgebraicNumber] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn mul(&self, other: &TorusPoint) -> Result<TorusPoint, HeightError> {
        check_dims(self.dim(), other.dim())?;
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a.mul(b))
            .collect::<Result<_, _>>()?;
        Ok(TorusPoint { coords })
    }

    /// Coordinatewise `n`-th power, the multiplication by `n` on the torus.
    pub fn pow(&self, n: i64) -> Result<TorusPoint, HeightError> {
        let coords = self.coords.iter().map(|a| a.pow(n)).collect::<Result<_, _>>()?;
        Ok(TorusPoint { coords })
    }

    pub fn inverse(&self) -> Result<TorusPoint, HeightError> {
        self.pow(-1)
    }

    /// `prod_u x_u^{k_u}`.
    pub fn monomial(&self, exps: &[i64]) -> Result<AlgebraicNumber, HeightError> {
        check_dims(self.dim(), exps.len())?;
        let mut acc = AlgebraicNumber::from_int(1);
        for (x, &k) in self.coords.iter().zip(exps) {
            if k != 0 {
                acc = acc.mul(&x.pow(k)?)?;
            }
        }
        Ok(acc)
    }
}

fn check_dims(a: usize, b: usize) -> Result<(), HeightError> {
    if a != b {
        return Err(HeightError::Invalid(format!("dimension mismatch: {a} and {b}")));
    }
    Ok(())
}

/// Weil height of a nonzero algebraic number.
pub fn weil_height(a: &AlgebraicNumber) -> Result<Certified, HeightError> {
    a.weil_height()
}

/// `sum_u 2 h(x_u)`, the canonical height for the boundary bundle of
/// `(P^1)^t`.
pub fn toric_canonical_height(x: &TorusPoint) -> Result<Certified, HeightError> {
    let mut total = Certified::exact(0.0);
    for a in &x.coords {
        total = total.add(a.weil_height()?.scale(2.0));
    }
    Ok(total)
}

/// `(1/n) sum_v 2 h(prod_u x_u^{n a[v][u]})` for a rational `t' x t` matrix
/// with common denominator `n`.
pub fn graph_canonical_height(phi_tor: &RatMatrix, x: &TorusPoint) -> Result<Certified, HeightError> {
    graph_height_with_denominator(phi_tor, x, None)
}

/// As [`graph_canonical_height`] but clearing denominators with a chosen
/// multiple `n` of the least common denominator.
pub fn graph_height_with_denominator(
    phi_tor: &RatMatrix,
    x: &TorusPoint,
    denominator: Option<u64>,
) -> Result<Certified, HeightError> {
    check_dims(phi_tor.cols(), x.dim())?;
    let lcd = phi_tor.denominator_lcm();
    let n = match denominator {
        None => lcd,
        Some(d) => {
            let d = num_bigint::BigInt::from(d);
            if d.is_zero() || !num_integer::Integer::is_multiple_of(&d, &lcd) {
                return Err(HeightError::Invalid(format!(
                    "{d} is not a multiple of the denominator {lcd}"
                )));
            }
            d
        }
    };
    let nq = Rational::from(&n);
    let scaled = phi_tor.scale(&nq).to_integer_rows().expect("denominators cleared");
    let mut total = Certified::exact(0.0);
    for row in scaled {
        let exps = row
            .iter()
            .map(|k| i64::try_from(k).map_err(|_| HeightError::Invalid("exponent too large".into())))
            .collect::<Result<Vec<_>, _>>()?;
        let y = x.monomial(&exps)?;
        total = total.add(y.weil_height()?.scale(2.0));
    }
    Ok(total.scale(1.0 / nq.to_f64()))
}

/// Rejects non-symmetric and indefinite Gram matrices.
pub fn check_gram(q: &RatMatrix) -> Result<(), HeightError> {
    if !q.is_square() || q.transpose() != *q {
        return Err(HeightError::NotSymmetric);
    }
    if !is_positive_semidefinite(q) {
        return Err(HeightError::NotPositiveSemidefinite);
    }
    Ok(())
}

/// Symmetric elimination: PSD iff every pivot is non-negative and a zero
/// pivot has a zero row.
fn is_positive_semidefinite(q: &RatMatrix) -> bool {
    let n = q.rows();
    let mut m = q.to_rows();
    for k in 0..n {
        let p = m[k][k].clone();
        if p.is_negative() {
            return false;
        }
        if p.is_zero() {
            if (k + 1..n).any(|j| !m[k][j].is_zero()) {
                return false;
            }
            continue;
        }
        for i in k + 1..n {
            if m[i][k].is_zero() {
                continue;
            }
            let f = &m[i][k] / &p;
            for j in k..n {
                let delta = &f * &m[k][j];
                m[i][j] -= &delta;
            }
        }
    }
    true
}

/// `p^T Q p` for a checked Gram matrix `Q`.
pub fn abelian_model_height(gram: &RatMatrix, p: &[Rational]) -> Result<Rational, HeightError> {
    check_gram(gram)?;
    quadratic_form(gram, p)
}

fn quadratic_form(gram: &RatMatrix, p: &[Rational]) -> Result<Rational, HeightError> {
    check_dims(gram.rows(), p.len())?;
    let qp = gram.mul_vec(p).expect("checked shape");
    Ok(p.iter().zip(&qp).map(|(a, b)| a * b).sum())
}

/// Outcome of comparing graph heights of two nearby homomorphisms.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GapReport {
    pub gap: Certified,
    pub bound: Certified,
    /// `l = sum_v max_u |a_uv - a'_uv|`.
    pub l: f64,
    /// `gap <= bound` up to the certified errors.
    pub holds: bool,
}

/// `|h_phi(x) - h_phi'(x)|` against `l * h_M(x)`.
pub fn close_homomorphism_gap(
    phi: &RatMatrix,
    phi_prime: &RatMatrix,
    x: &TorusPoint,
) -> Result<GapReport, HeightError> {
    if phi.rows() != phi_prime.rows() || phi.cols() != phi_prime.cols() {
        return Err(HeightError::Invalid("the two matrices have different shapes".into()));
    }
    let diff = phi.sub(phi_prime).expect("same shape");
    let l: Rational = (0..diff.rows())
        .map(|v| {
            diff.row(v)
                .iter()
                .map(Rational::abs)
                .max()
                .unwrap_or_else(Rational::zero)
        })
        .sum();
    let h1 = graph_canonical_height(phi, x)?;
    let h2 = graph_canonical_height(phi_prime, x)?;
    let gap = Certified {
        value: (h1.value - h2.value).abs(),
        error: h1.error + h2.error,
    };
    let lf = l.to_f64();
    let bound = toric_canonical_height(x)?.scale(lf);
    let holds = gap.lower() <= bound.upper();
    Ok(GapReport {
        gap,
        bound,
        l: lf,
        holds,
    })
}

/// A point of the split model: torus coordinates and an abelian lattice
/// vector.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelPoint {
    pub torus: TorusPoint,
    pub abelian: Vec<Rational>,
}

impl ModelPoint {
    /// The group difference `self - other`.
    pub fn difference(&self, other: &ModelPoint) -> Result<ModelPoint, HeightError> {
        check_dims(self.abelian.len(), other.abelian.len())?;
        Ok(ModelPoint {
            torus: self.torus.mul(&other.torus.inverse()?)?,
            abelian: self.abelian.iter().zip(&other.abelian).map(|(a, b)| a - b).collect(),
        })
    }

    /// `h_L = h_M + h_N`, the toric and quadratic parts added.
    pub fn height(&self, gram: &RatMatrix) -> Result<Certified, HeightError> {
        let tor = toric_canonical_height(&self.torus)?;
        let ab = quadratic_form(gram, &self.abelian)?;
        Ok(tor.add(Certified {
            value: ab.to_f64(),
            error: ab.to_f64().abs() * 1e-15,
        }))
    }
}

/// Whether `x = a + b` with `a` in `sigma` and `h(b) <= eps (1 + h(a))`.
/// Borderline comparisons count as members when they hold within the
/// certified error.
pub fn height_cone_member(
    sigma: &[ModelPoint],
    eps: &Rational,
    x: &ModelPoint,
    gram: &RatMatrix,
) -> Result<bool, HeightError> {
    if !eps.is_positive() {
        return Err(HeightError::NonPositiveEpsilon);
    }
    check_gram(gram)?;
    let e = eps.to_f64();
    for a in sigma {
        let hb = x.difference(a)?.height(gram)?;
        let ha = a.height(gram)?;
        let rhs = Certified::exact(1.0).add(ha).scale(e);
        if hb.lower() <= rhs.upper() {
            return Ok(true);
        }
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(xs: &[i64]) -> TorusPoint {
        TorusPoint::from_rationals(&xs.iter().map(|&x| Rational::from_int(x)).collect::<Vec<_>>()).unwrap()
    }

    fn close(a: Certified, b: f64) -> bool {
        (a.value - b).abs() <= a.error + 1e-12
    }

    #[test]
    fn toric_examples() {
        assert!(close(toric_canonical_height(&pt(&[1, 1, 1])).unwrap(), 0.0));
        assert!(close(toric_canonical_height(&pt(&[2, 3])).unwrap(), 36f64.ln()));
        let x = pt(&[2]);
        let h = toric_canonical_height(&x).unwrap().value;
        assert!(close(toric_canonical_height(&x.pow(3).unwrap()).unwrap(), 3.0 * h));
    }

    #[test]
    fn zero_coordinate_is_boundary() {
        assert!(matches!(
            TorusPoint::from_rationals(&[Rational::one(), Rational::zero()]),
            Err(HeightError::BoundaryPoint(1))
        ));
    }

    #[test]
    fn graph_examples() {
        let x = pt(&[2, 3]);
        let id = RatMatrix::identity(2);
        let a = graph_canonical_height(&id, &x).unwrap();
        assert!(close(a, toric_canonical_height(&x).unwrap().value));
        let phi = RatMatrix::from_i64_rows(&[&[2, 3]]);
        assert!(close(graph_canonical_height(&phi, &x).unwrap(), 2.0 * 108f64.ln()));
        let half = RatMatrix::from_fn(1, 1, |_, _| Rational::new(1, 2));
        let y = pt(&[4]);
        let h2 = graph_height_with_denominator(&half, &y, Some(2)).unwrap();
        let h4 = graph_height_with_denominator(&half, &y, Some(4)).unwrap();
        assert!(close(h2, 2.0 * 2f64.ln()));
        assert!(close(h4, 2.0 * 2f64.ln()));
    }

    #[test]
    fn abelian_examples() {
        let q = RatMatrix::identity(2);
        assert_eq!(
            abelian_model_height(&q, &[Rational::zero(), Rational::zero()]).unwrap(),
            Rational::zero()
        );
        let p = [Rational::from_int(1), Rational::from_int(2)];
        assert_eq!(abelian_model_height(&q, &p).unwrap(), Rational::from_int(5));
        let bad = RatMatrix::from_i64_rows(&[&[1, 2], &[0, 1]]);
        assert!(matches!(abelian_model_height(&bad, &p), Err(HeightError::NotSymmetric)));
        let indef = RatMatrix::from_i64_rows(&[&[1, 2], &[2, 1]]);
        assert!(matches!(
            abelian_model_height(&indef, &p),
            Err(HeightError::NotPositiveSemidefinite)
        ));
        let degenerate = RatMatrix::from_i64_rows(&[&[1, 1], &[1, 1]]);
        assert!(check_gram(&degenerate).is_ok());
    }

    #[test]
    fn gap_examples() {
        let x = pt(&[2]);
        let a = RatMatrix::from_i64_rows(&[&[2]]);
        let b = RatMatrix::from_i64_rows(&[&[3]]);
        let same = close_homomorphism_gap(&a, &a, &x).unwrap();
        assert!(same.holds && same.gap.value == 0.0 && same.bound.value == 0.0);
        let r = close_homomorphism_gap(&a, &b, &x).unwrap();
        assert!(r.holds);
        assert!(close(r.gap, 2.0 * 2f64.ln()));
        assert!(close(r.bound, 2.0 * 2f64.ln()));
    }

    #[test]
    fn cone_examples() {
        let gram = RatMatrix::zeros(0, 0);
        let mp = |t: TorusPoint| ModelPoint {
            torus: t,
            abelian: vec![],
        };
        let eps = Rational::new(1, 10);
        let x = mp(pt(&[2, 1]));
        assert!(height_cone_member(&[x.clone()], &eps, &x, &gram).unwrap());
        assert!(!height_cone_member(&[mp(pt(&[1, 1]))], &eps, &x, &gram).unwrap());
        let z = AlgebraicNumber::root_of_unity(1, 6).unwrap();
        let twisted = mp(TorusPoint::new(vec![
            AlgebraicNumber::from_int(2).mul(&z).unwrap(),
            AlgebraicNumber::from_int(1),
        ])
        .unwrap());
        assert!(height_cone_member(&[x], &eps, &twisted, &gram).unwrap());
        assert!(matches!(
            height_cone_member(&[], &Rational::zero(), &twisted, &gram),
            Err(HeightError::NonPositiveEpsilon)
        ));
    }
}
