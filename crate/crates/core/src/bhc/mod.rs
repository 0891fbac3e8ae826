//! Rational curves in `G_m^t` met with the subgroups `{x^a = 1}`.

use std::collections::BTreeMap;
use std::io::Write;

use num_bigint::BigInt;
use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::poly::bigint_to_json;
use crate::arith::{factor, irreducible_factors, IntPoly, Rational};
use crate::heights::{integer_charpoly, is_cyclotomic, minpoly_height, HeightError, DEGREE_CAP};
use crate::linalg::{integer_kernel, RatMatrix};

/// Largest number of exponent vectors a scan may enumerate.
pub const MAX_EXPONENT_VECTORS: usize = 2_000_000;

#[derive(Debug, Error)]
pub enum BhcError {
    #[error("coordinate {0} is identically zero")]
    ZeroCoordinate(usize),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error(transparent)]
    Height(#[from] HeightError),
    #[error("internal check failed: {0}")]
    Internal(String),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

/// `unit * prod p^e` with each `p` irreducible, primitive, positive leading
/// coefficient, and nonzero exponents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactoredRational {
    unit: Rational,
    factors: BTreeMap<IntPoly, i64>,
}

impl FactoredRational {
    pub fn new(num: &IntPoly, den: &IntPoly) -> Option<Self> {
        if num.is_zero() || den.is_zero() {
            return None;
        }
        let fnum = factor(num);
        let fden = factor(den);
        let mut factors = BTreeMap::new();
        for (p, e) in fnum.factors {
            *factors.entry(p).or_insert(0) += i64::from(e);
        }
        for (p, e) in fden.factors {
            *factors.entry(p).or_insert(0) -= i64::from(e);
        }
        factors.retain(|_, e| *e != 0);
        Some(FactoredRational {
            unit: Rational::from_bigints(fnum.content, fden.content),
            factors,
        })
    }

    pub fn unit(&self) -> &Rational {
        &self.unit
    }

    pub fn factors(&self) -> &BTreeMap<IntPoly, i64> {
        &self.factors
    }

    /// Order of vanishing at infinity, `-deg`.
    pub fn valuation_at_infinity(&self) -> i64 {
        -self.factors.iter().map(|(p, e)| p.deg() as i64 * e).sum::<i64>()
    }

    pub fn valuation(&self, p: &IntPoly) -> i64 {
        self.factors.get(p).copied().unwrap_or(0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalCurve {
    coords: Vec<FactoredRational>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct CoordinateJson {
    pub num: IntPoly,
    #[serde(default = "IntPoly::one")]
    pub den: IntPoly,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveJson {
    pub coords: Vec<CoordinateJson>,
}

impl RationalCurve {
    /// Coordinates given as `(numerator, denominator)` in the parameter `T`.
    pub fn new(coords: &[(IntPoly, IntPoly)]) -> Result<Self, BhcError> {
        let coords = coords
            .iter()
            .enumerate()
            .map(|(i, (n, d))| FactoredRational::new(n, d).ok_or(BhcError::ZeroCoordinate(i)))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(RationalCurve { coords })
    }

    pub fn polynomial(coords: &[IntPoly]) -> Result<Self, BhcError> {
        let pairs: Vec<_> = coords.iter().map(|p| (p.clone(), IntPoly::one())).collect();
        RationalCurve::new(&pairs)
    }

    pub fn from_json(j: CurveJson) -> Result<Self, BhcError> {
        let pairs: Vec<_> = j.coords.into_iter().map(|c| (c.num, c.den)).collect();
        RationalCurve::new(&pairs)
    }

    pub fn coords(&self) -> &[FactoredRational] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// All irreducible polynomials where some coordinate has a zero or pole.
    pub fn places(&self) -> Vec<IntPoly> {
        let mut out: Vec<IntPoly> = self.coords.iter().flat_map(|c| c.factors.keys().cloned()).collect();
        out.sort();
        out.dedup();
        out
    }

    /// Rows: finite places, then infinity. Columns: coordinates.
    pub fn valuation_matrix(&self) -> Vec<Vec<BigInt>> {
        let mut rows: Vec<Vec<BigInt>> = self
            .places()
            .iter()
            .map(|p| self.coords.iter().map(|c| BigInt::from(c.valuation(p))).collect())
            .collect();
        rows.push(
            self.coords
                .iter()
                .map(|c| BigInt::from(c.valuation_at_infinity()))
                .collect(),
        );
        rows
    }

    /// `prod x_u^{a_u}` in factored form.
    pub fn monomial(&self, a: &[i64]) -> FactoredRational {
        let mut unit = Rational::one();
        let mut factors = BTreeMap::new();
        for (c, &e) in self.coords.iter().zip(a) {
            if e == 0 {
                continue;
            }
            unit = unit * c.unit.pow(e as i32);
            for (p, &k) in &c.factors {
                *factors.entry(p.clone()).or_insert(0) += k * e;
            }
        }
        factors.retain(|_, e| *e != 0);
        FactoredRational { unit, factors }
    }
}

/// Exponent vectors `a` with `prod x_u^{a_u}` constant.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelationLattice {
    #[serde(serialize_with = "serialize_rows")]
    pub basis: Vec<Vec<BigInt>>,
}

fn serialize_rows<S: serde::Serializer>(rows: &[Vec<BigInt>], s: S) -> Result<S::Ok, S::Error> {
    let v: Vec<Vec<serde_json::Value>> = rows.iter().map(|r| r.iter().map(bigint_to_json).collect()).collect();
    v.serialize(s)
}

impl RelationLattice {
    pub fn is_trivial(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }
}

pub fn relation_lattice(curve: &RationalCurve) -> Result<RelationLattice, BhcError> {
    let m = curve.valuation_matrix();
    let basis = integer_kernel(&m, curve.dim());
    for v in &basis {
        let a: Vec<i64> = v
            .iter()
            .map(|x| i64::try_from(x).map_err(|_| BhcError::Internal("relation entry too large".into())))
            .collect::<Result<_, _>>()?;
        if !curve.monomial(&a).factors.is_empty() {
            return Err(BhcError::Internal(format!("relation {a:?} is not constant")));
        }
    }
    Ok(RelationLattice { basis })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntersectionRecord {
    pub a: Vec<i64>,
    /// Irreducible factor whose roots are the parameter values.
    pub factor: IntPoly,
    pub degree: usize,
    /// `sum_u 2 h(x_u)` at any root (conjugates share the height).
    pub height: f64,
    pub height_error: f64,
    pub root_of_unity: bool,
    /// Minimal polynomial of each coordinate of the point.
    pub coordinate_minpolys: Vec<IntPoly>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SubgroupOutcome {
    Points(Vec<IntersectionRecord>),
    /// The whole curve lies in `{x^a = 1}`.
    WholeCurve,
    /// The defining polynomial exceeds the degree cap.
    Skipped {
        degree: usize,
    },
}

/// Numerator `r N - s D` of `prod x_u^{a_u} - 1`, where the monomial is
/// `(r/s) N / D`.
pub fn defining_polynomial(curve: &RationalCurve, a: &[i64]) -> IntPoly {
    let m = curve.monomial(a);
    let mut num = IntPoly::constant(m.unit.numer());
    let mut den = IntPoly::constant(m.unit.denom());
    for (p, &e) in &m.factors {
        if e > 0 {
            num = num.mul(&p.pow(e as u32));
        } else {
            den = den.mul(&p.pow((-e) as u32));
        }
    }
    num.sub(&den)
}

/// Matrix of multiplication by `p(alpha)` on `Q(alpha)` in the power basis,
/// `alpha` a root of the irreducible `q`.
fn multiplication_matrix(p: &IntPoly, q: &IntPoly) -> RatMatrix {
    let d = q.deg();
    let lead = Rational::from(q.leading());
    let companion = RatMatrix::from_fn(d, d, |i, j| {
        if j == d - 1 {
            -Rational::from(q.coeff(i)) / &lead
        } else if i == j + 1 {
            Rational::one()
        } else {
            Rational::zero()
        }
    });
    let mut acc = RatMatrix::zeros(d, d);
    for c in p.coeffs().iter().rev() {
        acc = acc.mul(&companion).expect("square");
        for i in 0..d {
            let v = acc.get(i, i) + &Rational::from(c);
            acc.set(i, i, v);
        }
    }
    acc
}

fn matrix_pow(m: &RatMatrix, mut e: u64) -> RatMatrix {
    let mut acc = RatMatrix::identity(m.rows());
    let mut base = m.clone();
    while e > 0 {
        if e & 1 == 1 {
            acc = acc.mul(&base).expect("square");
        }
        e >>= 1;
        if e > 0 {
            base = base.mul(&base).expect("square");
        }
    }
    acc
}

/// Minimal polynomial of `x(alpha)`, `alpha` a root of `q`.
fn coordinate_minpoly(x: &FactoredRational, q: &IntPoly) -> Result<IntPoly, BhcError> {
    let d = q.deg();
    let mut m = RatMatrix::identity(d).scale(&x.unit);
    for (p, &e) in &x.factors {
        let base = multiplication_matrix(p, q);
        let base = if e < 0 {
            base.inverse()
                .map_err(|e| BhcError::Internal(format!("pole at a point: {e}")))?
        } else {
            base
        };
        m = m.mul(&matrix_pow(&base, e.unsigned_abs())).expect("square");
    }
    let cp = integer_charpoly(&m)?;
    let mut f = irreducible_factors(&cp);
    if f.len() != 1 {
        return Err(BhcError::Internal(
            "characteristic polynomial is not a prime power".into(),
        ));
    }
    Ok(f.remove(0))
}

/// Points of the curve on `{x^a = 1}`, grouped by Galois orbit.
pub fn intersect_with_subgroup(curve: &RationalCurve, a: &[i64]) -> Result<SubgroupOutcome, BhcError> {
    if a.len() != curve.dim() {
        return Err(BhcError::Invalid(format!(
            "exponent vector has {} entries, curve has {}",
            a.len(),
            curve.dim()
        )));
    }
    let f = defining_polynomial(curve, a);
    if f.is_zero() {
        return Ok(SubgroupOutcome::WholeCurve);
    }
    if f.deg() > DEGREE_CAP {
        return Ok(SubgroupOutcome::Skipped { degree: f.deg() });
    }
    let places = curve.places();
    let mut records = Vec::new();
    for q in irreducible_factors(&f) {
        if q.deg() == 0 || places.contains(&q) {
            continue;
        }
        if f.div_exact(&q).is_none() {
            return Err(BhcError::Internal(format!("{q} does not divide {f}")));
        }
        let minpolys = curve
            .coords
            .iter()
            .map(|x| coordinate_minpoly(x, &q))
            .collect::<Result<Vec<_>, _>>()?;
        let mut value = 0.0;
        let mut error = 0.0;
        for m in &minpolys {
            let h = minpoly_height(m)?;
            value += 2.0 * h.value;
            error += 2.0 * h.error;
        }
        records.push(IntersectionRecord {
            a: a.to_vec(),
            degree: q.deg(),
            root_of_unity: minpolys.iter().all(is_cyclotomic),
            factor: q,
            height: value,
            height_error: error,
            coordinate_minpolys: minpolys,
        });
    }
    Ok(SubgroupOutcome::Points(records))
}

/// Primitive vectors in `[-bound, bound]^t`, one per sign class (first
/// nonzero entry positive), in lexicographic order.
pub fn primitive_vectors(t: usize, bound: u32) -> Result<Vec<Vec<i64>>, BhcError> {
    let side = 2 * bound as usize + 1;
    let total = (0..t).try_fold(1usize, |acc, _| acc.checked_mul(side));
    if total.is_none_or(|n| n > MAX_EXPONENT_VECTORS) {
        return Err(BhcError::Invalid(format!("{side}^{t} exponent vectors exceed the cap")));
    }
    let b = i64::from(bound);
    let mut out = Vec::new();
    let mut cur = vec![-b; t];
    loop {
        let first = cur.iter().find(|&&x| x != 0);
        if let Some(&f) = first {
            let g = cur.iter().fold(0i64, |g, &x| g.gcd(&x));
            if f > 0 && g == 1 {
                out.push(cur.clone());
            }
        }
        let mut i = t;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            if cur[i] < b {
                cur[i] += 1;
                break;
            }
            cur[i] = -b;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanReport {
    pub anomalous: bool,
    pub relations: RelationLattice,
    pub bound: u32,
    pub max_height: Option<f64>,
    pub records: Vec<IntersectionRecord>,
    pub whole_curve: Vec<Vec<i64>>,
    pub skipped: Vec<(Vec<i64>, usize)>,
}

/// All intersections with `{x^a = 1}` for primitive `a` of max-norm at most
/// `bound`. Runs even when the curve is anomalous.
pub fn bhc_scan(curve: &RationalCurve, bound: u32) -> Result<ScanReport, BhcError> {
    if curve.dim() < 2 {
        return Err(BhcError::Invalid("the scan needs at least two coordinates".into()));
    }
    let relations = relation_lattice(curve)?;
    let vectors = primitive_vectors(curve.dim(), bound)?;
    let outcomes: Vec<Result<SubgroupOutcome, BhcError>> =
        vectors.par_iter().map(|a| intersect_with_subgroup(curve, a)).collect();
    let mut records = Vec::new();
    let mut whole_curve = Vec::new();
    let mut skipped = Vec::new();
    for (a, outcome) in vectors.into_iter().zip(outcomes) {
        match outcome? {
            SubgroupOutcome::Points(r) => records.extend(r),
            SubgroupOutcome::WholeCurve => whole_curve.push(a),
            SubgroupOutcome::Skipped { degree } => skipped.push((a, degree)),
        }
    }
    let max_height = records
        .iter()
        .map(|r| r.height)
        .fold(None, |m: Option<f64>, h| Some(m.map_or(h, |m| m.max(h))));
    Ok(ScanReport {
        anomalous: !relations.is_trivial(),
        relations,
        bound,
        max_height,
        records,
        whole_curve,
        skipped,
    })
}

/// CSV with columns `a_vector, factor_poly, degree, height, root_of_unity_flag`.
pub fn write_csv<W: Write>(records: &[IntersectionRecord], out: W) -> Result<(), BhcError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["a_vector", "factor_poly", "degree", "height", "root_of_unity_flag"])?;
    for r in records {
        let a = format!("[{}]", r.a.iter().map(i64::to_string).collect::<Vec<_>>().join(","));
        w.write_record([
            a,
            r.factor.to_string(),
            r.degree.to_string(),
            format!("{:.12}", r.height),
            r.root_of_unity.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
