//! Algebraic numbers given by a minimal polynomial and an isolating
//! rectangle, with products, powers and Weil heights.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::roots::{certified_roots, log_abs_bigint, log_plus_abs, Certified, RootDisk};
use super::HeightError;
use crate::arith::{irreducible_factors, IntPoly, Rational};
use crate::linalg::RatMatrix;

/// Degree bound for products and powers.
pub const DEGREE_CAP: usize = 64;
/// Largest conductor tried when testing for roots of unity.
pub const MAX_CONDUCTOR: u64 = 10_000;

/// A closed axis-parallel rectangle with rational corners.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rect {
    pub re: [Rational; 2],
    pub im: [Rational; 2],
}

impl Rect {
    fn bounds_f64(&self) -> [f64; 4] {
        [
            self.re[0].to_f64(),
            self.re[1].to_f64(),
            self.im[0].to_f64(),
            self.im[1].to_f64(),
        ]
    }

    /// Disk lies in the interior, up to the rounding of the corners.
    fn contains_disk(&self, d: &RootDisk) -> bool {
        let [a, b, c, e] = self.bounds_f64();
        let r = d.radius + 1e-300;
        d.center.re - r > a && d.center.re + r < b && d.center.im - r > c && d.center.im + r < e
    }

    fn misses_disk(&self, d: &RootDisk) -> bool {
        let [a, b, c, e] = self.bounds_f64();
        let r = d.radius + 1e-300;
        d.center.re + r < a || d.center.re - r > b || d.center.im + r < c || d.center.im - r > e
    }

    fn around(d: &RootDisk) -> Rect {
        let r = d.radius * 2.0 + d.center.norm() * 1e-15 + 1e-300;
        let q = |x: f64| Rational::from(BigRational::from_float(x).expect("finite"));
        Rect {
            re: [q(d.center.re - r), q(d.center.re + r)],
            im: [q(d.center.im - r), q(d.center.im + r)],
        }
    }
}

/// A nonzero-or-zero algebraic number: its minimal polynomial (primitive,
/// positive leading coefficient) and a rectangle isolating the root among
/// the roots of that polynomial.
#[derive(Clone, Debug)]
pub struct AlgebraicNumber {
    minpoly: IntPoly,
    rect: Rect,
    disk: RootDisk,
    height: OnceLock<Certified>,
}

impl PartialEq for AlgebraicNumber {
    fn eq(&self, other: &Self) -> bool {
        self.minpoly == other.minpoly && self.disk.intersects(&other.disk)
    }
}

impl AlgebraicNumber {
    pub fn from_rational(q: &Rational) -> Self {
        let poly = IntPoly::new(vec![-q.numer(), q.denom()]);
        let x = q.to_f64();
        let disk = RootDisk {
            center: Complex64::new(x, 0.0),
            radius: x.abs() * 1e-15 + 1e-300,
        };
        AlgebraicNumber {
            minpoly: poly,
            rect: Rect {
                re: [q.clone(), q.clone()],
                im: [Rational::zero(), Rational::zero()],
            },
            disk,
            height: OnceLock::new(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(&Rational::from_int(n))
    }

    /// The root of `poly` inside `rect`; the rectangle must contain exactly
    /// one root of `poly` and keep the others (and itself) away from its
    /// boundary.
    pub fn new(poly: &IntPoly, rect: Rect) -> Result<Self, HeightError> {
        if poly.degree().unwrap_or(0) == 0 {
            return Err(HeightError::Invalid(
                "defining polynomial must have positive degree".into(),
            ));
        }
        if rect.re[0] > rect.re[1] || rect.im[0] > rect.im[1] {
            return Err(HeightError::Invalid("rectangle corners are out of order".into()));
        }
        let mut found: Option<(IntPoly, RootDisk)> = None;
        for f in irreducible_factors(poly) {
            if f.deg() == 1 {
                // exact check for rational roots
                let q = Rational::from_bigints(-f.coeff(0), f.coeff(1));
                let inside = rect.re[0] <= q && q <= rect.re[1] && rect.im[0].signum() <= 0 && rect.im[1].signum() >= 0;
                if inside {
                    if found.is_some() {
                        return Err(HeightError::NotIsolating);
                    }
                    found = Some((f.clone(), Self::from_rational(&q).disk));
                }
                continue;
            }
            for d in certified_roots(&f)? {
                if rect.contains_disk(&d) {
                    if found.is_some() {
                        return Err(HeightError::NotIsolating);
                    }
                    found = Some((f.clone(), d));
                } else if !rect.misses_disk(&d) {
                    return Err(HeightError::NotIsolating);
                }
            }
        }
        let (minpoly, disk) = found.ok_or(HeightError::NotIsolating)?;
        if minpoly.deg() == 1 {
            let q = Rational::from_bigints(-minpoly.coeff(0), minpoly.coeff(1));
            return Ok(Self::from_rational(&q));
        }
        Ok(AlgebraicNumber {
            minpoly: normalize(minpoly),
            rect,
            disk,
            height: OnceLock::new(),
        })
    }

    /// The root of the irreducible `f` in the disk `d` (one of its certified
    /// root disks).
    fn from_disk(f: IntPoly, d: RootDisk) -> Self {
        if f.deg() == 1 {
            return Self::from_rational(&Rational::from_bigints(-f.coeff(0), f.coeff(1)));
        }
        AlgebraicNumber {
            minpoly: normalize(f),
            rect: Rect::around(&d),
            disk: d,
            height: OnceLock::new(),
        }
    }

    /// A primitive `n`-th root of unity `exp(2 pi i k / n)`, `gcd(k, n) = 1`.
    pub fn root_of_unity(k: u64, n: u64) -> Result<Self, HeightError> {
        if n == 0 || num_integer::gcd(k, n) != 1 {
            return Err(HeightError::Invalid(format!("exp(2 pi i {k}/{n}) is not primitive")));
        }
        let phi = cyclotomic(n);
        let theta = 2.0 * std::f64::consts::PI * (k % n) as f64 / n as f64;
        let target = Complex64::from_polar(1.0, theta);
        let d = certified_roots(&phi)?
            .into_iter()
            .min_by(|a, b| (a.center - target).norm().total_cmp(&(b.center - target).norm()))
            .expect("positive degree");
        Ok(Self::from_disk(phi, d))
    }

    pub fn minpoly(&self) -> &IntPoly {
        &self.minpoly
    }

    pub fn rect(&self) -> &Rect {
        &self.rect
    }

    pub fn degree(&self) -> usize {
        self.minpoly.deg()
    }

    pub fn approx(&self) -> Complex64 {
        self.disk.center
    }

    pub fn disk(&self) -> RootDisk {
        self.disk
    }

    pub fn as_rational(&self) -> Option<Rational> {
        (self.degree() == 1).then(|| Rational::from_bigints(-self.minpoly.coeff(0), self.minpoly.coeff(1)))
    }

    pub fn is_zero(&self) -> bool {
        self.degree() == 1 && self.minpoly.coeff(0).is_zero()
    }

    /// Kronecker: monic, and the minimal polynomial divides `x^n - 1` for
    /// some `n <= MAX_CONDUCTOR` with `phi(n)` equal to the degree.
    pub fn is_root_of_unity(&self) -> bool {
        is_cyclotomic(&self.minpoly)
    }

    /// Absolute logarithmic Weil height, `log M(minpoly) / degree`.
    pub fn weil_height(&self) -> Result<Certified, HeightError> {
        if self.is_zero() {
            return Err(HeightError::ZeroInput);
        }
        if let Some(h) = self.height.get() {
            return Ok(*h);
        }
        let h = minpoly_height(&self.minpoly)?;
        Ok(*self.height.get_or_init(|| h))
    }

    pub fn inverse(&self) -> Result<Self, HeightError> {
        if self.is_zero() {
            return Err(HeightError::ZeroInput);
        }
        if let Some(q) = self.as_rational() {
            return Ok(Self::from_rational(&q.recip().expect("nonzero")));
        }
        let f = normalize(self.minpoly.reversed());
        let target = self.disk.center.inv();
        Self::select_root(vec![f], target, inverse_radius(&self.disk))
    }

    pub fn mul(&self, other: &Self) -> Result<Self, HeightError> {
        match (self.as_rational(), other.as_rational()) {
            (Some(a), Some(b)) => return Ok(Self::from_rational(&(a * b))),
            (Some(q), None) => return other.scale_by(&q),
            (None, Some(q)) => return self.scale_by(&q),
            _ => {}
        }
        if self.degree() * other.degree() > DEGREE_CAP {
            return Err(HeightError::DegreeCap(self.degree() * other.degree()));
        }
        let a = companion(&self.minpoly);
        let b = companion(&other.minpoly);
        let k = kronecker(&a, &b);
        let chi = integer_charpoly(&k)?;
        let (za, zb) = (self.disk.center, other.disk.center);
        let r = za.norm() * other.disk.radius + zb.norm() * self.disk.radius + self.disk.radius * other.disk.radius;
        Self::select_root(irreducible_factors(&chi), za * zb, r)
    }

    /// `self^n` for any integer `n` (`n < 0` needs `self != 0`).
    pub fn pow(&self, n: i64) -> Result<Self, HeightError> {
        if n == 0 {
            return Ok(Self::from_int(1));
        }
        if n < 0 {
            return self.inverse()?.pow(-n);
        }
        if let Some(q) = self.as_rational() {
            return Ok(Self::from_rational(&q.pow(n as i32)));
        }
        if n == 1 {
            return Ok(self.clone());
        }
        let c = companion(&self.minpoly);
        let mut acc = RatMatrix::identity(c.rows());
        let mut base = c;
        let mut e = n as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).expect("square");
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).expect("square");
            }
        }
        let chi = integer_charpoly(&acc)?;
        let z = self.disk.center;
        let nz = z.norm();
        // |z'^n - z^n| <= n r (|z| + r)^{n-1}
        let r = n as f64 * self.disk.radius * (nz + self.disk.radius).powi(n as i32 - 1);
        Self::select_root(irreducible_factors(&chi), z.powi(n as i32), r)
    }

    fn scale_by(&self, q: &Rational) -> Result<Self, HeightError> {
        if q.is_zero() {
            return Ok(Self::from_int(0));
        }
        // roots of f(x / q): q alpha
        let f = normalize(self.minpoly.scale_roots(&q.denom(), &q.numer()).primitive_part());
        let qf = q.to_f64();
        let target = self.disk.center * qf;
        let r = self.disk.radius * qf.abs() + target.norm() * 1e-15;
        Self::select_root(vec![f], target, r)
    }

    /// The unique root among the factors' roots that is compatible with an
    /// enclosure `D(target, radius)`.
    fn select_root(factors: Vec<IntPoly>, target: Complex64, radius: f64) -> Result<Self, HeightError> {
        let probe = RootDisk {
            center: target,
            radius: radius + target.norm() * 1e-14 + 1e-300,
        };
        let mut found: Option<(IntPoly, RootDisk)> = None;
        for f in factors {
            if f.deg() == 0 {
                continue;
            }
            for d in certified_roots(&f)? {
                if d.intersects(&probe) {
                    if found.is_some() {
                        return Err(HeightError::Numeric(
                            "two conjugates are too close to tell apart in double precision".into(),
                        ));
                    }
                    found = Some((f.clone(), d));
                }
            }
        }
        let (f, d) = found.ok_or_else(|| HeightError::Numeric("lost track of the root".into()))?;
        Ok(Self::from_disk(f, d))
    }
}

fn inverse_radius(d: &RootDisk) -> f64 {
    let lo = (d.center.norm() - d.radius).max(f64::MIN_POSITIVE);
    d.radius / (lo * d.center.norm())
}

/// Primitive with positive leading coefficient.
fn normalize(f: IntPoly) -> IntPoly {
    let f = f.primitive_part();
    if f.leading().is_negative() {
        f.neg()
    } else {
        f
    }
}

/// Companion matrix of the monic rescaling of `f`.
fn companion(f: &IntPoly) -> RatMatrix {
    let n = f.deg();
    let lc = Rational::from(&f.leading());
    let mut m = RatMatrix::zeros(n, n);
    for i in 1..n {
        m.set(i, i - 1, Rational::one());
    }
    for i in 0..n {
        m.set(i, n - 1, -(Rational::from(&f.coeff(i)) / &lc));
    }
    m
}

fn kronecker(a: &RatMatrix, b: &RatMatrix) -> RatMatrix {
    let (p, q) = (a.rows(), b.rows());
    RatMatrix::from_fn(p * q, p * q, |i, j| a.get(i / q, j / q) * b.get(i % q, j % q))
}

/// Weil height of any root of an irreducible integer polynomial:
/// `log M(f) / deg f`, exact zero for cyclotomic `f`.
pub fn minpoly_height(f: &IntPoly) -> Result<Certified, HeightError> {
    if f.deg() == 1 {
        let m = std::cmp::max(f.coeff(0).abs(), f.coeff(1).abs());
        let v = log_abs_bigint(&m);
        return Ok(Certified {
            value: v,
            error: v * 1e-15,
        });
    }
    if is_cyclotomic(f) {
        return Ok(Certified::exact(0.0));
    }
    let mut total = Certified::exact(log_abs_bigint(&f.leading()));
    for d in certified_roots(f)? {
        total = total.add(log_plus_abs(&d));
    }
    Ok(total.scale(1.0 / f.deg() as f64))
}

/// Kronecker: monic, and dividing `x^n - 1` for some `n <= MAX_CONDUCTOR`
/// with `phi(n)` equal to the degree.
pub fn is_cyclotomic(f: &IntPoly) -> bool {
    if f.deg() == 0 || !f.leading().is_one() {
        return false;
    }
    let d = f.deg() as u64;
    (1..=MAX_CONDUCTOR).any(|n| euler_phi(n) == d && divides_x_pow_minus_one(f, n))
}

/// Characteristic polynomial with denominators cleared.
pub(crate) fn integer_charpoly(m: &RatMatrix) -> Result<IntPoly, HeightError> {
    let c = m.charpoly().map_err(|e| HeightError::Numeric(e.to_string()))?;
    let den = c
        .iter()
        .fold(BigInt::one(), |acc, x| num_integer::Integer::lcm(&acc, &x.denom()));
    let coeffs = c
        .iter()
        .map(|x| (x * &Rational::from(&den)).to_integer().expect("cleared"))
        .collect();
    Ok(IntPoly::new(coeffs).primitive_part())
}

pub fn euler_phi(mut n: u64) -> u64 {
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// Whether monic `f` divides `x^n - 1`, via `x^n mod f`.
fn divides_x_pow_minus_one(f: &IntPoly, n: u64) -> bool {
    let d = f.deg();
    // reduce modulo monic f with integer arithmetic
    let reduce = |mut v: Vec<BigInt>| -> Vec<BigInt> {
        while v.len() > d {
            let top = v.pop().expect("nonempty");
            if !top.is_zero() {
                let off = v.len() - d;
                for i in 0..d {
                    v[off + i] -= &top * f.coeff(i);
                }
            }
        }
        v
    };
    let mul = |a: &[BigInt], b: &[BigInt]| -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); a.len() + b.len()];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        reduce(out)
    };
    let mut acc = reduce(vec![BigInt::one()]);
    let mut base = reduce(vec![BigInt::zero(), BigInt::one()]);
    let mut e = n;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul(&acc, &base);
        }
        e >>= 1;
        if e > 0 {
            base = mul(&base, &base);
        }
    }
    acc.resize(d.max(1), BigInt::zero());
    acc[0] -= 1;
    acc.iter().all(Zero::is_zero)
}

/// The `n`-th cyclotomic polynomial.
pub fn cyclotomic(n: u64) -> IntPoly {
    let mut num = IntPoly::one();
    let mut den = IntPoly::one();
    for d in 1..=n {
        if n % d != 0 {
            continue;
        }
        let mu = mobius(n / d);
        let term = IntPoly::monomial(BigInt::one(), d as usize).sub(&IntPoly::one());
        match mu {
            1 => num = num.mul(&term),
            -1 => den = den.mul(&term),
            _ => {}
        }
    }
    num.div_exact(&den).expect("exact division")
}

fn mobius(mut n: u64) -> i32 {
    let mut sign = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

/// JSON form: `{"poly": [c0, c1, ...], "re": ["lo", "hi"], "im": ["lo", "hi"]}`
/// or a bare rational.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum AlgebraicJson {
    Rational(Rational),
    Root {
        poly: IntPoly,
        re: [Rational; 2],
        im: [Rational; 2],
    },
}

impl AlgebraicJson {
    pub fn into_number(self) -> Result<AlgebraicNumber, HeightError> {
        match self {
            AlgebraicJson::Rational(q) => Ok(AlgebraicNumber::from_rational(&q)),
            AlgebraicJson::Root { poly, re, im } => AlgebraicNumber::new(&poly, Rect { re, im }),
        }
    }

    pub fn from_number(a: &AlgebraicNumber) -> serde_json::Value {
        serde_json::json!({
            "poly": a.minpoly,
            "re": a.rect.re,
            "im": a.rect.im,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn golden() -> AlgebraicNumber {
        let rect = Rect {
            re: [Rational::from_int(1), Rational::from_int(2)],
            im: [Rational::new(-1, 2), Rational::new(1, 2)],
        };
        AlgebraicNumber::new(&IntPoly::from_i64s(&[-1, -1, 1]), rect).unwrap()
    }

    #[test]
    fn rational_heights() {
        let h = AlgebraicNumber::from_int(2).weil_height().unwrap();
        assert!((h.value - 2f64.ln()).abs() < 1e-15);
        let h = AlgebraicNumber::from_rational(&Rational::new(-3, 7))
            .weil_height()
            .unwrap();
        assert!((h.value - 7f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn golden_ratio_height() {
        let h = golden().weil_height().unwrap();
        assert!((h.value - 0.5 * ((1.0 + 5f64.sqrt()) / 2.0).ln()).abs() < 1e-13);
        assert!((h.value - 0.2406).abs() < 1e-4);
    }

    #[test]
    fn roots_of_unity_have_height_zero() {
        for (k, n) in [(1, 6), (5, 12), (3, 7), (1, 1), (1, 2)] {
            let z = AlgebraicNumber::root_of_unity(k, n).unwrap();
            assert!(z.is_root_of_unity());
            assert_eq!(z.weil_height().unwrap().value, 0.0);
        }
        assert!(!golden().is_root_of_unity());
    }

    #[test]
    fn inverse_and_power_laws() {
        let g = golden();
        let h = g.weil_height().unwrap().value;
        let hi = g.inverse().unwrap().weil_height().unwrap().value;
        assert!((h - hi).abs() < 1e-12);
        for n in [-3i64, 2, 3, 5] {
            let hn = g.pow(n).unwrap().weil_height().unwrap().value;
            assert!((hn - n.unsigned_abs() as f64 * h).abs() < 1e-11, "n = {n}");
        }
    }

    #[test]
    fn golden_squared_is_golden_plus_one() {
        let g2 = golden().pow(2).unwrap();
        assert_eq!(g2.minpoly(), &IntPoly::from_i64s(&[1, -3, 1]));
        assert!((g2.approx().re - 2.618033988749895).abs() < 1e-12);
    }

    #[test]
    fn product_with_conjugate() {
        // phi * (1 - phi) = -1
        let g = golden();
        let conj = AlgebraicNumber::new(
            &IntPoly::from_i64s(&[-1, -1, 1]),
            Rect {
                re: [Rational::from_int(-1), Rational::from_int(0)],
                im: [Rational::new(-1, 2), Rational::new(1, 2)],
            },
        )
        .unwrap();
        let p = g.mul(&conj).unwrap();
        assert_eq!(p.as_rational(), Some(Rational::from_int(-1)));
    }

    #[test]
    fn twisted_by_root_of_unity() {
        let z = AlgebraicNumber::root_of_unity(1, 6).unwrap();
        let x = AlgebraicNumber::from_int(2).mul(&z).unwrap();
        assert_eq!(x.degree(), 2);
        let back = x.mul(&AlgebraicNumber::from_rational(&Rational::new(1, 2))).unwrap();
        assert!(back.is_root_of_unity());
        let sq = z.mul(&z).unwrap();
        assert_eq!(sq, AlgebraicNumber::root_of_unity(1, 3).unwrap());
    }

    #[test]
    fn ambiguous_rectangle_rejected() {
        let rect = Rect {
            re: [Rational::from_int(-2), Rational::from_int(2)],
            im: [Rational::from_int(-1), Rational::from_int(1)],
        };
        assert!(matches!(
            AlgebraicNumber::new(&IntPoly::from_i64s(&[-1, -1, 1]), rect),
            Err(HeightError::NotIsolating)
        ));
    }

    #[test]
    fn zero_has_no_height() {
        assert!(matches!(
            AlgebraicNumber::from_int(0).weil_height(),
            Err(HeightError::ZeroInput)
        ));
    }

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(cyclotomic(1), IntPoly::from_i64s(&[-1, 1]));
        assert_eq!(cyclotomic(6), IntPoly::from_i64s(&[1, -1, 1]));
        assert_eq!(cyclotomic(12), IntPoly::from_i64s(&[1, 0, -1, 0, 1]));
    }
}
