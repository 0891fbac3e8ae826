//! Dense univariate polynomials over the integers.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::rational::Rational;

/// Coefficients are stored lowest degree first with no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64s(cs: &[i64]) -> Self {
        IntPoly::new(cs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: BigInt) -> Self {
        IntPoly::new(vec![c])
    }

    pub fn one() -> Self {
        IntPoly::constant(BigInt::one())
    }

    /// The monomial `x`.
    pub fn x() -> Self {
        IntPoly::from_i64s(&[0, 1])
    }

    pub fn monomial(c: BigInt, deg: usize) -> Self {
        let mut v = vec![BigInt::zero(); deg + 1];
        v[deg] = c;
        IntPoly::new(v)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with the zero polynomial reported as `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial treated as degree 0.
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn leading(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Primitive part with positive leading coefficient.
    pub fn primitive_part(&self) -> IntPoly {
        if self.is_zero() {
            return IntPoly::zero();
        }
        let mut c = self.content();
        if self.leading().is_negative() {
            c = -c;
        }
        IntPoly::new(self.coeffs.iter().map(|a| a / &c).collect())
    }

    pub fn neg(&self) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn add(&self, other: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() || other.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }

    pub fn scale(&self, c: &BigInt) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn pow(&self, mut e: u32) -> IntPoly {
        let mut acc = IntPoly::one();
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    pub fn derivative(&self) -> IntPoly {
        IntPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_rational(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + &Rational::from(c);
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c.to_f64().unwrap_or(f64::NAN);
        }
        acc
    }

    /// `x^deg * p(1/x)`.
    pub fn reversed(&self) -> IntPoly {
        let mut v = self.coeffs.clone();
        v.reverse();
        IntPoly::new(v)
    }

    /// `p(-x)`.
    pub fn negate_variable(&self) -> IntPoly {
        IntPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() })
                .collect(),
        )
    }

    /// `p(x^k)`.
    pub fn inflate(&self, k: usize) -> IntPoly {
        if self.is_zero() {
            return IntPoly::zero();
        }
        let mut v = vec![BigInt::zero(); (self.coeffs.len() - 1) * k + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            v[i * k] = c.clone();
        }
        IntPoly::new(v)
    }

    /// `den^deg * p(num/den * x)`, whose roots are the roots of `p` times `den/num`.
    pub fn scale_roots(&self, num: &BigInt, den: &BigInt) -> IntPoly {
        let d = self.deg();
        IntPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| c * num.pow(i as u32) * den.pow((d - i) as u32))
                .collect(),
        )
    }

    /// Composition `p(q(x))`.
    pub fn compose(&self, q: &IntPoly) -> IntPoly {
        let mut acc = IntPoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(q).add(&IntPoly::constant(c.clone()));
        }
        acc
    }

    /// Exact division over the integers, `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &IntPoly) -> Option<IntPoly> {
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Some(IntPoly::zero());
        }
        let dd = d.deg();
        let sd = self.deg();
        if sd < dd {
            return None;
        }
        let lc = d.leading();
        let mut rem = self.coeffs.clone();
        let mut q = vec![BigInt::zero(); sd - dd + 1];
        for k in (0..=sd - dd).rev() {
            let top = &rem[k + dd];
            if top.is_zero() {
                continue;
            }
            let (quo, r) = top.div_rem(&lc);
            if !r.is_zero() {
                return None;
            }
            for (j, c) in d.coeffs.iter().enumerate() {
                rem[k + j] -= &quo * c;
            }
            q[k] = quo;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(IntPoly::new(q))
    }

    /// Pseudo-remainder `lc(d)^(deg self - deg d + 1) * self mod d`.
    pub fn pseudo_rem(&self, d: &IntPoly) -> IntPoly {
        assert!(!d.is_zero());
        let mut r = self.clone();
        let dd = d.deg();
        let lc = d.leading();
        while !r.is_zero() && r.deg() >= dd {
            let shift = r.deg() - dd;
            let t = IntPoly::monomial(r.leading(), shift).mul(d);
            r = r.scale(&lc).sub(&t);
        }
        r
    }

    /// Primitive gcd with positive leading coefficient.
    pub fn gcd(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() {
            return other.primitive_part();
        }
        if other.is_zero() {
            return self.primitive_part();
        }
        let mut a = self.primitive_part();
        let mut b = other.primitive_part();
        if a.deg() < b.deg() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b);
            a = b;
            b = r.primitive_part();
        }
        a.primitive_part()
    }

    /// Square-free decomposition of a primitive polynomial:
    /// returns `(a_i, i)` with `self = sign * prod a_i^i`, each `a_i` square-free,
    /// primitive and pairwise coprime. Constant factors are dropped.
    pub fn squarefree_decomposition(&self) -> Vec<(IntPoly, u32)> {
        let f = self.primitive_part();
        if f.deg() == 0 {
            return Vec::new();
        }
        // Yun's algorithm. Every divisor below is primitive, so by Gauss's
        // lemma the quotients stay integral.
        let mut out = Vec::new();
        let fp = f.derivative();
        let a = f.gcd(&fp);
        let mut b = f.div_exact(&a).expect("gcd divides");
        let c = fp.div_exact(&a).expect("gcd divides derivative");
        let mut d = c.sub(&b.derivative());
        let mut i = 1u32;
        while b.deg() > 0 {
            let g = b.gcd(&d);
            if g.deg() > 0 {
                out.push((g.clone(), i));
            }
            b = b.div_exact(&g).expect("gcd divides");
            let c = d.div_exact(&g).expect("gcd divides");
            d = c.sub(&b.derivative());
            i += 1;
        }
        out
    }

    /// Square-free part (primitive, positive leading coefficient).
    pub fn squarefree_part(&self) -> IntPoly {
        let f = self.primitive_part();
        if f.deg() == 0 {
            return f;
        }
        let g = f.gcd(&f.derivative());
        f.div_exact(&g).expect("gcd divides").primitive_part()
    }

    pub fn max_abs_coeff(&self) -> BigInt {
        self.coeffs.iter().map(|c| c.abs()).max().unwrap_or_else(BigInt::zero)
    }

    /// Euclidean norm squared of the coefficient vector.
    pub fn norm2_sq(&self) -> BigInt {
        self.coeffs.iter().map(|c| c * c).sum()
    }

    /// Polynomial pseudo-division over the rationals: quotient and remainder
    /// with `self = q * d + r`.
    pub fn divrem_rational(&self, d: &IntPoly) -> (Vec<Rational>, Vec<Rational>) {
        let dq: Vec<Rational> = d.coeffs.iter().map(Rational::from).collect();
        let mut r: Vec<Rational> = self.coeffs.iter().map(Rational::from).collect();
        let dd = d.deg();
        let lc = dq[dd].clone();
        if r.len() <= dd {
            return (Vec::new(), r);
        }
        let mut q = vec![Rational::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = &r[k + dd] / &lc;
            for (j, b) in dq.iter().enumerate() {
                r[k + j] -= &(&c * b);
            }
            q[k] = c;
        }
        r.truncate(dd);
        (q, r)
    }
}

/// Degree first, then coefficients from the constant term up.
impl Ord for IntPoly {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.cmp(&other.coeffs))
    }
}

impl PartialOrd for IntPoly {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let show_coeff = !a.is_one() || i == 0;
            if show_coeff {
                write!(f, "{a}")?;
                if i > 0 {
                    write!(f, "*")?;
                }
            }
            match i {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPoly({self})")
    }
}

/// Integers in JSON: numbers when they fit in `i64`, decimal strings otherwise.
pub fn bigint_to_json(n: &BigInt) -> serde_json::Value {
    match n.to_i64() {
        Some(v) => serde_json::Value::from(v),
        None => serde_json::Value::from(n.to_string()),
    }
}

/// An integer written in JSON either as a number or as a decimal string.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum IntLiteral {
    Int(i64),
    Str(String),
}

impl IntLiteral {
    pub fn into_bigint<E: serde::de::Error>(self) -> Result<BigInt, E> {
        match self {
            IntLiteral::Int(v) => Ok(BigInt::from(v)),
            IntLiteral::Str(s) => s
                .trim()
                .parse::<BigInt>()
                .map_err(|_| E::custom(format!("invalid integer `{s}`"))),
        }
    }
}

impl Serialize for IntPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let v: Vec<serde_json::Value> = self.coeffs.iter().map(bigint_to_json).collect();
        v.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for IntPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let lits = Vec::<IntLiteral>::deserialize(deserializer)?;
        let coeffs = lits
            .into_iter()
            .map(IntLiteral::into_bigint::<D::Error>)
            .collect::<Result<Vec<_>, _>>()?;
        Ok(IntPoly::new(coeffs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(cs: &[i64]) -> IntPoly {
        IntPoly::from_i64s(cs)
    }

    #[test]
    fn arithmetic_and_display() {
        let a = p(&[-1, -1, 1]);
        assert_eq!(a.to_string(), "x^2 - x - 1");
        assert_eq!(a.mul(&p(&[1, 1])), p(&[-1, -2, 0, 1]));
        assert_eq!(p(&[-1, -2, 0, 1]).div_exact(&p(&[1, 1])), Some(a.clone()));
        assert_eq!(p(&[1, 0, 1]).div_exact(&p(&[1, 1])), None);
        assert_eq!(a.compose(&p(&[1, -1])), p(&[-1, -1, 1]));
    }

    #[test]
    fn gcd_and_squarefree() {
        let a = p(&[-1, 1]); // x - 1
        let b = p(&[2, 1]); // x + 2
        let f = a.pow(3).mul(&b).scale(&BigInt::from(6));
        assert_eq!(f.gcd(&a.mul(&b).mul(&b)), a.mul(&b));
        let sq = f.squarefree_decomposition();
        assert_eq!(sq, vec![(b.clone(), 1), (a.clone(), 3)]);
        assert_eq!(f.squarefree_part(), a.mul(&b));
    }

    #[test]
    fn squarefree_multiple_powers() {
        let a = p(&[1, 0, 1]);
        let b = p(&[-2, 1]);
        let c = p(&[3, 5]);
        let f = a.mul(&b.pow(2)).mul(&c.pow(4));
        let mut sq = f.squarefree_decomposition();
        sq.sort_by_key(|(_, e)| *e);
        assert_eq!(sq, vec![(a, 1), (b, 2), (c, 4)]);
    }

    #[test]
    fn scale_roots_moves_roots() {
        // x - 3 has root 3; scaling by den/num = 1/2 gives root 3/2
        let q = p(&[-3, 1]).scale_roots(&BigInt::from(2), &BigInt::from(1));
        assert_eq!(q.primitive_part(), p(&[-3, 2]));
    }
}
