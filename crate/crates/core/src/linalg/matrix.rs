//! Dense matrices over the rationals.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::LinalgError;
use crate::arith::Rational;

/// Row-major matrix of exact rationals.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = RatMatrix::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Rational::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        RatMatrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self, LinalgError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(LinalgError::RaggedRows);
        }
        Ok(RatMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Panics on ragged input; intended for literals.
    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        RatMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Rational::from_int(x)).collect())
                .collect(),
        )
        .expect("rectangular literal")
    }

    pub fn column_vector(v: &[Rational]) -> Self {
        RatMatrix {
            rows: v.len(),
            cols: 1,
            data: v.to_vec(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn entries(&self) -> &[Rational] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Rational::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> RatMatrix {
        RatMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn scale(&self, c: &Rational) -> RatMatrix {
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * c).collect(),
        }
    }

    pub fn add(&self, other: &RatMatrix) -> Result<RatMatrix, LinalgError> {
        self.same_shape(other)?;
        Ok(RatMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &RatMatrix) -> Result<RatMatrix, LinalgError> {
        self.same_shape(other)?;
        Ok(RatMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        })
    }

    fn same_shape(&self, other: &RatMatrix) -> Result<(), LinalgError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(LinalgError::DimensionMismatch {
                left: (self.rows, self.cols),
                right: (other.rows, other.cols),
            });
        }
        Ok(())
    }

    pub fn mul(&self, other: &RatMatrix) -> Result<RatMatrix, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch {
                left: (self.rows, self.cols),
                right: (other.rows, other.cols),
            });
        }
        let mut out = RatMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += &(a * b);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>, LinalgError> {
        if self.cols != v.len() {
            return Err(LinalgError::DimensionMismatch {
                left: (self.rows, self.cols),
                right: (v.len(), 1),
            });
        }
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = Rational::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += &(a * b);
                    }
                }
                acc
            })
            .collect())
    }

    /// Columns of `self` followed by columns of `other`.
    pub fn hcat(&self, other: &RatMatrix) -> Result<RatMatrix, LinalgError> {
        if self.rows != other.rows {
            return Err(LinalgError::DimensionMismatch {
                left: (self.rows, self.cols),
                right: (other.rows, other.cols),
            });
        }
        Ok(RatMatrix::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                other.get(i, j - self.cols).clone()
            }
        }))
    }

    /// Rows of `self` followed by rows of `other`.
    pub fn vcat(&self, other: &RatMatrix) -> Result<RatMatrix, LinalgError> {
        if self.cols != other.cols {
            return Err(LinalgError::DimensionMismatch {
                left: (self.rows, self.cols),
                right: (other.rows, other.cols),
            });
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(RatMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn select_columns(&self, cols: &[usize]) -> RatMatrix {
        RatMatrix::from_fn(self.rows, cols.len(), |i, j| self.get(i, cols[j]).clone())
    }

    pub fn select_rows(&self, rows: &[usize]) -> RatMatrix {
        RatMatrix::from_fn(rows.len(), self.cols, |i, j| self.get(rows[i], j).clone())
    }

    /// Least common multiple of all denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        self.data.iter().fold(BigInt::one(), |acc, x| acc.lcm(&x.denom()))
    }

    /// Entries as integers, if all are integral.
    pub fn to_integer_rows(&self) -> Option<Vec<Vec<BigInt>>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(Rational::to_integer).collect())
            .collect()
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (RatMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(p, r);
            let inv = m.get(r, c).recip().expect("nonzero pivot");
            for j in c..m.cols {
                let v = m.get(r, j) * &inv;
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let f = m.get(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                for j in c..m.cols {
                    let pr = m.get(r, j);
                    if pr.is_zero() {
                        continue;
                    }
                    let v = m.get(i, j) - &(&f * pr);
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Rank over the rationals.
    pub fn rank(&self) -> usize {
        match small_integer_rows(self) {
            Some(rows) => match bareiss_i128(rows, false) {
                Some((rank, _)) => rank,
                None => self.rref().1.len(),
            },
            None => self.rref().1.len(),
        }
    }

    pub fn determinant(&self) -> Result<Rational, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare(self.rows, self.cols));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(Rational::one());
        }
        // Clear denominators row by row, then use fraction-free elimination.
        let mut scale = Rational::one();
        let mut int_rows = Vec::with_capacity(n);
        for i in 0..n {
            let d = self.row(i).iter().fold(BigInt::one(), |acc, x| acc.lcm(&x.denom()));
            scale = scale / Rational::from(d.clone());
            int_rows.push(
                self.row(i)
                    .iter()
                    .map(|x| x.numer() * (&d / x.denom()))
                    .collect::<Vec<_>>(),
            );
        }
        let small: Option<Vec<Vec<i128>>> = int_rows
            .iter()
            .map(|r| r.iter().map(|x| x.to_i64().map(i128::from)).collect())
            .collect();
        if let Some(rows) = small {
            if let Some((_, det)) = bareiss_i128(rows, true) {
                return Ok(Rational::from(BigInt::from(det)) * scale);
            }
        }
        Ok(Rational::from(bareiss_big(int_rows)) * scale)
    }

    /// Basis of the right kernel `{x : self x = 0}`.
    pub fn nullspace(&self) -> Vec<Vec<Rational>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Rational::zero(); self.cols];
                v[f] = Rational::one();
                for (i, &p) in pivots.iter().enumerate() {
                    v[p] = -r.get(i, f);
                }
                v
            })
            .collect()
    }

    /// A particular solution of `self x = y`, if one exists.
    pub fn solve(&self, y: &[Rational]) -> Result<Option<Vec<Rational>>, LinalgError> {
        if y.len() != self.rows {
            return Err(LinalgError::DimensionMismatch {
                left: (self.rows, self.cols),
                right: (y.len(), 1),
            });
        }
        let aug = self.hcat(&RatMatrix::column_vector(y))?;
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![Rational::zero(); self.cols];
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = r.get(i, self.cols).clone();
        }
        Ok(Some(x))
    }

    pub fn inverse(&self) -> Result<RatMatrix, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare(self.rows, self.cols));
        }
        let n = self.rows;
        let aug = self.hcat(&RatMatrix::identity(n))?;
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(LinalgError::Singular);
        }
        Ok(RatMatrix::from_fn(n, n, |i, j| r.get(i, n + j).clone()))
    }

    /// Characteristic polynomial `det(x I - self)`, coefficients lowest first.
    pub fn charpoly(&self) -> Result<Vec<Rational>, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare(self.rows, self.cols));
        }
        let n = self.rows;
        let mut h = self.clone();
        // Reduce to upper Hessenberg form by similarity transformations.
        for m in 1..n.saturating_sub(1) {
            let Some(p) = (m..n).find(|&i| !h.get(i, m - 1).is_zero()) else {
                continue;
            };
            if p != m {
                h.swap_rows(p, m);
                for i in 0..n {
                    h.data.swap(i * n + p, i * n + m);
                }
            }
            let pivot = h.get(m, m - 1).clone();
            for i in m + 1..n {
                if h.get(i, m - 1).is_zero() {
                    continue;
                }
                let u = h.get(i, m - 1) / &pivot;
                for j in 0..n {
                    let v = h.get(i, j) - &(&u * h.get(m, j));
                    h.set(i, j, v);
                }
                for k in 0..n {
                    let v = h.get(k, m) + &(&u * h.get(k, i));
                    h.set(k, m, v);
                }
            }
        }
        // Recurrence over leading principal submatrices.
        let mut polys: Vec<Vec<Rational>> = vec![vec![Rational::one()]];
        for m in 1..=n {
            let mut next = vec![Rational::zero(); m + 1];
            let prev = &polys[m - 1];
            for (i, c) in prev.iter().enumerate() {
                next[i + 1] += c;
                next[i] -= &(h.get(m - 1, m - 1) * c);
            }
            let mut t = Rational::one();
            for i in 1..m {
                t = t * h.get(m - i, m - i - 1);
                if t.is_zero() {
                    break;
                }
                let coef = &t * h.get(m - i - 1, m - 1);
                if coef.is_zero() {
                    continue;
                }
                for (k, c) in polys[m - i - 1].iter().enumerate() {
                    next[k] -= &(&coef * c);
                }
            }
            polys.push(next);
        }
        Ok(polys.pop().expect("nonempty"))
    }
}

/// Rows scaled to integers when all scaled entries fit in `i64`.
fn small_integer_rows(m: &RatMatrix) -> Option<Vec<Vec<i128>>> {
    let mut out = Vec::with_capacity(m.rows);
    for i in 0..m.rows {
        let row = m.row(i);
        let mut d = BigInt::one();
        for x in row {
            if !x.is_integer() {
                d = d.lcm(&x.denom());
            }
        }
        let mut r = Vec::with_capacity(m.cols);
        for x in row {
            let v = if d.is_one() {
                x.to_integer()?
            } else {
                x.numer() * (&d / x.denom())
            };
            r.push(i128::from(v.to_i64()?));
        }
        out.push(r);
    }
    Some(out)
}

/// Fraction-free elimination with checked `i128` arithmetic. Returns the rank
/// and, when `want_det` and the matrix is square, the determinant. `None` on
/// overflow.
fn bareiss_i128(mut a: Vec<Vec<i128>>, want_det: bool) -> Option<(usize, i128)> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut prev: i128 = 1;
    let mut sign: i128 = 1;
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| a[i][c] != 0) else {
            if want_det {
                return Some((r, 0));
            }
            continue;
        };
        if p != r {
            a.swap(p, r);
            sign = -sign;
        }
        let piv = a[r][c];
        for i in r + 1..rows {
            let f = a[i][c];
            for j in c + 1..cols {
                let num = piv.checked_mul(a[i][j])?.checked_sub(f.checked_mul(a[r][j])?)?;
                if num % prev != 0 {
                    return None;
                }
                a[i][j] = num / prev;
            }
            a[i][c] = 0;
        }
        prev = piv;
        r += 1;
    }
    let det = if want_det && rows == cols && r == rows {
        sign * prev
    } else {
        0
    };
    Some((r, det))
}

fn bareiss_big(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    let mut prev = BigInt::one();
    let mut sign = BigInt::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
            return BigInt::zero();
        };
        if p != k {
            a.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &a[k][k] * &a[i][j] - &a[i][k] * &a[k][j];
                a[i][j] = num / &prev;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    sign * prev
}

/// Determinant of a small integer matrix given as rows, using the checked
/// fast path when possible.
pub fn integer_determinant(rows: &[Vec<BigInt>]) -> BigInt {
    let small: Option<Vec<Vec<i128>>> = rows
        .iter()
        .map(|r| r.iter().map(|x| x.to_i64().map(i128::from)).collect())
        .collect();
    if let Some(s) = small {
        if let Some((_, d)) = bareiss_i128(s, true) {
            return BigInt::from(d);
        }
    }
    bareiss_big(rows.to_vec())
}

/// Whether any `k x k` minor of the integer matrix with the given columns
/// (each column a vector of equal length) is nonzero. For `k = 0` this is
/// always true.
pub(crate) fn has_nonzero_maximal_minor(columns: &[Vec<BigInt>]) -> bool {
    let k = columns.len();
    if k == 0 {
        return true;
    }
    let n = columns[0].len();
    if k > n {
        return false;
    }
    let mut rows: Vec<usize> = (0..k).collect();
    loop {
        let sub: Vec<Vec<BigInt>> = rows
            .iter()
            .map(|&i| columns.iter().map(|c| c[i].clone()).collect())
            .collect();
        if !integer_determinant(&sub).is_zero() {
            return true;
        }
        if !next_combination(&mut rows, n) {
            return false;
        }
    }
}

/// [`has_nonzero_maximal_minor`] in `i128`; `None` on overflow.
pub(crate) fn small_has_nonzero_maximal_minor(columns: &[Vec<i128>]) -> Option<bool> {
    let k = columns.len();
    if k == 0 {
        return Some(true);
    }
    let n = columns[0].len();
    if k > n {
        return Some(false);
    }
    let mut rows: Vec<usize> = (0..k).collect();
    loop {
        let sub: Vec<Vec<i128>> = rows.iter().map(|&i| columns.iter().map(|c| c[i]).collect()).collect();
        if bareiss_i128(sub, true)?.1 != 0 {
            return Some(true);
        }
        if !next_combination(&mut rows, n) {
            return Some(false);
        }
    }
}

/// Advances a strictly increasing index list to the next combination of
/// `0..n` in lexicographic order.
pub(crate) fn next_combination(s: &mut [usize], n: usize) -> bool {
    let k = s.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if s[i] < n - k + i {
            s[i] += 1;
            for j in i + 1..k {
                s[j] = s[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// A rational vector scaled by a positive integer so that it becomes
/// integral (scaling does not change wedge products being zero).
pub(crate) fn integral_multiple(v: &[Rational]) -> Vec<BigInt> {
    let d = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(&x.denom()));
    v.iter().map(|x| x.numer() * (&d / x.denom())).collect()
}

impl fmt::Display for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (j, x) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatMatrix{{{}x{}: {self}}}", self.rows, self.cols)
    }
}

impl Serialize for RatMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_rows().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for RatMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let rows = Vec::<Vec<Rational>>::deserialize(deserializer)?;
        RatMatrix::from_rows(rows).map_err(serde::de::Error::custom)
    }
}

/// Sign-normalizes an integer vector so its first nonzero entry is positive.
pub(crate) fn normalize_sign(v: &mut [BigInt]) {
    if v.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
        for x in v.iter_mut() {
            *x = -&*x;
        }
    }
}
