//! Column-span membership, decided by elimination and, for small matrices,
//! certified by wedge products.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::matrix::{
    has_nonzero_maximal_minor, integral_multiple, next_combination, small_has_nonzero_maximal_minor, RatMatrix,
};
use super::LinalgError;
use crate::arith::Rational;

/// Wedge certificates are only searched for matrices with at most this many
/// columns.
pub const WEDGE_MAX_COLS: usize = 6;
/// ... and at most this many rows.
pub const WEDGE_MAX_ROWS: usize = 10;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Membership {
    pub member: bool,
    /// Column subset `I` with `wedge_{i in I} m_i != 0` and
    /// `wedge_{i in I} m_i ^ y = 0`, when the wedge route was run and `y` lies
    /// in the span.
    pub certificate: Option<Vec<usize>>,
}

/// Whether `y` lies in the column span of `m`.
pub fn image_membership(m: &RatMatrix, y: &[Rational]) -> Result<Membership, LinalgError> {
    if y.len() != m.rows() {
        return Err(LinalgError::DimensionMismatch {
            left: (m.rows(), m.cols()),
            right: (y.len(), 1),
        });
    }
    let member = in_span_by_elimination(m, y);
    let certificate = if m.cols() <= WEDGE_MAX_COLS && m.rows() <= WEDGE_MAX_ROWS {
        let cert = wedge_certificate(m, y);
        assert_eq!(cert.is_some(), member, "wedge criterion disagrees with elimination");
        cert
    } else {
        None
    };
    Ok(Membership { member, certificate })
}

fn in_span_by_elimination(m: &RatMatrix, y: &[Rational]) -> bool {
    if y.iter().all(Rational::is_zero) {
        return true;
    }
    let aug = m.hcat(&RatMatrix::column_vector(y)).expect("row counts match");
    m.rank() == aug.rank()
}

/// Searches column subsets for a wedge certificate. Returns the first subset,
/// in order of size and then lexicographically, whose columns are independent
/// and whose span contains `y`.
pub fn wedge_certificate(m: &RatMatrix, y: &[Rational]) -> Option<Vec<usize>> {
    if y.iter().all(Rational::is_zero) {
        return Some(Vec::new());
    }
    // integer inputs skip the denominator clearing
    let small = |x: &Rational| {
        if x.is_integer() {
            x.numer().to_i64().map(i128::from)
        } else {
            None
        }
    };
    let small_cols: Option<Vec<Vec<i128>>> = (0..m.cols())
        .map(|j| (0..m.rows()).map(|i| small(m.get(i, j))).collect())
        .collect();
    let small_y: Option<Vec<i128>> = y.iter().map(small).collect();
    if let (Some(cs), Some(ys)) = (small_cols, small_y) {
        if let Some(found) = search_subsets(&cs, &ys, m.rows(), small_has_nonzero_maximal_minor) {
            return found;
        }
    }
    let cols: Vec<Vec<BigInt>> = (0..m.cols()).map(|j| integral_multiple(&m.column(j))).collect();
    let yi = integral_multiple(y);
    search_subsets(&cols, &yi, m.rows(), |c| Some(has_nonzero_maximal_minor(c))).expect("exact search cannot overflow")
}

/// Subset search shared by the `i128` and `BigInt` paths. `None` when `test`
/// gives up.
fn search_subsets<T: Clone>(
    cols: &[Vec<T>],
    y: &[T],
    rows: usize,
    test: impl Fn(&[Vec<T>]) -> Option<bool>,
) -> Option<Option<Vec<usize>>> {
    let mut chosen: Vec<Vec<T>> = Vec::with_capacity(cols.len() + 1);
    for k in 1..=cols.len().min(rows) {
        let mut subset: Vec<usize> = (0..k).collect();
        loop {
            chosen.clear();
            chosen.extend(subset.iter().map(|&j| cols[j].clone()));
            if test(&chosen)? {
                chosen.push(y.to_vec());
                // wedge of k+1 vectors in Q^rows vanishes iff every
                // (k+1)-minor vanishes
                if k + 1 > rows || !test(&chosen)? {
                    return Some(Some(subset));
                }
            }
            if !next_combination(&mut subset, cols.len()) {
                break;
            }
        }
    }
    Some(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| Rational::from_int(x)).collect()
    }

    #[test]
    fn identity_contains_everything() {
        let m = RatMatrix::identity(3);
        let r = image_membership(&m, &ints(&[4, -1, 7])).unwrap();
        assert!(r.member);
        assert_eq!(r.certificate, Some(vec![0, 1, 2]));
    }

    #[test]
    fn rank_one_span() {
        let m = RatMatrix::from_i64_rows(&[&[1], &[2]]);
        let yes = image_membership(&m, &ints(&[2, 4])).unwrap();
        assert!(yes.member);
        assert_eq!(yes.certificate, Some(vec![0]));
        let no = image_membership(&m, &ints(&[1, 0])).unwrap();
        assert_eq!(
            no,
            Membership {
                member: false,
                certificate: None
            }
        );
    }

    #[test]
    fn zero_target_has_empty_certificate() {
        let m = RatMatrix::zeros(2, 2);
        let r = image_membership(&m, &ints(&[0, 0])).unwrap();
        assert_eq!(r.certificate, Some(vec![]));
    }

    #[test]
    fn wide_matrix_skips_certificate() {
        let m = RatMatrix::from_fn(2, 7, |i, j| Rational::from_int((i + j) as i64));
        let r = image_membership(&m, &ints(&[1, 2])).unwrap();
        assert!(r.member);
        assert!(r.certificate.is_none());
    }
}
