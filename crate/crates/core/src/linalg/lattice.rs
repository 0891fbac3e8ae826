//! Integer kernels and Hermite normal form.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::normalize_sign;

/// Basis of the lattice `{x in Z^n : a x = 0}` for an integer matrix `a` with
/// `n` columns, in row-style Hermite normal form (so the basis is canonical).
/// The basis is saturated: the quotient `Z^n / kernel` is torsion free.
pub fn integer_kernel(a: &[Vec<BigInt>], n: usize) -> Vec<Vec<BigInt>> {
    // Column operations a U = [H | 0] with U unimodular; the columns of U
    // matching zero columns of a U span the kernel.
    let mut m: Vec<Vec<BigInt>> = a.to_vec();
    let mut u: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect();
    let rows = m.len();
    let mut next = 0;
    for r in 0..rows {
        if next == n {
            break;
        }
        // gcd-combine columns next.. on row r into column `next`
        for c in next + 1..n {
            if m[r][c].is_zero() {
                continue;
            }
            let x = m[r][next].clone();
            let y = m[r][c].clone();
            let eg = x.extended_gcd(&y);
            let (g, s, t) = (eg.gcd, eg.x, eg.y);
            let (xg, yg) = (&x / &g, &y / &g);
            // new col_next = s col_next + t col_c; new col_c = -yg col_next + xg col_c
            combine_columns(&mut m, next, c, &s, &t, &yg, &xg);
            combine_columns(&mut u, next, c, &s, &t, &yg, &xg);
        }
        if !m[r][next].is_zero() {
            next += 1;
        }
    }
    let basis: Vec<Vec<BigInt>> = (next..n).map(|c| (0..n).map(|i| u[i][c].clone()).collect()).collect();
    hermite_rows(basis)
}

/// Replaces columns `p, q` of `m` by `s*p + t*q` and `-yg*p + xg*q`; the
/// transformation has determinant `s*xg + t*yg = 1`.
fn combine_columns(m: &mut [Vec<BigInt>], p: usize, q: usize, s: &BigInt, t: &BigInt, yg: &BigInt, xg: &BigInt) {
    for row in m.iter_mut() {
        let a = row[p].clone();
        let b = row[q].clone();
        row[p] = s * &a + t * &b;
        row[q] = xg * &b - yg * &a;
    }
}

/// Row-style Hermite normal form of the lattice spanned by `rows`; zero rows
/// are dropped.
pub fn hermite_rows(mut rows: Vec<Vec<BigInt>>) -> Vec<Vec<BigInt>> {
    let Some(n) = rows.first().map(Vec::len) else {
        return rows;
    };
    let mut r = 0;
    for c in 0..n {
        if r == rows.len() {
            break;
        }
        for i in r + 1..rows.len() {
            while !rows[i][c].is_zero() {
                if rows[r][c].is_zero() || rows[i][c].abs() < rows[r][c].abs() {
                    rows.swap(r, i);
                    continue;
                }
                let q = rows[i][c].div_floor(&rows[r][c]);
                let (head, tail) = rows.split_at_mut(i);
                for (x, y) in tail[0].iter_mut().zip(&head[r]) {
                    *x -= &q * y;
                }
            }
        }
        if rows[r][c].is_zero() {
            continue;
        }
        if rows[r][c].is_negative() {
            for x in rows[r].iter_mut() {
                *x = -&*x;
            }
        }
        let piv = rows[r][c].clone();
        for i in 0..r {
            let q = rows[i][c].div_floor(&piv);
            if !q.is_zero() {
                let (head, tail) = rows.split_at_mut(r);
                for (x, y) in head[i].iter_mut().zip(&tail[0]) {
                    *x -= &q * y;
                }
            }
        }
        r += 1;
    }
    rows.truncate(r);
    rows.retain(|v| v.iter().any(|x| !x.is_zero()));
    for v in rows.iter_mut() {
        normalize_sign(v);
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn kernel_of_two_three() {
        assert_eq!(integer_kernel(&[b(&[2, 3])], 2), vec![b(&[3, -2])]);
    }

    #[test]
    fn identity_has_trivial_kernel() {
        assert!(integer_kernel(&[b(&[1, 0]), b(&[0, 1])], 2).is_empty());
    }

    #[test]
    fn kernel_is_saturated() {
        // x + y + z = 0 restricted lattice, plus a row making it rank 2
        let a = vec![b(&[2, 4, 6]), b(&[1, 1, 1])];
        let k = integer_kernel(&a, 3);
        assert_eq!(k, vec![b(&[1, -2, 1])]);
    }

    #[test]
    fn zero_matrix_kernel_is_everything() {
        let k = integer_kernel(&[b(&[0, 0, 0])], 3);
        assert_eq!(k, vec![b(&[1, 0, 0]), b(&[0, 1, 0]), b(&[0, 0, 1])]);
    }
}
