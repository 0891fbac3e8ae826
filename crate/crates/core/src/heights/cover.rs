//! Finite grids in `n^-1 V` covering a box, with radius `delta` in toric
//! coordinates and `delta^(1/2)` in abelian ones.

use num_bigint::BigInt;
use num_traits::One;

use super::HeightError;
use crate::arith::Rational;

/// Which radius a coordinate must be covered with.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoordKind {
    Toric,
    Abelian,
}

/// Upper limit on the number of grid points returned.
pub const MAX_GRID_POINTS: usize = 1_000_000;

/// All points of `(1/n_delta) Z^d` in the box enlarged to the next grid
/// line on each side. Every point of the box is within `1/(2 n_delta)` of
/// the grid in each coordinate; the spacing `1/n_delta` must not exceed
/// `delta` (toric) or `delta^(1/2)` (abelian). An empty box gives no points.
pub fn cover_grid(
    bounds: &[(Rational, Rational)],
    kinds: &[CoordKind],
    delta: &Rational,
    n_delta: u64,
) -> Result<Vec<Vec<Rational>>, HeightError> {
    if bounds.len() != kinds.len() {
        return Err(HeightError::Invalid(format!(
            "{} intervals but {} coordinate kinds",
            bounds.len(),
            kinds.len()
        )));
    }
    if !delta.is_positive() {
        return Err(HeightError::Invalid("delta must be positive".into()));
    }
    if n_delta == 0 {
        return Err(HeightError::InsufficientResolution { n: 0, coord: 0 });
    }
    let spacing = Rational::from_bigints(BigInt::one(), BigInt::from(n_delta));
    for (c, kind) in kinds.iter().enumerate() {
        let ok = match kind {
            CoordKind::Toric => spacing <= *delta,
            CoordKind::Abelian => &spacing * &spacing <= *delta,
        };
        if !ok {
            return Err(HeightError::InsufficientResolution { n: n_delta, coord: c });
        }
    }
    if bounds.iter().any(|(lo, hi)| lo > hi) {
        return Ok(Vec::new());
    }
    let n = Rational::from(&BigInt::from(n_delta));
    let axes: Vec<Vec<Rational>> = bounds
        .iter()
        .map(|(lo, hi)| {
            let a = (lo * &n).floor();
            let b = (hi * &n).ceil();
            let mut k = a;
            let mut out = Vec::new();
            while k <= b {
                out.push(Rational::from_bigints(k.clone(), BigInt::from(n_delta)));
                k += 1;
            }
            out
        })
        .collect();
    let total = axes.iter().try_fold(1usize, |acc, a| acc.checked_mul(a.len()));
    match total {
        Some(t) if t <= MAX_GRID_POINTS => {}
        _ => {
            return Err(HeightError::Invalid(format!(
                "grid would exceed {MAX_GRID_POINTS} points"
            )))
        }
    }
    let mut points = vec![Vec::new()];
    for axis in &axes {
        let mut next = Vec::with_capacity(points.len() * axis.len());
        for p in &points {
            for x in axis {
                let mut q: Vec<Rational> = p.clone();
                q.push(x.clone());
                next.push(q);
            }
        }
        points = next;
    }
    Ok(points)
}
