//! Complex roots of squarefree integer polynomials with inclusion disks, and
//! logarithmic Mahler measures with error bounds.
//!
//! Roots are approximated by Aberth iteration in double precision. The
//! Weierstrass corrections `w_i = f(z_i) / (lc * prod_{j != i} (z_i - z_j))`
//! then give disks `|z - z_i| <= n |w_i|` whose union contains all roots,
//! each connected component containing as many roots as disks. Rounding in
//! the evaluation is covered by an a priori Horner error bound.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{Signed, ToPrimitive, Zero};

use super::HeightError;
use crate::arith::IntPoly;

const UNIT_ROUNDOFF: f64 = 1.0 / 9_007_199_254_740_992.0; // 2^-53
const MAX_ITERATIONS: usize = 2000;

/// A disk containing exactly one root.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RootDisk {
    pub center: Complex64,
    pub radius: f64,
}

impl RootDisk {
    pub fn intersects(&self, other: &RootDisk) -> bool {
        (self.center - other.center).norm() <= self.radius + other.radius
    }

    pub fn contains(&self, z: Complex64) -> bool {
        (z - self.center).norm() <= self.radius
    }
}

/// A real number with an absolute error bound.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Certified {
    pub value: f64,
    pub error: f64,
}

impl Certified {
    pub fn exact(value: f64) -> Self {
        Certified { value, error: 0.0 }
    }

    pub fn add(self, other: Certified) -> Certified {
        Certified {
            value: self.value + other.value,
            error: self.error + other.error + ulp_margin(self.value + other.value),
        }
    }

    pub fn scale(self, k: f64) -> Certified {
        Certified {
            value: self.value * k,
            error: self.error * k.abs() + ulp_margin(self.value * k),
        }
    }

    pub fn lower(&self) -> f64 {
        self.value - self.error
    }

    pub fn upper(&self) -> f64 {
        self.value + self.error
    }
}

fn ulp_margin(x: f64) -> f64 {
    4.0 * UNIT_ROUNDOFF * x.abs()
}

/// Natural logarithm of `|n|` for `n != 0`, also for integers beyond `f64`.
pub fn log_abs_bigint(n: &BigInt) -> f64 {
    let a = n.abs();
    if let Some(f) = a.to_f64().filter(|f| f.is_finite()) {
        return f.ln();
    }
    let shift = a.bits().saturating_sub(64);
    let top = (&a >> shift).to_f64().expect("fits");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Coefficients scaled by a power of two so the largest has size about one.
fn scaled_coeffs(f: &IntPoly) -> Result<Vec<f64>, HeightError> {
    let max_bits = f.coeffs().iter().map(|c| c.bits()).max().unwrap_or(0) as i64;
    let out: Vec<f64> = f
        .coeffs()
        .iter()
        .map(|c| {
            let shift = c.bits().saturating_sub(60);
            let top = (c >> shift).to_f64().expect("at most 60 bits");
            top * 2f64.powi((shift as i64 - max_bits).max(-2000) as i32)
        })
        .collect();
    if out.iter().any(|x| !x.is_finite()) {
        return Err(HeightError::Numeric("coefficient conversion overflowed".into()));
    }
    Ok(out)
}

/// Value and absolute-value Horner sums of the polynomial at `z`.
fn horner(c: &[f64], z: Complex64) -> (Complex64, f64) {
    let mut v = Complex64::zero();
    let mut s = 0.0;
    let az = z.norm();
    for a in c.iter().rev() {
        v = v * z + a;
        s = s * az + a.abs();
    }
    (v, s)
}

/// `f(z) / f'(z)`, evaluated through the reversed polynomial when `|z| > 1`.
fn newton_ratio(c: &[f64], dc: &[f64], rc: &[f64], rdc: &[f64], z: Complex64) -> Complex64 {
    let n = (c.len() - 1) as f64;
    if z.norm() <= 1.0 {
        let (p, _) = horner(c, z);
        let (dp, _) = horner(dc, z);
        p / dp
    } else {
        let w = z.inv();
        let (q, _) = horner(rc, w);
        let (dq, _) = horner(rdc, w);
        z * q / (q * n - w * dq)
    }
}

fn derivative(c: &[f64]) -> Vec<f64> {
    c.iter().enumerate().skip(1).map(|(k, a)| a * k as f64).collect()
}

/// Certified roots of a squarefree polynomial of positive degree.
pub fn certified_roots(f: &IntPoly) -> Result<Vec<RootDisk>, HeightError> {
    let n = f
        .degree()
        .ok_or_else(|| HeightError::Numeric("zero polynomial".into()))?;
    if n == 0 {
        return Ok(Vec::new());
    }
    if n == 1 {
        return Ok(vec![linear_root(f)]);
    }
    // Roots at zero are handled exactly.
    let zeros = f.coeffs().iter().take_while(|c| c.is_zero()).count();
    if zeros > 0 {
        if zeros > 1 {
            return Err(HeightError::Numeric("polynomial is not squarefree at 0".into()));
        }
        let rest = IntPoly::new(f.coeffs()[1..].to_vec());
        let mut out = certified_roots(&rest)?;
        out.push(RootDisk {
            center: Complex64::zero(),
            radius: 0.0,
        });
        return Ok(out);
    }
    let c = scaled_coeffs(f)?;
    let dc = derivative(&c);
    let rc: Vec<f64> = c.iter().rev().copied().collect();
    let rdc = derivative(&rc);

    let mut z = initial_guesses(&c);
    for _ in 0..MAX_ITERATIONS {
        let mut max_step: f64 = 0.0;
        for i in 0..n {
            let ratio = newton_ratio(&c, &dc, &rc, &rdc, z[i]);
            if !ratio.is_finite() {
                continue;
            }
            let mut s = Complex64::zero();
            for j in 0..n {
                if j != i {
                    s += (z[i] - z[j]).inv();
                }
            }
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            if step.is_finite() {
                z[i] -= step;
                max_step = max_step.max(step.norm() / z[i].norm().max(1.0));
            }
        }
        if max_step < 4.0 * UNIT_ROUNDOFF {
            break;
        }
    }
    // a final Newton step per root sharpens simple roots
    for zi in z.iter_mut() {
        let ratio = newton_ratio(&c, &dc, &rc, &rdc, *zi);
        if ratio.is_finite() {
            *zi -= ratio;
        }
    }
    let disks = inclusion_disks(&c, &rc, &z)?;
    for i in 0..n {
        for j in i + 1..n {
            if disks[i].intersects(&disks[j]) {
                return Err(HeightError::Numeric(format!(
                    "roots near {} and {} could not be separated in double precision",
                    disks[i].center, disks[j].center
                )));
            }
        }
    }
    Ok(disks)
}

fn linear_root(f: &IntPoly) -> RootDisk {
    let (b, a) = (f.coeff(0), f.coeff(1));
    let x = -crate::arith::rational::big_ratio_to_f64(&b, &a);
    RootDisk {
        center: Complex64::new(x, 0.0),
        radius: ulp_margin(x),
    }
}

fn initial_guesses(c: &[f64]) -> Vec<Complex64> {
    let n = c.len() - 1;
    let r = (c[0].abs() / c[n].abs()).powf(1.0 / n as f64);
    let r = if r.is_finite() && r > 0.0 { r } else { 1.0 };
    (0..n)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4;
            Complex64::from_polar(r, theta)
        })
        .collect()
}

/// Disks `D(z_i, n |w_i|)` with rounding accounted for.
fn inclusion_disks(c: &[f64], rc: &[f64], z: &[Complex64]) -> Result<Vec<RootDisk>, HeightError> {
    let n = z.len();
    let gamma = 8.0 * (n as f64 + 2.0) * UNIT_ROUNDOFF;
    let lc = c[n];
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let zi = z[i];
        // f(z_i) / (lc prod (z_i - z_j)), written so that nothing overflows.
        let (val, bound) = if zi.norm() <= 1.0 {
            let (v, s) = horner(c, zi);
            let mut prod = Complex64::new(lc, 0.0);
            for (j, zj) in z.iter().enumerate() {
                if j != i {
                    prod *= zi - zj;
                }
            }
            (v / prod, s / prod.norm())
        } else {
            let w = zi.inv();
            let (v, s) = horner(rc, w);
            // z^n q(w) / (lc prod (z_i - z_j)) = q(w) z / lc * prod z/(z - z_j)
            let mut ratio = zi / lc;
            for (j, zj) in z.iter().enumerate() {
                if j != i {
                    ratio *= zi / (zi - zj);
                }
            }
            (v * ratio, s * ratio.norm())
        };
        if !val.is_finite() || !bound.is_finite() {
            return Err(HeightError::Numeric("root inclusion overflowed".into()));
        }
        let err = gamma * bound;
        let radius = n as f64 * (val.norm() + err) * (1.0 + 4.0 * gamma);
        out.push(RootDisk { center: zi, radius });
    }
    Ok(out)
}

/// `log M(f) = log|lc| + sum log max(1, |alpha|)` for any nonzero `f`.
pub fn log_mahler_measure(f: &IntPoly) -> Result<Certified, HeightError> {
    if f.is_zero() {
        return Err(HeightError::ZeroInput);
    }
    let mut total = Certified::exact(log_abs_bigint(&f.content()));
    for (part, mult) in f.primitive_part().squarefree_decomposition() {
        if part.deg() == 0 {
            continue;
        }
        let m = log_mahler_squarefree(&part)?;
        total = total.add(m.scale(mult as f64));
    }
    Ok(total)
}

fn log_mahler_squarefree(f: &IntPoly) -> Result<Certified, HeightError> {
    let mut total = Certified::exact(log_abs_bigint(&f.leading()));
    if f.deg() == 1 {
        // root -b/a: log M = log max(|a|, |b|)
        let m = std::cmp::max(f.coeff(0).abs(), f.coeff(1).abs());
        let v = log_abs_bigint(&m);
        return Ok(Certified {
            value: v,
            error: ulp_margin(v) + UNIT_ROUNDOFF,
        });
    }
    for d in certified_roots(f)? {
        total = total.add(log_plus_abs(&d));
    }
    Ok(total)
}

/// `log max(1, |alpha|)` for the root in the disk.
pub fn log_plus_abs(d: &RootDisk) -> Certified {
    let a = d.center.norm();
    let hi = a + d.radius;
    if hi <= 1.0 {
        return Certified::exact(0.0);
    }
    let lo = (a - d.radius).max(1.0);
    let (lo_log, hi_log) = (lo.ln(), hi.ln());
    Certified {
        value: 0.5 * (lo_log + hi_log),
        error: 0.5 * (hi_log - lo_log) + ulp_margin(hi_log) + UNIT_ROUNDOFF,
    }
}
