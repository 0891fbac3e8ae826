//! Integrals of mixed top powers over `(C*)^t x C^g/Lambda`.
//!
//! The integrand only depends on `lambda`, so the angular directions and the
//! abelian factor contribute `(2 pi)^t * covolume`. The `lambda` directions
//! are compactified by `u = tanh(lambda)` and integrated with nested midpoint
//! grids plus one Richardson step.

use nalgebra::{Complex, DMatrix};
use rayon::prelude::*;
use serde::Serialize;

use super::{check_phi_tor, complex_to_real_lift, toric_block, ChernError, FlatAbelianData, FormMatrix, ToricScale};

pub const MAX_TORUS_DIM: usize = 2;
pub const MAX_ABELIAN_DIM: usize = 1;

#[derive(Debug, Clone)]
pub struct TopPowerInput {
    /// `t' x t`, rows indexed by target coordinates.
    pub phi_tor: Vec<Vec<f64>>,
    pub t: usize,
    /// Target data and a complex-linear lift (`g' x g`).
    pub abelian: Option<(FlatAbelianData, DMatrix<Complex<f64>>)>,
    /// Constant in front of the toric form.
    pub toric_weight: f64,
    pub s1: usize,
    pub s2: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureParams {
    pub tol: f64,
    pub initial_points: usize,
    pub max_levels: u32,
    pub max_grid_points: usize,
}

impl Default for QuadratureParams {
    fn default() -> Self {
        QuadratureParams {
            tol: 1e-3,
            initial_points: 8,
            max_levels: 16,
            max_grid_points: 1 << 22,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureReport {
    pub error_estimate: f64,
    pub grid_levels: u32,
    pub value: f64,
}

/// Coefficient of `x^k` in `det(x a + b)`, by interpolation at `x = 0..=d`.
fn mixed_det_coefficient(a: &DMatrix<Complex<f64>>, b: &DMatrix<Complex<f64>>, k: usize) -> f64 {
    let d = a.nrows();
    if d == 0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    let n = d + 1;
    let mut vander = DMatrix::<f64>::zeros(n, n);
    let mut values = nalgebra::DVector::<f64>::zeros(n);
    for i in 0..n {
        let x = i as f64;
        for j in 0..n {
            vander[(i, j)] = x.powi(j as i32);
        }
        values[i] = (a * Complex::new(x, 0.0) + b).determinant().re;
    }
    let coeffs = vander
        .lu()
        .solve(&values)
        .unwrap_or_else(|| nalgebra::DVector::zeros(n));
    coeffs[k]
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

struct Integrand {
    phi: Vec<Vec<f64>>,
    t: usize,
    weight: f64,
    abelian_h: DMatrix<Complex<f64>>,
    s1: usize,
    norm: f64,
}

impl Integrand {
    /// Density of `omega_1^{s1} ^ omega_2^{s2}` against `dx dy` at `lambda`.
    fn density(&self, lambda: &[f64]) -> f64 {
        let g = self.abelian_h.nrows();
        let d = self.t + g;
        let m = toric_block(&self.phi, lambda, ToricScale::Degree) * self.weight;
        let mut h1 = DMatrix::<Complex<f64>>::zeros(d, d);
        let mut h2 = DMatrix::<Complex<f64>>::zeros(d, d);
        for i in 0..self.t {
            for j in 0..self.t {
                h1[(i, j)] = Complex::new(m[(i, j)], 0.0);
            }
        }
        h2.view_mut((self.t, self.t), (g, g)).copy_from(&self.abelian_h);
        self.norm * mixed_det_coefficient(&h1, &h2, self.s1)
    }

    fn midpoint(&self, n: usize) -> f64 {
        let h = 2.0 / n as f64;
        let node = |i: usize| -1.0 + (i as f64 + 0.5) * h;
        let cell = |u: &[f64]| -> f64 {
            let lambda: Vec<f64> = u.iter().map(|&x| x.atanh()).collect();
            let jac: f64 = u.iter().map(|&x| 1.0 / (1.0 - x * x)).product();
            self.density(&lambda) * jac
        };
        let rows: Vec<f64> = match self.t {
            0 => vec![self.density(&[])],
            1 => (0..n).into_par_iter().map(|i| cell(&[node(i)]) * h).collect(),
            _ => (0..n)
                .into_par_iter()
                .map(|i| (0..n).map(|j| cell(&[node(i), node(j)])).sum::<f64>() * h * h)
                .collect(),
        };
        rows.iter().sum()
    }
}

/// `int omega_tor^{s1} ^ omega_ab^{s2}` with `omega_tor` in degree scale.
pub fn integrate_top_power(input: &TopPowerInput, params: &QuadratureParams) -> Result<QuadratureReport, ChernError> {
    let t = input.t;
    if t > MAX_TORUS_DIM {
        return Err(ChernError::Invalid(format!(
            "torus dimension {t} exceeds {MAX_TORUS_DIM}"
        )));
    }
    check_phi_tor(&input.phi_tor, t)?;
    if !input.toric_weight.is_finite() {
        return Err(ChernError::Invalid("toric weight must be finite".into()));
    }
    let (abelian_h, covolume) = match &input.abelian {
        None => (DMatrix::zeros(0, 0), 1.0),
        Some((data, lift)) => {
            if lift.nrows() != data.target_dim() {
                return Err(ChernError::Shape("lift rows must match the target dimension".into()));
            }
            let g = lift.ncols();
            if g > MAX_ABELIAN_DIM {
                return Err(ChernError::Invalid(format!(
                    "abelian dimension {g} exceeds {MAX_ABELIAN_DIM}"
                )));
            }
            let form = super::abelian_form_matrix(data, &complex_to_real_lift(lift))?;
            if form.complex_defect() > 1e-9 * form.matrix().amax().max(1.0) {
                return Err(ChernError::NotComplexCompatible);
            }
            (form.hermitian(), data.covolume().powi(g as i32))
        }
    };
    let g = abelian_h.nrows();
    if input.s1 + input.s2 != t + g {
        return Err(ChernError::Invalid(format!(
            "s1 + s2 = {} but the domain has dimension {}",
            input.s1 + input.s2,
            t + g
        )));
    }
    if params.initial_points == 0 || !(params.tol > 0.0) {
        return Err(ChernError::Invalid("quadrature parameters must be positive".into()));
    }
    let norm = factorial(input.s1) * factorial(input.s2) * (2.0 * std::f64::consts::PI).powi(t as i32) * covolume;
    let integrand = Integrand {
        phi: input.phi_tor.clone(),
        t,
        weight: input.toric_weight,
        abelian_h,
        s1: input.s1,
        norm,
    };
    if t == 0 {
        let value = integrand.density(&[]);
        return Ok(QuadratureReport {
            value,
            error_estimate: 0.0,
            grid_levels: 1,
        });
    }

    let mut n = params.initial_points;
    let mut prev_mid = integrand.midpoint(n);
    let mut prev_rich: Option<f64> = None;
    for level in 2..=params.max_levels {
        n *= 2;
        if n.pow(t as u32) > params.max_grid_points {
            break;
        }
        let mid = integrand.midpoint(n);
        let rich = (4.0 * mid - prev_mid) / 3.0;
        if let Some(p) = prev_rich {
            let err = (rich - p).abs();
            if err < params.tol {
                return Ok(QuadratureReport {
                    value: rich,
                    error_estimate: err,
                    grid_levels: level,
                });
            }
        }
        prev_mid = mid;
        prev_rich = Some(rich);
    }
    let last = prev_rich.unwrap_or(prev_mid);
    Err(ChernError::NotConverged {
        last,
        previous: prev_mid,
        levels: params.max_levels,
    })
}

/// Weighted toric form at `z` in block sum with the abelian form.
pub fn combined_form(
    phi_tor: &[Vec<f64>],
    z: &super::TorusPointC,
    toric_weight: f64,
    abelian: Option<(&FlatAbelianData, &DMatrix<f64>)>,
) -> Result<FormMatrix, ChernError> {
    let tor = super::toric_form_matrix(phi_tor, z, ToricScale::Degree)?.scale(toric_weight);
    match abelian {
        None => Ok(tor),
        Some((data, lift)) => Ok(tor.direct_sum(&super::abelian_form_matrix(data, lift)?)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toric(phi: Vec<Vec<f64>>, t: usize, s1: usize) -> TopPowerInput {
        TopPowerInput {
            phi_tor: phi,
            t,
            abelian: None,
            toric_weight: 1.0,
            s1,
            s2: 0,
        }
    }

    #[test]
    fn fibre_integral_is_twice_the_entry() {
        for a in [1.0, 2.0, 3.0, -2.0] {
            let r = integrate_top_power(&toric(vec![vec![a]], 1, 1), &QuadratureParams::default()).unwrap();
            assert!((r.value - 2.0 * f64::abs(a)).abs() < 1e-2, "a={a}: {r:?}");
        }
    }

    #[test]
    fn elliptic_factor_gives_degree() {
        let tau = Complex::new(0.3, 1.7);
        let data = FlatAbelianData::elliptic(tau).unwrap();
        let lift = DMatrix::from_element(1, 1, Complex::new(2.0, 0.0));
        let input = TopPowerInput {
            phi_tor: vec![vec![1.0]],
            t: 1,
            abelian: Some((data, lift)),
            toric_weight: 1.0,
            s1: 1,
            s2: 1,
        };
        let r = integrate_top_power(&input, &QuadratureParams::default()).unwrap();
        assert!((r.value - 2.0 * 4.0).abs() < 1e-2, "{r:?}");
        let mut wrong = input.clone();
        wrong.s1 = 2;
        assert!(integrate_top_power(&wrong, &QuadratureParams::default()).is_err());
    }

    #[test]
    fn mixed_coefficient_by_interpolation() {
        let a = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            Complex::new(2.0, 0.0),
            Complex::new(0.0, 0.0),
        ]));
        let b = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            Complex::new(0.0, 0.0),
            Complex::new(3.0, 0.0),
        ]));
        assert!((mixed_det_coefficient(&a, &b, 1) - 6.0).abs() < 1e-12);
        assert!(mixed_det_coefficient(&a, &b, 2).abs() < 1e-12);
    }

    #[test]
    fn two_dimensional_torus() {
        // Diagonal map: the integral factors into two fibre integrals, times 2!.
        let r = integrate_top_power(
            &toric(vec![vec![1.0, 0.0], vec![0.0, 2.0]], 2, 2),
            &QuadratureParams::default(),
        )
        .unwrap();
        assert!((r.value - 2.0 * 2.0 * 4.0).abs() < 1e-2, "{r:?}");
    }
}
