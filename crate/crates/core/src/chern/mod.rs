//! Numerical (1,1)-forms on the product model `T(C) x C^g/Lambda`.
//!
//! Real coordinates come in pairs: for a torus coordinate `z_u` the pair is
//! `(Re log z_u, Im log z_u)`, for an abelian coordinate it is the real and
//! imaginary part of the universal-cover coordinate. The complex structure
//! sends `d/dx_j` to `d/dy_j`.

mod quadrature;

use nalgebra::{Complex, DMatrix, SymmetricEigen};
use thiserror::Error;

pub use quadrature::{combined_form, integrate_top_power, QuadratureParams, QuadratureReport, TopPowerInput};

pub const DEFAULT_EIGEN_TOL: f64 = 1e-8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ChernError {
    #[error("torus coordinate {0} is zero or not finite")]
    ZeroCoordinate(usize),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("hermitian form is not hermitian")]
    NotHermitian,
    #[error("hermitian form is not positive definite")]
    NotPositiveDefinite,
    #[error("odd number ({0}) of eigenvalues below tolerance")]
    OddKernel(usize),
    #[error("form is not compatible with the complex structure")]
    NotComplexCompatible,
    #[error("quadrature did not converge: last estimates {last} and {previous} after {levels} levels")]
    NotConverged { last: f64, previous: f64, levels: u32 },
    #[error("invalid input: {0}")]
    Invalid(String),
}

/// Scale of the toric form.
///
/// `Degree` makes the form a first Chern form: its integral over a fibre
/// `P^1` is the intersection degree `2|a|`. `Displayed` is the quotient
/// formula taken literally (`1/(8 pi)` at the unit point for `phi = 1`),
/// which is a quarter of `Degree`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ToricScale {
    #[default]
    Degree,
    Displayed,
}

impl ToricScale {
    fn prefactor(self) -> f64 {
        match self {
            ToricScale::Degree => 1.0 / (2.0 * std::f64::consts::PI),
            ToricScale::Displayed => 1.0 / (8.0 * std::f64::consts::PI),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TorusPointC {
    coords: Vec<Complex<f64>>,
}

impl TorusPointC {
    pub fn new(coords: Vec<Complex<f64>>) -> Result<Self, ChernError> {
        for (i, z) in coords.iter().enumerate() {
            if !(z.norm() > 0.0) || !z.re.is_finite() || !z.im.is_finite() {
                return Err(ChernError::ZeroCoordinate(i));
            }
        }
        Ok(TorusPointC { coords })
    }

    pub fn from_log(lambda: &[f64], theta: &[f64]) -> Self {
        let coords = lambda
            .iter()
            .zip(theta)
            .map(|(&l, &th)| Complex::from_polar((-l).exp(), th))
            .collect();
        TorusPointC { coords }
    }

    pub fn coords(&self) -> &[Complex<f64>] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// `lambda_u = -log |z_u|`.
    pub fn lambda(&self) -> Vec<f64> {
        self.coords.iter().map(|z| -z.norm().ln()).collect()
    }

    pub fn mul(&self, other: &TorusPointC) -> Result<TorusPointC, ChernError> {
        if self.dim() != other.dim() {
            return Err(ChernError::Shape("torus points of different dimension".into()));
        }
        TorusPointC::new(self.coords.iter().zip(&other.coords).map(|(a, b)| a * b).collect())
    }
}

/// Constant hermitian data on the target abelian variety.
#[derive(Debug, Clone, PartialEq)]
pub struct FlatAbelianData {
    hermitian: DMatrix<Complex<f64>>,
    covolume: f64,
}

impl FlatAbelianData {
    /// `hermitian` is the Gram matrix of `H` on the target (linear in the first
    /// slot), `covolume` the Lebesgue volume of a fundamental domain of the
    /// source lattice, used only for integration.
    pub fn new(hermitian: DMatrix<Complex<f64>>, covolume: f64) -> Result<Self, ChernError> {
        let n = hermitian.nrows();
        if hermitian.ncols() != n {
            return Err(ChernError::Shape("hermitian form must be square".into()));
        }
        let scale = hermitian.iter().fold(1.0f64, |m, z| m.max(z.norm()));
        for i in 0..n {
            for j in 0..n {
                if (hermitian[(i, j)] - hermitian[(j, i)].conj()).norm() > 1e-12 * scale {
                    return Err(ChernError::NotHermitian);
                }
            }
        }
        let real = hermitian_to_real(&hermitian);
        let eig = SymmetricEigen::new(real);
        if eig.eigenvalues.iter().any(|&e| !(e > 1e-12 * scale)) {
            return Err(ChernError::NotPositiveDefinite);
        }
        if !(covolume > 0.0) || !covolume.is_finite() {
            return Err(ChernError::Invalid("covolume must be positive".into()));
        }
        Ok(FlatAbelianData { hermitian, covolume })
    }

    /// Elliptic curve `C/(Z + tau Z)` with its principal polarization
    /// `H(z, w) = z conj(w) / Im tau`, for source and target alike.
    pub fn elliptic(tau: Complex<f64>) -> Result<Self, ChernError> {
        if !(tau.im > 0.0) {
            return Err(ChernError::Invalid("tau must lie in the upper half plane".into()));
        }
        FlatAbelianData::new(DMatrix::from_element(1, 1, Complex::new(1.0 / tau.im, 0.0)), tau.im)
    }

    pub fn target_dim(&self) -> usize {
        self.hermitian.nrows()
    }

    pub fn hermitian(&self) -> &DMatrix<Complex<f64>> {
        &self.hermitian
    }

    pub fn covolume(&self) -> f64 {
        self.covolume
    }
}

/// Real symmetric `2d x 2d` matrix of `g(v, w) = omega(v, I w)` at a point.
#[derive(Debug, Clone, PartialEq)]
pub struct FormMatrix {
    matrix: DMatrix<f64>,
}

impl FormMatrix {
    pub fn zero(complex_dim: usize) -> Self {
        FormMatrix {
            matrix: DMatrix::zeros(2 * complex_dim, 2 * complex_dim),
        }
    }

    pub fn from_real(matrix: DMatrix<f64>) -> Result<Self, ChernError> {
        if matrix.nrows() != matrix.ncols() || matrix.nrows() % 2 != 0 {
            return Err(ChernError::Shape("form matrix must be square of even size".into()));
        }
        Ok(FormMatrix { matrix })
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn complex_dim(&self) -> usize {
        self.matrix.nrows() / 2
    }

    pub fn add(&self, other: &FormMatrix) -> Result<FormMatrix, ChernError> {
        if self.matrix.shape() != other.matrix.shape() {
            return Err(ChernError::Shape("forms of different size".into()));
        }
        Ok(FormMatrix {
            matrix: &self.matrix + &other.matrix,
        })
    }

    pub fn scale(&self, c: f64) -> FormMatrix {
        FormMatrix {
            matrix: &self.matrix * c,
        }
    }

    /// Block sum for a product of two spaces.
    pub fn direct_sum(&self, other: &FormMatrix) -> FormMatrix {
        let (a, b) = (self.matrix.nrows(), other.matrix.nrows());
        let mut m = DMatrix::zeros(a + b, a + b);
        m.view_mut((0, 0), (a, a)).copy_from(&self.matrix);
        m.view_mut((a, a), (b, b)).copy_from(&other.matrix);
        FormMatrix { matrix: m }
    }

    pub fn symmetry_defect(&self) -> f64 {
        (&self.matrix - self.matrix.transpose()).amax()
    }

    /// `max |g(Iv, Iw) - g(v, w)|` over basis vectors.
    pub fn complex_defect(&self) -> f64 {
        let j = complex_structure(self.complex_dim());
        (j.transpose() * &self.matrix * &j - &self.matrix).amax()
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        let sym = (&self.matrix + self.matrix.transpose()) * 0.5;
        let mut ev: Vec<f64> = SymmetricEigen::new(sym).eigenvalues.iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues().first().copied().unwrap_or(0.0)
    }

    /// The hermitian matrix `h` with `g = Re h`; requires I-compatibility.
    pub fn hermitian(&self) -> DMatrix<Complex<f64>> {
        let d = self.complex_dim();
        DMatrix::from_fn(d, d, |j, k| {
            Complex::new(self.matrix[(2 * j, 2 * k)], self.matrix[(2 * j, 2 * k + 1)])
        })
    }
}

fn complex_structure(d: usize) -> DMatrix<f64> {
    let mut j = DMatrix::zeros(2 * d, 2 * d);
    for k in 0..d {
        j[(2 * k + 1, 2 * k)] = 1.0;
        j[(2 * k, 2 * k + 1)] = -1.0;
    }
    j
}

/// Real form `Re h` of a hermitian matrix in the paired coordinates.
pub fn hermitian_to_real(h: &DMatrix<Complex<f64>>) -> DMatrix<f64> {
    let d = h.nrows();
    let mut g = DMatrix::zeros(2 * d, 2 * d);
    for j in 0..d {
        for k in 0..d {
            let z = h[(j, k)];
            g[(2 * j, 2 * k)] = z.re;
            g[(2 * j, 2 * k + 1)] = z.im;
            g[(2 * j + 1, 2 * k)] = -z.im;
            g[(2 * j + 1, 2 * k + 1)] = z.re;
        }
    }
    g
}

/// Real `2m x 2n` matrix of a complex-linear map `C^n -> C^m`.
pub fn complex_to_real_lift(a: &DMatrix<Complex<f64>>) -> DMatrix<f64> {
    let (m, n) = a.shape();
    let mut r = DMatrix::zeros(2 * m, 2 * n);
    for i in 0..m {
        for j in 0..n {
            let z = a[(i, j)];
            r[(2 * i, 2 * j)] = z.re;
            r[(2 * i, 2 * j + 1)] = -z.im;
            r[(2 * i + 1, 2 * j)] = z.im;
            r[(2 * i + 1, 2 * j + 1)] = z.re;
        }
    }
    r
}

/// `sech^2 x`, without overflow for large `|x|`.
pub(crate) fn sech2(x: f64) -> f64 {
    let s = (-2.0 * x.abs()).exp();
    4.0 * s / ((1.0 + s) * (1.0 + s))
}

/// The `t x t` matrix `M` with `g = M (x) I_2` at the given `lambda` values.
pub(crate) fn toric_block(phi: &[Vec<f64>], lambda: &[f64], scale: ToricScale) -> DMatrix<f64> {
    let t = lambda.len();
    let mut m = DMatrix::zeros(t, t);
    let c = scale.prefactor();
    for row in phi {
        let f: f64 = row.iter().zip(lambda).map(|(a, l)| a * l).sum();
        let w = c * sech2(f);
        for u in 0..t {
            for u2 in 0..t {
                m[(u, u2)] += w * row[u] * row[u2];
            }
        }
    }
    m
}

pub(crate) fn check_phi_tor(phi: &[Vec<f64>], t: usize) -> Result<(), ChernError> {
    for row in phi {
        if row.len() != t {
            return Err(ChernError::Shape(format!(
                "phi_tor row has {} entries, expected {t}",
                row.len()
            )));
        }
        if row.iter().any(|a| !a.is_finite()) {
            return Err(ChernError::Invalid("phi_tor entries must be finite".into()));
        }
    }
    Ok(())
}

/// `g` of the toric form of `phi_tor` (rows indexed by target coordinates).
pub fn toric_form_matrix(phi_tor: &[Vec<f64>], z: &TorusPointC, scale: ToricScale) -> Result<FormMatrix, ChernError> {
    check_phi_tor(phi_tor, z.dim())?;
    let m = toric_block(phi_tor, &z.lambda(), scale);
    Ok(FormMatrix {
        matrix: m.kronecker(&DMatrix::<f64>::identity(2, 2)),
    })
}

/// `g(v, w) = Re H(L v, L w)` for a real-linear lift `L` (`2g' x 2g`).
pub fn abelian_form_matrix(data: &FlatAbelianData, lift: &DMatrix<f64>) -> Result<FormMatrix, ChernError> {
    let gp = data.target_dim();
    if lift.nrows() != 2 * gp || lift.ncols() % 2 != 0 {
        return Err(ChernError::Shape(format!(
            "lift is {}x{}, expected 2*{gp} rows and an even number of columns",
            lift.nrows(),
            lift.ncols()
        )));
    }
    let gh = hermitian_to_real(&data.hermitian);
    let m = lift.transpose() * gh * lift;
    let sym = (&m + m.transpose()) * 0.5;
    Ok(FormMatrix { matrix: sym })
}

/// Complex dimension of the kernel: eigenvalues below `tol`, halved.
pub fn kernel_rank(form: &FormMatrix, tol: f64) -> Result<usize, ChernError> {
    let small = form.eigenvalues().iter().filter(|&&e| e < tol).count();
    if small % 2 != 0 {
        return Err(ChernError::OddKernel(small));
    }
    Ok(small / 2)
}

/// Complex dimension of `ker g1 ∩ ker g2`, from the singular values of the
/// stacked matrix.
pub fn kernel_intersection_rank(g1: &FormMatrix, g2: &FormMatrix, tol: f64) -> Result<usize, ChernError> {
    if g1.matrix.shape() != g2.matrix.shape() {
        return Err(ChernError::Shape("forms of different size".into()));
    }
    let n = g1.matrix.nrows();
    let mut stacked = DMatrix::zeros(2 * n, n);
    stacked.view_mut((0, 0), (n, n)).copy_from(&g1.matrix);
    stacked.view_mut((n, 0), (n, n)).copy_from(&g2.matrix);
    let sv = stacked.singular_values();
    let rank = sv.iter().filter(|&&s| s >= tol).count();
    let small = n - rank;
    if small % 2 != 0 {
        return Err(ChernError::OddKernel(small));
    }
    Ok(small / 2)
}
