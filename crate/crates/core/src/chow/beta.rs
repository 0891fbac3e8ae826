//! The intersection numbers `beta_i`, `gamma_i` on the graph compactification
//! of a model cycle, and the ratio `alpha` entering the bigness criterion.
//!
//! The model cycle is a product `Y x Z`: `Y` a cycle of `(P^1)^t` meeting the
//! torus, `Z` the cycle of an [`AbelianDegreeData`]. Over the graph closure of
//! `phi_tor` its class is `pr1^*[Y] . [graph]` times `Z`, and
//! - `c1(M)` is `2 (eps'_1 + ... + eps'_{t'})`,
//! - `c1((phi_ab o pi)^* N_j)` is the abelian class `phi_ab^* N_j`,
//! - `c1(q^* L)` is `2 (eps_1 + ... + eps_t) + c1(N)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::abelian::{AbelianDegreeData, DivisorClass};
use super::ring::{chow_degree, chow_mul, ChowClass, MultiProjRing};
use super::toric::{boundary_classes, graph_closure_class};
use super::ChowError;
use crate::arith::Rational;
use crate::linalg::RatMatrix;

/// The abelian component of a homomorphism pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AbelianMap {
    /// Matrix of `E^g -> E^{g'}`, used with [`AbelianDegreeData::EllipticPower`].
    Matrix(RatMatrix),
    /// The pulled-back polarization class in table coordinates, together
    /// with the norm of the map. Scaling the map by `n` scales the class by
    /// `n^2` and the norm by `n`.
    Class { class: DivisorClass, norm: Rational },
}

impl AbelianMap {
    pub fn scale(&self, n: &Rational) -> AbelianMap {
        match self {
            AbelianMap::Matrix(m) => AbelianMap::Matrix(m.scale(n)),
            AbelianMap::Class { class, norm } => {
                let n2 = n * n;
                AbelianMap::Class {
                    class: class.iter().map(|c| c * &n2).collect(),
                    norm: norm * &n.abs(),
                }
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Which {
    Beta,
    Gamma,
}

#[derive(Clone, Debug)]
pub struct BetaGammaInput {
    /// `t' x t` exponent matrix of the toric part, rows indexed by target
    /// coordinates.
    pub phi_tor: RatMatrix,
    pub phi_ab: AbelianMap,
    /// Class of `Y` in `(P^1)^t`, homogeneous.
    pub toric_cycle: ChowClass,
    pub abelian: AbelianDegreeData,
}

impl BetaGammaInput {
    pub fn t(&self) -> usize {
        self.phi_tor.cols()
    }

    /// `dim X = dim Y + dim Z`.
    pub fn dimension(&self) -> Result<usize, ChowError> {
        let t = self.t();
        if self.toric_cycle.ring() != &MultiProjRing::p1_power(t) {
            return Err(ChowError::RingMismatch {
                left: self.toric_cycle.ring().factor_dims().to_vec(),
                right: vec![1; t],
            });
        }
        let codim = self
            .toric_cycle
            .codimension()
            .ok_or_else(|| ChowError::Dimension("the toric cycle class must be nonzero and homogeneous".into()))?
            as usize;
        Ok(t - codim + self.abelian.cycle_dim())
    }

    /// `|phi_tor| + |phi_ab|` with the max-absolute-entry norm.
    pub fn norm(&self) -> Rational {
        let tor = max_abs(self.phi_tor.entries());
        let ab = match &self.phi_ab {
            AbelianMap::Matrix(m) => max_abs(m.entries()),
            AbelianMap::Class { norm, .. } => norm.clone(),
        };
        tor + ab
    }

    /// Both parts multiplied by `n`.
    pub fn scale(&self, n: &Rational) -> BetaGammaInput {
        BetaGammaInput {
            phi_tor: self.phi_tor.scale(n),
            phi_ab: self.phi_ab.scale(n),
            toric_cycle: self.toric_cycle.clone(),
            abelian: self.abelian.clone(),
        }
    }
}

fn max_abs(v: &[Rational]) -> Rational {
    v.iter().map(Rational::abs).max().unwrap_or_else(Rational::zero)
}

/// `beta_i` or `gamma_i` of the pair. Rational pairs are handled by the
/// homogeneous extension: with `n` the common denominator, the value is
/// computed for `(n phi_tor, n phi_ab)` and divided by `n^{2r}` (`n^{2r-2}`).
pub fn beta_gamma_eval(input: &BetaGammaInput, i: usize, which: Which) -> Result<Rational, ChowError> {
    let r = input.dimension()?;
    let top = match which {
        Which::Beta => r,
        Which::Gamma => r
            .checked_sub(1)
            .ok_or_else(|| ChowError::Dimension("gamma needs a cycle of positive dimension".into()))?,
    };
    if i > top {
        return Err(ChowError::OutOfRange(format!("i = {i} exceeds {top}")));
    }
    let weight = match which {
        Which::Beta => 2 * r,
        Which::Gamma => 2 * r - 2,
    };

    let mut n = input.phi_tor.denominator_lcm();
    if let AbelianMap::Matrix(m) = &input.phi_ab {
        n = n.lcm(&m.denominator_lcm());
    }
    let n_rat = Rational::from(&n);
    let scaled = input.scale(&n_rat);
    let a = scaled.phi_tor.to_integer_rows().expect("cleared denominators");
    let t = input.t();

    let pulled = match &scaled.phi_ab {
        AbelianMap::Matrix(m) => input.abelian.pullback_of_polarization(m)?,
        AbelianMap::Class { class, .. } => {
            if class.len() != input.abelian.class_len() {
                return Err(ChowError::Invalid(format!(
                    "pulled-back class has {} coordinates, expected {}",
                    class.len(),
                    input.abelian.class_len()
                )));
            }
            class.clone()
        }
    };
    let polarization = input.abelian.polarization();

    // toric side: pr1^*[Y] . [graph] in (P^1)^t x (P^1)^{t'}
    let graph = graph_closure_class(&a, t)?;
    let y = input.toric_cycle.pullback_into(graph.ring(), 0)?;
    let cycle = chow_mul(&y, &graph)?;
    let (l_tor, m_class) = boundary_classes(t, a.len());
    let with_m = chow_mul(&cycle, &m_class.pow(i as u32))?;
    let toric_m = chow_degree(&with_m);

    let pullbacks = |k: usize| -> Vec<&DivisorClass> { std::iter::repeat(&pulled).take(k).collect() };
    let raw = match which {
        Which::Beta => Rational::from(&toric_m) * input.abelian.degree(&pullbacks(r - i))?,
        Which::Gamma => {
            let toric_ml = chow_degree(&chow_mul(&with_m, &l_tor)?);
            let ab_plain = input.abelian.degree(&pullbacks(r - 1 - i))?;
            let mut with_n = pullbacks(r - 1 - i);
            with_n.push(&polarization);
            let ab_n = input.abelian.degree(&with_n)?;
            Rational::from(&toric_ml) * ab_plain + Rational::from(&toric_m) * ab_n
        }
    };
    let scale = Rational::from(&num_traits::pow(n, weight));
    Ok(scaled.norm().pow(i as i32) * raw / scale)
}

/// Outcome of comparing `deg(c1(L_1)^r)` against `deg(c1(L_1)^{r-1} c1(q^* L))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlphaSiu {
    pub alpha: Rational,
    /// The inequality `v^r u >= 2r v^{r-1} u deg(c1(L_1)^{r-1} c1(q^* L))`.
    pub siu_holds: bool,
    /// `u = 0`: then `alpha = 0` and the height comparison is immediate.
    pub trivial: bool,
    pub u: BigInt,
    pub v: BigInt,
}

/// `alpha = u / max{1, 2r deg2}` with `u = deg1`, where `deg1` and `deg2`
/// are the two intersection numbers on the closure of `X`.
pub fn alpha_and_siu(deg1: &BigInt, deg2: &BigInt, r: usize) -> Result<AlphaSiu, ChowError> {
    if deg1.is_negative() || deg2.is_negative() {
        return Err(ChowError::Negative(format!(
            "intersection numbers of nef classes cannot be negative (got {deg1}, {deg2})"
        )));
    }
    if r == 0 {
        return Err(ChowError::Dimension("r must be at least 1".into()));
    }
    let u = deg1.clone();
    let two_r = BigInt::from(2 * r);
    let v = std::cmp::max(BigInt::one(), &two_r * deg2);
    let alpha = Rational::from_bigints(u.clone(), v.clone());
    let vr1 = num_traits::pow(v.clone(), r - 1);
    let lhs = &vr1 * &v * &u;
    let rhs = two_r * vr1 * &u * deg2;
    Ok(AlphaSiu {
        alpha,
        siu_holds: lhs >= rhs,
        trivial: u.is_zero(),
        u,
        v,
    })
}
