//! Hopf projections `S^{2n-1} → S^n`, the north-chart lift, fiber
//! coordinates, and the fiber actions.
//!
//! A bundle point is the pair `(u_1, u_2)` of algebra elements. Its spinor
//! column is ordered `U = (u_2, u_1)`; with that ordering
//! `U^T Γ^A U` reproduces `x = 2 ū_1 u_2`, `x^{n+1} = |u_1|² - |u_2|²`
//! component by component.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::algebra::{AlgebraElement, Dim};
use crate::clifford::MatrixRep;
use crate::error::{Error, Result, Singularity};
use crate::sampling;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BundlePoint {
    pub u1: AlgebraElement,
    pub u2: AlgebraElement,
}

impl BundlePoint {
    pub fn new(u1: AlgebraElement, u2: AlgebraElement) -> Result<Self> {
        if u1.dim() != u2.dim() {
            return Err(Error::DimensionMismatch {
                expected: u1.dim().n(),
                found: u2.dim().n(),
            });
        }
        Ok(BundlePoint { u1, u2 })
    }

    pub fn zero(dim: Dim) -> Self {
        BundlePoint {
            u1: AlgebraElement::zero(dim),
            u2: AlgebraElement::zero(dim),
        }
    }

    /// From `2n` reals laid out as `(u_1 coefficients, u_2 coefficients)`.
    pub fn from_slice(dim: Dim, u: &[f64]) -> Result<Self> {
        let n = dim.n();
        if u.len() != 2 * n {
            return Err(Error::DimensionMismatch {
                expected: 2 * n,
                found: u.len(),
            });
        }
        Ok(BundlePoint {
            u1: AlgebraElement::from_coeffs(dim, &u[..n])?,
            u2: AlgebraElement::from_coeffs(dim, &u[n..])?,
        })
    }

    /// Inverse of [`BundlePoint::to_spinor`].
    pub fn from_spinor(dim: Dim, spinor: &[f64]) -> Result<Self> {
        let n = dim.n();
        if spinor.len() != 2 * n {
            return Err(Error::DimensionMismatch {
                expected: 2 * n,
                found: spinor.len(),
            });
        }
        Ok(BundlePoint {
            u1: AlgebraElement::from_coeffs(dim, &spinor[n..])?,
            u2: AlgebraElement::from_coeffs(dim, &spinor[..n])?,
        })
    }

    pub fn dim(&self) -> Dim {
        self.u1.dim()
    }

    /// `(u_1, u_2)` flattened.
    pub fn to_vec(&self) -> Vec<f64> {
        let mut v = self.u1.coeff().to_vec();
        v.extend_from_slice(self.u2.coeff());
        v
    }

    /// The spinor column `U = (u_2, u_1)`.
    pub fn to_spinor(&self) -> Vec<f64> {
        let mut v = self.u2.coeff().to_vec();
        v.extend_from_slice(self.u1.coeff());
        v
    }

    /// `R² = ū_α u_α`.
    pub fn radius_sqr(&self) -> f64 {
        self.u1.norm_sqr() + self.u2.norm_sqr()
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.u1.dot(&other.u1) + self.u2.dot(&other.u2)
    }

    /// `self + t · velocity`.
    pub fn advance(&self, velocity: &Self, t: f64) -> Self {
        BundlePoint {
            u1: self.u1 + velocity.u1.scale(t),
            u2: self.u2 + velocity.u2.scale(t),
        }
    }

    pub fn scale(&self, k: f64) -> Self {
        BundlePoint {
            u1: self.u1.scale(k),
            u2: self.u2.scale(k),
        }
    }

    pub fn distance(&self, other: &Self) -> f64 {
        ((self.u1 - other.u1).norm_sqr() + (self.u2 - other.u2).norm_sqr()).sqrt()
    }
}

/// A point `(x^1, ..., x^n, x^{n+1})` of the base together with its radius.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BasePoint {
    #[serde(skip)]
    dim: Dim,
    pub x: Vec<f64>,
    pub r: f64,
}

impl BasePoint {
    /// `r` is taken as the Euclidean norm of `x`.
    pub fn new(dim: Dim, x: Vec<f64>) -> Result<Self> {
        if x.len() != dim.n() + 1 {
            return Err(Error::DimensionMismatch {
                expected: dim.n() + 1,
                found: x.len(),
            });
        }
        let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        Ok(BasePoint { dim, x, r })
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    /// The algebra-valued part `x = x^n + x^μ e_μ`.
    pub fn bold(&self) -> AlgebraElement {
        AlgebraElement::from_coeffs(self.dim, &self.x[..self.dim.n()]).expect("length n")
    }

    /// `x^{n+1}`.
    pub fn last(&self) -> f64 {
        self.x[self.dim.n()]
    }

    /// `|r² - Σ x_A x_A| / r²`, the stored-consistency check.
    pub fn radius_defect(&self) -> f64 {
        let s: f64 = self.x.iter().map(|v| v * v).sum();
        let r2 = self.r * self.r;
        if r2 == 0.0 {
            s
        } else {
            (r2 - s).abs() / r2
        }
    }

    pub fn max_abs_diff(&self, other: &BasePoint) -> f64 {
        self.x
            .iter()
            .zip(&other.x)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Cutoffs for the north chart of the lift and the stereographic fiber
/// chart.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChartConfig {
    /// Reject base points with `r + x^{n+1} ≤ base_eps · r`.
    pub base_eps: f64,
    /// Reject fiber elements with `1 + v_n ≤ fiber_eps`.
    pub fiber_eps: f64,
}

impl Default for ChartConfig {
    fn default() -> Self {
        ChartConfig {
            base_eps: 1e-8,
            fiber_eps: 1e-8,
        }
    }
}

/// `x = 2 ū_1 u_2`, `x^{n+1} = ū_1 u_1 - ū_2 u_2`, `r = ū_α u_α`.
pub fn project(u: &BundlePoint) -> BasePoint {
    let dim = u.dim();
    let bold = (u.u1.conjugate() * u.u2).scale(2.0);
    let mut x = bold.coeff().to_vec();
    x.push(u.u1.norm_sqr() - u.u2.norm_sqr());
    BasePoint {
        dim,
        x,
        r: u.radius_sqr(),
    }
}

/// `x^A = U^T Γ^A U` with `r = U^T U`.
pub fn project_spinor(rep: &MatrixRep, spinor: &[f64]) -> Result<BasePoint> {
    let n = rep.n();
    if spinor.len() != 2 * n {
        return Err(Error::DimensionMismatch {
            expected: 2 * n,
            found: spinor.len(),
        });
    }
    let u = DVector::from_column_slice(spinor);
    let x = rep
        .big_gammas()
        .iter()
        .map(|g| u.dot(&(g * &u)))
        .collect();
    Ok(BasePoint {
        dim: rep.dim(),
        x,
        r: u.norm_squared(),
    })
}

fn check_unit(g: &AlgebraElement) -> Result<()> {
    let norm = g.norm();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidFiberElement(norm));
    }
    Ok(())
}

fn check_base_chart(x: &BasePoint, chart: &ChartConfig) -> Result<()> {
    if x.r <= 0.0 {
        return Err(Error::ChartSingularity(Singularity::Origin));
    }
    if x.r + x.last() <= chart.base_eps * x.r {
        return Err(Error::ChartSingularity(Singularity::BaseSouthPole));
    }
    Ok(())
}

/// North-chart section scalars: `r_1 = sqrt((r + x^{n+1})/2)` and
/// `r_2 = x / sqrt(2(r + x^{n+1}))`.
pub fn section(x: &BasePoint, chart: &ChartConfig) -> Result<(f64, AlgebraElement)> {
    check_base_chart(x, chart)?;
    let s = x.r + x.last();
    let r1 = (s / 2.0).sqrt();
    let r2 = x.bold().scale(1.0 / (2.0 * s).sqrt());
    Ok((r1, r2))
}

/// `u_α = g r_α`.
pub fn lift(x: &BasePoint, g: &AlgebraElement, chart: &ChartConfig) -> Result<BundlePoint> {
    if g.dim() != x.dim() {
        return Err(Error::DimensionMismatch {
            expected: x.dim().n(),
            found: g.dim().n(),
        });
    }
    check_unit(g)?;
    let (r1, r2) = section(x, chart)?;
    Ok(BundlePoint {
        u1: g.scale(r1),
        u2: *g * r2,
    })
}

/// Stereographic chart of the fiber sphere: `v_n = (1-y²)/(1+y²)`,
/// `v_μ = 2y_μ/(1+y²)`.
pub fn v_from_y(y: &[f64]) -> Vec<f64> {
    let y2: f64 = y.iter().map(|v| v * v).sum();
    let mut v: Vec<f64> = y.iter().map(|yi| 2.0 * yi / (1.0 + y2)).collect();
    v.push((1.0 - y2) / (1.0 + y2));
    v
}

/// Inverse chart `y_μ = v_μ / (1 + v_n)`.
pub fn y_from_v(v: &[f64], chart: &ChartConfig) -> Result<Vec<f64>> {
    let (imag, real) = v.split_at(v.len() - 1);
    let denom = 1.0 + real[0];
    if denom <= chart.fiber_eps {
        return Err(Error::ChartSingularity(Singularity::FiberAntipode));
    }
    Ok(imag.iter().map(|vi| vi / denom).collect())
}

/// Fiber element `g`, its coefficients `v`, and stereographic `y`.
#[derive(Debug, Clone, PartialEq)]
pub struct FiberCoords {
    pub g: AlgebraElement,
    pub v: Vec<f64>,
    pub y: Vec<f64>,
}

pub fn fiber_coords(u: &BundlePoint, chart: &ChartConfig) -> Result<FiberCoords> {
    let r = u.radius_sqr();
    let n1 = u.u1.norm_sqr();
    if r <= 0.0 || n1 == 0.0 {
        return Err(Error::ChartSingularity(Singularity::BaseSouthPole));
    }
    // r + x^{n+1} = 2|u_1|²
    if 2.0 * n1 <= chart.base_eps * r {
        return Err(Error::ChartSingularity(Singularity::BaseSouthPole));
    }
    let g = u.u1.scale(1.0 / n1.sqrt());
    let v = g.coeff().to_vec();
    let y = y_from_v(&v, chart)?;
    Ok(FiberCoords { g, v, y })
}

/// A fiber transformation: a finite unit element `G` or infinitesimal
/// parameters `ω_{AB}`.
#[derive(Debug, Clone, PartialEq)]
pub enum FiberRotation {
    Finite(AlgebraElement),
    Infinitesimal(DMatrix<f64>),
}

impl FiberRotation {
    pub fn finite(g: AlgebraElement) -> Result<Self> {
        check_unit(&g)?;
        Ok(FiberRotation::Finite(g))
    }

    pub fn infinitesimal(omega: DMatrix<f64>) -> Result<Self> {
        check_antisymmetric(&omega)?;
        Ok(FiberRotation::Infinitesimal(omega))
    }

    fn element(&self, dim: Dim) -> Result<AlgebraElement> {
        match self {
            FiberRotation::Finite(g) if g.dim() == dim => {
                check_unit(g)?;
                Ok(*g)
            }
            FiberRotation::Finite(g) => Err(Error::DimensionMismatch {
                expected: dim.n(),
                found: g.dim().n(),
            }),
            FiberRotation::Infinitesimal(_) => Err(Error::InvalidParameter(
                "finite action needs a unit element, not rotation parameters".into(),
            )),
        }
    }
}

fn check_antisymmetric(omega: &DMatrix<f64>) -> Result<()> {
    if !omega.is_square() {
        return Err(Error::NonAntisymmetric(f64::INFINITY));
    }
    let dev = (omega + omega.transpose()).amax();
    let scale = omega.amax().max(1.0);
    if dev > 1e-12 * scale {
        return Err(Error::NonAntisymmetric(dev));
    }
    Ok(())
}

/// `u_α ↦ G u_α` (n = 1, 2, 4).
pub fn fiber_rotate(u: &BundlePoint, rot: &FiberRotation) -> Result<BundlePoint> {
    let dim = u.dim();
    if dim == Dim::Eight {
        return Err(Error::WrongDimension {
            expected: 4,
            found: 8,
        });
    }
    let g = rot.element(dim)?;
    Ok(BundlePoint {
        u1: g * u.u1,
        u2: g * u.u2,
    })
}

/// The same left action applied to octonions, which does not preserve the
/// projection. Kept for counterexamples.
pub fn fiber_rotate_naive(u: &BundlePoint, g: &AlgebraElement) -> BundlePoint {
    BundlePoint {
        u1: *g * u.u1,
        u2: *g * u.u2,
    }
}

/// `u_α ↦ (G u_1)(ū_1 u_α) / (ū_1 u_1)` (n = 8).
pub fn fiber_rotate_oct(u: &BundlePoint, rot: &FiberRotation) -> Result<BundlePoint> {
    let dim = u.dim();
    if dim != Dim::Eight {
        return Err(Error::WrongDimension {
            expected: 8,
            found: dim.n(),
        });
    }
    let g = rot.element(dim)?;
    let n1 = u.u1.norm_sqr();
    if n1 == 0.0 {
        return Err(Error::ZeroU1);
    }
    let gu1 = g * u.u1;
    let u1bar = u.u1.conjugate();
    let act = |ua: &AlgebraElement| (gu1 * (u1bar * *ua)).scale(1.0 / n1);
    Ok(BundlePoint {
        u1: act(&u.u1),
        u2: act(&u.u2),
    })
}

/// `δU = -(1/6) ω_{AB} (U^T Γ^{ABCD} U) Γ^{CD} U`, summed over all four
/// indices, for n = 8. Returns `U + eps · δU`.
pub fn infinitesimal_rotate(
    rep: &MatrixRep,
    spinor: &[f64],
    omega: &DMatrix<f64>,
    eps: f64,
) -> Result<Vec<f64>> {
    let delta = infinitesimal_generator(rep, spinor, omega)?;
    Ok(spinor
        .iter()
        .zip(delta.iter())
        .map(|(u, d)| u + eps * d)
        .collect())
}

/// The vector `δU` alone.
pub fn infinitesimal_generator(
    rep: &MatrixRep,
    spinor: &[f64],
    omega: &DMatrix<f64>,
) -> Result<DVector<f64>> {
    if rep.dim() != Dim::Eight {
        return Err(Error::WrongDimension {
            expected: 8,
            found: rep.n(),
        });
    }
    let k = rep.n() + 1;
    if omega.shape() != (k, k) {
        return Err(Error::DimensionMismatch {
            expected: k,
            found: omega.nrows(),
        });
    }
    check_antisymmetric(omega)?;
    if spinor.len() != 2 * rep.n() {
        return Err(Error::DimensionMismatch {
            expected: 2 * rep.n(),
            found: spinor.len(),
        });
    }
    let u = DVector::from_column_slice(spinor);
    // W_{CD} = Γ^C Γ^D U = Γ^{CD} U for C < D.
    let gu: Vec<DVector<f64>> = rep.big_gammas().iter().map(|g| g * &u).collect();
    let mut pairs = Vec::with_capacity(k * (k - 1) / 2);
    for c in 0..k {
        for d in c + 1..k {
            pairs.push((c, d, rep.big_gamma(c + 1) * &gu[d]));
        }
    }
    // For distinct indices U^T Γ^{ABCD} U = -W_{AB}·W_{CD}; the sum over all
    // orderings of (A,B) and (C,D) contributes a factor 4.
    let mut delta = DVector::zeros(u.len());
    for (a, b, w_ab) in &pairs {
        let om = omega[(*a, *b)];
        if om == 0.0 {
            continue;
        }
        for (c, d, w_cd) in &pairs {
            if c == a || c == b || d == a || d == b {
                continue;
            }
            let t = -w_ab.dot(w_cd);
            delta.axpy(-(4.0 / 6.0) * om * t, w_cd, 1.0);
        }
    }
    Ok(delta)
}

/// First witness and worst case of the naive left action failing to
/// preserve the octonionic projection.
#[derive(Debug, Clone, Serialize)]
pub struct NaiveWitness {
    pub seed: u64,
    pub trials: usize,
    pub first_trial: Option<usize>,
    pub g: Vec<f64>,
    pub u: Vec<f64>,
    pub deviation: f64,
    pub max_deviation: f64,
}

/// Seeded search for `(G, u)` with `|project(G u) - project(u)| > threshold`.
pub fn naive_counterexample(seed: u64, trials: usize, threshold: f64) -> NaiveWitness {
    let mut rng = sampling::rng(seed);
    let dim = Dim::Eight;
    let mut witness = NaiveWitness {
        seed,
        trials,
        first_trial: None,
        g: Vec::new(),
        u: Vec::new(),
        deviation: 0.0,
        max_deviation: 0.0,
    };
    for trial in 0..trials {
        let g = sampling::unit_element(&mut rng, dim);
        let u = sampling::gaussian_bundle_point(&mut rng, dim);
        let dev = project(&fiber_rotate_naive(&u, &g)).max_abs_diff(&project(&u));
        witness.max_deviation = witness.max_deviation.max(dev);
        if witness.first_trial.is_none() && dev > threshold {
            witness.first_trial = Some(trial);
            witness.g = g.coeff().to_vec();
            witness.u = u.to_vec();
            witness.deviation = dev;
        }
    }
    witness
}

/// `|T_{G2}(T_{G1} u) - T_{G2 G1} u|` for the octonionic action. Zero would
/// mean the action composes like a group action.
pub fn oct_composition_defect(
    u: &BundlePoint,
    g1: &AlgebraElement,
    g2: &AlgebraElement,
) -> Result<f64> {
    let step = fiber_rotate_oct(&fiber_rotate_oct(u, &FiberRotation::finite(*g1)?)?, &FiberRotation::finite(*g2)?)?;
    let direct = fiber_rotate_oct(u, &FiberRotation::finite(*g2 * *g1)?)?;
    Ok(step.distance(&direct))
}
