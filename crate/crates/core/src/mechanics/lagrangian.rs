//! The free Lagrangian in bundle variables and its first-order form.
//!
//! With `u_α = g r_α` and the stereographic chart `y` on the fiber,
//!
//! `L = g/2 (ṙ̄_α ṙ_α + 4r D_μ ẏ_μ + 4r ẏ² / (1+y²)²)`,
//!
//! where `D_μ` is [`d_form`] applied to `A_{ab}(x, ẋ)`. Varying `ẏ` gives
//! `p_μ = 2gr (D_μ + 2ẏ_μ / (1+y²)²)`, and eliminating `ẏ` leaves
//!
//! `L_int = p ẏ + g/2 ṙ̄_α ṙ_α - (1+y²)² (p - 2grD)² / (8rg)`.

use crate::algebra::{AlgebraElement, Dim};
use crate::clifford::MatrixRep;
use crate::error::{Error, Result};
use crate::gauge::{d_form, potential};
use crate::hopf::{fiber_coords, project, BasePoint, BundlePoint, ChartConfig};

use super::{dot, norm_sqr, LagrangianParams, PhaseState};

/// `ẋ` of the projection along `u̇`.
pub fn project_velocity(u: &BundlePoint, udot: &BundlePoint) -> Vec<f64> {
    let bold = (udot.u1.conjugate() * u.u2 + u.u1.conjugate() * udot.u2).scale(2.0);
    let mut v = bold.coeff().to_vec();
    v.push(2.0 * (u.u1.dot(&udot.u1) - u.u2.dot(&udot.u2)));
    v
}

/// Section `r_α(x)` and its velocity at fixed fiber element.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SectionVelocity {
    pub r1: f64,
    pub r1dot: f64,
    pub r2: AlgebraElement,
    pub r2dot: AlgebraElement,
}

impl SectionVelocity {
    /// `ṙ̄_α ṙ_α`.
    pub fn speed_sqr(&self) -> f64 {
        self.r1dot * self.r1dot + self.r2dot.norm_sqr()
    }
}

/// Differentiates `r_1 = sqrt((r + x^{n+1})/2)`, `r_2 = x / (2 r_1)`:
/// `ṙ_1 = (ṙ + ẋ^{n+1}) / (4 r_1)` and
/// `ṙ_2 = ẋ / (2 r_1) - x ṙ_1 / (2 r_1²)`, with `ṙ = x_A ẋ_A / r`.
pub fn section_velocity(x: &BasePoint, xdot: &[f64], chart: &ChartConfig) -> Result<SectionVelocity> {
    let dim = x.dim();
    let n = dim.n();
    if xdot.len() != n + 1 {
        return Err(Error::DimensionMismatch {
            expected: n + 1,
            found: xdot.len(),
        });
    }
    let (r1, r2) = crate::hopf::section(x, chart)?;
    let rdot = dot(&x.x, xdot) / x.r;
    let r1dot = (rdot + xdot[n]) / (4.0 * r1);
    let xd = AlgebraElement::from_coeffs(dim, &xdot[..n])?;
    let r2dot = xd.scale(1.0 / (2.0 * r1)) - x.bold().scale(r1dot / (2.0 * r1 * r1));
    Ok(SectionVelocity { r1, r1dot, r2, r2dot })
}

/// Everything the bundle Lagrangian needs, derived from `(u, u̇)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChartState {
    pub x: BasePoint,
    pub xdot: Vec<f64>,
    pub v: Vec<f64>,
    pub y: Vec<f64>,
    /// Chart velocity by the chain rule through `g = u_1/|u_1|`.
    pub ydot: Vec<f64>,
}

pub fn chart_state(u: &BundlePoint, udot: &BundlePoint, chart: &ChartConfig) -> Result<ChartState> {
    if u.dim() != udot.dim() {
        return Err(Error::DimensionMismatch {
            expected: u.dim().n(),
            found: udot.dim().n(),
        });
    }
    let fc = fiber_coords(u, chart)?;
    let n = u.dim().n();
    let len = u.u1.norm();
    let g = fc.g;
    let gdot = (udot.u1 - g.scale(g.dot(&udot.u1))).scale(1.0 / len);
    let denom = 1.0 + fc.v[n - 1];
    let vdot_n = gdot.coeff()[n - 1];
    let ydot = (0..n - 1)
        .map(|mu| gdot.coeff()[mu] / denom - fc.v[mu] * vdot_n / (denom * denom))
        .collect();
    Ok(ChartState {
        x: project(u),
        xdot: project_velocity(u, udot),
        v: fc.v,
        y: fc.y,
        ydot,
    })
}

/// `D_μ` at a base point and velocity.
pub fn d_at(rep: &MatrixRep, x: &BasePoint, xdot: &[f64], y: &[f64], chart: &ChartConfig) -> Result<Vec<f64>> {
    let a = potential(rep, x, chart)?.contract(xdot)?;
    d_form(y, &a)
}

fn base_point(dim: Dim, x: &[f64]) -> Result<BasePoint> {
    BasePoint::new(dim, x.to_vec())
}

/// `g(r)/2 · u̇·u̇`.
pub fn lagrangian_flat(u: &BundlePoint, udot: &BundlePoint, params: &LagrangianParams) -> f64 {
    0.5 * params.g.at(u.radius_sqr()) * udot.radius_sqr()
}

/// The fiber/base decomposition evaluated from `(u, u̇)`.
pub fn lagrangian_bundle(u: &BundlePoint, udot: &BundlePoint, params: &LagrangianParams) -> Result<f64> {
    let cs = chart_state(u, udot, &params.chart)?;
    let rep = MatrixRep::shared(u.dim())?;
    lagrangian_chart(rep, &cs.x, &cs.xdot, &cs.y, &cs.ydot, params)
}

/// The same Lagrangian as a function of chart variables `(x, ẋ, y, ẏ)`.
pub fn lagrangian_chart(
    rep: &MatrixRep,
    x: &BasePoint,
    xdot: &[f64],
    y: &[f64],
    ydot: &[f64],
    params: &LagrangianParams,
) -> Result<f64> {
    let sv = section_velocity(x, xdot, &params.chart)?;
    let d = d_at(rep, x, xdot, y, &params.chart)?;
    let r = x.r;
    let y2 = norm_sqr(y);
    let w = (1.0 + y2) * (1.0 + y2);
    let g = params.g.at(r);
    Ok(0.5 * g * (sv.speed_sqr() + 4.0 * r * dot(&d, ydot) + 4.0 * r * norm_sqr(ydot) / w))
}

/// `p_μ = 2gr (D_μ + 2ẏ_μ/(1+y²)²)`.
pub fn legendre(y: &[f64], ydot: &[f64], x: &[f64], xdot: &[f64], params: &LagrangianParams) -> Result<Vec<f64>> {
    let dim = Dim::hopf(y.len() + 1)?;
    let xb = base_point(dim, x)?;
    let rep = MatrixRep::shared(dim)?;
    let d = d_at(rep, &xb, xdot, y, &params.chart)?;
    let w = (1.0 + norm_sqr(y)).powi(2);
    let k = 2.0 * params.g.at(xb.r) * xb.r;
    Ok(d.iter().zip(ydot).map(|(dm, yd)| k * (dm + 2.0 * yd / w)).collect())
}

/// Inverse of [`legendre`]: `ẏ = (1+y²)² (p/(2gr) - D) / 2`.
pub fn inverse_legendre(state: &PhaseState, params: &LagrangianParams) -> Result<Vec<f64>> {
    let xb = base_point(state.dim, &state.x)?;
    let rep = MatrixRep::shared(state.dim)?;
    let d = d_at(rep, &xb, &state.xdot, &state.y, &params.chart)?;
    let w = (1.0 + norm_sqr(&state.y)).powi(2);
    let k = 2.0 * params.g.at(xb.r) * xb.r;
    Ok(state.p.iter().zip(&d).map(|(p, dm)| 0.5 * w * (p / k - dm)).collect())
}

/// `L_int` on a phase state with an independent chart velocity `ẏ`.
pub fn lagrangian_int(state: &PhaseState, ydot: &[f64], params: &LagrangianParams) -> Result<f64> {
    if ydot.len() != state.y.len() {
        return Err(Error::DimensionMismatch {
            expected: state.y.len(),
            found: ydot.len(),
        });
    }
    Ok(dot(&state.p, ydot) + routhian(state, params)?)
}

/// `L_int - p ẏ = g/2 ṙ̄_α ṙ_α - (1+y²)² (p - 2grD)² / (8rg)`.
pub fn routhian(state: &PhaseState, params: &LagrangianParams) -> Result<f64> {
    let xb = base_point(state.dim, &state.x)?;
    let rep = MatrixRep::shared(state.dim)?;
    let sv = section_velocity(&xb, &state.xdot, &params.chart)?;
    let d = d_at(rep, &xb, &state.xdot, &state.y, &params.chart)?;
    let r = xb.r;
    let g = params.g.at(r);
    let w = (1.0 + norm_sqr(&state.y)).powi(2);
    let shifted: f64 = state
        .p
        .iter()
        .zip(&d)
        .map(|(p, dm)| (p - 2.0 * g * r * dm).powi(2))
        .sum();
    Ok(0.5 * g * sv.speed_sqr() - w * shifted / (8.0 * r * g))
}

/// `g ẋ² / (8r) + (1+y²)² p² / (8rg)`, the conserved energy of `L_int`.
pub fn energy(state: &PhaseState, params: &LagrangianParams) -> f64 {
    let r = state.r();
    let g = params.g.at(r);
    let w = (1.0 + norm_sqr(&state.y)).powi(2);
    g * norm_sqr(&state.xdot) / (8.0 * r) + w * norm_sqr(&state.p) / (8.0 * r * g)
}
