//! The exact free flow on `R^{2n}` and its pullback to chart variables.

use serde::Serialize;

use crate::algebra::Dim;
use crate::error::{Error, Result};
use crate::hopf::{fiber_coords, project, section, BundlePoint};
use crate::sampling;

use super::generators::{observables, ObservableSet};
use super::lagrangian::{chart_state, legendre, project_velocity};
use super::report::{Sample, Trajectory};
use super::{LagrangianParams, PhaseState, FD_STEP};

/// `u(t) = u_0 + t u̇_0`.
pub fn free_flow(u0: &BundlePoint, udot0: &BundlePoint, t: f64, params: &LagrangianParams) -> Result<BundlePoint> {
    if !params.g.is_constant() {
        return Err(Error::NonconstantMetric);
    }
    if u0.dim() != udot0.dim() {
        return Err(Error::DimensionMismatch {
            expected: u0.dim().n(),
            found: udot0.dim().n(),
        });
    }
    Ok(u0.advance(udot0, t))
}

/// Chart state and observables at `(u, u̇)`, with `ẏ` from a central
/// difference of `y(u + τu̇)`.
pub fn pullback_state(u: &BundlePoint, udot: &BundlePoint, t: f64, params: &LagrangianParams) -> Result<PhaseState> {
    let dim = u.dim();
    let fc = fiber_coords(u, &params.chart)?;
    let yp = fiber_coords(&u.advance(udot, FD_STEP), &params.chart)?.y;
    let ym = fiber_coords(&u.advance(udot, -FD_STEP), &params.chart)?.y;
    let ydot: Vec<f64> = yp.iter().zip(&ym).map(|(a, b)| (a - b) / (2.0 * FD_STEP)).collect();
    let x = project(u).x;
    let xdot = project_velocity(u, udot);
    let p = legendre(&fc.y, &ydot, &x, &xdot, params)?;
    PhaseState::new(dim, t, x, xdot, fc.y, p)
}

pub fn pullback_observables(u: &BundlePoint, udot: &BundlePoint, params: &LagrangianParams) -> Result<ObservableSet> {
    let state = pullback_state(u, udot, 0.0, params)?;
    observables(&state, params)
}

/// `(g/2) Σ_α ⟨u̇_α, (e_μ g) r_α⟩`: the momentum conjugate to left
/// multiplication of the fiber element, computed on `R^{2n}` directly.
pub fn noether_charges(u: &BundlePoint, udot: &BundlePoint, params: &LagrangianParams) -> Result<Vec<f64>> {
    let dim = u.dim();
    let fc = fiber_coords(u, &params.chart)?;
    let x = project(u);
    let (r1, r2) = section(&x, &params.chart)?;
    let g0 = params.g.at(u.radius_sqr());
    (1..dim.n())
        .map(|mu| {
            let eg = crate::algebra::AlgebraElement::unit(dim, mu)? * fc.g;
            Ok(0.5 * g0 * (udot.u1.dot(&eg.scale(r1)) + udot.u2.dot(&(eg * r2))))
        })
        .collect()
}

/// Chart-margin requirements on a sampled free path.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FlowMargins {
    /// Lower bound on `|u_1|² / |u|²` (distance from the base south pole).
    pub min_u1_fraction: f64,
    /// Lower bound on `1 + v_n` (distance from the fiber antipode).
    pub min_fiber: f64,
    /// Lower bound on `|u|²`.
    pub min_radius: f64,
    pub max_attempts: usize,
}

impl Default for FlowMargins {
    fn default() -> Self {
        FlowMargins {
            min_u1_fraction: 0.05,
            min_fiber: 0.1,
            min_radius: 0.1,
            max_attempts: 10_000,
        }
    }
}

impl FlowMargins {
    /// Whether `u` sits inside all margins.
    pub fn admits(&self, u: &BundlePoint) -> bool {
        let r = u.radius_sqr();
        let n1 = u.u1.norm_sqr();
        if r < self.min_radius || n1 < self.min_u1_fraction * r {
            return false;
        }
        let last = u.dim().n() - 1;
        1.0 + u.u1.coeff()[last] / n1.sqrt() >= self.min_fiber
    }

    /// Whether every grid point `t_k = k·dt`, `k = 0..=steps`, is admitted.
    pub fn admits_path(&self, u0: &BundlePoint, udot0: &BundlePoint, dt: f64, steps: usize) -> bool {
        (0..=steps).all(|k| self.admits(&u0.advance(udot0, k as f64 * dt)))
    }
}

/// Seeded Gaussian `(u_0, u̇_0)` whose free path over `steps` samples of
/// `dt` stays inside the margins.
pub fn sample_initial_data(
    dim: Dim,
    seed: u64,
    dt: f64,
    steps: usize,
    margins: &FlowMargins,
) -> Result<(BundlePoint, BundlePoint)> {
    let mut rng = sampling::rng(seed);
    for _ in 0..margins.max_attempts {
        let u0 = sampling::gaussian_bundle_point(&mut rng, dim);
        let udot0 = sampling::gaussian_bundle_point(&mut rng, dim).scale(0.5);
        if margins.admits_path(&u0, &udot0, dt, steps) {
            return Ok((u0, udot0));
        }
    }
    Err(Error::InvalidParameter(format!(
        "no initial data within chart margins after {} attempts",
        margins.max_attempts
    )))
}

/// Observables pulled back along the exact free flow at `t_k = k·dt`.
pub fn free_pullback_trajectory(
    u0: &BundlePoint,
    udot0: &BundlePoint,
    params: &LagrangianParams,
) -> Result<Trajectory> {
    params.validate()?;
    let mut traj = Trajectory::new(u0.dim());
    for k in 0..=params.steps {
        let t = k as f64 * params.dt;
        let u = free_flow(u0, udot0, t, params)?;
        match pullback_state(&u, udot0, t, params) {
            Ok(state) => {
                let obs = observables(&state, params)?;
                traj.samples.push(Sample { state, obs });
            }
            Err(Error::ChartSingularity(kind)) => {
                traj.truncate(t, kind);
                break;
            }
            Err(e) => return Err(e),
        }
    }
    Ok(traj)
}

/// Cross-check of the analytic chart velocity against the pulled-back one.
pub fn chart_velocity_defect(u: &BundlePoint, udot: &BundlePoint, params: &LagrangianParams) -> Result<f64> {
    let cs = chart_state(u, udot, &params.chart)?;
    let fc = fiber_coords(&u.advance(udot, FD_STEP), &params.chart)?.y;
    let bc = fiber_coords(&u.advance(udot, -FD_STEP), &params.chart)?.y;
    Ok(cs
        .ydot
        .iter()
        .zip(fc.iter().zip(&bc))
        .map(|(a, (f, b))| (a - (f - b) / (2.0 * FD_STEP)).abs())
        .fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mechanics::ConformalFactor;

    #[test]
    fn free_flow_basics() {
        let params = LagrangianParams::default();
        let mut rng = sampling::rng(51);
        let u0 = sampling::gaussian_bundle_point(&mut rng, Dim::Four);
        let ud = sampling::gaussian_bundle_point(&mut rng, Dim::Four);
        assert_eq!(free_flow(&u0, &ud, 0.0, &params).unwrap(), u0);
        assert_eq!(free_flow(&u0, &BundlePoint::zero(Dim::Four), 7.0, &params).unwrap(), u0);
        let curved = LagrangianParams {
            g: ConformalFactor::PowerLaw { g0: 1.0, exponent: 1.0 },
            ..params
        };
        assert_eq!(free_flow(&u0, &ud, 1.0, &curved), Err(Error::NonconstantMetric));
    }

    #[test]
    fn pullback_isospin_is_the_noether_charge() {
        let params = LagrangianParams::default();
        for dim in Dim::HOPF {
            let (u, ud) = sample_initial_data(dim, 52, 0.1, 1, &FlowMargins::default()).unwrap();
            let obs = pullback_observables(&u, &ud, &params).unwrap();
            let q = noether_charges(&u, &ud, &params).unwrap();
            for (a, b) in obs.i.iter().zip(&q) {
                assert!((a - b).abs() <= 1e-8, "{dim}: {a} vs {b}");
            }
            assert!(chart_velocity_defect(&u, &ud, &params).unwrap() <= 1e-7);
            let e = obs.energy.unwrap();
            assert!((e - 0.5 * ud.radius_sqr()).abs() <= 1e-8 * e);
        }
    }

    #[test]
    fn margins_reject_south_pole() {
        let dim = Dim::Two;
        let u = BundlePoint::new(crate::algebra::AlgebraElement::zero(dim), crate::algebra::AlgebraElement::one(dim)).unwrap();
        assert!(!FlowMargins::default().admits(&u));
    }
}
