//! Reduced dynamics: the first-order Lagrangian `L_int` on `(x, ẋ, y, p)`
//! restricted to a fixed charge, integrated with RK4.
//!
//! Writing `L_int = p ẏ + K` with
//! `K = ½ m(x) |ẋ|² + W(x, y, p)·ẋ + V(x, y, p)`,
//! `m = g/(4r)`, `W_d = (1+y²)²/2 · p_μ D_μ(ẋ = e_d)` and
//! `V = -(1+y²)² p² / (8rg)`, the Euler-Lagrange equations read
//!
//! `ẏ = -∂_p K`, `ṗ = ∂_y K`,
//!
//! `m ẍ_d = -(∂m·ẋ) ẋ_d + ½|ẋ|² ∂_d m + (∂_d W_e - ∂_e W_d) ẋ_e
//!          - ∂_{w_j} W_d ẇ_j + ∂_d V`,
//!
//! with `w = (y, p)`. All partial derivatives are central differences.

use crate::algebra::{AlgebraElement, Dim};
use crate::clifford::MatrixRep;
use crate::error::{Error, Result, Singularity};
use crate::gauge::{d_form, potential, PotentialTensor};
use crate::hopf::{fiber_coords, project, section, BasePoint, BundlePoint};
use crate::sampling;

use super::flow::FlowMargins;
use super::generators::{generators, observables};
use super::lagrangian::{chart_state, legendre};
use super::report::{Sample, Trajectory};
use super::{dot, norm_sqr, LagrangianParams, PhaseState, FD_STEP};

fn check_dim(dim: Dim) -> Result<()> {
    match dim {
        Dim::Two | Dim::Four => Ok(()),
        other => Err(Error::UnsupportedDimension(other.n(), "2, 4")),
    }
}

/// The fixed charge vector for `s`: `I_1 = s/2` (so `J_12 = s`) for n = 2,
/// `I = (0, 0, s)` for n = 4.
pub fn target_isospin(dim: Dim, s: f64) -> Result<Vec<f64>> {
    check_dim(dim)?;
    Ok(match dim {
        Dim::Two => vec![0.5 * s],
        _ => vec![0.0, 0.0, s],
    })
}

/// Distance of a state's charge from the level set of `s`.
pub fn charge_defect(state: &PhaseState, s: f64) -> Result<f64> {
    let target = target_isospin(state.dim, s)?;
    let obs = generators(&state.y, &state.p, state.dim.n())?;
    Ok(obs.i.iter().zip(&target).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
}

/// `V_μ = ((e_μ g) r_1, (e_μ g) r_2)`, the fiber directions at `u`.
pub fn vertical_basis(u: &BundlePoint, params: &LagrangianParams) -> Result<Vec<BundlePoint>> {
    let dim = u.dim();
    let fc = fiber_coords(u, &params.chart)?;
    let (r1, r2) = section(&project(u), &params.chart)?;
    (1..dim.n())
        .map(|mu| {
            let eg = AlgebraElement::unit(dim, mu)? * fc.g;
            BundlePoint::new(eg.scale(r1), eg * r2)
        })
        .collect()
}

/// Seeded initial state on the level set of `params.s`, built as the chart
/// image of a free-flow state whose vertical velocity carries the charge.
/// Returns the state together with the free-flow data it came from.
pub fn reduced_initial_state(
    dim: Dim,
    seed: u64,
    params: &LagrangianParams,
    margins: &FlowMargins,
) -> Result<(PhaseState, BundlePoint, BundlePoint)> {
    check_dim(dim)?;
    params.validate()?;
    let target = target_isospin(dim, params.s)?;
    let mut rng = sampling::rng(seed);
    for _ in 0..margins.max_attempts {
        let u0 = sampling::gaussian_bundle_point(&mut rng, dim);
        let raw = sampling::gaussian_bundle_point(&mut rng, dim).scale(0.5);
        if !margins.admits(&u0) {
            continue;
        }
        let basis = vertical_basis(&u0, params)?;
        let r = u0.radius_sqr();
        let g = params.g.at(r);
        let mut udot = raw;
        for (v, i) in basis.iter().zip(&target) {
            // |V_μ|² = r and I_μ = (g/2) u̇·V_μ
            let c = 2.0 * i / (g * r) - udot.dot(v) / r;
            udot = udot.advance(v, c);
        }
        if !margins.admits_path(&u0, &udot, params.dt, params.steps) {
            continue;
        }
        let cs = chart_state(&u0, &udot, &params.chart)?;
        let p = legendre(&cs.y, &cs.ydot, &cs.x.x, &cs.xdot, params)?;
        let state = PhaseState::new(dim, 0.0, cs.x.x, cs.xdot, cs.y, p)?;
        return Ok((state, u0, udot));
    }
    Err(Error::InvalidParameter(format!(
        "no reduced initial data within chart margins after {} attempts",
        margins.max_attempts
    )))
}

struct Engine<'a> {
    dim: Dim,
    rep: &'a MatrixRep,
    params: &'a LagrangianParams,
}

struct Local {
    pot: PotentialTensor,
    r: f64,
}

impl Engine<'_> {
    fn n(&self) -> usize {
        self.dim.n()
    }

    fn local(&self, x: &[f64]) -> Result<Local> {
        let xb = BasePoint::new(self.dim, x.to_vec())?;
        let pot = potential(self.rep, &xb, &self.params.chart)?;
        Ok(Local { pot, r: xb.r })
    }

    fn mass(&self, r: f64) -> f64 {
        self.params.g.at(r) / (4.0 * r)
    }

    fn w(&self, loc: &Local, y: &[f64], p: &[f64]) -> Result<Vec<f64>> {
        let n = self.n();
        let k = 0.5 * (1.0 + norm_sqr(y)).powi(2);
        let mut e = vec![0.0; n + 1];
        let mut out = Vec::with_capacity(n + 1);
        for d in 0..=n {
            e[d] = 1.0;
            let a = loc.pot.contract(&e)?;
            e[d] = 0.0;
            out.push(k * dot(p, &d_form(y, &a)?));
        }
        Ok(out)
    }

    fn v(&self, loc: &Local, y: &[f64], p: &[f64]) -> f64 {
        let g = self.params.g.at(loc.r);
        -(1.0 + norm_sqr(y)).powi(2) * norm_sqr(p) / (8.0 * loc.r * g)
    }

    /// `W·ẋ + V`, the part of `K` that depends on `(y, p)`.
    fn k_fiber(&self, loc: &Local, xdot: &[f64], y: &[f64], p: &[f64]) -> Result<f64> {
        Ok(dot(&self.w(loc, y, p)?, xdot) + self.v(loc, y, p))
    }

    fn rhs(&self, s: &[f64]) -> Result<Vec<f64>> {
        let n = self.n();
        let m = n - 1;
        let (x, rest) = s.split_at(n + 1);
        let (xdot, rest) = rest.split_at(n + 1);
        let (y, p) = rest.split_at(m);
        let h = FD_STEP;
        let loc = self.local(x)?;

        let mut ydot = vec![0.0; m];
        let mut pdot = vec![0.0; m];
        let mut dw_dw: Vec<Vec<f64>> = Vec::with_capacity(2 * m);
        for mu in 0..m {
            let mut yp = y.to_vec();
            let mut ym = y.to_vec();
            yp[mu] += h;
            ym[mu] -= h;
            pdot[mu] = (self.k_fiber(&loc, xdot, &yp, p)? - self.k_fiber(&loc, xdot, &ym, p)?) / (2.0 * h);
            let (wp, wm) = (self.w(&loc, &yp, p)?, self.w(&loc, &ym, p)?);
            dw_dw.push(wp.iter().zip(&wm).map(|(a, b)| (a - b) / (2.0 * h)).collect());
        }
        for mu in 0..m {
            let mut pp = p.to_vec();
            let mut pm = p.to_vec();
            pp[mu] += h;
            pm[mu] -= h;
            ydot[mu] = -(self.k_fiber(&loc, xdot, y, &pp)? - self.k_fiber(&loc, xdot, y, &pm)?) / (2.0 * h);
            let (wp, wm) = (self.w(&loc, y, &pp)?, self.w(&loc, y, &pm)?);
            dw_dw.push(wp.iter().zip(&wm).map(|(a, b)| (a - b) / (2.0 * h)).collect());
        }
        let wdot: Vec<f64> = ydot.iter().chain(&pdot).copied().collect();

        let mut dm = vec![0.0; n + 1];
        let mut dv = vec![0.0; n + 1];
        let mut dw = vec![vec![0.0; n + 1]; n + 1];
        for d in 0..=n {
            let mut xp = x.to_vec();
            let mut xm = x.to_vec();
            xp[d] += h;
            xm[d] -= h;
            let (lp, lm) = (self.local(&xp)?, self.local(&xm)?);
            dm[d] = (self.mass(lp.r) - self.mass(lm.r)) / (2.0 * h);
            dv[d] = (self.v(&lp, y, p) - self.v(&lm, y, p)) / (2.0 * h);
            let (wp, wm) = (self.w(&lp, y, p)?, self.w(&lm, y, p)?);
            for e in 0..=n {
                dw[d][e] = (wp[e] - wm[e]) / (2.0 * h);
            }
        }

        let mass = self.mass(loc.r);
        let dm_xdot = dot(&dm, xdot);
        let speed2 = norm_sqr(xdot);
        let mut out = Vec::with_capacity(s.len());
        out.extend_from_slice(xdot);
        for d in 0..=n {
            let mut f = -dm_xdot * xdot[d] + 0.5 * speed2 * dm[d] + dv[d];
            for e in 0..=n {
                f += (dw[d][e] - dw[e][d]) * xdot[e];
            }
            for (j, wd) in wdot.iter().enumerate() {
                f -= dw_dw[j][d] * wd;
            }
            out.push(f / mass);
        }
        out.extend(ydot);
        out.extend(pdot);
        Ok(out)
    }

    fn rk4(&self, s: &[f64], dt: f64) -> Result<Vec<f64>> {
        let axpy = |a: &[f64], k: &[f64], c: f64| a.iter().zip(k).map(|(u, v)| u + c * v).collect::<Vec<f64>>();
        let k1 = self.rhs(s)?;
        let k2 = self.rhs(&axpy(s, &k1, 0.5 * dt))?;
        let k3 = self.rhs(&axpy(s, &k2, 0.5 * dt))?;
        let k4 = self.rhs(&axpy(s, &k3, dt))?;
        Ok((0..s.len())
            .map(|i| s[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
            .collect())
    }
}

/// Integrates `params.steps` RK4 steps of size `params.dt` from `state0`,
/// which must lie on the level set of `params.s`. A chart singularity
/// truncates the trajectory.
pub fn integrate_reduced(state0: &PhaseState, params: &LagrangianParams) -> Result<Trajectory> {
    let dim = state0.dim;
    check_dim(dim)?;
    params.validate()?;
    if !state0.is_finite() {
        return Err(Error::InvalidParameter("initial state is not finite".into()));
    }
    let defect = charge_defect(state0, params.s)?;
    if defect > 1e-8 * params.s.abs().max(1.0) {
        return Err(Error::InvalidParameter(format!(
            "initial state is off the level set of s = {} (charge defect {defect})",
            params.s
        )));
    }
    let engine = Engine {
        dim,
        rep: MatrixRep::shared(dim)?,
        params,
    };
    let mut traj = Trajectory::new(dim);
    traj.samples.push(Sample {
        obs: observables(state0, params)?,
        state: state0.clone(),
    });
    let mut current = state0.to_vec();
    let y_limit = 2.0 / params.chart.fiber_eps - 1.0;
    for k in 1..=params.steps {
        let t = state0.t + k as f64 * params.dt;
        let next = match engine.rk4(&current, params.dt) {
            Ok(v) => v,
            Err(Error::ChartSingularity(kind)) => {
                traj.truncate(t, kind);
                break;
            }
            Err(e) => return Err(e),
        };
        let state = PhaseState::from_vec(dim, t, &next)?;
        if !state.is_finite() {
            return Err(Error::InvalidParameter(format!("integration diverged at t = {t}")));
        }
        if norm_sqr(&state.y) >= y_limit {
            traj.truncate(t, Singularity::FiberAntipode);
            break;
        }
        traj.samples.push(Sample {
            obs: observables(&state, params)?,
            state,
        });
        current = next;
    }
    Ok(traj)
}
