//! The free particle on `R^{2n}` rewritten over the Hopf base: Lagrangians,
//! symmetry generators, Poisson brackets, the exact flow and its pullback,
//! the reduced monopole dynamics, and conservation audits.

use serde::Serialize;

use crate::algebra::Dim;
use crate::error::{Error, Result};
use crate::hopf::ChartConfig;

pub mod flow;
pub mod generators;
pub mod lagrangian;
pub mod poisson;
pub mod reduced;
pub mod report;

pub use flow::{free_flow, free_pullback_trajectory, pullback_observables, sample_initial_data, FlowMargins};
pub use generators::{generators, identity_checks, IdentityReport, ObservableSet};
pub use lagrangian::{lagrangian_bundle, lagrangian_flat, lagrangian_int, legendre};
pub use poisson::{bracket_checks, poisson, BracketReport};
pub use reduced::{integrate_reduced, reduced_initial_state};
pub use report::{drift_report, ConservationReport, SeriesSet, Trajectory};

/// Central finite-difference step used throughout the mechanics module.
pub const FD_STEP: f64 = 1e-6;

/// The conformal factor `g` multiplying the flat kinetic term, as a function
/// of `r = ū_α u_α`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ConformalFactor {
    Constant { g0: f64 },
    /// `g0 · r^exponent`.
    PowerLaw { g0: f64, exponent: f64 },
}

impl ConformalFactor {
    pub fn at(&self, r: f64) -> f64 {
        match *self {
            ConformalFactor::Constant { g0 } => g0,
            ConformalFactor::PowerLaw { g0, exponent } => g0 * r.powf(exponent),
        }
    }

    pub fn is_constant(&self) -> bool {
        matches!(self, ConformalFactor::Constant { .. })
            || matches!(self, ConformalFactor::PowerLaw { exponent, .. } if *exponent == 0.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LagrangianParams {
    pub g: ConformalFactor,
    /// Fixed charge of the reductions.
    pub s: f64,
    pub dt: f64,
    pub steps: usize,
    pub chart: ChartConfig,
}

impl Default for LagrangianParams {
    fn default() -> Self {
        LagrangianParams {
            g: ConformalFactor::Constant { g0: 1.0 },
            s: 0.0,
            dt: 1e-3,
            steps: 10_000,
            chart: ChartConfig::default(),
        }
    }
}

impl LagrangianParams {
    pub fn validate(&self) -> Result<()> {
        let g0 = match self.g {
            ConformalFactor::Constant { g0 } | ConformalFactor::PowerLaw { g0, .. } => g0,
        };
        if !(g0 > 0.0 && g0.is_finite()) {
            return Err(Error::InvalidParameter(format!("g0 must be positive, got {g0}")));
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::InvalidParameter(format!("dt must be positive, got {}", self.dt)));
        }
        if !self.s.is_finite() {
            return Err(Error::InvalidParameter("s must be finite".into()));
        }
        Ok(())
    }
}

/// Base position and velocity together with the fiber chart and its momenta.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhaseState {
    #[serde(skip)]
    pub dim: Dim,
    pub t: f64,
    pub x: Vec<f64>,
    pub xdot: Vec<f64>,
    pub y: Vec<f64>,
    pub p: Vec<f64>,
}

impl PhaseState {
    pub fn new(dim: Dim, t: f64, x: Vec<f64>, xdot: Vec<f64>, y: Vec<f64>, p: Vec<f64>) -> Result<Self> {
        let n = dim.n();
        for (len, want) in [(x.len(), n + 1), (xdot.len(), n + 1), (y.len(), n - 1), (p.len(), n - 1)] {
            if len != want {
                return Err(Error::DimensionMismatch {
                    expected: want,
                    found: len,
                });
            }
        }
        Ok(PhaseState { dim, t, x, xdot, y, p })
    }

    pub fn is_finite(&self) -> bool {
        [&self.x, &self.xdot, &self.y, &self.p]
            .iter()
            .all(|v| v.iter().all(|c| c.is_finite()))
    }

    /// Flattened `(x, ẋ, y, p)`.
    pub fn to_vec(&self) -> Vec<f64> {
        let mut v = self.x.clone();
        v.extend_from_slice(&self.xdot);
        v.extend_from_slice(&self.y);
        v.extend_from_slice(&self.p);
        v
    }

    pub fn from_vec(dim: Dim, t: f64, v: &[f64]) -> Result<Self> {
        let n = dim.n();
        if v.len() != 2 * (n + 1) + 2 * (n - 1) {
            return Err(Error::DimensionMismatch {
                expected: 4 * n,
                found: v.len(),
            });
        }
        let (x, rest) = v.split_at(n + 1);
        let (xdot, rest) = rest.split_at(n + 1);
        let (y, p) = rest.split_at(n - 1);
        PhaseState::new(dim, t, x.to_vec(), xdot.to_vec(), y.to_vec(), p.to_vec())
    }

    pub fn r(&self) -> f64 {
        self.x.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Column names matching [`PhaseState::to_vec`].
    pub fn column_names(dim: Dim) -> Vec<String> {
        let n = dim.n();
        let mut names = Vec::with_capacity(4 * n);
        names.extend((1..=n + 1).map(|i| format!("x_{i}")));
        names.extend((1..=n + 1).map(|i| format!("xdot_{i}")));
        names.extend((1..n).map(|i| format!("y_{i}")));
        names.extend((1..n).map(|i| format!("p_{i}")));
        names
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm_sqr(a: &[f64]) -> f64 {
    dot(a, a)
}

pub(crate) fn rel_dev(value: f64, reference: f64) -> f64 {
    let diff = (value - reference).abs();
    let scale = reference.abs().max(value.abs());
    if scale == 0.0 {
        0.0
    } else {
        diff / scale
    }
}
