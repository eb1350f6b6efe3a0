//! Canonical brackets on the fiber phase space `(y, p)` by central finite
//! differences.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::Result;
use crate::gauge::{killing, KillingTriple};

use super::generators::generators;
use super::FD_STEP;

fn partial<F: Fn(&[f64], &[f64]) -> f64>(f: &F, y: &[f64], p: &[f64], k: usize, wrt_p: bool) -> f64 {
    let mut yp = y.to_vec();
    let mut pp = p.to_vec();
    let mut ym = y.to_vec();
    let mut pm = p.to_vec();
    if wrt_p {
        pp[k] += FD_STEP;
        pm[k] -= FD_STEP;
    } else {
        yp[k] += FD_STEP;
        ym[k] -= FD_STEP;
    }
    (f(&yp, &pp) - f(&ym, &pm)) / (2.0 * FD_STEP)
}

/// `{f, h} = Σ_μ (∂f/∂y_μ ∂h/∂p_μ - ∂f/∂p_μ ∂h/∂y_μ)`.
pub fn poisson<F, H>(f: F, h: H, y: &[f64], p: &[f64]) -> f64
where
    F: Fn(&[f64], &[f64]) -> f64,
    H: Fn(&[f64], &[f64]) -> f64,
{
    assert_eq!(y.len(), p.len(), "y and p must have equal length");
    (0..y.len())
        .map(|k| {
            partial(&f, y, p, k, false) * partial(&h, y, p, k, true)
                - partial(&f, y, p, k, true) * partial(&h, y, p, k, false)
        })
        .sum()
}

fn i_comp(l: usize) -> impl Fn(&[f64], &[f64]) -> f64 {
    move |y, p| generators(y, p, 4).expect("n = 4").i[l]
}

fn p_comp(l: usize) -> impl Fn(&[f64], &[f64]) -> f64 {
    move |y, p| generators(y, p, 4).expect("n = 4").p.expect("n = 4")[l]
}

/// `z = -(P_1 + iP_2) / (s - P_3)` with `s = |P|`.
pub fn z_of(y: &[f64], p: &[f64]) -> Complex64 {
    let pv = generators(y, p, 4).expect("n = 4").p.expect("n = 4");
    let s = pv.iter().map(|v| v * v).sum::<f64>().sqrt();
    -Complex64::new(pv[0], pv[1]) / (s - pv[2])
}

/// Bracket relations of the n = 4 generators at one point.
#[derive(Debug, Clone, Serialize)]
pub struct BracketReport {
    pub y: Vec<f64>,
    pub p: Vec<f64>,
    /// `max |{I_μ, I_ν} - ε_{μνλ} I_λ|`.
    pub ii: f64,
    /// `max |{P_μ, P_ν} - ε_{μνλ} P_λ|`.
    pub pp: f64,
    /// `max |{P_μ, I_ν}|`.
    pub pi: f64,
    /// `s = |P|`.
    pub s: f64,
    pub z: [f64; 2],
    /// `-2is {z, z̄}`, which is real.
    pub z_bracket: f64,
    /// `(1 + zz̄)²`.
    pub z_expected: f64,
    /// `|z_bracket - z_expected| / z_expected`.
    pub z_deviation: f64,
    /// `max |P - P(h(z))|` with `P_3 = -s h_3`, `P_2 + iP_1 = -2is h_-`.
    pub killing_deviation: f64,
    pub killing: KillingTriple,
}

impl BracketReport {
    pub fn max_deviation(&self) -> f64 {
        self.ii.max(self.pp).max(self.pi).max(self.z_deviation)
    }
}

pub fn bracket_checks(y: &[f64], p: &[f64]) -> Result<BracketReport> {
    let obs = generators(y, p, 4)?;
    let iv = &obs.i;
    let pv = obs.p.expect("n = 4");
    let eps = crate::algebra::StructureTable::shared(crate::algebra::Dim::Four);
    let (mut ii, mut pp, mut pi) = (0.0f64, 0.0f64, 0.0f64);
    for mu in 0..3 {
        for nu in 0..3 {
            let e_i: f64 = (0..3).map(|l| eps.c0(mu, nu, l) * iv[l]).sum();
            let e_p: f64 = (0..3).map(|l| eps.c0(mu, nu, l) * pv[l]).sum();
            ii = ii.max((poisson(i_comp(mu), i_comp(nu), y, p) - e_i).abs());
            pp = pp.max((poisson(p_comp(mu), p_comp(nu), y, p) - e_p).abs());
            pi = pi.max(poisson(p_comp(mu), i_comp(nu), y, p).abs());
        }
    }
    let s = pv.iter().map(|v| v * v).sum::<f64>().sqrt();
    let z = z_of(y, p);
    // {z, z̄} = -2i {Re z, Im z}
    let re_im = poisson(|a: &[f64], b: &[f64]| z_of(a, b).re, |a: &[f64], b: &[f64]| z_of(a, b).im, y, p);
    let z_bracket = -4.0 * s * re_im;
    let z_expected = (1.0 + z.norm_sqr()).powi(2);
    let k = killing(z);
    let from_h = Complex64::new(0.0, -2.0 * s) * k.h_minus;
    let killing_deviation = (pv[2] + s * k.h3)
        .abs()
        .max((from_h.re - pv[1]).abs())
        .max((from_h.im - pv[0]).abs());
    Ok(BracketReport {
        y: y.to_vec(),
        p: p.to_vec(),
        ii,
        pp,
        pi,
        s,
        z: [z.re, z.im],
        z_bracket,
        z_expected,
        z_deviation: (z_bracket - z_expected).abs() / z_expected,
        killing_deviation,
        killing: k,
    })
}
