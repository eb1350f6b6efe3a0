//! Seeded property suites behind `hopf verify`.

use nalgebra::DVector;
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use crate::algebra::{associator, divide, AlgebraElement, Dim};
use crate::clifford::{clifford_check, gamma_multiply_check, MatrixRep};
use crate::error::Result;
use crate::gauge::{killing, potential, reduce_potential, ReducedPotential};
use crate::hopf::{
    fiber_coords, fiber_rotate, fiber_rotate_oct, infinitesimal_generator, lift, naive_counterexample,
    oct_composition_defect, project, project_spinor, BasePoint, BundlePoint, ChartConfig, FiberRotation,
};
use crate::mechanics::lagrangian::{chart_state, lagrangian_chart};
use crate::mechanics::{
    bracket_checks, drift_report, free_pullback_trajectory, identity_checks, lagrangian_bundle, lagrangian_flat,
    legendre, sample_initial_data, FlowMargins, LagrangianParams, PhaseState, FD_STEP,
};
use crate::sampling::{self, SeededRng};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "kebab-case")]
pub enum Bound {
    AtMost(f64),
    Above(f64),
    Between(f64, f64),
    /// Measured only.
    Report,
}

impl Bound {
    fn admits(&self, v: f64) -> bool {
        match *self {
            Bound::AtMost(t) => v <= t,
            Bound::Above(t) => v > t,
            Bound::Between(lo, hi) => (lo..=hi).contains(&v),
            Bound::Report => true,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub n: usize,
    pub samples: usize,
    pub value: f64,
    pub bound: Bound,
    pub pass: bool,
    /// Inputs at the worst case, sufficient to reproduce it.
    pub witness: Value,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub pass: bool,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

/// Running maximum with the inputs that produced it.
struct Worst {
    value: f64,
    witness: Value,
    samples: usize,
}

impl Worst {
    fn new() -> Self {
        Worst {
            value: 0.0,
            witness: Value::Null,
            samples: 0,
        }
    }

    fn see(&mut self, value: f64, witness: impl FnOnce() -> Value) {
        self.samples += 1;
        if value > self.value || value.is_nan() || self.witness.is_null() {
            self.value = value;
            self.witness = witness();
        }
    }

    fn check(self, name: &str, n: usize, bound: Bound) -> Check {
        Check {
            name: name.to_string(),
            n,
            samples: self.samples,
            value: self.value,
            bound,
            pass: bound.admits(self.value),
            witness: self.witness,
        }
    }
}

fn single(name: &str, n: usize, value: f64, bound: Bound, witness: Value) -> Check {
    Check {
        name: name.to_string(),
        n,
        samples: 1,
        value,
        bound,
        pass: bound.admits(value),
        witness,
    }
}

fn coeffs(x: &AlgebraElement) -> Vec<f64> {
    x.coeff().to_vec()
}

fn dims(n: Option<usize>, allowed: &[Dim]) -> Result<Vec<Dim>> {
    match n {
        None => Ok(allowed.to_vec()),
        Some(n) => {
            let d = Dim::new(n)?;
            Ok(if allowed.contains(&d) { vec![d] } else { Vec::new() })
        }
    }
}

pub fn algebra(n: Option<usize>, trials: usize, seed: u64) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for dim in dims(n, &Dim::ALL)? {
        let nn = dim.n();
        let mut rng = sampling::rng(seed);
        let mut comp = Worst::new();
        let mut conj = Worst::new();
        let mut div = Worst::new();
        let mut assoc = Worst::new();
        let mut alt = Worst::new();
        for _ in 0..trials {
            let x = sampling::gaussian_element(&mut rng, dim);
            let y = sampling::gaussian_element(&mut rng, dim);
            let z = sampling::gaussian_element(&mut rng, dim);
            let scale = x.norm() * y.norm();
            comp.see(((x * y).norm() - scale).abs() / scale, || json!({"x": coeffs(&x), "y": coeffs(&y)}));
            conj.see(((x * y).conjugate() - y.conjugate() * x.conjugate()).norm() / scale, || {
                json!({"x": coeffs(&x), "y": coeffs(&y)})
            });
            let q = divide(&x, &y)?;
            div.see((q * y - x).norm() / x.norm(), || json!({"x": coeffs(&x), "y": coeffs(&y)}));
            let s3 = scale * z.norm();
            if nn <= 4 {
                assoc.see(associator(&x, &y, &z)?.norm() / s3, || {
                    json!({"x": coeffs(&x), "y": coeffs(&y), "z": coeffs(&z)})
                });
            }
            let a = associator(&x, &x, &y)?
                .norm()
                .max(associator(&x, &y, &y)?.norm())
                .max(associator(&x, &y, &x)?.norm());
            alt.see(a / (scale * x.norm().max(y.norm())), || json!({"x": coeffs(&x), "y": coeffs(&y)}));
        }
        out.push(comp.check("norm-composition", nn, Bound::AtMost(1e-12)));
        out.push(conj.check("conjugation-reverses-products", nn, Bound::AtMost(1e-12)));
        out.push(div.check("right-division-inverts", nn, Bound::AtMost(1e-12)));
        out.push(alt.check("alternativity", nn, Bound::AtMost(1e-12)));
        if nn <= 4 {
            out.push(assoc.check("associativity", nn, Bound::AtMost(1e-12)));
        } else {
            let e = |k| AlgebraElement::unit(dim, k);
            let got = associator(&e(1)?, &e(2)?, &e(4)?)?;
            let want = e(5)?.scale(-2.0);
            out.push(single(
                "associator-e1-e2-e4",
                nn,
                (got - want).norm(),
                Bound::AtMost(0.0),
                json!({"associator": coeffs(&got), "expected": coeffs(&want)}),
            ));
        }
    }
    Ok(out)
}

pub fn clifford(n: Option<usize>, trials: usize, seed: u64) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for dim in dims(n, &Dim::HOPF)? {
        let nn = dim.n();
        let rep = MatrixRep::shared(dim)?;
        let report = clifford_check(rep);
        let witness = serde_json::to_value(&report).expect("plain data");
        for (name, value) in [
            ("big-gamma-anticommutator", report.big_gamma_anticommutator),
            ("big-gamma-symmetry", report.big_gamma_symmetry),
            ("lambda-anticommutator", report.lambda_anticommutator),
            ("gamma-anticommutator", report.gamma_anticommutator),
            ("sigma-antisymmetry", report.sigma_antisymmetry),
        ] {
            out.push(single(name, nn, value, Bound::AtMost(1e-12), witness.clone()));
        }
        let shape_ok = report.matrix_count == nn + 1 && report.matrix_size == 2 * nn;
        out.push(single(
            "big-gamma-count-and-size",
            nn,
            if shape_ok { 0.0 } else { 1.0 },
            Bound::AtMost(0.0),
            json!({"count": report.matrix_count, "size": report.matrix_size}),
        ));
        let mut rng = sampling::rng(seed);
        let mut mult = Worst::new();
        for _ in 0..trials {
            let x = sampling::gaussian_element(&mut rng, dim);
            let y = sampling::gaussian_element(&mut rng, dim);
            let via = gamma_multiply_check(rep, &x, &y)?;
            mult.see((via - x * y).norm() / (x.norm() * y.norm()), || json!({"x": coeffs(&x), "y": coeffs(&y)}));
        }
        out.push(mult.check("gamma-reproduces-multiplication", nn, Bound::AtMost(1e-12)));
    }
    Ok(out)
}

fn admissible_point(rng: &mut SeededRng, dim: Dim) -> BundlePoint {
    loop {
        let u = sampling::gaussian_bundle_point(rng, dim);
        if u.u1.norm_sqr() > 1e-3 * u.radius_sqr() {
            return u;
        }
    }
}

pub fn hopf(n: Option<usize>, trials: usize, seed: u64) -> Result<Vec<Check>> {
    let chart = ChartConfig::default();
    let mut out = Vec::new();
    for dim in dims(n, &Dim::HOPF)? {
        let nn = dim.n();
        let rep = MatrixRep::shared(dim)?;
        let mut rng = sampling::rng(seed);
        let mut radius = Worst::new();
        let mut round = Worst::new();
        let mut relift = Worst::new();
        let mut spinor = Worst::new();
        let mut action = Worst::new();
        for _ in 0..trials {
            let u = admissible_point(&mut rng, dim);
            let uv = u.to_vec();
            let x = project(&u);
            radius.see(x.radius_defect(), || json!({"u": uv}));
            let g = fiber_coords(&u, &chart)?.g;
            let back = lift(&x, &g, &chart)?;
            round.see(back.distance(&u) / u.radius_sqr().sqrt(), || json!({"u": uv}));
            let g2 = sampling::unit_element(&mut rng, dim);
            let again = project(&lift(&x, &g2, &chart)?);
            relift.see(again.max_abs_diff(&x) / x.r, || json!({"u": uv, "g": coeffs(&g2)}));
            let xs = project_spinor(rep, &u.to_spinor())?;
            spinor.see(xs.max_abs_diff(&x) / x.r, || json!({"u": uv}));
            let gg = sampling::unit_element(&mut rng, dim);
            let rot = FiberRotation::finite(gg)?;
            let moved = if dim == Dim::Eight { fiber_rotate_oct(&u, &rot)? } else { fiber_rotate(&u, &rot)? };
            action.see(project(&moved).max_abs_diff(&x) / x.r, || json!({"u": uv, "g": coeffs(&gg)}));
        }
        out.push(radius.check("radius-identity", nn, Bound::AtMost(1e-10)));
        out.push(round.check("lift-of-projection", nn, Bound::AtMost(1e-10)));
        out.push(relift.check("projection-of-lift", nn, Bound::AtMost(1e-10)));
        out.push(spinor.check("spinor-projection", nn, Bound::AtMost(1e-10)));
        let tol = if dim == Dim::Eight { 1e-10 } else { 1e-12 };
        out.push(action.check("fiber-action-preserves-projection", nn, Bound::AtMost(tol)));

        if dim == Dim::Eight {
            let w = naive_counterexample(seed, 1000, 1e-3);
            out.push(single(
                "naive-action-counterexample",
                nn,
                w.deviation,
                Bound::Above(1e-3),
                serde_json::to_value(&w).expect("plain data"),
            ));
            let mut rng = sampling::rng(seed);
            let mut far = Worst::new();
            let mut comp = Worst::new();
            let (mut min_ratio, mut max_ratio) = (f64::INFINITY, f64::NEG_INFINITY);
            for _ in 0..trials.min(100) {
                let u = sampling::gaussian_vec(&mut rng, 16);
                let omega = sampling::antisymmetric(&mut rng, 9);
                let ratio = eps_halving_ratio(rep, &u, &omega, 1e-3)?;
                min_ratio = min_ratio.min(ratio);
                max_ratio = max_ratio.max(ratio);
                far.see((ratio - 4.0).abs(), || {
                    let rows: Vec<Vec<f64>> = omega.row_iter().map(|r| r.iter().copied().collect()).collect();
                    json!({"spinor": u.clone(), "omega": rows, "eps": 1e-3, "ratio": ratio})
                });
                let bp = admissible_point(&mut rng, dim);
                let g1 = sampling::unit_element(&mut rng, dim);
                let g2 = sampling::unit_element(&mut rng, dim);
                comp.see(oct_composition_defect(&bp, &g1, &g2)?, || {
                    json!({"u": bp.to_vec(), "g1": coeffs(&g1), "g2": coeffs(&g2)})
                });
            }
            let samples = far.samples;
            let witness = far.witness;
            for (name, value) in [
                ("infinitesimal-eps-halving-ratio-min", min_ratio),
                ("infinitesimal-eps-halving-ratio-max", max_ratio),
            ] {
                let mut c = single(name, nn, value, Bound::Between(3.5, 4.5), witness.clone());
                c.samples = samples;
                out.push(c);
            }
            out.push(comp.check("octonionic-composition-defect", nn, Bound::Report));
        }
    }
    Ok(out)
}

/// `dev(eps) / dev(eps/2)` for the projection change under `U + eps δU`.
pub fn eps_halving_ratio(rep: &MatrixRep, u: &[f64], omega: &nalgebra::DMatrix<f64>, eps: f64) -> Result<f64> {
    let delta = infinitesimal_generator(rep, u, omega)?;
    let x0 = project_spinor(rep, u)?;
    let uv = DVector::from_column_slice(u);
    let dev = |e: f64| -> Result<f64> {
        let moved = &uv + &delta * e;
        Ok(project_spinor(rep, moved.as_slice())?.max_abs_diff(&x0))
    };
    Ok(dev(eps)? / dev(0.5 * eps)?)
}

pub fn gauge(n: Option<usize>, trials: usize, seed: u64) -> Result<Vec<Check>> {
    let chart = ChartConfig::default();
    let mut out = Vec::new();
    for dim in dims(n, &Dim::HOPF)? {
        let nn = dim.n();
        let rep = MatrixRep::shared(dim)?;
        let mut rng = sampling::rng(seed);
        let mut anti = Worst::new();
        let mut homo = Worst::new();
        let mut yang = Worst::new();
        for _ in 0..trials {
            let mut xv = sampling::gaussian_vec(&mut rng, nn + 1);
            xv[nn] = xv[nn].abs();
            let x = BasePoint::new(dim, xv.clone())?;
            let a = potential(rep, &x, &chart)?;
            let amax = a.coeffs().iter().fold(0.0f64, |m, v| m.max(v.abs())).max(f64::MIN_POSITIVE);
            anti.see(a.antisymmetry_defect() / amax, || json!({"x": xv}));
            let kappa = 2.5;
            let scaled = BasePoint::new(dim, xv.iter().map(|v| v * kappa).collect())?;
            let b = potential(rep, &scaled, &chart)?;
            let h = a.coeffs().iter().zip(b.coeffs()).map(|(p, q)| (p - kappa * q).abs()).fold(0.0, f64::max) / amax;
            homo.see(h, || json!({"x": xv, "kappa": kappa}));
            if let Ok(ReducedPotential::Yang { identity_deviation, .. }) = reduce_potential(&a) {
                yang.see(identity_deviation / amax, || json!({"x": xv}));
            }
        }
        out.push(anti.check("potential-antisymmetry", nn, Bound::AtMost(0.0)));
        out.push(homo.check("potential-homogeneity", nn, Bound::AtMost(1e-12)));
        if dim == Dim::Four {
            out.push(yang.check("yang-epsilon-identity", nn, Bound::AtMost(1e-12)));
        }
        if dim == Dim::Two {
            out.push(dirac_curl(trials.min(200), seed)?);
        }
    }
    let mut rng = sampling::rng(seed);
    let mut sphere = Worst::new();
    for _ in 0..trials {
        let c = sampling::gaussian_vec(&mut rng, 2);
        let z = Complex64::new(2.0 * c[0], 2.0 * c[1]);
        sphere.see(killing(z).sphere_defect(), || json!({"z": [z.re, z.im]}));
    }
    out.push(sphere.check("killing-sphere-constraint", 2, Bound::AtMost(1e-12)));
    Ok(out)
}

/// `max ||curl A_12| - 1/2|` plus the tangential part, on the unit sphere
/// away from the string.
fn dirac_curl(trials: usize, seed: u64) -> Result<Check> {
    let chart = ChartConfig::default();
    let rep = MatrixRep::shared(Dim::Two)?;
    let field = |p: [f64; 3]| -> Result<[f64; 3]> {
        let a = potential(rep, &BasePoint::new(Dim::Two, p.to_vec())?, &chart)?;
        Ok([a.get(1, 2, 1), a.get(1, 2, 2), a.get(1, 2, 3)])
    };
    let h = 1e-5;
    let mut rng = sampling::rng(seed);
    let mut worst = Worst::new();
    while worst.samples < trials {
        let v = sampling::gaussian_vec(&mut rng, 3);
        let norm = v.iter().map(|c| c * c).sum::<f64>().sqrt();
        let v: Vec<f64> = v.iter().map(|c| c / norm).collect();
        if v[2] < -0.5 {
            continue;
        }
        let mut grad = [[0.0; 3]; 3];
        for j in 0..3 {
            let mut p = [v[0], v[1], v[2]];
            let mut m = p;
            p[j] += h;
            m[j] -= h;
            let (fp, fm) = (field(p)?, field(m)?);
            for i in 0..3 {
                grad[i][j] = (fp[i] - fm[i]) / (2.0 * h);
            }
        }
        let curl = [grad[2][1] - grad[1][2], grad[0][2] - grad[2][0], grad[1][0] - grad[0][1]];
        let radial: f64 = curl.iter().zip(&v).map(|(c, x)| c * x).sum();
        let tangential = (0..3).map(|k| (curl[k] - radial * v[k]).abs()).fold(0.0, f64::max);
        worst.see((radial.abs() - 0.5).abs().max(tangential), || json!({"x": v, "curl": curl}));
    }
    Ok(worst.check("dirac-curl-radial-half", 2, Bound::AtMost(1e-6)))
}

fn random_state(rng: &mut SeededRng, dim: Dim) -> Result<PhaseState> {
    let nn = dim.n();
    let mut x = sampling::gaussian_vec(rng, nn + 1);
    x[nn] = x[nn].abs();
    let xdot = sampling::gaussian_vec(rng, nn + 1);
    let y = sampling::gaussian_vec(rng, nn - 1).iter().map(|v| 0.8 * v).collect();
    let p = sampling::gaussian_vec(rng, nn - 1);
    PhaseState::new(dim, 0.0, x, xdot, y, p)
}

fn random_bundle_velocity(rng: &mut SeededRng, dim: Dim) -> (BundlePoint, BundlePoint) {
    let margins = FlowMargins::default();
    loop {
        let u = sampling::gaussian_bundle_point(rng, dim);
        let ud = sampling::gaussian_bundle_point(rng, dim);
        if margins.admits(&u) {
            return (u, ud);
        }
    }
}

pub fn mechanics(n: Option<usize>, trials: usize, seed: u64) -> Result<Vec<Check>> {
    let params = LagrangianParams::default();
    let mut out = Vec::new();
    for dim in dims(n, &Dim::HOPF)? {
        let nn = dim.n();
        let rep = MatrixRep::shared(dim)?;
        let mut rng = sampling::rng(seed);
        let mut ident = Worst::new();
        let mut decomp = Worst::new();
        let mut leg = Worst::new();
        for _ in 0..trials {
            let st = random_state(&mut rng, dim)?;
            let rep_i = identity_checks(&st, &params)?;
            ident.see(rep_i.max_deviation(), || json!({"state": st.clone(), "report": rep_i.clone()}));
            let (u, ud) = random_bundle_velocity(&mut rng, dim);
            let flat = lagrangian_flat(&u, &ud, &params);
            let bundle = lagrangian_bundle(&u, &ud, &params)?;
            decomp.see((bundle - flat).abs() / flat, || json!({"u": u.to_vec(), "udot": ud.to_vec()}));
            let cs = chart_state(&u, &ud, &params.chart)?;
            let p = legendre(&cs.y, &cs.ydot, &cs.x.x, &cs.xdot, &params)?;
            let mut d = 0.0f64;
            for mu in 0..nn - 1 {
                let mut yp = cs.ydot.clone();
                let mut ym = cs.ydot.clone();
                yp[mu] += FD_STEP;
                ym[mu] -= FD_STEP;
                let fd = (lagrangian_chart(rep, &cs.x, &cs.xdot, &cs.y, &yp, &params)?
                    - lagrangian_chart(rep, &cs.x, &cs.xdot, &cs.y, &ym, &params)?)
                    / (2.0 * FD_STEP);
                d = d.max((fd - p[mu]).abs() / p[mu].abs().max(1.0));
            }
            leg.see(d, || json!({"u": u.to_vec(), "udot": ud.to_vec()}));
        }
        out.push(ident.check("pointwise-identities", nn, Bound::AtMost(1e-9)));
        out.push(decomp.check("lagrangian-decomposition", nn, Bound::AtMost(1e-9)));
        out.push(leg.check("legendre-finite-difference", nn, Bound::AtMost(1e-6)));

        if dim == Dim::Four {
            let mut br = Worst::new();
            for _ in 0..trials.min(100) {
                let y: Vec<f64> = sampling::gaussian_vec(&mut rng, 3).iter().map(|v| 0.8 * v).collect();
                let p = sampling::gaussian_vec(&mut rng, 3);
                let b = bracket_checks(&y, &p)?;
                br.see(b.max_deviation(), || serde_json::to_value(&b).expect("plain data"));
            }
            out.push(br.check("so-4-closure-and-z-bracket", nn, Bound::AtMost(1e-5)));
        }

        let flow = LagrangianParams {
            dt: 1e-3,
            steps: 10_000,
            ..params
        };
        let (u0, ud0) = sample_initial_data(dim, seed, flow.dt, flow.steps, &FlowMargins::default())?;
        let traj = free_pullback_trajectory(&u0, &ud0, &flow)?;
        let report = drift_report(&traj, 1e-6)?;
        let witness = json!({"u0": u0.to_vec(), "udot0": ud0.to_vec(), "dt": flow.dt, "steps": flow.steps});
        let cas = report.group("casimir").expect("always present").max_rel_drift;
        let iso = report.group("I").expect("always present").max_rel_drift;
        out.push(single("free-flow-casimir-drift", nn, cas, Bound::AtMost(1e-6), witness.clone()));
        let bound = if dim == Dim::Eight { Bound::Above(1e-2) } else { Bound::AtMost(1e-6) };
        out.push(single("free-flow-isospin-drift", nn, iso, bound, witness));
    }
    Ok(out)
}

pub fn run_suite(suite: &str, n: Option<usize>, trials: usize, seed: u64) -> Result<SuiteReport> {
    let checks = match suite {
        "algebra" => algebra(n, trials, seed)?,
        "clifford" => clifford(n, trials, seed)?,
        "hopf" => hopf(n, trials, seed)?,
        "gauge" => gauge(n, trials, seed)?,
        "mechanics" => mechanics(n, trials, seed)?,
        other => return Err(crate::error::Error::InvalidParameter(format!("unknown suite {other}"))),
    };
    Ok(SuiteReport {
        suite: suite.to_string(),
        pass: checks.iter().all(|c| c.pass),
        checks,
    })
}
