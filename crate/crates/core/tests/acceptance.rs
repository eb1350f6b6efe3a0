//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Tolerances are fixed here and never read from the library.

use std::process::ExitCode;
use std::time::Instant;

use hopf_core::cli::verify::{self, Check};
use hopf_core::gauge::killing;
use hopf_core::hopf::project;
use hopf_core::mechanics::lagrangian::{energy, lagrangian_bundle, lagrangian_flat};
use hopf_core::mechanics::poisson::z_of;
use hopf_core::mechanics::report::Classification;
use hopf_core::mechanics::*;
use hopf_core::{sampling, Dim};

const SEED: u64 = sampling::DEFAULT_SEED;

struct Line {
    id: &'static str,
    what: &'static str,
    pass: bool,
    detail: String,
}

fn find<'a>(checks: &'a [Check], name: &str, n: usize) -> &'a Check {
    checks
        .iter()
        .find(|c| c.name == name && c.n == n)
        .unwrap_or_else(|| panic!("no check {name} for n = {n}"))
}

fn at_most(checks: &[Check], name: &str, ns: &[usize], tol: f64, detail: &mut Vec<String>) -> bool {
    let mut ok = true;
    for &n in ns {
        let c = find(checks, name, n);
        ok &= c.value <= tol;
        detail.push(format!("{name}[n={n}]={:.3e}/{}", c.value, c.samples));
    }
    ok
}

fn ac1() -> Line {
    let checks = verify::algebra(None, 10_000, SEED).unwrap();
    let mut d = Vec::new();
    let pass = at_most(&checks, "norm-composition", &[1, 2, 4, 8], 1e-12, &mut d);
    Line { id: "AC1", what: "norm composition, 1e4 pairs per n, <= 1e-12", pass, detail: d.join(" ") }
}

fn ac2() -> Line {
    let checks = verify::algebra(None, 1000, SEED).unwrap();
    let mut d = Vec::new();
    let mut pass = at_most(&checks, "associativity", &[1, 2, 4], 1e-12, &mut d);
    let w = find(&checks, "associator-e1-e2-e4", 8);
    pass &= w.value == 0.0;
    d.push(format!("[e1,e2,e4]+2e5={:e}", w.value));
    pass &= at_most(&checks, "alternativity", &[8], 1e-12, &mut d);
    Line { id: "AC2", what: "associativity dichotomy and alternativity", pass, detail: d.join(" ") }
}

fn ac3() -> Line {
    let checks = verify::clifford(None, 100, SEED).unwrap();
    let mut d = Vec::new();
    let mut pass = at_most(&checks, "big-gamma-anticommutator", &[2, 4, 8], 1e-12, &mut d);
    pass &= at_most(&checks, "big-gamma-symmetry", &[2, 4, 8], 1e-12, &mut d);
    let shape = find(&checks, "big-gamma-count-and-size", 8);
    let (count, size) = (&shape.witness["count"], &shape.witness["size"]);
    pass &= count == 9 && size == 16;
    d.push(format!("n=8: {count} matrices of size {size}"));
    Line { id: "AC3", what: "Clifford relations, symmetric Gamma^A", pass, detail: d.join(" ") }
}

fn ac4_5_6() -> [Line; 3] {
    let checks = verify::hopf(None, 1000, SEED).unwrap();
    let mut d4 = Vec::new();
    let mut p4 = true;
    for name in ["radius-identity", "lift-of-projection", "projection-of-lift", "spinor-projection"] {
        p4 &= at_most(&checks, name, &[2, 4, 8], 1e-10, &mut d4);
    }
    let mut d5 = Vec::new();
    let mut p5 = at_most(&checks, "fiber-action-preserves-projection", &[2, 4], 1e-12, &mut d5);
    p5 &= at_most(&checks, "fiber-action-preserves-projection", &[8], 1e-10, &mut d5);
    let naive = find(&checks, "naive-action-counterexample", 8);
    p5 &= naive.value > 1e-3 && naive.witness["first_trial"].is_number();
    d5.push(format!("naive[n=8]={:.3e} at trial {}", naive.value, naive.witness["first_trial"]));
    let lo = find(&checks, "infinitesimal-eps-halving-ratio-min", 8);
    let hi = find(&checks, "infinitesimal-eps-halving-ratio-max", 8);
    let p6 = lo.samples == 100 && (3.5..=4.5).contains(&lo.value) && (3.5..=4.5).contains(&hi.value);
    [
        Line { id: "AC4", what: "Hopf consistency, 1e3 points per n, <= 1e-10", pass: p4, detail: d4.join(" ") },
        Line { id: "AC5", what: "fiber-action dichotomy", pass: p5, detail: d5.join(" ") },
        Line {
            id: "AC6",
            what: "infinitesimal action is O(eps^2), ratio in [3.5, 4.5]",
            pass: p6,
            detail: format!("ratio in [{:.6}, {:.6}] over {} pairs", lo.value, hi.value, lo.samples),
        },
    ]
}

fn random_state(dim: Dim, rng: &mut sampling::SeededRng) -> PhaseState {
    let n = dim.n();
    let mut x = sampling::gaussian_vec(rng, n + 1);
    x[n] = x[n].abs();
    let xdot = sampling::gaussian_vec(rng, n + 1);
    let y: Vec<f64> = sampling::gaussian_vec(rng, n - 1).iter().map(|v| 0.8 * v).collect();
    let p = sampling::gaussian_vec(rng, n - 1);
    PhaseState::new(dim, 0.0, x, xdot, y, p).unwrap()
}

fn ac7() -> Line {
    let params = LagrangianParams::default();
    let margins = FlowMargins::default();
    let mut rng = sampling::rng(SEED);
    let (mut ident, mut decomp, mut kill) = (0.0f64, 0.0f64, 0.0f64);
    let mut ratios = (f64::INFINITY, f64::NEG_INFINITY);
    for dim in Dim::HOPF {
        for _ in 0..1000 {
            let st = random_state(dim, &mut rng);
            let r = identity_checks(&st, &params).unwrap();
            ident = ident.max(r.max_deviation());
            if r.isospin.ratio.is_finite() {
                ratios = (ratios.0.min(r.isospin.ratio), ratios.1.max(r.isospin.ratio));
            }
            if dim == Dim::Four {
                kill = kill.max(killing(z_of(&st.y, &st.p)).sphere_defect());
            }
            let (u, ud) = loop {
                let u = sampling::gaussian_bundle_point(&mut rng, dim);
                let ud = sampling::gaussian_bundle_point(&mut rng, dim);
                if margins.admits(&u) {
                    break (u, ud);
                }
            };
            let flat = lagrangian_flat(&u, &ud, &params);
            decomp = decomp.max((lagrangian_bundle(&u, &ud, &params).unwrap() - flat).abs() / flat);
        }
    }
    let pass = ident <= 1e-9 && decomp <= 1e-9 && kill <= 1e-9;
    Line {
        id: "AC7",
        what: "pointwise identities over 1e3 states per n, <= 1e-9",
        pass,
        detail: format!(
            "identities={ident:.3e} (isospin scale {:.12}..{:.12}) decomposition={decomp:.3e} killing={kill:.3e}",
            ratios.0, ratios.1
        ),
    }
}

fn ac8() -> Line {
    let mut rng = sampling::rng(SEED);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let y: Vec<f64> = sampling::gaussian_vec(&mut rng, 3).iter().map(|v| 0.8 * v).collect();
        let p = sampling::gaussian_vec(&mut rng, 3);
        worst = worst.max(bracket_checks(&y, &p).unwrap().max_deviation());
    }
    Line {
        id: "AC8",
        what: "SO(4) bracket closure and {z, zbar} by finite differences, <= 1e-5",
        pass: worst <= 1e-5,
        detail: format!("max deviation {worst:.3e} over 100 points"),
    }
}

fn headline(dim: Dim, seed: u64) -> ConservationReport {
    let params = LagrangianParams { dt: 1e-3, steps: 10_000, ..Default::default() };
    let (u0, ud) = sample_initial_data(dim, seed, params.dt, params.steps, &FlowMargins::default()).unwrap();
    let traj = free_pullback_trajectory(&u0, &ud, &params).unwrap();
    assert!(traj.truncated.is_none() && traj.samples.len() == 10_001);
    drift_report(&traj, 1e-6).unwrap()
}

fn ac9() -> Line {
    let mut pass = true;
    let mut d = Vec::new();
    for dim in [Dim::Two, Dim::Four] {
        let r = headline(dim, SEED);
        let g = r.group("I").unwrap();
        pass &= g.max_rel_drift <= 1e-6 && g.classification == Classification::Conserved;
        d.push(format!("I[n={}]={:.3e}", dim.n(), g.max_rel_drift));
    }
    let mut broken = 0;
    let mut cas = 0.0f64;
    let mut least = f64::INFINITY;
    for seed in 0..10 {
        let r = headline(Dim::Eight, SEED + seed);
        cas = cas.max(r.group("casimir").unwrap().max_rel_drift);
        let i = r.group("I").unwrap().max_rel_drift;
        least = least.min(i);
        if i > 1e-2 {
            broken += 1;
        }
    }
    pass &= cas <= 1e-6 && broken >= 9;
    d.push(format!("n=8: casimir={cas:.3e}, I drift > 1e-2 for {broken}/10 seeds (min {least:.3e})"));
    Line { id: "AC9", what: "conservation along free flow, t in [0,10], 1e4 samples", pass, detail: d.join(" ") }
}

fn ac10() -> Line {
    let margins = FlowMargins::default();
    let params = LagrangianParams { s: 0.9, dt: 1e-3, steps: 10_000, ..Default::default() };
    let (state, _, _) = reduced_initial_state(Dim::Two, SEED, &params, &margins).unwrap();
    let traj = integrate_reduced(&state, &params).unwrap();
    let r = drift_report(&traj, 1e-6).unwrap();
    let e = r.group("energy").unwrap().max_rel_drift;
    let j = r.observable("J_1_2").unwrap();
    let mut pass = traj.truncated.is_none() && e <= 1e-6 && j.max_rel_drift <= 1e-6 && (j.initial - 0.9).abs() <= 1e-9;
    let e0 = energy(&traj.samples[0].state, &params);

    let free = LagrangianParams { s: 0.0, ..params };
    let (state, u0, ud) = reduced_initial_state(Dim::Two, SEED, &free, &margins).unwrap();
    let traj = integrate_reduced(&state, &free).unwrap();
    let mut dev = 0.0f64;
    for s in &traj.samples {
        let x = project(&u0.advance(&ud, s.state.t));
        dev = dev.max(x.x.iter().zip(&s.state.x).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max));
    }
    pass &= traj.truncated.is_none() && dev <= 1e-5;
    Line {
        id: "AC10",
        what: "reduced n=2 RK4, dt=1e-3, 1e4 steps",
        pass,
        detail: format!(
            "s=0.9: energy {e0:.6} drift={e:.3e} J12 drift={:.3e}; s=0 vs projected free flow={dev:.3e}",
            j.max_rel_drift
        ),
    }
}

fn main() -> ExitCode {
    let start = Instant::now();
    let mut lines = vec![ac1(), ac2(), ac3()];
    lines.extend(ac4_5_6());
    lines.extend([ac7(), ac8(), ac9(), ac10()]);
    for l in &lines {
        println!("{} {:<5} {}: {}", if l.pass { "PASS" } else { "FAIL" }, l.id, l.what, l.detail);
    }
    let failed = lines.iter().filter(|l| !l.pass).count();
    println!("{} of {} criteria passed in {:.1}s", lines.len() - failed, lines.len(), start.elapsed().as_secs_f64());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
