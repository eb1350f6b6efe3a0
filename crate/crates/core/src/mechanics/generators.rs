//! Rotation generators on the fiber phase space and the pointwise identities
//! relating them to the Lagrangian.

use nalgebra::DMatrix;
use serde::{Serialize, Serializer};

use crate::algebra::{Dim, StructureTable};
use crate::clifford::MatrixRep;
use crate::error::{Error, Result};
use crate::gauge::{potential, reduce_potential, ReducedPotential};
use crate::hopf::BasePoint;

use super::lagrangian::{d_at, energy, section_velocity};
use super::{dot, norm_sqr, rel_dev, LagrangianParams, PhaseState};

fn serialize_matrix<S: Serializer>(m: &DMatrix<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    let rows: Vec<Vec<f64>> = m.row_iter().map(|r| r.iter().copied().collect()).collect();
    rows.serialize(s)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ObservableSet {
    /// `J_{ab}`, `n × n`, index `n` the real direction.
    #[serde(serialize_with = "serialize_matrix")]
    pub j: DMatrix<f64>,
    pub i: Vec<f64>,
    /// `I_μ I_μ`.
    pub casimir: f64,
    /// Only for n = 4.
    pub p: Option<[f64; 3]>,
    /// Only when the base velocity is known.
    pub energy: Option<f64>,
}

impl ObservableSet {
    /// `J_{ab}` for `a < b`, row-major.
    pub fn j_upper(&self) -> Vec<f64> {
        let n = self.j.nrows();
        let mut out = Vec::with_capacity(n * (n - 1) / 2);
        for a in 0..n {
            for b in a + 1..n {
                out.push(self.j[(a, b)]);
            }
        }
        out
    }

    /// `Σ_{ab} J_{ab} J_{ab}`.
    pub fn j_square(&self) -> f64 {
        self.j.iter().map(|v| v * v).sum()
    }

    /// Values in the fixed column order: J upper triangle, I, casimir, P, energy.
    pub fn to_columns(&self) -> Vec<f64> {
        let mut v = self.j_upper();
        v.extend_from_slice(&self.i);
        v.push(self.casimir);
        if let Some(p) = self.p {
            v.extend_from_slice(&p);
        }
        if let Some(e) = self.energy {
            v.push(e);
        }
        v
    }

    pub fn column_names(dim: Dim, with_energy: bool) -> Vec<String> {
        let n = dim.n();
        let mut names = Vec::new();
        for a in 1..=n {
            for b in a + 1..=n {
                names.push(format!("J_{a}_{b}"));
            }
        }
        names.extend((1..n).map(|mu| format!("I_{mu}")));
        names.push("casimir".into());
        if dim == Dim::Four {
            names.extend((1..=3).map(|l| format!("P_{l}")));
        }
        if with_energy {
            names.push("energy".into());
        }
        names
    }
}

/// `S_{μν} = (2y_μ y_ν + (1-y²)δ_{μν} - 2y_λ C_{μνλ}) / (1+y²)`.
///
/// The sign of the structure-constant term makes `I_μ` generate left
/// multiplication `g → e_μ g` of the fiber element.
pub fn s_matrix(dim: Dim, y: &[f64]) -> DMatrix<f64> {
    let m = dim.imag();
    let table = StructureTable::shared(dim);
    let y2 = norm_sqr(y);
    DMatrix::from_fn(m, m, |mu, nu| {
        let mut c = 0.0;
        for l in 0..m {
            c += y[l] * table.c0(mu, nu, l);
        }
        let delta = if mu == nu { 1.0 - y2 } else { 0.0 };
        (2.0 * y[mu] * y[nu] + delta - 2.0 * c) / (1.0 + y2)
    })
}

/// `J_{μν} = y_ν p_μ - y_μ p_ν`, `J_{μn} = -J_{nμ} = (1-y²)p_μ/2 + (y·p) y_μ`.
pub fn j_matrix(y: &[f64], p: &[f64]) -> DMatrix<f64> {
    let m = y.len();
    let y2 = norm_sqr(y);
    let yp = dot(y, p);
    let mut j = DMatrix::zeros(m + 1, m + 1);
    for a in 0..m {
        for b in 0..m {
            j[(a, b)] = y[b] * p[a] - y[a] * p[b];
        }
        let v = 0.5 * (1.0 - y2) * p[a] + yp * y[a];
        j[(a, m)] = v;
        j[(m, a)] = -v;
    }
    j
}

/// `I_μ = (1+y²) S_{μν} p_ν / 4`.
pub fn isospin(dim: Dim, y: &[f64], p: &[f64]) -> Vec<f64> {
    let s = s_matrix(dim, y);
    let k = 0.25 * (1.0 + norm_sqr(y));
    (0..dim.imag())
        .map(|mu| k * (0..dim.imag()).map(|nu| s[(mu, nu)] * p[nu]).sum::<f64>())
        .collect()
}

fn eps_contract(j: &DMatrix<f64>, lambda: usize) -> f64 {
    let table = StructureTable::shared(Dim::Four);
    let mut s = 0.0;
    for mu in 0..3 {
        for nu in 0..3 {
            s += table.c0(lambda, mu, nu) * j[(mu, nu)];
        }
    }
    s
}

/// `P_λ = (J_{nλ} - ½ ε_{λμν} J_{μν}) / 2` (n = 4).
pub fn p_vector(j: &DMatrix<f64>) -> [f64; 3] {
    let mut out = [0.0; 3];
    for (l, o) in out.iter_mut().enumerate() {
        *o = 0.5 * (j[(3, l)] - 0.5 * eps_contract(j, l));
    }
    out
}

/// `(-J_{nλ} - ½ ε_{λμν} J_{μν}) / 2` (n = 4); equals `I_λ`.
pub fn isospin_from_j(j: &DMatrix<f64>) -> [f64; 3] {
    let mut out = [0.0; 3];
    for (l, o) in out.iter_mut().enumerate() {
        *o = 0.5 * (-j[(3, l)] - 0.5 * eps_contract(j, l));
    }
    out
}

/// `S`, `I`, `J` and, for n = 4, `P`. The energy is left empty.
pub fn generators(y: &[f64], p: &[f64], n: usize) -> Result<ObservableSet> {
    let dim = Dim::hopf(n)?;
    if y.len() != n - 1 || p.len() != n - 1 {
        return Err(Error::DimensionMismatch {
            expected: n - 1,
            found: if y.len() != n - 1 { y.len() } else { p.len() },
        });
    }
    let i = isospin(dim, y, p);
    let j = j_matrix(y, p);
    let p_vec = (dim == Dim::Four).then(|| p_vector(&j));
    Ok(ObservableSet {
        casimir: norm_sqr(&i),
        i,
        j,
        p: p_vec,
        energy: None,
    })
}

/// Generators plus the energy of the state.
pub fn observables(state: &PhaseState, params: &LagrangianParams) -> Result<ObservableSet> {
    let mut obs = generators(&state.y, &state.p, state.dim.n())?;
    obs.energy = Some(energy(state, params));
    Ok(obs)
}

/// Both sides of one scalar identity, the ratio between them, and the
/// relative deviation from the expected constant ratio.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScaledIdentity {
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs / lhs`; `NaN` when both vanish.
    pub ratio: f64,
    pub expected_ratio: f64,
    /// `|rhs - expected_ratio · lhs| / max(|rhs|, |expected_ratio · lhs|)`.
    pub deviation: f64,
}

impl ScaledIdentity {
    fn new(lhs: f64, rhs: f64, expected_ratio: f64) -> Self {
        ScaledIdentity {
            lhs,
            rhs,
            ratio: if lhs == 0.0 && rhs == 0.0 { f64::NAN } else { rhs / lhs },
            expected_ratio,
            deviation: rel_dev(expected_ratio * lhs, rhs),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityReport {
    /// `max |S S^T - 1|`.
    pub s_orthogonality: f64,
    /// `I·I/(2gr)` against `(1+y²)² p² / (16rg)`. The two differ by the
    /// constant factor 2 for every state.
    pub isospin: ScaledIdentity,
    /// `ṙ̄_α ṙ_α - r D² (1+y²)²` against `ẋ²/(4r)`.
    pub kinetic: ScaledIdentity,
    /// `I·I` against `Σ J_{ab} J_{ab}`; constant factor 8.
    pub casimir: ScaledIdentity,
    /// Exact isospin term `-(1+y²)²p²/(8rg)` against `-¼ I·I/(2gr)`:
    /// the exact term is 16 times larger.
    pub isospin_term: ScaledIdentity,
    /// Exact coupling `(1+y²)² p·D / 2` against `-½ J_{ab} A_{ab}`.
    pub coupling: ScaledIdentity,
    /// n = 4: `max |I_λ - (-J_{nλ} - ½εJ)/2|`.
    pub isospin_j_form: Option<f64>,
    /// n = 4: `|I·I - P·P|`.
    pub p_square: Option<f64>,
    /// n = 4: `max |ε_{λμν}A_{μν,d} - 2A_{λ4,d}|`.
    pub yang_identity: Option<f64>,
}

impl IdentityReport {
    /// Largest deviation over all checks that must hold pointwise.
    pub fn max_deviation(&self) -> f64 {
        let mut worst = self
            .s_orthogonality
            .max(self.isospin.deviation)
            .max(self.kinetic.deviation)
            .max(self.casimir.deviation)
            .max(self.isospin_term.deviation)
            .max(self.coupling.deviation);
        for v in [self.isospin_j_form, self.p_square, self.yang_identity].into_iter().flatten() {
            worst = worst.max(v);
        }
        worst
    }
}

/// Evaluates the pointwise identities at a phase state.
pub fn identity_checks(state: &PhaseState, params: &LagrangianParams) -> Result<IdentityReport> {
    let dim = state.dim;
    let n = dim.n();
    let rep = MatrixRep::shared(dim)?;
    let xb = BasePoint::new(dim, state.x.clone())?;
    let r = xb.r;
    let g = params.g.at(r);
    let y2 = norm_sqr(&state.y);
    let w = (1.0 + y2) * (1.0 + y2);
    let p2 = norm_sqr(&state.p);

    let s = s_matrix(dim, &state.y);
    let s_orth = (&s * s.transpose() - DMatrix::identity(n - 1, n - 1)).amax();

    let obs = generators(&state.y, &state.p, n)?;
    let ii = obs.casimir;

    let sv = section_velocity(&xb, &state.xdot, &params.chart)?;
    let d = d_at(rep, &xb, &state.xdot, &state.y, &params.chart)?;
    let kin_lhs = sv.speed_sqr() - r * norm_sqr(&d) * w;
    let kin_rhs = norm_sqr(&state.xdot) / (4.0 * r);

    let pot = potential(rep, &xb, &params.chart)?;
    let a = pot.contract(&state.xdot)?;
    let ja: f64 = obs.j.iter().zip(a.iter()).map(|(j, a)| j * a).sum();
    let exact_coupling = 0.5 * w * dot(&state.p, &d);

    let (isospin_j_form, p_square, yang_identity) = if dim == Dim::Four {
        let ij = isospin_from_j(&obs.j);
        let dev = ij.iter().zip(&obs.i).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        let pp: f64 = obs.p.map_or(0.0, |p| p.iter().map(|v| v * v).sum());
        let yang = match reduce_potential(&pot)? {
            ReducedPotential::Yang { identity_deviation, .. } => identity_deviation,
            ReducedPotential::Dirac { .. } => unreachable!("n = 4"),
        };
        (Some(dev), Some((ii - pp).abs()), Some(yang))
    } else {
        (None, None, None)
    };

    Ok(IdentityReport {
        s_orthogonality: s_orth,
        isospin: ScaledIdentity::new(ii / (2.0 * g * r), w * p2 / (16.0 * r * g), 2.0),
        kinetic: ScaledIdentity::new(kin_lhs, kin_rhs, 1.0),
        casimir: ScaledIdentity::new(ii, obs.j_square(), 8.0),
        isospin_term: ScaledIdentity::new(-0.25 * ii / (2.0 * g * r), -w * p2 / (8.0 * r * g), 16.0),
        coupling: ScaledIdentity::new(-0.5 * ja, exact_coupling, 1.0),
        isospin_j_form,
        p_square,
        yang_identity,
    })
}
