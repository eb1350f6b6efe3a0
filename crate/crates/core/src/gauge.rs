//! Monopole potentials `A_{ab}` induced on the base, their Dirac (n = 2)
//! and Yang (n = 4) reductions, the fiber one-form `D_μ`, and the Killing
//! potentials of the two-sphere.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Serialize, Serializer};

use crate::algebra::Dim;
use crate::clifford::MatrixRep;
use crate::error::{Error, Result};
use crate::hopf::{BasePoint, ChartConfig};

/// `A_{ab,d}` with `a, b ∈ 1..=n` and `d ∈ 1..=n+1`, so that
/// `A_{ab} = A_{ab,d} ẋ_d`. The `d = n+1` slice is identically zero.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialTensor {
    dim: Dim,
    coeffs: Vec<f64>,
}

impl PotentialTensor {
    fn zeros(dim: Dim) -> Self {
        let n = dim.n();
        PotentialTensor {
            dim,
            coeffs: vec![0.0; n * n * (n + 1)],
        }
    }

    fn offset(&self, a: usize, b: usize, d: usize) -> usize {
        let n = self.dim.n();
        assert!((1..=n).contains(&a) && (1..=n).contains(&b) && (1..=n + 1).contains(&d));
        ((a - 1) * n + (b - 1)) * (n + 1) + (d - 1)
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    /// 1-based component `A_{ab,d}`.
    pub fn get(&self, a: usize, b: usize, d: usize) -> f64 {
        self.coeffs[self.offset(a, b, d)]
    }

    /// Row-major `[a][b][d]` flattening.
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Nested `[a][b][d]` table, for serialization.
    pub fn to_nested(&self) -> Vec<Vec<Vec<f64>>> {
        let n = self.dim.n();
        (1..=n)
            .map(|a| {
                (1..=n)
                    .map(|b| (1..=n + 1).map(|d| self.get(a, b, d)).collect())
                    .collect()
            })
            .collect()
    }

    /// `A_{ab} = A_{ab,d} ẋ_d` as an `n × n` matrix.
    pub fn contract(&self, xdot: &[f64]) -> Result<DMatrix<f64>> {
        let n = self.dim.n();
        if xdot.len() != n + 1 {
            return Err(Error::DimensionMismatch {
                expected: n + 1,
                found: xdot.len(),
            });
        }
        Ok(DMatrix::from_fn(n, n, |a, b| {
            let base = (a * n + b) * (n + 1);
            self.coeffs[base..base + n + 1]
                .iter()
                .zip(xdot)
                .map(|(c, v)| c * v)
                .sum()
        }))
    }

    /// `max |A_{ab,d} + A_{ba,d}|`.
    pub fn antisymmetry_defect(&self) -> f64 {
        let n = self.dim.n();
        let mut worst = 0.0f64;
        for a in 1..=n {
            for b in 1..=n {
                for d in 1..=n + 1 {
                    worst = worst.max((self.get(a, b, d) + self.get(b, a, d)).abs());
                }
            }
        }
        worst
    }
}

impl Serialize for PotentialTensor {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_nested().serialize(s)
    }
}

/// `A_{ab,d} = x_c (Σ^{cd})_{ab} / (2r(r + x^{n+1}))`, with `c, d` over the
/// algebra indices `1..=n`.
pub fn potential(rep: &MatrixRep, x: &BasePoint, chart: &ChartConfig) -> Result<PotentialTensor> {
    let dim = rep.dim();
    if x.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim.n(),
            found: x.dim().n(),
        });
    }
    let n = dim.n();
    if x.r <= 0.0 {
        return Err(Error::ChartSingularity(crate::error::Singularity::Origin));
    }
    if x.r + x.last() <= chart.base_eps * x.r {
        return Err(Error::ChartSingularity(
            crate::error::Singularity::BaseSouthPole,
        ));
    }
    let denom = 2.0 * x.r * (x.r + x.last());
    let mut out = PotentialTensor::zeros(dim);
    for d in 1..=n {
        let mut slice = DMatrix::<f64>::zeros(n, n);
        for c in 1..=n {
            let xc = x.x[c - 1];
            if xc != 0.0 {
                slice += rep.sigma(c, d) * (xc / denom);
            }
        }
        for a in 1..=n {
            for b in 1..=n {
                let k = out.offset(a, b, d);
                out.coeffs[k] = slice[(a - 1, b - 1)];
            }
        }
    }
    Ok(out)
}

/// Reduced components of the potential.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ReducedPotential {
    /// `A_{12,d}`, `d ∈ 1..=3`.
    Dirac { a: Vec<f64> },
    /// `Ã_{λ,d} = ½ ε_{λμν} A_{μν,d}`, three isospin rows of five base
    /// components, together with `max |ε_{λμν}A_{μν,d} - 2A_{λ4,d}|`.
    Yang {
        a: Vec<Vec<f64>>,
        identity_deviation: f64,
    },
}

pub fn reduce_potential(pot: &PotentialTensor) -> Result<ReducedPotential> {
    match pot.dim() {
        Dim::Two => Ok(ReducedPotential::Dirac {
            a: (1..=3).map(|d| pot.get(1, 2, d)).collect(),
        }),
        Dim::Four => {
            let table = crate::algebra::StructureTable::shared(Dim::Four);
            let mut rows = vec![vec![0.0; 5]; 3];
            let mut deviation = 0.0f64;
            for lambda in 1..=3 {
                for d in 1..=5 {
                    let mut eps_a = 0.0;
                    for mu in 1..=3 {
                        for nu in 1..=3 {
                            eps_a += table.get(lambda, mu, nu) * pot.get(mu, nu, d);
                        }
                    }
                    rows[lambda - 1][d - 1] = 0.5 * eps_a;
                    deviation = deviation.max((eps_a - 2.0 * pot.get(lambda, 4, d)).abs());
                }
            }
            Ok(ReducedPotential::Yang {
                a: rows,
                identity_deviation: deviation,
            })
        }
        dim => Err(Error::UnsupportedDimension(dim.n(), "2, 4")),
    }
}

/// `D_μ = ((1-y²)A_{nμ} + 2y_ν A_{νμ} + 2y_ν A_{nν} y_μ) / (1+y²)²` for an
/// already contracted `A_{ab}`. With this normalization
/// `v_a A_{ab} ∂v_b/∂y_μ = 2 D_μ` for the stereographic `v(y)`.
pub fn d_form(y: &[f64], a: &DMatrix<f64>) -> Result<Vec<f64>> {
    let m = y.len();
    if a.shape() != (m + 1, m + 1) {
        return Err(Error::DimensionMismatch {
            expected: m + 1,
            found: a.nrows(),
        });
    }
    let nn = m;
    let y2: f64 = y.iter().map(|v| v * v).sum();
    let w = (1.0 + y2) * (1.0 + y2);
    let ya_n: f64 = (0..m).map(|nu| y[nu] * a[(nn, nu)]).sum();
    Ok((0..m)
        .map(|mu| {
            let ya: f64 = (0..m).map(|nu| y[nu] * a[(nu, mu)]).sum();
            ((1.0 - y2) * a[(nn, mu)] + 2.0 * ya + 2.0 * ya_n * y[mu]) / w
        })
        .collect())
}

/// `h_± = z^{(±)}/(1+zz̄)`, `h_3 = (1-zz̄)/(1+zz̄)` with `z^{(+)} = z`,
/// `z^{(-)} = z̄`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KillingTriple {
    pub z: Complex64,
    pub h_plus: Complex64,
    pub h_minus: Complex64,
    pub h3: f64,
}

impl KillingTriple {
    /// `h_3² + 4 h_+ h_- - 1`; real for any `z`.
    pub fn sphere_defect(&self) -> f64 {
        (self.h3 * self.h3 + 4.0 * (self.h_plus * self.h_minus).re - 1.0).abs()
    }
}

impl Serialize for KillingTriple {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            z: [f64; 2],
            h_plus: [f64; 2],
            h_minus: [f64; 2],
            h3: f64,
        }
        Repr {
            z: [self.z.re, self.z.im],
            h_plus: [self.h_plus.re, self.h_plus.im],
            h_minus: [self.h_minus.re, self.h_minus.im],
            h3: self.h3,
        }
        .serialize(s)
    }
}

pub fn killing(z: Complex64) -> KillingTriple {
    let zz = z.norm_sqr();
    let k = 1.0 / (1.0 + zz);
    KillingTriple {
        z,
        h_plus: z * k,
        h_minus: z.conj() * k,
        h3: (1.0 - zz) * k,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling;

    fn rep(n: usize) -> &'static MatrixRep {
        MatrixRep::shared(Dim::new(n).unwrap()).unwrap()
    }

    fn base(n: usize, x: Vec<f64>) -> BasePoint {
        BasePoint::new(Dim::new(n).unwrap(), x).unwrap()
    }

    #[test]
    fn north_pole_potential_vanishes() {
        for n in [2, 4, 8] {
            let mut x = vec![0.0; n + 1];
            x[n] = 2.5;
            let a = potential(rep(n), &base(n, x), &ChartConfig::default()).unwrap();
            assert!(a.coeffs().iter().all(|&v| v == 0.0));
        }
    }

    #[test]
    fn south_pole_is_rejected() {
        let x = base(2, vec![0.0, 0.0, -1.0]);
        assert!(matches!(
            potential(rep(2), &x, &ChartConfig::default()),
            Err(Error::ChartSingularity(_))
        ));
    }

    #[test]
    fn antisymmetric_and_homogeneous() {
        let mut rng = sampling::rng(21);
        for n in [2, 4, 8] {
            for _ in 0..20 {
                let xv = sampling::gaussian_vec(&mut rng, n + 1);
                let a = potential(rep(n), &base(n, xv.clone()), &ChartConfig::default()).unwrap();
                assert_eq!(a.antisymmetry_defect(), 0.0);
                assert!(a.to_nested().iter().flatten().all(|row| row[n] == 0.0));
                let kappa = 3.7;
                let scaled: Vec<f64> = xv.iter().map(|v| v * kappa).collect();
                let b = potential(rep(n), &base(n, scaled), &ChartConfig::default()).unwrap();
                for (p, q) in a.coeffs().iter().zip(b.coeffs()) {
                    assert!((p / kappa - q).abs() <= 1e-14 * (1.0 + p.abs()));
                }
            }
        }
    }

    #[test]
    fn contract_matches_components() {
        let x = base(4, vec![0.3, -0.2, 0.5, 0.1, 0.7]);
        let a = potential(rep(4), &x, &ChartConfig::default()).unwrap();
        let xdot = [0.0, 0.0, 1.0, 0.0, 5.0];
        let m = a.contract(&xdot).unwrap();
        for i in 1..=4 {
            for j in 1..=4 {
                assert_eq!(m[(i - 1, j - 1)], a.get(i, j, 3));
            }
        }
        assert!(a.contract(&[0.0; 4]).is_err());
    }

    fn dirac(x: [f64; 3]) -> [f64; 3] {
        let a = potential(rep(2), &base(2, x.to_vec()), &ChartConfig::default()).unwrap();
        [a.get(1, 2, 1), a.get(1, 2, 2), a.get(1, 2, 3)]
    }

    #[test]
    fn dirac_curl_is_radial_with_constant_magnitude() {
        let h = 1e-5;
        let mut rng = sampling::rng(4);
        for _ in 0..50 {
            let mut v = sampling::gaussian_vec(&mut rng, 3);
            let norm = v.iter().map(|c| c * c).sum::<f64>().sqrt();
            v.iter_mut().for_each(|c| *c /= norm);
            if v[2] < -0.5 {
                continue;
            }
            let grad = |i: usize, j: usize| {
                let mut p = [v[0], v[1], v[2]];
                let mut m = p;
                p[j] += h;
                m[j] -= h;
                (dirac(p)[i] - dirac(m)[i]) / (2.0 * h)
            };
            let curl = [
                grad(2, 1) - grad(1, 2),
                grad(0, 2) - grad(2, 0),
                grad(1, 0) - grad(0, 1),
            ];
            let radial: f64 = curl.iter().zip(&v).map(|(c, x)| c * x).sum();
            assert!((radial.abs() - 0.5).abs() <= 1e-6, "radial {radial}");
            for k in 0..3 {
                assert!((curl[k] - radial * v[k]).abs() <= 1e-6);
            }
        }
    }

    #[test]
    fn yang_identity_and_shapes() {
        let mut rng = sampling::rng(8);
        for _ in 0..50 {
            let x = base(4, sampling::gaussian_vec(&mut rng, 5));
            let a = potential(rep(4), &x, &ChartConfig::default()).unwrap();
            match reduce_potential(&a).unwrap() {
                ReducedPotential::Yang {
                    a,
                    identity_deviation,
                } => {
                    assert_eq!(a.len(), 3);
                    assert!(a.iter().all(|r| r.len() == 5));
                    assert!(identity_deviation <= 1e-12);
                }
                other => panic!("{other:?}"),
            }
        }
        let x2 = base(2, vec![0.1, 0.2, 0.3]);
        let a2 = potential(rep(2), &x2, &ChartConfig::default()).unwrap();
        assert!(matches!(reduce_potential(&a2).unwrap(), ReducedPotential::Dirac { a } if a.len() == 3));
        let x8 = base(8, vec![0.1; 9]);
        let a8 = potential(rep(8), &x8, &ChartConfig::default()).unwrap();
        assert!(matches!(reduce_potential(&a8), Err(Error::UnsupportedDimension(8, _))));
    }

    #[test]
    fn d_form_special_values() {
        let mut rng = sampling::rng(9);
        let a = sampling::antisymmetric(&mut rng, 4);
        let d = d_form(&[0.0; 3], &a).unwrap();
        for mu in 0..3 {
            assert_eq!(d[mu], a[(3, mu)]);
        }
        let d = d_form(&[0.3, -1.0, 2.0], &DMatrix::zeros(4, 4)).unwrap();
        assert!(d.iter().all(|&v| v == 0.0));
        assert!(d_form(&[0.0; 2], &a).is_err());
    }

    #[test]
    fn d_form_is_the_pulled_back_coupling() {
        // v_a A_{ab} ∂v_b/∂y_μ by finite differences of the chart
        let mut rng = sampling::rng(10);
        for n in [2usize, 4, 8] {
            let a = sampling::antisymmetric(&mut rng, n);
            let y: Vec<f64> = sampling::gaussian_vec(&mut rng, n - 1).iter().map(|v| 0.6 * v).collect();
            let d = d_form(&y, &a).unwrap();
            let v = crate::hopf::v_from_y(&y);
            for mu in 0..n - 1 {
                let h = 1e-6;
                let mut yp = y.clone();
                let mut ym = y.clone();
                yp[mu] += h;
                ym[mu] -= h;
                let (vp, vm) = (crate::hopf::v_from_y(&yp), crate::hopf::v_from_y(&ym));
                let mut s = 0.0;
                for i in 0..n {
                    for j in 0..n {
                        s += v[i] * a[(i, j)] * (vp[j] - vm[j]) / (2.0 * h);
                    }
                }
                assert!((s - 2.0 * d[mu]).abs() <= 1e-8, "n={n} mu={mu}");
            }
        }
    }

    #[test]
    fn killing_examples() {
        let k = killing(Complex64::new(0.0, 0.0));
        assert_eq!((k.h_plus, k.h_minus, k.h3), (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), 1.0));
        let k = killing(Complex64::new(1.0, 0.0));
        assert_eq!(k.h_plus, Complex64::new(0.5, 0.0));
        assert_eq!(k.h_minus, Complex64::new(0.5, 0.0));
        assert_eq!(k.h3, 0.0);
        let mut rng = sampling::rng(12);
        for _ in 0..1000 {
            let c = sampling::gaussian_vec(&mut rng, 2);
            let k = killing(Complex64::new(3.0 * c[0], 3.0 * c[1]));
            assert!(k.sphere_defect() <= 1e-12);
            assert_eq!(k.h_minus, k.h_plus.conj());
        }
    }
}
