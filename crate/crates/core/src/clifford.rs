//! Matrix families built from the structure constants: `λ^μ`, `γ^c`, the
//! `2n × 2n` Euclidean gamma matrices `Γ^A`, and the rotation generators
//! `Σ^{cd}`.
//!
//! All anticommutators carry the factor 2 forced by `(λ^μ)² = -1`:
//! `{Γ^A, Γ^B} = 2δ^{AB}` and `{γ^μ, γ^ν} = -2δ^{μν}`.

use std::sync::OnceLock;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::algebra::{AlgebraElement, Dim, StructureTable};
use crate::error::{Error, Result};

fn kd(a: usize, b: usize) -> f64 {
    if a == b {
        1.0
    } else {
        0.0
    }
}

#[derive(Debug, Clone)]
pub struct MatrixRep {
    dim: Dim,
    lambda: Vec<DMatrix<f64>>,
    gamma: Vec<DMatrix<f64>>,
    big_gamma: Vec<DMatrix<f64>>,
    /// Row-major `n × n` grid, entry `c * n + d` holds `Σ^{c+1, d+1}`.
    sigma: Vec<DMatrix<f64>>,
}

impl MatrixRep {
    /// Shared immutable representation for `dim` (n = 2, 4, 8).
    pub fn shared(dim: Dim) -> Result<&'static MatrixRep> {
        static REPS: [OnceLock<MatrixRep>; 3] = [OnceLock::new(), OnceLock::new(), OnceLock::new()];
        let slot = match dim {
            Dim::One => return Err(Error::UnsupportedDimension(1, "2, 4, 8")),
            Dim::Two => 0,
            Dim::Four => 1,
            Dim::Eight => 2,
        };
        Ok(REPS[slot].get_or_init(|| build(dim)))
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    pub fn n(&self) -> usize {
        self.dim.n()
    }

    /// `λ^μ`, `μ` in `1..n`.
    pub fn lambda(&self, mu: usize) -> &DMatrix<f64> {
        &self.lambda[mu - 1]
    }

    /// `γ^c`, `c` in `1..=n`.
    pub fn gamma(&self, c: usize) -> &DMatrix<f64> {
        &self.gamma[c - 1]
    }

    /// `Γ^A`, `A` in `1..=n+1`.
    pub fn big_gamma(&self, a: usize) -> &DMatrix<f64> {
        &self.big_gamma[a - 1]
    }

    pub fn big_gammas(&self) -> &[DMatrix<f64>] {
        &self.big_gamma
    }

    /// `Σ^{cd}`, `c, d` in `1..=n`.
    pub fn sigma(&self, c: usize, d: usize) -> &DMatrix<f64> {
        &self.sigma[(c - 1) * self.n() + (d - 1)]
    }

    pub fn table(&self) -> &'static StructureTable {
        StructureTable::shared(self.dim)
    }
}

fn build(dim: Dim) -> MatrixRep {
    let n = dim.n();
    let t = StructureTable::shared(dim);

    let lambda: Vec<_> = (1..n)
        .map(|mu| {
            DMatrix::from_fn(n, n, |i, j| {
                let (a, b) = (i + 1, j + 1);
                -kd(a, n) * kd(mu, b) + kd(mu, a) * kd(b, n) + t.get(mu, a, b)
            })
        })
        .collect();

    let gamma: Vec<_> = (1..=n)
        .map(|c| {
            DMatrix::from_fn(n, n, |i, j| {
                let (a, b) = (i + 1, j + 1);
                -kd(a, n) * kd(c, b) + kd(c, a) * kd(b, n) + kd(c, n) * kd(a, b) - t.get(c, a, b)
            })
        })
        .collect();

    let eye = DMatrix::<f64>::identity(n, n);
    let zero = DMatrix::<f64>::zeros(n, n);
    let block = |tl: &DMatrix<f64>, tr: &DMatrix<f64>, bl: &DMatrix<f64>, br: &DMatrix<f64>| {
        let mut m = DMatrix::zeros(2 * n, 2 * n);
        m.view_mut((0, 0), (n, n)).copy_from(tl);
        m.view_mut((0, n), (n, n)).copy_from(tr);
        m.view_mut((n, 0), (n, n)).copy_from(bl);
        m.view_mut((n, n), (n, n)).copy_from(br);
        m
    };
    let mut big_gamma: Vec<_> = lambda
        .iter()
        .map(|l| block(&zero, l, &(-l), &zero))
        .collect();
    big_gamma.push(block(&zero, &eye, &eye, &zero));
    big_gamma.push(block(&(-&eye), &zero, &zero, &eye));

    let mut sigma = Vec::with_capacity(n * n);
    for c in 1..=n {
        for d in 1..=n {
            let m = if c < n && d < n {
                let (lc, ld) = (&lambda[c - 1], &lambda[d - 1]);
                (lc * ld - ld * lc) * 0.5
            } else if c < n && d == n {
                lambda[c - 1].clone()
            } else if c == n && d < n {
                -&lambda[d - 1]
            } else {
                zero.clone()
            };
            sigma.push(m);
        }
    }

    MatrixRep {
        dim,
        lambda,
        gamma,
        big_gamma,
        sigma,
    }
}

/// Build every matrix family for `n` in {2, 4, 8}.
pub fn build_rep(n: usize) -> Result<MatrixRep> {
    Ok(build(Dim::hopf(n)?))
}

/// Maximum deviations of the defining relations, one field per relation.
#[derive(Debug, Clone, Serialize)]
pub struct CliffordReport {
    pub n: usize,
    /// `max ‖{Γ^A,Γ^B} - 2δ^{AB}‖`
    pub big_gamma_anticommutator: f64,
    /// `max ‖Γ^A - (Γ^A)^T‖`
    pub big_gamma_symmetry: f64,
    /// `max ‖{λ^μ,λ^ν} + 2δ^{μν}‖`
    pub lambda_anticommutator: f64,
    pub lambda_antisymmetry: f64,
    /// `max ‖{γ^μ,γ^ν} + 2δ^{μν}‖`, `μ,ν < n`
    pub gamma_anticommutator: f64,
    pub gamma_antisymmetry: f64,
    /// `‖γ^n - 1‖`
    pub gamma_real_unit: f64,
    pub sigma_antisymmetry: f64,
    /// `max ‖Σ^{μn} - λ^μ‖`
    pub sigma_mu_n_lambda: f64,
    /// `max |x_c γ^c_{ab} y_b - (xy)_a|` over all basis pairs.
    pub gamma_multiply: f64,
    pub matrix_count: usize,
    pub matrix_size: usize,
}

impl CliffordReport {
    pub fn max_deviation(&self) -> f64 {
        [
            self.big_gamma_anticommutator,
            self.big_gamma_symmetry,
            self.lambda_anticommutator,
            self.lambda_antisymmetry,
            self.gamma_anticommutator,
            self.gamma_antisymmetry,
            self.gamma_real_unit,
            self.sigma_antisymmetry,
            self.sigma_mu_n_lambda,
            self.gamma_multiply,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0, |acc, v| acc.max(v.abs()))
}

fn anticommutator_dev(family: &[DMatrix<f64>], diag: f64) -> f64 {
    let mut dev = 0.0f64;
    for (i, a) in family.iter().enumerate() {
        for (j, b) in family.iter().enumerate() {
            let mut m = a * b + b * a;
            if i == j {
                for k in 0..m.nrows() {
                    m[(k, k)] -= diag;
                }
            }
            dev = dev.max(max_abs(&m));
        }
    }
    dev
}

pub fn clifford_check(rep: &MatrixRep) -> CliffordReport {
    let n = rep.n();
    let big_gamma_anticommutator = anticommutator_dev(&rep.big_gamma, 2.0);
    let big_gamma_symmetry = rep
        .big_gamma
        .iter()
        .map(|g| max_abs(&(g - g.transpose())))
        .fold(0.0, f64::max);
    let lambda_anticommutator = anticommutator_dev(&rep.lambda, -2.0);
    let lambda_antisymmetry = rep
        .lambda
        .iter()
        .map(|l| max_abs(&(l + l.transpose())))
        .fold(0.0, f64::max);
    let gamma_anticommutator = anticommutator_dev(&rep.gamma[..n - 1], -2.0);
    let gamma_antisymmetry = rep.gamma[..n - 1]
        .iter()
        .map(|g| max_abs(&(g + g.transpose())))
        .fold(0.0, f64::max);
    let gamma_real_unit = max_abs(&(&rep.gamma[n - 1] - DMatrix::identity(n, n)));
    let mut sigma_antisymmetry = 0.0f64;
    for c in 1..=n {
        for d in 1..=n {
            sigma_antisymmetry = sigma_antisymmetry.max(max_abs(&(rep.sigma(c, d) + rep.sigma(d, c))));
        }
    }
    let sigma_mu_n_lambda = (1..n)
        .map(|mu| max_abs(&(rep.sigma(mu, n) - rep.lambda(mu))))
        .fold(0.0, f64::max);

    let mut gamma_multiply = 0.0f64;
    let basis: Vec<AlgebraElement> = (0..n)
        .map(|i| {
            let mut c = vec![0.0; n];
            c[i] = 1.0;
            AlgebraElement::from_coeffs(rep.dim, &c).unwrap()
        })
        .collect();
    for x in &basis {
        for y in &basis {
            let via_gamma = gamma_multiply_check(rep, x, y).unwrap();
            gamma_multiply = gamma_multiply.max((via_gamma - *x * *y).norm());
        }
    }

    CliffordReport {
        n,
        big_gamma_anticommutator,
        big_gamma_symmetry,
        lambda_anticommutator,
        lambda_antisymmetry,
        gamma_anticommutator,
        gamma_antisymmetry,
        gamma_real_unit,
        sigma_antisymmetry,
        sigma_mu_n_lambda,
        gamma_multiply,
        matrix_count: rep.big_gamma.len(),
        matrix_size: 2 * n,
    }
}

/// The column product `(xy)_a = x_c (γ^c)_{ab} y_b`.
pub fn gamma_multiply_check(
    rep: &MatrixRep,
    x: &AlgebraElement,
    y: &AlgebraElement,
) -> Result<AlgebraElement> {
    for el in [x, y] {
        if el.dim() != rep.dim {
            return Err(Error::DimensionMismatch {
                expected: rep.n(),
                found: el.dim().n(),
            });
        }
    }
    let n = rep.n();
    let mut out = vec![0.0; n];
    for (c, xc) in x.coeff().iter().enumerate() {
        if *xc == 0.0 {
            continue;
        }
        let g = &rep.gamma[c];
        for (a, o) in out.iter_mut().enumerate() {
            *o += xc * (0..n).map(|b| g[(a, b)] * y.coeff()[b]).sum::<f64>();
        }
    }
    AlgebraElement::from_coeffs(rep.dim, &out)
}

/// All permutations of `0..k` with their signs.
fn signed_permutations(k: usize) -> Vec<(Vec<usize>, f64)> {
    if k == 0 {
        return vec![(Vec::new(), 1.0)];
    }
    let mut out = Vec::new();
    for (perm, sign) in signed_permutations(k - 1) {
        // insert k-1 at every position; moving it left past j elements flips j times
        for pos in 0..=perm.len() {
            let mut p = perm.clone();
            p.insert(pos, k - 1);
            let flips = perm.len() - pos;
            out.push((p, if flips % 2 == 0 { sign } else { -sign }));
        }
    }
    out
}

/// `Γ^{A_1 ... A_k}`: the antisymmetrized product normalized by `1/k!`.
/// Indices are one-based in `1..=n+1`.
pub fn antisym_product(rep: &MatrixRep, indices: &[usize]) -> Result<DMatrix<f64>> {
    let max = rep.n() + 1;
    if let Some(&bad) = indices.iter().find(|&&i| i == 0 || i > max) {
        return Err(Error::IndexOutOfRange { index: bad, max });
    }
    let size = 2 * rep.n();
    let perms = signed_permutations(indices.len());
    let norm = 1.0 / perms.len() as f64;
    let mut acc = DMatrix::zeros(size, size);
    for (perm, sign) in perms {
        let mut prod = DMatrix::identity(size, size);
        for &p in &perm {
            prod *= rep.big_gamma(indices[p]);
        }
        acc += prod * (sign * norm);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lambda_for_complex_numbers() {
        let rep = build_rep(2).unwrap();
        let want = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0]);
        assert_eq!(rep.lambda(1), &want);
    }

    #[test]
    fn shapes() {
        let rep = build_rep(8).unwrap();
        assert_eq!(rep.big_gammas().len(), 9);
        assert!(rep.big_gammas().iter().all(|g| g.shape() == (16, 16)));
        let rep4 = build_rep(4).unwrap();
        assert_eq!(rep4.gamma(4), &DMatrix::identity(4, 4));
        assert!(matches!(build_rep(1), Err(Error::UnsupportedDimension(1, _))));
        assert!(build_rep(5).is_err());
    }

    #[test]
    fn relations_hold() {
        for n in [2, 4, 8] {
            let rep = build_rep(n).unwrap();
            let report = clifford_check(&rep);
            assert!(report.max_deviation() <= 1e-12, "{report:?}");
        }
        // n = 2 entries are all in {-1, 0, 1}: exact
        let report = clifford_check(&build_rep(2).unwrap());
        assert_eq!(report.max_deviation(), 0.0);
    }

    #[test]
    fn last_gamma_squares_to_identity() {
        let rep = build_rep(8).unwrap();
        let g9 = rep.big_gamma(9);
        assert_eq!(g9 * g9, DMatrix::identity(16, 16));
    }

    #[test]
    fn distinct_gammas_anticommute() {
        let rep = build_rep(4).unwrap();
        for a in 1..=5 {
            for b in 1..=5 {
                if a != b {
                    let (ga, gb) = (rep.big_gamma(a), rep.big_gamma(b));
                    assert_eq!(ga * gb, -(gb * ga));
                }
            }
        }
    }

    #[test]
    fn gamma_product_matches_algebra() {
        let rep = build_rep(4).unwrap();
        let d = Dim::Four;
        let e1 = AlgebraElement::unit(d, 1).unwrap();
        let e2 = AlgebraElement::unit(d, 2).unwrap();
        let e3 = AlgebraElement::unit(d, 3).unwrap();
        assert_eq!(gamma_multiply_check(&rep, &e1, &e2).unwrap(), e3);
        let y = AlgebraElement::from_coeffs(d, &[0.5, -2.0, 1.5, 3.0]).unwrap();
        let one = AlgebraElement::one(d);
        assert_eq!(gamma_multiply_check(&rep, &one, &y).unwrap(), y);
        assert!(gamma_multiply_check(&rep, &AlgebraElement::one(Dim::Two), &y).is_err());
    }

    #[test]
    fn permutation_signs() {
        let perms = signed_permutations(3);
        assert_eq!(perms.len(), 6);
        let sum: f64 = perms.iter().map(|(_, s)| s).sum();
        assert_eq!(sum, 0.0);
        let id = perms.iter().find(|(p, _)| p == &vec![0, 1, 2]).unwrap();
        assert_eq!(id.1, 1.0);
        let swap = perms.iter().find(|(p, _)| p == &vec![1, 0, 2]).unwrap();
        assert_eq!(swap.1, -1.0);
        let cyc = perms.iter().find(|(p, _)| p == &vec![1, 2, 0]).unwrap();
        assert_eq!(cyc.1, 1.0);
    }

    #[test]
    fn antisymmetrized_products() {
        let rep = build_rep(8).unwrap();
        let zero = DMatrix::<f64>::zeros(16, 16);
        assert_eq!(antisym_product(&rep, &[1, 1]).unwrap(), zero);
        assert!(max_abs(&(antisym_product(&rep, &[3, 5, 3, 7]).unwrap() - &zero)) <= 1e-15);
        for (a, b) in [(1, 2), (4, 9), (8, 3)] {
            let g = antisym_product(&rep, &[a, b]).unwrap();
            let direct = rep.big_gamma(a) * rep.big_gamma(b);
            assert!(max_abs(&(g - direct)) <= 1e-14);
        }
        let g = antisym_product(&rep, &[2, 5, 7, 9]).unwrap();
        for (swapped, sign) in [([5, 2, 7, 9], -1.0), ([2, 7, 5, 9], -1.0), ([9, 2, 5, 7], -1.0), ([5, 7, 2, 9], 1.0)] {
            let h = antisym_product(&rep, &swapped).unwrap();
            assert!(max_abs(&(&g - h * sign)) <= 1e-14);
        }
        assert!(matches!(
            antisym_product(&rep, &[1, 10]),
            Err(Error::IndexOutOfRange { index: 10, max: 9 })
        ));
        assert!(antisym_product(&rep, &[0, 2]).is_err());
    }
}
