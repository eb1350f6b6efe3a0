//! The four normed division algebras built from antisymmetric structure
//! constants.
//!
//! An element is stored as its `n` real coefficients in the order
//! `(x^1, ..., x^{n-1}, x^n)`: the imaginary units first, the real part
//! last. Index `n` is the real unit throughout the crate.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{Error, Result};

/// Dimension of a normed division algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(into = "usize")]
pub enum Dim {
    One,
    Two,
    Four,
    Eight,
}

impl Dim {
    pub const ALL: [Dim; 4] = [Dim::One, Dim::Two, Dim::Four, Dim::Eight];
    /// The three dimensions with a non-trivial Hopf map.
    pub const HOPF: [Dim; 3] = [Dim::Two, Dim::Four, Dim::Eight];

    pub const fn n(self) -> usize {
        match self {
            Dim::One => 1,
            Dim::Two => 2,
            Dim::Four => 4,
            Dim::Eight => 8,
        }
    }

    /// Number of imaginary units, `n - 1`.
    pub const fn imag(self) -> usize {
        self.n() - 1
    }

    pub fn new(n: usize) -> Result<Self> {
        Self::try_from(n)
    }

    /// Like [`Dim::new`] but rejects `n = 1`, which has no Clifford
    /// representation of the kind used here.
    pub fn hopf(n: usize) -> Result<Self> {
        match Self::try_from(n)? {
            Dim::One => Err(Error::UnsupportedDimension(1, "2, 4, 8")),
            d => Ok(d),
        }
    }
}

impl TryFrom<usize> for Dim {
    type Error = Error;

    fn try_from(n: usize) -> Result<Self> {
        match n {
            1 => Ok(Dim::One),
            2 => Ok(Dim::Two),
            4 => Ok(Dim::Four),
            8 => Ok(Dim::Eight),
            _ => Err(Error::UnsupportedDimension(n, "1, 2, 4, 8")),
        }
    }
}

impl From<Dim> for usize {
    fn from(d: Dim) -> usize {
        d.n()
    }
}

impl fmt::Display for Dim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.n())
    }
}

/// The seven generating triples of the octonion table, `C_{abc} = +1`.
pub const OCTONION_TRIPLES: [[usize; 3]; 7] = [
    [1, 2, 3],
    [1, 4, 7],
    [1, 6, 5],
    [2, 4, 6],
    [2, 5, 7],
    [3, 5, 4],
    [3, 6, 7],
];

const QUATERNION_TRIPLES: [[usize; 3]; 1] = [[1, 2, 3]];

/// Totally antisymmetric constants `C_{μνλ}` with `e_μ e_ν = -δ_{μν} + C_{μνλ} e_λ`.
#[derive(Debug, Clone, PartialEq)]
pub struct StructureTable {
    dim: Dim,
    c: [[[i8; 7]; 7]; 7],
    /// Non-zero entries as `(μ, ν, λ, sign)`, zero-based.
    nonzero: Vec<(usize, usize, usize, f64)>,
}

impl StructureTable {
    pub fn new(dim: Dim) -> Self {
        let mut c = [[[0i8; 7]; 7]; 7];
        for t in Self::generators_for(dim) {
            let [a, b, d] = t.map(|i| i - 1);
            // even permutations
            for (i, j, k) in [(a, b, d), (b, d, a), (d, a, b)] {
                c[i][j][k] = 1;
            }
            // odd permutations
            for (i, j, k) in [(b, a, d), (a, d, b), (d, b, a)] {
                c[i][j][k] = -1;
            }
        }
        let m = dim.imag();
        let mut nonzero = Vec::new();
        for (i, plane) in c.iter().enumerate().take(m) {
            for (j, row) in plane.iter().enumerate().take(m) {
                for (k, &v) in row.iter().enumerate().take(m) {
                    if v != 0 {
                        nonzero.push((i, j, k, f64::from(v)));
                    }
                }
            }
        }
        StructureTable { dim, c, nonzero }
    }

    /// Shared immutable table for `dim`.
    pub fn shared(dim: Dim) -> &'static StructureTable {
        static TABLES: [OnceLock<StructureTable>; 4] =
            [OnceLock::new(), OnceLock::new(), OnceLock::new(), OnceLock::new()];
        let slot = match dim {
            Dim::One => 0,
            Dim::Two => 1,
            Dim::Four => 2,
            Dim::Eight => 3,
        };
        TABLES[slot].get_or_init(|| StructureTable::new(dim))
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    /// The unit triples the table is generated from (empty for n = 1, 2).
    pub fn generators(&self) -> &'static [[usize; 3]] {
        Self::generators_for(self.dim)
    }

    fn generators_for(dim: Dim) -> &'static [[usize; 3]] {
        match dim {
            Dim::One | Dim::Two => &[],
            Dim::Four => &QUATERNION_TRIPLES,
            Dim::Eight => &OCTONION_TRIPLES,
        }
    }

    /// `C_{abc}` with one-based indices in `1..=n`. Any index equal to `n`
    /// (the real unit) gives zero.
    pub fn get(&self, a: usize, b: usize, c: usize) -> f64 {
        let n = self.dim.n();
        assert!(
            (1..=n).contains(&a) && (1..=n).contains(&b) && (1..=n).contains(&c),
            "structure constant index out of range 1..={n}"
        );
        if a == n || b == n || c == n {
            return 0.0;
        }
        f64::from(self.c[a - 1][b - 1][c - 1])
    }

    /// Zero-based access over imaginary indices `0..n-1`.
    #[inline]
    pub(crate) fn c0(&self, a: usize, b: usize, c: usize) -> f64 {
        f64::from(self.c[a][b][c])
    }

    pub(crate) fn nonzero(&self) -> &[(usize, usize, usize, f64)] {
        &self.nonzero
    }
}

/// Build the structure table for dimension `n`.
pub fn structure_table(n: usize) -> Result<StructureTable> {
    Ok(StructureTable::new(Dim::new(n)?))
}

/// An element `x = x^n + x^μ e_μ` of one of the division algebras.
#[derive(Clone, Copy, PartialEq)]
pub struct AlgebraElement {
    dim: Dim,
    c: [f64; 8],
}

impl fmt::Debug for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AlgebraElement")
            .field("n", &self.dim.n())
            .field("coeff", &self.coeff())
            .finish()
    }
}

impl AlgebraElement {
    pub fn zero(dim: Dim) -> Self {
        AlgebraElement { dim, c: [0.0; 8] }
    }

    pub fn one(dim: Dim) -> Self {
        Self::real(dim, 1.0)
    }

    pub fn real(dim: Dim, value: f64) -> Self {
        let mut x = Self::zero(dim);
        x.c[dim.n() - 1] = value;
        x
    }

    /// The imaginary unit `e_μ`, `μ` in `1..n`.
    pub fn unit(dim: Dim, mu: usize) -> Result<Self> {
        if mu == 0 || mu >= dim.n() {
            return Err(Error::IndexOutOfRange {
                index: mu,
                max: dim.n() - 1,
            });
        }
        let mut x = Self::zero(dim);
        x.c[mu - 1] = 1.0;
        Ok(x)
    }

    /// From coefficients in the order `(x^1, ..., x^{n-1}, x^n)`.
    pub fn from_coeffs(dim: Dim, coeff: &[f64]) -> Result<Self> {
        if coeff.len() != dim.n() {
            return Err(Error::DimensionMismatch {
                expected: dim.n(),
                found: coeff.len(),
            });
        }
        let mut x = Self::zero(dim);
        x.c[..coeff.len()].copy_from_slice(coeff);
        Ok(x)
    }

    /// From a slice whose length picks the dimension.
    pub fn from_slice(coeff: &[f64]) -> Result<Self> {
        Self::from_coeffs(Dim::new(coeff.len())?, coeff)
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    pub fn coeff(&self) -> &[f64] {
        &self.c[..self.dim.n()]
    }

    pub fn coeff_mut(&mut self) -> &mut [f64] {
        let n = self.dim.n();
        &mut self.c[..n]
    }

    pub fn re(&self) -> f64 {
        self.c[self.dim.n() - 1]
    }

    pub fn imag(&self) -> &[f64] {
        &self.c[..self.dim.imag()]
    }

    pub fn conjugate(&self) -> Self {
        let mut out = *self;
        for v in out.c.iter_mut().take(self.dim.imag()) {
            *v = -*v;
        }
        out
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coeff().iter().map(|v| v * v).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Euclidean inner product of the coefficient vectors, `Re(x̄ y)`.
    pub fn dot(&self, other: &Self) -> f64 {
        self.coeff()
            .iter()
            .zip(other.coeff())
            .map(|(a, b)| a * b)
            .sum()
    }

    pub fn scale(&self, k: f64) -> Self {
        let mut out = *self;
        out.c.iter_mut().for_each(|v| *v *= k);
        out
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim.n(),
                found: other.dim.n(),
            });
        }
        Ok(())
    }

    /// Product using the shared structure table; panics on mismatched
    /// dimensions (see [`multiply`] for the checked form).
    pub fn mul_unchecked(&self, y: &Self) -> Self {
        assert_eq!(self.dim, y.dim, "dimension mismatch in product");
        let dim = self.dim;
        let m = dim.imag();
        let table = StructureTable::shared(dim);
        let (xr, yr) = (self.re(), y.re());
        let mut z = Self::zero(dim);
        let mut dot = 0.0;
        for k in 0..m {
            dot += self.c[k] * y.c[k];
            z.c[k] = xr * y.c[k] + yr * self.c[k];
        }
        z.c[m] = xr * yr - dot;
        for &(mu, nu, la, s) in table.nonzero() {
            z.c[la] += s * self.c[mu] * y.c[nu];
        }
        z
    }
}

impl Add for AlgebraElement {
    type Output = AlgebraElement;
    fn add(mut self, rhs: Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in sum");
        self.c.iter_mut().zip(rhs.c).for_each(|(a, b)| *a += b);
        self
    }
}

impl Sub for AlgebraElement {
    type Output = AlgebraElement;
    fn sub(mut self, rhs: Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in difference");
        self.c.iter_mut().zip(rhs.c).for_each(|(a, b)| *a -= b);
        self
    }
}

impl Neg for AlgebraElement {
    type Output = AlgebraElement;
    fn neg(self) -> Self {
        self.scale(-1.0)
    }
}

impl Mul for AlgebraElement {
    type Output = AlgebraElement;
    fn mul(self, rhs: Self) -> Self {
        self.mul_unchecked(&rhs)
    }
}

impl Mul<f64> for AlgebraElement {
    type Output = AlgebraElement;
    fn mul(self, k: f64) -> Self {
        self.scale(k)
    }
}

pub fn multiply(x: &AlgebraElement, y: &AlgebraElement) -> Result<AlgebraElement> {
    x.check_same(y)?;
    Ok(x.mul_unchecked(y))
}

pub fn conjugate(x: &AlgebraElement) -> AlgebraElement {
    x.conjugate()
}

pub fn norm(x: &AlgebraElement) -> f64 {
    x.norm()
}

/// Right division `x · y⁻¹` with `y⁻¹ = ȳ / |y|²`.
pub fn divide(x: &AlgebraElement, y: &AlgebraElement) -> Result<AlgebraElement> {
    x.check_same(y)?;
    let n2 = y.norm_sqr();
    if n2 == 0.0 {
        return Err(Error::DivisionByZero);
    }
    Ok(x.mul_unchecked(&y.conjugate().scale(1.0 / n2)))
}

/// `(xy)z - x(yz)`.
pub fn associator(
    x: &AlgebraElement,
    y: &AlgebraElement,
    z: &AlgebraElement,
) -> Result<AlgebraElement> {
    x.check_same(y)?;
    x.check_same(z)?;
    Ok((*x * *y) * *z - *x * (*y * *z))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn e(dim: Dim, mu: usize) -> AlgebraElement {
        AlgebraElement::unit(dim, mu).unwrap()
    }

    #[test]
    fn table_examples() {
        let t2 = structure_table(2).unwrap();
        assert_eq!(t2.get(1, 1, 1), 0.0);
        let t4 = structure_table(4).unwrap();
        assert_eq!(t4.get(1, 2, 3), 1.0);
        assert_eq!(t4.get(3, 2, 1), -1.0);
        let t8 = structure_table(8).unwrap();
        assert_eq!(t8.get(2, 1, 3), -1.0);
        assert_eq!(t8.get(1, 6, 5), 1.0);
        assert_eq!(t8.get(1, 5, 6), -1.0);
        assert_eq!(t8.get(8, 1, 2), 0.0);
        assert!(matches!(
            structure_table(3),
            Err(Error::UnsupportedDimension(3, _))
        ));
        assert!(structure_table(16).is_err());
    }

    #[test]
    fn table_is_totally_antisymmetric() {
        for dim in Dim::ALL {
            let t = StructureTable::new(dim);
            let n = dim.n();
            for a in 1..=n {
                for b in 1..=n {
                    for c in 1..=n {
                        let v = t.get(a, b, c);
                        assert_eq!(v, -t.get(b, a, c));
                        assert_eq!(v, -t.get(a, c, b));
                        assert_eq!(v, -t.get(c, b, a));
                        if a == b || b == c || a == c {
                            assert_eq!(v, 0.0);
                        }
                    }
                }
            }
        }
        // every octonion pair of distinct units has exactly one partner
        let t = StructureTable::new(Dim::Eight);
        for a in 1..8 {
            for b in 1..8 {
                let hits = (1..8).filter(|&c| t.get(a, b, c) != 0.0).count();
                assert_eq!(hits, usize::from(a != b));
            }
        }
    }

    #[test]
    fn unit_products() {
        let d2 = Dim::Two;
        assert_eq!(e(d2, 1) * e(d2, 1), AlgebraElement::real(d2, -1.0));
        let d8 = Dim::Eight;
        assert_eq!(e(d8, 1) * e(d8, 2), e(d8, 3));
        assert_eq!(e(d8, 2) * e(d8, 5), e(d8, 7));
        assert_eq!(e(d8, 2) * e(d8, 1), -e(d8, 3));
        assert!(multiply(&e(d8, 1), &e(Dim::Four, 1)).is_err());
    }

    #[test]
    fn conjugate_and_norm() {
        let d = Dim::Eight;
        let x = AlgebraElement::one(d) + e(d, 1);
        assert_eq!(x.conjugate(), AlgebraElement::one(d) - e(d, 1));
        let y = AlgebraElement::real(d, 3.0) + e(d, 1) * 4.0;
        assert_eq!(y.norm(), 5.0);
    }

    #[test]
    fn division_examples() {
        let d8 = Dim::Eight;
        let q = divide(&e(d8, 3), &e(d8, 2)).unwrap();
        assert_eq!(q, e(d8, 1));

        let d4 = Dim::Four;
        let x = AlgebraElement::one(d4) + e(d4, 1);
        let got = divide(&x, &e(d4, 2)).unwrap();
        // quaternion table by hand: (1 + i)(-j) = -j - k
        let want = AlgebraElement::from_coeffs(d4, &[0.0, -1.0, -1.0, 0.0]).unwrap();
        assert_eq!(got, want);

        assert_eq!(
            divide(&x, &AlgebraElement::zero(d4)),
            Err(Error::DivisionByZero)
        );
        let one = divide(&x, &x).unwrap();
        assert!((one - AlgebraElement::one(d4)).norm() < 1e-15);
    }

    #[test]
    fn octonion_associator_witness() {
        let d = Dim::Eight;
        let a = associator(&e(d, 1), &e(d, 2), &e(d, 4)).unwrap();
        assert_eq!(a, e(d, 5) * -2.0);
    }

    #[test]
    fn commutativity_only_up_to_two() {
        let d4 = Dim::Four;
        assert_ne!(e(d4, 1) * e(d4, 2), e(d4, 2) * e(d4, 1));
        let d2 = Dim::Two;
        let x = AlgebraElement::from_coeffs(d2, &[0.3, -1.2]).unwrap();
        let y = AlgebraElement::from_coeffs(d2, &[2.0, 0.5]).unwrap();
        assert_eq!(x * y, y * x);
    }

    fn element(dim: Dim) -> impl Strategy<Value = AlgebraElement> {
        proptest::collection::vec(-3.0f64..3.0, dim.n())
            .prop_map(move |v| AlgebraElement::from_coeffs(dim, &v).unwrap())
    }

    fn any_dim() -> impl Strategy<Value = Dim> {
        prop_oneof![
            Just(Dim::One),
            Just(Dim::Two),
            Just(Dim::Four),
            Just(Dim::Eight)
        ]
    }

    proptest! {
        #[test]
        fn norm_is_multiplicative((x, y) in any_dim().prop_flat_map(|d| (element(d), element(d)))) {
            let lhs = (x * y).norm();
            let rhs = x.norm() * y.norm();
            prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.max(1e-300));
        }

        #[test]
        fn conjugation_reverses_products((x, y) in any_dim().prop_flat_map(|d| (element(d), element(d)))) {
            prop_assert_eq!(x.conjugate().conjugate(), x);
            let d = (x * y).conjugate() - y.conjugate() * x.conjugate();
            prop_assert!(d.norm() <= 1e-12 * (1.0 + x.norm() * y.norm()));
        }

        #[test]
        fn self_conjugate_product_is_real(x in any_dim().prop_flat_map(element)) {
            let p = x * x.conjugate();
            prop_assert!(p.imag().iter().all(|v| v.abs() <= 1e-12 * (1.0 + x.norm_sqr())));
            prop_assert!((p.re() - x.norm_sqr()).abs() <= 1e-12 * (1.0 + x.norm_sqr()));
        }

        #[test]
        fn identity_is_exact(x in any_dim().prop_flat_map(element)) {
            let one = AlgebraElement::one(x.dim());
            prop_assert_eq!(one * x, x);
            prop_assert_eq!(x * one, x);
        }

        #[test]
        fn alternativity((x, y) in Just(Dim::Eight).prop_flat_map(|d| (element(d), element(d)))) {
            let scale = 1.0 + x.norm_sqr() * y.norm();
            prop_assert!(associator(&x, &x, &y).unwrap().norm() <= 1e-12 * scale);
            prop_assert!(associator(&y, &x, &x).unwrap().norm() <= 1e-12 * scale);
            prop_assert!(associator(&x, &y, &x).unwrap().norm() <= 1e-12 * scale);
        }

        #[test]
        fn right_division_inverts((x, y) in any_dim().prop_flat_map(|d| (element(d), element(d)))) {
            prop_assume!(y.norm() > 1e-3);
            let back = divide(&x, &y).unwrap() * y;
            prop_assert!((back - x).norm() <= 1e-12 * (1.0 + x.norm()) * (1.0 + y.norm() / y.norm().min(1.0)));
        }
    }
}
