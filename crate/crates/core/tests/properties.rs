use hopf_core::algebra::{associator, divide};
use hopf_core::clifford::{clifford_check, gamma_multiply_check};
use hopf_core::gauge::{killing, potential, reduce_potential, ReducedPotential};
use hopf_core::hopf::{fiber_coords, fiber_rotate, fiber_rotate_oct, lift, project, project_spinor};
use hopf_core::*;
use num_complex::Complex64;
use proptest::prelude::*;

fn coeffs(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-3.0f64..3.0, n)
}

fn element(dim: Dim) -> impl Strategy<Value = AlgebraElement> {
    coeffs(dim.n())
        .prop_filter("away from zero", |c| c.iter().map(|v| v * v).sum::<f64>() > 1e-2)
        .prop_map(move |c| AlgebraElement::from_coeffs(dim, &c).unwrap())
}

fn any_dim() -> impl Strategy<Value = Dim> {
    prop::sample::select(Dim::ALL.to_vec())
}

fn hopf_dim() -> impl Strategy<Value = Dim> {
    prop::sample::select(Dim::HOPF.to_vec())
}

fn unit(dim: Dim) -> impl Strategy<Value = AlgebraElement> {
    element(dim).prop_map(|g| g.scale(1.0 / g.norm()))
}

/// A bundle point well inside the north chart.
fn bundle_point(dim: Dim) -> impl Strategy<Value = BundlePoint> {
    (element(dim), element(dim))
        .prop_filter("chart margin", |(a, b)| a.norm_sqr() > 0.05 * (a.norm_sqr() + b.norm_sqr()))
        .prop_map(|(a, b)| BundlePoint::new(a, b).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn norms_compose(triple in any_dim().prop_flat_map(|d| (element(d), element(d)))) {
        let (x, y) = triple;
        let rel = ((x * y).norm() - x.norm() * y.norm()).abs() / (x.norm() * y.norm());
        prop_assert!(rel <= 1e-12);
    }

    #[test]
    fn division_undoes_multiplication(pair in any_dim().prop_flat_map(|d| (element(d), element(d)))) {
        let (x, y) = pair;
        let back = divide(&(x * y), &y).unwrap();
        prop_assert!((back - x).norm() <= 1e-12 * x.norm());
    }

    #[test]
    fn alternative_everywhere(pair in any_dim().prop_flat_map(|d| (element(d), element(d)))) {
        let (x, y) = pair;
        let s = x.norm() * x.norm() * y.norm();
        prop_assert!(associator(&x, &x, &y).unwrap().norm() <= 1e-12 * s);
        prop_assert!(associator(&y, &x, &x).unwrap().norm() <= 1e-12 * s);
    }

    #[test]
    fn gammas_multiply(pair in hopf_dim().prop_flat_map(|d| (element(d), element(d)))) {
        let (x, y) = pair;
        let rep = MatrixRep::shared(x.dim()).unwrap();
        let via = gamma_multiply_check(rep, &x, &y).unwrap();
        prop_assert!((via - x * y).norm() <= 1e-12 * x.norm() * y.norm());
    }

    #[test]
    fn projection_spinor_and_round_trip(u in hopf_dim().prop_flat_map(bundle_point)) {
        let x = project(&u);
        prop_assert!(x.radius_defect() <= 1e-12);
        let rep = MatrixRep::shared(u.dim()).unwrap();
        prop_assert!(project_spinor(rep, &u.to_spinor()).unwrap().max_abs_diff(&x) <= 1e-10 * x.r);
        let chart = ChartConfig::default();
        let g = fiber_coords(&u, &chart).unwrap().g;
        prop_assert!((g.norm() - 1.0).abs() <= 1e-12);
        prop_assert!(lift(&x, &g, &chart).unwrap().distance(&u) <= 1e-10 * x.r.sqrt());
    }

    #[test]
    fn fiber_actions_fix_the_base(pair in hopf_dim().prop_flat_map(|d| (bundle_point(d), unit(d)))) {
        let (u, g) = pair;
        let rot = FiberRotation::finite(g).unwrap();
        let moved = if u.dim() == Dim::Eight { fiber_rotate_oct(&u, &rot) } else { fiber_rotate(&u, &rot) }.unwrap();
        let x = project(&u);
        prop_assert!(project(&moved).max_abs_diff(&x) <= 1e-10 * x.r);
        prop_assert!((moved.radius_sqr() - u.radius_sqr()).abs() <= 1e-12 * u.radius_sqr());
    }

    #[test]
    fn potential_is_antisymmetric_and_degree_minus_one(
        (dim, x, k) in hopf_dim().prop_flat_map(|d| (Just(d), coeffs(d.n() + 1), 0.2f64..5.0))
    ) {
        let mut x = x;
        let last = x.len() - 1;
        x[last] = x[last].abs() + 0.1;
        let rep = MatrixRep::shared(dim).unwrap();
        let chart = ChartConfig::default();
        let a = potential(rep, &BasePoint::new(dim, x.clone()).unwrap(), &chart).unwrap();
        prop_assert_eq!(a.antisymmetry_defect(), 0.0);
        let b = potential(rep, &BasePoint::new(dim, x.iter().map(|v| k * v).collect()).unwrap(), &chart).unwrap();
        for (p, q) in a.coeffs().iter().zip(b.coeffs()) {
            prop_assert!((p - k * q).abs() <= 1e-12 * (1.0 + p.abs()));
        }
        if dim == Dim::Four {
            match reduce_potential(&a).unwrap() {
                ReducedPotential::Yang { identity_deviation, .. } => prop_assert!(identity_deviation <= 1e-12),
                other => prop_assert!(false, "{other:?}"),
            }
        }
    }

    #[test]
    fn killing_vectors_lie_on_the_sphere(re in -50.0f64..50.0, im in -50.0f64..50.0) {
        prop_assert!(killing(Complex64::new(re, im)).sphere_defect() <= 1e-12);
    }
}

#[test]
fn clifford_relations_and_shapes() {
    for dim in Dim::HOPF {
        let r = clifford_check(MatrixRep::shared(dim).unwrap());
        assert!(r.max_deviation() <= 1e-12, "{r:?}");
        assert_eq!((r.matrix_count, r.matrix_size), (dim.n() + 1, 2 * dim.n()));
    }
}

#[test]
fn octonions_are_not_associative() {
    let e = |k| AlgebraElement::unit(Dim::Eight, k).unwrap();
    assert_eq!(associator(&e(1), &e(2), &e(4)).unwrap(), e(5).scale(-2.0));
}
