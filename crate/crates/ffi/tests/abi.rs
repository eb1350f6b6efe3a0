use std::ffi::CStr;
use std::ptr;

use hopf_ffi::*;

fn last_error() -> String {
    let mut buf = [0 as std::ffi::c_char; 256];
    let len = unsafe { hopf_last_error_message(buf.as_mut_ptr(), buf.len()) };
    let s = unsafe { CStr::from_ptr(buf.as_ptr()) }.to_string_lossy().into_owned();
    assert_eq!(s.len(), len.min(255));
    s
}

#[test]
fn quaternion_units_multiply() {
    // i j = k with coefficients (i, j, k, 1)
    let (i, j) = ([1.0, 0.0, 0.0, 0.0], [0.0, 1.0, 0.0, 0.0]);
    let mut out = [0.0; 4];
    assert_eq!(unsafe { hopf_multiply(4, i.as_ptr(), j.as_ptr(), out.as_mut_ptr()) }, HopfStatus::HopfOk);
    assert_eq!(out, [0.0, 0.0, 1.0, 0.0]);
    let mut q = [0.0; 4];
    assert_eq!(unsafe { hopf_divide(4, out.as_ptr(), j.as_ptr(), q.as_mut_ptr()) }, HopfStatus::HopfOk);
    for (a, b) in q.iter().zip(i) {
        assert!((a - b).abs() <= 1e-15);
    }
}

#[test]
fn errors_are_reported() {
    let x = [1.0; 3];
    let mut out = [7.0; 3];
    assert_eq!(unsafe { hopf_multiply(3, x.as_ptr(), x.as_ptr(), out.as_mut_ptr()) }, HopfStatus::HopfUnsupportedDimension);
    assert!(last_error().contains("unsupported dimension 3"));
    assert_eq!(out, [7.0; 3]);
    assert_eq!(unsafe { hopf_multiply(2, ptr::null(), x.as_ptr(), out.as_mut_ptr()) }, HopfStatus::HopfNullPointer);
    let zero = [0.0; 2];
    assert_eq!(unsafe { hopf_divide(2, x.as_ptr(), zero.as_ptr(), out.as_mut_ptr()) }, HopfStatus::HopfDivisionByZero);
    let south = [0.0, 0.0, -1.0];
    let g = [0.0, 1.0];
    let mut u = [0.0; 4];
    assert_eq!(unsafe { hopf_lift(2, south.as_ptr(), g.as_ptr(), u.as_mut_ptr()) }, HopfStatus::HopfChartSingularity);
    let mut rep = ptr::null_mut();
    assert_eq!(unsafe { hopf_rep_new(1, &mut rep) }, HopfStatus::HopfUnsupportedDimension);
    assert!(rep.is_null());
    assert_eq!(unsafe { hopf_rep_n(rep) }, 0);
    unsafe { hopf_rep_free(rep) };
}

#[test]
fn lift_project_and_spinor_agree() {
    let x = [0.3, -0.2, 0.1, 0.4, 0.5, 0.2, -0.1, 0.6, 0.25];
    let g = [0.0, 0.0, 0.0, 0.0, 0.0, 0.6, 0.0, 0.8];
    let mut u = [0.0; 16];
    assert_eq!(unsafe { hopf_lift(8, x.as_ptr(), g.as_ptr(), u.as_mut_ptr()) }, HopfStatus::HopfOk);
    let mut back = [0.0; 9];
    assert_eq!(unsafe { hopf_project(8, u.as_ptr(), back.as_mut_ptr()) }, HopfStatus::HopfOk);
    for (a, b) in back.iter().zip(x) {
        assert!((a - b).abs() <= 1e-12);
    }
    let mut gg = [0.0; 8];
    let mut y = [0.0; 7];
    assert_eq!(unsafe { hopf_fiber_coords(8, u.as_ptr(), gg.as_mut_ptr(), y.as_mut_ptr()) }, HopfStatus::HopfOk);
    for (a, b) in gg.iter().zip(g) {
        assert!((a - b).abs() <= 1e-12);
    }

    let mut rep = ptr::null_mut();
    assert_eq!(unsafe { hopf_rep_new(8, &mut rep) }, HopfStatus::HopfOk);
    assert_eq!(unsafe { hopf_rep_n(rep) }, 8);
    let mut spinor = [0.0; 16];
    spinor[..8].copy_from_slice(&u[8..]);
    spinor[8..].copy_from_slice(&u[..8]);
    let mut xs = [0.0; 9];
    assert_eq!(unsafe { hopf_project_spinor(rep, spinor.as_ptr(), xs.as_mut_ptr()) }, HopfStatus::HopfOk);
    for (a, b) in xs.iter().zip(back) {
        assert!((a - b).abs() <= 1e-12);
    }
    let mut a = vec![0.0; 8 * 8 * 9];
    assert_eq!(unsafe { hopf_potential(rep, x.as_ptr(), a.as_mut_ptr()) }, HopfStatus::HopfOk);
    // antisymmetric in (a, b), zero along the last base direction
    for i in 0..8 {
        for j in 0..8 {
            for d in 0..9 {
                assert_eq!(a[(i * 8 + j) * 9 + d], -a[(j * 8 + i) * 9 + d]);
            }
            assert_eq!(a[(i * 8 + j) * 9 + 8], 0.0);
        }
    }
    unsafe { hopf_rep_free(rep) };
}

#[test]
fn generators_satisfy_the_casimir_relation() {
    let (y, p) = ([0.2, -0.4, 0.1], [1.0, 0.5, -0.3]);
    let mut j = [0.0; 16];
    let mut i = [0.0; 3];
    let mut c = 0.0;
    let st = unsafe { hopf_generators(4, y.as_ptr(), p.as_ptr(), j.as_mut_ptr(), i.as_mut_ptr(), &mut c) };
    assert_eq!(st, HopfStatus::HopfOk);
    let jj: f64 = j.iter().map(|v| v * v).sum();
    assert!((jj - 8.0 * c).abs() <= 1e-12 * jj);
    assert!((c - i.iter().map(|v| v * v).sum::<f64>()).abs() <= 1e-15);
}

#[test]
fn version_is_a_c_string() {
    let v = unsafe { CStr::from_ptr(hopf_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_is_valid_c() {
    let header = concat!(env!("CARGO_MANIFEST_DIR"), "/include/hopf.h");
    let text = std::fs::read_to_string(header).unwrap();
    for f in ["hopf_multiply", "hopf_lift", "hopf_generators", "hopf_last_error_message", "typedef struct HopfRep HopfRep"] {
        assert!(text.contains(f), "{f}");
    }
    let Ok(out) = std::process::Command::new("cc").args(["-std=c99", "-fsyntax-only", "-x", "c", header]).output() else {
        eprintln!("no C compiler; syntax check skipped");
        return;
    };
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}
