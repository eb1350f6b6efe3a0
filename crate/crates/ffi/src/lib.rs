//! C ABI over `hopf-core`.
//!
//! Every function returns a [`HopfStatus`]; on anything but `HOPF_OK` the
//! message is available from [`hopf_last_error_message`] on the same
//! thread. Array lengths are implied by `n` and documented per function.
//! Output buffers are left untouched on failure.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::slice;

use hopf_core::gauge::potential;
use hopf_core::hopf::{fiber_coords, lift, project, project_spinor};
use hopf_core::mechanics::generators;
use hopf_core::{AlgebraElement, BasePoint, BundlePoint, ChartConfig, Dim, Error, MatrixRep};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HopfStatus {
    HopfOk = 0,
    HopfNullPointer = 1,
    HopfUnsupportedDimension = 2,
    HopfDivisionByZero = 3,
    HopfChartSingularity = 4,
    HopfInvalidArgument = 5,
    HopfPanic = 6,
}

/// Clifford representation for one of n = 2, 4, 8. Create with
/// [`hopf_rep_new`], release with [`hopf_rep_free`].
pub struct HopfRep {
    rep: &'static MatrixRep,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> HopfStatus {
    match e {
        Error::UnsupportedDimension(..) | Error::WrongDimension { .. } => HopfStatus::HopfUnsupportedDimension,
        Error::DivisionByZero | Error::ZeroU1 => HopfStatus::HopfDivisionByZero,
        Error::ChartSingularity(_) => HopfStatus::HopfChartSingularity,
        _ => HopfStatus::HopfInvalidArgument,
    }
}

enum Fail {
    Null,
    Core(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Core(e)
    }
}

/// Runs `f`, translating errors and panics into a status.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> HopfStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => HopfStatus::HopfOk,
        Ok(Err(Fail::Null)) => {
            set_error("null pointer argument");
            HopfStatus::HopfNullPointer
        }
        Ok(Err(Fail::Core(e))) => {
            set_error(&e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("internal panic");
            HopfStatus::HopfPanic
        }
    }
}

unsafe fn input<'a>(p: *const f64, len: usize) -> Result<&'a [f64], Fail> {
    if p.is_null() {
        Err(Fail::Null)
    } else {
        Ok(slice::from_raw_parts(p, len))
    }
}

unsafe fn output<'a>(p: *mut f64, len: usize) -> Result<&'a mut [f64], Fail> {
    if p.is_null() {
        Err(Fail::Null)
    } else {
        Ok(slice::from_raw_parts_mut(p, len))
    }
}

/// Copies the last error message (NUL-terminated, truncated to fit) into
/// `buf` and returns the full message length without the NUL.
///
/// # Safety
/// `buf` must be null or valid for `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn hopf_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let bytes = e.borrow();
        let bytes = bytes.as_bytes();
        if !buf.is_null() && len > 0 {
            let k = bytes.len().min(len - 1);
            std::ptr::copy_nonoverlapping(bytes.as_ptr().cast::<c_char>(), buf, k);
            *buf.add(k) = 0;
        }
        bytes.len()
    })
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn hopf_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `out` must be valid for one pointer write.
#[no_mangle]
pub unsafe extern "C" fn hopf_rep_new(n: usize, out: *mut *mut HopfRep) -> HopfStatus {
    guard(|| {
        if out.is_null() {
            return Err(Fail::Null);
        }
        let rep = MatrixRep::shared(Dim::hopf(n)?)?;
        *out = Box::into_raw(Box::new(HopfRep { rep }));
        Ok(())
    })
}

/// # Safety
/// `rep` must be null or come from [`hopf_rep_new`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn hopf_rep_free(rep: *mut HopfRep) {
    if !rep.is_null() {
        drop(Box::from_raw(rep));
    }
}

/// `n` of the representation, or 0 for a null handle.
///
/// # Safety
/// `rep` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn hopf_rep_n(rep: *const HopfRep) -> usize {
    rep.as_ref().map_or(0, |r| r.rep.n())
}

unsafe fn element(dim: Dim, p: *const f64) -> Result<AlgebraElement, Fail> {
    Ok(AlgebraElement::from_coeffs(dim, input(p, dim.n())?)?)
}

/// `out = x y` for n in {1, 2, 4, 8}; all arrays hold n coefficients,
/// real part last.
///
/// # Safety
/// Pointers must be valid for n doubles.
#[no_mangle]
pub unsafe extern "C" fn hopf_multiply(n: usize, x: *const f64, y: *const f64, out: *mut f64) -> HopfStatus {
    guard(|| {
        let dim = Dim::new(n)?;
        let z = element(dim, x)? * element(dim, y)?;
        output(out, n)?.copy_from_slice(z.coeff());
        Ok(())
    })
}

/// `out = x y^{-1}`.
///
/// # Safety
/// Pointers must be valid for n doubles.
#[no_mangle]
pub unsafe extern "C" fn hopf_divide(n: usize, x: *const f64, y: *const f64, out: *mut f64) -> HopfStatus {
    guard(|| {
        let dim = Dim::new(n)?;
        let z = hopf_core::algebra::divide(&element(dim, x)?, &element(dim, y)?)?;
        output(out, n)?.copy_from_slice(z.coeff());
        Ok(())
    })
}

/// `u` holds 2n doubles (u1 then u2); `x` receives n+1.
///
/// # Safety
/// Pointers must be valid for the stated lengths.
#[no_mangle]
pub unsafe extern "C" fn hopf_project(n: usize, u: *const f64, x: *mut f64) -> HopfStatus {
    guard(|| {
        let dim = Dim::hopf(n)?;
        let b = project(&BundlePoint::from_slice(dim, input(u, 2 * n)?)?);
        output(x, n + 1)?.copy_from_slice(&b.x);
        Ok(())
    })
}

/// Projection through `x^A = U Γ^A U` with the spinor `U = (u2, u1)`.
///
/// # Safety
/// `rep` must be live; `spinor` valid for 2n doubles, `x` for n+1.
#[no_mangle]
pub unsafe extern "C" fn hopf_project_spinor(rep: *const HopfRep, spinor: *const f64, x: *mut f64) -> HopfStatus {
    guard(|| {
        let rep = rep.as_ref().ok_or(Fail::Null)?.rep;
        let n = rep.n();
        let b = project_spinor(rep, input(spinor, 2 * n)?)?;
        output(x, n + 1)?.copy_from_slice(&b.x);
        Ok(())
    })
}

/// North-chart lift of `x` (n+1) with unit fiber element `g` (n) into `u`
/// (2n).
///
/// # Safety
/// Pointers must be valid for the stated lengths.
#[no_mangle]
pub unsafe extern "C" fn hopf_lift(n: usize, x: *const f64, g: *const f64, u: *mut f64) -> HopfStatus {
    guard(|| {
        let dim = Dim::hopf(n)?;
        let base = BasePoint::new(dim, input(x, n + 1)?.to_vec())?;
        let p = lift(&base, &element(dim, g)?, &ChartConfig::default())?;
        output(u, 2 * n)?.copy_from_slice(&p.to_vec());
        Ok(())
    })
}

/// Fiber element `g` (n) and stereographic coordinates `y` (n-1) of `u`
/// (2n).
///
/// # Safety
/// Pointers must be valid for the stated lengths.
#[no_mangle]
pub unsafe extern "C" fn hopf_fiber_coords(n: usize, u: *const f64, g: *mut f64, y: *mut f64) -> HopfStatus {
    guard(|| {
        let dim = Dim::hopf(n)?;
        let c = fiber_coords(&BundlePoint::from_slice(dim, input(u, 2 * n)?)?, &ChartConfig::default())?;
        let (g, y) = (output(g, n)?, output(y, n - 1)?);
        g.copy_from_slice(c.g.coeff());
        y.copy_from_slice(&c.y);
        Ok(())
    })
}

/// `A_{ab,d}` at `x` (n+1), written row-major `[a][b][d]` into `out`
/// (n·n·(n+1) doubles).
///
/// # Safety
/// `rep` must be live and pointers valid for the stated lengths.
#[no_mangle]
pub unsafe extern "C" fn hopf_potential(rep: *const HopfRep, x: *const f64, out: *mut f64) -> HopfStatus {
    guard(|| {
        let rep = rep.as_ref().ok_or(Fail::Null)?.rep;
        let n = rep.n();
        let base = BasePoint::new(rep.dim(), input(x, n + 1)?.to_vec())?;
        let a = potential(rep, &base, &ChartConfig::default())?;
        output(out, n * n * (n + 1))?.copy_from_slice(a.coeffs());
        Ok(())
    })
}

/// Generators at `(y, p)` (n-1 each): `j` receives the n×n matrix
/// row-major, `isospin` n-1 values, `casimir` one.
///
/// # Safety
/// Pointers must be valid for the stated lengths.
#[no_mangle]
pub unsafe extern "C" fn hopf_generators(
    n: usize,
    y: *const f64,
    p: *const f64,
    j: *mut f64,
    isospin: *mut f64,
    casimir: *mut f64,
) -> HopfStatus {
    guard(|| {
        Dim::hopf(n)?;
        let obs = generators(input(y, n - 1)?, input(p, n - 1)?, n)?;
        let (j, i, c) = (output(j, n * n)?, output(isospin, n - 1)?, output(casimir, 1)?);
        for a in 0..n {
            for b in 0..n {
                j[a * n + b] = obs.j[(a, b)];
            }
        }
        i.copy_from_slice(&obs.i);
        c[0] = obs.casimir;
        Ok(())
    })
}
