#ifndef HOPF_H
#define HOPF_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum HopfStatus {
  HOPF_OK = 0,
  HOPF_NULL_POINTER = 1,
  HOPF_UNSUPPORTED_DIMENSION = 2,
  HOPF_DIVISION_BY_ZERO = 3,
  HOPF_CHART_SINGULARITY = 4,
  HOPF_INVALID_ARGUMENT = 5,
  HOPF_PANIC = 6,
} HopfStatus;

// Clifford representation for one of n = 2, 4, 8. Create with
// [`hopf_rep_new`], release with [`hopf_rep_free`].
typedef struct HopfRep HopfRep;

// Copies the last error message (NUL-terminated, truncated to fit) into
// `buf` and returns the full message length without the NUL.
//
// # Safety
// `buf` must be null or valid for `len` bytes.
size_t hopf_last_error_message(char *buf, size_t len);

// Library version as a static NUL-terminated string.
const char *hopf_version(void);

// # Safety
// `out` must be valid for one pointer write.
enum HopfStatus hopf_rep_new(size_t n, struct HopfRep **out);

// # Safety
// `rep` must be null or come from [`hopf_rep_new`] and not be freed twice.
void hopf_rep_free(struct HopfRep *rep);

// `n` of the representation, or 0 for a null handle.
//
// # Safety
// `rep` must be null or a live handle.
size_t hopf_rep_n(const struct HopfRep *rep);

// `out = x y` for n in {1, 2, 4, 8}; all arrays hold n coefficients,
// real part last.
//
// # Safety
// Pointers must be valid for n doubles.
enum HopfStatus hopf_multiply(size_t n, const double *x, const double *y, double *out);

// `out = x y^{-1}`.
//
// # Safety
// Pointers must be valid for n doubles.
enum HopfStatus hopf_divide(size_t n, const double *x, const double *y, double *out);

// `u` holds 2n doubles (u1 then u2); `x` receives n+1.
//
// # Safety
// Pointers must be valid for the stated lengths.
enum HopfStatus hopf_project(size_t n, const double *u, double *x);

// Projection through `x^A = U Γ^A U` with the spinor `U = (u2, u1)`.
//
// # Safety
// `rep` must be live; `spinor` valid for 2n doubles, `x` for n+1.
enum HopfStatus hopf_project_spinor(const struct HopfRep *rep, const double *spinor, double *x);

// North-chart lift of `x` (n+1) with unit fiber element `g` (n) into `u`
// (2n).
//
// # Safety
// Pointers must be valid for the stated lengths.
enum HopfStatus hopf_lift(size_t n, const double *x, const double *g, double *u);

// Fiber element `g` (n) and stereographic coordinates `y` (n-1) of `u`
// (2n).
//
// # Safety
// Pointers must be valid for the stated lengths.
enum HopfStatus hopf_fiber_coords(size_t n, const double *u, double *g, double *y);

// `A_{ab,d}` at `x` (n+1), written row-major `[a][b][d]` into `out`
// (n·n·(n+1) doubles).
//
// # Safety
// `rep` must be live and pointers valid for the stated lengths.
enum HopfStatus hopf_potential(const struct HopfRep *rep, const double *x, double *out);

// Generators at `(y, p)` (n-1 each): `j` receives the n×n matrix
// row-major, `isospin` n-1 values, `casimir` one.
//
// # Safety
// Pointers must be valid for the stated lengths.
enum HopfStatus hopf_generators(size_t n,
                                const double *y,
                                const double *p,
                                double *j,
                                double *isospin,
                                double *casimir);

#endif  /* HOPF_H */
