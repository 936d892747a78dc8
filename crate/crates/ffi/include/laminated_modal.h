#ifndef LAMINATED_MODAL_H
#define LAMINATED_MODAL_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum LmStatus {
  LM_STATUS_OK = 0,
  LM_STATUS_NULL_POINTER = 1,
  LM_STATUS_INVALID_ARGUMENT = 2,
  LM_STATUS_UNKNOWN_MATERIAL = 3,
  LM_STATUS_SOLVER_FAILURE = 4,
  LM_STATUS_BUFFER_TOO_SMALL = 5,
  LM_STATUS_IO = 6,
  LM_STATUS_PANIC = 7,
} LmStatus;

// Values accepted by the `method` argument of `lm_beam_solve`.
typedef enum LmMethod {
  LM_METHOD_CNM = 0,
  LM_METHOD_MSE = 1,
  LM_METHOD_DET = 2,
  LM_METHOD_EET = 3,
} LmMethod;

// Values accepted by the `bc` argument of `lm_beam_new`.
typedef enum LmBoundary {
  LM_BOUNDARY_SIMPLY_SUPPORTED = 0,
  LM_BOUNDARY_CLAMPED_CLAMPED = 1,
  LM_BOUNDARY_FREE_FREE = 2,
} LmBoundary;

// Opaque beam handle.
typedef struct LmBeam LmBeam;

typedef struct LmSolverOptions {
  double tolerance;
  uint32_t max_iter;
  // Number of elastic modes to compute.
  uint32_t modes;
  // Elements per layer (finite element methods only).
  uint32_t elements;
} LmSolverOptions;

typedef struct LmModalResult {
  uint32_t mode;
  double frequency_hz;
  double loss_factor;
  uint32_t iterations;
  // Converged angular frequency [rad/s]; real for MSE.
  double omega_re;
  double omega_im;
} LmModalResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Default options: tolerance 1e-5, 50 iterations, 3 modes, 200 elements.
struct LmSolverOptions lm_solver_options_default(void);

// Library version as a static NUL-terminated string.
const char *lm_version(void);

// Copy the calling thread's last error message into `buf`.
//
// `*required` receives the message length including the terminating NUL
// (1 when there is no error). Returns `BUFFER_TOO_SMALL` without writing
// when `capacity` is insufficient; `buf` may be null in that case.
//
// # Safety
// `buf` must be valid for `capacity` bytes; `required` must be valid or null.
enum LmStatus lm_last_error_message(char *buf, size_t capacity, size_t *required);

// Create a beam from the built-in material database.
//
// `bc` is an `LmBoundary` value; thicknesses and width in mm, length in
// m, temperature in °C. Both plies use the built-in glass.
//
// # Safety
// `material` must be a NUL-terminated string; `out` must be valid for a
// pointer write.
enum LmStatus lm_beam_new(uint32_t bc,
                          double h1_mm,
                          double h2_mm,
                          double h3_mm,
                          double width_mm,
                          double length_m,
                          const char *material,
                          double temperature_c,
                          struct LmBeam **out);

// Release a beam; null is ignored.
//
// # Safety
// `beam` must come from `lm_beam_new` and not be used afterwards.
void lm_beam_free(struct LmBeam *beam);

// Solve the first `options->modes` modes with `method` (an `LmMethod`
// value). `options` may be null for the defaults. On success `*written`
// results are stored in `out`; when `capacity` is too small nothing is
// solved, `*written` receives the needed count and `BUFFER_TOO_SMALL` is
// returned.
//
// # Safety
// `beam` must be a live handle; `out` must be valid for `capacity`
// elements; `options` must be valid or null; `written` must be valid.
enum LmStatus lm_beam_solve(const struct LmBeam *beam,
                            uint32_t method,
                            const struct LmSolverOptions *options,
                            struct LmModalResult *out,
                            size_t capacity,
                            size_t *written);

// Complex shear modulus [Pa] of a built-in interlayer at `frequency_hz`
// and `temperature_c`.
//
// # Safety
// `material` must be a NUL-terminated string; `re` and `im` must be valid.
enum LmStatus lm_complex_modulus(const char *material,
                                 double temperature_c,
                                 double frequency_hz,
                                 double *re,
                                 double *im);

// Run a study and write `cases.csv`, `summary.json` and `qq_mode1.csv`
// into `out_dir`. A null `config_path` runs the built-in 63-case matrix.
//
// # Safety
// Both arguments must be NUL-terminated strings or (for `config_path`) null.
enum LmStatus lm_run_study(const char *config_path, const char *out_dir);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LAMINATED_MODAL_H */
