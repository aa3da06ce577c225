#ifndef CASIMIR_H
#define CASIMIR_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every exported function.
 */
typedef enum CmStatus {
  CM_STATUS_OK = 0,
  CM_STATUS_NULL_POINTER = 1,
  CM_STATUS_INVALID_ARGUMENT = 2,
  CM_STATUS_PARSE = 3,
  CM_STATUS_UNSUPPORTED_MODEL = 4,
  CM_STATUS_DOMAIN = 5,
  CM_STATUS_NUMERICAL = 6,
  CM_STATUS_OUT_OF_RANGE = 7,
  CM_STATUS_PANIC = 8,
} CmStatus;

typedef enum CmPolarization {
  CM_POLARIZATION_TE = 0,
  CM_POLARIZATION_TM = 1,
} CmPolarization;

/**
 * Opaque permittivity model.
 */
typedef struct CmModel CmModel;

/**
 * Opaque list of real open-domain poles.
 */
typedef struct CmPoleScan CmPoleScan;

/**
 * Energy and pressure per unit area of one gap.
 */
typedef struct CmEnergy {
  /**
   * Dimensionless imaginary-axis integral summed over both polarizations.
   */
  double i_imag;
  /**
   * J/m^2.
   */
  double energy;
  /**
   * Pa; negative values attract.
   */
  double pressure;
} CmEnergy;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Static description of a status code.
 */
const char *cm_status_str(enum CmStatus status);

/**
 * Message of the last failure on this thread; valid until the next failing
 * call on the same thread. Empty if nothing has failed.
 */
const char *cm_last_error(void);

/**
 * Parses a model string such as `plasma:xi=30`, `const:xi=2`, `pc` or
 * `lorentz:kappa0=3,omega0=1`.
 *
 * # Safety
 * `spec` must be a NUL-terminated string and `out` a valid pointer.
 */
enum CmStatus cm_model_parse(const char *spec, struct CmModel **out);

/**
 * Releases a model. Null is ignored.
 *
 * # Safety
 * `model` must be null or a handle from `cm_model_parse` not yet freed.
 */
void cm_model_free(struct CmModel *model);

/**
 * Branch points `(Omega_B1, Omega_B2)` at transverse wavenumber `r`.
 *
 * # Safety
 * Pointers must be valid; `model` must be a live handle.
 */
enum CmStatus cm_branch_points(const struct CmModel *model,
                               double r,
                               double *omega_b1,
                               double *omega_b2);

/**
 * Imaginary-axis Lifshitz integral with cutoffs `r0` and `rho`; pass
 * `INFINITY` for no cutoff.
 *
 * # Safety
 * Pointers must be valid; `error_estimate` may be null.
 */
enum CmStatus cm_i_imag(const struct CmModel *model,
                        enum CmPolarization polarization,
                        double r0,
                        double rho,
                        double rel_tol,
                        double *value,
                        double *error_estimate);

/**
 * Casimir energy and pressure across a gap of `lz` metres, summed over
 * both polarizations. A plasma model's `xi` is read at this `lz`.
 *
 * # Safety
 * Pointers must be valid; `model` must be a live handle.
 */
enum CmStatus cm_casimir_energy(const struct CmModel *model,
                                double lz,
                                double rel_tol,
                                struct CmEnergy *out);

/**
 * Plasmon zero-point energy (J/m^2) between Lorentz half-spaces: the
 * `n_terms` series and the direct quadrature.
 *
 * # Safety
 * `series` and `quadrature` must be valid pointers.
 */
enum CmStatus cm_plasmon_energy(double kappa0,
                                double omega0,
                                double lz,
                                uint32_t n_terms,
                                double *series,
                                double *quadrature);

/**
 * Real zeros of `F` below `omega_max` at transverse wavenumber `r`,
 * validated against the argument principle.
 *
 * # Safety
 * Pointers must be valid; `model` must be a live handle.
 */
enum CmStatus cm_pole_scan(const struct CmModel *model,
                           enum CmPolarization polarization,
                           double r,
                           double omega_max,
                           struct CmPoleScan **out);

/**
 * Number of poles in a scan; 0 for null.
 *
 * # Safety
 * `scan` must be null or a live handle.
 */
size_t cm_pole_scan_len(const struct CmPoleScan *scan);

/**
 * Frequency of pole `index`, in scan order.
 *
 * # Safety
 * `scan` must be a live handle and `omega` a valid pointer.
 */
enum CmStatus cm_pole_scan_get(const struct CmPoleScan *scan, size_t index, double *omega);

/**
 * Releases a pole scan. Null is ignored.
 *
 * # Safety
 * `scan` must be null or a handle from `cm_pole_scan` not yet freed.
 */
void cm_pole_scan_free(struct CmPoleScan *scan);

/**
 * Crate version as a static NUL-terminated string.
 */
const char *cm_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CASIMIR_H */
