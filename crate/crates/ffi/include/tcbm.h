#ifndef TCBM_H
#define TCBM_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum TcbmStatus {
  TCBM_STATUS_OK = 0,
  TCBM_STATUS_NULL_POINTER = 1,
  TCBM_STATUS_DOMAIN = 2,
  TCBM_STATUS_RANGE = 3,
  TCBM_STATUS_VALIDATION = 4,
  TCBM_STATUS_PRECONDITION = 5,
  TCBM_STATUS_STATE = 6,
  TCBM_STATUS_RESOURCE = 7,
  TCBM_STATUS_NUMERICAL = 8,
  TCBM_STATUS_RESOLUTION = 9,
  TCBM_STATUS_FIT = 10,
  TCBM_STATUS_DEGENERATE = 11,
  TCBM_STATUS_INTERNAL = 12,
  TCBM_STATUS_IO = 13,
  TCBM_STATUS_USAGE = 14,
  TCBM_STATUS_PANIC = 15,
} TcbmStatus;

/**
 * An iterated function system of similarities with probability weights.
 */
typedef struct TcbmIfs TcbmIfs;

/**
 * One sampled path `X_t = B^H_{V(t)}` on a time grid.
 */
typedef struct TcbmPath TcbmPath;

/**
 * A variance function `V` (the clock of the time change).
 */
typedef struct TcbmVariance TcbmVariance;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. The pointer is
 * valid until the next failing call on the same thread.
 */
const char *tcbm_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *tcbm_version(void);

/**
 * `V(t) = t` on `[0, 1]`.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum TcbmStatus tcbm_variance_identity(struct TcbmVariance **out);

/**
 * `V(t) = t^beta` on `[0, 1]`.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum TcbmStatus tcbm_variance_power_law(double beta, struct TcbmVariance **out);

/**
 * The middle-third Cantor function on `[0, 1]`.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum TcbmStatus tcbm_variance_cantor(struct TcbmVariance **out);

/**
 * Piecewise-linear `V` through `(t[i], v[i])`, `i < len`.
 *
 * # Safety
 * `t` and `v` must point to `len` readable doubles; `out` as above.
 */
enum TcbmStatus tcbm_variance_piecewise_linear(const double *t,
                                               const double *v,
                                               size_t len,
                                               struct TcbmVariance **out);

/**
 * Distribution function of the self-similar measure of `ifs`, evaluated by
 * tree descent to `depth` levels. The IFS handle is not consumed.
 *
 * # Safety
 * `ifs` must be a live handle; `out` as above.
 */
enum TcbmStatus tcbm_variance_self_similar(const struct TcbmIfs *ifs,
                                           size_t depth,
                                           struct TcbmVariance **out);

/**
 * Distribution function of the self-similar measure of `ifs`, computed by
 * iterating the self-similarity operator on a uniform grid.
 *
 * # Safety
 * `ifs` must be a live handle; `out` as above.
 */
enum TcbmStatus tcbm_variance_iterated(const struct TcbmIfs *ifs,
                                       size_t grid_size,
                                       size_t iterations,
                                       struct TcbmVariance **out);

/**
 * # Safety
 * `v` must be null or a handle not yet freed.
 */
void tcbm_variance_free(struct TcbmVariance *v);

/**
 * `V(t)`.
 *
 * # Safety
 * `v` must be a live handle and `out` writable.
 */
enum TcbmStatus tcbm_variance_eval(const struct TcbmVariance *v, double t, double *out);

/**
 * `T(s) = inf{t : V(t) > s}`, located to within `tol`.
 *
 * # Safety
 * `v` must be a live handle and `out` writable.
 */
enum TcbmStatus tcbm_variance_inverse(const struct TcbmVariance *v,
                                      double s,
                                      double tol,
                                      double *out);

/**
 * An IFS `S_i(x) = r_i x + d_i` with weights `p_i`, `i < len`.
 *
 * # Safety
 * The three arrays must hold `len` readable doubles; `out` as above.
 */
enum TcbmStatus tcbm_ifs_new(const double *ratios,
                             const double *translations,
                             const double *weights,
                             size_t len,
                             struct TcbmIfs **out);

/**
 * A named IFS: `"cantor3"`, `"uneven-2-4"` or `"golden-bernoulli"`.
 *
 * # Safety
 * `name` must be a NUL-terminated string; `out` as above.
 */
enum TcbmStatus tcbm_ifs_preset(const char *name, struct TcbmIfs **out);

/**
 * # Safety
 * `ifs` must be null or a handle not yet freed.
 */
void tcbm_ifs_free(struct TcbmIfs *ifs);

/**
 * The `L^q` spectrum `τ(q)` of the self-similar measure.
 *
 * # Safety
 * `ifs` must be a live handle and `out` writable.
 */
enum TcbmStatus tcbm_lq_spectrum(const struct TcbmIfs *ifs, double q, double tol, double *out);

/**
 * Predicted graph dimension `1 - τ(H)` of fractional Brownian motion run on
 * the distribution function of the IFS measure.
 *
 * # Safety
 * `ifs` must be a live handle and `out` writable.
 */
enum TcbmStatus tcbm_predicted_graph_dim(const struct TcbmIfs *ifs,
                                         double hurst,
                                         double tol,
                                         double *out);

/**
 * Samples `B^H_{V(t)}` at `times[0..len]` from stream `(seed, stream)`.
 * `hurst = 0.5` uses independent increments, other values the exact
 * Cholesky sampler (at most 4096 points).
 *
 * # Safety
 * `v` must be a live handle, `times` must hold `len` doubles, `out` as above.
 */
enum TcbmStatus tcbm_path_sample(const struct TcbmVariance *v,
                                 double hurst,
                                 const double *times,
                                 size_t len,
                                 uint64_t seed,
                                 uint64_t stream,
                                 struct TcbmPath **out);

/**
 * Number of grid points of the path; 0 for a null handle.
 *
 * # Safety
 * `path` must be null or a live handle.
 */
size_t tcbm_path_len(const struct TcbmPath *path);

/**
 * Copies the path values into `buf`, which must hold `len` doubles with
 * `len` equal to [`tcbm_path_len`].
 *
 * # Safety
 * `path` must be a live handle and `buf` writable for `len` doubles.
 */
enum TcbmStatus tcbm_path_values(const struct TcbmPath *path, double *buf, size_t len);

/**
 * # Safety
 * `path` must be null or a handle not yet freed.
 */
void tcbm_path_free(struct TcbmPath *path);

/**
 * Box-counting dimension of the graph fitted over dyadic levels
 * `n_min..=n_max`.
 *
 * # Safety
 * `path` must be a live handle and `out` writable.
 */
enum TcbmStatus tcbm_box_dimension(const struct TcbmPath *path,
                                   uint32_t n_min,
                                   uint32_t n_max,
                                   double *out);

/**
 * Discretized `s`-energy of the graph measure over Lebesgue measure.
 *
 * # Safety
 * `path` must be a live handle and `out` writable.
 */
enum TcbmStatus tcbm_energy(const struct TcbmPath *path, double s, double *out);

/**
 * Modulus of the Fourier transform of the graph measure at `(xi1, xi2)`.
 *
 * # Safety
 * `path` must be a live handle and `out` writable.
 */
enum TcbmStatus tcbm_fourier_abs(const struct TcbmPath *path, double xi1, double xi2, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TCBM_H */
