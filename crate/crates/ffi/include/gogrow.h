#ifndef GOGROW_H
#define GOGROW_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Which characteristic function to search.
 */
typedef enum GgEquilibrium {
  GG_EQUILIBRIUM_AT_ZERO = 0,
  GG_EQUILIBRIUM_AT_STAR = 1,
  GG_EQUILIBRIUM_REDUCED = 2,
} GgEquilibrium;

typedef enum GgStatus {
  GG_STATUS_OK = 0,
  GG_STATUS_INVALID_INPUT = 1,
  GG_STATUS_INVARIANCE_VIOLATION = 2,
  GG_STATUS_NON_FINITE = 3,
  GG_STATUS_BOUNDARY_TOO_CLOSE = 4,
  GG_STATUS_SUBDIVISION_FAILURE = 5,
  GG_STATUS_DEGENERATE_PARAMETER = 6,
  GG_STATUS_SINGULARITY = 7,
  GG_STATUS_INSUFFICIENT_OSCILLATION = 8,
  GG_STATUS_NULL_POINTER = 9,
  GG_STATUS_PANIC = 10,
} GgStatus;

/**
 * Density series of one lattice simulation.
 */
typedef struct GgDensitySeries GgDensitySeries;

/**
 * Characteristic roots sorted by decreasing real part.
 */
typedef struct GgRootSet GgRootSet;

/**
 * Numerical solution of the delay equation.
 */
typedef struct GgTrajectory GgTrajectory;

typedef struct GgRoot {
  double re;
  double im;
  double residual;
} GgRoot;

typedef struct GgLatticeParams {
  size_t n_dims;
  size_t side;
  double spacing;
  double seeding;
  double switch_rate;
  double cycle_delay;
  double motility_rate;
} GgLatticeParams;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread; empty after a success.
 * The pointer stays valid until the next call on the same thread.
 */
const char *gg_last_error(void);

/**
 * Equilibria `0` and `1 / (rho + 1)`.
 *
 * # Safety
 * `zero` and `positive` must be valid for writes.
 */
enum GgStatus gg_equilibria(double rho, double *zero, double *positive);

/**
 * Lipschitz constant of the right-hand side on the ball of radius `m`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum GgStatus gg_lipschitz_bound(double m, double rho, double *out);

/**
 * Stability threshold `rho_j`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum GgStatus gg_rho_crit(size_t j, double *out);

/**
 * Point of the curve `C_j^-` at parameter `nu`.
 *
 * # Safety
 * `alpha` and `beta` must be valid for writes.
 */
enum GgStatus gg_c_curve(size_t j, double nu, double *alpha, double *beta);

/**
 * Number of characteristic roots with positive real part at the zero
 * equilibrium.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum GgStatus gg_unstable_count_at_zero(double rho, size_t *out);

/**
 * Integrates from `scale (cos(a s^b) + 1)` with `steps` steps per delay.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum GgStatus gg_integrate_cosine(double rho,
                                  double scale,
                                  double a,
                                  double b,
                                  size_t steps,
                                  double t_end,
                                  struct GgTrajectory **out);

/**
 * Integrates from history samples on the uniform grid of `[-1, 0]`;
 * `count - 1` is the number of steps per delay.
 *
 * # Safety
 * `samples` must point to `count` readable doubles; `out` must be valid
 * for writes.
 */
enum GgStatus gg_integrate_samples(double rho,
                                   const double *samples,
                                   size_t count,
                                   double t_end,
                                   struct GgTrajectory **out);

/**
 * Number of nodes `t_k = k h`, `k = 0, 1, ...`.
 *
 * # Safety
 * `traj` must come from an integrate call and not yet be freed.
 */
enum GgStatus gg_trajectory_len(const struct GgTrajectory *traj, size_t *out);

/**
 * Step size `h`.
 *
 * # Safety
 * As for [`gg_trajectory_len`].
 */
enum GgStatus gg_trajectory_step(const struct GgTrajectory *traj, double *out);

/**
 * Copies up to `capacity` node values into `buf` and stores the number
 * copied in `written`.
 *
 * # Safety
 * `buf` must be writable for `capacity` doubles.
 */
enum GgStatus gg_trajectory_values(const struct GgTrajectory *traj,
                                   double *buf,
                                   size_t capacity,
                                   size_t *written);

/**
 * Dense-output value `x(t)` for `t` in `[-1, t_end]`.
 *
 * # Safety
 * As for [`gg_trajectory_len`].
 */
enum GgStatus gg_trajectory_eval(const struct GgTrajectory *traj, double t, double *out);

/**
 * Releases a trajectory; null is ignored.
 *
 * # Safety
 * `traj` must be null or come from an integrate call, and is invalid
 * afterwards.
 */
void gg_trajectory_free(struct GgTrajectory *traj);

/**
 * Characteristic roots inside `[re_min, re_max] x [im_min, im_max]`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum GgStatus gg_find_roots(enum GgEquilibrium equilibrium,
                            double rho,
                            double re_min,
                            double re_max,
                            double im_min,
                            double im_max,
                            size_t max_roots,
                            struct GgRootSet **out);

/**
 * # Safety
 * `set` must come from [`gg_find_roots`] and not yet be freed.
 */
enum GgStatus gg_root_set_len(const struct GgRootSet *set, size_t *out);

/**
 * Root `index` of the set.
 *
 * # Safety
 * As for [`gg_root_set_len`].
 */
enum GgStatus gg_root_set_get(const struct GgRootSet *set, size_t index, struct GgRoot *out);

/**
 * # Safety
 * `set` must be null or come from [`gg_find_roots`], and is invalid
 * afterwards.
 */
void gg_root_set_free(struct GgRootSet *set);

/**
 * Default lattice parameters.
 */
struct GgLatticeParams gg_lattice_default(void);

/**
 * One lattice simulation from `t = 0` to `t_end`, recorded every
 * `record_dt`, using random stream `stream` of `seed`.
 *
 * # Safety
 * `params` must be readable; `out` must be valid for writes.
 */
enum GgStatus gg_abm_run(const struct GgLatticeParams *params,
                         uint64_t seed,
                         uint64_t stream,
                         double t_end,
                         double record_dt,
                         struct GgDensitySeries **out);

/**
 * # Safety
 * `series` must come from [`gg_abm_run`] and not yet be freed.
 */
enum GgStatus gg_density_series_len(const struct GgDensitySeries *series, size_t *out);

/**
 * Time, motile and proliferative density at record `index`.
 *
 * # Safety
 * As for [`gg_density_series_len`]; the output pointers must be writable.
 */
enum GgStatus gg_density_series_get(const struct GgDensitySeries *series,
                                    size_t index,
                                    double *t,
                                    double *m,
                                    double *p);

/**
 * # Safety
 * `series` must be null or come from [`gg_abm_run`], and is invalid
 * afterwards.
 */
void gg_density_series_free(struct GgDensitySeries *series);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* GOGROW_H */
