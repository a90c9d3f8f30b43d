#ifndef TRICHOTOMY_H
#define TRICHOTOMY_H

/* Generated by cbindgen from the trichotomy-ffi crate; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status code of every FFI call.
 */
typedef enum TriStatus {
  /**
   * Success; out parameters are valid.
   */
  TRI_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  TRI_STATUS_NULL_ARGUMENT = 1,
  /**
   * A string argument was not valid UTF-8.
   */
  TRI_STATUS_UTF8 = 2,
  /**
   * Malformed configuration (bad TOML, out-of-range parameter).
   */
  TRI_STATUS_CONFIG = 3,
  /**
   * A point, tuple, or label fell outside the domain.
   */
  TRI_STATUS_DOMAIN = 4,
  /**
   * An explicit search or materialization budget was exceeded.
   */
  TRI_STATUS_BUDGET = 5,
  /**
   * Operation applied to a handle in the wrong state.
   */
  TRI_STATUS_STATE = 6,
  /**
   * Observed data is inconsistent with every hypothesis.
   */
  TRI_STATUS_REALIZABILITY = 7,
  /**
   * The requested object does not exist (no such tree, pair, schedule).
   */
  TRI_STATUS_CONSTRUCTION = 8,
  /**
   * I/O failure.
   */
  TRI_STATUS_IO = 9,
  /**
   * A panic was caught at the ABI boundary; see `tri_last_error`.
   */
  TRI_STATUS_PANIC = 10,
} TriStatus;

/**
 * An immutable concept class plus the spec it was generated from.
 */
typedef struct TriClass TriClass;

/**
 * A finished learning curve.
 */
typedef struct TriCurve TriCurve;

/**
 * A stateful online-learner session over a class.
 */
typedef struct TriRunner TriRunner;

/**
 * One aggregated grid point of a learning curve.
 */
typedef struct TriCurvePoint {
  /**
   * Sample size.
   */
  size_t n;
  /**
   * Mean exact error over the seeds.
   */
  double mean_err;
  /**
   * Fraction of seeds with strictly positive error.
   */
  double p_nonzero;
  /**
   * Standard error of the mean.
   */
  double stderr;
  /**
   * Seeds aggregated.
   */
  size_t seeds;
} TriCurvePoint;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the most recent failure on this thread, NUL-terminated.
 * Valid until the next failing call on the same thread; never null.
 */
const char *tri_last_error(void);

/**
 * Release a string returned by this library.  Null is a no-op.
 *
 * # Safety
 * `text` must be a pointer previously returned through a `char **` output
 * of this library, not yet freed.
 */
void tri_string_free(char *text);

/**
 * Build a concept class from a TOML class table, e.g.
 * `kind = "thresholds"\nm = 16`.
 *
 * # Safety
 * `spec_toml` must be NUL-terminated; `out` must be a valid pointer.
 */
enum TriStatus tri_class_new(const char *spec_toml, struct TriClass **out);

/**
 * Release a class handle.  Null is a no-op.
 *
 * # Safety
 * `class` must be a handle from [`tri_class_new`], not yet freed.
 */
void tri_class_free(struct TriClass *class_);

/**
 * Number of domain points.
 *
 * # Safety
 * `class` must be a live handle; `out` must be valid.
 */
enum TriStatus tri_class_domain_size(const struct TriClass *class_, size_t *out);

/**
 * Number of hypotheses.
 *
 * # Safety
 * `class` must be a live handle; `out` must be valid.
 */
enum TriStatus tri_class_hypothesis_count(const struct TriClass *class_, uint64_t *out);

/**
 * Littlestone dimension, searched up to `cap`.  `*out_exact` reports
 * whether the value is exact or only a certified lower bound at the cap.
 *
 * # Safety
 * `class` must be a live handle; both outputs must be valid.
 */
enum TriStatus tri_class_littlestone_dimension(const struct TriClass *class_,
                                               uint32_t cap,
                                               int64_t *out_value,
                                               bool *out_exact);

/**
 * VC dimension, searched up to `cap`.  `*out_exact` reports whether the
 * value is exact or only a certified lower bound at the cap.
 *
 * # Safety
 * `class` must be a live handle; both outputs must be valid.
 */
enum TriStatus tri_class_vc_dimension(const struct TriClass *class_,
                                      uint32_t cap,
                                      int64_t *out_value,
                                      bool *out_exact);

/**
 * Structural rate verdict (exponential / linear / arbitrarily slow) with
 * evidence, as a JSON document.  Free the string with [`tri_string_free`].
 *
 * # Safety
 * `class` must be a live handle; `out_json` must be valid.
 */
enum TriStatus tri_class_verdict_json(const struct TriClass *class_, char **out_json);

/**
 * Start an online-learner session on the class.
 *
 * # Safety
 * `class` must be a live handle; `out` must be valid.
 */
enum TriStatus tri_runner_new(const struct TriClass *class_, struct TriRunner **out);

/**
 * Release a runner handle.  Null is a no-op.
 *
 * # Safety
 * `runner` must be a handle from [`tri_runner_new`], not yet freed.
 */
void tri_runner_free(struct TriRunner *runner);

/**
 * The learner's prediction at point `x`; does not change state.
 *
 * # Safety
 * `runner` must be a live handle; `out_prediction` must be valid.
 */
enum TriStatus tri_runner_predict(const struct TriRunner *runner,
                                  uint32_t x,
                                  uint8_t *out_prediction);

/**
 * Advance the learner on an observed `(x, y)` pair.  `*out_mistake`
 * reports whether the learner had predicted wrongly.
 *
 * # Safety
 * `runner` must be a live handle; `out_mistake` must be valid.
 */
enum TriStatus tri_runner_observe(struct TriRunner *runner,
                                  uint32_t x,
                                  uint8_t y,
                                  bool *out_mistake);

/**
 * Mistakes made so far.
 *
 * # Safety
 * `runner` must be a live handle; `out` must be valid.
 */
enum TriStatus tri_runner_mistakes(const struct TriRunner *runner, uint64_t *out);

/**
 * Littlestone dimension of the class restricted by the mistakes so far —
 * how many more mistakes an adversary can still force.
 *
 * # Safety
 * `runner` must be a live handle; `out` must be valid.
 */
enum TriStatus tri_runner_game_value(const struct TriRunner *runner, int64_t *out);

/**
 * Run a learning-curve experiment from a TOML experiment spec (same schema
 * as the CLI `curve` subcommand).
 *
 * # Safety
 * `spec_toml` must be NUL-terminated; `out` must be valid.
 */
enum TriStatus tri_curve_run(const char *spec_toml, struct TriCurve **out);

/**
 * Release a curve handle.  Null is a no-op.
 *
 * # Safety
 * `curve` must be a handle from [`tri_curve_run`], not yet freed.
 */
void tri_curve_free(struct TriCurve *curve);

/**
 * Number of grid points in the curve.
 *
 * # Safety
 * `curve` must be a live handle; `out` must be valid.
 */
enum TriStatus tri_curve_len(const struct TriCurve *curve, size_t *out);

/**
 * Copy out one grid point by index.
 *
 * # Safety
 * `curve` must be a live handle; `out` must be valid.
 */
enum TriStatus tri_curve_point(const struct TriCurve *curve,
                               size_t index,
                               struct TriCurvePoint *out);

/**
 * The curve as CSV (header `n,mean_err,p_nonzero,stderr,seeds`).  Free the
 * string with [`tri_string_free`].
 *
 * # Safety
 * `curve` must be a live handle; `out_csv` must be valid.
 */
enum TriStatus tri_curve_csv(const struct TriCurve *curve, char **out_csv);

/**
 * Decay-model fits of the curve for both metrics (mean error and
 * P(error>0)), as a JSON document.  Free the string with
 * [`tri_string_free`].
 *
 * # Safety
 * `curve` must be a live handle; `out_json` must be valid.
 */
enum TriStatus tri_curve_fit_json(const struct TriCurve *curve, char **out_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TRICHOTOMY_H */
