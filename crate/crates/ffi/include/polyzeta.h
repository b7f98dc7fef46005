#ifndef POLYZETA_H
#define POLYZETA_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes mirroring the CLI exit-code contract.
 */
typedef enum {
  /**
   * Success.
   */
  PZ_OK = 0,
  /**
   * Invalid argument or unusable input.
   */
  PZ_USAGE = 2,
  /**
   * Internal inconsistency in the derivation.
   */
  PZ_INTERNAL = 3,
  /**
   * A required pointer argument was null.
   */
  PZ_NULL_POINTER = 4,
} PzStatus;

/**
 * Opaque handle over a derived engine.
 */
typedef struct PzEngine PzEngine;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the most recent failure on this thread.  The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *pz_last_error(void);

/**
 * Derive an engine up to `max_weight` (>= 2) and hand back an owned handle.
 *
 * # Safety
 * `out` must be null or a valid pointer to a `PzEngine*` slot.
 */
PzStatus pz_engine_new(uint32_t max_weight, PzEngine **out);

/**
 * Release an engine handle.  Null is ignored.
 *
 * # Safety
 * `engine` must be null or a pointer previously returned by
 * `pz_engine_new` and not yet freed.
 */
void pz_engine_free(PzEngine *engine);

/**
 * Release a string returned by this library.  Null is ignored.
 *
 * # Safety
 * `s` must be null or a pointer previously returned through an
 * out-parameter of this library and not yet freed.
 */
void pz_string_free(char *s);

/**
 * Reduce a convergent zeta value given as a composition string ("2,1") to
 * canonical form.  On success writes a JSON object
 * `{"input", "canonical", "display"}`.
 *
 * # Safety
 * `engine` must be a live handle from `pz_engine_new`, `composition` a
 * NUL-terminated string, `out_json` a valid slot for a `char*`.
 */
PzStatus pz_reduce_composition(PzEngine *engine, const char *composition, char **out_json);

/**
 * Regularized constant of a (possibly divergent) harmonic sum given as a
 * composition string; `shuffle_side` non-zero selects the shuffle
 * regularization.
 *
 * # Safety
 * Same contracts as `pz_reduce_composition`.
 */
PzStatus pz_gamma_constant(PzEngine *engine,
                           const char *composition,
                           int32_t shuffle_side,
                           char **out_json);

/**
 * Derived rewrite rules and irreducibles as JSON.  `side` is 'x', 'y' or
 * 'b' for both.
 *
 * # Safety
 * `engine` must be a live handle, `out_json` a valid slot for a `char*`.
 */
PzStatus pz_relations_json(const PzEngine *engine, char side, char **out_json);

/**
 * Lyndon words of one alphabet ('x' or 'y') up to a weight, as a JSON
 * array of word strings.  No engine required.
 *
 * # Safety
 * `out_json` must be a valid slot for a `char*`.
 */
PzStatus pz_lyndon_words(char alphabet, uint32_t max_weight, char **out_json);

/**
 * Partial-sum estimate of a convergent zeta value; writes the f64 estimate
 * and its error bound.
 *
 * # Safety
 * `composition` must be a NUL-terminated string; `out_value` and `out_err`
 * must be valid `double` slots.
 */
PzStatus pz_mzv_estimate(const char *composition,
                         uint64_t n,
                         int32_t refine,
                         double *out_value,
                         double *out_err);

/**
 * Estimate of the Euler constant from n partial-sum terms.
 *
 * # Safety
 * `out_value` must be a valid `double` slot.
 */
PzStatus pz_euler_gamma(uint64_t n, double *out_value);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* POLYZETA_H */
