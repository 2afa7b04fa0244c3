#ifndef RING_DISPERSION_H
#define RING_DISPERSION_H

/* Generated by cbindgen. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum RdStatus {
  RD_STATUS_OK = 0,
  RD_STATUS_NULL_POINTER = 1,
  RD_STATUS_INVALID_ARGUMENT = 2,
  RD_STATUS_SCENARIO_ERROR = 3,
  RD_STATUS_GUARD_EXCEEDED = 4,
  RD_STATUS_BUFFER_TOO_SMALL = 5,
  RD_STATUS_PANIC = 6,
} RdStatus;

/**
 * A running simulation.
 */
typedef struct RdSimulation RdSimulation;

/**
 * The last error raised on this thread, or null. The pointer stays valid
 * until the next failing call on the same thread.
 */
const char *rd_last_error_message(void);

/**
 * Creates a simulation.
 *
 * `mode` may be null for the policy's usual mode. A negative `k` means full
 * visibility. `multiplicities` (length `n`) may be null for a random start.
 * `orientations` (length `n`, nonzero for reversed, in label order) may be
 * null for the default assignment.
 *
 * # Safety
 * String arguments must be null or NUL-terminated. Array arguments must be
 * null or point to `n` readable elements. `out` must be writable.
 */
enum RdStatus rd_simulation_new(size_t n,
                                const char *policy,
                                const char *adversary,
                                const char *mode,
                                int64_t k,
                                const size_t *multiplicities,
                                const uint8_t *orientations,
                                uint64_t seed,
                                struct RdSimulation **out);

/**
 * Plays one round. `dispersed` may be null.
 *
 * # Safety
 * `sim` must come from [`rd_simulation_new`]; `dispersed` must be null or
 * writable.
 */
enum RdStatus rd_simulation_step(struct RdSimulation *sim, bool *dispersed);

/**
 * Steps until dispersion or until `max_rounds` rounds have run in total.
 *
 * # Safety
 * As for [`rd_simulation_step`]; `rounds` must be null or writable.
 */
enum RdStatus rd_simulation_run(struct RdSimulation *sim,
                                size_t max_rounds,
                                size_t *rounds,
                                bool *dispersed);

/**
 * Rounds played so far, or 0 for a null handle.
 *
 * # Safety
 * `sim` must be null or come from [`rd_simulation_new`].
 */
size_t rd_simulation_round(const struct RdSimulation *sim);

/**
 * Copies the robots-per-node counts into `buf`, which must hold `n` entries.
 *
 * # Safety
 * `sim` must come from [`rd_simulation_new`]; `buf` must point to `len`
 * writable elements.
 */
enum RdStatus rd_simulation_multiplicities(const struct RdSimulation *sim, size_t *buf, size_t len);

/**
 * # Safety
 * `sim` must be null or come from [`rd_simulation_new`], and not be used
 * afterwards.
 */
void rd_simulation_free(struct RdSimulation *sim);

/**
 * Exhaustively checks that `policy` disperses within `bound` rounds on a ring
 * of `n` nodes. `worst_case` receives `SIZE_MAX` when some run never
 * disperses. `mode` may be null for the policy's usual mode.
 *
 * # Safety
 * Strings must be NUL-terminated (or null for `mode`); `worst_case` and
 * `pass` must be writable.
 */
enum RdStatus rd_verify_worst_case(const char *policy,
                                   const char *mode,
                                   size_t n,
                                   size_t bound,
                                   size_t *worst_case,
                                   bool *pass);

#endif  /* RING_DISPERSION_H */
