/* C bindings for the popmaj exact-majority protocol library. */

#ifndef POPMAJ_H
#define POPMAJ_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes for every FFI entry point.
typedef enum PopmajStatus {
  POPMAJ_STATUS_OK = 0,
  POPMAJ_STATUS_NULL_ARGUMENT = 1,
  POPMAJ_STATUS_INVALID_ARGUMENT = 2,
  POPMAJ_STATUS_INVALID_UTF8 = 3,
  POPMAJ_STATUS_IO_ERROR = 4,
  // The verifier's configuration space exceeds its hard limit.
  POPMAJ_STATUS_TOO_LARGE = 5,
  // The simulation exhausted its interaction budget without silencing.
  POPMAJ_STATUS_DID_NOT_SILENCE = 6,
  POPMAJ_STATUS_INTERNAL_ERROR = 7,
} PopmajStatus;

// Opaque simulation handle: one population, its parameters, and a seeded
// scheduler.
typedef struct PopmajSim PopmajSim;

// Trial results in plain C types. `silenced` is false when the budget ran
// out; `interactions` then holds the budget.
typedef struct PopmajTrialResult {
  uint32_t n;
  uint32_t num_a;
  bool silenced;
  uint64_t interactions;
  double parallel_time;
  uint64_t resets;
  // All outputs equal the majority opinion of the inputs.
  bool correct;
} PopmajTrialResult;

// Verifier results in plain C types.
typedef struct PopmajVerifyResult {
  uint64_t state_count;
  uint64_t configuration_count;
  uint64_t terminal_scc_count;
  bool all_terminal_silent_correct;
  uint64_t violation_count;
} PopmajVerifyResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// ABI revision; bump on any breaking change to this header.
uint32_t popmaj_abi_version(void);

// Static description of a status code.
const char *popmaj_status_message(enum PopmajStatus status);

// Create a simulation.
//
// `init_kind` is one of `uniform_random_state`, `all_unsettled`,
// `mid_reset`, `wrong_answers`, `duplicate_ranks`, `lb_flip`, or
// `file:PATH`. `t_rank` of 0 selects the default. On success `*out`
// owns the handle.
//
// # Safety
// `init_kind` must be a valid NUL-terminated string and `out` a valid
// pointer.
enum PopmajStatus popmaj_sim_new(uint32_t n,
                                 uint32_t num_a,
                                 uint32_t t_rank,
                                 uint64_t seed,
                                 const char *init_kind,
                                 struct PopmajSim **out);

// Release a handle. A null pointer is a no-op.
//
// # Safety
// `sim` must have come from `popmaj_sim_new` and not be freed twice.
void popmaj_sim_free(struct PopmajSim *sim);

// Total interactions executed so far on this handle.
//
// # Safety
// `sim` must be a live handle and `out` a valid pointer.
enum PopmajStatus popmaj_sim_interactions(const struct PopmajSim *sim, uint64_t *out);

// Drive the simulation until silence or until `max_interactions` more
// interactions have run (0 selects the default budget). The final
// configuration stays in the handle; `result` may be null if only the
// status matters.
//
// # Safety
// `sim` must be a live handle.
enum PopmajStatus popmaj_sim_run(struct PopmajSim *sim,
                                 uint64_t max_interactions,
                                 struct PopmajTrialResult *result);

// Current output of one agent: 0 = A, 1 = B, 2 = tie.
//
// # Safety
// `sim` must be a live handle and `out` a valid pointer.
enum PopmajStatus popmaj_sim_output(const struct PopmajSim *sim, uint32_t agent, uint8_t *out);

// Whether the current configuration is silent (no interaction can change
// any state). O(n^2) exact check.
//
// # Safety
// `sim` must be a live handle and `out` a valid pointer.
enum PopmajStatus popmaj_sim_is_silent(const struct PopmajSim *sim, bool *out);

// Write the current configuration as a snapshot file.
//
// # Safety
// `sim` must be a live handle and `path` a valid NUL-terminated string.
enum PopmajStatus popmaj_sim_save_snapshot(const struct PopmajSim *sim, const char *path);

// Exhaustively verify stabilization for the input string (over {A, B})
// with the given counter caps.
//
// # Safety
// `inputs` must be a valid NUL-terminated string and `result` a valid
// pointer.
enum PopmajStatus popmaj_verify(const char *inputs,
                                uint32_t cap_reset,
                                uint32_t cap_wait,
                                uint32_t cap_timer,
                                struct PopmajVerifyResult *result);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* POPMAJ_H */
