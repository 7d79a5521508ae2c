/* Copyright 2026 The nttmul Authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * C interface to the nttmul library: ring parameters, reference negacyclic
 * multiplication and the cycle-accurate pipeline simulator.
 *
 * Every fallible call returns an nttmul_status. On failure a description is
 * available from nttmul_last_error() until the next call on the same thread.
 * Handles are opaque; destroy them with the matching *_destroy function.
 */
#ifndef NTTMUL_NTTMUL_H
#define NTTMUL_NTTMUL_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(NTTMUL_BUILDING)
#    define NTTMUL_API __declspec(dllexport)
#  else
#    define NTTMUL_API __declspec(dllimport)
#  endif
#else
#  define NTTMUL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum nttmul_status
{
    NTTMUL_OK = 0,
    NTTMUL_E_INVALID_ARGUMENT = 1,
    NTTMUL_E_INVALID_RING = 2,
    NTTMUL_E_DOMAIN = 3,
    NTTMUL_E_PARSE = 4,
    NTTMUL_E_IO = 5,
    NTTMUL_E_VALIDATION = 6,
    NTTMUL_E_SIMULATION_FAULT = 7,
    NTTMUL_E_INTERNAL = 99
} nttmul_status;

typedef struct nttmul_params nttmul_params;
typedef struct nttmul_sim nttmul_sim;

NTTMUL_API const char* nttmul_version(void);
NTTMUL_API const char* nttmul_status_name(nttmul_status status);
/* Thread-local; empty string if the last call succeeded. */
NTTMUL_API const char* nttmul_last_error(void);
/* Releases strings returned through char** out-parameters. */
NTTMUL_API void nttmul_string_free(char* text);

/* ---- Modular arithmetic ------------------------------------------------ */

NTTMUL_API int nttmul_validate_ring(uint64_t modulus, uint64_t n);
NTTMUL_API nttmul_status nttmul_find_barrett_constants(uint64_t modulus, uint32_t* k, uint64_t* u);

typedef struct nttmul_barrett_verdict
{
    int valid;
    int exhaustive;
    int has_counterexample;
    uint64_t first_counterexample;
    uint64_t inputs_tested;
    uint64_t failures;
} nttmul_barrett_verdict;

/* Checks (k, u) against the true remainder; see the library docs for the
 * input set. `random_samples` uniform inputs are drawn from `seed`. */
NTTMUL_API nttmul_status nttmul_barrett_validate(uint64_t modulus, uint32_t k, uint64_t u,
                                                 uint64_t random_samples, uint64_t seed,
                                                 nttmul_barrett_verdict* out);

/* ---- Parameters -------------------------------------------------------- */

typedef struct nttmul_params_info
{
    uint64_t modulus;
    uint32_t n;
    uint32_t stages;
    uint64_t omega;
    uint64_t phi;
    uint64_t omega_inv;
    uint64_t phi_inv;
    uint64_t n_inv;
    uint32_t barrett_k;
    uint64_t barrett_u;
    int uses_fixed_reducer;
} nttmul_params_info;

NTTMUL_API nttmul_status nttmul_params_create(uint64_t modulus, uint32_t n, nttmul_params** out);
NTTMUL_API nttmul_status nttmul_params_load(const char* path, nttmul_params** out);
NTTMUL_API nttmul_status nttmul_params_save(const nttmul_params* params, const char* path);
NTTMUL_API nttmul_status nttmul_params_get_info(const nttmul_params* params, nttmul_params_info* out);
NTTMUL_API void nttmul_params_destroy(nttmul_params* params);

/* ---- Reference multiplication ------------------------------------------ */

typedef enum nttmul_method
{
    NTTMUL_METHOD_NAIVE = 0,
    NTTMUL_METHOD_NTT = 1
} nttmul_method;

/* c = a * b mod (x^N + 1, M). All arrays hold `n` coefficients, which must equal N. */
NTTMUL_API nttmul_status nttmul_multiply(const nttmul_params* params, nttmul_method method,
                                         const uint64_t* a, const uint64_t* b, uint64_t* c,
                                         size_t n);

/* ---- Pipeline simulator ------------------------------------------------ */

typedef enum nttmul_mode
{
    NTTMUL_MODE_SCHEDULE = 0,
    NTTMUL_MODE_STRUCTURAL = 1
} nttmul_mode;

typedef enum nttmul_handoff
{
    NTTMUL_HANDOFF_FRAME_SYNC = 0,
    NTTMUL_HANDOFF_STREAMING = 1
} nttmul_handoff;

typedef struct nttmul_sim_config
{
    nttmul_mode mode;
    uint32_t butterfly_latency;
    uint32_t multiplier_latency;
    nttmul_handoff handoff;
    uint32_t feed_gap;
    int record_trace;
    /* Debug hook; negative disables it. */
    int64_t corrupt_tag_at_cycle;
} nttmul_sim_config;

/* Fills the defaults for `mode` (unit latencies for schedule mode). */
NTTMUL_API void nttmul_sim_config_init(nttmul_mode mode, nttmul_sim_config* out);

NTTMUL_API nttmul_status nttmul_sim_create(const nttmul_params* params, const nttmul_sim_config* config,
                                           nttmul_sim** out);
/* Queues one operand pair. */
NTTMUL_API nttmul_status nttmul_sim_push(nttmul_sim* sim, const uint64_t* a, const uint64_t* b, size_t n);
/* Streams every queued pair through the pipeline. The trace recorded so far
 * survives a NTTMUL_E_SIMULATION_FAULT. */
NTTMUL_API nttmul_status nttmul_sim_run(nttmul_sim* sim);
NTTMUL_API size_t nttmul_sim_product_count(const nttmul_sim* sim);
NTTMUL_API nttmul_status nttmul_sim_product(const nttmul_sim* sim, size_t index, uint64_t* c, size_t n);
NTTMUL_API nttmul_status nttmul_sim_report_json(const nttmul_sim* sim, char** out);
NTTMUL_API nttmul_status nttmul_sim_write_trace(const nttmul_sim* sim, const char* path);
NTTMUL_API void nttmul_sim_destroy(nttmul_sim* sim);

#ifdef __cplusplus
}
#endif

#endif /* NTTMUL_NTTMUL_H */
