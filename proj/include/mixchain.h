/* C API for the mixchain shared library.
 *
 * All functions return mc_status (MC_OK on success). Failure details are
 * available from mc_last_error_message() (thread-local). Strings returned
 * through char** are heap-allocated; release them with mc_string_free.
 * Chains are opaque handles; release them with mc_chain_free.
 */
#ifndef MIXCHAIN_H
#define MIXCHAIN_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#define MC_ABI_MAJOR 1
#define MC_ABI_MINOR 0

typedef enum mc_status {
  MC_OK = 0,
  MC_ERR_INVALID_ARGUMENT = 1,
  MC_ERR_NOT_IRREDUCIBLE = 2,
  MC_ERR_PERIODIC = 3,
  MC_ERR_TENSOR_TOO_LARGE = 4,
  MC_ERR_ZERO_MARGINAL = 5,
  MC_ERR_TOO_MANY_STATES = 6,
  MC_ERR_INVALID_LAG = 7,
  MC_ERR_DEGENERATE_EVENT = 8,
  MC_ERR_NO_ANCHOR_LAG = 9,
  MC_ERR_CONDITION_FAILED = 10,
  MC_ERR_CALIBRATION_FAILED = 11,
  MC_ERR_NOT_REVERSIBLE = 12,
  MC_ERR_NON_POSITIVE_VALUE = 13,
  MC_ERR_PARSE = 14,
  MC_ERR_IO = 15,
  MC_ERR_NUMERICAL = 16,
  MC_ERR_NULL_POINTER = 17,
  MC_ERR_CHECK_FAILED = 18,
  MC_ERR_INTERNAL = 19
} mc_status;

typedef struct mc_chain mc_chain;

void mc_abi_version(int32_t* major, int32_t* minor);
const char* mc_last_error_message(void);
void mc_string_free(char* s);
void mc_chain_free(mc_chain* chain);

/* ---- construction ---- */

/* Build the level-N building-block chain at parameter eps. */
mc_status mc_chain_from_block(int32_t n_cap, double eps, mc_chain** out);

/* Parse the chain file format {"k":, "pi":, "p":} and enforce its invariants. */
mc_status mc_chain_from_json(const char* json_text, mc_chain** out);

mc_status mc_chain_to_json(const mc_chain* chain, char** out_json);

/* ---- chain queries ---- */

mc_status mc_chain_state_count(const mc_chain* chain, int32_t* out);
mc_status mc_chain_flags(const mc_chain* chain, int32_t* irreducible, int32_t* aperiodic);
mc_status mc_chain_stationarity_residual(const mc_chain* chain, double* out);
mc_status mc_chain_detailed_balance_residual(const mc_chain* chain, double* out);
mc_status mc_chain_is_reversible(const mc_chain* chain, double tol, int32_t* out);

/* Threshold quantity of the block family; the caller asserts it exceeds 1/2. */
mc_status mc_block_threshold(int32_t n_cap, double eps, double* out);

/* ---- coefficients ---- */

/* Dependence report of (X_0, X_lag) as JSON
 * {"psi":, "rho":, "beta":, "info":, "lambda":, "h_row":, "h_col":}.
 * with_lambda enables the event-pair enumeration (states <= 16). */
mc_status mc_coefficients_json(const mc_chain* chain, int64_t lag, int32_t with_lambda,
                               char** out_json);

/* CSV table "lag,psi,rho,beta,info" over lags [lag_min, lag_max]. */
mc_status mc_lag_table_csv(const mc_chain* chain, int64_t lag_min, int64_t lag_max,
                           char** out_csv);

/* rho(sigma(X_0), sigma(X_-m, X_m)) */
mc_status mc_interlaced(const mc_chain* chain, int64_t m, double* out);

mc_status mc_indicator_correlation(const mc_chain* chain, int64_t m, int32_t top_state,
                                   double* out);

/* Stationary sample path; out_states must hold `length` entries. */
mc_status mc_sample_path(const mc_chain* chain, size_t length, uint64_t seed,
                         int32_t* out_states);

/* ---- sweeps ---- */

/* quantity: marginal_m | transition_ij | mstep_ij | entropy | rho1 | psi_5N |
 * interlaced_m | indicator_corr_m | lambda1.
 * Grid is eps_k = (1/3) 2^-k for k in [k_min, k_max].
 * out_csv gets "eps,quantity,value" rows; out_report_json the summary
 * {"quantity":, "exponent":, "monotone":, "terminal":, "pass":}.
 * Either output pointer may be NULL. *out_pass is 1 when the sweep's trend
 * assertion holds. */
mc_status mc_block_sweep(int32_t n_cap, const char* quantity, int64_t m, int32_t i, int32_t j,
                         int32_t k_min, int32_t k_max, char** out_csv, char** out_report_json,
                         int32_t* out_pass);

/* ---- certification ---- */

/* Largest admissible eps on the dyadic grid for component size n_cap at rate
 * r; anchor lags are searched up to h_max. out_eps and out_certificate_json
 * may be NULL. */
mc_status mc_calibrate(int32_t n_cap, double r, int64_t h_max, double* out_eps,
                       char** out_certificate_json);

/* Full certification: calibrate components 3..n_max_component, assemble the
 * virtual product, evaluate every reported inequality at lags 1..n_lags.
 * *out_all_ok is 1 iff every asserted inequality and certificate holds.
 * out_json / out_csv may be NULL. */
mc_status mc_verify_theorem(double r, int32_t n_max_component, int32_t n_lags, int64_t h_max,
                            char** out_json, char** out_csv, int32_t* out_all_ok);

#ifdef __cplusplus
}
#endif

#endif /* MIXCHAIN_H */
