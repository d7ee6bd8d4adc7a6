#include "mixchain.h"

#include <cstring>
#include <new>
#include <string>

#include "mixchain/analysis.hpp"
#include "mixchain/block.hpp"
#include "mixchain/chain.hpp"
#include "mixchain/dependence.hpp"
#include "mixchain/io.hpp"
#include "mixchain/product.hpp"

#if defined(_WIN32)
#define MC_EXPORT __declspec(dllexport)
#else
#define MC_EXPORT __attribute__((visibility("default")))
#endif

struct mc_chain {
  mixchain::FiniteChain value;
};

namespace {

thread_local std::string tl_error;

void set_error(const std::string& message) { tl_error = message; }

mc_status map_code(mixchain::errc code) {
  using mixchain::errc;
  switch (code) {
    case errc::ok: return MC_OK;
    case errc::invalid_argument: return MC_ERR_INVALID_ARGUMENT;
    case errc::not_irreducible: return MC_ERR_NOT_IRREDUCIBLE;
    case errc::periodic: return MC_ERR_PERIODIC;
    case errc::tensor_too_large: return MC_ERR_TENSOR_TOO_LARGE;
    case errc::zero_marginal: return MC_ERR_ZERO_MARGINAL;
    case errc::too_many_states: return MC_ERR_TOO_MANY_STATES;
    case errc::invalid_lag: return MC_ERR_INVALID_LAG;
    case errc::degenerate_event: return MC_ERR_DEGENERATE_EVENT;
    case errc::no_anchor_lag: return MC_ERR_NO_ANCHOR_LAG;
    case errc::condition_failed: return MC_ERR_CONDITION_FAILED;
    case errc::calibration_failed: return MC_ERR_CALIBRATION_FAILED;
    case errc::not_reversible: return MC_ERR_NOT_REVERSIBLE;
    case errc::non_positive_value: return MC_ERR_NON_POSITIVE_VALUE;
    case errc::parse_error: return MC_ERR_PARSE;
    case errc::io_error: return MC_ERR_IO;
    case errc::numerical_failure: return MC_ERR_NUMERICAL;
  }
  return MC_ERR_INTERNAL;
}

template <class Fn>
mc_status guarded(Fn&& fn) {
  try {
    fn();
    return MC_OK;
  } catch (const mixchain::Error& e) {
    set_error(e.what());
    return map_code(e.code());
  } catch (const std::bad_alloc&) {
    set_error("out of memory");
    return MC_ERR_INTERNAL;
  } catch (const std::exception& e) {
    set_error(e.what());
    return MC_ERR_INTERNAL;
  }
}

char* copy_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

mc_status require(bool condition, const char* what) {
  if (condition) return MC_OK;
  set_error(std::string("null pointer: ") + what);
  return MC_ERR_NULL_POINTER;
}

}  // namespace

extern "C" {

MC_EXPORT void mc_abi_version(int32_t* major, int32_t* minor) {
  if (major) *major = MC_ABI_MAJOR;
  if (minor) *minor = MC_ABI_MINOR;
}

MC_EXPORT const char* mc_last_error_message(void) { return tl_error.c_str(); }

MC_EXPORT void mc_string_free(char* s) { delete[] s; }

MC_EXPORT void mc_chain_free(mc_chain* chain) { delete chain; }

MC_EXPORT mc_status mc_chain_from_block(int32_t n_cap, double eps, mc_chain** out) {
  if (auto st = require(out != nullptr, "out"); st != MC_OK) return st;
  *out = nullptr;
  return guarded([&] {
    mixchain::BlockParams params{n_cap, eps};
    *out = new mc_chain{mixchain::build_block(params)};
  });
}

MC_EXPORT mc_status mc_chain_from_json(const char* json_text, mc_chain** out) {
  if (auto st = require(json_text != nullptr, "json_text"); st != MC_OK) return st;
  if (auto st = require(out != nullptr, "out"); st != MC_OK) return st;
  *out = nullptr;
  return guarded([&] { *out = new mc_chain{mixchain::chain_from_json(json_text)}; });
}

MC_EXPORT mc_status mc_chain_to_json(const mc_chain* chain, char** out_json) {
  if (auto st = require(chain != nullptr, "chain"); st != MC_OK) return st;
  if (auto st = require(out_json != nullptr, "out_json"); st != MC_OK) return st;
  return guarded([&] { *out_json = copy_string(mixchain::chain_to_json(chain->value)); });
}

MC_EXPORT mc_status mc_chain_state_count(const mc_chain* chain, int32_t* out) {
  if (auto st = require(chain && out, "chain/out"); st != MC_OK) return st;
  *out = chain->value.k;
  return MC_OK;
}

MC_EXPORT mc_status mc_chain_flags(const mc_chain* chain, int32_t* irreducible,
                                   int32_t* aperiodic) {
  if (auto st = require(chain != nullptr, "chain"); st != MC_OK) return st;
  if (irreducible) *irreducible = chain->value.irreducible ? 1 : 0;
  if (aperiodic) *aperiodic = chain->value.aperiodic ? 1 : 0;
  return MC_OK;
}

MC_EXPORT mc_status mc_chain_stationarity_residual(const mc_chain* chain, double* out) {
  if (auto st = require(chain && out, "chain/out"); st != MC_OK) return st;
  return guarded([&] { *out = mixchain::stationarity_residual(chain->value.pi, chain->value.p); });
}

MC_EXPORT mc_status mc_chain_detailed_balance_residual(const mc_chain* chain, double* out) {
  if (auto st = require(chain && out, "chain/out"); st != MC_OK) return st;
  return guarded([&] { *out = mixchain::detailed_balance_residual(chain->value); });
}

MC_EXPORT mc_status mc_chain_is_reversible(const mc_chain* chain, double tol, int32_t* out) {
  if (auto st = require(chain && out, "chain/out"); st != MC_OK) return st;
  return guarded([&] { *out = mixchain::is_reversible(chain->value, tol) ? 1 : 0; });
}

MC_EXPORT mc_status mc_block_threshold(int32_t n_cap, double eps, double* out) {
  if (auto st = require(out != nullptr, "out"); st != MC_OK) return st;
  return guarded([&] { *out = mixchain::block_threshold(mixchain::BlockParams{n_cap, eps}); });
}

MC_EXPORT mc_status mc_coefficients_json(const mc_chain* chain, int64_t lag, int32_t with_lambda,
                                         char** out_json) {
  if (auto st = require(chain && out_json, "chain/out_json"); st != MC_OK) return st;
  return guarded([&] {
    auto report = mixchain::coefficients_at_lag(chain->value, lag, with_lambda != 0);
    *out_json = copy_string(mixchain::dependence_report_to_json(report));
  });
}

MC_EXPORT mc_status mc_lag_table_csv(const mc_chain* chain, int64_t lag_min, int64_t lag_max,
                                     char** out_csv) {
  if (auto st = require(chain && out_csv, "chain/out_csv"); st != MC_OK) return st;
  return guarded([&] {
    if (lag_min < 1 || lag_max < lag_min)
      mixchain::fail(mixchain::errc::invalid_lag, "lag table needs 1 <= lag_min <= lag_max");
    std::vector<std::pair<long, mixchain::DependenceReport>> rows;
    for (int64_t lag = lag_min; lag <= lag_max; ++lag)
      rows.emplace_back(static_cast<long>(lag),
                        mixchain::coefficients_at_lag(chain->value, lag, false));
    *out_csv = copy_string(mixchain::lag_table_to_csv(rows));
  });
}

MC_EXPORT mc_status mc_interlaced(const mc_chain* chain, int64_t m, double* out) {
  if (auto st = require(chain && out, "chain/out"); st != MC_OK) return st;
  return guarded([&] {
    if (m < 1) mixchain::fail(mixchain::errc::invalid_lag, "interlaced lag must be >= 1");
    *out = mixchain::rho_index_sets(chain->value, {0}, {-m, m});
  });
}

MC_EXPORT mc_status mc_indicator_correlation(const mc_chain* chain, int64_t m, int32_t top_state,
                                             double* out) {
  if (auto st = require(chain && out, "chain/out"); st != MC_OK) return st;
  return guarded([&] { *out = mixchain::indicator_correlation(chain->value, m, top_state); });
}

MC_EXPORT mc_status mc_sample_path(const mc_chain* chain, size_t length, uint64_t seed,
                                   int32_t* out_states) {
  if (auto st = require(chain && out_states, "chain/out_states"); st != MC_OK) return st;
  return guarded([&] {
    auto sample = mixchain::sample_path(chain->value, length, seed);
    for (std::size_t i = 0; i < sample.states.size(); ++i)
      out_states[i] = static_cast<int32_t>(sample.states[i]);
  });
}

MC_EXPORT mc_status mc_block_sweep(int32_t n_cap, const char* quantity, int64_t m, int32_t i,
                                   int32_t j, int32_t k_min, int32_t k_max, char** out_csv,
                                   char** out_report_json, int32_t* out_pass) {
  if (auto st = require(quantity != nullptr, "quantity"); st != MC_OK) return st;
  return guarded([&] {
    auto parsed = mixchain::sweep_quantity_from_name(quantity);
    if (!parsed)
      mixchain::fail(mixchain::errc::invalid_argument,
                     std::string("unknown sweep quantity: ") + quantity);
    mixchain::SweepRequest request;
    request.n_cap = n_cap;
    request.quantity = *parsed;
    request.m = m;
    request.i = i;
    request.j = j;
    request.k_min = k_min;
    request.k_max = k_max;
    auto result = mixchain::sweep(request);
    if (out_csv) *out_csv = copy_string(mixchain::block_sweep_to_csv(result));
    if (out_report_json) *out_report_json = copy_string(mixchain::sweep_report_to_json(result));
    if (out_pass) *out_pass = result.pass ? 1 : 0;
  });
}

MC_EXPORT mc_status mc_calibrate(int32_t n_cap, double r, int64_t h_max, double* out_eps,
                                 char** out_certificate_json) {
  return guarded([&] {
    auto calibration = mixchain::calibrate_epsilon(n_cap, r, h_max);
    if (out_eps) *out_eps = calibration.eps;
    if (out_certificate_json)
      *out_certificate_json =
          copy_string(mixchain::certificate_to_json(calibration.certificate) + "\n");
  });
}

MC_EXPORT mc_status mc_verify_theorem(double r, int32_t n_max_component, int32_t n_lags,
                                      int64_t h_max, char** out_json, char** out_csv,
                                      int32_t* out_all_ok) {
  return guarded([&] {
    auto report = mixchain::verify_theorem(r, n_max_component, n_lags, h_max);
    if (out_json) *out_json = copy_string(mixchain::theorem_report_to_json(report));
    if (out_csv) *out_csv = copy_string(mixchain::theorem_report_to_csv(report));
    if (out_all_ok) *out_all_ok = report.all_ok() ? 1 : 0;
  });
}

}  // extern "C"
