// mixchain command-line front end. Talks to the shared library exclusively
// through the C API in mixchain.h.
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "mixchain.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;

struct StringGuard {
  char* value = nullptr;
  ~StringGuard() { mc_string_free(value); }
};

struct ChainGuard {
  mc_chain* value = nullptr;
  ~ChainGuard() { mc_chain_free(value); }
};

int exit_code_for(mc_status status) {
  switch (status) {
    case MC_OK: return kExitOk;
    case MC_ERR_INVALID_ARGUMENT:
    case MC_ERR_INVALID_LAG:
    case MC_ERR_NULL_POINTER: return kExitUsage;
    default: return kExitCheckFailed;
  }
}

int report_error(mc_status status) {
  std::cerr << "error: " << mc_last_error_message() << "\n";
  return exit_code_for(status);
}

bool write_or_print(const std::string& path, const char* content) {
  if (path.empty()) {
    std::cout << content;
    return true;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot open " << path << " for writing\n";
    return false;
  }
  out << content;
  return static_cast<bool>(out);
}

bool read_all(const std::string& path, std::string& out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream buffer;
  buffer << in.rdbuf();
  out = buffer.str();
  return true;
}

bool parse_component_range(const std::string& text, int& lo, int& hi) {
  auto sep = text.find("..");
  if (sep == std::string::npos) return false;
  try {
    lo = std::stoi(text.substr(0, sep));
    hi = std::stoi(text.substr(sep + 2));
  } catch (...) {
    return false;
  }
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact dependence coefficients and mixing certification for finite reversible chains"};
  app.require_subcommand(1);

  // ---- block ----
  auto* block = app.add_subcommand("block", "building-block chain operations");
  block->require_subcommand(1);

  int n_cap = 3;
  double eps = 0.1;
  std::string out_path, json_path, csv_path, chain_path;
  std::int64_t lag = 1, lag_min = 1, lag_max = 1, m_param = 1;
  bool with_lambda = false;

  auto* build = block->add_subcommand("build", "construct a block chain and write its JSON");
  build->add_option("--n", n_cap, "level count N (>= 3)")->required();
  build->add_option("--eps", eps, "parameter eps in (0, 1/3]")->required();
  build->add_option("--out", out_path, "output path (stdout when omitted)");

  auto* coeffs = block->add_subcommand("coeffs", "dependence coefficients of (X_0, X_lag)");
  coeffs->add_option("--n", n_cap, "level count N");
  coeffs->add_option("--eps", eps, "parameter eps");
  coeffs->add_option("--chain", chain_path, "chain JSON file (instead of --n/--eps)");
  coeffs->add_option("--lag", lag, "lag (default 1)");
  coeffs->add_flag("--lambda", with_lambda, "include the event-pair coefficient");
  coeffs->add_option("--json", json_path, "write the report JSON here");
  coeffs->add_option("--table-min", lag_min, "emit a lag table starting here");
  coeffs->add_option("--table-max", lag_max, "lag table end (with --csv)");
  coeffs->add_option("--csv", csv_path, "write the lag,psi,rho,beta,info table here");

  std::string quantity = "entropy";
  int k_min = 0, k_max = 14, cell_i = 0, cell_j = 0;
  auto* sweep_cmd = block->add_subcommand("sweep", "evaluate a quantity over the dyadic eps grid");
  sweep_cmd->add_option("--n", n_cap, "level count N")->required();
  sweep_cmd->add_option("--quantity", quantity,
                        "marginal_m|transition_ij|mstep_ij|entropy|rho1|psi_5N|interlaced_m|"
                        "indicator_corr_m|lambda1")
      ->required();
  sweep_cmd->add_option("--m", m_param, "level / lag parameter");
  sweep_cmd->add_option("--i", cell_i, "row state");
  sweep_cmd->add_option("--j", cell_j, "column state");
  sweep_cmd->add_option("--kmin", k_min, "coarsest grid index");
  sweep_cmd->add_option("--kmax", k_max, "finest grid index");
  sweep_cmd->add_option("--out", csv_path, "write eps,quantity,value CSV here");
  sweep_cmd->add_option("--json", json_path, "write the trend report JSON here");

  auto* interlaced = block->add_subcommand("interlaced", "rho(sigma(X_0), sigma(X_-m, X_m))");
  interlaced->add_option("--n", n_cap, "level count N")->required();
  interlaced->add_option("--eps", eps, "parameter eps")->required();
  interlaced->add_option("--m", m_param, "half-distance m (>= 1)")->required();

  // ---- chain check ----
  auto* chain_cmd = app.add_subcommand("chain", "chain file operations");
  chain_cmd->require_subcommand(1);
  auto* check = chain_cmd->add_subcommand("check", "validate a chain JSON file");
  check->add_option("--in", chain_path, "chain JSON file")->required();
  double reversibility_tol = 1e-12;
  check->add_option("--tol", reversibility_tol, "reversibility tolerance (default 1e-12)");

  // ---- calibrate ----
  double rate = 0.5;
  std::int64_t h_max = 320;
  auto* calibrate = app.add_subcommand("calibrate", "largest admissible eps for one component");
  calibrate->add_option("--n", n_cap, "component size N (3..8)")->required();
  calibrate->add_option("--r", rate, "target rate r in (0, 1)")->required();
  calibrate->add_option("--h-max", h_max, "anchor-lag search bound (default 320)");
  calibrate->add_option("--json", json_path, "write the certificate JSON here");

  // ---- product verify ----
  std::string components = "3..7";
  int n_lags = 10;
  auto* product = app.add_subcommand("product", "virtual product-chain operations");
  product->require_subcommand(1);
  auto* verify = product->add_subcommand("verify", "certify the product chain end to end");
  verify->add_option("--r", rate, "target rate r in (0, 1)")->required();
  verify->add_option("--components", components, "component range, e.g. 3..7");
  verify->add_option("--lags", n_lags, "number of lags to certify (default 10)");
  verify->add_option("--h-max", h_max, "anchor-lag search bound (default 320)");
  verify->add_option("--json", json_path, "write the full report JSON here");
  verify->add_option("--csv", csv_path, "write the per-lag summary CSV here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  if (build->parsed()) {
    ChainGuard chain;
    if (auto st = mc_chain_from_block(n_cap, eps, &chain.value); st != MC_OK)
      return report_error(st);
    StringGuard text;
    if (auto st = mc_chain_to_json(chain.value, &text.value); st != MC_OK)
      return report_error(st);
    return write_or_print(out_path, text.value) ? kExitOk : kExitCheckFailed;
  }

  if (coeffs->parsed()) {
    ChainGuard chain;
    if (!chain_path.empty()) {
      std::string text;
      if (!read_all(chain_path, text)) {
        std::cerr << "error: cannot read " << chain_path << "\n";
        return kExitCheckFailed;
      }
      if (auto st = mc_chain_from_json(text.c_str(), &chain.value); st != MC_OK)
        return report_error(st);
    } else if (auto st = mc_chain_from_block(n_cap, eps, &chain.value); st != MC_OK) {
      return report_error(st);
    }
    if (!csv_path.empty()) {
      StringGuard table;
      if (auto st = mc_lag_table_csv(chain.value, lag_min, lag_max, &table.value); st != MC_OK)
        return report_error(st);
      if (!write_or_print(csv_path, table.value)) return kExitCheckFailed;
    }
    StringGuard report;
    if (auto st = mc_coefficients_json(chain.value, lag, with_lambda ? 1 : 0, &report.value);
        st != MC_OK)
      return report_error(st);
    return write_or_print(json_path, report.value) ? kExitOk : kExitCheckFailed;
  }

  if (sweep_cmd->parsed()) {
    StringGuard csv, report;
    int32_t pass = 0;
    if (auto st = mc_block_sweep(n_cap, quantity.c_str(), m_param, cell_i, cell_j, k_min, k_max,
                                 &csv.value, &report.value, &pass);
        st != MC_OK)
      return report_error(st);
    if (!csv_path.empty() && !write_or_print(csv_path, csv.value)) return kExitCheckFailed;
    if (csv_path.empty() && json_path.empty()) std::cout << csv.value;
    if (!json_path.empty() && !write_or_print(json_path, report.value)) return kExitCheckFailed;
    if (!pass) {
      std::cerr << "sweep trend assertion failed: " << report.value;
      return kExitCheckFailed;
    }
    return kExitOk;
  }

  if (interlaced->parsed()) {
    ChainGuard chain;
    if (auto st = mc_chain_from_block(n_cap, eps, &chain.value); st != MC_OK)
      return report_error(st);
    double value = 0.0;
    if (auto st = mc_interlaced(chain.value, m_param, &value); st != MC_OK)
      return report_error(st);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g\n", value);
    std::cout << buf;
    return kExitOk;
  }

  if (check->parsed()) {
    std::string text;
    if (!read_all(chain_path, text)) {
      std::cerr << "error: cannot read " << chain_path << "\n";
      return kExitCheckFailed;
    }
    ChainGuard chain;
    if (auto st = mc_chain_from_json(text.c_str(), &chain.value); st != MC_OK)
      return report_error(st);
    int32_t k = 0, irreducible = 0, aperiodic = 0, reversible = 0;
    double stationary = 0.0, balance = 0.0;
    mc_chain_state_count(chain.value, &k);
    mc_chain_flags(chain.value, &irreducible, &aperiodic);
    mc_chain_stationarity_residual(chain.value, &stationary);
    mc_chain_detailed_balance_residual(chain.value, &balance);
    mc_chain_is_reversible(chain.value, reversibility_tol, &reversible);
    std::cout << "states: " << k << "\n"
              << "irreducible: " << (irreducible ? "yes" : "no") << "\n"
              << "aperiodic: " << (aperiodic ? "yes" : "no") << "\n"
              << "stationarity_residual: " << stationary << "\n"
              << "detailed_balance_residual: " << balance << "\n"
              << "reversible: " << (reversible ? "yes" : "no") << "\n";
    return kExitOk;
  }

  if (calibrate->parsed()) {
    double calibrated = 0.0;
    StringGuard cert;
    if (auto st = mc_calibrate(n_cap, rate, h_max, &calibrated, &cert.value); st != MC_OK)
      return report_error(st);
    if (!json_path.empty() && !write_or_print(json_path, cert.value)) return kExitCheckFailed;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g\n", calibrated);
    std::cout << buf;
    return kExitOk;
  }

  if (verify->parsed()) {
    int lo = 3, hi = 7;
    if (!parse_component_range(components, lo, hi) || lo != 3) {
      std::cerr << "error: --components must look like 3..7 (range starts at 3)\n";
      return kExitUsage;
    }
    StringGuard report, summary;
    int32_t all_ok = 0;
    if (auto st = mc_verify_theorem(rate, hi, n_lags, h_max, &report.value, &summary.value,
                                    &all_ok);
        st != MC_OK)
      return report_error(st);
    if (!json_path.empty() && !write_or_print(json_path, report.value)) return kExitCheckFailed;
    if (!csv_path.empty() && !write_or_print(csv_path, summary.value)) return kExitCheckFailed;
    if (json_path.empty() && csv_path.empty()) std::cout << report.value;
    if (!all_ok) {
      std::cerr << "certification failed; see the report for the failing inequality\n";
      return kExitCheckFailed;
    }
    return kExitOk;
  }

  return kExitUsage;
}
