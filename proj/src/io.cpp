#include "mixchain/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "mixchain/chain.hpp"

namespace mixchain {

std::string format_double(double v) {
  if (std::isnan(v)) return "null";
  if (std::isinf(v)) return v > 0 ? "1e9999" : "-1e9999";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::string format_bool(bool b) { return b ? "true" : "false"; }

std::string json_array(const Vec& v) {
  std::string out = "[";
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += format_double(v[i]);
  }
  return out + "]";
}

std::string json_array(const std::vector<double>& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += format_double(v[i]);
  }
  return out + "]";
}

std::string json_array(const std::vector<long>& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += std::to_string(v[i]);
  }
  return out + "]";
}

std::string json_array(const std::vector<bool>& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += format_bool(v[i]);
  }
  return out + "]";
}

}  // namespace

std::string chain_to_json(const FiniteChain& chain) {
  std::string out = "{\n  \"k\": " + std::to_string(chain.k) + ",\n  \"pi\": " +
                    json_array(chain.pi) + ",\n  \"p\": [\n";
  for (int i = 0; i < chain.k; ++i) {
    out += "    " + json_array(Vec(chain.p.row(i).transpose()));
    out += i + 1 < chain.k ? ",\n" : "\n";
  }
  out += "  ]\n}\n";
  return out;
}

FiniteChain chain_from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(errc::parse_error, std::string("chain JSON parse failed: ") + e.what());
  }
  try {
    int k = doc.at("k").get<int>();
    if (k < 1) fail(errc::parse_error, "chain JSON has nonpositive k");
    auto pi_list = doc.at("pi").get<std::vector<double>>();
    auto p_list = doc.at("p").get<std::vector<std::vector<double>>>();
    if (static_cast<int>(pi_list.size()) != k || static_cast<int>(p_list.size()) != k)
      fail(errc::parse_error, "chain JSON sizes disagree with k");
    Vec pi(k);
    Mat p(k, k);
    for (int i = 0; i < k; ++i) {
      pi[i] = pi_list[static_cast<std::size_t>(i)];
      const auto& row = p_list[static_cast<std::size_t>(i)];
      if (static_cast<int>(row.size()) != k) fail(errc::parse_error, "chain JSON has a ragged row");
      for (int j = 0; j < k; ++j) p(i, j) = row[static_cast<std::size_t>(j)];
    }
    return FiniteChain::make(std::move(pi), std::move(p));
  } catch (const nlohmann::json::exception& e) {
    fail(errc::parse_error, std::string("chain JSON structure invalid: ") + e.what());
  }
}

std::string dependence_report_to_json(const DependenceReport& r) {
  std::string lambda = r.lambda ? format_double(*r.lambda) : "null";
  return "{\"psi\": " + format_double(r.psi) + ", \"rho\": " + format_double(r.rho) +
         ", \"beta\": " + format_double(r.beta) + ", \"info\": " + format_double(r.info) +
         ", \"lambda\": " + lambda + ", \"h_row\": " + format_double(r.h_row) +
         ", \"h_col\": " + format_double(r.h_col) + "}\n";
}

std::string sweep_to_csv(const SweepResult& result) {
  std::string out = "eps,value\n";
  for (const auto& [eps, value] : result.grid)
    out += format_double(eps) + "," + format_double(value) + "\n";
  return out;
}

std::string block_sweep_to_csv(const SweepResult& result) {
  std::string out = "eps,quantity,value\n";
  for (const auto& [eps, value] : result.grid)
    out += format_double(eps) + "," + result.quantity + "," + format_double(value) + "\n";
  return out;
}

std::string sweep_report_to_json(const SweepResult& r) {
  std::string exponent = r.fitted_exponent ? format_double(*r.fitted_exponent) : "null";
  return "{\"quantity\": \"" + r.quantity + "\", \"exponent\": " + exponent +
         ", \"monotone\": " + format_bool(r.monotone) +
         ", \"terminal\": " + format_double(r.terminal) + ", \"pass\": " + format_bool(r.pass) +
         "}\n";
}

std::string lag_table_to_csv(const std::vector<std::pair<long, DependenceReport>>& rows) {
  std::string out = "lag,psi,rho,beta,info\n";
  for (const auto& [lag, r] : rows)
    out += std::to_string(lag) + "," + format_double(r.psi) + "," + format_double(r.rho) + "," +
           format_double(r.beta) + "," + format_double(r.info) + "\n";
  return out;
}

std::string certificate_to_json(const Certificate& c) {
  std::string out = "{";
  out += "\"n_cap\": " + std::to_string(c.n_cap);
  out += ", \"eps\": " + format_double(c.eps);
  out += ", \"r\": " + format_double(c.r);
  out += ", \"h_max\": " + std::to_string(c.h_max);
  out += ", \"all_ok\": " + format_bool(c.all_ok());
  out += ", \"mass_at_zero_ok\": " + format_bool(c.mass_at_zero_ok);
  out += ", \"entropy_ok\": " + format_bool(c.entropy_ok);
  out += ", \"rho1_ok\": " + format_bool(c.rho1_ok);
  out += ", \"info_finite_ok\": " + format_bool(c.info_finite_ok);
  out += ", \"info_tail_ok\": " + format_bool(c.info_tail_ok);
  out += ", \"interlaced_ok\": " + format_bool(c.interlaced_ok);
  out += ", \"h_star\": " + std::to_string(c.h_star);
  out += ", \"pi0\": " + format_double(c.pi0);
  out += ", \"entropy\": " + format_double(c.entropy_value);
  out += ", \"rho1\": " + format_double(c.rho1);
  out += ", \"psi_log_at_h_star\": " + format_double(c.psi_log_at_h_star);
  out += ", \"psi_bound_log\": " + format_double(c.psi_bound_log);
  out += ", \"interlaced\": " + json_array(c.interlaced);
  out += "}";
  return out;
}

std::string theorem_report_to_json(const TheoremReport& r) {
  std::string out = "{\n";
  out += "  \"r\": " + format_double(r.r) + ",\n";
  out += "  \"components\": [" + std::to_string(r.n_min_component) + ", " +
         std::to_string(r.n_max_component) + "],\n";
  out += "  \"h_max\": " + std::to_string(r.h_max) + ",\n";
  out += "  \"all_ok\": " + format_bool(r.all_ok()) + ",\n";
  out += "  \"entropy_total\": " + format_double(r.entropy_total) + ",\n";
  out += "  \"entropy_ok\": " + format_bool(r.entropy_ok) + ",\n";
  out += "  \"lags\": " + json_array(r.lags) + ",\n";
  out += "  \"rho\": " + json_array(r.rho_values) + ",\n";
  out += "  \"rho_ok\": " + json_array(r.rho_ok) + ",\n";
  out += "  \"info\": " + json_array(r.info_values) + ",\n";
  out += "  \"info_tail\": " + json_array(r.info_tails) + ",\n";
  out += "  \"info_ok\": " + json_array(r.info_ok) + ",\n";
  out += "  \"beta_bound\": " + json_array(r.beta_bounds) + ",\n";
  out += "  \"beta_ok\": " + json_array(r.beta_ok) + ",\n";
  out += "  \"interlaced_lower\": " + json_array(r.interlaced_lower) + ",\n";
  out += "  \"interlaced_prefix\": " + json_array(r.interlaced_prefix) + ",\n";
  out += "  \"certificates\": [\n";
  for (std::size_t i = 0; i < r.certificates.size(); ++i) {
    out += "    " + certificate_to_json(r.certificates[i]);
    out += i + 1 < r.certificates.size() ? ",\n" : "\n";
  }
  out += "  ]\n}\n";
  return out;
}

std::string theorem_report_to_csv(const TheoremReport& r) {
  std::string out = "n,rho,rho_bound,info,info_bound,beta_bound,interlaced_lower\n";
  for (std::size_t i = 0; i < r.lags.size(); ++i) {
    double r_pow = std::pow(r.r, static_cast<double>(r.lags[i]));
    out += std::to_string(r.lags[i]) + "," + format_double(r.rho_values[i]) + "," +
           format_double(r_pow) + "," + format_double(r.info_values[i]) + "," +
           format_double(r_pow * r_pow) + "," + format_double(r.beta_bounds[i]) + "," +
           format_double(r.interlaced_lower[i]) + "\n";
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(errc::io_error, "cannot open " + path + " for reading");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(errc::io_error, "cannot open " + path + " for writing");
  out << content;
  if (!out) fail(errc::io_error, "write to " + path + " failed");
}

}  // namespace mixchain
