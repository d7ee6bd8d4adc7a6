#pragma once

#include <string>
#include <vector>

#include "mixchain/analysis.hpp"
#include "mixchain/dependence.hpp"
#include "mixchain/product.hpp"
#include "mixchain/types.hpp"

namespace mixchain {

// 17-significant-digit rendering; round-trips doubles exactly.
std::string format_double(double v);

// Chain file format: {"k": int, "pi": [...], "p": [[...], ...]}.
// Loading enforces the FiniteChain invariants.
std::string chain_to_json(const FiniteChain& chain);
FiniteChain chain_from_json(const std::string& text);

// {"psi":, "rho":, "beta":, "info":, "lambda": value|null, "h_row":, "h_col":}
std::string dependence_report_to_json(const DependenceReport& report);

// eps,value rows.
std::string sweep_to_csv(const SweepResult& result);
// eps,quantity,value rows.
std::string block_sweep_to_csv(const SweepResult& result);
// {"quantity":, "exponent":, "monotone":, "terminal":, "pass":}
std::string sweep_report_to_json(const SweepResult& result);

// lag,psi,rho,beta,info rows.
std::string lag_table_to_csv(const std::vector<std::pair<long, DependenceReport>>& rows);

std::string certificate_to_json(const Certificate& cert);
std::string theorem_report_to_json(const TheoremReport& report);
// n,rho,rho_bound,info,info_bound,beta_bound,interlaced_lower rows.
std::string theorem_report_to_csv(const TheoremReport& report);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace mixchain
