#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mixchain/dependence.hpp"
#include "mixchain/types.hpp"

namespace mixchain {

// Least-squares slope of log(value) against log(eps) over the finest `window`
// points (points are (eps, value), eps strictly decreasing). Throws
// non_positive_value if any value in the window is <= 0.
double fit_exponent(const std::vector<std::pair<double, double>>& points, int window = 6);

enum class SweepQuantity {
  marginal_m,        // mu_m, needs m
  transition_ij,     // one-step p_ij, needs i, j
  mstep_ij,          // p^(|j-i|)_ij, needs i, j
  entropy,           // H(pi)
  rho1,              // rho at lag 1
  psi_5n,            // psi at lag 5N (spectral evaluation, no roundoff floor)
  interlaced_m,      // rho({0}, {-m, m}), needs m
  indicator_corr_m,  // Corr(1_A, 1_B) of the top-state events, needs m
  lambda1,           // lambda at lag 1 (N <= 10)
};

const char* sweep_quantity_name(SweepQuantity q);
std::optional<SweepQuantity> sweep_quantity_from_name(const std::string& name);

struct SweepRequest {
  int n_cap = 3;
  SweepQuantity quantity = SweepQuantity::entropy;
  long m = 1;   // lag / level parameter where applicable
  int i = 0;
  int j = 0;
  int k_min = 0;
  int k_max = 14;
  int fit_window = 6;
};

struct SweepResult {
  std::string quantity;
  std::vector<std::pair<double, double>> grid;  // (eps, value), eps decreasing
  std::optional<double> fitted_exponent;        // only when all values > 0
  bool monotone = false;                        // strictly monotone along grid
  double terminal = 0.0;                        // value at the finest eps
  std::optional<double> limit_target;           // limit L when one is asserted
  std::optional<double> limit_threshold;        // |terminal - L| tolerance
  std::optional<double> exponent_target;        // power law when one is asserted
  bool pass = false;
};

SweepResult sweep(const SweepRequest& request);

// The always-true coefficient inequalities, evaluated with slack:
//   rho <= psi, beta <= psi, beta^2 <= I, I <= (1+psi)log(1+psi),
//   I <= min(H_row, H_col).
struct InequalityReport {
  DependenceReport coeffs;
  double slack_rho_psi = 0.0;
  double slack_beta_psi = 0.0;
  double slack_beta2_info = 0.0;
  double slack_info_psi = 0.0;
  double slack_info_entropy = 0.0;
  bool pass = false;  // every slack >= -1e-12
};

InequalityReport inequality_battery(const JointPmf2& q);

// For a reversible chain, rho at lag n equals |lambda_2|^n where lambda_2 is
// the second-largest-modulus eigenvalue of P. Both sides are computed by
// independent routes: rho(1) from the SVD of the normalised pair joint raised
// to the n-th power, lambda_2 from a general eigensolve of P. Direct lag-n
// SVD values are compared as well wherever they sit above the absolute
// roundoff floor of that route.
struct SpectralRhoReport {
  double lambda2 = 0.0;
  double rho1 = 0.0;
  int n_max = 0;
  double max_rel_dev = 0.0;         // over rho(1)^n vs lambda2^n
  double max_rel_dev_direct = 0.0;  // over direct svd values >= direct_floor
  int direct_checked = 0;
  double direct_floor = 1e-5;
  bool pass = false;  // max_rel_dev <= 1e-8 and direct deviations <= 1e-8
};

SpectralRhoReport spectral_rho_check(const FiniteChain& chain, int n_max);

}  // namespace mixchain
