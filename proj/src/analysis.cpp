#include "mixchain/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <map>


#include "mixchain/block.hpp"
#include "mixchain/chain.hpp"
#include "mixchain/parallel.hpp"
#include "mixchain/spectral.hpp"

namespace mixchain {

double fit_exponent(const std::vector<std::pair<double, double>>& points, int window) {
  if (window < 2) fail(errc::invalid_argument, "fit window must be >= 2");
  if (points.size() < 4) fail(errc::invalid_argument, "exponent fit needs at least 4 points");
  std::size_t use = std::min<std::size_t>(static_cast<std::size_t>(window), points.size());
  std::size_t start = points.size() - use;  // finest eps sit at the tail
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = start; i < points.size(); ++i) {
    auto [eps, value] = points[i];
    if (!(value > 0.0)) fail(errc::non_positive_value, "exponent fit needs positive values");
    double x = std::log(eps);
    double y = std::log(value);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  double count = static_cast<double>(use);
  return (count * sxy - sx * sy) / (count * sxx - sx * sx);
}

const char* sweep_quantity_name(SweepQuantity q) {
  switch (q) {
    case SweepQuantity::marginal_m: return "marginal_m";
    case SweepQuantity::transition_ij: return "transition_ij";
    case SweepQuantity::mstep_ij: return "mstep_ij";
    case SweepQuantity::entropy: return "entropy";
    case SweepQuantity::rho1: return "rho1";
    case SweepQuantity::psi_5n: return "psi_5N";
    case SweepQuantity::interlaced_m: return "interlaced_m";
    case SweepQuantity::indicator_corr_m: return "indicator_corr_m";
    case SweepQuantity::lambda1: return "lambda1";
  }
  return "?";
}

std::optional<SweepQuantity> sweep_quantity_from_name(const std::string& name) {
  static const std::map<std::string, SweepQuantity> table = {
      {"marginal_m", SweepQuantity::marginal_m},
      {"transition_ij", SweepQuantity::transition_ij},
      {"mstep_ij", SweepQuantity::mstep_ij},
      {"entropy", SweepQuantity::entropy},
      {"rho1", SweepQuantity::rho1},
      {"psi_5N", SweepQuantity::psi_5n},
      {"psi_5n", SweepQuantity::psi_5n},
      {"interlaced_m", SweepQuantity::interlaced_m},
      {"indicator_corr_m", SweepQuantity::indicator_corr_m},
      {"lambda1", SweepQuantity::lambda1},
  };
  auto it = table.find(name);
  if (it == table.end()) return std::nullopt;
  return it->second;
}

namespace {

double evaluate_quantity(const SweepRequest& req, double eps) {
  BlockParams params{req.n_cap, eps};
  switch (req.quantity) {
    case SweepQuantity::marginal_m: {
      Vec mu = block_marginal(params);
      if (req.m < 0 || req.m > req.n_cap) fail(errc::invalid_argument, "marginal level out of range");
      return mu[static_cast<Eigen::Index>(req.m)];
    }
    case SweepQuantity::transition_ij: {
      FiniteChain chain = build_block(params);
      if (req.i < 0 || req.i > req.n_cap || req.j < 0 || req.j > req.n_cap)
        fail(errc::invalid_argument, "transition cell out of range");
      return chain.p(req.i, req.j);
    }
    case SweepQuantity::mstep_ij: {
      FiniteChain chain = build_block(params);
      if (req.i < 0 || req.i > req.n_cap || req.j < 0 || req.j > req.n_cap)
        fail(errc::invalid_argument, "transition cell out of range");
      long lag = std::abs(static_cast<long>(req.j) - static_cast<long>(req.i));
      return m_step(chain.p, lag)(req.i, req.j);
    }
    case SweepQuantity::entropy:
      return entropy(block_marginal(params));
    case SweepQuantity::rho1:
      return block_spectral(params).decay_rate();
    case SweepQuantity::psi_5n:
      // spectral evaluation: the direct ratio table bottoms out at the
      // double-precision cancellation floor near 1e-15
      return std::exp(block_spectral(params).psi_log(5L * req.n_cap));
    case SweepQuantity::interlaced_m:
      return rho_index_sets(build_block(params), {0}, {-req.m, req.m});
    case SweepQuantity::indicator_corr_m:
      return indicator_correlation(build_block(params), req.m, req.n_cap);
    case SweepQuantity::lambda1: {
      if (req.n_cap > 10) fail(errc::too_many_states, "lambda sweeps are capped at N <= 10");
      return lambda_from_joint(block_joint(params));
    }
  }
  fail(errc::invalid_argument, "unknown sweep quantity");
}

struct SweepTargets {
  std::optional<double> limit;
  std::optional<double> threshold;
  std::optional<double> exponent;
};

SweepTargets targets_for(const SweepRequest& req) {
  SweepTargets t;
  switch (req.quantity) {
    case SweepQuantity::entropy: t.limit = 0.0; t.threshold = 1e-3; break;
    case SweepQuantity::rho1: t.limit = 0.0; t.threshold = 0.05; break;
    case SweepQuantity::psi_5n: t.limit = 0.0; t.threshold = 0.05; break;
    case SweepQuantity::lambda1: t.limit = 0.0; t.threshold = 0.05; break;
    case SweepQuantity::interlaced_m: t.limit = 1.0; t.threshold = 0.1; break;
    case SweepQuantity::indicator_corr_m: t.limit = 1.0; t.threshold = 0.1; break;
    case SweepQuantity::marginal_m:
      if (req.m == 0) {
        // origin mass tends to 1; no power law to fit
        t.limit = 1.0;
        t.threshold = 0.1;
      } else {
        t.exponent = req.m == req.n_cap ? 2.0 * req.n_cap - 1.0 : 2.0 * static_cast<double>(req.m);
      }
      break;
    case SweepQuantity::mstep_ij:
    case SweepQuantity::transition_ij: {
      // exponent targets only for the upward ladder from the origin
      if (req.i == 0 && req.j >= 1)
        t.exponent = req.j == req.n_cap ? 2.0 * req.n_cap - 1.0 : 2.0 * static_cast<double>(req.j);
      break;
    }
  }
  return t;
}

}  // namespace

SweepResult sweep(const SweepRequest& req) {
  std::vector<double> grid = dyadic_grid(req.k_min, req.k_max);
  SweepResult result;
  result.quantity = sweep_quantity_name(req.quantity);
  result.grid.resize(grid.size());
  parallel_for(grid.size(), [&](std::size_t idx) {
    result.grid[idx] = {grid[idx], evaluate_quantity(req, grid[idx])};
  });

  bool increasing = true, decreasing = true;
  for (std::size_t i = 0; i + 1 < result.grid.size(); ++i) {
    if (!(result.grid[i].second < result.grid[i + 1].second)) increasing = false;
    if (!(result.grid[i].second > result.grid[i + 1].second)) decreasing = false;
  }
  result.monotone = increasing || decreasing;
  result.terminal = result.grid.back().second;

  bool all_positive = std::all_of(result.grid.begin(), result.grid.end(),
                                  [](const auto& p) { return p.second > 0.0; });
  if (all_positive && result.grid.size() >= 4)
    result.fitted_exponent = fit_exponent(result.grid, req.fit_window);

  SweepTargets targets = targets_for(req);
  result.limit_target = targets.limit;
  result.limit_threshold = targets.threshold;
  result.exponent_target = targets.exponent;
  if (targets.limit) {
    result.pass = result.monotone && std::abs(result.terminal - *targets.limit) <= *targets.threshold;
  } else if (targets.exponent) {
    result.pass = result.fitted_exponent &&
                  std::abs(*result.fitted_exponent - *targets.exponent) <=
                      0.05 * std::abs(*targets.exponent);
  } else {
    result.pass = result.monotone;
  }
  return result;
}

InequalityReport inequality_battery(const JointPmf2& q) {
  InequalityReport report;
  report.coeffs = DependenceReport{};
  report.coeffs.psi = psi_from_joint(q);
  report.coeffs.rho = rho_max_corr(q);
  report.coeffs.beta = beta_from_joint(q);
  report.coeffs.info = info_from_joint(q);
  report.coeffs.h_row = entropy(q.row_marginal);
  report.coeffs.h_col = entropy(q.col_marginal);

  const auto& c = report.coeffs;
  report.slack_rho_psi = c.psi - c.rho;
  report.slack_beta_psi = c.psi - c.beta;
  report.slack_beta2_info = c.info - c.beta * c.beta;
  report.slack_info_psi = (1.0 + c.psi) * std::log1p(c.psi) - c.info;
  report.slack_info_entropy = std::min(c.h_row, c.h_col) - c.info;
  constexpr double kSlackFloor = -1e-12;
  report.pass = report.slack_rho_psi >= kSlackFloor && report.slack_beta_psi >= kSlackFloor &&
                report.slack_beta2_info >= kSlackFloor && report.slack_info_psi >= kSlackFloor &&
                report.slack_info_entropy >= kSlackFloor;
  return report;
}

SpectralRhoReport spectral_rho_check(const FiniteChain& chain, int n_max) {
  if (!is_reversible(chain, 1e-12)) fail(errc::not_reversible, "spectral check needs reversibility");
  if (n_max < 1) fail(errc::invalid_argument, "need n_max >= 1");

  SpectralRhoReport report;
  report.n_max = n_max;

  // |lambda_2| of P as an operator on mean-zero functions in L^2(pi): the
  // symmetric similarity transform keeps every eigenvalue well conditioned.
  // (A nonsymmetric eigensolve of the raw P is unusable here: its eigenvalue
  // sensitivity grows like sqrt(pi_max / pi_min).)
  report.lambda2 = SpectralKernel::from_chain(chain).decay_rate();
  double lambda2 = report.lambda2;

  report.rho1 = rho_max_corr(pair_joint(chain, 1));
  double worst = 0.0;
  double worst_direct = 0.0;
  for (int n = 1; n <= n_max; ++n) {
    double powered = std::pow(report.rho1, n);
    double reference = std::pow(lambda2, n);
    if (reference > 0.0)
      worst = std::max(worst, std::abs(powered - reference) / reference);
    else if (powered > 0.0)
      worst = std::numeric_limits<double>::infinity();
    if (reference >= report.direct_floor) {
      double direct = rho_max_corr(pair_joint(chain, n));
      worst_direct = std::max(worst_direct, std::abs(direct - reference) / reference);
      ++report.direct_checked;
    }
  }
  report.max_rel_dev = worst;
  report.max_rel_dev_direct = worst_direct;
  report.pass = worst <= 1e-8 && worst_direct <= 1e-8;
  return report;
}

}  // namespace mixchain
