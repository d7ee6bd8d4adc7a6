#include "mixchain/block.hpp"

#include <cmath>
#include <vector>

#include "mixchain/chain.hpp"

namespace mixchain {

namespace {

// eps^0 .. eps^{2N}; every block quantity is assembled from these so that
// marginal, joint, and kernel agree bit-for-bit.
std::vector<double> eps_powers(const BlockParams& params) {
  std::vector<double> e(static_cast<std::size_t>(2 * params.n_cap + 1));
  e[0] = 1.0;
  for (std::size_t i = 1; i < e.size(); ++i) e[i] = e[i - 1] * params.eps;
  return e;
}

// sum_{u=lo}^{N-1} eps^{2u}
double ladder_sum(const std::vector<double>& e, int lo, int n_cap) {
  double s = 0.0;
  for (int u = lo; u <= n_cap - 1; ++u) s += e[static_cast<std::size_t>(2 * u)];
  return s;
}

}  // namespace

void BlockParams::validate() const {
  if (n_cap < 3 || n_cap > 20)
    fail(errc::invalid_argument, "block level count must be in [3, 20]");
  if (!(eps > 0.0) || eps > 1.0 / 3.0)
    fail(errc::invalid_argument, "block eps must be in (0, 1/3]");
  if (std::pow(eps, 2 * n_cap - 1) < kMassFloor)
    fail(errc::invalid_argument, "block eps underflows the top-state mass");
}

double block_threshold(const BlockParams& params) {
  params.validate();
  auto e = eps_powers(params);
  return 1.0 - 2.0 * (e[static_cast<std::size_t>(2 * params.n_cap - 1)] + ladder_sum(e, 1, params.n_cap));
}

Vec block_marginal(const BlockParams& params) {
  params.validate();
  const int n = params.n_cap;
  auto e = eps_powers(params);
  double threshold = 1.0 - 2.0 * (e[static_cast<std::size_t>(2 * n - 1)] + ladder_sum(e, 1, n));
  Vec mu(n + 1);
  mu[0] = threshold + e[2];
  for (int m = 1; m <= n - 2; ++m) mu[m] = e[static_cast<std::size_t>(2 * m)] + e[static_cast<std::size_t>(2 * m + 2)];
  mu[n - 1] = e[static_cast<std::size_t>(2 * n - 2)] + e[static_cast<std::size_t>(2 * n - 1)];
  mu[n] = e[static_cast<std::size_t>(2 * n - 1)];
  return mu;
}

JointPmf2 block_joint(const BlockParams& params) {
  params.validate();
  const int n = params.n_cap;
  auto e = eps_powers(params);
  double threshold = 1.0 - 2.0 * (e[static_cast<std::size_t>(2 * n - 1)] + ladder_sum(e, 1, n));
  Mat q = Mat::Zero(n + 1, n + 1);
  q(0, 0) = threshold;
  for (int m = 1; m <= n - 1; ++m)
    q(m - 1, m) = q(m, m - 1) = e[static_cast<std::size_t>(2 * m)];
  q(n - 1, n) = q(n, n - 1) = e[static_cast<std::size_t>(2 * n - 1)];
  return JointPmf2::from_cells(std::move(q), 1e-14);
}

FiniteChain build_block(const BlockParams& params) {
  JointPmf2 joint = block_joint(params);
  Vec mu = block_marginal(params);
  Mat p = joint.cells.array().colwise() / mu.array();
  return FiniteChain::make(std::move(mu), std::move(p));
}

Mat block_deflated_kernel(const BlockParams& params) {
  params.validate();
  const int n = params.n_cap;
  auto e = eps_powers(params);
  const double threshold =
      1.0 - 2.0 * (e[static_cast<std::size_t>(2 * n - 1)] + ladder_sum(e, 1, n));
  const double top = e[static_cast<std::size_t>(2 * n - 1)];  // eps^{2N-1}
  Vec mu = block_marginal(params);
  Vec sq = mu.array().sqrt();

  // Start from the zero cells of the joint: B_ij = -sqrt(mu_i) sqrt(mu_j).
  // The smallest such product is mu_N >= kMassFloor, so nothing underflows.
  Mat b(n + 1, n + 1);
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j) b(i, j) = -sq[i] * sq[j];

  // Ladder cells carry q_ij - mu_i mu_j > 0, written as same-sign groupings
  // (positivity of the (0, 0) cell is exactly the threshold inequality
  // 2 * threshold > 1). Divisions are sequential to dodge underflow in
  // mu_i * mu_j.
  const double s1 = ladder_sum(e, 1, n);
  const double s3 = ladder_sum(e, 3, n);
  b(0, 0) = (e[4] * (2.0 * threshold - 1.0) + 2.0 * threshold * (s3 + top)) / mu[0];
  const double m01 =
      e[2] * (2.0 * e[2] * (s1 + top) + e[4] + 2.0 * s3 + 2.0 * top);
  b(0, 1) = b(1, 0) = (m01 / sq[0]) / sq[1];
  for (int m = 2; m <= n - 1; ++m) {
    const auto em = static_cast<std::size_t>(m);
    const double ratio = (mu[m - 1] / e[em]) * (mu[m] / e[em]);  // mu_{m-1} mu_m / eps^{2m} < 1
    b(m - 1, m) = b(m, m - 1) = ((e[2 * em] / sq[m - 1]) / sq[m]) * (1.0 - ratio);
  }
  b(n - 1, n) = b(n, n - 1) =
      ((top / sq[n - 1]) / sq[n]) * (1.0 - e[static_cast<std::size_t>(2 * n - 2)] * (1.0 + params.eps));
  return b;
}

SpectralKernel block_spectral(const BlockParams& params) {
  return SpectralKernel::from_deflated(block_deflated_kernel(params), block_marginal(params));
}

std::vector<double> dyadic_grid(int k_min, int k_max) {
  if (k_min < 0 || k_max < k_min) fail(errc::invalid_argument, "bad dyadic grid range");
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(k_max - k_min + 1));
  for (int k = k_min; k <= k_max; ++k) grid.push_back((1.0 / 3.0) * std::ldexp(1.0, -k));
  return grid;
}

}  // namespace mixchain
