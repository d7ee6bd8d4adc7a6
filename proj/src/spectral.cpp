#include "mixchain/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "mixchain/chain.hpp"

namespace mixchain {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
// Kernel entries below this are noise relative to any resolvable eigenvalue.
constexpr double kKernelFlush = 1e-305;

// F(d) = (1+d) log1p(d) - d, nonnegative, F(-1) = 1; series near 0.
double info_term(double d) {
  if (d <= -1.0) return 1.0;
  double a = std::abs(d);
  if (a < 1e-4) return d * d * (0.5 - d / 6.0 + d * d / 12.0 - d * d * d / 20.0);
  return (1.0 + d) * std::log1p(d) - d;
}

}  // namespace

double log_sum_exp(const std::vector<double>& logs) {
  double mx = kNegInf;
  for (double v : logs) mx = std::max(mx, v);
  if (mx == kNegInf) return kNegInf;
  double s = 0.0;
  for (double v : logs) s += std::exp(v - mx);
  return mx + std::log(s);
}

void SpectralKernel::decompose(const Mat& b) {
  Mat flushed = b.unaryExpr([](double v) { return std::abs(v) < kKernelFlush ? 0.0 : v; });
  Eigen::SelfAdjointEigenSolver<Mat> solver(flushed);
  if (solver.info() != Eigen::Success)
    fail(errc::numerical_failure, "kernel eigendecomposition failed");
  const Vec& values = solver.eigenvalues();
  const Mat& vectors = solver.eigenvectors();

  // The stationary direction sqrt(pi) is a null vector of the deflated
  // kernel; drop the eigenpair with the largest overlap against it.
  Eigen::Index null_index = 0;
  double best = -1.0;
  for (Eigen::Index t = 0; t < values.size(); ++t) {
    double overlap = std::abs(vectors.col(t).dot(sqrt_pi_));
    if (overlap > best) {
      best = overlap;
      null_index = t;
    }
  }

  const Eigen::Index k = values.size();
  nu_.resize(k - 1);
  w_.resize(k, k - 1);
  Eigen::Index out = 0;
  for (Eigen::Index t = 0; t < k; ++t) {
    if (t == null_index) continue;
    nu_[out] = values[t];
    w_.col(out) = vectors.col(t);
    ++out;
  }
  // descending by absolute value
  std::vector<Eigen::Index> order(static_cast<std::size_t>(nu_.size()));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index bdx) {
    return std::abs(nu_[a]) > std::abs(nu_[bdx]);
  });
  Vec nu_sorted(nu_.size());
  Mat w_sorted(w_.rows(), w_.cols());
  for (Eigen::Index t = 0; t < nu_.size(); ++t) {
    nu_sorted[t] = nu_[order[static_cast<std::size_t>(t)]];
    w_sorted.col(t) = w_.col(order[static_cast<std::size_t>(t)]);
  }
  nu_ = std::move(nu_sorted);
  w_ = std::move(w_sorted);
}

SpectralKernel SpectralKernel::from_deflated(Mat b, Vec pi) {
  check_prob_vector(pi);
  if (b.rows() != b.cols() || b.rows() != pi.size())
    fail(errc::invalid_argument, "kernel and stationary law disagree on size");
  SpectralKernel kernel;
  kernel.pi_ = std::move(pi);
  kernel.sqrt_pi_ = kernel.pi_.array().sqrt().matrix();
  kernel.log_sqrt_pi_ = kernel.pi_.array().log().matrix() * 0.5;
  kernel.decompose(b);
  return kernel;
}

SpectralKernel SpectralKernel::from_chain(const FiniteChain& chain, double reversibility_tol) {
  if (!is_reversible(chain, reversibility_tol))
    fail(errc::not_reversible, "spectral kernel requires a reversible chain");
  if ((chain.pi.array() <= 0.0).any())
    fail(errc::zero_marginal, "spectral kernel requires strictly positive stationary mass");
  Vec sq = chain.pi.array().sqrt().matrix();
  Mat a = sq.asDiagonal() * chain.p * sq.cwiseInverse().asDiagonal();
  Mat sym = 0.5 * (a + a.transpose());  // reversibility makes this exact up to tol
  Mat b = sym - sq * sq.transpose();
  return from_deflated(std::move(b), chain.pi);
}

double SpectralKernel::rho_log(long n) const {
  if (n < 1) fail(errc::invalid_lag, "rho_log needs n >= 1");
  double rate = decay_rate();
  if (rate <= 0.0) return kNegInf;
  return static_cast<double>(n) * std::log(rate);
}

double SpectralKernel::psi_log(long n) const {
  if (n < 1) fail(errc::invalid_lag, "psi_log needs n >= 1");
  const Eigen::Index k = pi_.size();
  const Eigen::Index t_count = nu_.size();
  const double rate = decay_rate();
  if (rate <= 0.0) return kNegInf;
  const double log_rate = std::log(rate);

  // scale_t = sign(nu_t)^n (|nu_t| / rate)^n, all in [-1, 1]
  Vec scale(t_count);
  for (Eigen::Index t = 0; t < t_count; ++t) {
    double frac = std::abs(nu_[t]) / rate;
    double mag = std::pow(frac, static_cast<double>(n));
    bool negative = nu_[t] < 0.0 && (n & 1L);
    scale[t] = negative ? -mag : mag;
  }

  double best = kNegInf;
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = i; j < k; ++j) {
      double inner = 0.0;
      for (Eigen::Index t = 0; t < t_count; ++t) inner += scale[t] * w_(i, t) * w_(j, t);
      if (inner == 0.0) continue;
      double v = static_cast<double>(n) * log_rate + std::log(std::abs(inner)) -
                 log_sqrt_pi_[i] - log_sqrt_pi_[j];
      best = std::max(best, v);
    }
  return best;
}

double SpectralKernel::info_log(long n) const {
  if (n < 1) fail(errc::invalid_lag, "info_log needs n >= 1");
  const Eigen::Index k = pi_.size();
  const Eigen::Index t_count = nu_.size();
  const double rate = decay_rate();
  if (rate <= 0.0) return kNegInf;
  const double log_rate = std::log(rate);

  Vec scale(t_count);
  for (Eigen::Index t = 0; t < t_count; ++t) {
    double frac = std::abs(nu_[t]) / rate;
    double mag = std::pow(frac, static_cast<double>(n));
    bool negative = nu_[t] < 0.0 && (n & 1L);
    scale[t] = negative ? -mag : mag;
  }
  Vec log_pi = pi_.array().log().matrix();

  std::vector<double> contributions;
  contributions.reserve(static_cast<std::size_t>(k * k));
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < k; ++j) {
      double inner = 0.0;
      for (Eigen::Index t = 0; t < t_count; ++t) inner += scale[t] * w_(i, t) * w_(j, t);
      if (inner == 0.0) continue;
      // delta_ij = inner * rate^n / sqrt(pi_i pi_j), handled in logs
      double log_delta = static_cast<double>(n) * log_rate + std::log(std::abs(inner)) -
                         log_sqrt_pi_[i] - log_sqrt_pi_[j];
      double log_weight = log_pi[i] + log_pi[j];
      if (log_delta > 700.0) {
        // F(d) ~ d (log d - 1) for huge d
        contributions.push_back(log_weight + log_delta + std::log(log_delta - 1.0));
      } else if (log_delta > std::log(1e-4)) {
        double delta = std::copysign(std::exp(log_delta), inner);
        double f = info_term(delta);
        if (f > 0.0) contributions.push_back(log_weight + std::log(f));
      } else {
        // F(d) = d^2/2 (1 - d/3 + ...)
        double delta = std::copysign(std::exp(log_delta), inner);
        contributions.push_back(log_weight + 2.0 * log_delta - std::log(2.0) +
                                std::log1p(-delta / 3.0));
      }
    }
  return log_sum_exp(contributions);
}

}  // namespace mixchain
