#pragma once

#include "mixchain/types.hpp"

namespace mixchain {

// Eigendecomposition of the deflated symmetric kernel
//   B_ij = (q_ij - pi_i pi_j) / sqrt(pi_i pi_j)
// of a reversible chain, where q is the lag-1 pair joint. The stationary
// direction sqrt(pi) is a null vector of B, so the remaining eigenpairs give
// every lag-n coefficient with full relative accuracy:
//   p^(n)_ij / pi_j - 1 = sum_t nu_t^n w_t(i) w_t(j) / sqrt(pi_i pi_j).
// Log-magnitude accessors stay meaningful far below the double underflow
// threshold, which the certification path requires.
class SpectralKernel {
 public:
  SpectralKernel() = default;  // empty kernel; decay_rate() is 0

  // Generic construction from a reversible chain (kernel formed by explicit
  // subtraction, accurate to ~1e-15 absolute). Throws not_reversible.
  static SpectralKernel from_chain(const FiniteChain& chain, double reversibility_tol = 1e-12);

  // Construction from a cancellation-free closed-form kernel (see
  // block_deflated_kernel), giving full relative accuracy on eigenvalues.
  static SpectralKernel from_deflated(Mat b, Vec pi);

  int states() const { return static_cast<int>(pi_.size()); }
  const Vec& stationary() const { return pi_; }
  // Deflated eigenvalues, descending by absolute value.
  const Vec& eigenvalues() const { return nu_; }

  // max_t |nu_t|; equals rho(1) and the reversible-chain decay rate.
  double decay_rate() const { return nu_.size() ? std::abs(nu_[0]) : 0.0; }

  // log rho(n) = n log(decay rate); -inf when the kernel is degenerate.
  double rho_log(long n) const;

  // log psi(n) = log max_ij |p^(n)_ij / pi_j - 1|.
  double psi_log(long n) const;

  // log I(n), the pair mutual information at lag n in nats.
  double info_log(long n) const;

 private:
  void decompose(const Mat& b);

  Vec pi_;
  Vec sqrt_pi_;
  Vec log_sqrt_pi_;
  Vec nu_;  // deflated eigenvalues, |nu_0| >= |nu_1| >= ...
  Mat w_;   // matching eigenvectors as columns
};

// log(sum exp(x)) over a list of log-magnitudes (all terms nonnegative).
double log_sum_exp(const std::vector<double>& logs);

}  // namespace mixchain
