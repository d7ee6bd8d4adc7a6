#pragma once

#include <string>
#include <vector>

#include "mixchain/block.hpp"
#include "mixchain/spectral.hpp"
#include "mixchain/types.hpp"

namespace mixchain {

// Per-component admissibility verdict with measured values. With q = 2^-N r,
// the conditions are
//   (a) pi_0 >= 1 - 2^-N
//   (b) H(pi) <= 2^-N r
//   (c) rho(1) <= r
//   (d) I(n) <= q^{2n} exactly for n = 1..2 h*
//   (e) psi(h*) <= q^{4 h*}/2 for some anchor lag h* <= h_max, which extends
//       (d) to all n > 2 h* through psi-submultiplicativity and I <= 2 psi
//   (f) rho(sigma(Y_0), sigma(Y_-m, Y_m)) >= 1 - 1/N for every 1 <= m < N/2.
struct Certificate {
  int n_cap = 0;
  double eps = 0.0;
  double r = 0.0;
  long h_max = 0;

  bool mass_at_zero_ok = false;
  bool entropy_ok = false;
  bool rho1_ok = false;
  bool info_finite_ok = false;
  bool info_tail_ok = false;
  bool interlaced_ok = false;

  long h_star = 0;  // 0 when no anchor lag exists
  double pi0 = 0.0;
  double entropy_value = 0.0;
  double rho1 = 0.0;
  double psi_log_at_h_star = 0.0;   // log psi(h*)
  double psi_bound_log = 0.0;       // log(q^{4 h*}/2)
  std::vector<double> interlaced;   // m = 1, 2, ..., the values in (f)

  bool all_ok() const {
    return mass_at_zero_ok && entropy_ok && rho1_ok && info_finite_ok && info_tail_ok &&
           interlaced_ok;
  }
  std::string first_failure() const;  // name of the first failing condition, or ""
};

// Evaluates every condition; never throws on a failing condition (the flags
// carry the verdict). Preconditions: chain built by build_block from params,
// 0 < r < 1, h_max >= 1.
Certificate certify_component(const FiniteChain& chain, const BlockParams& params, double r,
                              long h_max);

struct Calibration {
  double eps = 0.0;
  Certificate certificate;
};

// Largest eps on the dyadic search grid (1/3) 2^-k whose certificate is fully
// true. Throws calibration_failed when the underflow guard is reached first,
// naming the binding condition. Precondition: 3 <= n_cap <= 8.
Calibration calibrate_epsilon(int n_cap, double r, long h_max);

// One calibrated factor of the product chain.
struct Component {
  BlockParams params;
  FiniteChain chain;
  SpectralKernel spectral;
  Certificate certificate;
};

// Virtual independent product of calibrated components N = 3..n_max.
// Coefficients of the product are combined analytically (max for rho, sum for
// I); the components are never sampled jointly.
struct ProductSpec {
  std::vector<Component> components;
  double r = 0.0;
};

// Exact rho(sigma(X_0), sigma(X_n)) of the truncated product.
double product_coeff_rho(const ProductSpec& spec, long n);

// Exact I of the truncated product at lag n (sum of component values).
double product_coeff_info(const ProductSpec& spec, long n);

// Analytic bound on the mass discarded by truncation:
// sum_{N > n_max} (2^-N r)^{2n}.
double product_info_tail(const ProductSpec& spec, long n);

// H(sigma(X_0)) = sum of component marginal entropies.
double product_entropy(const ProductSpec& spec);

// sqrt of the truncated-product I: certified upper bound on beta of the
// truncated product at lag n. (For the untruncated chain, the info check
// I + tail <= r^{2n} already certifies beta <= r^n by the same square root.)
double product_beta_bound(const ProductSpec& spec, long n);

// Exact rho(sigma(X_0), sigma(X_-n, X_n)) of the truncated product; a lower
// bound for the interlaced coefficient of the full chain.
double product_interlaced_lower(const ProductSpec& spec, long n);

struct TheoremReport {
  double r = 0.0;
  int n_min_component = 3;
  int n_max_component = 0;
  long h_max = 0;
  double entropy_total = 0.0;
  bool entropy_ok = false;

  std::vector<long> lags;                  // 1..n_lags
  std::vector<double> rho_values;          // exact rho at each lag
  std::vector<double> info_values;         // truncated-product I
  std::vector<double> info_tails;          // analytic truncation tails
  std::vector<double> beta_bounds;         // sqrt(I + tail)
  std::vector<double> interlaced_lower;    // per lag
  std::vector<bool> rho_ok, info_ok, beta_ok;

  // max over components with N <= prefix of the n = 1 interlaced value,
  // for prefix = 3..n_max_component (monotone in the truncation size).
  std::vector<double> interlaced_prefix;

  std::vector<Certificate> certificates;

  bool all_ok() const;
};

// Calibrates components N = 3..n_max_component at rate r, assembles the
// product, and evaluates every reported inequality at lags 1..n_lags.
// Throws calibration_failed from any component.
TheoremReport verify_theorem(double r, int n_max_component, int n_lags, long h_max);

}  // namespace mixchain
