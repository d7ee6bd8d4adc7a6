#include "mixchain/product.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "mixchain/chain.hpp"
#include "mixchain/dependence.hpp"
#include "mixchain/parallel.hpp"

namespace mixchain {

std::string Certificate::first_failure() const {
  if (!mass_at_zero_ok) return "mass_at_zero";
  if (!entropy_ok) return "entropy";
  if (!rho1_ok) return "rho1";
  if (!info_tail_ok) return "anchor_lag";
  if (!info_finite_ok) return "info_finite";
  if (!interlaced_ok) return "interlaced";
  return "";
}

Certificate certify_component(const FiniteChain& chain, const BlockParams& params, double r,
                              long h_max) {
  params.validate();
  if (!(r > 0.0 && r < 1.0)) fail(errc::invalid_argument, "rate r must lie in (0, 1)");
  if (h_max < 1) fail(errc::invalid_argument, "anchor search bound must be >= 1");
  if (chain.k != params.n_cap + 1)
    fail(errc::invalid_argument, "chain does not match the block parameters");

  const int n = params.n_cap;
  const double log_q = -static_cast<double>(n) * std::log(2.0) + std::log(r);

  Certificate cert;
  cert.n_cap = n;
  cert.eps = params.eps;
  cert.r = r;
  cert.h_max = h_max;

  cert.pi0 = chain.pi[0];
  cert.mass_at_zero_ok = cert.pi0 >= 1.0 - std::ldexp(1.0, -n);

  cert.entropy_value = entropy(chain.pi);
  cert.entropy_ok = cert.entropy_value <= std::ldexp(1.0, -n) * r;

  SpectralKernel kernel = block_spectral(params);
  cert.rho1 = kernel.decay_rate();
  cert.rho1_ok = cert.rho1 <= r;

  // (e): smallest anchor lag with psi(h) <= q^{4h}/2, compared in log space
  // because both sides sink far below the double underflow threshold.
  cert.h_star = 0;
  for (long h = 1; h <= h_max; ++h) {
    double bound = 4.0 * static_cast<double>(h) * log_q - std::log(2.0);
    double value = kernel.psi_log(h);
    if (value <= bound) {
      cert.h_star = h;
      cert.psi_log_at_h_star = value;
      cert.psi_bound_log = bound;
      break;
    }
  }
  cert.info_tail_ok = cert.h_star > 0;

  // (d): exact checks over the finite horizon 2 h*.
  cert.info_finite_ok = false;
  if (cert.h_star > 0) {
    bool ok = true;
    for (long lag = 1; lag <= 2 * cert.h_star; ++lag) {
      if (kernel.info_log(lag) > 2.0 * static_cast<double>(lag) * log_q) {
        ok = false;
        break;
      }
    }
    cert.info_finite_ok = ok;
  }

  // (f): every interlaced pair with 1 <= m < N/2.
  cert.interlaced_ok = true;
  for (long m = 1; 2 * m < n; ++m) {
    double value = rho_index_sets(chain, {0}, {-m, m});
    cert.interlaced.push_back(value);
    if (value < 1.0 - 1.0 / static_cast<double>(n)) cert.interlaced_ok = false;
  }
  return cert;
}

Calibration calibrate_epsilon(int n_cap, double r, long h_max) {
  if (n_cap < 3 || n_cap > 8)
    fail(errc::invalid_argument, "calibration supports component sizes 3..8");
  if (!(r > 0.0 && r < 1.0)) fail(errc::invalid_argument, "rate r must lie in (0, 1)");

  Certificate last;
  bool have_last = false;
  for (int k = 0;; ++k) {
    double eps = (1.0 / 3.0) * std::ldexp(1.0, -k);
    if (std::pow(eps, 2 * n_cap - 1) < kMassFloor) {
      std::string binding = have_last ? last.first_failure() : std::string("underflow");
      fail(errc::calibration_failed,
           "component N=" + std::to_string(n_cap) +
               " hit the underflow guard before certifying; binding condition: " + binding);
    }
    BlockParams params{n_cap, eps};
    Certificate cert = certify_component(build_block(params), params, r, h_max);
    if (cert.all_ok()) return Calibration{eps, std::move(cert)};
    last = std::move(cert);
    have_last = true;
  }
}

double product_coeff_rho(const ProductSpec& spec, long n) {
  if (n < 1) fail(errc::invalid_lag, "lag must be >= 1");
  double best = 0.0;
  for (const auto& comp : spec.components) {
    double rate = comp.spectral.decay_rate();
    best = std::max(best, std::pow(rate, static_cast<double>(n)));
  }
  return best;
}

double product_coeff_info(const ProductSpec& spec, long n) {
  if (n < 1) fail(errc::invalid_lag, "lag must be >= 1");
  double total = 0.0;
  for (const auto& comp : spec.components) total += std::exp(comp.spectral.info_log(n));
  return total;
}

double product_info_tail(const ProductSpec& spec, long n) {
  // sum_{N > n_max} (2^-N r)^{2n} = r^{2n} 2^{-2n(n_max+1)} / (1 - 2^{-2n})
  int n_max = 0;
  for (const auto& comp : spec.components) n_max = std::max(n_max, comp.params.n_cap);
  double two_pow = std::exp2(-2.0 * static_cast<double>(n) * static_cast<double>(n_max + 1));
  double r_pow = std::pow(spec.r, 2.0 * static_cast<double>(n));
  return r_pow * two_pow / (1.0 - std::exp2(-2.0 * static_cast<double>(n)));
}

double product_entropy(const ProductSpec& spec) {
  double total = 0.0;
  for (const auto& comp : spec.components) total += entropy(comp.chain.pi);
  return total;
}

double product_beta_bound(const ProductSpec& spec, long n) {
  return std::sqrt(product_coeff_info(spec, n));
}

double product_interlaced_lower(const ProductSpec& spec, long n) {
  if (n < 1) fail(errc::invalid_lag, "lag must be >= 1");
  double best = 0.0;
  for (const auto& comp : spec.components)
    best = std::max(best, rho_index_sets(comp.chain, {0}, {-n, n}));
  return best;
}

bool TheoremReport::all_ok() const {
  if (!entropy_ok) return false;
  for (bool b : rho_ok)
    if (!b) return false;
  for (bool b : info_ok)
    if (!b) return false;
  for (bool b : beta_ok)
    if (!b) return false;
  for (const auto& cert : certificates)
    if (!cert.all_ok()) return false;
  return true;
}

TheoremReport verify_theorem(double r, int n_max_component, int n_lags, long h_max) {
  if (!(r > 0.0 && r < 1.0)) fail(errc::invalid_argument, "rate r must lie in (0, 1)");
  if (n_max_component < 3 || n_max_component > 8)
    fail(errc::invalid_argument, "component range must lie in 3..8");
  if (n_lags < 1) fail(errc::invalid_argument, "need at least one lag");

  ProductSpec spec;
  spec.r = r;
  spec.components.resize(static_cast<std::size_t>(n_max_component - 2));
  // component calibrations are independent; results land in fixed slots
  parallel_for(spec.components.size(), [&](std::size_t idx) {
    int n_cap = 3 + static_cast<int>(idx);
    Calibration calib = calibrate_epsilon(n_cap, r, h_max);
    Component comp;
    comp.params = BlockParams{n_cap, calib.eps};
    comp.chain = build_block(comp.params);
    comp.spectral = block_spectral(comp.params);
    comp.certificate = std::move(calib.certificate);
    spec.components[idx] = std::move(comp);
  });

  TheoremReport report;
  report.r = r;
  report.n_min_component = 3;
  report.n_max_component = n_max_component;
  report.h_max = h_max;
  report.entropy_total = product_entropy(spec);
  report.entropy_ok = report.entropy_total <= r;

  for (long lag = 1; lag <= n_lags; ++lag) {
    double r_pow = std::pow(r, static_cast<double>(lag));
    double rho = product_coeff_rho(spec, lag);
    double info = product_coeff_info(spec, lag);
    double tail = product_info_tail(spec, lag);
    double beta_bound = product_beta_bound(spec, lag);
    report.lags.push_back(lag);
    report.rho_values.push_back(rho);
    report.info_values.push_back(info);
    report.info_tails.push_back(tail);
    report.beta_bounds.push_back(beta_bound);
    report.interlaced_lower.push_back(product_interlaced_lower(spec, lag));
    report.rho_ok.push_back(rho <= r_pow);
    report.info_ok.push_back(info + tail <= r_pow * r_pow);
    report.beta_ok.push_back(beta_bound <= r_pow);
  }

  // interlaced lower bound at n = 1 as the truncation grows component by
  // component; monotone nondecreasing by construction of the maximum
  double best = 0.0;
  for (const auto& comp : spec.components) {
    best = std::max(best, rho_index_sets(comp.chain, {0}, {-1, 1}));
    report.interlaced_prefix.push_back(best);
  }

  for (const auto& comp : spec.components) report.certificates.push_back(comp.certificate);
  return report;
}

}  // namespace mixchain
