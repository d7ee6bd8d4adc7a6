#include "mixchain/dependence.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <vector>

#include <Eigen/SVD>

#include "mixchain/chain.hpp"

namespace mixchain {

namespace {

// Cells this far below the unit total mass are numerically indistinguishable
// from structural zeros when a matrix is fed to an SVD.
constexpr double kCellFlush = 1e-305;

// F(d) = (1+d) log1p(d) - d >= 0 with F(-1) = 1.
double info_term(double d) {
  if (d <= -1.0) return 1.0;
  double a = std::abs(d);
  if (a < 1e-4) return d * d * (0.5 - d / 6.0 + d * d / 12.0 - d * d * d / 20.0);
  return (1.0 + d) * std::log1p(d) - d;
}

}  // namespace

JointPmf2 drop_zero_marginals(const JointPmf2& q) {
  std::vector<int> rows, cols;
  for (int i = 0; i < q.rows(); ++i)
    if (q.row_marginal[i] > 0.0) rows.push_back(i);
  for (int j = 0; j < q.cols(); ++j)
    if (q.col_marginal[j] > 0.0) cols.push_back(j);
  if (rows.empty() || cols.empty()) fail(errc::zero_marginal, "joint carries no mass");
  if (static_cast<int>(rows.size()) == q.rows() && static_cast<int>(cols.size()) == q.cols())
    return q;
  Mat cells(rows.size(), cols.size());
  for (std::size_t a = 0; a < rows.size(); ++a)
    for (std::size_t b = 0; b < cols.size(); ++b) cells(a, b) = q.cells(rows[a], cols[b]);
  return JointPmf2::from_cells(std::move(cells));
}

double eta(const JointPmf2& q, int i, int j) {
  if (i < 0 || i >= q.rows() || j < 0 || j >= q.cols())
    fail(errc::invalid_argument, "eta cell out of range");
  double r = q.row_marginal[i];
  double c = q.col_marginal[j];
  if (r <= 0.0 || c <= 0.0) fail(errc::zero_marginal, "eta needs positive marginals");
  return (q.cells(i, j) / r) / c;
}

double psi_from_joint(const JointPmf2& joint) {
  JointPmf2 q = drop_zero_marginals(joint);
  double best = 0.0;
  for (int i = 0; i < q.rows(); ++i)
    for (int j = 0; j < q.cols(); ++j)
      best = std::max(best, std::abs(eta(q, i, j) - 1.0));
  return best;
}

double rho_max_corr(const JointPmf2& joint) {
  JointPmf2 q = drop_zero_marginals(joint);
  Mat normalized = q.cells.unaryExpr([](double v) { return v < kCellFlush ? 0.0 : v; });
  Vec rs = q.row_marginal.array().sqrt().matrix();
  Vec cs = q.col_marginal.array().sqrt().matrix();
  for (int i = 0; i < q.rows(); ++i) normalized.row(i) /= rs[i];
  for (int j = 0; j < q.cols(); ++j) normalized.col(j) /= cs[j];
  Eigen::JacobiSVD<Mat> svd(normalized);
  const auto& sv = svd.singularValues();
  double second = sv.size() > 1 ? sv[1] : 0.0;
  return std::clamp(second, 0.0, 1.0);
}

double beta_from_joint(const JointPmf2& q) {
  double total = 0.0;
  for (int i = 0; i < q.rows(); ++i)
    for (int j = 0; j < q.cols(); ++j)
      total += std::abs(q.cells(i, j) - q.row_marginal[i] * q.col_marginal[j]);
  return 0.5 * total;
}

double info_from_joint(const JointPmf2& q) {
  // sum over cells of r c F(eta - 1); cancellation-free since F >= 0.
  double total = 0.0;
  for (int i = 0; i < q.rows(); ++i) {
    double r = q.row_marginal[i];
    if (r <= 0.0) continue;
    for (int j = 0; j < q.cols(); ++j) {
      double c = q.col_marginal[j];
      if (c <= 0.0) continue;
      double cell = q.cells(i, j);
      if (cell == 0.0) {
        total += r * c;  // F(-1) = 1
        continue;
      }
      double ratio = (cell / r) / c;
      if (ratio > 1.5 || ratio < 0.5) {
        // q log(eta) - q + rc, safe against huge or underflowing eta
        double log_eta = std::isfinite(ratio) && ratio > 0.0
                             ? std::log(ratio)
                             : std::log(cell) - std::log(r) - std::log(c);
        total += cell * log_eta - cell + r * c;
      } else {
        total += r * c * info_term(ratio - 1.0);
      }
    }
  }
  return total;
}

double entropy(const Vec& p) {
  check_prob_vector(p);
  double h = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i)
    if (p[i] > 0.0) h -= p[i] * std::log(p[i]);
  return h;
}

double lambda_from_joint(const JointPmf2& joint) {
  JointPmf2 q = drop_zero_marginals(joint);
  const int ka = q.rows();
  const int kb = q.cols();
  if (ka > 16 || kb > 16) fail(errc::too_many_states, "lambda enumeration capped at 16 states");

  const std::size_t na = std::size_t{1} << ka;
  const std::size_t nb = std::size_t{1} << kb;
  // subset masses by lowest-bit recursion
  std::vector<double> mass_a(na, 0.0), mass_b(nb, 0.0);
  for (std::size_t s = 1; s < na; ++s) {
    std::size_t low = s & (~s + 1);
    int bit = std::countr_zero(low);
    mass_a[s] = mass_a[s ^ low] + q.row_marginal[bit];
  }
  for (std::size_t s = 1; s < nb; ++s) {
    std::size_t low = s & (~s + 1);
    int bit = std::countr_zero(low);
    mass_b[s] = mass_b[s ^ low] + q.col_marginal[bit];
  }

  // Complements leave the numerator unchanged and can only shrink the
  // denominator, so subsets of mass <= 1/2 suffice.
  const double half = 0.5 + 1e-12;
  std::vector<double> joint_b(nb);
  Vec row_agg(kb);
  double best = 0.0;
  for (std::size_t a = 1; a < na; ++a) {
    if (mass_a[a] > half || mass_a[a] <= 0.0) continue;
    row_agg.setZero();
    for (int i = 0; i < ka; ++i)
      if (a & (std::size_t{1} << i)) row_agg += q.cells.row(i).transpose();
    joint_b[0] = 0.0;
    for (std::size_t s = 1; s < nb; ++s) {
      std::size_t low = s & (~s + 1);
      int bit = std::countr_zero(low);
      joint_b[s] = joint_b[s ^ low] + row_agg[bit];
    }
    for (std::size_t bset = 1; bset < nb; ++bset) {
      if (mass_b[bset] > half || mass_b[bset] <= 0.0) continue;
      double ratio = std::abs(joint_b[bset] - mass_a[a] * mass_b[bset]) /
                     std::sqrt(mass_a[a] * mass_b[bset]);
      best = std::max(best, ratio);
    }
  }
  return best;
}

JointPmf2 flatten_bipartite(const JointTensor& t, std::size_t n_left) {
  if (n_left == 0 || n_left >= t.coords())
    fail(errc::invalid_argument, "bipartite split needs coordinates on both sides");
  std::size_t rows = 1, cols = 1;
  for (std::size_t c = 0; c < n_left; ++c) rows *= static_cast<std::size_t>(t.k);
  for (std::size_t c = n_left; c < t.coords(); ++c) cols *= static_cast<std::size_t>(t.k);
  Mat cells(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c)
      cells(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          t.mass[r * cols + c];
  return JointPmf2::from_cells(std::move(cells), 1e-11);
}

double rho_index_sets(const FiniteChain& chain, std::vector<long> s, std::vector<long> t,
                      std::size_t cell_cap) {
  if (s.empty() || t.empty()) fail(errc::invalid_argument, "index sets must be nonempty");
  std::sort(s.begin(), s.end());
  std::sort(t.begin(), t.end());
  for (long l : s)
    if (std::binary_search(t.begin(), t.end(), l))
      fail(errc::invalid_argument, "index sets must be disjoint");

  std::vector<long> all;
  all.reserve(s.size() + t.size());
  all.insert(all.end(), s.begin(), s.end());
  all.insert(all.end(), t.begin(), t.end());
  JointTensor tensor = joint_lags(chain, all, cell_cap);

  // Reorder coordinates so the s-lags come first: map each tensor cell index
  // to (row over s-positions, column over t-positions).
  const std::size_t m = tensor.coords();
  std::vector<int> is_left(m, 0);
  std::vector<std::size_t> position(m, 0);
  for (std::size_t c = 0; c < m; ++c) {
    long lag = tensor.lags[c];
    auto in_s = std::binary_search(s.begin(), s.end(), lag);
    is_left[c] = in_s ? 1 : 0;
  }
  std::size_t rows = 1, cols = 1;
  for (std::size_t c = 0; c < m; ++c) (is_left[c] ? rows : cols) *= static_cast<std::size_t>(tensor.k);

  Mat cells = Mat::Zero(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  const std::size_t k = static_cast<std::size_t>(tensor.k);
  std::vector<int> digits(m, 0);
  for (std::size_t idx = 0; idx < tensor.cell_count(); ++idx) {
    std::size_t rest = idx;
    for (std::size_t c = m; c-- > 0;) {
      digits[c] = static_cast<int>(rest % k);
      rest /= k;
    }
    std::size_t r = 0, cidx = 0;
    for (std::size_t c = 0; c < m; ++c) {
      if (is_left[c])
        r = r * k + static_cast<std::size_t>(digits[c]);
      else
        cidx = cidx * k + static_cast<std::size_t>(digits[c]);
    }
    cells(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(cidx)) += tensor.mass[idx];
  }
  return rho_max_corr(JointPmf2::from_cells(std::move(cells), 1e-11));
}

double indicator_correlation(const FiniteChain& chain, long m, int top_state) {
  if (top_state < 0 || top_state >= chain.k)
    fail(errc::invalid_argument, "top state out of range");
  const int n = top_state;
  double p_a = chain.pi[n];
  if (m == 0) {
    // self case: B coincides with A
    if (p_a <= 0.0 || p_a >= 1.0) fail(errc::degenerate_event, "indicator event is degenerate");
    return 1.0;
  }
  if (m < 0 || 2 * m >= n) fail(errc::invalid_lag, "indicator lag must satisfy 1 <= m < top/2");

  JointTensor tensor = joint_lags(chain, {-m, 0, m});
  const int low = n - static_cast<int>(m);
  double p_ab = tensor.at({low, n, low});
  double p_b = 0.0;
  for (int mid = 0; mid < chain.k; ++mid) p_b += tensor.at({low, mid, low});
  if (p_a <= 0.0 || p_a >= 1.0 || p_b <= 0.0 || p_b >= 1.0)
    fail(errc::degenerate_event, "indicator event is degenerate");
  double cov = p_ab - p_a * p_b;
  return cov / std::sqrt(p_a * (1.0 - p_a) * p_b * (1.0 - p_b));
}

PsiRatioTable psi_ratio_table(const FiniteChain& chain, long lag) {
  if (lag < 1) fail(errc::invalid_lag, "psi ratio table needs lag >= 1");
  if ((chain.pi.array() <= 0.0).any())
    fail(errc::zero_marginal, "psi ratio table needs strictly positive stationary mass");
  Mat step = m_step(chain.p, lag);
  PsiRatioTable table;
  table.g = step.array().rowwise() / chain.pi.transpose().array();
  return table;
}

DependenceReport coefficients_at_lag(const FiniteChain& chain, long lag, bool with_lambda) {
  JointPmf2 joint = pair_joint(chain, lag);
  DependenceReport report;
  report.psi = psi_from_joint(joint);
  report.rho = rho_max_corr(joint);
  report.beta = beta_from_joint(joint);
  report.info = info_from_joint(joint);
  if (with_lambda) report.lambda = lambda_from_joint(joint);
  report.h_row = entropy(joint.row_marginal);
  report.h_col = entropy(joint.col_marginal);
  return report;
}

}  // namespace mixchain
