#include "mixchain/chain.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <random>

namespace mixchain {

void check_prob_vector(const Vec& p, double tol) {
  if (p.size() == 0) fail(errc::invalid_argument, "empty probability vector");
  if ((p.array() < 0.0).any()) fail(errc::invalid_argument, "negative probability entry");
  double sum = p.sum();
  if (std::abs(sum - 1.0) > tol)
    fail(errc::invalid_argument, "probability vector sums to " + std::to_string(sum));
}

void check_transition_matrix(const Mat& p, double tol) {
  if (p.rows() == 0 || p.rows() != p.cols())
    fail(errc::invalid_argument, "transition matrix must be square and nonempty");
  if ((p.array() < 0.0).any()) fail(errc::invalid_argument, "negative transition probability");
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    double sum = p.row(i).sum();
    if (std::abs(sum - 1.0) > tol)
      fail(errc::invalid_argument,
           "row " + std::to_string(i) + " of transition matrix sums to " + std::to_string(sum));
  }
}

namespace {

std::vector<std::vector<int>> support_adjacency(const Mat& p) {
  const int k = static_cast<int>(p.rows());
  std::vector<std::vector<int>> adj(k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      if (p(i, j) > 0.0) adj[i].push_back(j);
  return adj;
}

std::vector<char> reachable_from(const std::vector<std::vector<int>>& adj, int start) {
  std::vector<char> seen(adj.size(), 0);
  std::queue<int> frontier;
  frontier.push(start);
  seen[start] = 1;
  while (!frontier.empty()) {
    int u = frontier.front();
    frontier.pop();
    for (int v : adj[u])
      if (!seen[v]) {
        seen[v] = 1;
        frontier.push(v);
      }
  }
  return seen;
}

}  // namespace

bool chain_irreducible(const Mat& p) {
  const int k = static_cast<int>(p.rows());
  auto all_seen = [](const std::vector<char>& seen) {
    return std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; });
  };
  auto adj = support_adjacency(p);
  if (!all_seen(reachable_from(adj, 0))) return false;
  std::vector<std::vector<int>> radj(k);
  for (int i = 0; i < k; ++i)
    for (int j : adj[i]) radj[j].push_back(i);
  return all_seen(reachable_from(radj, 0));
}

int chain_period(const Mat& p) {
  // BFS levels from state 0; the period is gcd over support edges (u, v) of
  // level(u) + 1 - level(v). Valid for irreducible chains.
  const int k = static_cast<int>(p.rows());
  auto adj = support_adjacency(p);
  std::vector<long> level(k, -1);
  std::queue<int> frontier;
  frontier.push(0);
  level[0] = 0;
  while (!frontier.empty()) {
    int u = frontier.front();
    frontier.pop();
    for (int v : adj[u])
      if (level[v] < 0) {
        level[v] = level[u] + 1;
        frontier.push(v);
      }
  }
  long g = 0;
  for (int u = 0; u < k; ++u) {
    if (level[u] < 0) continue;
    for (int v : adj[u])
      if (level[v] >= 0) g = std::gcd(g, level[u] + 1 - level[v]);
  }
  return g == 0 ? 1 : static_cast<int>(std::abs(g));
}

Vec stationary_distribution(const Mat& p) {
  check_transition_matrix(p);
  if (!chain_irreducible(p)) fail(errc::not_irreducible, "chain is not irreducible");
  if (chain_period(p) != 1) fail(errc::periodic, "chain has period > 1");

  const Eigen::Index k = p.rows();
  Vec x = Vec::Constant(k, 1.0 / static_cast<double>(k));
  constexpr double kStep = 1e-14;
  constexpr long kMaxIter = 1'000'000;
  for (long iter = 0; iter < kMaxIter; ++iter) {
    Vec next = (x.transpose() * p).transpose();
    next /= next.sum();
    double delta = (next - x).cwiseAbs().maxCoeff();
    x = next;
    if (delta <= kStep) break;
  }
  if (stationarity_residual(x, p) > kStationaryTol)
    fail(errc::numerical_failure, "stationary iteration did not reach the residual target");
  return x;
}

double stationarity_residual(const Vec& pi, const Mat& p) {
  return ((pi.transpose() * p).transpose() - pi).cwiseAbs().maxCoeff();
}

double detailed_balance_residual(const FiniteChain& chain) {
  Mat flow = chain.pi.asDiagonal() * chain.p;
  return (flow - flow.transpose()).cwiseAbs().maxCoeff();
}

bool is_reversible(const FiniteChain& chain, double tol) {
  return detailed_balance_residual(chain) <= tol;
}

FiniteChain FiniteChain::make(Vec pi, Mat p) {
  check_prob_vector(pi);
  check_transition_matrix(p);
  if (pi.size() != p.rows()) fail(errc::invalid_argument, "pi and p disagree on state count");
  double residual = stationarity_residual(pi, p);
  if (residual > kStationaryTol)
    fail(errc::invalid_argument, "pi is not stationary for p (residual " +
                                     std::to_string(residual) + ")");
  FiniteChain chain;
  chain.k = static_cast<int>(pi.size());
  chain.pi = std::move(pi);
  chain.p = std::move(p);
  chain.irreducible = chain_irreducible(chain.p);
  chain.aperiodic = chain.irreducible ? (chain_period(chain.p) == 1) : false;
  return chain;
}

Mat m_step(const Mat& p, long m) {
  if (m < 0) fail(errc::invalid_lag, "m_step requires m >= 0");
  Mat result = Mat::Identity(p.rows(), p.cols());
  Mat base = p;
  unsigned long rest = static_cast<unsigned long>(m);
  while (rest != 0) {
    if (rest & 1UL) result = result * base;
    rest >>= 1UL;
    if (rest != 0) base = base * base;
  }
  return result;
}

std::size_t JointTensor::flat_index(const std::vector<int>& states) const {
  if (states.size() != lags.size()) fail(errc::invalid_argument, "state tuple arity mismatch");
  std::size_t idx = 0;
  for (std::size_t c = 0; c < states.size(); ++c) {
    if (states[c] < 0 || states[c] >= k) fail(errc::invalid_argument, "state out of range");
    idx = idx * static_cast<std::size_t>(k) + static_cast<std::size_t>(states[c]);
  }
  return idx;
}

Vec JointTensor::marginal(std::size_t coord) const {
  if (coord >= lags.size()) fail(errc::invalid_argument, "coordinate out of range");
  Vec out = Vec::Zero(k);
  const std::size_t n = cell_count();
  // stride of the chosen coordinate in the row-major layout
  std::size_t stride = 1;
  for (std::size_t c = coord + 1; c < lags.size(); ++c) stride *= static_cast<std::size_t>(k);
  for (std::size_t idx = 0; idx < n; ++idx) {
    int state = static_cast<int>((idx / stride) % static_cast<std::size_t>(k));
    out[state] += mass[idx];
  }
  return out;
}

JointTensor joint_lags(const FiniteChain& chain, std::vector<long> lags, std::size_t cell_cap) {
  if (lags.empty()) fail(errc::invalid_argument, "joint_lags needs at least one lag");
  std::sort(lags.begin(), lags.end());
  lags.erase(std::unique(lags.begin(), lags.end()), lags.end());
  const long shift = lags.front();
  for (long& l : lags) l -= shift;  // stationarity: shift so the minimum is 0

  const std::size_t m = lags.size();
  const std::size_t k = static_cast<std::size_t>(chain.k);
  std::size_t cells = 1;
  for (std::size_t c = 0; c < m; ++c) {
    if (cells > cell_cap / k)
      fail(errc::tensor_too_large, "joint tensor would exceed the cell cap");
    cells *= k;
  }

  // transition matrices across consecutive gaps
  std::vector<Mat> steps;
  steps.reserve(m > 0 ? m - 1 : 0);
  for (std::size_t c = 0; c + 1 < m; ++c) steps.push_back(m_step(chain.p, lags[c + 1] - lags[c]));

  JointTensor tensor;
  tensor.lags = std::move(lags);
  // report the caller's lag values, not the shifted ones
  for (long& l : tensor.lags) l += shift;
  tensor.k = chain.k;
  tensor.mass.assign(cells, 0.0);

  // depth-first fill with running path probability; prunes zero prefixes
  std::vector<int> state(m, 0);
  std::vector<double> prefix(m, 0.0);
  std::size_t idx = 0;
  std::size_t depth = 0;
  while (true) {
    if (state[depth] < chain.k) {
      double prob = depth == 0 ? chain.pi[state[0]]
                               : prefix[depth - 1] * steps[depth - 1](state[depth - 1], state[depth]);
      if (depth + 1 == m) {
        tensor.mass[idx * k + static_cast<std::size_t>(state[depth])] = prob;
        ++state[depth];
      } else if (prob == 0.0) {
        ++state[depth];  // whole subtree carries no mass
      } else {
        prefix[depth] = prob;
        idx = idx * k + static_cast<std::size_t>(state[depth]);
        ++depth;
        state[depth] = 0;
      }
    } else {
      if (depth == 0) break;
      --depth;
      idx /= k;
      ++state[depth];
    }
  }
  return tensor;
}

JointPmf2 pair_joint(const FiniteChain& chain, long lag) {
  // By stationarity the law of (X_0, X_{-n}) is the transpose of (X_0, X_n).
  Mat step = m_step(chain.p, lag < 0 ? -lag : lag);
  Mat cells = chain.pi.asDiagonal() * step;
  if (lag < 0) cells.transposeInPlace();
  return JointPmf2::from_cells(std::move(cells));
}

JointPmf2 JointPmf2::from_cells(Mat cells, double tol) {
  if (cells.rows() == 0 || cells.cols() == 0) fail(errc::invalid_argument, "empty joint");
  if ((cells.array() < 0.0).any()) fail(errc::invalid_argument, "negative joint cell");
  double total = cells.sum();
  if (std::abs(total - 1.0) > tol)
    fail(errc::invalid_argument, "joint mass is " + std::to_string(total));
  JointPmf2 joint;
  joint.row_marginal = cells.rowwise().sum();
  joint.col_marginal = cells.colwise().sum().transpose();
  joint.cells = std::move(cells);
  return joint;
}

PathSample sample_path(const FiniteChain& chain, std::size_t length, std::uint64_t seed) {
  if (length < 1) fail(errc::invalid_argument, "path length must be >= 1");
  std::mt19937_64 rng(seed);
  auto draw_uniform = [&rng]() {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;  // [0, 1), platform-stable
  };
  auto draw_from = [&](const double* weights, int k) {
    double u = draw_uniform();
    double acc = 0.0;
    int last_positive = 0;
    for (int i = 0; i < k; ++i) {
      if (weights[i] > 0.0) last_positive = i;
      acc += weights[i];
      if (u < acc) return i;
    }
    return last_positive;  // u landed in trailing rounding slack
  };

  PathSample sample;
  sample.seed = seed;
  sample.states.resize(length);
  sample.states[0] = draw_from(chain.pi.data(), chain.k);
  std::vector<double> row(static_cast<std::size_t>(chain.k));
  for (std::size_t t = 1; t < length; ++t) {
    for (int j = 0; j < chain.k; ++j) row[static_cast<std::size_t>(j)] = chain.p(sample.states[t - 1], j);
    sample.states[t] = draw_from(row.data(), chain.k);
  }
  return sample;
}

}  // namespace mixchain
