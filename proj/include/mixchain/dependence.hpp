#pragma once

#include <optional>
#include <vector>

#include "mixchain/types.hpp"

namespace mixchain {

struct FiniteChain;

// Coefficient bundle for one bipartite joint. Entropies and info are in nats.
struct DependenceReport {
  double psi = 0.0;
  double rho = 0.0;
  double beta = 0.0;
  double info = 0.0;
  std::optional<double> lambda;
  double h_row = 0.0;
  double h_col = 0.0;
};

// Removes zero-mass rows/columns (with index remapping); coefficients are
// defined over positive-mass atoms only.
JointPmf2 drop_zero_marginals(const JointPmf2& q);

// q_ij / (r_i c_j); throws zero_marginal if either marginal vanishes.
double eta(const JointPmf2& q, int i, int j);

// max over positive-mass cells of |eta - 1| (attained at atoms).
double psi_from_joint(const JointPmf2& q);

// Maximal correlation: second singular value of q_ij / sqrt(r_i c_j),
// clamped to [0, 1].
double rho_max_corr(const JointPmf2& q);

// (1/2) sum |q_ij - r_i c_j|.
double beta_from_joint(const JointPmf2& q);

// Mutual information in nats, computed as sum r_i c_j F(eta_ij - 1) with
// F(d) = (1+d)log1p(d) - d >= 0, so the sum has no cancellation.
double info_from_joint(const JointPmf2& q);

// -sum p log p with 0 log 0 = 0, in nats.
double entropy(const Vec& p);

// Event-pair supremum of |P(AB) - P(A)P(B)| / sqrt(P(A)P(B)), exact by subset
// enumeration restricted to subsets of mass <= 1/2 (complement reduction).
// Throws too_many_states above 16 states per side.
double lambda_from_joint(const JointPmf2& q);

// Flattens a joint tensor into a bipartite joint: rows are state tuples over
// the first n_left coordinates, columns the rest.
JointPmf2 flatten_bipartite(const JointTensor& t, std::size_t n_left);

// rho(sigma(X_l, l in s), sigma(X_l, l in t)) for disjoint finite lag sets;
// a lower bound for the interlaced coefficient at dist(s, t).
double rho_index_sets(const FiniteChain& chain, std::vector<long> s, std::vector<long> t,
                      std::size_t cell_cap = kDefaultTensorCellCap);

// Exact Corr(1_A, 1_B) with A = {X_0 = top}, B = {X_-m = X_m = top - m}.
// m = 0 degenerates to Corr(1_A, 1_A) = 1. Throws invalid_lag unless m < top/2,
// degenerate_event if either event has mass 0 or 1.
double indicator_correlation(const FiniteChain& chain, long m, int top_state);

struct PsiRatioTable {
  Mat g;  // g_ij = p^(lag)_ij / pi_j
  double psi() const { return (g.array() - 1.0).abs().maxCoeff(); }
};

PsiRatioTable psi_ratio_table(const FiniteChain& chain, long lag);

// Full coefficient bundle of the pair (X_0, X_lag).
DependenceReport coefficients_at_lag(const FiniteChain& chain, long lag, bool with_lambda = false);

}  // namespace mixchain
