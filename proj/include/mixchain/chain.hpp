#pragma once

#include <cstdint>
#include <vector>

#include "mixchain/types.hpp"

namespace mixchain {

// True iff every state reaches every other along the support graph of p.
bool chain_irreducible(const Mat& p);

// gcd of cycle lengths of the support graph restricted to recurrent structure;
// 1 means aperiodic. Only meaningful for irreducible chains.
int chain_period(const Mat& p);

// Stationary law of an irreducible aperiodic kernel, by dominant-eigenvector
// iteration from the uniform start (threshold 1e-14, at most 1e6 sweeps).
// Throws not_irreducible / periodic on structural failure.
Vec stationary_distribution(const Mat& p);

// max_j |(pi^T P)_j - pi_j|
double stationarity_residual(const Vec& pi, const Mat& p);

// max_{i,j} |pi_i p_ij - pi_j p_ji|
double detailed_balance_residual(const FiniteChain& chain);

bool is_reversible(const FiniteChain& chain, double tol);

// p^m by repeated squaring; m = 0 gives the identity.
Mat m_step(const Mat& p, long m);

// Exact law of (X_l, l in lags). Negative lags are allowed: the lag set is
// shifted so its minimum is 0 (the law is shift-invariant by stationarity).
JointTensor joint_lags(const FiniteChain& chain, std::vector<long> lags,
                       std::size_t cell_cap = kDefaultTensorCellCap);

// Pair law of (X_0, X_lag).
JointPmf2 pair_joint(const FiniteChain& chain, long lag);

// Bit-reproducible stationary sample path: X_0 ~ pi, successors from p rows.
PathSample sample_path(const FiniteChain& chain, std::size_t length, std::uint64_t seed);

}  // namespace mixchain
