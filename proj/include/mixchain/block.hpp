#pragma once

#include <vector>

#include "mixchain/spectral.hpp"
#include "mixchain/types.hpp"

namespace mixchain {

// Parameters of the reversible building-block chain on {0, ..., n_cap}:
// state masses thin geometrically (mu_m ~ eps^{2m}, mu_N ~ eps^{2N-1}) and
// only nearest-neighbour moves (plus rest at 0) carry mass.
struct BlockParams {
  int n_cap = 3;      // N >= 3
  double eps = 0.1;   // in (0, 1/3]

  // Throws invalid_argument on range violations or when eps^{2N-1} would
  // underflow below kMassFloor.
  void validate() const;
};

// 1 - 2 [ eps^{2N-1} + sum_{u=1}^{N-1} eps^{2u} ]; mass left at the origin
// after the ladder cells are paid for. Always > 1/2 on the valid range.
double block_threshold(const BlockParams& params);

// Marginal law mu over {0..N}.
Vec block_marginal(const BlockParams& params);

// Symmetric pair joint of (Y_0, Y_1); rows sum to block_marginal bit-exactly.
JointPmf2 block_joint(const BlockParams& params);

// The chain itself: P rows are joint rows divided by the marginal.
FiniteChain build_block(const BlockParams& params);

// Cancellation-free closed form of the deflated symmetric kernel
// B_ij = (q_ij - mu_i mu_j)/sqrt(mu_i mu_j): every entry is assembled from
// same-sign terms, so B keeps full relative accuracy at extreme eps.
Mat block_deflated_kernel(const BlockParams& params);

// SpectralKernel built from the closed-form kernel above.
SpectralKernel block_spectral(const BlockParams& params);

// eps_k = (1/3) 2^{-k} for k in [k_min, k_max], decreasing.
std::vector<double> dyadic_grid(int k_min, int k_max);

}  // namespace mixchain
