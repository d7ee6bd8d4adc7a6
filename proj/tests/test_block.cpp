#include <doctest.h>

#include <cmath>

#include "mixchain/analysis.hpp"
#include "mixchain/block.hpp"
#include "mixchain/chain.hpp"
#include "mixchain/dependence.hpp"

using namespace mixchain;

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS((BlockParams{2, 0.1}.validate()), Error);
  CHECK_THROWS_AS((BlockParams{21, 0.1}.validate()), Error);
  CHECK_THROWS_AS((BlockParams{3, 0.0}.validate()), Error);
  CHECK_THROWS_AS((BlockParams{3, 0.34}.validate()), Error);
  CHECK_THROWS_AS((BlockParams{3, -0.1}.validate()), Error);
  CHECK_NOTHROW((BlockParams{3, 1.0 / 3.0}.validate()));
  CHECK_NOTHROW((BlockParams{20, 1.0 / 3.0}.validate()));
  // eps^{2N-1} below 1e-300 trips the underflow guard
  CHECK_THROWS_AS((BlockParams{20, 1e-8}.validate()), Error);
}

TEST_CASE("marginal of the (3, 0.1) block matches the direct substitution") {
  Vec mu = block_marginal({3, 0.1});
  REQUIRE(mu.size() == 4);
  CHECK(std::abs(mu[0] - 0.98978) <= 1e-15);
  CHECK(std::abs(mu[1] - 0.0101) <= 1e-15);
  CHECK(std::abs(mu[2] - 0.00011) <= 1e-15);
  CHECK(std::abs(mu[3] - 0.00001) <= 1e-15);
}

TEST_CASE("marginal at eps = 1/3 hits the rational values") {
  Vec mu = block_marginal({3, 1.0 / 3.0});
  CHECK(std::abs(mu[0] - 208.0 / 243.0) <= 1e-15);
  CHECK(std::abs(block_threshold({3, 1.0 / 3.0}) - 181.0 / 243.0) <= 1e-15);
}

TEST_CASE("marginal mass telescopes to one") {
  for (int n : {3, 5, 8, 14, 20})
    for (double eps : dyadic_grid(0, 10)) {
      if (std::pow(eps, 2 * n - 1) < kMassFloor) continue;
      CHECK(std::abs(block_marginal({n, eps}).sum() - 1.0) <= 1e-14);
    }
}

TEST_CASE("joint of the (3, 0.1) block matches the direct substitution") {
  JointPmf2 q = block_joint({3, 0.1});
  CHECK(std::abs(q.cells(0, 0) - 0.97978) <= 1e-15);
  CHECK(std::abs(q.cells(0, 1) - 0.01) <= 1e-16);
  CHECK(std::abs(q.cells(1, 0) - 0.01) <= 1e-16);
  CHECK(std::abs(q.cells(1, 2) - 1e-4) <= 1e-19);
  CHECK(std::abs(q.cells(2, 3) - 1e-5) <= 1e-20);
  CHECK(q.cells(1, 1) == 0.0);
  CHECK(q.cells(2, 0) == 0.0);
  CHECK(q.cells(0, 3) == 0.0);
  CHECK(q.cells(3, 3) == 0.0);
}

TEST_CASE("joint symmetry and row sums are exact") {
  for (int n : {3, 4, 7})
    for (double eps : {1.0 / 3.0, 0.01, 1e-5}) {
      JointPmf2 q = block_joint({n, eps});
      Vec mu = block_marginal({n, eps});
      CHECK((q.cells - q.cells.transpose()).cwiseAbs().maxCoeff() == 0.0);
      for (int i = 0; i <= n; ++i) CHECK(q.cells.row(i).sum() == mu[i]);
    }
}

TEST_CASE("transition rows of the built chain") {
  FiniteChain chain = build_block({3, 0.1});
  CHECK(chain.p(1, 0) == doctest::Approx(1.0 / 1.01).epsilon(1e-14));  // 0.990099...
  CHECK(chain.p(1, 2) == doctest::Approx(0.01 / 1.01).epsilon(1e-14));
  CHECK(chain.p(3, 2) == 1.0);
  CHECK(chain.irreducible);
  CHECK(chain.aperiodic);
  // tridiagonal support with a hole: zero when i = j >= 1 or |i - j| >= 2
  for (int i = 0; i <= 3; ++i)
    for (int j = 0; j <= 3; ++j)
      if ((i == j && i >= 1) || std::abs(i - j) >= 2) CHECK(chain.p(i, j) == 0.0);
}

TEST_CASE("construction residuals stay below 1e-13 across the grid") {
  for (int n = 3; n <= 8; ++n)
    for (double eps : dyadic_grid(0, 14)) {
      FiniteChain chain = build_block({n, eps});
      CHECK(stationarity_residual(chain.pi, chain.p) <= 1e-13);
      CHECK(detailed_balance_residual(chain) <= 1e-13);
    }
}

TEST_CASE("threshold inequality holds over the whole parameter box") {
  for (int n = 3; n <= 20; ++n)
    for (double eps : dyadic_grid(0, 14)) CHECK(block_threshold({n, eps}) > 0.5);
  // all subtracted terms vanish as eps -> 0
  CHECK(block_threshold({3, 1e-12}) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("downhill transitions approach one on the dyadic grid") {
  // p_{m, m-1} -> 1 and p_{N-1, N}/eps -> 1 as eps -> 0
  for (int n : {3, 5}) {
    double prev_gap = 1.0, prev_ratio_gap = 1.0;
    for (double eps : dyadic_grid(4, 12)) {
      FiniteChain chain = build_block({n, eps});
      double worst_gap = 0.0;
      for (int m = 1; m <= n; ++m) worst_gap = std::max(worst_gap, 1.0 - chain.p(m, m - 1));
      CHECK(worst_gap < prev_gap);
      prev_gap = worst_gap;
      double ratio_gap = std::abs(chain.p(n - 1, n) / eps - 1.0);
      CHECK(ratio_gap < prev_ratio_gap);
      prev_ratio_gap = ratio_gap;
    }
    CHECK(prev_gap < 1e-4);  // the level N-1 down-step gap decays like eps
    CHECK(prev_ratio_gap < 1e-4);
  }
}

TEST_CASE("lag-1 pair joint reproduces block_joint through the chain") {
  BlockParams params{4, 0.02};
  FiniteChain chain = build_block(params);
  JointPmf2 via_chain = pair_joint(chain, 1);
  JointPmf2 direct = block_joint(params);
  CHECK((via_chain.cells - direct.cells).cwiseAbs().maxCoeff() <= 1e-17);
}

TEST_CASE("marginal asymptotics: fitted exponents match the power laws") {
  for (int n : {3, 4}) {
    for (int m = 1; m <= n; ++m) {
      SweepRequest req;
      req.n_cap = n;
      req.quantity = SweepQuantity::marginal_m;
      req.m = m;
      req.k_min = 4;
      req.k_max = 14;
      SweepResult result = sweep(req);
      REQUIRE(result.fitted_exponent.has_value());
      double target = m == n ? 2.0 * n - 1.0 : 2.0 * m;
      CHECK(std::abs(*result.fitted_exponent - target) <= 0.05 * target);
      CHECK(result.pass);
    }
  }
}

TEST_CASE("multi-step asymptotics: uphill powers and downhill limits") {
  for (int n : {3, 4}) {
    // p^(m)_{0,m} ~ eps^{2m}, p^(N)_{0,N} ~ eps^{2N-1}
    for (int m : {1, 2, n}) {
      SweepRequest req;
      req.n_cap = n;
      req.quantity = SweepQuantity::mstep_ij;
      req.i = 0;
      req.j = m;
      req.k_min = 4;
      req.k_max = 14;
      SweepResult result = sweep(req);
      REQUIRE(result.fitted_exponent.has_value());
      double target = m == n ? 2.0 * n - 1.0 : 2.0 * m;
      CHECK(std::abs(*result.fitted_exponent - target) <= 0.05 * target);
    }
    // p^(j-i)_{j,i} -> 1 for N >= j > i >= 0
    FiniteChain fine = build_block({n, (1.0 / 3.0) * std::ldexp(1.0, -14)});
    for (int j = 1; j <= n; ++j)
      for (int i = 0; i < j; ++i) CHECK(m_step(fine.p, j - i)(j, i) > 0.999);
  }
}

TEST_CASE("closed-form deflated kernel is consistent with the naive kernel") {
  // at moderate eps the naive subtraction is trustworthy; compare entrywise
  for (double eps : {1.0 / 3.0, 0.05, 0.004}) {
    BlockParams params{4, eps};
    Mat closed = block_deflated_kernel(params);
    Vec mu = block_marginal(params);
    Vec sq = mu.array().sqrt().matrix();
    JointPmf2 joint = block_joint(params);
    Mat outer = sq * sq.transpose();
    Mat naive = (joint.cells.array() / outer.array()).matrix() - outer;
    CHECK((closed - naive).cwiseAbs().maxCoeff() <= 1e-13);
  }
}

TEST_CASE("deflated kernel annihilates sqrt(mu)") {
  for (int n : {3, 6})
    for (double eps : {1.0 / 3.0, 1e-2, 1e-6}) {
      BlockParams params{n, eps};
      Mat b = block_deflated_kernel(params);
      Vec sq = block_marginal(params).array().sqrt().matrix();
      double scale = b.cwiseAbs().maxCoeff();
      CHECK((b * sq).cwiseAbs().maxCoeff() <= 1e-14 * scale + 1e-280);
    }
}
