#include <doctest.h>

#include <cmath>

#include "mixchain/block.hpp"
#include "mixchain/chain.hpp"
#include "oracles.hpp"

using namespace mixchain;

namespace {

Mat mat2(double a, double b, double c, double d) {
  Mat m(2, 2);
  m << a, b, c, d;
  return m;
}

}  // namespace

TEST_CASE("stationary distribution of symmetric doubly stochastic kernel") {
  Vec pi = stationary_distribution(mat2(0.5, 0.5, 0.5, 0.5));
  CHECK(pi[0] == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(pi[1] == doctest::Approx(0.5).epsilon(1e-13));
}

TEST_CASE("stationary distribution solves the two-state balance equation") {
  // pi_0 * 0.1 = pi_1 * 0.3 with pi_0 + pi_1 = 1
  Vec pi = stationary_distribution(mat2(0.9, 0.1, 0.3, 0.7));
  CHECK(std::abs(pi[0] - 0.75) < 1e-12);
  CHECK(std::abs(pi[1] - 0.25) < 1e-12);
  CHECK(stationarity_residual(pi, mat2(0.9, 0.1, 0.3, 0.7)) <= 1e-12);
}

TEST_CASE("period-2 kernel is rejected") {
  try {
    stationary_distribution(mat2(0.0, 1.0, 1.0, 0.0));
    FAIL("expected periodic");
  } catch (const Error& e) {
    CHECK(e.code() == errc::periodic);
  }
}

TEST_CASE("reducible kernel is rejected") {
  try {
    stationary_distribution(mat2(1.0, 0.0, 0.5, 0.5));
    FAIL("expected not_irreducible");
  } catch (const Error& e) {
    CHECK(e.code() == errc::not_irreducible);
  }
}

TEST_CASE("reversibility checks") {
  SUBCASE("block chains are reversible") {
    FiniteChain chain = build_block({3, 0.1});
    CHECK(is_reversible(chain, 1e-13));
  }
  SUBCASE("two-state chain with detailed balance") {
    Vec pi(2);
    pi << 0.75, 0.25;
    FiniteChain chain = FiniteChain::make(pi, mat2(0.9, 0.1, 0.3, 0.7));
    CHECK(is_reversible(chain, 1e-15));  // 0.75 * 0.1 == 0.25 * 0.3
  }
  SUBCASE("directed three-cycle breaks detailed balance") {
    Mat p = Mat::Zero(3, 3);
    p(0, 1) = p(1, 2) = p(2, 0) = 1.0;
    Vec pi = Vec::Constant(3, 1.0 / 3.0);
    FiniteChain chain = FiniteChain::make(pi, p);
    CHECK_FALSE(is_reversible(chain, 1e-6));
  }
}

TEST_CASE("m_step basics") {
  Mat p = mat2(0.9, 0.1, 0.3, 0.7);
  CHECK(m_step(p, 0).isIdentity(0.0));
  CHECK((m_step(p, 1) - p).cwiseAbs().maxCoeff() == 0.0);

  SUBCASE("two-step ladder cell equals the single positive path product") {
    FiniteChain chain = build_block({3, 0.1});
    Mat p2 = m_step(chain.p, 2);
    double expected = chain.p(0, 1) * chain.p(1, 2);  // only path 0 -> 1 -> 2
    CHECK(p2(0, 2) == doctest::Approx(expected).epsilon(1e-14));
    CHECK(p2(0, 2) == doctest::Approx(1.0003e-4).epsilon(1e-4));
  }

  SUBCASE("rows re-sum to one") {
    FiniteChain chain = build_block({5, 1.0 / 3.0});
    for (long m : {2L, 7L, 25L}) {
      Mat pm = m_step(chain.p, m);
      for (int i = 0; i < chain.k; ++i) CHECK(std::abs(pm.row(i).sum() - 1.0) <= 1e-11);
    }
  }

  SUBCASE("semigroup property p^(m+n) = p^m p^n") {
    std::mt19937_64 rng(7);
    FiniteChain chain = oracles::random_chain(rng, 5);
    Mat lhs = m_step(chain.p, 9);
    Mat rhs = m_step(chain.p, 4) * m_step(chain.p, 5);
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-11);
  }
}

TEST_CASE("joint_lags") {
  FiniteChain chain = build_block({3, 0.1});

  SUBCASE("single lag returns the stationary law") {
    JointTensor t = joint_lags(chain, {0});
    for (int s = 0; s < chain.k; ++s) CHECK(t.mass[s] == chain.pi[s]);
  }

  SUBCASE("pair law matches the block joint cell for cell") {
    JointTensor t = joint_lags(chain, {0, 1});
    JointPmf2 expected = block_joint({3, 0.1});
    for (int i = 0; i < chain.k; ++i)
      for (int j = 0; j < chain.k; ++j)
        CHECK(std::abs(t.at({i, j}) - expected.cells(i, j)) <= 1e-16);
  }

  SUBCASE("stationarity of every coordinate marginal") {
    JointTensor t = joint_lags(chain, {-2, 0, 2});
    for (std::size_t coord = 0; coord < 3; ++coord) {
      Vec marginal = t.marginal(coord);
      CHECK((marginal - chain.pi).cwiseAbs().maxCoeff() <= 1e-14);
    }
  }

  SUBCASE("translation invariance is exact") {
    JointTensor a = joint_lags(chain, {0, 3, 5});
    JointTensor b = joint_lags(chain, {-7, -4, -2});
    REQUIRE(a.cell_count() == b.cell_count());
    for (std::size_t i = 0; i < a.cell_count(); ++i) CHECK(a.mass[i] == b.mass[i]);
  }

  SUBCASE("mass totals one") {
    JointTensor t = joint_lags(chain, {0, 1, 4, 9});
    double total = 0.0;
    for (double v : t.mass) total += v;
    CHECK(std::abs(total - 1.0) <= 1e-11);
  }

  SUBCASE("cells match the chain-rule product directly") {
    std::mt19937_64 rng(83);
    FiniteChain generic = oracles::random_chain(rng, 4);
    JointTensor t = joint_lags(generic, {0, 2, 5});
    Mat p2 = m_step(generic.p, 2);
    Mat p3 = m_step(generic.p, 3);
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b)
        for (int c = 0; c < 4; ++c) {
          double expected = generic.pi[a] * p2(a, b) * p3(b, c);
          CHECK(t.at({a, b, c}) == doctest::Approx(expected).epsilon(1e-14));
        }
  }

  SUBCASE("reversible pair law is symmetric") {
    JointTensor t = joint_lags(chain, {0, 4});
    for (int i = 0; i < chain.k; ++i)
      for (int j = 0; j < chain.k; ++j)
        CHECK(std::abs(t.at({i, j}) - t.at({j, i})) <= 1e-11);
  }

  SUBCASE("cell cap is enforced") {
    std::vector<long> lags;
    for (long l = 0; l < 9; ++l) lags.push_back(l);
    FiniteChain wide = build_block({7, 0.01});  // 8 states, 8^9 cells
    try {
      joint_lags(wide, lags);
      FAIL("expected tensor_too_large");
    } catch (const Error& e) {
      CHECK(e.code() == errc::tensor_too_large);
    }
  }
}

TEST_CASE("pair_joint handles negative lags by transposition") {
  std::mt19937_64 rng(11);
  FiniteChain chain = oracles::random_chain(rng, 4);  // generically non-reversible
  JointPmf2 fwd = pair_joint(chain, 3);
  JointPmf2 bwd = pair_joint(chain, -3);
  CHECK((fwd.cells - bwd.cells.transpose()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("sample_path") {
  SUBCASE("deterministic identity chain yields a constant path") {
    Vec pi = Vec::Constant(3, 1.0 / 3.0);
    FiniteChain chain = FiniteChain::make(pi, Mat::Identity(3, 3));
    PathSample sample = sample_path(chain, 50, 123);
    for (int s : sample.states) CHECK(s == sample.states[0]);
  }

  SUBCASE("reproducible from the seed") {
    FiniteChain chain = build_block({3, 0.1});
    PathSample a = sample_path(chain, 1000, 42);
    PathSample b = sample_path(chain, 1000, 42);
    CHECK(a.states == b.states);
    PathSample c = sample_path(chain, 1000, 43);
    CHECK(a.states != c.states);
  }

  SUBCASE("single-step marginal matches pi statistically") {
    FiniteChain chain = build_block({3, 1.0 / 3.0});
    const int trials = 20000;
    Vec counts = Vec::Zero(chain.k);
    for (int t = 0; t < trials; ++t) {
      PathSample s = sample_path(chain, 1, 1000 + t);
      counts[s.states[0]] += 1.0;
    }
    counts /= trials;
    for (int s = 0; s < chain.k; ++s) {
      double se = std::sqrt(chain.pi[s] * (1.0 - chain.pi[s]) / trials);
      CHECK(std::abs(counts[s] - chain.pi[s]) <= 4.0 * se + 1e-4);
    }
  }
}

TEST_CASE("constructed chains satisfy the core invariants") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    FiniteChain chain =
        trial % 2 ? oracles::random_chain(rng, 2 + trial % 5) : oracles::random_reversible_chain(rng, 2 + trial % 5);
    CHECK(stationarity_residual(chain.pi, chain.p) <= 1e-12);
    for (int i = 0; i < chain.k; ++i) CHECK(std::abs(chain.p.row(i).sum() - 1.0) <= 1e-12);
    JointPmf2 pair = pair_joint(chain, 3);
    CHECK((pair.row_marginal - chain.pi).cwiseAbs().maxCoeff() <= 1e-13);
    CHECK((pair.col_marginal - chain.pi).cwiseAbs().maxCoeff() <= 1e-13);
  }
}
