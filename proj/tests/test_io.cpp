#include <doctest.h>

#include <cmath>
#include <cstdio>

#include "mixchain/block.hpp"
#include "mixchain/chain.hpp"
#include "mixchain/io.hpp"
#include "oracles.hpp"

using namespace mixchain;

TEST_CASE("format_double round-trips doubles exactly") {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, 9.4739e-15, 0.98978, 2.2250738585072014e-308,
                   123456.789012345678, -0.0, 1.0}) {
    double back = std::strtod(format_double(v).c_str(), nullptr);
    CHECK(back == v);
  }
}

TEST_CASE("chain JSON round trip is bit exact") {
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 10; ++trial) {
    FiniteChain chain =
        trial % 2 ? oracles::random_chain(rng, 2 + trial % 4) : build_block({3 + trial % 4, 0.03});
    FiniteChain back = chain_from_json(chain_to_json(chain));
    REQUIRE(back.k == chain.k);
    for (int i = 0; i < chain.k; ++i) {
      CHECK(back.pi[i] == chain.pi[i]);
      for (int j = 0; j < chain.k; ++j) CHECK(back.p(i, j) == chain.p(i, j));
    }
  }
}

TEST_CASE("chain JSON emission is deterministic") {
  FiniteChain chain = build_block({4, 0.07});
  CHECK(chain_to_json(chain) == chain_to_json(chain));
}

TEST_CASE("chain JSON loading enforces the invariants") {
  CHECK_THROWS_AS(chain_from_json("{"), Error);
  CHECK_THROWS_AS(chain_from_json("{\"k\": 2, \"pi\": [0.5, 0.5]}"), Error);
  // non-stationary pi
  CHECK_THROWS_AS(
      chain_from_json(
          "{\"k\": 2, \"pi\": [0.9, 0.1], \"p\": [[0.5, 0.5], [0.5, 0.5]]}"),
      Error);
  // row does not sum to one
  CHECK_THROWS_AS(
      chain_from_json(
          "{\"k\": 2, \"pi\": [0.5, 0.5], \"p\": [[0.5, 0.4], [0.5, 0.5]]}"),
      Error);
  // valid
  FiniteChain ok = chain_from_json(
      "{\"k\": 2, \"pi\": [0.5, 0.5], \"p\": [[0.5, 0.5], [0.5, 0.5]]}");
  CHECK(ok.k == 2);
  CHECK(ok.irreducible);
}

TEST_CASE("dependence report JSON carries the fixed key order") {
  DependenceReport report;
  report.psi = 0.5;
  report.rho = 0.25;
  report.beta = 0.125;
  report.info = 0.0625;
  report.h_row = 1.0;
  report.h_col = 2.0;
  std::string text = dependence_report_to_json(report);
  CHECK(text.find("\"psi\"") < text.find("\"rho\""));
  CHECK(text.find("\"rho\"") < text.find("\"beta\""));
  CHECK(text.find("\"beta\"") < text.find("\"info\""));
  CHECK(text.find("\"info\"") < text.find("\"lambda\""));
  CHECK(text.find("\"lambda\": null") != std::string::npos);
  CHECK(text.find("\"h_row\"") < text.find("\"h_col\""));
  report.lambda = 0.125;
  CHECK(dependence_report_to_json(report).find("\"lambda\": 0.125") != std::string::npos);
}

TEST_CASE("sweep CSV shapes") {
  SweepResult result;
  result.quantity = "entropy";
  result.grid = {{1.0 / 3.0, 0.25}, {1.0 / 6.0, 0.125}};
  result.terminal = 0.125;
  result.monotone = true;
  result.pass = true;
  CHECK(sweep_to_csv(result) ==
        "eps,value\n0.33333333333333331,0.25\n0.16666666666666666,0.125\n");
  CHECK(block_sweep_to_csv(result) ==
        "eps,quantity,value\n0.33333333333333331,entropy,0.25\n0.16666666666666666,entropy,0.125\n");
  std::string report = sweep_report_to_json(result);
  CHECK(report.find("\"quantity\": \"entropy\"") != std::string::npos);
  CHECK(report.find("\"exponent\": null") != std::string::npos);
  CHECK(report.find("\"pass\": true") != std::string::npos);
}

TEST_CASE("certificate and theorem report serialization") {
  Certificate cert;
  cert.n_cap = 3;
  cert.eps = 0.25;
  cert.r = 0.5;
  cert.h_max = 30;
  cert.h_star = 12;
  cert.interlaced = {0.9};
  std::string text = certificate_to_json(cert);
  CHECK(text.find("\"n_cap\": 3") != std::string::npos);
  CHECK(text.find("\"all_ok\": false") != std::string::npos);
  CHECK(text.find("\"interlaced\": [0.9") != std::string::npos);

  TheoremReport report;
  report.r = 0.5;
  report.n_max_component = 4;
  report.h_max = 320;
  report.entropy_total = 0.01;
  report.entropy_ok = true;
  report.lags = {1, 2};
  report.rho_values = {0.1, 0.01};
  report.info_values = {1e-10, 1e-20};
  report.info_tails = {1e-7, 1e-13};
  report.beta_bounds = {1e-3, 1e-6};
  report.interlaced_lower = {0.75, 0.74};
  report.rho_ok = {true, true};
  report.info_ok = {true, true};
  report.beta_ok = {true, true};
  report.interlaced_prefix = {0.66, 0.75};
  report.certificates = {cert};
  std::string json = theorem_report_to_json(report);
  CHECK(json.find("\"entropy_total\": 0.01") != std::string::npos);
  CHECK(json.find("\"all_ok\": false") != std::string::npos);  // cert fails
  std::string csv = theorem_report_to_csv(report);
  CHECK(csv.find("n,rho,rho_bound,info,info_bound,beta_bound,interlaced_lower\n") == 0);
  CHECK(csv.find("\n1,0.10000000000000001,0.5,") != std::string::npos);
  CHECK(csv.find("\n2,0.01,0.25,") != std::string::npos);
}

TEST_CASE("file helpers") {
  std::string path = "mixchain_io_test.tmp";
  write_file(path, "hello\n");
  CHECK(read_file(path) == "hello\n");
  std::remove(path.c_str());
  CHECK_THROWS_AS(read_file("does/not/exist.json"), Error);
}
