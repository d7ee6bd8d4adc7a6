#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace mixchain {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Absolute tolerance for probability-mass checks (sums to 1, row sums).
inline constexpr double kProbTol = 1e-12;
// Per-entry tolerance for the stationarity residual pi*P - pi.
inline constexpr double kStationaryTol = 1e-12;
// Smallest admissible probability cell before the underflow guard trips.
inline constexpr double kMassFloor = 1e-300;
// Default cap on joint-tensor cell counts.
inline constexpr std::size_t kDefaultTensorCellCap = 10'000'000;

enum class errc {
  ok = 0,
  invalid_argument,
  not_irreducible,
  periodic,
  tensor_too_large,
  zero_marginal,
  too_many_states,
  invalid_lag,
  degenerate_event,
  no_anchor_lag,
  condition_failed,
  calibration_failed,
  not_reversible,
  non_positive_value,
  parse_error,
  io_error,
  numerical_failure,
};

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw Error(code, what); }

// Throws invalid_argument unless p has nonnegative entries summing to 1 within tol.
void check_prob_vector(const Vec& p, double tol = kProbTol);

// Throws invalid_argument unless every row of p is a probability vector within tol.
void check_transition_matrix(const Mat& p, double tol = kProbTol);

// A strictly stationary finite-state Markov chain: stationary law plus kernel.
// Structure flags are recorded at construction; chains that are not irreducible
// or not aperiodic are representable (some operations reject them later).
struct FiniteChain {
  int k = 0;
  Vec pi;
  Mat p;
  bool irreducible = false;
  bool aperiodic = false;

  // Validates pi, p, and the per-entry stationarity residual, then records
  // the support-graph structure flags.
  static FiniteChain make(Vec pi, Mat p);
};

// Exact joint law of a pair of discrete variables, with cached marginals.
struct JointPmf2 {
  Mat cells;
  Vec row_marginal;
  Vec col_marginal;

  int rows() const { return static_cast<int>(cells.rows()); }
  int cols() const { return static_cast<int>(cells.cols()); }

  // Computes marginals and validates nonnegativity and total mass within tol.
  static JointPmf2 from_cells(Mat cells, double tol = kProbTol);
};

// Exact joint law of (X_l, l in lags) stored as a flat row-major array over
// state tuples, one coordinate per lag in ascending lag order.
struct JointTensor {
  std::vector<long> lags;     // sorted, distinct
  int k = 0;                  // states per coordinate
  std::vector<double> mass;   // size k^lags.size()

  std::size_t coords() const { return lags.size(); }
  std::size_t cell_count() const { return mass.size(); }

  std::size_t flat_index(const std::vector<int>& states) const;
  double at(const std::vector<int>& states) const { return mass[flat_index(states)]; }

  // Marginal law of one coordinate (by position in the sorted lag list).
  Vec marginal(std::size_t coord) const;
};

struct PathSample {
  std::vector<int> states;
  std::uint64_t seed = 0;
};

}  // namespace mixchain
