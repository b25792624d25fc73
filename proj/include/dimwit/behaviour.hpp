#pragma once

#include <span>
#include <string>
#include <vector>

#include "dimwit/matrix.hpp"
#include "dimwit/scalar.hpp"

namespace dimwit {

/// Prepare-and-measure scenario: |X| preparations, |Y| measurements, binary outcome.
struct PMScenario {
  int n_inputs_a = 1;
  int n_inputs_b = 1;
  static constexpr int n_outputs = 2;

  void check() const;
  friend bool operator==(const PMScenario&, const PMScenario&) = default;
};

/// Bell scenario (m, n): m inputs and n outputs per party.
struct BellScenario {
  int m = 1;
  int n = 2;

  void check() const;
  friend bool operator==(const BellScenario&, const BellScenario&) = default;
};

/// P(b|xy), stored flat with index (b*|X| + x)*|Y| + y. All entries share one scalar kind.
class PMBehaviour {
 public:
  using scenario_type = PMScenario;

  PMBehaviour(PMScenario scenario, std::vector<Scalar> probs);

  /// Builds a behaviour from the table P(0|xy) (rows x, columns y); P(1|xy) = 1 - P(0|xy).
  static PMBehaviour from_zero_outcome(PMScenario scenario, const Matrix& p0);

  const PMScenario& scenario() const noexcept { return scenario_; }
  const std::vector<Scalar>& probs() const noexcept { return probs_; }
  ScalarKind kind() const noexcept { return kind_; }

  const Scalar& operator()(int b, int x, int y) const {
    return probs_[index(scenario_, b, x, y)];
  }

  static std::size_t index(const PMScenario& s, int b, int x, int y) {
    return (static_cast<std::size_t>(b) * s.n_inputs_a + x) * s.n_inputs_b + y;
  }

  PMBehaviour to_floating() const;

  friend bool operator==(const PMBehaviour& a, const PMBehaviour& b) {
    return a.scenario_ == b.scenario_ && a.probs_ == b.probs_;
  }

 private:
  PMScenario scenario_;
  std::vector<Scalar> probs_;
  ScalarKind kind_;
};

/// P(ab|xy), stored flat with index ((a*n + b)*m + x)*m + y.
class BellBehaviour {
 public:
  using scenario_type = BellScenario;

  BellBehaviour(BellScenario scenario, std::vector<Scalar> probs);

  const BellScenario& scenario() const noexcept { return scenario_; }
  const std::vector<Scalar>& probs() const noexcept { return probs_; }
  ScalarKind kind() const noexcept { return kind_; }

  const Scalar& operator()(int a, int b, int x, int y) const {
    return probs_[index(scenario_, a, b, x, y)];
  }

  static std::size_t index(const BellScenario& s, int a, int b, int x, int y) {
    const auto m = static_cast<std::size_t>(s.m);
    const auto n = static_cast<std::size_t>(s.n);
    return ((a * n + b) * m + x) * m + y;
  }

  BellBehaviour to_floating() const;

  friend bool operator==(const BellBehaviour& a, const BellBehaviour& b) {
    return a.scenario_ == b.scenario_ && a.probs_ == b.probs_;
  }

 private:
  BellScenario scenario_;
  std::vector<Scalar> probs_;
  ScalarKind kind_;
};

inline constexpr double kDefaultValidationTol = 1e-12;

struct Violation {
  std::string constraint;  // negative | normalization | no_signaling_a | no_signaling_b
  std::vector<int> indices;
  double magnitude = 0.0;  // size of the violation
  std::string message;
};

struct ValidationReport {
  ScalarKind mode = ScalarKind::exact;
  double tolerance = 0.0;  // 0 in exact mode
  std::vector<Violation> violations;

  bool valid() const noexcept { return violations.empty(); }
};

/// Nonnegativity and normalization. Exact behaviours are checked exactly and
/// `tol` is ignored.
ValidationReport validate_pm(const PMBehaviour& beh, double tol = kDefaultValidationTol);

/// Nonnegativity, normalization and both no-signaling families
///   sum_b P(ab|xy) = sum_b P(ab|xy')   (reported as a, x, y, y')
///   sum_a P(ab|xy) = sum_a P(ab|x'y)   (reported as b, x, x', y)
ValidationReport validate_bell(const BellBehaviour& beh, double tol = kDefaultValidationTol);

/// |X| x 2|Y| matrix: row x, column 2y + b holds P(b|xy).
Matrix pm_matrix(const PMBehaviour& beh);

/// mn x mn matrix: row x*n + a, column y*n + b holds P(ab|xy), i.e. n x n blocks P_xy.
Matrix bell_matrix(const BellBehaviour& beh);

/// k x k matrix for |X| = 2k, |Y| = k. With 1-based indices the entries are
/// W(i,j) = P(0|2j-1,i) - P(0|2j,i); in 0-based storage W(i,j) = P(0|x=2j,y=i) - P(0|x=2j+1,y=i).
Matrix w_matrix(const PMBehaviour& beh);

/// Convex combination. Weights must be nonnegative and sum to one (exactly,
/// or within 1e-12 if any weight is floating).
PMBehaviour mix(std::span<const PMBehaviour> behs, std::span<const Scalar> weights);
BellBehaviour mix(std::span<const BellBehaviour> behs, std::span<const Scalar> weights);

}  // namespace dimwit
