#pragma once

#include <variant>
#include <vector>

#include "dimwit/behaviour.hpp"
#include "dimwit/linalg.hpp"

namespace dimwit {

/// Noise that depends only on the measurement: P_n(b|xy) = P_n(b|y).
struct PMMeasurementNoise {
  Matrix table;  // |Y| x 2, row y holds (P_n(0|y), P_n(1|y))
};

/// Uncorrelated local noise: P_n(ab|xy) = P_A(a|x) P_B(b|y).
struct BellProductNoise {
  Matrix alice;  // m x n
  Matrix bob;    // m x n
};

using NoiseModel = std::variant<PMMeasurementNoise, BellProductNoise>;

const char* noise_kind(const NoiseModel& model);

/// Uniform noise tables.
PMMeasurementNoise uniform_measurement_noise(const PMScenario& sc);
BellProductNoise uniform_product_noise(const BellScenario& sc);

/// The behaviour P_n of a noise model in the given scenario.
PMBehaviour noise_behaviour(const PMMeasurementNoise& noise, const PMScenario& sc);
BellBehaviour noise_behaviour(const BellProductNoise& noise, const BellScenario& sc);

/// P_eta = eta P + (1 - eta) P_n. Throws PreconditionError for eta outside [0, 1]
/// and for a model that does not match the behaviour's kind or scenario.
PMBehaviour apply_noise(const PMBehaviour& beh, const NoiseModel& model, const Scalar& eta);
BellBehaviour apply_noise(const BellBehaviour& beh, const NoiseModel& model, const Scalar& eta);

struct RobustnessRow {
  Scalar eta;
  int rank = 0;
  bool ok = false;
  /// Smallest singular value above the tolerance and largest one below it (float mode).
  std::optional<double> margin_above;
  std::optional<double> margin_below;
};

struct RobustnessReport {
  bool bell = false;
  int base_rank = 0;
  ScalarKind mode = ScalarKind::exact;
  std::optional<double> tolerance_used;
  std::vector<RobustnessRow> rows;

  bool all_ok() const;
};

/// PM: rank(P_eta) == rank(P) for every eta > 0 (eta = 0 only records the rank).
/// Bell: rank(P) - 1 <= rank(P_eta) <= rank(P) + 1 for every eta > 0.
/// Ranks are exact when the behaviour, noise tables and eta are all exact.
RobustnessReport rank_robustness_check(const PMBehaviour& beh, const NoiseModel& model,
                                       const std::vector<Scalar>& etas,
                                       std::optional<double> rank_tol = std::nullopt);
RobustnessReport rank_robustness_check(const BellBehaviour& beh, const NoiseModel& model,
                                       const std::vector<Scalar>& etas,
                                       std::optional<double> rank_tol = std::nullopt);

}  // namespace dimwit
