#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dimwit/io.hpp"
#include "dimwit/random.hpp"

namespace dimwit {

const char* version();

struct ExperimentConfig {
  std::string name;
  bool bell = false;
  int n_inputs_a = 4;  // PM |X|
  int n_inputs_b = 3;  // PM |Y|, also k for density restoration
  int m = 2;           // Bell inputs per party
  int n = 2;           // Bell outputs per party
  int samples = 1000;
  Seed seed = 0;
  RankMode rank_mode = RankMode::floating;
  std::optional<double> rank_tol;
  /// Worker threads; 0 picks the hardware concurrency. Results do not depend on it.
  unsigned threads = 0;
  /// Planted behaviours. They take the first sample slots and are flagged.
  std::vector<AnyBehaviour> include;
  std::optional<std::string> output_path;

  /// Throws PreconditionError on out-of-range parameters.
  void check() const;
};

/// Fraction of sampled behaviours whose matrix rank falls below the generic value
/// (min(|X|, |Y|+1) for PM, mn - m + 1 for Bell). Bell samples use local dimension mn.
json negligibility_experiment(const ExperimentConfig& cfg);

/// Mixes each planted behaviour (D_0 by default) towards Q and records, for every
/// delta, an eps with max |P - P_eps| < delta and rank P_eps = |Y| + 1, exactly.
json density_restoration_experiment(const ExperimentConfig& cfg,
                                    const std::vector<Scalar>& deltas = {});

/// The behaviour L of an (m, n) scenario, its rank, the d values for which Q_d is
/// shown non-convex, and the LDB mixture that puts L in the hull of Q_1.
json nonconvexity_report(int m, int n);

}  // namespace dimwit
