#pragma once

#include <optional>

#include "dimwit/behaviour.hpp"
#include "dimwit/linalg.hpp"

namespace dimwit {

enum class WitnessSource { pm_rank, w_rank, bell_rank };

const char* to_string(WitnessSource s);

/// Lower bounds on the classical and quantum dimension implied by a rank.
struct WitnessVerdict {
  std::optional<int> classical_lb;
  std::optional<int> quantum_lb;
  WitnessSource source = WitnessSource::pm_rank;
  int rank_used = 0;
  ScalarKind mode = ScalarKind::exact;

  /// Only verdicts computed with exact arithmetic count as certificates.
  bool certified() const noexcept { return mode == ScalarKind::exact; }
};

struct WitnessOptions {
  std::optional<double> rank_tol;  // float mode only
  bool force_float = false;
  double validation_tol = kDefaultValidationTol;
};

/// classical_lb = rank P, quantum_lb = ceil(sqrt(rank P)).
/// Throws ConstraintError if the behaviour is not valid.
WitnessVerdict witness_pm(const PMBehaviour& beh, const WitnessOptions& opts = {});

/// classical_lb = rank W + 1, quantum_lb = ceil(sqrt(rank W + 1)). Requires |X| = 2|Y|.
WitnessVerdict witness_w(const PMBehaviour& beh, const WitnessOptions& opts = {});

/// quantum_lb = ceil(sqrt(rank P)); no classical bound. Signaling behaviours are refused
/// with ConstraintError, since the rank bound presumes tensor-product measurements.
WitnessVerdict witness_bell(const BellBehaviour& beh, const WitnessOptions& opts = {});

struct AppendixRelation {
  int rank_w = 0;
  int rank_p = 0;
  bool holds = false;
  ScalarKind mode = ScalarKind::exact;
  /// rank(E P) == rank(P), where E subtracts row x+1 from every row x with x even (0-based).
  bool elimination_preserves_rank = false;
  /// Deleting the odd rows and the b = 1 columns of E P leaves exactly W^T.
  bool reduced_matches_w = false;
  int rank_reduced = 0;
};

/// Computes rank W and rank P in the same mode and replays the row-elimination
/// argument that shows rank W <= rank P. Requires |X| = 2|Y|.
AppendixRelation appendix_relation(const PMBehaviour& beh, const WitnessOptions& opts = {});

}  // namespace dimwit
