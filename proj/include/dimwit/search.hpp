#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "dimwit/behaviour.hpp"
#include "dimwit/constructions.hpp"
#include "dimwit/random.hpp"
#include "dimwit/strategy.hpp"
#include "dimwit/witness.hpp"

namespace dimwit {

// ---------------------------------------------------------------------------
// Classical factorization P = sum_m u_m v_m^T with stochastic factors.

struct FactorizationOptions {
  int restarts = 32;
  int iterations = 2000;
  int inner_iterations = 25;
  double tolerance = 1e-8;  // acceptance threshold on the max-entry residual
  Seed seed = 0;
};

enum class FactorizationStatus { found, not_found };

struct FactorizationResult {
  FactorizationStatus status = FactorizationStatus::not_found;
  std::optional<ClassicalPMStrategy> model;  // best model, also when not found
  double residual = 0.0;                     // max |P(b|xy) - model(b|xy)|
  int iterations = 0;                        // outer iterations spent in the best restart
  int restarts = 0;                          // restarts actually run
  int best_restart = 0;
};

/// Alternating projected least squares for P(0|xy) = sum_m s(m|x) t(0|m,y), with
/// s(.|x) on the simplex and t(0|m,y) in [0, 1]. Restart 0 starts from the clipped
/// truncated SVD, the rest from Dirichlet draws derived from `opts.seed`. For an
/// exact behaviour the model is converted to exact rationals and the residual is
/// recomputed by exact simulation. For d >= |X| the model sending x itself is
/// returned without search. not_found is not a proof of non-membership.
FactorizationResult factorize_classical(const PMBehaviour& beh, int d,
                                        const FactorizationOptions& opts = {});

// ---------------------------------------------------------------------------
// Shared-randomness membership: LP over deterministic classical strategies.

enum class LpMode { floating, exact };

struct MembershipOptions {
  LpMode mode = LpMode::floating;
  double tolerance = 1e-9;  // float mode only
  std::uint64_t cap = kDefaultEnumerationCap;
  int max_iterations = 20000;
};

/// Deterministic strategy: sender map x -> m and responder tables (m, y) -> b.
/// Its index is sender_code * 2^(d|Y|) + responder_code, where sender_code reads
/// the sender map as base-d digits (x = 0 most significant) and responder_code
/// reads the outputs b(m, y) in order m*|Y| + y as base-2 digits.
struct DeterministicStrategy {
  int d = 1;
  std::vector<int> sender;     // size |X|
  std::vector<int> responder;  // size d*|Y|, entry m*|Y| + y

  std::uint64_t index(const PMScenario& sc) const;
  static DeterministicStrategy from_index(const PMScenario& sc, int d, std::uint64_t index);
  PMBehaviour behaviour(const PMScenario& sc) const;
};

struct WeightedStrategy {
  std::uint64_t index = 0;
  DeterministicStrategy strategy;
  Scalar weight;
};

struct MembershipCertificate {
  bool feasible = false;
  LpMode mode = LpMode::floating;
  double lp_tolerance = 0.0;  // 0 in exact mode
  std::vector<WeightedStrategy> weights;
  double max_reconstruction_error = 0.0;
  std::uint64_t strategy_count = 0;  // d^|X| * 2^(d|Y|), saturating
  int iterations = 0;
};

/// d^|X| * 2^(d|Y|), saturating at UINT64_MAX.
std::uint64_t deterministic_strategy_count(const PMScenario& sc, int d);

/// Phase-one simplex with column generation. Columns are priced by enumerating the
/// 2^(d|Y|) responder tables; the best sender for a table is chosen per x, so the
/// d^|X| sender maps are never listed. Throws CapExceeded when 2^(d|Y|) > cap and
/// SolverFailure when the iteration budget runs out.
MembershipCertificate membership_shared_randomness(const PMBehaviour& beh, int d,
                                                   const MembershipOptions& opts = {});

/// Mixture of the certificate's deterministic behaviours.
PMBehaviour reconstruct(const PMScenario& sc, const MembershipCertificate& cert);

struct SeparationReport {
  int k = 0;
  int m = 0;
  PMBehaviour behaviour;
  int rank = 0;
  WitnessVerdict verdict;
  MembershipCertificate certificate;  // d = 2, exact LP
  bool reconstruction_exact = false;
};

/// P_k with its exact rank, dimension bounds and an exact C'_2 certificate.
SeparationReport separation_report(int k, int m, const MembershipOptions& opts = {});

}  // namespace dimwit
