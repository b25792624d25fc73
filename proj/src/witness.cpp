#include "dimwit/witness.hpp"

#include <cmath>

#include "dimwit/errors.hpp"

namespace dimwit {

const char* to_string(WitnessSource s) {
  switch (s) {
    case WitnessSource::pm_rank:
      return "pm_rank";
    case WitnessSource::w_rank:
      return "w_rank";
    case WitnessSource::bell_rank:
      return "bell_rank";
  }
  return "unknown";
}

namespace {

void require_valid(const ValidationReport& report, const char* what) {
  if (report.valid()) return;
  throw ConstraintError(std::string(what) + ": " + report.violations.front().message +
                        (report.violations.size() > 1
                             ? " (and " + std::to_string(report.violations.size() - 1) + " more)"
                             : ""));
}

RankResult rank_of(const Matrix& m, const WitnessOptions& opts) {
  return rank(m, opts.rank_tol, opts.force_float);
}

// Verdict mode follows the behaviour unless float rank was forced.
ScalarKind mode_for(ScalarKind kind, const WitnessOptions& opts) {
  return opts.force_float ? ScalarKind::floating : kind;
}

}  // namespace

WitnessVerdict witness_pm(const PMBehaviour& beh, const WitnessOptions& opts) {
  require_valid(validate_pm(beh, opts.validation_tol), "invalid behaviour");
  const auto r = rank_of(pm_matrix(beh), opts);
  WitnessVerdict v;
  v.source = WitnessSource::pm_rank;
  v.rank_used = r.rank;
  v.mode = mode_for(beh.kind(), opts);
  v.classical_lb = std::max(1, r.rank);
  v.quantum_lb = std::max(1, ceil_sqrt(r.rank));
  return v;
}

WitnessVerdict witness_w(const PMBehaviour& beh, const WitnessOptions& opts) {
  require_valid(validate_pm(beh, opts.validation_tol), "invalid behaviour");
  const auto r = rank_of(w_matrix(beh), opts);
  WitnessVerdict v;
  v.source = WitnessSource::w_rank;
  v.rank_used = r.rank;
  v.mode = mode_for(beh.kind(), opts);
  v.classical_lb = r.rank + 1;
  v.quantum_lb = ceil_sqrt(r.rank + 1);
  return v;
}

WitnessVerdict witness_bell(const BellBehaviour& beh, const WitnessOptions& opts) {
  const auto report = validate_bell(beh, opts.validation_tol);
  for (const auto& viol : report.violations) {
    if (viol.constraint.rfind("no_signaling", 0) == 0) {
      throw ConstraintError("signaling behaviour refused: " + viol.message);
    }
  }
  require_valid(report, "invalid behaviour");
  const auto r = rank_of(bell_matrix(beh), opts);
  WitnessVerdict v;
  v.source = WitnessSource::bell_rank;
  v.rank_used = r.rank;
  v.mode = mode_for(beh.kind(), opts);
  v.quantum_lb = std::max(1, ceil_sqrt(r.rank));
  return v;
}

AppendixRelation appendix_relation(const PMBehaviour& beh, const WitnessOptions& opts) {
  const Matrix w = w_matrix(beh);  // throws UnsupportedScenario
  const Matrix p = pm_matrix(beh);
  const std::size_t rows = p.rows();

  // E = product of the elementary matrices E_i (i odd, 1-based): identity with -1 at (i, i+1).
  const Scalar zero = beh.kind() == ScalarKind::exact ? Scalar(0) : Scalar(0.0);
  const Scalar one = beh.kind() == ScalarKind::exact ? Scalar(1) : Scalar(1.0);
  Matrix e(rows, rows, zero);
  for (std::size_t i = 0; i < rows; ++i) e(i, i) = one;
  for (std::size_t i = 0; i + 1 < rows; i += 2) e(i, i + 1) = -one;
  const Matrix ep = e * p;

  Matrix reduced(rows / 2, p.cols() / 2);
  for (std::size_t r = 0; r < reduced.rows(); ++r)
    for (std::size_t c = 0; c < reduced.cols(); ++c) reduced(r, c) = ep(2 * r, 2 * c);

  AppendixRelation out;
  out.mode = mode_for(beh.kind(), opts);
  out.rank_w = rank_of(w, opts).rank;
  out.rank_p = rank_of(p, opts).rank;
  out.holds = out.rank_w <= out.rank_p;
  out.elimination_preserves_rank = rank_of(ep, opts).rank == out.rank_p;
  out.rank_reduced = rank_of(reduced, opts).rank;
  const Matrix wt = w.transposed();
  out.reduced_matches_w = true;
  for (std::size_t i = 0; i < wt.data().size(); ++i) {
    const Scalar d = wt.data()[i] - reduced.data()[i];
    const bool same = d.is_exact() ? d.is_zero() : std::abs(d.to_double()) <= 1e-12;
    out.reduced_matches_w = out.reduced_matches_w && same;
  }
  return out;
}

}  // namespace dimwit
