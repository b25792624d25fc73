#include "dimwit/behaviour.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dimwit/errors.hpp"

namespace dimwit {

namespace {

// Promotes to floating when kinds are mixed so a behaviour stays homogeneous.
ScalarKind homogenize(std::vector<Scalar>& probs) {
  const bool any_float =
      std::any_of(probs.begin(), probs.end(), [](const Scalar& s) { return !s.is_exact(); });
  if (!any_float) return ScalarKind::exact;
  for (auto& p : probs) {
    if (p.is_exact()) p = p.to_floating();
  }
  return ScalarKind::floating;
}

std::string join_indices(const std::vector<int>& idx) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < idx.size(); ++i) os << (i ? "," : "") << idx[i];
  os << ')';
  return os.str();
}

struct Checker {
  ScalarKind mode;
  double tol;
  ValidationReport report;

  // True if `value` is (tolerably) negative.
  bool negative(const Scalar& value) const {
    return mode == ScalarKind::exact ? value.sign() < 0 : value.to_double() < -tol;
  }
  bool differs(const Scalar& a, const Scalar& b) const {
    if (mode == ScalarKind::exact) return !(a == b);
    return std::abs(a.to_double() - b.to_double()) > tol;
  }

  void nonnegative(const Scalar& value, std::vector<int> idx) {
    if (!negative(value)) return;
    report.violations.push_back({"negative", idx, std::abs(value.to_double()),
                                 "negative entry at " + join_indices(idx) + ", value " +
                                     value.to_string()});
  }

  void normalized(const Scalar& sum, std::vector<int> idx) {
    if (!differs(sum, Scalar(1))) return;
    report.violations.push_back({"normalization", idx, std::abs(sum.to_double() - 1.0),
                                 "normalization at " + join_indices(idx) + ", sum " +
                                     sum.to_string()});
  }
};

Checker make_checker(ScalarKind kind, double tol) {
  Checker c{kind, kind == ScalarKind::exact ? 0.0 : tol, {}};
  c.report.mode = kind;
  c.report.tolerance = c.tol;
  return c;
}

template <class Behaviour>
void check_weights(std::span<const Behaviour> behs, std::span<const Scalar> weights) {
  if (behs.empty()) throw PreconditionError("mix needs at least one behaviour");
  if (behs.size() != weights.size()) {
    throw PreconditionError("mix: number of weights differs from number of behaviours");
  }
  for (const auto& b : behs) {
    if (!(b.scenario() == behs.front().scenario())) {
      throw PreconditionError("mix: behaviours belong to different scenarios");
    }
  }
  Scalar total(0);
  bool exact = true;
  for (const auto& w : weights) {
    if (w.sign() < 0) throw PreconditionError("mix: negative weight " + w.to_string());
    total += w;
    exact = exact && w.is_exact();
  }
  const bool ok = exact ? total == Scalar(1) : std::abs(total.to_double() - 1.0) <= 1e-12;
  if (!ok) throw PreconditionError("mix: weights sum to " + total.to_string() + ", not 1");
}

template <class Behaviour>
Behaviour mix_impl(std::span<const Behaviour> behs, std::span<const Scalar> weights) {
  check_weights(behs, weights);
  std::vector<Scalar> out(behs.front().probs().size(), Scalar(0));
  for (std::size_t k = 0; k < behs.size(); ++k) {
    const auto& probs = behs[k].probs();
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += weights[k] * probs[i];
  }
  return Behaviour(behs.front().scenario(), std::move(out));
}

}  // namespace

void PMScenario::check() const {
  if (n_inputs_a < 1 || n_inputs_b < 1) {
    throw StructuralError("prepare-and-measure scenario needs |X| >= 1 and |Y| >= 1");
  }
}

void BellScenario::check() const {
  if (m < 1 || n < 2) throw StructuralError("Bell scenario needs m >= 1 and n >= 2");
}

PMBehaviour::PMBehaviour(PMScenario scenario, std::vector<Scalar> probs)
    : scenario_(scenario), probs_(std::move(probs)) {
  scenario_.check();
  const auto expected = static_cast<std::size_t>(2) * scenario_.n_inputs_a * scenario_.n_inputs_b;
  if (probs_.size() != expected) {
    throw StructuralError("PM behaviour has " + std::to_string(probs_.size()) +
                          " entries, scenario requires " + std::to_string(expected));
  }
  kind_ = homogenize(probs_);
}

PMBehaviour PMBehaviour::from_zero_outcome(PMScenario scenario, const Matrix& p0) {
  scenario.check();
  if (p0.rows() != static_cast<std::size_t>(scenario.n_inputs_a) ||
      p0.cols() != static_cast<std::size_t>(scenario.n_inputs_b)) {
    throw StructuralError("P(0|xy) table shape does not match scenario");
  }
  std::vector<Scalar> probs(2 * p0.data().size());
  for (int x = 0; x < scenario.n_inputs_a; ++x)
    for (int y = 0; y < scenario.n_inputs_b; ++y) {
      probs[index(scenario, 0, x, y)] = p0(x, y);
      probs[index(scenario, 1, x, y)] = Scalar(1) - p0(x, y);
    }
  return PMBehaviour(scenario, std::move(probs));
}

PMBehaviour PMBehaviour::to_floating() const {
  std::vector<Scalar> p;
  p.reserve(probs_.size());
  for (const auto& v : probs_) p.push_back(v.to_floating());
  return PMBehaviour(scenario_, std::move(p));
}

BellBehaviour::BellBehaviour(BellScenario scenario, std::vector<Scalar> probs)
    : scenario_(scenario), probs_(std::move(probs)) {
  scenario_.check();
  const auto mn = static_cast<std::size_t>(scenario_.m) * scenario_.n;
  if (probs_.size() != mn * mn) {
    throw StructuralError("Bell behaviour has " + std::to_string(probs_.size()) +
                          " entries, scenario requires " + std::to_string(mn * mn));
  }
  kind_ = homogenize(probs_);
}

BellBehaviour BellBehaviour::to_floating() const {
  std::vector<Scalar> p;
  p.reserve(probs_.size());
  for (const auto& v : probs_) p.push_back(v.to_floating());
  return BellBehaviour(scenario_, std::move(p));
}

ValidationReport validate_pm(const PMBehaviour& beh, double tol) {
  auto c = make_checker(beh.kind(), tol);
  const auto& s = beh.scenario();
  for (int b = 0; b < 2; ++b)
    for (int x = 0; x < s.n_inputs_a; ++x)
      for (int y = 0; y < s.n_inputs_b; ++y) c.nonnegative(beh(b, x, y), {b, x, y});
  for (int x = 0; x < s.n_inputs_a; ++x)
    for (int y = 0; y < s.n_inputs_b; ++y) c.normalized(beh(0, x, y) + beh(1, x, y), {x, y});
  return c.report;
}

ValidationReport validate_bell(const BellBehaviour& beh, double tol) {
  auto c = make_checker(beh.kind(), tol);
  const int m = beh.scenario().m;
  const int n = beh.scenario().n;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int x = 0; x < m; ++x)
        for (int y = 0; y < m; ++y) c.nonnegative(beh(a, b, x, y), {a, b, x, y});
  for (int x = 0; x < m; ++x)
    for (int y = 0; y < m; ++y) {
      Scalar sum(0);
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) sum += beh(a, b, x, y);
      c.normalized(sum, {x, y});
    }

  // Alice's marginal P(a|x) must not depend on y.
  auto marginal_a = [&](int a, int x, int y) {
    Scalar s(0);
    for (int b = 0; b < n; ++b) s += beh(a, b, x, y);
    return s;
  };
  auto marginal_b = [&](int b, int x, int y) {
    Scalar s(0);
    for (int a = 0; a < n; ++a) s += beh(a, b, x, y);
    return s;
  };
  for (int a = 0; a < n; ++a)
    for (int x = 0; x < m; ++x)
      for (int y = 0; y < m; ++y)
        for (int y2 = y + 1; y2 < m; ++y2) {
          const Scalar lhs = marginal_a(a, x, y);
          const Scalar rhs = marginal_a(a, x, y2);
          if (c.differs(lhs, rhs)) {
            std::vector<int> idx{a, x, y, y2};
            c.report.violations.push_back(
                {"no_signaling_a", idx, std::abs(lhs.to_double() - rhs.to_double()),
                 "marginal of a depends on y at " + join_indices(idx) + ": " + lhs.to_string() +
                     " vs " + rhs.to_string()});
          }
        }
  for (int b = 0; b < n; ++b)
    for (int x = 0; x < m; ++x)
      for (int x2 = x + 1; x2 < m; ++x2)
        for (int y = 0; y < m; ++y) {
          const Scalar lhs = marginal_b(b, x, y);
          const Scalar rhs = marginal_b(b, x2, y);
          if (c.differs(lhs, rhs)) {
            std::vector<int> idx{b, x, x2, y};
            c.report.violations.push_back(
                {"no_signaling_b", idx, std::abs(lhs.to_double() - rhs.to_double()),
                 "marginal of b depends on x at " + join_indices(idx) + ": " + lhs.to_string() +
                     " vs " + rhs.to_string()});
          }
        }
  return c.report;
}

Matrix pm_matrix(const PMBehaviour& beh) {
  const auto& s = beh.scenario();
  Matrix out(s.n_inputs_a, 2 * s.n_inputs_b);
  for (int x = 0; x < s.n_inputs_a; ++x)
    for (int y = 0; y < s.n_inputs_b; ++y)
      for (int b = 0; b < 2; ++b) out(x, 2 * y + b) = beh(b, x, y);
  return out;
}

Matrix bell_matrix(const BellBehaviour& beh) {
  const int m = beh.scenario().m;
  const int n = beh.scenario().n;
  Matrix out(m * n, m * n);
  for (int x = 0; x < m; ++x)
    for (int a = 0; a < n; ++a)
      for (int y = 0; y < m; ++y)
        for (int b = 0; b < n; ++b) out(x * n + a, y * n + b) = beh(a, b, x, y);
  return out;
}

Matrix w_matrix(const PMBehaviour& beh) {
  const auto& s = beh.scenario();
  if (s.n_inputs_a != 2 * s.n_inputs_b) {
    throw UnsupportedScenario("W matrix requires |X| = 2|Y|, got |X| = " +
                              std::to_string(s.n_inputs_a) +
                              ", |Y| = " + std::to_string(s.n_inputs_b));
  }
  const int k = s.n_inputs_b;
  Matrix out(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) out(i, j) = beh(0, 2 * j, i) - beh(0, 2 * j + 1, i);
  return out;
}

PMBehaviour mix(std::span<const PMBehaviour> behs, std::span<const Scalar> weights) {
  return mix_impl(behs, weights);
}

BellBehaviour mix(std::span<const BellBehaviour> behs, std::span<const Scalar> weights) {
  return mix_impl(behs, weights);
}

}  // namespace dimwit
