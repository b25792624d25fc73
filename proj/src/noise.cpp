#include "dimwit/noise.hpp"

#include <algorithm>

#include "dimwit/errors.hpp"

namespace dimwit {

namespace {

void check_stochastic_rows(const Matrix& t, const std::string& what) {
  for (std::size_t r = 0; r < t.rows(); ++r) {
    Scalar total(0);
    bool exact = true;
    for (std::size_t c = 0; c < t.cols(); ++c) {
      const Scalar& v = t(r, c);
      exact = exact && v.is_exact();
      if (v.sign() < 0 && (v.is_exact() || v.to_double() < -kDefaultValidationTol)) {
        throw ConstraintError(what + " has a negative entry in row " + std::to_string(r));
      }
      total += v;
    }
    const bool ok = exact ? total == Scalar(1)
                          : std::abs(total.to_double() - 1.0) <= kDefaultValidationTol;
    if (!ok) throw ConstraintError(what + " row " + std::to_string(r) + " sums to " + total.to_string());
  }
}

void check_eta(const Scalar& eta) {
  if (eta.sign() < 0 || Scalar(1) < eta) {
    throw PreconditionError("noise parameter eta = " + eta.to_string() + " outside [0, 1]");
  }
}

template <class Behaviour>
Behaviour blend(const Behaviour& beh, const Behaviour& noise, const Scalar& eta) {
  const Behaviour parts[] = {beh, noise};
  const Scalar w[] = {eta, Scalar(1) - eta};
  return mix(std::span<const Behaviour>(parts), std::span<const Scalar>(w));
}

bool all_exact(const Matrix& m) {
  return std::all_of(m.data().begin(), m.data().end(), [](const Scalar& s) { return s.is_exact(); });
}

bool model_exact(const NoiseModel& model) {
  if (const auto* pm = std::get_if<PMMeasurementNoise>(&model)) return all_exact(pm->table);
  const auto& b = std::get<BellProductNoise>(model);
  return all_exact(b.alice) && all_exact(b.bob);
}

template <class Behaviour, class MatrixFn>
RobustnessReport robustness(const Behaviour& beh, const NoiseModel& model,
                            const std::vector<Scalar>& etas, std::optional<double> rank_tol,
                            bool bell, MatrixFn to_matrix) {
  bool exact = beh.kind() == ScalarKind::exact && model_exact(model);
  for (const auto& e : etas) exact = exact && e.is_exact();

  RobustnessReport report;
  report.bell = bell;
  report.mode = exact ? ScalarKind::exact : ScalarKind::floating;
  auto rank_of = [&](const Matrix& m) { return rank(m, rank_tol, !exact); };
  const auto base = rank_of(to_matrix(beh));
  report.base_rank = base.rank;
  report.tolerance_used = base.tolerance_used;

  for (const auto& eta : etas) {
    const auto noisy = apply_noise(beh, model, eta);
    const auto r = rank_of(to_matrix(noisy));
    RobustnessRow row;
    row.eta = eta;
    row.rank = r.rank;
    if (eta.is_zero()) {
      row.ok = true;  // full noise: nothing is claimed
    } else if (bell) {
      row.ok = r.rank >= base.rank - 1 && r.rank <= base.rank + 1;
    } else {
      row.ok = r.rank == base.rank;
    }
    if (r.singular_values && r.tolerance_used) {
      const auto& sv = *r.singular_values;
      const double cut = *r.tolerance_used * (sv.empty() ? 0.0 : sv.front());
      for (double s : sv) {
        if (s > cut) {
          row.margin_above = s;
        } else if (!row.margin_below) {
          row.margin_below = s;
        }
      }
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

}  // namespace

const char* noise_kind(const NoiseModel& model) {
  return std::holds_alternative<PMMeasurementNoise>(model) ? "pm_measurement" : "bell_product";
}

PMMeasurementNoise uniform_measurement_noise(const PMScenario& sc) {
  return {Matrix(sc.n_inputs_b, 2, Scalar::ratio(1, 2))};
}

BellProductNoise uniform_product_noise(const BellScenario& sc) {
  return {Matrix(sc.m, sc.n, Scalar::ratio(1, sc.n)), Matrix(sc.m, sc.n, Scalar::ratio(1, sc.n))};
}

PMBehaviour noise_behaviour(const PMMeasurementNoise& noise, const PMScenario& sc) {
  if (noise.table.rows() != static_cast<std::size_t>(sc.n_inputs_b) || noise.table.cols() != 2) {
    throw PreconditionError("measurement noise table must be |Y| x 2");
  }
  check_stochastic_rows(noise.table, "measurement noise table");
  std::vector<Scalar> probs(2 * sc.n_inputs_a * sc.n_inputs_b);
  for (int b = 0; b < 2; ++b)
    for (int x = 0; x < sc.n_inputs_a; ++x)
      for (int y = 0; y < sc.n_inputs_b; ++y) probs[PMBehaviour::index(sc, b, x, y)] = noise.table(y, b);
  return PMBehaviour(sc, std::move(probs));
}

BellBehaviour noise_behaviour(const BellProductNoise& noise, const BellScenario& sc) {
  const auto m = static_cast<std::size_t>(sc.m);
  const auto n = static_cast<std::size_t>(sc.n);
  if (noise.alice.rows() != m || noise.alice.cols() != n || noise.bob.rows() != m ||
      noise.bob.cols() != n) {
    throw PreconditionError("product noise tables must be m x n");
  }
  check_stochastic_rows(noise.alice, "P_A");
  check_stochastic_rows(noise.bob, "P_B");
  std::vector<Scalar> probs(m * n * m * n);
  for (int a = 0; a < sc.n; ++a)
    for (int b = 0; b < sc.n; ++b)
      for (int x = 0; x < sc.m; ++x)
        for (int y = 0; y < sc.m; ++y)
          probs[BellBehaviour::index(sc, a, b, x, y)] = noise.alice(x, a) * noise.bob(y, b);
  return BellBehaviour(sc, std::move(probs));
}

PMBehaviour apply_noise(const PMBehaviour& beh, const NoiseModel& model, const Scalar& eta) {
  check_eta(eta);
  const auto* noise = std::get_if<PMMeasurementNoise>(&model);
  if (!noise) throw PreconditionError("PM behaviour needs a pm_measurement noise model");
  return blend(beh, noise_behaviour(*noise, beh.scenario()), eta);
}

BellBehaviour apply_noise(const BellBehaviour& beh, const NoiseModel& model, const Scalar& eta) {
  check_eta(eta);
  const auto* noise = std::get_if<BellProductNoise>(&model);
  if (!noise) throw PreconditionError("Bell behaviour needs a bell_product noise model");
  return blend(beh, noise_behaviour(*noise, beh.scenario()), eta);
}

bool RobustnessReport::all_ok() const {
  return std::all_of(rows.begin(), rows.end(), [](const auto& r) { return r.ok; });
}

RobustnessReport rank_robustness_check(const PMBehaviour& beh, const NoiseModel& model,
                                       const std::vector<Scalar>& etas,
                                       std::optional<double> rank_tol) {
  return robustness(beh, model, etas, rank_tol, false,
                    [](const PMBehaviour& b) { return pm_matrix(b); });
}

RobustnessReport rank_robustness_check(const BellBehaviour& beh, const NoiseModel& model,
                                       const std::vector<Scalar>& etas,
                                       std::optional<double> rank_tol) {
  return robustness(beh, model, etas, rank_tol, true,
                    [](const BellBehaviour& b) { return bell_matrix(b); });
}

}  // namespace dimwit
