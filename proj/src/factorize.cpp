#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "dimwit/errors.hpp"
#include "dimwit/search.hpp"

namespace dimwit {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Euclidean projection onto the probability simplex.
VectorXd project_simplex(const VectorXd& v) {
  std::vector<double> u(v.data(), v.data() + v.size());
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumsum = 0.0, theta = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    cumsum += u[j];
    const double t = (cumsum - 1.0) / static_cast<double>(j + 1);
    if (u[j] - t > 0) theta = t;
  }
  return (v.array() - theta).max(0.0).matrix();
}

double largest_eigenvalue(const MatrixXd& h) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

double max_residual(const MatrixXd& p0, const MatrixXd& s, const MatrixXd& t) {
  return (p0 - s * t).cwiseAbs().maxCoeff();
}

// Columns of T: box-constrained least squares, warm-started projected gradient.
void update_responder(const MatrixXd& p0, const MatrixXd& s, MatrixXd& t, int inner) {
  const MatrixXd h = s.transpose() * s;
  const double lip = largest_eigenvalue(h);
  if (lip <= 0) return;
  const MatrixXd c = s.transpose() * p0;
  for (int it = 0; it < inner; ++it) {
    t = (t - (h * t - c) / lip).cwiseMax(0.0).cwiseMin(1.0);
  }
}

// Rows of S: simplex-constrained least squares.
void update_sender(const MatrixXd& p0, MatrixXd& s, const MatrixXd& t, int inner) {
  const MatrixXd h = t * t.transpose();
  const double lip = largest_eigenvalue(h);
  if (lip <= 0) return;
  const MatrixXd c = t * p0.transpose();  // d x |X|
  for (Eigen::Index x = 0; x < s.rows(); ++x) {
    VectorXd row = s.row(x).transpose();
    for (int it = 0; it < inner; ++it) row = project_simplex(row - (h * row - c.col(x)) / lip);
    s.row(x) = row.transpose();
  }
}

void svd_start(const MatrixXd& p0, int d, MatrixXd& s, MatrixXd& t) {
  Eigen::JacobiSVD<MatrixXd> svd(p0, Eigen::ComputeThinU);
  const auto rank = std::min<Eigen::Index>(d, svd.singularValues().size());
  s = MatrixXd::Zero(p0.rows(), d);
  for (Eigen::Index m = 0; m < rank; ++m) {
    s.col(m) = svd.matrixU().col(m).cwiseAbs() * std::sqrt(svd.singularValues()(m));
  }
  for (Eigen::Index x = 0; x < s.rows(); ++x) {
    const double sum = s.row(x).sum();
    if (sum > 0) {
      s.row(x) /= sum;
    } else {
      s.row(x).setConstant(1.0 / d);
    }
  }
  t = MatrixXd::Constant(d, p0.cols(), 0.5);
}

void random_start(int rows, int cols, int d, Rng& rng, MatrixXd& s, MatrixXd& t) {
  s.resize(rows, d);
  for (int x = 0; x < rows; ++x) {
    double total = 0;
    for (int m = 0; m < d; ++m) total += (s(x, m) = rng.exponential());
    s.row(x) /= total;
  }
  t.resize(d, cols);
  for (int m = 0; m < d; ++m)
    for (int y = 0; y < cols; ++y) t(m, y) = rng.uniform();
}

ClassicalPMStrategy to_strategy(const PMScenario& sc, const MatrixXd& s, const MatrixXd& t,
                                bool exact) {
  ClassicalPMStrategy st;
  st.d = static_cast<int>(s.cols());
  st.scenario = sc;
  st.sender = Matrix(sc.n_inputs_a, st.d);
  for (int x = 0; x < sc.n_inputs_a; ++x) {
    if (exact) {
      // Exact binary values, with the largest entry absorbing the rounding so rows sum to 1.
      Eigen::Index top;
      s.row(x).maxCoeff(&top);
      Rational rest = 0;
      for (int m = 0; m < st.d; ++m) {
        if (m == top) continue;
        st.sender(x, m) = Scalar(Rational(s(x, m)));
        rest += Rational(s(x, m));
      }
      st.sender(x, top) = Scalar(Rational(1 - rest));
    } else {
      const double total = s.row(x).sum();
      for (int m = 0; m < st.d; ++m) st.sender(x, m) = Scalar(s(x, m) / total);
    }
  }
  for (int m = 0; m < st.d; ++m)
    for (int y = 0; y < sc.n_inputs_b; ++y) {
      const double t0 = std::clamp(t(m, y), 0.0, 1.0);
      if (exact) {
        st.responder.emplace_back(Rational(t0));
        st.responder.emplace_back(Rational(1 - Rational(t0)));
      } else {
        st.responder.emplace_back(t0);
        st.responder.emplace_back(1.0 - t0);
      }
    }
  return st;
}

double behaviour_distance(const PMBehaviour& a, const PMBehaviour& b) {
  if (a.kind() == ScalarKind::exact && b.kind() == ScalarKind::exact) {
    Rational worst = 0;
    for (std::size_t i = 0; i < a.probs().size(); ++i) {
      Rational diff = abs(a.probs()[i].rational() - b.probs()[i].rational());
      if (diff > worst) worst = diff;
    }
    return worst.get_d();
  }
  double worst = 0;
  for (std::size_t i = 0; i < a.probs().size(); ++i) {
    worst = std::max(worst, std::abs(a.probs()[i].to_double() - b.probs()[i].to_double()));
  }
  return worst;
}

// d >= |X|: message m = x, responder reads P off directly.
ClassicalPMStrategy direct_model(const PMBehaviour& beh, int d) {
  const auto& sc = beh.scenario();
  const bool exact = beh.kind() == ScalarKind::exact;
  const Scalar one = exact ? Scalar(Rational(1)) : Scalar(1.0);
  const Scalar zero = exact ? Scalar(Rational(0)) : Scalar(0.0);
  ClassicalPMStrategy st;
  st.d = d;
  st.scenario = sc;
  st.sender = Matrix(sc.n_inputs_a, d);
  for (int x = 0; x < sc.n_inputs_a; ++x)
    for (int m = 0; m < d; ++m) st.sender(x, m) = m == x ? one : zero;
  for (int m = 0; m < d; ++m)
    for (int y = 0; y < sc.n_inputs_b; ++y) {
      st.responder.push_back(m < sc.n_inputs_a ? beh(0, m, y) : one);
      st.responder.push_back(m < sc.n_inputs_a ? beh(1, m, y) : zero);
    }
  return st;
}

}  // namespace

FactorizationResult factorize_classical(const PMBehaviour& beh, int d,
                                        const FactorizationOptions& opts) {
  if (d < 1) throw PreconditionError("factorize_classical needs d >= 1");
  if (opts.iterations <= 0 || opts.restarts <= 0 || opts.inner_iterations <= 0) {
    throw PreconditionError("factorize_classical needs positive iteration and restart budgets");
  }
  const auto report = validate_pm(beh);
  if (!report.valid()) throw ConstraintError("invalid behaviour: " + report.violations[0].message);

  const auto& sc = beh.scenario();
  if (d >= sc.n_inputs_a) {
    FactorizationResult direct;
    direct.model = direct_model(beh, d);
    direct.residual = behaviour_distance(beh, simulate_classical_pm(*direct.model));
    direct.status = direct.residual <= opts.tolerance ? FactorizationStatus::found
                                                      : FactorizationStatus::not_found;
    return direct;
  }
  MatrixXd p0(sc.n_inputs_a, sc.n_inputs_b);
  for (int x = 0; x < sc.n_inputs_a; ++x)
    for (int y = 0; y < sc.n_inputs_b; ++y) p0(x, y) = beh(0, x, y).to_double();

  FactorizationResult best;
  best.residual = std::numeric_limits<double>::infinity();
  MatrixXd best_s, best_t;

  for (int restart = 0; restart < opts.restarts; ++restart) {
    MatrixXd s, t;
    if (restart == 0) {
      svd_start(p0, d, s, t);
    } else {
      Rng rng(derive_seed(opts.seed, static_cast<std::uint64_t>(restart)));
      random_start(sc.n_inputs_a, sc.n_inputs_b, d, rng, s, t);
    }
    double res = std::numeric_limits<double>::infinity();
    int it = 0;
    while (it < opts.iterations) {
      update_responder(p0, s, t, opts.inner_iterations);
      update_sender(p0, s, t, opts.inner_iterations);
      ++it;
      res = max_residual(p0, s, t);
      if (res <= opts.tolerance * 0.5) break;
    }
    best.restarts = restart + 1;
    if (res < best.residual) {
      best.residual = res;
      best.iterations = it;
      best.best_restart = restart;
      best_s = s;
      best_t = t;
    }
    if (res <= opts.tolerance * 0.5) break;
  }

  const bool exact = beh.kind() == ScalarKind::exact;
  best.model = to_strategy(sc, best_s, best_t, exact);
  best.residual = behaviour_distance(beh, simulate_classical_pm(*best.model));
  best.status = best.residual <= opts.tolerance ? FactorizationStatus::found
                                                : FactorizationStatus::not_found;
  return best;
}

}  // namespace dimwit
