#include "dimwit/strategy.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "dimwit/errors.hpp"

namespace dimwit {

namespace {

using Complex = std::complex<double>;

void hermitize(CMatrix& a, const std::string& what) {
  if (a.rows() != a.cols()) throw StructuralError(what + " is not square");
  const double dev = (a - a.adjoint()).cwiseAbs().maxCoeff();
  if (dev > kHermitianTol) {
    throw ConstraintError(what + " is not Hermitian (deviation " + format_double(dev) + ")");
  }
  a = (0.5 * (a + a.adjoint())).eval();
}

Eigen::VectorXd eigenvalues(const CMatrix& a) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(a, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

void require_psd(const CMatrix& a, const std::string& what) {
  if (a.rows() == 0) return;
  const double lo = eigenvalues(a).minCoeff();
  if (lo < -kOperatorTol) {
    throw ConstraintError(what + " is not positive semidefinite (min eigenvalue " +
                          format_double(lo) + ")");
  }
}

void require_density(CMatrix& rho, int dim, const std::string& what) {
  if (rho.rows() != dim || rho.cols() != dim) {
    throw StructuralError(what + " must be " + std::to_string(dim) + "x" + std::to_string(dim));
  }
  hermitize(rho, what);
  require_psd(rho, what);
  const double tr = rho.trace().real();
  if (std::abs(tr - 1.0) > kOperatorTol) {
    throw ConstraintError(what + " has trace " + format_double(tr) + ", expected 1");
  }
}

void require_measurements(std::vector<std::vector<CMatrix>>& meas, int settings, int outcomes,
                          int dim, const std::string& what) {
  if (meas.size() != static_cast<std::size_t>(settings)) {
    throw StructuralError(what + ": expected " + std::to_string(settings) + " settings");
  }
  const CMatrix id = CMatrix::Identity(dim, dim);
  for (std::size_t s = 0; s < meas.size(); ++s) {
    if (meas[s].size() != static_cast<std::size_t>(outcomes)) {
      throw StructuralError(what + ": setting " + std::to_string(s) + " needs " +
                            std::to_string(outcomes) + " outcomes");
    }
    CMatrix sum = CMatrix::Zero(dim, dim);
    for (std::size_t o = 0; o < meas[s].size(); ++o) {
      auto& op = meas[s][o];
      const std::string name = what + "[" + std::to_string(s) + "][" + std::to_string(o) + "]";
      if (op.rows() != dim || op.cols() != dim) throw StructuralError(name + " has wrong size");
      hermitize(op, name);
      require_psd(op, name);
      sum += op;
    }
    const double dev = (sum - id).cwiseAbs().maxCoeff();
    if (dev > kOperatorTol) {
      throw ConstraintError(what + ": setting " + std::to_string(s) +
                            " does not sum to identity (deviation " + format_double(dev) + ")");
    }
  }
}

double clip_probability(double p) {
  if (p < -kOperatorTol || p > 1.0 + kOperatorTol) {
    throw ConstraintError("simulated probability " + format_double(p) + " outside [0, 1]");
  }
  return std::clamp(p, 0.0, 1.0);
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

int support_rank(const CMatrix& h) {
  if (h.rows() == 0) return 0;
  const Eigen::VectorXd ev = eigenvalues(h);
  const double top = ev.cwiseAbs().maxCoeff();
  if (top == 0.0) return 0;
  return static_cast<int>((ev.array() > kOperatorTol * top).count());
}

CMatrix ginibre(int rows, int cols, Rng& rng) {
  CMatrix g(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) {
      const double re = rng.normal();
      const double im = rng.normal();
      g(i, j) = Complex(re, im);
    }
  return g;
}

// Returns the POVM and whether the Wishart fallback was used.
std::pair<std::vector<CMatrix>, bool> random_measurement(int d, int outcomes, Rng& rng) {
  std::vector<CMatrix> povm(outcomes, CMatrix::Zero(d, d));
  if (outcomes <= d) {
    const CMatrix u = haar_unitary(d, rng);
    for (int i = 0; i < d; ++i) povm[i % outcomes] += u.col(i) * u.col(i).adjoint();
    return {povm, false};
  }
  CMatrix total = CMatrix::Zero(d, d);
  for (auto& w : povm) {
    const CMatrix g = ginibre(d, d, rng);
    w = g * g.adjoint();
    total += w;
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> es(total);
  const Eigen::VectorXd inv_sqrt = es.eigenvalues().array().rsqrt();
  const CMatrix s = es.eigenvectors() * inv_sqrt.cast<Complex>().asDiagonal() *
                    es.eigenvectors().adjoint();
  for (auto& w : povm) {
    w = s * w * s;
    w = (0.5 * (w + w.adjoint())).eval();
  }
  return {povm, true};
}

std::vector<Scalar> dirichlet_row(int size, Rng& rng) {
  std::vector<double> e(size);
  double total = 0;
  for (auto& v : e) total += (v = rng.exponential());
  std::vector<Scalar> row;
  row.reserve(size);
  for (double v : e) row.emplace_back(v / total);
  return row;
}

std::vector<Scalar> dyadic_simplex(int size, Rng& rng, int bits) {
  const std::uint64_t scale = std::uint64_t{1} << bits;
  std::vector<std::uint64_t> cuts{0, scale};
  for (int i = 0; i + 1 < size; ++i) cuts.push_back(rng.below(scale + 1));
  std::sort(cuts.begin(), cuts.end());
  std::vector<Scalar> row;
  for (int i = 0; i < size; ++i) {
    row.emplace_back(Rational(Integer(std::to_string(cuts[i + 1] - cuts[i])), Integer(std::to_string(scale))));
  }
  return row;
}

}  // namespace

void ClassicalPMStrategy::validate(double tol) const {
  scenario.check();
  if (d < 1) throw StructuralError("classical strategy needs d >= 1");
  if (sender.rows() != static_cast<std::size_t>(scenario.n_inputs_a) ||
      sender.cols() != static_cast<std::size_t>(d)) {
    throw StructuralError("sender table must be |X| x d");
  }
  if (responder.size() != static_cast<std::size_t>(d) * scenario.n_inputs_b * 2) {
    throw StructuralError("responder table must have d*|Y|*2 entries");
  }
  auto check_dist = [&](const std::vector<Scalar>& row, const std::string& where) {
    Scalar total(0);
    bool exact = true;
    for (const auto& v : row) {
      exact = exact && v.is_exact();
      const bool neg = v.is_exact() ? v.sign() < 0 : v.to_double() < -tol;
      if (neg) throw ConstraintError(where + " has a negative entry " + v.to_string());
      total += v;
    }
    const bool ok = exact ? total == Scalar(1) : std::abs(total.to_double() - 1.0) <= tol;
    if (!ok) throw ConstraintError(where + " sums to " + total.to_string());
  };
  for (int x = 0; x < scenario.n_inputs_a; ++x) {
    std::vector<Scalar> row;
    for (int m = 0; m < d; ++m) row.push_back(sender(x, m));
    check_dist(row, "s(.|x=" + std::to_string(x) + ")");
  }
  for (int m = 0; m < d; ++m)
    for (int y = 0; y < scenario.n_inputs_b; ++y) {
      check_dist({t(m, y, 0), t(m, y, 1)},
                 "t(.|m=" + std::to_string(m) + ",y=" + std::to_string(y) + ")");
    }
}

void QuantumPMStrategy::validate() {
  scenario.check();
  if (d < 1) throw StructuralError("quantum strategy needs d >= 1");
  if (states.size() != static_cast<std::size_t>(scenario.n_inputs_a)) {
    throw StructuralError("quantum strategy needs one state per x");
  }
  for (std::size_t x = 0; x < states.size(); ++x) {
    require_density(states[x], d, "rho_" + std::to_string(x));
  }
  require_measurements(povms, scenario.n_inputs_b, 2, d, "povm");
}

void BellQuantumStrategy::validate() {
  scenario.check();
  if (dA < 1 || dB < 1) throw StructuralError("Bell strategy needs dA, dB >= 1");
  require_density(state, dA * dB, "rho_AB");
  require_measurements(meas_a, scenario.m, scenario.n, dA, "meas_a");
  require_measurements(meas_b, scenario.m, scenario.n, dB, "meas_b");
}

PMBehaviour simulate_classical_pm(const ClassicalPMStrategy& st) {
  st.validate();
  const auto& sc = st.scenario;
  std::vector<Scalar> probs(2 * sc.n_inputs_a * sc.n_inputs_b, Scalar(0));
  for (int b = 0; b < 2; ++b)
    for (int x = 0; x < sc.n_inputs_a; ++x)
      for (int y = 0; y < sc.n_inputs_b; ++y) {
        Scalar p(0);
        for (int m = 0; m < st.d; ++m) p += st.sender(x, m) * st.t(m, y, b);
        probs[PMBehaviour::index(sc, b, x, y)] = p;
      }
  return PMBehaviour(sc, std::move(probs));
}

PMBehaviour simulate_quantum_pm(QuantumPMStrategy st) {
  st.validate();
  const auto& sc = st.scenario;
  std::vector<Scalar> probs(2 * sc.n_inputs_a * sc.n_inputs_b);
  for (int b = 0; b < 2; ++b)
    for (int x = 0; x < sc.n_inputs_a; ++x)
      for (int y = 0; y < sc.n_inputs_b; ++y) {
        const double p = (st.states[x] * st.povms[y][b]).trace().real();
        probs[PMBehaviour::index(sc, b, x, y)] = Scalar(clip_probability(p));
      }
  return PMBehaviour(sc, std::move(probs));
}

BellBehaviour simulate_bell(BellQuantumStrategy st) {
  st.validate();
  const auto& sc = st.scenario;
  std::vector<Scalar> probs(static_cast<std::size_t>(sc.m * sc.n) * (sc.m * sc.n));
  for (int x = 0; x < sc.m; ++x)
    for (int a = 0; a < sc.n; ++a) {
      for (int y = 0; y < sc.m; ++y)
        for (int b = 0; b < sc.n; ++b) {
          const double p = (st.state * kron(st.meas_a[x][a], st.meas_b[y][b])).trace().real();
          probs[BellBehaviour::index(sc, a, b, x, y)] = Scalar(clip_probability(p));
        }
    }
  return BellBehaviour(sc, std::move(probs));
}

int message_dimension(const std::vector<CMatrix>& states) {
  if (states.empty()) return 0;
  const auto dim = states.front().rows();
  CMatrix sum = CMatrix::Zero(dim, dim);
  for (std::size_t i = 0; i < states.size(); ++i) {
    CMatrix rho = states[i];
    if (rho.rows() != dim || rho.cols() != dim) {
      throw StructuralError("message_dimension: states have different sizes");
    }
    hermitize(rho, "rho_" + std::to_string(i));
    require_psd(rho, "rho_" + std::to_string(i));
    sum += rho;
  }
  return support_rank(sum);
}

std::pair<int, int> local_support_ranks(const BellQuantumStrategy& st) {
  CMatrix ra = CMatrix::Zero(st.dA, st.dA);
  CMatrix rb = CMatrix::Zero(st.dB, st.dB);
  for (int i = 0; i < st.dA; ++i)
    for (int k = 0; k < st.dA; ++k)
      for (int j = 0; j < st.dB; ++j) ra(i, k) += st.state(i * st.dB + j, k * st.dB + j);
  for (int j = 0; j < st.dB; ++j)
    for (int l = 0; l < st.dB; ++l)
      for (int i = 0; i < st.dA; ++i) rb(j, l) += st.state(i * st.dB + j, i * st.dB + l);
  return {support_rank(ra), support_rank(rb)};
}

BellQuantumStrategy direct_sum_mixture(const BellQuantumStrategy& s1,
                                       const BellQuantumStrategy& s2, double lam) {
  if (!(s1.scenario == s2.scenario)) {
    throw PreconditionError("direct_sum_mixture: strategies belong to different scenarios");
  }
  if (!(lam > 0.0 && lam < 1.0)) throw PreconditionError("direct_sum_mixture needs 0 < lam < 1");
  BellQuantumStrategy out;
  out.scenario = s1.scenario;
  out.dA = s1.dA + s2.dA;
  out.dB = s1.dB + s2.dB;
  out.povm_law = s1.povm_law == s2.povm_law ? s1.povm_law : s1.povm_law + "+" + s2.povm_law;
  const int dim = out.dA * out.dB;
  out.state = CMatrix::Zero(dim, dim);

  // (iA, iB) of a summand maps to (offA + iA, offB + iB) of the sum space.
  auto embed = [&](const BellQuantumStrategy& s, int offA, int offB, double w) {
    for (int r = 0; r < s.dA * s.dB; ++r)
      for (int c = 0; c < s.dA * s.dB; ++c) {
        const int rr = (offA + r / s.dB) * out.dB + offB + r % s.dB;
        const int cc = (offA + c / s.dB) * out.dB + offB + c % s.dB;
        out.state(rr, cc) += w * s.state(r, c);
      }
  };
  embed(s1, 0, 0, lam);
  embed(s2, s1.dA, s1.dB, 1.0 - lam);

  auto block_diag = [](const CMatrix& a, const CMatrix& b) {
    CMatrix m = CMatrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
    m.topLeftCorner(a.rows(), a.cols()) = a;
    m.bottomRightCorner(b.rows(), b.cols()) = b;
    return m;
  };
  const auto& sc = out.scenario;
  out.meas_a.assign(sc.m, std::vector<CMatrix>(sc.n));
  out.meas_b.assign(sc.m, std::vector<CMatrix>(sc.n));
  for (int x = 0; x < sc.m; ++x)
    for (int a = 0; a < sc.n; ++a) {
      out.meas_a[x][a] = block_diag(s1.meas_a.at(x).at(a), s2.meas_a.at(x).at(a));
      out.meas_b[x][a] = block_diag(s1.meas_b.at(x).at(a), s2.meas_b.at(x).at(a));
    }
  return out;
}

QuantumPMStrategy embed_classical(const ClassicalPMStrategy& st) {
  st.validate();
  QuantumPMStrategy q;
  q.d = st.d;
  q.scenario = st.scenario;
  q.povm_law = "classical-embedding";
  for (int x = 0; x < st.scenario.n_inputs_a; ++x) {
    CMatrix rho = CMatrix::Zero(st.d, st.d);
    for (int m = 0; m < st.d; ++m) rho(m, m) = st.sender(x, m).to_double();
    q.states.push_back(rho);
  }
  for (int y = 0; y < st.scenario.n_inputs_b; ++y) {
    std::vector<CMatrix> povm;
    for (int b = 0; b < 2; ++b) {
      CMatrix op = CMatrix::Zero(st.d, st.d);
      for (int m = 0; m < st.d; ++m) op(m, m) = st.t(m, y, b).to_double();
      povm.push_back(op);
    }
    q.povms.push_back(povm);
  }
  return q;
}

BellQuantumStrategy ldb_strategy(const BellScenario& sc, const std::vector<int>& f,
                                 const std::vector<int>& g) {
  sc.check();
  BellQuantumStrategy s;
  s.scenario = sc;
  s.state = CMatrix::Identity(1, 1);
  s.povm_law = "deterministic";
  auto det = [&](const std::vector<int>& fn) {
    if (fn.size() != static_cast<std::size_t>(sc.m)) {
      throw PreconditionError("ldb_strategy: function must be defined on all inputs");
    }
    std::vector<std::vector<CMatrix>> meas(sc.m, std::vector<CMatrix>(sc.n, CMatrix::Zero(1, 1)));
    for (int x = 0; x < sc.m; ++x) {
      if (fn[x] < 0 || fn[x] >= sc.n) throw PreconditionError("ldb_strategy: value out of range");
      meas[x][fn[x]](0, 0) = 1.0;
    }
    return meas;
  };
  s.meas_a = det(f);
  s.meas_b = det(g);
  return s;
}

CMatrix haar_unitary(int d, Rng& rng) {
  const CMatrix z = ginibre(d, d, rng);
  Eigen::HouseholderQR<CMatrix> qr(z);
  CMatrix q = qr.householderQ();
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < d; ++i) {
    const Complex rii = r(i, i);
    const double mag = std::abs(rii);
    if (mag > 0) q.col(i) *= rii / mag;
  }
  return q;
}

CMatrix ginibre_state(int d, Rng& rng) {
  const CMatrix g = ginibre(d, d, rng);
  CMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return (0.5 * (rho + rho.adjoint())).eval();
}

PMBehaviour sample_behaviour(const PMScenario& sc, Seed seed) {
  sc.check();
  Rng rng(seed);
  Matrix p0(sc.n_inputs_a, sc.n_inputs_b);
  for (int x = 0; x < sc.n_inputs_a; ++x)
    for (int y = 0; y < sc.n_inputs_b; ++y) p0(x, y) = Scalar(rng.uniform());
  return PMBehaviour::from_zero_outcome(sc, p0);
}

PMBehaviour sample_dyadic_behaviour(const PMScenario& sc, Seed seed, int bits) {
  sc.check();
  if (bits < 1 || bits > 62) throw PreconditionError("dyadic sampling needs 1 <= bits <= 62");
  Rng rng(seed);
  const std::uint64_t scale = std::uint64_t{1} << bits;
  Matrix p0(sc.n_inputs_a, sc.n_inputs_b);
  for (int x = 0; x < sc.n_inputs_a; ++x)
    for (int y = 0; y < sc.n_inputs_b; ++y) {
      const auto r = rng.below(scale + 1);
      p0(x, y) = Scalar(Rational(Integer(std::to_string(r)), Integer(std::to_string(scale))));
    }
  return PMBehaviour::from_zero_outcome(sc, p0);
}

BellBehaviour sample_behaviour(const BellScenario& sc, Seed seed, int local_dim) {
  sc.check();
  const int d = local_dim > 0 ? local_dim : sc.m * sc.n;
  return simulate_bell(sample_bell_strategy(d, d, sc, seed));
}

ClassicalPMStrategy sample_classical_pm(int d, const PMScenario& sc, Seed seed) {
  sc.check();
  if (d < 1) throw PreconditionError("sample_classical_pm needs d >= 1");
  Rng rng(seed);
  ClassicalPMStrategy st;
  st.d = d;
  st.scenario = sc;
  st.sender = Matrix(sc.n_inputs_a, d);
  for (int x = 0; x < sc.n_inputs_a; ++x) {
    const auto row = dirichlet_row(d, rng);
    for (int m = 0; m < d; ++m) st.sender(x, m) = row[m];
  }
  for (int m = 0; m < d; ++m)
    for (int y = 0; y < sc.n_inputs_b; ++y) {
      const auto pair = dirichlet_row(2, rng);
      st.responder.insert(st.responder.end(), pair.begin(), pair.end());
    }
  return st;
}

ClassicalPMStrategy sample_classical_pm_exact(int d, const PMScenario& sc, Seed seed, int bits) {
  sc.check();
  if (d < 1) throw PreconditionError("sample_classical_pm_exact needs d >= 1");
  Rng rng(seed);
  ClassicalPMStrategy st;
  st.d = d;
  st.scenario = sc;
  st.sender = Matrix(sc.n_inputs_a, d);
  for (int x = 0; x < sc.n_inputs_a; ++x) {
    const auto row = dyadic_simplex(d, rng, bits);
    for (int m = 0; m < d; ++m) st.sender(x, m) = row[m];
  }
  for (int m = 0; m < d; ++m)
    for (int y = 0; y < sc.n_inputs_b; ++y) {
      const auto pair = dyadic_simplex(2, rng, bits);
      st.responder.insert(st.responder.end(), pair.begin(), pair.end());
    }
  return st;
}

QuantumPMStrategy sample_quantum_pm(int d, const PMScenario& sc, Seed seed) {
  sc.check();
  if (d < 1) throw PreconditionError("sample_quantum_pm needs d >= 1");
  Rng rng(seed);
  QuantumPMStrategy st;
  st.d = d;
  st.scenario = sc;
  for (int x = 0; x < sc.n_inputs_a; ++x) st.states.push_back(ginibre_state(d, rng));
  bool wishart = false;
  for (int y = 0; y < sc.n_inputs_b; ++y) {
    auto [povm, fallback] = random_measurement(d, 2, rng);
    wishart = wishart || fallback;
    st.povms.push_back(std::move(povm));
  }
  st.povm_law = wishart ? kWishartLaw : kProjectiveLaw;
  return st;
}

BellQuantumStrategy sample_bell_strategy(int dA, int dB, const BellScenario& sc, Seed seed) {
  sc.check();
  if (dA < 1 || dB < 1) throw PreconditionError("sample_bell_strategy needs dA, dB >= 1");
  Rng rng(seed);
  BellQuantumStrategy st;
  st.dA = dA;
  st.dB = dB;
  st.scenario = sc;
  st.state = ginibre_state(dA * dB, rng);
  bool wishart = false;
  for (int x = 0; x < sc.m; ++x) {
    auto [povm, fallback] = random_measurement(dA, sc.n, rng);
    wishart = wishart || fallback;
    st.meas_a.push_back(std::move(povm));
  }
  for (int y = 0; y < sc.m; ++y) {
    auto [povm, fallback] = random_measurement(dB, sc.n, rng);
    wishart = wishart || fallback;
    st.meas_b.push_back(std::move(povm));
  }
  st.povm_law = wishart ? kWishartLaw : kProjectiveLaw;
  return st;
}

}  // namespace dimwit
