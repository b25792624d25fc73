#include <algorithm>
#include <cmath>
#include <limits>

#include "dimwit/errors.hpp"
#include "dimwit/linalg.hpp"
#include "dimwit/search.hpp"
#include "simplex.hpp"

namespace dimwit {

namespace {

constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > kSaturated / a) return kSaturated;
  return a * b;
}

std::uint64_t saturating_pow(std::uint64_t base, int exp) {
  std::uint64_t r = 1;
  for (int i = 0; i < exp; ++i) r = saturating_mul(r, base);
  return r;
}

template <class T>
T to_lp(const Scalar& s);
template <>
double to_lp<double>(const Scalar& s) {
  return s.to_double();
}
template <>
Rational to_lp<Rational>(const Scalar& s) {
  return s.rational();
}

// Best deterministic column for multipliers `pi` (rows x*|Y| + y, then the
// normalization row). Responder tuples are enumerated; each x then takes the
// message whose table scores highest (lowest m on ties).
template <class T>
std::pair<T, DeterministicStrategy> price(const std::vector<T>& pi, const PMScenario& sc, int d) {
  const int nx = sc.n_inputs_a;
  const int ny = sc.n_inputs_b;
  const std::uint64_t ntab = std::uint64_t{1} << ny;

  // score[x][tau] = sum over y with output 0 under table tau.
  std::vector<std::vector<T>> score(nx, std::vector<T>(ntab, T(0)));
  for (int x = 0; x < nx; ++x)
    for (std::uint64_t tau = 0; tau < ntab; ++tau)
      for (int y = 0; y < ny; ++y)
        if (((tau >> (ny - 1 - y)) & 1U) == 0) score[x][tau] += pi[x * ny + y];

  std::vector<std::uint64_t> tuple(d, 0);
  std::vector<std::uint64_t> best_tuple(d, 0);
  T best_value(0);
  bool have = false;
  while (true) {
    T value = pi.back();
    for (int x = 0; x < nx; ++x) {
      const T* top = &score[x][tuple[0]];
      for (int m = 1; m < d; ++m)
        if (*top < score[x][tuple[m]]) top = &score[x][tuple[m]];
      value += *top;
    }
    if (!have || best_value < value) {
      best_value = value;
      best_tuple = tuple;
      have = true;
    }
    int pos = d - 1;
    while (pos >= 0 && ++tuple[pos] == ntab) tuple[pos--] = 0;
    if (pos < 0) break;
  }

  DeterministicStrategy st;
  st.d = d;
  st.sender.assign(nx, 0);
  st.responder.assign(static_cast<std::size_t>(d) * ny, 0);
  for (int m = 0; m < d; ++m)
    for (int y = 0; y < ny; ++y)
      st.responder[m * ny + y] = static_cast<int>((best_tuple[m] >> (ny - 1 - y)) & 1U);
  for (int x = 0; x < nx; ++x) {
    int arg = 0;
    for (int m = 1; m < d; ++m)
      if (score[x][best_tuple[arg]] < score[x][best_tuple[m]]) arg = m;
    st.sender[x] = arg;
  }
  return {best_value, st};
}

template <class T>
std::vector<T> column_of(const DeterministicStrategy& st, const PMScenario& sc) {
  const int ny = sc.n_inputs_b;
  std::vector<T> a(static_cast<std::size_t>(sc.n_inputs_a) * ny + 1, T(0));
  for (int x = 0; x < sc.n_inputs_a; ++x)
    for (int y = 0; y < ny; ++y)
      if (st.responder[st.sender[x] * ny + y] == 0) a[x * ny + y] = T(1);
  a.back() = T(1);
  return a;
}

template <class T>
T dot(const std::vector<T>& a, const std::vector<T>& b) {
  T s(0);
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!(b[i] == T(0))) s += a[i] * b[i];
  return s;
}

template <class T>
MembershipCertificate solve(const PMBehaviour& beh, int d, const MembershipOptions& opts) {
  const auto& sc = beh.scenario();
  const bool exact = std::is_same_v<T, Rational>;
  const double tol = exact ? 0.0 : opts.tolerance;

  std::vector<T> rhs;
  for (int x = 0; x < sc.n_inputs_a; ++x)
    for (int y = 0; y < sc.n_inputs_b; ++y) rhs.push_back(to_lp<T>(beh(0, x, y)));
  rhs.push_back(T(1));
  detail::Phase1Simplex<T> lp(rhs, tol);

  MembershipCertificate cert;
  cert.mode = exact ? LpMode::exact : LpMode::floating;
  cert.lp_tolerance = tol;
  cert.strategy_count = deterministic_strategy_count(sc, d);

  auto done = [&] {
    if constexpr (std::is_same_v<T, Rational>) {
      return sgn(lp.objective()) == 0;
    } else {
      return lp.objective() <= tol;
    }
  };

  bool feasible = false;
  int iter = 0;
  for (;; ++iter) {
    if (done()) {
      feasible = true;
      break;
    }
    if (iter >= opts.max_iterations) {
      throw SolverFailure("membership LP: iteration budget of " +
                          std::to_string(opts.max_iterations) + " exhausted");
    }
    const std::vector<T> pi = lp.duals();
    DeterministicStrategy cand;
    bool improving = false;
    if constexpr (std::is_same_v<T, Rational>) {
      // Cheap float pricing first; exact pricing only when it finds nothing usable.
      std::vector<double> pid(pi.size());
      for (std::size_t i = 0; i < pi.size(); ++i) pid[i] = pi[i].get_d();
      auto [vd, sd] = price(pid, sc, d);
      if (vd > 1e-12 && sgn(dot(pi, column_of<Rational>(sd, sc))) > 0) {
        cand = sd;
        improving = true;
      } else {
        auto [ve, se] = price(pi, sc, d);
        improving = sgn(ve) > 0;
        cand = se;
      }
    } else {
      auto [v, s] = price(pi, sc, d);
      improving = v > tol;
      cand = s;
    }
    if (!improving) break;
    const auto id = cand.index(sc);
    if (lp.contains(id)) throw SolverFailure("membership LP: basic column priced as improving");
    lp.enter(id, column_of<T>(cand, sc));
  }
  cert.iterations = iter;
  cert.feasible = feasible;
  if (!feasible) return cert;

  T total(0);
  for (std::size_t i = 0; i < lp.rows(); ++i) {
    const auto id = lp.basis()[i];
    if (id == detail::Phase1Simplex<T>::kArtificial) continue;
    T w = lp.values()[i];
    if constexpr (std::is_same_v<T, double>) w = std::max(w, 0.0);
    if (w == T(0)) continue;
    total += w;
    cert.weights.push_back({id, DeterministicStrategy::from_index(sc, d, id), Scalar(w)});
  }
  if constexpr (std::is_same_v<T, double>) {
    for (auto& w : cert.weights) w.weight = Scalar(w.weight.to_double() / total);
  }
  std::sort(cert.weights.begin(), cert.weights.end(),
            [](const auto& a, const auto& b) { return a.index < b.index; });

  const PMBehaviour rec = reconstruct(sc, cert);
  double err = 0;
  for (std::size_t i = 0; i < rec.probs().size(); ++i) {
    err = std::max(err, abs(rec.probs()[i] - beh.probs()[i]).to_double());
  }
  cert.max_reconstruction_error = err;
  if (err > tol) {
    if (exact) throw SolverFailure("exact membership certificate failed to reconstruct");
    cert.feasible = false;
  }
  return cert;
}

}  // namespace

std::uint64_t DeterministicStrategy::index(const PMScenario& sc) const {
  std::uint64_t sender_code = 0;
  for (int x = 0; x < sc.n_inputs_a; ++x) sender_code = sender_code * d + sender[x];
  std::uint64_t responder_code = 0;
  for (int v : responder) responder_code = (responder_code << 1) | static_cast<unsigned>(v);
  return (sender_code << (d * sc.n_inputs_b)) | responder_code;
}

DeterministicStrategy DeterministicStrategy::from_index(const PMScenario& sc, int d,
                                                        std::uint64_t index) {
  DeterministicStrategy st;
  st.d = d;
  const int bits = d * sc.n_inputs_b;
  st.responder.assign(bits, 0);
  for (int i = bits - 1; i >= 0; --i) {
    st.responder[i] = static_cast<int>(index & 1U);
    index >>= 1;
  }
  st.sender.assign(sc.n_inputs_a, 0);
  for (int x = sc.n_inputs_a - 1; x >= 0; --x) {
    st.sender[x] = static_cast<int>(index % d);
    index /= d;
  }
  return st;
}

PMBehaviour DeterministicStrategy::behaviour(const PMScenario& sc) const {
  Matrix p0(sc.n_inputs_a, sc.n_inputs_b);
  for (int x = 0; x < sc.n_inputs_a; ++x)
    for (int y = 0; y < sc.n_inputs_b; ++y)
      p0(x, y) = Scalar(responder[sender[x] * sc.n_inputs_b + y] == 0 ? 1 : 0);
  return PMBehaviour::from_zero_outcome(sc, p0);
}

std::uint64_t deterministic_strategy_count(const PMScenario& sc, int d) {
  return saturating_mul(saturating_pow(static_cast<std::uint64_t>(d), sc.n_inputs_a),
                        saturating_pow(2, d * sc.n_inputs_b));
}

PMBehaviour reconstruct(const PMScenario& sc, const MembershipCertificate& cert) {
  if (cert.weights.empty()) throw PreconditionError("reconstruct: certificate has no weights");
  std::vector<PMBehaviour> parts;
  std::vector<Scalar> weights;
  for (const auto& w : cert.weights) {
    parts.push_back(w.strategy.behaviour(sc));
    weights.push_back(w.weight);
  }
  if (cert.mode == LpMode::floating) {
    // Float weights are renormalized but may sum to 1 only within rounding.
    Scalar total(0.0);
    for (const auto& w : weights) total += w;
    for (auto& w : weights) w = w / total;
  }
  return mix(std::span<const PMBehaviour>(parts), std::span<const Scalar>(weights));
}

MembershipCertificate membership_shared_randomness(const PMBehaviour& beh, int d,
                                                   const MembershipOptions& opts) {
  if (d < 1) throw PreconditionError("membership needs d >= 1");
  const auto& sc = beh.scenario();
  const auto report = validate_pm(beh);
  if (!report.valid()) throw ConstraintError("invalid behaviour: " + report.violations[0].message);

  const std::uint64_t tables = saturating_pow(2, d * sc.n_inputs_b);
  if (tables > opts.cap) {
    throw CapExceeded("membership: responder tables 2^(d|Y|)", tables, opts.cap);
  }
  if (deterministic_strategy_count(sc, d) == kSaturated) {
    throw CapExceeded("membership: strategy index d^|X| * 2^(d|Y|) does not fit 64 bits",
                      kSaturated, kSaturated - 1);
  }
  if (opts.mode == LpMode::exact) {
    if (beh.kind() != ScalarKind::exact) {
      throw WrongModeError("exact membership LP needs an exact behaviour");
    }
    return solve<Rational>(beh, d, opts);
  }
  return solve<double>(beh, d, opts);
}

SeparationReport separation_report(int k, int m, const MembershipOptions& opts) {
  PMBehaviour beh = p_k(m, k);
  MembershipOptions exact_opts = opts;
  exact_opts.mode = LpMode::exact;
  auto cert = membership_shared_randomness(beh, 2, exact_opts);
  const int r = rank_exact(pm_matrix(beh)).rank;
  const auto verdict = witness_pm(beh);
  const bool rec_ok = cert.feasible && reconstruct(beh.scenario(), cert) == beh;
  return SeparationReport{k, m, std::move(beh), r, verdict, std::move(cert), rec_ok};
}

}  // namespace dimwit
