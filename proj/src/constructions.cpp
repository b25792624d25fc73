#include "dimwit/constructions.hpp"

#include <limits>

#include "dimwit/errors.hpp"

namespace dimwit {

namespace {

void check_pm_dims(int m, int k) {
  if (m < 1 || k < 1) throw PreconditionError("PM construction needs m >= 1 and k >= 1");
}

// Matrix of all (1 0) blocks as a P(0|xy) table.
Matrix all_zero_output(int m, int k) { return Matrix(m, k, Scalar(1)); }

}  // namespace

void BasisVectorSpec::check() const {
  if (n < 1 || i < 1 || i > n) {
    throw PreconditionError("basis vector e_" + std::to_string(i) + "^(" + std::to_string(n) +
                            ") out of range");
  }
}

std::vector<Scalar> BasisVectorSpec::vector() const {
  check();
  std::vector<Scalar> v(n, Scalar(0));
  v[i - 1] = Scalar(1);
  return v;
}

PMBehaviour d_block(int m, int k, int i, int j) {
  check_pm_dims(m, k);
  if (i < 1 || i > m || j < 1 || j > k) {
    throw PreconditionError("d_block: block (" + std::to_string(i) + "," + std::to_string(j) +
                            ") outside " + std::to_string(m) + "x" + std::to_string(k));
  }
  Matrix p0 = all_zero_output(m, k);
  p0(i - 1, j - 1) = Scalar(0);
  return PMBehaviour::from_zero_outcome({m, k}, p0);
}

PMBehaviour d_zero(int m, int k) {
  check_pm_dims(m, k);
  return PMBehaviour::from_zero_outcome({m, k}, all_zero_output(m, k));
}

PMBehaviour p_k(int m, int k) {
  check_pm_dims(m, k);
  if (m < k + 1) {
    throw PreconditionError("p_k requires m >= k + 1 (m = " + std::to_string(m) +
                            ", k = " + std::to_string(k) + ")");
  }
  std::vector<PMBehaviour> ds;
  ds.reserve(k);
  for (int i = 1; i <= k; ++i) ds.push_back(d_block(m, k, i, i));
  const std::vector<Scalar> w(k, Scalar::ratio(1, k));
  return mix(std::span<const PMBehaviour>(ds), std::span<const Scalar>(w));
}

std::vector<std::vector<Scalar>> q_vectors(int k) {
  if (k < 1) throw PreconditionError("q_vectors needs k >= 1");
  std::vector<std::vector<Scalar>> vs;
  for (int j = 0; j <= k; ++j) {
    std::vector<Scalar> v(2 * k, Scalar(0));
    for (int block = 0; block < k; ++block) {
      const bool flipped = block == j;  // j == k gives v_{k+1}: nothing flipped
      v[2 * block + (flipped ? 1 : 0)] = Scalar(1);
    }
    vs.push_back(std::move(v));
  }
  return vs;
}

PMBehaviour q_perturbation(int m, int k) {
  check_pm_dims(m, k);
  if (m < k + 1) throw PreconditionError("q_perturbation requires m >= k + 1");
  const auto vs = q_vectors(k);
  Matrix p0(m, k);
  for (int x = 0; x < m; ++x) {
    const auto& v = vs[std::min(x, k)];
    for (int y = 0; y < k; ++y) p0(x, y) = v[2 * y];
  }
  return PMBehaviour::from_zero_outcome({m, k}, p0);
}

PMBehaviour p_epsilon(const PMBehaviour& p, const Scalar& eps) {
  if (eps.sign() < 0 || Scalar(1) < eps) {
    throw PreconditionError("p_epsilon: eps = " + eps.to_string() + " outside [0, 1]");
  }
  const auto& s = p.scenario();
  const PMBehaviour q = q_perturbation(s.n_inputs_a, s.n_inputs_b);
  const PMBehaviour parts[] = {p, q};
  const Scalar w[] = {Scalar(1) - eps, eps};
  return mix(std::span<const PMBehaviour>(parts), std::span<const Scalar>(w));
}

BellBehaviour ldb(int m, int n, const std::vector<int>& f, const std::vector<int>& g) {
  const BellScenario sc{m, n};
  sc.check();
  if (f.size() != static_cast<std::size_t>(m) || g.size() != static_cast<std::size_t>(m)) {
    throw PreconditionError("ldb: f and g must be defined on all m inputs");
  }
  for (int v : f)
    if (v < 0 || v >= n) throw PreconditionError("ldb: f value out of range");
  for (int v : g)
    if (v < 0 || v >= n) throw PreconditionError("ldb: g value out of range");
  std::vector<Scalar> probs(static_cast<std::size_t>(m * n) * (m * n), Scalar(0));
  for (int x = 0; x < m; ++x)
    for (int y = 0; y < m; ++y) probs[BellBehaviour::index(sc, f[x], g[y], x, y)] = Scalar(1);
  return BellBehaviour(sc, std::move(probs));
}

std::uint64_t ldb_count(int m, int n) {
  std::uint64_t c = 1;
  for (int i = 0; i < 2 * m; ++i) {
    if (c > std::numeric_limits<std::uint64_t>::max() / static_cast<std::uint64_t>(n)) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    c *= static_cast<std::uint64_t>(n);
  }
  return c;
}

void ldb_functions(int m, int n, std::uint64_t index, std::vector<int>& f, std::vector<int>& g) {
  f.assign(m, 0);
  g.assign(m, 0);
  for (int x = m - 1; x >= 0; --x) {
    g[x] = static_cast<int>(index % n);
    index /= n;
  }
  for (int x = m - 1; x >= 0; --x) {
    f[x] = static_cast<int>(index % n);
    index /= n;
  }
}

BellBehaviour LdbRange::iterator::operator*() const {
  std::vector<int> f, g;
  ldb_functions(m_, n_, index_, f, g);
  return ldb(m_, n_, f, g);
}

LdbRange LdbRange::slice(std::uint64_t first, std::uint64_t last) const {
  if (first > last || last > size()) throw PreconditionError("LdbRange::slice out of range");
  return LdbRange(m_, n_, first_ + first, first_ + last);
}

LdbRange enumerate_ldbs(int m, int n, std::uint64_t cap) {
  BellScenario{m, n}.check();
  const auto count = ldb_count(m, n);
  if (count > cap) throw CapExceeded("enumerate_ldbs", count, cap);
  return LdbRange(m, n, 0, count);
}

std::vector<LdbTerm> l_star_terms(int m, int n) {
  BellScenario{m, n}.check();
  const int count = m * n - m + 1;
  const Scalar w = Scalar::ratio(1, count);
  std::vector<LdbTerm> terms;
  terms.reserve(count);
  terms.push_back({std::vector<int>(m, 0), std::vector<int>(m, 0), w});
  for (int j = 0; j < m; ++j)
    for (int i = 1; i < n; ++i) {
      std::vector<int> f(m, 0);
      f[j] = i;
      terms.push_back({f, f, w});
    }
  return terms;
}

BellBehaviour l_star(int m, int n) {
  const auto terms = l_star_terms(m, n);
  std::vector<BellBehaviour> parts;
  std::vector<Scalar> weights;
  for (const auto& t : terms) {
    parts.push_back(ldb(m, n, t.f, t.g));
    weights.push_back(t.weight);
  }
  return mix(std::span<const BellBehaviour>(parts), std::span<const Scalar>(weights));
}

}  // namespace dimwit
