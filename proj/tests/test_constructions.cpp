#include <doctest.h>

#include <set>

#include "dimwit/constructions.hpp"
#include "dimwit/linalg.hpp"
#include "dimwit/strategy.hpp"
#include "dimwit/witness.hpp"
#include "support.hpp"

using namespace dimwit;

namespace {

// Two-message strategy for D_ij: send 1 iff x = i, answer 1 iff the message is 1 and y = j.
ClassicalPMStrategy d_block_strategy(int m, int k, int i, int j) {
  ClassicalPMStrategy st;
  st.d = 2;
  st.scenario = {m, k};
  st.sender = Matrix(m, 2, Scalar(0));
  for (int x = 0; x < m; ++x) st.sender(x, x == i - 1 ? 1 : 0) = Scalar(1);
  st.responder.assign(static_cast<std::size_t>(2 * k * 2), Scalar(0));
  for (int msg = 0; msg < 2; ++msg)
    for (int y = 0; y < k; ++y) {
      const int b = msg == 1 && y == j - 1 ? 1 : 0;
      st.responder[(static_cast<std::size_t>(msg) * k + y) * 2 + b] = Scalar(1);
    }
  return st;
}

std::vector<PMBehaviour> pm_corpus() {
  std::vector<PMBehaviour> out;
  for (int k = 1; k <= 4; ++k) {
    const int m = k + 2;
    out.push_back(d_zero(m, k));
    out.push_back(p_k(m, k));
    out.push_back(q_perturbation(m, k));
    for (int i = 1; i <= m; ++i)
      for (int j = 1; j <= k; ++j) out.push_back(d_block(m, k, i, j));
    out.push_back(sample_dyadic_behaviour(PMScenario{m, k}, 7 + k, 3));
  }
  return out;
}

}  // namespace

TEST_SUITE("constructions") {

TEST_CASE("basis vectors are 1-based") {
  const auto v = BasisVectorSpec{3, 2}.vector();
  CHECK(v == std::vector<Scalar>{Scalar(0), Scalar(1), Scalar(0)});
  CHECK_THROWS(BasisVectorSpec{3, 0}.check());
  CHECK_THROWS(BasisVectorSpec{3, 4}.check());
}

TEST_CASE("d_block") {
  const PMBehaviour d1 = d_block(3, 2, 1, 1);
  CHECK(rank_exact(pm_matrix(d1)).rank == 2);
  CHECK(d1(1, 0, 0) == Scalar(1));
  CHECK(d1(0, 0, 1) == Scalar(1));
  for (int x = 1; x < 3; ++x)
    for (int y = 0; y < 2; ++y) CHECK(d1(0, x, y) == Scalar(1));

  for (int m = 2; m <= 5; ++m)
    for (int k = 1; k <= 4; ++k)
      for (int i = 1; i <= m; ++i)
        for (int j = 1; j <= k; ++j) {
          const PMBehaviour d = d_block(m, k, i, j);
          CHECK(oracle::rank(pm_matrix(d)) == 2);
          CHECK(simulate_classical_pm(d_block_strategy(m, k, i, j)) == d);
        }
  CHECK_THROWS_AS(d_block(3, 2, 4, 1), PreconditionError);
  CHECK_THROWS_AS(d_block(3, 2, 1, 0), PreconditionError);
}

TEST_CASE("d_zero") {
  CHECK(rank_exact(pm_matrix(d_zero(4, 3))).rank == 1);
  for (int m = 2; m <= 5; ++m)
    for (int k = 1; k <= m - 1; ++k) {
      std::vector<Matrix> pts{pm_matrix(d_zero(m, k))};
      for (int i = 1; i <= m; ++i)
        for (int j = 1; j <= k; ++j) pts.push_back(pm_matrix(d_block(m, k, i, j)));
      CHECK(affine_dim(pts, RankMode::exact) == k * m);
    }
  // Constant-output strategy at d = 1.
  ClassicalPMStrategy st;
  st.d = 1;
  st.scenario = {4, 3};
  st.sender = Matrix(4, 1, Scalar(1));
  st.responder.assign(6, Scalar(0));
  for (int y = 0; y < 3; ++y) st.responder[static_cast<std::size_t>(y) * 2] = Scalar(1);
  CHECK(simulate_classical_pm(st) == d_zero(4, 3));
}

TEST_CASE("p_k") {
  const Scalar h = Scalar::ratio(1, 2), o(1), z(0);
  CHECK(pm_matrix(p_k(3, 2)) == Matrix{{h, h, o, z}, {o, z, h, h}, {o, z, o, z}});
  for (int k = 1; k <= 12; ++k) {
    const PMBehaviour p = p_k(k + 1 + k % 3, k);
    CHECK(p == oracle::p_k_by_formula(k + 1 + k % 3, k));
    CHECK(oracle::rank(pm_matrix(p)) == k + 1);
    CHECK(*witness_pm(p).quantum_lb == ceil_sqrt(k + 1));
  }
  CHECK_THROWS_AS(p_k(2, 2), PreconditionError);
  CHECK_THROWS_AS(p_k(3, 3), PreconditionError);
}

TEST_CASE("q_perturbation") {
  for (int k = 1; k <= 8; ++k) {
    const PMBehaviour q = q_perturbation(k + 2, k);
    CHECK(validate_pm(q).valid());
    CHECK(q.kind() == ScalarKind::exact);
    CHECK(oracle::rank(pm_matrix(q)) == k + 1);

    const auto vs = q_vectors(k);
    REQUIRE(vs.size() == static_cast<std::size_t>(k + 1));
    std::vector<std::vector<mpq_class>> rows;
    for (const auto& v : vs) {
      REQUIRE(v.size() == static_cast<std::size_t>(2 * k));
      std::vector<mpq_class> row;
      for (const auto& e : v) row.push_back(e.rational());
      rows.push_back(row);
    }
    CHECK(oracle::gauss_jordan_rank(rows) == k + 1);
  }
  CHECK_THROWS_AS(q_perturbation(2, 2), PreconditionError);
}

TEST_CASE("p_epsilon") {
  const PMBehaviour d0 = d_zero(4, 3);
  CHECK(p_epsilon(d0, Scalar(0)) == d0);
  CHECK(p_epsilon(d0, Scalar(1)) == q_perturbation(4, 3));
  CHECK(rank_exact(pm_matrix(p_epsilon(d0, Scalar::ratio(1, 1000)))).rank == 4);
  CHECK_THROWS_AS(p_epsilon(d0, Scalar::ratio(-1, 10)), PreconditionError);
  CHECK_THROWS_AS(p_epsilon(d0, Scalar::ratio(11, 10)), PreconditionError);
}

TEST_CASE("ldb") {
  for (const auto& d : enumerate_ldbs(2, 3)) {
    CHECK(oracle::rank(bell_matrix(d)) == 1);
    CHECK(validate_bell(d).valid());
  }
  CHECK_THROWS_AS(ldb(2, 2, {0, 2}, {0, 0}), PreconditionError);
  CHECK_THROWS_AS(ldb(2, 2, {0}, {0, 0}), PreconditionError);
  CHECK(ldb_count(2, 2) == 16);
  CHECK(ldb_count(2, 3) == 81);
  CHECK(ldb_count(3, 4) == 4096);
}

TEST_CASE("enumerate_ldbs") {
  CHECK(enumerate_ldbs(2, 2).size() == 16);
  CHECK(enumerate_ldbs(2, 3).size() == 81);

  std::set<std::vector<std::string>> seen;
  std::vector<int> prev_f, prev_g;
  std::uint64_t idx = 0;
  for (auto it = enumerate_ldbs(2, 3).begin(); it != enumerate_ldbs(2, 3).end(); ++it, ++idx) {
    const BellBehaviour d = *it;
    std::vector<std::string> key;
    for (const auto& p : d.probs()) key.push_back(p.to_string());
    CHECK(seen.insert(key).second);
    std::vector<int> f, g;
    ldb_functions(2, 3, it.index(), f, g);
    CHECK(d == ldb(2, 3, f, g));
    if (idx > 0) CHECK(std::tie(prev_f, prev_g) < std::tie(f, g));
    prev_f = f;
    prev_g = g;
  }
  CHECK(seen.size() == 81);

  const LdbRange all = enumerate_ldbs(2, 3);
  std::uint64_t total = 0;
  for (std::uint64_t lo = 0; lo < 81; lo += 20) {
    const auto part = all.slice(lo, std::min<std::uint64_t>(lo + 20, 81));
    // Index = f(0)*27 + f(1)*9 + g(0)*3 + g(1).
    const auto digit = [&](int w) { return static_cast<int>(lo / w % 3); };
    CHECK(*part.begin() == ldb(2, 3, {digit(27), digit(9)}, {digit(3), digit(1)}));
    total += part.size();
  }
  CHECK(total == 81);
}

TEST_CASE("enumeration cap refuses with the required count") {
  try {
    enumerate_ldbs(4, 6, 1000);
    FAIL("expected CapExceeded");
  } catch (const CapExceeded& e) {
    CHECK(e.required() == 1679616);
    CHECK(e.cap() == 1000);
  }
  CHECK_THROWS_AS(enumerate_ldbs(5, 6), CapExceeded);
}

TEST_CASE("l_star") {
  CHECK(rank_exact(bell_matrix(l_star(2, 2))).rank == 3);
  const BellBehaviour l42 = l_star(4, 2);
  CHECK(oracle::rank(bell_matrix(l42)) == 5);
  CHECK(witness_bell(l42).quantum_lb == 3);

  for (int m = 1; m <= 4; ++m)
    for (int n = 2; n <= 4; ++n) {
      const auto terms = l_star_terms(m, n);
      CHECK(terms.size() == static_cast<std::size_t>(m * n - m + 1));
      std::vector<BellBehaviour> parts;
      std::vector<Scalar> weights;
      for (const auto& t : terms) {
        CHECK(t.f == t.g);
        parts.push_back(ldb(m, n, t.f, t.g));
        weights.push_back(t.weight);
      }
      const BellBehaviour l = l_star(m, n);
      CHECK(mix(parts, weights) == l);
      CHECK(validate_bell(l).valid());
      CHECK(oracle::rank(bell_matrix(l)) == m * n - m + 1);
    }
}

TEST_CASE("property: every construction validates exactly") {
  for (const auto& p : pm_corpus()) {
    CHECK(p.kind() == ScalarKind::exact);
    CHECK(validate_pm(p).valid());
  }
  for (int m = 1; m <= 4; ++m)
    for (int n = 2; n <= 4; ++n) CHECK(validate_bell(l_star(m, n)).valid());
}

TEST_CASE("property: p_epsilon restores full rank for every eps in (0, 1]") {
  const Scalar epsilons[] = {Scalar::ratio(1, 1000000), Scalar::ratio(1, 97), Scalar::ratio(1, 2),
                             Scalar::ratio(99, 100), Scalar(1)};
  for (const auto& p : pm_corpus()) {
    const int k = p.scenario().n_inputs_b;
    for (const auto& e : epsilons) CHECK(oracle::rank(pm_matrix(p_epsilon(p, e))) == k + 1);
  }
}

TEST_CASE("property: uniform mixtures of LDB samples are no-signaling") {
  Rng rng(307);
  for (int t = 0; t < 50; ++t) {
    const auto range = enumerate_ldbs(2, 3);
    std::vector<BellBehaviour> parts;
    const int count = 1 + static_cast<int>(rng.below(10));
    for (int i = 0; i < count; ++i) parts.push_back(*range.slice(rng.below(81), 81).begin());
    const std::vector<Scalar> w(parts.size(), Scalar::ratio(1, count));
    CHECK(validate_bell(mix(parts, w)).valid());
  }
}

}  // TEST_SUITE
