#include <doctest.h>

#include "dimwit/behaviour.hpp"
#include "dimwit/constructions.hpp"
#include "dimwit/linalg.hpp"
#include "dimwit/strategy.hpp"
#include "support.hpp"

using namespace dimwit;

namespace {

PMBehaviour uniform_pm(int x, int y) {
  const PMScenario sc{x, y};
  return PMBehaviour(sc, std::vector<Scalar>(static_cast<std::size_t>(2 * x * y), Scalar::ratio(1, 2)));
}

BellBehaviour uniform_bell(int m, int n) {
  const BellScenario sc{m, n};
  return BellBehaviour(sc, std::vector<Scalar>(static_cast<std::size_t>(m * m * n * n),
                                               Scalar::ratio(1, n * n)));
}

// Random exact local behaviour: a dyadic-weighted mixture of a few LDBs.
BellBehaviour random_local(int m, int n, Seed seed) {
  Rng rng(seed);
  std::vector<BellBehaviour> parts;
  std::vector<Scalar> weights;
  const int terms = 1 + static_cast<int>(rng.below(5));
  long total = 0;
  std::vector<long> raw;
  for (int t = 0; t < terms; ++t) {
    std::vector<int> f(m), g(m);
    for (auto& v : f) v = static_cast<int>(rng.below(n));
    for (auto& v : g) v = static_cast<int>(rng.below(n));
    parts.push_back(ldb(m, n, f, g));
    raw.push_back(1 + static_cast<long>(rng.below(16)));
    total += raw.back();
  }
  for (long r : raw) weights.push_back(Scalar::ratio(r, total));
  return mix(parts, weights);
}

}  // namespace

TEST_SUITE("behaviour") {

TEST_CASE("uniform behaviours are valid") {
  CHECK(validate_pm(uniform_pm(3, 2)).valid());
  CHECK(validate_bell(uniform_bell(2, 2)).valid());
  CHECK(validate_bell(uniform_bell(3, 4)).valid());
}

TEST_CASE("negative entry is reported with its indices") {
  const PMScenario sc{1, 1};
  const PMBehaviour beh(sc, {Scalar(-0.1), Scalar(1.1)});
  const auto report = validate_pm(beh);
  REQUIRE_FALSE(report.valid());
  CHECK(report.violations.front().constraint == "negative");
  CHECK(report.violations.front().indices == std::vector<int>{0, 0, 0});
  CHECK(report.violations.front().message.rfind("negative entry at (0,0,0)", 0) == 0);
  CHECK(report.violations.front().magnitude == doctest::Approx(0.1));
}

TEST_CASE("normalization violation names the column and the sum") {
  const PMScenario sc{1, 1};
  const auto report = validate_pm(PMBehaviour(sc, {Scalar(0.6), Scalar(0.6)}));
  REQUIRE(report.violations.size() == 1);
  CHECK(report.violations[0].message == "normalization at (0,0), sum 1.2");
}

TEST_CASE("exact validation has no slack") {
  const PMScenario sc{1, 1};
  const Scalar tiny = Scalar(Rational(1, 1000000) * Rational(1, 1000000) * Rational(1, 1000000));
  const auto report = validate_pm(PMBehaviour(sc, {Scalar::ratio(1, 2) + tiny, Scalar::ratio(1, 2)}));
  CHECK_FALSE(report.valid());
  CHECK(report.mode == ScalarKind::exact);
  // The same defect in float mode is far below the tolerance.
  CHECK(validate_pm(PMBehaviour(sc, {Scalar(0.5 + 1e-15), Scalar(0.5)})).valid());
}

TEST_CASE("shape mismatch is structural, not a constraint violation") {
  CHECK_THROWS_AS(PMBehaviour(PMScenario{2, 2}, std::vector<Scalar>(7, Scalar(0))), StructuralError);
  CHECK_THROWS_AS(BellBehaviour(BellScenario{2, 2}, std::vector<Scalar>(15, Scalar(0))), StructuralError);
  CHECK_THROWS(PMScenario{0, 1}.check());
  CHECK_THROWS(BellScenario{2, 1}.check());
}

TEST_CASE("mixed scalar kinds inside one behaviour are promoted to float") {
  const PMBehaviour beh(PMScenario{1, 1}, {Scalar(0.5), Scalar::ratio(1, 2)});
  CHECK(beh.kind() == ScalarKind::floating);
  for (const auto& p : beh.probs()) CHECK_FALSE(p.is_exact());
}

TEST_CASE("LDBs are valid and no-signaling") {
  for (const auto& d : enumerate_ldbs(2, 3)) CHECK(validate_bell(d).valid());
}

TEST_CASE("marginal of a depending on y is a no-signaling violation") {
  const BellScenario sc{2, 2};
  std::vector<Scalar> probs(16, Scalar(0));
  for (int x = 0; x < 2; ++x) {
    probs[BellBehaviour::index(sc, 0, 0, x, 0)] = Scalar(1);
    probs[BellBehaviour::index(sc, 1, 0, x, 1)] = Scalar(1);
  }
  const auto report = validate_bell(BellBehaviour(sc, probs));
  REQUIRE_FALSE(report.valid());
  bool found = false;
  for (const auto& v : report.violations) {
    CHECK(v.constraint != "normalization");
    if (v.constraint == "no_signaling_a") {
      found = true;
      CHECK(v.indices.size() == 4);
    }
  }
  CHECK(found);
}

TEST_CASE("pm_matrix arrangement") {
  const Matrix u = pm_matrix(uniform_pm(2, 2));
  CHECK(u.rows() == 2);
  CHECK(u.cols() == 4);
  for (const auto& v : u.data()) CHECK(v == Scalar::ratio(1, 2));

  const Matrix d1 = pm_matrix(d_block(3, 2, 1, 1));
  const Matrix expected{{Scalar(0), Scalar(1), Scalar(1), Scalar(0)},
                        {Scalar(1), Scalar(0), Scalar(1), Scalar(0)},
                        {Scalar(1), Scalar(0), Scalar(1), Scalar(0)}};
  CHECK(d1 == expected);
}

TEST_CASE("every pm_matrix row sums to |Y|") {
  for (int i = 0; i < 50; ++i) {
    const PMScenario sc{1 + i % 5, 1 + i % 4};
    const Matrix mat = pm_matrix(sample_dyadic_behaviour(sc, derive_seed(11, i)));
    for (std::size_t r = 0; r < mat.rows(); ++r) {
      Scalar sum(0);
      for (std::size_t c = 0; c < mat.cols(); ++c) sum = sum + mat(r, c);
      CHECK(sum == Scalar(sc.n_inputs_b));
    }
  }
}

TEST_CASE("bell_matrix arrangement") {
  const Matrix d = bell_matrix(ldb(2, 2, {0, 0}, {0, 0}));
  CHECK(d.rows() == 4);
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t c = 0; c < 4; ++c)
      CHECK(d(r, c) == Scalar(r % 2 == 0 && c % 2 == 0 ? 1 : 0));
  CHECK(rank_exact(d).rank == 1);

  const Matrix u = bell_matrix(uniform_bell(2, 2));
  for (const auto& v : u.data()) CHECK(v == Scalar::ratio(1, 4));
  CHECK(rank_exact(u).rank == 1);

  CHECK(rank_exact(bell_matrix(l_star(2, 2))).rank == 3);

  // Row x*n + a, column y*n + b.
  const BellBehaviour r = random_local(3, 2, 5);
  const Matrix rm = bell_matrix(r);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int x = 0; x < 3; ++x)
        for (int y = 0; y < 3; ++y) CHECK(rm(x * 2 + a, y * 2 + b) == r(a, b, x, y));
}

TEST_CASE("w_matrix") {
  const Matrix zero = w_matrix(uniform_pm(4, 2));
  for (const auto& v : zero.data()) CHECK(v.is_zero());

  // P(0|x,y) = 1 exactly on the 1-based odd inputs x = 1, 3, ...
  const int k = 3;
  Matrix p0(2 * k, k, Scalar(0));
  for (int x = 0; x < 2 * k; x += 2)
    for (int y = 0; y < k; ++y) p0(x, y) = Scalar(1);
  const Matrix w = w_matrix(PMBehaviour::from_zero_outcome(PMScenario{2 * k, k}, p0));
  for (const auto& v : w.data()) CHECK(v == Scalar(1));
  CHECK(rank_exact(w).rank == 1);

  CHECK_THROWS_AS(w_matrix(uniform_pm(3, 2)), UnsupportedScenario);
}

TEST_CASE("w_matrix entries follow the index map") {
  const PMBehaviour beh = sample_dyadic_behaviour(PMScenario{6, 3}, 17);
  const Matrix w = w_matrix(beh);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(w(i, j) == beh(0, 2 * j, i) - beh(0, 2 * j + 1, i));
}

TEST_CASE("mix") {
  for (int k = 1; k <= 5; ++k) {
    std::vector<PMBehaviour> ds;
    for (int i = 1; i <= k; ++i) ds.push_back(d_block(k + 1, k, i, i));
    const std::vector<Scalar> w(k, Scalar::ratio(1, k));
    CHECK(mix(ds, w) == oracle::p_k_by_formula(k + 1, k));
  }

  const BellBehaviour l = l_star(2, 3);
  const BellBehaviour one[] = {l};
  const Scalar unit[] = {Scalar(1)};
  CHECK(mix(one, unit) == l);

  const BellBehaviour two[] = {ldb(2, 2, {0, 1}, {1, 0}), ldb(2, 2, {1, 1}, {0, 1})};
  const Scalar half[] = {Scalar::ratio(1, 2), Scalar::ratio(1, 2)};
  CHECK(rank_exact(bell_matrix(mix(two, half))).rank <= 2);
}

TEST_CASE("mix rejects bad input") {
  const PMBehaviour a = uniform_pm(2, 2), b = uniform_pm(3, 2);
  const PMBehaviour ab[] = {a, b};
  const Scalar half[] = {Scalar::ratio(1, 2), Scalar::ratio(1, 2)};
  CHECK_THROWS(mix(ab, half));
  const PMBehaviour aa[] = {a, a};
  const Scalar bad[] = {Scalar::ratio(1, 2), Scalar::ratio(1, 3)};
  CHECK_THROWS(mix(aa, bad));
  const Scalar neg[] = {Scalar(-1), Scalar(2)};
  CHECK_THROWS(mix(aa, neg));
}

TEST_CASE("mix output kind is exact only when everything is exact") {
  const PMBehaviour a = uniform_pm(2, 2);
  const PMBehaviour aa[] = {a, a};
  const Scalar exact[] = {Scalar::ratio(1, 4), Scalar::ratio(3, 4)};
  const Scalar flt[] = {Scalar(0.25), Scalar(0.75)};
  CHECK(mix(aa, exact).kind() == ScalarKind::exact);
  CHECK(mix(aa, flt).kind() == ScalarKind::floating);
  const PMBehaviour af[] = {a, a.to_floating()};
  CHECK(mix(af, exact).kind() == ScalarKind::floating);
}

TEST_CASE("property: PM rank never exceeds |Y| + 1") {
  for (int i = 0; i < 200; ++i) {
    const PMScenario sc{2 + i % 6, 1 + i % 4};
    const auto r = rank_exact(pm_matrix(sample_dyadic_behaviour(sc, derive_seed(23, i)))).rank;
    CHECK(r <= sc.n_inputs_b + 1);
  }
}

TEST_CASE("property: Bell rank never exceeds mn - m + 1") {
  for (int i = 0; i < 60; ++i) {
    const int m = 1 + i % 3, n = 2 + i % 2;
    CHECK(rank_exact(bell_matrix(random_local(m, n, derive_seed(29, i)))).rank <= m * n - m + 1);
    const auto q = sample_behaviour(BellScenario{m, n}, derive_seed(31, i));
    CHECK(rank_float(bell_matrix(q)).rank <= m * n - m + 1);
  }
}

TEST_CASE("property: mix is idempotent and commutes with the matrix maps") {
  for (int i = 0; i < 40; ++i) {
    const PMScenario sc{4, 2};
    const PMBehaviour a = sample_dyadic_behaviour(sc, derive_seed(41, 2 * i));
    const PMBehaviour b = sample_dyadic_behaviour(sc, derive_seed(41, 2 * i + 1));
    const Scalar lam = Scalar::ratio(1 + i % 7, 8);
    const PMBehaviour ab[] = {a, b};
    const Scalar w[] = {lam, Scalar(1) - lam};
    const Matrix lhs = pm_matrix(mix(ab, w));
    const Matrix ma = pm_matrix(a), mb = pm_matrix(b);
    for (std::size_t j = 0; j < lhs.data().size(); ++j)
      CHECK(lhs.data()[j] == lam * ma.data()[j] + (Scalar(1) - lam) * mb.data()[j]);
    const PMBehaviour aa[] = {a, a};
    CHECK(mix(aa, w) == a);

    const BellBehaviour p = random_local(2, 3, derive_seed(43, 2 * i));
    const BellBehaviour q = random_local(2, 3, derive_seed(43, 2 * i + 1));
    const BellBehaviour pq[] = {p, q};
    const Matrix bl = bell_matrix(mix(pq, w));
    const Matrix bp = bell_matrix(p), bq = bell_matrix(q);
    for (std::size_t j = 0; j < bl.data().size(); ++j)
      CHECK(bl.data()[j] == lam * bp.data()[j] + (Scalar(1) - lam) * bq.data()[j]);
  }
}

TEST_CASE("property: random signaling perturbations are rejected") {
  Rng rng(47);
  for (int i = 0; i < 100; ++i) {
    const int m = 2 + static_cast<int>(rng.below(2)), n = 2 + static_cast<int>(rng.below(2));
    const BellBehaviour base = random_local(m, n, derive_seed(53, i));
    const BellScenario sc = base.scenario();
    // Move mass between two values of a at a single (x, y); b is untouched.
    auto probs = base.probs();
    int x = 0, y = 0, a = 0, b = 0;
    do {
      x = static_cast<int>(rng.below(m));
      y = static_cast<int>(rng.below(m));
      a = static_cast<int>(rng.below(n));
      b = static_cast<int>(rng.below(n));
    } while (base(a, b, x, y).is_zero());
    const int a2 = (a + 1) % n;
    const Scalar eps = base(a, b, x, y) * Scalar::ratio(1, 2);
    probs[BellBehaviour::index(sc, a, b, x, y)] = probs[BellBehaviour::index(sc, a, b, x, y)] - eps;
    probs[BellBehaviour::index(sc, a2, b, x, y)] = probs[BellBehaviour::index(sc, a2, b, x, y)] + eps;
    const BellBehaviour perturbed(sc, probs);
    CHECK(validate_bell(base).valid());
    const auto report = validate_bell(perturbed);
    CHECK_FALSE(report.valid());
    for (const auto& v : report.violations) CHECK(v.constraint == "no_signaling_a");
    CHECK(validate_bell(perturbed.to_floating()).valid() == false);
  }
}

}  // TEST_SUITE
