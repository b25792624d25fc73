#include <doctest.h>

#include <cmath>
#include <limits>

#include "dimwit/constructions.hpp"
#include "dimwit/linalg.hpp"
#include "support.hpp"

using namespace dimwit;

namespace {

Matrix diag(const std::vector<double>& s) {
  Matrix m(s.size(), s.size(), Scalar(0.0));
  for (std::size_t i = 0; i < s.size(); ++i) m(i, i) = Scalar(s[i]);
  return m;
}

Matrix permuted(const Matrix& m, Rng& rng) {
  std::vector<std::size_t> pr(m.rows()), pc(m.cols());
  for (std::size_t i = 0; i < pr.size(); ++i) pr[i] = i;
  for (std::size_t i = 0; i < pc.size(); ++i) pc[i] = i;
  for (std::size_t i = pr.size(); i > 1; --i) std::swap(pr[i - 1], pr[rng.below(i)]);
  for (std::size_t i = pc.size(); i > 1; --i) std::swap(pc[i - 1], pc[rng.below(i)]);
  Matrix out(m.rows(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) out(r, c) = m(pr[r], pc[c]);
  return out;
}

std::vector<Matrix> construction_corpus() {
  std::vector<Matrix> out;
  for (int k = 1; k <= 6; ++k) {
    out.push_back(pm_matrix(p_k(k + 1, k)));
    out.push_back(pm_matrix(q_perturbation(k + 2, k)));
    out.push_back(pm_matrix(d_zero(k + 1, k)));
    out.push_back(pm_matrix(d_block(k + 1, k, 1, k)));
  }
  for (int m = 1; m <= 4; ++m)
    for (int n = 2; n <= 4; ++n) out.push_back(bell_matrix(l_star(m, n)));
  return out;
}

}  // namespace

TEST_SUITE("linalg") {

TEST_CASE("rank_exact examples") {
  CHECK(rank_exact(Matrix(3, 4, Scalar(0))).rank == 0);
  const Scalar h = Scalar::ratio(1, 2), o(1), z(0);
  const Matrix pk{{h, h, o, z}, {o, z, h, h}, {o, z, o, z}};
  const auto r = rank_exact(pk);
  CHECK(r.rank == 3);
  CHECK(r.mode == ScalarKind::exact);
  CHECK_FALSE(r.singular_values.has_value());
  CHECK(pk == pm_matrix(p_k(3, 2)));
  CHECK(rank_exact(bell_matrix(l_star(3, 2))).rank == 4);
}

TEST_CASE("rank_exact refuses float entries") {
  CHECK_THROWS_AS(rank_exact(Matrix{{Scalar(0.5)}}), WrongModeError);
}

TEST_CASE("rank_exact matches a Gauss-Jordan oracle") {
  Rng rng(101);
  for (int t = 0; t < 300; ++t) {
    const std::size_t rows = 1 + rng.below(7), cols = 1 + rng.below(7);
    const std::size_t r = rng.below(std::min(rows, cols) + 1);
    const Matrix m = oracle::random_rational(rows, cols, r, rng);
    CHECK(rank_exact(m).rank == oracle::rank(m));
  }
}

TEST_CASE("fraction-free elimination survives zero pivots") {
  // Leading zeros, zero rows and zero columns force row exchanges.
  Rng rng(103);
  for (int t = 0; t < 200; ++t) {
    Matrix m = oracle::random_rational(6, 6, 1 + rng.below(6), rng);
    for (std::size_t c = 0; c < 6; ++c)
      if (rng.below(3) == 0) m(0, c) = Scalar(0);
    const std::size_t zr = rng.below(6), zc = rng.below(6);
    for (std::size_t c = 0; c < 6; ++c) m(zr, c) = Scalar(0);
    for (std::size_t r = 0; r < 6; ++r) m(r, zc) = Scalar(0);
    CHECK_NOTHROW(rank_exact(m));
    CHECK(rank_exact(m).rank == oracle::rank(m));
  }
}

TEST_CASE("rank_float examples") {
  Matrix id(3, 3, Scalar(0.0));
  for (std::size_t i = 0; i < 3; ++i) id(i, i) = Scalar(1.0);
  const auto r = rank_float(id);
  CHECK(r.rank == 3);
  CHECK(r.mode == ScalarKind::floating);
  REQUIRE(r.tolerance_used.has_value());
  CHECK(*r.tolerance_used == doctest::Approx(3 * std::numeric_limits<double>::epsilon()));

  // Singular values (1, 1e-15, 0, ...): the default tolerance max(rows, cols) * eps
  // exceeds 1e-15 from size 5 on.
  std::vector<double> s(8, 0.0);
  s[0] = 1.0;
  s[1] = 1e-15;
  CHECK(rank_float(diag(s)).rank == 1);
  CHECK(rank_float(diag(s), 1e-16).rank == 2);
}

TEST_CASE("rank_float agrees with rank_exact on P_k") {
  for (int k = 1; k <= 50; ++k) {
    const Matrix m = pm_matrix(p_k(k + 1, k));
    CHECK(rank_float(m).rank == rank_exact(m).rank);
  }
}

TEST_CASE("rank_float rejects non-finite entries") {
  CHECK_THROWS_AS(rank_float(Matrix{{Scalar(std::nan(""))}}), PreconditionError);
  CHECK_THROWS_AS(rank_float(Matrix{{Scalar(std::numeric_limits<double>::infinity())}}),
                  PreconditionError);
}

TEST_CASE("singular values match Eigen's SVD") {
  Rng rng(107);
  for (int t = 0; t < 100; ++t) {
    const std::size_t rows = 1 + rng.below(9), cols = 1 + rng.below(9);
    RealMatrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t c = 0; c < cols; ++c) m(r, c) = rng.normal();
    const auto mine = singular_values(m);
    const auto ref = oracle::singular_values(m);
    REQUIRE(mine.size() == ref.size());
    for (std::size_t i = 0; i < mine.size(); ++i) {
      CHECK(std::abs(mine[i] - ref[i]) <= 1e-12 * std::max(1.0, ref[0]));
      if (i > 0) CHECK(mine[i] <= mine[i - 1]);
    }
  }
}

TEST_CASE("exact and float rank agree on every construction") {
  for (const auto& m : construction_corpus()) {
    const auto sv = oracle::singular_values(to_real(m));
    const int exact = rank_exact(m).rank;
    // Only meaningful when the nonzero singular values are well separated from zero.
    bool separated = true;
    for (int i = 0; i < exact; ++i) separated = separated && sv[i] > 1e-8;
    REQUIRE(separated);
    CHECK(rank_float(m).rank == exact);
    CHECK(rank(m).mode == ScalarKind::exact);
    CHECK(rank(m, std::nullopt, true).mode == ScalarKind::floating);
  }
}

TEST_CASE("property: rank is invariant under permutation and transposition") {
  Rng rng(109);
  for (int t = 0; t < 100; ++t) {
    const Matrix m = oracle::random_rational(2 + rng.below(5), 2 + rng.below(5), 1 + rng.below(3), rng);
    const int r = rank_exact(m).rank;
    CHECK(rank_exact(permuted(m, rng)).rank == r);
    CHECK(rank_exact(m.transposed()).rank == r);
    CHECK(rank_float(permuted(m, rng)).rank == rank_float(m).rank);
  }
}

TEST_CASE("property: rank is subadditive under convex combination") {
  Rng rng(113);
  for (int t = 0; t < 100; ++t) {
    const std::size_t rows = 2 + rng.below(5), cols = 2 + rng.below(5);
    const Matrix a = oracle::random_rational(rows, cols, rng.below(3), rng);
    const Matrix b = oracle::random_rational(rows, cols, rng.below(3), rng);
    const Scalar lam = Scalar::ratio(1 + static_cast<long>(rng.below(9)), 10);
    Matrix c(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j) c(i, j) = lam * a(i, j) + (Scalar(1) - lam) * b(i, j);
    CHECK(rank_exact(c).rank <= rank_exact(a).rank + rank_exact(b).rank);
  }
}

TEST_CASE("affine_dim") {
  const std::vector<Matrix> one{pm_matrix(d_zero(3, 2))};
  CHECK(affine_dim(one) == 0);
  const std::vector<Matrix> same{one[0], one[0]};
  CHECK(affine_dim(same) == 0);

  std::vector<Matrix> pts{pm_matrix(d_zero(3, 2))};
  for (int i = 1; i <= 3; ++i)
    for (int j = 1; j <= 2; ++j) pts.push_back(pm_matrix(d_block(3, 2, i, j)));
  CHECK(pts.size() == 7);
  CHECK(affine_dim(pts, RankMode::exact) == 6);

  CHECK_THROWS_AS(affine_dim(std::vector<Matrix>{}), PreconditionError);
  const std::vector<Matrix> mismatch{pm_matrix(d_zero(3, 2)), pm_matrix(d_zero(2, 2))};
  CHECK_THROWS_AS(affine_dim(mismatch), StructuralError);
}

TEST_CASE("ceil_sqrt is exact at perfect squares") {
  for (int r = 0; r <= 10000; ++r) {
    const int c = ceil_sqrt(r);
    CHECK(c * c >= r);
    if (c > 0) CHECK((c - 1) * (c - 1) < r);
  }
}

}  // TEST_SUITE
