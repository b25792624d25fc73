#include "dimwit/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "dimwit/errors.hpp"

namespace dimwit {

int rank_exact(const RationalMatrix& m) {
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  if (rows == 0 || cols == 0) return 0;

  // Clear denominators row by row; scaling a row does not change the rank.
  std::vector<Integer> a(rows * cols);
  for (std::size_t r = 0; r < rows; ++r) {
    Integer l = 1;
    for (std::size_t c = 0; c < cols; ++c) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), m(r, c).get_den_mpz_t());
    for (std::size_t c = 0; c < cols; ++c) {
      a[r * cols + c] = m(r, c).get_num() * (l / m(r, c).get_den());
    }
  }
  auto at = [&](std::size_t r, std::size_t c) -> Integer& { return a[r * cols + c]; };

  Integer prev_pivot = 1;
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t pivot = rank;
    while (pivot < rows && at(pivot, c) == 0) ++pivot;
    if (pivot == rows) continue;
    if (pivot != rank) {
      for (std::size_t k = 0; k < cols; ++k) std::swap(at(pivot, k), at(rank, k));
    }
    const Integer p = at(rank, c);
    for (std::size_t r = rank + 1; r < rows; ++r) {
      const Integer f = at(r, c);
      for (std::size_t k = c + 1; k < cols; ++k) {
        Integer v = p * at(r, k) - f * at(rank, k);
        // Bareiss: the division by the previous pivot is exact.
        mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev_pivot.get_mpz_t());
        at(r, k) = std::move(v);
      }
      at(r, c) = 0;
    }
    prev_pivot = p;
    ++rank;
  }
  return static_cast<int>(rank);
}

RankResult rank_exact(const Matrix& m) {
  RankResult out;
  out.mode = ScalarKind::exact;
  out.rank = rank_exact(to_rational(m));
  return out;
}

std::vector<double> singular_values(const RealMatrix& input) {
  // One-sided Jacobi orthogonalizes columns; work on the orientation with fewer columns.
  const RealMatrix a0 = input.cols() > input.rows() ? input.transposed() : input;
  const std::size_t rows = a0.rows();
  const std::size_t cols = a0.cols();
  if (rows == 0 || cols == 0) return {};

  // Column-major working copy.
  std::vector<std::vector<double>> col(cols, std::vector<double>(rows));
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) col[c][r] = a0(r, c);

  constexpr double eps = std::numeric_limits<double>::epsilon();
  constexpr int max_sweeps = 80;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < cols; ++p) {
      for (std::size_t q = p + 1; q < cols; ++q) {
        double alpha = 0, beta = 0, gamma = 0;
        for (std::size_t r = 0; r < rows; ++r) {
          alpha += col[p][r] * col[p][r];
          beta += col[q][r] * col[q][r];
          gamma += col[p][r] * col[q][r];
        }
        if (gamma == 0.0 || std::abs(gamma) <= eps * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double cs = 1.0 / std::sqrt(1.0 + t * t);
        const double sn = cs * t;
        for (std::size_t r = 0; r < rows; ++r) {
          const double xp = col[p][r];
          const double xq = col[q][r];
          col[p][r] = cs * xp - sn * xq;
          col[q][r] = sn * xp + cs * xq;
        }
      }
    }
    if (!rotated) break;
  }

  std::vector<double> sv(cols);
  for (std::size_t c = 0; c < cols; ++c) {
    double s = 0;
    for (double v : col[c]) s += v * v;
    sv[c] = std::sqrt(s);
  }
  std::sort(sv.begin(), sv.end(), std::greater<>());
  return sv;
}

double default_rank_tolerance(std::size_t rows, std::size_t cols) {
  return static_cast<double>(std::max(rows, cols)) * std::numeric_limits<double>::epsilon();
}

RankResult rank_float(const RealMatrix& m, std::optional<double> tol) {
  for (double v : m.data()) {
    if (!std::isfinite(v)) throw PreconditionError("rank_float: matrix has NaN or Inf entries");
  }
  RankResult out;
  out.mode = ScalarKind::floating;
  const double t = tol.value_or(default_rank_tolerance(m.rows(), m.cols()));
  if (!(t >= 0.0)) throw PreconditionError("rank tolerance must be nonnegative");
  auto sv = singular_values(m);
  const double smax = sv.empty() ? 0.0 : sv.front();
  out.rank = smax == 0.0 ? 0
                         : static_cast<int>(std::count_if(sv.begin(), sv.end(),
                                                          [&](double s) { return s > t * smax; }));
  out.singular_values = std::move(sv);
  out.tolerance_used = t;
  return out;
}

RankResult rank_float(const Matrix& m, std::optional<double> tol) {
  return rank_float(to_real(m), tol);
}

RankResult rank(const Matrix& m, std::optional<double> tol, bool force_float) {
  if (!force_float && matrix_kind(m) == ScalarKind::exact) return rank_exact(m);
  return rank_float(m, tol);
}

int affine_dim(std::span<const Matrix> points, RankMode mode, std::optional<double> tol) {
  if (points.empty()) throw PreconditionError("affine_dim needs at least one point");
  const auto& p0 = points.front();
  const std::size_t len = p0.data().size();
  Matrix diffs(points.size() - 1, len);
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (points[i].rows() != p0.rows() || points[i].cols() != p0.cols()) {
      throw StructuralError("affine_dim: points have different shapes");
    }
    for (std::size_t j = 0; j < len; ++j) diffs(i - 1, j) = points[i].data()[j] - p0.data()[j];
  }
  if (diffs.rows() == 0) return 0;
  switch (mode) {
    case RankMode::exact:
      return rank_exact(diffs).rank;
    case RankMode::floating:
      return rank_float(diffs, tol).rank;
    case RankMode::automatic:
      break;
  }
  return rank(diffs, tol).rank;
}

int ceil_sqrt(int r) {
  if (r < 0) throw PreconditionError("ceil_sqrt of a negative number");
  int c = 0;
  while (c * c < r) ++c;
  return c;
}

}  // namespace dimwit
