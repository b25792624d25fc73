#pragma once

// Independent reference computations used as test oracles. Nothing here calls the
// library's own linear algebra.

#include <Eigen/Dense>
#include <gmpxx.h>

#include <algorithm>
#include <vector>

#include "dimwit/behaviour.hpp"
#include "dimwit/matrix.hpp"
#include "dimwit/random.hpp"

namespace oracle {

using dimwit::Scalar;

/// Plain Gauss-Jordan over mpq_class; returns the number of pivot columns.
inline int gauss_jordan_rank(std::vector<std::vector<mpq_class>> a) {
  if (a.empty()) return 0;
  const std::size_t rows = a.size(), cols = a[0].size();
  std::size_t pivot_row = 0;
  for (std::size_t c = 0; c < cols && pivot_row < rows; ++c) {
    std::size_t r = pivot_row;
    while (r < rows && a[r][c] == 0) ++r;
    if (r == rows) continue;
    std::swap(a[r], a[pivot_row]);
    const mpq_class inv = 1 / a[pivot_row][c];
    for (auto& v : a[pivot_row]) v *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == pivot_row || a[i][c] == 0) continue;
      const mpq_class f = a[i][c];
      for (std::size_t j = 0; j < cols; ++j) a[i][j] -= f * a[pivot_row][j];
    }
    ++pivot_row;
  }
  return static_cast<int>(pivot_row);
}

inline std::vector<std::vector<mpq_class>> rows_of(const dimwit::Matrix& m) {
  std::vector<std::vector<mpq_class>> out(m.rows(), std::vector<mpq_class>(m.cols()));
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) out[r][c] = m(r, c).rational();
  return out;
}

inline int rank(const dimwit::Matrix& m) { return gauss_jordan_rank(rows_of(m)); }

/// Singular values from Eigen's divide-and-conquer SVD, nonincreasing.
inline std::vector<double> singular_values(const dimwit::RealMatrix& m) {
  Eigen::MatrixXd e(m.rows(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) e(r, c) = m(r, c);
  Eigen::BDCSVD<Eigen::MatrixXd> svd(e);
  const auto& s = svd.singularValues();
  return {s.data(), s.data() + s.size()};
}

/// P_k written straight from its block description: P(1|x,y) = 1/k when x = y < k.
inline dimwit::PMBehaviour p_k_by_formula(int m, int k) {
  const dimwit::PMScenario sc{m, k};
  std::vector<Scalar> probs(static_cast<std::size_t>(2 * m * k));
  for (int x = 0; x < m; ++x)
    for (int y = 0; y < k; ++y) {
      const Scalar one = x == y ? Scalar::ratio(1, k) : Scalar(0);
      probs[dimwit::PMBehaviour::index(sc, 1, x, y)] = one;
      probs[dimwit::PMBehaviour::index(sc, 0, x, y)] = Scalar(1) - one;
    }
  return {sc, std::move(probs)};
}

/// Random rational matrix of the given rank: (rows x r) * (r x cols) small integers / q.
inline dimwit::Matrix random_rational(std::size_t rows, std::size_t cols, std::size_t r,
                                      dimwit::Rng& rng) {
  std::vector<std::vector<mpq_class>> a(rows, std::vector<mpq_class>(r)),
      b(r, std::vector<mpq_class>(cols));
  auto draw = [&] {
    return mpq_class(static_cast<long>(rng.below(11)) - 5, static_cast<long>(rng.below(4)) + 1);
  };
  for (auto& row : a)
    for (auto& v : row) v = draw();
  for (auto& row : b)
    for (auto& v : row) v = draw();
  dimwit::Matrix out(rows, cols, Scalar(0));
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) {
      mpq_class s = 0;
      for (std::size_t k = 0; k < r; ++k) s += a[i][k] * b[k][j];
      s.canonicalize();
      out(i, j) = Scalar(s);
    }
  return out;
}

inline double max_abs_diff(const std::vector<Scalar>& a, const std::vector<Scalar>& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    worst = std::max(worst, std::abs(a[i].to_double() - b[i].to_double()));
  return worst;
}

}  // namespace oracle
