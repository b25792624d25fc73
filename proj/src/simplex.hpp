#pragma once

// Phase-one simplex with an explicit basis inverse, generic over double and Rational.
// Columns are supplied one at a time by the caller (column generation).

#include <cmath>
#include <cstdint>
#include <vector>

#include "dimwit/errors.hpp"
#include "dimwit/scalar.hpp"

namespace dimwit::detail {

template <class T>
struct LpNumber;

template <>
struct LpNumber<double> {
  static bool positive(double v, double tol) { return v > tol; }
  static double to_double(double v) { return v; }
};

template <>
struct LpNumber<Rational> {
  static bool positive(const Rational& v, double) { return sgn(v) > 0; }
  static double to_double(const Rational& v) { return v.get_d(); }
};

template <class T>
class Phase1Simplex {
 public:
  static constexpr std::uint64_t kArtificial = UINT64_MAX;

  /// Constraints A lambda = rhs with rhs >= 0; starts from the all-artificial basis.
  Phase1Simplex(std::vector<T> rhs, double tol) : rows_(rhs.size()), tol_(tol), x_(std::move(rhs)) {
    binv_.assign(rows_ * rows_, T(0));
    for (std::size_t i = 0; i < rows_; ++i) binv_[i * rows_ + i] = T(1);
    basis_.assign(rows_, kArtificial);
    cost_.assign(rows_, T(1));
  }

  std::size_t rows() const noexcept { return rows_; }

  /// Simplex multipliers c_B^T B^{-1}. A column a improves the phase-one
  /// objective iff duals . a > 0.
  std::vector<T> duals() const {
    std::vector<T> pi(rows_, T(0));
    for (std::size_t i = 0; i < rows_; ++i) {
      if (cost_[i] == T(0)) continue;
      for (std::size_t j = 0; j < rows_; ++j) pi[j] += cost_[i] * binv_[i * rows_ + j];
    }
    return pi;
  }

  /// Sum of artificial variables still in the basis.
  T objective() const {
    T s(0);
    for (std::size_t i = 0; i < rows_; ++i)
      if (basis_[i] == kArtificial) s += x_[i];
    return s;
  }

  bool contains(std::uint64_t id) const {
    for (auto b : basis_)
      if (b == id) return true;
    return false;
  }

  /// Pivots column `a` (identified by `id`) into the basis.
  void enter(std::uint64_t id, const std::vector<T>& a) {
    std::vector<T> u(rows_, T(0));
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < rows_; ++j) {
        if (a[j] == T(0)) continue;
        u[i] += binv_[i * rows_ + j] * a[j];
      }

    // Ratio test; ties prefer driving out artificials, then the lowest row.
    std::size_t leave = rows_;
    T best_ratio(0);
    for (std::size_t i = 0; i < rows_; ++i) {
      if (!LpNumber<T>::positive(u[i], tol_)) continue;
      T ratio = x_[i] / u[i];
      if (leave == rows_ || ratio < best_ratio ||
          (ratio == best_ratio && basis_[i] == kArtificial && basis_[leave] != kArtificial)) {
        leave = i;
        best_ratio = ratio;
      }
    }
    if (leave == rows_) throw SolverFailure("phase-one simplex: unbounded direction");

    const T pivot = u[leave];
    for (std::size_t j = 0; j < rows_; ++j) binv_[leave * rows_ + j] /= pivot;
    x_[leave] /= pivot;
    for (std::size_t i = 0; i < rows_; ++i) {
      if (i == leave || u[i] == T(0)) continue;
      const T f = u[i];
      for (std::size_t j = 0; j < rows_; ++j) binv_[i * rows_ + j] -= f * binv_[leave * rows_ + j];
      x_[i] -= f * x_[leave];
    }
    basis_[leave] = id;
    cost_[leave] = T(0);
    ++pivots_;
  }

  const std::vector<std::uint64_t>& basis() const noexcept { return basis_; }
  const std::vector<T>& values() const noexcept { return x_; }
  int pivots() const noexcept { return pivots_; }

 private:
  std::size_t rows_;
  double tol_;
  std::vector<T> x_;
  std::vector<T> binv_;
  std::vector<std::uint64_t> basis_;
  std::vector<T> cost_;
  int pivots_ = 0;
};

}  // namespace dimwit::detail
