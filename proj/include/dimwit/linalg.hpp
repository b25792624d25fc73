#pragma once

#include <optional>
#include <span>
#include <vector>

#include "dimwit/matrix.hpp"

namespace dimwit {

struct RankResult {
  int rank = 0;
  ScalarKind mode = ScalarKind::exact;
  std::optional<std::vector<double>> singular_values;  // float mode, nonincreasing
  std::optional<double> tolerance_used;                // relative to sigma_max
};

/// Rank over the rationals by fraction-free (Bareiss) elimination. Rows are
/// first scaled to integers, so every pivot is a nonzero integer.
/// Throws WrongModeError if any entry is floating.
RankResult rank_exact(const Matrix& m);
int rank_exact(const RationalMatrix& m);

/// Singular values by one-sided Jacobi, sorted nonincreasing.
std::vector<double> singular_values(const RealMatrix& m);

/// max(rows, cols) * machine epsilon.
double default_rank_tolerance(std::size_t rows, std::size_t cols);

/// Counts singular values strictly above tol * sigma_max. `tol` defaults to
/// default_rank_tolerance(). Throws PreconditionError on NaN/Inf entries.
RankResult rank_float(const Matrix& m, std::optional<double> tol = std::nullopt);
RankResult rank_float(const RealMatrix& m, std::optional<double> tol = std::nullopt);

/// Exact rank for exact matrices, float rank otherwise (or when `force_float`).
RankResult rank(const Matrix& m, std::optional<double> tol = std::nullopt,
                bool force_float = false);

enum class RankMode { automatic, exact, floating };

/// Dimension of the affine hull: rank of the rows (p_i - p_0) flattened.
/// Throws PreconditionError on an empty list and StructuralError on shape mismatch.
int affine_dim(std::span<const Matrix> points, RankMode mode = RankMode::automatic,
               std::optional<double> tol = std::nullopt);

/// Smallest integer c with c*c >= r, by integer search.
int ceil_sqrt(int r);

}  // namespace dimwit
