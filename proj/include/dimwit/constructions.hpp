#pragma once

#include <cstdint>
#include <iterator>
#include <vector>

#include "dimwit/behaviour.hpp"

namespace dimwit {

/// e_i^{(n)} with a 1-based index, as used by the block constructions.
struct BasisVectorSpec {
  int n = 1;
  int i = 1;

  void check() const;
  std::vector<Scalar> vector() const;
};

// Prepare-and-measure families live in the scenario |X| = m, |Y| = k. Their
// m x 2k matrices are made of 1x2 blocks, (1 0) = e_1^T meaning "output 0".
// Indices i, j below are 1-based to match the block positions they name.

/// D_ij: every block (1 0) except (0 1) at block (i, j). D_ii is the D_i family.
PMBehaviour d_block(int m, int k, int i, int j);

/// D_0: every block (1 0).
PMBehaviour d_zero(int m, int k);

/// P_k = (1/k) sum_{i=1..k} D_i. Diagonal blocks are c_k = (1 - 1/k, 1/k).
/// Requires m >= k + 1.
PMBehaviour p_k(int m, int k);

/// Q: row j (j <= k) is v_j^T, rows k+1..m are v_{k+1}^T, where v_j has block
/// j equal to (0 1) and every other block (1 0), and v_{k+1} is all (1 0).
/// Requires m >= k + 1.
PMBehaviour q_perturbation(int m, int k);

/// The vectors v_1 .. v_{k+1} defining Q, each of length 2k.
std::vector<std::vector<Scalar>> q_vectors(int k);

/// P_eps = (1 - eps) P + eps Q. Requires 0 <= eps <= 1 and |X| >= |Y| + 1.
PMBehaviour p_epsilon(const PMBehaviour& p, const Scalar& eps);

/// Local deterministic behaviour D(ab|xy) = [a = f(x)] [b = g(y)] (0-based values).
BellBehaviour ldb(int m, int n, const std::vector<int>& f, const std::vector<int>& g);

/// Number of LDBs, n^(2m). Saturates at UINT64_MAX.
std::uint64_t ldb_count(int m, int n);

/// Decodes an LDB index: f is the high base-n word, g the low word, with x = 0
/// as the most significant digit, so indices run in lexicographic (f, g) order.
void ldb_functions(int m, int n, std::uint64_t index, std::vector<int>& f, std::vector<int>& g);

/// Stateless, index-based range over all LDBs of a scenario.
class LdbRange {
 public:
  class iterator {
   public:
    using iterator_category = std::input_iterator_tag;
    using value_type = BellBehaviour;
    using difference_type = std::ptrdiff_t;

    iterator(int m, int n, std::uint64_t index) : m_(m), n_(n), index_(index) {}
    BellBehaviour operator*() const;
    iterator& operator++() {
      ++index_;
      return *this;
    }
    std::uint64_t index() const noexcept { return index_; }
    friend bool operator==(const iterator& a, const iterator& b) { return a.index_ == b.index_; }

   private:
    int m_, n_;
    std::uint64_t index_;
  };

  LdbRange(int m, int n, std::uint64_t first, std::uint64_t last)
      : m_(m), n_(n), first_(first), last_(last) {}

  iterator begin() const { return {m_, n_, first_}; }
  iterator end() const { return {m_, n_, last_}; }
  std::uint64_t size() const noexcept { return last_ - first_; }

  /// Sub-range [first, last) of indices, for sharding across workers.
  LdbRange slice(std::uint64_t first, std::uint64_t last) const;

 private:
  int m_, n_;
  std::uint64_t first_, last_;
};

inline constexpr std::uint64_t kDefaultEnumerationCap = 1'000'000;

/// All n^(2m) LDBs. Throws CapExceeded when the count is above `cap`.
LdbRange enumerate_ldbs(int m, int n, std::uint64_t cap = kDefaultEnumerationCap);

/// One weighted LDB of the L mixture (f = g for every term).
struct LdbTerm {
  std::vector<int> f;
  std::vector<int> g;
  Scalar weight;
};

/// The mn - m + 1 LDB terms of L: v^(0) (every party outputs 0) and v_i^(j)
/// (output i on input j, 0 elsewhere) for i = 1..n-1 (0-based), j = 0..m-1.
std::vector<LdbTerm> l_star_terms(int m, int n);

/// L = uniform mixture of l_star_terms(); local with rank mn - m + 1.
BellBehaviour l_star(int m, int n);

}  // namespace dimwit
