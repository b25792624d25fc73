#include "dimwit/matrix.hpp"

namespace dimwit {

ScalarKind matrix_kind(const Matrix& m) {
  if (m.data().empty()) return ScalarKind::exact;
  const ScalarKind first = m.data().front().kind();
  for (const auto& v : m.data()) {
    if (v.kind() != first) throw WrongModeError("matrix mixes exact and floating entries");
  }
  return first;
}

RationalMatrix to_rational(const Matrix& m) {
  std::vector<Rational> data;
  data.reserve(m.data().size());
  for (const auto& v : m.data()) data.push_back(v.rational());
  return RationalMatrix(m.rows(), m.cols(), std::move(data));
}

RealMatrix to_real(const Matrix& m) {
  std::vector<double> data;
  data.reserve(m.data().size());
  for (const auto& v : m.data()) data.push_back(v.to_double());
  return RealMatrix(m.rows(), m.cols(), std::move(data));
}

Matrix from_rational(const RationalMatrix& m) {
  return Matrix(m.rows(), m.cols(), std::vector<Scalar>(m.data().begin(), m.data().end()));
}

Matrix from_real(const RealMatrix& m) {
  return Matrix(m.rows(), m.cols(), std::vector<Scalar>(m.data().begin(), m.data().end()));
}

}  // namespace dimwit
