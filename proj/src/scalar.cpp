#include "dimwit/scalar.hpp"

#include <array>
#include <charconv>
#include <cmath>

#include "dimwit/errors.hpp"

namespace dimwit {

const char* to_string(ScalarKind kind) {
  return kind == ScalarKind::exact ? "exact" : "float";
}

Scalar::Scalar(Rational v) : value_(std::move(v)) {
  std::get<Rational>(value_).canonicalize();
}

Scalar Scalar::ratio(long p, long q) {
  if (q == 0) throw PreconditionError("rational with zero denominator");
  return Scalar(Rational(p, q));
}

Scalar Scalar::parse_rational(const std::string& text) {
  const auto valid_int = [](const std::string& s, bool allow_sign) {
    if (s.empty()) return false;
    std::size_t i = 0;
    if (allow_sign && (s[0] == '-' || s[0] == '+')) i = 1;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
      if (s[i] < '0' || s[i] > '9') return false;
    return true;
  };
  const auto slash = text.find('/');
  std::string num = text.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : text.substr(slash + 1);
  if (!valid_int(num, true) || !valid_int(den, false)) {
    throw StructuralError("malformed rational '" + text + "'");
  }
  if (num[0] == '+') num.erase(0, 1);
  Integer n(num, 10);
  Integer d(den, 10);
  if (d == 0) throw StructuralError("rational '" + text + "' has zero denominator");
  Rational q(n, d);
  q.canonicalize();
  return Scalar(q);
}

const Rational& Scalar::rational() const {
  if (const auto* r = std::get_if<Rational>(&value_)) return *r;
  throw WrongModeError("exact rational required, got a floating value");
}

double Scalar::to_double() const {
  if (const auto* r = std::get_if<Rational>(&value_)) return r->get_d();
  return std::get<double>(value_);
}

bool Scalar::is_zero() const { return sign() == 0; }

int Scalar::sign() const {
  if (const auto* r = std::get_if<Rational>(&value_)) return sgn(*r);
  const double d = std::get<double>(value_);
  return (d > 0) - (d < 0);
}

std::string format_double(double v) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), end);
}

std::string Scalar::to_string() const {
  if (const auto* r = std::get_if<Rational>(&value_)) return r->get_str();
  return format_double(std::get<double>(value_));
}

namespace {

template <class ExactOp, class FloatOp>
void combine(std::variant<Rational, double>& lhs, const Scalar& rhs, ExactOp exact, FloatOp flt) {
  if (auto* r = std::get_if<Rational>(&lhs); r && rhs.is_exact()) {
    exact(*r, rhs.rational());
    return;
  }
  const double a = std::holds_alternative<Rational>(lhs) ? std::get<Rational>(lhs).get_d()
                                                          : std::get<double>(lhs);
  lhs = flt(a, rhs.to_double());
}

}  // namespace

Scalar& Scalar::operator+=(const Scalar& o) {
  combine(value_, o, [](Rational& a, const Rational& b) { a += b; },
          [](double a, double b) { return a + b; });
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) {
  combine(value_, o, [](Rational& a, const Rational& b) { a -= b; },
          [](double a, double b) { return a - b; });
  return *this;
}

Scalar& Scalar::operator*=(const Scalar& o) {
  combine(value_, o, [](Rational& a, const Rational& b) { a *= b; },
          [](double a, double b) { return a * b; });
  return *this;
}

Scalar& Scalar::operator/=(const Scalar& o) {
  if (o.is_exact() && o.is_zero() && is_exact()) throw PreconditionError("exact division by zero");
  combine(value_, o, [](Rational& a, const Rational& b) { a /= b; },
          [](double a, double b) { return a / b; });
  return *this;
}

Scalar Scalar::operator-() const {
  if (const auto* r = std::get_if<Rational>(&value_)) return Scalar(Rational(-*r));
  return Scalar(-std::get<double>(value_));
}

bool operator==(const Scalar& a, const Scalar& b) {
  if (a.is_exact() && b.is_exact()) return a.rational() == b.rational();
  return a.to_double() == b.to_double();
}

bool operator<(const Scalar& a, const Scalar& b) {
  if (a.is_exact() && b.is_exact()) return a.rational() < b.rational();
  return a.to_double() < b.to_double();
}

Scalar abs(const Scalar& s) { return s.sign() < 0 ? -s : s; }

}  // namespace dimwit
