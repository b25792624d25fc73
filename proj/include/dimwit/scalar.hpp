#pragma once

#include <gmpxx.h>

#include <string>
#include <variant>

namespace dimwit {

using Rational = mpq_class;
using Integer = mpz_class;

enum class ScalarKind { exact, floating };

const char* to_string(ScalarKind kind);

/// A number that is either an exact rational or a double. Arithmetic between
/// an exact and a floating operand yields a floating result.
class Scalar {
 public:
  Scalar() : value_(Rational(0)) {}
  Scalar(int v) : value_(Rational(v)) {}  // NOLINT(google-explicit-constructor)
  Scalar(long v) : value_(Rational(v)) {}  // NOLINT(google-explicit-constructor)
  Scalar(Rational v);                      // NOLINT(google-explicit-constructor)
  Scalar(double v) : value_(v) {}          // NOLINT(google-explicit-constructor)

  /// Exact p/q with canonicalization. Throws PreconditionError on q == 0.
  static Scalar ratio(long p, long q);

  /// Parses "p", "-p" or "p/q" (arbitrary precision). Throws StructuralError.
  static Scalar parse_rational(const std::string& text);

  ScalarKind kind() const noexcept {
    return std::holds_alternative<Rational>(value_) ? ScalarKind::exact : ScalarKind::floating;
  }
  bool is_exact() const noexcept { return kind() == ScalarKind::exact; }

  /// Throws WrongModeError if the value is floating.
  const Rational& rational() const;
  double to_double() const;
  Scalar to_floating() const { return Scalar(to_double()); }

  bool is_zero() const;
  int sign() const;

  /// "p/q" (or "p" when q == 1) for exact values, shortest round-trip text for doubles.
  std::string to_string() const;

  Scalar& operator+=(const Scalar& o);
  Scalar& operator-=(const Scalar& o);
  Scalar& operator*=(const Scalar& o);
  Scalar& operator/=(const Scalar& o);

  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }
  Scalar operator-() const;

  /// Exact equality when both are exact; otherwise compares doubles.
  friend bool operator==(const Scalar& a, const Scalar& b);
  friend bool operator<(const Scalar& a, const Scalar& b);
  friend bool operator<=(const Scalar& a, const Scalar& b) { return !(b < a); }
  friend bool operator>(const Scalar& a, const Scalar& b) { return b < a; }
  friend bool operator>=(const Scalar& a, const Scalar& b) { return !(a < b); }

 private:
  std::variant<Rational, double> value_;
};

Scalar abs(const Scalar& s);

/// Shortest decimal text that round-trips the double.
std::string format_double(double v);

}  // namespace dimwit
