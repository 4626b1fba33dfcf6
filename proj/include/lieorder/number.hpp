#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <variant>

namespace lieorder {

using Rational = boost::multiprecision::cpp_rational;

/// Scalar constant of the expression language: an exact rational, or a
/// decimal (double) once any inexact literal is involved. Arithmetic between
/// two exact values stays exact; mixing with a decimal yields a decimal.
class Number {
 public:
  Number() : value_(Rational(0)) {}
  Number(Rational r) : value_(std::move(r)) {}  // NOLINT(google-explicit-constructor)
  Number(long long i) : value_(Rational(i)) {}  // NOLINT(google-explicit-constructor)
  Number(int i) : value_(Rational(i)) {}        // NOLINT(google-explicit-constructor)
  explicit Number(double d) : value_(d) {}

  bool is_exact() const { return std::holds_alternative<Rational>(value_); }
  const Rational& rational() const { return std::get<Rational>(value_); }
  double decimal() const { return std::get<double>(value_); }
  double to_double() const;

  bool is_zero() const;
  bool is_one() const;
  bool is_negative() const;
  bool is_integer() const;

  Number operator-() const;
  friend Number operator+(const Number& a, const Number& b);
  friend Number operator-(const Number& a, const Number& b);
  friend Number operator*(const Number& a, const Number& b);
  /// Throws std::domain_error on division by an exact or decimal zero.
  friend Number operator/(const Number& a, const Number& b);
  Number& operator+=(const Number& b) { return *this = *this + b; }
  Number& operator*=(const Number& b) { return *this = *this * b; }

  /// n >= 0; repeated multiplication so decimal results are reproducible.
  Number pow(int n) const;

  /// Structural order: exact values sort before decimals, then by value.
  friend int compare(const Number& a, const Number& b);
  friend bool operator==(const Number& a, const Number& b) { return compare(a, b) == 0; }

  /// "3", "-3/2", or a decimal with 17 significant digits that always
  /// re-parses as a decimal literal ("2.0", "1e+20").
  std::string to_string() const;

 private:
  std::variant<Rational, double> value_;
};

}  // namespace lieorder
