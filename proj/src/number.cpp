#include "lieorder/number.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace lieorder {

double Number::to_double() const {
  if (is_exact()) return rational().convert_to<double>();
  return decimal();
}

bool Number::is_zero() const {
  return is_exact() ? rational() == 0 : decimal() == 0.0;
}

bool Number::is_one() const {
  return is_exact() ? rational() == 1 : decimal() == 1.0;
}

bool Number::is_negative() const {
  return is_exact() ? rational() < 0 : std::signbit(decimal()) && decimal() != 0.0;
}

bool Number::is_integer() const {
  return is_exact() && boost::multiprecision::denominator(rational()) == 1;
}

Number Number::operator-() const {
  if (is_exact()) return Number(Rational(-rational()));
  return Number(-decimal());
}

Number operator+(const Number& a, const Number& b) {
  if (a.is_exact() && b.is_exact()) return Number(Rational(a.rational() + b.rational()));
  return Number(a.to_double() + b.to_double());
}

Number operator-(const Number& a, const Number& b) {
  if (a.is_exact() && b.is_exact()) return Number(Rational(a.rational() - b.rational()));
  return Number(a.to_double() - b.to_double());
}

Number operator*(const Number& a, const Number& b) {
  if (a.is_exact() && b.is_exact()) return Number(Rational(a.rational() * b.rational()));
  return Number(a.to_double() * b.to_double());
}

Number operator/(const Number& a, const Number& b) {
  if (b.is_zero()) throw std::domain_error("division by zero constant");
  if (a.is_exact() && b.is_exact()) return Number(Rational(a.rational() / b.rational()));
  return Number(a.to_double() / b.to_double());
}

Number Number::pow(int n) const {
  if (n < 0) throw std::invalid_argument("Number::pow: negative exponent");
  Number result(1);
  for (int i = 0; i < n; ++i) result = result * *this;
  return result;
}

int compare(const Number& a, const Number& b) {
  if (a.is_exact() != b.is_exact()) return a.is_exact() ? -1 : 1;
  if (a.is_exact()) {
    if (a.rational() < b.rational()) return -1;
    return a.rational() > b.rational() ? 1 : 0;
  }
  const double x = a.decimal();
  const double y = b.decimal();
  if (x < y) return -1;
  return x > y ? 1 : 0;
}

std::string Number::to_string() const {
  if (is_exact()) {
    const auto num = boost::multiprecision::numerator(rational());
    const auto den = boost::multiprecision::denominator(rational());
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", decimal());
  std::string s(buf);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

}  // namespace lieorder
