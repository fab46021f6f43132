#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace oddpack {

// Raised when parsing or validating caller-supplied data fails.
struct input_error : std::runtime_error {
  explicit input_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Raised when an internal invariant is violated. The CLI maps this to exit 3.
struct invariant_error : std::logic_error {
  explicit invariant_error(const std::string& msg) : std::logic_error(msg) {}
};

namespace detail {

inline long long checked_add(long long a, long long b) {
  long long r;
  if (__builtin_add_overflow(a, b, &r)) throw invariant_error("rational overflow in addition");
  return r;
}

inline long long checked_mul(long long a, long long b) {
  long long r;
  if (__builtin_mul_overflow(a, b, &r)) throw invariant_error("rational overflow in multiplication");
  return r;
}

inline long long gcd_ll(long long a, long long b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    long long t = a % b;
    a = b;
    b = t;
  }
  return a;
}

}  // namespace detail

// Exact rational number over checked 64-bit integers. Denominator is kept
// positive and the fraction reduced; overflow throws instead of wrapping.
class Rational {
 public:
  Rational() : num_(0), den_(1) {}
  Rational(long long n) : num_(n), den_(1) {}  // NOLINT: implicit by design
  Rational(long long n, long long d) : num_(n), den_(d) { normalize(); }

  long long numerator() const { return num_; }
  long long denominator() const { return den_; }

  bool is_zero() const { return num_ == 0; }
  bool is_integer() const { return den_ == 1; }
  bool is_half_integer() const { return den_ == 1 || den_ == 2; }
  bool is_even_integer() const { return den_ == 1 && num_ % 2 == 0; }

  Rational operator+(const Rational& o) const {
    long long g = detail::gcd_ll(den_, o.den_);
    long long lhs = detail::checked_mul(num_, o.den_ / g);
    long long rhs = detail::checked_mul(o.num_, den_ / g);
    return Rational(detail::checked_add(lhs, rhs), detail::checked_mul(den_, o.den_ / g));
  }
  Rational operator-() const { return Rational(-num_, den_); }
  Rational operator-(const Rational& o) const { return *this + (-o); }
  Rational operator*(const Rational& o) const {
    long long g1 = detail::gcd_ll(num_ < 0 ? -num_ : num_, o.den_);
    long long g2 = detail::gcd_ll(o.num_ < 0 ? -o.num_ : o.num_, den_);
    return Rational(detail::checked_mul(num_ / g1, o.num_ / g2),
                    detail::checked_mul(den_ / g2, o.den_ / g1));
  }
  Rational operator/(const Rational& o) const {
    if (o.num_ == 0) throw invariant_error("rational division by zero");
    return *this * Rational(o.den_, o.num_);
  }
  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  bool operator==(const Rational& o) const { return num_ == o.num_ && den_ == o.den_; }
  bool operator!=(const Rational& o) const { return !(*this == o); }
  bool operator<(const Rational& o) const {
    // Compare via cross multiplication; denominators are positive.
    return detail::checked_mul(num_, o.den_) < detail::checked_mul(o.num_, den_);
  }
  bool operator>(const Rational& o) const { return o < *this; }
  bool operator<=(const Rational& o) const { return !(o < *this); }
  bool operator>=(const Rational& o) const { return !(*this < o); }

  std::string to_string() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

  // Accepts decimal integers ("4", "-3") and fraction strings ("3/2").
  static Rational parse(const std::string& s) {
    if (s.empty()) throw input_error("empty rational literal");
    auto slash = s.find('/');
    try {
      size_t used = 0;
      if (slash == std::string::npos) {
        long long n = std::stoll(s, &used);
        if (used != s.size()) throw input_error("trailing characters in rational literal '" + s + "'");
        return Rational(n);
      }
      long long n = std::stoll(s.substr(0, slash), &used);
      if (used != slash) throw input_error("bad numerator in rational literal '" + s + "'");
      std::string dpart = s.substr(slash + 1);
      long long d = std::stoll(dpart, &used);
      if (used != dpart.size()) throw input_error("bad denominator in rational literal '" + s + "'");
      if (d == 0) throw input_error("zero denominator in rational literal '" + s + "'");
      return Rational(n, d);
    } catch (const std::invalid_argument&) {
      throw input_error("malformed rational literal '" + s + "'");
    } catch (const std::out_of_range&) {
      throw input_error("rational literal out of range '" + s + "'");
    }
  }

 private:
  void normalize() {
    if (den_ == 0) throw invariant_error("rational with zero denominator");
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    long long g = detail::gcd_ll(num_, den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
    if (num_ == 0) den_ = 1;
  }

  long long num_;
  long long den_;
};

}  // namespace oddpack
