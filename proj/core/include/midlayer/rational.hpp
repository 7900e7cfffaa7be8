#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace midlayer {

/// Arbitrary-precision rational. Thin value wrapper around GMP's mpq_class:
/// always canonicalized, prints as "p/q" (or "p" when the denominator is 1),
/// and knows how to convert itself to log space without overflow.
class Rat {
public:
  Rat() : v_(0) {}
  Rat(long n) : v_(n) {}                      // NOLINT(google-explicit-constructor)
  Rat(long n, long d) : v_(n, d) { v_.canonicalize(); }
  explicit Rat(const mpq_class& v) : v_(v) { v_.canonicalize(); }
  explicit Rat(const mpz_class& v) : v_(v) {}

  /// Accepts "p/q", a plain integer, or a decimal like "0.25" (parsed exactly).
  static Rat parse(const std::string& s);

  static Rat binom(unsigned long n, unsigned long k);
  static Rat factorial(unsigned long n);
  static Rat pow2(long e) { return Rat(2).pow(e); }

  Rat operator+(const Rat& o) const { return Rat(mpq_class(v_ + o.v_)); }
  Rat operator-(const Rat& o) const { return Rat(mpq_class(v_ - o.v_)); }
  Rat operator*(const Rat& o) const { return Rat(mpq_class(v_ * o.v_)); }
  Rat operator/(const Rat& o) const;
  Rat operator-() const { return Rat(mpq_class(-v_)); }
  Rat& operator+=(const Rat& o) { v_ += o.v_; return *this; }
  Rat& operator-=(const Rat& o) { v_ -= o.v_; return *this; }
  Rat& operator*=(const Rat& o) { v_ *= o.v_; return *this; }

  bool operator==(const Rat& o) const { return v_ == o.v_; }
  bool operator!=(const Rat& o) const { return v_ != o.v_; }
  bool operator<(const Rat& o) const { return v_ < o.v_; }
  bool operator<=(const Rat& o) const { return v_ <= o.v_; }
  bool operator>(const Rat& o) const { return v_ > o.v_; }
  bool operator>=(const Rat& o) const { return v_ >= o.v_; }

  /// Integer power; negative exponents invert (error on zero base).
  Rat pow(long e) const;

  Rat abs() const { return Rat(mpq_class(::abs(v_))); }
  int sign() const { return sgn(v_); }
  bool is_zero() const { return sgn(v_) == 0; }
  bool is_integer() const { return v_.get_den() == 1; }

  /// "p/q", or just "p" when q == 1. Exact decimal digits.
  std::string str() const;
  std::string num_str() const { return v_.get_num().get_str(); }
  std::string den_str() const { return v_.get_den().get_str(); }

  double to_double() const { return v_.get_d(); }
  /// Natural log of a positive rational, stable for values far outside
  /// double range. Errors on non-positive input.
  double log() const;

  const mpq_class& mpq() const { return v_; }

private:
  mpq_class v_;
};

/// Tagged exact-or-log scalar. Exact mode carries a full rational; log mode
/// carries sign and ln|x| for magnitudes beyond exact interest.
class ExactScalar {
public:
  static ExactScalar from_rat(Rat r) {
    ExactScalar s;
    s.exact_ = true;
    s.rat_ = std::move(r);
    return s;
  }
  static ExactScalar from_log(int sign, double log_abs) {
    ExactScalar s;
    s.exact_ = false;
    s.sign_ = sign;
    s.log_abs_ = log_abs;
    return s;
  }

  bool is_exact() const { return exact_; }
  const Rat& rat() const;
  int sign() const { return exact_ ? rat_.sign() : sign_; }
  /// ln|x| in either mode.
  double log_abs() const;
  double to_double() const;
  std::string str() const;

private:
  bool exact_ = true;
  Rat rat_;
  int sign_ = 0;
  double log_abs_ = 0.0;
};

}  // namespace midlayer
