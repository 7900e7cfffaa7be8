#include "midlayer/rational.hpp"

#include <cmath>
#include <sstream>

#include "midlayer/errors.hpp"

namespace midlayer {

Rat Rat::parse(const std::string& s) {
  if (s.empty()) throw parse_error("empty rational literal");
  auto dot = s.find('.');
  if (dot != std::string::npos) {
    // exact decimal: "12.375" -> 12375 / 10^3
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    size_t frac_len = s.size() - dot - 1;
    if (digits.empty() || digits == "-" || digits == "+")
      throw parse_error("bad decimal literal: " + s);
    mpz_class num;
    if (num.set_str(digits, 10) != 0) throw parse_error("bad decimal literal: " + s);
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, frac_len);
    mpq_class q(num, den);
    q.canonicalize();
    return Rat(q);
  }
  mpq_class q;
  if (q.set_str(s, 10) != 0) throw parse_error("bad rational literal: " + s);
  if (q.get_den() == 0) throw parse_error("zero denominator: " + s);
  q.canonicalize();
  return Rat(q);
}

Rat Rat::binom(unsigned long n, unsigned long k) {
  mpz_class z;
  mpz_bin_uiui(z.get_mpz_t(), n, k);
  return Rat(z);
}

Rat Rat::factorial(unsigned long n) {
  mpz_class z;
  mpz_fac_ui(z.get_mpz_t(), n);
  return Rat(z);
}

Rat Rat::operator/(const Rat& o) const {
  if (o.is_zero()) throw parse_error("rational division by zero");
  return Rat(mpq_class(v_ / o.v_));
}

Rat Rat::pow(long e) const {
  if (e == 0) return Rat(1);
  bool invert = e < 0;
  unsigned long ue = invert ? static_cast<unsigned long>(-e) : static_cast<unsigned long>(e);
  mpz_class num, den;
  mpz_pow_ui(num.get_mpz_t(), v_.get_num().get_mpz_t(), ue);
  mpz_pow_ui(den.get_mpz_t(), v_.get_den().get_mpz_t(), ue);
  if (invert) {
    if (num == 0) throw parse_error("zero to a negative power");
    std::swap(num, den);
  }
  mpq_class q(num, den);
  q.canonicalize();
  return Rat(q);
}

std::string Rat::str() const {
  if (v_.get_den() == 1) return v_.get_num().get_str();
  return v_.get_num().get_str() + "/" + v_.get_den().get_str();
}

namespace {

double log_mpz(const mpz_class& z) {
  // mantissa in [0.5, 1) times 2^exp
  signed long exp = 0;
  double m = mpz_get_d_2exp(&exp, z.get_mpz_t());
  return std::log(m) + static_cast<double>(exp) * M_LN2;
}

}  // namespace

double Rat::log() const {
  if (sign() <= 0) throw parse_error("log of non-positive rational");
  return log_mpz(v_.get_num()) - log_mpz(v_.get_den());
}

const Rat& ExactScalar::rat() const {
  if (!exact_) throw parse_error("scalar is in log mode, no exact value");
  return rat_;
}

double ExactScalar::log_abs() const {
  if (exact_) {
    if (rat_.is_zero()) throw parse_error("log of zero");
    return rat_.abs().log();
  }
  return log_abs_;
}

double ExactScalar::to_double() const {
  if (exact_) return rat_.to_double();
  return sign_ * std::exp(log_abs_);
}

std::string ExactScalar::str() const {
  if (exact_) return rat_.str();
  std::ostringstream os;
  os << (sign_ < 0 ? "-exp(" : "exp(") << log_abs_ << ")";
  return os.str();
}

}  // namespace midlayer
