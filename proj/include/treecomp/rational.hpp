#pragma once

#include <gmpxx.h>

#include <Eigen/Core>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>

namespace treecomp {

/// Arbitrary-precision rational number, always kept in canonical form.
///
/// Thin value wrapper around GMP's mpq_class. Operators return plain
/// Rational values (no expression templates leak out), which keeps the
/// type usable as an Eigen scalar.
class Rational {
 public:
  Rational() : v_(0) {}
  Rational(int n) : v_(n) {}
  Rational(long n) : v_(n) {}
  Rational(long long n) : v_(static_cast<double>(0)) {
    mpz_class z;
    set_int64(z, n);
    v_ = mpq_class(z);
  }
  Rational(long long num, long long den) {
    if (den == 0) throw std::domain_error("Rational: zero denominator");
    mpz_class n, d;
    set_int64(n, num);
    set_int64(d, den);
    v_ = mpq_class(n) / mpq_class(d);
    v_.canonicalize();
  }
  explicit Rational(const mpq_class& q) : v_(q) { v_.canonicalize(); }

  /// Exact conversion from a binary double (doubles are dyadic rationals).
  static Rational from_double(double x);

  /// Parses "p/q", plain integers, and decimal literals with optional
  /// exponent ("0.2", "-3", "1.5e2", ".5"). Decimal input converts exactly.
  static Rational parse(std::string_view text);

  bool is_zero() const { return sgn(v_) == 0; }
  bool is_integer() const { return v_.get_den() == 1; }
  int sign() const { return sgn(v_); }

  Rational abs() const { return Rational(mpq_class(::abs(v_))); }
  Rational floor() const;
  Rational ceil() const;
  long long floor_ll() const;
  long long ceil_ll() const;

  double to_double() const { return v_.get_d(); }
  /// "p" when the denominator is 1, otherwise "p/q".
  std::string str() const;

  const mpq_class& raw() const { return v_; }

  friend Rational operator+(const Rational& a, const Rational& b) { return Rational(mpq_class(a.v_ + b.v_)); }
  friend Rational operator-(const Rational& a, const Rational& b) { return Rational(mpq_class(a.v_ - b.v_)); }
  friend Rational operator*(const Rational& a, const Rational& b) { return Rational(mpq_class(a.v_ * b.v_)); }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.is_zero()) throw std::domain_error("Rational: division by zero");
    return Rational(mpq_class(a.v_ / b.v_));
  }
  Rational operator-() const { return Rational(mpq_class(-v_)); }
  Rational& operator+=(const Rational& o) {
    v_ += o.v_;
    return *this;
  }
  Rational& operator-=(const Rational& o) {
    v_ -= o.v_;
    return *this;
  }
  Rational& operator*=(const Rational& o) {
    v_ *= o.v_;
    return *this;
  }
  Rational& operator/=(const Rational& o) {
    if (o.is_zero()) throw std::domain_error("Rational: division by zero");
    v_ /= o.v_;
    return *this;
  }

  friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
  friend bool operator!=(const Rational& a, const Rational& b) { return a.v_ != b.v_; }
  friend bool operator<(const Rational& a, const Rational& b) { return a.v_ < b.v_; }
  friend bool operator<=(const Rational& a, const Rational& b) { return a.v_ <= b.v_; }
  friend bool operator>(const Rational& a, const Rational& b) { return a.v_ > b.v_; }
  friend bool operator>=(const Rational& a, const Rational& b) { return a.v_ >= b.v_; }

 private:
  static void set_int64(mpz_class& z, long long n) {
    // mpz_class has no long long constructor on all ABIs; go through a
    // string only when the value does not fit a long.
    if (n >= static_cast<long long>(std::numeric_limits<long>::min()) &&
        n <= static_cast<long long>(std::numeric_limits<long>::max())) {
      z = static_cast<long>(n);
    } else {
      z = mpz_class(std::to_string(n));
    }
  }

  mpq_class v_;
};

inline Rational Rational::from_double(double x) {
  if (!std::isfinite(x)) throw std::domain_error("Rational::from_double: non-finite input");
  mpq_class q;
  mpq_set_d(q.get_mpq_t(), x);
  return Rational(q);
}

inline Rational Rational::floor() const {
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), v_.get_num_mpz_t(), v_.get_den_mpz_t());
  return Rational(mpq_class(q));
}

inline Rational Rational::ceil() const {
  mpz_class q;
  mpz_cdiv_q(q.get_mpz_t(), v_.get_num_mpz_t(), v_.get_den_mpz_t());
  return Rational(mpq_class(q));
}

inline long long Rational::floor_ll() const {
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), v_.get_num_mpz_t(), v_.get_den_mpz_t());
  if (!q.fits_slong_p()) throw std::overflow_error("Rational::floor_ll: out of range");
  return q.get_si();
}

inline long long Rational::ceil_ll() const {
  mpz_class q;
  mpz_cdiv_q(q.get_mpz_t(), v_.get_num_mpz_t(), v_.get_den_mpz_t());
  if (!q.fits_slong_p()) throw std::overflow_error("Rational::ceil_ll: out of range");
  return q.get_si();
}

inline std::string Rational::str() const {
  if (is_integer()) return v_.get_num().get_str();
  return v_.get_num().get_str() + "/" + v_.get_den().get_str();
}

inline Rational Rational::parse(std::string_view text) {
  if (text.empty()) throw std::invalid_argument("Rational::parse: empty string");
  std::string s(text);
  if (s.find('/') != std::string::npos) {
    mpq_class q;
    if (q.set_str(s, 10) != 0) throw std::invalid_argument("Rational::parse: bad fraction '" + s + "'");
    if (q.get_den() == 0) throw std::invalid_argument("Rational::parse: zero denominator in '" + s + "'");
    q.canonicalize();
    return Rational(q);
  }
  // Decimal / scientific literal, converted exactly.
  std::size_t i = 0;
  bool neg = false;
  if (s[i] == '+' || s[i] == '-') {
    neg = s[i] == '-';
    ++i;
  }
  std::string digits;
  long frac_digits = 0;
  bool any_digit = false, seen_dot = false;
  for (; i < s.size(); ++i) {
    char ch = s[i];
    if (ch >= '0' && ch <= '9') {
      digits.push_back(ch);
      any_digit = true;
      if (seen_dot) ++frac_digits;
    } else if (ch == '.' && !seen_dot) {
      seen_dot = true;
    } else if ((ch == 'e' || ch == 'E' || ch == 'd' || ch == 'D') && any_digit) {
      break;
    } else {
      throw std::invalid_argument("Rational::parse: bad literal '" + s + "'");
    }
  }
  long expo = 0;
  if (i < s.size()) {
    ++i;  // skip e/E/d/D
    bool eneg = false;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
      eneg = s[i] == '-';
      ++i;
    }
    if (i >= s.size()) throw std::invalid_argument("Rational::parse: bad exponent in '" + s + "'");
    for (; i < s.size(); ++i) {
      if (s[i] < '0' || s[i] > '9') throw std::invalid_argument("Rational::parse: bad exponent in '" + s + "'");
      expo = expo * 10 + (s[i] - '0');
      if (expo > 100000) throw std::invalid_argument("Rational::parse: exponent too large in '" + s + "'");
    }
    if (eneg) expo = -expo;
  }
  if (!any_digit) throw std::invalid_argument("Rational::parse: bad literal '" + s + "'");
  mpz_class num(digits.empty() ? "0" : digits);
  if (neg) num = -num;
  long p10 = expo - frac_digits;
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(p10 >= 0 ? p10 : -p10));
  mpq_class q;
  if (p10 >= 0) {
    q = mpq_class(num * scale);
  } else {
    q = mpq_class(num) / mpq_class(scale);
  }
  q.canonicalize();
  return Rational(q);
}

}  // namespace treecomp

namespace Eigen {
template <>
struct NumTraits<treecomp::Rational> {
  using Self = treecomp::Rational;
  using Real = Self;
  using NonInteger = Self;
  using Literal = Self;
  using Nested = Self;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 8,
    AddCost = 64,
    MulCost = 64
  };
  static inline Self epsilon() { return Self(0); }
  static inline Self dummy_precision() { return Self(0); }
  static inline int digits10() { return 0; }
};
}  // namespace Eigen

namespace treecomp {

using RatVec = Eigen::Matrix<Rational, Eigen::Dynamic, 1>;
using Index = Eigen::Index;

inline Rational dot(const RatVec& a, const RatVec& b) {
  Rational r;
  for (Index i = 0; i < a.size(); ++i) r += a(i) * b(i);
  return r;
}

}  // namespace treecomp
