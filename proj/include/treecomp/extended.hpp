#pragma once

#include <stdexcept>
#include <string>

#include "treecomp/rational.hpp"

namespace treecomp {

/// A rational extended with +/- infinity. The minimum over an empty
/// feasible set is encoded as +infinity, an unbounded minimum as
/// -infinity. Total order: -inf < finite < +inf.
class ExtValue {
 public:
  enum class Kind { neg_inf, finite, pos_inf };

  ExtValue() : kind_(Kind::finite), value_() {}
  explicit ExtValue(Rational v) : kind_(Kind::finite), value_(std::move(v)) {}

  static ExtValue neg_inf() { return ExtValue(Kind::neg_inf); }
  static ExtValue pos_inf() { return ExtValue(Kind::pos_inf); }
  static ExtValue of(Rational v) { return ExtValue(std::move(v)); }

  Kind kind() const { return kind_; }
  bool is_finite() const { return kind_ == Kind::finite; }
  bool is_pos_inf() const { return kind_ == Kind::pos_inf; }
  bool is_neg_inf() const { return kind_ == Kind::neg_inf; }

  const Rational& finite() const {
    if (!is_finite()) throw std::logic_error("ExtValue: not finite");
    return value_;
  }

  friend bool operator==(const ExtValue& a, const ExtValue& b) {
    if (a.kind_ != b.kind_) return false;
    return a.kind_ != Kind::finite || a.value_ == b.value_;
  }
  friend bool operator!=(const ExtValue& a, const ExtValue& b) { return !(a == b); }
  friend bool operator<(const ExtValue& a, const ExtValue& b) {
    if (a.kind_ == b.kind_) return a.kind_ == Kind::finite && a.value_ < b.value_;
    return rank(a.kind_) < rank(b.kind_);
  }
  friend bool operator<=(const ExtValue& a, const ExtValue& b) { return a < b || a == b; }
  friend bool operator>(const ExtValue& a, const ExtValue& b) { return b < a; }
  friend bool operator>=(const ExtValue& a, const ExtValue& b) { return b <= a; }

  std::string str() const {
    switch (kind_) {
      case Kind::neg_inf:
        return "-inf";
      case Kind::pos_inf:
        return "inf";
      default:
        return value_.str();
    }
  }

  static ExtValue parse(const std::string& s) {
    if (s == "inf" || s == "+inf") return pos_inf();
    if (s == "-inf") return neg_inf();
    return of(Rational::parse(s));
  }

  double to_double() const {
    switch (kind_) {
      case Kind::neg_inf:
        return -std::numeric_limits<double>::infinity();
      case Kind::pos_inf:
        return std::numeric_limits<double>::infinity();
      default:
        return value_.to_double();
    }
  }

 private:
  explicit ExtValue(Kind k) : kind_(k), value_() {}
  static int rank(Kind k) { return k == Kind::neg_inf ? 0 : (k == Kind::finite ? 1 : 2); }

  Kind kind_;
  Rational value_;
};

inline const ExtValue& min(const ExtValue& a, const ExtValue& b) { return b < a ? b : a; }
inline const ExtValue& max(const ExtValue& a, const ExtValue& b) { return a < b ? b : a; }

/// |a - b| with infinity-aware semantics; equal infinities are distance 0.
inline ExtValue abs_distance(const ExtValue& a, const ExtValue& b) {
  if (a == b) return ExtValue::of(Rational(0));
  if (!a.is_finite() || !b.is_finite()) return ExtValue::pos_inf();
  return ExtValue::of((a.finite() - b.finite()).abs());
}

}  // namespace treecomp
