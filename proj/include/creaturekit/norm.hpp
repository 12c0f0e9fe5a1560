#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <compare>
#include <string>

#include "creaturekit/error.hpp"

namespace creaturekit {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline std::string to_string(const Rational& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

inline Rational pow_int(int base, int exp) {
  BigInt p = 1;
  for (int i = 0; i < exp; ++i) p *= base;
  return Rational(p);
}

enum class NormScale { linear, log4, log8 };

inline const char* scale_name(NormScale s) {
  switch (s) {
    case NormScale::linear: return "linear";
    case NormScale::log4: return "log4";
    case NormScale::log8: return "log8";
  }
  return "?";
}

/// A creature norm kept as an exact pre-norm plus the formula turning it into a real:
/// linear norms equal the pre-norm, logarithmic ones are log_4 or log_8 of it.
class Norm {
 public:
  static constexpr double tolerance = 1e-9;

  Norm() = default;

  static Norm linear(Rational v) {
    Norm n;
    n.scale_ = NormScale::linear;
    n.pre_ = std::move(v);
    return n;
  }

  static Norm logarithmic(NormScale s, Rational pre) {
    require(s != NormScale::linear, "logarithmic norm needs base 4 or 8");
    require(pre > 0, "logarithmic pre-norm must be positive");
    Norm n;
    n.scale_ = s;
    n.pre_ = std::move(pre);
    return n;
  }

  NormScale scale() const noexcept { return scale_; }
  const Rational& pre() const noexcept { return pre_; }

  int base() const { return scale_ == NormScale::log4 ? 4 : 8; }

  double value() const {
    if (scale_ == NormScale::linear) return static_cast<double>(pre_);
    const double num = static_cast<double>(numerator(pre_));
    const double den = static_cast<double>(denominator(pre_));
    return (std::log(num) - std::log(den)) / std::log(static_cast<double>(base()));
  }

  /// The pre-norm whose image under this norm's formula is the integer c.
  Rational threshold(int c) const {
    if (scale_ == NormScale::linear) return Rational(c);
    if (c >= 0) return pow_int(base(), c);
    return Rational(1) / pow_int(base(), -c);
  }

  bool exceeds(int c) const { return pre_ > threshold(c); }
  bool at_least(int c) const { return pre_ >= threshold(c); }

  /// The norm value decreased by c.
  Norm minus(int c) const {
    Norm n = *this;
    if (scale_ == NormScale::linear) n.pre_ -= c;
    else n.pre_ /= pow_int(base(), c);
    return n;
  }

  friend std::partial_ordering operator<=>(const Norm& a, const Norm& b) {
    if (a.scale_ == b.scale_) {
      if (a.pre_ < b.pre_) return std::partial_ordering::less;
      if (a.pre_ > b.pre_) return std::partial_ordering::greater;
      return std::partial_ordering::equivalent;
    }
    const double x = a.value(), y = b.value();
    if (std::abs(x - y) <= tolerance) return std::partial_ordering::equivalent;
    return x < y ? std::partial_ordering::less : std::partial_ordering::greater;
  }

  friend bool operator==(const Norm& a, const Norm& b) { return (a <=> b) == 0; }

  std::string describe() const {
    if (scale_ == NormScale::linear) return to_string(pre_);
    return std::string(scale_name(scale_)) + "(" + to_string(pre_) + ")";
  }

 private:
  NormScale scale_ = NormScale::linear;
  Rational pre_ = 0;
};

inline const Norm& min(const Norm& a, const Norm& b) { return (b < a) ? b : a; }
inline const Norm& max(const Norm& a, const Norm& b) { return (a < b) ? b : a; }

}  // namespace creaturekit
