#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

namespace qf {

// Value in [0, +inf] with the conventions 0*inf = 0 and inf + inf = inf.
// Quadratic forms of non-regular states take such values.
class ExtReal {
 public:
  ExtReal() : value_(0.0) {}
  explicit ExtReal(double v) : value_(v) {
    if (std::isnan(v) || v < 0.0) {
      throw std::invalid_argument("ExtReal: value must be in [0, inf]");
    }
  }

  static ExtReal infinity() { return ExtReal(std::numeric_limits<double>::infinity()); }

  bool is_inf() const { return std::isinf(value_); }
  bool is_finite() const { return !is_inf(); }

  // Finite value; throws on inf so silent misuse cannot happen.
  double finite() const {
    if (is_inf()) throw std::domain_error("ExtReal: value is infinite");
    return value_;
  }
  // Plain double view, +inf allowed.
  double raw() const { return value_; }

  friend ExtReal operator+(ExtReal a, ExtReal b) { return ExtReal(a.value_ + b.value_); }

  // 0*inf = 0 (k = 0 kills an infinite value; q(0 f) = 0).
  friend ExtReal scale(double k2, ExtReal a) {
    if (k2 == 0.0) return ExtReal(0.0);
    if (k2 < 0.0) throw std::invalid_argument("ExtReal: negative scale");
    return ExtReal(k2 * a.value_);
  }

  friend bool operator<=(ExtReal a, ExtReal b) { return a.value_ <= b.value_; }
  friend bool operator==(ExtReal a, ExtReal b) { return a.value_ == b.value_; }

  // exp(-x/4) with exp(-inf) = 0; the characteristic-functional map.
  double exp_quarter() const { return is_inf() ? 0.0 : std::exp(-value_ / 4.0); }

 private:
  double value_;
};

}  // namespace qf
