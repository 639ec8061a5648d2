#pragma once

#include <cmath>
#include <limits>

namespace rstn {

// Nonnegative weight w held as log w; log w = -inf is the zero weight.
class LogWeight {
 public:
  constexpr LogWeight() = default;

  static constexpr LogWeight zero() { return LogWeight(-std::numeric_limits<double>::infinity()); }
  static constexpr LogWeight one() { return LogWeight(0.0); }
  static constexpr LogWeight from_log(double log_value) { return LogWeight(log_value); }
  static LogWeight from_value(double w) { return LogWeight(w > 0.0 ? std::log(w) : -std::numeric_limits<double>::infinity()); }
  // Boltzmann weight exp(-E); E = +inf is an excluded term.
  static constexpr LogWeight from_energy(double energy) { return LogWeight(-energy); }

  constexpr double log() const { return log_; }
  double value() const { return std::exp(log_); }
  constexpr bool is_zero() const { return log_ == -std::numeric_limits<double>::infinity(); }
  // Energy view: -log w (+inf for zero).
  constexpr double energy() const { return -log_; }

  friend LogWeight operator*(LogWeight a, LogWeight b) {
    if (a.is_zero() || b.is_zero()) return zero();
    return LogWeight(a.log_ + b.log_);
  }
  friend LogWeight operator/(LogWeight a, LogWeight b) { return LogWeight(a.log_ - b.log_); }
  friend LogWeight operator+(LogWeight a, LogWeight b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    const double hi = a.log_ > b.log_ ? a.log_ : b.log_;
    const double lo = a.log_ > b.log_ ? b.log_ : a.log_;
    return LogWeight(hi + std::log1p(std::exp(lo - hi)));
  }
  LogWeight& operator+=(LogWeight o) { return *this = *this + o; }
  LogWeight& operator*=(LogWeight o) { return *this = *this * o; }

 private:
  constexpr explicit LogWeight(double v) : log_(v) {}
  double log_ = -std::numeric_limits<double>::infinity();
};

}  // namespace rstn
