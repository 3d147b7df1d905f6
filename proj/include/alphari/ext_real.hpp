#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

namespace alphari {

// Extended real value. Finite doubles plus +inf (and -inf where a
// computation produces it, e.g. log-scale objectives). Arithmetic helpers
// below implement the conventions 0*inf = 0, 1/0 = +inf, -log 0 = +inf.
class ExtReal {
 public:
  constexpr ExtReal() = default;
  constexpr ExtReal(double v) : v_(v) {}

  static constexpr ExtReal pos_inf() {
    return ExtReal(std::numeric_limits<double>::infinity());
  }
  static constexpr ExtReal neg_inf() {
    return ExtReal(-std::numeric_limits<double>::infinity());
  }

  bool finite() const { return std::isfinite(v_); }
  bool is_pos_inf() const { return std::isinf(v_) && v_ > 0; }
  bool is_neg_inf() const { return std::isinf(v_) && v_ < 0; }
  double value() const { return v_; }

  friend bool operator==(ExtReal a, ExtReal b) { return a.v_ == b.v_; }
  friend bool operator<(ExtReal a, ExtReal b) { return a.v_ < b.v_; }
  friend bool operator<=(ExtReal a, ExtReal b) { return a.v_ <= b.v_; }
  friend bool operator>(ExtReal a, ExtReal b) { return a.v_ > b.v_; }
  friend bool operator>=(ExtReal a, ExtReal b) { return a.v_ >= b.v_; }

  // 0 * inf = 0
  friend ExtReal operator*(ExtReal a, ExtReal b) {
    if (a.v_ == 0.0 || b.v_ == 0.0) return ExtReal(0.0);
    return ExtReal(a.v_ * b.v_);
  }
  friend ExtReal operator+(ExtReal a, ExtReal b) { return ExtReal(a.v_ + b.v_); }
  friend ExtReal operator-(ExtReal a, ExtReal b) { return ExtReal(a.v_ - b.v_); }
  friend ExtReal operator-(ExtReal a) { return ExtReal(-a.v_); }

 private:
  double v_ = 0.0;
};

inline double positive_part(double x) { return x > 0.0 ? x : 0.0; }

// Product with the 0 * inf = 0 convention.
inline double conv_mul(double a, double b) {
  if (a == 0.0 || b == 0.0) return 0.0;
  return a * b;
}

// x^e for x >= 0 with 0^neg = +inf (via 1/0 = +inf) and 0^0 = 1.
inline double conv_pow(double x, double e) {
  if (x > 0.0) return std::pow(x, e);
  if (x == 0.0) {
    if (e > 0.0) return 0.0;
    if (e == 0.0) return 1.0;
    return std::numeric_limits<double>::infinity();
  }
  throw std::domain_error("conv_pow: negative base");
}

// -log x with -log 0 = +inf.
inline double conv_neglog(double x) {
  if (x == 0.0) return std::numeric_limits<double>::infinity();
  return -std::log(x);
}

}  // namespace alphari
