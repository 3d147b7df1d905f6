#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "alphari/ext_real.hpp"

namespace alphari {

// Parameter bundle for one alpha-divergence cost model. q is the deformation
// index of the q-exponential tied to alpha through q = (3 + alpha) / 2, and
// kappa > 0 is the unit cost of information.
struct AlphaParams {
  double alpha;
  double q;
  double kappa;

  AlphaParams(double alpha_, double kappa_)
      : alpha(alpha_), q((3.0 + alpha_) / 2.0), kappa(kappa_) {
    if (!(kappa_ > 0.0)) throw std::invalid_argument("AlphaParams: kappa must be > 0");
    if (!std::isfinite(alpha_)) throw std::invalid_argument("AlphaParams: alpha must be finite");
  }
};

// Deformed exponential exp_q(x) = [1 + (1-q)x]_+^{1/(1-q)}, exp(x) at q = 1.
// Total into the extended reals: for q > 1 a nonpositive bracket gives +inf,
// for q < 1 it gives 0. The bracket is compared against zero exactly; support
// logic downstream relies on exact zeros.
inline ExtReal q_exp(double x, double q) {
  if (q == 1.0) return ExtReal(std::exp(x));
  const double base = 1.0 + (1.0 - q) * x;
  if (base <= 0.0) {
    if (q > 1.0) return ExtReal::pos_inf();
    return ExtReal(0.0);
  }
  return ExtReal(std::pow(base, 1.0 / (1.0 - q)));
}

// Power-mean kernel h_alpha(t) = t^{(1-alpha)/2}, log t at alpha = 1.
// For alpha >= 1 a zero argument is a domain error unless the caller opts
// into the extended result (-inf at alpha = 1, +inf above).
inline ExtReal h_alpha(ExtReal t, double alpha, bool extended = false) {
  if (t < ExtReal(0.0)) throw std::domain_error("h_alpha: negative argument");
  const double tv = t.value();
  if (alpha == 1.0) {
    if (tv == 0.0) {
      if (!extended) throw std::domain_error("h_alpha: log of zero at alpha = 1");
      return ExtReal::neg_inf();
    }
    return ExtReal(std::log(tv));
  }
  const double e = (1.0 - alpha) / 2.0;
  if (tv == 0.0 && e < 0.0) {
    if (!extended) throw std::domain_error("h_alpha: zero argument with alpha > 1");
    return ExtReal::pos_inf();
  }
  if (t.is_pos_inf()) {
    // t^e: +inf for e > 0, 0 for e < 0.
    return e > 0.0 ? ExtReal::pos_inf() : ExtReal(0.0);
  }
  return ExtReal(conv_pow(tv, e));
}

// Inverse of h_alpha on its range.
inline ExtReal h_alpha_inv(ExtReal s, double alpha) {
  if (alpha == 1.0) return ExtReal(std::exp(s.value()));
  const double sv = s.value();
  if (sv < 0.0) throw std::domain_error("h_alpha_inv: argument outside range");
  const double e = 2.0 / (1.0 - alpha);
  if (s.is_pos_inf()) return e > 0.0 ? ExtReal::pos_inf() : ExtReal(0.0);
  return ExtReal(conv_pow(sv, e));
}

// h_alpha(exp_{q_alpha}(x)) evaluated in one algebraic step:
// [1 - (1+alpha)x/2]_+^{-(1-alpha)/(1+alpha)} away from alpha = +-1.
// The fused form resolves the inf*0-shaped composites at branch boundaries
// (a clamped q-exponential times a vanishing kernel power) exactly.
inline ExtReal fused_h_qexp(double x, double alpha) {
  if (alpha == -1.0) return ExtReal(std::exp(x));
  if (alpha == 1.0) return ExtReal(conv_neglog(positive_part(1.0 - x)));
  const double base = 1.0 - 0.5 * (1.0 + alpha) * x;
  const double e = -(1.0 - alpha) / (1.0 + alpha);
  if (base <= 0.0) {
    if (e > 0.0) return ExtReal(0.0);
    return ExtReal::pos_inf();
  }
  return ExtReal(std::pow(base, e));
}

// Weighted power mean M_alpha[x] = h^{-1}[sum_i prior_i h(x_i)]:
// arithmetic mean at alpha = -1, geometric mean at alpha = 1, and the
// max / min in the limits alpha -> -inf / +inf. For alpha < 1 the
// definition extends to nonnegative vectors; at alpha >= 1 zero entries
// are a domain error.
inline ExtReal alpha_mean(const std::vector<double>& x,
                          const std::vector<double>& prior, double alpha) {
  if (x.size() != prior.size())
    throw std::invalid_argument("alpha_mean: size mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] < 0.0) throw std::domain_error("alpha_mean: negative entry");
    if (x[i] == 0.0 && alpha >= 1.0)
      throw std::domain_error("alpha_mean: zero entry with alpha >= 1");
    acc += prior[i] * h_alpha(ExtReal(x[i]), alpha).value();
  }
  return h_alpha_inv(ExtReal(acc), alpha);
}

}  // namespace alphari
