#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

#include "alphari/core_math.hpp"
#include "alphari/ext_real.hpp"
#include "alphari/types.hpp"

namespace alphari {

// Alpha-divergence D_alpha[p : m]. KL(p||m) at alpha = -1, KL(m||p) at
// alpha = 1, and (4 / (1 - alpha^2)) (1 - sum_a p^{(1-alpha)/2} m^{(1+alpha)/2})
// elsewhere, with the 0 * inf = 0 and 1/0 = +inf conventions per term.
inline ExtReal alpha_divergence(const std::vector<double>& p,
                                const std::vector<double>& m, double alpha) {
  if (p.size() != m.size()) throw std::invalid_argument("alpha_divergence: size mismatch");
  const double inf = std::numeric_limits<double>::infinity();
  if (alpha == -1.0) {
    double s = 0.0;
    for (std::size_t a = 0; a < p.size(); ++a) {
      if (p[a] == 0.0) continue;
      if (m[a] == 0.0) return ExtReal::pos_inf();
      s += p[a] * std::log(p[a] / m[a]);
    }
    return ExtReal(s);
  }
  if (alpha == 1.0) {
    double s = 0.0;
    for (std::size_t a = 0; a < p.size(); ++a) {
      if (m[a] == 0.0) continue;
      if (p[a] == 0.0) return ExtReal::pos_inf();
      s += m[a] * std::log(m[a] / p[a]);
    }
    return ExtReal(s);
  }
  const double ep = (1.0 - alpha) / 2.0;
  const double em = (1.0 + alpha) / 2.0;
  double mass = 0.0;
  for (std::size_t a = 0; a < p.size(); ++a) {
    const double term = conv_mul(conv_pow(p[a], ep), conv_pow(m[a], em));
    mass += term;
    if (mass == inf) break;
  }
  const double coeff = 4.0 / (1.0 - alpha * alpha);
  if (mass == inf) return ExtReal::pos_inf();  // coeff < 0 whenever mass can diverge
  return ExtReal(coeff * (1.0 - mass));
}

// Result of the inner minimization over reference distributions. When
// alpha >= 1 and the common support is empty the information is +inf and
// no minimizer exists; the marker keeps that case out of arithmetic paths.
struct AlphaIntegration {
  bool infinite = false;
  ReferenceDist dist;       // valid iff !infinite
  double normalizer = 0.0;  // Z_alpha(P), valid iff !infinite
};

// Unique minimizer m_alpha^P of the weighted divergence: the normalized
// alpha-mean of the choice probabilities over U(P) (alpha < 1) or C(P)
// (alpha >= 1).
inline AlphaIntegration alpha_integration(const ChoiceRule& rule,
                                          const std::vector<double>& prior,
                                          double alpha) {
  const std::size_t na = rule.num_actions();
  const SupportSets supp = support_sets(rule);
  const ActionSet& active = alpha < 1.0 ? supp.union_support : supp.common_support;
  AlphaIntegration out;
  if (active.empty()) {
    out.infinite = true;
    return out;
  }
  out.dist.mass.assign(na, 0.0);
  std::vector<double> column(rule.num_states());
  double z = 0.0;
  for (int a : active) {
    for (std::size_t t = 0; t < rule.num_states(); ++t) column[t] = rule.rows[t][a];
    const double ma = alpha_mean(column, prior, alpha).value();
    out.dist.mass[a] = ma;
    z += ma;
  }
  for (int a : active) out.dist.mass[a] /= z;
  out.normalizer = z;
  return out;
}

// Closed-form alpha-information I_alpha(P) = min_m sum_theta pi D_alpha[P_theta : m].
inline ExtReal alpha_information(const ChoiceRule& rule,
                                 const std::vector<double>& prior, double alpha) {
  const SupportSets supp = support_sets(rule);
  if (alpha == -1.0) {
    // Mutual information between state and action under the prior.
    std::vector<double> marginal(rule.num_actions(), 0.0);
    for (std::size_t t = 0; t < rule.num_states(); ++t)
      for (std::size_t a = 0; a < rule.num_actions(); ++a)
        marginal[a] += prior[t] * rule.rows[t][a];
    double s = 0.0;
    for (std::size_t t = 0; t < rule.num_states(); ++t)
      for (int a : supp.union_support)
        if (rule.rows[t][a] > 0.0)
          s += prior[t] * rule.rows[t][a] * std::log(rule.rows[t][a] / marginal[a]);
    return ExtReal(s);
  }
  if (alpha >= 1.0 && supp.common_support.empty()) return ExtReal::pos_inf();
  if (alpha == 1.0) {
    double mass = 0.0;
    for (int a : supp.common_support) {
      double lg = 0.0;
      for (std::size_t t = 0; t < rule.num_states(); ++t)
        lg += prior[t] * std::log(rule.rows[t][a]);
      mass += std::exp(lg);
    }
    return ExtReal(conv_neglog(mass));
  }
  const AlphaIntegration integ = alpha_integration(rule, prior, alpha);
  const double coeff = 4.0 / (1.0 - alpha * alpha);
  return ExtReal(coeff * (1.0 - std::pow(integ.normalizer, (1.0 - alpha) / 2.0)));
}

// Objective of the inner minimization at a fixed reference distribution.
inline ExtReal weighted_divergence(const ChoiceRule& rule, const ReferenceDist& m,
                                   const std::vector<double>& prior, double alpha) {
  double s = 0.0;
  for (std::size_t t = 0; t < rule.num_states(); ++t) {
    const ExtReal d = alpha_divergence(rule.rows[t], m.mass, alpha);
    if (d.is_pos_inf()) return ExtReal::pos_inf();
    s += prior[t] * d.value();
  }
  return ExtReal(s);
}

}  // namespace alphari
