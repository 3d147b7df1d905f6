#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "alphari/core_math.hpp"
#include "alphari/ext_real.hpp"
#include "alphari/information.hpp"
#include "alphari/types.hpp"

namespace alphari {

enum class TieRule { Uniform, FirstIndex, SingleRequired };
enum class StatewiseBranch { Case1, Case2a, Case2b };

inline const char* to_string(TieRule t) {
  switch (t) {
    case TieRule::Uniform: return "uniform";
    case TieRule::FirstIndex: return "first-index";
    case TieRule::SingleRequired: return "single-required";
  }
  return "?";
}

inline const char* to_string(StatewiseBranch b) {
  switch (b) {
    case StatewiseBranch::Case1: return "case1";
    case StatewiseBranch::Case2a: return "case2a";
    case StatewiseBranch::Case2b: return "case2b";
  }
  return "?";
}

// Solution of the per-state problem at a fixed reference distribution.
// lambda is the active multiplier; nu = lambda + 2 kappa / (1 + alpha) is
// the payoff cutoff, defined away from alpha = -1. The two candidate
// multipliers are kept as diagnostics.
struct StatewiseSolution {
  std::vector<double> row;
  double lambda = 0.0;
  std::optional<double> nu;
  StatewiseBranch branch = StatewiseBranch::Case1;
  ActionSet maximizer_set;      // nonempty only in Case2b
  double residual_mass = 0.0;   // mass assigned outside S_m in Case2b
  double lambda_bar = 0.0;
  std::optional<double> lambda_bar_zero;
};

namespace detail {

// LHS of the normalization equation sum_{a in S_m} m(a) exp_q((u - lambda)/kappa).
inline double normalization_lhs(double lambda, const ActionSet& sm,
                                const std::vector<double>& mass,
                                const std::vector<double>& util, double q,
                                double kappa) {
  double s = 0.0;
  for (int a : sm) {
    const ExtReal e = q_exp((util[a] - lambda) / kappa, q);
    if (e.is_pos_inf()) return std::numeric_limits<double>::infinity();
    s += mass[a] * e.value();
  }
  return s;
}

}  // namespace detail

// Unique root of the normalization equation. The map is strictly decreasing
// in lambda, so bracketed bisection is globally safe. At alpha = -1 the
// multiplier convention lambda = kappa log sum_b m(b) e^{u(b)/kappa} makes
// the equation hold verbatim at q = 1, and is evaluated in closed form.
inline double solve_lambda_bar(int theta, const ReferenceDist& m, const Problem& problem) {
  const ActionSet sm = m.support();
  if (sm.empty()) throw std::invalid_argument("solve_lambda_bar: empty support");
  const double q = problem.params.q;
  const double kappa = problem.params.kappa;
  const std::vector<double>& util = problem.utility[theta];

  double umax = -std::numeric_limits<double>::infinity();
  double uabs = 0.0;
  for (int a : sm) umax = std::max(umax, util[a]);
  for (double u : util) uabs = std::max(uabs, std::abs(u));

  if (q == 1.0) {
    // log-sum-exp, shifted for stability
    double s = 0.0;
    for (int a : sm) s += m.mass[a] * std::exp((util[a] - umax) / kappa);
    return umax + kappa * std::log(s);
  }

  auto lhs = [&](double lam) {
    return detail::normalization_lhs(lam, sm, m.mass, util, q, kappa);
  };

  double lo, hi;
  if (q > 1.0) {
    // LHS diverges as lambda decreases to umax - 2 kappa / (1 + alpha).
    const double lam_min = umax - 2.0 * kappa / (1.0 + problem.params.alpha);
    double eps = 1e-12 * (1.0 + uabs);
    lo = lam_min + eps;
    int guard = 0;
    while (lhs(lo) < 1.0) {
      // small m(argmax) pushes the root closer to the pole; tighten eps
      eps *= 0.0625;
      lo = lam_min + eps;
      if (++guard > 300) throw std::runtime_error("solve_lambda_bar: bracket failure (left)");
    }
    double step = 1.0 + uabs;
    hi = std::max(lo, umax);
    while (lhs(hi) >= 1.0) {
      hi += step;
      step *= 2.0;
      if (!std::isfinite(hi)) throw std::runtime_error("solve_lambda_bar: bracket failure (right)");
    }
  } else {
    // q < 1: LHS grows without bound as lambda -> -inf and clamps to zero at
    // lambda >= umax + kappa / (1 - q).
    hi = umax + kappa / (1.0 - q);
    lo = umax;
    double step = 1.0 + uabs;
    while (lhs(lo) < 1.0) {
      lo -= step;
      step *= 2.0;
      if (!std::isfinite(lo)) throw std::runtime_error("solve_lambda_bar: bracket failure (left)");
    }
  }

  for (int iter = 0; iter < 400; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (hi - lo <= 1e-13 * (1.0 + std::abs(mid))) break;
    if (lhs(mid) >= 1.0) lo = mid;
    else hi = mid;
  }
  const double root = 0.5 * (lo + hi);
  if (std::abs(lhs(root) - 1.0) > 1e-9)
    throw std::runtime_error("solve_lambda_bar: residual check failed");
  return root;
}

// Cutoff candidate for the zero-m branch: max_{a not in S_m} u(a, theta)
// minus 2 kappa / (1 + alpha). Defined for alpha > -1 with S_m a strict
// subset of A.
inline std::optional<double> lambda_bar_zero(int theta, const ReferenceDist& m,
                                             const Problem& problem) {
  if (!(problem.params.alpha > -1.0)) return std::nullopt;
  const ActionSet sm = m.support();
  if (sm.size() == problem.num_actions()) return std::nullopt;
  const std::vector<double>& util = problem.utility[theta];
  double umax_out = -std::numeric_limits<double>::infinity();
  std::size_t j = 0;
  for (int a = 0; a < static_cast<int>(problem.num_actions()); ++a) {
    if (j < sm.size() && sm[j] == a) {
      ++j;
      continue;
    }
    umax_out = std::max(umax_out, util[a]);
  }
  return umax_out - 2.0 * problem.params.kappa / (1.0 + problem.params.alpha);
}

// Solve the per-state problem at reference m, selecting the branch of the
// q-exponential characterization. Rows carry exact zeros: the positive-part
// clamp and m(a) = 0 produce them without epsilon thresholds.
inline StatewiseSolution statewise_solve(int theta, const ReferenceDist& m,
                                         const Problem& problem,
                                         TieRule tie_rule = TieRule::Uniform) {
  const double alpha = problem.params.alpha;
  const double q = problem.params.q;
  const double kappa = problem.params.kappa;
  const std::vector<double>& util = problem.utility[theta];
  const std::size_t na = problem.num_actions();
  const ActionSet sm = m.support();
  const bool full = sm.size() == na;

  StatewiseSolution out;
  out.row.assign(na, 0.0);
  out.lambda_bar = solve_lambda_bar(theta, m, problem);
  out.lambda_bar_zero = lambda_bar_zero(theta, m, problem);

  auto fill_row = [&](double lam) {
    for (int a : sm) {
      const ExtReal e = q_exp((util[a] - lam) / kappa, q);
      out.row[a] = conv_mul(m.mass[a], e.value());
    }
  };

  if (alpha <= -1.0 || full) {
    out.branch = StatewiseBranch::Case1;
    out.lambda = out.lambda_bar;
    fill_row(out.lambda);
  } else if (out.lambda_bar >= *out.lambda_bar_zero) {
    out.branch = StatewiseBranch::Case2a;
    out.lambda = out.lambda_bar;
    fill_row(out.lambda);
  } else {
    out.branch = StatewiseBranch::Case2b;
    out.lambda = *out.lambda_bar_zero;
    fill_row(out.lambda);
    double on_sm = 0.0;
    for (int a : sm) on_sm += out.row[a];
    out.residual_mass = 1.0 - on_sm;
    // residual goes to the best zero-m actions
    double umax_out = -std::numeric_limits<double>::infinity();
    std::size_t j = 0;
    for (int a = 0; a < static_cast<int>(na); ++a) {
      if (j < sm.size() && sm[j] == a) {
        ++j;
        continue;
      }
      umax_out = std::max(umax_out, util[a]);
    }
    j = 0;
    for (int a = 0; a < static_cast<int>(na); ++a) {
      if (j < sm.size() && sm[j] == a) {
        ++j;
        continue;
      }
      if (util[a] == umax_out) out.maximizer_set.push_back(a);
    }
    switch (tie_rule) {
      case TieRule::Uniform:
        for (int a : out.maximizer_set)
          out.row[a] = out.residual_mass / static_cast<double>(out.maximizer_set.size());
        break;
      case TieRule::FirstIndex:
        out.row[out.maximizer_set.front()] = out.residual_mass;
        break;
      case TieRule::SingleRequired:
        if (out.maximizer_set.size() != 1)
          throw std::runtime_error("statewise_solve: tie among zero-m maximizers");
        out.row[out.maximizer_set.front()] = out.residual_mass;
        break;
    }
  }

  if (out.branch != StatewiseBranch::Case2b) {
    double s = 0.0;
    for (double v : out.row) s += v;
    for (double& v : out.row) v /= s;
  }
  if (alpha != -1.0) out.nu = out.lambda + 2.0 * kappa / (1.0 + alpha);
  return out;
}

// Statewise objective Phi_theta(p, m): expected payoff minus kappa times the
// divergence from p to m. -inf when the divergence is infinite.
inline ExtReal statewise_objective(const std::vector<double>& row,
                                   const ReferenceDist& m, int theta,
                                   const Problem& problem) {
  const ExtReal d = alpha_divergence(row, m.mass, problem.params.alpha);
  if (d.is_pos_inf()) return ExtReal::neg_inf();
  double payoff = 0.0;
  for (std::size_t a = 0; a < row.size(); ++a)
    payoff += row[a] * problem.utility[theta][a];
  return ExtReal(payoff - problem.params.kappa * d.value());
}

}  // namespace alphari
