#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "alphari/information.hpp"
#include "alphari/statewise.hpp"
#include "alphari/types.hpp"

namespace alphari {

// Certificate for the necessary-and-sufficient optimality conditions: every
// statewise row must re-solve to itself at m = m_alpha^P, and the
// prior-weighted fused values must attain a common extremum on supp m
// (a maximum for alpha <= 1, a minimum for alpha > 1).
struct OptimalityReport {
  bool overall = false;
  std::vector<bool> statewise_ok;
  std::vector<ExtReal> condition2_values;  // one per action
  double extremum = 0.0;
  bool extremum_is_max = true;  // max for alpha <= 1, min for alpha > 1
  double support_gap = std::numeric_limits<double>::infinity();
  double tolerance = 1e-7;
  std::vector<double> lambdas;  // re-derived multipliers, one per state
  std::string note;             // e.g. the alpha = 1 infinite-entry convention
};

enum class SupportRegime { Cutoff, FullSupport, CommonSupport };

inline const char* to_string(SupportRegime r) {
  switch (r) {
    case SupportRegime::Cutoff: return "cutoff";
    case SupportRegime::FullSupport: return "full-support";
    case SupportRegime::CommonSupport: return "common-support";
  }
  return "?";
}

inline SupportRegime regime_of(double alpha) {
  if (alpha < -1.0) return SupportRegime::Cutoff;
  if (alpha < 1.0) return SupportRegime::FullSupport;
  return SupportRegime::CommonSupport;
}

// Support classification of a candidate optimum.
struct SupportReport {
  ActionSet s_m;                         // supp of the alpha-integration
  std::vector<ActionSet> s_theta;        // per-state supports
  ActionSet consideration_set;           // union of s_theta
  ActionSet common_support;              // intersection of s_theta
  SupportRegime regime = SupportRegime::FullSupport;
};

inline SupportReport support_report(const ChoiceRule& rule, const Problem& problem) {
  SupportReport rep;
  rep.regime = regime_of(problem.params.alpha);
  const SupportSets sets = support_sets(rule);
  rep.consideration_set = sets.union_support;
  rep.common_support = sets.common_support;
  for (const auto& row : rule.rows) {
    ActionSet s;
    for (int a = 0; a < static_cast<int>(row.size()); ++a)
      if (row[a] > 0.0) s.push_back(a);
    rep.s_theta.push_back(std::move(s));
  }
  const AlphaIntegration integ =
      alpha_integration(rule, problem.prior, problem.params.alpha);
  if (!integ.infinite) rep.s_m = integ.dist.support();
  return rep;
}

// First-order optimality certificate. Multipliers are re-derived from scratch so the
// check is independent of whatever solver produced P.
inline OptimalityReport check_optimality(const ChoiceRule& rule, const Problem& problem,
                                         double tolerance = 1e-7) {
  const double alpha = problem.params.alpha;
  const double kappa = problem.params.kappa;
  const std::size_t ns = problem.num_states();
  const std::size_t na = problem.num_actions();

  OptimalityReport rep;
  rep.tolerance = tolerance;
  rep.extremum_is_max = alpha <= 1.0;

  const AlphaIntegration integ = alpha_integration(rule, problem.prior, alpha);
  if (integ.infinite) {
    rep.note = "infinite alpha-information: empty common support";
    rep.statewise_ok.assign(ns, false);
    return rep;
  }
  const ReferenceDist& m = integ.dist;
  const ActionSet sm = m.support();
  const bool full = sm.size() == na;

  // multipliers per the branch characterization
  rep.lambdas.resize(ns);
  for (std::size_t t = 0; t < ns; ++t) {
    const double lb = solve_lambda_bar(static_cast<int>(t), m, problem);
    if (alpha <= -1.0 || full) {
      rep.lambdas[t] = lb;
    } else {
      const double lb0 = *lambda_bar_zero(static_cast<int>(t), m, problem);
      rep.lambdas[t] = std::max(lb, lb0);
    }
  }

  // condition 2 values
  rep.condition2_values.resize(na);
  bool flagged_inf = false;
  for (std::size_t b = 0; b < na; ++b) {
    double acc = 0.0;
    bool neg_inf = false;
    for (std::size_t t = 0; t < ns; ++t) {
      const ExtReal v =
          fused_h_qexp((problem.utility[t][b] - rep.lambdas[t]) / kappa, alpha);
      if (alpha == 1.0 && v.is_pos_inf()) {
        // extended convention: an unbounded log-scale entry ranks lowest in
        // the max test
        neg_inf = true;
        flagged_inf = true;
        break;
      }
      acc += problem.prior[t] * v.value();
    }
    rep.condition2_values[b] = neg_inf ? ExtReal::neg_inf() : ExtReal(acc);
  }
  if (flagged_inf)
    rep.note = "alpha=1: infinite fused entries ranked as -inf in the max test";

  double ext = rep.extremum_is_max ? -std::numeric_limits<double>::infinity()
                                   : std::numeric_limits<double>::infinity();
  for (std::size_t b = 0; b < na; ++b) {
    const double v = rep.condition2_values[b].value();
    if (rep.extremum_is_max) {
      // +inf entries (possible off supp m for -1 < alpha < 1 at a Case2b
      // boundary) legitimately beat the support and fail the check
      ext = std::max(ext, v);
    } else {
      if (!rep.condition2_values[b].is_pos_inf()) ext = std::min(ext, v);
    }
  }
  rep.extremum = ext;

  rep.support_gap = 0.0;
  for (int a : sm) {
    const double v = rep.condition2_values[a].value();
    const double gap = std::isfinite(v) && std::isfinite(ext)
                           ? std::abs(v - ext)
                           : std::numeric_limits<double>::infinity();
    rep.support_gap = std::max(rep.support_gap, gap);
  }
  const bool cond2_ok = rep.support_gap <= tolerance;

  // condition 1: each row re-solves to itself (up to Case2b tie reallocation)
  rep.statewise_ok.assign(ns, true);
  for (std::size_t t = 0; t < ns; ++t) {
    StatewiseSolution ss;
    try {
      ss = statewise_solve(static_cast<int>(t), m, problem);
    } catch (const std::exception&) {
      rep.statewise_ok[t] = false;
      continue;
    }
    bool ok = true;
    if (ss.branch == StatewiseBranch::Case2b) {
      double residual = 0.0;
      std::size_t j = 0;
      for (std::size_t a = 0; a < na; ++a) {
        const bool in_sm = j < sm.size() && sm[j] == static_cast<int>(a);
        if (in_sm) ++j;
        const bool in_max =
            std::binary_search(ss.maximizer_set.begin(), ss.maximizer_set.end(),
                               static_cast<int>(a));
        if (in_sm) {
          if (std::abs(rule.rows[t][a] - ss.row[a]) > tolerance) ok = false;
        } else if (in_max) {
          residual += rule.rows[t][a];
        } else {
          if (std::abs(rule.rows[t][a]) > tolerance) ok = false;
        }
      }
      if (std::abs(residual - ss.residual_mass) > tolerance) ok = false;
    } else {
      for (std::size_t a = 0; a < na; ++a)
        if (std::abs(rule.rows[t][a] - ss.row[a]) > tolerance) ok = false;
    }
    rep.statewise_ok[t] = ok;
  }

  bool all_rows = true;
  for (bool b : rep.statewise_ok) all_rows = all_rows && b;
  rep.overall = cond2_ok && all_rows;
  return rep;
}

// Divergence kernel of the Csiszar representation, normalized at 1.
inline double varphi_alpha(double t, double alpha) {
  if (!(t > 0.0)) throw std::domain_error("varphi_alpha: t must be positive");
  if (alpha == -1.0) return t * std::log(t) - t + 1.0;
  if (alpha == 1.0) return -std::log(t) + t - 1.0;
  const double c = 4.0 / (1.0 - alpha * alpha);
  return c * (1.0 - std::pow(t, (1.0 - alpha) / 2.0) + 0.5 * (1.0 - alpha) * (t - 1.0));
}

// lim varphi_alpha(t)/t is infinite iff alpha <= -1.
inline bool is_cofinite(double alpha) { return alpha <= -1.0; }

namespace detail {

inline void simplex_grid_rec(int na, int left, int pos, std::vector<int>& cur, int k,
                             std::vector<std::vector<double>>& out) {
  if (pos == na - 1) {
    cur[pos] = left;
    std::vector<double> row(na);
    for (int a = 0; a < na; ++a) row[a] = static_cast<double>(cur[a]) / k;
    out.push_back(std::move(row));
    return;
  }
  for (int j = 0; j <= left; ++j) {
    cur[pos] = j;
    simplex_grid_rec(na, left - j, pos + 1, cur, k, out);
  }
}

inline std::vector<std::vector<double>> simplex_grid(int na, int k) {
  std::vector<std::vector<double>> out;
  std::vector<int> cur(na);
  simplex_grid_rec(na, k, 0, cur, k, out);
  return out;
}

// Exhaustive objective evaluation over per-state candidate rows, with the
// closed-form information recomputed from lightweight per-row precomputations.
struct GridSearch {
  const Problem& pr;
  double alpha, kappa;
  std::vector<std::vector<std::vector<double>>> rows;  // [state][i] candidate row
  // precomputed per candidate row:
  std::vector<std::vector<double>> payoff;               // pi * <row, u>
  std::vector<std::vector<std::vector<double>>> kernel;  // pi * h-kernel per action
  std::vector<std::vector<std::uint32_t>> mask;          // positive-entry bits

  explicit GridSearch(const Problem& p) : pr(p), alpha(p.params.alpha), kappa(p.params.kappa) {}

  void set_rows(std::size_t state, std::vector<std::vector<double>> cand) {
    rows.resize(pr.num_states());
    payoff.resize(pr.num_states());
    kernel.resize(pr.num_states());
    mask.resize(pr.num_states());
    const double pi = pr.prior[state];
    const std::size_t na = pr.num_actions();
    auto& pay = payoff[state];
    auto& ker = kernel[state];
    auto& msk = mask[state];
    pay.clear();
    ker.clear();
    msk.clear();
    for (const auto& r : cand) {
      double po = 0.0;
      std::uint32_t mk = 0;
      std::vector<double> kr(na, 0.0);
      for (std::size_t a = 0; a < na; ++a) {
        po += r[a] * pr.utility[state][a];
        if (r[a] > 0.0) {
          mk |= 1u << a;
          if (alpha == -1.0) kr[a] = pi * r[a] * std::log(r[a]);
          else if (alpha == 1.0) kr[a] = pi * std::log(r[a]);
          else kr[a] = pi * std::pow(r[a], (1.0 - alpha) / 2.0);
        }
      }
      pay.push_back(pi * po);
      ker.push_back(std::move(kr));
      msk.push_back(mk);
    }
    rows[state] = std::move(cand);
  }

  // objective at the candidate tuple; -inf when information is infinite
  double eval(const std::vector<std::size_t>& idx) const {
    const std::size_t ns = pr.num_states();
    const std::size_t na = pr.num_actions();
    double pay = 0.0;
    std::uint32_t un = 0, co = ~0u;
    for (std::size_t t = 0; t < ns; ++t) {
      pay += payoff[t][idx[t]];
      un |= mask[t][idx[t]];
      co &= mask[t][idx[t]];
    }
    double info;
    if (alpha == -1.0) {
      double s = 0.0;
      for (std::size_t t = 0; t < ns; ++t)
        for (std::size_t a = 0; a < na; ++a) s += kernel[t][idx[t]][a];
      for (std::size_t a = 0; a < na; ++a) {
        if (!(un & (1u << a))) continue;
        double ma = 0.0;
        for (std::size_t t = 0; t < ns; ++t) ma += pr.prior[t] * rows[t][idx[t]][a];
        s -= ma * std::log(ma);
      }
      info = s;
    } else if (alpha == 1.0) {
      if (co == 0) return -std::numeric_limits<double>::infinity();
      double massv = 0.0;
      for (std::size_t a = 0; a < na; ++a) {
        if (!(co & (1u << a))) continue;
        double lg = 0.0;
        for (std::size_t t = 0; t < ns; ++t) lg += kernel[t][idx[t]][a];
        massv += std::exp(lg);
      }
      info = -std::log(massv);
    } else {
      const std::uint32_t act = alpha < 1.0 ? un : co;
      if (act == 0) return -std::numeric_limits<double>::infinity();
      double z = 0.0;
      for (std::size_t a = 0; a < na; ++a) {
        if (!(act & (1u << a))) continue;
        double s = 0.0;
        for (std::size_t t = 0; t < ns; ++t) s += kernel[t][idx[t]][a];
        z += std::pow(s, 2.0 / (1.0 - alpha));
      }
      info = 4.0 / (1.0 - alpha * alpha) * (1.0 - std::pow(z, (1.0 - alpha) / 2.0));
    }
    return pay - kappa * info;
  }

  std::pair<ChoiceRule, double> run() const {
    const std::size_t ns = pr.num_states();
    std::vector<std::size_t> idx(ns, 0), best_idx(ns, 0);
    double best = -std::numeric_limits<double>::infinity();
    while (true) {
      const double v = eval(idx);
      if (v > best) {
        best = v;
        best_idx = idx;
      }
      std::size_t t = 0;
      while (t < ns) {
        if (++idx[t] < rows[t].size()) break;
        idx[t] = 0;
        ++t;
      }
      if (t == ns) break;
    }
    ChoiceRule rule;
    for (std::size_t t = 0; t < ns; ++t) rule.rows.push_back(rows[t][best_idx[t]]);
    return {rule, best};
  }
};

}  // namespace detail

// Exhaustive simplex-grid search, usable as an independent oracle on small
// instances.
inline std::pair<ChoiceRule, double> brute_force_solve(const Problem& problem,
                                                       double grid_step) {
  if (problem.num_actions() > 3 || problem.num_states() > 3)
    throw std::invalid_argument("brute_force_solve: instance too large");
  const int k = static_cast<int>(std::lround(1.0 / grid_step));
  auto grid = detail::simplex_grid(static_cast<int>(problem.num_actions()), k);
  detail::GridSearch gs(problem);
  for (std::size_t t = 0; t < problem.num_states(); ++t) gs.set_rows(t, grid);
  return gs.run();
}

// Fine grid restricted to an L-inf ball around an incumbent rule.
inline std::pair<ChoiceRule, double> brute_force_refine(const Problem& problem,
                                                        const ChoiceRule& incumbent,
                                                        double radius,
                                                        double fine_step) {
  if (problem.num_actions() > 3 || problem.num_states() > 3)
    throw std::invalid_argument("brute_force_refine: instance too large");
  const int k = static_cast<int>(std::lround(1.0 / fine_step));
  auto grid = detail::simplex_grid(static_cast<int>(problem.num_actions()), k);
  detail::GridSearch gs(problem);
  for (std::size_t t = 0; t < problem.num_states(); ++t) {
    std::vector<std::vector<double>> cand;
    for (const auto& r : grid) {
      bool near = true;
      for (std::size_t a = 0; a < r.size(); ++a)
        if (std::abs(r[a] - incumbent.rows[t][a]) > radius + 1e-12) near = false;
      if (near) cand.push_back(r);
    }
    gs.set_rows(t, std::move(cand));
  }
  return gs.run();
}

}  // namespace alphari
