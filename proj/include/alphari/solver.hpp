#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <mutex>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "alphari/information.hpp"
#include "alphari/statewise.hpp"
#include "alphari/types.hpp"
#include "alphari/verify.hpp"

namespace alphari {

struct SolveConfig {
  int max_iters = 100000;
  double objective_tol = 1e-10;
  double point_tol = 1e-9;
  int restarts = 8;
  TieRule tie_rule = TieRule::Uniform;
  std::uint64_t rng_seed = 0;
  double certificate_tol = 1e-7;

  void validate() const {
    if (max_iters < 1) throw std::invalid_argument("SolveConfig: max_iters must be >= 1");
    if (!(objective_tol > 0.0) || !(point_tol > 0.0))
      throw std::invalid_argument("SolveConfig: tolerances must be positive");
  }
};

struct Solution {
  ChoiceRule rule;
  ReferenceDist reference;
  std::vector<StatewiseSolution> statewise;
  double expected_payoff = 0.0;
  ExtReal information;
  double objective = 0.0;
  int iterations = 0;
  bool converged = false;
  OptimalityReport certificate;
  std::vector<double> objective_trace;
  TieRule tie_rule = TieRule::Uniform;
  std::uint64_t rng_seed = 0;
};

// Full objective: expected payoff minus kappa times the alpha-information.
inline ExtReal objective(const ChoiceRule& rule, const Problem& problem) {
  const ExtReal info = alpha_information(rule, problem.prior, problem.params.alpha);
  if (info.is_pos_inf()) return ExtReal::neg_inf();
  double payoff = 0.0;
  for (std::size_t t = 0; t < problem.num_states(); ++t)
    for (std::size_t a = 0; a < problem.num_actions(); ++a)
      payoff += problem.prior[t] * rule.rows[t][a] * problem.utility[t][a];
  return ExtReal(payoff - problem.params.kappa * info.value());
}

namespace detail {

struct Candidate {
  ChoiceRule rule;
  ReferenceDist reference;
  std::vector<StatewiseSolution> statewise;
  double objective = -std::numeric_limits<double>::infinity();
  int iterations = 0;
  bool stalled = false;  // hit the stopping rule (vs max_iters)
  std::vector<double> trace;
};

// Alternate the statewise maximization and the alpha-integration from a given
// starting reference distribution.
inline Candidate alternate(const Problem& problem, ReferenceDist m,
                           const SolveConfig& cfg) {
  const std::size_t ns = problem.num_states();
  Candidate cand;
  double prev_obj = -std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> prev_rows;
  std::vector<double> prev_mass;

  for (int it = 1; it <= cfg.max_iters; ++it) {
    cand.statewise.clear();
    cand.rule.rows.clear();
    for (std::size_t t = 0; t < ns; ++t) {
      cand.statewise.push_back(
          statewise_solve(static_cast<int>(t), m, problem, cfg.tie_rule));
      cand.rule.rows.push_back(cand.statewise.back().row);
    }
    const AlphaIntegration integ =
        alpha_integration(cand.rule, problem.prior, problem.params.alpha);
    if (integ.infinite)
      throw std::runtime_error("solve: alternation produced infinite information");
    ReferenceDist m_next = integ.dist;

    const double obj = objective(cand.rule, problem).value();
    cand.trace.push_back(obj);
    cand.iterations = it;

    double point_change = 0.0;
    if (!prev_rows.empty()) {
      for (std::size_t t = 0; t < ns; ++t)
        for (std::size_t a = 0; a < problem.num_actions(); ++a)
          point_change = std::max(point_change,
                                  std::abs(cand.rule.rows[t][a] - prev_rows[t][a]));
      for (std::size_t a = 0; a < problem.num_actions(); ++a)
        point_change =
            std::max(point_change, std::abs(m_next.mass[a] - prev_mass[a]));
    }
    const bool small_gain = std::isfinite(prev_obj) && obj - prev_obj < cfg.objective_tol;
    prev_obj = obj;
    prev_rows = cand.rule.rows;
    prev_mass = m_next.mass;

    if (it > 1 && small_gain && point_change < cfg.point_tol) {
      cand.stalled = true;
      m = std::move(m_next);
      break;
    }
    m = std::move(m_next);
  }

  cand.reference = std::move(m);
  cand.objective = prev_obj;
  return cand;
}

inline bool better(const std::optional<Candidate>& best, bool best_cert,
                   const Candidate& cand, bool cand_cert) {
  if (!best) return true;
  if (cand_cert != best_cert) return cand_cert;
  return cand.objective > best->objective;
}

}  // namespace detail

// Alternating maximization from the uniform reference distribution, with
// support pruning, random restarts, and (for alpha >= 1 on small action sets)
// exhaustive support enumeration when the certificate fails. Deterministic
// for a fixed seed.
inline Solution solve(const Problem& problem, const SolveConfig& config = {}) {
  config.validate();
  const std::size_t na = problem.num_actions();
  std::mt19937_64 rng(config.rng_seed);

  std::optional<detail::Candidate> best;
  bool best_certified = false;
  OptimalityReport best_report;
  int total_iters = 0;

  auto attempt = [&](ReferenceDist m0) {
    detail::Candidate cand;
    try {
      cand = detail::alternate(problem, std::move(m0), config);
    } catch (const std::exception&) {
      return;
    }
    total_iters += cand.iterations;
    OptimalityReport rep = check_optimality(cand.rule, problem, config.certificate_tol);

    // The alternation can approach a support boundary without reaching it;
    // prune vanishing reference mass and re-converge on the restricted
    // support before giving up on the certificate.
    static constexpr double kPruneThresholds[] = {1e-10, 1e-8, 1e-6};
    int prune_rounds = 0;
    while (!rep.overall && cand.stalled && prune_rounds < 3) {
      ReferenceDist pruned = cand.reference;
      bool changed = false;
      double total = 0.0;
      for (double& v : pruned.mass) {
        if (v > 0.0 && v < kPruneThresholds[prune_rounds]) {
          v = 0.0;
          changed = true;
        }
        total += v;
      }
      if (!changed) {
        ++prune_rounds;
        continue;
      }
      if (total <= 0.0) break;
      for (double& v : pruned.mass) v /= total;
      detail::Candidate next;
      try {
        next = detail::alternate(problem, std::move(pruned), config);
      } catch (const std::exception&) {
        break;
      }
      total_iters += next.iterations;
      OptimalityReport next_rep =
          check_optimality(next.rule, problem, config.certificate_tol);
      if (next.objective < cand.objective - 1e-9 && !next_rep.overall) break;
      cand = std::move(next);
      rep = std::move(next_rep);
      ++prune_rounds;
    }

    if (detail::better(best, best_certified, cand, rep.overall)) {
      best = std::move(cand);
      best_certified = rep.overall;
      best_report = std::move(rep);
    }
  };

  attempt(ReferenceDist{uniform_dist(na)});

  if (!best_certified) {
    for (int r = 0; r < config.restarts && !best_certified; ++r) {
      // random interior point of the simplex
      std::vector<double> mass(na);
      double s = 0.0;
      std::uniform_real_distribution<double> unif(0.05, 1.0);
      for (double& v : mass) {
        v = unif(rng);
        s += v;
      }
      for (double& v : mass) v /= s;
      attempt(ReferenceDist{std::move(mass)});
    }
  }
  if (!best_certified && problem.params.alpha >= 1.0 && na <= 10) {
    for (std::uint32_t bits = 1; bits < (1u << na); ++bits) {
      std::vector<double> mass(na, 0.0);
      int count = 0;
      for (std::size_t a = 0; a < na; ++a)
        if (bits & (1u << a)) ++count;
      for (std::size_t a = 0; a < na; ++a)
        if (bits & (1u << a)) mass[a] = 1.0 / count;
      attempt(ReferenceDist{std::move(mass)});
    }
  }

  if (!best) throw std::runtime_error("solve: no candidate produced");

  Solution sol;
  sol.rule = std::move(best->rule);
  sol.reference = std::move(best->reference);
  sol.statewise = std::move(best->statewise);
  sol.information = alpha_information(sol.rule, problem.prior, problem.params.alpha);
  sol.expected_payoff = 0.0;
  for (std::size_t t = 0; t < problem.num_states(); ++t)
    for (std::size_t a = 0; a < na; ++a)
      sol.expected_payoff += problem.prior[t] * sol.rule.rows[t][a] * problem.utility[t][a];
  sol.objective = sol.information.is_pos_inf()
                      ? -std::numeric_limits<double>::infinity()
                      : sol.expected_payoff - problem.params.kappa * sol.information.value();
  sol.iterations = total_iters;
  sol.converged = best_certified;
  sol.certificate = std::move(best_report);
  sol.objective_trace = std::move(best->trace);
  sol.tie_rule = config.tie_rule;
  sol.rng_seed = config.rng_seed;
  return sol;
}

struct SweepEntry {
  double alpha = 0.0;
  bool ok = false;
  std::string error;
  Solution solution;
  SupportReport support;
};

// Independent solve per alpha. Entries come back in input order; failures are
// recorded without aborting the sweep. max_threads <= 1 runs serially.
inline std::vector<SweepEntry> sweep(const Problem& problem,
                                     const std::vector<double>& alphas,
                                     const SolveConfig& config = {},
                                     unsigned max_threads = 1) {
  std::vector<SweepEntry> out(alphas.size());
  auto work = [&](std::size_t i) {
    out[i].alpha = alphas[i];
    try {
      const Problem p = problem.with_alpha(alphas[i]);
      out[i].solution = solve(p, config);
      out[i].support = support_report(out[i].solution.rule, p);
      out[i].ok = true;
    } catch (const std::exception& e) {
      out[i].ok = false;
      out[i].error = e.what();
    }
  };
  if (max_threads <= 1 || alphas.size() <= 1) {
    for (std::size_t i = 0; i < alphas.size(); ++i) work(i);
  } else {
    std::vector<std::thread> pool;
    std::size_t next = 0;
    const unsigned n = std::min<std::size_t>(max_threads, alphas.size());
    std::mutex mu;
    for (unsigned w = 0; w < n; ++w) {
      pool.emplace_back([&]() {
        while (true) {
          std::size_t i;
          {
            std::lock_guard<std::mutex> lock(mu);
            if (next >= alphas.size()) return;
            i = next++;
          }
          work(i);
        }
      });
    }
    for (auto& th : pool) th.join();
  }
  return out;
}

// Per-(state, action) payoff-vs-cutoff diagnostic for a certified solution.
struct CutoffEntry {
  int state = 0;
  int action = 0;
  double payoff = 0.0;
  double nu = 0.0;
  std::string relation;   // "u>nu", "u=nu", "u<nu"
  bool chosen = false;    // row entry positive
  bool consistent = true; // matches the regime's support characterization
};

inline std::vector<CutoffEntry> cutoff_diagnostics(const Solution& solution,
                                                   const Problem& problem) {
  const double alpha = problem.params.alpha;
  if (alpha == -1.0)
    throw std::invalid_argument("cutoff_diagnostics: nu is undefined at alpha = -1");
  const SupportSets sets = support_sets(solution.rule);
  std::vector<CutoffEntry> out;
  for (std::size_t t = 0; t < problem.num_states(); ++t) {
    const double nu = solution.statewise[t].nu.value_or(
        solution.statewise[t].lambda + 2.0 * problem.params.kappa / (1.0 + alpha));
    for (std::size_t a = 0; a < problem.num_actions(); ++a) {
      CutoffEntry e;
      e.state = static_cast<int>(t);
      e.action = static_cast<int>(a);
      e.payoff = problem.utility[t][a];
      e.nu = nu;
      e.chosen = solution.rule.rows[t][a] > 0.0;
      const double diff = e.payoff - nu;
      e.relation = std::abs(diff) <= 1e-9 ? "u=nu" : (diff > 0.0 ? "u>nu" : "u<nu");
      if (alpha < -1.0) {
        const bool in_consideration =
            std::binary_search(sets.union_support.begin(), sets.union_support.end(),
                               static_cast<int>(a));
        e.consistent = e.chosen == (in_consideration && diff > 1e-9);
      } else if (alpha >= 1.0) {
        const bool in_common =
            std::binary_search(sets.common_support.begin(), sets.common_support.end(),
                               static_cast<int>(a));
        if (in_common) e.consistent = diff < -1e-9;
        else if (e.chosen) e.consistent = std::abs(diff) <= 1e-9;
      } else {
        // -1 < alpha < 1: chosen actions sit strictly below the cutoff
        if (e.chosen) e.consistent = diff < 1e-9;
      }
      out.push_back(std::move(e));
    }
  }
  return out;
}

}  // namespace alphari
