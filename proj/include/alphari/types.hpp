#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "alphari/core_math.hpp"

namespace alphari {

using ActionSet = std::vector<int>;  // sorted action indices

// Reference distribution over actions (the marginal m).
struct ReferenceDist {
  std::vector<double> mass;

  ActionSet support() const {
    ActionSet s;
    for (int a = 0; a < static_cast<int>(mass.size()); ++a)
      if (mass[a] > 0.0) s.push_back(a);
    return s;
  }
};

// One probability distribution over actions per state.
struct ChoiceRule {
  std::vector<std::vector<double>> rows;

  std::size_t num_states() const { return rows.size(); }
  std::size_t num_actions() const { return rows.empty() ? 0 : rows[0].size(); }
};

// Union and intersection of the statewise supports.
struct SupportSets {
  ActionSet union_support;   // U(P)
  ActionSet common_support;  // C(P)
};

inline SupportSets support_sets(const ChoiceRule& rule) {
  SupportSets s;
  const int na = static_cast<int>(rule.num_actions());
  for (int a = 0; a < na; ++a) {
    bool any = false, all = true;
    for (const auto& row : rule.rows) {
      if (row[a] > 0.0) any = true;
      else all = false;
    }
    if (any) s.union_support.push_back(a);
    if (all && !rule.rows.empty()) s.common_support.push_back(a);
  }
  return s;
}

// Immutable problem instance: finite states and actions, full-support prior,
// payoff matrix u(a, theta), and the cost parameters (alpha, kappa).
struct Problem {
  std::vector<std::string> state_labels;
  std::vector<std::string> action_labels;
  std::vector<double> prior;                  // over states
  std::vector<std::vector<double>> utility;   // [state][action]
  AlphaParams params;

  Problem(std::vector<std::string> states, std::vector<std::string> actions,
          std::vector<double> prior_, std::vector<std::vector<double>> utility_,
          AlphaParams params_)
      : state_labels(std::move(states)),
        action_labels(std::move(actions)),
        prior(std::move(prior_)),
        utility(std::move(utility_)),
        params(params_) {
    validate();
  }

  std::size_t num_states() const { return state_labels.size(); }
  std::size_t num_actions() const { return action_labels.size(); }

  Problem with_alpha(double alpha) const {
    Problem p = *this;
    p.params = AlphaParams(alpha, params.kappa);
    return p;
  }

 private:
  void validate() const {
    if (state_labels.empty() || action_labels.empty())
      throw std::invalid_argument("Problem: empty state or action set");
    if (prior.size() != state_labels.size())
      throw std::invalid_argument("Problem: prior length mismatch");
    double sum = 0.0;
    for (double p : prior) {
      if (!(p > 0.0)) throw std::invalid_argument("Problem: prior must be strictly positive");
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9)
      throw std::invalid_argument("Problem: prior must sum to 1");
    if (utility.size() != state_labels.size())
      throw std::invalid_argument("Problem: utility row count mismatch");
    for (const auto& row : utility) {
      if (row.size() != action_labels.size())
        throw std::invalid_argument("Problem: utility column count mismatch");
      for (double u : row)
        if (!std::isfinite(u)) throw std::invalid_argument("Problem: utility must be finite");
    }
  }
};

inline std::vector<double> uniform_dist(std::size_t n) {
  return std::vector<double>(n, 1.0 / static_cast<double>(n));
}

}  // namespace alphari
