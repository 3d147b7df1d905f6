#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "alphari/solver.hpp"
#include "alphari/types.hpp"
#include "alphari/verify.hpp"

namespace alphari {

// Schema violation in a problem or rule file. `field` names the offending
// entry for CLI diagnostics.
struct ParseError : std::runtime_error {
  std::string field;
  ParseError(std::string field_, const std::string& what)
      : std::runtime_error(what), field(std::move(field_)) {}
};

struct LoadedProblem {
  Problem problem;
  std::string warning;  // nonempty when the prior was renormalized
};

inline LoadedProblem parse_problem(const nlohmann::json& j) {
  using nlohmann::json;
  auto require = [&](const char* key) -> const json& {
    if (!j.contains(key)) throw ParseError(key, std::string("missing field '") + key + "'");
    return j.at(key);
  };
  std::vector<std::string> states, actions;
  try {
    states = require("states").get<std::vector<std::string>>();
  } catch (const json::exception&) {
    throw ParseError("states", "field 'states' must be a list of labels");
  }
  try {
    actions = require("actions").get<std::vector<std::string>>();
  } catch (const json::exception&) {
    throw ParseError("actions", "field 'actions' must be a list of labels");
  }
  if (states.empty()) throw ParseError("states", "field 'states' must be nonempty");
  if (actions.empty()) throw ParseError("actions", "field 'actions' must be nonempty");

  std::vector<double> prior;
  try {
    prior = require("prior").get<std::vector<double>>();
  } catch (const json::exception&) {
    throw ParseError("prior", "field 'prior' must be a list of reals");
  }
  if (prior.size() != states.size())
    throw ParseError("prior", "field 'prior' length must equal the number of states");
  double sum = 0.0;
  for (double p : prior) {
    if (!(p > 0.0)) throw ParseError("prior", "field 'prior' entries must be > 0");
    sum += p;
  }
  std::string warning;
  if (std::abs(sum - 1.0) > 1e-9) {
    if (std::abs(sum - 1.0) <= 1e-6) {
      for (double& p : prior) p /= sum;
      warning = "prior renormalized (sum deviated from 1 by less than 1e-6)";
    } else {
      throw ParseError("prior", "field 'prior' must sum to 1 within 1e-9");
    }
  }

  std::vector<std::vector<double>> utility;
  try {
    utility = require("utility").get<std::vector<std::vector<double>>>();
  } catch (const json::exception&) {
    throw ParseError("utility", "field 'utility' must be a matrix of reals");
  }
  if (utility.size() != states.size())
    throw ParseError("utility", "field 'utility' must have one row per state");
  for (const auto& row : utility) {
    if (row.size() != actions.size())
      throw ParseError("utility", "field 'utility' rows must have one entry per action");
    for (double u : row)
      if (!std::isfinite(u)) throw ParseError("utility", "field 'utility' entries must be finite");
  }

  double alpha, kappa;
  try {
    alpha = require("alpha").get<double>();
  } catch (const json::exception&) {
    throw ParseError("alpha", "field 'alpha' must be a real");
  }
  try {
    kappa = require("kappa").get<double>();
  } catch (const json::exception&) {
    throw ParseError("kappa", "field 'kappa' must be a real");
  }
  if (!(kappa > 0.0)) throw ParseError("kappa", "field 'kappa' must be > 0");
  if (!std::isfinite(alpha)) throw ParseError("alpha", "field 'alpha' must be finite");

  return LoadedProblem{Problem(std::move(states), std::move(actions), std::move(prior),
                               std::move(utility), AlphaParams(alpha, kappa)),
                       std::move(warning)};
}

inline LoadedProblem load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("", "cannot open problem file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("", std::string("invalid JSON: ") + e.what());
  }
  return parse_problem(j);
}

// Rule file: either {"rule": [[...], ...]} or a full solution file.
inline ChoiceRule load_rule(const std::string& path, const Problem& problem) {
  std::ifstream in(path);
  if (!in) throw ParseError("", "cannot open rule file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("", std::string("invalid JSON: ") + e.what());
  }
  if (!j.contains("rule")) throw ParseError("rule", "missing field 'rule'");
  ChoiceRule rule;
  try {
    rule.rows = j.at("rule").get<std::vector<std::vector<double>>>();
  } catch (const nlohmann::json::exception&) {
    throw ParseError("rule", "field 'rule' must be a matrix of reals");
  }
  if (rule.rows.size() != problem.num_states())
    throw ParseError("rule", "field 'rule' must have one row per state");
  for (const auto& row : rule.rows) {
    if (row.size() != problem.num_actions())
      throw ParseError("rule", "field 'rule' rows must have one entry per action");
    double s = 0.0;
    for (double v : row) {
      if (v < 0.0) throw ParseError("rule", "field 'rule' entries must be >= 0");
      s += v;
    }
    if (std::abs(s - 1.0) > 1e-6)
      throw ParseError("rule", "field 'rule' rows must sum to 1");
  }
  return rule;
}

inline nlohmann::json ext_real_to_json(ExtReal v) {
  if (v.is_pos_inf()) return "infinite";
  if (v.is_neg_inf()) return "-infinite";
  return v.value();
}

inline nlohmann::json report_to_json(const OptimalityReport& rep,
                                     const std::vector<std::string>& action_labels) {
  nlohmann::json j;
  j["pass"] = rep.overall;
  j["tolerance"] = rep.tolerance;
  j["extremum"] = rep.extremum;
  j["extremum_kind"] = rep.extremum_is_max ? "max" : "min";
  j["support_gap"] = rep.support_gap;
  nlohmann::json vals = nlohmann::json::object();
  for (std::size_t a = 0; a < rep.condition2_values.size(); ++a)
    vals[action_labels[a]] = ext_real_to_json(rep.condition2_values[a]);
  j["condition2_values"] = vals;
  j["statewise_ok"] = rep.statewise_ok;
  j["lambdas"] = rep.lambdas;
  if (!rep.note.empty()) j["note"] = rep.note;
  return j;
}

inline nlohmann::json support_to_json(const SupportReport& rep,
                                      const std::vector<std::string>& action_labels) {
  auto names = [&](const ActionSet& s) {
    std::vector<std::string> out;
    for (int a : s) out.push_back(action_labels[a]);
    return out;
  };
  nlohmann::json j;
  j["regime"] = to_string(rep.regime);
  j["s_m"] = names(rep.s_m);
  nlohmann::json st = nlohmann::json::array();
  for (const auto& s : rep.s_theta) st.push_back(names(s));
  j["s_theta"] = st;
  j["consideration_set"] = names(rep.consideration_set);
  j["common_support"] = names(rep.common_support);
  return j;
}

inline nlohmann::json solution_to_json(const Solution& sol, const Problem& problem,
                                       const SolveConfig& config) {
  nlohmann::json j;
  j["rule"] = sol.rule.rows;
  j["reference"] = sol.reference.mass;
  nlohmann::json sw = nlohmann::json::array();
  for (const auto& s : sol.statewise) {
    nlohmann::json e;
    e["lambda"] = s.lambda;
    if (s.nu) e["nu"] = *s.nu;
    e["branch"] = to_string(s.branch);
    e["residual_mass"] = s.residual_mass;
    e["maximizer_set"] = s.maximizer_set;
    sw.push_back(std::move(e));
  }
  j["statewise"] = sw;
  j["expected_payoff"] = sol.expected_payoff;
  j["information"] = ext_real_to_json(sol.information);
  j["objective"] = sol.objective;
  j["support"] = support_to_json(support_report(sol.rule, problem), problem.action_labels);
  j["optimality"] = report_to_json(sol.certificate, problem.action_labels);
  j["solver"] = {{"iterations", sol.iterations},
                 {"converged", sol.converged},
                 {"seed", sol.rng_seed},
                 {"objective_tol", config.objective_tol},
                 {"point_tol", config.point_tol},
                 {"tie_rule", to_string(sol.tie_rule)}};
  return j;
}

namespace detail {

inline std::string fmt_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::string join_actions(const ActionSet& s,
                                const std::vector<std::string>& labels) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += "|";
    out += labels[s[i]];
  }
  return out;
}

}  // namespace detail

// CSV rendering of a sweep: '.' decimal, LF line endings, full precision.
inline std::string sweep_to_csv(const std::vector<SweepEntry>& entries,
                                const Problem& problem) {
  std::ostringstream os;
  os << "alpha,q_alpha,status,regime";
  for (const auto& a : problem.action_labels) os << ",m_" << a;
  for (const auto& s : problem.state_labels)
    for (const auto& a : problem.action_labels) os << ",p_" << s << "_" << a;
  for (const auto& s : problem.state_labels) os << ",support_" << s;
  os << ",support_m,objective,information\n";
  for (const auto& e : entries) {
    os << detail::fmt_full(e.alpha) << "," << detail::fmt_full((3.0 + e.alpha) / 2.0);
    if (!e.ok) {
      os << ",failed,";
      const std::size_t na = problem.num_actions();
      for (std::size_t i = 0; i < na + problem.num_states() * na; ++i) os << ",";
      for (std::size_t i = 0; i < problem.num_states(); ++i) os << ",";
      os << ",,\n";
      continue;
    }
    os << ",ok," << to_string(regime_of(e.alpha));
    for (double v : e.solution.reference.mass) os << "," << detail::fmt_full(v);
    for (const auto& row : e.solution.rule.rows)
      for (double v : row) os << "," << detail::fmt_full(v);
    for (const auto& s : e.support.s_theta)
      os << "," << detail::join_actions(s, problem.action_labels);
    os << "," << detail::join_actions(e.support.s_m, problem.action_labels);
    os << "," << detail::fmt_full(e.solution.objective);
    os << ",";
    if (e.solution.information.is_pos_inf()) os << "infinite";
    else os << detail::fmt_full(e.solution.information.value());
    os << "\n";
  }
  return os.str();
}

}  // namespace alphari
