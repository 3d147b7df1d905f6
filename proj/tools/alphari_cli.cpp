// Command-line front end: solve / check / sweep / divergence / info.
// Exit codes: 0 success (certified / pass), 1 malformed input, 2 uncertified
// solve or failed check.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "alphari/alphari.hpp"

namespace {

using namespace alphari;

std::vector<double> parse_reals(const std::string& csv, const char* what) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t pos = 0;
      const double v = std::stod(tok, &pos);
      if (pos != tok.size()) throw std::invalid_argument(tok);
      out.push_back(v);
    } catch (const std::exception&) {
      throw ParseError(what, std::string(what) + ": cannot parse '" + tok + "'");
    }
  }
  if (out.empty()) throw ParseError(what, std::string(what) + ": empty list");
  return out;
}

TieRule parse_tie_rule(const std::string& s) {
  if (s == "uniform") return TieRule::Uniform;
  if (s == "first-index") return TieRule::FirstIndex;
  if (s == "single-required") return TieRule::SingleRequired;
  throw ParseError("tie-rule", "unknown tie rule: " + s);
}

void write_output(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + out_path);
    out << text;
  }
}

unsigned sweep_threads(std::size_t n_alphas) {
  unsigned cap = std::thread::hardware_concurrency();
  if (const char* env = std::getenv("ALPHARI_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) cap = static_cast<unsigned>(v);
  }
  if (cap == 0) cap = 1;
  return static_cast<unsigned>(std::min<std::size_t>(cap, n_alphas));
}

struct CommonFlags {
  std::uint64_t seed = 0;
  int restarts = 8;
  double tol = 1e-10;
  std::string tie_rule = "uniform";
  std::optional<double> alpha_override;
};

void add_solver_flags(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--seed", f.seed, "RNG seed for restarts");
  cmd->add_option("--restarts", f.restarts, "number of random restarts");
  cmd->add_option("--tol", f.tol, "objective convergence tolerance");
  cmd->add_option("--tie-rule", f.tie_rule,
                  "residual-mass tie rule: uniform|first-index|single-required");
  cmd->add_option("--alpha-override", f.alpha_override,
                  "replace the problem file's alpha");
}

SolveConfig make_config(const CommonFlags& f) {
  SolveConfig cfg;
  cfg.rng_seed = f.seed;
  cfg.restarts = f.restarts;
  cfg.objective_tol = f.tol;
  cfg.tie_rule = parse_tie_rule(f.tie_rule);
  return cfg;
}

int cmd_solve(const std::string& problem_path, const CommonFlags& flags,
              const std::string& out_path) {
  LoadedProblem loaded = load_problem(problem_path);
  if (!loaded.warning.empty()) std::cerr << "warning: " << loaded.warning << "\n";
  Problem problem = flags.alpha_override
                        ? loaded.problem.with_alpha(*flags.alpha_override)
                        : loaded.problem;
  const SolveConfig cfg = make_config(flags);
  const Solution sol = solve(problem, cfg);
  write_output(out_path, solution_to_json(sol, problem, cfg).dump(2) + "\n");
  return sol.converged ? 0 : 2;
}

int cmd_check(const std::string& problem_path, const std::string& rule_path,
              const CommonFlags& flags) {
  LoadedProblem loaded = load_problem(problem_path);
  Problem problem = flags.alpha_override
                        ? loaded.problem.with_alpha(*flags.alpha_override)
                        : loaded.problem;
  const ChoiceRule rule = load_rule(rule_path, problem);
  const OptimalityReport rep = check_optimality(rule, problem);
  const SupportReport supp = support_report(rule, problem);

  std::cout << "regime: " << to_string(supp.regime) << "\n";
  std::cout << "extremum (" << (rep.extremum_is_max ? "max" : "min")
            << "): " << rep.extremum << "\n";
  std::cout << "action  condition2  on_supp_m\n";
  for (std::size_t a = 0; a < problem.num_actions(); ++a) {
    const bool on = std::binary_search(supp.s_m.begin(), supp.s_m.end(),
                                       static_cast<int>(a));
    std::cout << problem.action_labels[a] << "  ";
    const ExtReal v = rep.condition2_values.empty() ? ExtReal(0) : rep.condition2_values[a];
    if (v.is_pos_inf()) std::cout << "infinite";
    else if (v.is_neg_inf()) std::cout << "-infinite";
    else std::cout << v.value();
    std::cout << "  " << (on ? "yes" : "no") << "\n";
  }
  std::cout << "worst gap on supp m: " << rep.support_gap << "\n";
  if (!rep.note.empty()) std::cout << "note: " << rep.note << "\n";
  std::cout << (rep.overall ? "PASS" : "FAIL") << "\n";
  return rep.overall ? 0 : 2;
}

int cmd_sweep(const std::string& problem_path, const std::string& alphas_csv,
              const CommonFlags& flags, const std::string& csv_path) {
  LoadedProblem loaded = load_problem(problem_path);
  const std::vector<double> alphas = parse_reals(alphas_csv, "alphas");
  const SolveConfig cfg = make_config(flags);
  const auto entries = sweep(loaded.problem, alphas, cfg, sweep_threads(alphas.size()));
  write_output(csv_path, sweep_to_csv(entries, loaded.problem));
  for (const auto& e : entries)
    if (!e.ok) return 2;
  return 0;
}

int cmd_divergence(const std::string& p_csv, const std::string& m_csv, double alpha) {
  const std::vector<double> p = parse_reals(p_csv, "p");
  const std::vector<double> m = parse_reals(m_csv, "m");
  if (p.size() != m.size()) throw ParseError("m", "p and m must have equal length");
  const ExtReal d = alpha_divergence(p, m, alpha);
  if (d.is_pos_inf()) std::cout << "infinite\n";
  else std::cout << d.value() << "\n";
  return 0;
}

int cmd_info(const std::string& problem_path, const std::string& rule_path,
             const CommonFlags& flags) {
  LoadedProblem loaded = load_problem(problem_path);
  Problem problem = flags.alpha_override
                        ? loaded.problem.with_alpha(*flags.alpha_override)
                        : loaded.problem;
  const ChoiceRule rule = load_rule(rule_path, problem);
  const ExtReal info = alpha_information(rule, problem.prior, problem.params.alpha);
  std::cout << "information: ";
  if (info.is_pos_inf()) std::cout << "infinite\n";
  else std::cout << info.value() << "\n";
  const AlphaIntegration integ =
      alpha_integration(rule, problem.prior, problem.params.alpha);
  std::cout << "alpha_integration:";
  if (integ.infinite) {
    std::cout << " infinite\n";
  } else {
    for (double v : integ.dist.mass) std::cout << " " << v;
    std::cout << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  std::cout.precision(15);
  CLI::App app{"Solver for finite rational-inattention problems with "
               "alpha-divergence information costs"};
  app.require_subcommand(1);

  std::string problem_path, rule_path, out_path, csv_path, alphas_csv, p_csv, m_csv;
  double div_alpha = 0.0;
  CommonFlags flags;

  auto* solve_cmd = app.add_subcommand("solve", "solve a problem file");
  solve_cmd->add_option("problem", problem_path, "problem file (JSON)")->required();
  solve_cmd->add_option("--out", out_path, "write the solution file here");
  add_solver_flags(solve_cmd, flags);

  auto* check_cmd = app.add_subcommand("check", "check optimality of a rule");
  check_cmd->add_option("problem", problem_path, "problem file (JSON)")->required();
  check_cmd->add_option("rule", rule_path, "rule file (JSON)")->required();
  check_cmd->add_option("--alpha-override", flags.alpha_override,
                        "replace the problem file's alpha");

  auto* sweep_cmd = app.add_subcommand("sweep", "solve across a list of alphas");
  sweep_cmd->add_option("problem", problem_path, "problem file (JSON)")->required();
  sweep_cmd->add_option("--alphas", alphas_csv, "comma-separated alphas")->required();
  sweep_cmd->add_option("--csv", csv_path, "write CSV here (default stdout)");
  add_solver_flags(sweep_cmd, flags);

  auto* div_cmd = app.add_subcommand("divergence", "alpha-divergence of two distributions");
  div_cmd->add_option("p", p_csv, "first distribution, comma-separated")->required();
  div_cmd->add_option("m", m_csv, "second distribution, comma-separated")->required();
  div_cmd->add_option("--alpha", div_alpha, "divergence parameter")->required();

  auto* info_cmd = app.add_subcommand("info", "alpha-information of a rule");
  info_cmd->add_option("problem", problem_path, "problem file (JSON)")->required();
  info_cmd->add_option("rule", rule_path, "rule file (JSON)")->required();
  info_cmd->add_option("--alpha-override", flags.alpha_override,
                       "replace the problem file's alpha");

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve_cmd->parsed()) return cmd_solve(problem_path, flags, out_path);
    if (check_cmd->parsed()) return cmd_check(problem_path, rule_path, flags);
    if (sweep_cmd->parsed()) return cmd_sweep(problem_path, alphas_csv, flags, csv_path);
    if (div_cmd->parsed()) return cmd_divergence(p_csv, m_csv, div_alpha);
    if (info_cmd->parsed()) return cmd_info(problem_path, rule_path, flags);
  } catch (const alphari::ParseError& e) {
    std::cerr << "error";
    if (!e.field.empty()) std::cerr << " [" << e.field << "]";
    std::cerr << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
