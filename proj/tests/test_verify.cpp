#include <cmath>
#include <random>

#include <doctest.h>

#include "alphari/solver.hpp"
#include "alphari/verify.hpp"
#include "test_util.hpp"

using namespace alphari;

namespace {
const ChoiceRule kExample1Rule{{{0.5, 0.0, 0.5}, {0.0, 0.0, 1.0}}};
}

TEST_CASE("check_optimality certifies the worked optimum") {
  const Problem pr = testutil::example1();
  const OptimalityReport rep = check_optimality(kExample1Rule, pr);
  CHECK(rep.overall);
  CHECK(!rep.extremum_is_max);
  const double va = 4.0 * std::sqrt(3.0) / 5.0;
  const double vb = std::sqrt(1.5);
  const double vc = 6.0 / 5.0;
  CHECK(std::abs(rep.condition2_values[0].value() - va) <= 1e-9);
  CHECK(std::abs(rep.condition2_values[1].value() - vb) <= 1e-9);
  CHECK(std::abs(rep.condition2_values[2].value() - vc) <= 1e-9);
  CHECK(rep.extremum == doctest::Approx(vc).epsilon(1e-9));
  // c is the unique minimizer
  CHECK(vc < vb);
  CHECK(vb < va);
}

TEST_CASE("check_optimality rejects a perturbed rule") {
  const Problem pr = testutil::example1();
  const ChoiceRule bad{{{0.6, 0.0, 0.4}, {0.0, 0.0, 1.0}}};
  CHECK(!check_optimality(bad, pr).overall);
  CHECK(objective(bad, pr).value() < objective(kExample1Rule, pr).value());
}

TEST_CASE("certified solves fail after row perturbation") {
  std::mt19937_64 rng(67);
  for (double alpha : {-3.0, -1.0, 0.5}) {
    const Problem pr = testutil::random_problem(rng, 2, 3, alpha);
    const Solution sol = solve(pr);
    REQUIRE(sol.converged);
    ChoiceRule bent = sol.rule;
    // shift 1e-2 of mass between two actions of state 0
    int hi = 0;
    for (int a = 1; a < 3; ++a)
      if (bent.rows[0][a] > bent.rows[0][hi]) hi = a;
    const int lo = (hi + 1) % 3;
    bent.rows[0][hi] -= 1e-2;
    bent.rows[0][lo] += 1e-2;
    CHECK(!check_optimality(bent, pr).overall);
  }
}

TEST_CASE("condition2 reduces to the logit condition at alpha = -1") {
  std::mt19937_64 rng(71);
  const Problem pr = testutil::random_problem(rng, 2, 3, -1.0);
  const Solution sol = solve(pr);
  REQUIRE(sol.converged);
  const OptimalityReport rep = check_optimality(sol.rule, pr);
  CHECK(std::abs(rep.extremum - 1.0) <= 1e-8);
  for (std::size_t a = 0; a < 3; ++a) {
    double lhs = 0.0;
    for (std::size_t t = 0; t < 2; ++t) {
      double denom = 0.0;
      for (std::size_t b = 0; b < 3; ++b)
        denom += sol.reference.mass[b] * std::exp(pr.utility[t][b] / pr.params.kappa);
      lhs += pr.prior[t] * std::exp(pr.utility[t][a] / pr.params.kappa) / denom;
    }
    CHECK(rep.condition2_values[a].value() == doctest::Approx(lhs).epsilon(1e-8));
  }
}

TEST_CASE("support_report matches the reference patterns") {
  const Solution low = solve(testutil::example1(-6.0));
  const SupportReport rep_low = support_report(low.rule, testutil::example1(-6.0));
  CHECK(rep_low.regime == SupportRegime::Cutoff);
  CHECK(rep_low.s_m == ActionSet{0, 1, 2});
  CHECK(rep_low.s_theta[0] == ActionSet{0, 1});
  CHECK(rep_low.s_theta[1] == ActionSet{1, 2});

  const SupportReport rep_high = support_report(kExample1Rule, testutil::example1(3.0));
  CHECK(rep_high.regime == SupportRegime::CommonSupport);
  CHECK(rep_high.s_m == ActionSet{2});
  CHECK(rep_high.s_theta[0] == ActionSet{0, 2});
  CHECK(rep_high.s_theta[1] == ActionSet{2});

  const ChoiceRule same{{{0.5, 0.5, 0.0}, {0.5, 0.5, 0.0}}};
  const SupportReport rep_same = support_report(same, testutil::example1(0.0));
  CHECK(rep_same.s_theta[0] == rep_same.s_theta[1]);
  CHECK(rep_same.consideration_set == rep_same.common_support);
}

TEST_CASE("regime invariants hold on certified solutions") {
  std::mt19937_64 rng(73);
  for (double alpha : {-6.0, -3.0, -1.0, -0.5, 0.0, 0.5, 1.0, 3.0}) {
    CAPTURE(alpha);
    const Problem pr = testutil::random_problem(rng, 2, 3, alpha);
    const Solution sol = solve(pr);
    if (!sol.converged) continue;
    const SupportReport rep = support_report(sol.rule, pr);
    if (rep.regime == SupportRegime::Cutoff) {
      for (const auto& st : rep.s_theta)
        for (int a : st)
          CHECK(std::binary_search(rep.s_m.begin(), rep.s_m.end(), a));
      CHECK(rep.s_m == rep.consideration_set);
    } else if (rep.regime == SupportRegime::FullSupport) {
      for (const auto& st : rep.s_theta) CHECK(st == rep.s_m);
    } else {
      CHECK(rep.s_m == rep.common_support);
    }
  }
}

TEST_CASE("brute force oracle") {
  const Problem pr = testutil::example1();
  auto [rule, value] = brute_force_solve(pr, 0.01);
  CHECK(std::abs(value - 0.1) <= 1e-3);

  const Problem flat({"1", "2"}, {"a", "b"}, {0.5, 0.5}, {{0.0, 0.0}, {0.0, 0.0}},
                     AlphaParams(0.5, 1.0));
  CHECK(brute_force_solve(flat, 0.05).second == doctest::Approx(0.0).epsilon(1e-12));

  const Problem single({"1"}, {"a", "b", "c"}, {1.0}, {{0.3, 1.7, -0.2}},
                       AlphaParams(-3.0, 1.0));
  CHECK(brute_force_solve(single, 0.05).second == doctest::Approx(1.7).epsilon(1e-12));

  const Problem big({"1"}, {"a", "b", "c", "d"}, {1.0}, {{0, 0, 0, 0}},
                    AlphaParams(0.0, 1.0));
  CHECK_THROWS_AS(brute_force_solve(big, 0.5), std::invalid_argument);
}

TEST_CASE("solver dominates the oracle on random instances") {
  std::mt19937_64 rng(79);
  for (double alpha : {-3.0, 0.5}) {
    for (int i = 0; i < 2; ++i) {
      const Problem pr = testutil::random_problem(rng, 2, 3, alpha);
      const Solution sol = solve(pr);
      auto [coarse_rule, coarse] = brute_force_solve(pr, 0.02);
      auto [fine_rule, fine] = brute_force_refine(pr, coarse_rule, 0.02, 0.002);
      CHECK(sol.objective >= std::max(coarse, fine) - 1e-3);
    }
  }
}

TEST_CASE("varphi_alpha kernel") {
  for (double alpha : {-6.0, -1.0, 0.0, 0.5, 1.0, 3.0}) {
    CAPTURE(alpha);
    CHECK(varphi_alpha(1.0, alpha) == doctest::Approx(0.0).epsilon(1e-12));
    // phi(1) = 0 and phi'(1) = 0 by central differences
    const double h = 1e-4;
    const double d1 = (varphi_alpha(1.0 + h, alpha) - varphi_alpha(1.0 - h, alpha)) / (2 * h);
    CHECK(std::abs(d1) <= 1e-6);
    // convexity via second differences on (0, 10)
    for (double t = 0.1; t < 10.0; t += 0.37) {
      const double d2 = varphi_alpha(t + h, alpha) - 2.0 * varphi_alpha(t, alpha) +
                        varphi_alpha(t - h, alpha);
      CHECK(d2 >= -1e-10);
    }
  }
  CHECK(varphi_alpha(2.0, -1.0) == doctest::Approx(2.0 * std::log(2.0) - 1.0));
  CHECK(varphi_alpha(2.0, 1.0) == doctest::Approx(1.0 - std::log(2.0)));
  CHECK_THROWS_AS(varphi_alpha(0.0, 0.0), std::domain_error);
  CHECK(is_cofinite(-1.0));
  CHECK(is_cofinite(-3.0));
  CHECK(!is_cofinite(0.0));
  CHECK(!is_cofinite(1.0));
}
