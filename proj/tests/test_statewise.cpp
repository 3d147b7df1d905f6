#include <cmath>
#include <random>

#include <doctest.h>

#include "alphari/statewise.hpp"
#include "test_util.hpp"

using namespace alphari;

namespace {
const ReferenceDist kPointC{{0.0, 0.0, 1.0}};
}

TEST_CASE("lambda_bar on the worked instance") {
  const Problem pr = testutil::example1();
  CHECK(solve_lambda_bar(0, kPointC, pr) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(solve_lambda_bar(1, kPointC, pr) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("lambda_bar self-consistency on random instances") {
  std::mt19937_64 rng(13);
  for (double alpha : {-6.0, -3.0, -0.5, 0.0, 0.5, 1.0, 3.0}) {
    for (int i = 0; i < 20; ++i) {
      const Problem pr = testutil::random_problem(rng, 2, 4, alpha);
      const ReferenceDist m{testutil::random_dist(rng, 4)};
      for (int t = 0; t < 2; ++t) {
        const double lam = solve_lambda_bar(t, m, pr);
        double lhs = 0.0;
        for (int a = 0; a < 4; ++a)
          lhs += m.mass[a] *
                 q_exp((pr.utility[t][a] - lam) / pr.params.kappa, pr.params.q).value();
        CHECK(std::abs(lhs - 1.0) <= 1e-10);
      }
    }
  }
}

TEST_CASE("lambda_bar at alpha = -1 makes the row a modified logit") {
  const Problem pr = testutil::example1(-1.0);
  // constant payoffs and uniform m force a uniform row
  const Problem flat({"1"}, {"a", "b", "c"}, {1.0}, {{0.7, 0.7, 0.7}},
                     AlphaParams(-1.0, 1.0));
  const ReferenceDist uni{uniform_dist(3)};
  const StatewiseSolution ss = statewise_solve(0, uni, flat);
  for (double v : ss.row) CHECK(v == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

  std::mt19937_64 rng(19);
  const Problem rp = testutil::random_problem(rng, 2, 3, -1.0);
  const ReferenceDist m{testutil::random_dist(rng, 3)};
  for (int t = 0; t < 2; ++t) {
    const StatewiseSolution sol = statewise_solve(t, m, rp);
    double denom = 0.0;
    for (int a = 0; a < 3; ++a)
      denom += m.mass[a] * std::exp(rp.utility[t][a] / rp.params.kappa);
    for (int a = 0; a < 3; ++a)
      CHECK(sol.row[a] ==
            doctest::Approx(m.mass[a] * std::exp(rp.utility[t][a] / rp.params.kappa) /
                            denom)
                .epsilon(1e-10));
  }
}

TEST_CASE("lambda_bar_zero cutoffs") {
  const Problem pr = testutil::example1();
  CHECK(*lambda_bar_zero(0, kPointC, pr) == doctest::Approx(1.5));
  CHECK(*lambda_bar_zero(1, kPointC, pr) == doctest::Approx(-0.75));
  const ReferenceDist full{uniform_dist(3)};
  CHECK(!lambda_bar_zero(0, full, pr).has_value());
  CHECK(!lambda_bar_zero(0, kPointC, testutil::example1(-3.0)).has_value());
}

TEST_CASE("statewise_solve reproduces the worked instance") {
  const Problem pr = testutil::example1();
  const StatewiseSolution s1 = statewise_solve(0, kPointC, pr);
  CHECK(s1.branch == StatewiseBranch::Case2b);
  CHECK(s1.lambda == doctest::Approx(1.5));
  CHECK(s1.row[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(s1.row[1] == 0.0);
  CHECK(s1.row[2] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(s1.maximizer_set == ActionSet{0});
  CHECK(s1.residual_mass == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(*s1.nu == doctest::Approx(2.0));

  const StatewiseSolution s2 = statewise_solve(1, kPointC, pr);
  CHECK(s2.branch == StatewiseBranch::Case2a);
  CHECK(s2.lambda == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(s2.row[0] == 0.0);
  CHECK(s2.row[1] == 0.0);
  CHECK(s2.row[2] == doctest::Approx(1.0));
}

TEST_CASE("constant payoffs reproduce the reference distribution") {
  std::mt19937_64 rng(29);
  for (double alpha : {-3.0, -1.0, 0.0, 1.0, 3.0}) {
    const Problem pr({"1"}, {"a", "b", "c"}, {1.0}, {{0.4, 0.4, 0.4}},
                     AlphaParams(alpha, 0.7));
    const ReferenceDist m{testutil::random_dist(rng, 3)};
    const StatewiseSolution ss = statewise_solve(0, m, pr);
    for (int a = 0; a < 3; ++a)
      CHECK(ss.row[a] == doctest::Approx(m.mass[a]).epsilon(1e-10));
  }
}

TEST_CASE("statewise_solve dominates random feasible rows") {
  std::mt19937_64 rng(37);
  for (double alpha : {-6.0, -1.0, 0.0, 0.5, 3.0}) {
    for (int i = 0; i < 4; ++i) {
      const Problem pr = testutil::random_problem(rng, 2, 4, alpha);
      ReferenceDist m{testutil::random_dist(rng, 4)};
      if (i % 2 == 1) {
        // exercise the strict-subset branches
        m.mass[0] = 0.0;
        double s = 0.0;
        for (double v : m.mass) s += v;
        for (double& v : m.mass) v /= s;
      }
      for (int t = 0; t < 2; ++t) {
        const StatewiseSolution ss = statewise_solve(t, m, pr);
        const double val = statewise_objective(ss.row, m, t, pr).value();
        for (int k = 0; k < 1000; ++k) {
          const auto p = testutil::random_dist(rng, 4, 0.0);
          const ExtReal other = statewise_objective(p, m, t, pr);
          if (other.finite()) CHECK(other.value() <= val + 1e-8);
        }
      }
    }
  }
}

TEST_CASE("case2b bookkeeping") {
  std::mt19937_64 rng(43);
  for (int i = 0; i < 30; ++i) {
    const Problem pr = testutil::random_problem(rng, 2, 4, 2.0);
    ReferenceDist m{testutil::random_dist(rng, 4)};
    m.mass[3] = 0.0;
    double s = 0.0;
    for (double v : m.mass) s += v;
    for (double& v : m.mass) v /= s;
    for (int t = 0; t < 2; ++t) {
      const StatewiseSolution ss = statewise_solve(t, m, pr);
      const bool is2b = ss.lambda_bar < *ss.lambda_bar_zero;
      CHECK((ss.branch == StatewiseBranch::Case2b) == is2b);
      double total = 0.0;
      for (double v : ss.row) total += v;
      CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
      if (is2b) {
        double on_sm = 0.0;
        for (int a = 0; a < 3; ++a) on_sm += ss.row[a];
        CHECK(on_sm <= 1.0 + 1e-12);
        CHECK(ss.residual_mass == doctest::Approx(1.0 - on_sm).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("cutoff structure below alpha = -1") {
  std::mt19937_64 rng(47);
  for (int i = 0; i < 30; ++i) {
    const Problem pr = testutil::random_problem(rng, 2, 4, -4.0);
    const ReferenceDist m{testutil::random_dist(rng, 4)};
    for (int t = 0; t < 2; ++t) {
      const StatewiseSolution ss = statewise_solve(t, m, pr);
      REQUIRE(ss.nu.has_value());
      for (int a = 0; a < 4; ++a) {
        const bool positive = ss.row[a] > 0.0;
        const bool above = pr.utility[t][a] > *ss.nu && m.mass[a] > 0.0;
        CHECK(positive == above);
      }
    }
  }
}

TEST_CASE("statewise_objective edge cases") {
  const Problem pr = testutil::example1(-1.0);
  const ReferenceDist m{{0.0, 0.5, 0.5}};
  // point mass on an action with zero reference mass
  CHECK(statewise_objective({1.0, 0.0, 0.0}, m, 0, pr).is_neg_inf());
  const ReferenceDist full{{0.25, 0.25, 0.5}};
  const double expect = 0.25 * 2.0 + 0.25 * 1.25 + 0.5 * 0.0;
  CHECK(statewise_objective(full.mass, full, 0, pr).value() ==
        doctest::Approx(expect).epsilon(1e-12));
}
