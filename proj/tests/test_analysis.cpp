#include "doctest.h"
#include "test_support.hpp"

#include "efcake/analysis.hpp"
#include "efcake/errors.hpp"
#include "efcake/protocols.hpp"

using namespace efcake;
using efcake::testing::F;

TEST_CASE("efbt worst bound") {
  CHECK(efbt_worst_bound(4).budget.to_string() == "5w+11");
  CHECK(efbt_worst_bound(4).pieces == 12);
  CHECK(efbt_worst_bound(2).budget.to_string() == "1w+1");
  CHECK(efbt_worst_bound(3).budget.to_string() == "3w+5");
  for (std::size_t n = 2; n <= 20; ++n) {
    CHECK(efbt_worst_bound(n).budget.omega_coeff == lemma2_threshold(n));
    CHECK(efbt_worst_bound(n).budget == default_budget("efbt", n));
  }
  CHECK_THROWS_AS(efbt_worst_bound(1), RangeError);
}

TEST_CASE("lemma 2 threshold") {
  CHECK(lemma2_threshold(2) == 1);
  CHECK(lemma2_threshold(4) == 5);
  CHECK(lemma2_threshold(7) == 19);

  const auto four = lemma2_brute_force(4);
  CHECK(four.threshold_forces);
  CHECK(four.graphs == 64);
  REQUIRE(four.witness_below);
  CHECK(std::popcount(*four.witness_below) == 4);
  CHECK(four.tight_threshold == 5);

  // n = 3: two edges on three vertices always share a vertex of degree 2.
  const auto three = lemma2_brute_force(3);
  CHECK(three.threshold_forces);
  CHECK_FALSE(three.witness_below);
  CHECK(three.tight_threshold == 2);

  for (std::size_t n = 2; n <= 6; ++n) CHECK(brute_force_check(n));
  CHECK_THROWS_AS(lemma2_brute_force(8), RangeError);
}

TEST_CASE("exact expected stages") {
  CHECK(exact_expected_stages(2) == F(1));
  // From the empty graph: EQ,EQ ends at once (1/4); otherwise the added edge
  // leaves a state whose next stage always ends the run.
  CHECK(exact_expected_stages(3) == F(7, 4));
  for (std::size_t n = 2; n <= 6; ++n) {
    CHECK(exact_expected_stages(n) >= F(1));
    CHECK(exact_expected_stages(n) <= F(static_cast<std::int64_t>(lemma2_threshold(n))));
  }
  CHECK_THROWS_AS(exact_expected_stages(9), RangeError);
}

TEST_CASE("dynamics agree with the exact expectation") {
  const auto stats = efbt_dynamics(4, 20000, 11, 2);
  CHECK(stats.trials == 20000);
  CHECK(stats.max_stages <= lemma2_threshold(4));
  CHECK(stats.degree_exits + stats.case1_exits == stats.trials);
  const double gap = stats.mean.to_double() - exact_expected_stages(4).to_double();
  CHECK(std::abs(gap) <= 4 * stats.std_error());

  const auto again = efbt_dynamics(4, 20000, 11, 1);
  CHECK(again.mean == stats.mean);
  CHECK(again.variance == stats.variance);
  CHECK(again.histogram == stats.histogram);
  CHECK_THROWS_AS(efbt_dynamics(4, 0, 1), RangeError);
}

TEST_CASE("simulator matches the scripted protocol") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const std::size_t n = 3 + seed % 5;
    std::vector<AgentSpec> agents;
    for (std::size_t k = 0; k < n; ++k) {
      auto a = testing::make_agent("s" + std::to_string(k), ValuationDensity::uniform());
      a.policy = DeclarationPolicy::random(F(1, 2));
      agents.push_back(a);
    }
    Ledger ledger;
    auto run = efbt(agents, PieceSet::whole(), EfbtMode::scripted, ledger, derive_seed(seed, 0));
    std::int64_t stages = 0;
    for (const auto& st : run.stages) stages += st.taken != StageCase::degree_exit;
    CHECK(efbt_dynamics(n, 1, seed, 1).mean == F(stages));
  }
}

TEST_CASE("recurrences") {
  CHECK(efrw_recurrence(1, 3).is_zero());
  CHECK(efrw_recurrence(2, 5).to_string() == "1w+0");
  CHECK(efrw_recurrence(4, 0).to_string() == "5w+0");
  CHECK(efrw_recurrence(10, 0).to_string() == "17w+0");
  CHECK(pikhurto_recurrence(4, 1).to_string() == "5w+0");
  CHECK(pikhurto_recurrence(1, 0).is_zero());
  CHECK(efrw_bound_check(20, 10));
  CHECK(pikhurto_bound_check(10, 5));
  CHECK(ordinal_add({1, 3}, {2, 0}).to_string() == "3w+0");
  CHECK(ordinal_add({1, 3}, {0, 2}).to_string() == "1w+5");
  CHECK_THROWS_AS(pikhurto_recurrence(16, 0), RangeError);

  const double efrw_avg = average_omega_phases("efrw", 8, 500, 3);
  CHECK(efrw_avg > 1.0);
  CHECK(efrw_avg <= 13.0);
  CHECK(average_omega_phases("efrw", 2, 10, 3) == 1.0);
}
