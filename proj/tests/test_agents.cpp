#include "doctest.h"
#include "test_support.hpp"

#include <sstream>

#include "efcake/errors.hpp"

using namespace efcake;
using efcake::testing::F;

namespace {

AgentSpec agent(std::string name, ValuationDensity v) {
  AgentSpec a;
  a.name = std::move(name);
  a.valuation = std::move(v);
  return a;
}

}  // namespace

TEST_CASE("eval never charges") {
  Ledger ledger(OrdinalBudget{0, 3});
  const auto u = agent("u", ValuationDensity::uniform());
  CHECK(eval(u, PieceSet::span(F(0), F(1, 3)), ledger) == F(1, 3));
  CHECK(eval(agent("h", testing::left_heavy()), PieceSet::span(F(0), F(1, 4)), ledger) == F(1, 2));
  CHECK(eval(u, PieceSet(), ledger) == F(0));
  CHECK(ledger.budget() == OrdinalBudget{0, 3});
  CHECK(ledger.count(EventKind::eval) == 3);
}

TEST_CASE("cut charges one per call") {
  Ledger ledger(OrdinalBudget{0, 3});
  const auto u = agent("u", ValuationDensity::uniform());
  CHECK(cut(u, PieceSet::whole(), F(1, 2), ledger) == F(1, 2));
  CHECK(ledger.budget() == OrdinalBudget{0, 2});
  cut(u, PieceSet::whole(), F(1, 4), ledger);
  cut(u, PieceSet::whole(), F(3, 4), ledger);
  CHECK(ledger.cuts() == 3);
  CHECK(ledger.count(EventKind::cut) == 3);
  CHECK_THROWS_AS(cut(u, PieceSet::whole(), F(1, 2), ledger), BudgetExhausted);
}

TEST_CASE("declarations") {
  DeclarationCursor cursor;
  const auto twelfths = split_equal(ValuationDensity::uniform(), PieceSet::whole(), 12);
  CHECK(declare(agent("u", ValuationDensity::uniform()), 0, twelfths, cursor) == Declaration::eq);
  const auto heavy = agent("h", testing::left_heavy());
  // Twelfth 0 lies in the density-2 region, twelfth 11 in the density-2/3 one.
  CHECK(measure(heavy.valuation, twelfths[0]) != measure(heavy.valuation, twelfths[11]));
  CHECK(declare(heavy, 1, twelfths, cursor) == Declaration::neq);
  CHECK(declare(heavy, 1, twelfths, cursor, true) == Declaration::eq);

  auto scripted = agent("s", ValuationDensity::uniform());
  scripted.policy = DeclarationPolicy::scripted({Declaration::neq});
  CHECK(declare(scripted, 2, twelfths, cursor) == Declaration::neq);
  CHECK_THROWS_AS(declare(scripted, 2, twelfths, cursor), ConfigError);
  CHECK_THROWS_AS(declare(heavy, 1, {}, cursor), RangeError);

  const auto w = unequal_witness(heavy, twelfths);
  REQUIRE(w);
  CHECK(w->first == 0);
  CHECK(w->second == 3);  // twelfths 0..2 lie inside [0, 1/4)
}

TEST_CASE("honest declaration is EQ exactly when max equals min") {
  Rng rng(41);
  DeclarationCursor cursor;
  for (int trial = 0; trial < 100; ++trial) {
    const auto a = agent("x", random_valuation(rng, 3, 4));
    const auto pieces = split_equal(ValuationDensity::uniform(), PieceSet::whole(), 2 + rng.below(5));
    Fraction lo = measure(a.valuation, pieces[0]), hi = lo;
    for (const auto& p : pieces) {
      lo = min(lo, measure(a.valuation, p));
      hi = max(hi, measure(a.valuation, p));
    }
    CHECK((declare(a, 0, pieces, cursor) == Declaration::eq) == (lo == hi));
  }
}

TEST_CASE("profile parsing") {
  std::istringstream good(
      "# two players\n"
      "agent alice advice=yes policy=honest\n"
      "seg 0 1/4 2\n"
      "seg 1/4 1 2/3\n"
      "agent bob policy=script:EQ,NEQ side=b\n"
      "seg 0 1 1\n"
      "agent carol policy=random:1/2 advice=no\n"
      "seg 0 1 1\n");
  const auto agents = parse_profile(good);
  REQUIRE(agents.size() == 3);
  CHECK(agents[0].valuation == testing::left_heavy());
  CHECK(agents[1].policy.kind == DeclarationPolicy::Kind::scripted);
  CHECK(agents[1].policy.script.size() == 2);
  CHECK(agents[1].side == Side::b);
  CHECK(agents[2].policy.probability_eq == F(1, 2));
  CHECK_FALSE(agents[2].follows_advice);

  std::istringstream again(format_profile(agents));
  const auto reparsed = parse_profile(again);
  REQUIRE(reparsed.size() == 3);
  CHECK(reparsed[0].valuation == agents[0].valuation);
  CHECK(reparsed[1].policy.script == agents[1].policy.script);

  auto line_of = [](const std::string& text) -> std::size_t {
    std::istringstream in(text);
    try {
      parse_profile(in);
    } catch (const ParseError& e) {
      return e.position();
    }
    return 0;
  };
  CHECK(line_of("agent a\nseg 0 1/2 1\nseg 1/3 1 1\n") == 3);       // overlap
  CHECK(line_of("agent a\nseg 0 1/2 1\nseg 2/3 1 1\n") == 3);       // gap
  CHECK(line_of("agent a\nseg 0 1 2\n") == 1);                      // integrates to 2
  CHECK(line_of("agent a\nseg 0 1 1\nagent a\nseg 0 1 1\n") == 3);  // duplicate
  CHECK(line_of("agent a policy=maybe\nseg 0 1 1\n") == 1);
  CHECK(line_of("seg 0 1 1\n") == 1);
  CHECK(line_of("agent a\nseg 0 1/2 2\n") == 1);  // stops short of 1
}

TEST_CASE("random profiles are deterministic") {
  const auto a = random_profile(99, 4);
  const auto b = random_profile(99, 4);
  REQUIRE(a.size() == 4);
  for (std::size_t k = 0; k < 4; ++k) {
    CHECK(a[k].valuation == b[k].valuation);
    CHECK(a[k].valuation.segment_count() <= 8);
    CHECK(measure(a[k].valuation, PieceSet::whole()) == F(1));
  }
}
