#include "doctest.h"
#include "test_support.hpp"

#include "efcake/errors.hpp"
#include "efcake/subprotocols.hpp"

using namespace efcake;
using efcake::testing::F;
using efcake::testing::make_agent;

namespace {

std::vector<AgentSpec> profile(std::uint64_t seed, std::size_t n) { return random_profile(seed, n); }

Ledger roomy() { return Ledger(OrdinalBudget{0, 1000000}); }

}  // namespace

TEST_CASE("near_exact_star examples") {
  std::vector<AgentSpec> same(3, make_agent("u", ValuationDensity::uniform()));
  auto ledger = roomy();
  auto r = near_exact_star(same, PieceSet::whole(), 4, F(1, 10), ledger);
  REQUIRE(r.bundles.size() == 4);
  CHECK(r.achieved_deviation == F(0));
  for (const auto& b : r.bundles) CHECK(b.length() == F(1, 4));

  std::vector<AgentSpec> two{make_agent("u", ValuationDensity::uniform()), make_agent("h", testing::left_heavy())};
  auto mixed = near_exact_star(two, PieceSet::whole(), 2, F(1, 100), ledger);
  CHECK(check_near_exact(two, mixed.bundles, 2, F(1, 100), std::size_t{0}).pass);
  CHECK(measure(two[0].valuation, mixed.bundles[0]) == F(1, 2));
  CHECK(mixed.achieved_deviation > F(0));
  CHECK(mixed.cuts_used <= mixed.declared_bound);

  const auto before = ledger.cuts();
  auto one = near_exact_star(two, PieceSet::span(F(1, 5), F(3, 5)), 1, F(1, 10), ledger);
  CHECK(one.bundles == std::vector<PieceSet>{PieceSet::span(F(1, 5), F(3, 5))});
  CHECK(one.cuts_used == 0);
  CHECK(ledger.cuts() == before);

  auto exact = near_exact_star(two, PieceSet::whole(), 3, F(0), ledger);
  CHECK(exact.achieved_deviation == F(0));

  CHECK_THROWS_AS(near_exact_star(two, PieceSet::whole(), 0, F(1, 10), ledger), RangeError);
  CHECK_THROWS_AS(near_exact_star(two, PieceSet::whole(), 2, F(1), ledger), RangeError);
  CHECK_THROWS_AS(near_exact_star({}, PieceSet::whole(), 2, F(1, 10), ledger), RangeError);
}

TEST_CASE("near_exact_star contract on random profiles") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto players = profile(seed, 2 + seed % 4);
    Rng rng(seed);
    const auto piece = testing::random_piece(rng);
    const std::size_t parts = 2 + seed % 5;
    const Fraction eps(1, 20 + static_cast<std::int64_t>(seed));
    auto ledger = roomy();
    auto r = near_exact_star(players, piece, parts, eps, ledger);
    CHECK(check_partition(piece, Allocation{r.bundles, {}}).pass);
    CHECK(check_near_exact(players, r.bundles, parts, eps, std::size_t{0}).pass);
    CHECK(r.cuts_used <= r.declared_bound);
    CHECK(r.cuts_used == ledger.cuts());
  }
}

TEST_CASE("unfair_near_exact") {
  std::vector<AgentSpec> same(2, make_agent("u", ValuationDensity::uniform()));
  auto ledger = roomy();
  auto r = unfair_near_exact(same, PieceSet::whole(), F(1, 3), F(2, 3), F(1, 10), ledger);
  CHECK(measure(same[1].valuation, r.bundles[0]) == F(1, 3));
  CHECK(r.achieved_deviation == F(0));

  std::vector<AgentSpec> two{make_agent("u", ValuationDensity::uniform()), make_agent("h", testing::left_heavy())};
  auto quarter = unfair_near_exact(two, PieceSet::whole(), F(1, 4), F(3, 4), F(1, 50), ledger);
  CHECK(check_near_exact(two, quarter.bundles, {F(1, 4), F(3, 4)}, F(1, 50), std::size_t{0}).pass);

  // With f1 = 1/2 the contract is the near-exact one with two parts.
  auto half = unfair_near_exact(two, PieceSet::whole(), F(1, 2), F(1, 2), F(1, 50), ledger);
  CHECK(check_near_exact(two, half.bundles, 2, F(1, 50), std::size_t{0}).pass);

  CHECK_THROWS_AS(unfair_near_exact(two, PieceSet::whole(), F(0), F(1), F(1, 50), ledger), RangeError);
  CHECK_THROWS_AS(unfair_near_exact(two, PieceSet::whole(), F(1, 3), F(1, 3), F(1, 50), ledger), RangeError);

  auto three = unfair_near_exact(profile(9, 4), PieceSet::whole(), {F(1, 6), F(1, 3), F(1, 2)}, F(1, 30), ledger);
  CHECK(check_near_exact(profile(9, 4), three.bundles, {F(1, 6), F(1, 3), F(1, 2)}, F(1, 30), std::size_t{0}).pass);
}

TEST_CASE("witness helpers") {
  const auto w = witness_from_values(PieceSet::whole(), {F(1, 2), F(1, 8), F(3, 8), F(1, 8)});
  CHECK(w.group_hi == std::vector<std::size_t>{0, 2});
  CHECK(w.group_lo == std::vector<std::size_t>{1, 3});
  CHECK(w.alpha == F(3, 8));
  CHECK(w.beta == F(1, 8));
  CHECK_THROWS_AS(witness_from_values(PieceSet::whole(), {F(1, 3), F(1, 3)}), InvalidWitness);
}

TEST_CASE("controversial_shrink examples") {
  // On P = [0,1/2): a values 1/2, b values 1/4.
  std::vector<AgentSpec> a_side{make_agent("a", ValuationDensity::uniform()),
                                make_agent("b", ValuationDensity({F(0), F(1, 2), F(1)}, {F(1, 2), F(3, 2)}))};
  ControversyWitness w{PieceSet::span(F(0), F(1, 2)), {0}, {1}, F(1, 2), F(1, 4), 0};
  auto ledger = roomy();
  auto out = controversial_shrink(a_side, {}, w, F(1, 16), ledger);
  for (const auto& a : a_side) CHECK(measure(a.valuation, out.piece) <= F(1, 16));
  CHECK(measure(a_side[0].valuation, out.piece) != measure(a_side[1].valuation, out.piece));
  CHECK(out.piece.subtract(w.piece).empty());
  CHECK(out.alpha > out.beta);
  CHECK(out.cuts_used <= shrink_cut_bound(2, F(1, 2), F(1, 16)));

  auto same = controversial_shrink(a_side, {}, w, F(1, 2), ledger);
  CHECK(same.piece == w.piece);
  CHECK(same.cuts_used == 0);

  // A B-side player who wants all of P keeps the rounds going.
  std::vector<AgentSpec> b_side{make_agent("greedy", ValuationDensity({F(0), F(1, 2), F(1)}, {F(2), F(0)}), Side::b)};
  Ledger counted(OrdinalBudget{0, 100000});
  auto forced = controversial_shrink(a_side, b_side, w, F(1, 64), counted);
  CHECK(measure(b_side[0].valuation, forced.piece) <= F(1, 64));
  CHECK(forced.cuts_used == counted.cuts());
  CHECK(forced.cuts_used <= shrink_cut_bound(3, F(1), F(1, 64)));

  ControversyWitness bogus{PieceSet::span(F(0), F(1, 2)), {1}, {0}, F(1, 2), F(1, 4), 0};
  CHECK_THROWS_AS(controversial_shrink(a_side, {}, bogus, F(1, 16), ledger), InvalidWitness);
  ControversyWitness flat{PieceSet::span(F(0), F(1, 2)), {0}, {1}, F(1, 4), F(1, 4), 0};
  CHECK_THROWS_AS(controversial_shrink(a_side, {}, flat, F(1, 16), ledger), InvalidWitness);
}

TEST_CASE("adv postconditions") {
  // i is uniform; j values P = [0,1/4) at 1/3 and Q = [1/4,1/2) at 1/6.
  std::vector<AgentSpec> players{make_agent("i", ValuationDensity::uniform()),
                                 make_agent("j", ValuationDensity({F(0), F(1, 4), F(1, 2), F(1)},
                                                                  {F(4, 3), F(2, 3), F(1)}))};
  const auto P = PieceSet::span(F(0), F(1, 4));
  const auto Q = PieceSet::span(F(1, 4), F(1, 2));
  const auto R = PieceSet::span(F(1, 2), F(1));
  auto ledger = roomy();
  auto r = adv(players, {0, 1}, P, Q, R, ledger);
  CHECK(r.report.overall());
  CHECK(r.path == AdvPath::primary);
  CHECK_FALSE(r.residue.empty());
  CHECK(check_advantage(players, r.allocation, {0, 1}, r.residue).pass);
  CHECK(unite_all({r.allocation.shares[0], r.allocation.shares[1], r.residue}) == PieceSet::whole());
  CHECK(r.cuts_used <= adv_cut_bound(players, PieceSet::whole()));

  CHECK_THROWS_AS(adv(players, {1, 0}, P, Q, R, ledger), InvalidWitness);
}

TEST_CASE("adv on random stages") {
  int primary = 0;
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const std::size_t n = 3 + seed % 3;
    const auto players = profile(1000 + seed, n);
    const auto pieces = split_equal(players[0].valuation, PieceSet::whole(), 6);
    std::optional<std::pair<std::size_t, std::size_t>> pair;
    std::pair<std::size_t, std::size_t> pq;
    for (std::size_t j = 1; j < n && !pair; ++j) {
      if (auto w = unequal_witness(players[j], pieces)) {
        pair = std::make_pair(std::size_t{0}, j);
        pq = *w;
      }
    }
    if (!pair) continue;
    const auto P = pieces[pq.first];
    const auto Q = pieces[pq.second];
    const auto R = PieceSet::whole().subtract(P.unite(Q));
    auto ledger = roomy();
    auto r = adv(players, *pair, P, Q, R, ledger);
    CHECK(r.report.overall());
    CHECK(check_partition(PieceSet::whole(), Allocation{r.allocation.shares, r.residue}).pass);
    CHECK(check_envy_free(players, Allocation{r.allocation.shares, {}}).pass);
    CHECK(check_advantage(players, r.allocation, *pair, r.residue).pass);
    CHECK(r.cuts_used <= adv_cut_bound(players, PieceSet::whole()));
    primary += r.path == AdvPath::primary;
  }
  CHECK(primary > 0);
}
