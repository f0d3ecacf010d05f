#include "doctest.h"
#include "test_support.hpp"

#include <sstream>

#include "efcake/errors.hpp"
#include "efcake/protocols.hpp"

using namespace efcake;
using efcake::testing::F;
using efcake::testing::make_agent;

namespace {

std::vector<AgentSpec> uniforms(std::size_t n) {
  std::vector<AgentSpec> out;
  for (std::size_t k = 0; k < n; ++k) out.push_back(make_agent("u" + std::to_string(k + 1), ValuationDensity::uniform()));
  return out;
}

void require_clean(const ProtocolRun& run) {
  for (const auto& c : run.report.checks) {
    INFO(run.protocol << " check " << c.name << " margin " << c.margin.to_string());
    CHECK(c.pass);
  }
}

}  // namespace

TEST_CASE("advantage graph") {
  AdvantageGraph g(4);
  g.add_edge(0, 1, 1);
  g.add_edge(1, 2, 2);
  CHECK(g.has_edge(1, 0));
  CHECK(g.degree(1) == 2);
  CHECK_FALSE(g.full_vertex());
  g.add_edge(1, 3, 3);
  CHECK(g.full_vertex() == std::size_t{1});
  CHECK_THROWS_AS(g.add_edge(0, 1, 4), RangeError);
  CHECK_THROWS_AS(g.add_edge(2, 2, 4), RangeError);
  CHECK(g.edges().back().stage == 3);
}

TEST_CASE("efbt graph step") {
  AdvantageGraph g(3);
  using D = Declaration;
  auto s = efbt_graph_step(g, {D::eq, D::neq, D::eq});
  CHECK(s.outcome == StageCase::case2);
  CHECK(s.pair == std::make_pair(std::size_t{0}, std::size_t{1}));
  g.add_edge(0, 1, 1);
  s = efbt_graph_step(g, {D::eq, D::neq, D::eq});
  CHECK(s.pair == std::make_pair(std::size_t{2}, std::size_t{1}));
  g.add_edge(2, 1, 2);
  CHECK(efbt_graph_step(g, {D::eq, D::neq, D::eq}).outcome == StageCase::case1);
  CHECK(efbt_graph_step(AdvantageGraph(3), {D::eq, D::eq, D::eq}).outcome == StageCase::case1);
}

TEST_CASE("cut and choose") {
  Ledger ledger(default_budget("cut_and_choose", 2));
  auto run = cut_and_choose(uniforms(2), PieceSet::whole(), ledger);
  require_clean(run);
  CHECK(run.allocation.shares[0].length() == F(1, 2));
  CHECK(ledger.cuts() == 1);

  // The second agent only cares about the right half.
  std::vector<AgentSpec> pair{make_agent("a", ValuationDensity::uniform()),
                              make_agent("b", ValuationDensity({F(0), F(1, 2), F(1)}, {F(0), F(2)}))};
  Ledger l2(OrdinalBudget{0, 1});
  auto right = cut_and_choose(pair, PieceSet::whole(), l2);
  CHECK(right.allocation.shares[1] == PieceSet::span(F(1, 2), F(1)));

  Ledger empty;
  CHECK_THROWS_AS(cut_and_choose(uniforms(2), PieceSet::whole(), empty), BudgetExhausted);
  CHECK_THROWS_AS(cut_and_choose(uniforms(3), PieceSet::whole(), ledger), ConfigError);
}

TEST_CASE("selfridge-conway") {
  Ledger same_ledger(OrdinalBudget{0, 5});
  auto same = selfridge_conway(uniforms(3), PieceSet::whole(), same_ledger);
  require_clean(same);
  CHECK(same_ledger.cuts() == 2);

  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Ledger ledger(OrdinalBudget{0, 5});
    auto run = selfridge_conway(random_profile(seed, 3), PieceSet::whole(), ledger);
    require_clean(run);
    CHECK(ledger.cuts() <= 5);
  }
}

TEST_CASE("even-paz") {
  Ledger one_ledger(default_budget("even_paz", 1));
  auto one = even_paz(uniforms(1), PieceSet::whole(), one_ledger);
  CHECK(one.allocation.shares[0] == PieceSet::whole());
  CHECK(one_ledger.cuts() == 0);

  Ledger four_ledger(default_budget("even_paz", 4));
  auto four = even_paz(uniforms(4), PieceSet::whole(), four_ledger);
  require_clean(four);
  for (const auto& s : four.allocation.shares) CHECK(s.length() == F(1, 4));
  CHECK(four_ledger.cuts() <= 8);

  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const std::size_t n = 2 + seed % 9;
    Ledger ledger(default_budget("even_paz", n));
    auto run = even_paz(random_profile(seed, n), PieceSet::whole(), ledger);
    require_clean(run);
  }
}

TEST_CASE("efbt real mode") {
  CHECK(default_budget("efbt", 4).to_string() == "5w+11");
  CHECK(default_budget("efbt", 2).to_string() == "1w+1");
  CHECK(default_budget("efbt", 3).to_string() == "3w+5");

  Ledger same_ledger(default_budget("efbt", 4));
  auto same = efbt(uniforms(4), PieceSet::whole(), EfbtMode::real, same_ledger, 1);
  require_clean(same);
  REQUIRE(same.stages.size() == 1);
  CHECK(same.stages[0].taken == StageCase::case1);
  for (const auto& s : same.allocation.shares) CHECK(s.length() == F(1, 4));

  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    const std::size_t n = 3 + seed % 3;
    Ledger ledger(default_budget("efbt", n));
    auto run = efbt(random_profile(seed, n), PieceSet::whole(), EfbtMode::real, ledger, seed);
    require_clean(run);
    CHECK(run.allocation.residue.empty());
    CHECK(run.stages.size() <= (n * n - 2 * n + 3) / 2);
    for (const auto& st : run.stages) {
      if (st.taken == StageCase::case2) CHECK(st.adv_report.overall());
    }
  }
}

TEST_CASE("efbt scripted mode") {
  auto agents = uniforms(4);
  for (auto& a : agents) a.policy = DeclarationPolicy::random(F(1, 2));
  Ledger ledger;
  auto run = efbt(agents, PieceSet::whole(), EfbtMode::scripted, ledger, 5);
  REQUIRE_FALSE(run.stages.empty());
  CHECK(ledger.cuts() == 0);
  CHECK(run.stages.size() <= 6);
  std::size_t case2 = 0;
  for (const auto& st : run.stages) case2 += st.taken == StageCase::case2;
  CHECK(run.graph.edge_count() == case2);

  auto scripted = uniforms(3);
  scripted[1].policy = DeclarationPolicy::scripted({Declaration::neq, Declaration::eq});
  scripted[2].policy = DeclarationPolicy::scripted({Declaration::eq, Declaration::eq});
  Ledger l2;
  auto s = efbt(scripted, PieceSet::whole(), EfbtMode::scripted, l2, 0);
  REQUIRE(s.stages.size() == 2);
  CHECK(s.stages[0].pair == std::make_pair(std::size_t{0}, std::size_t{1}));
  CHECK(s.stages[1].taken == StageCase::case1);

  Ledger l3;
  CHECK_THROWS_AS(efbt(uniforms(3), PieceSet::whole(), EfbtMode::scripted, l3, 0), ConfigError);
}

TEST_CASE("efrw and pikhurto") {
  const Fraction eps(1, 100);
  Ledger single_ledger(default_budget("efrw", 1));
  auto single = efrw(uniforms(1), uniforms(2), PieceSet::whole(), eps, single_ledger);
  require_clean(single);
  CHECK(single_ledger.cuts() == 0);

  for (const std::string name : {"efrw", "pikhurto"}) {
    for (std::uint64_t seed = 0; seed < 12; ++seed) {
      const std::size_t n = 2 + seed % 3;
      const std::size_t m = seed % 2;
      auto all = random_profile(seed, n + m);
      std::vector<AgentSpec> a(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(n));
      std::vector<AgentSpec> b(all.begin() + static_cast<std::ptrdiff_t>(n), all.end());
      Ledger ledger(default_budget(name, n));
      auto run = name == "efrw" ? efrw(a, b, PieceSet::whole(), eps, ledger)
                                : pikhurto(a, b, PieceSet::whole(), eps, ledger);
      INFO(name << " seed " << seed);
      require_clean(run);
      if (n == 2) CHECK(ledger.omega_conversions() == 1);
    }
  }
}

TEST_CASE("transcript") {
  Ledger ledger(default_budget("selfridge_conway", 3));
  auto run = selfridge_conway(random_profile(3, 3), PieceSet::whole(), ledger);
  std::ostringstream out;
  write_transcript(out, run, ledger);
  const auto text = out.str();
  CHECK(text.rfind("PROTOCOL selfridge_conway\n", 0) == 0);
  CHECK(text.find("BUDGET-INIT 5\n") != std::string::npos);
  CHECK(text.find("SHARE a1 ") != std::string::npos);
  CHECK(text.find("EVT 0 CUT a1 ") != std::string::npos);
  CHECK(text.find("RESIDUE empty\n") != std::string::npos);
}
