#include "efcake/protocols.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <numeric>
#include <ostream>

#include "efcake/cake.hpp"
#include "efcake/errors.hpp"

namespace efcake {

namespace {

constexpr const char* kCutAndChoose = "cut_and_choose";
constexpr const char* kSelfridgeConway = "selfridge_conway";
constexpr const char* kEvenPaz = "even_paz";
constexpr const char* kEfbt = "efbt";
constexpr const char* kEfrw = "efrw";
constexpr const char* kPikhurto = "pikhurto";

std::vector<std::size_t> all_indices(std::size_t n) {
  std::vector<std::size_t> out(n);
  std::iota(out.begin(), out.end(), std::size_t{0});
  return out;
}

ProtocolRun start_run(const std::string& name, const std::vector<AgentSpec>& agents, const PieceSet& cake) {
  ProtocolRun run;
  run.protocol = name;
  run.agents = agents;
  run.scope = all_indices(agents.size());
  run.cake = cake;
  run.allocation.shares.assign(agents.size(), PieceSet());
  run.graph = AdvantageGraph(agents.size());
  return run;
}

void assign(Ledger& ledger, ProtocolRun& run, std::size_t who, const PieceSet& piece) {
  run.allocation.shares[who] = run.allocation.shares[who].unite(piece);
  ledger.record(EventKind::assign, run.agents[who].name, "piece=" + piece.to_string());
}

void finish(ProtocolRun& run) {
  run.report = verify_allocation(run.protocol, run.agents, run.scope, run.cake, run.allocation, run.epsilon);
}

void require_count(const std::vector<AgentSpec>& agents, std::size_t n, const char* protocol) {
  if (agents.size() != n) {
    throw ConfigError(std::string(protocol) + " needs exactly " + std::to_string(n) + " agents, got " +
                      std::to_string(agents.size()));
  }
}

// Index of the piece the agent would take: its favourite, ties to the lowest
// index. Agents that ignore advice take the lowest-index piece offered.
std::size_t choose(const AgentSpec& agent, const std::vector<PieceSet>& pieces, const std::vector<std::size_t>& offered,
                   Ledger& ledger) {
  if (!agent.follows_advice) return offered.front();
  std::size_t best = offered.front();
  Fraction best_value = eval(agent, pieces[best], ledger);
  for (std::size_t k = 1; k < offered.size(); ++k) {
    const Fraction v = eval(agent, pieces[offered[k]], ledger);
    if (v > best_value) {
      best_value = v;
      best = offered[k];
    }
  }
  return best;
}

void drop(std::vector<std::size_t>& offered, std::size_t piece) {
  offered.erase(std::find(offered.begin(), offered.end(), piece));
}

std::uint64_t ceil_log2(std::uint64_t n) { return n <= 1 ? 0 : std::bit_width(n - 1); }

void even_paz_split(ProtocolRun& run, const std::vector<std::size_t>& members, const PieceSet& piece, Ledger& ledger) {
  if (members.size() == 1) {
    assign(ledger, run, members.front(), piece);
    return;
  }
  const std::size_t k = members.size();
  const std::size_t left_count = k / 2;
  const Fraction share(static_cast<std::int64_t>(left_count), static_cast<std::int64_t>(k));
  std::vector<std::pair<Fraction, std::size_t>> marks;
  for (auto who : members) {
    const auto& agent = run.agents[who];
    marks.emplace_back(cut(agent, piece, eval(agent, piece, ledger) * share, ledger), who);
  }
  std::sort(marks.begin(), marks.end());
  const Fraction at = marks[left_count - 1].first;
  std::vector<std::size_t> left;
  std::vector<std::size_t> right;
  for (std::size_t r = 0; r < k; ++r) (r < left_count ? left : right).push_back(marks[r].second);
  std::sort(left.begin(), left.end());
  std::sort(right.begin(), right.end());
  even_paz_split(run, left, piece.below(at), ledger);
  even_paz_split(run, right, piece.at_or_above(at), ledger);
}

// EFBT ---------------------------------------------------------------------

std::uint64_t lcm_upto(std::size_t n) {
  std::uint64_t l = 1;
  for (std::uint64_t k = 2; k <= n; ++k) {
    const std::uint64_t g = std::gcd(l, k);
    if (l / g > UINT64_MAX / k) throw RangeError("lcm(2.." + std::to_string(n) + ") overflows");
    l = l / g * k;
  }
  return l;
}

std::uint64_t efbt_omega(std::size_t n) { return (n * n - 2 * n + 2 + 1) / 2; }

std::string declarations_text(const std::vector<Declaration>& d) {
  std::string s;
  for (std::size_t k = 0; k < d.size(); ++k) {
    if (k) s += ',';
    s += to_string(d[k]);
  }
  return s;
}

void efbt_scripted(ProtocolRun& run, Ledger& ledger, std::uint64_t seed) {
  const std::size_t n = run.agents.size();
  for (std::size_t k = 1; k < n; ++k) {
    if (run.agents[k].policy.kind == DeclarationPolicy::Kind::honest) {
      throw ConfigError("scripted mode needs random or scripted policies; " + run.agents[k].name + " is honest");
    }
  }
  DeclarationCursor cursor(seed);
  const std::vector<PieceSet> no_cake{PieceSet()};
  for (int stage = 1;; ++stage) {
    ledger.set_stage(stage);
    StageRecord rec;
    rec.stage_id = stage;
    if (auto v = run.graph.full_vertex()) {
      rec.taken = StageCase::degree_exit;
      rec.recipient = *v;
      run.stages.push_back(std::move(rec));
      return;
    }
    for (std::size_t k = 0; k < n; ++k) {
      rec.declarations.push_back(declare(run.agents[k], k, no_cake, cursor, k == 0));
    }
    ledger.record(EventKind::declare, "-", declarations_text(rec.declarations));
    const auto step = efbt_graph_step(run.graph, rec.declarations);
    rec.taken = step.outcome;
    rec.pair = step.pair;
    if (step.pair) run.graph.add_edge(step.pair->first, step.pair->second, stage);
    run.stages.push_back(std::move(rec));
    if (step.outcome == StageCase::case1) return;
  }
}

void efbt_real(ProtocolRun& run, Ledger& ledger, std::uint64_t seed) {
  const std::size_t n = run.agents.size();
  const std::uint64_t L = lcm_upto(n);
  DeclarationCursor cursor(seed);
  PieceSet rest = run.cake;
  std::optional<PhaseScope> carry;  // an adv phase stays open through the next split
  for (int stage = 1;; ++stage) {
    ledger.set_stage(stage);
    StageRecord rec;
    rec.stage_id = stage;
    const auto start_cuts = ledger.cuts();
    const auto close_record = [&] {
      rec.cuts_used = ledger.cuts() - start_cuts;
      for (const auto& a : run.agents) rec.residue_measures.push_back(measure(a.valuation, rest));
      run.stages.push_back(std::move(rec));
    };

    if (auto v = run.graph.full_vertex()) {
      carry.reset();
      rec.taken = StageCase::degree_exit;
      rec.recipient = *v;
      assign(ledger, run, *v, rest);
      rest = PieceSet();
      close_record();
      break;
    }

    std::vector<PieceSet> pieces;
    {
      std::optional<PhaseScope> own;
      if (!carry) own.emplace(ledger, "efbt.split", L - 1);
      const auto& a1 = run.agents[0];
      const Fraction total = eval(a1, rest, ledger);
      std::vector<Fraction> points;
      for (std::uint64_t k = 1; k < L; ++k) {
        points.push_back(cut(a1, rest, total * Fraction(static_cast<std::int64_t>(k), static_cast<std::int64_t>(L)),
                             ledger));
      }
      pieces = split_at(rest, points);
    }
    carry.reset();

    for (std::size_t k = 0; k < n; ++k) {
      rec.declarations.push_back(declare(run.agents[k], k, pieces, cursor, k == 0));
      ledger.record(EventKind::declare, run.agents[k].name, to_string(rec.declarations.back()));
    }
    const auto step = efbt_graph_step(run.graph, rec.declarations);
    rec.taken = step.outcome;

    if (step.outcome == StageCase::case1) {
      std::vector<std::size_t> eq;
      for (std::size_t k = 0; k < n; ++k) {
        if (rec.declarations[k] == Declaration::eq) eq.push_back(k);
      }
      const std::uint64_t each = L / eq.size();
      for (std::size_t t = 0; t < eq.size(); ++t) {
        std::vector<PieceSet> mine(pieces.begin() + static_cast<std::ptrdiff_t>(t * each),
                                   pieces.begin() + static_cast<std::ptrdiff_t>((t + 1) * each));
        assign(ledger, run, eq[t], unite_all(mine));
      }
      rest = PieceSet();
      close_record();
      break;
    }

    const auto [i, j] = *step.pair;
    const auto witness = unequal_witness(run.agents[j], pieces);
    if (!witness) {
      throw SubprotocolFailed("stage " + std::to_string(stage) + ": " + run.agents[j].name +
                              " declared NEQ but values every piece equally");
    }
    const PieceSet& P = pieces[witness->first];
    const PieceSet& Q = pieces[witness->second];
    const PieceSet R = rest.subtract(P.unite(Q));
    carry.emplace(ledger, "efbt.stage", adv_cut_bound(run.agents, rest) + (L - 1));
    AdvResult result;
    try {
      result = adv(run.agents, {i, j}, P, Q, R, ledger);
    } catch (const SubprotocolFailed& e) {
      throw SubprotocolFailed("stage " + std::to_string(stage) + ": " + e.what());
    } catch (const InvalidWitness& e) {
      throw SubprotocolFailed("stage " + std::to_string(stage) + ": " + e.what());
    }
    for (std::size_t k = 0; k < n; ++k) assign(ledger, run, k, result.allocation.shares[k]);
    rest = result.residue;
    run.graph.add_edge(i, j, stage);
    rec.pair = step.pair;
    rec.adv_path = result.path;
    rec.adv_report = std::move(result.report);
    close_record();
  }
  run.allocation.residue = rest;
}

// EFRW / Pikhurto ----------------------------------------------------------

// Density of `agent` restricted to `cake` and rescaled so the cake is worth 1.
// A player who values the cake at 0 is indifferent to every division of it and
// stands in with `proxy`.
AgentSpec normalized(const AgentSpec& agent, const PieceSet& cake, const ValuationDensity* proxy) {
  AgentSpec out = agent;
  const Fraction total = measure(agent.valuation, cake);
  if (total.is_zero()) {
    if (proxy) out.valuation = *proxy;
    return out;
  }
  std::vector<Fraction> points(agent.valuation.breakpoints());
  for (const auto& x : cake.endpoints()) points.push_back(x);
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  std::vector<Fraction> bps{points.front()};
  std::vector<Fraction> dens;
  for (std::size_t k = 0; k + 1 < points.size(); ++k) {
    const bool inside = cake.contains(PieceSet::span(points[k], points[k + 1]));
    const Fraction d = inside ? agent.valuation.density_at(points[k]) / total : Fraction(0);
    if (!dens.empty() && dens.back() == d) {
      bps.back() = points[k + 1];
    } else {
      dens.push_back(d);
      bps.push_back(points[k + 1]);
    }
  }
  out.valuation = ValuationDensity(std::move(bps), std::move(dens));
  return out;
}

ValuationDensity uniform_on(const PieceSet& cake) {
  AgentSpec u;
  u.valuation = ValuationDensity::uniform();
  return normalized(u, cake, nullptr).valuation;
}

std::string names_of(const std::vector<AgentSpec>& agents, const std::vector<std::size_t>& idx) {
  std::string s;
  for (auto k : idx) s += (s.empty() ? "" : ",") + agents[k].name;
  return s;
}

struct Divider {
  const std::vector<AgentSpec>& everyone;
  bool multiway;
  Ledger& ledger;
  ProtocolRun& run;
  int calls = 0;

  void divide(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b, const PieceSet& cake,
              const Fraction& eps, int depth) {
    ledger.set_stage(++calls);
    RecursionNode node;
    node.depth = depth;
    for (auto k : a) node.a_side.push_back(everyone[k].name);
    node.b_count = b.size();
    const std::size_t n = a.size();

    if (n == 1 || cake.empty()) {
      for (auto k : a) assign(ledger, run, k, k == a.front() ? cake : PieceSet());
      node.outcome = "single";
      run.recursion.push_back(std::move(node));
      return;
    }

    std::optional<std::size_t> stand_in;
    for (auto k : a) {
      if (measure(everyone[k].valuation, cake).sign() > 0) {
        stand_in = k;
        break;
      }
    }
    const ValuationDensity proxy_density =
        stand_in ? normalized(everyone[*stand_in], cake, nullptr).valuation : uniform_on(cake);
    std::vector<AgentSpec> local;
    for (auto k : a) local.push_back(normalized(everyone[k], cake, &proxy_density));
    for (auto k : b) local.push_back(normalized(everyone[k], cake, &proxy_density));

    if (n == 2) {
      auto split = near_exact_star(local, cake, 2, eps, ledger);
      const std::size_t pick = choose(local[1], split.bundles, {0, 1}, ledger);
      assign(ledger, run, a[1], split.bundles[pick]);
      assign(ledger, run, a[0], split.bundles[1 - pick]);
      node.outcome = "pair";
      run.recursion.push_back(std::move(node));
      return;
    }

    auto split = near_exact_star(local, cake, n, eps, ledger);
    const Fraction fair(1, static_cast<std::int64_t>(n));
    std::optional<std::size_t> disputed;
    for (std::size_t r = 0; r < n && !disputed; ++r) {
      for (std::size_t k = 0; k < n; ++k) {
        if (eval(local[k], split.bundles[r], ledger) != fair) {
          disputed = r;
          break;
        }
      }
    }
    if (!disputed) {
      for (std::size_t r = 0; r < n; ++r) assign(ledger, run, a[r], split.bundles[r]);
      node.outcome = "agree";
      run.recursion.push_back(std::move(node));
      return;
    }

    const PieceSet& contested = split.bundles[*disputed];
    std::vector<Fraction> values;
    for (std::size_t k = 0; k < n; ++k) values.push_back(measure(local[k].valuation, contested));
    const auto witness = witness_from_values(contested, values);
    const Fraction delta = eps / Fraction(static_cast<std::int64_t>(8 * n));
    Fraction max_value;
    for (const auto& p : local) max_value = max(max_value, measure(p.valuation, contested));
    const std::uint64_t shrink_bound = shrink_cut_bound(local.size(), max_value, delta);
    const std::uint64_t atoms = refine(cake, valuations_of(local)).size();
    const std::uint64_t umbrella = shrink_bound + 2 * (atoms + shrink_bound + 1) * (n + 2) + n;

    std::vector<std::vector<std::size_t>> groups;  // positions into `a`, high values first
    std::vector<PieceSet> group_cakes;
    Fraction sub_eps;
    {
      PhaseScope phase(ledger, multiway ? "pikhurto.controversy" : "efrw.controversy", umbrella);
      const std::vector<AgentSpec> a_local(local.begin(), local.begin() + static_cast<std::ptrdiff_t>(n));
      const std::vector<AgentSpec> b_local(local.begin() + static_cast<std::ptrdiff_t>(n), local.end());
      const auto shrunk = controversial_shrink(a_local, b_local, witness, delta, ledger);
      const PieceSet& piece = shrunk.piece;
      std::vector<Fraction> p(n);
      for (std::size_t k = 0; k < n; ++k) p[k] = measure(local[k].valuation, piece);
      if (multiway) {
        std::map<Fraction, std::vector<std::size_t>, std::greater<>> levels;
        for (std::size_t k = 0; k < n; ++k) levels[p[k]].push_back(k);
        for (auto& [value, members] : levels) groups.push_back(members);
      } else {
        groups = {shrunk.group_hi, shrunk.group_lo};
      }
      group_cakes = contract_split(local, groups, p, piece, cake.subtract(piece), sub_eps);
    }

    for (const auto& g : groups) node.group_sizes.push_back(g.size());
    node.outcome = "split";
    run.recursion.push_back(std::move(node));

    for (std::size_t g = 0; g < groups.size(); ++g) {
      std::vector<std::size_t> sub_a;
      std::vector<std::size_t> sub_b;
      std::vector<bool> inside(n, false);
      for (auto k : groups[g]) inside[k] = true;
      for (auto k : groups[g]) sub_a.push_back(a[k]);
      for (std::size_t k = 0; k < n; ++k) {
        if (!inside[k]) sub_b.push_back(a[k]);
      }
      sub_b.insert(sub_b.end(), b.begin(), b.end());
      divide(sub_a, sub_b, group_cakes[g], sub_eps, depth + 1);
    }
  }

  // Splits the cake into one bundle per group. The contested piece is sliced
  // exactly by ratios pi_g = i_g t_g and the rest near-exactly by f_g = i_g u_g,
  // with per-capita terms chosen so that a player whose odds x = p / (1 - p)
  // sit in group g's range strictly prefers group g's per-capita bundle.
  std::vector<PieceSet> contract_split(const std::vector<AgentSpec>& local,
                                       const std::vector<std::vector<std::size_t>>& groups,
                                       const std::vector<Fraction>& p, const PieceSet& piece, const PieceSet& other,
                                       Fraction& sub_eps) {
    const std::size_t k = groups.size();
    const Fraction one(1);
    std::vector<Fraction> x_min(k);
    std::vector<Fraction> x_max(k);
    std::vector<Fraction> size(k);
    for (std::size_t g = 0; g < k; ++g) {
      size[g] = Fraction(static_cast<std::int64_t>(groups[g].size()));
      for (std::size_t m = 0; m < groups[g].size(); ++m) {
        const auto who = groups[g][m];
        const Fraction x = p[who] / (one - p[who]);
        x_min[g] = m == 0 ? x : min(x_min[g], x);
        x_max[g] = m == 0 ? x : max(x_max[g], x);
      }
    }
    for (std::size_t g = 0; g + 1 < k; ++g) {
      if (!(x_max[g + 1] < x_min[g])) throw SubprotocolFailed("controversy groups are not separated");
    }

    Fraction weight_total;
    for (std::size_t g = 0; g < k; ++g) weight_total += size[g] * Fraction(static_cast<std::int64_t>(k - 1 - g));
    std::vector<Fraction> t(k);
    for (std::size_t g = 0; g < k; ++g) t[g] = Fraction(static_cast<std::int64_t>(k - 1 - g)) / weight_total;

    std::vector<Fraction> c(k);
    Fraction mu;
    for (std::size_t g = 0; g + 1 < k; ++g) {
      const Fraction theta = (x_max[g + 1] + x_min[g]) / Fraction(2);
      c[g + 1] = c[g] + theta * (t[g] - t[g + 1]);
      const Fraction margin = (t[g] - t[g + 1]) * min(x_min[g] - theta, theta - x_max[g + 1]) / Fraction(2);
      mu = g == 0 ? margin : min(mu, margin);
    }
    Fraction weighted_c;
    for (std::size_t g = 0; g < k; ++g) weighted_c += size[g] * c[g];
    const Fraction n(static_cast<std::int64_t>(p.size()));
    const Fraction u1 = (one - weighted_c) / n;
    std::vector<Fraction> f(k);
    std::vector<Fraction> pi(k);
    for (std::size_t g = 0; g < k; ++g) {
      f[g] = size[g] * (u1 + c[g]);
      pi[g] = size[g] * t[g];
      if (f[g].sign() <= 0 || f[g] >= one) throw SubprotocolFailed("unfair shares left (0, 1)");
    }
    const Fraction tol = mu / Fraction(8);
    sub_eps = tol;

    const auto rest = unfair_near_exact(local, other, f, tol, ledger);
    const auto slices = perfect_partition(valuations_of(local), piece, pi);
    charge_referee(ledger, new_cut_points(piece, slices), "contested piece");
    std::vector<PieceSet> out;
    for (std::size_t g = 0; g < k; ++g) out.push_back(rest.bundles[g].unite(slices[g]));
    return out;
  }
};

ProtocolRun recursive_division(const char* name, bool multiway, const std::vector<AgentSpec>& a_agents,
                               const std::vector<AgentSpec>& b_agents, const PieceSet& cake, const Fraction& epsilon,
                               Ledger& ledger) {
  if (a_agents.empty()) throw ConfigError(std::string(name) + " needs at least one A-side agent");
  if (epsilon.sign() <= 0 || epsilon >= Fraction(1)) throw RangeError("epsilon must lie in (0, 1)");
  std::vector<AgentSpec> everyone = a_agents;
  everyone.insert(everyone.end(), b_agents.begin(), b_agents.end());
  ProtocolRun run = start_run(name, everyone, cake);
  run.scope = all_indices(a_agents.size());
  run.epsilon = epsilon;
  Divider divider{everyone, multiway, ledger, run};
  std::vector<std::size_t> b(b_agents.size());
  std::iota(b.begin(), b.end(), a_agents.size());
  divider.divide(all_indices(a_agents.size()), b, cake, epsilon, 0);
  finish(run);
  return run;
}

}  // namespace

AdvantageGraph::AdvantageGraph(std::size_t n) : adjacency_(n, 0) {
  if (n > 64) throw RangeError("advantage graphs are limited to 64 vertices");
}

bool AdvantageGraph::has_edge(std::size_t a, std::size_t b) const {
  return a < size() && b < size() && ((adjacency_[a] >> b) & 1U);
}

void AdvantageGraph::add_edge(std::size_t a, std::size_t b, int stage) {
  if (a >= size() || b >= size() || a == b) throw RangeError("invalid edge");
  if (has_edge(a, b)) throw RangeError("edge already present");
  adjacency_[a] |= std::uint64_t{1} << b;
  adjacency_[b] |= std::uint64_t{1} << a;
  edges_.push_back({std::min(a, b), std::max(a, b), stage});
}

std::size_t AdvantageGraph::degree(std::size_t v) const { return std::popcount(adjacency_.at(v)); }

std::optional<std::size_t> AdvantageGraph::full_vertex() const {
  for (std::size_t v = 0; v < size(); ++v) {
    if (degree(v) + 1 == size()) return v;
  }
  return std::nullopt;
}

const char* to_string(StageCase c) {
  switch (c) {
    case StageCase::degree_exit: return "degree-exit";
    case StageCase::case1: return "case1";
    case StageCase::case2: return "case2";
  }
  return "?";
}

GraphStep efbt_graph_step(const AdvantageGraph& graph, const std::vector<Declaration>& declarations) {
  for (std::size_t i = 0; i < declarations.size(); ++i) {
    if (declarations[i] != Declaration::eq) continue;
    for (std::size_t j = 0; j < declarations.size(); ++j) {
      if (declarations[j] == Declaration::neq && !graph.has_edge(i, j)) {
        return {StageCase::case2, std::make_pair(i, j)};
      }
    }
  }
  return {StageCase::case1, std::nullopt};
}

ProtocolRun cut_and_choose(const std::vector<AgentSpec>& agents, const PieceSet& cake, Ledger& ledger) {
  require_count(agents, 2, kCutAndChoose);
  ProtocolRun run = start_run(kCutAndChoose, agents, cake);
  {
    PhaseScope phase(ledger, kCutAndChoose, 1);
    const Fraction at = cut(agents[0], cake, eval(agents[0], cake, ledger) / Fraction(2), ledger);
    const std::vector<PieceSet> halves{cake.below(at), cake.at_or_above(at)};
    const std::size_t pick = choose(agents[1], halves, {0, 1}, ledger);
    assign(ledger, run, 1, halves[pick]);
    assign(ledger, run, 0, halves[1 - pick]);
  }
  finish(run);
  return run;
}

ProtocolRun selfridge_conway(const std::vector<AgentSpec>& agents, const PieceSet& cake, Ledger& ledger) {
  require_count(agents, 3, kSelfridgeConway);
  ProtocolRun run = start_run(kSelfridgeConway, agents, cake);
  PhaseScope phase(ledger, kSelfridgeConway, 5);
  const auto& p1 = agents[0];
  const auto& p2 = agents[1];
  const auto& p3 = agents[2];
  const Fraction total = eval(p1, cake, ledger);
  std::vector<Fraction> points{cut(p1, cake, total / Fraction(3), ledger),
                               cut(p1, cake, total * Fraction(2, 3), ledger)};
  std::vector<PieceSet> pieces = split_at(cake, points);

  std::vector<Fraction> v2;
  for (const auto& piece : pieces) v2.push_back(eval(p2, piece, ledger));
  std::vector<std::size_t> order{0, 1, 2};
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v2[a] > v2[b]; });
  const std::size_t largest = order[0];
  const std::size_t second = order[1];

  std::vector<std::size_t> offered{0, 1, 2};
  if (v2[largest] == v2[second]) {
    const auto c3 = choose(p3, pieces, offered, ledger);
    drop(offered, c3);
    const auto c2 = choose(p2, pieces, offered, ledger);
    drop(offered, c2);
    assign(ledger, run, 2, pieces[c3]);
    assign(ledger, run, 1, pieces[c2]);
    assign(ledger, run, 0, pieces[offered.front()]);
  } else {
    const Fraction trim_at = cut(p2, pieces[largest], v2[second], ledger);
    const PieceSet trimmings = pieces[largest].at_or_above(trim_at);
    pieces[largest] = pieces[largest].below(trim_at);

    const auto c3 = choose(p3, pieces, offered, ledger);
    drop(offered, c3);
    std::size_t c2;
    if (c3 != largest && p2.follows_advice) {
      c2 = largest;
    } else {
      c2 = choose(p2, pieces, offered, ledger);
    }
    drop(offered, c2);
    assign(ledger, run, 2, pieces[c3]);
    assign(ledger, run, 1, pieces[c2]);
    assign(ledger, run, 0, pieces[offered.front()]);

    const std::size_t receiver = c3 == largest ? 2 : 1;
    const std::size_t cutter = receiver == 2 ? 1 : 2;
    const auto& ca = agents[cutter];
    const Fraction tv = eval(ca, trimmings, ledger);
    std::vector<Fraction> tpoints{cut(ca, trimmings, tv / Fraction(3), ledger),
                                  cut(ca, trimmings, tv * Fraction(2, 3), ledger)};
    const auto bits = split_at(trimmings, tpoints);
    std::vector<std::size_t> left{0, 1, 2};
    for (std::size_t who : {receiver, std::size_t{0}, cutter}) {
      const auto c = choose(agents[who], bits, left, ledger);
      drop(left, c);
      assign(ledger, run, who, bits[c]);
    }
  }
  phase.close();
  finish(run);
  return run;
}

ProtocolRun even_paz(const std::vector<AgentSpec>& agents, const PieceSet& cake, Ledger& ledger) {
  if (agents.empty()) throw ConfigError("even_paz needs at least one agent");
  ProtocolRun run = start_run(kEvenPaz, agents, cake);
  {
    PhaseScope phase(ledger, kEvenPaz, agents.size() * ceil_log2(agents.size()));
    even_paz_split(run, all_indices(agents.size()), cake, ledger);
  }
  finish(run);
  return run;
}

ProtocolRun efbt(const std::vector<AgentSpec>& agents, const PieceSet& cake, EfbtMode mode, Ledger& ledger,
                 std::uint64_t seed) {
  if (agents.size() < 2) throw ConfigError("efbt needs at least two agents");
  ProtocolRun run = start_run(kEfbt, agents, cake);
  run.mode = mode;
  if (mode == EfbtMode::scripted) {
    efbt_scripted(run, ledger, seed);
    return run;
  }
  efbt_real(run, ledger, seed);
  finish(run);
  return run;
}

ProtocolRun efrw(const std::vector<AgentSpec>& a_agents, const std::vector<AgentSpec>& b_agents, const PieceSet& cake,
                 const Fraction& epsilon, Ledger& ledger) {
  return recursive_division(kEfrw, false, a_agents, b_agents, cake, epsilon, ledger);
}

ProtocolRun pikhurto(const std::vector<AgentSpec>& a_agents, const std::vector<AgentSpec>& b_agents,
                     const PieceSet& cake, const Fraction& epsilon, Ledger& ledger) {
  return recursive_division(kPikhurto, true, a_agents, b_agents, cake, epsilon, ledger);
}

VerificationReport verify_allocation(const std::string& protocol, const std::vector<AgentSpec>& agents,
                                     const std::vector<std::size_t>& scope, const PieceSet& cake,
                                     const Allocation& alloc, const std::optional<Fraction>& epsilon) {
  VerificationReport report;
  report.add(check_partition(cake, alloc));
  if (protocol == kEvenPaz) {
    report.add(check_proportional(agents, alloc, cake, scope));
    return report;
  }
  report.add(check_envy_free(agents, alloc, Fraction(0), scope));
  if (protocol == kEfrw || protocol == kPikhurto) {
    std::vector<PieceSet> shares;
    for (auto k : scope) shares.push_back(alloc.shares[k]);
    auto within = check_near_exact(agents, shares, scope.size(), epsilon.value_or(Fraction(0)));
    within.name = "within_epsilon";
    report.add(within);
  } else {
    report.add(check_proportional(agents, alloc, cake, scope));
  }
  return report;
}

const std::vector<std::string>& protocol_names() {
  static const std::vector<std::string> names{kCutAndChoose, kSelfridgeConway, kEvenPaz, kEfbt, kEfrw, kPikhurto};
  return names;
}

bool is_protocol(const std::string& name) {
  const auto& names = protocol_names();
  return std::find(names.begin(), names.end(), name) != names.end();
}

OrdinalBudget default_budget(const std::string& protocol, std::size_t n) {
  if (protocol == kCutAndChoose) return {0, 1};
  if (protocol == kSelfridgeConway) return {0, 5};
  if (protocol == kEvenPaz) return {0, n * ceil_log2(n)};
  if (protocol == kEfbt) return {efbt_omega(n), lcm_upto(n) - 1};
  if (protocol == kEfrw || protocol == kPikhurto) return {n >= 2 ? 2 * n - 3 : 0, 0};
  throw ConfigError("unknown protocol " + protocol);
}

ProtocolRun run_protocol(const std::string& protocol, const std::vector<AgentSpec>& agents, const Fraction& epsilon,
                         EfbtMode mode, std::uint64_t seed, Ledger& ledger) {
  const PieceSet cake = PieceSet::whole();
  if (protocol == kCutAndChoose) return cut_and_choose(agents, cake, ledger);
  if (protocol == kSelfridgeConway) return selfridge_conway(agents, cake, ledger);
  if (protocol == kEvenPaz) return even_paz(agents, cake, ledger);
  if (protocol == kEfbt) return efbt(agents, cake, mode, ledger, seed);
  if (protocol == kEfrw || protocol == kPikhurto) {
    std::vector<AgentSpec> a;
    std::vector<AgentSpec> b;
    for (const auto& agent : agents) (agent.side == Side::a ? a : b).push_back(agent);
    return protocol == kEfrw ? efrw(a, b, cake, epsilon, ledger) : pikhurto(a, b, cake, epsilon, ledger);
  }
  throw ConfigError("unknown protocol " + protocol);
}

void write_transcript(std::ostream& out, const ProtocolRun& run, const Ledger& ledger) {
  out << "PROTOCOL " << run.protocol << '\n';
  out << "MODE " << (run.mode == EfbtMode::real ? "real" : "scripted") << '\n';
  out << "EPSILON " << (run.epsilon ? run.epsilon->to_string() : "-") << '\n';
  std::vector<std::size_t> b_side;
  for (std::size_t k = 0; k < run.agents.size(); ++k) {
    if (std::find(run.scope.begin(), run.scope.end(), k) == run.scope.end()) b_side.push_back(k);
  }
  out << "A-SIDE " << names_of(run.agents, run.scope) << '\n';
  out << "B-SIDE " << (b_side.empty() ? "-" : names_of(run.agents, b_side)) << '\n';
  out << "BUDGET-INIT " << ledger.initial_budget().to_string() << '\n';
  for (const auto& e : ledger.events()) {
    out << "EVT " << e.stage_id << ' ' << to_string(e.kind) << ' ' << e.agent << ' ' << e.details << '\n';
  }
  for (const auto& s : run.stages) {
    out << "STAGE " << s.stage_id << ' ' << to_string(s.taken);
    if (!s.declarations.empty()) out << " decl=" << declarations_text(s.declarations);
    if (s.pair) out << " pair=" << run.agents[s.pair->first].name << ',' << run.agents[s.pair->second].name;
    if (s.recipient) out << " recipient=" << run.agents[*s.recipient].name;
    if (s.adv_path) out << " adv=" << to_string(*s.adv_path);
    out << " cuts=" << s.cuts_used << '\n';
  }
  if (run.mode == EfbtMode::real) {
    for (std::size_t k = 0; k < run.agents.size(); ++k) {
      out << "SHARE " << run.agents[k].name << ' ' << run.allocation.shares[k].to_string() << '\n';
    }
    out << "RESIDUE " << run.allocation.residue.to_string() << '\n';
  }
  out << "CUTS " << ledger.cuts() << '\n';
  out << "BUDGET-FINAL " << ledger.budget().to_string() << '\n';
}

}  // namespace efcake
