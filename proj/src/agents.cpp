#include "efcake/agents.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "efcake/cake.hpp"
#include "efcake/errors.hpp"

namespace efcake {

const char* to_string(Declaration d) { return d == Declaration::eq ? "EQ" : "NEQ"; }

std::size_t& DeclarationCursor::position(std::size_t agent_index) {
  if (positions_.size() <= agent_index) positions_.resize(agent_index + 1, 0);
  return positions_[agent_index];
}

Fraction eval(const AgentSpec& agent, const PieceSet& p, Ledger& ledger) {
  Fraction value = measure(agent.valuation, p);
  ledger.record(EventKind::eval, agent.name, "piece=" + p.to_string() + " value=" + value.to_string());
  return value;
}

Fraction cut(const AgentSpec& agent, const PieceSet& p, const Fraction& target, Ledger& ledger) {
  Fraction x = quantile_cut(agent.valuation, p, target);
  ledger.charge(agent.name, "piece=" + p.to_string() + " target=" + target.to_string() + " at=" + x.to_string());
  return x;
}

Declaration declare(const AgentSpec& agent, std::size_t agent_index, const std::vector<PieceSet>& pieces,
                    DeclarationCursor& cursor, bool forced_eq) {
  if (pieces.empty()) throw RangeError("declare needs at least one piece");
  if (forced_eq) return Declaration::eq;
  switch (agent.policy.kind) {
    case DeclarationPolicy::Kind::honest:
      return unequal_witness(agent, pieces) ? Declaration::neq : Declaration::eq;
    case DeclarationPolicy::Kind::scripted: {
      auto& pos = cursor.position(agent_index);
      if (pos >= agent.policy.script.size()) {
        throw ConfigError("declaration script of agent " + agent.name + " is exhausted");
      }
      return agent.policy.script[pos++];
    }
    case DeclarationPolicy::Kind::random:
      return cursor.rng().bernoulli(agent.policy.probability_eq) ? Declaration::eq : Declaration::neq;
  }
  return Declaration::eq;
}

std::optional<std::pair<std::size_t, std::size_t>> unequal_witness(const AgentSpec& agent,
                                                                   const std::vector<PieceSet>& pieces) {
  // Equality is transitive, so if some pair differs then piece 0 differs from
  // some later piece; the least such q gives the least pair.
  const Fraction first = measure(agent.valuation, pieces.front());
  for (std::size_t q = 1; q < pieces.size(); ++q) {
    if (measure(agent.valuation, pieces[q]) != first) return std::make_pair(std::size_t{0}, q);
  }
  return std::nullopt;
}

std::vector<ValuationDensity> valuations_of(const std::vector<AgentSpec>& agents) {
  std::vector<ValuationDensity> out;
  out.reserve(agents.size());
  for (const auto& a : agents) out.push_back(a.valuation);
  return out;
}

// Profile files -------------------------------------------------------------

namespace {

std::vector<std::string> split_words(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> words;
  std::string w;
  while (in >> w) words.push_back(w);
  return words;
}

Fraction fraction_at(const std::string& text, std::size_t line_no) {
  try {
    return Fraction::parse(text);
  } catch (const ParseError&) {
    throw ParseError("bad fraction '" + text + "'", line_no);
  }
}

struct PendingAgent {
  AgentSpec spec;
  std::size_t line;
  std::vector<Fraction> breakpoints;
  std::vector<Fraction> densities;
};

void finish_agent(PendingAgent& pending, std::vector<AgentSpec>& out) {
  if (pending.densities.empty()) throw ParseError("agent " + pending.spec.name + " has no segments", pending.line);
  if (pending.breakpoints.back() != Fraction(1)) {
    throw ParseError("segments of agent " + pending.spec.name + " stop at " + pending.breakpoints.back().to_string() +
                         " instead of 1",
                     pending.line);
  }
  try {
    pending.spec.valuation = ValuationDensity(pending.breakpoints, pending.densities);
  } catch (const ConfigError& e) {
    throw ParseError(std::string("agent ") + pending.spec.name + ": " + e.what(), pending.line);
  }
  out.push_back(std::move(pending.spec));
}

DeclarationPolicy parse_policy(const std::string& value, std::size_t line_no) {
  if (value == "honest") return DeclarationPolicy::honest();
  if (value.rfind("random:", 0) == 0) {
    Fraction p = fraction_at(value.substr(7), line_no);
    if (p.sign() < 0 || p > Fraction(1)) throw ParseError("probability outside [0,1]", line_no);
    return DeclarationPolicy::random(p);
  }
  if (value.rfind("script:", 0) == 0) {
    std::vector<Declaration> script;
    std::istringstream in(value.substr(7));
    std::string item;
    while (std::getline(in, item, ',')) {
      if (item == "EQ") {
        script.push_back(Declaration::eq);
      } else if (item == "NEQ") {
        script.push_back(Declaration::neq);
      } else {
        throw ParseError("script entries must be EQ or NEQ, got '" + item + "'", line_no);
      }
    }
    return DeclarationPolicy::scripted(std::move(script));
  }
  throw ParseError("unknown policy '" + value + "'", line_no);
}

}  // namespace

std::vector<AgentSpec> parse_profile(std::istream& in) {
  std::vector<AgentSpec> out;
  std::optional<PendingAgent> pending;
  std::set<std::string> names;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto words = split_words(line);
    if (words.empty()) continue;
    if (words[0] == "agent") {
      if (pending) finish_agent(*pending, out);
      if (words.size() < 2) throw ParseError("agent line needs a name", line_no);
      if (!names.insert(words[1]).second) throw ParseError("duplicate agent name " + words[1], line_no);
      pending = PendingAgent{};
      pending->spec.name = words[1];
      pending->line = line_no;
      pending->breakpoints.push_back(Fraction(0));
      for (std::size_t k = 2; k < words.size(); ++k) {
        const auto eq = words[k].find('=');
        if (eq == std::string::npos) throw ParseError("expected key=value, got '" + words[k] + "'", line_no);
        const std::string key = words[k].substr(0, eq);
        const std::string value = words[k].substr(eq + 1);
        if (key == "advice") {
          if (value != "yes" && value != "no") throw ParseError("advice must be yes or no", line_no);
          pending->spec.follows_advice = value == "yes";
        } else if (key == "policy") {
          pending->spec.policy = parse_policy(value, line_no);
        } else if (key == "side") {
          if (value != "a" && value != "b") throw ParseError("side must be a or b", line_no);
          pending->spec.side = value == "a" ? Side::a : Side::b;
        } else {
          throw ParseError("unknown agent attribute '" + key + "'", line_no);
        }
      }
    } else if (words[0] == "seg") {
      if (!pending) throw ParseError("seg line before any agent", line_no);
      if (words.size() != 4) throw ParseError("seg needs <lo> <hi> <density>", line_no);
      const Fraction lo = fraction_at(words[1], line_no);
      const Fraction hi = fraction_at(words[2], line_no);
      const Fraction density = fraction_at(words[3], line_no);
      const Fraction& expected = pending->breakpoints.back();
      if (lo < expected) throw ParseError("segment overlaps the previous one", line_no);
      if (lo > expected) throw ParseError("gap between " + expected.to_string() + " and " + lo.to_string(), line_no);
      if (!(lo < hi)) throw ParseError("segment is empty or reversed", line_no);
      if (hi > Fraction(1)) throw ParseError("segment runs past 1", line_no);
      if (density.sign() < 0) throw ParseError("negative density", line_no);
      pending->breakpoints.push_back(hi);
      pending->densities.push_back(density);
    } else {
      throw ParseError("unknown directive '" + words[0] + "'", line_no);
    }
  }
  if (pending) finish_agent(*pending, out);
  if (out.empty()) throw ParseError("profile defines no agents", line_no == 0 ? 1 : line_no);
  return out;
}

std::vector<AgentSpec> load_profile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open profile " + path);
  return parse_profile(in);
}

std::string format_profile(const std::vector<AgentSpec>& agents) {
  std::ostringstream out;
  for (const auto& a : agents) {
    out << "agent " << a.name << " advice=" << (a.follows_advice ? "yes" : "no") << " policy=";
    switch (a.policy.kind) {
      case DeclarationPolicy::Kind::honest: out << "honest"; break;
      case DeclarationPolicy::Kind::random: out << "random:" << a.policy.probability_eq; break;
      case DeclarationPolicy::Kind::scripted: {
        out << "script:";
        for (std::size_t k = 0; k < a.policy.script.size(); ++k) {
          out << (k ? "," : "") << to_string(a.policy.script[k]);
        }
        break;
      }
    }
    if (a.side == Side::b) out << " side=b";
    out << '\n';
    for (std::size_t k = 0; k < a.valuation.segment_count(); ++k) {
      const auto s = a.valuation.segment(k);
      out << "seg " << s.lo << ' ' << s.hi << ' ' << s.density << '\n';
    }
  }
  return out.str();
}

ValuationDensity random_valuation(Rng& rng, std::size_t max_segments, std::uint64_t grid) {
  const std::size_t segments = 1 + static_cast<std::size_t>(rng.below(std::min<std::uint64_t>(max_segments, grid)));
  std::set<std::uint64_t> cuts;
  while (cuts.size() + 1 < segments) cuts.insert(1 + rng.below(grid - 1));
  std::vector<Fraction> breakpoints{Fraction(0)};
  for (auto c : cuts) breakpoints.emplace_back(static_cast<std::int64_t>(c), static_cast<std::int64_t>(grid));
  breakpoints.emplace_back(1);
  std::vector<Fraction> weights;
  bool any = false;
  for (std::size_t k = 0; k < segments; ++k) {
    const auto w = rng.below(10);
    any = any || w > 0;
    weights.emplace_back(static_cast<std::int64_t>(w));
  }
  if (!any) weights[rng.below(segments)] = Fraction(1 + static_cast<std::int64_t>(rng.below(9)));
  return ValuationDensity::from_weights(std::move(breakpoints), weights);
}

std::vector<AgentSpec> random_profile(std::uint64_t seed, std::size_t count, std::size_t max_segments) {
  Rng rng(seed);
  std::vector<AgentSpec> agents;
  agents.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    AgentSpec a;
    a.name = "a" + std::to_string(k + 1);
    a.valuation = random_valuation(rng, max_segments);
    agents.push_back(std::move(a));
  }
  return agents;
}

}  // namespace efcake
