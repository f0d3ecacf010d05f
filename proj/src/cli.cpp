#include "efcake/cli.hpp"

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "efcake/analysis.hpp"
#include "efcake/errors.hpp"

namespace efcake::cli {

namespace {

std::string fixed(double x, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

void print_checks(const VerificationReport& report, std::ostream& out) {
  for (const auto& c : report.checks) {
    out << "CHECK " << c.name << ' ' << (c.pass ? "PASS" : "FAIL") << " margin=" << c.margin.to_string();
    if (c.worst_pair) out << " pair=" << c.worst_pair->first << ',' << c.worst_pair->second;
    out << '\n';
  }
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  if (text == "-") return out;
  std::stringstream in(text);
  for (std::string item; std::getline(in, item, ',');) out.push_back(item);
  return out;
}

struct Transcript {
  std::string protocol;
  std::string mode = "real";
  std::optional<Fraction> epsilon;
  std::vector<std::string> a_side;
  OrdinalBudget budget_init;
  OrdinalBudget budget_final;
  std::vector<OrdinalBudget> counters;
  std::uint64_t cut_events = 0;
  std::optional<std::uint64_t> cuts;
  std::vector<std::pair<std::string, PieceSet>> shares;
  PieceSet residue;
};

Transcript read_transcript(std::istream& in) {
  Transcript t;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    std::istringstream words(line);
    std::string tag;
    words >> tag;
    std::string rest;
    std::getline(words >> std::ws, rest);
    try {
      if (tag == "PROTOCOL") {
        t.protocol = rest;
      } else if (tag == "MODE") {
        t.mode = rest;
      } else if (tag == "EPSILON") {
        if (rest != "-") t.epsilon = Fraction::parse(rest);
      } else if (tag == "A-SIDE") {
        t.a_side = split_list(rest);
      } else if (tag == "BUDGET-INIT") {
        t.budget_init = OrdinalBudget::parse(rest);
      } else if (tag == "BUDGET-FINAL") {
        t.budget_final = OrdinalBudget::parse(rest);
      } else if (tag == "CUTS") {
        t.cuts = std::stoull(rest);
      } else if (tag == "SHARE") {
        const auto space = rest.find(' ');
        if (space == std::string::npos) throw ParseError("SHARE needs a name and a piece", 1);
        t.shares.emplace_back(rest.substr(0, space), PieceSet::parse(rest.substr(space + 1)));
      } else if (tag == "RESIDUE") {
        t.residue = PieceSet::parse(rest);
      } else if (tag == "EVT") {
        std::istringstream evt(rest);
        std::string stage, kind, agent, details;
        evt >> stage >> kind >> agent;
        std::getline(evt >> std::ws, details);
        if (kind == "CUT") ++t.cut_events;
        if (kind == "COUNTER") t.counters.push_back(OrdinalBudget::parse(details));
      }
    } catch (const ParseError& e) {
      throw ParseError("transcript line " + std::to_string(number) + ": " + e.what(), number);
    } catch (const std::logic_error& e) {
      throw ParseError("transcript line " + std::to_string(number) + ": bad number", number);
    }
  }
  if (t.protocol.empty()) throw ParseError("transcript has no PROTOCOL line", 1);
  if (!t.cuts) throw ParseError("transcript has no CUTS line", number);
  return t;
}

CheckResult counter_check(const Transcript& t) {
  CheckResult r{"counter_descent", true, std::nullopt, Fraction(0)};
  OrdinalBudget previous = t.budget_init;
  for (const auto& c : t.counters) {
    if (!(c < previous)) r.pass = false;
    previous = c;
  }
  if (previous != t.budget_final) r.pass = false;
  if (!r.pass) r.margin = Fraction(-1);
  return r;
}

CheckResult cut_count_check(const Transcript& t) {
  const auto declared = static_cast<std::int64_t>(*t.cuts);
  const auto seen = static_cast<std::int64_t>(t.cut_events);
  const auto counters = static_cast<std::int64_t>(t.counters.size());
  CheckResult r{"cut_count", declared == seen && declared == counters, std::nullopt, Fraction(0)};
  if (!r.pass) r.margin = Fraction(-std::max(std::abs(declared - seen), std::abs(declared - counters)));
  return r;
}

}  // namespace

int cmd_run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  std::vector<AgentSpec> agents;
  OrdinalBudget budget;
  try {
    if (!is_protocol(config.protocol)) throw ConfigError("unknown protocol " + config.protocol);
    agents = load_profile(config.agents_path);
    std::size_t a_count = agents.size();
    if (config.protocol == "efrw" || config.protocol == "pikhurto") {
      a_count = 0;
      for (const auto& a : agents) a_count += a.side == Side::a;
    }
    budget = config.budget ? OrdinalBudget::parse(*config.budget) : default_budget(config.protocol, a_count);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kParseError;
  }

  Ledger ledger(budget);
  ProtocolRun run;
  try {
    run = run_protocol(config.protocol, agents, config.epsilon, config.mode, config.seed, ledger);
  } catch (const BudgetExhausted& e) {
    err << "budget exhausted: " << e.what() << '\n';
    out << "BUDGET-EXHAUSTED after " << ledger.cuts() << " cuts\n";
    return kBudgetExhausted;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kParseError;
  } catch (const RangeError& e) {
    err << "error: " << e.what() << '\n';
    return kParseError;
  } catch (const Error& e) {
    err << "protocol failed: " << e.what() << '\n';
    return kVerificationFailed;
  }

  if (config.out_path) {
    std::ofstream file(*config.out_path);
    if (!file) {
      err << "error: cannot write " << *config.out_path << '\n';
      return kParseError;
    }
    write_transcript(file, run, ledger);
  }

  out << "PROTOCOL " << run.protocol << '\n';
  out << "AGENTS " << run.agents.size() << '\n';
  out << "BUDGET-INIT " << ledger.initial_budget().to_string() << '\n';
  for (const auto& s : run.stages) {
    out << "STAGE " << s.stage_id << ' ' << to_string(s.taken);
    if (s.pair) out << " pair=" << run.agents[s.pair->first].name << ',' << run.agents[s.pair->second].name;
    if (s.adv_path) out << " adv=" << to_string(*s.adv_path);
    out << '\n';
  }
  print_checks(run.report, out);
  out << "CUTS " << ledger.cuts() << '\n';
  out << "BUDGET-FINAL " << ledger.budget().to_string() << '\n';
  const bool ok = run.report.overall();
  out << "RESULT " << (ok ? "PASS" : "FAIL") << '\n';
  return ok ? kOk : kVerificationFailed;
}

int cmd_simulate(std::size_t n, std::uint64_t trials, std::uint64_t seed, std::ostream& out, std::ostream& err) {
  DynamicsStats stats;
  try {
    stats = efbt_dynamics(n, trials, seed);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kParseError;
  }
  out << std::setw(8) << "stages" << std::setw(12) << "trials" << '\n';
  for (const auto& [stages, count] : stats.histogram) {
    out << std::setw(8) << stages << std::setw(12) << count << '\n';
  }
  const std::uint64_t bound = lemma2_threshold(n);
  out << "STAT n " << n << '\n';
  out << "STAT trials " << trials << '\n';
  out << "STAT seed " << seed << '\n';
  out << "STAT mean_stages " << fixed(stats.mean.to_double()) << '\n';
  out << "STAT mean_stages_exact " << stats.mean.to_string() << '\n';
  out << "STAT variance " << fixed(stats.variance.to_double()) << '\n';
  out << "STAT std_error " << fixed(stats.std_error()) << '\n';
  out << "STAT max_stages " << stats.max_stages << '\n';
  out << "STAT stage_bound " << bound << '\n';
  out << "STAT degree_exits " << stats.degree_exits << '\n';
  out << "STAT case1_exits " << stats.case1_exits << '\n';
  bool ok = stats.max_stages <= bound;
  if (n <= 8) {
    const Fraction exact = exact_expected_stages(n);
    out << "STAT exact_expected_stages " << fixed(exact.to_double()) << '\n';
    out << "STAT exact_expected_stages_fraction " << exact.to_string() << '\n';
    const double se = stats.std_error();
    const double gap = stats.mean.to_double() - exact.to_double();
    if (se > 0) {
      out << "STAT z_score " << fixed(gap / se, 3) << '\n';
      ok = ok && std::abs(gap) <= 4 * se;
    } else {
      ok = ok && stats.mean == exact;
    }
  }
  out << "STAT closed_form_plus2 " << fixed(closed_form_expected_stages(n, 2)) << '\n';
  out << "STAT closed_form_plus1 " << fixed(closed_form_expected_stages(n, 1)) << '\n';
  out << "STAT closed_form_asymptotic " << fixed(asymptotic_expected_stages(n)) << '\n';
  return ok ? kOk : kVerificationFailed;
}

int cmd_recurrence(const std::string& protocol, std::size_t n, std::ostream& out, std::ostream& err) {
  try {
    if (protocol == "efbt") {
      out << std::setw(4) << "n" << std::setw(12) << "threshold" << std::setw(22) << "L" << "  bound\n";
      for (std::size_t k = 2; k <= n; ++k) {
        const auto b = efbt_worst_bound(k);
        out << std::setw(4) << k << std::setw(12) << lemma2_threshold(k) << std::setw(22) << b.pieces << "  "
            << b.budget.to_string() << '\n';
      }
      out << "EFBT(" << n << ") = " << efbt_worst_bound(n).budget.to_string() << '\n';
      return kOk;
    }
    if (protocol != "efrw" && protocol != "pikhurto") throw ConfigError("no recurrence for protocol " + protocol);
    const bool multi = protocol == "pikhurto";
    const std::size_t m_max = multi ? 15 : 50;
    const auto eval = [&](std::size_t k, std::size_t m) {
      return multi ? pikhurto_recurrence(k, m) : efrw_recurrence(k, m);
    };
    out << std::setw(4) << "n" << std::setw(12) << "T(n;0)" << std::setw(12) << "(2n-3)w" << '\n';
    for (std::size_t k = 1; k <= n; ++k) {
      const OrdinalBudget bound = k == 1 ? OrdinalBudget{} : OrdinalBudget{2 * k - 3, 0};
      out << std::setw(4) << k << std::setw(12) << eval(k, 0).to_string() << std::setw(12) << bound.to_string()
          << '\n';
    }
    const bool holds = multi ? pikhurto_bound_check(n, m_max) : efrw_bound_check(n, m_max);
    const OrdinalBudget bound = n == 1 ? OrdinalBudget{} : OrdinalBudget{2 * n - 3, 0};
    OrdinalBudget worst;
    for (std::size_t m = 0; m <= m_max; ++m) worst = std::max(worst, eval(n, m));
    out << "STAT m_checked 0.." << m_max << '\n';
    out << "STAT average_omega_phases " << fixed(average_omega_phases(protocol, n, 10000, 1), 3) << '\n';
    out << "T(" << n << ";*) = " << worst.to_string() << (holds ? " ≤ " : " > ") << bound.to_string() << '\n';
    return holds ? kOk : kVerificationFailed;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kParseError;
  }
}

int cmd_verify(const std::string& transcript_path, const std::string& agents_path, std::ostream& out,
               std::ostream& err) {
  Transcript t;
  std::vector<AgentSpec> ordered;
  std::vector<std::size_t> scope;
  try {
    std::ifstream in(transcript_path);
    if (!in) throw ParseError("cannot read " + transcript_path, 0);
    t = read_transcript(in);
    const auto profile = load_profile(agents_path);
    std::map<std::string, const AgentSpec*> by_name;
    for (const auto& a : profile) by_name[a.name] = &a;
    for (const auto& [name, piece] : t.shares) {
      const auto it = by_name.find(name);
      if (it == by_name.end()) throw ParseError("transcript names unknown agent " + name, 0);
      ordered.push_back(*it->second);
    }
    for (const auto& name : t.a_side) {
      std::size_t k = 0;
      while (k < ordered.size() && ordered[k].name != name) ++k;
      if (k == ordered.size()) throw ParseError("A-side agent " + name + " has no SHARE line", 0);
      scope.push_back(k);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kParseError;
  }

  VerificationReport report;
  if (t.mode == "real") {
    Allocation alloc;
    for (const auto& [name, piece] : t.shares) alloc.shares.push_back(piece);
    alloc.residue = t.residue;
    report = verify_allocation(t.protocol, ordered, scope, PieceSet::whole(), alloc, t.epsilon);
  }
  report.add(cut_count_check(t));
  report.add(counter_check(t));
  out << "PROTOCOL " << t.protocol << '\n';
  print_checks(report, out);
  const bool ok = report.overall();
  out << "RESULT " << (ok ? "PASS" : "FAIL") << '\n';
  return ok ? kOk : kVerificationFailed;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact envy-free cake-cutting laboratory"};
  app.require_subcommand(1);

  RunConfig config;
  std::string epsilon_text = "1/100";
  std::string mode_text = "real";
  std::string budget_text;
  std::string out_path;
  auto* run = app.add_subcommand("run", "Run a protocol on an agent profile");
  run->add_option("--protocol", config.protocol, "Protocol name")->required()->check(CLI::IsMember(protocol_names()));
  run->add_option("--agents", config.agents_path, "Agent profile")->required();
  run->add_option("--epsilon", epsilon_text, "Tolerance p/q for efrw and pikhurto");
  run->add_option("--budget", budget_text, "Initial cut counter, e.g. 5w+11");
  run->add_option("--mode", mode_text, "efbt mode")->check(CLI::IsMember({"real", "scripted"}));
  run->add_option("--seed", config.seed, "Declaration seed");
  run->add_option("--out", out_path, "Transcript path");

  std::size_t sim_n = 0;
  std::uint64_t trials = 100000;
  std::uint64_t sim_seed = 0;
  auto* simulate = app.add_subcommand("simulate", "Monte-Carlo dynamics of the scripted EFBT graph process");
  simulate->add_option("--n", sim_n, "Player count")->required();
  simulate->add_option("--trials", trials, "Trial count");
  simulate->add_option("--seed", sim_seed, "Base seed");

  std::string rec_protocol;
  std::size_t rec_n = 0;
  auto* recurrence = app.add_subcommand("recurrence", "Evaluate cut-count recurrences");
  recurrence->add_option("--protocol", rec_protocol, "efrw, pikhurto or efbt")
      ->required()
      ->check(CLI::IsMember({"efrw", "pikhurto", "efbt"}));
  recurrence->add_option("--n", rec_n, "Player count")->required();

  std::string transcript_path;
  std::string verify_agents;
  auto* verify = app.add_subcommand("verify", "Re-check a transcript against a profile");
  verify->add_option("--transcript", transcript_path, "Transcript path")->required();
  verify->add_option("--agents", verify_agents, "Agent profile")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kParseError;
  }

  if (*run) {
    try {
      config.epsilon = Fraction::parse(epsilon_text);
      if (!budget_text.empty()) config.budget = budget_text;
    } catch (const Error& e) {
      err << "error: " << e.what() << '\n';
      return kParseError;
    }
    config.mode = mode_text == "scripted" ? EfbtMode::scripted : EfbtMode::real;
    if (!out_path.empty()) config.out_path = out_path;
    return cmd_run(config, out, err);
  }
  if (*simulate) return cmd_simulate(sim_n, trials, sim_seed, out, err);
  if (*recurrence) return cmd_recurrence(rec_protocol, rec_n, out, err);
  return cmd_verify(transcript_path, verify_agents, out, err);
}

}  // namespace efcake::cli
