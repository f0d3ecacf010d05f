#include "efcake/analysis.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <numeric>
#include <thread>
#include <unordered_map>
#include <vector>

#include <gmpxx.h>

#include "efcake/agents.hpp"
#include "efcake/errors.hpp"
#include "efcake/protocols.hpp"
#include "efcake/rng.hpp"

namespace efcake {

namespace {

std::uint64_t pieces_for(std::size_t n) {
  std::uint64_t l = 1;
  for (std::uint64_t k = 2; k <= n; ++k) {
    const std::uint64_t g = std::gcd(l, k);
    if (l / g > UINT64_MAX / k) throw RangeError("lcm(2.." + std::to_string(n) + ") overflows 64 bits");
    l = l / g * k;
  }
  return l;
}

struct Trial {
  std::uint64_t stages = 0;
  bool degree_exit = false;
};

Trial run_trial(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  AdvantageGraph graph(n);
  std::vector<Declaration> decl(n, Declaration::eq);
  const Fraction half(1, 2);
  Trial t;
  for (;;) {
    if (graph.full_vertex()) {
      t.degree_exit = true;
      return t;
    }
    for (std::size_t k = 1; k < n; ++k) decl[k] = rng.bernoulli(half) ? Declaration::eq : Declaration::neq;
    ++t.stages;
    const auto step = efbt_graph_step(graph, decl);
    if (step.outcome == StageCase::case1) return t;
    graph.add_edge(step.pair->first, step.pair->second, static_cast<int>(t.stages));
  }
}

// Independent evaluator for the exact expectation. Vertex adjacency lives in
// one byte per vertex; the memo is keyed by the packed adjacency.
class StageOracle {
 public:
  explicit StageOracle(std::size_t n) : n_(n), threshold_(lemma2_threshold(n)), outcomes_(std::uint64_t{1} << (n - 1)) {
    base_ = 1;
    base_ <<= (n - 1);
  }

  Fraction expectation() {
    std::vector<std::uint8_t> adj(n_, 0);
    mpz_class numer = scaled(adj, 0);
    mpz_class denom = 1;
    for (std::uint64_t k = 0; k < threshold_; ++k) denom *= base_;
    return Fraction(mpq_class(numer, denom));
  }

 private:
  std::uint64_t key(const std::vector<std::uint8_t>& adj) const {
    std::uint64_t k = 0;
    for (std::size_t v = 0; v < n_; ++v) k |= std::uint64_t{adj[v]} << (8 * v);
    return k;
  }

  // S(g) = E(g) * K^(threshold - |g|) with K = 2^(n-1), so that
  // S(g) = K^(threshold - |g|) + Σ over Case-2 outcomes of S(g + edge).
  mpz_class scaled(std::vector<std::uint8_t>& adj, std::uint64_t edges) {
    const std::uint8_t full = static_cast<std::uint8_t>((1U << n_) - 1);
    for (std::size_t v = 0; v < n_; ++v) {
      if ((adj[v] | (1U << v)) == full) return 0;
    }
    const std::uint64_t k = key(adj);
    if (auto it = memo_.find(k); it != memo_.end()) return it->second;

    std::vector<std::pair<int, int>> added;
    std::vector<std::uint64_t> multiplicity;
    for (std::uint64_t draw = 0; draw < outcomes_; ++draw) {
      const unsigned eq = 1U | static_cast<unsigned>(draw << 1);
      const unsigned neq = full & ~eq;
      int pick_i = -1;
      int pick_j = -1;
      for (std::size_t i = 0; i < n_ && pick_i < 0; ++i) {
        if (!((eq >> i) & 1U)) continue;
        const unsigned open = neq & ~static_cast<unsigned>(adj[i]);
        if (open) {
          pick_i = static_cast<int>(i);
          pick_j = std::countr_zero(open);
        }
      }
      if (pick_i < 0) continue;
      auto pos = std::find(added.begin(), added.end(), std::make_pair(pick_i, pick_j));
      if (pos == added.end()) {
        added.emplace_back(pick_i, pick_j);
        multiplicity.push_back(1);
      } else {
        ++multiplicity[static_cast<std::size_t>(pos - added.begin())];
      }
    }

    mpz_class total = 1;
    for (std::uint64_t e = edges; e < threshold_; ++e) total *= base_;
    for (std::size_t r = 0; r < added.size(); ++r) {
      const auto [i, j] = added[r];
      adj[i] |= static_cast<std::uint8_t>(1U << j);
      adj[j] |= static_cast<std::uint8_t>(1U << i);
      total += scaled(adj, edges + 1) * static_cast<unsigned long>(multiplicity[r]);
      adj[i] &= static_cast<std::uint8_t>(~(1U << j));
      adj[j] &= static_cast<std::uint8_t>(~(1U << i));
    }
    memo_.emplace(k, total);
    return total;
  }

  std::size_t n_;
  std::uint64_t threshold_;
  std::uint64_t outcomes_;
  mpz_class base_;
  std::unordered_map<std::uint64_t, mpz_class> memo_;
};

OrdinalBudget omega(std::uint64_t c) { return OrdinalBudget{c, 0}; }

using Memo = std::map<std::pair<std::size_t, std::size_t>, OrdinalBudget>;

OrdinalBudget efrw_eval(std::size_t n, std::size_t m, Memo& memo) {
  if (n == 1) return {};
  if (n == 2) return omega(1);
  if (auto it = memo.find({n, m}); it != memo.end()) return it->second;
  OrdinalBudget best;
  for (std::size_t i = 1; i < n; ++i) {
    best = std::max(best, ordinal_add(efrw_eval(i, n + m - i, memo), efrw_eval(n - i, m + i, memo)));
  }
  const auto value = ordinal_add(omega(2), best);
  memo.emplace(std::make_pair(n, m), value);
  return value;
}

void for_each_partition(std::size_t n, std::size_t largest, std::vector<std::size_t>& parts,
                        const std::function<void(const std::vector<std::size_t>&)>& visit) {
  if (n == 0) {
    visit(parts);
    return;
  }
  for (std::size_t p = std::min(n, largest); p >= 1; --p) {
    parts.push_back(p);
    for_each_partition(n - p, p, parts, visit);
    parts.pop_back();
  }
}

OrdinalBudget pikhurto_eval(std::size_t n, std::size_t m, Memo& memo) {
  if (n == 1) return {};
  if (n == 2) return omega(1);
  if (auto it = memo.find({n, m}); it != memo.end()) return it->second;
  OrdinalBudget best;
  std::vector<std::size_t> parts;
  for_each_partition(n, n - 1, parts, [&](const std::vector<std::size_t>& ps) {
    OrdinalBudget sum;
    for (auto i : ps) sum = ordinal_add(sum, pikhurto_eval(i, n + m - i, memo));
    best = std::max(best, sum);
  });
  const auto value = ordinal_add(omega(2), best);
  memo.emplace(std::make_pair(n, m), value);
  return value;
}

template <typename Eval>
bool bound_check(std::size_t n_max, std::size_t m_max, Eval eval) {
  Memo memo;
  for (std::size_t m = 0; m <= m_max; ++m) {
    OrdinalBudget previous;
    for (std::size_t n = 1; n <= n_max; ++n) {
      const auto t = eval(n, m, memo);
      const OrdinalBudget bound = n == 1 ? OrdinalBudget{} : omega(2 * n - 3);
      if (!(t <= bound) || t < previous) return false;
      previous = t;
    }
  }
  return true;
}

std::uint64_t efrw_phases(std::size_t n, Rng& rng) {
  if (n <= 1) return 0;
  if (n == 2) return 1;
  const std::size_t i = 1 + rng.below(n - 1);
  return 2 + efrw_phases(i, rng) + efrw_phases(n - i, rng);
}

std::uint64_t pikhurto_phases(std::size_t n, Rng& rng) {
  if (n <= 1) return 0;
  if (n == 2) return 1;
  std::map<std::uint64_t, std::size_t> blocks;
  do {
    blocks.clear();
    for (std::size_t k = 0; k < n; ++k) ++blocks[rng.below(n)];
  } while (blocks.size() < 2);
  std::uint64_t total = 2;
  for (const auto& [level, size] : blocks) total += pikhurto_phases(size, rng);
  return total;
}

}  // namespace

EfbtBound efbt_worst_bound(std::size_t n) {
  if (n < 2) throw RangeError("efbt needs n >= 2");
  const auto pieces = pieces_for(n);
  return {OrdinalBudget{lemma2_threshold(n), pieces - 1}, pieces};
}

std::uint64_t lemma2_threshold(std::size_t n) {
  if (n < 2) throw RangeError("threshold needs n >= 2");
  // ⌈n(n-2)/2 + 1⌉ = ⌈(n² - 2n + 2)/2⌉
  return (n * n - 2 * n + 2 + 1) / 2;
}

Lemma2Check lemma2_brute_force(std::size_t n) {
  if (n < 2 || n > 7) throw RangeError("brute force is limited to 2 <= n <= 7");
  Lemma2Check out;
  out.n = n;
  out.threshold = lemma2_threshold(n);
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) pairs.emplace_back(a, b);
  }
  const std::uint64_t graphs = std::uint64_t{1} << pairs.size();
  std::uint64_t most_without = 0;
  for (std::uint64_t mask = 0; mask < graphs; ++mask) {
    std::vector<std::size_t> degree(n, 0);
    for (std::size_t e = 0; e < pairs.size(); ++e) {
      if ((mask >> e) & 1U) {
        ++degree[pairs[e].first];
        ++degree[pairs[e].second];
      }
    }
    const bool has_full = *std::max_element(degree.begin(), degree.end()) == n - 1;
    const auto edges = static_cast<std::uint64_t>(std::popcount(mask));
    if (edges >= out.threshold && !has_full) out.threshold_forces = false;
    if (!has_full) most_without = std::max(most_without, edges);
    if (edges + 1 == out.threshold && !has_full && !out.witness_below) out.witness_below = mask;
  }
  out.graphs = graphs;
  out.tight_threshold = most_without + 1;
  return out;
}

bool brute_force_check(std::size_t n) { return lemma2_brute_force(n).threshold_forces; }

double DynamicsStats::std_error() const {
  if (trials < 2) return 0.0;
  return std::sqrt(variance.to_double() / static_cast<double>(trials));
}

unsigned simulation_threads() {
  unsigned threads = std::max(1U, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("EFCAKE_THREADS")) {
    const long cap = std::strtol(env, nullptr, 10);
    if (cap >= 1) threads = std::min(threads, static_cast<unsigned>(cap));
  }
  return threads;
}

DynamicsStats efbt_dynamics(std::size_t n, std::uint64_t trials, std::uint64_t seed, unsigned threads) {
  if (n < 2) throw RangeError("dynamics need n >= 2");
  if (trials == 0) throw RangeError("trials must be positive");
  if (threads == 0) threads = simulation_threads();
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, trials));

  std::vector<Trial> results(trials);
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      for (std::uint64_t t = w; t < trials; t += threads) results[t] = run_trial(n, derive_seed(seed, t));
    });
  }
  for (auto& th : pool) th.join();

  DynamicsStats stats;
  stats.n = n;
  stats.trials = trials;
  mpz_class sum = 0;
  mpz_class squares = 0;
  for (const auto& r : results) {
    sum += r.stages;
    squares += r.stages * r.stages;
    ++stats.histogram[r.stages];
    (r.degree_exit ? stats.degree_exits : stats.case1_exits) += 1;
    stats.max_stages = std::max(stats.max_stages, r.stages);
  }
  const mpz_class count = static_cast<unsigned long>(trials);
  stats.mean = Fraction(mpq_class(sum, count));
  if (trials > 1) {
    stats.variance = Fraction(mpq_class(squares * count - sum * sum, count * (count - 1)));
  }
  return stats;
}

Fraction exact_expected_stages(std::size_t n) {
  if (n < 2 || n > 8) throw RangeError("exact expectation is limited to 2 <= n <= 8");
  return StageOracle(n).expectation();
}

double closed_form_expected_stages(std::size_t n, int offset) {
  double e = 1.0;
  for (std::size_t l = 2; l <= n; ++l) e += 1.0 / (1.0 - std::pow(0.5, static_cast<double>(l) + offset));
  return e;
}

double asymptotic_expected_stages(std::size_t n) {
  return (static_cast<double>(n + 1) * std::log(2.0) - 1.0) / std::log(2.0);
}

OrdinalBudget ordinal_add(const OrdinalBudget& a, const OrdinalBudget& b) {
  if (b.omega_coeff > 0) return {a.omega_coeff + b.omega_coeff, b.finite_part};
  return {a.omega_coeff, a.finite_part + b.finite_part};
}

OrdinalBudget efrw_recurrence(std::size_t n, std::size_t m) {
  if (n == 0) throw RangeError("recurrence needs n >= 1");
  Memo memo;
  return efrw_eval(n, m, memo);
}

OrdinalBudget pikhurto_recurrence(std::size_t n, std::size_t m) {
  if (n == 0 || n > 15) throw RangeError("partition recurrence is limited to 1 <= n <= 15");
  Memo memo;
  return pikhurto_eval(n, m, memo);
}

bool efrw_bound_check(std::size_t n_max, std::size_t m_max) {
  if (n_max > 50) throw RangeError("efrw recurrence check is limited to n <= 50");
  return bound_check(n_max, m_max, efrw_eval);
}

bool pikhurto_bound_check(std::size_t n_max, std::size_t m_max) {
  if (n_max > 15) throw RangeError("partition recurrence check is limited to n <= 15");
  return bound_check(n_max, m_max, pikhurto_eval);
}

double average_omega_phases(const std::string& protocol, std::size_t n, std::uint64_t trials, std::uint64_t seed) {
  if (trials == 0) throw RangeError("trials must be positive");
  std::uint64_t total = 0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    Rng rng(derive_seed(seed, t));
    total += protocol == "pikhurto" ? pikhurto_phases(n, rng) : efrw_phases(n, rng);
  }
  return static_cast<double>(total) / static_cast<double>(trials);
}

}  // namespace efcake
