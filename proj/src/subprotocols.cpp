#include "efcake/subprotocols.hpp"

#include <algorithm>
#include <numeric>

#include "efcake/cake.hpp"
#include "efcake/errors.hpp"

namespace efcake {

namespace {

void require_epsilon(const Fraction& epsilon) {
  if (epsilon.sign() < 0 || epsilon >= Fraction(1)) {
    throw RangeError("epsilon must lie in [0, 1), got " + epsilon.to_string());
  }
}

void require_ratios(const std::vector<Fraction>& ratios) {
  if (ratios.empty()) throw RangeError("at least one target share is required");
  Fraction total;
  for (const auto& r : ratios) {
    if (r.sign() <= 0) throw RangeError("target shares must be positive, got " + r.to_string());
    total += r;
  }
  if (total != Fraction(1)) throw RangeError("target shares sum to " + total.to_string() + ", not 1");
}

// The blend split: a fraction epsilon of every atom goes to a part that
// player 0 cuts by its own measure; the rest is sliced exactly for everyone.
// Player 0 is then exact and every other player is off by at most epsilon.
NearExactResult blend_split(const std::vector<AgentSpec>& players, const PieceSet& p,
                            const std::vector<Fraction>& ratios, const Fraction& epsilon, Ledger& ledger,
                            const std::string& label) {
  if (players.empty()) throw RangeError(label + " needs at least one player");
  require_epsilon(epsilon);
  require_ratios(ratios);
  const std::size_t parts = ratios.size();
  NearExactResult out;
  if (parts == 1) {
    out.bundles = {p};
    return out;
  }
  out.declared_bound = near_exact_cut_bound(players, p, parts);
  PhaseScope phase(ledger, label, out.declared_bound);

  const auto vs = valuations_of(players);
  PieceSet blend;
  PieceSet rest = p;
  if (epsilon.sign() > 0 && !p.empty()) {
    auto halves = perfect_partition(vs, p, {epsilon, Fraction(1) - epsilon});
    charge_referee(ledger, new_cut_points(p, halves), label + " blend");
    blend = std::move(halves[0]);
    rest = std::move(halves[1]);
  }

  std::vector<PieceSet> own(parts);
  if (!blend.empty()) {
    const Fraction total = measure(vs[0], blend);
    std::vector<Fraction> points;
    Fraction cumulative;
    for (std::size_t r = 0; r + 1 < parts; ++r) {
      cumulative += ratios[r];
      points.push_back(cut(players[0], blend, cumulative * total, ledger));
    }
    own = split_at(blend, points);
  }
  std::vector<PieceSet> shared(parts);
  if (!rest.empty()) {
    shared = perfect_partition(vs, rest, ratios);
    charge_referee(ledger, new_cut_points(rest, shared), label + " shares");
  }

  out.bundles.reserve(parts);
  for (std::size_t r = 0; r < parts; ++r) out.bundles.push_back(own[r].unite(shared[r]));

  const auto partition = check_partition(p, Allocation{out.bundles, {}});
  const auto contract = check_near_exact(players, out.bundles, ratios, epsilon, std::size_t{0});
  out.achieved_deviation = max_relative_deviation(players, out.bundles, ratios);
  if (!partition.pass || !contract.pass) {
    throw SubprotocolFailed(label + " missed its contract; best deviation " + out.achieved_deviation.to_string());
  }
  out.cuts_used = phase.close();
  return out;
}

Fraction value_of(const AgentSpec& a, const PieceSet& p) { return measure(a.valuation, p); }

// Row-reduces [rows | rhs] and returns one solution (free variables at 0), or
// nothing when the system is inconsistent.
std::optional<std::vector<Fraction>> solve_exact(std::vector<std::vector<Fraction>> rows, std::vector<Fraction> rhs,
                                                 std::size_t columns) {
  std::vector<std::size_t> pivot_col;
  std::size_t r = 0;
  for (std::size_t c = 0; c < columns && r < rows.size(); ++c) {
    std::size_t found = r;
    while (found < rows.size() && rows[found][c].is_zero()) ++found;
    if (found == rows.size()) continue;
    std::swap(rows[r], rows[found]);
    std::swap(rhs[r], rhs[found]);
    const Fraction lead = rows[r][c];
    for (auto& x : rows[r]) x /= lead;
    rhs[r] /= lead;
    for (std::size_t o = 0; o < rows.size(); ++o) {
      if (o == r || rows[o][c].is_zero()) continue;
      const Fraction factor = rows[o][c];
      for (std::size_t k = c; k < columns; ++k) rows[o][k] -= factor * rows[r][k];
      rhs[o] -= factor * rhs[r];
    }
    pivot_col.push_back(c);
    ++r;
  }
  for (std::size_t o = r; o < rows.size(); ++o) {
    if (!rhs[o].is_zero()) return std::nullopt;
  }
  std::vector<Fraction> z(columns);
  for (std::size_t k = 0; k < pivot_col.size(); ++k) z[pivot_col[k]] = rhs[k];
  return z;
}

Fraction dot(const std::vector<Fraction>& a, const std::vector<Fraction>& b) {
  Fraction s;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (!a[k].is_zero() && !b[k].is_zero()) s += a[k] * b[k];
  }
  return s;
}

VerificationReport adv_checks(const std::vector<AgentSpec>& players, const PieceSet& d, const Allocation& alloc,
                              std::pair<std::size_t, std::size_t> pair) {
  VerificationReport report;
  report.add(check_partition(d, alloc));
  Allocation shares_only{alloc.shares, {}};
  report.add(check_envy_free(players, shares_only));
  report.add(check_advantage(players, shares_only, pair, alloc.residue));
  return report;
}

// Moves a small exchange vector z between the slots of i and j inside every
// atom. Other players' densities are orthogonal to z, so they see no change;
// i and j each gain, and T is sized so that the gain covers T.
std::optional<Allocation> adv_primary(const std::vector<AgentSpec>& players, std::size_t i, std::size_t j,
                                      const PieceSet& d, const std::vector<Interval>& atoms) {
  const std::size_t n = players.size();
  const std::size_t cols = atoms.size();
  std::vector<std::vector<Fraction>> dens(n, std::vector<Fraction>(cols));
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t a = 0; a < cols; ++a) dens[k][a] = players[k].valuation.density_at(atoms[a].lo);
  }
  std::vector<Fraction> totals(n);
  for (std::size_t k = 0; k < n; ++k) totals[k] = value_of(players[k], d);

  std::vector<std::vector<Fraction>> rows;
  std::vector<Fraction> rhs;
  for (std::size_t k = 0; k < n; ++k) {
    if (k == i || k == j || totals[k].is_zero()) continue;
    rows.push_back(dens[k]);
    rhs.emplace_back(0);
  }
  if (!totals[i].is_zero()) {
    rows.push_back(dens[i]);
    rhs.emplace_back(1);
  }
  rows.push_back(dens[j]);
  rhs.emplace_back(-1);
  auto solved = solve_exact(std::move(rows), std::move(rhs), cols);
  if (!solved) return std::nullopt;
  auto z = std::move(*solved);

  const Fraction two_n(static_cast<std::int64_t>(2 * n));
  std::optional<Fraction> scale;
  for (std::size_t a = 0; a < cols; ++a) {
    if (z[a].is_zero()) continue;
    const Fraction limit = atoms[a].length() / (two_n * abs(z[a]));
    scale = scale ? min(*scale, limit) : limit;
  }
  if (!scale) return std::nullopt;
  for (auto& x : z) x *= *scale;

  const Fraction gain_i = dot(dens[i], z);
  const Fraction gain_j = -dot(dens[j], z);
  Fraction tau(1, 2);
  if (!totals[i].is_zero()) tau = min(tau, Fraction(2) * gain_i / totals[i]);
  tau = min(tau, Fraction(2) * gain_j / totals[j]);
  if (tau.sign() <= 0) return std::nullopt;

  std::vector<std::vector<Interval>> parts(n);
  std::vector<Interval> residue;
  const Fraction n_frac(static_cast<std::int64_t>(n));
  for (std::size_t a = 0; a < cols; ++a) {
    const Fraction lo = atoms[a].lo;
    const Fraction len = atoms[a].length();
    const Fraction t_end = lo + tau * len;
    residue.push_back({lo, t_end});
    const Fraction slot = (Fraction(1) - tau) * len / n_frac;
    for (std::size_t r = 0; r < n; ++r) {
      const Fraction s = t_end + slot * Fraction(static_cast<std::int64_t>(r));
      Fraction start = s;
      if (r == j && z[a].sign() > 0) {
        parts[i].push_back({s, s + z[a]});
        start = s + z[a];
      } else if (r == i && z[a].sign() < 0) {
        parts[j].push_back({s, s - z[a]});
        start = s - z[a];
      }
      parts[r].push_back({start, s + slot});
    }
  }
  Allocation alloc;
  for (auto& iv : parts) alloc.shares.push_back(PieceSet::from_intervals(std::move(iv)));
  alloc.residue = PieceSet::from_intervals(std::move(residue));
  return alloc;
}

}  // namespace

const char* to_string(AdvPath path) { return path == AdvPath::primary ? "primary" : "fallback"; }

std::uint64_t near_exact_cut_bound(const std::vector<AgentSpec>& players, const PieceSet& p, std::size_t parts) {
  const auto vs = valuations_of(players);
  const std::uint64_t atoms = refine(p, vs).size();
  return atoms * (parts + 1) + parts;
}

std::uint64_t adv_cut_bound(const std::vector<AgentSpec>& players, const PieceSet& d) {
  const auto vs = valuations_of(players);
  return refine(d, vs).size() * (players.size() + 4);
}

std::uint64_t shrink_cut_bound(std::size_t players, const Fraction& max_value, const Fraction& delta) {
  std::uint64_t halvings = 0;
  Fraction reach = delta;
  while (reach < max_value) {
    reach *= Fraction(2);
    ++halvings;
  }
  return players * halvings;
}

void charge_referee(Ledger& ledger, std::size_t count, const std::string& what) {
  for (std::size_t k = 0; k < count; ++k) ledger.charge("referee", what);
}

NearExactResult near_exact_star(const std::vector<AgentSpec>& players, const PieceSet& p, std::size_t parts,
                                const Fraction& epsilon, Ledger& ledger) {
  if (parts == 0) throw RangeError("near_exact_star needs at least one part");
  return blend_split(players, p, equal_ratios(parts), epsilon, ledger, "near_exact_star");
}

NearExactResult unfair_near_exact(const std::vector<AgentSpec>& players, const PieceSet& p,
                                  const std::vector<Fraction>& ratios, const Fraction& epsilon, Ledger& ledger) {
  return blend_split(players, p, ratios, epsilon, ledger, "unfair_near_exact");
}

NearExactResult unfair_near_exact(const std::vector<AgentSpec>& players, const PieceSet& p, const Fraction& f1,
                                  const Fraction& f2, const Fraction& epsilon, Ledger& ledger) {
  if (f1.sign() <= 0 || f2.sign() <= 0 || f1 + f2 != Fraction(1)) {
    throw RangeError("unfair shares must be positive and sum to 1, got " + f1.to_string() + " and " + f2.to_string());
  }
  return unfair_near_exact(players, p, std::vector<Fraction>{f1, f2}, epsilon, ledger);
}

ControversyWitness witness_from_values(const PieceSet& piece, const std::vector<Fraction>& values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
  std::size_t split = 0;
  Fraction widest;
  for (std::size_t k = 0; k + 1 < order.size(); ++k) {
    const Fraction gap = values[order[k]] - values[order[k + 1]];
    if (gap > widest) {
      widest = gap;
      split = k + 1;
    }
  }
  if (split == 0) throw InvalidWitness("all players value the piece equally");
  ControversyWitness w;
  w.piece = piece;
  w.group_hi.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(split));
  w.group_lo.assign(order.begin() + static_cast<std::ptrdiff_t>(split), order.end());
  w.alpha = values[order[split - 1]];
  w.beta = values[order[split]];
  std::sort(w.group_hi.begin(), w.group_hi.end());
  std::sort(w.group_lo.begin(), w.group_lo.end());
  return w;
}

void validate_witness(const std::vector<AgentSpec>& a_players, const ControversyWitness& w) {
  if (w.group_hi.empty() || w.group_lo.empty()) throw InvalidWitness("both groups must be nonempty");
  if (!(w.alpha > w.beta)) throw InvalidWitness("alpha must exceed beta");
  std::vector<int> seen(a_players.size(), 0);
  for (auto k : w.group_hi) {
    if (k >= a_players.size() || seen[k]++) throw InvalidWitness("groups must partition the A-players");
    if (value_of(a_players[k], w.piece) < w.alpha) throw InvalidWitness(a_players[k].name + " is below alpha");
  }
  for (auto k : w.group_lo) {
    if (k >= a_players.size() || seen[k]++) throw InvalidWitness("groups must partition the A-players");
    if (value_of(a_players[k], w.piece) > w.beta) throw InvalidWitness(a_players[k].name + " is above beta");
  }
  if (std::count(seen.begin(), seen.end(), 1) != static_cast<std::ptrdiff_t>(a_players.size())) {
    throw InvalidWitness("groups must cover every A-player");
  }
}

ControversyWitness controversial_shrink(const std::vector<AgentSpec>& a_players,
                                        const std::vector<AgentSpec>& b_players, const ControversyWitness& witness,
                                        const Fraction& delta, Ledger& ledger) {
  if (delta.sign() <= 0) throw RangeError("delta must be positive");
  validate_witness(a_players, witness);

  std::vector<AgentSpec> everyone = a_players;
  everyone.insert(everyone.end(), b_players.begin(), b_players.end());

  auto hi = witness.group_hi.front();
  for (auto k : witness.group_hi) {
    if (value_of(a_players[k], witness.piece) > value_of(a_players[hi], witness.piece)) hi = k;
  }
  auto lo = witness.group_lo.front();
  for (auto k : witness.group_lo) {
    if (value_of(a_players[k], witness.piece) < value_of(a_players[lo], witness.piece)) lo = k;
  }
  const auto gap = [&](const PieceSet& x) { return abs(value_of(a_players[hi], x) - value_of(a_players[lo], x)); };

  Fraction max_value;
  for (const auto& a : everyone) max_value = max(max_value, value_of(a, witness.piece));
  if (max_value <= delta) {
    ControversyWitness same = witness;
    same.cuts_used = 0;
    return same;
  }

  const std::uint64_t bound = shrink_cut_bound(everyone.size(), max_value, delta);
  PhaseScope phase(ledger, "controversial_shrink", bound);
  PieceSet piece = witness.piece;
  for (bool active = true; active;) {
    active = false;
    for (const auto& a : everyone) {
      const Fraction v = value_of(a, piece);
      if (v <= delta) continue;
      active = true;
      const Fraction x = cut(a, piece, v / Fraction(2), ledger);
      PieceSet left = piece.below(x);
      PieceSet right = piece.at_or_above(x);
      piece = gap(right) > gap(left) ? std::move(right) : std::move(left);
    }
  }

  std::vector<Fraction> values;
  for (const auto& a : a_players) values.push_back(value_of(a, piece));
  ControversyWitness out = witness_from_values(piece, values);
  validate_witness(a_players, out);
  if (!piece.subtract(witness.piece).empty()) throw SubprotocolFailed("shrunk piece left the input piece");
  for (const auto& a : everyone) {
    if (value_of(a, piece) > delta) throw SubprotocolFailed("shrunk piece still worth more than delta to " + a.name);
  }
  out.cuts_used = phase.close();
  return out;
}

AdvResult adv(const std::vector<AgentSpec>& players, std::pair<std::size_t, std::size_t> pair, const PieceSet& P,
              const PieceSet& Q, const PieceSet& R, Ledger& ledger) {
  const auto [i, j] = pair;
  const std::size_t n = players.size();
  if (i >= n || j >= n || i == j) throw RangeError("adv needs two distinct players");
  if (value_of(players[i], P) != value_of(players[i], Q)) {
    throw InvalidWitness(players[i].name + " must value P and Q equally");
  }
  if (value_of(players[j], P) == value_of(players[j], Q)) {
    throw InvalidWitness(players[j].name + " must value P and Q differently");
  }
  if (!P.disjoint(Q) || !P.disjoint(R) || !Q.disjoint(R)) throw RangeError("P, Q and R must be disjoint");

  const PieceSet d = unite_all({P, Q, R});
  AdvResult out;
  out.pair = pair;
  PhaseScope phase(ledger, "adv", adv_cut_bound(players, d));
  const auto vs = valuations_of(players);
  const auto atoms = refine(d, vs);

  if (auto primary = adv_primary(players, i, j, d, atoms)) {
    auto report = adv_checks(players, d, *primary, pair);
    if (report.overall()) {
      out.allocation = std::move(*primary);
      out.report = std::move(report);
      out.path = AdvPath::primary;
    }
  }
  if (out.path == AdvPath::fallback) {
    out.allocation = Allocation{perfect_partition(vs, d, equal_ratios(n)), {}};
    out.report = adv_checks(players, d, out.allocation, pair);
    if (!out.report.overall()) throw SubprotocolFailed("adv fallback failed its own checks");
  }
  out.residue = out.allocation.residue;

  std::vector<PieceSet> pieces = out.allocation.shares;
  pieces.push_back(out.residue);
  charge_referee(ledger, new_cut_points(d, pieces), "adv " + std::string(to_string(out.path)));
  out.cuts_used = phase.close();
  return out;
}

}  // namespace efcake
