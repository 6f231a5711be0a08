#pragma once

// Problem builders: Max-Cut on cubic graphs, the J-Moebius ladder, Hebbian
// memories, a two-bit ripple-carry adder and factorization Hamiltonians.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <istream>
#include <map>
#include <numeric>
#include <optional>
#include <ostream>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "spinel/eliminate.hpp"
#include "spinel/error.hpp"
#include "spinel/poly.hpp"
#include "spinel/solve.hpp"

namespace spinel {

namespace detail {

inline std::mt19937_64 seeded_rng(std::uint64_t seed, std::uint64_t stream = 0) {
  return std::mt19937_64(splitmix64(splitmix64(seed) ^ (stream * 0x632be59bd9b4e019ULL)));
}

// Uniform index in [0, n); the tiny modulo bias is irrelevant here and keeps
// results identical across standard libraries.
inline std::size_t pick(std::mt19937_64& rng, std::size_t n) { return static_cast<std::size_t>(rng() % n); }

template <typename T>
void shuffle(std::vector<T>& v, std::mt19937_64& rng) {
  for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[pick(rng, i)]);
}

}  // namespace detail

// Five-spin example with mixed 2- and 3-body terms; minimum -14 at
// (1, 1, -1, 1, -1).
inline Polynomial worked_example() {
  return parse_polynomial(
      "t 1 1 2\nt 2 1 3 4\nt -1 1 4 5\nt 3 2 3 4\nt -1 3 4 5\n"
      "t 2 2 4 5\nt -1 3 5\nt 3 4 5\nt 1 2 3\nt 2 3 4\nt 1 1 5\n");
}

// ---------------------------------------------------------------------------
// Graphs (vertices 1..n)

struct Edge {
  SpinIndex u = 0, v = 0;  // u < v
  Rational w = 1;
  friend bool operator==(const Edge&, const Edge&) = default;
};

class Graph {
 public:
  Graph() = default;
  explicit Graph(std::size_t n) : n_(n) {}

  void add_edge(SpinIndex a, SpinIndex b, const Rational& w = 1) {
    if (a == b) throw Error("self-loop on vertex " + std::to_string(a));
    if (a == 0 || b == 0 || a > n_ || b > n_) throw Error("edge endpoint out of range 1.." + std::to_string(n_));
    if (a > b) std::swap(a, b);
    if (!keys_.insert({a, b}).second) {
      throw Error("duplicate edge " + std::to_string(a) + "-" + std::to_string(b));
    }
    edges_.push_back({a, b, w});
  }

  std::size_t n() const noexcept { return n_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }

  std::vector<std::size_t> degrees() const {
    std::vector<std::size_t> d(n_ + 1, 0);
    for (const auto& e : edges_) {
      ++d[e.u];
      ++d[e.v];
    }
    return d;
  }

  bool is_cubic() const {
    auto d = degrees();
    return std::all_of(d.begin() + 1, d.end(), [](std::size_t x) { return x == 3; });
  }

  bool connected() const {
    if (n_ == 0) return true;
    std::vector<std::vector<SpinIndex>> adj(n_ + 1);
    for (const auto& e : edges_) {
      adj[e.u].push_back(e.v);
      adj[e.v].push_back(e.u);
    }
    std::vector<bool> seen(n_ + 1, false);
    std::vector<SpinIndex> stack{1};
    seen[1] = true;
    std::size_t count = 1;
    while (!stack.empty()) {
      SpinIndex x = stack.back();
      stack.pop_back();
      for (SpinIndex y : adj[x]) {
        if (!seen[y]) {
          seen[y] = true;
          ++count;
          stack.push_back(y);
        }
      }
    }
    return count == n_;
  }

  Rational total_weight() const {
    Rational w = 0;
    for (const auto& e : edges_) w += e.w;
    return w;
  }

 private:
  std::size_t n_ = 0;
  std::vector<Edge> edges_;
  std::set<std::pair<SpinIndex, SpinIndex>> keys_;
};

// Format: "n <count>" then "e <u> <v> [<weight>]" lines; '#' comments.
inline void write_graph(std::ostream& os, const Graph& g) {
  os << "n " << g.n() << '\n';
  for (const auto& e : g.edges()) {
    os << "e " << e.u << ' ' << e.v;
    if (e.w != 1) os << ' ' << format_rational(e.w);
    os << '\n';
  }
}

inline Graph read_graph(std::istream& is) {
  std::optional<Graph> g;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    auto toks = detail::split_ws(line);
    if (toks.empty() || toks[0].front() == '#') continue;
    if (toks[0] == "n") {
      if (g || toks.size() != 2 || !parse_integer_digits(toks[1], false)) throw ParseError(line_no, "bad 'n' header");
      g.emplace(std::stoul(std::string(toks[1])));
    } else if (toks[0] == "e") {
      if (!g) throw ParseError(line_no, "edge before 'n' header");
      if (toks.size() != 3 && toks.size() != 4) throw ParseError(line_no, "edge line is 'e <u> <v> [<w>]'");
      Rational w = 1;
      if (toks.size() == 4 && !try_parse_rational(toks[3], w)) throw ParseError(line_no, "malformed weight");
      try {
        g->add_edge(detail::parse_index(toks[1], line_no), detail::parse_index(toks[2], line_no), w);
      } catch (const ParseError&) {
        throw;
      } catch (const Error& e) {
        throw ParseError(line_no, e.what());
      }
    } else {
      throw ParseError(line_no, "unrecognized line '" + line + "'");
    }
  }
  if (!g) throw ParseError(line_no, "missing 'n' header");
  return *g;
}

// Pairing model: 3n half-edges matched uniformly; matchings with loops or
// repeated edges, and disconnected results, are redrawn.
inline Graph random_cubic_graph(std::size_t n, std::uint64_t seed) {
  if (n < 4 || n % 2 != 0) throw Error("cubic graphs need an even vertex count >= 4");
  auto rng = detail::seeded_rng(seed, 1);
  std::vector<SpinIndex> points(3 * n);
  while (true) {
    for (std::size_t k = 0; k < points.size(); ++k) points[k] = static_cast<SpinIndex>(k / 3 + 1);
    detail::shuffle(points, rng);
    Graph g(n);
    bool ok = true;
    std::set<std::pair<SpinIndex, SpinIndex>> seen;
    for (std::size_t k = 0; k < points.size() && ok; k += 2) {
      SpinIndex a = std::min(points[k], points[k + 1]), b = std::max(points[k], points[k + 1]);
      if (a == b || !seen.insert({a, b}).second) ok = false;
    }
    if (!ok) continue;
    for (const auto& [a, b] : seen) g.add_edge(a, b);
    if (g.connected()) return g;
  }
}

// ---------------------------------------------------------------------------
// Max-Cut: H = sum w s_u s_v, cut = (W - H) / 2.

inline Polynomial maxcut_hamiltonian(const Graph& g) {
  Polynomial h;
  for (SpinIndex v = 1; v <= g.n(); ++v) h.declare(v);
  for (const auto& e : g.edges()) h.add_term(Monomial{e.u, e.v}, e.w);
  return h;
}

inline Rational cut_value(const Graph& g, const SpinAssignment& s) {
  Rational cut = 0;
  for (const auto& e : g.edges()) {
    if (s.at(e.u) != s.at(e.v)) cut += e.w;
  }
  return cut;
}

struct MaxcutStats {
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::size_t removed = 0;
  double removed_fraction = 0;
  std::map<std::size_t, std::size_t> degree_histogram;  // surviving vertices only
  std::size_t final_locality = 0;

  std::size_t count(std::size_t degree) const {
    auto it = degree_histogram.find(degree);
    return it == degree_histogram.end() ? 0 : it->second;
  }
};

struct MaxcutReduction {
  Polynomial reduced;
  Trace trace;
  MaxcutStats stats;
};

namespace detail {

inline MaxcutStats maxcut_stats(const Graph& g, std::uint64_t seed, const Polynomial& reduced, const Trace& trace) {
  MaxcutStats st;
  st.n = g.n();
  st.seed = seed;
  st.removed = trace.size();
  st.removed_fraction = g.n() ? static_cast<double>(st.removed) / static_cast<double>(g.n()) : 0.0;
  for (SpinIndex v : reduced.variables()) ++st.degree_histogram[reduced.degree(v)];
  st.final_locality = reduced.locality();
  return st;
}

}  // namespace detail

inline void write_maxcut_csv_header(std::ostream& os) { os << "n,seed,removed_fraction,deg0,deg3,deg4,deg5,deg6\n"; }

inline void write_maxcut_csv_row(std::ostream& os, const MaxcutStats& st) {
  char frac[32];
  std::snprintf(frac, sizeof frac, "%.6f", st.removed_fraction);
  os << st.n << ',' << st.seed << ',' << frac << ',' << st.count(0) << ',' << st.count(3) << ',' << st.count(4)
     << ',' << st.count(5) << ',' << st.count(6) << '\n';
}

// Pairwise-hardware strategy: visit vertices in a seeded random order and
// eliminate any vertex of degree <= 3 whose removal keeps the Hamiltonian
// 2-local and every neighbor at degree <= max_degree; repeat until a full
// pass makes no progress.
inline MaxcutReduction maxcut_reduce_2local(const Graph& g, std::uint64_t seed, std::size_t max_degree = 6) {
  if (!g.is_cubic()) throw Error("strategy needs a cubic graph");
  ReductionLimits limits;
  limits.max_locality = 2;
  limits.max_degree = max_degree;
  MaxcutReduction out;
  out.reduced = maxcut_hamiltonian(g);
  std::vector<SpinIndex> order(g.n());
  std::iota(order.begin(), order.end(), SpinIndex{1});
  auto rng = detail::seeded_rng(seed, 2);
  detail::shuffle(order, rng);
  bool progress = true;
  while (progress) {
    progress = false;
    for (SpinIndex v : order) {
      if (!out.reduced.variables().count(v) || out.reduced.degree(v) > 3) continue;
      try {
        Elimination e = eliminate_spin(out.reduced, v, limits);
        out.reduced = std::move(e.reduced);
        out.trace.append(std::move(e.record));
        progress = true;
      } catch (const EliminationRefused&) {
      }
    }
  }
  out.stats = detail::maxcut_stats(g, seed, out.reduced, out.trace);
  return out;
}

// k-local strategy: in round r, pick (ascending index) a maximal family of
// centers whose closed neighborhoods are pairwise disjoint and have at most
// r + 2 neighbors, and eliminate them with locality <= 2r and degree <= 2r + 2.
inline MaxcutReduction maxcut_reduce_klocal(const Graph& g, std::size_t rounds) {
  if (!g.is_cubic()) throw Error("strategy needs a cubic graph");
  if (rounds == 0) throw Error("rounds must be at least 1");
  MaxcutReduction out;
  out.reduced = maxcut_hamiltonian(g);
  for (std::size_t r = 1; r <= rounds; ++r) {
    ReductionLimits limits;
    limits.max_locality = 2 * r;
    limits.max_degree = 2 * r + 2;
    std::set<SpinIndex> used;
    std::vector<SpinIndex> centers;
    for (SpinIndex v : out.reduced.variables()) {
      auto nb = out.reduced.neighbors(v);
      if (nb.empty() || nb.size() > r + 2 || used.count(v)) continue;
      if (std::any_of(nb.begin(), nb.end(), [&](SpinIndex u) { return used.count(u) != 0; })) continue;
      used.insert(v);
      used.insert(nb.begin(), nb.end());
      centers.push_back(v);
    }
    for (SpinIndex v : centers) {
      try {
        Elimination e = eliminate_spin(out.reduced, v, limits);
        out.reduced = std::move(e.reduced);
        out.trace.append(std::move(e.record));
      } catch (const EliminationRefused&) {
      }
    }
  }
  out.stats = detail::maxcut_stats(g, 0, out.reduced, out.trace);
  return out;
}

struct MaxcutSolution {
  Rational cut;
  Rational min_energy;
  std::vector<SpinAssignment> assignments;  // all optimal full assignments
};

// Solves the reduced problem exhaustively and maps every optimum back.
inline MaxcutSolution solve_reduced_maxcut(const Graph& g, const Polynomial& reduced, const Trace& trace) {
  auto gs = brute_force(reduced);
  MaxcutSolution out;
  out.min_energy = gs.min_energy;
  out.cut = (g.total_weight() - gs.min_energy) / 2;
  for (const auto& s : gs.ground_states) {
    auto full = back_substitute(trace, s);
    out.assignments.insert(out.assignments.end(), full.begin(), full.end());
  }
  std::sort(out.assignments.begin(), out.assignments.end());
  out.assignments.erase(std::unique(out.assignments.begin(), out.assignments.end()), out.assignments.end());
  return out;
}

// ---------------------------------------------------------------------------
// J-Moebius ladder: ring couplings 1, chords s_i s_{i+N/2} with weight J.

inline Polynomial mobius_ladder(std::size_t n, const Rational& j) {
  if (n < 4 || n % 4 != 0) throw Error("ladder size must be a positive multiple of 4");
  Polynomial h;
  for (SpinIndex i = 1; i <= n; ++i) h.declare(i);
  for (SpinIndex i = 1; i <= n; ++i) h.add_term(Monomial{i, static_cast<SpinIndex>(i % n + 1)}, 1);
  for (SpinIndex i = 1; i <= n / 2; ++i) h.add_term(Monomial{i, static_cast<SpinIndex>(i + n / 2)}, j);
  return h;
}

inline bool is_alternating(const SpinAssignment& s) {
  Spin prev = 0;
  for (const auto& [i, v] : s) {
    if (prev != 0 && v == prev) return false;
    prev = v;
  }
  return true;
}

struct LadderPoint {
  Rational j;
  Rational min_energy;
  bool alternating_ground = false;  // S0 attains the minimum
  bool other_ground = false;        // some non-alternating state attains it
};

struct CriticalScan {
  std::vector<LadderPoint> points;
  Rational critical_j;  // first grid point where a non-alternating state is optimal
};

inline Rational critical_j_theory(std::size_t n) { return Rational(4, static_cast<long>(n)); }

inline CriticalScan critical_j_scan(std::size_t n, const std::vector<Rational>& grid) {
  if (grid.empty()) throw Error("empty J grid");
  if (!std::is_sorted(grid.begin(), grid.end())) throw Error("J grid must be sorted ascending");
  Rational jc = critical_j_theory(n);
  if (!(grid.front() < jc && jc <= grid.back())) {
    throw Error("J grid must straddle 4/N = " + format_rational(jc));
  }
  CriticalScan out;
  std::optional<Rational> flip;
  for (const auto& j : grid) {
    auto gs = brute_force(mobius_ladder(n, j));
    LadderPoint pt{j, gs.min_energy};
    for (const auto& s : gs.ground_states) {
      if (is_alternating(s)) pt.alternating_ground = true;
      else pt.other_ground = true;
    }
    if (pt.other_ground && !flip) flip = j;
    out.points.push_back(pt);
  }
  if (!flip) throw Error("no ground-state change inside the J grid");
  out.critical_j = *flip;
  return out;
}

// ---------------------------------------------------------------------------
// Hebbian memories

class PatternSet {
 public:
  PatternSet() = default;
  explicit PatternSet(std::vector<std::vector<Spin>> patterns) : patterns_(std::move(patterns)) {
    for (const auto& p : patterns_) {
      if (p.size() != patterns_.front().size()) throw Error("patterns differ in length");
      for (Spin s : p) {
        if (s != 1 && s != -1) throw Error("pattern entries must be +1 or -1");
      }
    }
  }

  // First p rows of the order-N Walsh matrix in sequency order (row k has
  // k sign changes). Rows are mutually orthogonal; the first p rows are
  // constant on contiguous blocks of N/p spins when p is a power of two.
  static PatternSet walsh(std::size_t n, std::size_t p) {
    if (!std::has_single_bit(n)) throw Error("pattern length must be a power of two");
    if (p == 0 || p > n) throw Error("pattern count must be in 1..N");
    const int bits = std::countr_zero(n);
    std::vector<std::vector<Spin>> rows;
    for (std::size_t k = 0; k < p; ++k) {
      std::size_t gray = k ^ (k >> 1), r = 0;
      for (int b = 0; b < bits; ++b) {
        if (gray >> b & 1) r |= std::size_t{1} << (bits - 1 - b);
      }
      std::vector<Spin> row(n);
      for (std::size_t i = 0; i < n; ++i) row[i] = std::popcount(r & i) % 2 ? -1 : 1;
      rows.push_back(std::move(row));
    }
    return PatternSet(std::move(rows));
  }

  std::size_t size() const noexcept { return patterns_.size(); }
  std::size_t length() const noexcept { return patterns_.empty() ? 0 : patterns_.front().size(); }
  const std::vector<std::vector<Spin>>& patterns() const noexcept { return patterns_; }

  SpinAssignment assignment(std::size_t mu) const { return SpinAssignment::from_vector(patterns_.at(mu)); }

  bool orthogonal() const {
    for (std::size_t a = 0; a < size(); ++a) {
      for (std::size_t b = a + 1; b < size(); ++b) {
        long dot = 0;
        for (std::size_t i = 0; i < length(); ++i) dot += patterns_[a][i] * patterns_[b][i];
        if (dot != 0) return false;
      }
    }
    return true;
  }

  // Stored patterns and their negations.
  std::set<SpinAssignment> memories() const {
    std::set<SpinAssignment> out;
    for (std::size_t mu = 0; mu < size(); ++mu) {
      out.insert(assignment(mu));
      out.insert(assignment(mu).flipped());
    }
    return out;
  }

 private:
  std::vector<std::vector<Spin>> patterns_;
};

// E(s) = -1/2 sum_{i,j} J_ij s_i s_j with J_ij = (1/N) sum_mu xi_i xi_j.
// Without the diagonal J_ii = 0; with it the constant -p/2 appears.
inline Polynomial hebbian_couplings(const PatternSet& ps, bool keep_diagonal = false) {
  if (ps.size() == 0) throw Error("empty pattern set");
  const std::size_t n = ps.length();
  Polynomial h;
  for (SpinIndex i = 1; i <= n; ++i) h.declare(i);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      long sum = 0;
      for (const auto& p : ps.patterns()) sum += p[i] * p[j];
      if (sum != 0) {
        h.add_term(Monomial{static_cast<SpinIndex>(i + 1), static_cast<SpinIndex>(j + 1)},
                   Rational(-sum, static_cast<long>(n)));
      }
    }
  }
  if (keep_diagonal) h.add_term(Monomial{}, Rational(-static_cast<long>(ps.size()), 2));
  return h;
}

// H = -sum_{i1<...<ik} J_{i1..ik} s_i1...s_ik, J = N^{1-k} sum_mu prod xi.
inline Polynomial dense_hebbian(const PatternSet& ps, std::size_t k) {
  if (ps.size() == 0) throw Error("empty pattern set");
  const std::size_t n = ps.length();
  if (k < 2 || k > n) throw Error("tensor order must be in 2..N");
  Integer scale = 1;
  for (std::size_t t = 1; t < k; ++t) scale *= n;
  Polynomial h;
  for (SpinIndex i = 1; i <= n; ++i) h.declare(i);
  detail::for_each_subset(n, k, [&](std::span<const std::size_t> subset) {
    long sum = 0;
    for (const auto& p : ps.patterns()) {
      int prod = 1;
      for (std::size_t i : subset) prod *= p[i];
      sum += prod;
    }
    if (sum == 0) return;
    std::vector<SpinIndex> idx;
    for (std::size_t i : subset) idx.push_back(static_cast<SpinIndex>(i + 1));
    h.add_term(Monomial::from_sorted(std::move(idx)), Rational(Integer(-sum), scale));
  });
  return h;
}

// Splits 1..N into `blocks` contiguous blocks and eliminates `per_block`
// spins from each, chosen by a seeded shuffle inside the block.
inline Reduction hopfield_block_reduce(const Polynomial& h, std::size_t n, std::size_t blocks, std::size_t per_block,
                                       std::uint64_t seed, const ReductionLimits& limits = {}) {
  if (blocks == 0 || n % blocks != 0) throw Error("block count must divide N");
  const std::size_t size = n / blocks;
  if (per_block >= size) throw Error("cannot eliminate a whole block");
  auto rng = detail::seeded_rng(seed, 3);
  std::vector<SpinIndex> order;
  for (std::size_t b = 0; b < blocks; ++b) {
    std::vector<SpinIndex> members(size);
    std::iota(members.begin(), members.end(), static_cast<SpinIndex>(b * size + 1));
    detail::shuffle(members, rng);
    order.insert(order.end(), members.begin(), members.begin() + static_cast<std::ptrdiff_t>(per_block));
  }
  ReduceOptions opts;
  opts.limits = limits;
  return reduce(h, EliminationOrder::explicit_order(order), opts);
}

struct HopfieldConfig {
  std::size_t n = 32;
  std::size_t p = 4;
  bool keep_diagonal = true;
  std::size_t per_block = 1;
  std::uint64_t trials = 2000;
  DescentParams descent;  // descent.seed drives both the block choice and the trials
};

struct HopfieldExperiment {
  PatternSet patterns;
  Polynomial original;
  Reduction reduction;
  SolveResult original_ground;  // exact, by elimination
  SolveResult reduced_ground;
  TrialHistogram pre;
  TrialHistogram post;  // over reduced states, reduced energies
  std::uint64_t pre_retrieved = 0;
  std::uint64_t post_retrieved = 0;  // after back-substitution
};

// Paired design: trial t starts both networks from the same x0 on the
// spins they share.
inline HopfieldExperiment run_hopfield_experiment(const HopfieldConfig& cfg) {
  HopfieldExperiment ex;
  ex.patterns = PatternSet::walsh(cfg.n, cfg.p);
  ex.original = hebbian_couplings(ex.patterns, cfg.keep_diagonal);
  ex.reduction = hopfield_block_reduce(ex.original, cfg.n, cfg.p, cfg.per_block, cfg.descent.seed);
  ex.original_ground = full_solve(ex.original, EliminationOrder::greedy());
  ex.reduced_ground = full_solve(ex.reduction.reduced, EliminationOrder::greedy());
  const auto memories = ex.patterns.memories();
  TrialRunner pre(ex.original, cfg.descent), post(ex.reduction.reduced, cfg.descent);
  ex.pre.flip_canonical = ex.original.is_even();
  ex.post.flip_canonical = ex.reduction.reduced.is_even();
  for (std::uint64_t t = 0; t < cfg.trials; ++t) {
    auto a = pre.run(t);
    ex.pre.add(a.clamped, a.energy);
    if (!a.converged) ++ex.pre.unconverged;
    if (memories.count(a.clamped)) ++ex.pre_retrieved;

    auto b = post.run(t);
    ex.post.add(b.clamped, b.energy);
    if (!b.converged) ++ex.post.unconverged;
    auto full = back_substitute(ex.reduction.trace, b.clamped);
    if (std::any_of(full.begin(), full.end(), [&](const SpinAssignment& s) { return memories.count(s) != 0; })) {
      ++ex.post_retrieved;
    }
  }
  return ex;
}

// ---------------------------------------------------------------------------
// Two-bit ripple-carry adder. Spin +1 is logical 1. (s1 s2) and (s3 s4) are
// the inputs (most significant first), s6 and s7 the low and high sum bits,
// s5 the internal carry, s8 the carry out; the input carry s9 is fixed to -1.

inline constexpr SpinIndex kAdderCarryIn = 9;

// Expanded form with the constant offsets dropped:
//   -2 s6 s2 s4 s9 - s5[(s2 + s4 + s9) - s2 s4 s9]
//   -2 s7 s1 s3 s5 - s8[(s1 + s3 + s5) - s1 s3 s5]
inline Polynomial adder_hamiltonian() {
  Polynomial h;
  h.add_term(Monomial{2, 4, 6, 9}, -2);
  h.add_term(Monomial{2, 5}, -1);
  h.add_term(Monomial{4, 5}, -1);
  h.add_term(Monomial{5, 9}, -1);
  h.add_term(Monomial{2, 4, 5, 9}, 1);
  h.add_term(Monomial{1, 3, 5, 7}, -2);
  h.add_term(Monomial{1, 8}, -1);
  h.add_term(Monomial{3, 8}, -1);
  h.add_term(Monomial{5, 8}, -1);
  h.add_term(Monomial{1, 3, 5, 8}, 1);
  return h.substitute(SpinAssignment{{kAdderCarryIn, -1}});
}

// Carry T(a, b, c) = [(a + b + c) - a b c] / 2 (majority).
inline Polynomial adder_carry(SpinIndex a, SpinIndex b, SpinIndex c) {
  Polynomial t;
  t.add_term(Monomial{a}, Rational(1, 2));
  t.add_term(Monomial{b}, Rational(1, 2));
  t.add_term(Monomial{c}, Rational(1, 2));
  t.add_term(Monomial{a, b, c}, Rational(-1, 2));
  return t;
}

// The penalty form: sum of squared residuals of the two full adders.
inline Polynomial adder_penalty() {
  auto sq = [](const Polynomial& p) { return p * p; };
  Polynomial h = sq(Polynomial::spin(6) - Polynomial::term(1, {2, 4, 9}));
  h += sq(Polynomial::spin(5) - adder_carry(2, 4, 9));
  h += sq(Polynomial::spin(7) - Polynomial::term(1, {1, 3, 5}));
  h += sq(Polynomial::spin(8) - adder_carry(1, 3, 5));
  return h.substitute(SpinAssignment{{kAdderCarryIn, -1}});
}

// All 16 valid configurations of spins 1..8.
inline std::vector<SpinAssignment> adder_valid_additions() {
  auto spin = [](int bit) { return bit ? 1 : -1; };
  std::vector<SpinAssignment> out;
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      int a1 = a >> 1, a0 = a & 1, b1 = b >> 1, b0 = b & 1;
      int sum0 = a0 ^ b0, carry0 = a0 & b0;
      int sum1 = a1 ^ b1 ^ carry0, carry1 = (a1 + b1 + carry0) >= 2;
      SpinAssignment s;
      s.set(1, spin(a1));
      s.set(2, spin(a0));
      s.set(3, spin(b1));
      s.set(4, spin(b0));
      s.set(5, spin(carry0));
      s.set(6, spin(sum0));
      s.set(7, spin(sum1));
      s.set(8, spin(carry1));
      out.push_back(s);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Factorization presets. Binary variables map to spins by q_i = (1 - s_i)/2.

inline const std::vector<std::string>& factor_preset_names() {
  static const std::vector<std::string> names{"n291311_3", "n291311_binary", "bit48_10"};
  return names;
}

inline Polynomial binary_variable(SpinIndex i) {
  return Polynomial::constant(Rational(1, 2)) - Polynomial::term(Rational(1, 2), {i});
}

inline Polynomial factor_preset(const std::string& name) {
  if (name == "n291311_3") {
    Polynomial h = Polynomial::constant(Rational(3, 2));
    h.add_term(Monomial{1, 2}, Rational(1, 2));
    h.add_term(Monomial{1, 3}, Rational(1, 2));
    h.add_term(Monomial{2, 3}, Rational(-1, 2));
    return h;
  }
  if (name == "n291311_binary") {
    // (q1 + q2 - 2 q1 q2 - 1)^2 + (q2 + q5 - 2 q2 q5)^2 + (q1 + q5 - 2 q1 q5 - 1)^2
    auto q1 = binary_variable(1), q2 = binary_variable(2), q5 = binary_variable(5);
    auto one = Polynomial::constant(1);
    auto r1 = q1 + q2 - q1 * q2 * Rational(2) - one;
    auto r2 = q2 + q5 - q2 * q5 * Rational(2);
    auto r3 = q1 + q5 - q1 * q5 * Rational(2) - one;
    return r1 * r1 + r2 * r2 + r3 * r3;
  }
  if (name == "bit48_10") {
    static const int pairs[10][10] = {
        {0, 22, 16, 8, -14, 8, 4, -8, -10, -22},
        {0, 0, -14, 20, 14, -12, 2, -24, -28, 2},
        {0, 0, 0, -18, 10, 36, 12, 16, 6, -30},
        {0, 0, 0, 0, 28, -26, 10, 10, 16, -4},
        {0, 0, 0, 0, 0, 10, 24, 20, 12, -8},
        {0, 0, 0, 0, 0, 0, -8, 22, -6, -36},
        {0, 0, 0, 0, 0, 0, 0, -16, 16, 20},
        {0, 0, 0, 0, 0, 0, 0, 0, 34, -42},
        {0, 0, 0, 0, 0, 0, 0, 0, 0, 18},
        {0, 0, 0, 0, 0, 0, 0, 0, 0, 0},
    };
    static const int fields[10] = {-46, -16, -78, -72, -116, -12, -84, -36, -74, -24};
    Polynomial h;
    for (SpinIndex i = 1; i <= 10; ++i) {
      h.add_term(Monomial{i}, fields[i - 1]);
      for (SpinIndex j = i + 1; j <= 10; ++j) h.add_term(Monomial{i, j}, pairs[i - 1][j - 1]);
    }
    return h;
  }
  throw Error("unknown preset '" + name + "'");
}

// Bits q_i = (1 - s_i)/2 for the listed spins, as a string.
inline std::string binary_string(const SpinAssignment& s, const std::vector<SpinIndex>& ids) {
  std::string out;
  for (SpinIndex i : ids) out.push_back(s.at(i) < 0 ? '1' : '0');
  return out;
}

struct FactorCandidate {
  std::string bits;  // most significant first
  std::uint64_t value = 0;
};

// Factor template 1000 q5 01 q2 q1 1. The three-spin preset carries q5 on
// spin 3, the binary preset on spin 5.
inline FactorCandidate decode_291311(const SpinAssignment& s, const std::string& preset = "n291311_3") {
  SpinIndex q5;
  if (preset == "n291311_3") q5 = 3;
  else if (preset == "n291311_binary") q5 = 5;
  else throw Error("no 291311 decoding for preset '" + preset + "'");
  auto bit = [&](SpinIndex i) { return s.at(i) < 0 ? '1' : '0'; };
  FactorCandidate f;
  f.bits = std::string("1000") + bit(q5) + "01" + bit(2) + bit(1) + "1";
  f.value = std::stoull(f.bits, nullptr, 2);
  return f;
}

inline constexpr std::uint64_t kSemiprime291311 = 291311;

}  // namespace spinel
