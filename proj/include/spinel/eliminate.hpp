#pragma once

// Exact spin elimination.
//
// Collect the terms of H that contain s_a into s_a * P(neighbors). For any
// fixed neighbors the minimum over s_a of s_a * P is -|P|, so replacing
// s_a * P by the multilinear form F of -|P| removes s_a while keeping
//   H'(s) = min_{s_a} H(s, s_a)   for every configuration s of the rest.
// The optimal s_a is recovered afterwards as -sgn(P), or either value when
// P = 0.

#include <algorithm>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "spinel/enumerate.hpp"
#include "spinel/error.hpp"
#include "spinel/expand.hpp"
#include "spinel/gadgets.hpp"
#include "spinel/poly.hpp"

namespace spinel {

inline constexpr std::size_t kDefaultBranchCap = std::size_t{1} << 20;
inline constexpr std::size_t kSpectrumCap = 24;

struct ReductionLimits {
  std::size_t max_neighborhood = neighborhood_cap();
  std::optional<std::size_t> max_locality;
  std::optional<std::size_t> max_degree;
};

struct EliminationRecord {
  SpinIndex eliminated = 0;
  Polynomial local_block;  // P over the neighbors
  Polynomial replacement;  // multilinear form of -|P|

  friend bool operator==(const EliminationRecord&, const EliminationRecord&) = default;
};

// Records in elimination order; back-substitution replays them in reverse.
struct Trace {
  std::vector<EliminationRecord> records;

  bool empty() const noexcept { return records.empty(); }
  std::size_t size() const noexcept { return records.size(); }

  std::set<SpinIndex> eliminated() const {
    std::set<SpinIndex> s;
    for (const auto& r : records) s.insert(r.eliminated);
    return s;
  }

  void append(EliminationRecord rec) {
    for (const auto& r : records) {
      if (r.eliminated == rec.eliminated) throw Error("s" + std::to_string(rec.eliminated) + " eliminated twice");
    }
    records.push_back(std::move(rec));
  }

  void append(const Trace& other) {
    for (const auto& r : other.records) append(r);
  }

  friend bool operator==(const Trace&, const Trace&) = default;
};

enum class RefusalReason { NotPresent, Neighborhood, Locality, Degree };

inline std::string_view refusal_name(RefusalReason r) {
  switch (r) {
    case RefusalReason::NotPresent: return "not present";
    case RefusalReason::Neighborhood: return "neighborhood cap";
    case RefusalReason::Locality: return "locality limit";
    case RefusalReason::Degree: return "degree limit";
  }
  return "?";
}

class EliminationRefused : public Error {
 public:
  EliminationRefused(SpinIndex spin, RefusalReason reason, std::size_t value, std::size_t limit)
      : Error("eliminating s" + std::to_string(spin) + " refused (" + std::string(refusal_name(reason)) + ": " +
              std::to_string(value) + " > " + std::to_string(limit) + ")"),
        spin_(spin),
        reason_(reason),
        value_(value),
        limit_(limit) {}

  SpinIndex spin() const noexcept { return spin_; }
  RefusalReason reason() const noexcept { return reason_; }
  std::size_t value() const noexcept { return value_; }
  std::size_t limit() const noexcept { return limit_; }

 private:
  SpinIndex spin_;
  RefusalReason reason_;
  std::size_t value_;
  std::size_t limit_;
};

struct LocalBlock {
  Polynomial block;  // P
  Polynomial rest;   // h - s_a * P
  bool present = false;
};

// Splits h = s_a * P + rest. When a is not a variable of h, P = 0 and
// present is false.
inline LocalBlock extract_local_block(const Polynomial& h, SpinIndex a) {
  LocalBlock out;
  out.present = h.variables().count(a) != 0;
  for (SpinIndex i : h.variables()) {
    if (i != a) out.rest.declare(i);
  }
  for (const auto& [m, c] : h.terms()) {
    if (m.contains(a)) out.block.add_term(m.without(a), c);
    else out.rest.add_term(m, c);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Choosing a closed form for -|P|.

struct GadgetMatch {
  GadgetKind kind;
  std::vector<Rational> coeffs;
  std::vector<SpinIndex> targets;
};

// Finds the first catalog kind whose slot layout covers every monomial of P
// under some ordering of P's variables. Slots absent from P get coefficient 0.
inline std::optional<GadgetMatch> match_gadget(const Polynomial& p) {
  auto support = p.support();
  std::vector<SpinIndex> vars(support.begin(), support.end());
  for (GadgetKind kind : kAllGadgetKinds) {
    const auto& layout = gadget_layout(kind);
    if (layout.arity != vars.size()) continue;
    std::vector<SpinIndex> perm = vars;
    do {
      std::map<Monomial, std::size_t> slot_of;
      for (std::size_t s = 0; s < layout.slots.size(); ++s) {
        std::vector<SpinIndex> idx;
        for (std::size_t pos : layout.slots[s]) idx.push_back(perm[pos]);
        slot_of.emplace(Monomial::canonical(std::move(idx)), s);
      }
      std::vector<Rational> coeffs(layout.slots.size());
      bool ok = true;
      for (const auto& [m, c] : p.terms()) {
        auto it = slot_of.find(m);
        if (it == slot_of.end()) {
          ok = false;
          break;
        }
        coeffs[it->second] = c;
      }
      if (ok) return GadgetMatch{kind, std::move(coeffs), perm};
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  return std::nullopt;
}

enum class ExpansionRoute { Constant, Gadget, Symmetric, Fwht };

struct Expansion {
  Polynomial replacement;
  ExpansionRoute route = ExpansionRoute::Fwht;
  std::optional<GadgetKind> gadget;
};

// Linear P with no constant and equal-magnitude coefficients: -|c| |sum sigma_i s_i|.
inline std::optional<Polynomial> match_symmetric(const Polynomial& p) {
  if (p.term_count() < 2) return std::nullopt;
  Rational mag = -1;
  std::vector<int> sigma;
  std::vector<SpinIndex> targets;
  for (const auto& [m, c] : p.terms()) {
    if (m.size() != 1) return std::nullopt;
    Rational a = c < 0 ? Rational(-c) : c;
    if (mag < 0) mag = a;
    else if (a != mag) return std::nullopt;
    sigma.push_back(c < 0 ? -1 : 1);
    targets.push_back(*m.begin());
  }
  return signed_symmetric_expand(sigma, targets) * mag;
}

// Expansion of -|P| through the cheapest applicable route. With cross_check
// set, closed-form results are compared against the generic transform.
inline Expansion expand_block(const Polynomial& p, std::size_t cap, bool cross_check = false) {
  Expansion out;
  auto support = p.support();
  if (support.empty()) {
    Rational c = p.constant_term();
    out.replacement = Polynomial::constant(c < 0 ? c : Rational(-c));
    out.route = ExpansionRoute::Constant;
    return out;
  }
  if (support.size() > cap) throw CapExceeded("neighborhood", support.size(), cap);
  if (auto g = match_gadget(p)) {
    out.replacement = apply_gadget(g->kind, g->coeffs, g->targets);
    out.route = ExpansionRoute::Gadget;
    out.gadget = g->kind;
  } else if (auto s = match_symmetric(p)) {
    out.replacement = std::move(*s);
    out.route = ExpansionRoute::Symmetric;
  } else {
    out.replacement = expand_neg_abs(p, cap);
    out.route = ExpansionRoute::Fwht;
    return out;
  }
  if (cross_check) {
    Polynomial generic = expand_neg_abs(p, cap);
    if (!(generic.terms() == out.replacement.terms())) {
      throw std::logic_error("closed-form expansion disagrees with the Walsh transform for P = " +
                             format_polynomial(p));
    }
  }
  return out;
}

struct Elimination {
  Polynomial reduced;
  EliminationRecord record;
  ExpansionRoute route = ExpansionRoute::Fwht;
  std::optional<GadgetKind> gadget;
};

// Removes s_a from h. Limits apply to what the elimination introduces: the
// locality of the replacement and the degree of every neighbor in the result.
// A refused elimination throws EliminationRefused and leaves h untouched.
inline Elimination eliminate_spin(const Polynomial& h, SpinIndex a, const ReductionLimits& limits = {},
                                  bool cross_check = false) {
  LocalBlock lb = extract_local_block(h, a);
  if (!lb.present) throw EliminationRefused(a, RefusalReason::NotPresent, 0, 0);
  auto nbrs = lb.block.support();
  if (nbrs.size() > limits.max_neighborhood) {
    throw EliminationRefused(a, RefusalReason::Neighborhood, nbrs.size(), limits.max_neighborhood);
  }
  Expansion ex = expand_block(lb.block, limits.max_neighborhood, cross_check);
  if (limits.max_locality && ex.replacement.locality() > *limits.max_locality) {
    throw EliminationRefused(a, RefusalReason::Locality, ex.replacement.locality(), *limits.max_locality);
  }
  Elimination out;
  out.reduced = std::move(lb.rest);
  out.reduced += ex.replacement;
  if (limits.max_degree) {
    for (SpinIndex v : nbrs) {
      std::size_t d = out.reduced.degree(v);
      if (d > *limits.max_degree) throw EliminationRefused(a, RefusalReason::Degree, d, *limits.max_degree);
    }
  }
  out.record.eliminated = a;
  out.record.local_block = std::move(lb.block);
  out.record.replacement = std::move(ex.replacement);
  out.route = ex.route;
  out.gadget = ex.gadget;
  return out;
}

// ---------------------------------------------------------------------------

// Completes a solution of the reduced problem through the trace, last
// elimination first. Each eliminated spin takes -sgn(P); P = 0 branches into
// both values. Returns every completion, sorted.
inline std::vector<SpinAssignment> back_substitute(const Trace& trace, const SpinAssignment& reduced,
                                                   std::size_t branch_cap = kDefaultBranchCap) {
  std::vector<SpinAssignment> current{reduced};
  for (auto it = trace.records.rbegin(); it != trace.records.rend(); ++it) {
    std::vector<SpinAssignment> next;
    next.reserve(current.size());
    for (auto& a : current) {
      Rational v = it->local_block.evaluate(a);
      if (v > 0) {
        a.set(it->eliminated, -1);
        next.push_back(std::move(a));
      } else if (v < 0) {
        a.set(it->eliminated, 1);
        next.push_back(std::move(a));
      } else {
        SpinAssignment b = a;
        a.set(it->eliminated, 1);
        b.set(it->eliminated, -1);
        next.push_back(std::move(a));
        next.push_back(std::move(b));
      }
      if (next.size() > branch_cap) throw CapExceeded("back-substitution branches", next.size(), branch_cap);
    }
    current = std::move(next);
  }
  std::sort(current.begin(), current.end());
  current.erase(std::unique(current.begin(), current.end()), current.end());
  return current;
}

// ---------------------------------------------------------------------------

class EliminationOrder {
 public:
  enum class Kind { Explicit, Ascending, GreedyMinNeighborhood };

  static EliminationOrder explicit_order(std::vector<SpinIndex> order) {
    return EliminationOrder(Kind::Explicit, std::move(order));
  }
  static EliminationOrder ascending() { return EliminationOrder(Kind::Ascending, {}); }
  // Fewest distinct co-occurring variables first; ties by lowest index.
  static EliminationOrder greedy() { return EliminationOrder(Kind::GreedyMinNeighborhood, {}); }

  Kind kind() const noexcept { return kind_; }
  const std::vector<SpinIndex>& order() const noexcept { return order_; }

 private:
  EliminationOrder(Kind k, std::vector<SpinIndex> o) : kind_(k), order_(std::move(o)) {}
  Kind kind_;
  std::vector<SpinIndex> order_;
};

struct ReduceOptions {
  ReductionLimits limits;
  std::optional<std::size_t> target_variables;  // stop once this many remain
  bool cross_check = false;
};

struct Reduction {
  Polynomial reduced;
  Trace trace;
  std::vector<SpinIndex> skipped;  // refused or absent, in attempt order
};

namespace detail {

inline std::map<SpinIndex, std::size_t> neighbor_counts(const Polynomial& h) {
  std::map<SpinIndex, std::set<SpinIndex>> nb;
  for (SpinIndex v : h.variables()) nb[v];
  for (const auto& [m, c] : h.terms()) {
    for (SpinIndex i : m) {
      for (SpinIndex j : m) {
        if (i != j) nb[i].insert(j);
      }
    }
  }
  std::map<SpinIndex, std::size_t> out;
  for (const auto& [v, s] : nb) out[v] = s.size();
  return out;
}

}  // namespace detail

// Repeated elimination. Refusals are skips; the pointwise minimum identity
// holds end to end.
inline Reduction reduce(const Polynomial& h, const EliminationOrder& order, const ReduceOptions& opts = {}) {
  Reduction out;
  out.reduced = h;
  auto done = [&] { return opts.target_variables && out.reduced.variables().size() <= *opts.target_variables; };
  auto attempt = [&](SpinIndex a) {
    try {
      Elimination e = eliminate_spin(out.reduced, a, opts.limits, opts.cross_check);
      out.reduced = std::move(e.reduced);
      out.trace.append(std::move(e.record));
      return true;
    } catch (const EliminationRefused&) {
      out.skipped.push_back(a);
      return false;
    } catch (const CapExceeded&) {
      out.skipped.push_back(a);
      return false;
    }
  };

  if (order.kind() != EliminationOrder::Kind::GreedyMinNeighborhood) {
    std::vector<SpinIndex> seq = order.order();
    if (order.kind() == EliminationOrder::Kind::Ascending) seq.assign(h.variables().begin(), h.variables().end());
    for (SpinIndex a : seq) {
      if (done()) break;
      attempt(a);
    }
    return out;
  }

  std::set<SpinIndex> refused;
  while (!done()) {
    auto counts = detail::neighbor_counts(out.reduced);
    std::optional<std::pair<std::size_t, SpinIndex>> best;
    for (const auto& [v, n] : counts) {
      if (refused.count(v)) continue;
      if (!best || std::make_pair(n, v) < *best) best = std::make_pair(n, v);
    }
    if (!best) break;
    if (attempt(best->second)) refused.clear();
    else refused.insert(best->second);
  }
  return out;
}

struct SolveResult {
  Rational min_energy;
  std::vector<SpinAssignment> ground_states;  // sorted
};

// Eliminates every spin until only a constant remains, then recovers all
// ground states by back-substitution.
inline SolveResult full_solve(const Polynomial& h, const EliminationOrder& order = EliminationOrder::ascending(),
                              std::size_t max_neighborhood = neighborhood_cap(),
                              std::size_t branch_cap = kDefaultBranchCap) {
  std::vector<SpinIndex> seq;
  if (order.kind() == EliminationOrder::Kind::Explicit) {
    seq = order.order();
    std::set<SpinIndex> given(seq.begin(), seq.end());
    for (SpinIndex v : h.variables()) {
      if (!given.count(v)) seq.push_back(v);
    }
  }
  Polynomial cur = h;
  Trace trace;
  ReductionLimits limits;
  limits.max_neighborhood = max_neighborhood;
  auto step = [&](SpinIndex a) {
    try {
      Elimination e = eliminate_spin(cur, a, limits);
      cur = std::move(e.reduced);
      trace.append(std::move(e.record));
    } catch (const EliminationRefused& r) {
      throw CapExceeded("full_solve stopped after " + std::to_string(trace.size()) + " eliminations at s" +
                            std::to_string(a) + " neighborhood",
                        r.value(), r.limit());
    }
  };
  if (order.kind() == EliminationOrder::Kind::GreedyMinNeighborhood) {
    while (!cur.variables().empty()) {
      auto counts = detail::neighbor_counts(cur);
      auto best = std::min_element(counts.begin(), counts.end(),
                                   [](const auto& x, const auto& y) { return std::tie(x.second, x.first) < std::tie(y.second, y.first); });
      step(best->first);
    }
  } else {
    if (order.kind() == EliminationOrder::Kind::Ascending) seq.assign(h.variables().begin(), h.variables().end());
    for (SpinIndex a : seq) {
      if (cur.variables().count(a)) step(a);
    }
  }
  SolveResult out;
  out.min_energy = cur.constant_term();
  out.ground_states = back_substitute(trace, SpinAssignment{}, branch_cap);
  return out;
}

// Exhaustive energy spectrum: (energy, multiplicity) in ascending energy.
inline std::vector<std::pair<Rational, std::uint64_t>> spectrum(const Polynomial& h, std::size_t cap = kSpectrumCap) {
  auto ce = detail::compile_energy(h, cap, "spectrum variables");
  std::vector<std::pair<Rational, std::uint64_t>> out;
  auto collect = [&](const auto& coefs) {
    using E = typename std::decay_t<decltype(coefs)>::value_type;
    std::map<E, std::uint64_t> hist;
    detail::gray_walk(ce, coefs, [&](std::uint64_t, const E& e) { ++hist[e]; });
    for (const auto& [e, n] : hist) out.emplace_back(detail::to_rational(ce, e), n);
  };
  if (ce.integral) collect(ce.scaled);
  else collect(ce.coefs);
  return out;
}

// ---------------------------------------------------------------------------
// Trace text format: per record
//   E <spin>
//   P:
//   <polynomial lines>
//   F:
//   <polynomial lines>
//   ---

inline void write_trace(std::ostream& os, const Trace& trace) {
  for (const auto& r : trace.records) {
    os << "E " << r.eliminated << '\n' << "P:\n";
    write_polynomial(os, r.local_block);
    os << "F:\n";
    write_polynomial(os, r.replacement);
    os << "---\n";
  }
}

inline std::string format_trace(const Trace& t) {
  std::ostringstream os;
  write_trace(os, t);
  return os.str();
}

inline Trace read_trace(std::istream& is) {
  enum class State { Header, ExpectP, InP, InF };
  Trace trace;
  State state = State::Header;
  EliminationRecord rec;
  detail::PolynomialReader reader;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    auto toks = detail::split_ws(line);
    if (toks.empty() || toks[0].front() == '#') continue;
    switch (state) {
      case State::Header:
        if (toks[0] != "E" || toks.size() != 2) throw ParseError(line_no, "expected 'E <spin>'");
        rec = EliminationRecord{};
        rec.eliminated = detail::parse_index(toks[1], line_no);
        state = State::ExpectP;
        break;
      case State::ExpectP:
        if (toks[0] != "P:" || toks.size() != 1) throw ParseError(line_no, "expected 'P:'");
        state = State::InP;
        break;
      case State::InP:
        if (toks[0] == "F:" && toks.size() == 1) {
          rec.local_block = reader.take();
          state = State::InF;
        } else if (!reader.consume(line, line_no)) {
          throw ParseError(line_no, "unexpected line in P block");
        }
        break;
      case State::InF:
        if (toks[0] == "---" && toks.size() == 1) {
          rec.replacement = reader.take();
          if (rec.local_block.variables().count(rec.eliminated)) {
            throw ParseError(line_no, "local block mentions the eliminated spin");
          }
          try {
            trace.append(std::move(rec));
          } catch (const Error& e) {
            throw ParseError(line_no, e.what());
          }
          state = State::Header;
        } else if (!reader.consume(line, line_no)) {
          throw ParseError(line_no, "unexpected line in F block");
        }
        break;
    }
  }
  if (state != State::Header) throw ParseError(line_no, "truncated trace record");
  return trace;
}

inline Trace parse_trace(std::string_view text) {
  std::istringstream is{std::string(text)};
  return read_trace(is);
}

}  // namespace spinel
