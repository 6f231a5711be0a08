#pragma once

// Exhaustive Gray-code walk over all 2^n configurations of a polynomial's
// declared variables. Each step flips one spin and updates the energy by the
// terms that contain it. When every coefficient becomes a small integer after
// scaling by the common denominator, the walk runs in int64; otherwise it
// falls back to exact rationals.

#include <cstdint>
#include <limits>
#include <vector>

#include "spinel/error.hpp"
#include "spinel/poly.hpp"

namespace spinel::detail {

struct CompiledEnergy {
  std::vector<SpinIndex> vars;       // bit k of a configuration code <-> vars[k]
  std::vector<std::uint64_t> masks;  // one per term
  std::vector<Rational> coefs;
  std::vector<std::vector<std::uint32_t>> terms_of;  // per bit position
  // Integer path: coefs == scaled / denom exactly.
  bool integral = false;
  Integer denom = 1;
  std::vector<std::int64_t> scaled;
};

inline CompiledEnergy compile_energy(const Polynomial& h, std::size_t cap, const char* what) {
  CompiledEnergy ce;
  ce.vars.assign(h.variables().begin(), h.variables().end());
  if (ce.vars.size() > cap) throw CapExceeded(what, ce.vars.size(), cap);
  ce.terms_of.resize(ce.vars.size());
  auto bit_of = [&](SpinIndex i) {
    auto it = std::lower_bound(ce.vars.begin(), ce.vars.end(), i);
    return static_cast<std::size_t>(it - ce.vars.begin());
  };
  for (const auto& [m, c] : h.terms()) {
    std::uint64_t mask = 0;
    for (SpinIndex i : m) {
      std::size_t b = bit_of(i);
      mask |= std::uint64_t{1} << b;
      ce.terms_of[b].push_back(static_cast<std::uint32_t>(ce.masks.size()));
    }
    ce.masks.push_back(mask);
    ce.coefs.push_back(c);
  }

  Integer denom = 1;
  for (const auto& c : ce.coefs) denom = boost::multiprecision::lcm(denom, Integer(denominator(c)));
  Integer budget = 0;
  std::vector<std::int64_t> scaled;
  for (const auto& c : ce.coefs) {
    Integer s = numerator(c) * (denom / denominator(c));
    budget += abs(s);
    if (budget > Integer(std::numeric_limits<std::int64_t>::max() / 4)) return ce;
    scaled.push_back(static_cast<std::int64_t>(s));
  }
  ce.integral = true;
  ce.denom = denom;
  ce.scaled = std::move(scaled);
  return ce;
}

// Calls fn(code, energy) for every configuration; energy has type E
// (std::int64_t scaled by ce.denom, or Rational).
template <typename E, typename Fn>
void gray_walk(const CompiledEnergy& ce, const std::vector<E>& coefs, Fn&& fn) {
  const std::size_t n = ce.vars.size();
  E energy{0};
  for (const auto& c : coefs) energy += c;
  std::uint64_t code = 0;
  fn(code, energy);
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t g = 1; g < total; ++g) {
    const int k = __builtin_ctzll(g);
    for (std::uint32_t t : ce.terms_of[k]) {
      // Sign of the term before the flip is +1 when an even number of its
      // spins are -1; flipping spin k negates it.
      if (__builtin_popcountll(code & ce.masks[t]) % 2 == 0) {
        energy -= coefs[t];
        energy -= coefs[t];
      } else {
        energy += coefs[t];
        energy += coefs[t];
      }
    }
    code ^= std::uint64_t{1} << k;
    fn(code, energy);
  }
}

inline SpinAssignment decode(const CompiledEnergy& ce, std::uint64_t code) {
  SpinAssignment a;
  for (std::size_t k = 0; k < ce.vars.size(); ++k) a.set(ce.vars[k], (code >> k & 1) ? -1 : 1);
  return a;
}

inline Rational to_rational(const CompiledEnergy& ce, std::int64_t e) { return Rational(Integer(e), ce.denom); }
inline Rational to_rational(const CompiledEnergy&, const Rational& e) { return e; }

}  // namespace spinel::detail
