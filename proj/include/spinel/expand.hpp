#pragma once

// Multilinear expansion of functions on {+1,-1}^d.
//
// Configuration convention (used by every table in the library): for an
// ordered variable list v_0..v_{d-1}, table index x encodes the configuration
// with bit k of x equal to 0 meaning v_k = +1 and equal to 1 meaning v_k = -1.
// Walsh coefficient index S names the monomial prod_{k : bit k of S set} v_k.

#include <cstdlib>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "spinel/error.hpp"
#include "spinel/poly.hpp"

namespace spinel {

inline constexpr std::size_t kDefaultNeighborhoodCap = 22;
inline constexpr std::size_t kDefaultOracleCap = 16;

// Global FWHT cap: SPINEL_NEIGHBORHOOD_CAP when set to a positive integer,
// otherwise kDefaultNeighborhoodCap.
inline std::size_t neighborhood_cap() {
  if (const char* env = std::getenv("SPINEL_NEIGHBORHOOD_CAP")) {
    std::string s(env);
    if (parse_integer_digits(s, false)) {
      auto v = std::stoul(s);
      if (v > 0 && v < 63) return v;
    }
  }
  return kDefaultNeighborhoodCap;
}

struct ValueTable {
  std::size_t d = 0;
  std::vector<Rational> values;  // length 2^d

  ValueTable() = default;
  ValueTable(std::size_t d_, std::vector<Rational> v) : d(d_), values(std::move(v)) {
    if (values.size() != (std::size_t{1} << d)) throw Error("value table length must be 2^d");
  }
};

struct SymmetricCoeffs {
  std::size_t n = 0;
  std::vector<Rational> c;  // c[k] is the coefficient of every monomial of size 2k
};

// In-place unnormalized Walsh-Hadamard butterfly. Applied to values it yields
// 2^d times the Walsh coefficients; applied to coefficients it yields values.
inline void walsh_butterfly(std::vector<Rational>& v) {
  const std::size_t n = v.size();
  for (std::size_t h = 1; h < n; h <<= 1) {
    for (std::size_t i = 0; i < n; i += h << 1) {
      for (std::size_t j = i; j < i + h; ++j) {
        Rational x = v[j];
        v[j] += v[j + h];
        v[j + h] = x - v[j + h];
      }
    }
  }
}

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// Normalized Walsh coefficients of a value vector of length 2^d.
inline std::vector<Rational> fwht(std::span<const Rational> values) {
  if (!is_power_of_two(values.size())) {
    throw Error("fwht input length " + std::to_string(values.size()) + " is not a power of two");
  }
  std::vector<Rational> v(values.begin(), values.end());
  walsh_butterfly(v);
  Rational scale(1, static_cast<long>(v.size()));
  for (auto& x : v) x *= scale;
  return v;
}

inline std::vector<Rational> fwht(const ValueTable& table) { return fwht(std::span<const Rational>(table.values)); }

// Walsh coefficient vector (indexed by subset mask over vars) -> Polynomial.
inline Polynomial polynomial_from_walsh(std::span<const Rational> coeffs, std::span<const SpinIndex> vars) {
  if (coeffs.size() != (std::size_t{1} << vars.size())) throw Error("coefficient vector length must be 2^d");
  Polynomial p;
  p.declare_all(vars);
  for (std::size_t s = 0; s < coeffs.size(); ++s) {
    if (coeffs[s] == 0) continue;
    std::vector<SpinIndex> idx;
    for (std::size_t k = 0; k < vars.size(); ++k) {
      if (s >> k & 1) idx.push_back(vars[k]);
    }
    p.add_term(Monomial::canonical(std::move(idx)), coeffs[s]);
  }
  return p;
}

// Values of p on all 2^d configurations of vars (which must cover p's support).
inline ValueTable tabulate(const Polynomial& p, std::span<const SpinIndex> vars) {
  const std::size_t d = vars.size();
  std::vector<Rational> v(std::size_t{1} << d);
  for (const auto& [m, c] : p.terms()) {
    std::size_t mask = 0;
    for (SpinIndex i : m) {
      std::size_t k = 0;
      while (k < d && vars[k] != i) ++k;
      if (k == d) throw Error("tabulate: s" + std::to_string(i) + " is not in the variable list");
      mask |= std::size_t{1} << k;
    }
    v[mask] += c;
  }
  walsh_butterfly(v);
  return ValueTable(d, std::move(v));
}

// Coefficients by explicit summation c_S = 2^-d sum_x F(x) prod_{k in S} s_k(x).
// O(4^d); kept as the independent reference for the fast transform.
inline Polynomial direct_expand(const ValueTable& f, std::span<const SpinIndex> vars,
                                std::size_t cap = kDefaultOracleCap) {
  if (f.d > cap) throw CapExceeded("direct_expand", f.d, cap);
  if (vars.size() != f.d) throw Error("direct_expand: variable list length must equal d");
  const std::size_t n = std::size_t{1} << f.d;
  std::vector<Rational> coeffs(n);
  for (std::size_t s = 0; s < n; ++s) {
    Rational sum = 0;
    for (std::size_t x = 0; x < n; ++x) {
      if (__builtin_popcountll(x & s) % 2 == 0) sum += f.values[x];
      else sum -= f.values[x];
    }
    coeffs[s] = sum / static_cast<long>(n);
  }
  return polynomial_from_walsh(coeffs, vars);
}

// Variables 1..d.
inline Polynomial direct_expand(const ValueTable& f, std::size_t cap = kDefaultOracleCap) {
  std::vector<SpinIndex> vars(f.d);
  for (std::size_t k = 0; k < f.d; ++k) vars[k] = static_cast<SpinIndex>(k + 1);
  return direct_expand(f, vars, cap);
}

// The unique multilinear F with F(s) = -|P(s)| on every configuration of P's
// support. Declared variables of the result are P's support.
inline Polynomial expand_neg_abs(const Polynomial& p, std::size_t cap = neighborhood_cap()) {
  auto support = p.support();
  std::vector<SpinIndex> vars(support.begin(), support.end());
  if (vars.size() > cap) throw CapExceeded("expand_neg_abs neighborhood", vars.size(), cap);
  ValueTable t = tabulate(p, vars);
  for (auto& v : t.values) {
    if (v > 0) v = -v;
  }
  walsh_butterfly(t.values);
  Rational scale(1, static_cast<long>(t.values.size()));
  for (auto& x : t.values) x *= scale;
  return polynomial_from_walsh(t.values, vars);
}

inline Integer binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  Integer r = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    r *= n - k + i;
    r /= i;
  }
  return r;
}

// c_{2k} for -|s_1 + ... + s_n|, grouping configurations by the number j of
// negative spins and the number r of those inside a fixed subset of size 2k.
inline SymmetricCoeffs symmetric_coeffs(std::size_t n) {
  if (n == 0) throw Error("symmetric_coeffs requires n >= 1");
  SymmetricCoeffs out;
  out.n = n;
  for (std::size_t k = 0; 2 * k <= n; ++k) {
    Integer total = 0;
    for (std::size_t j = 0; j <= n; ++j) {
      Integer inner = 0;
      for (std::size_t r = 0; r <= 2 * k; ++r) {
        if (r > j || 2 * k - r > n - j) continue;
        Integer term = binomial(j, r) * binomial(n - j, 2 * k - r);
        if (r % 2) inner -= term;
        else inner += term;
      }
      long mag = static_cast<long>(n) - 2 * static_cast<long>(j);
      total -= binomial(n, j) * Integer(mag < 0 ? -mag : mag) * inner;
    }
    Integer denom = binomial(n, 2 * k) << n;
    out.c.emplace_back(total, denom);
  }
  return out;
}

namespace detail {

// Calls fn(subset) for every subset of {0..n-1} of size k, in lexicographic order.
template <typename Fn>
void for_each_subset(std::size_t n, std::size_t k, Fn&& fn) {
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  if (k > n) return;
  while (true) {
    fn(std::span<const std::size_t>(idx));
    if (k == 0) return;
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace detail

// -|sum_i sigma_i s_{targets_i}| with sigma_i in {+1,-1,0}; zero entries are dropped.
inline Polynomial signed_symmetric_expand(std::span<const int> sigma, std::span<const SpinIndex> targets) {
  if (sigma.size() != targets.size()) throw Error("signed_symmetric_expand: sigma and targets differ in length");
  std::vector<SpinIndex> vars;
  std::vector<int> signs;
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    if (sigma[i] != 0 && sigma[i] != 1 && sigma[i] != -1) throw Error("sigma entries must be in {+1,-1,0}");
    if (sigma[i] == 0) continue;
    vars.push_back(targets[i]);
    signs.push_back(sigma[i]);
  }
  if (vars.empty()) throw Error("signed_symmetric_expand: all sigma entries are zero");
  const std::size_t m = vars.size();
  SymmetricCoeffs coeffs = symmetric_coeffs(m);
  Polynomial p;
  p.declare_all(vars);
  for (std::size_t k = 0; 2 * k <= m; ++k) {
    if (coeffs.c[k] == 0) continue;
    detail::for_each_subset(m, 2 * k, [&](std::span<const std::size_t> subset) {
      int sign = 1;
      std::vector<SpinIndex> idx;
      for (std::size_t s : subset) {
        sign *= signs[s];
        idx.push_back(vars[s]);
      }
      p.add_term(Monomial::canonical(std::move(idx)), sign > 0 ? coeffs.c[k] : Rational(-coeffs.c[k]));
    });
  }
  return p;
}

inline Polynomial signed_symmetric_expand(std::span<const int> sigma) {
  std::vector<SpinIndex> targets(sigma.size());
  for (std::size_t i = 0; i < sigma.size(); ++i) targets[i] = static_cast<SpinIndex>(i + 1);
  return signed_symmetric_expand(sigma, targets);
}

// Assembles sum_k c_{2k} * (sum over subsets of size 2k of vars).
inline Polynomial assemble_symmetric(const SymmetricCoeffs& coeffs, std::span<const SpinIndex> vars) {
  if (vars.size() != coeffs.n) throw Error("assemble_symmetric: arity mismatch");
  std::vector<int> ones(vars.size(), 1);
  Polynomial p;
  p.declare_all(vars);
  for (std::size_t k = 0; k < coeffs.c.size(); ++k) {
    detail::for_each_subset(vars.size(), 2 * k, [&](std::span<const std::size_t> subset) {
      std::vector<SpinIndex> idx;
      for (std::size_t s : subset) idx.push_back(vars[s]);
      p.add_term(Monomial::canonical(std::move(idx)), coeffs.c[k]);
    });
  }
  return p;
}

}  // namespace spinel
