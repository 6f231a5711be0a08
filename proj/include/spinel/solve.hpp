#pragma once

// Exhaustive ground-state search and continuous Hopfield retrieval dynamics.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <ostream>
#include <random>
#include <span>
#include <tuple>
#include <vector>

#include "spinel/enumerate.hpp"
#include "spinel/error.hpp"
#include "spinel/poly.hpp"

namespace spinel {

inline constexpr std::size_t kBruteForceCap = 26;
inline constexpr std::size_t kGroundStateCap = std::size_t{1} << 20;

struct GroundStates {
  Rational min_energy;
  std::vector<SpinAssignment> ground_states;  // sorted
};

inline GroundStates brute_force(const Polynomial& h, std::size_t cap = kBruteForceCap,
                                std::size_t state_cap = kGroundStateCap) {
  auto ce = detail::compile_energy(h, cap, "brute-force variables");
  GroundStates out;
  std::vector<std::uint64_t> codes;
  auto run = [&](const auto& coefs) {
    using E = typename std::decay_t<decltype(coefs)>::value_type;
    E best{0};
    bool first = true;
    detail::gray_walk(ce, coefs, [&](std::uint64_t code, const E& e) {
      if (first || e < best) {
        best = e;
        first = false;
        codes.clear();
      }
      if (e == best) {
        if (codes.size() == state_cap) throw CapExceeded("ground states", codes.size() + 1, state_cap);
        codes.push_back(code);
      }
    });
    out.min_energy = detail::to_rational(ce, best);
  };
  if (ce.integral) run(ce.scaled);
  else run(ce.coefs);
  for (std::uint64_t c : codes) out.ground_states.push_back(detail::decode(ce, c));
  std::sort(out.ground_states.begin(), out.ground_states.end());
  return out;
}

// ---------------------------------------------------------------------------
// Continuous dynamics  tau dx_i/dt = -x_i - dH/dy_i at y = tanh(x).
// For H = -1/2 sum J_ij s_i s_j this is the usual tau dx = -x + J tanh(x).

struct DescentParams {
  double tau = 1.0;
  double dt = 0.05;
  std::size_t max_steps = 200000;
  double convergence_eps = 1e-6;
  std::uint64_t seed = 0;

  void validate() const {
    if (!(tau > 0)) throw Error("tau must be positive");
    if (!(dt > 0) || !(dt < tau)) throw Error("dt must satisfy 0 < dt < tau");
    if (!(convergence_eps > 0)) throw Error("convergence_eps must be positive");
  }
};

namespace detail {

// Floating-point image of a polynomial over positions 0..n-1.
struct FloatPoly {
  std::size_t n = 0;
  double constant = 0;
  std::vector<double> coef;
  std::vector<std::uint32_t> start;  // term t uses idx[start[t] .. start[t+1])
  std::vector<std::uint32_t> idx;

  double value(std::span<const double> y) const {
    double e = constant;
    for (std::size_t t = 0; t < coef.size(); ++t) {
      double p = coef[t];
      for (std::uint32_t k = start[t]; k < start[t + 1]; ++k) p *= y[idx[k]];
      e += p;
    }
    return e;
  }

  // g = dH/dy. Prefix/suffix products keep it exact when some y_i = 0.
  void gradient(std::span<const double> y, std::span<double> g) const {
    std::fill(g.begin(), g.end(), 0.0);
    double pre[64];
    for (std::size_t t = 0; t < coef.size(); ++t) {
      const std::uint32_t b = start[t], e = start[t + 1];
      const std::uint32_t k = e - b;
      if (k == 1) {
        g[idx[b]] += coef[t];
        continue;
      }
      if (k == 2) {
        g[idx[b]] += coef[t] * y[idx[b + 1]];
        g[idx[b + 1]] += coef[t] * y[idx[b]];
        continue;
      }
      pre[0] = coef[t];
      for (std::uint32_t j = 0; j + 1 < k; ++j) pre[j + 1] = pre[j] * y[idx[b + j]];
      double suf = 1.0;
      for (std::uint32_t j = k; j-- > 0;) {
        g[idx[b + j]] += pre[j] * suf;
        suf *= y[idx[b + j]];
      }
    }
  }
};

// Positions follow the given variable order.
inline FloatPoly compile_float(const Polynomial& h, std::span<const SpinIndex> vars) {
  FloatPoly f;
  f.n = vars.size();
  std::map<SpinIndex, std::uint32_t> pos;
  for (std::size_t k = 0; k < vars.size(); ++k) pos[vars[k]] = static_cast<std::uint32_t>(k);
  f.start.push_back(0);
  for (const auto& [m, c] : h.terms()) {
    if (m.empty()) {
      f.constant += c.convert_to<double>();
      continue;
    }
    if (m.size() > 64) throw Error("monomials above 64 spins are not supported by the dynamics");
    for (SpinIndex i : m) {
      auto it = pos.find(i);
      if (it == pos.end()) throw Error("compile_float: s" + std::to_string(i) + " has no position");
      f.idx.push_back(it->second);
    }
    f.coef.push_back(c.convert_to<double>());
    f.start.push_back(static_cast<std::uint32_t>(f.idx.size()));
  }
  return f;
}

inline std::vector<SpinIndex> contiguous_variables(const Polynomial& h) {
  std::vector<SpinIndex> vars(h.variables().begin(), h.variables().end());
  for (std::size_t k = 0; k < vars.size(); ++k) {
    if (vars[k] != k + 1) throw Error("dynamics need variables numbered 1..N without gaps");
  }
  return vars;
}

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace detail

struct DescentResult {
  SpinAssignment clamped;
  Rational energy;  // exact energy of the clamped state
  bool converged = false;
  std::size_t steps = 0;
};

using DescentObserver = std::function<void(std::size_t step, std::span<const double> x)>;

// Generalized Lyapunov function H(tanh x) + sum_i [x_i tanh x_i - ln cosh x_i];
// non-increasing along exact trajectories.
inline double lyapunov_energy(const Polynomial& h, std::span<const double> x) {
  auto vars = detail::contiguous_variables(h);
  if (x.size() != vars.size()) throw Error("state length does not match the variable count");
  auto f = detail::compile_float(h, vars);
  std::vector<double> y(x.size());
  double extra = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    y[i] = std::tanh(x[i]);
    double ax = std::abs(x[i]);
    // ln cosh x = |x| + log1p(exp(-2|x|)) - ln 2
    extra += x[i] * y[i] - (ax + std::log1p(std::exp(-2 * ax)) - std::log(2.0));
  }
  return f.value(y) + extra;
}

namespace detail {

inline DescentResult descend(const Polynomial& h, const FloatPoly& f, std::span<const SpinIndex> vars,
                             std::vector<double> x, const DescentParams& params, const DescentObserver& observe) {
  const std::size_t n = x.size();
  std::vector<double> y(n), g(n);
  DescentResult out;
  for (out.steps = 0; out.steps < params.max_steps; ++out.steps) {
    if (observe) observe(out.steps, x);
    for (std::size_t i = 0; i < n; ++i) y[i] = std::tanh(x[i]);
    f.gradient(y, g);
    double worst = 0;
    for (std::size_t i = 0; i < n; ++i) {
      double v = (-x[i] - g[i]) / params.tau;
      worst = std::max(worst, std::abs(v));
      g[i] = v;
    }
    if (worst < params.convergence_eps) {
      out.converged = true;
      break;
    }
    for (std::size_t i = 0; i < n; ++i) x[i] += params.dt * g[i];
  }
  // sgn(tanh(x)); an exact zero goes to +1
  for (std::size_t i = 0; i < n; ++i) out.clamped.set(vars[i], x[i] < 0 ? -1 : 1);
  out.energy = h.evaluate(out.clamped);
  return out;
}

}  // namespace detail

// Integrates from x0 (x0[k] belongs to s_{k+1}). Non-convergence is reported
// through `converged`, with the last state clamped.
inline DescentResult hopfield_descent(const Polynomial& h, std::span<const double> x0, const DescentParams& params,
                                      const DescentObserver& observe = {}) {
  params.validate();
  auto vars = detail::contiguous_variables(h);
  if (x0.size() != vars.size()) throw Error("x0 length does not match the variable count");
  auto f = detail::compile_float(h, vars);
  return detail::descend(h, f, vars, std::vector<double>(x0.begin(), x0.end()), params, observe);
}

// Initial state of one trial: uniform on [-1, 1] for spin ids 1..max_id in
// order, from a generator seeded by (seed, trial). Networks that share spin
// ids therefore start from the same point in a given trial.
inline std::vector<double> trial_initial_state(std::uint64_t seed, std::uint64_t trial, SpinIndex max_id) {
  std::mt19937_64 rng(detail::splitmix64(detail::splitmix64(seed) ^ trial));
  std::vector<double> x(max_id);
  for (auto& v : x) {
    // 53 random bits -> [0,1) -> [-1,1)
    double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    v = 2 * u - 1;
  }
  return x;
}

// Runs trials on h, whose variables need not be contiguous: x0 is drawn over
// ids 1..max_id and restricted to h's variables.
class TrialRunner {
 public:
  TrialRunner(const Polynomial& h, DescentParams params) : h_(h), params_(params) {
    params_.validate();
    vars_.assign(h.variables().begin(), h.variables().end());
    if (vars_.empty()) throw Error("dynamics need at least one variable");
    f_ = detail::compile_float(h, vars_);
  }

  DescentResult run(std::uint64_t trial) const {
    auto full = trial_initial_state(params_.seed, trial, vars_.back());
    std::vector<double> x(vars_.size());
    for (std::size_t k = 0; k < vars_.size(); ++k) x[k] = full[vars_[k] - 1];
    return detail::descend(h_, f_, vars_, std::move(x), params_, {});
  }

  const Polynomial& hamiltonian() const noexcept { return h_; }

 private:
  const Polynomial& h_;
  DescentParams params_;
  std::vector<SpinIndex> vars_;
  detail::FloatPoly f_;
};

struct TrialHistogram {
  std::map<SpinAssignment, std::uint64_t> counts;
  std::map<SpinAssignment, Rational> energies;
  std::uint64_t trials = 0;
  std::uint64_t unconverged = 0;
  bool flip_canonical = false;  // keys identified under global spin flip

  // Representative with the lowest-index spin at +1.
  static SpinAssignment canonical(const SpinAssignment& s) {
    if (!s.empty() && s.begin()->second < 0) return s.flipped();
    return s;
  }

  void add(const SpinAssignment& s, const Rational& e) {
    SpinAssignment key = flip_canonical ? canonical(s) : s;
    ++counts[key];
    energies.emplace(key, e);
    ++trials;
  }

  std::size_t distinct() const noexcept { return counts.size(); }

  // Rows sorted by energy, then state.
  std::vector<std::tuple<Rational, std::uint64_t, SpinAssignment>> rows() const {
    std::vector<std::tuple<Rational, std::uint64_t, SpinAssignment>> out;
    for (const auto& [s, n] : counts) out.emplace_back(energies.at(s), n, s);
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
      if (std::get<0>(a) != std::get<0>(b)) return std::get<0>(a) < std::get<0>(b);
      return std::get<2>(a) < std::get<2>(b);
    });
    return out;
  }
};

inline TrialHistogram run_trials(const Polynomial& h, std::uint64_t n_trials, const DescentParams& params) {
  if (n_trials == 0) throw Error("n_trials must be at least 1");
  TrialRunner runner(h, params);
  TrialHistogram hist;
  hist.flip_canonical = h.is_even();
  for (std::uint64_t t = 0; t < n_trials; ++t) {
    auto r = runner.run(t);
    if (!r.converged) ++hist.unconverged;
    hist.add(r.clamped, r.energy);
  }
  return hist;
}

// CSV: energy,count,state with state as a +/- string in ascending spin order.
inline void write_histogram_csv(std::ostream& os, const TrialHistogram& hist) {
  os << "energy,count,state\n";
  for (const auto& [e, n, s] : hist.rows()) os << format_rational(e) << ',' << n << ',' << s.sign_string() << '\n';
}

}  // namespace spinel
