#pragma once

// Subcommand implementations behind the `spinel` executable. Each command
// writes its data to `out` (or the --output file) and a short human summary
// to `log`, and returns an exit code:
//   0 ok, 1 parse error or invalid parameters, 2 no progress, 3 size cap.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "spinel/eliminate.hpp"
#include "spinel/problems.hpp"
#include "spinel/solve.hpp"

namespace spinel::cli {

enum ExitCode : int { kOk = 0, kInvalid = 1, kNoProgress = 2, kSizeCap = 3 };

struct RunConfig {
  std::string input, output, trace;
  std::string order = "greedy";  // "greedy", "ascending" or a comma list
  std::optional<std::size_t> max_neighborhood, max_locality, max_degree, target;
  std::uint64_t seed = 0;
  std::size_t n = 0;
  std::string j, grid;
  std::size_t runs = 1;
  std::uint64_t trials = 2000;
  std::string strategy = "2local";
  std::string name;
  std::string method = "brute";  // solve: brute | eliminate
  std::string assignment;        // backmap: reduced solution, "2=+1 3=+1"
  std::size_t p = 4;
  std::size_t rounds = 1;
  std::size_t eliminate = 0;  // hopfield: spins removed per block
};

namespace detail {

inline std::string read_text(const std::string& path) {
  if (path.empty() || path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Polynomial read_hamiltonian(const RunConfig& cfg) {
  if (cfg.input.empty()) throw Error("--input is required");
  return parse_polynomial(read_text(cfg.input));
}

// Runs fn with the --output stream (or `out` when none is given).
template <typename Fn>
void with_output(const RunConfig& cfg, std::ostream& out, Fn&& fn) {
  if (cfg.output.empty() || cfg.output == "-") {
    fn(out);
    return;
  }
  std::ofstream f(cfg.output);
  if (!f) throw Error("cannot write '" + cfg.output + "'");
  fn(f);
}

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',' || c == ' ') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

inline EliminationOrder parse_order(const std::string& s) {
  if (s == "greedy") return EliminationOrder::greedy();
  if (s == "ascending") return EliminationOrder::ascending();
  std::vector<SpinIndex> ids;
  for (const auto& tok : split_list(s)) ids.push_back(spinel::detail::parse_index(tok, 0));
  return EliminationOrder::explicit_order(ids);
}

inline ReductionLimits limits_from(const RunConfig& cfg) {
  ReductionLimits lim;
  if (cfg.max_neighborhood) {
    if (*cfg.max_neighborhood > neighborhood_cap()) {
      throw Error("--max-neighborhood exceeds the global cap " + std::to_string(neighborhood_cap()));
    }
    lim.max_neighborhood = *cfg.max_neighborhood;
  }
  lim.max_locality = cfg.max_locality;
  lim.max_degree = cfg.max_degree;
  return lim;
}

inline Rational parse_rational_arg(const std::string& s, const char* flag) {
  Rational r;
  if (!try_parse_rational(s, r)) throw Error(std::string("malformed rational for ") + flag + ": '" + s + "'");
  return r;
}

inline void write_states(std::ostream& os, const std::vector<SpinAssignment>& states) {
  for (const auto& s : states) os << format_assignment(s) << '\n';
}

}  // namespace detail

// Maps library exceptions to exit codes.
template <typename Fn>
int guarded(std::ostream& log, Fn&& fn) {
  try {
    return fn();
  } catch (const CapExceeded& e) {
    log << "error: " << e.what() << '\n';
    return kSizeCap;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << '\n';
    return kInvalid;
  }
}

inline int cmd_reduce(const RunConfig& cfg, std::ostream& out, std::ostream& log) {
  return guarded(log, [&] {
    Polynomial h = detail::read_hamiltonian(cfg);
    ReduceOptions opts;
    opts.limits = detail::limits_from(cfg);
    opts.target_variables = cfg.target;
    EliminationOrder order = detail::parse_order(cfg.order);
    Reduction r = reduce(h, order, opts);
    detail::with_output(cfg, out, [&](std::ostream& os) { write_polynomial(os, r.reduced); });
    if (!cfg.trace.empty()) {
      std::ofstream tf(cfg.trace);
      if (!tf) throw Error("cannot write '" + cfg.trace + "'");
      write_trace(tf, r.trace);
    }
    log << "eliminated " << r.trace.size() << '\n'
        << "remaining " << r.reduced.variables().size() << '\n'
        << "locality " << r.reduced.locality() << '\n'
        << "max_degree " << r.reduced.max_degree() << '\n';
    bool attempted = !r.skipped.empty() || !r.trace.empty();
    if (attempted && r.trace.empty()) {
      log << "no spin could be eliminated under the given limits\n";
      return static_cast<int>(kNoProgress);
    }
    return static_cast<int>(kOk);
  });
}

inline int cmd_solve(const RunConfig& cfg, std::ostream& out, std::ostream& log) {
  return guarded(log, [&] {
    Polynomial h = detail::read_hamiltonian(cfg);
    Rational min;
    std::vector<SpinAssignment> states;
    if (cfg.method == "brute") {
      auto r = brute_force(h);
      min = r.min_energy;
      states = std::move(r.ground_states);
    } else if (cfg.method == "eliminate") {
      auto r = full_solve(h, detail::parse_order(cfg.order),
                          detail::limits_from(cfg).max_neighborhood);
      min = r.min_energy;
      states = std::move(r.ground_states);
    } else {
      throw Error("unknown --method '" + cfg.method + "' (brute|eliminate)");
    }
    detail::with_output(cfg, out, [&](std::ostream& os) {
      os << format_rational(min) << '\n';
      detail::write_states(os, states);
    });
    log << states.size() << " ground state(s)\n";
    return static_cast<int>(kOk);
  });
}

inline int cmd_backmap(const RunConfig& cfg, std::ostream& out, std::ostream& log) {
  return guarded(log, [&] {
    if (cfg.trace.empty()) throw Error("--trace is required");
    Trace trace = parse_trace(detail::read_text(cfg.trace));
    std::string text = cfg.assignment;
    if (text.empty()) {
      if (cfg.input.empty()) throw Error("give the reduced solution with --assignment or --input");
      text = detail::read_text(cfg.input);
    }
    SpinAssignment reduced = parse_assignment(text);
    auto full = back_substitute(trace, reduced);
    detail::with_output(cfg, out, [&](std::ostream& os) {
      for (const auto& s : full) {
        os << format_assignment(s);
        if (cfg.name == "n291311_3" || cfg.name == "n291311_binary") {
          auto f = decode_291311(s, cfg.name);
          os << " bits=" << f.bits << " value=" << f.value;
        } else if (cfg.name == "bit48_10") {
          os << " bits=" << binary_string(s, {1, 2, 3, 4, 5, 6, 7, 8, 9, 10});
        } else if (!cfg.name.empty()) {
          throw Error("no decoding for '" + cfg.name + "'");
        }
        os << '\n';
      }
    });
    log << full.size() << " completion(s)\n";
    return static_cast<int>(kOk);
  });
}

inline int cmd_spectrum(const RunConfig& cfg, std::ostream& out, std::ostream& log) {
  return guarded(log, [&] {
    Polynomial h = detail::read_hamiltonian(cfg);
    auto levels = spectrum(h);
    detail::with_output(cfg, out, [&](std::ostream& os) {
      os << "energy,multiplicity\n";
      for (const auto& [e, m] : levels) os << format_rational(e) << ',' << m << '\n';
    });
    log << levels.size() << " level(s)\n";
    return static_cast<int>(kOk);
  });
}

inline constexpr std::size_t kMaxcutVerifyLimit = 20;

inline int cmd_maxcut(const RunConfig& cfg, std::ostream& out, std::ostream& log) {
  return guarded(log, [&] {
    if (cfg.strategy != "2local" && cfg.strategy != "klocal") {
      throw Error("unknown --strategy '" + cfg.strategy + "' (2local|klocal)");
    }
    std::optional<Graph> given;
    if (!cfg.input.empty()) {
      std::istringstream is(detail::read_text(cfg.input));
      given = read_graph(is);
    } else if (cfg.n == 0) {
      throw Error("--n or --input is required");
    }
    if (cfg.runs == 0) throw Error("--runs must be positive");
    const std::size_t runs = given ? 1 : cfg.runs;
    double total = 0;
    detail::with_output(cfg, out, [&](std::ostream& os) {
      write_maxcut_csv_header(os);
      for (std::size_t r = 0; r < runs; ++r) {
        const std::uint64_t seed = cfg.seed + r;
        Graph g = given ? *given : random_cubic_graph(cfg.n, seed);
        MaxcutReduction red = cfg.strategy == "2local" ? maxcut_reduce_2local(g, seed, cfg.max_degree.value_or(6))
                                                       : maxcut_reduce_klocal(g, cfg.rounds);
        red.stats.seed = seed;
        write_maxcut_csv_row(os, red.stats);
        total += red.stats.removed_fraction;
        if (g.n() <= kMaxcutVerifyLimit) {
          auto reduced = solve_reduced_maxcut(g, red.reduced, red.trace);
          auto oracle = brute_force(maxcut_hamiltonian(g));
          Rational best = (g.total_weight() - oracle.min_energy) / 2;
          bool ok = reduced.cut == best && reduced.assignments == oracle.ground_states;
          log << "seed " << seed << ": cut " << format_rational(reduced.cut) << ", oracle "
              << format_rational(best) << (ok ? " (match)" : " (MISMATCH)") << '\n';
          if (!ok) throw std::logic_error("reduced Max-Cut solution disagrees with brute force");
        }
      }
    });
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", total / static_cast<double>(runs));
    log << "mean removed_fraction " << buf << " over " << runs << " run(s)\n";
    return static_cast<int>(kOk);
  });
}

inline int cmd_mobius(const RunConfig& cfg, std::ostream& out, std::ostream& log) {
  return guarded(log, [&] {
    if (cfg.n == 0) throw Error("--n is required");
    if (!cfg.grid.empty()) {
      std::vector<Rational> grid;
      for (const auto& tok : detail::split_list(cfg.grid)) grid.push_back(detail::parse_rational_arg(tok, "--grid"));
      auto scan = critical_j_scan(cfg.n, grid);
      detail::with_output(cfg, out, [&](std::ostream& os) {
        os << "j,min_energy,alternating,other\n";
        for (const auto& p : scan.points) {
          os << format_rational(p.j) << ',' << format_rational(p.min_energy) << ',' << p.alternating_ground << ','
             << p.other_ground << '\n';
        }
      });
      log << "J* = " << format_rational(scan.critical_j) << " (4/N = " << format_rational(critical_j_theory(cfg.n))
          << ")\n";
      return static_cast<int>(kOk);
    }
    if (cfg.j.empty()) throw Error("--grid or --j is required");
    Polynomial h = mobius_ladder(cfg.n, detail::parse_rational_arg(cfg.j, "--j"));
    detail::with_output(cfg, out, [&](std::ostream& os) { write_polynomial(os, h); });
    return static_cast<int>(kOk);
  });
}

inline int cmd_hopfield(const RunConfig& cfg, std::ostream& out, std::ostream& log) {
  return guarded(log, [&] {
    HopfieldConfig hc;
    if (cfg.n) hc.n = cfg.n;
    hc.p = cfg.p;
    hc.trials = cfg.trials;
    hc.per_block = cfg.eliminate;
    hc.descent.seed = cfg.seed;
    if (hc.trials == 0) throw Error("--trials must be positive");
    if (cfg.eliminate == 0) {
      PatternSet ps = PatternSet::walsh(hc.n, hc.p);
      Polynomial h = hebbian_couplings(ps, hc.keep_diagonal);
      auto hist = run_trials(h, hc.trials, hc.descent);
      std::uint64_t hits = 0;
      const auto mem = ps.memories();
      for (const auto& [s, c] : hist.counts) {
        if (mem.count(s) || mem.count(s.flipped())) hits += c;
      }
      detail::with_output(cfg, out, [&](std::ostream& os) { write_histogram_csv(os, hist); });
      log << "distinct minima " << hist.distinct() << ", retrieved " << hits << '/' << hist.trials << '\n';
      return static_cast<int>(kOk);
    }
    auto ex = run_hopfield_experiment(hc);
    detail::with_output(cfg, out, [&](std::ostream& os) { write_histogram_csv(os, ex.post); });
    log << "removed " << ex.reduction.trace.size() << " spin(s), locality " << ex.reduction.reduced.locality() << '\n'
        << "ground energy " << format_rational(ex.original_ground.min_energy) << " -> "
        << format_rational(ex.reduced_ground.min_energy) << '\n'
        << "distinct minima " << ex.pre.distinct() << " -> " << ex.post.distinct() << '\n'
        << "retrieved " << ex.pre_retrieved << " -> " << ex.post_retrieved << " of " << hc.trials << '\n';
    return static_cast<int>(kOk);
  });
}

inline const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{"n291311_3", "n291311_binary", "bit48_10", "adder", "worked_example"};
  return names;
}

inline Polynomial preset(const std::string& name) {
  if (name == "adder") return adder_hamiltonian();
  if (name == "worked_example") return worked_example();
  return factor_preset(name);
}

inline int cmd_presets(const RunConfig& cfg, std::ostream& out, std::ostream& log) {
  return guarded(log, [&] {
    if (cfg.name.empty() || cfg.name == "list") {
      for (const auto& n : preset_names()) out << n << '\n';
      return static_cast<int>(kOk);
    }
    Polynomial h = preset(cfg.name);
    detail::with_output(cfg, out, [&](std::ostream& os) { write_polynomial(os, h); });
    log << cfg.name << ": " << h.variables().size() << " variables, " << h.term_count() << " terms\n";
    return static_cast<int>(kOk);
  });
}

}  // namespace spinel::cli
