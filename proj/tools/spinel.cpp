// spinel: exact spin elimination from the command line.

#include <iostream>

#include <CLI11.hpp>

#include "spinel/cli.hpp"

using spinel::cli::RunConfig;

namespace {

void add_io(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--input", cfg.input, "input file ('-' for stdin)");
  cmd->add_option("--output", cfg.output, "output file (default stdout)");
}

void add_limits(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--order", cfg.order, "elimination order: greedy, ascending or a list like 1,3,6");
  cmd->add_option("--max-neighborhood", cfg.max_neighborhood, "per-elimination neighborhood cap");
  cmd->add_option("--max-locality", cfg.max_locality, "refuse eliminations above this locality");
  cmd->add_option("--max-degree", cfg.max_degree, "refuse eliminations that push a neighbor above this degree");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact ground-state-preserving spin elimination for k-local Ising Hamiltonians"};
  app.require_subcommand(1);
  RunConfig cfg;
  int code = 0;

  auto* reduce = app.add_subcommand("reduce", "eliminate spins; write the reduced Hamiltonian and trace");
  add_io(reduce, cfg);
  add_limits(reduce, cfg);
  reduce->add_option("--trace", cfg.trace, "trace file to write");
  reduce->add_option("--target", cfg.target, "stop once this many variables remain");
  reduce->callback([&] { code = spinel::cli::cmd_reduce(cfg, std::cout, std::cerr); });

  auto* solve = app.add_subcommand("solve", "minimum energy and all ground states");
  add_io(solve, cfg);
  add_limits(solve, cfg);
  solve->add_option("--method", cfg.method, "brute (exhaustive) or eliminate (full elimination)");
  solve->callback([&] { code = spinel::cli::cmd_solve(cfg, std::cout, std::cerr); });

  auto* backmap = app.add_subcommand("backmap", "complete a reduced solution through a trace");
  add_io(backmap, cfg);
  backmap->add_option("--trace", cfg.trace, "trace file written by reduce")->required();
  backmap->add_option("--assignment", cfg.assignment, "reduced solution, e.g. \"2=+1 3=+1\"");
  backmap->add_option("--name", cfg.name, "decode completions for a preset (n291311_3, n291311_binary, bit48_10)");
  backmap->callback([&] { code = spinel::cli::cmd_backmap(cfg, std::cout, std::cerr); });

  auto* spectrum = app.add_subcommand("spectrum", "exhaustive energy levels as CSV");
  add_io(spectrum, cfg);
  spectrum->callback([&] { code = spinel::cli::cmd_spectrum(cfg, std::cout, std::cerr); });

  auto* maxcut = app.add_subcommand("maxcut", "Max-Cut reduction statistics on random cubic graphs");
  add_io(maxcut, cfg);
  maxcut->add_option("--n", cfg.n, "vertex count");
  maxcut->add_option("--runs", cfg.runs, "graphs to generate (seeds seed..seed+runs-1)");
  maxcut->add_option("--seed", cfg.seed, "first seed");
  maxcut->add_option("--strategy", cfg.strategy, "2local or klocal");
  maxcut->add_option("--rounds", cfg.rounds, "rounds for the klocal strategy");
  maxcut->add_option("--max-degree", cfg.max_degree, "degree limit for the 2local strategy (default 6)");
  maxcut->callback([&] { code = spinel::cli::cmd_maxcut(cfg, std::cout, std::cerr); });

  auto* mobius = app.add_subcommand("mobius", "J-Moebius ladder: critical J scan or Hamiltonian");
  mobius->add_option("--output", cfg.output, "output file (default stdout)");
  mobius->add_option("--n", cfg.n, "ladder size (multiple of 4)");
  mobius->add_option("--j", cfg.j, "chord weight; writes the Hamiltonian");
  mobius->add_option("--grid", cfg.grid, "comma list of J values to scan, e.g. 1/4,3/8,1/2,5/8");
  mobius->callback([&] { code = spinel::cli::cmd_mobius(cfg, std::cout, std::cerr); });

  auto* hopfield = app.add_subcommand("hopfield", "Hebbian memory retrieval histograms");
  hopfield->add_option("--output", cfg.output, "output file (default stdout)");
  hopfield->add_option("--n", cfg.n, "network size (power of two, default 32)");
  hopfield->add_option("--p", cfg.p, "stored patterns (default 4)");
  hopfield->add_option("--trials", cfg.trials, "random initial conditions (default 2000)");
  hopfield->add_option("--seed", cfg.seed, "seed");
  hopfield->add_option("--eliminate", cfg.eliminate, "spins eliminated per pattern block (default 0)");
  hopfield->callback([&] { code = spinel::cli::cmd_hopfield(cfg, std::cout, std::cerr); });

  auto* presets = app.add_subcommand("presets", "write a bundled Hamiltonian");
  presets->add_option("--name", cfg.name, "preset name, or 'list'");
  presets->add_option("--output", cfg.output, "output file (default stdout)");
  presets->callback([&] { code = spinel::cli::cmd_presets(cfg, std::cout, std::cerr); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : spinel::cli::kInvalid;
  }
  return code;
}
