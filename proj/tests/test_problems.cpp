#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "oracle.hpp"
#include "spinel/problems.hpp"

using namespace spinel;

namespace {

std::set<SpinAssignment> as_set(const std::vector<SpinAssignment>& v) { return {v.begin(), v.end()}; }

Rational brute_max_cut(const Graph& g) {
  std::vector<SpinIndex> vars(g.n());
  for (std::size_t k = 0; k < g.n(); ++k) vars[k] = static_cast<SpinIndex>(k + 1);
  Rational best = 0;
  for (std::uint64_t code = 0; code < (std::uint64_t{1} << g.n()); ++code) {
    Rational c = cut_value(g, oracle::config(vars, code));
    if (c > best) best = c;
  }
  return best;
}

const char* kTenSpin =
    "t 22 1 2\nt 16 1 3\nt 8 1 4\nt -14 1 5\nt 8 1 6\nt 4 1 7\nt -8 1 8\nt -10 1 9\nt -22 1 10\nt -46 1\n"
    "t -14 2 3\nt 20 2 4\nt 14 2 5\nt -12 2 6\nt 2 2 7\nt -24 2 8\nt -28 2 9\nt 2 2 10\nt -16 2\n"
    "t -18 3 4\nt 10 3 5\nt 36 3 6\nt 12 3 7\nt 16 3 8\nt 6 3 9\nt -30 3 10\nt -78 3\n"
    "t 28 4 5\nt -26 4 6\nt 10 4 7\nt 10 4 8\nt 16 4 9\nt -4 4 10\nt -72 4\n"
    "t 10 5 6\nt 24 5 7\nt 20 5 8\nt 12 5 9\nt -8 5 10\nt -116 5\n"
    "t -8 6 7\nt 22 6 8\nt -6 6 9\nt -36 6 10\nt -12 6\n"
    "t -16 7 8\nt 16 7 9\nt 20 7 10\nt -84 7\nt 34 8 9\nt -42 8 10\nt -36 8\nt 18 9 10\nt -74 9\nt -24 10\n";

}  // namespace

TEST(CubicGraph, SmallAndMedium) {
  Graph k4 = random_cubic_graph(4, 0);
  EXPECT_EQ(k4.edges().size(), 6u);
  EXPECT_TRUE(k4.is_cubic());
  Graph g = random_cubic_graph(20, 42);
  EXPECT_EQ(g.edges().size(), 30u);
  EXPECT_TRUE(g.is_cubic());
  EXPECT_TRUE(g.connected());
  EXPECT_EQ(random_cubic_graph(20, 42).edges(), g.edges());
  EXPECT_THROW(random_cubic_graph(7, 0), Error);
  EXPECT_THROW(random_cubic_graph(2, 0), Error);
}

TEST(CubicGraph, ManySeedsAtFullSize) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Graph g = random_cubic_graph(128, seed);
    ASSERT_TRUE(g.is_cubic());
    ASSERT_TRUE(g.connected());
    ASSERT_EQ(g.edges().size(), 192u);
  }
}

TEST(Graph, TextRoundTripAndErrors) {
  Graph g(3);
  g.add_edge(1, 2);
  g.add_edge(3, 2, Rational(5, 2));
  std::ostringstream os;
  write_graph(os, g);
  EXPECT_EQ(os.str(), "n 3\ne 1 2\ne 2 3 5/2\n");
  std::istringstream is(os.str());
  Graph back = read_graph(is);
  EXPECT_EQ(back.edges(), g.edges());
  EXPECT_THROW(g.add_edge(2, 2), Error);
  EXPECT_THROW(g.add_edge(1, 2), Error);
  EXPECT_THROW(g.add_edge(1, 4), Error);
  std::istringstream bad("n 3\ne 1 1\n");
  EXPECT_THROW(read_graph(bad), ParseError);
  std::istringstream none("e 1 2\n");
  EXPECT_THROW(read_graph(none), ParseError);
}

TEST(Maxcut, HamiltonianExamples) {
  Graph edge(2);
  edge.add_edge(1, 2);
  EXPECT_EQ(maxcut_hamiltonian(edge), parse_polynomial("t 1 1 2\n"));
  EXPECT_EQ(brute_force(maxcut_hamiltonian(edge)).min_energy, Rational(-1));

  Graph tri(3);
  tri.add_edge(1, 2);
  tri.add_edge(2, 3);
  tri.add_edge(1, 3);
  auto t = brute_force(maxcut_hamiltonian(tri));
  EXPECT_EQ(t.min_energy, Rational(-1));
  EXPECT_EQ((tri.total_weight() - t.min_energy) / 2, Rational(2));
  EXPECT_EQ(brute_max_cut(tri), Rational(2));

  Graph k4 = random_cubic_graph(4, 1);
  EXPECT_EQ(brute_max_cut(k4), Rational(4));
}

TEST(Maxcut, TwoLocalOnK4) {
  auto r = maxcut_reduce_2local(random_cubic_graph(4, 0), 3);
  EXPECT_GE(r.stats.removed, 1u);
  EXPECT_LE(r.reduced.locality(), 2u);
}

TEST(Maxcut, TwoLocalRespectsLimitsAndRemovesAThird) {
  double total = 0;
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    Graph g = random_cubic_graph(128, seed);
    auto r = maxcut_reduce_2local(g, seed);
    ASSERT_LE(r.reduced.locality(), 2u);
    for (SpinIndex v : r.reduced.variables()) ASSERT_LE(r.reduced.degree(v), 6u);
    std::size_t counted = r.stats.removed;
    for (const auto& [d, n] : r.stats.degree_histogram) counted += n;
    ASSERT_EQ(counted, g.n());
    total += r.stats.removed_fraction;
  }
  EXPECT_GT(total / 30, 1.0 / 3);
}

TEST(Maxcut, BackMappedCutMatchesBruteForce) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    Graph g = random_cubic_graph(16, seed);
    auto r = maxcut_reduce_2local(g, seed);
    auto sol = solve_reduced_maxcut(g, r.reduced, r.trace);
    Rational best = brute_max_cut(g);
    EXPECT_EQ(sol.cut, best);
    for (const auto& s : sol.assignments) EXPECT_EQ(cut_value(g, s), best);
    EXPECT_EQ(as_set(sol.assignments), as_set(brute_force(maxcut_hamiltonian(g)).ground_states));
  }
}

TEST(Maxcut, KLocalRounds) {
  auto k4 = maxcut_reduce_klocal(random_cubic_graph(4, 0), 1);
  EXPECT_EQ(k4.stats.removed, 1u);
  EXPECT_EQ(k4.reduced.variables().size(), 3u);
  for (SpinIndex v : k4.reduced.variables()) EXPECT_LE(k4.reduced.degree(v), 4u);

  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Graph g = random_cubic_graph(32, seed);
    auto one = maxcut_reduce_klocal(g, 1);
    EXPECT_GE(one.stats.removed, g.n() / 8);
    EXPECT_LE(one.reduced.locality(), 2u);
    for (SpinIndex v : one.reduced.variables()) EXPECT_LE(one.reduced.degree(v), 4u);
    auto two = maxcut_reduce_klocal(g, 2);
    EXPECT_LE(two.reduced.locality(), 4u);
    for (SpinIndex v : two.reduced.variables()) EXPECT_LE(two.reduced.degree(v), 6u);
  }
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    Graph g = random_cubic_graph(16, seed);
    auto r = maxcut_reduce_klocal(g, 2);
    EXPECT_EQ(brute_force(r.reduced).min_energy, brute_force(maxcut_hamiltonian(g)).min_energy);
  }
}

TEST(Maxcut, RejectsNonCubic) {
  Graph g(4);
  g.add_edge(1, 2);
  EXPECT_THROW(maxcut_reduce_2local(g, 0), Error);
  EXPECT_THROW(maxcut_reduce_klocal(g, 1), Error);
}

TEST(Maxcut, CsvRow) {
  MaxcutStats st;
  st.n = 8;
  st.seed = 3;
  st.removed_fraction = 0.375;
  st.degree_histogram = {{3, 1}, {4, 2}, {6, 2}};
  std::ostringstream os;
  write_maxcut_csv_header(os);
  write_maxcut_csv_row(os, st);
  EXPECT_EQ(os.str(), "n,seed,removed_fraction,deg0,deg3,deg4,deg5,deg6\n8,3,0.375000,0,1,2,0,2\n");
}

TEST(Mobius, LadderShape) {
  Polynomial h = mobius_ladder(8, 1);
  EXPECT_EQ(h.term_count(), 12u);
  EXPECT_EQ(h.coefficient(Monomial{1, 8}), Rational(1));
  EXPECT_EQ(h.coefficient(Monomial{1, 5}), Rational(1));
  auto plain = brute_force(mobius_ladder(8, 0));
  EXPECT_EQ(plain.min_energy, Rational(-8));
  EXPECT_EQ(plain.ground_states.size(), 2u);
  for (const auto& s : plain.ground_states) EXPECT_TRUE(is_alternating(s));
  EXPECT_THROW(mobius_ladder(6, 1), Error);
}

TEST(Mobius, CriticalCoupling) {
  auto s8 = critical_j_scan(8, {Rational(1, 4), Rational(3, 8), Rational(1, 2), Rational(5, 8)});
  EXPECT_EQ(s8.critical_j, Rational(1, 2));
  EXPECT_TRUE(s8.points[2].alternating_ground);
  EXPECT_TRUE(s8.points[2].other_ground);
  EXPECT_FALSE(s8.points[3].alternating_ground);
  auto s12 = critical_j_scan(12, {Rational(1, 4), Rational(1, 3), Rational(5, 12)});
  EXPECT_EQ(s12.critical_j, Rational(1, 3));
  EXPECT_THROW(critical_j_scan(8, {Rational(1, 4), Rational(3, 8)}), Error);
  EXPECT_THROW(critical_j_scan(8, {Rational(5, 8), Rational(1, 4)}), Error);
}

TEST(Mobius, ReductionKeepsMinimumAcrossGrid) {
  for (std::size_t n : {8u, 12u}) {
    for (int k = 0; k <= 8; ++k) {
      Rational j(k, 8);
      Polynomial h = mobius_ladder(n, j);
      auto r = reduce(h, EliminationOrder::greedy(), {{}, n / 2, false});
      ASSERT_EQ(brute_force(r.reduced).min_energy, brute_force(h).min_energy) << n << " " << k;
    }
  }
}

TEST(Hebbian, SinglePatternEnergy) {
  PatternSet ps({{1, -1, 1, 1, -1, -1}});
  Polynomial h = hebbian_couplings(ps);
  EXPECT_EQ(h.evaluate(ps.assignment(0)), Rational(-5, 2));
  EXPECT_EQ(brute_force(h).min_energy, Rational(-5, 2));
  EXPECT_THROW(hebbian_couplings(PatternSet{}), Error);
}

TEST(Hebbian, ThirtyTwoSpinNetwork) {
  auto ps = PatternSet::walsh(32, 4);
  EXPECT_TRUE(ps.orthogonal());
  Polynomial h = hebbian_couplings(ps, true);
  for (const auto& m : ps.memories()) EXPECT_EQ(h.evaluate(m), Rational(-16));
  auto g = full_solve(h, EliminationOrder::greedy());
  EXPECT_EQ(g.min_energy, Rational(-16));
  auto gs = as_set(g.ground_states);
  for (const auto& m : ps.memories()) EXPECT_TRUE(gs.count(m));
}

TEST(Hebbian, OrthogonalEnergyFormula) {
  auto ps = PatternSet::walsh(16, 3);
  Polynomial h = hebbian_couplings(ps, false);
  for (std::size_t mu = 0; mu < 3; ++mu) EXPECT_EQ(h.evaluate(ps.assignment(mu)), Rational(-(16 - 3), 2));
}

TEST(DenseHebbian, Shapes) {
  PatternSet one({{1, -1, -1, 1}});
  EXPECT_EQ(dense_hebbian(one, 2), hebbian_couplings(one, false));
  EXPECT_EQ(dense_hebbian(one, 4).term_count(), 1u);
  EXPECT_THROW(dense_hebbian(one, 5), Error);
  EXPECT_THROW(dense_hebbian(one, 1), Error);
}

TEST(DenseHebbian, StoredPatternsBeatRandomStates) {
  auto ps = PatternSet::walsh(16, 2);
  Polynomial h = dense_hebbian(ps, 3);
  std::mt19937_64 rng(10);
  Rational sum = 0;
  for (int t = 0; t < 1000; ++t) {
    SpinAssignment s;
    for (SpinIndex i = 1; i <= 16; ++i) s.set(i, (rng() & 1) ? 1 : -1);
    sum += h.evaluate(s);
  }
  Rational mean = sum / 1000;
  for (std::size_t mu = 0; mu < ps.size(); ++mu) EXPECT_LE(h.evaluate(ps.assignment(mu)), mean);
}

TEST(Adder, SixteenGroundStates) {
  Polynomial h = adder_hamiltonian();
  EXPECT_EQ(h.variables().size(), 8u);
  auto b = brute_force(h);
  EXPECT_EQ(b.ground_states.size(), 16u);
  EXPECT_EQ(b.ground_states, adder_valid_additions());
  // 01 + 01 = 010: inputs a=1, b=1, low sum 0, carry 1 into the high sum bit 1
  SpinAssignment one_plus_one{{1, -1}, {2, 1}, {3, -1}, {4, 1}, {5, 1}, {6, -1}, {7, 1}, {8, -1}};
  EXPECT_EQ(h.evaluate(one_plus_one), b.min_energy);
}

TEST(Adder, CarryIsMajority) {
  Polynomial t = adder_carry(1, 2, 3);
  EXPECT_EQ(t.evaluate(SpinAssignment{{1, 1}, {2, 1}, {3, -1}}), Rational(1));
  EXPECT_EQ(t.evaluate(SpinAssignment{{1, -1}, {2, -1}, {3, 1}}), Rational(-1));
  EXPECT_EQ(t.evaluate(SpinAssignment{{1, 1}, {2, 1}, {3, 1}}), Rational(1));
}

TEST(Adder, ReducedChainRecoversAllAdditions) {
  auto r = reduce(adder_hamiltonian(), EliminationOrder::explicit_order({1, 2, 3, 4}));
  EXPECT_EQ(r.reduced.variables(), (std::set<SpinIndex>{5, 6, 7, 8}));
  auto red = brute_force(r.reduced);
  std::set<SpinAssignment> all;
  for (const auto& s : red.ground_states) {
    for (const auto& full : back_substitute(r.trace, s)) all.insert(full);
  }
  EXPECT_EQ(all, as_set(adder_valid_additions()));
}

TEST(Adder, PenaltyDiffersByConstant) {
  EXPECT_EQ((adder_penalty() - adder_hamiltonian()).terms(), Polynomial::constant(8).terms());
}

TEST(Factor, ThreeSpinPreset) {
  EXPECT_EQ(factor_preset("n291311_3"), parse_polynomial("c 3/2\nt 1/2 1 2\nt 1/2 1 3\nt -1/2 2 3\n"));
  EXPECT_THROW(factor_preset("nope"), Error);
}

TEST(Factor, BinaryPresetDecodesToFactors) {
  Polynomial h = factor_preset("n291311_binary");
  EXPECT_EQ(h.terms(), parse_polynomial("c 3/2\nt 1/2 1 2\nt 1/2 1 5\nt -1/2 2 5\n").terms());
  auto b = brute_force(h);
  std::set<std::uint64_t> values;
  std::set<std::string> bits;
  for (const auto& s : b.ground_states) {
    auto f = decode_291311(s, "n291311_binary");
    values.insert(f.value);
    bits.insert(f.bits);
  }
  EXPECT_EQ(values, (std::set<std::uint64_t>{523, 557}));
  EXPECT_EQ(bits, (std::set<std::string>{"1000001011", "1000101101"}));
  EXPECT_EQ(523u * 557u, kSemiprime291311);
}

TEST(Factor, TenSpinPresetMatchesPrintedCoefficients) {
  Polynomial h = factor_preset("bit48_10");
  EXPECT_EQ(h, parse_polynomial(kTenSpin));
  std::size_t pairs = 0, fields = 0;
  for (const auto& [m, c] : h.terms()) (m.size() == 2 ? pairs : fields)++;
  EXPECT_EQ(pairs, 45u);
  EXPECT_EQ(fields, 10u);
}

TEST(Builders, TextRoundTrip) {
  std::vector<Polynomial> all{worked_example(), adder_hamiltonian(), mobius_ladder(12, Rational(1, 3)),
                              hebbian_couplings(PatternSet::walsh(32, 4), true),
                              maxcut_hamiltonian(random_cubic_graph(20, 1)), dense_hebbian(PatternSet::walsh(8, 2), 4)};
  for (const auto& name : factor_preset_names()) all.push_back(factor_preset(name));
  for (const auto& p : all) EXPECT_EQ(parse_polynomial(format_polynomial(p)), p);
}

TEST(Hopfield, BlockReduction) {
  auto ps = PatternSet::walsh(32, 4);
  Polynomial h = hebbian_couplings(ps, true);
  auto r = hopfield_block_reduce(h, 32, 4, 1, 0);
  EXPECT_EQ(r.trace.size(), 4u);
  std::set<std::size_t> blocks;
  for (const auto& rec : r.trace.records) blocks.insert((rec.eliminated - 1) / 8);
  EXPECT_EQ(blocks.size(), 4u);
  EXPECT_LE(r.reduced.locality(), 6u);
  EXPECT_EQ(full_solve(r.reduced, EliminationOrder::greedy()).min_energy, Rational(-16));
  EXPECT_THROW(hopfield_block_reduce(h, 32, 5, 1, 0), Error);
}
