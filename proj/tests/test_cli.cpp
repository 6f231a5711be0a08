#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "spinel/cli.hpp"

using namespace spinel;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out, err;
};

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("spinel_cli_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  void write(const std::string& name, const std::string& text) const { std::ofstream(path(name)) << text; }

  static std::string slurp(const std::string& p) {
    std::ifstream in(p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  Result run(const std::string& args, const std::string& env = "") const {
    std::string cmd = env + " '" SPINEL_CLI_PATH "' " + args + " >'" + path("stdout") + "' 2>'" + path("stderr") +
                      "' </dev/null";
    int status = std::system(cmd.c_str());
    int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return {code, slurp(path("stdout")), slurp(path("stderr"))};
  }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, PresetsListAndWrite) {
  auto r = run("presets --name list");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("n291311_3"), std::string::npos);
  r = run("presets --name n291311_3 --output " + path("hp.txt"));
  EXPECT_EQ(r.code, 0);
  Polynomial p = parse_polynomial(slurp(path("hp.txt")));
  EXPECT_EQ(p.term_count(), 4u);
  EXPECT_EQ(p.constant_term(), Rational(3, 2));
  EXPECT_EQ(run("presets --name missing").code, 1);
}

TEST_F(Cli, ReduceFactorizationPreset) {
  run("presets --name n291311_3 --output " + path("hp.txt"));
  auto r = run("reduce --input " + path("hp.txt") + " --order 1 --output " + path("h2.txt") + " --trace " +
               path("trace.txt"));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(slurp(path("h2.txt")), "c 1\nt -1 2 3\n");
  EXPECT_NE(r.err.find("eliminated 1"), std::string::npos);

  auto b = run("backmap --trace " + path("trace.txt") + " --assignment \"{s2=+1,s3=+1}\" --name n291311_3");
  ASSERT_EQ(b.code, 0) << b.err;
  EXPECT_EQ(b.out, "1=-1 2=+1 3=+1 bits=1000001011 value=523\n");
  b = run("backmap --trace " + path("trace.txt") + " --assignment \"2=-1 3=-1\" --name n291311_3");
  EXPECT_EQ(b.out, "1=+1 2=-1 3=-1 bits=1000101101 value=557\n");
}

TEST_F(Cli, ReduceEmptyOrderKeepsInput) {
  run("presets --name worked_example --output " + path("w.txt"));
  auto r = run("reduce --input " + path("w.txt") + " --order \"\" --output " + path("same.txt"));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(slurp(path("same.txt")), slurp(path("w.txt")));
}

TEST_F(Cli, ReduceTenSpinsThenSolve) {
  run("presets --name bit48_10 --output " + path("h10.txt"));
  auto r = run("reduce --input " + path("h10.txt") + " --target 2 --output " + path("r.txt") + " --trace " +
               path("t.txt"));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(parse_polynomial(slurp(path("r.txt"))).variables().size(), 2u);
  auto s = run("solve --input " + path("r.txt"));
  ASSERT_EQ(s.code, 0) << s.err;
  EXPECT_EQ(s.out.substr(0, s.out.find('\n')), "-504");
  std::string state = s.out.substr(s.out.find('\n') + 1);
  write("state.txt", state);
  auto b = run("backmap --trace " + path("t.txt") + " --input " + path("state.txt") + " --name bit48_10");
  ASSERT_EQ(b.code, 0) << b.err;
  EXPECT_NE(b.out.find("bits=0100010010"), std::string::npos) << b.out;
}

TEST_F(Cli, ReduceNoProgressAndParseErrors) {
  write("dense.txt", "t 1 1 2\nt 1 1 3\nt 1 1 4\nt 1 1 5\nt 1 2 3 4 5\n");
  auto r = run("reduce --input " + path("dense.txt") + " --order 1 --max-locality 2");
  EXPECT_EQ(r.code, 2);
  write("bad.txt", "t 1 1 2\nt oops 3\n");
  r = run("reduce --input " + path("bad.txt"));
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("line 2"), std::string::npos) << r.err;
  EXPECT_EQ(run("reduce --input " + path("nothing.txt")).code, 1);
  EXPECT_EQ(run("frobnicate").code, 1);
}

TEST_F(Cli, SolveWorkedExample) {
  run("presets --name worked_example --output " + path("w.txt"));
  for (const char* method : {"brute", "eliminate"}) {
    auto r = run("solve --input " + path("w.txt") + " --method " + method);
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out, "-14\n1=+1 2=+1 3=-1 4=+1 5=-1\n");
  }
}

TEST_F(Cli, SolveSizeCap) {
  std::string big;
  for (int i = 1; i <= 30; ++i) big += "t 1 " + std::to_string(i) + "\n";
  write("big.txt", big);
  EXPECT_EQ(run("solve --input " + path("big.txt")).code, 3);
  EXPECT_EQ(run("spectrum --input " + path("big.txt")).code, 3);
  write("star.txt", "t 1 1 2\nt 1 1 3\nt 1 1 4\nt 1 1 5\nt 1 1 6\n");
  EXPECT_EQ(run("solve --method eliminate --order ascending --input " + path("star.txt"), "SPINEL_NEIGHBORHOOD_CAP=4")
                .code,
            3);
  EXPECT_EQ(run("solve --method eliminate --order ascending --input " + path("star.txt")).code, 0);
}

TEST_F(Cli, Spectrum) {
  write("p.txt", "t 1 1 2\n");
  auto r = run("spectrum --input " + path("p.txt"));
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "energy,multiplicity\n-1,2\n1,2\n");
}

TEST_F(Cli, MaxcutSmallVerifiesAgainstOracle) {
  auto r = run("maxcut --n 16 --runs 3 --seed 7");
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream is(r.out);
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "n,seed,removed_fraction,deg0,deg3,deg4,deg5,deg6");
  int rows = 0;
  while (std::getline(is, line)) ++rows;
  EXPECT_EQ(rows, 3);
  EXPECT_NE(r.err.find("(match)"), std::string::npos);
  EXPECT_EQ(r.err.find("MISMATCH"), std::string::npos);
  EXPECT_EQ(run("maxcut --n 16 --strategy nope").code, 1);
  EXPECT_EQ(run("maxcut --n 15").code, 1);
  EXPECT_EQ(run("maxcut --n 16 --strategy klocal --rounds 2").code, 0);
}

TEST_F(Cli, MaxcutIsDeterministic) {
  auto a = run("maxcut --n 64 --runs 4 --seed 3");
  auto b = run("maxcut --n 64 --runs 4 --seed 3");
  EXPECT_EQ(a.out, b.out);
}

TEST_F(Cli, MaxcutFromGraphFile) {
  write("g.txt", "n 4\ne 1 2\ne 1 3\ne 1 4\ne 2 3\ne 2 4\ne 3 4\n");
  auto r = run("maxcut --input " + path("g.txt"));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.err.find("cut 4, oracle 4 (match)"), std::string::npos) << r.err;
}

TEST_F(Cli, MobiusScanAndHamiltonian) {
  auto r = run("mobius --n 8 --grid 1/4,3/8,1/2,5/8");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.err.find("J* = 1/2"), std::string::npos);
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "j,min_energy,alternating,other");
  r = run("mobius --n 8 --j 1/4");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(parse_polynomial(r.out).term_count(), 12u);
  EXPECT_EQ(run("mobius --n 8 --grid 1/4,3/8").code, 1);
  EXPECT_EQ(run("mobius --n 8 --j x").code, 1);
}

TEST_F(Cli, HopfieldHistogram) {
  auto r = run("hopfield --n 16 --p 2 --trials 20 --seed 1");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "energy,count,state");
  auto again = run("hopfield --n 16 --p 2 --trials 20 --seed 1");
  EXPECT_EQ(again.out, r.out);
  r = run("hopfield --n 16 --p 2 --trials 10 --eliminate 1");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.err.find("removed 2 spin(s)"), std::string::npos) << r.err;
  EXPECT_EQ(run("hopfield --n 12 --p 2 --trials 5").code, 1);
}
