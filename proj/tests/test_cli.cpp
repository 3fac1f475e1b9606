#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <string>

#include "smt/io.hpp"
#include "smt/reward.hpp"
#include "test_support.hpp"

using namespace smt;
using namespace smt::testing;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
  std::string err;
  io::Json json() const { return io::parse_json(out, "stdout"); }
};

fs::path scratch() {
  static fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / ("smt_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string data(const std::string& name) { return std::string(SMT_DATA_DIR) + "/" + name; }

Run run(const std::string& args, const std::string& env = "") {
  fs::path out = scratch() / "stdout.txt";
  fs::path err = scratch() / "stderr.txt";
  std::string cmd = env + " " + std::string(SMT_BIN) + " " + args + " >" + out.string() + " 2>" + err.string();
  int status = std::system(cmd.c_str());
  Run r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = io::read_file(out.string());
  r.err = io::read_file(err.string());
  return r;
}

std::string write(const std::string& name, const std::string& text) {
  fs::path p = scratch() / name;
  io::write_file(p.string(), text);
  return p.string();
}

std::string marginals(const std::string& mu, const std::string& nu) {
  return "--mu " + data(mu) + " --nu " + data(nu);
}

}  // namespace

TEST(Cli, CoupleIncreasing) {
  auto r = run("couple --increasing " + marginals("mu_star.json", "nu_star.json"));
  ASSERT_EQ(r.code, 0) << r.err;
  auto p = io::coupling_from_json<Q>(r.json());
  EXPECT_TRUE(p == increasing_transport(mu_star(), nu_star()));
  EXPECT_EQ(p.rows()[1].kernel, measure({{"-4", "1/36"}, {"-2.5", "4/36"}, {"2", "7/36"}}));
  EXPECT_EQ(io::dump(r.json()["martingale_points"], -1), "[-1,0]");
}

TEST(Cli, CoupleDecreasingMatchesTabulatedPlan) {
  auto r = run("couple --decreasing " + marginals("mu_star.json", "nu_star.json"));
  ASSERT_EQ(r.code, 0) << r.err;
  auto p = io::coupling_from_json<Q>(r.json());
  EXPECT_EQ(p.rows()[0].kernel, measure({{"-4", "1/3"}}));
  EXPECT_EQ(p.rows()[1].kernel, measure({{"-2.5", "7/27"}, {"2", "2/27"}}));
  EXPECT_EQ(p.rows()[2].kernel, measure({{"-2.5", "2/27"}, {"2", "7/27"}}));
}

TEST(Cli, CoupleEqualMarginalsGivesIdentity) {
  auto r = run("couple " + marginals("mu_star.json", "mu_star.json"));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(io::coupling_from_json<Q>(r.json()) == identity_coupling(mu_star()));
}

TEST(Cli, OrderViolationIsAnInputError) {
  auto r = run("couple " + marginals("nu_star.json", "mu_star.json"));
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("p_mu("), std::string::npos) << r.err;
  EXPECT_TRUE(r.out.empty());
}

TEST(Cli, OutputIsByteIdentical) {
  std::string args = "couple --decreasing " + marginals("mu_star.json", "nu_prime.json");
  EXPECT_EQ(run(args).out, run(args).out);
  std::string fargs = "--float solve --reward 'exp(x)*exp(y)' " + marginals("mu_star.json", "nu_star.json");
  EXPECT_EQ(run(fargs).out, run(fargs).out);
}

TEST(Cli, CoupleWritesReadableFiles) {
  std::string json = (scratch() / "inc.json").string();
  std::string csv = (scratch() / "inc.csv").string();
  std::string svg = (scratch() / "inc.svg").string();
  auto r = run("couple " + marginals("mu_star.json", "nu_star.json") + " --json " + json + " --csv " + csv +
               " --svg " + svg);
  ASSERT_EQ(r.code, 0) << r.err;
  auto expected = increasing_transport(mu_star(), nu_star());
  EXPECT_TRUE(io::coupling_from_text<Q>(io::read_file(json)) == expected);
  EXPECT_TRUE(io::coupling_from_text<Q>(io::read_file(csv)) == expected);
  EXPECT_NE(io::read_file(svg).find("<svg"), std::string::npos);
  auto check = run("check --what validity --coupling " + json + " " + marginals("mu_star.json", "nu_star.json"));
  EXPECT_EQ(check.code, 0) << check.err;
}

TEST(Cli, DecomposeTwoComponents) {
  auto r = run("decompose " + marginals("mu_two.csv", "nu_two.csv"));
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = r.json();
  EXPECT_EQ(j["x_star"], 2);
  ASSERT_EQ(j["components"].size(), 2u);
  EXPECT_EQ(j["components"][0]["kind"], "supermartingale");
  EXPECT_EQ(j["components"][1]["kind"], "martingale");
  EXPECT_EQ(j["components"][1]["I"]["text"], "(-1, 1)");
}

TEST(Cli, ShadowOfDirac) {
  auto r = run("shadow --x 1 --k 1/3 --nu " + data("nu_star.json"));
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = r.json();
  EXPECT_EQ(io::measure_from_json<Q>(j["shadow"]), measure({{"-2.5", "2/27"}, {"2", "7/27"}}));
  EXPECT_EQ(j["s_star"], "16/27");
  auto infeasible = run("shadow --x -5 --k 1/3 --nu " + data("nu_star.json"));
  EXPECT_EQ(infeasible.code, 2);
  EXPECT_NE(infeasible.err.find("slack"), std::string::npos) << infeasible.err;
}

TEST(Cli, ShadowOfMeasure) {
  auto r = run("shadow " + marginals("mu_star.json", "nu_star.json"));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(io::measure_from_json<Q>(r.json()["shadow"]), nu_star());
}

TEST(Cli, SolveMatchesPlanValue) {
  auto r = run("solve --reward 'exp(x)*exp(y)' --constraint sm --sense max " + marginals("mu_star.json", "nu_star.json"));
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = r.json();
  EXPECT_EQ(j["status"], "optimal");
  EXPECT_TRUE(j["certificate"]["summary"]["pass"].get<bool>());
  auto pi1 = Coupling<Q>::from_cells({{Q(-1), Q(-4), q("5/18")},
                                      {Q(-1), q("-2.5"), q("1/18")},
                                      {Q(0), q("-2.5"), q("5/18")},
                                      {Q(0), Q(2), q("1/18")},
                                      {Q(1), Q(-4), q("1/18")},
                                      {Q(1), Q(2), q("5/18")}});
  double expected = to_double(plan_value(pi1, [](const Q& x, const Q& y) {
    return rational_from_double(std::exp(to_double(x)) * std::exp(to_double(y)));
  }));
  EXPECT_NEAR(j["value"].get<double>(), expected, 1e-9);
}

TEST(Cli, SolveExactLp) {
  auto r = run("solve --exact-lp --reward 'x*y' --constraint mg " + marginals("mu_star.json", "mu_star.json"));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.json()["arithmetic"], "rational");
  EXPECT_EQ(r.json()["value"], "2/3");
}

TEST(Cli, SolveInfeasibleIsSolverError) {
  auto r = run("solve --constraint sm " + marginals("nu_star.json", "mu_star.json"));
  EXPECT_EQ(r.code, 3);
  EXPECT_EQ(r.json()["status"], "infeasible");
}

TEST(Cli, CheckValidityOnCorruptedCoupling) {
  std::string bad = write("bad.csv", "x,y,w\n-1,-2.5,2/9\n-1,2,1/9\n0,-4,1/36\n0,-2.5,1/9\n0,2,7/36\n1,-4,11/36\n1,2,1/18\n");
  auto r = run("check --what validity --coupling " + bad + " " + marginals("mu_star.json", "nu_star.json"));
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("marginal:"), std::string::npos) << r.out;
  std::string up = write("up.csv", "x,y,w\n0,1,1\n");
  auto drift = run("check --what validity --coupling " + up);
  EXPECT_EQ(drift.code, 1);
  EXPECT_NE(drift.out.find("drift:"), std::string::npos) << drift.out;
}

TEST(Cli, CheckMonotonicity) {
  std::string inc = (scratch() / "mono_inc.json").string();
  ASSERT_EQ(run("couple " + marginals("mu_star.json", "nu_star.json") + " --json " + inc).code, 0);
  auto r = run("check --what monotonicity --coupling " + inc + " --require first-right,second-left,nondegenerate " +
               "--identify increasing " + marginals("mu_star.json", "nu_star.json"));
  EXPECT_EQ(r.code, 0) << r.out << r.err;
  EXPECT_TRUE(r.json()["identification"]["matches"].get<bool>());
  auto wrong = run("check --what monotonicity --coupling " + inc + " --require first-left");
  EXPECT_EQ(wrong.code, 1);
  EXPECT_FALSE(wrong.json()["reports"]["first-left"]["pass"].get<bool>());
}

TEST(Cli, CheckLocalOptimality) {
  std::string inc = (scratch() / "lo_inc.json").string();
  ASSERT_EQ(run("couple " + marginals("mu_star.json", "nu_star.json") + " --json " + inc).code, 0);
  auto r = run("check --what local-optimality --reward canonical_sm --coupling " + inc + " " +
               marginals("mu_star.json", "nu_star.json"));
  EXPECT_EQ(r.code, 0) << r.out << r.err;
  std::string crossed = write("crossed.csv",
                              "x,y,w\n-1,-2.5,2/9\n-1,2,1/9\n0,-4,8/36\n0,-2.5,4/36\n1,-4,4/36\n1,2,8/36\n");
  auto c = run("check --what local-optimality --reward canonical_sm --coupling " + crossed + " " +
               marginals("mu_star.json", "nu_star.json"));
  EXPECT_EQ(c.code, 1);
  EXPECT_NE(c.out.find("pair swap"), std::string::npos) << c.out;
}

TEST(Cli, Discretize) {
  std::string density = write("density.json", R"({"density":[{"a":-1,"b":1,"mass":1}],"n":4})");
  auto r = run("discretize --density " + density);
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(io::measure_from_json<Q>(r.json()), measure({{"-3/4", "1/4"}, {"-1/4", "1/4"}, {"1/4", "1/4"}, {"3/4", "1/4"}}));
  auto coarse = run("--n 2 discretize --density " + density);
  EXPECT_EQ(io::measure_from_json<Q>(coarse.json()).size(), 2u);
}

TEST(Cli, Batch) {
  auto r = run("batch --batch " + data("batch"));
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = r.json()["instances"];
  ASSERT_EQ(j.size(), 3u);
  EXPECT_EQ(j[0]["instance"], "example_1.json");
  EXPECT_EQ(j[2]["x_star"], 2);
  for (const auto& inst : j) {
    EXPECT_TRUE(inst["increasing_valid"].get<bool>());
    EXPECT_TRUE(inst["decreasing_valid"].get<bool>());
  }
  fs::path dir = scratch() / "batch_bad";
  fs::create_directories(dir);
  io::write_file((dir / "broken.json").string(), "{\"mu\": 1}");
  EXPECT_EQ(run("batch --batch " + dir.string()).code, 2);
}

TEST(Cli, ToleranceFromEnvironment) {
  EXPECT_EQ(run("--float couple " + marginals("mu_star.json", "nu_star.json"), "SMT_EPS=1e-6").code, 0);
  EXPECT_EQ(run("couple " + marginals("mu_star.json", "nu_star.json"), "SMT_EPS=-1").code, 2);
  EXPECT_EQ(run("couple " + marginals("mu_star.json", "nu_star.json"), "SMT_EPS=abc").code, 2);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("frobnicate").code, 2);
  EXPECT_EQ(run("couple --mu /nonexistent.json --nu " + data("nu_star.json")).code, 2);
  EXPECT_EQ(run("solve --constraint wrong " + marginals("mu_star.json", "nu_star.json")).code, 2);
  EXPECT_EQ(run("solve --reward 'exp(' " + marginals("mu_star.json", "nu_star.json")).code, 2);
  EXPECT_EQ(run("--help").code, 0);
}
