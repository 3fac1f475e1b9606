#include <gtest/gtest.h>

#include <cstring>
#include <string>

#include "smt/io.hpp"
#include "smt/svg.hpp"
#include "test_support.hpp"

using namespace smt;
using namespace smt::testing;

namespace {

std::size_t count(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

}  // namespace

TEST(MeasureJson, ReadsNumbersAndRationalStrings) {
  auto m = io::measure_from_text<Q>(R"({"atoms":[{"x": -1, "w": "1/3"}, {"x": "0.5", "w": 0.25}, {"x": 2, "w": "5/12"}]})");
  ASSERT_EQ(m.size(), 3u);
  EXPECT_EQ(m[0].w, q("1/3"));
  EXPECT_EQ(m[1].x, q("1/2"));
  EXPECT_EQ(m[1].w, q("1/4"));
  EXPECT_EQ(m.mass(), Q(1));
}

TEST(MeasureJson, DecimalLiteralsAreReadExactly) {
  auto m = io::measure_from_text<Q>(R"({"atoms":[{"x": 0.1, "w": 1}]})");
  EXPECT_EQ(m[0].x, q("1/10"));
}

TEST(MeasureJson, WritesIntegersAndFractions) {
  std::string text = io::dump(io::measure_to_json(mu_star()), -1);
  EXPECT_EQ(text, R"({"atoms":[{"x":-1,"w":"1/3"},{"x":0,"w":"1/3"},{"x":1,"w":"1/3"}]})");
}

TEST(MeasureJson, FloatsUseSeventeenDigits) {
  DiscreteMeasure<double> m({{0.1, 1.0 / 3.0}});
  std::string text = io::dump(io::measure_to_json(m), -1);
  EXPECT_EQ(text, R"({"atoms":[{"x":0.10000000000000001,"w":0.33333333333333331}]})");
  auto back = io::measure_from_text<double>(text);
  EXPECT_EQ(back[0].x, 0.1);
  EXPECT_EQ(back[0].w, 1.0 / 3.0);
}

TEST(MeasureJson, RejectsMalformedInput) {
  EXPECT_THROW(io::measure_from_text<Q>(R"({"atoms":[{"x": 1}]})"), Error);
  EXPECT_THROW(io::measure_from_text<Q>(R"({"points":[]})"), Error);
  EXPECT_THROW(io::measure_from_text<Q>(R"({"atoms":[{"x": 1, "w": "-1/2"}]})"), Error);
  EXPECT_THROW(io::measure_from_text<Q>(R"({"atoms":[{"x": 1, "w": "1/0"}]})"), Error);
  EXPECT_THROW(io::measure_from_text<Q>(R"({"atoms":[)"), Error);
}

TEST(MeasureCsv, HeaderCommentsAndBlankLines) {
  auto m = io::measure_from_text<Q>("x,w\n# uniform\n-1, 1/3\n\n0,1/3\n1,1/3\n");
  EXPECT_EQ(m, mu_star());
  EXPECT_EQ(io::measure_from_text<Q>(io::measure_to_csv(nu_star())), nu_star());
  EXPECT_THROW(io::measure_from_text<Q>("1,2,3\n"), Error);
}

TEST(CouplingIo, JsonRoundTripIsExact) {
  Random rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    auto inst = random_cd_instance(rng);
    for (auto dir : {Direction::Increasing, Direction::Decreasing}) {
      auto p = canonical_transport(inst.mu, inst.nu, dir);
      std::string text = io::dump(io::coupling_to_json(p));
      auto back = io::coupling_from_text<Q>(text);
      ASSERT_TRUE(back == p) << text;
      EXPECT_EQ(io::dump(io::coupling_to_json(back)), text);
    }
  }
}

TEST(CouplingIo, CsvRoundTripIsExact) {
  auto p = increasing_transport(mu_star(), nu_star());
  std::string csv = io::coupling_to_csv(p);
  EXPECT_EQ(csv.substr(0, 6), "x,y,w\n");
  EXPECT_TRUE(io::coupling_from_text<Q>(csv) == p);
}

TEST(CouplingIo, FloatRoundTripIsBitwise) {
  auto p = convert_coupling<double>(increasing_transport(mu_star(), nu_star()));
  auto back = io::coupling_from_text<double>(io::dump(io::coupling_to_json(p)));
  ASSERT_EQ(back.size(), p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    const auto& a = p.rows()[i].kernel;
    const auto& b = back.rows()[i].kernel;
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t j = 0; j < a.size(); ++j) {
      EXPECT_EQ(std::memcmp(&a[j].w, &b[j].w, sizeof(double)), 0);
      EXPECT_EQ(std::memcmp(&a[j].x, &b[j].x, sizeof(double)), 0);
    }
  }
}

TEST(CouplingIo, AcceptsWrappedCommandOutput) {
  auto p = increasing_transport(mu_star(), nu_star());
  io::Json wrapped{{"direction", "increasing"}, {"coupling", io::coupling_to_json(p)}};
  EXPECT_TRUE(io::coupling_from_text<Q>(io::dump(wrapped)) == p);
}

TEST(CouplingIo, RowsCarryDriftAndClassification) {
  auto j = io::coupling_to_json(increasing_transport(mu_star(), nu_star()));
  EXPECT_EQ(j["rows"][0]["martingale"], true);
  EXPECT_EQ(j["rows"][2]["martingale"], false);
  EXPECT_EQ(j["rows"][2]["drift"], "-9/2");
}

TEST(Discretize, UniformSlices) {
  auto m = io::discretize<Q>({{Q(-1), Q(1), Q(1)}}, 4);
  EXPECT_EQ(m, measure({{"-3/4", "1/4"}, {"-1/4", "1/4"}, {"1/4", "1/4"}, {"3/4", "1/4"}}));
}

TEST(Discretize, SliceAcrossAGap) {
  auto m = io::discretize<Q>({{Q(2), Q(3), q("1/2")}, {Q(0), Q(1), q("1/2")}}, 3);
  EXPECT_EQ(m, measure({{"1/3", "1/3"}, {"3/2", "1/3"}, {"8/3", "1/3"}}));
}

TEST(Discretize, PreservesMassAndBarycenter) {
  Random rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    int pieces = rng.uniform_int(1, 4);
    auto cuts = rng.locations(2 * pieces, -6, 6);
    std::vector<io::UniformPiece<Q>> spec;
    Q mass(0);
    Q moment(0);
    for (int k = 0; k < pieces; ++k) {
      Q a = cuts[static_cast<std::size_t>(2 * k)];
      Q b = cuts[static_cast<std::size_t>(2 * k + 1)];
      Q w(rng.uniform_int(1, 5), 7);
      spec.push_back({a, b, w});
      mass += w;
      moment += w * (a + b) / 2;
    }
    int n = rng.uniform_int(1, 40);
    auto m = io::discretize(spec, n);
    EXPECT_EQ(m.mass(), mass);
    EXPECT_EQ(m.first_moment(), moment);
    for (const auto& a : m.atoms()) {
      // Every atom carries a whole number of slices.
      EXPECT_EQ(a.w * Q(n) / mass, Q(static_cast<long>(a.w * Q(n) / mass)));
    }
  }
}

TEST(Discretize, RejectsBadPieces) {
  EXPECT_THROW(io::discretize<Q>({{Q(1), Q(0), Q(1)}}, 3), Error);
  EXPECT_THROW(io::discretize<Q>({{Q(0), Q(2), Q(1)}, {Q(1), Q(3), Q(1)}}, 3), Error);
  EXPECT_THROW(io::discretize<Q>({{Q(0), Q(1), Q(1)}}, 0), Error);
}

TEST(Discretize, DensityJson) {
  auto j = io::parse_json(R"({"density":[{"a":-1,"b":1,"mass":1}],"n":2})", "test");
  auto spec = io::density_from_json<Q>(j);
  EXPECT_EQ(io::discretize(spec), measure({{"-1/2", "1/2"}, {"1/2", "1/2"}}));
  EXPECT_EQ(io::discretize(spec, 4).size(), 4u);
}

TEST(Svg, FixedCanvasAndStyles) {
  auto p = increasing_transport(mu_star(), nu_star());
  std::string svg = svg::render_coupling(p, "test");
  EXPECT_NE(svg.find("viewBox=\"0 0 1200.00 300.00\""), std::string::npos);
  // Rows -1 and 0 are martingale (5 segments), row 1 has drift (2 segments).
  auto solid = svg.substr(svg.find("id=\"martingale\""));
  auto dashed = svg.substr(svg.find("id=\"drift\""), svg.find("id=\"martingale\"") - svg.find("id=\"drift\""));
  EXPECT_EQ(count(solid, "<line"), 5u);
  EXPECT_EQ(count(dashed, "<line"), 2u);
  EXPECT_NE(dashed.find("stroke-dasharray"), std::string::npos);
  // One tick per source atom and per target atom.
  auto ticks = svg.substr(svg.find("id=\"ticks\""), svg.find("id=\"drift\"") - svg.find("id=\"ticks\""));
  EXPECT_EQ(count(ticks, "<line"), 6u);
}

TEST(Svg, Deterministic) {
  auto p = decreasing_transport(mu_star(), nu_prime());
  EXPECT_EQ(svg::render_coupling(p), svg::render_coupling(p));
  EXPECT_EQ(svg::render_coupling(p), svg::render_coupling(io::coupling_from_text<Q>(io::dump(io::coupling_to_json(p)))));
}

TEST(Reports, FailuresCarryWitness) {
  auto rep = CheckReport::fail("x", "bad", {{1.0, 2.0}});
  auto j = io::report_to_json(rep);
  EXPECT_EQ(io::dump(j, -1), R"({"check":"x","pass":false,"message":"bad","witness":[[1,2]]})");
  EXPECT_EQ(io::dump(io::report_to_json(CheckReport::ok("y")), -1), R"({"check":"y","pass":true})");
}
