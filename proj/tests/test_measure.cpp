#include <gtest/gtest.h>

#include "smt/measure.hpp"
#include "test_support.hpp"

namespace smt {
namespace {

using testing::measure;
using testing::mu_star;
using testing::nu_star;
using testing::q;
using testing::Q;
using testing::QMeasure;

// Independent route for W1: integral of |F_a - F_b| between breakpoints.
Q w1_by_cdf(const QMeasure& a, const QMeasure& b) {
  std::vector<Q> grid = breakpoints(a, b);
  Q total = 0;
  Q fa = 0;
  Q fb = 0;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    fa += a.mass_at(grid[i]);
    fb += b.mass_at(grid[i]);
    Q gap = fa - fb;
    if (gap < 0) gap = -gap;
    total += gap * (grid[i + 1] - grid[i]);
  }
  return total;
}

TEST(Measure, NormalizesAtoms) {
  QMeasure m({{q("1"), q("1/4")}, {q("-1"), q("1/4")}, {q("1"), q("1/4")}, {q("0"), q("0")}});
  ASSERT_EQ(m.size(), 2u);
  EXPECT_EQ(m[0].x, -1);
  EXPECT_EQ(m[1].w, q("1/2"));
  EXPECT_THROW(QMeasure({{q("0"), q("-1")}}), Error);
}

TEST(Measure, FloatModeMergesNearbyAtoms) {
  DiscreteMeasure<double> m({{1.0, 0.5}, {1.0 + 1e-12, 0.5}, {2.0, 1.0}});
  ASSERT_EQ(m.size(), 2u);
  EXPECT_DOUBLE_EQ(m[0].w, 1.0);
}

TEST(Measure, PutValue) {
  EXPECT_EQ(put_value(mu_star(), Q(0)), q("1/3"));
  EXPECT_EQ(put_value(QMeasure{}, Q(5)), 0);
  EXPECT_EQ(put_value(nu_star(), Q(0)), q("13/6"));
}

TEST(Measure, PotentialU) {
  EXPECT_EQ(potential_u(QMeasure::dirac(Q(0)), Q(3)), 3);
  EXPECT_EQ(potential_u(mu_star(), Q(0)), q("2/3"));
  QMeasure m = mu_star();
  Q t = 1;
  Q via_put = 2 * put_value(m, t) - t * m.mass() + m.first_moment();
  EXPECT_EQ(potential_u(m, t), 1);
  EXPECT_EQ(via_put, potential_u(m, t));
}

TEST(Measure, Quantile) {
  EXPECT_EQ(quantile(nu_star(), q("1/3")), -4);
  EXPECT_EQ(quantile(nu_star(), q("0.4")), q("-2.5"));
  EXPECT_EQ(quantile(nu_star(), Q(1)), 2);
  EXPECT_EQ(quantile(nu_star(), Q(0)), -4);
  try {
    quantile(nu_star(), q("1.01"));
    FAIL() << "expected OutOfRange";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::OutOfRange);
  }
}

TEST(Measure, Barycenter) {
  EXPECT_EQ(barycenter(nu_star()), q("-3/2"));
  EXPECT_EQ(barycenter(QMeasure::dirac(q("7/3"), q("5"))), q("7/3"));
  EXPECT_EQ(barycenter(mu_star()), 0);
  EXPECT_EQ(barycenter(QMeasure{}), 0);
}

TEST(Measure, ConvexDecreasingOrder) {
  EXPECT_TRUE(leq_convex_decreasing(mu_star(), nu_star()));
  EXPECT_TRUE(leq_convex_decreasing(nu_star(), nu_star()));
  EXPECT_FALSE(leq_convex_decreasing(nu_star(), mu_star()));
  EXPECT_EQ(put_value(nu_star(), q("-2.5")), q("1/2"));
  EXPECT_EQ(put_value(mu_star(), q("-2.5")), 0);
  auto why = convex_decreasing_violation(nu_star(), mu_star());
  ASSERT_TRUE(why.has_value());
  EXPECT_DOUBLE_EQ(why->first, -2.5);
}

TEST(Measure, ConvexOrder) {
  EXPECT_TRUE(leq_convex(measure({{"0", "1/2"}}), measure({{"-1", "1/4"}, {"1", "1/4"}})));
  EXPECT_FALSE(leq_convex(mu_star(), nu_star()));
  EXPECT_FALSE(leq_convex(QMeasure::dirac(Q(0)), QMeasure::dirac(Q(1))));
}

TEST(Measure, PositiveConvexDecreasingOrder) {
  EXPECT_TRUE(leq_pcd(measure({{"1", "1/3"}}), nu_star()));
  EXPECT_TRUE(leq_pcd(QMeasure{}, nu_star()));
  EXPECT_FALSE(leq_pcd(QMeasure::dirac(Q(0), Q(2)), QMeasure::dirac(Q(0))));
}

TEST(Measure, Wasserstein1) {
  EXPECT_EQ(wasserstein1(QMeasure::dirac(Q(0)), QMeasure::dirac(Q(1))), 1);
  EXPECT_EQ(wasserstein1(mu_star(), mu_star()), 0);
  QMeasure a = measure({{"0", "1/2"}, {"1", "1/2"}});
  QMeasure b = measure({{"0", "1/2"}, {"2", "1/2"}});
  EXPECT_EQ(w1_by_cdf(a, b), q("1/2"));
  EXPECT_EQ(wasserstein1(a, b), q("1/2"));
  try {
    wasserstein1(a, QMeasure::dirac(Q(0), Q(2)));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MassMismatch);
  }
}

TEST(Measure, Algebra) {
  EXPECT_EQ(restrict(mu_star(), Interval<Q>::at_most(Q(0))), measure({{"-1", "1/3"}, {"0", "1/3"}}));
  EXPECT_TRUE(min(mu_star(), nu_star()).empty());
  EXPECT_EQ(subtract(nu_star(), measure({{"-4", "1/3"}})), measure({{"-2.5", "1/3"}, {"2", "1/3"}}));
  try {
    subtract(mu_star(), nu_star());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NegativeMass);
  }
  EXPECT_EQ(add(mu_star(), mu_star()), scale(mu_star(), Q(2)));
}

TEST(Measure, FloatSubtractClampsWithinTolerance) {
  DiscreteMeasure<double> a({{0.0, 0.3}, {1.0, 0.7}});
  DiscreteMeasure<double> b({{0.0, 0.3 + 1e-13}});
  DiscreteMeasure<double> d = subtract(a, b);
  ASSERT_EQ(d.size(), 1u);
  EXPECT_DOUBLE_EQ(d[0].x, 1.0);
}

TEST(Interval, Membership) {
  auto i = Interval<Q>::open(Q(-1), Q(1));
  EXPECT_FALSE(i.contains(Q(-1)));
  EXPECT_TRUE(i.contains(Q(0)));
  EXPECT_TRUE(Interval<Q>::at_least(Q(2)).contains(Q(2)));
  EXPECT_TRUE(Interval<Q>::all().contains(Q(-100)));
  EXPECT_EQ(Interval<Q>::greater_than(Q(-4)).to_string(), "(-4, inf)");
}

// --- properties on random measures -----------------------------------------

TEST(MeasureProperties, PutIsConvexIncreasing) {
  testing::Random rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    QMeasure m = rng.measure(rng.uniform_int(1, 6), -5, 5);
    std::vector<Q> ts = rng.locations(3, -7, 7);
    Q p1 = put_value(m, ts[0]);
    Q p2 = put_value(m, ts[1]);
    Q p3 = put_value(m, ts[2]);
    Q s12 = (p2 - p1) / (ts[1] - ts[0]);
    Q s23 = (p3 - p2) / (ts[2] - ts[1]);
    EXPECT_GE(s12, 0);
    EXPECT_LE(s12, s23);
  }
}

TEST(MeasureProperties, PutDerivativeJumpIsAtomMass) {
  testing::Random rng(12);
  for (int trial = 0; trial < 100; ++trial) {
    QMeasure m = rng.measure(rng.uniform_int(1, 6), -5, 5);
    Q h = q("1/1000");  // smaller than the half-integer grid spacing
    for (const auto& a : m.atoms()) {
      Q right = (put_value(m, Q(a.x + h)) - put_value(m, a.x)) / h;
      Q left = (put_value(m, a.x) - put_value(m, Q(a.x - h))) / h;
      EXPECT_EQ(right - left, a.w);
    }
  }
}

TEST(MeasureProperties, ConvexDecreasingAntisymmetry) {
  testing::Random rng(13);
  int both = 0;
  for (int trial = 0; trial < 400; ++trial) {
    QMeasure a = rng.measure(rng.uniform_int(1, 3), -2, 2);
    QMeasure b = rng.measure(rng.uniform_int(1, 3), -2, 2);
    if (trial % 4 == 0) b = a;
    if (leq_convex_decreasing(a, b) && leq_convex_decreasing(b, a)) {
      ++both;
      EXPECT_EQ(a, b);
    }
  }
  EXPECT_GT(both, 0);
}

TEST(MeasureProperties, Wasserstein1IsAMetric) {
  testing::Random rng(14);
  for (int trial = 0; trial < 100; ++trial) {
    QMeasure a = rng.measure(rng.uniform_int(1, 5), -5, 5);
    QMeasure b = rng.measure(rng.uniform_int(1, 5), -5, 5);
    QMeasure c = rng.measure(rng.uniform_int(1, 5), -5, 5);
    Q ab = wasserstein1(a, b);
    EXPECT_EQ(ab, w1_by_cdf(a, b));
    EXPECT_EQ(ab, wasserstein1(b, a));
    EXPECT_EQ(wasserstein1(a, a), 0);
    EXPECT_LE(ab, wasserstein1(a, c) + wasserstein1(c, b));
  }
}

TEST(MeasureProperties, PcdMatchesCdForEqualMass) {
  testing::Random rng(15);
  for (int trial = 0; trial < 300; ++trial) {
    QMeasure a = rng.measure(rng.uniform_int(1, 4), -3, 3);
    QMeasure b = rng.measure(rng.uniform_int(1, 4), -3, 3);
    EXPECT_EQ(leq_pcd(a, b), leq_convex_decreasing(a, b));
  }
}

}  // namespace
}  // namespace smt
