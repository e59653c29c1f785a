#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "ramsey_wb/triangle.hpp"

using namespace ramsey_wb;
using namespace ramsey_wb::tri;

namespace {

constexpr double kTol = 1e-9;
const double kHalfSqrt3 = std::sqrt(3.0) / 2;

// Random acute triangle: sides scaled so c = 1, with a, b drawn until acute.
Triangle random_acute(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.55, 1.6);
  while (true) {
    double a = u(rng), b = u(rng), c = 1.0;
    if (a * a + b * b > c * c * 1.01 && b * b + c * c > a * a * 1.01 && a * a + c * c > b * b * 1.01)
      return Triangle(a, b, c);
  }
}

Vec3 random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Vec3 v{g(rng), g(rng), g(rng)};
  return normalized(v);
}

}  // namespace

TEST(TriangleType, RejectsNonAcuteAndNonPositive) {
  EXPECT_THROW(Triangle(3, 4, 5), GeometryError);
  EXPECT_THROW(Triangle(1, 1, 3), GeometryError);
  EXPECT_THROW(Triangle(0, 1, 1), GeometryError);
  EXPECT_NO_THROW(Triangle(0.9, 1.0, 1.0));
}

TEST(IntersectSpheres, UnitSpheresMeetInCircle) {
  auto r = intersect_spheres({0, 0, 0}, 1, {1, 0, 0}, 1);
  ASSERT_TRUE(std::holds_alternative<Circle3>(r));
  auto c = std::get<Circle3>(r);
  EXPECT_NEAR(c.center[0], 0.5, kTol);
  EXPECT_NEAR(c.radius, kHalfSqrt3, kTol);
  EXPECT_NEAR(c.normal[0], 1.0, kTol);
  for (double t : {0.0, 1.0, 2.5}) {
    EXPECT_NEAR(dist(c.at(t), {0, 0, 0}), 1.0, kTol);
    EXPECT_NEAR(dist(c.at(t), {1, 0, 0}), 1.0, kTol);
  }
}

TEST(IntersectSpheres, TangentAndDisjointAndConcentric) {
  auto t = intersect_spheres({0, 0, 0}, 0.5, {1, 0, 0}, 0.5);
  ASSERT_TRUE(std::holds_alternative<Vec3>(t));
  EXPECT_NEAR(std::get<Vec3>(t)[0], 0.5, kTol);
  EXPECT_TRUE(std::holds_alternative<std::monostate>(intersect_spheres({0, 0, 0}, 1, {3, 0, 0}, 1)));
  EXPECT_TRUE(std::holds_alternative<std::monostate>(intersect_spheres({0, 0, 0}, 3, {0.5, 0, 0}, 1)));
  EXPECT_THROW(intersect_spheres({1, 2, 3}, 2, {1, 2, 3}, 2), ConcentricError);
}

TEST(ExtendPair, RegularTetrahedron) {
  Triangle t(1, 1, 1);
  auto e = extend_pair(t, {0, 0, 0}, {1, 0, 0}, std::numbers::pi / 2);
  EXPECT_NEAR(e.c[0], 0.5, kTol);
  EXPECT_NEAR(e.c[1], kHalfSqrt3, kTol);
  EXPECT_NEAR(e.c[2], 0.0, kTol);
  EXPECT_NEAR(e.d[0], 0.5, 1e-5);
  EXPECT_NEAR(e.d[1], 0.28868, 1e-5);
  EXPECT_NEAR(e.d[2], 0.81650, 1e-5);
  for (auto [got, want] : simplex_residuals(t, {0, 0, 0}, {1, 0, 0}, e)) EXPECT_NEAR(got, 1.0, kTol);
}

TEST(ExtendPair, TwoAnglesStayOnFirstCircle) {
  Triangle t(1, 1, 1);
  auto e0 = extend_pair(t, {0, 0, 0}, {1, 0, 0}, 0.0);
  auto e1 = extend_pair(t, {0, 0, 0}, {1, 0, 0}, std::numbers::pi / 2);
  EXPECT_LE(dist(e0.c, e1.c), 2 * kHalfSqrt3 + kTol);
}

TEST(ExtendPair, PreconditionAndDeterminism) {
  Triangle t(1, 1, 1);
  EXPECT_THROW(extend_pair(t, {0, 0, 0}, {2, 0, 0}, 0.3), PreconditionError);
  auto a = extend_pair(t, {0, 0, 0}, {1, 0, 0}, 1.234);
  auto b = extend_pair(t, {0, 0, 0}, {1, 0, 0}, 1.234);
  EXPECT_EQ(a.d, b.d);
}

TEST(ExtendPair, SkinnyAcuteTriangleSeparatesCircleDistances) {
  Triangle t(0.9, 1.0, 1.0);
  Vec3 a{0, 0, 0}, b{0, 0, 1};
  for (double angle = 0; angle < 2 * std::numbers::pi; angle += 0.37) {
    auto e = extend_pair(t, a, b, angle);
    EXPECT_TRUE(faces_congruent(t, a, b, e));
    auto [c1, c2] = extension_circles(t, a, b);
    auto [x, y] = nearest_farthest(c2, e.c);
    EXPECT_LT(dist(e.c, x), dist(a, b));
    EXPECT_LT(dist(a, b), dist(e.c, y));
  }
}

TEST(ExtendPair, RandomAcuteTrianglesProperty) {
  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> ang(0, 2 * std::numbers::pi);
  for (int i = 0; i < 1000; ++i) {
    Triangle t = random_acute(rng);
    Vec3 a{ang(rng), ang(rng), ang(rng)};
    Vec3 b = a + t.c * random_unit(rng);
    auto e = extend_pair(t, a, b, ang(rng));
    ASSERT_TRUE(faces_congruent(t, a, b, e)) << "trial " << i;
    auto circles = extension_circles(t, a, b);
    auto [x, y] = nearest_farthest(circles.second, e.c);
    EXPECT_LT(dist(e.c, x), dist(a, b));
    EXPECT_LT(dist(a, b), dist(e.c, y));
    // Right-handed frame for the chosen D.
    EXPECT_GE(det3(b - a, e.c - circles.first.center, e.d - circles.second.center), -kTol);
  }
}

TEST(GoodPairTest, Validity) {
  EXPECT_TRUE(is_good_pair({{0, 0, 0}, {1, 0, 0}, 0, 1}, 1.0));
  EXPECT_FALSE(is_good_pair({{0, 0, 0}, {1, 0, 0}, 1, 1}, 1.0));
  EXPECT_FALSE(is_good_pair({{0, 0, 0}, {1.1, 0, 0}, 0, 1}, 1.0));
}

TEST(FindGoodPair, AlreadyAtDistance) {
  auto slab = ColoringOracle::parse("slab:h=sqrt3/2");
  auto p = find_good_pair(slab, {0, 0, 0}, {0, 0, 1}, 1.0);
  EXPECT_EQ(p.x, (Vec3{0, 0, 0}));
  EXPECT_EQ(p.y, (Vec3{0, 0, 1}));
  EXPECT_EQ(p.color_x, 0);
  EXPECT_EQ(p.color_y, 1);
}

TEST(FindGoodPair, ZigZagChain) {
  auto slab = ColoringOracle::parse("slab:h=sqrt3/2");
  Vec3 y1{0, 0, 0}, y2{0, 0, 2.6};
  auto chain = unit_chain(y1, y2, 1.0);
  for (std::size_t i = 0; i + 1 < chain.size(); ++i) EXPECT_NEAR(dist(chain[i], chain[i + 1]), 1.0, kTol);
  EXPECT_EQ(chain.front(), y1);
  EXPECT_EQ(chain.back(), y2);
  auto p = find_good_pair(slab, y1, y2, 1.0);
  EXPECT_TRUE(is_good_pair(p, 1.0));
  std::vector<double> px(p.x.begin(), p.x.end()), py(p.y.begin(), p.y.end());
  EXPECT_EQ(slab(px), p.color_x);
  EXPECT_EQ(slab(py), p.color_y);
}

TEST(FindGoodPair, ConstantOracleIsRejected) {
  auto table = ColoringOracle::parse("table:default=0");
  EXPECT_THROW(find_good_pair(table, {0, 0, 0}, {0, 0, 1}, 1.0), PreconditionError);
}

TEST(UnitChain, RandomEndpoints) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int i = 0; i < 200; ++i) {
    Vec3 a{u(rng), u(rng), u(rng)}, b{u(rng), u(rng), u(rng)};
    double c = 0.3 + (i % 5) * 0.2;
    auto chain = unit_chain(a, b, c);
    for (std::size_t k = 0; k + 1 < chain.size(); ++k) EXPECT_NEAR(dist(chain[k], chain[k + 1]), c, 1e-9);
    EXPECT_NEAR(dist(chain.back(), b), 0.0, 1e-12);
  }
}

TEST(Orbit, ZeroStepsKeepsSeed) {
  Triangle t(1, 1, 1);
  GoodPair seed{{0, 0, 0}, {1, 0, 0}, 0, 1};
  auto rep = orbit_explore(t, seed, 0, 1);
  ASSERT_EQ(rep.cloud.pairs.size(), 1U);
  std::size_t hit = 0;
  for (bool b : rep.occupied) hit += b;
  EXPECT_GE(hit, 1U);
  EXPECT_LE(hit, 2U);
}

TEST(Orbit, OneStepLandsOnSecondCircle) {
  Triangle t(1, 1, 1);
  GoodPair seed{{0, 0, 0}, {1, 0, 0}, 0, 1};
  auto rep = orbit_explore(t, seed, 1, 9);
  ASSERT_EQ(rep.cloud.pairs.size(), 2U);
  const auto& p = rep.cloud.pairs[1];
  EXPECT_NEAR(dist(p.y, seed.y), t.b, kTol);
  EXPECT_NEAR(dist(p.y, seed.x), t.a, kTol);
  EXPECT_NEAR(dist(p.x, p.y), t.c, kTol);
  EXPECT_TRUE(is_good_pair(p, t.c));
}

TEST(Orbit, CoverageGrowsAndPassesHalf) {
  Triangle t(1, 1, 1);
  GoodPair seed{{0, 0, 0}, {1, 0, 0}, 0, 1};
  double last = 0;
  for (std::size_t steps : {10U, 100U, 1000U, 10000U}) {
    auto rep = orbit_explore(t, seed, steps, 2024);
    EXPECT_GT(rep.coverage, last) << steps;
    last = rep.coverage;
    for (const auto& p : rep.cloud.pairs) ASSERT_TRUE(is_good_pair(p, t.c, 1e-6));
  }
  EXPECT_GT(last, 0.5);
}

TEST(Orbit, BichromaticPropagationUnderSlabOracle) {
  // Two colors and a bichromatic (A, B): if none of the four faces of the
  // simplex A, B, C, D is monochromatic, then (C, D) is bichromatic.
  auto slab = ColoringOracle::parse("slab:h=sqrt3/2");
  Triangle t(1, 1, 1);
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> ang(0, 2 * std::numbers::pi), pos(-5, 5);
  auto color = [&](const Vec3& p) {
    std::vector<double> v(p.begin(), p.end());
    return slab(v);
  };
  int checked = 0;
  for (int i = 0; i < 5000; ++i) {
    Vec3 a{pos(rng), pos(rng), pos(rng)};
    Vec3 b = a + random_unit(rng);
    if (color(a) == color(b)) continue;
    auto e = extend_pair(t, a, b, ang(rng));
    Color ca = color(a), cb = color(b), cc = color(e.c), cd = color(e.d);
    auto mono = [](Color x, Color y, Color z) { return x == y && y == z; };
    bool face_mono = mono(ca, cb, cc) || mono(ca, cb, cd) || mono(cc, cd, ca) || mono(cc, cd, cb);
    if (face_mono) continue;
    ++checked;
    EXPECT_NE(cc, cd);
  }
  EXPECT_GT(checked, 100);
}
