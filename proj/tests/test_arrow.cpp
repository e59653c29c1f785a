#include <gtest/gtest.h>

#include <random>
#include <set>

#include "ramsey_wb/arrow.hpp"
#include "oracles.hpp"

using namespace ramsey_wb;
using namespace ramsey_wb::arrow;

namespace {

ArrowQuery symmetric(std::vector<int> sizes, std::size_t j, std::optional<std::size_t> palette = std::nullopt) {
  return ArrowQuery{CliqueProduct(std::move(sizes)), j, j, palette};
}

// Every size vector (ordered, entries >= 2) with at most `max_cells` cells.
std::vector<std::vector<int>> small_spaces(std::size_t max_cells) {
  std::vector<std::vector<int>> out;
  std::function<void(std::vector<int>, std::size_t)> rec = [&](std::vector<int> cur, std::size_t cells) {
    if (!cur.empty()) out.push_back(cur);
    for (int n = 2; cells * static_cast<std::size_t>(n) <= max_cells; ++n) {
      auto next = cur;
      next.push_back(n);
      rec(next, cells * static_cast<std::size_t>(n));
    }
  };
  rec({}, 1);
  return out;
}

std::set<std::vector<std::size_t>> as_set(std::vector<std::vector<std::size_t>> boxes) {
  std::set<std::vector<std::size_t>> out;
  for (auto& b : boxes) {
    std::sort(b.begin(), b.end());
    out.insert(b);
  }
  return out;
}

}  // namespace

TEST(Shapes, ParseAndName) {
  EXPECT_EQ(parse_shape("2"), 1U);
  EXPECT_EQ(parse_shape("2x2"), 2U);
  EXPECT_EQ(parse_shape("2x2x2"), 3U);
  EXPECT_EQ(shape_name(2), "2x2");
  EXPECT_THROW(parse_shape("3x3"), ParseError);
  EXPECT_THROW(parse_shape(""), ParseError);
  EXPECT_THROW(parse_shape("2x"), ParseError);
}

TEST(EnumerateBoxes, Examples) {
  EXPECT_EQ(enumerate_boxes(CliqueProduct({2, 2}), 2).size(), 1U);
  EXPECT_EQ(enumerate_boxes(CliqueProduct({3, 3}), 2).size(), 9U);
  EXPECT_EQ(enumerate_boxes(CliqueProduct({2, 2, 2}), 2).size(), 6U);
  EXPECT_EQ(box_count(CliqueProduct({876, 123, 4, 2}), 2),
            BigInt(876 * 875 / 2) * (123 * 122 / 2) * 4 * 2 + BigInt(876 * 875 / 2) * 123 * 6 * 2 +
                BigInt(876 * 875 / 2) * 123 * 4 * 1 + BigInt(876) * (123 * 122 / 2) * 6 * 2 +
                BigInt(876) * (123 * 122 / 2) * 4 * 1 + BigInt(876) * 123 * 6 * 1);
  EXPECT_THROW(enumerate_boxes(CliqueProduct({2, 2}), 3), DomainError);
}

TEST(EnumerateBoxes, MatchesBruteForceAndCountFormula) {
  for (const auto& sizes : small_spaces(36)) {
    CliqueProduct space(sizes);
    for (std::size_t j = 1; j <= sizes.size(); ++j) {
      auto boxes = enumerate_boxes(space, j);
      std::vector<std::vector<std::size_t>> cells;
      for (const auto& b : boxes) cells.push_back(b.cells(space));
      auto got = as_set(cells);
      EXPECT_EQ(got.size(), boxes.size());
      EXPECT_EQ(got, as_set(oracle::boxes_brute(sizes, j))) << space.id() << " j=" << j;
      EXPECT_EQ(box_count(space, j), BigInt(boxes.size()));
    }
  }
}

TEST(DecideArrow, SquareFailsWithFactorColoring) {
  auto v = decide_arrow(symmetric({2, 2}, 2));
  ASSERT_EQ(v.verdict, Verdict::Fails);
  ASSERT_TRUE(v.witness);
  EXPECT_FALSE(first_violation(symmetric({2, 2}, 2), *v.witness));
  EXPECT_FALSE(first_violation(symmetric({2, 2}, 2), Coloring({0, 0, 1, 1})));
}

TEST(DecideArrow, CompleteGraphEdgesHold) {
  for (int n = 2; n <= 5; ++n) {
    auto v = decide_arrow(symmetric({n}, 1));
    EXPECT_EQ(v.verdict, Verdict::Holds) << n;
    EXPECT_GT(v.nodes, 0U);
  }
}

TEST(DecideArrow, CubeFailsAndParityAvoids) {
  auto q = symmetric({2, 2, 2}, 2);
  auto v = decide_arrow(q);
  ASSERT_EQ(v.verdict, Verdict::Fails);
  EXPECT_FALSE(first_violation(q, *v.witness));
  std::vector<Color> parity;
  for (std::size_t r = 0; r < 8; ++r) {
    int s = 0;
    for (int x : q.space.unrank(r)) s += x;
    parity.push_back(s % 2);
  }
  EXPECT_FALSE(first_violation(q, Coloring(parity)));
}

TEST(DecideArrow, PaletteAndCapErrors) {
  EXPECT_THROW(decide_arrow(symmetric({4, 4}, 2)), ResourceError);
  EXPECT_NO_THROW(decide_arrow(symmetric({4, 4}, 2, 2)));
  EXPECT_THROW(decide_arrow(symmetric({2, 2}, 2), 3), ResourceError);
  EXPECT_THROW(first_violation(symmetric({2, 2}, 2, 1), Coloring({0, 0, 1, 1})), PaletteError);
  EXPECT_THROW(decide_arrow(symmetric({2, 2}, 2, 0)), PaletteError);
}

TEST(DecideArrow, TwoColorsOnFourByFour) {
  // With two colors only the mono half of the target matters for 2x2 boxes.
  auto v = decide_arrow(symmetric({4, 4}, 2, 2));
  ASSERT_EQ(v.verdict, Verdict::Fails);
  EXPECT_LE(v.witness->num_colors(), 2U);
  EXPECT_FALSE(first_violation(symmetric({4, 4}, 2, 2), *v.witness));
}

TEST(DecideArrow, AgreesWithAllPartitionsOracle) {
  int compared = 0;
  for (const auto& sizes : small_spaces(9)) {
    for (std::size_t mono = 1; mono <= std::min<std::size_t>(2, sizes.size()); ++mono)
      for (std::size_t rain = 1; rain <= std::min<std::size_t>(2, sizes.size()); ++rain) {
        ArrowQuery q{CliqueProduct(sizes), mono, rain, std::nullopt};
        auto v = decide_arrow(q);
        bool want = oracle::arrow_brute(sizes, mono, rain);
        EXPECT_EQ(v.verdict == Verdict::Holds, want) << q.space.id() << " " << mono << "/" << rain;
        if (v.verdict == Verdict::Fails) {
          EXPECT_FALSE(first_violation(q, *v.witness));
        }
        ++compared;
      }
  }
  EXPECT_GT(compared, 20);
}

TEST(DecideArrow, ParallelMatchesSequential) {
  for (const auto& sizes : small_spaces(9)) {
    auto q = symmetric(sizes, std::min<std::size_t>(2, sizes.size()));
    auto a = decide_arrow(q, std::nullopt, 1);
    auto b = decide_arrow(q, std::nullopt, 3);
    EXPECT_EQ(a.verdict, b.verdict);
    EXPECT_EQ(a.witness, b.witness);
  }
}

TEST(FactorColorings, AvoidSquaresInTwoFactorSpaces) {
  for (int n1 = 2; n1 <= 5; ++n1)
    for (int n2 = 2; n2 <= 5; ++n2) {
      auto q = symmetric({n1, n2}, 2);
      for (std::size_t axis = 0; axis < 2; ++axis) {
        std::vector<Color> c;
        for (std::size_t r = 0; r < q.space.cells(); ++r) c.push_back(q.space.unrank(r)[axis]);
        EXPECT_FALSE(first_violation(q, Coloring(c))) << n1 << "x" << n2 << " axis " << axis;
      }
    }
}

TEST(HeuristicProbe, CubeAndSquareGrid) {
  for (auto sizes : {std::vector<int>{2, 2, 2}, std::vector<int>{3, 3}}) {
    auto q = symmetric(sizes, 2);
    ProbeOptions opt;
    opt.iterations = 5000;
    auto v = heuristic_probe(q, 1, opt);
    ASSERT_EQ(v.verdict, Verdict::Fails);
    EXPECT_FALSE(first_violation(q, *v.witness));
    EXPECT_EQ(v.best_violations, 0U);
  }
}

TEST(HeuristicProbe, CompleteGraphStaysUnknown) {
  ProbeOptions opt;
  opt.iterations = 3000;
  opt.restart_length = 1000;
  auto v = heuristic_probe(symmetric({4}, 1), 5, opt);
  EXPECT_EQ(v.verdict, Verdict::Unknown);
  EXPECT_EQ(v.trace.size(), 3U);
  EXPECT_GE(v.best_violations, 1U);
}

TEST(HeuristicProbe, DeterministicAcrossJobs) {
  auto q = symmetric({4, 3, 2}, 2);
  ProbeOptions one;
  one.iterations = 20000;
  one.restart_length = 500;
  auto many = one;
  many.jobs = 3;
  auto a = heuristic_probe(q, 11, one);
  auto b = heuristic_probe(q, 11, many);
  EXPECT_EQ(a.verdict, b.verdict);
  EXPECT_EQ(a.witness, b.witness);
  EXPECT_EQ(a.trace, b.trace);
}

TEST(HeuristicProbe, PaletteIsRespected) {
  auto q = symmetric({4, 2, 2}, 2, 2);
  ProbeOptions opt;
  opt.iterations = 20000;
  auto v = heuristic_probe(q, 3, opt);
  if (v.verdict == Verdict::Fails) {
    EXPECT_LE(v.witness->num_colors(), 2U);
    EXPECT_FALSE(first_violation(q, *v.witness));
  }
  // Exhaustion settles the same question.
  auto exact = decide_arrow(q);
  if (v.verdict == Verdict::Fails) {
    EXPECT_EQ(exact.verdict, Verdict::Fails);
  }
}

TEST(HeuristicProbe, EightSixFourTwoRegression) {
  auto q = symmetric({8, 6, 4, 2}, 2);
  ProbeOptions opt;
  opt.iterations = 100000;
  auto v = heuristic_probe(q, 0, opt);
  EXPECT_EQ(v.verdict, Verdict::Fails);
  if (v.witness) {
    EXPECT_FALSE(first_violation(q, *v.witness));
  }
}

TEST(Bridge, Dimensions) {
  EXPECT_EQ(geometric_bridge(CliqueProduct({876, 123, 4, 2})).dimension(), 1001U);
  EXPECT_EQ(geometric_bridge(CliqueProduct({2, 2})).dimension(), 2U);
  EXPECT_EQ(geometric_bridge(CliqueProduct({3, 10})).dimension(), 11U);
  EXPECT_THROW(geometric_bridge(CliqueProduct({876, 123, 4, 2})).config(), ResourceError);
}

TEST(Bridge, ExactRankOracle) {
  for (auto sizes : {std::vector<int>{2, 2}, std::vector<int>{3, 10}, std::vector<int>{2, 3, 4}, std::vector<int>{5}}) {
    auto cfg = geometric_bridge(CliqueProduct(sizes)).config();
    std::vector<Point> pts;
    for (std::size_t i = 0; i < cfg.size(); ++i) pts.push_back(cfg[i]);
    std::size_t want = 0;
    for (int n : sizes) want += static_cast<std::size_t>(n - 1);
    EXPECT_EQ(oracle::affine_dimension(pts), want);
  }
}

TEST(Bridge, HammingDistanceMatchesSquaredDistance) {
  CliqueProduct space({3, 10});
  auto bridge = geometric_bridge(space);
  for (std::size_t x = 0; x < space.cells(); ++x)
    for (std::size_t y = 0; y < space.cells(); ++y) {
      auto a = space.unrank(x), b = space.unrank(y);
      int j = 0;
      for (std::size_t i = 0; i < a.size(); ++i) j += a[i] != b[i];
      EXPECT_EQ(squared_distance(bridge.point(x), bridge.point(y)), Rational(2 * j));
    }
  auto cfg = bridge.config();
  auto square = hypercube_config(2);
  for (const auto& box : enumerate_boxes(space, 2)) {
    PointConfig img(cfg.dim(), Norm::Euclidean);
    for (std::size_t r : box.cells(space)) img.add(cfg[r]);
    ASSERT_TRUE(is_isometric_copy(square, img, Norm::Euclidean));
  }
}
