#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "ramsey_wb/hypercube.hpp"

using namespace ramsey_wb;
using namespace ramsey_wb::cube;

namespace {

Coloring sum_mod(const ProductSpace& space, int q) {
  std::vector<Color> c(space.cells());
  for (std::size_t r = 0; r < space.cells(); ++r) {
    int s = 0;
    for (int v : space.unrank(r)) s += v;
    c[r] = s % q;
  }
  return Coloring(c);
}

Coloring random_coloring(std::size_t cells, int colors, std::mt19937_64& rng) {
  std::vector<Color> c(cells);
  for (auto& x : c) x = static_cast<Color>(rng() % static_cast<unsigned>(colors));
  return Coloring(c);
}

}  // namespace

TEST(ProductSpaceTest, RankUnrankAndLabels) {
  ProductSpace s({3, 10});
  EXPECT_EQ(s.cells(), 30U);
  for (std::size_t r = 0; r < s.cells(); ++r) {
    EXPECT_EQ(s.rank(s.unrank(r)), r);
    EXPECT_EQ(s.parse_label(s.label(r)), r);
  }
  EXPECT_EQ(s.label(0), "1,1");
  EXPECT_EQ(s.id(), "3,10");
  EXPECT_THROW(ProductSpace({1, 3}), RangeError);
  EXPECT_THROW(s.parse_label("4,1"), ParseError);
}

TEST(ProductSpaceTest, SimplexEmbeddingDistances) {
  ProductSpace s({3, 2, 4});
  for (std::size_t x = 0; x < s.cells(); ++x)
    for (std::size_t y = 0; y < s.cells(); ++y) {
      auto a = s.unrank(x), b = s.unrank(y);
      int diff = 0;
      for (std::size_t i = 0; i < a.size(); ++i) diff += a[i] != b[i];
      EXPECT_EQ(squared_distance(s.simplex_point(x), s.simplex_point(y)), Rational(2 * diff));
    }
}

TEST(BoxCopyTest, EmbedsAsHypercube) {
  ProductSpace s({3, 4, 5});
  std::mt19937_64 rng(2);
  for (int t = 0; t < 200; ++t) {
    BoxCopy box;
    for (int n : s.sizes()) {
      int a = static_cast<int>(rng() % static_cast<unsigned>(n));
      int b = rng() % 2 ? a : static_cast<int>(rng() % static_cast<unsigned>(n));
      box.a.push_back(a);
      box.b.push_back(b);
    }
    auto cfg = box_config(s, box);
    auto cube = hypercube_config(box.dimension());
    auto w = is_isometric_copy(cube, cfg, Norm::Euclidean);
    ASSERT_TRUE(w);
    IsometryWitness rows;
    for (std::size_t i = 0; i < cfg.size(); ++i) rows.image.push_back(i);
    EXPECT_TRUE(check_witness(cube, cfg, rows, Norm::Euclidean));
  }
}

TEST(RainbowSearch, AllDistinctLineIsRainbowOnFirstTrial) {
  ProductSpace s({5});
  auto res = random_rainbow_search(s, Coloring({0, 1, 2, 3, 4}), 10, 1);
  EXPECT_EQ(res.outcome, RainbowOutcome::Rainbow);
  EXPECT_EQ(res.trials, 0U);
}

TEST(RainbowSearch, MonoPairReported) {
  ProductSpace s({2});
  auto res = random_rainbow_search(s, Coloring({3, 3}), 10, 1);
  EXPECT_EQ(res.outcome, RainbowOutcome::MonoPair);
  EXPECT_EQ(classify(res.box.cells(s), Coloring({3, 3})), CopyClass::Monochromatic);
}

TEST(RainbowSearch, ProperSumColoringRate) {
  ProductSpace s({17, 17});
  auto c = sum_mod(s, 17);
  auto res = random_rainbow_search(s, c, 10000, 7);
  ASSERT_EQ(res.outcome, RainbowOutcome::Rainbow);
  EXPECT_EQ(classify(res.box.cells(s), c), CopyClass::Rainbow);
  double rate = static_cast<double>(count_rainbow_trials(s, c, 10000, 7)) / 10000.0;
  EXPECT_GE(rate, 0.5);
  EXPECT_DOUBLE_EQ(rainbow_probability_lower_bound(17, 2), 1.0 - 6.0 / 16.0);
}

TEST(RainbowSearch, FailureRateWithinUnionBound) {
  // For (m, d) = (1, 5) and (2, 17) under proper colorings, the chance that
  // t trials all fail is at most (1 - p)^t; check with t = 3 over many seeds.
  for (auto [m, d] : {std::pair{1, 5}, std::pair{2, 17}}) {
    ProductSpace s(std::vector<int>(static_cast<std::size_t>(m), d));
    auto c = sum_mod(s, d);
    double p = rainbow_probability_lower_bound(d, m);
    int fails = 0, runs = 2000;
    for (int seed = 0; seed < runs; ++seed)
      fails += random_rainbow_search(s, c, 3, static_cast<std::uint64_t>(seed)).outcome == RainbowOutcome::None;
    double bound = std::pow(1 - p, 3);
    // Three standard deviations of slack for the empirical rate.
    EXPECT_LE(fails / static_cast<double>(runs), bound + 3 * std::sqrt(bound / runs) + 1e-9) << m << " " << d;
  }
}

TEST(RainbowSearch, JobsDoNotChangeResult) {
  ProductSpace s({17, 17});
  std::mt19937_64 rng(1);
  auto c = sum_mod(s, 17);
  for (std::uint64_t seed : {1ULL, 2ULL, 99ULL}) {
    auto a = random_rainbow_search(s, c, 1000, seed, 1);
    auto b = random_rainbow_search(s, c, 1000, seed, 3);
    EXPECT_EQ(a.trials, b.trials);
    EXPECT_EQ(a.box, b.box);
  }
}

TEST(RainbowSearch, SampledBoxesUseDistinctValues) {
  ProductSpace s({2, 3, 7});
  for (std::uint64_t t = 0; t < 500; ++t) {
    auto box = sample_box(s, 5, t);
    EXPECT_EQ(box.dimension(), 3U);
  }
}

TEST(LayeredMono, LineExample) {
  ProductSpace s({3});
  auto box = layered_mono_search(s, Coloring({1, 2, 1}), 2);
  EXPECT_EQ(box.a, std::vector<int>{0});
  EXPECT_EQ(box.b, std::vector<int>{2});
}

TEST(LayeredMono, ConstantColoringGivesFirstBox) {
  ProductSpace s({3, 10});
  auto box = layered_mono_search(s, Coloring(std::vector<Color>(30, 0)), 2);
  EXPECT_EQ(box.a, (std::vector<int>{0, 0}));
  EXPECT_EQ(box.b, (std::vector<int>{1, 1}));
}

TEST(LayeredMono, RandomTwoColoringsOf3x10) {
  ProductSpace s({3, 10});
  std::mt19937_64 rng(31);
  for (int t = 0; t < 20000; ++t) {
    auto c = random_coloring(30, 2, rng);
    auto box = layered_mono_search(s, c, 2);
    ASSERT_EQ(box.dimension(), 2U);
    ASSERT_EQ(classify(box.cells(s), c), CopyClass::Monochromatic);
  }
}

TEST(LayeredMono, Errors) {
  ProductSpace s({2, 2});
  EXPECT_THROW(layered_mono_search(s, Coloring({0, 1, 2, 0}), 2), PaletteError);
  // Two distinct layers of size 2: no identical pair, no pigeonhole.
  EXPECT_THROW(layered_mono_search(s, Coloring({0, 1, 1, 0}), 2), BoundError);
  EXPECT_THROW(layered_mono_search(ProductSpace({2}), Coloring({0, 1}), 2), BoundError);
}

TEST(LayeredMono, PigeonholeSizes) {
  auto sizes = pigeonhole_sizes(BoundValue(2), 2);
  EXPECT_EQ(sizes[0], BoundValue(3));
  EXPECT_EQ(sizes[1], BoundValue(9));
  EXPECT_TRUE(sizes_guarantee_mono({3, 10}, 2));
  EXPECT_TRUE(sizes_guarantee_mono({3, 9}, 2));
  EXPECT_FALSE(sizes_guarantee_mono({3, 8}, 2));
  // The rule r^(n1) + 1 exceeds n1^r + 1 once products reach 5.
  EXPECT_EQ(pigeonhole_sizes(BoundValue(2), 3)[2], BoundValue(BigInt(1) << 27) + BoundValue(1));
}

TEST(LayeredMono, SmallestGuaranteedSizesExhaustive) {
  // Every 2-coloring of [3] x [9] has a mono 2-box via the layered search.
  ProductSpace s({3, 9});
  std::mt19937_64 rng(8);
  for (int t = 0; t < 5000; ++t) {
    auto c = random_coloring(27, 2, rng);
    EXPECT_EQ(classify(layered_mono_search(s, c, 2).cells(s), c), CopyClass::Monochromatic);
  }
}

TEST(Bounds, SmallValues) {
  EXPECT_EQ(n2_bound(BoundValue(1)), BoundValue(5));
  EXPECT_EQ(n2_bound(BoundValue(2)), BoundValue(34));
  EXPECT_EQ(n3_bound(BoundValue(2), BoundValue(1)), BoundValue(3));
  EXPECT_EQ(n3_bound(BoundValue(2), BoundValue(2)), BoundValue(12));
  auto t = compute_bounds(1, 3, 2);
  EXPECT_EQ(t.n1, t.n2);
  EXPECT_FALSE(t.n_prime);
}

TEST(Bounds, RecursionIntermediates) {
  auto t = compute_bounds(2, 1, 2);
  ASSERT_TRUE(t.n_prime && t.r_prime && t.m_prime);
  EXPECT_EQ(*t.n_prime, BoundValue(10));          // n2(1) * 2
  EXPECT_EQ(*t.r_prime, BoundValue(1 << 12));     // 2^(10 + 2)
  EXPECT_EQ(*t.m_prime, BoundValue(5));           // n1(1, 1)
  EXPECT_FALSE(t.n1.is_exact());                  // tower-sized
  EXPECT_GT(t.n1, BoundValue(BigInt(1) << 1000));
}

TEST(Bounds, PositiveAndMonotone) {
  for (int k = 1; k <= 3; ++k)
    for (int m = 1; m <= 3; ++m)
      for (int r = 1; r <= 3; ++r) {
        auto t = compute_bounds(k, m, r);
        EXPECT_GT(t.n1, BoundValue(0));
        EXPECT_GT(t.n3, BoundValue(0));
        if (m < 3) {
          EXPECT_LE(t.n2, compute_bounds(k, m + 1, r).n2);
          EXPECT_LE(t.n3, compute_bounds(k, m + 1, r).n3);
        }
        if (r < 3) EXPECT_LE(t.n3, compute_bounds(k, m, r + 1).n3);
        if (k < 3) {
          auto next = compute_bounds(k + 1, m, r).n1;
          EXPECT_TRUE(t.n1 <= next || next.is_beyond());
        }
      }
  EXPECT_THROW(compute_bounds(0, 1, 1), RangeError);
}

TEST(Bounds, PipelineCapRefusal) {
  EXPECT_NO_THROW(require_pipeline_fits(1, 1, 2, 10));
  EXPECT_THROW(require_pipeline_fits(2, 1, 2, 1000000), BoundError);
}

TEST(AuxiliaryColoring, Examples) {
  auto c = auxiliary_coloring({1, 2, 1});
  EXPECT_EQ(c.normalized(), Coloring({0, 1, 0}));
  EXPECT_EQ(auxiliary_coloring({4, 4})[0], auxiliary_coloring({4, 4})[1]);
}

TEST(Prism, ToyPipelineKOne) {
  std::mt19937_64 rng(77);
  int mono = 0, rainbow = 0;
  for (int t = 0; t < 300; ++t) {
    // Base [4] (needs > C(3,2) = 3 values), layer S_3 with two colors so every
    // layer has a mono pair.
    auto c = random_coloring(12, 2, rng);
    auto res = prism_pipeline({4}, 3, c, 1);
    ProductSpace full({4, 3});
    auto cls = classify(res.copy.cells(full), c);
    if (res.outcome == PrismOutcome::Mono) {
      ++mono;
      EXPECT_EQ(cls, CopyClass::Monochromatic);
      ASSERT_TRUE(res.base_box);
      // Both prism levels agree on the base box.
      for (std::size_t r : res.base_box->cells(ProductSpace({4})))
        EXPECT_EQ(c[full.rank({static_cast<int>(r), res.pair_p})], c[full.rank({static_cast<int>(r), res.pair_q})]);
    } else {
      ++rainbow;
    }
  }
  EXPECT_EQ(rainbow, 0);
  EXPECT_EQ(mono, 300);
}

TEST(Prism, ToyPipelineKTwo) {
  std::mt19937_64 rng(78);
  ProductSpace full({4, 3});
  for (int t = 0; t < 300; ++t) {
    auto c = random_coloring(12, 2 + static_cast<int>(t % 2), rng);
    PrismResult res = [&] {
      try {
        return prism_pipeline({4}, 3, c, 2);
      } catch (const BoundError&) {
        return PrismResult{PrismOutcome::Rainbow, {}, std::nullopt, -1, -1, Coloring{}};
      }
    }();
    if (res.pair_p < 0 && res.copy.a.empty()) continue;
    auto cls = classify(res.copy.cells(full), c);
    EXPECT_EQ(cls, res.outcome == PrismOutcome::Mono ? CopyClass::Monochromatic : CopyClass::Rainbow);
  }
}

TEST(Prism, RainbowLayerShortCircuits) {
  // Layer of cell 0 is all distinct.
  std::vector<Color> c{0, 1, 2, 0, 0, 1, 0, 0, 1, 0, 0, 1};
  auto res = prism_pipeline({4}, 3, Coloring(c), 1);
  EXPECT_EQ(res.outcome, PrismOutcome::Rainbow);
  EXPECT_EQ(classify(res.copy.cells(ProductSpace({4, 3})), Coloring(c)), CopyClass::Rainbow);
}
