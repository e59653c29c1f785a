#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <random>
#include <thread>
#include <vector>

#include "ramsey_wb/bounds.hpp"
#include "ramsey_wb/coloring.hpp"
#include "ramsey_wb/errors.hpp"
#include "ramsey_wb/product_space.hpp"

namespace ramsey_wb::cube {

// Seed for an independent per-trial stream (splitmix64 finalizer).
inline std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline void check_coloring(const ProductSpace& space, const Coloring& coloring) {
  if (coloring.size() != space.cells())
    throw DomainError("coloring covers " + std::to_string(coloring.size()) + " cells, space has " +
                      std::to_string(space.cells()));
}

// Two cells differing in exactly one coordinate with the same color: a
// monochromatic copy of I(2). First such pair in rank order.
inline std::optional<BoxCopy> find_mono_edge(const ProductSpace& space, const Coloring& coloring) {
  check_coloring(space, coloring);
  for (std::size_t r = 0; r < space.cells(); ++r) {
    auto x = space.unrank(r);
    for (std::size_t i = 0; i < x.size(); ++i)
      for (int v = x[i] + 1; v < space.sizes()[i]; ++v) {
        auto y = x;
        y[i] = v;
        if (coloring[r] == coloring[space.rank(y)]) return BoxCopy{x, y};
      }
  }
  return std::nullopt;
}

// The full-dimensional box of one trial: an ordered pair of distinct values
// drawn uniformly in every factor.
inline BoxCopy sample_box(const ProductSpace& space, std::uint64_t seed, std::uint64_t trial) {
  std::mt19937_64 rng(stream_seed(seed, trial));
  BoxCopy box;
  for (int n : space.sizes()) {
    std::uniform_int_distribution<int> first(0, n - 1), second(0, n - 2);
    int x = first(rng);
    int y = second(rng);
    if (y >= x) ++y;
    box.a.push_back(x);
    box.b.push_back(y);
  }
  return box;
}

enum class RainbowOutcome { Rainbow, MonoPair, None };

struct RainbowSearchResult {
  RainbowOutcome outcome = RainbowOutcome::None;
  BoxCopy box;
  // Index of the successful trial, or trials run.
  std::uint64_t trials = 0;
};

namespace detail {

// Smallest trial index in [0, trials) whose box is rainbow, scanning in
// blocks so the answer does not depend on the worker count.
inline std::optional<std::uint64_t> first_rainbow_trial(const ProductSpace& space, const Coloring& coloring,
                                                        std::uint64_t trials, std::uint64_t seed, std::size_t jobs) {
  auto rainbow = [&](std::uint64_t t) {
    return classify(sample_box(space, seed, t).cells(space), coloring) == CopyClass::Rainbow;
  };
  if (jobs <= 1) {
    for (std::uint64_t t = 0; t < trials; ++t)
      if (rainbow(t)) return t;
    return std::nullopt;
  }
  const std::uint64_t block = 256 * jobs;
  for (std::uint64_t start = 0; start < trials; start += block) {
    std::uint64_t end = std::min(trials, start + block);
    std::atomic<std::uint64_t> best{std::numeric_limits<std::uint64_t>::max()};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < jobs; ++w)
      pool.emplace_back([&, w] {
        for (std::uint64_t t = start + w; t < end; t += jobs) {
          if (t > best.load()) return;
          if (rainbow(t)) {
            std::uint64_t cur = best.load();
            while (t < cur && !best.compare_exchange_weak(cur, t)) {
            }
            return;
          }
        }
      });
    for (auto& th : pool) th.join();
    if (best.load() != std::numeric_limits<std::uint64_t>::max()) return best.load();
  }
  return std::nullopt;
}

}  // namespace detail

// Randomized rainbow-box search in [d]^m under the standing hypothesis that
// no copy of I(2) is monochromatic; a violation of that hypothesis is
// reported as MonoPair.
inline RainbowSearchResult random_rainbow_search(const ProductSpace& space, const Coloring& coloring,
                                                 std::uint64_t trials, std::uint64_t seed, std::size_t jobs = 1) {
  RainbowSearchResult res;
  if (auto edge = find_mono_edge(space, coloring)) {
    res.outcome = RainbowOutcome::MonoPair;
    res.box = *edge;
    return res;
  }
  if (auto t = detail::first_rainbow_trial(space, coloring, trials, seed, jobs)) {
    res.outcome = RainbowOutcome::Rainbow;
    res.box = sample_box(space, seed, *t);
    res.trials = *t;
    return res;
  }
  res.trials = trials;
  return res;
}

// Number of rainbow boxes among trials 0..trials-1 (per-trial success rate
// estimate).
inline std::uint64_t count_rainbow_trials(const ProductSpace& space, const Coloring& coloring, std::uint64_t trials,
                                          std::uint64_t seed) {
  check_coloring(space, coloring);
  std::uint64_t hits = 0;
  for (std::uint64_t t = 0; t < trials; ++t)
    hits += classify(sample_box(space, seed, t).cells(space), coloring) == CopyClass::Rainbow;
  return hits;
}

// Lower bound on the per-trial rainbow probability for d > 4^m: fewer than
// 2^m(2^m-1)/2 bad-event types, each of probability at most 1/(d-1).
inline double rainbow_probability_lower_bound(int d, int m) {
  double pairs = std::ldexp(1.0, m) * (std::ldexp(1.0, m) - 1) / 2;
  return 1.0 - pairs / (d - 1);
}

// ---------------------------------------------------------------------------
// Layered pigeonhole search.

// r^(n_1 ... n_i) + 1 for i = 1..m-1, preceded by r + 1: the smallest factor
// sizes for which the layered search cannot fail.
inline std::vector<BoundValue> pigeonhole_sizes(const BoundValue& r, int m) {
  std::vector<BoundValue> out;
  BoundValue prod(1);
  for (int i = 0; i < m; ++i) {
    BoundValue n = i == 0 ? r + BoundValue(1) : BoundValue::pow(r, prod) + BoundValue(1);
    out.push_back(n);
    prod = prod * n;
  }
  return out;
}

inline bool sizes_guarantee_mono(const std::vector<int>& sizes, int r) {
  auto need = pigeonhole_sizes(BoundValue(r), static_cast<int>(sizes.size()));
  for (std::size_t i = 0; i < sizes.size(); ++i)
    if (BoundValue(sizes[i]) < need[i]) return false;
  return true;
}

namespace detail {

// Mono box over factors [0, t) with factors [t, m) fixed to `suffix`.
inline std::optional<BoxCopy> layered(const ProductSpace& space, const Coloring& coloring, std::size_t t,
                                      const std::vector<int>& suffix) {
  const auto& sizes = space.sizes();
  auto cell_with = [&](const std::vector<int>& prefix) {
    std::vector<int> x = prefix;
    x.insert(x.end(), suffix.begin(), suffix.end());
    return space.rank(x);
  };
  if (t == 1) {
    std::map<Color, int> first_at;
    for (int v = 0; v < sizes[0]; ++v) {
      Color c = coloring[cell_with({v})];
      auto [it, fresh] = first_at.emplace(c, v);
      if (!fresh) {
        BoxCopy box{{it->second}, {v}};
        box.a.insert(box.a.end(), suffix.begin(), suffix.end());
        box.b.insert(box.b.end(), suffix.begin(), suffix.end());
        return box;
      }
    }
    return std::nullopt;
  }
  // Layers are indexed by the value of factor t-1.
  ProductSpace sub(std::vector<int>(sizes.begin(), sizes.begin() + static_cast<std::ptrdiff_t>(t - 1)));
  std::map<std::vector<Color>, int> first_at;
  for (int v = 0; v < sizes[t - 1]; ++v) {
    std::vector<Color> signature;
    signature.reserve(sub.cells());
    for (std::size_t r = 0; r < sub.cells(); ++r) {
      auto prefix = sub.unrank(r);
      prefix.push_back(v);
      signature.push_back(coloring[cell_with(prefix)]);
    }
    auto [it, fresh] = first_at.emplace(std::move(signature), v);
    if (fresh) continue;
    std::vector<int> inner_suffix{it->second};
    inner_suffix.insert(inner_suffix.end(), suffix.begin(), suffix.end());
    auto inner = layered(space, coloring, t - 1, inner_suffix);
    if (!inner) return std::nullopt;
    inner->b[t - 1] = v;
    return inner;
  }
  return std::nullopt;
}

}  // namespace detail

// Monochromatic full-dimensional box found by the layer induction: two
// identically colored layers of the last factor, a mono box inside one of
// them by recursion, lifted to both.
inline BoxCopy layered_mono_search(const ProductSpace& space, const Coloring& coloring, int r) {
  check_coloring(space, coloring);
  if (r < 1) throw PaletteError("palette size must be positive");
  if (coloring.num_colors() > static_cast<std::size_t>(r))
    throw PaletteError("coloring uses " + std::to_string(coloring.num_colors()) + " colors, more than r = " +
                       std::to_string(r));
  auto box = detail::layered(space, coloring, space.factors(), {});
  if (!box)
    throw BoundError("factor sizes too small for the pigeonhole steps and no identical layers exist");
  if (classify(box->cells(space), coloring) != CopyClass::Monochromatic)
    throw InternalError("layered search produced a non-monochromatic box");
  return *box;
}

// ---------------------------------------------------------------------------
// Bound recursion.

inline BoundValue n2_bound(const BoundValue& m) {
  return m * (BoundValue::pow(BoundValue(4), m) + BoundValue(1));
}

// Sum of the pigeonhole sizes r+1, r^(n_1)+1, ..., r^(n_1...n_{m-1})+1.
inline BoundValue n3_bound(const BoundValue& r, const BoundValue& m) {
  if (!m.is_exact() || m.exact() > 100000) return BoundValue::beyond();
  auto terms = pigeonhole_sizes(r, m.exact().convert_to<int>());
  BoundValue sum(0);
  for (const auto& t : terms) sum = sum + t;
  return sum;
}

struct BoundTable {
  int k = 1, m = 1, r = 2;
  BoundValue n2;  // n2(m)
  BoundValue n3;  // n3(r, m)
  BoundValue n1;  // n1(k, m)
  // Top-level intermediates of n1(k, m) for k >= 2.
  std::optional<BoundValue> n_prime, r_prime, m_prime;
};

// n1(1, m) = n2(m); n1(k, m) = n' + n3(r', m') with n' = n2(m) 2^(k-1),
// r' = 2^(n'+k), m' = n1(k-1, m).
inline BoundTable compute_bounds(int k, int m, int r) {
  if (k < 1 || m < 1 || r < 1) throw RangeError("k, m, r must be positive");
  BoundTable t;
  t.k = k;
  t.m = m;
  t.r = r;
  t.n2 = n2_bound(BoundValue(m));
  t.n3 = n3_bound(BoundValue(r), BoundValue(m));
  BoundValue n1 = t.n2;
  for (int j = 2; j <= k; ++j) {
    BoundValue np = t.n2 * BoundValue::pow(BoundValue(2), BoundValue(j - 1));
    BoundValue rp = BoundValue::pow(BoundValue(2), np + BoundValue(j));
    BoundValue mp = n1;
    n1 = np + n3_bound(rp, mp);
    if (j == k) {
      t.n_prime = np;
      t.r_prime = rp;
      t.m_prime = mp;
    }
  }
  t.n1 = n1;
  return t;
}

// The full induction runs on [d]^n1(k, m); refuse when that dimension is
// above the cap instead of truncating.
inline void require_pipeline_fits(int k, int m, int r, std::size_t cap) {
  BoundTable t = compute_bounds(k, m, r);
  if (!(t.n1 <= BoundValue(static_cast<long long>(cap))))
    throw BoundError("n1(" + std::to_string(k) + ", " + std::to_string(m) + ") = " + t.n1.to_string() +
                     " exceeds the cap of " + std::to_string(cap));
}

// ---------------------------------------------------------------------------
// Auxiliary coloring and the prism step at toy scale.

inline Coloring auxiliary_coloring(const std::vector<std::size_t>& witness_index) {
  std::vector<Color> colors;
  colors.reserve(witness_index.size());
  for (std::size_t w : witness_index) colors.push_back(static_cast<Color>(w));
  return Coloring(std::move(colors));
}

// Index of the pair {p, q} (p < q) among the pairs of [d] in lexicographic
// order.
inline std::size_t pair_index(int p, int q, int d) {
  return static_cast<std::size_t>(p * d - p * (p + 1) / 2 + (q - p - 1));
}

enum class PrismOutcome { Mono, Rainbow };

struct PrismResult {
  PrismOutcome outcome;
  // The final copy in the full space (base factors then the layer factor).
  BoxCopy copy;
  // Base box that is monochromatic under the auxiliary coloring.
  std::optional<BoxCopy> base_box;
  int pair_p = -1, pair_q = -1;
  Coloring auxiliary;
};

// Space = base x S_d, the layer factor last. Every base cell x owns the layer
// {x} x S_d; its witness index is the lexicographically smallest monochromatic
// pair of that layer. A layer without one is rainbow (the rainbow
// alternative). Otherwise the layered search on the auxiliary coloring gives
// a base box B whose layers all share the pair {p, q}, so B x {p} and B x {q}
// are identically colored: the prism. Stage k-1 then runs on B x {p}: for
// k = 1 the lifted copy is {x0} x {p, q}; for k = 2 a monochromatic edge of
// B lifts to a monochromatic 2-box, and a bichromatic edge is the rainbow
// alternative.
inline PrismResult prism_pipeline(const std::vector<int>& base_sizes, int layer_size, const Coloring& coloring,
                                  int k = 1) {
  if (k != 1 && k != 2) throw RangeError("toy prism pipeline supports k = 1 or k = 2");
  std::vector<int> sizes = base_sizes;
  sizes.push_back(layer_size);
  ProductSpace full(sizes);
  ProductSpace base(base_sizes);
  check_coloring(full, coloring);
  const int d = layer_size;
  auto at = [&](std::vector<int> x, int v) {
    x.push_back(v);
    return full.rank(x);
  };

  std::vector<std::size_t> witness(base.cells());
  for (std::size_t r = 0; r < base.cells(); ++r) {
    auto x = base.unrank(r);
    std::optional<std::size_t> idx;
    for (int p = 0; p < d && !idx; ++p)
      for (int q = p + 1; q < d && !idx; ++q)
        if (coloring[at(x, p)] == coloring[at(x, q)]) idx = pair_index(p, q, d);
    if (!idx) {
      auto y = x;
      x.push_back(0);
      y.push_back(1);
      return PrismResult{PrismOutcome::Rainbow, BoxCopy{x, y}, std::nullopt, -1, -1, Coloring{}};
    }
    witness[r] = *idx;
  }
  Coloring aux = auxiliary_coloring(witness);
  int r_prime = d * (d - 1) / 2;
  BoxCopy b = layered_mono_search(base, aux, r_prime);
  std::size_t idx = witness[base.rank(b.a)];
  int p = 0, q = 1;
  for (int pp = 0; pp < d; ++pp)
    for (int qq = pp + 1; qq < d; ++qq)
      if (pair_index(pp, qq, d) == idx) p = pp, q = qq;
  for (std::size_t r : b.cells(base)) {
    auto x = base.unrank(r);
    if (coloring[at(x, p)] != coloring[at(x, q)]) throw InternalError("prism levels are not identically colored");
  }

  PrismResult res{PrismOutcome::Mono, {}, b, p, q, aux};
  auto lift = [&](std::vector<int> lo, std::vector<int> hi, int va, int vb) {
    lo.push_back(va);
    hi.push_back(vb);
    return BoxCopy{lo, hi};
  };
  if (k == 1) {
    res.copy = lift(b.a, b.a, p, q);
  } else {
    std::optional<BoxCopy> mono, bichromatic;
    auto verts = b.cells(base);
    for (std::size_t i = 0; i < verts.size() && !mono; ++i)
      for (std::size_t j = i + 1; j < verts.size() && !mono; ++j) {
        auto x = base.unrank(verts[i]), y = base.unrank(verts[j]);
        std::size_t diff = 0;
        for (std::size_t f = 0; f < x.size(); ++f) diff += x[f] != y[f];
        if (diff != 1) continue;
        if (coloring[at(x, p)] == coloring[at(y, p)]) mono = lift(x, y, p, q);
        else if (!bichromatic) bichromatic = lift(x, y, p, p);
      }
    if (mono) {
      res.copy = *mono;
    } else if (bichromatic) {
      res.outcome = PrismOutcome::Rainbow;
      res.copy = *bichromatic;
    } else {
      throw SearchExhausted("prism base has no edge; base box must have dimension >= 1");
    }
  }
  CopyClass got = classify(res.copy.cells(full), coloring);
  CopyClass want = res.outcome == PrismOutcome::Mono ? CopyClass::Monochromatic : CopyClass::Rainbow;
  if (got != want) throw InternalError("prism pipeline produced an invalid copy");
  return res;
}

}  // namespace ramsey_wb::cube
