#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include "ramsey_wb/coloring.hpp"
#include "ramsey_wb/errors.hpp"
#include "ramsey_wb/hypercube.hpp"
#include "ramsey_wb/partition_search.hpp"
#include "ramsey_wb/product_space.hpp"

namespace ramsey_wb::arrow {

using CliqueProduct = ProductSpace;

// "2" is K_2, "2x2" is K_2 [] K_2, and so on: the number of K_2 factors.
inline std::size_t parse_shape(const std::string& text) {
  std::size_t j = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t x = text.find('x', start);
    if (x == std::string::npos) x = text.size();
    if (text.substr(start, x - start) != "2") throw ParseError("box shape must look like 2, 2x2, 2x2x2: '" + text + "'");
    ++j;
    start = x + 1;
  }
  return j;
}

inline std::string shape_name(std::size_t j) {
  std::string s = "2";
  for (std::size_t i = 1; i < j; ++i) s += "x2";
  return s;
}

// Every axis-aligned j-box once, as its (min corner, max corner) pair.
// Order: selected factor sets lexicographically, then min corner by rank,
// then max corner lexicographically.
inline void for_each_box(const CliqueProduct& space, std::size_t j, const std::function<void(const BoxCopy&)>& fn) {
  const std::size_t d = space.factors();
  if (j < 1 || j > d)
    throw DomainError("box with " + std::to_string(j) + " factors does not fit a " + std::to_string(d) +
                      "-factor space");
  const auto& n = space.sizes();
  std::vector<std::size_t> sel(j);
  for (std::size_t i = 0; i < j; ++i) sel[i] = i;
  while (true) {
    for (std::size_t r = 0; r < space.cells(); ++r) {
      auto a = space.unrank(r);
      bool ok = true;
      for (std::size_t f : sel) ok = ok && a[f] + 1 < n[f];
      if (!ok) continue;
      BoxCopy box{a, a};
      for (std::size_t f : sel) box.b[f] = a[f] + 1;
      while (true) {
        fn(box);
        std::size_t i = j;
        while (i > 0) {
          std::size_t f = sel[i - 1];
          if (++box.b[f] < n[f]) break;
          box.b[f] = a[f] + 1;
          --i;
        }
        if (i == 0) break;
      }
    }
    std::size_t i = j;
    while (i > 0 && sel[i - 1] == d - j + i - 1) --i;
    if (i == 0) break;
    ++sel[i - 1];
    for (std::size_t t = i; t < j; ++t) sel[t] = sel[t - 1] + 1;
  }
}

inline std::vector<BoxCopy> enumerate_boxes(const CliqueProduct& space, std::size_t j) {
  std::vector<BoxCopy> out;
  for_each_box(space, j, [&](const BoxCopy& b) { out.push_back(b); });
  return out;
}

// Sum over factor sets S of size j of prod_{i in S} C(n_i, 2) prod_{i not in S} n_i.
inline BigInt box_count(const CliqueProduct& space, std::size_t j) {
  // Elementary symmetric polynomial in C(n_i,2)/n_i, scaled by prod n_i.
  std::vector<BigInt> e(j + 1, 0);
  e[0] = 1;
  for (int ni : space.sizes()) {
    BigInt pair = BigInt(ni) * (ni - 1) / 2;
    for (std::size_t t = j; t > 0; --t) e[t] = e[t] * ni + e[t - 1] * pair;
    e[0] *= ni;
  }
  return e[j];
}

struct ArrowQuery {
  CliqueProduct space;
  std::optional<std::size_t> mono;     // target whose monochromatic copies are sought
  std::optional<std::size_t> rainbow;  // target whose rainbow copies are sought
  std::optional<std::size_t> palette;  // nullopt: any number of colors
};

inline constexpr std::size_t kDefaultUnboundedCap = 12;
inline constexpr std::size_t kDefaultPaletteCap = 16;

enum class Verdict { Holds, Fails, Unknown };

inline std::string_view verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Holds: return "HOLDS";
    case Verdict::Fails: return "FAILS";
    case Verdict::Unknown: return "UNKNOWN";
  }
  return "?";
}

struct ArrowVerdict {
  Verdict verdict = Verdict::Unknown;
  std::optional<Coloring> witness;
  std::uint64_t nodes = 0;
  // Probe statistics: best violation count after each restart.
  std::vector<std::uint64_t> trace;
  std::uint64_t best_violations = 0;
  std::uint64_t moves = 0;
};

// Target copies as hyperedges; bit 1 = mono target, bit 2 = rainbow target.
struct TargetEdges {
  std::vector<std::vector<std::size_t>> cells;
  std::vector<std::uint8_t> kind;
};

inline TargetEdges target_edges(const ArrowQuery& q) {
  if (!q.mono && !q.rainbow) throw DomainError("query has no target");
  TargetEdges out;
  auto add = [&](std::size_t j, std::uint8_t bits) {
    for_each_box(q.space, j, [&](const BoxCopy& b) {
      out.cells.push_back(b.cells(q.space));
      out.kind.push_back(bits);
    });
  };
  if (q.mono && q.rainbow && *q.mono == *q.rainbow) {
    add(*q.mono, 3);
  } else {
    if (q.mono) add(*q.mono, 1);
    if (q.rainbow) add(*q.rainbow, 2);
  }
  return out;
}

inline bool violates(std::uint8_t kind, std::span<const Color> colors) {
  CopyClass c = classify_colors(colors);
  return ((kind & 1) && c == CopyClass::Monochromatic) || ((kind & 2) && c == CopyClass::Rainbow);
}

// First target copy that the coloring does not avoid, if any.
inline std::optional<BoxCopy> first_violation(const ArrowQuery& q, const Coloring& coloring) {
  if (coloring.size() != q.space.cells()) throw DomainError("coloring does not cover the space");
  if (q.palette && coloring.num_colors() > *q.palette) throw PaletteError("witness uses more colors than the palette");
  std::optional<BoxCopy> bad;
  std::vector<Color> colors;
  auto check = [&](std::size_t j, std::uint8_t bits) {
    for_each_box(q.space, j, [&](const BoxCopy& b) {
      if (bad) return;
      colors.clear();
      for (std::size_t r : b.cells(q.space)) colors.push_back(coloring[r]);
      if (violates(bits, colors)) bad = b;
    });
  };
  if (q.mono) check(*q.mono, 1);
  if (q.rainbow && !bad) check(*q.rainbow, 2);
  return bad;
}

// Exhaustive search over partitions (or r-colorings up to renaming) of the
// cells. Cells are branched in descending order of target-copy incidence.
inline ArrowVerdict decide_arrow(const ArrowQuery& q, std::optional<std::size_t> cap = std::nullopt,
                                 std::size_t jobs = 1) {
  std::size_t limit = cap.value_or(q.palette ? kDefaultPaletteCap : kDefaultUnboundedCap);
  if (q.space.cells() > limit)
    throw ResourceError("space has " + std::to_string(q.space.cells()) + " cells, above the cap of " +
                        std::to_string(limit));
  if (q.palette && *q.palette < 1) throw PaletteError("palette must be positive");
  TargetEdges edges = target_edges(q);
  std::vector<std::size_t> incidence(q.space.cells(), 0);
  for (const auto& e : edges.cells)
    for (std::size_t c : e) ++incidence[c];
  PartitionSearchOptions opt;
  opt.palette = q.palette;
  opt.jobs = jobs;
  opt.order.resize(q.space.cells());
  for (std::size_t i = 0; i < opt.order.size(); ++i) opt.order[i] = i;
  std::stable_sort(opt.order.begin(), opt.order.end(),
                   [&](std::size_t x, std::size_t y) { return incidence[x] > incidence[y]; });
  auto kinds = edges.kind;
  auto forbidden = [kinds](std::size_t e, std::span<const Color> colors) { return violates(kinds[e], colors); };
  auto res = search_partitions(q.space.cells(), std::move(edges.cells), forbidden, opt);
  ArrowVerdict v;
  v.nodes = res.nodes;
  if (res.witness) {
    v.verdict = Verdict::Fails;
    v.witness = res.witness->normalized();
    if (first_violation(q, *v.witness)) throw InternalError("arrow search produced an invalid witness");
  } else {
    v.verdict = Verdict::Holds;
  }
  return v;
}

// ---------------------------------------------------------------------------
// Min-conflicts local search.

struct ProbeOptions {
  std::uint64_t iterations = 100000;
  std::uint64_t restart_length = 20000;
  std::uint64_t sideways_cap = 200;
  double noise = 0.05;
  // Colors used by the initial random state (unbounded palette only).
  std::size_t initial_colors = 4;
  std::size_t jobs = 1;
};

namespace detail {

class LocalSearch {
 public:
  LocalSearch(const ArrowQuery& q, const TargetEdges& edges, const ProbeOptions& opt)
      : q_(q), edges_(edges), opt_(opt), incident_(q.space.cells()) {
    for (std::size_t e = 0; e < edges_.cells.size(); ++e)
      for (std::size_t c : edges_.cells[e]) incident_[c].push_back(e);
  }

  struct Outcome {
    bool solved = false;
    std::vector<Color> colors;
    std::uint64_t best = 0;
    std::uint64_t moves = 0;
  };

  Outcome run(std::uint64_t seed, std::uint64_t budget) {
    std::mt19937_64 rng(seed);
    const std::size_t n = q_.space.cells();
    std::size_t init = q_.palette ? *q_.palette : std::min(opt_.initial_colors, n);
    std::uniform_int_distribution<Color> pick_color(0, static_cast<Color>(init) - 1);
    colors_.assign(n, 0);
    for (auto& c : colors_) c = pick_color(rng);
    next_color_ = static_cast<Color>(init);
    bad_.assign(edges_.cells.size(), 0);
    pos_.assign(edges_.cells.size(), kNone);
    violated_.clear();
    for (std::size_t e = 0; e < edges_.cells.size(); ++e) set_bad(e, edge_bad(e));

    Outcome out;
    out.best = violated_.size();
    out.colors = colors_;
    std::uint64_t sideways = 0;
    std::vector<Color> candidates;
    for (std::uint64_t step = 0; step < budget && !violated_.empty(); ++step) {
      ++out.moves;
      std::size_t e = violated_[std::uniform_int_distribution<std::size_t>(0, violated_.size() - 1)(rng)];
      const auto& cells = edges_.cells[e];
      std::size_t cell = cells[std::uniform_int_distribution<std::size_t>(0, cells.size() - 1)(rng)];
      candidate_colors(cell, candidates);
      Color chosen = colors_[cell];
      long best_delta = std::numeric_limits<long>::max();
      if (std::uniform_real_distribution<double>(0, 1)(rng) < opt_.noise) {
        chosen = candidates[std::uniform_int_distribution<std::size_t>(0, candidates.size() - 1)(rng)];
        best_delta = delta(cell, chosen);
      } else {
        std::size_t ties = 0;
        for (Color c : candidates) {
          if (c == colors_[cell]) continue;
          long dlt = delta(cell, c);
          if (dlt < best_delta) {
            best_delta = dlt;
            chosen = c;
            ties = 1;
          } else if (dlt == best_delta && std::uniform_int_distribution<std::size_t>(0, ties++)(rng) == 0) {
            chosen = c;
          }
        }
      }
      if (best_delta == 0 && ++sideways > opt_.sideways_cap) break;
      if (best_delta < 0) sideways = 0;
      apply(cell, chosen);
      if (violated_.size() < out.best) {
        out.best = violated_.size();
        out.colors = colors_;
      }
    }
    out.solved = out.best == 0;
    return out;
  }

 private:
  static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

  bool edge_bad(std::size_t e) {
    scratch_.clear();
    for (std::size_t c : edges_.cells[e]) scratch_.push_back(colors_[c]);
    return violates(edges_.kind[e], scratch_);
  }

  void set_bad(std::size_t e, bool b) {
    if (b == static_cast<bool>(bad_[e])) return;
    bad_[e] = b;
    if (b) {
      pos_[e] = violated_.size();
      violated_.push_back(e);
    } else {
      std::size_t p = pos_[e];
      violated_[p] = violated_.back();
      pos_[violated_[p]] = p;
      violated_.pop_back();
      pos_[e] = kNone;
    }
  }

  void candidate_colors(std::size_t cell, std::vector<Color>& out) {
    out.clear();
    if (q_.palette) {
      for (Color c = 0; c < static_cast<Color>(*q_.palette); ++c) out.push_back(c);
      return;
    }
    for (std::size_t e : incident_[cell])
      for (std::size_t c : edges_.cells[e]) out.push_back(colors_[c]);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    out.push_back(next_color_);
  }

  long delta(std::size_t cell, Color c) {
    Color old = colors_[cell];
    long before = 0, after = 0;
    for (std::size_t e : incident_[cell]) before += bad_[e];
    colors_[cell] = c;
    for (std::size_t e : incident_[cell]) after += edge_bad(e);
    colors_[cell] = old;
    return after - before;
  }

  void apply(std::size_t cell, Color c) {
    if (c == next_color_) ++next_color_;
    colors_[cell] = c;
    for (std::size_t e : incident_[cell]) set_bad(e, edge_bad(e));
  }

  const ArrowQuery& q_;
  const TargetEdges& edges_;
  const ProbeOptions& opt_;
  std::vector<std::vector<std::size_t>> incident_;
  std::vector<Color> colors_;
  std::vector<Color> scratch_;
  std::vector<std::uint8_t> bad_;
  std::vector<std::size_t> pos_;
  std::vector<std::size_t> violated_;
  Color next_color_ = 0;
};

}  // namespace detail

// Random restarts of min-conflicts search; restart i is seeded from
// (seed, i), so the verdict does not depend on the number of jobs.
inline ArrowVerdict heuristic_probe(const ArrowQuery& q, std::uint64_t seed, const ProbeOptions& opt = {}) {
  if (q.palette && *q.palette < 1) throw PaletteError("palette must be positive");
  TargetEdges edges = target_edges(q);
  const std::uint64_t len = std::max<std::uint64_t>(1, std::min(opt.restart_length, opt.iterations));
  const std::uint64_t restarts = (opt.iterations + len - 1) / len;
  std::vector<detail::LocalSearch::Outcome> results(restarts);
  std::mutex mu;
  std::uint64_t first_solved = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t next = 0;
  auto work = [&] {
    detail::LocalSearch ls(q, edges, opt);
    while (true) {
      std::uint64_t i;
      {
        std::lock_guard lock(mu);
        if (next >= restarts || next > first_solved) return;
        i = next++;
      }
      std::uint64_t budget = std::min(len, opt.iterations - i * len);
      auto out = ls.run(cube::stream_seed(seed, i), budget);
      std::lock_guard lock(mu);
      if (out.solved) first_solved = std::min(first_solved, i);
      results[i] = std::move(out);
    }
  };
  std::size_t jobs = std::max<std::size_t>(1, opt.jobs);
  if (jobs == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < jobs; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }

  ArrowVerdict v;
  std::uint64_t upto = std::min(restarts, first_solved == std::numeric_limits<std::uint64_t>::max() ? restarts
                                                                                                    : first_solved + 1);
  v.best_violations = std::numeric_limits<std::uint64_t>::max();
  for (std::uint64_t i = 0; i < upto; ++i) {
    v.trace.push_back(results[i].best);
    v.moves += results[i].moves;
    v.best_violations = std::min(v.best_violations, results[i].best);
  }
  if (first_solved != std::numeric_limits<std::uint64_t>::max()) {
    v.verdict = Verdict::Fails;
    v.witness = Coloring(results[first_solved].colors).normalized();
    v.best_violations = 0;
    if (first_violation(q, *v.witness)) throw InternalError("probe produced an invalid witness");
  } else {
    v.verdict = Verdict::Unknown;
  }
  return v;
}

// ---------------------------------------------------------------------------
// Geometric bridge.

inline constexpr std::size_t kDefaultBridgeCap = 1U << 16;

// Cells placed on the simplex-product embedding; boxes become copies of
// I^j(2). Coordinates are produced on demand, so the dimension count works
// for spaces far too large to materialize.
class GeometricBridge {
 public:
  explicit GeometricBridge(CliqueProduct space) : space_(std::move(space)) {}

  const CliqueProduct& space() const noexcept { return space_; }
  std::size_t dimension() const { return space_.affine_dimension(); }
  std::size_t coordinates() const {
    std::size_t s = 0;
    for (int n : space_.sizes()) s += static_cast<std::size_t>(n);
    return s;
  }
  Point point(std::size_t cell) const { return space_.simplex_point(cell); }

  PointConfig config(std::size_t cap = kDefaultBridgeCap) const {
    if (space_.cells() > cap)
      throw ResourceError("bridge has " + std::to_string(space_.cells()) + " cells, above the cap of " +
                          std::to_string(cap));
    PointConfig out(coordinates(), Norm::Euclidean);
    for (std::size_t r = 0; r < space_.cells(); ++r) out.add(space_.label(r), point(r));
    return out;
  }

 private:
  CliqueProduct space_;
};

inline GeometricBridge geometric_bridge(const CliqueProduct& space) { return GeometricBridge(space); }

}  // namespace ramsey_wb::arrow
