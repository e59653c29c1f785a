#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "ramsey_wb/coloring.hpp"
#include "ramsey_wb/errors.hpp"
#include "ramsey_wb/geometry.hpp"
#include "ramsey_wb/hales_jewett.hpp"
#include "ramsey_wb/rational.hpp"

namespace ramsey_wb::maxnorm {

// A = {a_1 < ... < a_s} and its densification B = {b_1 < ... < b_k}, with
// a_j = b_{index[j-1]} (1-based indices).
struct DensifiedSet {
  std::vector<Rational> a;
  std::vector<Rational> b;
  std::vector<int> index;

  int k() const { return static_cast<int>(b.size()); }
  int s() const { return static_cast<int>(a.size()); }
};

inline std::vector<Rational> parse_base_set(const std::string& text) {
  std::vector<Rational> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t comma = text.find(',', start);
    if (comma == std::string::npos) comma = text.size();
    out.push_back(parse_rational(std::string_view(text).substr(start, comma - start)));
    start = comma + 1;
  }
  return out;
}

inline void check_base_set(const std::vector<Rational>& a) {
  if (a.size() < 2) throw DomainError("base set needs at least two elements");
  for (std::size_t i = 1; i < a.size(); ++i)
    if (!(a[i - 1] < a[i])) throw DomainError("base set must be strictly ascending");
}

inline Rational min_gap(const std::vector<Rational>& v) {
  Rational g = v[1] - v[0];
  for (std::size_t i = 2; i < v.size(); ++i) g = std::min(g, Rational(v[i] - v[i - 1]));
  return g;
}

inline Rational max_gap(const std::vector<Rational>& v) {
  Rational g = v[1] - v[0];
  for (std::size_t i = 2; i < v.size(); ++i) g = std::max(g, Rational(v[i] - v[i - 1]));
  return g;
}

// Splits every gap of A into ceil(gap / minGap) equal pieces, the fewest for
// which no gap of B exceeds the smallest gap of A.
inline DensifiedSet densify(const std::vector<Rational>& a) {
  check_base_set(a);
  DensifiedSet out;
  out.a = a;
  const Rational g = min_gap(a);
  out.b.push_back(a[0]);
  out.index.push_back(1);
  for (std::size_t j = 1; j < a.size(); ++j) {
    const Rational gap = a[j] - a[j - 1];
    BigInt pieces = ceil(Rational(gap / g));
    for (BigInt t = 1; t < pieces; ++t) out.b.push_back(a[j - 1] + gap * Rational(t) / Rational(pieces));
    out.b.push_back(a[j]);
    out.index.push_back(static_cast<int>(out.b.size()));
  }
  return out;
}

// m = d + ceil(d log2 s): d plus the least t with 2^t >= s^d.
inline int required_m(int d, int s) {
  if (d < 1 || s < 2) throw RangeError("required_m needs d >= 1 and s >= 2");
  BigInt target = boost::multiprecision::pow(BigInt(s), static_cast<unsigned>(d));
  int t = 0;
  BigInt p = 1;
  while (p < target) {
    p <<= 1;
    ++t;
  }
  return d + t;
}

// (x_1, ..., x_n) -> (b_{x_1}, ..., b_{x_n}).
inline Point phi(const hj::Cell& x, const DensifiedSet& set) {
  std::vector<Rational> coords;
  coords.reserve(x.size());
  for (int v : x) {
    if (v < 1 || v > set.k()) throw RangeError("coordinate " + std::to_string(v) + " outside [k]");
    coords.push_back(set.b[static_cast<std::size_t>(v - 1)]);
  }
  return Point(std::move(coords));
}

enum class WitnessKind { Mono, Rainbow };

struct WitnessSet {
  WitnessKind kind = WitnessKind::Mono;
  // 1-based critical index i' of the rainbow construction.
  int critical = 0;
  std::vector<hj::Cell> cells;
  // A^d in lexicographic order; source[i] corresponds to image[i].
  PointConfig source{1, Norm::Maximum};
  PointConfig image{1, Norm::Maximum};
};

namespace detail {

inline void check_template(const hj::Template& tau, const DensifiedSet& set, int d) {
  if (tau.k() != set.k()) throw DomainError("template alphabet size differs from |B|");
  if (d < 1 || tau.m() < d) throw RangeError("template needs at least d variables");
}

// Index tuples of I^d in lexicographic order.
inline std::vector<std::vector<int>> index_power(const DensifiedSet& set, int d) {
  std::vector<std::vector<int>> out;
  std::vector<std::size_t> pos(static_cast<std::size_t>(d), 0);
  while (true) {
    std::vector<int> x;
    for (std::size_t p : pos) x.push_back(set.index[p]);
    out.push_back(std::move(x));
    int i = d - 1;
    while (i >= 0 && ++pos[static_cast<std::size_t>(i)] == set.index.size()) pos[static_cast<std::size_t>(i--)] = 0;
    if (i < 0) break;
  }
  return out;
}

inline WitnessSet finish(WitnessSet w, const hj::Template& tau, const DensifiedSet& set, int d,
                         const std::vector<std::vector<int>>& values) {
  w.source = cartesian_power(set.a, static_cast<std::size_t>(d), Norm::Maximum);
  w.image = PointConfig(static_cast<std::size_t>(tau.n()), Norm::Maximum);
  for (const auto& v : values) {
    hj::Cell c = tau.instantiate(v);
    w.image.add(hj::cell_to_string(c), phi(c, set));
    w.cells.push_back(std::move(c));
  }
  IsometryWitness identity;
  for (std::size_t i = 0; i < w.cells.size(); ++i) identity.image.push_back(i);
  if (!check_witness(w.source, w.image, identity, Norm::Maximum))
    throw InternalError("witness image is not an l-infinity copy of A^d");
  return w;
}

}  // namespace detail

// I_1: the first d variables range over I, the remaining ones are 1.
inline WitnessSet mono_witness(const hj::Template& tau, const DensifiedSet& set, int d) {
  detail::check_template(tau, set, d);
  std::vector<std::vector<int>> values;
  for (auto x : detail::index_power(set, d)) {
    x.resize(static_cast<std::size_t>(tau.m()), 1);
    values.push_back(std::move(x));
  }
  WitnessSet w;
  w.kind = WitnessKind::Mono;
  return detail::finish(std::move(w), tau, set, d, values);
}

// I_2: x in I^d followed by sigma(x) in {i', i'+1}^(m-d), where sigma writes
// the rank of x in binary (most significant bit first, 0 -> i', 1 -> i'+1).
inline WitnessSet rainbow_witness(const hj::Template& tau, const hj::EquivRelation& rel, const DensifiedSet& set,
                                  int d) {
  detail::check_template(tau, set, d);
  if (rel.k() != set.k()) throw DomainError("relation is not on [k]");
  auto split = rel.first_adjacent_split();
  if (!split) throw PatternError("relation has no adjacent non-equivalent pair");
  const int ip = *split;
  const int bits = tau.m() - d;
  auto xs = detail::index_power(set, d);
  if (bits < 63 && xs.size() > (std::size_t{1} << bits))
    throw BoundError("s^d = " + std::to_string(xs.size()) + " exceeds 2^(m-d) = 2^" + std::to_string(bits));
  std::vector<std::vector<int>> values;
  for (std::size_t r = 0; r < xs.size(); ++r) {
    auto x = xs[r];
    for (int b = bits - 1; b >= 0; --b) x.push_back(b < 63 && ((r >> b) & 1U) ? ip + 1 : ip);
    values.push_back(std::move(x));
  }
  WitnessSet w;
  w.kind = WitnessKind::Rainbow;
  w.critical = ip;
  return detail::finish(std::move(w), tau, set, d, values);
}

struct PipelineResult {
  WitnessSet witness;
  hj::Template tmpl;
  hj::EquivRelation relation;
  CopyClass verdict;
  int m = 0;
};

// `coloring` colors [k]^n in rank order, i.e. B^n pulled back through phi.
inline PipelineResult maxnorm_mr_pipeline(const std::vector<Rational>& a, int d, int n, const Coloring& coloring) {
  DensifiedSet set = densify(a);
  const int m = required_m(d, set.s());
  if (n < m) throw SearchExhausted("n = " + std::to_string(n) + " is below m = " + std::to_string(m));
  auto sub = hj::find_canonical_subspace(coloring, set.k(), n, m);
  if (!sub) throw SearchExhausted("no canonically colored " + std::to_string(m) + "-subspace at n = " + std::to_string(n));
  bool full = sub->relation.is_full();
  WitnessSet w = full ? mono_witness(sub->tmpl, set, d) : rainbow_witness(sub->tmpl, sub->relation, set, d);
  std::vector<std::size_t> ranks;
  for (const auto& c : w.cells) ranks.push_back(hj::cell_rank(c, set.k()));
  CopyClass got = classify(ranks, coloring);
  CopyClass want = full ? CopyClass::Monochromatic : CopyClass::Rainbow;
  if (got != want) throw InternalError("pipeline witness does not have the expected coloring class");
  if (!is_isometric_copy(w.source, w.image, Norm::Maximum))
    throw InternalError("pipeline witness failed isometry revalidation");
  return PipelineResult{std::move(w), sub->tmpl, sub->relation, got, m};
}

}  // namespace ramsey_wb::maxnorm
