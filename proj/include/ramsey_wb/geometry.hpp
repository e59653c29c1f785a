#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ramsey_wb/errors.hpp"
#include "ramsey_wb/rational.hpp"

namespace ramsey_wb {

enum class Norm { Euclidean, Maximum, Manhattan };

inline std::string_view norm_name(Norm n) {
  switch (n) {
    case Norm::Euclidean: return "l2";
    case Norm::Maximum: return "linf";
    case Norm::Manhattan: return "l1";
  }
  return "?";
}

inline Norm parse_norm(std::string_view s) {
  if (s == "l2") return Norm::Euclidean;
  if (s == "linf") return Norm::Maximum;
  if (s == "l1") return Norm::Manhattan;
  throw ParseError("unknown norm '" + std::string(s) + "' (expected l2, linf or l1)");
}

struct Point {
  std::vector<Rational> coords;

  Point() = default;
  explicit Point(std::vector<Rational> c) : coords(std::move(c)) {}
  Point(std::initializer_list<Rational> c) : coords(c) {}

  std::size_t dim() const noexcept { return coords.size(); }
  const Rational& operator[](std::size_t i) const { return coords[i]; }

  std::vector<double> to_doubles() const {
    std::vector<double> out;
    out.reserve(coords.size());
    for (const auto& c : coords) out.push_back(to_double(c));
    return out;
  }

  friend bool operator==(const Point&, const Point&) = default;
};

// Finite labeled point set. All points share `dim()`; labels are unique.
class PointConfig {
 public:
  PointConfig(std::size_t dim, Norm norm) : dim_(dim), norm_(norm) {
    if (dim == 0) throw DimensionError("configuration dimension must be positive");
  }

  void add(std::string label, Point p) {
    if (p.dim() != dim_)
      throw DimensionError("point '" + label + "' has dimension " + std::to_string(p.dim()) + ", expected " +
                           std::to_string(dim_));
    if (index_.count(label)) throw DomainError("duplicate label '" + label + "'");
    index_.emplace(label, points_.size());
    labels_.push_back(std::move(label));
    points_.push_back(std::move(p));
  }

  // Labels default to the 0-based insertion index.
  void add(Point p) { add(std::to_string(points_.size()), std::move(p)); }

  std::size_t size() const noexcept { return points_.size(); }
  std::size_t dim() const noexcept { return dim_; }
  Norm norm() const noexcept { return norm_; }
  const Point& operator[](std::size_t i) const { return points_[i]; }
  const std::string& label(std::size_t i) const { return labels_[i]; }
  const std::vector<Point>& points() const noexcept { return points_; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }

  std::optional<std::size_t> index_of(const std::string& label) const {
    auto it = index_.find(label);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

 private:
  std::size_t dim_;
  Norm norm_;
  std::vector<Point> points_;
  std::vector<std::string> labels_;
  std::unordered_map<std::string, std::size_t> index_;
};

inline void check_same_dim(const Point& p, const Point& q) {
  if (p.dim() != q.dim())
    throw DimensionError("dimension mismatch: " + std::to_string(p.dim()) + " vs " + std::to_string(q.dim()));
}

inline Rational squared_distance(const Point& p, const Point& q) {
  check_same_dim(p, q);
  Rational s = 0;
  for (std::size_t i = 0; i < p.dim(); ++i) {
    Rational d = p[i] - q[i];
    s += d * d;
  }
  return s;
}

// Exact comparison key of ||p - q||: the squared distance for l2, the
// distance itself for linf and l1. Two pairs are equidistant iff their keys
// are equal.
inline Rational distance_key(const Point& p, const Point& q, Norm norm) {
  check_same_dim(p, q);
  switch (norm) {
    case Norm::Euclidean: return squared_distance(p, q);
    case Norm::Maximum: {
      Rational m = 0;
      for (std::size_t i = 0; i < p.dim(); ++i) m = std::max(m, abs(Rational(p[i] - q[i])));
      return m;
    }
    case Norm::Manhattan: {
      Rational s = 0;
      for (std::size_t i = 0; i < p.dim(); ++i) s += abs(Rational(p[i] - q[i]));
      return s;
    }
  }
  return 0;
}

inline double distance(const Point& p, const Point& q, Norm norm) {
  Rational key = distance_key(p, q, norm);
  return norm == Norm::Euclidean ? std::sqrt(to_double(key)) : to_double(key);
}

// image[i] is the target index assigned to source point i.
struct IsometryWitness {
  std::vector<std::size_t> image;

  friend bool operator==(const IsometryWitness&, const IsometryWitness&) = default;
};

namespace detail {

// Pairwise distance keys of both configurations, interned to small integers
// so the matcher compares ids instead of big rationals.
struct DistanceTables {
  std::vector<std::vector<int>> source;
  std::vector<std::vector<int>> target;
};

inline std::vector<std::vector<Rational>> key_matrix(const PointConfig& c, Norm norm) {
  std::vector<std::vector<Rational>> m(c.size(), std::vector<Rational>(c.size()));
  for (std::size_t i = 0; i < c.size(); ++i)
    for (std::size_t j = i + 1; j < c.size(); ++j) m[i][j] = m[j][i] = distance_key(c[i], c[j], norm);
  return m;
}

inline DistanceTables intern_distances(const PointConfig& a, const PointConfig& b, Norm norm) {
  auto ka = key_matrix(a, norm);
  auto kb = key_matrix(b, norm);
  std::map<Rational, int> ids;
  auto intern = [&](const std::vector<std::vector<Rational>>& k) {
    std::vector<std::vector<int>> out(k.size(), std::vector<int>(k.size(), 0));
    for (std::size_t i = 0; i < k.size(); ++i)
      for (std::size_t j = 0; j < k.size(); ++j) {
        auto [it, fresh] = ids.emplace(k[i][j], static_cast<int>(ids.size()));
        out[i][j] = it->second;
      }
    return out;
  };
  return {intern(ka), intern(kb)};
}

// Backtracking over partial injections source -> target in lexicographic
// order of (f(0), f(1), ...). A candidate is pruned as soon as one distance
// to an already placed point disagrees.
class InjectionMatcher {
 public:
  InjectionMatcher(DistanceTables tables, std::vector<std::vector<std::size_t>> candidates)
      : t_(std::move(tables)), candidates_(std::move(candidates)) {
    used_.assign(t_.target.size(), false);
    image_.assign(t_.source.size(), 0);
  }

  // Calls `emit` for every distance-preserving injection; stops when it
  // returns false.
  void run(const std::function<bool(const std::vector<std::size_t>&)>& emit) {
    stop_ = false;
    extend(0, emit);
  }

 private:
  void extend(std::size_t i, const std::function<bool(const std::vector<std::size_t>&)>& emit) {
    if (stop_) return;
    if (i == image_.size()) {
      if (!emit(image_)) stop_ = true;
      return;
    }
    for (std::size_t j : candidates_[i]) {
      if (used_[j]) continue;
      bool ok = true;
      for (std::size_t p = 0; p < i && ok; ++p) ok = t_.source[i][p] == t_.target[j][image_[p]];
      if (!ok) continue;
      used_[j] = true;
      image_[i] = j;
      extend(i + 1, emit);
      used_[j] = false;
      if (stop_) return;
    }
  }

  DistanceTables t_;
  std::vector<std::vector<std::size_t>> candidates_;
  std::vector<bool> used_;
  std::vector<std::size_t> image_;
  bool stop_ = false;
};

inline std::vector<int> sorted_row(const std::vector<std::vector<int>>& m, std::size_t i) {
  std::vector<int> row;
  row.reserve(m.size());
  for (std::size_t j = 0; j < m.size(); ++j)
    if (j != i) row.push_back(m[i][j]);
  std::sort(row.begin(), row.end());
  return row;
}

}  // namespace detail

// Distance-preserving bijection A -> A2 under `norm`, or nullopt. The two
// configurations may live in different ambient dimensions.
inline std::optional<IsometryWitness> is_isometric_copy(const PointConfig& a, const PointConfig& a2, Norm norm) {
  if (a.size() != a2.size()) return std::nullopt;
  auto tables = detail::intern_distances(a, a2, norm);
  // A point can only map to a point with the same multiset of distances.
  std::vector<std::vector<std::size_t>> candidates(a.size());
  std::vector<std::vector<int>> target_rows;
  for (std::size_t j = 0; j < a2.size(); ++j) target_rows.push_back(detail::sorted_row(tables.target, j));
  for (std::size_t i = 0; i < a.size(); ++i) {
    auto row = detail::sorted_row(tables.source, i);
    for (std::size_t j = 0; j < a2.size(); ++j)
      if (target_rows[j] == row) candidates[i].push_back(j);
    if (candidates[i].empty()) return std::nullopt;
  }
  std::optional<IsometryWitness> found;
  detail::InjectionMatcher matcher(std::move(tables), std::move(candidates));
  matcher.run([&](const std::vector<std::size_t>& image) {
    found = IsometryWitness{image};
    return false;
  });
  return found;
}

// True iff the given bijection preserves every pairwise distance.
inline bool check_witness(const PointConfig& a, const PointConfig& s, const IsometryWitness& w, Norm norm) {
  if (w.image.size() != a.size()) return false;
  std::vector<bool> seen(s.size(), false);
  for (std::size_t t : w.image) {
    if (t >= s.size() || seen[t]) return false;
    seen[t] = true;
  }
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = i + 1; j < a.size(); ++j)
      if (distance_key(a[i], a[j], norm) != distance_key(s[w.image[i]], s[w.image[j]], norm)) return false;
  return true;
}

// Every copy of A inside S. Witnesses with the same image set differ by a
// self-isometry of A, so each image set is reported once, with its
// lexicographically smallest bijection. Output is ordered by the sorted
// target indices of the image.
inline std::vector<IsometryWitness> enumerate_copies(const PointConfig& a, const PointConfig& s, Norm norm) {
  if (a.size() > s.size() || a.size() == 0) return {};
  auto tables = detail::intern_distances(a, s, norm);
  std::vector<std::vector<std::size_t>> candidates(a.size());
  for (auto& c : candidates)
    for (std::size_t j = 0; j < s.size(); ++j) c.push_back(j);
  std::map<std::vector<std::size_t>, std::vector<std::size_t>> by_image;
  detail::InjectionMatcher matcher(std::move(tables), std::move(candidates));
  matcher.run([&](const std::vector<std::size_t>& image) {
    auto key = image;
    std::sort(key.begin(), key.end());
    by_image.emplace(std::move(key), image);
    return true;
  });
  std::vector<IsometryWitness> out;
  out.reserve(by_image.size());
  for (auto& [key, image] : by_image) out.push_back(IsometryWitness{image});
  return out;
}

// The image of a witness as a configuration, in source order and carrying the
// target labels.
inline PointConfig image_config(const PointConfig& s, const IsometryWitness& w) {
  PointConfig out(s.dim(), s.norm());
  for (std::size_t t : w.image) out.add(s.label(t), s[t]);
  return out;
}

// A^d as a d-dimensional configuration, tuples in lexicographic order.
inline PointConfig cartesian_power(const std::vector<Rational>& values, std::size_t d, Norm norm) {
  PointConfig out(d, norm);
  std::vector<std::size_t> idx(d, 0);
  if (values.empty()) return out;
  while (true) {
    std::vector<Rational> coords;
    for (std::size_t i : idx) coords.push_back(values[i]);
    out.add(Point(std::move(coords)));
    std::size_t pos = d;
    while (pos > 0) {
      --pos;
      if (++idx[pos] < values.size()) break;
      idx[pos] = 0;
      if (pos == 0) return out;
    }
  }
}

}  // namespace ramsey_wb
