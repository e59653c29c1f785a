#pragma once

#include <cstddef>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "ramsey_wb/errors.hpp"
#include "ramsey_wb/geometry.hpp"

namespace ramsey_wb {

// [n_1] x ... x [n_d]. Internally coordinates are 0-based; text formats use
// 1-based values. Cells are ranked lexicographically, first factor most
// significant.
class ProductSpace {
 public:
  explicit ProductSpace(std::vector<int> sizes) : sizes_(std::move(sizes)) {
    if (sizes_.empty()) throw RangeError("product space needs at least one factor");
    cells_ = 1;
    for (int n : sizes_) {
      if (n < 2) throw RangeError("every factor needs size >= 2");
      if (cells_ > std::numeric_limits<std::size_t>::max() / static_cast<std::size_t>(n))
        throw ResourceError("product space too large");
      cells_ *= static_cast<std::size_t>(n);
    }
  }

  const std::vector<int>& sizes() const noexcept { return sizes_; }
  std::size_t factors() const noexcept { return sizes_.size(); }
  std::size_t cells() const noexcept { return cells_; }

  std::size_t rank(const std::vector<int>& x) const {
    if (x.size() != sizes_.size()) throw DimensionError("cell has wrong number of coordinates");
    std::size_t r = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i] < 0 || x[i] >= sizes_[i]) throw RangeError("cell coordinate out of range");
      r = r * static_cast<std::size_t>(sizes_[i]) + static_cast<std::size_t>(x[i]);
    }
    return r;
  }

  std::vector<int> unrank(std::size_t r) const {
    std::vector<int> x(sizes_.size());
    for (std::size_t i = sizes_.size(); i-- > 0;) {
      x[i] = static_cast<int>(r % static_cast<std::size_t>(sizes_[i]));
      r /= static_cast<std::size_t>(sizes_[i]);
    }
    return x;
  }

  // "1,2,3" style label of a cell (1-based).
  std::string label(std::size_t r) const {
    auto x = unrank(r);
    std::string s;
    for (std::size_t i = 0; i < x.size(); ++i) s += (i ? "," : "") + std::to_string(x[i] + 1);
    return s;
  }

  std::size_t parse_label(const std::string& text) const {
    std::vector<int> x;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        x.push_back(std::stoi(item) - 1);
      } catch (const std::exception&) {
        throw ParseError("bad cell label '" + text + "'");
      }
    }
    try {
      return rank(x);
    } catch (const Error& e) {
      throw ParseError("bad cell label '" + text + "': " + e.what());
    }
  }

  // "2,2,3"
  std::string id() const {
    std::string s;
    for (std::size_t i = 0; i < sizes_.size(); ++i) s += (i ? "," : "") + std::to_string(sizes_[i]);
    return s;
  }

  // Dimension of the affine hull of the simplex-product embedding:
  // sum of (n_i - 1).
  std::size_t affine_dimension() const {
    std::size_t d = 0;
    for (int n : sizes_) d += static_cast<std::size_t>(n - 1);
    return d;
  }

  // Cell -> concatenated standard basis vectors e_{x_1} | ... | e_{x_d}, a
  // point of R^{n_1 + ... + n_d}. Cells differing in j coordinates are at
  // squared l2 distance 2j.
  Point simplex_point(std::size_t r) const {
    auto x = unrank(r);
    std::vector<Rational> coords;
    for (std::size_t i = 0; i < sizes_.size(); ++i)
      for (int v = 0; v < sizes_[i]; ++v) coords.emplace_back(v == x[i] ? 1 : 0);
    return Point(std::move(coords));
  }

  friend bool operator==(const ProductSpace&, const ProductSpace&) = default;

 private:
  std::vector<int> sizes_;
  std::size_t cells_ = 1;
};

inline std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ParseError("bad integer '" + item + "' in list '" + text + "'");
    }
  }
  if (out.empty()) throw ParseError("empty list");
  return out;
}

// An axis-aligned box: factor i is selected iff a[i] != b[i]; unselected
// factors are fixed at a[i].
struct BoxCopy {
  std::vector<int> a;
  std::vector<int> b;

  std::vector<std::size_t> selected() const {
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < a.size(); ++i)
      if (a[i] != b[i]) s.push_back(i);
    return s;
  }

  std::size_t dimension() const { return selected().size(); }

  // Vertex t in [0, 2^j): bit (j-1-s) of t picks b on the s-th selected
  // factor. Order matches hypercube_config(j).
  std::vector<std::size_t> cells(const ProductSpace& space) const {
    auto sel = selected();
    std::size_t j = sel.size();
    std::vector<std::size_t> out;
    out.reserve(std::size_t{1} << j);
    for (std::size_t t = 0; t < (std::size_t{1} << j); ++t) {
      std::vector<int> x = a;
      for (std::size_t s = 0; s < j; ++s)
        if ((t >> (j - 1 - s)) & 1U) x[sel[s]] = b[sel[s]];
      out.push_back(space.rank(x));
    }
    return out;
  }

  friend bool operator==(const BoxCopy&, const BoxCopy&) = default;
};

// Vertices of I^j(2): each bit t becomes the coordinate pair (t, 1-t), so
// vertices differing in i bits are at squared distance 2i.
inline PointConfig hypercube_config(std::size_t j) {
  PointConfig out(std::max<std::size_t>(2 * j, 1), Norm::Euclidean);
  for (std::size_t t = 0; t < (std::size_t{1} << j); ++t) {
    std::vector<Rational> coords;
    for (std::size_t s = 0; s < j; ++s) {
      int bit = static_cast<int>((t >> (j - 1 - s)) & 1U);
      coords.emplace_back(bit);
      coords.emplace_back(1 - bit);
    }
    if (coords.empty()) coords.emplace_back(0);
    out.add(Point(std::move(coords)));
  }
  return out;
}

// Embedded box vertices, in BoxCopy::cells order.
inline PointConfig box_config(const ProductSpace& space, const BoxCopy& box) {
  std::size_t dim = 0;
  for (int n : space.sizes()) dim += static_cast<std::size_t>(n);
  PointConfig out(dim, Norm::Euclidean);
  for (std::size_t r : box.cells(space)) out.add(space.label(r), space.simplex_point(r));
  return out;
}

}  // namespace ramsey_wb
