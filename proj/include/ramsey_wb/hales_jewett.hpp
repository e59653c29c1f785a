#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "ramsey_wb/coloring.hpp"
#include "ramsey_wb/errors.hpp"
#include "ramsey_wb/partition_search.hpp"
#include "ramsey_wb/rational.hpp"

namespace ramsey_wb::hj {

// A cell of [k]^n, coordinates 1-based.
using Cell = std::vector<int>;

inline std::size_t checked_power(std::size_t base, std::size_t exp) {
  std::size_t v = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (base != 0 && v > std::numeric_limits<std::size_t>::max() / base) throw ResourceError("grid size overflows");
    v *= base;
  }
  return v;
}

// Cells of [k]^n are ranked lexicographically, first coordinate most
// significant: (1,...,1) -> 0, (k,...,k) -> k^n - 1.
inline std::size_t cell_rank(const Cell& x, int k) {
  std::size_t r = 0;
  for (int v : x) {
    if (v < 1 || v > k) throw RangeError("coordinate " + std::to_string(v) + " outside [1," + std::to_string(k) + "]");
    r = r * static_cast<std::size_t>(k) + static_cast<std::size_t>(v - 1);
  }
  return r;
}

inline Cell cell_unrank(std::size_t r, int k, int n) {
  Cell x(static_cast<std::size_t>(n));
  for (int i = n - 1; i >= 0; --i) {
    x[static_cast<std::size_t>(i)] = static_cast<int>(r % static_cast<std::size_t>(k)) + 1;
    r /= static_cast<std::size_t>(k);
  }
  return x;
}

inline std::string cell_to_string(const Cell& x) {
  std::string s;
  for (std::size_t i = 0; i < x.size(); ++i) s += (i ? "," : "") + std::to_string(x[i]);
  return s;
}

// An element of ([k] ∪ {*_1..*_m})^n. Entries > 0 are constants; entry -j
// stands for the variable *_j. Every variable occurs at least once.
class Template {
 public:
  Template(int k, int m, std::vector<int> entries) : k_(k), m_(m), entries_(std::move(entries)) {
    if (k < 1 || m < 1) throw RangeError("template needs k >= 1 and m >= 1");
    std::vector<bool> seen(static_cast<std::size_t>(m), false);
    for (int e : entries_) {
      if (e > 0 && e > k) throw RangeError("template constant " + std::to_string(e) + " exceeds k");
      if (e == 0 || -e > m) throw RangeError("invalid template entry " + std::to_string(e));
      if (e < 0) seen[static_cast<std::size_t>(-e - 1)] = true;
    }
    for (int j = 0; j < m; ++j)
      if (!seen[static_cast<std::size_t>(j)])
        throw PatternError("variable *" + std::to_string(j + 1) + " does not occur in the template");
  }

  int k() const noexcept { return k_; }
  int m() const noexcept { return m_; }
  int n() const noexcept { return static_cast<int>(entries_.size()); }
  const std::vector<int>& entries() const noexcept { return entries_; }

  // Replaces every *_j by values[j-1].
  Cell instantiate(const std::vector<int>& values) const {
    if (values.size() != static_cast<std::size_t>(m_))
      throw RangeError("expected " + std::to_string(m_) + " variable values");
    for (int v : values)
      if (v < 1 || v > k_) throw RangeError("variable value " + std::to_string(v) + " outside [k]");
    Cell x;
    x.reserve(entries_.size());
    for (int e : entries_) x.push_back(e > 0 ? e : values[static_cast<std::size_t>(-e - 1)]);
    return x;
  }

  // Ranks (in [k]^n) of the k^m subspace points, listed in lexicographic
  // order of the variable values (i_1, ..., i_m).
  std::vector<std::size_t> point_ranks() const {
    std::size_t count = checked_power(static_cast<std::size_t>(k_), static_cast<std::size_t>(m_));
    std::vector<std::size_t> out;
    out.reserve(count);
    for (std::size_t r = 0; r < count; ++r) out.push_back(cell_rank(instantiate(cell_unrank(r, k_, m_)), k_));
    return out;
  }

  std::vector<Cell> points() const {
    std::vector<Cell> out;
    for (std::size_t r : point_ranks()) out.push_back(cell_unrank(r, k_, n()));
    return out;
  }

  // Variables renumbered by first occurrence; same point set.
  Template canonical() const {
    std::vector<int> relabel(static_cast<std::size_t>(m_), 0);
    int next = 0;
    std::vector<int> out = entries_;
    for (int& e : out) {
      if (e > 0) continue;
      int& r = relabel[static_cast<std::size_t>(-e - 1)];
      if (r == 0) r = ++next;
      e = -r;
    }
    return Template(k_, m_, std::move(out));
  }

  bool is_canonical() const { return canonical() == *this; }

  std::string to_string() const {
    std::string s = "(";
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      if (i) s += ",";
      s += entries_[i] > 0 ? std::to_string(entries_[i]) : "*" + std::to_string(-entries_[i]);
    }
    return s + ")";
  }

  friend bool operator==(const Template&, const Template&) = default;

 private:
  int k_;
  int m_;
  std::vector<int> entries_;
};

// Number of templates: sum_j (-1)^j C(m,j) (k+m-j)^n.
inline BigInt template_count(int k, int n, int m) {
  BigInt total = 0;
  BigInt binom = 1;
  for (int j = 0; j <= m; ++j) {
    BigInt term = binom * boost::multiprecision::pow(BigInt(k + m - j), static_cast<unsigned>(n));
    total += (j % 2 == 0) ? term : BigInt(-term);
    binom = binom * (m - j) / (j + 1);
  }
  return total;
}

// Calls fn for every valid template, ordered lexicographically over the
// alphabet *_1 < ... < *_m < 1 < ... < k. With canonical_only, only templates
// whose variables first occur in the order *_1, *_2, ... are produced (one
// per subspace parameterization class). fn returns false to stop.
inline void for_each_template(int k, int n, int m, bool canonical_only,
                              const std::function<bool(const Template&)>& fn) {
  if (k < 1 || n < 1 || m < 1) throw RangeError("k, n, m must be positive");
  std::vector<int> entries(static_cast<std::size_t>(n));
  std::vector<int> counts(static_cast<std::size_t>(m) + 1, 0);
  bool stop = false;
  // symbol s in [0, m+k): s < m is variable *_(s+1), else constant s-m+1.
  std::function<void(int, int)> rec = [&](int pos, int max_var) {
    if (stop) return;
    int remaining = n - pos;
    int missing = 0;
    for (int j = 1; j <= m; ++j) missing += counts[static_cast<std::size_t>(j)] == 0;
    if (canonical_only) missing = m - max_var;
    if (missing > remaining) return;
    if (pos == n) {
      if (!fn(Template(k, m, entries))) stop = true;
      return;
    }
    for (int s = 0; s < m + k && !stop; ++s) {
      if (s < m) {
        int var = s + 1;
        if (canonical_only && var > max_var + 1) continue;
        entries[static_cast<std::size_t>(pos)] = -var;
        ++counts[static_cast<std::size_t>(var)];
        rec(pos + 1, std::max(max_var, var));
        --counts[static_cast<std::size_t>(var)];
      } else {
        entries[static_cast<std::size_t>(pos)] = s - m + 1;
        rec(pos + 1, max_var);
      }
    }
  };
  rec(0, 0);
}

inline std::vector<Template> enumerate_templates(int k, int n, int m, bool canonical_only = false) {
  std::vector<Template> out;
  for_each_template(k, n, m, canonical_only, [&](const Template& t) {
    out.push_back(t);
    return true;
  });
  return out;
}

// Equivalence relation on [k], stored as restricted-growth block ids.
class EquivRelation {
 public:
  // block_labels[i-1] is any label for the block of i; equal labels mean
  // equivalent elements.
  explicit EquivRelation(const std::vector<Color>& block_labels) {
    if (block_labels.empty()) throw RangeError("relation on an empty set");
    std::unordered_map<Color, int> relabel;
    for (Color c : block_labels) {
      auto [it, fresh] = relabel.emplace(c, static_cast<int>(relabel.size()));
      block_.push_back(it->second);
    }
    blocks_ = static_cast<int>(relabel.size());
  }

  static EquivRelation full(int k) { return EquivRelation(std::vector<Color>(static_cast<std::size_t>(k), 0)); }
  static EquivRelation discrete(int k) {
    std::vector<Color> v;
    for (int i = 0; i < k; ++i) v.push_back(i);
    return EquivRelation(v);
  }

  // Parses blocks such as "1,2/3" (slash separates blocks).
  static EquivRelation parse(const std::string& text, int k) {
    std::vector<Color> labels(static_cast<std::size_t>(k), -1);
    std::stringstream blocks(text);
    std::string block;
    Color id = 0;
    while (std::getline(blocks, block, '/')) {
      std::stringstream items(block);
      std::string item;
      while (std::getline(items, item, ',')) {
        int v = std::stoi(item);
        if (v < 1 || v > k || labels[static_cast<std::size_t>(v - 1)] != -1)
          throw ParseError("bad relation element '" + item + "'");
        labels[static_cast<std::size_t>(v - 1)] = id;
      }
      ++id;
    }
    for (Color c : labels)
      if (c == -1) throw ParseError("relation does not cover [k]");
    return EquivRelation(labels);
  }

  int k() const noexcept { return static_cast<int>(block_.size()); }
  int num_blocks() const noexcept { return blocks_; }
  // 0-based block id of i in [k].
  int block_of(int i) const {
    if (i < 1 || i > k()) throw RangeError("element " + std::to_string(i) + " outside [k]");
    return block_[static_cast<std::size_t>(i - 1)];
  }
  bool equivalent(int i, int j) const { return block_of(i) == block_of(j); }
  bool is_full() const noexcept { return blocks_ == 1; }
  bool is_discrete() const noexcept { return blocks_ == k(); }
  bool is_trivial() const noexcept { return is_full() || is_discrete(); }

  std::vector<std::vector<int>> blocks() const {
    std::vector<std::vector<int>> out(static_cast<std::size_t>(blocks_));
    for (int i = 1; i <= k(); ++i) out[static_cast<std::size_t>(block_of(i))].push_back(i);
    return out;
  }

  // Smallest i' with i' not equivalent to i'+1.
  std::optional<int> first_adjacent_split() const {
    for (int i = 1; i < k(); ++i)
      if (!equivalent(i, i + 1)) return i;
    return std::nullopt;
  }

  std::string to_string() const {
    std::string s;
    for (const auto& b : blocks()) {
      s += "{";
      for (std::size_t i = 0; i < b.size(); ++i) s += (i ? "," : "") + std::to_string(b[i]);
      s += "}";
    }
    return s;
  }

  friend bool operator==(const EquivRelation&, const EquivRelation&) = default;

 private:
  std::vector<int> block_;
  int blocks_ = 0;
};

// Every equivalence relation on [k] (Bell(k) of them).
inline std::vector<EquivRelation> all_relations(int k) {
  std::vector<EquivRelation> out;
  std::vector<Color> rgs(static_cast<std::size_t>(k), 0);
  std::function<void(int, Color)> rec = [&](int i, Color used) {
    if (i == k) {
      out.emplace_back(rgs);
      return;
    }
    for (Color c = 0; c <= used; ++c) {
      rgs[static_cast<std::size_t>(i)] = c;
      rec(i + 1, std::max(used, c + 1));
    }
  };
  if (k >= 1) {
    rgs[0] = 0;
    rec(1, 1);
  }
  return out;
}

// c_~ on [k]^n: cells share a color iff they are coordinatewise equivalent.
// The color of x is the mixed-radix number formed by the block ids of x.
inline Coloring c_sim_coloring(const EquivRelation& rel, int n) {
  const int k = rel.k();
  std::size_t cells = checked_power(static_cast<std::size_t>(k), static_cast<std::size_t>(n));
  std::vector<Color> colors(cells);
  for (std::size_t r = 0; r < cells; ++r) {
    Cell x = cell_unrank(r, k, n);
    Color c = 0;
    for (int v : x) c = c * rel.num_blocks() + rel.block_of(v);
    colors[r] = c;
  }
  return Coloring(std::move(colors));
}

// The relation ~ with colors == c_~ on [k]^m (cells in rank order), if any.
// The candidate is read off the line (i, 1, ..., 1); the product law is then
// checked by requiring block-vector <-> color to be a bijection.
inline std::optional<EquivRelation> canonical_pattern(std::span<const Color> colors, int k, int m) {
  std::size_t cells = checked_power(static_cast<std::size_t>(k), static_cast<std::size_t>(m));
  if (colors.size() != cells) throw DomainError("subspace coloring must cover all k^m cells");
  std::size_t stride = cells / static_cast<std::size_t>(k);
  std::vector<Color> line;
  for (int i = 0; i < k; ++i) line.push_back(colors[static_cast<std::size_t>(i) * stride]);
  EquivRelation rel(line);
  std::unordered_map<std::uint64_t, Color> color_of_code;
  std::unordered_map<Color, std::uint64_t> code_of_color;
  for (std::size_t r = 0; r < cells; ++r) {
    std::uint64_t code = 0;
    for (int v : cell_unrank(r, k, m))
      code = code * static_cast<std::uint64_t>(rel.num_blocks()) + static_cast<std::uint64_t>(rel.block_of(v));
    auto [a, fresh_a] = color_of_code.emplace(code, colors[r]);
    if (a->second != colors[r]) return std::nullopt;
    auto [b, fresh_b] = code_of_color.emplace(colors[r], code);
    if (b->second != code) return std::nullopt;
  }
  return rel;
}

struct CanonicalSubspace {
  Template tmpl;
  EquivRelation relation;
};

// Scans canonical templates in order; returns the first m-subspace whose
// induced coloring is some c_~.
inline std::optional<CanonicalSubspace> find_canonical_subspace(const Coloring& coloring, int k, int n, int m) {
  if (coloring.size() != checked_power(static_cast<std::size_t>(k), static_cast<std::size_t>(n)))
    throw DomainError("coloring must cover [k]^n");
  std::optional<CanonicalSubspace> found;
  std::vector<Color> sub;
  for_each_template(k, n, m, true, [&](const Template& t) {
    sub.clear();
    for (std::size_t r : t.point_ranks()) sub.push_back(coloring[r]);
    if (auto rel = canonical_pattern(sub, k, m)) {
      found = CanonicalSubspace{t, *rel};
      return false;
    }
    return true;
  });
  return found;
}

struct HjVerdict {
  // True when every partition of [k]^n has a c_~-patterned m-subspace.
  bool arrow_holds = false;
  std::optional<Coloring> avoiding;
  std::uint64_t nodes = 0;
};

inline constexpr std::size_t kDefaultHjCellCap = 16;

// Decides whether some coloring of [k]^n (any number of colors) avoids every
// c_~-patterned m-subspace, by backtracking over set partitions of the cells
// in lexicographic order.
inline HjVerdict canonical_hj_search(int k, int m, int n, std::size_t cap = kDefaultHjCellCap, std::size_t jobs = 1) {
  if (k < 1 || m < 1 || n < 1) throw RangeError("k, m, n must be positive");
  std::size_t cells = checked_power(static_cast<std::size_t>(k), static_cast<std::size_t>(n));
  if (cells > cap)
    throw ResourceError("[k]^n has " + std::to_string(cells) + " cells, above the cap of " + std::to_string(cap));
  std::vector<std::vector<std::size_t>> edges;
  for (const auto& t : enumerate_templates(k, n, m, true)) edges.push_back(t.point_ranks());
  auto patterned = [k, m](std::size_t, std::span<const Color> colors) {
    return canonical_pattern(colors, k, m).has_value();
  };
  PartitionSearchOptions opt;
  opt.jobs = jobs;
  auto res = search_partitions(cells, std::move(edges), patterned, opt);
  HjVerdict v;
  v.nodes = res.nodes;
  v.arrow_holds = !res.witness.has_value();
  v.avoiding = std::move(res.witness);
  return v;
}

}  // namespace ramsey_wb::hj
