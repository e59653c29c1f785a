#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <variant>
#include <vector>

#include "ramsey_wb/errors.hpp"
#include "ramsey_wb/geometry.hpp"

namespace ramsey_wb {

using Color = std::int64_t;

// A partition of cells {0, ..., size()-1} into color classes. Color ids are
// opaque; only equality between them matters.
class Coloring {
 public:
  Coloring() = default;
  explicit Coloring(std::vector<Color> colors) : colors_(std::move(colors)) {}

  std::size_t size() const noexcept { return colors_.size(); }
  const std::vector<Color>& colors() const noexcept { return colors_; }

  Color operator[](std::size_t cell) const {
    if (cell >= colors_.size())
      throw DomainError("cell " + std::to_string(cell) + " outside coloring domain of size " +
                        std::to_string(colors_.size()));
    return colors_[cell];
  }

  std::size_t num_colors() const {
    std::unordered_set<Color> distinct(colors_.begin(), colors_.end());
    return distinct.size();
  }

  // Relabels classes 0, 1, 2, ... by first occurrence.
  Coloring normalized() const {
    std::unordered_map<Color, Color> relabel;
    std::vector<Color> out;
    out.reserve(colors_.size());
    for (Color c : colors_) {
      auto [it, fresh] = relabel.emplace(c, static_cast<Color>(relabel.size()));
      out.push_back(it->second);
    }
    return Coloring(std::move(out));
  }

  friend bool operator==(const Coloring&, const Coloring&) = default;

 private:
  std::vector<Color> colors_;
};

enum class CopyClass { Monochromatic, Rainbow, Other };

inline std::string_view copy_class_name(CopyClass c) {
  switch (c) {
    case CopyClass::Monochromatic: return "MONOCHROMATIC";
    case CopyClass::Rainbow: return "RAINBOW";
    case CopyClass::Other: return "OTHER";
  }
  return "?";
}

inline CopyClass parse_copy_class(std::string_view s) {
  if (s == "MONOCHROMATIC" || s == "mono") return CopyClass::Monochromatic;
  if (s == "RAINBOW" || s == "rainbow") return CopyClass::Rainbow;
  if (s == "OTHER" || s == "other") return CopyClass::Other;
  throw ParseError("unknown copy class '" + std::string(s) + "'");
}

// A single cell is reported monochromatic.
inline CopyClass classify_colors(std::span<const Color> colors) {
  bool mono = true;
  for (Color c : colors) mono = mono && c == colors.front();
  if (colors.empty() || mono) return CopyClass::Monochromatic;
  std::unordered_set<Color> distinct(colors.begin(), colors.end());
  return distinct.size() == colors.size() ? CopyClass::Rainbow : CopyClass::Other;
}

inline CopyClass classify(std::span<const std::size_t> cells, const Coloring& coloring) {
  std::vector<Color> colors;
  colors.reserve(cells.size());
  for (std::size_t c : cells) colors.push_back(coloring[c]);
  return classify_colors(colors);
}

struct ColoredCopy {
  IsometryWitness witness;
  CopyClass verdict;
};

// First copy of A in S (enumerate_copies order) that is monochromatic or
// rainbow under `coloring`.
inline std::optional<ColoredCopy> find_mono_or_rainbow(const PointConfig& s, const Coloring& coloring,
                                                       const PointConfig& a, Norm norm) {
  if (coloring.size() != s.size())
    throw DomainError("coloring covers " + std::to_string(coloring.size()) + " cells, space has " +
                      std::to_string(s.size()));
  for (auto& w : enumerate_copies(a, s, norm)) {
    CopyClass v = classify(w.image, coloring);
    if (v != CopyClass::Other) return ColoredCopy{std::move(w), v};
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Coloring oracles on R^d.

inline Color floor_mod(double x, Color q) {
  auto f = static_cast<Color>(std::floor(x));
  Color r = f % q;
  return r < 0 ? r + q : r;
}

// Alternating half-open strips [jh, (j+1)h) in the last coordinate.
struct StripOracle {
  double h;
};
// Same rule, intended for points of R^3 (slabs orthogonal to the z axis).
struct SlabOracle {
  double h;
};
// floor(alpha * |x|^2) mod q: concentric shells. No parameter set is claimed
// to avoid any particular configuration.
struct ShellOracle {
  double alpha;
  Color q;
};
// Exact-coordinate lookup with a fallback color.
struct TableOracle {
  std::map<std::vector<double>, Color> table;
  Color fallback = 0;
};
// floor of one coordinate.
struct FactorOracle {
  std::size_t axis;
};
// Sum of floored coordinates mod 2.
struct ParityOracle {};

class ColoringOracle {
 public:
  using Kind = std::variant<StripOracle, SlabOracle, ShellOracle, TableOracle, FactorOracle, ParityOracle>;

  ColoringOracle(Kind kind) : kind_(std::move(kind)) {}  // NOLINT(implicit)

  const Kind& kind() const noexcept { return kind_; }

  Color operator()(std::span<const double> x) const {
    if (x.empty()) throw DimensionError("oracle evaluated on a 0-dimensional point");
    return std::visit(
        [&](const auto& o) -> Color {
          using T = std::decay_t<decltype(o)>;
          if constexpr (std::is_same_v<T, StripOracle> || std::is_same_v<T, SlabOracle>) {
            return floor_mod(x.back() / o.h, 2);
          } else if constexpr (std::is_same_v<T, ShellOracle>) {
            double r2 = 0;
            for (double v : x) r2 += v * v;
            return floor_mod(o.alpha * r2, o.q);
          } else if constexpr (std::is_same_v<T, TableOracle>) {
            auto it = o.table.find(std::vector<double>(x.begin(), x.end()));
            return it == o.table.end() ? o.fallback : it->second;
          } else if constexpr (std::is_same_v<T, FactorOracle>) {
            if (o.axis >= x.size()) throw DimensionError("factor oracle axis out of range");
            return static_cast<Color>(std::floor(x[o.axis]));
          } else {
            Color s = 0;
            for (double v : x) s += static_cast<Color>(std::floor(v));
            return ((s % 2) + 2) % 2;
          }
        },
        kind_);
  }

  // Parses `strip:h=0.866`, `slab:h=0.866`, `shell:alpha=1,q=3`,
  // `table:default=0`, `factor:axis=0`, `parity`.
  static ColoringOracle parse(std::string_view spec) {
    auto colon = spec.find(':');
    std::string kind(spec.substr(0, colon));
    std::map<std::string, std::string> params;
    if (colon != std::string_view::npos) {
      std::stringstream ss{std::string(spec.substr(colon + 1))};
      std::string item;
      while (std::getline(ss, item, ',')) {
        auto eq = item.find('=');
        if (eq == std::string::npos) throw ParseError("oracle parameter '" + item + "' lacks '='");
        params[item.substr(0, eq)] = item.substr(eq + 1);
      }
    }
    auto num = [&](const std::string& key) -> double {
      auto it = params.find(key);
      if (it == params.end()) throw ParseError("oracle '" + kind + "' needs parameter '" + key + "'");
      return parse_real(it->second);
    };
    if (kind == "strip" || kind == "slab") {
      double h = num("h");
      if (!(h > 0)) throw ParseError("strip height must be positive");
      return kind == "strip" ? ColoringOracle(StripOracle{h}) : ColoringOracle(SlabOracle{h});
    }
    if (kind == "shell") {
      double q = num("q");
      if (q < 1) throw ParseError("shell modulus must be >= 1");
      return ColoringOracle(ShellOracle{num("alpha"), static_cast<Color>(q)});
    }
    if (kind == "table") {
      TableOracle t;
      if (params.count("default")) t.fallback = static_cast<Color>(num("default"));
      return ColoringOracle(t);
    }
    if (kind == "factor") return ColoringOracle(FactorOracle{static_cast<std::size_t>(num("axis"))});
    if (kind == "parity") return ColoringOracle(ParityOracle{});
    throw ParseError("unknown oracle kind '" + kind + "'");
  }

  // Reals in oracle parameters: decimals, p/q, or `sqrtN/D` style
  // expressions like `sqrt3/2`.
  static double parse_real(const std::string& s) {
    if (s.rfind("sqrt", 0) == 0) {
      auto rest = s.substr(4);
      auto slash = rest.find('/');
      double root = std::sqrt(to_double(parse_rational(rest.substr(0, slash))));
      if (slash == std::string::npos) return root;
      return root / to_double(parse_rational(rest.substr(slash + 1)));
    }
    return to_double(parse_rational(s));
  }

 private:
  Kind kind_;
};

// A monochromatic placement found by the sampler.
struct PlanarViolation {
  std::size_t trial;
  std::vector<std::array<double, 2>> points;
  Color color;
};

// Places A (dimension 1 or 2) `trials` times by a uniform random rotation and
// a uniform translation in [-box, box]^2 and reports the first placement
// whose points all receive the same oracle color. No violation is evidence,
// not proof.
inline std::optional<PlanarViolation> sample_verify_planar(const ColoringOracle& oracle, const PointConfig& a,
                                                           std::size_t trials, std::uint64_t seed,
                                                           double box = 50.0) {
  if (a.dim() > 2) throw DimensionError("planar sampler needs a configuration of dimension <= 2");
  std::vector<std::array<double, 2>> base;
  std::array<double, 2> centroid{0, 0};
  for (const auto& p : a.points()) {
    std::array<double, 2> q{to_double(p[0]), a.dim() == 2 ? to_double(p[1]) : 0.0};
    centroid[0] += q[0];
    centroid[1] += q[1];
    base.push_back(q);
  }
  if (base.empty()) return std::nullopt;
  for (auto& q : base) {
    q[0] -= centroid[0] / static_cast<double>(base.size());
    q[1] -= centroid[1] / static_cast<double>(base.size());
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(0.0, 2 * std::numbers::pi);
  std::uniform_real_distribution<double> shift(-box, box);
  std::vector<std::array<double, 2>> placed(base.size());
  for (std::size_t t = 0; t < trials; ++t) {
    double th = angle(rng);
    double tx = shift(rng), ty = shift(rng);
    double c = std::cos(th), s = std::sin(th);
    bool mono = true;
    Color first = 0;
    for (std::size_t i = 0; i < base.size(); ++i) {
      placed[i] = {c * base[i][0] - s * base[i][1] + tx, s * base[i][0] + c * base[i][1] + ty};
      Color col = oracle(placed[i]);
      if (i == 0) first = col;
      mono = mono && col == first;
    }
    if (mono) return PlanarViolation{t, placed, first};
  }
  return std::nullopt;
}

}  // namespace ramsey_wb
