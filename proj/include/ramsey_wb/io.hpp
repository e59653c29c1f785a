#pragma once

#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "ramsey_wb/coloring.hpp"
#include "ramsey_wb/errors.hpp"
#include "ramsey_wb/geometry.hpp"
#include "ramsey_wb/hales_jewett.hpp"
#include "ramsey_wb/product_space.hpp"
#include "ramsey_wb/rational.hpp"

// Line-based text formats. Blank lines and '#' comments are ignored; every
// parse error carries the 1-based line number.
namespace ramsey_wb::io {

struct Line {
  std::size_t number;
  std::vector<std::string> tokens;
};

inline std::vector<Line> tokenize(std::istream& in) {
  std::vector<Line> out;
  std::string text;
  std::size_t number = 0;
  while (std::getline(in, text)) {
    ++number;
    if (auto hash = text.find('#'); hash != std::string::npos) text.resize(hash);
    std::istringstream ss(text);
    Line line{number, {}};
    for (std::string tok; ss >> tok;) line.tokens.push_back(tok);
    if (!line.tokens.empty()) out.push_back(std::move(line));
  }
  return out;
}

inline long long parse_count(const std::string& s, std::size_t line) {
  try {
    std::size_t used = 0;
    long long v = std::stoll(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError("expected an integer, got '" + s + "'", line);
  }
}

inline Rational parse_coord(const std::string& s, std::size_t line) {
  try {
    return parse_rational(s);
  } catch (const Error& e) {
    throw ParseError(std::string("bad coordinate: ") + e.what(), line);
  }
}

inline const Line& header(const std::vector<Line>& lines, const std::string& keyword, std::size_t arity) {
  if (lines.empty()) throw ParseError("empty file, expected '" + keyword + "' header", 1);
  const Line& h = lines.front();
  if (h.tokens[0] != keyword || h.tokens.size() != arity + 1)
    throw ParseError("expected header '" + keyword + "' with " + std::to_string(arity) + " fields", h.number);
  return h;
}

// ---------------------------------------------------------------------------
// config <dim> <norm>
// <label> <coord_1> ... <coord_dim>

inline PointConfig read_config_lines(const std::vector<Line>& lines, std::size_t begin, std::size_t end,
                                     std::size_t dim, Norm norm) {
  PointConfig cfg(dim, norm);
  for (std::size_t i = begin; i < end; ++i) {
    const Line& l = lines[i];
    if (l.tokens.size() != dim + 1)
      throw ParseError("expected a label and " + std::to_string(dim) + " coordinates", l.number);
    std::vector<Rational> coords;
    for (std::size_t t = 1; t < l.tokens.size(); ++t) coords.push_back(parse_coord(l.tokens[t], l.number));
    try {
      cfg.add(l.tokens[0], Point(std::move(coords)));
    } catch (const Error& e) {
      throw ParseError(e.what(), l.number);
    }
  }
  return cfg;
}

inline std::pair<std::size_t, Norm> parse_dim_norm(const Line& h, std::size_t dim_tok, std::size_t norm_tok) {
  long long dim = parse_count(h.tokens[dim_tok], h.number);
  if (dim < 1) throw ParseError("dimension must be positive", h.number);
  try {
    return {static_cast<std::size_t>(dim), parse_norm(h.tokens[norm_tok])};
  } catch (const Error& e) {
    throw ParseError(e.what(), h.number);
  }
}

inline PointConfig read_config(std::istream& in) {
  auto lines = tokenize(in);
  const Line& h = header(lines, "config", 2);
  auto [dim, norm] = parse_dim_norm(h, 1, 2);
  return read_config_lines(lines, 1, lines.size(), dim, norm);
}

inline void write_points(std::ostream& out, const PointConfig& cfg) {
  for (std::size_t i = 0; i < cfg.size(); ++i) {
    out << cfg.label(i);
    for (const auto& c : cfg[i].coords) out << ' ' << to_string(c);
    out << '\n';
  }
}

inline void write_config(std::ostream& out, const PointConfig& cfg) {
  out << "config " << cfg.dim() << ' ' << norm_name(cfg.norm()) << '\n';
  write_points(out, cfg);
}

// ---------------------------------------------------------------------------
// coloring <space-id>
// <cell-label> <color-id>

struct LabeledColoring {
  std::string space_id;
  std::vector<std::pair<std::string, Color>> entries;
  std::vector<std::size_t> line_numbers;
};

inline LabeledColoring read_labeled_coloring(std::istream& in) {
  auto lines = tokenize(in);
  const Line& h = header(lines, "coloring", 1);
  LabeledColoring out;
  out.space_id = h.tokens[1];
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const Line& l = lines[i];
    if (l.tokens.size() != 2) throw ParseError("expected '<cell-label> <color-id>'", l.number);
    long long c = parse_count(l.tokens[1], l.number);
    if (c < 0) throw ParseError("color ids are nonnegative", l.number);
    out.entries.emplace_back(l.tokens[0], static_cast<Color>(c));
    out.line_numbers.push_back(l.number);
  }
  return out;
}

// Resolves labels against an indexing function; every cell exactly once.
template <class IndexOf>
Coloring resolve_coloring(const LabeledColoring& lc, std::size_t cells, IndexOf index_of) {
  std::vector<Color> colors(cells, -1);
  for (std::size_t i = 0; i < lc.entries.size(); ++i) {
    const auto& [label, color] = lc.entries[i];
    std::size_t line = lc.line_numbers[i];
    std::size_t r;
    try {
      r = index_of(label);
    } catch (const Error& e) {
      throw ParseError(e.what(), line);
    }
    if (colors[r] != -1) throw ParseError("cell '" + label + "' colored twice", line);
    colors[r] = color;
  }
  for (std::size_t r = 0; r < cells; ++r)
    if (colors[r] == -1) throw ParseError("coloring misses " + std::to_string(cells - lc.entries.size()) + " cells", 0);
  return Coloring(std::move(colors));
}

inline std::pair<ProductSpace, Coloring> read_product_coloring(std::istream& in) {
  auto lc = read_labeled_coloring(in);
  ProductSpace space = [&] {
    try {
      return ProductSpace(parse_int_list(lc.space_id));
    } catch (const Error& e) {
      throw ParseError(std::string("bad space id: ") + e.what(), 1);
    }
  }();
  Coloring c = resolve_coloring(lc, space.cells(), [&](const std::string& s) { return space.parse_label(s); });
  return {space, c};
}

inline Coloring read_config_coloring(std::istream& in, const PointConfig& cfg) {
  auto lc = read_labeled_coloring(in);
  return resolve_coloring(lc, cfg.size(), [&](const std::string& s) {
    auto i = cfg.index_of(s);
    if (!i) throw DomainError("unknown point label '" + s + "'");
    return *i;
  });
}

inline void write_product_coloring(std::ostream& out, const ProductSpace& space, const Coloring& c) {
  out << "coloring " << space.id() << '\n';
  for (std::size_t r = 0; r < space.cells(); ++r) out << space.label(r) << ' ' << c[r] << '\n';
}

inline void write_config_coloring(std::ostream& out, const PointConfig& cfg, const Coloring& c) {
  out << "coloring points\n";
  for (std::size_t i = 0; i < cfg.size(); ++i) out << cfg.label(i) << ' ' << c[i] << '\n';
}

// ---------------------------------------------------------------------------
// grid <k> <n>
// <i1,...,in> <color-id>

struct GridColoring {
  int k = 0;
  int n = 0;
  Coloring coloring;
};

inline GridColoring read_grid(std::istream& in) {
  auto lines = tokenize(in);
  const Line& h = header(lines, "grid", 2);
  GridColoring g;
  g.k = static_cast<int>(parse_count(h.tokens[1], h.number));
  g.n = static_cast<int>(parse_count(h.tokens[2], h.number));
  if (g.k < 1 || g.n < 1) throw ParseError("grid needs k >= 1 and n >= 1", h.number);
  std::size_t cells;
  try {
    cells = hj::checked_power(static_cast<std::size_t>(g.k), static_cast<std::size_t>(g.n));
  } catch (const Error& e) {
    throw ParseError(e.what(), h.number);
  }
  LabeledColoring lc;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const Line& l = lines[i];
    if (l.tokens.size() != 2) throw ParseError("expected '<i1,...,in> <color-id>'", l.number);
    long long c = parse_count(l.tokens[1], l.number);
    if (c < 0) throw ParseError("color ids are nonnegative", l.number);
    lc.entries.emplace_back(l.tokens[0], static_cast<Color>(c));
    lc.line_numbers.push_back(l.number);
  }
  g.coloring = resolve_coloring(lc, cells, [&](const std::string& s) {
    hj::Cell x;
    std::stringstream ss(s);
    for (std::string item; std::getline(ss, item, ',');) {
      try {
        x.push_back(std::stoi(item));
      } catch (const std::exception&) {
        throw DomainError("bad cell '" + s + "'");
      }
    }
    if (static_cast<int>(x.size()) != g.n) throw DomainError("cell '" + s + "' has the wrong length");
    return hj::cell_rank(x, g.k);
  });
  return g;
}

inline void write_grid(std::ostream& out, int k, int n, const Coloring& c) {
  out << "grid " << k << ' ' << n << '\n';
  for (std::size_t r = 0; r < c.size(); ++r) {
    auto x = hj::cell_unrank(r, k, n);
    std::string s;
    for (std::size_t i = 0; i < x.size(); ++i) s += (i ? "," : "") + std::to_string(x[i]);
    out << s << ' ' << c[r] << '\n';
  }
}

// ---------------------------------------------------------------------------
// Copy witness:
//   witness <MONOCHROMATIC|RAINBOW|OTHER> <norm>
//   source <dim>
//   <label> <coords...>        (one row per point of A)
//   image <dim>
//   <label> <color> <coords...> (row i is the image of source row i)

struct CopyWitness {
  CopyClass verdict = CopyClass::Other;
  Norm norm = Norm::Euclidean;
  PointConfig source{1, Norm::Euclidean};
  PointConfig image{1, Norm::Euclidean};
  std::vector<Color> colors;
};

inline void write_copy_witness(std::ostream& out, const CopyWitness& w) {
  out << "witness " << copy_class_name(w.verdict) << ' ' << norm_name(w.norm) << '\n';
  out << "source " << w.source.dim() << '\n';
  write_points(out, w.source);
  out << "image " << w.image.dim() << '\n';
  for (std::size_t i = 0; i < w.image.size(); ++i) {
    out << w.image.label(i) << ' ' << w.colors[i];
    for (const auto& c : w.image[i].coords) out << ' ' << to_string(c);
    out << '\n';
  }
}

inline CopyWitness read_copy_witness(std::istream& in) {
  auto lines = tokenize(in);
  const Line& h = header(lines, "witness", 2);
  CopyWitness w;
  try {
    w.verdict = parse_copy_class(h.tokens[1]);
    w.norm = parse_norm(h.tokens[2]);
  } catch (const Error& e) {
    throw ParseError(e.what(), h.number);
  }
  std::size_t img = 0;
  for (std::size_t i = 1; i < lines.size(); ++i)
    if (lines[i].tokens[0] == "image" && lines[i].tokens.size() == 2) img = i;
  if (lines.size() < 2 || lines[1].tokens[0] != "source" || lines[1].tokens.size() != 2)
    throw ParseError("expected 'source <dim>'", lines.size() < 2 ? h.number + 1 : lines[1].number);
  if (img == 0) throw ParseError("missing 'image <dim>' section", lines.back().number);
  long long sdim = parse_count(lines[1].tokens[1], lines[1].number);
  long long idim = parse_count(lines[img].tokens[1], lines[img].number);
  if (sdim < 1 || idim < 1) throw ParseError("dimensions must be positive", lines[img].number);
  w.source = read_config_lines(lines, 2, img, static_cast<std::size_t>(sdim), w.norm);
  w.image = PointConfig(static_cast<std::size_t>(idim), w.norm);
  for (std::size_t i = img + 1; i < lines.size(); ++i) {
    const Line& l = lines[i];
    if (l.tokens.size() != static_cast<std::size_t>(idim) + 2)
      throw ParseError("expected a label, a color and " + std::to_string(idim) + " coordinates", l.number);
    long long c = parse_count(l.tokens[1], l.number);
    std::vector<Rational> coords;
    for (std::size_t t = 2; t < l.tokens.size(); ++t) coords.push_back(parse_coord(l.tokens[t], l.number));
    try {
      w.image.add(l.tokens[0], Point(std::move(coords)));
    } catch (const Error& e) {
      throw ParseError(e.what(), l.number);
    }
    w.colors.push_back(static_cast<Color>(c));
  }
  return w;
}

}  // namespace ramsey_wb::io
