#pragma once

#include <optional>
#include <string>

#include "ramsey_wb/arrow.hpp"
#include "ramsey_wb/coloring.hpp"
#include "ramsey_wb/geometry.hpp"
#include "ramsey_wb/hales_jewett.hpp"
#include "ramsey_wb/io.hpp"
#include "ramsey_wb/maxnorm.hpp"
#include "ramsey_wb/product_space.hpp"

// Re-checks of emitted witnesses that rely only on classify and the isometry
// matcher, never on the search that produced them.
namespace ramsey_wb::verify {

struct Report {
  bool ok = true;
  std::string message;

  static Report fail(std::string m) { return {false, std::move(m)}; }
};

inline Report copy_witness(const io::CopyWitness& w) {
  if (w.source.size() != w.image.size()) return Report::fail("source and image sizes differ");
  if (w.colors.size() != w.image.size()) return Report::fail("image rows lack colors");
  if (w.verdict == CopyClass::Other) return Report::fail("witness claims neither a monochromatic nor a rainbow copy");
  if (!is_isometric_copy(w.source, w.image, w.norm)) return Report::fail("image is not an isometric copy of the source");
  IsometryWitness rows;
  for (std::size_t i = 0; i < w.image.size(); ++i) rows.image.push_back(i);
  if (!check_witness(w.source, w.image, rows, w.norm)) return Report::fail("row bijection does not preserve distances");
  CopyClass got = classify_colors(w.colors);
  if (got != w.verdict)
    return Report::fail("image colors classify as " + std::string(copy_class_name(got)) + ", witness claims " +
                        std::string(copy_class_name(w.verdict)));
  return {true, "ok: " + std::string(copy_class_name(got)) + " copy of " + std::to_string(w.source.size()) + " points"};
}

inline Report avoiding_arrow(const arrow::ArrowQuery& q, const Coloring& c) {
  if (c.size() != q.space.cells()) return Report::fail("coloring does not cover the space");
  if (q.palette && c.num_colors() > *q.palette) return Report::fail("coloring uses more colors than the palette");
  if (auto bad = arrow::first_violation(q, c)) {
    std::string cells;
    for (std::size_t r : bad->cells(q.space)) cells += " (" + q.space.label(r) + ")";
    return Report::fail("target copy" + cells + " is monochromatic or rainbow");
  }
  return {true, "ok: every target copy is neither monochromatic nor rainbow"};
}

inline Report avoiding_hj(const io::GridColoring& g, int m) {
  if (auto sub = hj::find_canonical_subspace(g.coloring, g.k, g.n, m))
    return Report::fail("subspace " + sub->tmpl.to_string() + " is colored canonically by " + sub->relation.to_string());
  return {true, "ok: no " + std::to_string(m) + "-subspace is canonically colored"};
}

// Builders turning search results into copy witnesses.

inline io::CopyWitness box_witness(const ProductSpace& space, const BoxCopy& box, const Coloring& c) {
  io::CopyWitness w;
  w.norm = Norm::Euclidean;
  w.source = hypercube_config(box.dimension());
  w.image = box_config(space, box);
  for (std::size_t r : box.cells(space)) w.colors.push_back(c[r]);
  w.verdict = classify_colors(w.colors);
  return w;
}

inline io::CopyWitness config_copy_witness(const PointConfig& a, const PointConfig& s, const IsometryWitness& iso,
                                           const Coloring& c, Norm norm) {
  io::CopyWitness w;
  w.norm = norm;
  w.source = PointConfig(a.dim(), norm);
  for (std::size_t i = 0; i < a.size(); ++i) w.source.add(a.label(i), a[i]);
  w.image = PointConfig(s.dim(), norm);
  for (std::size_t t : iso.image) {
    w.image.add(s.label(t), s[t]);
    w.colors.push_back(c[t]);
  }
  w.verdict = classify_colors(w.colors);
  return w;
}

inline io::CopyWitness maxnorm_witness(const maxnorm::WitnessSet& ws, const Coloring& c, int k) {
  io::CopyWitness w;
  w.norm = Norm::Maximum;
  w.source = ws.source;
  w.image = ws.image;
  for (const auto& cell : ws.cells) w.colors.push_back(c[hj::cell_rank(cell, k)]);
  w.verdict = classify_colors(w.colors);
  return w;
}

}  // namespace ramsey_wb::verify
