#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <map>
#include <tuple>
#include <variant>
#include <vector>

#include "ramsey_wb/coloring.hpp"
#include "ramsey_wb/errors.hpp"

namespace ramsey_wb::tri {

inline constexpr double kDefaultTolerance = 1e-9;

using Vec3 = std::array<double, 3>;

inline Vec3 operator+(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline Vec3 operator-(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline Vec3 operator*(double s, const Vec3& a) { return {s * a[0], s * a[1], s * a[2]}; }
inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
inline double dist(const Vec3& a, const Vec3& b) { return norm(a - b); }
inline Vec3 normalized(const Vec3& a) { return (1.0 / norm(a)) * a; }
inline double det3(const Vec3& a, const Vec3& b, const Vec3& c) { return dot(a, cross(b, c)); }

// Orthonormal (u, v) spanning the plane orthogonal to the unit vector n.
// v is the projection of the standard axis least aligned with n (lowest
// index on ties), u = v x n.
inline std::pair<Vec3, Vec3> plane_basis(const Vec3& n) {
  std::size_t axis = 0;
  for (std::size_t i = 1; i < 3; ++i)
    if (std::abs(n[i]) < std::abs(n[axis])) axis = i;
  Vec3 e{0, 0, 0};
  e[axis] = 1;
  Vec3 v = normalized(e - dot(e, n) * n);
  return {cross(v, n), v};
}

// Triangle with side lengths a, b, c; construction requires it to be acute.
struct Triangle {
  double a, b, c;

  Triangle(double a_, double b_, double c_) : a(a_), b(b_), c(c_) {
    if (!(a > 0 && b > 0 && c > 0)) throw GeometryError("triangle sides must be positive");
    if (!(a * a + b * b > c * c && b * b + c * c > a * a && a * a + c * c > b * b))
      throw GeometryError("triangle is not acute");
  }
};

struct Circle3 {
  Vec3 center;
  double radius;
  Vec3 normal;

  // center + radius (cos t u + sin t v) with (u, v) = plane_basis(normal).
  Vec3 at(double t) const {
    auto [u, v] = plane_basis(normal);
    return center + radius * (std::cos(t) * u + std::sin(t) * v);
  }
};

using SphereIntersection = std::variant<std::monostate, Vec3, Circle3>;

// Intersection of the spheres (cA, rA) and (cB, rB). Tangency within `tol`
// yields the single point; disjoint or nested spheres yield monostate.
inline SphereIntersection intersect_spheres(const Vec3& ca, double ra, const Vec3& cb, double rb,
                                            double tol = kDefaultTolerance) {
  if (!(ra > 0 && rb > 0)) throw GeometryError("sphere radii must be positive");
  double d = dist(ca, cb);
  if (d <= tol) {
    if (std::abs(ra - rb) <= tol) throw ConcentricError("coincident spheres intersect in a whole sphere");
    return std::monostate{};
  }
  Vec3 n = (1.0 / d) * (cb - ca);
  double x = (d * d + ra * ra - rb * rb) / (2 * d);
  double h2 = ra * ra - x * x;
  Vec3 foot = ca + x * n;
  if (h2 < 0) {
    if (std::sqrt(-h2) > tol) return std::monostate{};
    return foot;
  }
  double h = std::sqrt(h2);
  if (h <= tol) return foot;
  return Circle3{foot, h, n};
}

struct GoodPair {
  Vec3 x, y;
  Color color_x = 0, color_y = 1;
};

inline bool is_good_pair(const GoodPair& p, double c, double tol = kDefaultTolerance) {
  return std::abs(dist(p.x, p.y) - c) <= tol && p.color_x != p.color_y;
}

// C1 = S(A, b) ∩ S(B, a) and C2 = S(B, b) ∩ S(A, a) for the pair (A, B).
inline std::pair<Circle3, Circle3> extension_circles(const Triangle& t, const Vec3& a, const Vec3& b) {
  auto c1 = intersect_spheres(a, t.b, b, t.a);
  auto c2 = intersect_spheres(b, t.b, a, t.a);
  if (!std::holds_alternative<Circle3>(c1) || !std::holds_alternative<Circle3>(c2))
    throw GeometryError("pair distance does not admit the extension circles");
  return {std::get<Circle3>(c1), std::get<Circle3>(c2)};
}

struct Extension {
  Vec3 c, d;
  double angle_c;  // parameter of C on C1
  double angle_d;  // parameter of D on C2
};

// Extension (C, D) of the pair (A, B): C = C1.at(angle), D on C2 with
// |CD| = c. Of the two candidates for D the one making
// (B - A, C - center1, D - center2) right-handed is returned; ties go to the
// smaller parameter in [0, 2pi).
inline Extension extend_pair(const Triangle& t, const Vec3& a, const Vec3& b, double angle,
                             double tol = kDefaultTolerance) {
  if (std::abs(dist(a, b) - t.c) > tol) throw PreconditionError("pair is not at distance c");
  auto [c1, c2] = extension_circles(t, a, b);
  Vec3 c = c1.at(angle);
  auto [u, v] = plane_basis(c2.normal);
  Vec3 w = c - c2.center;
  double p = dot(w, u), q = dot(w, v);
  double r = std::hypot(p, q);
  double k = (dot(w, w) + c2.radius * c2.radius - t.c * t.c) / (2 * c2.radius);
  if (r <= tol) throw GeometryError("degenerate extension: C lies on the axis");
  double ratio = k / r;
  if (ratio > 1 + 1e-12 || ratio < -1 - 1e-12) throw GeometryError("no point of C2 at distance c from C");
  ratio = std::clamp(ratio, -1.0, 1.0);
  double psi = std::atan2(q, p);
  double delta = std::acos(ratio);
  auto wrap = [](double x) {
    x = std::fmod(x, 2 * std::numbers::pi);
    return x < 0 ? x + 2 * std::numbers::pi : x;
  };
  double phi1 = wrap(psi - delta), phi2 = wrap(psi + delta);
  if (phi2 < phi1) std::swap(phi1, phi2);
  Vec3 d1 = c2.at(phi1), d2 = c2.at(phi2);
  Vec3 axis = b - a;
  double o1 = det3(axis, c - c1.center, d1 - c2.center);
  double o2 = det3(axis, c - c1.center, d2 - c2.center);
  // The candidates mirror each other across the plane of the axis and C, so
  // o1 = -o2 up to rounding.
  bool pick_second = o2 - o1 > tol;
  return pick_second ? Extension{c, d2, angle, phi2} : Extension{c, d1, angle, phi1};
}

// The six distances of the simplex A, B, C, D in the order
// |AB|, |CA|, |CB|, |DA|, |DB|, |CD| and the values they must take.
inline std::array<std::pair<double, double>, 6> simplex_residuals(const Triangle& t, const Vec3& a, const Vec3& b,
                                                                  const Extension& e) {
  return {{{dist(a, b), t.c},
           {dist(e.c, a), t.b},
           {dist(e.c, b), t.a},
           {dist(e.d, a), t.a},
           {dist(e.d, b), t.b},
           {dist(e.c, e.d), t.c}}};
}

inline bool faces_congruent(const Triangle& t, const Vec3& a, const Vec3& b, const Extension& e,
                            double tol = kDefaultTolerance) {
  for (auto [got, want] : simplex_residuals(t, a, b, e))
    if (std::abs(got - want) > tol) return false;
  return true;
}

// Nearest and farthest points of a circle from p (p off the axis).
inline std::pair<Vec3, Vec3> nearest_farthest(const Circle3& circle, const Vec3& p) {
  Vec3 w = p - circle.center;
  Vec3 in_plane = w - dot(w, circle.normal) * circle.normal;
  Vec3 dir = normalized(in_plane);
  return {circle.center + circle.radius * dir, circle.center - circle.radius * dir};
}

// Polyline from y1 to y2 with every step of length exactly c: straight steps
// toward y2, then one isosceles detour (two sides c) over the residual.
inline std::vector<Vec3> unit_chain(const Vec3& y1, const Vec3& y2, double c, double tol = kDefaultTolerance) {
  if (!(c > 0)) throw PreconditionError("step length must be positive");
  double len = dist(y1, y2);
  std::vector<Vec3> chain{y1};
  if (len <= tol) return chain;
  Vec3 dir = (1.0 / len) * (y2 - y1);
  auto steps = static_cast<std::size_t>(std::floor(len / c + tol));
  double residual = len - static_cast<double>(steps) * c;
  if (std::abs(residual) <= tol) {
    for (std::size_t i = 1; i < steps; ++i) chain.push_back(y1 + (static_cast<double>(i) * c) * dir);
    chain.push_back(y2);
    return chain;
  }
  for (std::size_t i = 1; i <= steps; ++i) chain.push_back(y1 + (static_cast<double>(i) * c) * dir);
  Vec3 from = chain.back();
  Vec3 mid = 0.5 * (from + y2);
  auto [u, v] = plane_basis(dir);
  double lift = std::sqrt(c * c - 0.25 * residual * residual);
  chain.push_back(mid + lift * v);
  chain.push_back(y2);
  return chain;
}

// Walks the unit chain from y1 to y2 and returns the first consecutive pair
// the oracle colors differently.
inline GoodPair find_good_pair(const ColoringOracle& oracle, const Vec3& y1, const Vec3& y2, double c,
                               double tol = kDefaultTolerance) {
  Color c1 = oracle(y1), c2 = oracle(y2);
  if (c1 == c2) throw PreconditionError("endpoints share a color");
  auto chain = unit_chain(y1, y2, c, tol);
  for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
    Color a = oracle(chain[i]), b = oracle(chain[i + 1]);
    if (a != b) return GoodPair{chain[i], chain[i + 1], a, b};
  }
  throw InternalError("chain endpoints differ in color but no step does");
}

struct OrbitCloud {
  std::vector<GoodPair> pairs;

  std::vector<Vec3> points() const {
    std::vector<Vec3> out;
    for (const auto& p : pairs) {
      out.push_back(p.x);
      out.push_back(p.y);
    }
    return out;
  }
};

// Cubes of side eps whose centers lie in the ball (center, radius).
class CoverageGrid {
 public:
  CoverageGrid(const Vec3& center, double radius = 2.0, double eps = 0.25)
      : center_(center), radius_(radius), eps_(eps) {
    half_ = static_cast<int>(std::ceil(radius / eps));
    for (int i = -half_; i < half_; ++i)
      for (int j = -half_; j < half_; ++j)
        for (int k = -half_; k < half_; ++k) {
          Vec3 mid{(i + 0.5) * eps, (j + 0.5) * eps, (k + 0.5) * eps};
          if (norm(mid) <= radius) cells_.emplace(std::make_tuple(i, j, k), cells_.size());
        }
  }

  std::size_t size() const noexcept { return cells_.size(); }

  // Cell index of p, or nullopt outside the grid.
  std::optional<std::size_t> cell_of(const Vec3& p) const {
    Vec3 r = p - center_;
    auto key = std::make_tuple(static_cast<int>(std::floor(r[0] / eps_)), static_cast<int>(std::floor(r[1] / eps_)),
                               static_cast<int>(std::floor(r[2] / eps_)));
    auto it = cells_.find(key);
    if (it == cells_.end()) return std::nullopt;
    return it->second;
  }

  std::vector<bool> occupancy(const std::vector<Vec3>& pts) const {
    std::vector<bool> occ(size(), false);
    for (const auto& p : pts)
      if (auto c = cell_of(p)) occ[*c] = true;
    return occ;
  }

 private:
  Vec3 center_;
  double radius_, eps_;
  int half_;
  // Indices follow the (i, j, k) loop order.
  std::map<std::tuple<int, int, int>, std::size_t> cells_;
};

struct OrbitReport {
  OrbitCloud cloud;
  std::vector<bool> occupied;  // per CoverageGrid cell
  double coverage = 0;
};

// Grows the extension closure of `seed`: each step extends a uniformly
// chosen stored pair whose midpoint lies within `locality` of the seed
// midpoint by a uniform random angle. New pairs carry the parent's colors
// (under an avoiding coloring every pair is bichromatic; which endpoint gets which color is
// not determined without an oracle).
inline OrbitReport orbit_explore(const Triangle& t, const GoodPair& seed, std::size_t steps, std::uint64_t rng_seed,
                                 double locality = 2.5) {
  if (!is_good_pair(seed, t.c)) throw PreconditionError("seed is not a good pair at distance c");
  OrbitReport rep;
  rep.cloud.pairs.push_back(seed);
  Vec3 origin = 0.5 * (seed.x + seed.y);
  std::vector<std::size_t> local{0};
  std::mt19937_64 rng(rng_seed);
  std::uniform_real_distribution<double> angle(0.0, 2 * std::numbers::pi);
  for (std::size_t s = 0; s < steps; ++s) {
    std::uniform_int_distribution<std::size_t> pick(0, local.size() - 1);
    const GoodPair parent = rep.cloud.pairs[local[pick(rng)]];
    Extension e = extend_pair(t, parent.x, parent.y, angle(rng));
    rep.cloud.pairs.push_back(GoodPair{e.c, e.d, parent.color_x, parent.color_y});
    if (dist(0.5 * (e.c + e.d), origin) <= locality) local.push_back(rep.cloud.pairs.size() - 1);
  }
  CoverageGrid grid(origin);
  rep.occupied = grid.occupancy(rep.cloud.points());
  std::size_t hit = 0;
  for (bool b : rep.occupied) hit += b;
  rep.coverage = grid.size() ? static_cast<double>(hit) / static_cast<double>(grid.size()) : 0.0;
  return rep;
}

}  // namespace ramsey_wb::tri
