#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <array>
#include <optional>
#include <stdexcept>
#include <vector>

namespace cylbill {

/// Lifted (universal cover of the torus) coordinates; the torus side is 1.
using Vec3 = Eigen::Vector3d;
/// Integer lattice vector; also names the unit cell [c, c + 1]^3.
using Cell = Eigen::Vector3i;

/// Zero-based index of a one-based axis.
constexpr int ax(int axis) { return axis - 1; }

/// The two axes other than `axis`, ascending, one-based.
constexpr std::array<int, 2> other_axes(int axis) {
  switch (axis) {
    case 1: return {2, 3};
    case 2: return {1, 3};
    default: return {1, 2};
  }
}

inline Vec3 unit_vector(int axis) {
  Vec3 e = Vec3::Zero();
  e[ax(axis)] = 1.0;
  return e;
}

/// Lattice line {x_j = m_j, x_k = m_k} parallel to `axis`, with {j, k} the
/// other two axes in ascending order.
struct ScattererAxis {
  int axis = 1;
  std::array<int, 2> base{0, 0};

  /// Perpendicular distance from p to the line.
  double distance(const Vec3& p) const;
  /// Component of p orthogonal to the line, measured from the line.
  Vec3 offset(const Vec3& p) const;

  friend bool operator==(const ScattererAxis&, const ScattererAxis&) = default;
  friend auto operator<=>(const ScattererAxis&, const ScattererAxis&) = default;
};

struct Cylinder {
  ScattererAxis line;
  double radius = 0.1;
};

/// Unit segment of a lattice line inside one cell: base + t e_axis, t in [0, 1].
/// With zero radius this is the degenerate scatterer the constructions use.
struct Edge {
  int axis = 1;
  Cell base = Cell::Zero();

  ScattererAxis line() const;
  Vec3 point(double t) const;
  Vec3 midpoint() const { return point(0.5); }
  /// True when this edge is one of the twelve edges of `cell`.
  bool on_cell(const Cell& cell) const;

  friend bool operator==(const Edge& a, const Edge& b) {
    return a.axis == b.axis && a.base == b.base;
  }
};

/// Edges are skew when they neither meet nor are parallel.
bool skew(const Edge& a, const Edge& b);
/// Volume of the tetrahedron conv(a, b); positive iff the convex hull has
/// interior (both edges belong to the same unit cube in our usage).
double hull_volume(const Edge& a, const Edge& b);

struct CylinderHit {
  double time = 0.0;
  Vec3 point;
  bool grazing = false;
};

inline constexpr double kGrazingTolerance = 1e-12;
inline constexpr double kSurfaceTolerance = 1e-9;

/// First positive time at which p + t v meets the cylinder surface.
/// Rays that are not approaching the axis (including rays starting on the
/// surface and leaving it) report no hit. A discriminant in
/// [0, kGrazingTolerance) is flagged as grazing.
std::optional<CylinderHit> ray_cylinder_hit(const Vec3& p, const Vec3& v, const Cylinder& cyl);

/// Specular reflection v - 2 (v.n) n. Throws if v is not incoming (v.n >= 0).
Vec3 reflect(const Vec3& v, const Vec3& n);

/// Outward unit normal at a surface point. Throws if the point is more than
/// kSurfaceTolerance away from the surface.
Vec3 cylinder_normal(const Vec3& point, const Cylinder& cyl);

/// The twelve lattice lines carrying the edges of `cell`.
std::array<ScattererAxis, 12> cell_lines(const Cell& cell);

/// Cylinders whose axis passes within r0 of the segment [p, p + horizon v],
/// found by walking the unit cells the segment crosses. The result is a
/// superset of the exact answer, sorted and free of duplicates.
std::vector<Cylinder> candidate_cylinders(const Vec3& p, const Vec3& v, double horizon, double r0);

/// Componentwise floor.
Cell cell_of(const Vec3& p);

/// Distance from p to the nearest lattice line of any family.
double distance_to_scatterers(const Vec3& p);

}  // namespace cylbill
