#include "cylbill/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cylbill {

double ScattererAxis::distance(const Vec3& p) const { return offset(p).norm(); }

Vec3 ScattererAxis::offset(const Vec3& p) const {
  const auto [j, k] = other_axes(axis);
  Vec3 d = Vec3::Zero();
  d[ax(j)] = p[ax(j)] - base[0];
  d[ax(k)] = p[ax(k)] - base[1];
  return d;
}

ScattererAxis Edge::line() const {
  const auto [j, k] = other_axes(axis);
  return {axis, {base[ax(j)], base[ax(k)]}};
}

Vec3 Edge::point(double t) const {
  Vec3 p = base.cast<double>();
  p[ax(axis)] += t;
  return p;
}

bool Edge::on_cell(const Cell& cell) const {
  const Cell d = base - cell;
  if (d[ax(axis)] != 0) return false;
  const auto [j, k] = other_axes(axis);
  return (d[ax(j)] == 0 || d[ax(j)] == 1) && (d[ax(k)] == 0 || d[ax(k)] == 1);
}

double hull_volume(const Edge& a, const Edge& b) {
  const Vec3 da = unit_vector(a.axis);
  const Vec3 db = unit_vector(b.axis);
  const Vec3 w = (b.base - a.base).cast<double>();
  return std::abs(da.cross(db).dot(w)) / 6.0;
}

bool skew(const Edge& a, const Edge& b) { return hull_volume(a, b) > 0.0; }

std::optional<CylinderHit> ray_cylinder_hit(const Vec3& p, const Vec3& v, const Cylinder& cyl) {
  const auto [j, k] = other_axes(cyl.line.axis);
  const double px = p[ax(j)] - cyl.line.base[0];
  const double py = p[ax(k)] - cyl.line.base[1];
  const double vx = v[ax(j)];
  const double vy = v[ax(k)];
  const double a = vx * vx + vy * vy;
  if (a == 0.0) return std::nullopt;
  const double h = px * vx + py * vy;  // half the linear coefficient
  if (h >= 0.0) return std::nullopt;   // not approaching the axis
  const double c = px * px + py * py - cyl.radius * cyl.radius;
  const double disc = h * h - a * c;
  if (disc < 0.0) return std::nullopt;
  CylinderHit hit;
  hit.grazing = disc < kGrazingTolerance;
  // Smaller root of a t^2 + 2 h t + c = 0 in the cancellation-free form.
  hit.time = c / (-h + std::sqrt(disc));
  if (hit.time < 0.0) hit.time = 0.0;
  hit.point = p + hit.time * v;
  return hit;
}

Vec3 reflect(const Vec3& v, const Vec3& n) {
  const double vn = v.dot(n);
  if (vn >= 0.0) throw std::invalid_argument("reflect: velocity is not incoming (v.n >= 0)");
  return v - 2.0 * vn * n;
}

Vec3 cylinder_normal(const Vec3& point, const Cylinder& cyl) {
  const Vec3 d = cyl.line.offset(point);
  const double r = d.norm();
  if (std::abs(r - cyl.radius) > kSurfaceTolerance)
    throw std::invalid_argument("cylinder_normal: point is not on the cylinder surface");
  return d / r;
}

std::array<ScattererAxis, 12> cell_lines(const Cell& cell) {
  std::array<ScattererAxis, 12> out;
  int n = 0;
  for (int axis = 1; axis <= 3; ++axis) {
    const auto [j, k] = other_axes(axis);
    for (int dj = 0; dj <= 1; ++dj)
      for (int dk = 0; dk <= 1; ++dk)
        out[n++] = {axis, {cell[ax(j)] + dj, cell[ax(k)] + dk}};
  }
  return out;
}

Cell cell_of(const Vec3& p) {
  return Cell(static_cast<int>(std::floor(p[0])), static_cast<int>(std::floor(p[1])),
              static_cast<int>(std::floor(p[2])));
}

double distance_to_scatterers(const Vec3& p) {
  double best = std::numeric_limits<double>::infinity();
  for (int axis = 1; axis <= 3; ++axis) {
    const auto [j, k] = other_axes(axis);
    const double dx = p[ax(j)] - std::round(p[ax(j)]);
    const double dy = p[ax(k)] - std::round(p[ax(k)]);
    best = std::min(best, std::hypot(dx, dy));
  }
  return best;
}

std::vector<Cylinder> candidate_cylinders(const Vec3& p, const Vec3& v, double horizon, double r0) {
  if (!(horizon > 0.0)) throw std::invalid_argument("candidate_cylinders: horizon must be positive");
  std::vector<ScattererAxis> lines;
  // 3D DDA over the cells met by the closed segment. Any point within
  // r0 < 1/2 of a lattice line is within r0 of an edge line of its own cell,
  // so the union of crossed cells' edge lines is complete.
  Cell cell = cell_of(p);
  Vec3 t_next, t_delta;
  Eigen::Vector3i step;
  for (int i = 0; i < 3; ++i) {
    if (v[i] > 0) {
      step[i] = 1;
      t_next[i] = (cell[i] + 1 - p[i]) / v[i];
      t_delta[i] = 1.0 / v[i];
    } else if (v[i] < 0) {
      step[i] = -1;
      t_next[i] = (cell[i] - p[i]) / v[i];
      t_delta[i] = -1.0 / v[i];
    } else {
      step[i] = 0;
      t_next[i] = std::numeric_limits<double>::infinity();
      t_delta[i] = std::numeric_limits<double>::infinity();
    }
  }
  while (true) {
    for (const auto& l : cell_lines(cell)) lines.push_back(l);
    int i = 0;
    if (t_next[1] < t_next[i]) i = 1;
    if (t_next[2] < t_next[i]) i = 2;
    if (t_next[i] > horizon) break;
    // Segment points exactly on a face belong to both cells; stepping through
    // every minimum axis keeps edge-adjacent cells too.
    const double tmin = t_next[i];
    for (int a = 0; a < 3; ++a) {
      if (t_next[a] == tmin) {
        cell[a] += step[a];
        t_next[a] += t_delta[a];
      }
    }
  }
  std::sort(lines.begin(), lines.end());
  lines.erase(std::unique(lines.begin(), lines.end()), lines.end());
  std::vector<Cylinder> out;
  out.reserve(lines.size());
  for (const auto& l : lines) out.push_back({l, r0});
  return out;
}

}  // namespace cylbill
