#pragma once

#include "cylbill/admissible.hpp"
#include "support.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace cylbill::testing {

inline bool on_cube(const Edge& e, const Cell& c) {
  for (int j = 0; j < 3; ++j) {
    const int d = e.base[j] - c[j];
    if (j == ax(e.axis) ? d != 0 : (d != 0 && d != 1)) return false;
  }
  return true;
}

/// Random edge of the unit cube holding the segment `around`-`next`,
/// skew to `next`.
inline Edge nearby_skew_edge(Rng& rng, const Edge& around, const Edge& next) {
  std::vector<Edge> pool;
  for (int dx = -1; dx <= 0; ++dx)
    for (int dy = -1; dy <= 0; ++dy)
      for (int dz = -1; dz <= 0; ++dz) {
        const Cell c = around.base + Cell(dx, dy, dz);
        if (!on_cube(around, c) || !on_cube(next, c)) continue;
        for (int axis = 1; axis <= 3; ++axis)
          for (int u = 0; u <= 1; ++u)
            for (int w = 0; w <= 1; ++w) {
              Cell base = c;
              const auto others = other_axes(axis);
              base[ax(others[0])] += u;
              base[ax(others[1])] += w;
              const Edge e{axis, base};
              if (skew(e, next)) pool.push_back(e);
            }
      }
  return pool[rng() % pool.size()];
}

/// Plan with `k` free contacts taken from a random word's plan, closed by
/// pinned anchors at random points of random edges next to the window.
inline EdgePlan window_plan(Rng& rng, std::size_t k) {
  const ReducedWord w = random_reduced_word(rng, 12);
  const EdgePlan full = plan_word(w);
  const std::size_t n = full.vertices.size();
  const std::size_t start = 1 + rng() % (n - k - 2);
  EdgePlan out;
  out.word = w;
  for (std::size_t i = start - 1; i <= start + k; ++i) {
    PlanVertex v = full.vertices[i];
    if (i == start - 1) v.edge = nearby_skew_edge(rng, v.edge, full.vertices[i + 1].edge);
    if (i == start + k) v.edge = nearby_skew_edge(rng, v.edge, full.vertices[i - 1].edge);
    const bool end = i == start - 1 || i == start + k;
    v.pinned = end;
    if (end) v.pin = 0.2 + 0.6 * uniform01(rng);
    v.kind = end ? VertexKind::Anchor : v.kind;
    out.vertices.push_back(v);
  }
  assign_forces(out);
  return out;
}

/// Length of the r0 = 0 polyline with free contacts at parameters `t`.
inline double chain_length(const EdgePlan& plan, const std::vector<double>& t) {
  double len = 0.0;
  Vec3 prev;
  std::size_t j = 0;
  for (std::size_t i = 0; i < plan.vertices.size(); ++i) {
    const PlanVertex& v = plan.vertices[i];
    const Vec3 p = v.edge.point(v.pinned ? v.pin : t[j++]);
    if (i > 0) len += (p - prev).norm();
    prev = p;
  }
  return len;
}

struct GridResult {
  std::vector<double> t;
  double length = std::numeric_limits<double>::infinity();
};

/// Exhaustive search on the lattice lo + step * i inside [lo, hi] (clipped to [0, 1]).
inline GridResult grid_search(const EdgePlan& plan, const std::vector<double>& lo, const std::vector<double>& hi,
                              double step) {
  const std::size_t k = lo.size();
  std::vector<long> count(k);
  std::vector<double> base(k);
  for (std::size_t d = 0; d < k; ++d) {
    base[d] = std::max(0.0, lo[d]);
    count[d] = static_cast<long>(std::floor((std::min(1.0, hi[d]) - base[d]) / step + 1e-9)) + 1;
  }
  GridResult best;
  std::vector<long> idx(k, 0);
  std::vector<double> t(k);
  while (true) {
    for (std::size_t d = 0; d < k; ++d) t[d] = base[d] + step * static_cast<double>(idx[d]);
    const double len = chain_length(plan, t);
    if (len < best.length) best = {t, len};
    std::size_t d = 0;
    while (d < k && ++idx[d] == count[d]) idx[d++] = 0;
    if (d == k) break;
  }
  return best;
}

/// Grid search refined in stages down to `final_step`; valid because the
/// r0 = 0 length is convex in the edge parameters.
inline GridResult coarse_to_fine(const EdgePlan& plan, double final_step, double first_step = 1e-2) {
  std::size_t k = 0;
  for (const auto& v : plan.vertices) k += v.pinned ? 0 : 1;
  std::vector<double> lo(k, 0.0), hi(k, 1.0);
  GridResult best;
  for (double step = first_step;; step /= 10.0) {
    best = grid_search(plan, lo, hi, step);
    if (step <= final_step * 1.0000001) break;
    for (std::size_t d = 0; d < k; ++d) {
      lo[d] = best.t[d] - 2 * step;
      hi[d] = best.t[d] + 2 * step;
    }
  }
  return best;
}

}  // namespace cylbill::testing
