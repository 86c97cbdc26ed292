#include "cylbill/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace cylbill {

BilliardFlow::BilliardFlow(const PhasePoint& start, double r0) : state_(start), r0_(r0) {
  if (!(r0 > 0.0 && r0 < 0.5)) throw std::invalid_argument("r0 must lie in (0, 1/2)");
  if (std::abs(start.v.norm() - 1.0) > 1e-12)
    throw std::invalid_argument("initial velocity must have unit length");
  if (distance_to_scatterers(start.q) < r0 - kSurfaceTolerance)
    throw std::invalid_argument("initial position lies inside a scatterer");
  cell_ = cell_of(start.q);
  // A start exactly on a plane belongs to the cell the velocity points into.
  for (int i = 0; i < 3; ++i)
    if (start.q[i] == std::floor(start.q[i]) && start.v[i] < 0.0) cell_[i] -= 1;
}

BilliardFlow::BilliardFlow(const PhasePoint& start, double r0, const Cell& cell) : BilliardFlow(start, r0) {
  for (int i = 0; i < 3; ++i) {
    if (start.q[i] < cell[i] - kSurfaceTolerance || start.q[i] > cell[i] + 1 + kSurfaceTolerance)
      throw std::invalid_argument("start position lies outside the given cell");
  }
  cell_ = cell;
}

std::optional<OrbitEvent> BilliardFlow::step(double until) {
  if (singular_) return std::nullopt;
  const double remaining = until - state_.t;
  if (remaining <= 0.0) return std::nullopt;

  const Vec3& q = state_.q;
  const Vec3& v = state_.v;

  double t_face = std::numeric_limits<double>::infinity();
  int face = -1;
  for (int i = 0; i < 3; ++i) {
    double dt;
    if (v[i] > 0.0)
      dt = (cell_[i] + 1 - q[i]) / v[i];
    else if (v[i] < 0.0)
      dt = (cell_[i] - q[i]) / v[i];
    else
      continue;
    dt = std::max(dt, 0.0);
    if (dt < t_face) {
      t_face = dt;
      face = i;
    }
  }

  double t_col = std::numeric_limits<double>::infinity();
  std::optional<CylinderHit> best;
  ScattererAxis best_line;
  const auto lines = cell_lines(cell_);
  for (const auto& line : lines) {
    auto hit = ray_cylinder_hit(q, v, {line, r0_});
    if (!hit || hit->grazing) continue;  // tangency: no velocity change
    if (hit->time < t_col) {
      t_col = hit->time;
      best = hit;
      best_line = line;
    }
  }

  OrbitEvent ev;
  if (best && t_col <= t_face + kEventTieTolerance && t_col <= remaining) {
    const Vec3 p = best->point;
    for (const auto& line : lines) {
      if (line != best_line && line.distance(p) <= r0_ + kCornerTolerance) {
        state_.q = p;
        state_.t += t_col;
        singular_ = true;
        return std::nullopt;
      }
    }
    const Vec3 n = best_line.offset(p).normalized();
    const double vn = v.dot(n);
    ev.kind = EventKind::Collision;
    ev.v_in = v;
    ev.cylinder = best_line;
    Vec3 out = v - 2.0 * vn * n;
    out.normalize();
    state_.q = p;
    state_.v = out;
    state_.t += t_col;
  } else if (face >= 0 && t_face <= remaining) {
    const int s = v[face] > 0.0 ? 1 : -1;
    const int plane = s > 0 ? cell_[face] + 1 : cell_[face];
    state_.q += t_face * v;
    state_.q[face] = plane;
    state_.t += t_face;
    cell_[face] += s;
    ev.kind = EventKind::FaceCrossing;
    ev.v_in = v;
    ev.axis = face + 1;
    ev.sign = s;
    ev.plane = plane;
  } else {
    state_.q += remaining * v;
    state_.t = until;
    return std::nullopt;
  }
  ev.time = state_.t;
  ev.q = state_.q;
  ev.v = state_.v;
  return ev;
}

OrbitRecord simulate(const PhasePoint& start, double T, double r0, const SimulateOptions& opts) {
  if (!(T > 0.0)) throw std::invalid_argument("simulate: T must be positive");
  OrbitRecord rec;
  rec.initial = start;
  rec.r0 = r0;
  BilliardFlow flow(start, r0);
  const double t_end = start.t + T;
  std::int64_t n_events = 0;
  while (flow.state().t < t_end) {
    auto ev = flow.step(t_end);
    if (flow.singular()) {
      rec.termination = Termination::Singular;
      break;
    }
    if (!ev) continue;
    if (++n_events > opts.max_events) {
      rec.termination = Termination::EventBudget;
      break;
    }
    if (ev->kind == EventKind::FaceCrossing) {
      ++rec.crossings[ax(ev->axis)];
      rec.events.push_back(*ev);
    } else {
      ++rec.collisions;
      if (opts.keep_collisions) rec.events.push_back(*ev);
    }
  }
  rec.final = flow.state();
  return rec;
}

ReducedWord word_of(const OrbitRecord& record) {
  WordAccumulator acc;
  for (const auto& ev : record.events)
    if (ev.kind == EventKind::FaceCrossing) acc.push(ev.letter());
  return std::move(acc).take();
}

Vec3 position_at(const OrbitRecord& record, double t) {
  const auto& evs = record.events;
  auto it = std::upper_bound(evs.begin(), evs.end(), t,
                             [](double tt, const OrbitEvent& e) { return tt < e.time; });
  if (it == evs.begin()) return record.initial.q + (t - record.initial.t) * record.initial.v;
  const auto& e = *std::prev(it);
  return e.q + (t - e.time) * e.v;
}

}  // namespace cylbill
