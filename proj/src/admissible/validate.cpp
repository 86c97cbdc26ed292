#include "cylbill/admissible.hpp"

#include <cmath>
#include <optional>
#include <sstream>

namespace cylbill {

namespace {

std::string describe(const Vec3& p) {
  std::ostringstream os;
  os.precision(17);
  os << '(' << p[0] << ", " << p[1] << ", " << p[2] << ')';
  return os.str();
}

// Stitches simulator legs into one record. Each leg restarts the flow from a
// constructed contact, so rounding never accumulates beyond one leg.
class LegRunner {
 public:
  LegRunner(double r0, const ValidationOptions& opts) : r0_(r0), opts_(opts) { rec_.r0 = r0; }

  void start(const Vec3& q, const Vec3& v) {
    rec_.initial = {q, v, 0.0};
    rec_.final = rec_.initial;
  }

  /// Flows from q along v until the next collision, which must happen on
  /// `target` within the position tolerance of `expected`.
  OrbitEvent to_contact(std::size_t leg, const Vec3& q, const Vec3& v, const ScattererAxis& target,
                        const Vec3& expected) {
    BilliardFlow flow = make_flow(q, v);
    const double horizon = rec_.final.t + (expected - q).norm() + 1.0;
    while (true) {
      const auto ev = flow.step(horizon);
      if (flow.singular())
        throw ValidationMismatch("leg " + std::to_string(leg) + " met a scatterer intersection", leg);
      if (!ev)
        throw ValidationMismatch("leg " + std::to_string(leg) + " reached no collision", leg);
      if (ev->kind == EventKind::FaceCrossing) {
        record(*ev);
        continue;
      }
      cell_ = flow.cell();
      if (ev->cylinder != target)
        throw ValidationMismatch("leg " + std::to_string(leg) + " hit an unplanned scatterer at " + describe(ev->q), leg);
      const double err = (ev->q - expected).norm();
      if (err > opts_.position_tolerance)
        throw ValidationMismatch("leg " + std::to_string(leg) + " contact is " + std::to_string(err) +
                                     " away from the planned point",
                                 leg);
      return *ev;
    }
  }

  /// Flows from q along v for time dt without expecting a collision.
  void coast(std::size_t leg, const Vec3& q, const Vec3& v, double dt) {
    BilliardFlow flow = make_flow(q, v);
    const double until = rec_.final.t + dt;
    while (flow.state().t < until) {
      const auto ev = flow.step(until);
      if (!ev) continue;
      if (ev->kind == EventKind::Collision)
        throw ValidationMismatch("leg " + std::to_string(leg) + " hit an unplanned scatterer", leg);
      record(*ev);
    }
    rec_.final = flow.state();
  }

  void record(const OrbitEvent& ev) {
    if (ev.kind == EventKind::FaceCrossing)
      ++rec_.crossings[ax(ev.axis)];
    else
      ++rec_.collisions;
    rec_.events.push_back(ev);
    rec_.final = {ev.q, ev.v, ev.time};
  }

  void check_direction(std::size_t leg, const OrbitEvent& ev, const Vec3& planned) const {
    const double err = (ev.v - planned).norm();
    if (err > opts_.direction_tolerance)
      throw ValidationMismatch("contact " + std::to_string(leg + 1) + " reflects " + std::to_string(err) +
                                   " away from the planned direction",
                               leg);
  }

  OrbitRecord& record() { return rec_; }

 private:
  // Contacts may lie exactly on a face; the flow keeps the cell it reached
  // so that a crossing at the contact instant is not lost.
  BilliardFlow make_flow(const Vec3& q, const Vec3& v) const {
    if (cell_) return BilliardFlow({q, v, rec_.final.t}, r0_, *cell_);
    return BilliardFlow({q, v, rec_.final.t}, r0_);
  }

  double r0_;
  ValidationOptions opts_;
  OrbitRecord rec_;
  std::optional<Cell> cell_;
};

void require_positive_radius(const AdmissibleOrbit& orbit) {
  if (!(orbit.r0 > 0.0)) throw std::invalid_argument("validation needs an orbit constructed with r0 > 0");
}

}  // namespace

OrbitRecord validate_orbit(const AdmissibleOrbit& orbit, const ValidationOptions& opts) {
  require_positive_radius(orbit);
  if (orbit.plan.periodic) throw std::invalid_argument("validate_orbit: use validate_periodic for periodic orbits");
  const auto& P = orbit.points;
  const std::size_t n = P.size();
  LegRunner run(orbit.r0, opts);
  const Vec3 first_dir = (P[1] - P[0]).normalized();
  const Vec3 origin = P[0] + orbit.lead_trim * first_dir;
  run.start(origin, first_dir);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const Vec3 from = k == 0 ? origin : P[k];
    const Vec3 dir = (P[k + 1] - P[k]).normalized();
    if (k + 2 == n && orbit.tail_trim > 0.0) {
      run.coast(k, from, dir, (P[k + 1] - from).norm() - orbit.tail_trim);
      break;
    }
    const OrbitEvent ev = run.to_contact(k, from, dir, orbit.plan.vertices[k + 1].edge.line(), P[k + 1]);
    if (k + 2 < n) run.check_direction(k, ev, (P[k + 2] - P[k + 1]).normalized());
    run.record(ev);
  }
  OrbitRecord rec = std::move(run.record());
  const ReducedWord realised = word_of(rec);
  if (realised != orbit.plan.word) {
    const std::size_t at = common_prefix(realised, orbit.plan.word).size();
    throw ValidationMismatch("simulated word " + realised.str() + " leaves the planned word at letter " +
                                 std::to_string(at),
                             at);
  }
  return rec;
}

PeriodicValidation validate_periodic(const AdmissibleOrbit& orbit, int periods, const ValidationOptions& opts) {
  require_positive_radius(orbit);
  if (!orbit.plan.periodic) throw std::invalid_argument("validate_periodic: orbit is not periodic");
  if (periods < 1) throw std::invalid_argument("validate_periodic: need at least one period");
  const std::size_t n = orbit.points.size();
  const std::size_t total = n * static_cast<std::size_t>(periods);
  auto P = [&](std::size_t i) { return orbit.point_at(i); };
  auto line = [&](std::size_t i) { return orbit.plan.edge_at(i).line(); };

  // Start and end halfway along the first segment: that point is inside the
  // first compartment, away from every face crossing.
  const Vec3 mid = 0.5 * (P(0) + P(1));
  LegRunner run(orbit.r0, opts);
  run.start(mid, (P(1) - P(0)).normalized());
  Vec3 q = mid;
  for (std::size_t k = 0; k < total; ++k) {
    const Vec3 dir = (P(k + 1) - (k == 0 ? P(0) : P(k))).normalized();
    const OrbitEvent ev = run.to_contact(k, q, dir, line(k + 1), P(k + 1));
    run.check_direction(k, ev, (P(k + 2) - P(k + 1)).normalized());
    run.record(ev);
    q = P(k + 1);
  }
  const Vec3 end_mid = 0.5 * (P(total) + P(total + 1));
  run.coast(total, P(total), (P(total + 1) - P(total)).normalized(), (end_mid - P(total)).norm());

  PeriodicValidation out;
  out.record = std::move(run.record());
  out.word = word_of(out.record);
  std::vector<const OrbitEvent*> hits;
  for (const auto& e : out.record.events)
    if (e.kind == EventKind::Collision) hits.push_back(&e);
  out.max_position_error = 0.0;
  out.max_velocity_error = 0.0;
  const Vec3 shift = orbit.plan.period_shift.cast<double>();
  for (std::size_t j = 0; j + n < hits.size(); ++j) {
    out.max_position_error = std::max(out.max_position_error, (hits[j + n]->q - hits[j]->q - shift).norm());
    out.max_velocity_error = std::max(out.max_velocity_error, (hits[j + n]->v - hits[j]->v).norm());
  }
  std::vector<Letter> expected;
  for (int r = 0; r < periods; ++r)
    expected.insert(expected.end(), orbit.plan.word.begin(), orbit.plan.word.end());
  if (out.word != reduce(expected))
    throw ValidationMismatch("periodic orbit realises " + out.word.str() + " instead of the repeated word");
  return out;
}

}  // namespace cylbill
