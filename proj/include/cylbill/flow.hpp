#pragma once

#include "cylbill/freegroup.hpp"
#include "cylbill/geometry.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

namespace cylbill {

/// Lifted phase point: position in R^3, unit velocity, flow time.
struct PhasePoint {
  Vec3 q = Vec3::Zero();
  Vec3 v = Vec3::UnitZ();
  double t = 0.0;
};

enum class EventKind : std::uint8_t { Collision, FaceCrossing };

/// One collision or face crossing. `q` is the position at the event and `v`
/// the velocity leaving it; `v_in` differs from `v` only for collisions.
struct OrbitEvent {
  double time = 0.0;
  EventKind kind = EventKind::FaceCrossing;
  Vec3 q = Vec3::Zero();
  Vec3 v = Vec3::Zero();
  Vec3 v_in = Vec3::Zero();
  ScattererAxis cylinder;  // collisions only
  int axis = 0;            // face crossings only: plane x_axis = plane
  int sign = 0;
  std::int64_t plane = 0;

  Letter letter() const { return {axis, sign}; }
};

enum class Termination : std::uint8_t {
  Completed,
  /// The orbit met the intersection of two cylinders; the dynamics is undefined there.
  Singular,
  /// The event budget ran out before the requested time.
  EventBudget,
};

struct OrbitRecord {
  PhasePoint initial;
  std::vector<OrbitEvent> events;
  PhasePoint final;
  std::array<std::int64_t, 3> crossings{0, 0, 0};  // n_x, n_y, n_z
  std::int64_t collisions = 0;
  double r0 = 0.1;
  Termination termination = Termination::Completed;

  double duration() const { return final.t - initial.t; }
  std::int64_t total_crossings() const { return crossings[0] + crossings[1] + crossings[2]; }
  bool singular() const { return termination != Termination::Completed; }
};

struct SimulateOptions {
  std::int64_t max_events = 10'000'000;
  /// Collision events are always counted; storing them is optional.
  bool keep_collisions = true;
};

inline constexpr double kEventTieTolerance = 1e-12;
inline constexpr double kCornerTolerance = 1e-9;

/// Event-driven integrator for the billiard in the lifted space. Each step
/// advances to the nearest of the next face crossing and the next cylinder
/// hit among the twelve edge cylinders of the current cell; collisions win
/// ties within kEventTieTolerance.
class BilliardFlow {
 public:
  BilliardFlow(const PhasePoint& start, double r0);
  /// Starts in a given cell, which must contain start.q up to
  /// kSurfaceTolerance. Used to continue a flow across a restart at a point
  /// lying on a face.
  BilliardFlow(const PhasePoint& start, double r0, const Cell& cell);

  /// Advances to the next event, or to time `until` if no event comes first.
  /// Returns the event, if any. Does nothing once the flow is singular.
  std::optional<OrbitEvent> step(double until);

  const PhasePoint& state() const { return state_; }
  const Cell& cell() const { return cell_; }
  double r0() const { return r0_; }
  bool singular() const { return singular_; }

 private:
  PhasePoint state_;
  Cell cell_;
  double r0_;
  bool singular_ = false;
};

/// Flows `start` for time T, recording collisions and face crossings.
OrbitRecord simulate(const PhasePoint& start, double T, double r0, const SimulateOptions& opts = {});

/// Face crossings mapped to letters in time order, freely reduced.
ReducedWord word_of(const OrbitRecord& record);

/// Position at time t by straight-line motion from the last event before t.
Vec3 position_at(const OrbitRecord& record, double t);

/// Uniform phase point: position uniform in the table (rejection from the
/// unit cube), velocity uniform on the sphere.
template <class Rng>
PhasePoint random_phase_point(Rng& rng, double r0);

}  // namespace cylbill

#include "cylbill/random.hpp"

namespace cylbill {

template <class Rng>
PhasePoint random_phase_point(Rng& rng, double r0) {
  PhasePoint x;
  do {
    x.q = Vec3(uniform01(rng), uniform01(rng), uniform01(rng));
  } while (distance_to_scatterers(x.q) <= r0);
  x.v = uniform_sphere(rng);
  return x;
}

}  // namespace cylbill
