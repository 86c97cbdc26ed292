#pragma once

#include "cylbill/flow.hpp"
#include "cylbill/freegroup.hpp"
#include "cylbill/geometry.hpp"
#include "cylbill/symmetry.hpp"

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cylbill {

// ---------------------------------------------------------------------------
// Errors

class ConstructionError : public std::runtime_error {
 public:
  ConstructionError(const std::string& what, std::optional<std::size_t> index = std::nullopt)
      : std::runtime_error(what), index_(index) {}
  /// Offending vertex (contact) or leg index, when there is one.
  std::optional<std::size_t> index() const { return index_; }

 private:
  std::optional<std::size_t> index_;
};

/// A contact parameter converged to an end of its edge.
class BalanceViolation : public ConstructionError {
  using ConstructionError::ConstructionError;
};

class NonConvergence : public ConstructionError {
  using ConstructionError::ConstructionError;
};

/// The simulated billiard left the planned itinerary.
class ValidationMismatch : public ConstructionError {
  using ConstructionError::ConstructionError;
};

// ---------------------------------------------------------------------------
// Turn case table
//
// Every turn is handled in a reference cube [0,1]^3 entered through the face
// x1 = 0 while moving in +x1. A proper turn leaves through x2 = 1 (moving in
// +x2); the straight passage leaves through x1 = 1. Forces are signs along
// the edge axis: +1 pulls the contact toward the larger coordinate.

enum class TurnCase : std::uint8_t {
  ExitSideEdge,         // entry {0}x{1}x[0,1], pulled down: two more edges, < 3
  FarSideEdge,          // entry {0}x{0}x[0,1], pulled down: straight to the exit edge, < sqrt 3
  CrossEdgePulledBack,  // entry {0}x[0,1]x{0}, pulled down: straight to the exit edge, < sqrt 3
  CrossEdgePulledAhead, // entry {0}x[0,1]x{0}, pulled up: two more edges, < 3
  Straight,             // a^2: entry {0}x[0,1]x{0}, pulled down, < sqrt 3
};

std::string_view to_string(TurnCase c);

struct CasePattern {
  TurnCase id;
  Edge entry;
  int entry_force;
  std::vector<Edge> next;  // contacts after the entry; the last is the exit edge
  int exit_force;          // past force on the exit contact
  double time_bound;
  bool straight;
};

struct CaseOptions {
  /// For CrossEdgePulledBack, exit through [0,1]x{1}x{1} instead of {1}x{1}x[0,1].
  bool alternate_cross_exit = false;
};

/// The five canonical cases, in TurnCase order.
std::vector<CasePattern> canonical_cases(const CaseOptions& opts = {});

/// Entry contact state of a compartment: the contact edge on the entrance
/// face and the force the already built past exerts on it.
struct EntryState {
  Edge edge;
  int force = -1;
  friend bool operator==(const EntryState& a, const EntryState& b) {
    return a.edge == b.edge && a.force == b.force;
  }
};

struct CaseMatch {
  CasePattern pattern;
  CellSymmetry frame;  // reference cube -> actual compartment
};

/// Selects the unique canonical case and symmetry for a turn (in, out)
/// happening in `cell` with the given entry state. Throws std::logic_error
/// unless exactly one (symmetry, case) pair applies.
CaseMatch match_turn(const Cell& cell, Letter in, Letter out, const EntryState& entry,
                     const CaseOptions& opts = {});

/// Number of (symmetry, case) pairs applying to a turn; 1 for every valid input.
int count_turn_matches(const Cell& cell, Letter in, Letter out, const EntryState& entry,
                       const CaseOptions& opts = {});

// ---------------------------------------------------------------------------
// Plans

/// Crossing contacts sit on the face shared by two consecutive compartments.
enum class VertexKind : std::uint8_t { Anchor, Crossing, Intermediate };

std::string_view to_string(VertexKind k);

struct PlanVertex {
  Edge edge;
  int force = 0;  // past force along edge.axis; 0 for pinned anchors
  bool pinned = false;
  double pin = 0.5;  // edge parameter of a pinned vertex
  bool idle = false;
  VertexKind kind = VertexKind::Intermediate;
};

/// Compartment visit: vertex range [first, last] inside the compartment.
/// In periodic plans index `vertices.size()` denotes vertex 0 translated by
/// the period shift.
struct CellVisit {
  Cell cell = Cell::Zero();
  std::size_t first = 0;
  std::size_t last = 0;
  std::optional<TurnCase> turn_case;
};

struct EdgePlan {
  ReducedWord word;
  std::vector<CellVisit> cells;
  std::vector<PlanVertex> vertices;
  bool periodic = false;
  Cell period_shift = Cell::Zero();

  std::size_t vertex_count() const { return vertices.size(); }
  /// Number of segments of the polyline.
  std::size_t segment_count() const { return periodic ? vertices.size() : vertices.size() - 1; }
  /// Edge of vertex i, including the wrapped index in periodic plans.
  Edge edge_at(std::size_t i) const;
};

struct PlanOptions {
  CaseOptions cases;
  /// Entry state of the first compartment after the initial anchor; the
  /// anchor is placed to produce it. Defaults to the canonical choice.
  std::optional<EntryState> initial_entry;
};

/// Turns a reduced word into an edge plan: initial anchor, one case per
/// turn, terminal anchor. Throws std::invalid_argument for empty input.
EdgePlan plan_word(const ReducedWord& w, const PlanOptions& opts = {});

/// Periodic plan for the bi-infinite repetition of a cyclically reduced word.
/// The word is repeated the fewest times r for which the entry state returns
/// to itself; the plan's word is w^r and its period shift the net
/// displacement of w^r.
EdgePlan plan_periodic(const ReducedWord& w, const PlanOptions& opts = {});

/// Past force a contact on `edge` receives from a perpendicular neighbour at
/// `neighbour` (its coordinate along edge.axis decides the sign).
int force_from(const Edge& edge, const Vec3& neighbour);

/// Recomputes every free vertex's past force from its predecessor.
void assign_forces(EdgePlan& plan);

/// Invariant violations of a plan, empty when valid.
std::vector<std::string> check_plan(const EdgePlan& plan);

// ---------------------------------------------------------------------------
// Minimisation

struct MinimizeOptions {
  double gradient_tolerance = 1e-10;
  double step_tolerance = 1e-14;
  int max_iterations = 100000;
  /// A free contact parameter closer than this to an edge end is a balance violation.
  double balance_margin = 1e-7;
};

struct AdmissibleOrbit {
  EdgePlan plan;
  double r0 = 0.0;
  std::vector<Vec3> points;     // one per vertex
  std::vector<double> axial;    // edge parameter per vertex, in [0, 1]
  std::vector<double> angle;    // angular parameter per vertex (r0 > 0)
  double length = 0.0;          // polyline length (one period if periodic)
  double lead_trim = 0.0;       // flow time left out at the start of the first segment
  double tail_trim = 0.0;       // and at the end of the last one
  std::vector<double> cell_times;
  double interior_margin = 0.0; // min over free vertices of min(t, 1 - t)
  std::vector<double> objective_history;
  double gradient_norm = 0.0;
  int iterations = 0;
  bool validated = false;

  Vec3 point_at(std::size_t i) const;  // wraps with the period shift
  /// Flow time of the orbit segment.
  double duration() const { return length - lead_trim - tail_trim; }
  double speed() const { return static_cast<double>(plan.word.size()) / duration(); }
};

/// Shortest polyline through the planned contact sets: edges at r0 = 0,
/// cylinder patches around them at r0 > 0 (initialised from the r0 = 0
/// minimiser, anchors pushed radially onto their cylinders).
AdmissibleOrbit minimize_arclength(const EdgePlan& plan, double r0, const MinimizeOptions& opts = {});

/// Largest deviation from the specular law over all free contacts,
/// |reflect(v_in, n) - v_out|. Requires r0 > 0.
double specular_residual(const AdmissibleOrbit& orbit);

/// Largest |(u_in - u_out) . e_axis| over free contacts with both unit
/// segment directions: zero at a stationary point of the length on edges.
double fermat_residual(const AdmissibleOrbit& orbit);

// ---------------------------------------------------------------------------
// Validation against the simulator

struct ValidationOptions {
  double position_tolerance = 1e-6;
  double direction_tolerance = 1e-6;
};

/// Replays the orbit in the billiard simulator leg by leg (each leg starts
/// from the constructed contact and must reach the next planned contact
/// before any other collision) and returns the stitched record. Throws
/// ValidationMismatch at the first divergent leg.
OrbitRecord validate_orbit(const AdmissibleOrbit& orbit, const ValidationOptions& opts = {});

struct PeriodicValidation {
  OrbitRecord record;
  ReducedWord word;           // word of the simulated periods
  double max_position_error;  // max |q(t + T_p) - q(t) - shift| over collisions
  double max_velocity_error;  // max |v(t + T_p) - v(t)|
};

/// Simulates `periods` periods of a periodic orbit starting mid-segment.
PeriodicValidation validate_periodic(const AdmissibleOrbit& orbit, int periods = 3,
                                     const ValidationOptions& opts = {});

// ---------------------------------------------------------------------------
// Speed control and closing

struct IdleOptions {
  double relative_tolerance = 0.02;
  int max_rounds = 12;
  MinimizeOptions minimize;
};

/// Inserts word-neutral idle cycles (bounces among three mutually skew edges
/// of one compartment) until the segment is at least |w| / target long, then
/// shortens the flow window inside the two end segments to land on the target.
AdmissibleOrbit insert_idle_runs(const AdmissibleOrbit& orbit, double target_speed, const IdleOptions& opts = {});

/// Idle cycle edges spliced after vertex `after` (which must share its
/// compartment with the next vertex), repeated `count` times.
EdgePlan splice_idle_cycles(const EdgePlan& plan, std::size_t after, std::size_t count);

/// Plan options realising the same word: `base` first, then every other
/// entry state of the first compartment.
std::vector<PlanOptions> entry_variants(const ReducedWord& w, const PlanOptions& base = {});

struct ValidatedOrbit {
  AdmissibleOrbit orbit;
  OrbitRecord record;
};

/// Minimises, slows down to `target_speed` and validates, trying the entry
/// variants in order until one lands within the tolerance. Rethrows the last
/// failure when none does.
ValidatedOrbit construct_at_speed(const ReducedWord& w, double r0, double target_speed, const PlanOptions& base = {},
                                  const IdleOptions& opts = {});

/// Builds and minimises the periodic orbit of a cyclically reduced word.
AdmissibleOrbit close_periodic(const ReducedWord& w, double r0, const PlanOptions& plan_opts = {},
                               const MinimizeOptions& opts = {});

}  // namespace cylbill
