#include "cylbill/admissible.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>

namespace cylbill {

namespace {

std::size_t cell_containing_pair(const EdgePlan& plan, std::size_t after) {
  for (std::size_t k = 0; k < plan.cells.size(); ++k)
    if (plan.cells[k].first <= after && after + 1 <= plan.cells[k].last) return k;
  throw std::invalid_argument("splice_idle_cycles: vertices do not share a compartment");
}

/// Edges of cell `c` (third axis) closing a skew triangle with x and y.
Edge idle_partner(const Cell& c, const Edge& x, const Edge& y) {
  const int a = x.axis, b = y.axis;
  const int third = 6 - a - b;
  Cell base = c;
  // Opposite to y along x's axis and opposite to x along y's axis.
  base[ax(a)] = 2 * c[ax(a)] + 1 - y.base[ax(a)];
  base[ax(b)] = 2 * c[ax(b)] + 1 - x.base[ax(b)];
  return {third, base};
}

}  // namespace

EdgePlan splice_idle_cycles(const EdgePlan& plan, std::size_t after, std::size_t count) {
  if (count == 0) return plan;
  if (after + 1 >= plan.vertices.size() + (plan.periodic ? 1 : 0))
    throw std::invalid_argument("splice_idle_cycles: no vertex follows the splice point");
  const std::size_t k = cell_containing_pair(plan, after);
  const Cell cell = plan.cells[k].cell;
  const Edge x = plan.edge_at(after);
  const Edge y = plan.edge_at(after + 1);
  const Edge z = idle_partner(cell, x, y);

  EdgePlan out = plan;
  std::vector<PlanVertex> cycle;
  for (const Edge& e : {y, z, x}) {
    PlanVertex v;
    v.edge = e;
    v.idle = true;
    cycle.push_back(v);
  }
  std::vector<PlanVertex> inserted;
  for (std::size_t r = 0; r < count; ++r) inserted.insert(inserted.end(), cycle.begin(), cycle.end());
  out.vertices.insert(out.vertices.begin() + static_cast<std::ptrdiff_t>(after + 1), inserted.begin(),
                      inserted.end());
  const std::size_t grow = inserted.size();
  for (std::size_t j = 0; j < out.cells.size(); ++j) {
    if (j > k) out.cells[j].first += grow;
    if (j >= k) out.cells[j].last += grow;
  }
  assign_forces(out);
  return out;
}

AdmissibleOrbit insert_idle_runs(const AdmissibleOrbit& orbit, double target_speed, const IdleOptions& opts) {
  const double current = orbit.speed();
  if (!(target_speed > 0.0)) throw std::invalid_argument("insert_idle_runs: target speed must be positive");
  if (target_speed > current * (1.0 + 1e-12))
    throw std::invalid_argument("insert_idle_runs: idle cycles can only lower the speed");
  if (std::abs(current - target_speed) <= opts.relative_tolerance * target_speed) return orbit;

  const double word_len = static_cast<double>(orbit.plan.word.size());
  const double wanted_length = word_len / target_speed;

  const std::size_t n_cells = orbit.plan.cells.size();

  auto error = [&](const AdmissibleOrbit& o) { return std::abs(o.speed() - target_speed); };
  auto build = [&](std::size_t cycles) -> std::optional<AdmissibleOrbit> {
    // Spread the cycles evenly over the compartments, working from the back
    // so earlier splice indices stay valid.
    EdgePlan plan = orbit.plan;
    for (std::size_t j = n_cells; j-- > 0;) {
      const std::size_t here = (j + 1) * cycles / n_cells - j * cycles / n_cells;
      plan = splice_idle_cycles(plan, plan.cells[j].first, here);
    }
    try {
      return minimize_arclength(plan, orbit.r0, opts.minimize);
    } catch (const BalanceViolation&) {
      return std::nullopt;
    }
  };

  std::map<std::size_t, std::optional<AdmissibleOrbit>> built;
  built.emplace(0, orbit);
  auto get = [&](std::size_t k) -> const std::optional<AdmissibleOrbit>& {
    auto it = built.find(k);
    if (it == built.end()) it = built.emplace(k, build(k)).first;
    return it->second;
  };

  // The window may start and end anywhere on the two end segments as long as
  // it keeps clear of the face crossings next to the first and last contacts.
  auto trimmed = [&](AdmissibleOrbit o) {
    const auto& P = o.points;
    const double margin = 0.1 + 2.0 * o.r0;
    const double first = (P[1] - P[0]).norm();
    const double last = (P[P.size() - 1] - P[P.size() - 2]).norm();
    double excess = o.length - wanted_length;
    o.tail_trim = std::clamp(excess, 0.0, std::max(0.0, last - margin));
    excess -= o.tail_trim;
    o.lead_trim = std::clamp(excess, 0.0, std::max(0.0, first - margin));
    return o;
  };

  const double extra = wanted_length - orbit.length;
  double cycle_time = 3.5;
  auto cycles = static_cast<std::size_t>(std::ceil(std::max(0.0, extra) / cycle_time));
  for (int round = 0; round < opts.max_rounds; ++round) {
    const auto& trial = get(cycles);
    if (!trial) break;
    if (cycles > 0) cycle_time = (trial->length - orbit.length) / static_cast<double>(cycles);
    if (trial->length < wanted_length) {
      cycles = std::max(cycles + 1, static_cast<std::size_t>(std::ceil(extra / cycle_time)));
      continue;
    }
    if (cycles > 0) {
      const auto& shorter = get(cycles - 1);
      if (shorter && shorter->length >= wanted_length) {
        --cycles;
        continue;
      }
    }
    break;
  }

  AdmissibleOrbit best = orbit;
  for (std::size_t k : {cycles, cycles > 0 ? cycles - 1 : cycles}) {
    const auto& candidate = get(k);
    if (!candidate) continue;
    AdmissibleOrbit o = trimmed(*candidate);
    if (error(o) < error(best)) best = std::move(o);
  }
  if (error(best) > opts.relative_tolerance * target_speed)
    throw ConstructionError("idle cycles could not bring the speed within tolerance of the target");
  return best;
}

std::vector<PlanOptions> entry_variants(const ReducedWord& w, const PlanOptions& base) {
  if (w.empty()) throw std::invalid_argument("entry_variants: the word must be nonempty");
  std::vector<PlanOptions> out{base};
  const EdgePlan first = plan_word(w, base);
  const EntryState taken{first.vertices[1].edge, first.vertices[1].force};
  const Letter in = w[0];
  const int plane = in.sign > 0 ? 0 : 1;
  for (int p : other_axes(in.axis)) {
    const int q = 6 - in.axis - p;
    for (int off = 0; off <= 1; ++off) {
      Cell edge_base = Cell::Zero();
      edge_base[ax(in.axis)] = plane;
      edge_base[ax(q)] = off;
      for (int f : {-1, 1}) {
        const EntryState s{{p, edge_base}, f};
        if (s == taken) continue;
        PlanOptions o = base;
        o.initial_entry = s;
        out.push_back(o);
      }
    }
  }
  return out;
}

ValidatedOrbit construct_at_speed(const ReducedWord& w, double r0, double target_speed, const PlanOptions& base,
                                  const IdleOptions& opts) {
  if (!(r0 > 0.0)) throw std::invalid_argument("construct_at_speed: r0 must be positive");
  std::optional<ConstructionError> last;
  for (const PlanOptions& po : entry_variants(w, base)) {
    try {
      const AdmissibleOrbit orbit = minimize_arclength(plan_word(w, po), r0, opts.minimize);
      if (target_speed > orbit.speed() * (1.0 + 1e-12)) {
        last = ConstructionError("target speed exceeds the speed of the constructed orbit");
        continue;
      }
      ValidatedOrbit out{insert_idle_runs(orbit, target_speed, opts), {}};
      out.record = validate_orbit(out.orbit);
      out.orbit.validated = true;
      return out;
    } catch (const ConstructionError& e) {
      last = e;
    }
  }
  throw *last;
}

}  // namespace cylbill
