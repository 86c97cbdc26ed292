#include "cylbill/admissible.hpp"

#include <algorithm>
#include <sstream>

namespace cylbill {

namespace {

Cell step_of(Letter l) {
  Cell d = Cell::Zero();
  d[ax(l.axis)] = l.sign;
  return d;
}

// Reference configuration of an end cell: the contact next to the anchor is
// {0}x{1}x[0,1] and the anchor edge is {1}x[0,1]x{1}.
const Edge kEndContact{3, Cell(0, 1, 0)};
const Edge kEndAnchor{2, Cell(1, 0, 1)};

Edge translate(Edge e, const Cell& d) {
  e.base += d;
  return e;
}

/// Frames of `cell` whose first reference axis points along `dir`.
std::vector<CellSymmetry> frames_along(const Cell& cell, Letter dir) {
  std::vector<CellSymmetry> out;
  for (const auto& p : LatticeSymmetry::all())
    if (p.perm[0] == dir.axis && p.sign[0] == dir.sign) out.push_back(CellSymmetry::onto(p, cell));
  return out;
}

/// The frame mapping (ref_edge, ref_force) onto `state`.
CellSymmetry frame_for_state(const Cell& cell, Letter dir, const Edge& ref_edge, int ref_force,
                             const EntryState& state) {
  for (const auto& g : frames_along(cell, dir))
    if (g.apply(ref_edge) == state.edge && g.apply_force(ref_edge, ref_force) == state.force) return g;
  throw std::invalid_argument("entry state does not lie on the entrance face");
}

/// Entry states on the face through which `dir` enters `cell`, in a fixed order.
std::vector<EntryState> face_states(const Cell& cell, Letter dir) {
  std::vector<EntryState> out;
  const int a = dir.axis;
  const int plane = dir.sign > 0 ? cell[ax(a)] : cell[ax(a)] + 1;
  for (int p : other_axes(a)) {
    const int q = 6 - a - p;
    for (int off = 0; off <= 1; ++off) {
      Cell base = cell;
      base[ax(a)] = plane;
      base[ax(q)] += off;
      for (int f : {-1, 1}) out.push_back({Edge{p, base}, f});
    }
  }
  return out;
}

struct Builder {
  EdgePlan plan;
  const CaseOptions& opts;

  void push(const Edge& e, int force, VertexKind kind) {
    PlanVertex v;
    v.edge = e;
    v.force = force;
    v.kind = kind;
    plan.vertices.push_back(v);
  }

  // Appends the contacts after the entry of a turn cell; returns the exit state.
  EntryState turn(const Cell& cell, Letter in, Letter out, const EntryState& entry) {
    const CaseMatch m = match_turn(cell, in, out, entry, opts);
    CellVisit visit;
    visit.cell = cell;
    visit.first = plan.vertices.size() - 1;
    visit.turn_case = m.pattern.id;
    for (std::size_t i = 0; i < m.pattern.next.size(); ++i) {
      const bool last = i + 1 == m.pattern.next.size();
      push(m.frame.apply(m.pattern.next[i]), 0, last ? VertexKind::Crossing : VertexKind::Intermediate);
    }
    visit.last = plan.vertices.size() - 1;
    plan.cells.push_back(visit);
    const Edge exit_ref = m.pattern.next.back();
    return {m.frame.apply(exit_ref), m.frame.apply_force(exit_ref, m.pattern.exit_force)};
  }
};

}  // namespace

Edge EdgePlan::edge_at(std::size_t i) const {
  if (periodic && i >= vertices.size()) {
    const std::size_t n = vertices.size();
    const auto wraps = static_cast<int>(i / n);
    return translate(vertices[i % n].edge, period_shift * wraps);
  }
  return vertices.at(i).edge;
}

int force_from(const Edge& edge, const Vec3& neighbour) {
  const int a = ax(edge.axis);
  return neighbour[a] > edge.base[a] + 0.5 ? 1 : -1;
}

void assign_forces(EdgePlan& plan) {
  const std::size_t n = plan.vertices.size();
  for (std::size_t i = 0; i < n; ++i) {
    PlanVertex& v = plan.vertices[i];
    if (v.pinned) {
      v.force = 0;
      continue;
    }
    Vec3 prev;
    if (i > 0)
      prev = plan.vertices[i - 1].edge.midpoint();
    else if (plan.periodic)
      prev = plan.vertices[n - 1].edge.midpoint() - plan.period_shift.cast<double>();
    else
      continue;
    v.force = force_from(v.edge, prev);
  }
}

EdgePlan plan_word(const ReducedWord& w, const PlanOptions& opts) {
  if (w.empty()) throw std::invalid_argument("plan_word: the word must be nonempty");
  const std::size_t n = w.size();
  Builder b{EdgePlan{}, opts.cases};
  b.plan.word = w;

  std::vector<Cell> cells(n + 1);
  cells[1] = Cell::Zero();
  cells[0] = -step_of(w[0]);
  for (std::size_t k = 2; k <= n; ++k) cells[k] = cells[k - 1] + step_of(w[k - 1]);

  // Initial compartment, seen backwards in time: the first reference axis
  // points against w_1, so the shared face is the reference face x1 = 0.
  const Letter back_dir = w[0].inverse();
  CellSymmetry start_frame;
  if (opts.initial_entry) {
    start_frame = frame_for_state(cells[0], back_dir, kEndContact, +1, *opts.initial_entry);
  } else {
    LatticeSymmetry p;
    const auto [j, k] = other_axes(w[0].axis);
    p.perm = {w[0].axis, j, k};
    p.sign = {-w[0].sign, 1, -1};
    start_frame = CellSymmetry::onto(p, cells[0]);
  }
  PlanVertex anchor;
  anchor.edge = start_frame.apply(kEndAnchor);
  anchor.pinned = true;
  anchor.kind = VertexKind::Anchor;
  b.plan.vertices.push_back(anchor);
  EntryState state{start_frame.apply(kEndContact), start_frame.apply_force(kEndContact, +1)};
  b.push(state.edge, state.force, VertexKind::Crossing);
  b.plan.cells.push_back({cells[0], 0, 1, std::nullopt});

  for (std::size_t k = 1; k < n; ++k) state = b.turn(cells[k], w[k - 1], w[k], state);

  const CellSymmetry end_frame = frame_for_state(cells[n], w[n - 1], kEndContact, -1, state);
  CellVisit last;
  last.cell = cells[n];
  last.first = b.plan.vertices.size() - 1;
  anchor.edge = end_frame.apply(kEndAnchor);
  b.plan.vertices.push_back(anchor);
  last.last = b.plan.vertices.size() - 1;
  b.plan.cells.push_back(last);

  assign_forces(b.plan);
  return std::move(b.plan);
}

EdgePlan plan_periodic(const ReducedWord& w, const PlanOptions& opts) {
  if (w.empty()) throw std::invalid_argument("plan_periodic: the word must be nonempty");
  if (!w.cyclically_reduced()) throw std::invalid_argument("plan_periodic: the word must be cyclically reduced");
  const std::size_t m = w.size();
  Cell shift = Cell::Zero();
  for (Letter l : w) shift += step_of(l);

  // One pass of turns starting from `s`, entering cell `c0` through w_m.
  auto pass = [&](Builder& b, Cell c0, EntryState s) {
    Cell c = c0;
    Letter in = w[m - 1];
    for (std::size_t k = 0; k < m; ++k) {
      s = b.turn(c, in, w[k], s);
      in = w[k];
      c += step_of(w[k]);
    }
    return s;
  };

  const auto states = face_states(Cell::Zero(), w[m - 1]);
  auto phi = [&](const EntryState& s) {
    Builder b{EdgePlan{}, opts.cases};
    b.push(s.edge, s.force, VertexKind::Crossing);
    EntryState e = pass(b, Cell::Zero(), s);
    e.edge = translate(e.edge, -shift);
    return e;
  };

  std::size_t best_len = 0, best_state = 0;
  for (std::size_t i = 0; i < states.size(); ++i) {
    EntryState s = states[i];
    for (std::size_t r = 1; r <= states.size(); ++r) {
      s = phi(s);
      if (s == states[i]) {
        if (best_len == 0 || r < best_len) {
          best_len = r;
          best_state = i;
        }
        break;
      }
    }
  }
  if (best_len == 0) throw std::logic_error("plan_periodic: no closed entry-state cycle");

  Builder b{EdgePlan{}, opts.cases};
  EntryState s = states[best_state];
  b.push(s.edge, s.force, VertexKind::Crossing);
  Cell c0 = Cell::Zero();
  for (std::size_t r = 0; r < best_len; ++r) {
    s = pass(b, c0, s);
    c0 += shift;
  }
  // The final exit contact is the first one translated by a period.
  b.plan.vertices.pop_back();
  std::vector<Letter> letters;
  for (std::size_t r = 0; r < best_len; ++r) letters.insert(letters.end(), w.begin(), w.end());
  b.plan.word = reduce(letters);
  b.plan.periodic = true;
  b.plan.period_shift = shift * static_cast<int>(best_len);
  assign_forces(b.plan);
  return std::move(b.plan);
}

std::vector<std::string> check_plan(const EdgePlan& plan) {
  std::vector<std::string> bad;
  auto complain = [&bad](auto&&... parts) {
    std::ostringstream os;
    (os << ... << parts);
    bad.push_back(os.str());
  };
  const std::size_t nv = plan.vertices.size();
  const std::size_t nc = plan.cells.size();
  const std::size_t m = plan.word.size();
  if (nv == 0 || nc == 0) {
    complain("empty plan");
    return bad;
  }
  if (nc != (plan.periodic ? m : m + 1)) complain("compartment count ", nc, " does not fit word length ", m);
  const std::size_t end = plan.periodic ? nv : nv - 1;

  for (std::size_t k = 0; k < nc; ++k) {
    const CellVisit& c = plan.cells[k];
    if (k < m) {
      const Cell next = k + 1 < nc ? plan.cells[k + 1].cell : plan.cells[0].cell + plan.period_shift;
      Cell d = Cell::Zero();
      d[ax(plan.word[k].axis)] = plan.word[k].sign;
      if (next - c.cell != d) complain("compartment ", k, " is not followed along letter ", k);
    }
    if (k == 0 && c.first != 0) complain("first compartment does not start at vertex 0");
    if (k + 1 < nc && c.last != plan.cells[k + 1].first) complain("compartments ", k, " and ", k + 1, " do not share a contact");
    if (k + 1 == nc && c.last != end) complain("last compartment does not end at the last vertex");
    if (c.first >= c.last) complain("compartment ", k, " has an empty range");
    for (std::size_t i = c.first; i <= c.last && i <= end; ++i)
      if (!plan.edge_at(i).on_cell(c.cell)) complain("vertex ", i, " is not an edge of compartment ", k);
  }

  for (std::size_t i = 0; i < nv; ++i) {
    const PlanVertex& v = plan.vertices[i];
    const bool end_vertex = !plan.periodic && (i == 0 || i + 1 == nv);
    if (v.pinned != end_vertex) complain("vertex ", i, end_vertex ? " must be pinned" : " must be free");
  }

  for (std::size_t s = 0; s < plan.segment_count(); ++s) {
    const Edge a = plan.edge_at(s), b = plan.edge_at(s + 1);
    if (a.axis == b.axis) complain("segment ", s, " joins parallel edges");
    if (!(hull_volume(a, b) > 0.0)) complain("segment ", s, " joins intersecting edges");
  }

  for (std::size_t i = 0; i < nv; ++i) {
    const PlanVertex& v = plan.vertices[i];
    if (v.pinned) continue;
    const Vec3 prev = i > 0 ? plan.vertices[i - 1].edge.midpoint()
                            : plan.vertices[nv - 1].edge.midpoint() - plan.period_shift.cast<double>();
    const Vec3 next = plan.edge_at(i + 1).midpoint();
    const int a = ax(v.edge.axis);
    const double lo = v.edge.base[a];
    const bool prev_end = prev[a] == lo || prev[a] == lo + 1;
    const bool next_end = next[a] == lo || next[a] == lo + 1;
    if (!prev_end || !next_end || prev[a] == next[a]) complain("vertex ", i, " is not balanced");
    if (v.force != force_from(v.edge, prev)) complain("vertex ", i, " carries an inconsistent force");
  }
  return bad;
}

}  // namespace cylbill
