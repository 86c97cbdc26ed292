#include "cylbill/admissible.hpp"

#include <numbers>

namespace cylbill {

namespace {

Edge ref_edge(int axis, int x, int y, int z) { return {axis, Cell(x, y, z)}; }

}  // namespace

std::string_view to_string(TurnCase c) {
  switch (c) {
    case TurnCase::ExitSideEdge: return "exit-side-edge";
    case TurnCase::FarSideEdge: return "far-side-edge";
    case TurnCase::CrossEdgePulledBack: return "cross-edge-back";
    case TurnCase::CrossEdgePulledAhead: return "cross-edge-ahead";
    case TurnCase::Straight: return "straight";
  }
  return "?";
}

std::string_view to_string(VertexKind k) {
  switch (k) {
    case VertexKind::Anchor: return "anchor";
    case VertexKind::Crossing: return "crossing";
    case VertexKind::Intermediate: return "intermediate";
  }
  return "?";
}

std::vector<CasePattern> canonical_cases(const CaseOptions& opts) {
  constexpr double s3 = std::numbers::sqrt3;
  const Edge up_far = ref_edge(3, 0, 1, 0);    // {0}x{1}x[0,1]
  const Edge up_near = ref_edge(3, 0, 0, 0);   // {0}x{0}x[0,1]
  const Edge across = ref_edge(2, 0, 0, 0);    // {0}x[0,1]x{0}
  const Edge top_near = ref_edge(1, 0, 0, 1);  // [0,1]x{0}x{1}
  const Edge top_far = ref_edge(1, 0, 1, 1);   // [0,1]x{1}x{1}
  const Edge exit_up = ref_edge(3, 1, 1, 0);   // {1}x{1}x[0,1]

  std::vector<CasePattern> out;
  out.push_back({TurnCase::ExitSideEdge, up_far, -1, {top_near, exit_up}, +1, 3.0, false});
  out.push_back({TurnCase::FarSideEdge, up_near, -1, {top_far}, -1, s3, false});
  out.push_back({TurnCase::CrossEdgePulledBack, across, -1,
                 {opts.alternate_cross_exit ? top_far : exit_up}, -1, s3, false});
  out.push_back({TurnCase::CrossEdgePulledAhead, across, +1, {top_near, exit_up}, +1, 3.0, false});
  out.push_back({TurnCase::Straight, across, -1, {exit_up}, -1, s3, true});
  return out;
}

namespace {

template <class Fn>
void for_each_match(const Cell& cell, Letter in, Letter out, const EntryState& entry,
                    const CaseOptions& opts, Fn&& fn) {
  if (out.cancels(in)) throw std::invalid_argument("turn of a non-reduced word");
  const bool straight = in == out;
  const auto cases = canonical_cases(opts);
  for (const auto& p : LatticeSymmetry::all()) {
    if (p.perm[0] != in.axis || p.sign[0] != in.sign) continue;
    if (!straight && (p.perm[1] != out.axis || p.sign[1] != out.sign)) continue;
    const CellSymmetry frame = CellSymmetry::onto(p, cell);
    const CellSymmetry back = frame.inverse();
    const Edge e = back.apply(entry.edge);
    const int f = back.apply_force(entry.edge, entry.force);
    for (const auto& pattern : cases) {
      if (pattern.straight != straight) continue;
      if (pattern.entry == e && pattern.entry_force == f) fn(pattern, frame);
    }
  }
}

}  // namespace

int count_turn_matches(const Cell& cell, Letter in, Letter out, const EntryState& entry,
                       const CaseOptions& opts) {
  int n = 0;
  for_each_match(cell, in, out, entry, opts, [&](const CasePattern&, const CellSymmetry&) { ++n; });
  return n;
}

CaseMatch match_turn(const Cell& cell, Letter in, Letter out, const EntryState& entry,
                     const CaseOptions& opts) {
  std::optional<CaseMatch> found;
  int n = 0;
  for_each_match(cell, in, out, entry, opts, [&](const CasePattern& pattern, const CellSymmetry& frame) {
    ++n;
    found = CaseMatch{pattern, frame};
  });
  if (n != 1) throw std::logic_error("turn does not match exactly one case (" + std::to_string(n) + " matches)");
  return *found;
}

}  // namespace cylbill
