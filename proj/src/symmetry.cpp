#include "cylbill/symmetry.hpp"

#include <algorithm>

namespace cylbill {

const std::array<LatticeSymmetry, 48>& LatticeSymmetry::all() {
  static const auto table = [] {
    std::array<LatticeSymmetry, 48> out;
    std::array<int, 3> perm{1, 2, 3};
    int n = 0;
    do {
      for (int s = 0; s < 8; ++s) {
        out[n].perm = perm;
        out[n].sign = {(s & 1) ? -1 : 1, (s & 2) ? -1 : 1, (s & 4) ? -1 : 1};
        ++n;
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
  }();
  return table;
}

Vec3 LatticeSymmetry::apply(const Vec3& x) const {
  Vec3 y;
  for (int i = 0; i < 3; ++i) y[ax(perm[i])] = sign[i] * x[i];
  return y;
}

Cell LatticeSymmetry::apply(const Cell& x) const {
  Cell y;
  for (int i = 0; i < 3; ++i) y[ax(perm[i])] = sign[i] * x[i];
  return y;
}

Letter LatticeSymmetry::apply(Letter l) const {
  return {perm[ax(l.axis)], l.sign * sign[ax(l.axis)]};
}

std::pair<int, int> LatticeSymmetry::apply_direction(int axis, int s) const {
  return {perm[ax(axis)], s * sign[ax(axis)]};
}

ScattererAxis LatticeSymmetry::apply(const ScattererAxis& line) const {
  Cell p = Cell::Zero();
  const auto [j, k] = other_axes(line.axis);
  p[ax(j)] = line.base[0];
  p[ax(k)] = line.base[1];
  const Cell q = apply(p);
  ScattererAxis out;
  out.axis = perm[ax(line.axis)];
  const auto [j2, k2] = other_axes(out.axis);
  out.base = {q[ax(j2)], q[ax(k2)]};
  return out;
}

LatticeSymmetry LatticeSymmetry::inverse() const {
  LatticeSymmetry inv;
  for (int i = 0; i < 3; ++i) {
    inv.perm[ax(perm[i])] = i + 1;
    inv.sign[ax(perm[i])] = sign[i];
  }
  return inv;
}

LatticeSymmetry LatticeSymmetry::compose(const LatticeSymmetry& inner) const {
  LatticeSymmetry out;
  for (int i = 0; i < 3; ++i) {
    const int mid = inner.perm[i];
    out.perm[i] = perm[ax(mid)];
    out.sign[i] = inner.sign[i] * sign[ax(mid)];
  }
  return out;
}

CellSymmetry CellSymmetry::onto(const LatticeSymmetry& p, const Cell& cell) {
  // P maps [0,1]^3 onto a cube whose low corner has -1 on every negated axis.
  Cell low = Cell::Zero();
  for (int i = 0; i < 3; ++i)
    if (p.sign[i] < 0) low[ax(p.perm[i])] = -1;
  return {p, cell - low};
}

Vec3 CellSymmetry::apply(const Vec3& x) const { return linear.apply(x) + shift.cast<double>(); }

Edge CellSymmetry::apply(const Edge& e) const {
  Cell a = linear.apply(e.base) + shift;
  Cell tip = e.base;
  tip[ax(e.axis)] += 1;
  Cell b = linear.apply(tip) + shift;
  return {linear.perm[ax(e.axis)], a.cwiseMin(b)};
}

int CellSymmetry::apply_force(const Edge& e, int force) const {
  return force * linear.sign[ax(e.axis)];
}

CellSymmetry CellSymmetry::inverse() const {
  const LatticeSymmetry inv = linear.inverse();
  return {inv, -inv.apply(shift)};
}

}  // namespace cylbill
