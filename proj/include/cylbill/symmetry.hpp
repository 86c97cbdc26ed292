#pragma once

#include "cylbill/freegroup.hpp"
#include "cylbill/geometry.hpp"

#include <array>

namespace cylbill {

/// Signed permutation of the coordinate axes: P e_i = sign[i] e_{perm[i]}
/// (one-based axes). These 48 maps generate the point group of the scatterer
/// lattice.
struct LatticeSymmetry {
  std::array<int, 3> perm{1, 2, 3};
  std::array<int, 3> sign{1, 1, 1};

  static const std::array<LatticeSymmetry, 48>& all();

  Vec3 apply(const Vec3& x) const;
  Cell apply(const Cell& x) const;
  Letter apply(Letter l) const;
  ScattererAxis apply(const ScattererAxis& line) const;
  /// Image of the direction sigma * e_axis, returned as (axis, sign).
  std::pair<int, int> apply_direction(int axis, int sign) const;
  LatticeSymmetry inverse() const;
  LatticeSymmetry compose(const LatticeSymmetry& inner) const;  // this o inner

  friend bool operator==(const LatticeSymmetry&, const LatticeSymmetry&) = default;
};

/// x -> P x + shift with P a lattice symmetry and an integer shift. Maps unit
/// cells to unit cells and cube edges to cube edges.
struct CellSymmetry {
  LatticeSymmetry linear;
  Cell shift = Cell::Zero();

  /// The map taking the reference cube [0,1]^3 onto `cell` with linear part P.
  static CellSymmetry onto(const LatticeSymmetry& p, const Cell& cell);

  Vec3 apply(const Vec3& x) const;
  Edge apply(const Edge& e) const;
  /// Image of a force sign along edge e (force direction sign * e_{e.axis}).
  int apply_force(const Edge& e, int force) const;
  CellSymmetry inverse() const;
};

}  // namespace cylbill
