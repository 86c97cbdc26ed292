#include "cylbill/admissible.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace cylbill {

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

struct VertexGeom {
  Vec3 p;
  Eigen::Matrix<double, 3, 2> J = Eigen::Matrix<double, 3, 2>::Zero();
  Vec3 curvature = Vec3::Zero();  // d^2 p / d theta^2
};

// Length of a closed or open polyline whose vertices slide on edges (r0 = 0)
// or on the cylinders around them (r0 > 0). Pinned vertices are fixed points.
class Chain {
 public:
  Chain(const EdgePlan& plan, double r0, std::vector<Vec3> pinned_points)
      : plan_(plan), r0_(r0), pinned_(std::move(pinned_points)) {
    const std::size_t n = plan.vertices.size();
    offset_.assign(n, -1);
    width_ = r0 > 0.0 ? 2 : 1;
    int next = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (plan.vertices[i].pinned) continue;
      offset_[i] = next;
      next += width_;
    }
    dim_ = next;
  }

  int dim() const { return dim_; }
  int width() const { return width_; }
  int offset(std::size_t i) const { return offset_[i]; }
  bool bounded(int k) const { return width_ == 1 || k % 2 == 0; }

  VertexGeom geom(const Eigen::VectorXd& x, std::size_t i) const {
    const std::size_t n = plan_.vertices.size();
    const std::size_t vi = i % n;
    const Vec3 shift = (plan_.period_shift * static_cast<int>(i / n)).cast<double>();
    VertexGeom g;
    if (plan_.vertices[vi].pinned) {
      g.p = pinned_[vi] + shift;
      return g;
    }
    const Edge& e = plan_.vertices[vi].edge;
    const int o = offset_[vi];
    g.p = e.point(x[o]) + shift;
    g.J.col(0) = unit_vector(e.axis);
    if (width_ == 2) {
      const auto [j, k] = other_axes(e.axis);
      const double c = std::cos(x[o + 1]), s = std::sin(x[o + 1]);
      const Vec3 nu = c * unit_vector(j) + s * unit_vector(k);
      const Vec3 tau = -s * unit_vector(j) + c * unit_vector(k);
      g.p += r0_ * nu;
      g.J.col(1) = r0_ * tau;
      g.curvature = -r0_ * nu;
    }
    return g;
  }

  Vec3 point(const Eigen::VectorXd& x, std::size_t i) const { return geom(x, i).p; }

  double value(const Eigen::VectorXd& x) const {
    double f = 0.0;
    Vec3 prev = point(x, 0);
    for (std::size_t s = 0; s < plan_.segment_count(); ++s) {
      const Vec3 cur = point(x, s + 1);
      f += (cur - prev).norm();
      prev = cur;
    }
    return f;
  }

  double evaluate(const Eigen::VectorXd& x, Eigen::VectorXd& grad, std::vector<Triplet>* hess) const {
    const std::size_t nv = plan_.vertices.size();
    std::vector<Vec3> force(nv, Vec3::Zero());  // d f / d p_i
    grad.setZero(dim_);
    if (hess) hess->clear();
    double f = 0.0;
    VertexGeom a = geom(x, 0);
    for (std::size_t s = 0; s < plan_.segment_count(); ++s) {
      const VertexGeom b = geom(x, s + 1);
      const std::size_t ia = s % nv, ib = (s + 1) % nv;
      const Vec3 d = b.p - a.p;
      const double len = d.norm();
      f += len;
      const Vec3 u = d / len;
      force[ia] -= u;
      force[ib] += u;
      if (hess) {
        const Eigen::Matrix3d M = (Eigen::Matrix3d::Identity() - u * u.transpose()) / len;
        add_block(*hess, ia, ia, a.J.transpose() * M * a.J);
        add_block(*hess, ib, ib, b.J.transpose() * M * b.J);
        const Eigen::Matrix2d cross = -(a.J.transpose() * M * b.J);
        add_block(*hess, ia, ib, cross);
        add_block(*hess, ib, ia, cross.transpose());
      }
      a = b;
    }
    for (std::size_t i = 0; i < nv; ++i) {
      const int o = offset_[i];
      if (o < 0) continue;
      const VertexGeom g = geom(x, i);
      grad[o] = g.J.col(0).dot(force[i]);
      if (width_ == 2) {
        grad[o + 1] = g.J.col(1).dot(force[i]);
        if (hess) hess->emplace_back(o + 1, o + 1, force[i].dot(g.curvature));
      }
    }
    return f;
  }

 private:
  void add_block(std::vector<Triplet>& h, std::size_t i, std::size_t j, const Eigen::Matrix2d& blk) const {
    const int oi = offset_[i], oj = offset_[j];
    if (oi < 0 || oj < 0) return;
    for (int r = 0; r < width_; ++r)
      for (int c = 0; c < width_; ++c) h.emplace_back(oi + r, oj + c, blk(r, c));
  }

  const EdgePlan& plan_;
  double r0_;
  std::vector<Vec3> pinned_;
  std::vector<int> offset_;
  int width_ = 1;
  int dim_ = 0;
};

struct SolveResult {
  Eigen::VectorXd x;
  std::vector<double> history;
  double gradient_norm = 0.0;
  int iterations = 0;
};

Eigen::VectorXd project(const Chain& chain, Eigen::VectorXd x) {
  for (int k = 0; k < x.size(); ++k)
    if (chain.bounded(k)) x[k] = std::clamp(x[k], 0.0, 1.0);
  return x;
}

Eigen::VectorXd projected_gradient(const Chain& chain, const Eigen::VectorXd& x, const Eigen::VectorXd& g) {
  Eigen::VectorXd pg = g;
  for (int k = 0; k < x.size(); ++k) {
    if (!chain.bounded(k)) continue;
    if ((x[k] <= 0.0 && g[k] > 0.0) || (x[k] >= 1.0 && g[k] < 0.0)) pg[k] = 0.0;
  }
  return pg;
}

// Projected Newton iteration with an active set on the box constraints,
// Levenberg damping when the reduced Hessian is not positive definite, and
// Armijo backtracking along the projected path.
SolveResult solve(const Chain& chain, Eigen::VectorXd x, const MinimizeOptions& opts) {
  SolveResult res;
  const int n = chain.dim();
  Eigen::VectorXd g(n);
  std::vector<Triplet> trips;
  x = project(chain, x);
  if (n == 0) {
    res.history.push_back(chain.evaluate(x, g, nullptr));
    res.x = x;
    return res;
  }
  double f = chain.evaluate(x, g, &trips);
  res.history.push_back(f);
  Eigen::SimplicialLDLT<SpMat> ldlt;
  bool analysed = false;
  double damping = 0.0;

  for (int it = 0; it < opts.max_iterations; ++it) {
    const Eigen::VectorXd pg = projected_gradient(chain, x, g);
    res.gradient_norm = pg.norm();
    res.iterations = it;
    if (res.gradient_norm < opts.gradient_tolerance) {
      res.x = x;
      return res;
    }

    std::vector<char> active(n, 0);
    for (int k = 0; k < n; ++k) active[k] = pg[k] == 0.0 && g[k] != 0.0;
    std::vector<Triplet> reduced;
    reduced.reserve(trips.size() + n);
    // Entries of active rows stay as explicit zeros so the sparsity pattern,
    // and with it the symbolic factorisation, never changes.
    for (const auto& t : trips)
      reduced.emplace_back(t.row(), t.col(), active[t.row()] || active[t.col()] ? 0.0 : t.value());
    Eigen::VectorXd rhs = -pg;

    Eigen::VectorXd d;
    for (int attempt = 0; attempt < 40; ++attempt) {
      std::vector<Triplet> sys = reduced;
      for (int k = 0; k < n; ++k) sys.emplace_back(k, k, active[k] ? 1.0 : damping);
      SpMat H(n, n);
      H.setFromTriplets(sys.begin(), sys.end());
      if (!analysed) {
        ldlt.analyzePattern(H);
        analysed = true;
      }
      ldlt.factorize(H);
      if (ldlt.info() == Eigen::Success && ldlt.vectorD().minCoeff() > 0.0) {
        d = ldlt.solve(rhs);
        break;
      }
      damping = damping == 0.0 ? 1e-8 : damping * 10.0;
    }
    if (d.size() == 0 || !d.allFinite() || g.dot(d) >= 0.0) d = -pg;

    double alpha = 1.0;
    bool accepted = false;
    Eigen::VectorXd x_new;
    double f_new = f;
    const double slack = 4.0 * std::numeric_limits<double>::epsilon() * std::abs(f);
    double step = 0.0;
    while (alpha > 1e-20) {
      x_new = project(chain, x + alpha * d);
      step = (x_new - x).norm();
      if (step < opts.step_tolerance) break;
      f_new = chain.value(x_new);
      if (f_new <= f + 1e-4 * g.dot(x_new - x) + slack) {
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) {
      res.x = x;
      return res;
    }
    damping = alpha == 1.0 ? damping * 0.1 : damping;
    if (damping < 1e-12) damping = 0.0;
    x = x_new;
    f = chain.evaluate(x, g, &trips);
    res.history.push_back(f);
    if (step < opts.step_tolerance) {
      res.x = x;
      return res;
    }
  }
  throw NonConvergence("arc-length minimisation did not converge within the iteration budget");
}

std::vector<Vec3> anchor_points(const EdgePlan& plan, double r0, const std::vector<Vec3>& neighbours) {
  std::vector<Vec3> pins(plan.vertices.size(), Vec3::Zero());
  for (std::size_t i = 0; i < plan.vertices.size(); ++i) {
    const PlanVertex& v = plan.vertices[i];
    if (!v.pinned) continue;
    pins[i] = v.edge.point(v.pin);
    if (r0 > 0.0) {
      Vec3 radial = neighbours[i] - pins[i];
      radial[ax(v.edge.axis)] = 0.0;
      pins[i] += r0 * radial.normalized();
    }
  }
  return pins;
}

AdmissibleOrbit finish(const EdgePlan& plan, double r0, const Chain& chain, const SolveResult& res,
                       const MinimizeOptions& opts) {
  AdmissibleOrbit orb;
  orb.plan = plan;
  orb.r0 = r0;
  orb.objective_history = res.history;
  orb.gradient_norm = res.gradient_norm;
  orb.iterations = res.iterations;
  const std::size_t nv = plan.vertices.size();
  orb.points.resize(nv);
  orb.axial.assign(nv, 0.5);
  orb.angle.assign(nv, 0.0);
  orb.interior_margin = 0.5;
  for (std::size_t i = 0; i < nv; ++i) {
    orb.points[i] = chain.point(res.x, i);
    const int o = chain.offset(i);
    if (o < 0) {
      orb.axial[i] = plan.vertices[i].pin;
      continue;
    }
    orb.axial[i] = res.x[o];
    if (chain.width() == 2) orb.angle[i] = std::remainder(res.x[o + 1], 2.0 * std::numbers::pi);
    orb.interior_margin = std::min(orb.interior_margin, std::min(res.x[o], 1.0 - res.x[o]));
  }
  for (std::size_t i = 0; i < nv; ++i) {
    const int o = chain.offset(i);
    if (o >= 0 && std::min(res.x[o], 1.0 - res.x[o]) < opts.balance_margin)
      throw BalanceViolation("contact " + std::to_string(i) + " reached an end of its edge", i);
  }
  orb.length = 0.0;
  std::vector<double> seg(plan.segment_count());
  for (std::size_t s = 0; s < seg.size(); ++s) {
    seg[s] = (orb.point_at(s + 1) - orb.point_at(s)).norm();
    orb.length += seg[s];
  }
  for (const auto& c : plan.cells) {
    double t = 0.0;
    for (std::size_t s = c.first; s < c.last; ++s) t += seg[s];
    orb.cell_times.push_back(t);
  }
  return orb;
}

}  // namespace

Vec3 AdmissibleOrbit::point_at(std::size_t i) const {
  const std::size_t n = points.size();
  if (i < n) return points[i];
  if (!plan.periodic) throw std::out_of_range("point_at: index past the end of an open orbit");
  return points[i % n] + (plan.period_shift * static_cast<int>(i / n)).cast<double>();
}

AdmissibleOrbit minimize_arclength(const EdgePlan& plan, double r0, const MinimizeOptions& opts) {
  if (!(r0 >= 0.0 && r0 < 0.5)) throw std::invalid_argument("r0 must lie in [0, 1/2)");
  if (plan.vertices.size() < 2) throw std::invalid_argument("plan needs at least two vertices");
  const std::size_t nv = plan.vertices.size();

  const Chain flat(plan, 0.0, anchor_points(plan, 0.0, {}));
  const SolveResult base = solve(flat, Eigen::VectorXd::Constant(flat.dim(), 0.5), opts);
  if (r0 == 0.0) return finish(plan, 0.0, flat, base, opts);

  // Swell: anchors move radially toward their neighbour, free contacts take
  // the outward normal bisecting the flat solution's turn.
  std::vector<Vec3> flat_pts(nv + 1);
  for (std::size_t i = 0; i <= nv; ++i)
    if (i < nv || plan.periodic) flat_pts[i] = flat.point(base.x, i);
  std::vector<Vec3> neighbours(nv, Vec3::Zero());
  if (!plan.periodic) {
    neighbours[0] = flat_pts[1];
    neighbours[nv - 1] = flat_pts[nv - 2];
  }
  const Chain round(plan, r0, anchor_points(plan, r0, neighbours));
  Eigen::VectorXd x0(round.dim());
  for (std::size_t i = 0; i < nv; ++i) {
    const int o = round.offset(i);
    if (o < 0) continue;
    const Vec3 prev = i > 0 ? flat_pts[i - 1] : flat_pts[nv - 1] - plan.period_shift.cast<double>();
    const Vec3 next = flat_pts[i + 1];
    const Vec3 normal = (next - flat_pts[i]).normalized() - (flat_pts[i] - prev).normalized();
    const auto [j, k] = other_axes(plan.vertices[i].edge.axis);
    x0[o] = base.x[flat.offset(i)];
    x0[o + 1] = std::atan2(normal[ax(k)], normal[ax(j)]);
  }
  const SolveResult res = solve(round, x0, opts);
  return finish(plan, r0, round, res, opts);
}

namespace {

template <class Fn>
void for_each_free_turn(const AdmissibleOrbit& orbit, Fn&& fn) {
  const std::size_t nv = orbit.points.size();
  for (std::size_t i = 0; i < nv; ++i) {
    if (orbit.plan.vertices[i].pinned) continue;
    const Vec3 prev = i > 0 ? orbit.points[i - 1] : orbit.point_at(nv - 1) - orbit.plan.period_shift.cast<double>();
    const Vec3 next = orbit.point_at(i + 1);
    fn(i, (orbit.points[i] - prev).normalized(), (next - orbit.points[i]).normalized());
  }
}

}  // namespace

double specular_residual(const AdmissibleOrbit& orbit) {
  if (!(orbit.r0 > 0.0)) throw std::invalid_argument("specular_residual needs r0 > 0");
  double worst = 0.0;
  for_each_free_turn(orbit, [&](std::size_t i, const Vec3& in, const Vec3& out) {
    const Vec3 n = orbit.plan.vertices[i].edge.line().offset(orbit.points[i]).normalized();
    const Vec3 r = in - 2.0 * in.dot(n) * n;
    worst = std::max(worst, (r - out).norm());
  });
  return worst;
}

double fermat_residual(const AdmissibleOrbit& orbit) {
  double worst = 0.0;
  for_each_free_turn(orbit, [&](std::size_t i, const Vec3& in, const Vec3& out) {
    worst = std::max(worst, std::abs((in - out)[ax(orbit.plan.vertices[i].edge.axis)]));
  });
  return worst;
}

}  // namespace cylbill
