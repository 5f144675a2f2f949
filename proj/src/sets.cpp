#include "clreach/sets.hpp"

#include <cmath>

namespace clreach {

LpBall::LpBall(Vector center_, Vector radius_, double p_)
    : center(std::move(center_)), radius(std::move(radius_)), p(p_) {
  require(center.size() == radius.size(), "LpBall: center/radius dimension mismatch");
  require((radius.array() >= 0).all(), "LpBall: negative radius entry");
  require(p >= 1.0, "LpBall: norm order must be in [1, inf]");
}

bool LpBall::contains(const Vector& x, double tol) const {
  require(x.size() == dim(), "LpBall: point dimension mismatch");
  double acc = 0.0;
  for (Eigen::Index i = 0; i < dim(); ++i) {
    const double d = std::abs(x[i] - center[i]);
    if (radius[i] == 0.0) {
      if (d > tol) return false;
      continue;
    }
    const double r = d / radius[i];
    if (p == kInf) {
      acc = std::max(acc, r);
    } else if (p == 1.0) {
      acc += r;
    } else {
      acc += std::pow(r, p);
    }
  }
  if (p != kInf && p != 1.0) acc = std::pow(acc, 1.0 / p);
  return acc <= 1.0 + tol;
}

HPolytope::HPolytope(Matrix A_, Vector b_) : A(std::move(A_)), b(std::move(b_)) {
  require(A.rows() == b.size(), "HPolytope: row/offset count mismatch");
  require((b.array() > -kInf).all() && (b.array() < kInf).all(),
          "HPolytope: offsets must be finite");
}

bool HPolytope::contains(const Vector& x, double tol) const {
  require(x.size() == dim(), "HPolytope: point dimension mismatch");
  if (A.rows() == 0) return true;
  return ((A * x - b).array() <= tol).all();
}

Box::Box(Vector lo_, Vector hi_) : lo(std::move(lo_)), hi(std::move(hi_)) {
  require(lo.size() == hi.size(), "Box: lo/hi dimension mismatch");
  require((lo.array() <= hi.array()).all(), "Box: lo exceeds hi");
}

bool Box::contains(const Vector& x, double tol) const {
  require(x.size() == dim(), "Box: point dimension mismatch");
  return (x.array() >= lo.array() - tol).all() && (x.array() <= hi.array() + tol).all();
}

HPolytope Box::to_polytope() const {
  const Eigen::Index n = dim();
  Matrix A(2 * n, n);
  A << Matrix::Identity(n, n), -Matrix::Identity(n, n);
  Vector b(2 * n);
  b << hi, -lo;
  return HPolytope(std::move(A), std::move(b));
}

bool SetUnion::contains(const Vector& x, double tol) const {
  for (const auto& m : members) {
    const bool inside = std::visit([&](const auto& s) { return s.contains(x, tol); }, m);
    if (inside) return true;
  }
  return false;
}

LpResult lp_solve(const Vector& objective, const HPolytope& constraints) {
  require(objective.size() == constraints.dim(), "lp_solve: objective dimension mismatch");
  LpResult r = simplex_maximize(objective, constraints.A, constraints.b);
  if (r.status == LpStatus::Infeasible) throw InfeasibleError("lp_solve: constraints infeasible");
  if (r.status == LpStatus::Unbounded) throw UnboundedError("lp_solve: objective unbounded");
  return r;
}

double support_value(const Vector& direction, const LpBall& set) {
  require(direction.size() == set.dim(), "support_value: direction dimension mismatch");
  const Eigen::ArrayXd scaled = (set.radius.array() * direction.array()).abs();
  double dual;
  if (set.p == kInf) {
    dual = scaled.sum();
  } else if (set.p == 1.0) {
    dual = scaled.maxCoeff();
  } else {
    const double q = set.p / (set.p - 1.0);
    dual = std::pow(scaled.pow(q).sum(), 1.0 / q);
  }
  return dual + direction.dot(set.center);
}

double support_value(const Vector& direction, const Box& set) {
  return support_value(direction, set.to_ball());
}

double support_value(const Vector& direction, const HPolytope& set) {
  return lp_solve(direction, set).value;
}

bool is_empty(const HPolytope& set) {
  const LpResult r = simplex_maximize(Vector::Zero(set.dim()), set.A, set.b);
  return r.status == LpStatus::Infeasible;
}

Box box_hull(const HPolytope& set) {
  const Eigen::Index n = set.dim();
  Vector lo(n), hi(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    Vector d = Vector::Zero(n);
    d[k] = 1.0;
    hi[k] = support_value(d, set);
    d[k] = -1.0;
    lo[k] = -support_value(d, set);
  }
  return Box(std::move(lo), std::move(hi));
}

Box box_hull(const Box& a, const Box& b) {
  require(a.dim() == b.dim(), "box_hull: dimension mismatch");
  return Box(a.lo.cwiseMin(b.lo), a.hi.cwiseMax(b.hi));
}

Box box_hull(const SetMember& member) {
  return std::visit(
      [](const auto& s) {
        if constexpr (std::is_same_v<std::decay_t<decltype(s)>, Box>) {
          return s;
        } else {
          return box_hull(s);
        }
      },
      member);
}

Box box_hull(const SetUnion& set) {
  require(!set.members.empty(), "box_hull: empty union");
  Box acc = box_hull(set.members.front());
  for (std::size_t i = 1; i < set.members.size(); ++i) {
    acc = box_hull(acc, box_hull(set.members[i]));
  }
  return acc;
}

bool check_containment(const Box& inner, const Box& outer, double tol) {
  require(inner.dim() == outer.dim(), "check_containment: dimension mismatch");
  return (inner.lo.array() >= outer.lo.array() - tol).all() &&
         (inner.hi.array() <= outer.hi.array() + tol).all();
}

bool check_containment(const Box& inner, const HPolytope& outer, double tol) {
  require(inner.dim() == outer.dim(), "check_containment: dimension mismatch");
  for (Eigen::Index i = 0; i < outer.A.rows(); ++i) {
    if (support_value(outer.A.row(i).transpose(), inner) > outer.b[i] + tol) return false;
  }
  return true;
}

bool check_disjoint(const Box& a, const Box& b) {
  require(a.dim() == b.dim(), "check_disjoint: dimension mismatch");
  return (a.lo.array() > b.hi.array()).any() || (b.lo.array() > a.hi.array()).any();
}

bool check_disjoint(const Box& a, const HPolytope& b) {
  require(a.dim() == b.dim(), "check_disjoint: dimension mismatch");
  const HPolytope ab = a.to_polytope();
  Matrix A(b.A.rows() + ab.A.rows(), b.A.cols());
  A << b.A, ab.A;
  Vector rhs(b.b.size() + ab.b.size());
  rhs << b.b, ab.b;
  return is_empty(HPolytope(std::move(A), std::move(rhs)));
}

}  // namespace clreach
