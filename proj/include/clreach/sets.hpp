#pragma once

#include <variant>
#include <vector>

#include "clreach/common.hpp"
#include "clreach/simplex.hpp"

namespace clreach {

// ℓp-ball: {x : ‖(x - center) ⊘ radius‖_p ≤ 1}, element-wise radii.
struct LpBall {
  Vector center;
  Vector radius;
  double p = kInf;

  LpBall() = default;
  LpBall(Vector center_, Vector radius_, double p_);

  Eigen::Index dim() const { return center.size(); }
  bool contains(const Vector& x, double tol = 1e-9) const;
};

// Half-space polytope {x : A·x ≤ b}.
struct HPolytope {
  Matrix A;
  Vector b;

  HPolytope() = default;
  HPolytope(Matrix A_, Vector b_);

  Eigen::Index dim() const { return A.cols(); }
  bool contains(const Vector& x, double tol = 1e-9) const;
};

struct Box {
  Vector lo;
  Vector hi;

  Box() = default;
  Box(Vector lo_, Vector hi_);

  Eigen::Index dim() const { return lo.size(); }
  Vector center() const { return 0.5 * (lo + hi); }
  Vector radius() const { return 0.5 * (hi - lo); }
  double volume() const { return (hi - lo).prod(); }
  bool contains(const Vector& x, double tol = 1e-9) const;
  LpBall to_ball() const { return LpBall(center(), radius(), kInf); }
  HPolytope to_polytope() const;
};

using SetMember = std::variant<Box, HPolytope>;

struct SetUnion {
  std::vector<SetMember> members;

  bool contains(const Vector& x, double tol = 1e-9) const;
  bool empty() const { return members.empty(); }
};

// Maximizes objective·x over the polytope; throws InfeasibleError or
// UnboundedError instead of returning a non-optimal status.
LpResult lp_solve(const Vector& objective, const HPolytope& constraints);

double support_value(const Vector& direction, const LpBall& set);
double support_value(const Vector& direction, const Box& set);
double support_value(const Vector& direction, const HPolytope& set);

bool is_empty(const HPolytope& set);

Box box_hull(const HPolytope& set);
Box box_hull(const Box& a, const Box& b);
Box box_hull(const SetMember& member);
Box box_hull(const SetUnion& set);

bool check_containment(const Box& inner, const Box& outer, double tol = 1e-9);
bool check_containment(const Box& inner, const HPolytope& outer, double tol = 1e-9);

bool check_disjoint(const Box& a, const Box& b);
bool check_disjoint(const Box& a, const HPolytope& b);

}  // namespace clreach
