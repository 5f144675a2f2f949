#pragma once

#include "clreach/common.hpp"

namespace clreach {

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Optimal;
  double value = 0.0;
  Vector x;
};

// Maximizes c·x subject to A·x ≤ b over free x.
// Dense two-phase tableau simplex with Bland's rule; tolerance 1e-8.
LpResult simplex_maximize(const Vector& c, const Matrix& A, const Vector& b);

}  // namespace clreach
