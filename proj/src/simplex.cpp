#include "clreach/simplex.hpp"

#include <cmath>
#include <vector>

namespace clreach {

namespace {
constexpr double kTol = 1e-8;
}

LpResult simplex_maximize(const Vector& c, const Matrix& A, const Vector& b) {
  const Eigen::Index n = c.size();
  const Eigen::Index m = A.rows();
  require(n > 0, "simplex: empty objective");
  require(A.cols() == n, "simplex: objective/constraint dimension mismatch");
  require(b.size() == m, "simplex: constraint row/offset count mismatch");
  for (Eigen::Index i = 0; i < m; ++i) {
    if (!std::isfinite(b[i])) throw DimensionMismatch("simplex: non-finite constraint offset");
  }

  // Free variables are split x = u - v with u, v >= 0.
  // Columns: [0,n) u, [n,2n) v, [2n,2n+m) slacks, then artificials for rows
  // whose offset is negative (those rows are sign-flipped first).
  const Eigen::Index nu = 2 * n;
  std::vector<Eigen::Index> art_rows;
  for (Eigen::Index i = 0; i < m; ++i) {
    if (b[i] < 0) art_rows.push_back(i);
  }
  const Eigen::Index n_art = static_cast<Eigen::Index>(art_rows.size());
  const Eigen::Index total = nu + m + n_art;

  Matrix T = Matrix::Zero(m + 1, total + 1);
  std::vector<Eigen::Index> basis(static_cast<std::size_t>(m));
  {
    Eigen::Index art = 0;
    for (Eigen::Index i = 0; i < m; ++i) {
      const double sgn = b[i] < 0 ? -1.0 : 1.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        T(i, j) = sgn * A(i, j);
        T(i, n + j) = -sgn * A(i, j);
      }
      T(i, nu + i) = sgn;
      T(i, total) = sgn * b[i];
      if (b[i] < 0) {
        T(i, nu + m + art) = 1.0;
        basis[static_cast<std::size_t>(i)] = nu + m + art;
        ++art;
      } else {
        basis[static_cast<std::size_t>(i)] = nu + i;
      }
    }
  }

  auto pivot = [&](Eigen::Index pr, Eigen::Index pc) {
    T.row(pr) /= T(pr, pc);
    for (Eigen::Index r = 0; r <= m; ++r) {
      if (r == pr) continue;
      const double f = T(r, pc);
      if (f != 0.0) T.row(r) -= f * T.row(pr);
    }
    basis[static_cast<std::size_t>(pr)] = pc;
  };

  // Bland's rule: smallest-index entering column, smallest basic index on
  // ratio ties. Returns true when the objective is unbounded.
  auto run = [&](Eigen::Index allowed) -> bool {
    const Eigen::Index max_iter = 2000 + 200 * (m + total);
    for (Eigen::Index iter = 0; iter < max_iter; ++iter) {
      Eigen::Index enter = -1;
      for (Eigen::Index j = 0; j < allowed; ++j) {
        if (T(m, j) < -kTol) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return false;
      Eigen::Index leave = -1;
      double best = kInf;
      for (Eigen::Index i = 0; i < m; ++i) {
        if (T(i, enter) <= kTol) continue;
        const double ratio = T(i, total) / T(i, enter);
        if (leave < 0 || ratio < best - kTol) {
          leave = i;
          best = ratio;
        } else if (ratio <= best + kTol &&
                   basis[static_cast<std::size_t>(i)] < basis[static_cast<std::size_t>(leave)]) {
          leave = i;
          best = std::min(best, ratio);
        }
      }
      if (leave < 0) return true;
      pivot(leave, enter);
    }
    throw InternalError("simplex: iteration limit exceeded");
  };

  if (n_art > 0) {
    // Phase 1: maximize -(sum of artificials); reduced costs z_j - c_j with
    // c = -1 on artificial columns.
    for (Eigen::Index j = 0; j <= total; ++j) {
      double z = 0.0;
      for (Eigen::Index i : art_rows) z -= T(i, j);
      T(m, j) = z;
    }
    for (Eigen::Index k = 0; k < n_art; ++k) T(m, nu + m + k) += 1.0;
    if (run(total)) throw InternalError("simplex: phase 1 unbounded");
    if (T(m, total) < -kTol) {
      LpResult r;
      r.status = LpStatus::Infeasible;
      r.value = std::numeric_limits<double>::quiet_NaN();
      return r;
    }
    // Drive leftover artificials out of the basis; rows where no structural
    // pivot exists are redundant and keep a zero-level artificial.
    for (Eigen::Index i = 0; i < m; ++i) {
      if (basis[static_cast<std::size_t>(i)] < nu + m) continue;
      for (Eigen::Index j = 0; j < nu + m; ++j) {
        if (std::abs(T(i, j)) > kTol) {
          pivot(i, j);
          break;
        }
      }
    }
  }

  // Phase 2 objective over structural columns only.
  auto cost_of = [&](Eigen::Index j) -> double {
    if (j < n) return c[j];
    if (j < nu) return -c[j - n];
    return 0.0;
  };
  for (Eigen::Index j = 0; j <= total; ++j) {
    double z = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) {
      const double cb = cost_of(basis[static_cast<std::size_t>(i)]);
      if (cb != 0.0) z += cb * T(i, j);
    }
    T(m, j) = z;
  }
  for (Eigen::Index j = 0; j < total; ++j) T(m, j) -= cost_of(j);

  if (run(nu + m)) {
    LpResult r;
    r.status = LpStatus::Unbounded;
    r.value = kInf;
    return r;
  }

  Vector vals = Vector::Zero(total);
  for (Eigen::Index i = 0; i < m; ++i) vals[basis[static_cast<std::size_t>(i)]] = T(i, total);
  LpResult r;
  r.status = LpStatus::Optimal;
  r.x = vals.head(n) - vals.segment(n, n);
  r.value = c.dot(r.x);
  return r;
}

}  // namespace clreach
