#pragma once

#include <variant>
#include <vector>

#include "clreach/crown.hpp"
#include "clreach/dynamics.hpp"

namespace clreach {

struct DegenerateBounds : InternalError {
  using InternalError::InternalError;
};

// Row-wise choice: row a of A when z[a] >= 0, else row a of B.
Matrix selector(const Vector& z, const Matrix& A, const Matrix& B);
Vector selector(const Vector& z, const Vector& a, const Vector& b);

// Per-facet worst-case substitution of the control envelope into the
// dynamics: slice i selects Psi or Phi rows by the sign of facets_i·B.
struct ClosedLoopEnvelope {
  std::vector<Matrix> Upsilon;  // per facet, n_u × n_y
  std::vector<Matrix> Xi;
  Matrix Gamma;  // n_u × m_out
  Matrix Delta;
};

// Affine bounds on each facet functional of the next state:
// M_L·x + n_L ≤ facets·x' ≤ M_U·x + n_U over the analyzed input set.
struct FacetAffine {
  Matrix M_U, M_L;
  Vector n_U, n_L;
};

enum class FacetSolver { ClosedForm, LP };
enum class OutputShape { Box, Polytope };

// Facet directions and bound-evaluation choice for one propagation run.
// Empty facets mean identity directions (axis-aligned box output).
struct ReachSpec {
  std::optional<Matrix> facets;
  FacetSolver solver = FacetSolver::ClosedForm;

  OutputShape output_shape() const { return facets ? OutputShape::Polytope : OutputShape::Box; }
  Matrix facet_matrix(Eigen::Index n_x) const {
    return facets ? *facets : Matrix(Matrix::Identity(n_x, n_x));
  }
};

struct FacetBounds {
  Vector gamma_U;
  Vector gamma_L;
};

using InputSet = std::variant<LpBall, HPolytope>;

struct ReachSequence {
  std::vector<SetUnion> steps;  // steps[0] holds the initial set
  std::vector<std::string> warnings;

  std::size_t horizon() const { return steps.size() - 1; }
};

ClosedLoopEnvelope closed_loop_envelope(const AffineEnvelope& env, const LtvSystem& sys,
                                        const Matrix& facets);

FacetAffine facet_affine(const ClosedLoopEnvelope& clenv, const LtvSystem& sys,
                         const Matrix& facets);

FacetBounds facet_bounds(const FacetAffine& fa, const InputSet& input, FacetSolver solver);

SetMember to_reach_set(const FacetBounds& bounds, const ReachSpec& spec, Eigen::Index n_x);

// Box of possible observations: axis-aligned hull of Cᵀ·set inflated by the
// measurement-noise support.
Box observation_box(const LtvSystem& sys, const InputSet& input);

// One propagation step: envelope over the observation box, closed-loop facet
// bounds, then set conversion. Appends any closed-form→LP fallback warning.
SetMember propagate_step(const LtvSystem& sys, const FeedforwardNetwork& net,
                         const InputSet& input, const ReachSpec& spec, const SlopePolicy& policy,
                         std::vector<std::string>* warnings = nullptr);

ReachSequence propagate(const LtvSequence& seq, const FeedforwardNetwork& net,
                        const InputSet& x0, std::size_t horizon, const ReachSpec& spec,
                        const SlopePolicy& policy = {});

InputSet as_input_set(const SetMember& member);

}  // namespace clreach
