#pragma once

#include <vector>

#include <Eigen/Dense>

#include "quivercl/grading.hpp"
#include "quivercl/rep_space.hpp"

namespace quivercl {

enum class SliceKind { full_tangent, bb_tangent };

/// Real orthonormal basis {u_1, i·u_1, u_2, i·u_2, ...} of a complex subspace
/// of increments at base_point.
struct SliceBasis {
  RepPoint base_point;
  std::vector<RepPoint> vectors;
  SliceKind kind = SliceKind::full_tangent;
  /// Orthonormal complex coordinates (columns, as in to_vector) of the span.
  Eigen::MatrixXcd complex_basis;

  int real_dimension() const { return static_cast<int>(vectors.size()); }
};

/// Matrix of q ↦ (dμ_C(p, q), l_p*(q)) in to_vector coordinates.
Eigen::MatrixXcd slice_operator(const Quiver& q, const RepPoint& p);

/// Null space of the slice operator; DimensionMismatch unless its real
/// dimension equals expected_dimension.
SliceBasis tangent_basis(const Quiver& q, const RepPoint& p);

/// q − (dμ_C)⁺ dμ_C(p, q): removes the part of q that moves μ_C to first order.
RepPoint kuranishi(const Quiver& q, const RepPoint& p, const RepPoint& dq);

struct SliceSolveOptions {
  double tol = 1e-10;
  int max_iter = 50;
  int max_halvings = 10;
  /// Rescaling attempts for bb_slice_solve when q0 lies outside the basin.
  int max_rescales = 12;
};

/// Solves μ_C(p + q) = μ_C(p), l_p*(q) = 0 with the tangential part of q held
/// at q0 by Gauss–Newton on the orthogonal complement of the tangent space.
RepPoint hodge_slice_solve(const Quiver& q, const RepPoint& p, const RepPoint& q0, const SliceSolveOptions& opts = {});

/// Tangent directions at a fixed point with full-action weight ≥ 1.
SliceBasis bb_tangent_basis(const Quiver& q, const RepPoint& p0, const WeightGrading& grading);

/// The slice solve restricted to weight ≥ 1 increments.  When q0 is too large,
/// solves at the rescaled q0_{1/s} and maps the answer back with A ↦ A_s.
RepPoint bb_slice_solve(const Quiver& q, const RepPoint& p0, const WeightGrading& grading, const RepPoint& q0,
                        const SliceSolveOptions& opts = {});

/// Largest of ‖μ_C(p + A) − μ_C(p)‖ and ‖l_p*(A)‖.
double slice_residual(const Quiver& q, const RepPoint& p, const RepPoint& A);

}  // namespace quivercl
