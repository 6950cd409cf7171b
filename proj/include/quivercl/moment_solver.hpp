#pragma once

#include <vector>

#include "quivercl/grading.hpp"
#include "quivercl/rep_space.hpp"

namespace quivercl {

struct SolveOptions {
  double tol = 1e-10;
  int max_iter = 100;
  /// Largest Frobenius norm allowed for one Newton update; ≤ 0 disables it.
  double step_cap = 0.0;
  /// Armijo sufficient-decrease constant on the residual.
  double armijo = 1e-4;
  int max_halvings = 10;
  /// When false a stalled solve returns with converged = false.
  bool throw_on_failure = true;
};

struct SolveReport {
  /// Hermitian ξ with point = exp(ξ)·p.
  LieElement xi;
  RepPoint point;
  /// ‖μ_R(point) − ζ_R‖.
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> history;
  /// Accepted step length per iteration.
  std::vector<double> damping;
};

/// The linearization L of ξ ↦ −2iμ_R(e^ξ·p) at ξ = 0:
/// Σ_{in(h)=k} B_h(B_h†ξ_k − ξ_out B_h†) − (B_h̄†ξ_out − ξ_k B_h̄†)B_h̄ + i_k i_k†ξ_k + ξ_k j_k†j_k.
LieElement linearized_operator(const Quiver& q, const RepPoint& p, const LieElement& xi);

/// Exact derivative of X(e^{tξ}·p) at t = 0 for hermitian ξ: L(ξ) + L(ξ)†.
LieElement real_moment_derivative(const Quiver& q, const RepPoint& p, const LieElement& xi);

/// ‖μ_R(p) − ζ_R‖ = ½‖X(p) − σ·Id‖.
double real_moment_residual(const Quiver& q, const RepPoint& p, const std::vector<double>& sigma);

/// Max over vertices of the distance of μ_C(p)_k from the scalars.
double complex_moment_noncentrality(const Quiver& q, const RepPoint& p);

/// Finds hermitian ξ with μ_R(exp(ξ)·p) = ζ_R(σ) by damped multiplicative Newton.
SolveReport solve_real_moment(const Quiver& q, const RepPoint& p, const std::vector<double>& sigma,
                              const SolveOptions& opts = {});

struct GradedStage {
  int order = 0;
  /// ξ_j, so that the stage applies exp(R^{j+2}·ξ_j).
  LieElement xi;
  /// Residual entering the stage.
  double residual_before = 0.0;
  /// Norm of the entering residual outside End(V)_m, |m| ≤ j.
  double off_grade = 0.0;
};

struct GradedSolveReport {
  std::vector<GradedStage> stages;
  SolveReport total;
};

/// Order-by-order solve at p0 + A_R: stage j removes the O(R^{j+2}) residual
/// with a Newton step and records ξ_j = δ_j / R^{j+2}.
GradedSolveReport graded_solve(const Quiver& q, const RepPoint& p0_plus_AR, const WeightGrading& grading,
                               double R, const std::vector<double>& sigma, const SolveOptions& opts = {});

}  // namespace quivercl
