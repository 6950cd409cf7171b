#pragma once

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "quivercl/grading.hpp"
#include "quivercl/moment_solver.hpp"
#include "quivercl/rep_space.hpp"

namespace quivercl {

class PathCatalog;

/// q_ξ = (B_h − ε(h)ξB_h̄†, i_k − ξj_k†, j_k + ξi_k†) over all h ∈ H.  On
/// (μ_R, μ_C) = (ζ_R, 0) it lands on ((1−|ξ|²)ζ_R, −2iξζ_R).
RepPoint twistor_rotate(const Quiver& q, const RepPoint& p, Complex xi);

/// The conformal-line point p_A built from a fixed point p0 and A in the BB
/// slice; μ_C(p_A) = −2iζ_R = σ·Id.  Throws NotOnSlice unless A solves the
/// slice equations at p0 to slice_tol.
RepPoint build_pA(const Quiver& q, const RepPoint& p0, const RepPoint& A, Complex hbar, double slice_tol = 1e-8);

/// g_{A,ħ}·p_A: the real moment solve of p_A with target μ_R = 0.
SolveReport conformal_limit(const Quiver& q, const RepPoint& p0, const RepPoint& A, Complex hbar,
                            const SolveOptions& opts = {});

struct ConformalFamilySample {
  double R = 0.0;
  Complex hbar;
  RepPoint point;
  Eigen::VectorXd fingerprint;
  double distance_to_limit = 0.0;
  /// Stage (1) real residual, stage (2) twistor identity defect, stage (3)
  /// ‖μ_C − σ‖, stage (4) real residual.
  std::array<double, 4> stage_residuals{};
  bool graded = false;
};

/// The snake at radius R: solve μ_R = ζ_R at p0 + A_R, rotate by ξ = ħR,
/// rescale by ξ⁻¹ onto μ_C = −2iζ_R, and solve μ_R = 0.
ConformalFamilySample conformal_family_sample(const Quiver& q, const RepPoint& p0, const RepPoint& A, Complex hbar,
                                              double R, const std::vector<double>& sigma,
                                              const WeightGrading& grading, const PathCatalog& catalog,
                                              const Eigen::VectorXd& limit_fingerprint, bool use_graded = true,
                                              const SolveOptions& opts = {});

struct ConvergenceStudy {
  Complex hbar;
  RepPoint limit;
  Eigen::VectorXd limit_fingerprint;
  std::vector<ConformalFamilySample> samples;
  double slope = 0.0;
  double fit_residual = 0.0;
  /// Distances at or below this are treated as solver noise.
  double floor = 0.0;
  /// Set when some distance hits the floor; the slope then uses the rest.
  bool degenerate = false;
};

ConvergenceStudy convergence_study(const Quiver& q, const RepPoint& p0, const RepPoint& A, Complex hbar,
                                   const std::vector<double>& R_grid, const std::vector<double>& sigma,
                                   const WeightGrading& grading, int max_len = 0, const SolveOptions& opts = {});

}  // namespace quivercl
