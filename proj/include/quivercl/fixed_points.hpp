#pragma once

#include <optional>
#include <vector>

#include "quivercl/grading.hpp"
#include "quivercl/moment_solver.hpp"
#include "quivercl/rep_space.hpp"

namespace quivercl {

/// t·(B_h, i_k, B_h̄, j_k) = (B_h, i_k, t·B_h̄, t·j_k) for h ∈ Ω.
RepPoint cstar_act(const Quiver& q, Complex t, const RepPoint& p);

/// F = Σ_{h∈Ω} ‖B_h̄‖² + Σ_k ‖j_k‖², the moment map of the circle action.
double circle_moment(const Quiver& q, const RepPoint& p);

/// Largest of ‖μ_R(p) − ζ_R‖ and ‖μ_C(p) − ζ_C‖.
double moment_residual(const Quiver& q, const RepPoint& p, const CentralParameter& zeta);

struct FixedPointCheck {
  bool fixed = false;
  /// Least-squares residual of l_p(X) = −(0, 0, i·B_h̄, i·j).
  double residual = 0.0;
  /// Worst mismatch of exp(θX)·(e^{iθ}·p) against p over θ ∈ {π/3, π/2}.
  double cross_check = 0.0;
  std::optional<LieElement> generator;
};

/// Residuals are compared against tol·max(1, ‖p‖).  Throws NotOnVariety when
/// p misses either moment equation by more than tol·max(1, ‖p‖²).
FixedPointCheck is_fixed_point(const Quiver& q, const RepPoint& p, const CentralParameter& zeta, double tol = 1e-8);

/// Weight decomposition at a stable fixed point.  Checks that p0 itself has
/// full-action weight 0, i.e. B⁰ keeps the weight, B̄⁰ lowers it by one,
/// i⁰ lands in V^0 and j⁰ lives on V^1.
WeightGrading weight_grading(const Quiver& q, const RepPoint& p0, const CentralParameter& zeta, double tol = 1e-8);

/// R_j = start·factor^j for j = 0..count−1.
std::vector<double> geometric_schedule(double start, double factor, int count);

struct FlowRow {
  double R = 0.0;
  double F = 0.0;
  /// Fingerprint distance to the previous iterate.
  double distance = 0.0;
};

struct FlowReport {
  RepPoint point;
  std::vector<FlowRow> trace;
  /// F decreased strictly at every step.
  bool monotone = true;
};

/// The C*-limit lim_{R→0} R·p, computed by re-solving μ_R = ζ_R along the
/// schedule until successive fingerprints agree to tol and the iterate is
/// fixed within 10·tol.  Requires μ_C(p) = 0.
FlowReport flow_limit(const Quiver& q, const RepPoint& p, const CentralParameter& zeta,
                      const std::vector<double>& schedule, double tol = 1e-8, int max_len = 0,
                      const SolveOptions& opts = {});

}  // namespace quivercl
