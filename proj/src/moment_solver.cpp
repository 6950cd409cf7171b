#include "quivercl/moment_solver.hpp"

#include <cmath>
#include <optional>

#include "quivercl/linalg.hpp"

namespace quivercl {

LieElement linearized_operator(const Quiver& q, const RepPoint& p, const LieElement& xi) {
  check_shape(q, p);
  if (xi.vertex_count() != q.vertex_count()) throw Error(ErrorCode::ShapeMismatch, "linearized_operator: vertex count");
  LieElement out;
  out.cls = LieClass::general;
  for (int k = 0; k < q.vertex_count(); ++k) {
    const auto& x = xi.blocks[k];
    MatrixXc m = p.i[k] * p.i[k].adjoint() * x + x * p.j[k].adjoint() * p.j[k];
    for (int h : q.incoming(k)) {
      const auto& b = p.B[h];
      const auto& bb = p.B[q.reverse(h)];
      const auto& xo = xi.blocks[q.out(h)];
      m += b * (b.adjoint() * x - xo * b.adjoint()) - (bb.adjoint() * xo - x * bb.adjoint()) * bb;
    }
    out.blocks.push_back(std::move(m));
  }
  return out;
}

LieElement real_moment_derivative(const Quiver& q, const RepPoint& p, const LieElement& xi) {
  LieElement l = linearized_operator(q, p, xi);
  for (auto& b : l.blocks) b = (b + b.adjoint()).eval();
  l.cls = LieClass::hermitian;
  return l;
}

namespace {

LieElement real_residual(const Quiver& q, const RepPoint& p, const std::vector<double>& sigma) {
  LieElement r = moment_real_form(q, p);
  for (int k = 0; k < q.vertex_count(); ++k) r.blocks[k].diagonal().array() -= sigma[k];
  return r;
}

void check_target(const Quiver& q, const std::vector<double>& sigma) {
  if (static_cast<int>(sigma.size()) != q.vertex_count())
    throw Error(ErrorCode::ShapeMismatch, "target must have one entry per vertex");
}

struct NewtonState {
  RepPoint p;
  GaugeElement g;
  std::vector<LieElement> basis;
};

struct StepResult {
  LieElement delta;  // the full Newton update, before damping
  double t = 0.0;
  double residual = 0.0;
  bool accepted = false;
};

StepResult newton_step(const Quiver& q, NewtonState& st, const std::vector<double>& sigma, double residual,
                       const SolveOptions& opts) {
  const auto n = static_cast<Eigen::Index>(st.basis.size());
  const LieElement r = real_residual(q, st.p, sigma);

  Eigen::MatrixXd d(n, n);
  for (Eigen::Index b = 0; b < n; ++b) d.col(b) = real_coords(st.basis, real_moment_derivative(q, st.p, st.basis[b]));
  d = 0.5 * (d + d.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(d);
  const Eigen::VectorXd& lam = es.eigenvalues();
  if (lam(n - 1) <= 0.0 || lam(0) < 1e-10 * lam(n - 1))
    throw Error(ErrorCode::NotInjective, "linearized real moment map is singular (smallest eigenvalue " +
                                             std::to_string(lam(0)) + ")");
  const Eigen::VectorXd c =
      -(es.eigenvectors() * (es.eigenvectors().transpose() * real_coords(st.basis, r)).cwiseQuotient(lam));

  StepResult out;
  out.delta = combine(st.basis, c, LieClass::hermitian);
  if (opts.step_cap > 0.0) {
    const double nd = norm(out.delta);
    if (nd > opts.step_cap) out.delta *= Complex(opts.step_cap / nd);
  }

  double t = 1.0;
  std::optional<RepPoint> smallest;
  for (int halving = 0; halving <= opts.max_halvings; ++halving, t *= 0.5) {
    RepPoint trial = gauge_act(q, exp(Complex(t) * out.delta), st.p);
    const double res = real_moment_residual(q, trial, sigma);
    if (std::isfinite(res) && res <= (1.0 - opts.armijo * t) * residual) {
      out.t = t;
      out.residual = res;
      out.accepted = true;
      st.p = std::move(trial);
      break;
    }
    if (halving == opts.max_halvings) smallest = std::move(trial);
  }
  if (!out.accepted && smallest) {
    // Kempf–Ness fallback: the functional ‖p‖² − 2Σσ_k Tr ξ_k is convex along
    // e^{tδ}, and Newton directions are descent directions for it.
    const double t_min = 2.0 * t;
    double trace = 0.0;
    for (int k = 0; k < q.vertex_count(); ++k) trace += sigma[k] * out.delta.blocks[k].trace().real();
    const double change = squared_norm(*smallest) - squared_norm(st.p) - 2.0 * t_min * trace;
    if (change < 0.0) {
      out.t = t_min;
      out.residual = real_moment_residual(q, *smallest, sigma);
      out.accepted = true;
      st.p = std::move(*smallest);
    }
  }
  if (out.accepted) {
    LieElement step = out.delta;
    step *= Complex(out.t);
    st.g = exp(step) * st.g;
  }
  return out;
}

NewtonState start(const Quiver& q, const RepPoint& p, const std::vector<double>& sigma) {
  check_shape(q, p);
  check_target(q, sigma);
  const double nc = complex_moment_noncentrality(q, p);
  if (nc > 1e-8 * (1.0 + squared_norm(p)))
    throw Error(ErrorCode::NotOnVariety, "complex moment map is not central (deviation " + std::to_string(nc) + ")");
  const DimensionVectors dims = dims_of(q, p);
  return NewtonState{p, GaugeElement::identity(dims.v), hermitian_basis(dims.v)};
}

SolveReport finish(const Quiver& q, const RepPoint& p, const NewtonState& st, const std::vector<double>& sigma,
                   SolveReport rep, const SolveOptions& opts) {
  rep.xi = half_log_gram(st.g);
  rep.point = gauge_act(q, exp(rep.xi), p);
  rep.residual = real_moment_residual(q, rep.point, sigma);
  rep.converged = rep.residual <= opts.tol;
  if (!rep.converged && opts.throw_on_failure)
    throw Error(ErrorCode::MaxIterations, "real moment solve stalled at residual " + std::to_string(rep.residual) +
                                              " after " + std::to_string(rep.iterations) + " iterations");
  return rep;
}

}  // namespace

double real_moment_residual(const Quiver& q, const RepPoint& p, const std::vector<double>& sigma) {
  check_target(q, sigma);
  return 0.5 * norm(real_residual(q, p, sigma));
}

double complex_moment_noncentrality(const Quiver& q, const RepPoint& p) {
  const LieElement m = moment_complex(q, p);
  double worst = 0.0;
  for (const auto& b : m.blocks) {
    if (b.size() == 0) continue;
    const Complex c = b.trace() / static_cast<double>(b.rows());
    worst = std::max(worst, (b - c * MatrixXc::Identity(b.rows(), b.cols())).norm());
  }
  return worst;
}

SolveReport solve_real_moment(const Quiver& q, const RepPoint& p, const std::vector<double>& sigma,
                              const SolveOptions& opts) {
  NewtonState st = start(q, p, sigma);
  SolveReport rep;
  double res = real_moment_residual(q, p, sigma);
  rep.history.push_back(res);
  while (res > opts.tol && rep.iterations < opts.max_iter && !st.basis.empty()) {
    const StepResult step = newton_step(q, st, sigma, res, opts);
    if (!step.accepted) break;
    ++rep.iterations;
    res = step.residual;
    rep.history.push_back(res);
    rep.damping.push_back(step.t);
  }
  return finish(q, p, st, sigma, std::move(rep), opts);
}

GradedSolveReport graded_solve(const Quiver& q, const RepPoint& p0_plus_AR, const WeightGrading& grading,
                               double R, const std::vector<double>& sigma, const SolveOptions& opts) {
  if (!(R > 0.0)) throw Error(ErrorCode::InvalidArgument, "graded_solve: R must be positive");
  NewtonState st = start(q, p0_plus_AR, sigma);
  if (grading.vertex_count() != q.vertex_count() || grading.dims() != dims_of(q, p0_plus_AR).v)
    throw Error(ErrorCode::ShapeMismatch, "graded_solve: grading does not match the point");

  GradedSolveReport out;
  SolveReport& rep = out.total;
  const double scale = 10.0 * std::max(1.0, squared_norm(p0_plus_AR));
  double res = real_moment_residual(q, p0_plus_AR, sigma);
  rep.history.push_back(res);
  for (int j = 0; res > opts.tol && j < opts.max_iter && !st.basis.empty(); ++j) {
    GradedStage stage;
    stage.order = j;
    stage.residual_before = res;
    LieElement outside = LieElement::zero(grading.dims());
    for (const auto& [m, part] : decompose_lie(real_residual(q, st.p, sigma), grading))
      if (std::abs(m) > j) outside += part;
    stage.off_grade = norm(outside);
    const double allowed = std::max(opts.tol, scale * std::pow(R, j + 2));
    if (stage.off_grade > allowed)
      throw Error(ErrorCode::GradingViolation, "stage " + std::to_string(j) + " residual has weight |m| > " +
                                                   std::to_string(j) + " of size " +
                                                   std::to_string(stage.off_grade));
    const StepResult step = newton_step(q, st, sigma, res, opts);
    if (!step.accepted) break;
    stage.xi = step.delta;
    stage.xi *= Complex(step.t / std::pow(R, j + 2));
    out.stages.push_back(std::move(stage));
    ++rep.iterations;
    res = step.residual;
    rep.history.push_back(res);
    rep.damping.push_back(step.t);
  }
  rep = finish(q, p0_plus_AR, st, sigma, std::move(rep), opts);
  return out;
}

}  // namespace quivercl
