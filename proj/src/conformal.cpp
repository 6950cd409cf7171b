#include "quivercl/conformal.hpp"

#include <cmath>
#include <limits>

#include "quivercl/fixed_points.hpp"
#include "quivercl/invariants.hpp"
#include "quivercl/linalg.hpp"
#include "quivercl/slices.hpp"

namespace quivercl {

RepPoint twistor_rotate(const Quiver& q, const RepPoint& p, Complex xi) {
  check_shape(q, p);
  RepPoint r = p;
  for (int h = 0; h < q.edge_count(); ++h)
    r.B[h] -= Complex(q.epsilon(h)) * xi * p.B[q.reverse(h)].adjoint();
  for (int k = 0; k < q.vertex_count(); ++k) {
    r.i[k] -= xi * p.j[k].adjoint();
    r.j[k] += xi * p.i[k].adjoint();
  }
  return r;
}

RepPoint build_pA(const Quiver& q, const RepPoint& p0, const RepPoint& A, Complex hbar, double slice_tol) {
  check_shape(q, p0);
  if (!p0.same_shape(A)) throw Error(ErrorCode::ShapeMismatch, "build_pA: shapes differ");
  if (hbar == Complex(0.0)) throw Error(ErrorCode::InvalidArgument, "build_pA: hbar must be nonzero");
  const double off = slice_residual(q, p0, A);
  if (off > slice_tol * std::max(1.0, squared_norm(p0 + A)))
    throw Error(ErrorCode::NotOnSlice, "A misses the slice equations by " + std::to_string(off));
  const Complex inv = 1.0 / hbar;
  RepPoint r = p0;
  for (int h = 0; h < q.omega_count(); ++h) {
    const int hb = q.reverse(h);
    r.B[h] = p0.B[h] + A.B[h] - hbar * p0.B[hb].adjoint();
    r.B[hb] = inv * (p0.B[hb] + A.B[hb]) + p0.B[h].adjoint();
  }
  for (int k = 0; k < q.vertex_count(); ++k) {
    r.i[k] = p0.i[k] + A.i[k] - hbar * p0.j[k].adjoint();
    r.j[k] = inv * (p0.j[k] + A.j[k]) + p0.i[k].adjoint();
  }
  return r;
}

SolveReport conformal_limit(const Quiver& q, const RepPoint& p0, const RepPoint& A, Complex hbar,
                            const SolveOptions& opts) {
  const RepPoint pa = build_pA(q, p0, A, hbar);
  return solve_real_moment(q, pa, std::vector<double>(q.vertex_count(), 0.0), opts);
}

namespace {

template <typename F>
auto at_stage(int stage, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    throw Error(e.code(), "stage " + std::to_string(stage) + ": " + e.what());
  }
}

double central_defect(const LieElement& x, const std::vector<double>& value, Complex factor) {
  LieElement d = x;
  for (size_t k = 0; k < d.blocks.size(); ++k) d.blocks[k].diagonal().array() -= factor * value[k];
  return norm(d);
}

}  // namespace

ConformalFamilySample conformal_family_sample(const Quiver& q, const RepPoint& p0, const RepPoint& A, Complex hbar,
                                              double R, const std::vector<double>& sigma,
                                              const WeightGrading& grading, const PathCatalog& catalog,
                                              const Eigen::VectorXd& limit_fingerprint, bool use_graded,
                                              const SolveOptions& opts) {
  if (!(R > 0.0)) throw Error(ErrorCode::InvalidArgument, "conformal_family_sample: R must be positive");
  if (hbar == Complex(0.0)) throw Error(ErrorCode::InvalidArgument, "conformal_family_sample: hbar must be nonzero");
  ConformalFamilySample s;
  s.R = R;
  s.hbar = hbar;
  const RepPoint start = p0 + rescale(q, A, grading, R);

  SolveReport q1 = at_stage(1, [&] {
    if (use_graded) {
      try {
        s.graded = true;
        return graded_solve(q, start, grading, R, sigma, opts).total;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::GradingViolation) throw;
      }
    }
    s.graded = false;
    return solve_real_moment(q, start, sigma, opts);
  });
  s.stage_residuals[0] = q1.residual;

  const Complex xi = hbar * R;
  const RepPoint q2 = twistor_rotate(q, q1.point, xi);
  {
    LieElement mr = moment_real_form(q, q2);
    s.stage_residuals[1] = std::max(central_defect(mr, sigma, 1.0 - std::norm(xi)),
                                    central_defect(moment_complex(q, q2), sigma, xi));
  }

  const RepPoint q3 = cstar_act(q, 1.0 / xi, q2);
  s.stage_residuals[2] = central_defect(moment_complex(q, q3), sigma, 1.0);
  const double scale = std::max(1.0, squared_norm(q3));
  if (s.stage_residuals[2] > 1e-8 * scale)
    throw Error(ErrorCode::NotOnVariety, "stage 3: complex moment map off by " + std::to_string(s.stage_residuals[2]));

  const SolveReport q4 =
      at_stage(4, [&] { return solve_real_moment(q, q3, std::vector<double>(q.vertex_count(), 0.0), opts); });
  s.stage_residuals[3] = q4.residual;
  s.point = q4.point;
  s.fingerprint = fingerprint(q, s.point, catalog);
  s.distance_to_limit = (s.fingerprint - limit_fingerprint).norm();
  return s;
}

ConvergenceStudy convergence_study(const Quiver& q, const RepPoint& p0, const RepPoint& A, Complex hbar,
                                   const std::vector<double>& R_grid, const std::vector<double>& sigma,
                                   const WeightGrading& grading, int max_len, const SolveOptions& opts) {
  if (R_grid.size() < 2) throw Error(ErrorCode::InvalidArgument, "convergence_study needs two or more radii");
  ConvergenceStudy st;
  st.hbar = hbar;
  const DimensionVectors dims = dims_of(q, p0);
  const PathCatalog catalog(q, dims, max_len > 0 ? max_len : nilpotency_length(dims));
  st.limit = conformal_limit(q, p0, A, hbar, opts).point;
  st.limit_fingerprint = fingerprint(q, st.limit, catalog);
  st.floor = std::max(1e-8, 100.0 * opts.tol);

  std::vector<double> x, y;
  for (double R : R_grid) {
    st.samples.push_back(conformal_family_sample(q, p0, A, hbar, R, sigma, grading, catalog, st.limit_fingerprint,
                                                 true, opts));
    const double d = st.samples.back().distance_to_limit;
    if (d <= st.floor) {
      st.degenerate = true;
      continue;
    }
    x.push_back(std::log(R));
    y.push_back(std::log(d));
  }
  if (x.size() >= 2) {
    const LineFit fit = fit_line(x, y);
    st.slope = fit.slope;
    st.fit_residual = fit.residual;
  } else {
    st.degenerate = true;
    st.slope = std::numeric_limits<double>::quiet_NaN();
    st.fit_residual = std::numeric_limits<double>::quiet_NaN();
  }
  return st;
}

}  // namespace quivercl
