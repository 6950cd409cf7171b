#include "quivercl/slices.hpp"

#include <cmath>

#include "quivercl/linalg.hpp"

namespace quivercl {

namespace {

Eigen::VectorXcd stack(const LieElement& a, const LieElement& b) {
  const Eigen::VectorXcd va = to_vector(a);
  const Eigen::VectorXcd vb = to_vector(b);
  Eigen::VectorXcd out(va.size() + vb.size());
  out << va, vb;
  return out;
}

RepPoint zero_like(const RepPoint& p) {
  RepPoint z = p;
  z *= 0.0;
  return z;
}

Eigen::VectorXcd slice_equations(const Quiver& q, const RepPoint& p, const LieElement& mu0, const RepPoint& x) {
  return stack(moment_complex(q, p + x) - mu0, inf_action_adjoint(q, p, x));
}

std::vector<RepPoint> real_vectors(const RepPoint& shape, const Eigen::MatrixXcd& basis) {
  std::vector<RepPoint> out;
  for (Eigen::Index c = 0; c < basis.cols(); ++c) {
    out.push_back(from_vector(shape, basis.col(c)));
    out.push_back(from_vector(shape, Eigen::VectorXcd(Complex(0, 1) * basis.col(c))));
  }
  return out;
}

// Gauss–Newton on x = q0 + N·c for the slice equations.
RepPoint slice_newton(const Quiver& q, const RepPoint& p, const RepPoint& q0, const Eigen::MatrixXcd& n,
                      Eigen::VectorXcd c, const SliceSolveOptions& opts) {
  const LieElement mu0 = moment_complex(q, p);
  auto point = [&](const Eigen::VectorXcd& coeffs) { return q0 + from_vector(q0, n * coeffs); };
  RepPoint x = point(c);
  double res = slice_equations(q, p, mu0, x).norm();
  for (int it = 0; res > opts.tol; ++it) {
    if (it >= opts.max_iter)
      throw Error(ErrorCode::MaxIterations, "slice solve stalled at residual " + std::to_string(res));
    Eigen::MatrixXcd jac(0, 0);
    for (Eigen::Index k = 0; k < n.cols(); ++k) {
      const RepPoint dx = from_vector(q0, n.col(k));
      const Eigen::VectorXcd col = stack(dmu_complex(q, p + x, dx), inf_action_adjoint(q, p, dx));
      if (k == 0) jac.resize(col.size(), n.cols());
      jac.col(k) = col;
    }
    const Eigen::VectorXcd f = slice_equations(q, p, mu0, x);
    const Eigen::VectorXcd step = -jac.completeOrthogonalDecomposition().solve(f);
    bool accepted = false;
    double t = 1.0;
    for (int h = 0; h <= opts.max_halvings; ++h, t *= 0.5) {
      const Eigen::VectorXcd trial_c = c + t * step;
      RepPoint trial = point(trial_c);
      const double r = slice_equations(q, p, mu0, trial).norm();
      if (std::isfinite(r) && r <= (1.0 - 1e-4 * t) * res) {
        c = trial_c;
        x = std::move(trial);
        res = r;
        accepted = true;
        break;
      }
    }
    if (!accepted) throw Error(ErrorCode::LeftBasin, "slice Newton damping floored at residual " + std::to_string(res));
  }
  return x;
}

void require_in_span(const RepPoint& q0, const Eigen::MatrixXcd& basis) {
  const Eigen::VectorXcd v = to_vector(q0);
  const double off = (v - basis * (basis.adjoint() * v)).norm();
  if (off > 1e-8 * std::max(1.0, v.norm()))
    throw Error(ErrorCode::NotOnSlice, "q0 is not in the tangent span (off by " + std::to_string(off) + ")");
}

}  // namespace

Eigen::MatrixXcd slice_operator(const Quiver& q, const RepPoint& p) {
  check_shape(q, p);
  const RepPoint shape = zero_like(p);
  return assemble(p.size(), [&](const Eigen::VectorXcd& e) {
    const RepPoint dq = from_vector(shape, e);
    return stack(dmu_complex(q, p, dq), inf_action_adjoint(q, p, dq));
  });
}

SliceBasis tangent_basis(const Quiver& q, const RepPoint& p) {
  SliceBasis b;
  b.base_point = p;
  b.kind = SliceKind::full_tangent;
  b.complex_basis = null_space(slice_operator(q, p));
  b.vectors = real_vectors(zero_like(p), b.complex_basis);
  const long expected = expected_dimension(q, dims_of(q, p));
  if (b.real_dimension() != expected)
    throw Error(ErrorCode::DimensionMismatch, "tangent space has real dimension " +
                                                  std::to_string(b.real_dimension()) + ", expected " +
                                                  std::to_string(expected));
  return b;
}

RepPoint kuranishi(const Quiver& q, const RepPoint& p, const RepPoint& dq) {
  check_shape(q, p);
  if (!p.same_shape(dq)) throw Error(ErrorCode::ShapeMismatch, "kuranishi: shapes differ");
  const RepPoint shape = zero_like(p);
  const Eigen::MatrixXcd d = assemble(p.size(), [&](const Eigen::VectorXcd& e) {
    return to_vector(dmu_complex(q, p, from_vector(shape, e)));
  });
  if (d.rows() == 0 || d.cols() == 0 || d.norm() == 0.0) return dq;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(d, Eigen::ComputeFullV);
  const Eigen::VectorXd& s = svd.singularValues();
  Eigen::Index rank = 0;
  while (rank < s.size() && s(rank) > 1e-8 * s(0)) ++rank;
  const double cond = std::pow(s(0) / s(rank - 1), 2);
  if (cond > 1e12)
    throw Error(ErrorCode::IllConditioned, "dμ_C dμ_C* has condition number " + std::to_string(cond));
  const Eigen::MatrixXcd vr = svd.matrixV().leftCols(rank);
  const Eigen::VectorXcd v = to_vector(dq);
  return from_vector(dq, Eigen::VectorXcd(v - vr * (vr.adjoint() * v)));
}

RepPoint hodge_slice_solve(const Quiver& q, const RepPoint& p, const RepPoint& q0, const SliceSolveOptions& opts) {
  check_shape(q, p);
  if (!p.same_shape(q0)) throw Error(ErrorCode::ShapeMismatch, "hodge_slice_solve: shapes differ");
  const Eigen::MatrixXcd k = slice_operator(q, p);
  require_in_span(q0, null_space(k));
  const Eigen::MatrixXcd n = row_space(k);
  return slice_newton(q, p, q0, n, Eigen::VectorXcd::Zero(n.cols()), opts);
}

SliceBasis bb_tangent_basis(const Quiver& q, const RepPoint& p0, const WeightGrading& grading) {
  check_shape(q, p0);
  const Eigen::MatrixXcd w = weight_subspace_basis(q, p0, grading, 1);
  SliceBasis b;
  b.base_point = p0;
  b.kind = SliceKind::bb_tangent;
  b.complex_basis = w.cols() == 0 ? w : Eigen::MatrixXcd(w * null_space(slice_operator(q, p0) * w));
  b.vectors = real_vectors(zero_like(p0), b.complex_basis);
  const long expected = expected_dimension(q, dims_of(q, p0));
  if (2L * b.real_dimension() != expected)
    throw Error(ErrorCode::DimensionMismatch, "attracting tangent space has real dimension " +
                                                  std::to_string(b.real_dimension()) + ", expected " +
                                                  std::to_string(expected / 2));
  return b;
}

RepPoint bb_slice_solve(const Quiver& q, const RepPoint& p0, const WeightGrading& grading, const RepPoint& q0,
                        const SliceSolveOptions& opts) {
  check_shape(q, p0);
  if (!p0.same_shape(q0)) throw Error(ErrorCode::ShapeMismatch, "bb_slice_solve: shapes differ");
  const Eigen::MatrixXcd w = weight_subspace_basis(q, p0, grading, 1);
  if (w.cols() == 0) {
    require_in_span(q0, w);
    return q0;
  }
  const Eigen::MatrixXcd kw = slice_operator(q, p0) * w;
  require_in_span(q0, Eigen::MatrixXcd(w * null_space(kw)));
  const Eigen::MatrixXcd n = w * row_space(kw);
  try {
    return slice_newton(q, p0, q0, n, Eigen::VectorXcd::Zero(n.cols()), opts);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::LeftBasin && e.code() != ErrorCode::MaxIterations) throw;
  }
  // Both slice equations and the tangential projection commute with the
  // rescaling A ↦ A_s, so solve small and scale back up, then polish.
  double s = 1.0;
  for (int attempt = 0; attempt < opts.max_rescales; ++attempt) {
    s *= 2.0;
    try {
      const RepPoint small = slice_newton(q, p0, rescale(q, q0, grading, 1.0 / s), n,
                                          Eigen::VectorXcd::Zero(n.cols()), opts);
      const RepPoint big = rescale(q, small, grading, s);
      const Eigen::VectorXcd c0 = n.adjoint() * to_vector(big - q0);
      return slice_newton(q, p0, q0, n, c0, opts);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::LeftBasin && e.code() != ErrorCode::MaxIterations) throw;
    }
  }
  throw Error(ErrorCode::LeftBasin, "slice solve failed even after rescaling by " + std::to_string(s));
}

double slice_residual(const Quiver& q, const RepPoint& p, const RepPoint& A) {
  return std::max(norm(moment_complex(q, p + A) - moment_complex(q, p)), norm(inf_action_adjoint(q, p, A)));
}

}  // namespace quivercl
