#include "quivercl/fixed_points.hpp"

#include <cmath>
#include <numbers>

#include "quivercl/invariants.hpp"
#include "quivercl/linalg.hpp"

namespace quivercl {

RepPoint cstar_act(const Quiver& q, Complex t, const RepPoint& p) {
  check_shape(q, p);
  if (t == Complex(0.0)) throw Error(ErrorCode::InvalidArgument, "cstar_act: t must be nonzero");
  RepPoint r = p;
  for (int h = q.omega_count(); h < q.edge_count(); ++h) r.B[h] *= t;
  for (auto& j : r.j) j *= t;
  return r;
}

double circle_moment(const Quiver& q, const RepPoint& p) {
  check_shape(q, p);
  double f = 0.0;
  for (int h = q.omega_count(); h < q.edge_count(); ++h) f += p.B[h].squaredNorm();
  for (const auto& j : p.j) f += j.squaredNorm();
  return f;
}

double moment_residual(const Quiver& q, const RepPoint& p, const CentralParameter& zeta) {
  validate(q, zeta);
  const double real = real_moment_residual(q, p, zeta.sigma);
  LieElement c = moment_complex(q, p);
  for (int k = 0; k < q.vertex_count(); ++k) c.blocks[k].diagonal().array() -= zeta.c[k];
  return std::max(real, norm(c));
}

namespace {

double scale_of(const RepPoint& p) { return std::max(1.0, norm(p)); }

struct GeneratorFit {
  LieElement x;
  double residual = 0.0;
  double smallest_singular = 0.0;
  double largest_singular = 0.0;
};

// Real least squares for l_p(X) = −(0, 0, i·B_h̄, i·j) over skew-hermitian X.
GeneratorFit fit_generator(const Quiver& q, const RepPoint& p) {
  const DimensionVectors dims = dims_of(q, p);
  std::vector<LieElement> basis = hermitian_basis(dims.v);
  for (auto& e : basis) {
    e *= Complex(0, 1);
    e.cls = LieClass::skew_hermitian;
  }
  RepPoint rhs = p;
  rhs *= 0.0;
  for (int h = q.omega_count(); h < q.edge_count(); ++h) rhs.B[h] = Complex(0, -1) * p.B[h];
  for (int k = 0; k < q.vertex_count(); ++k) rhs.j[k] = Complex(0, -1) * p.j[k];
  const Eigen::VectorXcd b = to_vector(rhs);
  const Eigen::Index m = b.size();
  const auto n = static_cast<Eigen::Index>(basis.size());

  GeneratorFit fit;
  fit.x = LieElement::zero(dims.v, LieClass::skew_hermitian);
  if (n == 0) {
    fit.residual = b.norm();
    return fit;
  }
  Eigen::MatrixXd a(2 * m, n);
  for (Eigen::Index c = 0; c < n; ++c) {
    const Eigen::VectorXcd col = to_vector(inf_action(q, p, basis[c]));
    a.col(c) << col.real(), col.imag();
  }
  Eigen::VectorXd rb(2 * m);
  rb << b.real(), b.imag();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& s = svd.singularValues();
  fit.largest_singular = s(0);
  fit.smallest_singular = s(s.size() - 1);
  svd.setThreshold(1e-10);
  const Eigen::VectorXd c = svd.solve(rb);
  fit.x = combine(basis, c, LieClass::skew_hermitian);
  fit.residual = (a * c - rb).norm();
  return fit;
}

double circle_mismatch(const Quiver& q, const RepPoint& p, const LieElement& x, double theta) {
  LieElement tx = x;
  tx *= Complex(theta);
  const RepPoint back = gauge_act(q, exp(tx), cstar_act(q, std::polar(1.0, theta), p));
  return norm(back - p);
}

}  // namespace

FixedPointCheck is_fixed_point(const Quiver& q, const RepPoint& p, const CentralParameter& zeta, double tol) {
  check_shape(q, p);
  const double scale = scale_of(p);
  const double on = moment_residual(q, p, zeta);
  if (on > tol * scale * scale)
    throw Error(ErrorCode::NotOnVariety, "point misses the moment equations by " + std::to_string(on));
  const GeneratorFit fit = fit_generator(q, p);
  FixedPointCheck out;
  out.residual = fit.residual;
  if (fit.residual > tol * scale) return out;
  for (double theta : {std::numbers::pi / 3.0, std::numbers::pi / 2.0})
    out.cross_check = std::max(out.cross_check, circle_mismatch(q, p, fit.x, theta));
  out.fixed = out.cross_check <= 10.0 * tol * scale;
  if (out.fixed) out.generator = fit.x;
  return out;
}

WeightGrading weight_grading(const Quiver& q, const RepPoint& p0, const CentralParameter& zeta, double tol) {
  const FixedPointCheck check = is_fixed_point(q, p0, zeta, tol);
  if (!check.fixed)
    throw Error(ErrorCode::NotFixed, "point is not C*-fixed (residual " + std::to_string(check.residual) + ")");
  const GeneratorFit fit = fit_generator(q, p0);
  if (fit.largest_singular > 0.0 && fit.smallest_singular < 1e-8 * fit.largest_singular)
    throw Error(ErrorCode::NotFixed, "nontrivial stabilizer: the generator is not unique");

  WeightGrading g;
  g.generator = *check.generator;
  for (const auto& x : g.generator.blocks) {
    std::vector<WeightSpace> spaces;
    if (x.size() > 0) {
      const Eigen::MatrixXcd h = Complex(0, -1) * x;
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (h + h.adjoint()));
      const Eigen::VectorXd& lam = es.eigenvalues();
      for (Eigen::Index c = 0; c < lam.size();) {
        const double w = std::round(lam(c));
        Eigen::Index end = c;
        double dev = 0.0;
        while (end < lam.size() && std::abs(lam(end) - w) < 0.5) dev = std::max(dev, std::abs(lam(end++) - w));
        if (dev > 1e-6)
          throw Error(ErrorCode::NonIntegerWeights, "eigenvalue of -iX is " + std::to_string(dev) +
                                                        " away from the integer " + std::to_string(w));
        spaces.push_back(WeightSpace{static_cast<int>(w), dev, es.eigenvectors().middleCols(c, end - c)});
        g.max_deviation = std::max(g.max_deviation, dev);
        c = end;
      }
    }
    g.vertices.push_back(std::move(spaces));
  }

  const auto parts = grade_increment(q, p0, g);
  RepPoint stray = p0;
  if (auto it = parts.find(0); it != parts.end()) stray -= it->second;
  if (norm(stray) > 1e-6 * scale_of(p0))
    throw Error(ErrorCode::NotFixed, "fixed point components break the weight pattern (off-weight norm " +
                                         std::to_string(norm(stray)) + ")");
  return g;
}

std::vector<double> geometric_schedule(double start, double factor, int count) {
  if (!(start > 0.0) || !(factor > 0.0 && factor < 1.0) || count < 1)
    throw Error(ErrorCode::InvalidArgument, "schedule needs start > 0, 0 < factor < 1, count ≥ 1");
  std::vector<double> s;
  for (int k = 0; k < count; ++k) s.push_back(start * std::pow(factor, k));
  return s;
}

FlowReport flow_limit(const Quiver& q, const RepPoint& p, const CentralParameter& zeta,
                      const std::vector<double>& schedule, double tol, int max_len, const SolveOptions& opts) {
  validate(q, zeta);
  for (const Complex& c : zeta.c)
    if (c != Complex(0.0)) throw Error(ErrorCode::InvalidArgument, "flow_limit needs ζ_C = 0");
  for (size_t k = 0; k < schedule.size(); ++k)
    if (!(schedule[k] > 0.0) || (k > 0 && !(schedule[k] < schedule[k - 1])))
      throw Error(ErrorCode::InvalidArgument, "schedule must be positive and strictly decreasing");

  FlowReport rep;
  rep.point = p;
  if (is_fixed_point(q, p, zeta, tol).fixed) return rep;

  const DimensionVectors dims = dims_of(q, p);
  const PathCatalog catalog(q, dims, max_len > 0 ? max_len : nilpotency_length(dims));
  Eigen::VectorXd prev = fingerprint(q, p, catalog);
  double prev_R = 1.0;
  double prev_F = circle_moment(q, p);
  for (double R : schedule) {
    const SolveReport sol = solve_real_moment(q, cstar_act(q, R / prev_R, rep.point), zeta.sigma, opts);
    rep.point = sol.point;
    const Eigen::VectorXd fp = fingerprint(q, rep.point, catalog);
    FlowRow row{R, circle_moment(q, rep.point), (fp - prev).norm()};
    // Near the limit F stalls at roundoff level; only a real increase counts.
    if (row.F > prev_F + 1e-12 * std::max(1.0, prev_F)) rep.monotone = false;
    rep.trace.push_back(row);
    prev = fp;
    prev_R = R;
    prev_F = row.F;
    if (row.distance < tol && is_fixed_point(q, rep.point, zeta, 10.0 * tol).fixed) return rep;
  }
  throw Error(ErrorCode::NoConvergence, "fingerprints did not stabilize along the schedule");
}

}  // namespace quivercl
