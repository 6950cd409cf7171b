#include "quivercl/quiver.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "quivercl/errors.hpp"

namespace quivercl {

Quiver::Quiver(int vertex_count, std::vector<Edge> omega)
    : n_(vertex_count), omega_(std::move(omega)), incoming_(vertex_count) {
  if (n_ < 0) throw Error(ErrorCode::InvalidQuiver, "negative vertex count");
  for (const Edge& e : omega_) {
    if (e.out < 0 || e.out >= n_ || e.in < 0 || e.in >= n_)
      throw Error(ErrorCode::InvalidQuiver, "edge endpoint out of range");
    if (e.out == e.in)
      throw Error(ErrorCode::InvalidQuiver,
                  "edge " + std::to_string(e.out) + "->" + std::to_string(e.in) + " is a self-loop");
  }
  for (int h = 0; h < edge_count(); ++h) incoming_[in(h)].push_back(h);
}

int Quiver::out(int h) const {
  return in_omega(h) ? omega_[h].out : omega_[h - omega_count()].in;
}

int Quiver::in(int h) const {
  return in_omega(h) ? omega_[h].in : omega_[h - omega_count()].out;
}

int DimensionVectors::total_v() const { return std::accumulate(v.begin(), v.end(), 0); }

CentralParameter CentralParameter::real(std::vector<double> sigma) {
  CentralParameter zeta;
  zeta.c.assign(sigma.size(), Complex(0.0, 0.0));
  zeta.sigma = std::move(sigma);
  return zeta;
}

void validate(const Quiver& q, const DimensionVectors& dims) {
  const auto n = static_cast<size_t>(q.vertex_count());
  if (dims.v.size() != n || dims.w.size() != n)
    throw Error(ErrorCode::ShapeMismatch, "dimension vectors must have one entry per vertex");
  for (size_t k = 0; k < n; ++k)
    if (dims.v[k] < 0 || dims.w[k] < 0)
      throw Error(ErrorCode::InvalidArgument, "dimension vectors must be non-negative");
}

void validate(const Quiver& q, const CentralParameter& zeta) {
  const auto n = static_cast<size_t>(q.vertex_count());
  if (zeta.sigma.size() != n || zeta.c.size() != n)
    throw Error(ErrorCode::ShapeMismatch, "central parameter must have one entry per vertex");
  for (size_t k = 0; k < n; ++k)
    if (!std::isfinite(zeta.sigma[k]) || !std::isfinite(zeta.c[k].real()) ||
        !std::isfinite(zeta.c[k].imag()))
      throw Error(ErrorCode::InvalidArgument, "central parameter entries must be finite");
}

Eigen::MatrixXi cartan_matrix(const Quiver& q) {
  const int n = q.vertex_count();
  Eigen::MatrixXi c = 2 * Eigen::MatrixXi::Identity(n, n);
  for (const Edge& e : q.omega()) {
    c(e.out, e.in) -= 1;
    c(e.in, e.out) -= 1;
  }
  return c;
}

std::vector<Eigen::VectorXi> positive_roots_bounded(const Quiver& q, const DimensionVectors& dims) {
  validate(q, dims);
  const int n = q.vertex_count();
  const Eigen::MatrixXi c = cartan_matrix(q);
  std::vector<Eigen::VectorXi> roots;
  Eigen::VectorXi theta = Eigen::VectorXi::Zero(n);
  // Odometer over the box 0 <= θ_k <= v_k, last coordinate fastest.
  while (true) {
    int k = n - 1;
    while (k >= 0 && theta[k] == dims.v[k]) {
      theta[k] = 0;
      --k;
    }
    if (k < 0) break;
    ++theta[k];
    if (theta.dot(c * theta) <= 2) roots.push_back(theta);
  }
  return roots;
}

namespace {

GenericityReport check_exact(const CentralParameter& zeta, const std::vector<Eigen::VectorXi>& roots) {
  GenericityReport report;
  report.exact = true;
  report.margin = std::numeric_limits<double>::infinity();
  for (const auto& theta : roots) {
    Rational s(0), re(0), im(0);
    for (int k = 0; k < theta.size(); ++k) {
      s += (*zeta.sigma_exact)[k] * theta[k];
      re += (*zeta.c_re_exact)[k] * theta[k];
      im += (*zeta.c_im_exact)[k] * theta[k];
    }
    const double m = std::abs(boost::rational_cast<double>(s)) +
                     std::hypot(boost::rational_cast<double>(re), boost::rational_cast<double>(im));
    if (m < report.margin) report.margin = m;
    if (s == Rational(0) && re == Rational(0) && im == Rational(0) && report.generic) {
      report.generic = false;
      report.wall = theta;
    }
  }
  return report;
}

}  // namespace

GenericityReport check_genericity(const CentralParameter& zeta, const Quiver& q,
                                  const DimensionVectors& dims, double tol) {
  validate(q, zeta);
  const auto roots = positive_roots_bounded(q, dims);
  if (zeta.sigma_exact && zeta.c_re_exact && zeta.c_im_exact) return check_exact(zeta, roots);

  GenericityReport report;
  report.margin = std::numeric_limits<double>::infinity();
  for (const auto& theta : roots) {
    double s = 0.0;
    Complex c = 0.0;
    for (int k = 0; k < theta.size(); ++k) {
      s += zeta.sigma[k] * theta[k];
      c += zeta.c[k] * static_cast<double>(theta[k]);
    }
    const double m = std::abs(s) + std::abs(c);
    if (m < report.margin) report.margin = m;
    if (m <= tol && report.generic) {
      report.generic = false;
      report.wall = theta;
    }
  }
  return report;
}

bool is_generic(const CentralParameter& zeta, const Quiver& q, const DimensionVectors& dims) {
  return check_genericity(zeta, q, dims).generic;
}

long expected_dimension(const Quiver& q, const DimensionVectors& dims) {
  validate(q, dims);
  const int n = q.vertex_count();
  Eigen::VectorXi v(n), w(n);
  for (int k = 0; k < n; ++k) {
    v[k] = dims.v[k];
    w[k] = dims.w[k];
  }
  const Eigen::VectorXi rhs = 2 * w - cartan_matrix(q) * v;
  return 2L * v.dot(rhs);
}

}  // namespace quivercl
