#pragma once

#include <vector>

#include <Eigen/Dense>

#include "quivercl/rep_space.hpp"

namespace quivercl {

/// Orthonormal basis of the hermitian blocks (real dimension Σ v_k²) for the
/// pairing Re⟨·,·⟩.  Multiplying by i gives a basis of the skew-hermitian ones.
std::vector<LieElement> hermitian_basis(const std::vector<int>& v);

/// Real coordinates Re⟨x, e_b⟩ against an orthonormal basis.
Eigen::VectorXd real_coords(const std::vector<LieElement>& basis, const LieElement& x);

LieElement combine(const std::vector<LieElement>& basis, const Eigen::VectorXd& c, LieClass cls);

/// ½·log(g†g), the hermitian exponent of the polar part of g.
LieElement half_log_gram(const GaugeElement& g);

/// Orthonormal columns spanning ker(m); rank decided by σ > rel_tol·σ_max.
Eigen::MatrixXcd null_space(const Eigen::MatrixXcd& m, double rel_tol = 1e-8);

/// Orthonormal columns spanning range(m†) = ker(m)^⊥.
Eigen::MatrixXcd row_space(const Eigen::MatrixXcd& m, double rel_tol = 1e-8);

/// Matrix of a complex-linear map given by its action on coordinate vectors.
template <typename F>
Eigen::MatrixXcd assemble(Eigen::Index n_in, F&& f) {
  Eigen::MatrixXcd m;
  for (Eigen::Index c = 0; c < n_in; ++c) {
    Eigen::VectorXcd e = Eigen::VectorXcd::Zero(n_in);
    e(c) = 1.0;
    const Eigen::VectorXcd col = f(e);
    if (c == 0) m.resize(col.size(), n_in);
    m.col(c) = col;
  }
  return m;
}

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  /// Root-mean-square residual of the fit.
  double residual = 0.0;
  int points = 0;
};

/// Least-squares line through (x, y); needs at least two points.
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace quivercl
