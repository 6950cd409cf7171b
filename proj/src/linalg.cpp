#include "quivercl/linalg.hpp"

#include <cmath>

namespace quivercl {

std::vector<LieElement> hermitian_basis(const std::vector<int>& v) {
  std::vector<LieElement> basis;
  const double s = 1.0 / std::sqrt(2.0);
  for (size_t k = 0; k < v.size(); ++k) {
    for (int a = 0; a < v[k]; ++a) {
      for (int b = a; b < v[k]; ++b) {
        if (a == b) {
          LieElement e = LieElement::zero(v, LieClass::hermitian);
          e.blocks[k](a, a) = 1.0;
          basis.push_back(std::move(e));
          continue;
        }
        LieElement re = LieElement::zero(v, LieClass::hermitian);
        re.blocks[k](a, b) = s;
        re.blocks[k](b, a) = s;
        basis.push_back(std::move(re));
        LieElement im = LieElement::zero(v, LieClass::hermitian);
        im.blocks[k](a, b) = Complex(0, s);
        im.blocks[k](b, a) = Complex(0, -s);
        basis.push_back(std::move(im));
      }
    }
  }
  return basis;
}

Eigen::VectorXd real_coords(const std::vector<LieElement>& basis, const LieElement& x) {
  Eigen::VectorXd c(static_cast<Eigen::Index>(basis.size()));
  for (size_t b = 0; b < basis.size(); ++b) c(b) = std::real(lie_inner(x, basis[b]));
  return c;
}

LieElement combine(const std::vector<LieElement>& basis, const Eigen::VectorXd& c, LieClass cls) {
  if (basis.empty()) throw Error(ErrorCode::InvalidArgument, "combine: empty basis");
  LieElement x = basis.front();
  for (auto& b : x.blocks) b.setZero();
  for (size_t b = 0; b < basis.size(); ++b)
    for (size_t k = 0; k < x.blocks.size(); ++k) x.blocks[k] += c(b) * basis[b].blocks[k];
  x.cls = cls;
  return x;
}

LieElement half_log_gram(const GaugeElement& g) {
  LieElement x;
  x.cls = LieClass::hermitian;
  for (const auto& m : g.g) {
    if (m.size() == 0) {
      x.blocks.push_back(m);
      continue;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m.adjoint() * m);
    const Eigen::VectorXd l = es.eigenvalues();
    if (l.minCoeff() <= 0.0) throw Error(ErrorCode::SingularGauge, "gram matrix is not positive");
    const Eigen::VectorXcd d = (0.5 * l.array().log()).cast<Complex>();
    x.blocks.push_back(es.eigenvectors() * d.asDiagonal() * es.eigenvectors().adjoint());
  }
  return x;
}

namespace {

// Singular vectors of m with the rank split at rel_tol·σ_max.
std::pair<Eigen::MatrixXcd, Eigen::Index> right_split(const Eigen::MatrixXcd& m, double rel_tol) {
  const Eigen::Index n = m.cols();
  if (m.rows() == 0 || n == 0 || m.norm() == 0.0) return {Eigen::MatrixXcd::Identity(n, n), 0};
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeFullV);
  const Eigen::VectorXd& s = svd.singularValues();
  Eigen::Index rank = 0;
  while (rank < s.size() && s(rank) > rel_tol * s(0)) ++rank;
  return {svd.matrixV(), rank};
}

}  // namespace

Eigen::MatrixXcd null_space(const Eigen::MatrixXcd& m, double rel_tol) {
  auto [v, rank] = right_split(m, rel_tol);
  return v.rightCols(v.cols() - rank);
}

Eigen::MatrixXcd row_space(const Eigen::MatrixXcd& m, double rel_tol) {
  auto [v, rank] = right_split(m, rel_tol);
  return v.leftCols(rank);
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw Error(ErrorCode::InvalidArgument, "fit_line needs two or more points");
  const auto n = static_cast<Eigen::Index>(x.size());
  Eigen::MatrixXd a(n, 2);
  Eigen::VectorXd b(n);
  for (Eigen::Index r = 0; r < n; ++r) {
    a(r, 0) = x[r];
    a(r, 1) = 1.0;
    b(r) = y[r];
  }
  const Eigen::Vector2d c = a.colPivHouseholderQr().solve(b);
  LineFit fit;
  fit.slope = c(0);
  fit.intercept = c(1);
  fit.residual = std::sqrt((a * c - b).squaredNorm() / static_cast<double>(n));
  fit.points = static_cast<int>(n);
  return fit;
}

}  // namespace quivercl
