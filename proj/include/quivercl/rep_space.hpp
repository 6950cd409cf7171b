#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "quivercl/errors.hpp"
#include "quivercl/quiver.hpp"

namespace quivercl {

/// A framed representation (B, i, j) of the doubled quiver, element of 𝕄.
/// Increments (tangent vectors) share this container.  B is indexed by
/// h ∈ H as in Quiver; B[h] has shape v_in(h) × v_out(h).
template <typename Scalar>
struct RepPointT {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  std::vector<Matrix> B;
  std::vector<Matrix> i;  // v_k × w_k
  std::vector<Matrix> j;  // w_k × v_k

  static RepPointT zero(const Quiver& q, const DimensionVectors& dims) {
    validate(q, dims);
    RepPointT p;
    p.B.reserve(q.edge_count());
    for (int h = 0; h < q.edge_count(); ++h)
      p.B.push_back(Matrix::Zero(dims.v[q.in(h)], dims.v[q.out(h)]));
    for (int k = 0; k < q.vertex_count(); ++k) {
      p.i.push_back(Matrix::Zero(dims.v[k], dims.w[k]));
      p.j.push_back(Matrix::Zero(dims.w[k], dims.v[k]));
    }
    return p;
  }

  template <typename F>
  void for_each_block(F&& f) {
    for (auto& m : B) f(m);
    for (auto& m : i) f(m);
    for (auto& m : j) f(m);
  }
  template <typename F>
  void for_each_block(F&& f) const {
    for (const auto& m : B) f(m);
    for (const auto& m : i) f(m);
    for (const auto& m : j) f(m);
  }

  /// Number of complex coordinates.
  Eigen::Index size() const {
    Eigen::Index n = 0;
    for_each_block([&](const Matrix& m) { n += m.size(); });
    return n;
  }

  RepPointT& operator+=(const RepPointT& o) {
    zip(o, [](Matrix& a, const Matrix& b) { a += b; });
    return *this;
  }
  RepPointT& operator-=(const RepPointT& o) {
    zip(o, [](Matrix& a, const Matrix& b) { a -= b; });
    return *this;
  }
  RepPointT& operator*=(Scalar s) {
    for_each_block([s](Matrix& m) { m *= s; });
    return *this;
  }
  friend RepPointT operator+(RepPointT a, const RepPointT& b) { return a += b; }
  friend RepPointT operator-(RepPointT a, const RepPointT& b) { return a -= b; }
  friend RepPointT operator*(Scalar s, RepPointT a) { return a *= s; }
  friend RepPointT operator*(RepPointT a, Scalar s) { return a *= s; }
  RepPointT operator-() const { return Scalar(-1) * *this; }

  bool same_shape(const RepPointT& o) const {
    if (B.size() != o.B.size() || i.size() != o.i.size() || j.size() != o.j.size()) return false;
    auto eq = [](const Matrix& a, const Matrix& b) { return a.rows() == b.rows() && a.cols() == b.cols(); };
    for (size_t h = 0; h < B.size(); ++h)
      if (!eq(B[h], o.B[h])) return false;
    for (size_t k = 0; k < i.size(); ++k)
      if (!eq(i[k], o.i[k]) || !eq(j[k], o.j[k])) return false;
    return true;
  }

 private:
  template <typename F>
  void zip(const RepPointT& o, F&& f) {
    if (!same_shape(o)) throw Error(ErrorCode::ShapeMismatch, "representation shapes differ");
    for (size_t h = 0; h < B.size(); ++h) f(B[h], o.B[h]);
    for (size_t k = 0; k < i.size(); ++k) {
      f(i[k], o.i[k]);
      f(j[k], o.j[k]);
    }
  }
};

enum class LieClass { skew_hermitian, hermitian, general };

/// Element of 𝔤_v ⊗ C: one v_k × v_k block per vertex.
template <typename Scalar>
struct LieElementT {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  std::vector<Matrix> blocks;
  LieClass cls = LieClass::general;

  static LieElementT zero(const std::vector<int>& v, LieClass cls = LieClass::general) {
    LieElementT x;
    x.cls = cls;
    for (int d : v) x.blocks.push_back(Matrix::Zero(d, d));
    return x;
  }

  int vertex_count() const { return static_cast<int>(blocks.size()); }
  Eigen::Index size() const {
    Eigen::Index n = 0;
    for (const auto& b : blocks) n += b.size();
    return n;
  }

  LieElementT& operator+=(const LieElementT& o) {
    check(o);
    for (size_t k = 0; k < blocks.size(); ++k) blocks[k] += o.blocks[k];
    if (cls != o.cls) cls = LieClass::general;
    return *this;
  }
  LieElementT& operator-=(const LieElementT& o) {
    check(o);
    for (size_t k = 0; k < blocks.size(); ++k) blocks[k] -= o.blocks[k];
    if (cls != o.cls) cls = LieClass::general;
    return *this;
  }
  LieElementT& operator*=(Scalar s) {
    for (auto& b : blocks) b *= s;
    if (std::imag(s) != 0.0) cls = LieClass::general;
    return *this;
  }
  friend LieElementT operator+(LieElementT a, const LieElementT& b) { return a += b; }
  friend LieElementT operator-(LieElementT a, const LieElementT& b) { return a -= b; }
  friend LieElementT operator*(Scalar s, LieElementT a) { return a *= s; }

 private:
  void check(const LieElementT& o) const {
    if (o.blocks.size() != blocks.size()) throw Error(ErrorCode::ShapeMismatch, "Lie element shapes differ");
    for (size_t k = 0; k < blocks.size(); ++k)
      if (o.blocks[k].rows() != blocks[k].rows())
        throw Error(ErrorCode::ShapeMismatch, "Lie element shapes differ");
  }
};

/// Element of G_v^C (or G_v when unitary is set).
template <typename Scalar>
struct GaugeElementT {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  std::vector<Matrix> g;
  bool unitary = false;

  static GaugeElementT identity(const std::vector<int>& v) {
    GaugeElementT e;
    e.unitary = true;
    for (int d : v) e.g.push_back(Matrix::Identity(d, d));
    return e;
  }

  GaugeElementT inverse() const {
    GaugeElementT r;
    r.unitary = unitary;
    for (const auto& m : g) {
      if (unitary) {
        r.g.push_back(m.adjoint());
        continue;
      }
      Eigen::FullPivLU<Matrix> lu(m);
      if (!lu.isInvertible()) throw Error(ErrorCode::SingularGauge, "gauge block is singular");
      r.g.push_back(lu.inverse());
    }
    return r;
  }

  friend GaugeElementT operator*(const GaugeElementT& a, const GaugeElementT& b) {
    if (a.g.size() != b.g.size()) throw Error(ErrorCode::ShapeMismatch, "gauge shapes differ");
    GaugeElementT r;
    r.unitary = a.unitary && b.unitary;
    for (size_t k = 0; k < a.g.size(); ++k) r.g.push_back(a.g[k] * b.g[k]);
    return r;
  }
};

using RepPoint = RepPointT<Complex>;
using LieElement = LieElementT<Complex>;
using GaugeElement = GaugeElementT<Complex>;
using MatrixXc = Eigen::MatrixXcd;
using VectorXc = Eigen::VectorXcd;

// ---------------------------------------------------------------------------
// Shapes

template <typename Scalar>
DimensionVectors dims_of(const Quiver& q, const RepPointT<Scalar>& p) {
  DimensionVectors d;
  for (int k = 0; k < q.vertex_count(); ++k) {
    d.v.push_back(static_cast<int>(p.i.at(k).rows()));
    d.w.push_back(static_cast<int>(p.i.at(k).cols()));
  }
  return d;
}

template <typename Scalar>
void check_shape(const Quiver& q, const RepPointT<Scalar>& p) {
  if (static_cast<int>(p.B.size()) != q.edge_count() || static_cast<int>(p.i.size()) != q.vertex_count() ||
      static_cast<int>(p.j.size()) != q.vertex_count())
    throw Error(ErrorCode::ShapeMismatch, "representation does not match quiver");
  const DimensionVectors d = dims_of(q, p);
  for (int h = 0; h < q.edge_count(); ++h)
    if (p.B[h].rows() != d.v[q.in(h)] || p.B[h].cols() != d.v[q.out(h)])
      throw Error(ErrorCode::ShapeMismatch, "edge matrix has wrong shape");
  for (int k = 0; k < q.vertex_count(); ++k)
    if (p.j[k].rows() != d.w[k] || p.j[k].cols() != d.v[k])
      throw Error(ErrorCode::ShapeMismatch, "framing matrix has wrong shape");
}

// ---------------------------------------------------------------------------
// Pairings

/// g(p, p') = Σ_h Tr(B_h B'_h†) + Σ_k Tr(i_k i'_k† + j'_k† j_k): linear in p,
/// antilinear in p'.
template <typename Scalar>
Scalar metric(const RepPointT<Scalar>& p, const RepPointT<Scalar>& pp) {
  if (!p.same_shape(pp)) throw Error(ErrorCode::ShapeMismatch, "metric: shapes differ");
  Scalar s(0);
  auto add = [&s](const auto& a, const auto& b) { s += (a.array() * b.array().conjugate()).sum(); };
  for (size_t h = 0; h < p.B.size(); ++h) add(p.B[h], pp.B[h]);
  for (size_t k = 0; k < p.i.size(); ++k) {
    add(p.i[k], pp.i[k]);
    add(p.j[k], pp.j[k]);
  }
  return s;
}

template <typename Scalar>
double squared_norm(const RepPointT<Scalar>& p) {
  double s = 0.0;
  p.for_each_block([&s](const auto& m) { s += m.squaredNorm(); });
  return s;
}

template <typename Scalar>
double norm(const RepPointT<Scalar>& p) {
  return std::sqrt(squared_norm(p));
}

/// ω_C(p, p') = Σ_{h∈H} ε(h) Tr(B_h B'_h̄) + Σ_k Tr(i_k j'_k − i'_k j_k).
template <typename Scalar>
Scalar symplectic_form(const Quiver& q, const RepPointT<Scalar>& p, const RepPointT<Scalar>& pp) {
  if (!p.same_shape(pp)) throw Error(ErrorCode::ShapeMismatch, "symplectic_form: shapes differ");
  Scalar s(0);
  for (int h = 0; h < q.edge_count(); ++h)
    s += Scalar(q.epsilon(h)) * (p.B[h] * pp.B[q.reverse(h)]).trace();
  for (int k = 0; k < q.vertex_count(); ++k)
    s += (p.i[k] * pp.j[k]).trace() - (pp.i[k] * p.j[k]).trace();
  return s;
}

/// ⟨ξ, η⟩ = Σ_k Tr(ξ_k η_k†).
template <typename Scalar>
Scalar lie_inner(const LieElementT<Scalar>& a, const LieElementT<Scalar>& b) {
  if (a.blocks.size() != b.blocks.size()) throw Error(ErrorCode::ShapeMismatch, "lie_inner: shapes differ");
  Scalar s(0);
  for (size_t k = 0; k < a.blocks.size(); ++k) s += (a.blocks[k].array() * b.blocks[k].array().conjugate()).sum();
  return s;
}

template <typename Scalar>
double norm(const LieElementT<Scalar>& a) {
  double s = 0.0;
  for (const auto& b : a.blocks) s += b.squaredNorm();
  return std::sqrt(s);
}

template <typename Scalar>
bool satisfies_class(const LieElementT<Scalar>& x, LieClass cls, double tol = 1e-10) {
  for (const auto& b : x.blocks) {
    if (cls == LieClass::hermitian && (b - b.adjoint()).norm() > tol) return false;
    if (cls == LieClass::skew_hermitian && (b + b.adjoint()).norm() > tol) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Moment maps

/// X(p) = −2iμ_R(p): per vertex Σ_{in(h)=k} B_h B_h† − B_h̄† B_h̄ + i_k i_k† − j_k† j_k.
/// The real moment equation μ_R = ζ_R reads X = σ·Id.
template <typename Scalar>
LieElementT<Scalar> moment_real_form(const Quiver& q, const RepPointT<Scalar>& p) {
  check_shape(q, p);
  LieElementT<Scalar> x;
  x.cls = LieClass::hermitian;
  for (int k = 0; k < q.vertex_count(); ++k) {
    typename LieElementT<Scalar>::Matrix m = p.i[k] * p.i[k].adjoint() - p.j[k].adjoint() * p.j[k];
    for (int h : q.incoming(k)) {
      const auto& bh = p.B[h];
      const auto& bbar = p.B[q.reverse(h)];
      m += bh * bh.adjoint() - bbar.adjoint() * bbar;
    }
    x.blocks.push_back(std::move(m));
  }
  return x;
}

/// μ_R(p) = (i/2)·X(p), skew-hermitian.
template <typename Scalar>
LieElementT<Scalar> moment_real(const Quiver& q, const RepPointT<Scalar>& p) {
  LieElementT<Scalar> x = moment_real_form(q, p);
  x *= Scalar(0.0, 0.5);
  x.cls = LieClass::skew_hermitian;
  return x;
}

/// μ_C(p)_k = Σ_{in(h)=k} ε(h) B_h B_h̄ + i_k j_k.
template <typename Scalar>
LieElementT<Scalar> moment_complex(const Quiver& q, const RepPointT<Scalar>& p) {
  check_shape(q, p);
  LieElementT<Scalar> x;
  for (int k = 0; k < q.vertex_count(); ++k) {
    typename LieElementT<Scalar>::Matrix m = p.i[k] * p.j[k];
    for (int h : q.incoming(k)) m += Scalar(q.epsilon(h)) * p.B[h] * p.B[q.reverse(h)];
    x.blocks.push_back(std::move(m));
  }
  return x;
}

/// Per-vertex constant target c·Id (or σ·Id) as a Lie element.
template <typename Scalar, typename Value>
LieElementT<Scalar> central_element(const std::vector<int>& v, const std::vector<Value>& values) {
  LieElementT<Scalar> x;
  for (size_t k = 0; k < v.size(); ++k)
    x.blocks.push_back(Scalar(values[k]) * LieElementT<Scalar>::Matrix::Identity(v[k], v[k]));
  return x;
}

/// dμ_C(p, q)_k = Σ_{in(h)=k} ε(h)(B_h Q_h̄ + Q_h B_h̄) + i_k J_k + I_k j_k.
template <typename Scalar>
LieElementT<Scalar> dmu_complex(const Quiver& q, const RepPointT<Scalar>& p, const RepPointT<Scalar>& dq) {
  check_shape(q, p);
  if (!p.same_shape(dq)) throw Error(ErrorCode::ShapeMismatch, "dmu_complex: shapes differ");
  LieElementT<Scalar> x;
  for (int k = 0; k < q.vertex_count(); ++k) {
    typename LieElementT<Scalar>::Matrix m = p.i[k] * dq.j[k] + dq.i[k] * p.j[k];
    for (int h : q.incoming(k)) {
      const int hb = q.reverse(h);
      m += Scalar(q.epsilon(h)) * (p.B[h] * dq.B[hb] + dq.B[h] * p.B[hb]);
    }
    x.blocks.push_back(std::move(m));
  }
  return x;
}

// ---------------------------------------------------------------------------
// Group action

template <typename Scalar>
RepPointT<Scalar> gauge_act(const Quiver& q, const GaugeElementT<Scalar>& g, const RepPointT<Scalar>& p) {
  check_shape(q, p);
  if (static_cast<int>(g.g.size()) != q.vertex_count()) throw Error(ErrorCode::ShapeMismatch, "gauge_act: vertex count");
  for (int k = 0; k < q.vertex_count(); ++k)
    if (g.g[k].rows() != p.i[k].rows() || g.g[k].cols() != p.i[k].rows())
      throw Error(ErrorCode::ShapeMismatch, "gauge_act: block size");
  const GaugeElementT<Scalar> inv = g.inverse();
  RepPointT<Scalar> r = p;
  for (int h = 0; h < q.edge_count(); ++h) r.B[h] = g.g[q.in(h)] * p.B[h] * inv.g[q.out(h)];
  for (int k = 0; k < q.vertex_count(); ++k) {
    r.i[k] = g.g[k] * p.i[k];
    r.j[k] = p.j[k] * inv.g[k];
  }
  return r;
}

/// Blockwise matrix exponential.  Hermitian and skew-hermitian inputs go
/// through the eigendecomposition; general ones through Padé scaling and
/// squaring.
template <typename Scalar>
GaugeElementT<Scalar> exp(const LieElementT<Scalar>& x) {
  using Matrix = typename LieElementT<Scalar>::Matrix;
  GaugeElementT<Scalar> g;
  g.unitary = x.cls == LieClass::skew_hermitian;
  for (const auto& b : x.blocks) {
    if (b.size() == 0) {
      g.g.push_back(b);
    } else if (x.cls == LieClass::hermitian) {
      Eigen::SelfAdjointEigenSolver<Matrix> es(b);
      g.g.push_back(es.eigenvectors() * es.eigenvalues().array().exp().matrix().asDiagonal() *
                    es.eigenvectors().adjoint());
    } else if (x.cls == LieClass::skew_hermitian) {
      const Matrix h = Scalar(0, -1) * b;
      Eigen::SelfAdjointEigenSolver<Matrix> es(h);
      const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> d =
          (Scalar(0, 1) * es.eigenvalues().template cast<Scalar>()).array().exp();
      g.g.push_back(es.eigenvectors() * d.asDiagonal() * es.eigenvectors().adjoint());
    } else {
      g.g.push_back(b.exp());
    }
  }
  return g;
}

/// l_p(ξ) = (ξ_in(h) B_h − B_h ξ_out(h), ξ_k i_k, −j_k ξ_k), the derivative of
/// t ↦ exp(tξ)·p at t = 0.
template <typename Scalar>
RepPointT<Scalar> inf_action(const Quiver& q, const RepPointT<Scalar>& p, const LieElementT<Scalar>& xi) {
  check_shape(q, p);
  if (xi.vertex_count() != q.vertex_count()) throw Error(ErrorCode::ShapeMismatch, "inf_action: vertex count");
  RepPointT<Scalar> r = p;
  for (int h = 0; h < q.edge_count(); ++h)
    r.B[h] = xi.blocks[q.in(h)] * p.B[h] - p.B[h] * xi.blocks[q.out(h)];
  for (int k = 0; k < q.vertex_count(); ++k) {
    r.i[k] = xi.blocks[k] * p.i[k];
    r.j[k] = -p.j[k] * xi.blocks[k];
  }
  return r;
}

/// l_p*(q)_k = Σ_{in(h)=k} A_h B_h† − B_h̄† A_h̄ + I_k i_k† − j_k† J_k, the adjoint
/// of l_p for the metric and trace pairings.
template <typename Scalar>
LieElementT<Scalar> inf_action_adjoint(const Quiver& q, const RepPointT<Scalar>& p, const RepPointT<Scalar>& dq) {
  check_shape(q, p);
  if (!p.same_shape(dq)) throw Error(ErrorCode::ShapeMismatch, "inf_action_adjoint: shapes differ");
  LieElementT<Scalar> x;
  for (int k = 0; k < q.vertex_count(); ++k) {
    typename LieElementT<Scalar>::Matrix m = dq.i[k] * p.i[k].adjoint() - p.j[k].adjoint() * dq.j[k];
    for (int h : q.incoming(k)) {
      const int hb = q.reverse(h);
      m += dq.B[h] * p.B[h].adjoint() - p.B[hb].adjoint() * dq.B[hb];
    }
    x.blocks.push_back(std::move(m));
  }
  return x;
}

// ---------------------------------------------------------------------------
// Flattening to coordinate vectors (B blocks, then i_k, j_k per vertex;
// column-major inside each block).

template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> to_vector(const RepPointT<Scalar>& p) {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> v(p.size());
  Eigen::Index o = 0;
  auto put = [&](const auto& m) {
    v.segment(o, m.size()) = Eigen::Map<const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>>(m.data(), m.size());
    o += m.size();
  };
  for (const auto& m : p.B) put(m);
  for (size_t k = 0; k < p.i.size(); ++k) {
    put(p.i[k]);
    put(p.j[k]);
  }
  return v;
}

template <typename Scalar, typename Derived>
RepPointT<Scalar> from_vector(const RepPointT<Scalar>& shape, const Eigen::MatrixBase<Derived>& v) {
  if (v.size() != shape.size()) throw Error(ErrorCode::ShapeMismatch, "from_vector: length");
  RepPointT<Scalar> p = shape;
  Eigen::Index o = 0;
  auto get = [&](auto& m) {
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      for (Eigen::Index r = 0; r < m.rows(); ++r) m(r, c) = v(o++);
  };
  for (auto& m : p.B) get(m);
  for (size_t k = 0; k < p.i.size(); ++k) {
    get(p.i[k]);
    get(p.j[k]);
  }
  return p;
}

template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> to_vector(const LieElementT<Scalar>& x) {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> v(x.size());
  Eigen::Index o = 0;
  for (const auto& b : x.blocks) {
    v.segment(o, b.size()) = Eigen::Map<const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>>(b.data(), b.size());
    o += b.size();
  }
  return v;
}

template <typename Scalar, typename Derived>
LieElementT<Scalar> lie_from_vector(const std::vector<int>& v, const Eigen::MatrixBase<Derived>& vec,
                                    LieClass cls = LieClass::general) {
  LieElementT<Scalar> x = LieElementT<Scalar>::zero(v, cls);
  if (vec.size() != x.size()) throw Error(ErrorCode::ShapeMismatch, "lie_from_vector: length");
  Eigen::Index o = 0;
  for (auto& b : x.blocks)
    for (Eigen::Index c = 0; c < b.cols(); ++c)
      for (Eigen::Index r = 0; r < b.rows(); ++r) b(r, c) = vec(o++);
  return x;
}

}  // namespace quivercl
