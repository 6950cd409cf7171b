#pragma once

#include <map>
#include <vector>

#include <Eigen/Dense>

#include "quivercl/rep_space.hpp"

namespace quivercl {

struct WeightSpace {
  int weight = 0;
  /// Distance of the eigenvalue cluster from the integer weight.
  double deviation = 0.0;
  /// Orthonormal columns spanning V_k^weight.
  Eigen::MatrixXcd basis;
};

/// Eigenspace decomposition V_k = ⊕_m V_k^m of −iX at a C*-fixed point, where
/// the skew-hermitian generator X satisfies exp(θX)·(e^{iθ}·p0) = p0.
struct WeightGrading {
  std::vector<std::vector<WeightSpace>> vertices;
  LieElement generator;
  double max_deviation = 0.0;

  int vertex_count() const { return static_cast<int>(vertices.size()); }
  std::vector<int> dims() const;
  /// Orthogonal projector onto V_k^m (zero when m does not occur).
  Eigen::MatrixXcd projector(int k, int m) const;
  /// Distinct weights over all vertices, ascending.
  std::vector<int> weights() const;
};

/// Splits ξ into its End(V_k)_m parts P^{a+m} ξ P^a.
std::map<int, LieElement> decompose_lie(const LieElement& xi, const WeightGrading& grading);

/// Splits an increment by full-action weight: Ω blocks V^a→V^b carry b−a,
/// Ω̄ blocks b−a+1, I_k into V^b carries b, J_k out of V^a carries 1−a.
std::map<int, RepPoint> grade_increment(const Quiver& q, const RepPoint& dq, const WeightGrading& grading);

/// Σ_w R^w q_w, the C*-rescaling q ↦ q_R of increments at the fixed point.
RepPoint rescale(const Quiver& q, const RepPoint& dq, const WeightGrading& grading, Complex R);

/// Orthonormal coordinate basis (columns, as in to_vector) of the increments
/// whose full-action weight is at least min_weight.
Eigen::MatrixXcd weight_subspace_basis(const Quiver& q, const RepPoint& shape, const WeightGrading& grading,
                                       int min_weight = 1);

}  // namespace quivercl
