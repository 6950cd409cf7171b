#pragma once

#include <complex>
#include <optional>
#include <vector>

#include <Eigen/Core>
#include <boost/rational.hpp>

namespace quivercl {

using Complex = std::complex<double>;
using Rational = boost::rational<long long>;

struct Edge {
  int out = 0;
  int in = 0;
};

/// A loop-free quiver with a chosen orientation Ω.  The doubled edge set H is
/// indexed 0..2E-1: index h < E is the Ω edge edges()[h], index h + E is its
/// reversal h̄ ∈ Ω̄.
class Quiver {
 public:
  Quiver() = default;
  Quiver(int vertex_count, std::vector<Edge> omega);

  int vertex_count() const { return n_; }
  int omega_count() const { return static_cast<int>(omega_.size()); }
  int edge_count() const { return 2 * omega_count(); }
  const std::vector<Edge>& omega() const { return omega_; }

  int out(int h) const;
  int in(int h) const;
  int reverse(int h) const { return h < omega_count() ? h + omega_count() : h - omega_count(); }
  bool in_omega(int h) const { return h < omega_count(); }
  int epsilon(int h) const { return in_omega(h) ? 1 : -1; }

  /// Edges h ∈ H with in(h) == k.
  const std::vector<int>& incoming(int k) const { return incoming_[k]; }

 private:
  int n_ = 0;
  std::vector<Edge> omega_;
  std::vector<std::vector<int>> incoming_;
};

struct DimensionVectors {
  std::vector<int> v;
  std::vector<int> w;

  int total_v() const;
};

/// ζ = (ζ_R, ζ_C) with ζ_R,k = (i/2)·σ_k·Id and ζ_C,k = c_k·Id.  With this
/// normalization the real moment equation reads -2iμ_R = σ·Id.
struct CentralParameter {
  std::vector<double> sigma;
  std::vector<Complex> c;

  /// Exact values when the input was given as rationals (integers or "p/q").
  std::optional<std::vector<Rational>> sigma_exact;
  std::optional<std::vector<Rational>> c_re_exact;
  std::optional<std::vector<Rational>> c_im_exact;

  static CentralParameter real(std::vector<double> sigma);
};

void validate(const Quiver& q, const DimensionVectors& dims);
void validate(const Quiver& q, const CentralParameter& zeta);

Eigen::MatrixXi cartan_matrix(const Quiver& q);

/// All θ ∈ Z^n_{≥0} \ {0} with θᵗCθ ≤ 2 and θ_k ≤ v_k, in lexicographic order.
std::vector<Eigen::VectorXi> positive_roots_bounded(const Quiver& q, const DimensionVectors& dims);

struct GenericityReport {
  bool generic = true;
  bool exact = false;
  /// min over roots of |σ·θ| + |c·θ|; +inf when there are no roots.
  double margin = 0.0;
  std::optional<Eigen::VectorXi> wall;
};

GenericityReport check_genericity(const CentralParameter& zeta, const Quiver& q,
                                  const DimensionVectors& dims, double tol = 1e-12);

bool is_generic(const CentralParameter& zeta, const Quiver& q, const DimensionVectors& dims);

/// 2·vᵗ(2w − Cv); negative values mean the variety is empty.
long expected_dimension(const Quiver& q, const DimensionVectors& dims);

}  // namespace quivercl
