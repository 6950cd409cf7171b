#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "quivercl/rep_space.hpp"

namespace quivercl {

/// An edge of the augmented set Ĥ: a graph edge h ∈ H, ǩ: W_k → V_k (applies
/// i_k) or k̂: V_k → W_k (applies j_k).
struct AugEdge {
  enum class Type { graph, from_framing, to_framing };
  Type type = Type::graph;
  int index = 0;

  friend bool operator==(const AugEdge&, const AugEdge&) = default;
  friend auto operator<=>(const AugEdge&, const AugEdge&) = default;
};

enum class PathKind { loop, admissible };

/// A composable path in traversal order: the first edge is applied first.
struct PathSpec {
  std::vector<AugEdge> edges;
  PathKind kind = PathKind::loop;

  int length() const { return static_cast<int>(edges.size()); }
  /// "L:h0.h1~" for loops, "P:c0.h0.j1" for admissible paths.
  std::string canonical() const;
  static PathSpec parse(const std::string& s);

  friend bool operator==(const PathSpec&, const PathSpec&) = default;
};

/// Enumerates closed loops (up to rotation) or admissible paths of length at
/// most max_len.  Paths through vertices with v_k = 0 are skipped, and
/// admissible paths need w > 0 at both ends.
std::vector<PathSpec> enumerate_paths(const Quiver& q, const DimensionVectors& dims, int max_len, PathKind kind);

/// Throws unless the path is composable and of the stated kind.
void validate(const Quiver& q, const PathSpec& path);

/// Ordered product j_l B_{h_m}···B_{h_1} i_k (or the loop product).
Eigen::MatrixXcd eval_path(const Quiver& q, const RepPoint& p, const PathSpec& path);

/// |Tr| for loops, Frobenius norm for admissible paths.
double invariant_magnitude(const Quiver& q, const RepPoint& p, const PathSpec& path);

/// Loops then admissible paths, each enumerated once for a fixed shape.
class PathCatalog {
 public:
  PathCatalog(const Quiver& q, const DimensionVectors& dims, int max_len);

  const std::vector<PathSpec>& loops() const { return loops_; }
  const std::vector<PathSpec>& admissible() const { return admissible_; }
  int max_len() const { return max_len_; }
  /// Label of every fingerprint entry, e.g. "L:h0.h1~:re" or "P:c0.j0[1,0]:im".
  std::vector<std::string> labels() const;

 private:
  std::vector<PathSpec> loops_;
  std::vector<PathSpec> admissible_;
  DimensionVectors dims_;
  int max_len_ = 0;
};

/// Re/Im of loop traces, then entries (row-major) of admissible matrices.
Eigen::VectorXd fingerprint(const Quiver& q, const RepPoint& p, const PathCatalog& catalog);
Eigen::VectorXd fingerprint(const Quiver& q, const RepPoint& p, int max_len);

/// Default nilpotency truncation 2·Σ v_k (at least 2).
int nilpotency_length(const DimensionVectors& dims);

bool is_nilpotent(const Quiver& q, const RepPoint& p, int max_len, double tol);

/// Number of Ω̄ edges plus the number of k̂ edges along the path.
int escape_order(const Quiver& q, const PathSpec& path);

struct EscapeRow {
  Complex hbar;
  double magnitude = 0.0;
  bool used = false;  // inside the [1e-12, 1e12] fit window
};

struct EscapeStudy {
  PathSpec path;
  int order = 0;  // the predicted M, slope ≈ −M
  double slope = 0.0;
  double fit_residual = 0.0;
  std::vector<EscapeRow> rows;
};

/// Fits log|inv(P_{A,ħ})| against log|ħ| along hbar_grid, where P_{A,ħ} is the
/// conformal-line point built from p0 + A.  Throws ZeroInvariant when the
/// invariant vanishes at p0 + A.
EscapeStudy escape_slope(const Quiver& q, const RepPoint& p0, const RepPoint& A, const std::vector<Complex>& hbar_grid,
                         const PathSpec& path, double tol = 1e-10);

}  // namespace quivercl
