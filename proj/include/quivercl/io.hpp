#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "quivercl/conformal.hpp"
#include "quivercl/fixed_points.hpp"
#include "quivercl/invariants.hpp"
#include "quivercl/moment_solver.hpp"
#include "quivercl/slices.hpp"

namespace quivercl {

using nlohmann::json;

/// A quiver file: the quiver, dimension vectors, ζ and optional run data.
///
///   {"name": "tstar_p1", "vertices": 1, "edges": [[0, 1]], "v": [1], "w": [2],
///    "sigma": [1], "c": [0], "fixed_point": {...}, "slice_direction": {...}}
///
/// sigma and c entries are numbers or "p/q" strings (c also [re, im]); when
/// every entry is an integer or a fraction, genericity is decided exactly.
struct QuiverConfig {
  std::string name;
  Quiver quiver;
  DimensionVectors dims;
  CentralParameter zeta;
  std::optional<RepPoint> fixed_point;
  std::optional<RepPoint> slice_direction;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  std::optional<int> max_len;
  std::vector<double> R_grid;
  std::vector<double> hbar_grid;
  std::vector<Complex> hbar;
  std::optional<std::string> escape_path;
};

QuiverConfig parse_config(const json& j);
QuiverConfig load_config(const std::string& path);

json to_json(const Eigen::MatrixXcd& m);
Eigen::MatrixXcd matrix_from_json(const json& j, Eigen::Index rows, Eigen::Index cols);

/// {"B": [...], "i": [...], "j": [...]}, matrices as rows of [re, im] pairs.
json to_json(const RepPoint& p);
RepPoint rep_point_from_json(const json& j, const Quiver& q, const DimensionVectors& dims);

json to_json(const LieElement& x);
json to_json(const SolveReport& r);
json to_json(const WeightGrading& g);
json to_json(const SliceBasis& b);
json to_json(const GenericityReport& r);
json to_json(const ConvergenceStudy& s);
json to_json(const EscapeStudy& s);

/// Rows "label,value" in catalog order.
void write_fingerprint_csv(std::ostream& os, const PathCatalog& catalog, const Eigen::VectorXd& fp);
/// Columns R, distance, stage1..stage4.
void write_convergence_csv(std::ostream& os, const ConvergenceStudy& s);
/// Columns hbar_re, hbar_im, magnitude, used.
void write_escape_csv(std::ostream& os, const EscapeStudy& s);
/// Columns R, F, distance.
void write_flow_csv(std::ostream& os, const FlowReport& r);
/// Columns iter, residual, damping.
void write_history_csv(std::ostream& os, const SolveReport& r);

/// Shortest round-trip decimal form of a double.
std::string format_double(double x);

}  // namespace quivercl
