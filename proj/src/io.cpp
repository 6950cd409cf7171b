#include "quivercl/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace quivercl {

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::InvalidArgument, "config: " + what); }

// A number, or a string "p" / "p/q".  The rational is set when the value is exact.
double scalar(const json& j, std::optional<Rational>& exact) {
  exact.reset();
  if (j.is_number_integer()) {
    exact = Rational(j.get<long long>());
    return j.get<double>();
  }
  if (j.is_number()) return j.get<double>();
  if (!j.is_string()) bad("expected a number or a \"p/q\" string");
  const std::string s = j.get<std::string>();
  const auto slash = s.find('/');
  try {
    size_t used = 0;
    const long long num = std::stoll(s.substr(0, slash), &used);
    if (used != (slash == std::string::npos ? s.size() : slash)) bad("malformed rational '" + s + "'");
    long long den = 1;
    if (slash != std::string::npos) {
      den = std::stoll(s.substr(slash + 1), &used);
      if (used != s.size() - slash - 1 || den == 0) bad("malformed rational '" + s + "'");
    }
    exact = Rational(num, den);
  } catch (const std::logic_error&) {
    bad("malformed rational '" + s + "'");
  }
  return boost::rational_cast<double>(*exact);
}

std::vector<int> int_array(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_array()) bad(std::string("missing array '") + key + "'");
  std::vector<int> out;
  for (const auto& x : j[key]) {
    if (!x.is_number_integer()) bad(std::string("'") + key + "' must hold integers");
    out.push_back(x.get<int>());
  }
  return out;
}

std::vector<double> real_array(const json& j, const char* key) {
  std::vector<double> out;
  if (!j.contains(key)) return out;
  if (!j[key].is_array()) bad(std::string("'") + key + "' must be an array");
  for (const auto& x : j[key]) {
    if (!x.is_number()) bad(std::string("'") + key + "' must hold numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

Complex complex_value(const json& j) {
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  if (j.is_number()) return {j.get<double>(), 0.0};
  bad("expected a number or an [re, im] pair");
}

}  // namespace

QuiverConfig parse_config(const json& j) {
  if (!j.is_object()) bad("top level must be an object");
  QuiverConfig c;
  c.name = j.value("name", std::string("quiver"));
  if (!j.contains("vertices") || !j["vertices"].is_number_integer()) bad("missing integer 'vertices'");
  std::vector<Edge> edges;
  if (j.contains("edges")) {
    for (const auto& e : j["edges"]) {
      if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_integer())
        bad("edges are [out, in] integer pairs");
      edges.push_back({e[0].get<int>(), e[1].get<int>()});
    }
  }
  c.quiver = Quiver(j["vertices"].get<int>(), std::move(edges));
  c.dims.v = int_array(j, "v");
  c.dims.w = int_array(j, "w");
  validate(c.quiver, c.dims);

  if (!j.contains("sigma") || !j["sigma"].is_array()) bad("missing array 'sigma'");
  std::vector<Rational> se, cre, cim;
  bool exact = true;
  for (const auto& x : j["sigma"]) {
    std::optional<Rational> r;
    c.zeta.sigma.push_back(scalar(x, r));
    exact = exact && r.has_value();
    if (r) se.push_back(*r);
  }
  const json cj = j.value("c", json::array());
  if (cj.empty()) {
    c.zeta.c.assign(c.zeta.sigma.size(), Complex(0.0));
    cre.assign(c.zeta.sigma.size(), Rational(0));
    cim = cre;
  }
  for (const auto& x : cj) {
    std::optional<Rational> re, im = Rational(0);
    double vre = 0.0, vim = 0.0;
    if (x.is_array()) {
      if (x.size() != 2) bad("complex entries of 'c' are [re, im]");
      vre = scalar(x[0], re);
      vim = scalar(x[1], im);
    } else {
      vre = scalar(x, re);
    }
    c.zeta.c.emplace_back(vre, vim);
    exact = exact && re && im;
    if (re && im) {
      cre.push_back(*re);
      cim.push_back(*im);
    }
  }
  if (exact) {
    c.zeta.sigma_exact = se;
    c.zeta.c_re_exact = cre;
    c.zeta.c_im_exact = cim;
  }
  validate(c.quiver, c.zeta);

  if (j.contains("fixed_point")) c.fixed_point = rep_point_from_json(j["fixed_point"], c.quiver, c.dims);
  if (j.contains("slice_direction")) c.slice_direction = rep_point_from_json(j["slice_direction"], c.quiver, c.dims);
  if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("tol")) c.tol = j["tol"].get<double>();
  if (j.contains("max_len")) c.max_len = j["max_len"].get<int>();
  c.R_grid = real_array(j, "R_grid");
  c.hbar_grid = real_array(j, "hbar_grid");
  if (j.contains("hbar"))
    for (const auto& h : j["hbar"]) c.hbar.push_back(complex_value(h));
  if (j.contains("escape_path")) c.escape_path = j["escape_path"].get<std::string>();
  return c;
}

QuiverConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, "'" + path + "' is not valid JSON: " + e.what());
  }
  return parse_config(j);
}

json to_json(const Eigen::MatrixXcd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXcd matrix_from_json(const json& j, Eigen::Index rows, Eigen::Index cols) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(rows, cols);
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != rows)
    throw Error(ErrorCode::ShapeMismatch, "matrix has " + std::to_string(j.size()) + " rows, expected " +
                                              std::to_string(rows));
  for (Eigen::Index r = 0; r < rows; ++r) {
    if (!j[r].is_array() || static_cast<Eigen::Index>(j[r].size()) != cols)
      throw Error(ErrorCode::ShapeMismatch, "matrix row has the wrong length");
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = complex_value(j[r][c]);
  }
  return m;
}

json to_json(const RepPoint& p) {
  json out;
  for (const char* key : {"B", "i", "j"}) out[key] = json::array();
  for (const auto& m : p.B) out["B"].push_back(to_json(m));
  for (const auto& m : p.i) out["i"].push_back(to_json(m));
  for (const auto& m : p.j) out["j"].push_back(to_json(m));
  return out;
}

RepPoint rep_point_from_json(const json& j, const Quiver& q, const DimensionVectors& dims) {
  RepPoint p = RepPoint::zero(q, dims);
  for (const char* key : {"B", "i", "j"})
    if (!j.contains(key) || !j[key].is_array()) throw Error(ErrorCode::ShapeMismatch, std::string("point needs '") + key + "'");
  if (static_cast<int>(j["B"].size()) != q.edge_count() || static_cast<int>(j["i"].size()) != q.vertex_count() ||
      static_cast<int>(j["j"].size()) != q.vertex_count())
    throw Error(ErrorCode::ShapeMismatch, "point has the wrong number of blocks");
  for (int h = 0; h < q.edge_count(); ++h) p.B[h] = matrix_from_json(j["B"][h], p.B[h].rows(), p.B[h].cols());
  for (int k = 0; k < q.vertex_count(); ++k) {
    p.i[k] = matrix_from_json(j["i"][k], p.i[k].rows(), p.i[k].cols());
    p.j[k] = matrix_from_json(j["j"][k], p.j[k].rows(), p.j[k].cols());
  }
  return p;
}

json to_json(const LieElement& x) {
  json out = json::array();
  for (const auto& b : x.blocks) out.push_back(to_json(b));
  return out;
}

json to_json(const SolveReport& r) {
  return {{"xi", to_json(r.xi)},         {"point", to_json(r.point)},   {"residual", r.residual},
          {"iterations", r.iterations}, {"converged", r.converged},    {"history", r.history},
          {"damping", r.damping}};
}

json to_json(const WeightGrading& g) {
  json vertices = json::array();
  for (const auto& spaces : g.vertices) {
    json vs = json::array();
    for (const auto& s : spaces)
      vs.push_back({{"weight", s.weight}, {"deviation", s.deviation}, {"basis", to_json(s.basis)}});
    vertices.push_back(std::move(vs));
  }
  return {{"vertices", vertices}, {"generator", to_json(g.generator)}, {"max_deviation", g.max_deviation}};
}

json to_json(const SliceBasis& b) {
  json vectors = json::array();
  for (const auto& v : b.vectors) vectors.push_back(to_json(v));
  return {{"kind", b.kind == SliceKind::full_tangent ? "full_tangent" : "bb_tangent"},
          {"real_dimension", b.real_dimension()},
          {"base_point", to_json(b.base_point)},
          {"vectors", vectors}};
}

json to_json(const GenericityReport& r) {
  json out = {{"generic", r.generic}, {"exact", r.exact}};
  out["margin"] = std::isfinite(r.margin) ? json(r.margin) : json(nullptr);
  if (r.wall) {
    std::vector<int> w(r.wall->data(), r.wall->data() + r.wall->size());
    out["wall"] = w;
  }
  return out;
}

json to_json(const ConvergenceStudy& s) {
  json rows = json::array();
  for (const auto& x : s.samples)
    rows.push_back({{"R", x.R}, {"distance", x.distance_to_limit}, {"graded", x.graded},
                    {"stage_residuals", x.stage_residuals}});
  json out = {{"hbar", {s.hbar.real(), s.hbar.imag()}},
              {"degenerate_fit", s.degenerate},
              {"floor", s.floor},
              {"samples", rows},
              {"limit_fingerprint", std::vector<double>(s.limit_fingerprint.data(),
                                                        s.limit_fingerprint.data() + s.limit_fingerprint.size())}};
  out["slope"] = std::isfinite(s.slope) ? json(s.slope) : json(nullptr);
  out["fit_residual"] = std::isfinite(s.fit_residual) ? json(s.fit_residual) : json(nullptr);
  return out;
}

json to_json(const EscapeStudy& s) {
  json rows = json::array();
  for (const auto& r : s.rows)
    rows.push_back({{"hbar", {r.hbar.real(), r.hbar.imag()}}, {"magnitude", r.magnitude}, {"used", r.used}});
  return {{"path", s.path.canonical()}, {"M", s.order}, {"slope", s.slope}, {"fit_residual", s.fit_residual},
          {"rows", rows}};
}

void write_fingerprint_csv(std::ostream& os, const PathCatalog& catalog, const Eigen::VectorXd& fp) {
  const auto labels = catalog.labels();
  if (static_cast<Eigen::Index>(labels.size()) != fp.size())
    throw Error(ErrorCode::ShapeMismatch, "fingerprint does not match its catalog");
  os << "path,value\n";
  for (size_t k = 0; k < labels.size(); ++k) os << labels[k] << ',' << format_double(fp(k)) << '\n';
}

void write_convergence_csv(std::ostream& os, const ConvergenceStudy& s) {
  os << "R,distance,stage1,stage2,stage3,stage4\n";
  for (const auto& x : s.samples) {
    os << format_double(x.R) << ',' << format_double(x.distance_to_limit);
    for (double r : x.stage_residuals) os << ',' << format_double(r);
    os << '\n';
  }
}

void write_escape_csv(std::ostream& os, const EscapeStudy& s) {
  os << "hbar_re,hbar_im,magnitude,used\n";
  for (const auto& r : s.rows)
    os << format_double(r.hbar.real()) << ',' << format_double(r.hbar.imag()) << ',' << format_double(r.magnitude)
       << ',' << (r.used ? 1 : 0) << '\n';
}

void write_flow_csv(std::ostream& os, const FlowReport& r) {
  os << "R,F,distance\n";
  for (const auto& row : r.trace)
    os << format_double(row.R) << ',' << format_double(row.F) << ',' << format_double(row.distance) << '\n';
}

void write_history_csv(std::ostream& os, const SolveReport& r) {
  os << "iter,residual,damping\n";
  for (size_t k = 0; k < r.history.size(); ++k)
    os << k << ',' << format_double(r.history[k]) << ',' << (k == 0 ? "" : format_double(r.damping[k - 1])) << '\n';
}

}  // namespace quivercl
