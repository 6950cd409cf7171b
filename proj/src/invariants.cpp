#include "quivercl/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "quivercl/conformal.hpp"
#include "quivercl/linalg.hpp"

namespace quivercl {

namespace {

// A node of the augmented graph: V_k or W_k.
struct Node {
  bool framing = false;
  int k = 0;
  friend bool operator==(const Node&, const Node&) = default;
};

Node source(const Quiver& q, const AugEdge& e) {
  switch (e.type) {
    case AugEdge::Type::graph: return {false, q.out(e.index)};
    case AugEdge::Type::from_framing: return {true, e.index};
    case AugEdge::Type::to_framing: return {false, e.index};
  }
  return {};
}

Node target(const Quiver& q, const AugEdge& e) {
  switch (e.type) {
    case AugEdge::Type::graph: return {false, q.in(e.index)};
    case AugEdge::Type::from_framing: return {false, e.index};
    case AugEdge::Type::to_framing: return {true, e.index};
  }
  return {};
}

std::string edge_name(const AugEdge& e) {
  switch (e.type) {
    case AugEdge::Type::graph: return "h" + std::to_string(e.index);
    case AugEdge::Type::from_framing: return "c" + std::to_string(e.index);
    case AugEdge::Type::to_framing: return "j" + std::to_string(e.index);
  }
  return {};
}

bool usable(const Quiver& q, const DimensionVectors& dims, int h) {
  return dims.v[q.out(h)] > 0 && dims.v[q.in(h)] > 0;
}

std::vector<int> min_rotation(const std::vector<int>& s) {
  std::vector<int> best = s;
  std::vector<int> r = s;
  for (size_t k = 1; k < s.size(); ++k) {
    std::rotate(r.begin(), r.begin() + 1, r.end());
    best = std::min(best, r);
  }
  return best;
}

void extend_loops(const Quiver& q, const DimensionVectors& dims, int max_len, std::vector<int>& walk,
                  std::vector<std::vector<int>>& out) {
  const int first_out = q.out(walk.front());
  if (q.in(walk.back()) == first_out && walk == min_rotation(walk)) out.push_back(walk);
  if (static_cast<int>(walk.size()) == max_len) return;
  const int here = q.in(walk.back());
  for (int h = 0; h < q.edge_count(); ++h) {
    if (q.out(h) != here || !usable(q, dims, h)) continue;
    walk.push_back(h);
    extend_loops(q, dims, max_len, walk, out);
    walk.pop_back();
  }
}

void extend_admissible(const Quiver& q, const DimensionVectors& dims, int max_len, std::vector<AugEdge>& walk,
                       std::vector<std::vector<AugEdge>>& out) {
  const int here = target(q, walk.back()).k;
  if (static_cast<int>(walk.size()) + 1 <= max_len && dims.w[here] > 0) {
    walk.push_back({AugEdge::Type::to_framing, here});
    out.push_back(walk);
    walk.pop_back();
  }
  if (static_cast<int>(walk.size()) + 2 > max_len) return;
  for (int h = 0; h < q.edge_count(); ++h) {
    if (q.out(h) != here || !usable(q, dims, h)) continue;
    walk.push_back({AugEdge::Type::graph, h});
    extend_admissible(q, dims, max_len, walk, out);
    walk.pop_back();
  }
}

}  // namespace

std::string PathSpec::canonical() const {
  std::string s = kind == PathKind::loop ? "L:" : "P:";
  for (size_t k = 0; k < edges.size(); ++k) {
    if (k) s += '.';
    s += edge_name(edges[k]);
  }
  if (kind == PathKind::loop) s += '~';
  return s;
}

PathSpec PathSpec::parse(const std::string& text) {
  PathSpec p;
  if (text.size() < 3 || text[1] != ':' || (text[0] != 'L' && text[0] != 'P'))
    throw Error(ErrorCode::InvalidArgument, "path must look like L:h0.h1~ or P:c0.j0, got '" + text + "'");
  p.kind = text[0] == 'L' ? PathKind::loop : PathKind::admissible;
  std::string body = text.substr(2);
  if (!body.empty() && body.back() == '~') body.pop_back();
  std::stringstream ss(body);
  std::string tok;
  while (std::getline(ss, tok, '.')) {
    if (tok.size() < 2) throw Error(ErrorCode::InvalidArgument, "bad path edge '" + tok + "'");
    AugEdge e;
    switch (tok[0]) {
      case 'h': e.type = AugEdge::Type::graph; break;
      case 'c': e.type = AugEdge::Type::from_framing; break;
      case 'j': e.type = AugEdge::Type::to_framing; break;
      default: throw Error(ErrorCode::InvalidArgument, "bad path edge '" + tok + "'");
    }
    try {
      size_t used = 0;
      e.index = std::stoi(tok.substr(1), &used);
      if (used != tok.size() - 1) throw std::invalid_argument(tok);
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::InvalidArgument, "bad path edge '" + tok + "'");
    }
    p.edges.push_back(e);
  }
  return p;
}

void validate(const Quiver& q, const PathSpec& path) {
  if (path.edges.empty()) throw Error(ErrorCode::InvalidArgument, "empty path");
  for (const AugEdge& e : path.edges) {
    const int bound = e.type == AugEdge::Type::graph ? q.edge_count() : q.vertex_count();
    if (e.index < 0 || e.index >= bound) throw Error(ErrorCode::InvalidArgument, "path edge out of range");
  }
  for (size_t k = 1; k < path.edges.size(); ++k)
    if (!(source(q, path.edges[k]) == target(q, path.edges[k - 1])))
      throw Error(ErrorCode::InvalidArgument, "path " + path.canonical() + " is not composable");
  if (path.kind == PathKind::loop) {
    for (const AugEdge& e : path.edges)
      if (e.type != AugEdge::Type::graph) throw Error(ErrorCode::InvalidArgument, "loops use graph edges only");
    if (!(target(q, path.edges.back()) == source(q, path.edges.front())))
      throw Error(ErrorCode::InvalidArgument, "loop " + path.canonical() + " is not closed");
  } else {
    if (path.edges.size() < 2 || path.edges.front().type != AugEdge::Type::from_framing ||
        path.edges.back().type != AugEdge::Type::to_framing)
      throw Error(ErrorCode::InvalidArgument, "admissible paths run from some W_k to some W_l");
    for (size_t k = 1; k + 1 < path.edges.size(); ++k)
      if (path.edges[k].type != AugEdge::Type::graph)
        throw Error(ErrorCode::InvalidArgument, "admissible paths only touch W at their ends");
  }
}

std::vector<PathSpec> enumerate_paths(const Quiver& q, const DimensionVectors& dims, int max_len, PathKind kind) {
  validate(q, dims);
  std::vector<PathSpec> out;
  if (kind == PathKind::loop) {
    std::vector<std::vector<int>> walks;
    for (int h = 0; h < q.edge_count() && max_len >= 1; ++h) {
      if (!usable(q, dims, h)) continue;
      std::vector<int> walk{h};
      extend_loops(q, dims, max_len, walk, walks);
    }
    std::sort(walks.begin(), walks.end());
    for (const auto& w : walks) {
      PathSpec p;
      p.kind = PathKind::loop;
      for (int h : w) p.edges.push_back({AugEdge::Type::graph, h});
      out.push_back(std::move(p));
    }
    return out;
  }
  std::vector<std::vector<AugEdge>> walks;
  for (int k = 0; k < q.vertex_count() && max_len >= 2; ++k) {
    if (dims.w[k] == 0 || dims.v[k] == 0) continue;
    std::vector<AugEdge> walk{{AugEdge::Type::from_framing, k}};
    extend_admissible(q, dims, max_len, walk, walks);
  }
  std::sort(walks.begin(), walks.end());
  for (auto& w : walks) out.push_back(PathSpec{std::move(w), PathKind::admissible});
  return out;
}

Eigen::MatrixXcd eval_path(const Quiver& q, const RepPoint& p, const PathSpec& path) {
  check_shape(q, p);
  validate(q, path);
  const DimensionVectors dims = dims_of(q, p);
  const Node start = source(q, path.edges.front());
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(start.framing ? dims.w[start.k] : dims.v[start.k],
                                                  start.framing ? dims.w[start.k] : dims.v[start.k]);
  for (const AugEdge& e : path.edges) {
    switch (e.type) {
      case AugEdge::Type::graph: m = (p.B[e.index] * m).eval(); break;
      case AugEdge::Type::from_framing: m = (p.i[e.index] * m).eval(); break;
      case AugEdge::Type::to_framing: m = (p.j[e.index] * m).eval(); break;
    }
  }
  return m;
}

double invariant_magnitude(const Quiver& q, const RepPoint& p, const PathSpec& path) {
  const Eigen::MatrixXcd m = eval_path(q, p, path);
  return path.kind == PathKind::loop ? std::abs(m.trace()) : m.norm();
}

PathCatalog::PathCatalog(const Quiver& q, const DimensionVectors& dims, int max_len)
    : loops_(enumerate_paths(q, dims, max_len, PathKind::loop)),
      admissible_(enumerate_paths(q, dims, max_len, PathKind::admissible)),
      dims_(dims),
      max_len_(max_len) {}

std::vector<std::string> PathCatalog::labels() const {
  std::vector<std::string> out;
  for (const auto& l : loops_) {
    out.push_back(l.canonical() + ":re");
    out.push_back(l.canonical() + ":im");
  }
  for (const auto& a : admissible_) {
    const int rows = dims_.w[a.edges.back().index];
    const int cols = dims_.w[a.edges.front().index];
    for (int r = 0; r < rows; ++r) {
      for (int c = 0; c < cols; ++c) {
        const std::string at = a.canonical() + "[" + std::to_string(r) + "," + std::to_string(c) + "]";
        out.push_back(at + ":re");
        out.push_back(at + ":im");
      }
    }
  }
  return out;
}

Eigen::VectorXd fingerprint(const Quiver& q, const RepPoint& p, const PathCatalog& catalog) {
  std::vector<double> v;
  for (const auto& l : catalog.loops()) {
    const Complex t = eval_path(q, p, l).trace();
    v.push_back(t.real());
    v.push_back(t.imag());
  }
  for (const auto& a : catalog.admissible()) {
    const Eigen::MatrixXcd m = eval_path(q, p, a);
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) {
        v.push_back(m(r, c).real());
        v.push_back(m(r, c).imag());
      }
    }
  }
  return Eigen::Map<Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

Eigen::VectorXd fingerprint(const Quiver& q, const RepPoint& p, int max_len) {
  return fingerprint(q, p, PathCatalog(q, dims_of(q, p), max_len));
}

int nilpotency_length(const DimensionVectors& dims) { return std::max(2, 2 * dims.total_v()); }

bool is_nilpotent(const Quiver& q, const RepPoint& p, int max_len, double tol) {
  const Eigen::VectorXd f = fingerprint(q, p, max_len);
  return f.size() == 0 || f.cwiseAbs().maxCoeff() < tol;
}

int escape_order(const Quiver& q, const PathSpec& path) {
  int m = 0;
  for (const AugEdge& e : path.edges) {
    if (e.type == AugEdge::Type::graph && !q.in_omega(e.index)) ++m;
    if (e.type == AugEdge::Type::to_framing) ++m;
  }
  return m;
}

EscapeStudy escape_slope(const Quiver& q, const RepPoint& p0, const RepPoint& A, const std::vector<Complex>& hbar_grid,
                         const PathSpec& path, double tol) {
  validate(q, path);
  if (hbar_grid.size() < 2) throw Error(ErrorCode::InvalidArgument, "escape_slope needs at least two hbar values");
  const double base = invariant_magnitude(q, p0 + A, path);
  if (base <= tol)
    throw Error(ErrorCode::ZeroInvariant, "invariant of " + path.canonical() + " vanishes at p0 + A (" +
                                              std::to_string(base) + ")");
  EscapeStudy st;
  st.path = path;
  st.order = escape_order(q, path);
  std::vector<double> x, y;
  for (const Complex& hbar : hbar_grid) {
    EscapeRow row;
    row.hbar = hbar;
    row.magnitude = invariant_magnitude(q, build_pA(q, p0, A, hbar), path);
    row.used = row.magnitude >= 1e-12 && row.magnitude <= 1e12;
    if (row.used) {
      x.push_back(std::log(std::abs(hbar)));
      y.push_back(std::log(row.magnitude));
    }
    st.rows.push_back(row);
  }
  if (x.size() < 2) throw Error(ErrorCode::InvalidArgument, "escape_slope: fewer than two usable grid points");
  const LineFit fit = fit_line(x, y);
  st.slope = fit.slope;
  st.fit_residual = fit.residual;
  return st;
}

}  // namespace quivercl
