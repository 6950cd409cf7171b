#include "quivercl/grading.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace quivercl {

std::vector<int> WeightGrading::dims() const {
  std::vector<int> d;
  for (const auto& spaces : vertices) {
    int n = 0;
    for (const auto& s : spaces) n += static_cast<int>(s.basis.cols());
    d.push_back(n);
  }
  return d;
}

Eigen::MatrixXcd WeightGrading::projector(int k, int m) const {
  const int n = dims()[k];
  for (const auto& s : vertices[k])
    if (s.weight == m) return s.basis * s.basis.adjoint();
  return Eigen::MatrixXcd::Zero(n, n);
}

std::vector<int> WeightGrading::weights() const {
  std::set<int> w;
  for (const auto& spaces : vertices)
    for (const auto& s : spaces) w.insert(s.weight);
  return {w.begin(), w.end()};
}

namespace {

using Spaces = std::vector<WeightSpace>;

Spaces framing_spaces(Eigen::Index w) {
  if (w == 0) return {};
  return {WeightSpace{0, 0.0, Eigen::MatrixXcd::Identity(w, w)}};
}

// Walks the blocks of an increment with the weight decomposition of target
// (rows) and source (columns) and the shift that turns b − a into the
// full-action weight.
template <typename F>
void for_each_graded_block(const Quiver& q, RepPoint& dq, const WeightGrading& g, F&& f) {
  if (g.vertex_count() != q.vertex_count()) throw Error(ErrorCode::ShapeMismatch, "grading does not match quiver");
  for (int h = 0; h < q.edge_count(); ++h)
    f(dq.B[h], g.vertices[q.in(h)], g.vertices[q.out(h)], q.in_omega(h) ? 0 : 1, std::pair<int, int>{0, h});
  for (int k = 0; k < q.vertex_count(); ++k) {
    f(dq.i[k], g.vertices[k], framing_spaces(dq.i[k].cols()), 0, std::pair<int, int>{1, k});
    f(dq.j[k], framing_spaces(dq.j[k].rows()), g.vertices[k], 1, std::pair<int, int>{2, k});
  }
}

Eigen::MatrixXcd& block_of(RepPoint& p, std::pair<int, int> id) {
  if (id.first == 0) return p.B[id.second];
  return id.first == 1 ? p.i[id.second] : p.j[id.second];
}

}  // namespace

std::map<int, LieElement> decompose_lie(const LieElement& xi, const WeightGrading& grading) {
  if (xi.vertex_count() != grading.vertex_count()) throw Error(ErrorCode::ShapeMismatch, "decompose_lie: vertex count");
  std::map<int, LieElement> parts;
  const std::vector<int> v = grading.dims();
  for (int k = 0; k < grading.vertex_count(); ++k) {
    for (const auto& src : grading.vertices[k]) {
      for (const auto& dst : grading.vertices[k]) {
        const int m = dst.weight - src.weight;
        auto it = parts.find(m);
        if (it == parts.end()) it = parts.emplace(m, LieElement::zero(v)).first;
        it->second.blocks[k] +=
            dst.basis * (dst.basis.adjoint() * xi.blocks[k] * src.basis) * src.basis.adjoint();
      }
    }
  }
  return parts;
}

std::map<int, RepPoint> grade_increment(const Quiver& q, const RepPoint& dq, const WeightGrading& grading) {
  check_shape(q, dq);
  std::map<int, RepPoint> parts;
  RepPoint zero = dq;
  zero *= 0.0;
  RepPoint src = dq;
  for_each_graded_block(q, src, grading,
                        [&](Eigen::MatrixXcd& m, const Spaces& rows, const Spaces& cols, int shift, auto id) {
                          for (const auto& b : rows) {
                            for (const auto& a : cols) {
                              const int w = b.weight - a.weight + shift;
                              auto it = parts.find(w);
                              if (it == parts.end()) it = parts.emplace(w, zero).first;
                              block_of(it->second, id) +=
                                  b.basis * (b.basis.adjoint() * m * a.basis) * a.basis.adjoint();
                            }
                          }
                        });
  return parts;
}

RepPoint rescale(const Quiver& q, const RepPoint& dq, const WeightGrading& grading, Complex R) {
  if (R == Complex(0.0)) throw Error(ErrorCode::InvalidArgument, "rescale: R must be nonzero");
  RepPoint out = dq;
  out *= 0.0;
  for (const auto& [w, part] : grade_increment(q, dq, grading)) out += std::pow(R, w) * part;
  return out;
}

Eigen::MatrixXcd weight_subspace_basis(const Quiver& q, const RepPoint& shape, const WeightGrading& grading,
                                       int min_weight) {
  check_shape(q, shape);
  RepPoint zero = shape;
  zero *= 0.0;
  std::vector<Eigen::VectorXcd> cols;
  RepPoint walker = zero;
  for_each_graded_block(q, walker, grading,
                        [&](Eigen::MatrixXcd&, const Spaces& rows, const Spaces& srcs, int shift, auto id) {
                          for (const auto& b : rows) {
                            for (const auto& a : srcs) {
                              if (b.weight - a.weight + shift < min_weight) continue;
                              for (Eigen::Index r = 0; r < b.basis.cols(); ++r) {
                                for (Eigen::Index c = 0; c < a.basis.cols(); ++c) {
                                  RepPoint e = zero;
                                  block_of(e, id) = b.basis.col(r) * a.basis.col(c).adjoint();
                                  cols.push_back(to_vector(e));
                                }
                              }
                            }
                          }
                        });
  Eigen::MatrixXcd basis(shape.size(), static_cast<Eigen::Index>(cols.size()));
  for (size_t c = 0; c < cols.size(); ++c) basis.col(static_cast<Eigen::Index>(c)) = cols[c];
  return basis;
}

}  // namespace quivercl
