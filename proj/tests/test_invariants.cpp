#include "fixtures.hpp"

using namespace quivercl;
using fixtures::code_of;

namespace {

std::vector<std::string> names(const std::vector<PathSpec>& paths) {
  std::vector<std::string> out;
  for (const auto& p : paths) out.push_back(p.canonical());
  return out;
}

}  // namespace

TEST_CASE("path strings") {
  for (const char* s : {"L:h0.h1~", "P:c0.h0.j1", "P:c0.j0", "L:h2.h3~"}) CHECK(PathSpec::parse(s).canonical() == s);
  CHECK(code_of([] { PathSpec::parse("X:h0"); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { PathSpec::parse("P:c0.hx"); }) == ErrorCode::InvalidArgument);

  const Quiver a2(2, {{0, 1}});
  CHECK(code_of([&] { validate(a2, PathSpec::parse("L:h0.h0~")); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([&] { validate(a2, PathSpec::parse("P:c0.j1")); }) == ErrorCode::InvalidArgument);
  validate(a2, PathSpec::parse("P:c0.h0.j1"));
}

TEST_CASE("path enumeration") {
  const Quiver a1(1, {});
  CHECK(names(enumerate_paths(a1, {{1}, {2}}, 2, PathKind::admissible)) == std::vector<std::string>{"P:c0.j0"});
  CHECK(enumerate_paths(a1, {{1}, {2}}, 6, PathKind::loop).empty());

  const Quiver a2(2, {{0, 1}});
  // (h, h̄) and (h̄, h) are one loop up to rotation.
  CHECK(names(enumerate_paths(a2, {{1, 1}, {1, 1}}, 2, PathKind::loop)) == std::vector<std::string>{"L:h0.h1~"});
  // Vertices with v = 0 are never visited.
  CHECK(enumerate_paths(a2, {{1, 0}, {1, 1}}, 4, PathKind::loop).empty());

  // Affine A1: every step from 0 is h0 or h3, every step from 1 is h1 or h2.
  // Closed walks of length 2n from vertex 0 are words in 4 letter pairs, and
  // classes up to rotation are necklaces: 4 for n = 1, (4² + 4)/2 = 10 for n = 2.
  const Quiver c(2, {{0, 1}, {1, 0}});
  const auto loops = enumerate_paths(c, {{1, 1}, {1, 0}}, 4, PathKind::loop);
  int len2 = 0, len4 = 0;
  for (const auto& l : loops) (l.length() == 2 ? len2 : len4) += 1;
  CHECK(len2 == 4);
  CHECK(len4 == 10);
}

TEST_CASE("path evaluation") {
  const Quiver a1(1, {});
  RepPoint p = RepPoint::zero(a1, {{1}, {2}});
  p.i[0] << Complex(1, 2), 3.0;
  p.j[0] << 0.5, Complex(0, -1);
  const Eigen::MatrixXcd ji = eval_path(a1, p, PathSpec::parse("P:c0.j0"));
  CHECK(fixtures::max_abs(ji - p.j[0] * p.i[0]) < 1e-15);
  CHECK(ji.rows() == 2);

  const Quiver a2(2, {{0, 1}});
  RepPoint z = RepPoint::zero(a2, {{1, 1}, {1, 1}});
  z.B[0](0, 0) = 2.0;
  CHECK(invariant_magnitude(a2, z, PathSpec::parse("L:h0.h1~")) == 0.0);

  // Gauge invariance: exact for admissible paths, after the trace for loops.
  const auto cfg = fixtures::bundled("affine_a1");
  Rng rng(61);
  for (int t = 0; t < 10; ++t) {
    const RepPoint r = random_point(cfg.quiver, cfg.dims, rng);
    const RepPoint g = gauge_act(cfg.quiver, random_gauge(cfg.dims.v, rng, false), r);
    for (const auto& path : enumerate_paths(cfg.quiver, cfg.dims, 4, PathKind::admissible))
      CHECK(fixtures::max_abs(eval_path(cfg.quiver, g, path) - eval_path(cfg.quiver, r, path)) < 1e-10);
    for (const auto& path : enumerate_paths(cfg.quiver, cfg.dims, 4, PathKind::loop))
      CHECK(std::abs(eval_path(cfg.quiver, g, path).trace() - eval_path(cfg.quiver, r, path).trace()) < 1e-10);
  }
}

TEST_CASE("fingerprints") {
  const auto cfg = fixtures::bundled("tstar_p1");
  const Quiver& q = cfg.quiver;
  const PathCatalog cat(q, cfg.dims, 2);
  CHECK(cat.labels().size() == 8);
  CHECK(fingerprint(q, RepPoint::zero(q, cfg.dims), cat).isZero());

  const RepPoint p = solve_real_moment(q, *cfg.fixed_point + Complex(0.7) * *cfg.slice_direction, cfg.zeta.sigma).point;
  Rng rng(62);
  const Eigen::VectorXd fp = fingerprint(q, p, cat);
  for (int t = 0; t < 10; ++t)
    CHECK((fingerprint(q, gauge_act(q, random_gauge(cfg.dims.v, rng, false), p), cat) - fp).cwiseAbs().maxCoeff() <
          1e-10);

  // The circle action moves a non-fixed point and fixes the fixed one.
  const Complex u = std::polar(1.0, 1.0);
  const RepPoint moved = solve_real_moment(q, cstar_act(q, u, p), cfg.zeta.sigma).point;
  CHECK((fingerprint(q, moved, cat) - fp).cwiseAbs().maxCoeff() > 1e-3);
  const RepPoint fixed = solve_real_moment(q, cstar_act(q, u, *cfg.fixed_point), cfg.zeta.sigma).point;
  CHECK((fingerprint(q, fixed, cat) - fingerprint(q, *cfg.fixed_point, cat)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("nilpotency") {
  const auto cfg = fixtures::bundled("tstar_p1");
  const Quiver& q = cfg.quiver;
  CHECK(nilpotency_length({{1}, {2}}) == 2);
  CHECK(nilpotency_length({{2, 1}, {0, 0}}) == 6);
  CHECK(nilpotency_length({{0}, {1}}) == 2);
  CHECK(is_nilpotent(q, RepPoint::zero(q, cfg.dims), 2, 1e-12));
  CHECK(is_nilpotent(q, *cfg.fixed_point, 2, 1e-12));
  CHECK_FALSE(is_nilpotent(q, *cfg.fixed_point + *cfg.slice_direction, 2, 1e-12));
}

TEST_CASE("escape order and slope") {
  const Quiver c(2, {{0, 1}, {1, 0}});
  CHECK(escape_order(c, PathSpec::parse("L:h2.h3~")) == 2);
  CHECK(escape_order(c, PathSpec::parse("L:h0.h1~")) == 0);
  CHECK(escape_order(Quiver(1, {}), PathSpec::parse("P:c0.j0")) == 1);

  const std::vector<Complex> grid{0.1, 0.05, 0.025, 0.0125};
  SUBCASE("T*P¹ admissible path") {
    const auto f = fixtures::at_fixed("tstar_p1");
    const EscapeStudy st = escape_slope(f.cfg.quiver, f.p0, *f.cfg.slice_direction, grid, PathSpec::parse("P:c0.j0"));
    CHECK(st.order == 1);
    CHECK(st.slope == doctest::Approx(-1.0).epsilon(0.2));
    for (size_t k = 1; k < st.rows.size(); ++k) CHECK(st.rows[k].magnitude > st.rows[k - 1].magnitude);
  }
  SUBCASE("affine A1 loop with two reversed edges") {
    const auto f = fixtures::at_fixed("affine_a1");
    const SliceBasis bb = bb_tangent_basis(f.cfg.quiver, f.p0, f.grading);
    const RepPoint A = bb_slice_solve(f.cfg.quiver, f.p0, f.grading, Complex(0.9) * bb.vectors[0]);
    const EscapeStudy st = escape_slope(f.cfg.quiver, f.p0, A, grid, PathSpec::parse("L:h2.h3~"));
    CHECK(st.slope == doctest::Approx(-2.0).epsilon(0.1));
  }
  SUBCASE("vanishing invariant") {
    const auto f = fixtures::at_fixed("tstar_p1");
    CHECK(code_of([&] {
            escape_slope(f.cfg.quiver, f.p0, RepPoint::zero(f.cfg.quiver, f.cfg.dims), grid, PathSpec::parse("P:c0.j0"));
          }) == ErrorCode::ZeroInvariant);
  }
}
