#include "fixtures.hpp"

using namespace quivercl;
using fixtures::code_of;

namespace {

double tangent_defect(const Quiver& q, const RepPoint& p, const RepPoint& v) {
  return std::max(norm(dmu_complex(q, p, v)), norm(inf_action_adjoint(q, p, v)));
}

}  // namespace

TEST_CASE("tangent basis") {
  SUBCASE("a point variety has no tangent vectors") {
    const auto cfg = fixtures::bundled("a1_point");
    const SliceBasis b = tangent_basis(cfg.quiver, sample_on_variety(cfg, 1));
    CHECK(b.real_dimension() == 0);
  }
  for (const char* name : {"tstar_p1", "a2_star", "a2_graded", "affine_a1"}) {
    CAPTURE(name);
    const auto cfg = fixtures::bundled(name);
    const RepPoint p = sample_on_variety(cfg, 2);
    const SliceBasis b = tangent_basis(cfg.quiver, p);
    CHECK(b.real_dimension() == expected_dimension(cfg.quiver, cfg.dims));
    for (const auto& v : b.vectors) CHECK(tangent_defect(cfg.quiver, p, v) < 1e-10);
    // Orthonormal for the real part of the metric.
    for (size_t a = 0; a < b.vectors.size(); ++a)
      for (size_t c = 0; c < b.vectors.size(); ++c)
        CHECK(metric(b.vectors[a], b.vectors[c]).real() == doctest::Approx(a == c ? 1.0 : 0.0));
  }
  SUBCASE("an unstable point has the wrong dimension") {
    const Quiver q = fixtures::point_quiver();
    CHECK(code_of([&] { tangent_basis(q, RepPoint::zero(q, fixtures::tstar_dims())); }) ==
          ErrorCode::DimensionMismatch);
  }
}

TEST_CASE("kuranishi projection") {
  const auto cfg = fixtures::bundled("a2_star");
  const Quiver& q = cfg.quiver;
  const RepPoint p = sample_on_variety(cfg, 4);
  const SliceBasis b = tangent_basis(q, p);
  RepPoint tangent = RepPoint::zero(q, cfg.dims);
  for (const auto& v : b.vectors) tangent += Complex(0.3) * v;
  CHECK(norm(kuranishi(q, p, tangent) - tangent) < 1e-10);

  Rng rng(41);
  double worst = 0.0;
  for (int t = 0; t < 20; ++t) {
    const RepPoint dq = random_point(q, cfg.dims, rng, 0.1);
    const RepPoint k = kuranishi(q, p, dq);
    CHECK(norm(dmu_complex(q, p, k)) < 1e-10);
    const double d = norm(dmu_complex(q, p, dq));
    if (d > 1e-12) worst = std::max(worst, norm(k - dq) / d);
  }
  // ‖k(q) − q‖ ≤ C‖dμ_C(p, q)‖ with C set by the smallest singular value.
  CHECK(worst < 1e3);

  const RepPoint a = random_point(q, cfg.dims, rng), c = random_point(q, cfg.dims, rng);
  const Complex s(0.4, -0.2);
  CHECK(norm(kuranishi(q, p, a + s * c) - kuranishi(q, p, a) - s * kuranishi(q, p, c)) < 1e-10);
}

TEST_CASE("hodge slice solve") {
  const auto cfg = fixtures::bundled("a2_star");
  const Quiver& q = cfg.quiver;
  const RepPoint p = sample_on_variety(cfg, 6);
  CHECK(norm(hodge_slice_solve(q, p, RepPoint::zero(q, cfg.dims))) == 0.0);

  const SliceBasis b = tangent_basis(q, p);
  RepPoint q0 = RepPoint::zero(q, cfg.dims);
  for (size_t k = 0; k < b.vectors.size(); ++k) q0 += Complex(0.1 * (k + 1)) * b.vectors[k];
  const RepPoint sol = hodge_slice_solve(q, p, q0);
  CHECK(slice_residual(q, p, sol) < 1e-10);
  // The chart round trip: the tangential part is q0 again.
  CHECK(norm(kuranishi(q, p, sol) - q0) < 1e-9);

  SUBCASE("no correction when the quadratic term vanishes") {
    // At (i0, 0) an I-only increment keeps μ_C = I·j + i·J = 0 exactly.
    const Quiver pq = fixtures::point_quiver();
    RepPoint only_i = RepPoint::zero(pq, fixtures::tstar_dims());
    only_i.i[0](0, 1) = 0.7;
    CHECK(norm(hodge_slice_solve(pq, fixtures::tstar_p0(), only_i) - only_i) < 1e-12);
  }
}

TEST_CASE("attracting slice at T*P¹") {
  const auto f = fixtures::at_fixed("tstar_p1");
  const Quiver& q = f.cfg.quiver;
  const SliceBasis bb = bb_tangent_basis(q, f.p0, f.grading);
  REQUIRE(bb.real_dimension() == 2);
  // Spanned by (I = 0, J) with i0·J = 0, i.e. J = (0, b).
  for (const auto& v : bb.vectors) {
    CHECK(v.i[0].norm() < 1e-12);
    CHECK(std::abs(v.j[0](0, 0)) < 1e-12);
  }
  // Such J solves both slice equations exactly.
  const RepPoint A = Complex(0.0, 2.5) * *f.cfg.slice_direction;
  CHECK(slice_residual(q, f.p0, A) == 0.0);
  CHECK(norm(bb_slice_solve(q, f.p0, f.grading, A) - A) < 1e-12);
  CHECK(norm(bb_slice_solve(q, f.p0, f.grading, RepPoint::zero(q, f.cfg.dims))) == 0.0);
}

TEST_CASE("attracting slice is half-dimensional and isotropic") {
  for (const char* name : {"tstar_p1", "a2_star", "a2_graded", "affine_a1"}) {
    CAPTURE(name);
    const auto f = fixtures::at_fixed(name);
    const Quiver& q = f.cfg.quiver;
    const SliceBasis bb = bb_tangent_basis(q, f.p0, f.grading);
    CHECK(2 * bb.real_dimension() == tangent_basis(q, f.p0).real_dimension());
    for (const auto& a : bb.vectors)
      for (const auto& b : bb.vectors) CHECK(std::abs(symplectic_form(q, a, b)) <= 1e-12);
    // Every vector has full weight ≥ 1.
    for (const auto& v : bb.vectors)
      for (const auto& [w, part] : grade_increment(q, v, f.grading))
        if (w < 1) CHECK(norm(part) < 1e-12);
  }
  const QuiverConfig a1 = fixtures::bundled("a1_point");
  const RepPoint pt = sample_on_variety(a1, 1);
  CHECK(bb_tangent_basis(a1.quiver, pt, weight_grading(a1.quiver, pt, a1.zeta)).real_dimension() == 0);
}

TEST_CASE("attracting slice solve is preserved by rescaling") {
  const auto f = fixtures::at_fixed("a2_graded");
  const Quiver& q = f.cfg.quiver;
  const SliceBasis bb = bb_tangent_basis(q, f.p0, f.grading);
  RepPoint q0 = RepPoint::zero(q, f.cfg.dims);
  for (size_t k = 0; k < bb.vectors.size(); ++k) q0 += Complex(0.5 / (k + 1)) * bb.vectors[k];
  const RepPoint A = bb_slice_solve(q, f.p0, f.grading, q0);
  CHECK(slice_residual(q, f.p0, A) < 1e-10);
  for (double R : {0.5, 2.0}) CHECK(slice_residual(q, f.p0, rescale(q, A, f.grading, R)) < 1e-9);

  // Large inputs go through the rescaling fallback.
  RepPoint big = q0;
  big *= Complex(20.0);
  CHECK(slice_residual(q, f.p0, bb_slice_solve(q, f.p0, f.grading, big)) < 1e-8);
}
