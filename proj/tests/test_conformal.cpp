#include <numbers>

#include "fixtures.hpp"

using namespace quivercl;
using fixtures::code_of;

namespace {

double fp_distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return a.size() == 0 ? 0.0 : (a - b).cwiseAbs().maxCoeff();
}

// X(p) − c·σ and μ_C(p) − c'·σ, as one number.
double moment_defect(const Quiver& q, const RepPoint& p, const std::vector<double>& sigma, Complex real_scale,
                     Complex complex_scale) {
  LieElement x = moment_real_form(q, p), c = moment_complex(q, p);
  for (int k = 0; k < q.vertex_count(); ++k) {
    x.blocks[k].diagonal().array() -= real_scale * sigma[k];
    c.blocks[k].diagonal().array() -= complex_scale * sigma[k];
  }
  return std::max(0.5 * norm(x), norm(c));
}

}  // namespace

TEST_CASE("twistor rotation") {
  const auto cfg = fixtures::bundled("a2_star");
  const RepPoint p = sample_on_variety(cfg, 8);
  CHECK(to_vector(twistor_rotate(cfg.quiver, p, 0.0)) == to_vector(p));

  const Complex xi(0.3, 0.4);
  const RepPoint r = twistor_rotate(cfg.quiver, p, xi);
  CHECK(moment_defect(cfg.quiver, r, cfg.zeta.sigma, 1.0 - std::norm(xi), xi) < 1e-10 * squared_norm(p));

  // T*P¹ by hand: (i, 0) ↦ (i, ξ·i†) and μ_C = ξ|i|² = ξ.
  const RepPoint t = twistor_rotate(fixtures::point_quiver(), fixtures::tstar_p0(), 0.6);
  CHECK(t.j[0](0, 0) == Complex(0.6));
  CHECK(t.j[0](1, 0) == Complex(0.0));
  CHECK(moment_complex(fixtures::point_quiver(), t).blocks[0](0, 0) == Complex(0.6));
}

TEST_CASE("conformal line point") {
  const auto f = fixtures::at_fixed("tstar_p1");
  const Quiver& q = f.cfg.quiver;
  const RepPoint J = *f.cfg.slice_direction;

  SUBCASE("T*P¹ closed form") {
    const Complex hbar(0.5, 0.25);
    const RepPoint pa = build_pA(q, f.p0, J, hbar);
    // (i0, ħ⁻¹J + i0†)
    CHECK(pa.i[0] == f.p0.i[0]);
    Eigen::MatrixXcd expect = J.j[0] / hbar + f.p0.i[0].adjoint();
    CHECK(fixtures::max_abs(pa.j[0] - expect) < 1e-15);
    CHECK(std::abs(moment_complex(q, pa).blocks[0](0, 0) - 1.0) < 1e-15);
  }
  SUBCASE("A = 0 is the rotated fixed point") {
    const RepPoint pa = build_pA(q, f.p0, RepPoint::zero(q, f.cfg.dims), 1.0);
    CHECK(norm(pa - twistor_rotate(q, f.p0, 1.0)) < 1e-15);
  }
  SUBCASE("random draws on A2 star") {
    const auto g = fixtures::at_fixed("a2_star");
    Rng rng(51);
    for (int t = 0; t < 20; ++t) {
      const RepPoint A = slice_element(g.cfg, g.p0, g.grading, rng, rng.uniform(0.1, 1.5));
      const Complex hbar = std::polar(rng.uniform(0.2, 3.0), rng.uniform(0.0, 2 * std::numbers::pi));
      const RepPoint pa = build_pA(g.cfg.quiver, g.p0, A, hbar);
      LieElement c = moment_complex(g.cfg.quiver, pa);
      for (int k = 0; k < 2; ++k) c.blocks[k].diagonal().array() -= g.cfg.zeta.sigma[k];
      CHECK(norm(c) < 1e-10 * std::max(1.0, squared_norm(pa)));
    }
  }
  SUBCASE("A off the slice is rejected") {
    RepPoint bad = RepPoint::zero(q, f.cfg.dims);
    bad.j[0](0, 0) = 1.0;  // i0·J = 1
    CHECK(code_of([&] { build_pA(q, f.p0, bad, 1.0); }) == ErrorCode::NotOnSlice);
  }
}

TEST_CASE("conformal limit") {
  const auto f = fixtures::at_fixed("tstar_p1");
  const Quiver& q = f.cfg.quiver;
  const RepPoint J = *f.cfg.slice_direction;

  SUBCASE("J = 0 is already balanced") {
    // (i0, i0†) has |i|² = |j|², so μ_R = 0 with no gauge correction.
    const SolveReport r = conformal_limit(q, f.p0, RepPoint::zero(q, f.cfg.dims), 1.0);
    CHECK(norm(r.xi) < 1e-12);
    CHECK(r.residual < 1e-12);
  }
  SUBCASE("scalar oracle") {
    // |i|² e^{2x} = |j|² e^{−2x} gives x = ¼ log(|j|²/|i|²).
    const Complex hbar = 0.5;
    const RepPoint pa = build_pA(q, f.p0, J, hbar);
    const SolveReport r = conformal_limit(q, f.p0, J, hbar);
    const double x = 0.25 * std::log(pa.j[0].squaredNorm() / pa.i[0].squaredNorm());
    CHECK(r.xi.blocks[0](0, 0).real() == doctest::Approx(x).epsilon(1e-9));
  }
  SUBCASE("continuous in ħ") {
    const PathCatalog cat(q, f.cfg.dims, 2);
    double prev_gap = -1.0;
    for (double step : {0.1, 0.01, 0.001}) {
      const double gap = fp_distance(fingerprint(q, conformal_limit(q, f.p0, J, 1.0).point, cat),
                                     fingerprint(q, conformal_limit(q, f.p0, J, 1.0 + step).point, cat));
      if (prev_gap >= 0.0) CHECK(gap < 0.2 * prev_gap);
      prev_gap = gap;
    }
  }
  SUBCASE("circle rescaling of A is absorbed by ħ") {
    const PathCatalog cat(q, f.cfg.dims, 2);
    for (double theta : {0.4, 2.0}) {
      const Complex R = std::polar(1.0, theta);
      const Complex hbar(0.8, 0.1);
      const RepPoint AR = rescale(q, J, f.grading, R);
      CHECK(fp_distance(fingerprint(q, conformal_limit(q, f.p0, AR, hbar).point, cat),
                        fingerprint(q, conformal_limit(q, f.p0, J, hbar / R).point, cat)) < 1e-9);
    }
  }
}

TEST_CASE("conformal family") {
  const auto f = fixtures::at_fixed("tstar_p1");
  const Quiver& q = f.cfg.quiver;
  const PathCatalog cat(q, f.cfg.dims, 2);
  const RepPoint J = *f.cfg.slice_direction;

  SUBCASE("A = 0 stays on the fixed twistor line") {
    const RepPoint zero = RepPoint::zero(q, f.cfg.dims);
    const Eigen::VectorXd limit = fingerprint(q, conformal_limit(q, f.p0, zero, 1.0).point, cat);
    for (double R : {0.2, 0.05}) {
      const auto s = conformal_family_sample(q, f.p0, zero, 1.0, R, f.cfg.zeta.sigma, f.grading, cat, limit);
      CHECK(s.distance_to_limit < 1e-8);
    }
  }
  SUBCASE("pinned sample") {
    const Eigen::VectorXd limit = fingerprint(q, conformal_limit(q, f.p0, J, 1.0).point, cat);
    const auto s = conformal_family_sample(q, f.p0, J, 1.0, 0.1, f.cfg.zeta.sigma, f.grading, cat, limit);
    // Regression value from the first run of this configuration.
    CHECK(s.distance_to_limit == doctest::Approx(0.017207477486343912).epsilon(1e-6));
    for (double r : s.stage_residuals) CHECK(r < 1e-10);
  }
  SUBCASE("slope of the convergence study") {
    const std::vector<double> grid{0.2, 0.1, 0.05, 0.025};
    const auto st = convergence_study(q, f.p0, J, 1.0, grid, f.cfg.zeta.sigma, f.grading);
    CHECK(st.slope == doctest::Approx(2.0).epsilon(0.125));
    CHECK_FALSE(st.degenerate);
    std::vector<double> fine;
    for (double R : grid) {
      fine.push_back(R);
      fine.push_back(R / std::sqrt(2.0));
    }
    const auto st2 = convergence_study(q, f.p0, J, 1.0, fine, f.cfg.zeta.sigma, f.grading);
    CHECK(std::abs(st2.slope - st.slope) < 0.1);
  }
  SUBCASE("A = 0 is a degenerate fit") {
    const auto st = convergence_study(q, f.p0, RepPoint::zero(q, f.cfg.dims), 1.0, {0.2, 0.1, 0.05}, f.cfg.zeta.sigma,
                                      f.grading);
    CHECK(st.degenerate);
    for (const auto& s : st.samples) CHECK(s.distance_to_limit <= st.floor);
  }
}
