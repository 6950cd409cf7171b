// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>

#include "quivercl/cli.hpp"
#include "quivercl/linalg.hpp"

using namespace quivercl;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

QuiverConfig bundled(const std::string& name) {
  return load_config(std::string(QUIVERCL_CONFIG_DIR) + "/" + name + ".json");
}

struct Fixed {
  QuiverConfig cfg;
  RepPoint p0;
  WeightGrading grading;
};

Fixed at_fixed(const std::string& name) {
  Fixed f{bundled(name), {}, {}};
  f.p0 = *f.cfg.fixed_point;
  f.grading = weight_grading(f.cfg.quiver, f.p0, f.cfg.zeta);
  return f;
}

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

double max_abs(const Eigen::MatrixXcd& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

// 1. Twistor rotation on (ζ_R, 0): μ_R = (1−|ξ|²)ζ_R and μ_C = −2iξζ_R = ξσ.
Outcome twistor_rotation() {
  double worst = 0.0;
  for (const char* name : {"tstar_p1", "a2_star"}) {
    const QuiverConfig cfg = bundled(name);
    Rng rng(101);
    for (int t = 0; t < 100; ++t) {
      const RepPoint p = sample_on_variety(cfg, 101, static_cast<std::uint64_t>(t), 1e-13);
      const Complex xi = std::polar(2.0 * std::sqrt(rng.uniform(0.0, 1.0)), rng.uniform(0.0, 2 * std::numbers::pi));
      const RepPoint r = twistor_rotate(cfg.quiver, p, xi);
      LieElement x = moment_real_form(cfg.quiver, r), c = moment_complex(cfg.quiver, r);
      for (int k = 0; k < cfg.quiver.vertex_count(); ++k) {
        x.blocks[k].diagonal().array() -= (1.0 - std::norm(xi)) * cfg.zeta.sigma[k];
        c.blocks[k].diagonal().array() -= xi * cfg.zeta.sigma[k];
      }
      worst = std::max({worst, 0.5 * norm(x), norm(c)});
    }
  }
  return {worst <= 1e-10, "200 points, worst " + num(worst)};
}

// 2. ⟨l_p(ξ), q⟩ = ⟨ξ, l_p*(q)⟩ and ⟨L(ξ), ξ⟩ = ‖l_p(ξ)‖².
Outcome adjoint_identity() {
  const QuiverConfig cfg = bundled("a2_graded");
  Rng rng(102);
  double adj = 0.0, gram = 0.0;
  for (int t = 0; t < 100; ++t) {
    const RepPoint p = random_point(cfg.quiver, cfg.dims, rng);
    const RepPoint dq = random_point(cfg.quiver, cfg.dims, rng);
    const LieElement xi = random_lie(cfg.dims.v, LieClass::general, rng);
    const LieElement h = random_lie(cfg.dims.v, LieClass::hermitian, rng);
    adj = std::max(adj, std::abs(metric(inf_action(cfg.quiver, p, xi), dq) -
                                 lie_inner(xi, inf_action_adjoint(cfg.quiver, p, dq))));
    gram = std::max(gram, std::abs(lie_inner(linearized_operator(cfg.quiver, p, h), h) -
                                   squared_norm(inf_action(cfg.quiver, p, h))));
  }
  return {adj <= 1e-10 && gram <= 1e-10, "adjoint " + num(adj) + ", Gram " + num(gram)};
}

// 3. The attracting tangent space is half the tangent space.
Outcome half_dimension() {
  std::string detail;
  bool pass = true;
  for (const char* name : {"tstar_p1", "a2_star"}) {
    const Fixed f = at_fixed(name);
    const int bb = bb_tangent_basis(f.cfg.quiver, f.p0, f.grading).real_dimension();
    const int tan = tangent_basis(f.cfg.quiver, f.p0).real_dimension();
    const long expected = expected_dimension(f.cfg.quiver, f.cfg.dims);
    pass = pass && 2 * bb == tan && tan == expected;
    detail += std::string(detail.empty() ? "" : "; ") + name + " tangent " + std::to_string(tan) + ", attracting " +
              std::to_string(bb);
  }
  const Fixed t = at_fixed("tstar_p1");
  pass = pass && tangent_basis(t.cfg.quiver, t.p0).real_dimension() == 4 &&
         bb_tangent_basis(t.cfg.quiver, t.p0, t.grading).real_dimension() == 2;
  return {pass, detail};
}

// 4. ω_C vanishes on the attracting tangent basis.
Outcome isotropy() {
  double worst = 0.0;
  int vectors = 0;
  for (const char* name : {"tstar_p1", "a2_star", "a2_graded", "affine_a1"}) {
    const Fixed f = at_fixed(name);
    const SliceBasis bb = bb_tangent_basis(f.cfg.quiver, f.p0, f.grading);
    vectors += bb.real_dimension();
    for (const auto& a : bb.vectors)
      for (const auto& b : bb.vectors) worst = std::max(worst, std::abs(symplectic_form(f.cfg.quiver, a, b)));
  }
  return {worst <= 1e-12 && vectors > 0, std::to_string(vectors) + " vectors, worst " + num(worst)};
}

// 5. μ_C(p_A) = −2iζ_R = σ.
Outcome conformal_line_point() {
  const char* names[] = {"tstar_p1", "a2_star", "a2_graded", "affine_a1"};
  Rng rng(105);
  double worst = 0.0;
  for (int t = 0; t < 50; ++t) {
    const Fixed f = at_fixed(names[t % 4]);
    QuiverConfig free_dir = f.cfg;
    free_dir.slice_direction.reset();
    const RepPoint A = slice_element(free_dir, f.p0, f.grading, rng, rng.uniform(0.05, 1.0));
    const Complex hbar = std::polar(rng.uniform(0.5, 2.0), rng.uniform(0.0, 2 * std::numbers::pi));
    LieElement c = moment_complex(f.cfg.quiver, build_pA(f.cfg.quiver, f.p0, A, hbar));
    for (int k = 0; k < f.cfg.quiver.vertex_count(); ++k) c.blocks[k].diagonal().array() -= f.cfg.zeta.sigma[k];
    worst = std::max(worst, norm(c));
  }
  return {worst <= 1e-10, "50 draws, worst " + num(worst)};
}

// 6. The End(V)_m part of ξ_R scales like R^{|m|+2}.
Outcome graded_scaling() {
  const Fixed f = at_fixed("a2_graded");
  const SliceBasis bb = bb_tangent_basis(f.cfg.quiver, f.p0, f.grading);
  RepPoint q0 = RepPoint::zero(f.cfg.quiver, f.cfg.dims);
  for (size_t k = 0; k < bb.vectors.size(); ++k) q0 += Complex(0.8 / (k + 1)) * bb.vectors[k];
  const RepPoint A = bb_slice_solve(f.cfg.quiver, f.p0, f.grading, q0);
  const std::vector<double> grid{0.2, 0.1, 0.05};
  std::map<int, std::vector<double>> sizes;
  for (double R : grid) {
    const GradedSolveReport r =
        graded_solve(f.cfg.quiver, f.p0 + rescale(f.cfg.quiver, A, f.grading, R), f.grading, R, f.cfg.zeta.sigma);
    for (const auto& [m, part] : decompose_lie(r.total.xi, f.grading)) sizes[m].push_back(norm(part));
  }
  bool pass = sizes.size() >= 2;
  std::string detail;
  std::vector<double> logR;
  for (double R : grid) logR.push_back(std::log(R));
  for (const auto& [m, s] : sizes) {
    std::vector<double> ls;
    for (double x : s) ls.push_back(std::log(x));
    const LineFit fit = fit_line(logR, ls);
    pass = pass && std::abs(fit.slope - (std::abs(m) + 2)) <= 0.3;
    detail += std::string(detail.empty() ? "" : ", ") + "m=" + std::to_string(m) + " slope " + num(fit.slope);
  }
  return {pass, detail};
}

// 7. dist(F̃_R, CL_ħ) = O(R²) on T*P¹; A = 0 sits at the floor.
Outcome convergence() {
  const Fixed f = at_fixed("tstar_p1");
  const std::vector<double> grid{0.2, 0.1, 0.05, 0.025};
  bool pass = true;
  std::string detail;
  for (Complex hbar : {Complex(1.0), Complex(0.5)}) {
    const ConvergenceStudy st =
        convergence_study(f.cfg.quiver, f.p0, *f.cfg.slice_direction, hbar, grid, f.cfg.zeta.sigma, f.grading);
    pass = pass && !st.degenerate && st.slope >= 1.75 && st.slope <= 2.5;
    detail += "ħ=" + num(hbar.real()) + " slope " + num(st.slope) + "; ";
  }
  const ConvergenceStudy zero = convergence_study(f.cfg.quiver, f.p0, RepPoint::zero(f.cfg.quiver, f.cfg.dims), 1.0,
                                                  grid, f.cfg.zeta.sigma, f.grading);
  pass = pass && zero.degenerate;
  detail += std::string("A=0 ") + (zero.degenerate ? "degenerate" : "not degenerate");
  return {pass, detail};
}

// 8. Fingerprints are invariant under the complex gauge group.
Outcome gauge_invariance() {
  double worst = 0.0;
  for (const char* name : {"a2_graded", "affine_a1"}) {
    const QuiverConfig cfg = bundled(name);
    const RepPoint p = sample_on_variety(cfg, 108);
    const PathCatalog cat(cfg.quiver, cfg.dims, nilpotency_length(cfg.dims));
    const Eigen::VectorXd fp = fingerprint(cfg.quiver, p, cat);
    const double scale = std::max(1.0, fp.cwiseAbs().maxCoeff());
    Rng rng(108);
    for (int t = 0; t < 100; ++t) {
      const RepPoint g = gauge_act(cfg.quiver, random_gauge(cfg.dims.v, rng, false), p);
      worst = std::max(worst, (fingerprint(cfg.quiver, g, cat) - fp).cwiseAbs().maxCoeff() / scale);
    }
  }
  return {worst <= 1e-9, "200 gauges, worst relative change " + num(worst)};
}

// 9. Invariants of P_{A,ħ} blow up like ħ^{−M}.
Outcome escape() {
  const std::vector<Complex> grid{0.1, 0.05, 0.025, 0.0125};
  const Fixed t = at_fixed("tstar_p1");
  const EscapeStudy a = escape_slope(t.cfg.quiver, t.p0, *t.cfg.slice_direction, grid, PathSpec::parse("P:c0.j0"));
  const Fixed c = at_fixed("affine_a1");
  const SliceBasis bb = bb_tangent_basis(c.cfg.quiver, c.p0, c.grading);
  const RepPoint A = bb_slice_solve(c.cfg.quiver, c.p0, c.grading, Complex(0.9) * bb.vectors[0]);
  const EscapeStudy b = escape_slope(c.cfg.quiver, c.p0, A, grid, PathSpec::parse(*c.cfg.escape_path));
  bool pass = std::abs(a.slope + 1.0) <= 0.2 && std::abs(b.slope + 2.0) <= 0.2;

  // Fingerprint maximum along a finer ħ scan: increasing once ħ is small.
  const PathCatalog cat(t.cfg.quiver, t.cfg.dims, 2);
  std::vector<double> peaks;
  for (double h = 2.0; h > 0.01; h *= 0.5)
    peaks.push_back(fingerprint(t.cfg.quiver, build_pA(t.cfg.quiver, t.p0, *t.cfg.slice_direction, h), cat)
                        .cwiseAbs()
                        .maxCoeff());
  size_t start = peaks.size() - 1;
  while (start > 0 && peaks[start - 1] < peaks[start]) --start;
  const bool monotone = peaks.size() - start >= 4;
  pass = pass && monotone;
  return {pass, "T*P¹ slope " + num(a.slope) + ", affine A1 loop slope " + num(b.slope) + ", monotone over the last " +
                    std::to_string(peaks.size() - start) + " of " + std::to_string(peaks.size()) + " ħ values"};
}

// 10. Different solver schedules reach the same exp(ξ).
Outcome uniqueness() {
  const QuiverConfig cfg = bundled("a2_star");
  Rng rng(110);
  SolveOptions careful;
  careful.step_cap = 0.25;
  careful.max_iter = 400;
  double worst = 0.0;
  for (int t = 0; t < 50; ++t) {
    const RepPoint s = sample_on_variety(cfg, 110, static_cast<std::uint64_t>(t));
    const RepPoint p = gauge_act(cfg.quiver, random_gauge(cfg.dims.v, rng, false, 10.0), s);
    const GaugeElement a = exp(solve_real_moment(cfg.quiver, p, cfg.zeta.sigma).xi);
    const GaugeElement b = exp(solve_real_moment(cfg.quiver, p, cfg.zeta.sigma, careful).xi);
    for (size_t k = 0; k < a.g.size(); ++k) worst = std::max(worst, max_abs(a.g[k] - b.g[k]));
  }
  return {worst <= 1e-8, "50 starts, worst " + num(worst)};
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"twistor rotation identities", twistor_rotation},
      {"adjoint identity", adjoint_identity},
      {"half dimension", half_dimension},
      {"attracting isotropy", isotropy},
      {"conformal line point", conformal_line_point},
      {"graded scaling", graded_scaling},
      {"conformal-limit convergence", convergence},
      {"fingerprint gauge invariance", gauge_invariance},
      {"escape rates", escape},
      {"gauge uniqueness", uniqueness},
  };
  int failed = 0, index = 0;
  for (const auto& [name, run] : criteria) {
    ++index;
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("criterion %2d %-30s %s  %s\n", index, name, o.pass ? "PASS" : "FAIL", o.detail.c_str());
  }
  std::printf("%d of %d criteria passed\n", index - failed, index);
  return failed == 0 ? 0 : 1;
}
