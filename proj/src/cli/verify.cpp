#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>

#include "quivercl/cli.hpp"
#include "quivercl/linalg.hpp"

namespace quivercl {

bool VerifyReport::passed() const {
  return std::all_of(suites.begin(), suites.end(), [](const SuiteResult& s) { return s.passed; });
}

std::string VerifyReport::first_failure() const {
  for (const auto& s : suites)
    if (!s.passed) return s.name;
  return {};
}

json VerifyReport::to_json(const RunConfig& run, const std::string& config_hash) const {
  json list = json::array();
  for (const auto& s : suites)
    list.push_back({{"name", s.name}, {"passed", s.passed}, {"skipped", s.skipped}, {"worst", s.worst},
                    {"detail", s.detail}});
  return {{"config", run.quiver_file}, {"config_hash", config_hash}, {"seed", run.seed}, {"tol", run.tol},
          {"max_len", run.max_len},    {"passed", passed()},         {"suites", list}};
}

namespace {

class Suite {
 public:
  explicit Suite(std::string name) { r_.name = std::move(name); }

  // Records value ≤ limit; the first violation becomes the detail line.
  void check(double value, double limit, const std::string& what) {
    if (std::isfinite(value)) r_.worst = std::max(r_.worst, value);
    if (!(value <= limit)) fail(what + " = " + format_double(value) + " exceeds " + format_double(limit));
  }
  void require(bool ok, const std::string& what) {
    if (!ok) fail(what);
  }
  void fail(const std::string& what) {
    if (r_.passed) r_.detail = what;
    r_.passed = false;
  }
  void note(const std::string& what) {
    if (r_.passed) r_.detail = what;
  }
  SuiteResult done() { return r_; }

 private:
  SuiteResult r_;
};

SuiteResult skipped(const std::string& name, const std::string& why) {
  SuiteResult r;
  r.name = name;
  r.skipped = true;
  r.detail = why;
  return r;
}

SuiteResult run(const std::string& name, const std::function<void(Suite&)>& body) {
  Suite s(name);
  try {
    body(s);
  } catch (const std::exception& e) {
    s.fail(std::string("threw: ") + e.what());
  }
  return s.done();
}

LieElement commutator_with(const LieElement& x, const LieElement& m) {
  LieElement out = x;
  for (size_t k = 0; k < x.blocks.size(); ++k) out.blocks[k] = x.blocks[k] * m.blocks[k] - m.blocks[k] * x.blocks[k];
  return out;
}

LieElement conjugate(const GaugeElement& g, const LieElement& x) {
  const GaugeElement inv = g.inverse();
  LieElement out = x;
  for (size_t k = 0; k < x.blocks.size(); ++k) out.blocks[k] = g.g[k] * x.blocks[k] * inv.g[k];
  return out;
}

double max_abs(const Eigen::VectorXd& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

}  // namespace

VerifyReport verify_all(const QuiverConfig& cfg, const RunConfig& runcfg) {
  runcfg.validate();
  const Quiver& q = cfg.quiver;
  const DimensionVectors& dims = cfg.dims;
  const double tol = runcfg.tol;
  VerifyReport rep;

  const GenericityReport gen = check_genericity(cfg.zeta, q, dims);
  rep.suites.push_back(run("quiver_core.genericity", [&](Suite& s) {
    if (gen.generic) return s.note(gen.exact ? "generic (exact)" : "generic");
    std::ostringstream os;
    os << "ζ lies on the wall of θ = (" << gen.wall->transpose() << ")";
    s.fail(os.str());
  }));
  const long dim = expected_dimension(q, dims);
  rep.suites.push_back(run("quiver_core.dimension", [&](Suite& s) {
    s.note("expected real dimension " + std::to_string(dim));
    s.require(dim >= 0, "negative expected dimension: the variety is empty");
  }));

  const char* downstream[] = {"cli.sampling",         "rep_space.identities", "moment_solver.linearization",
                              "moment_solver.uniqueness", "slices.tangent",    "conformal.twistor",
                              "invariants.gauge",     "fixed_points.detection", "fixed_points.flow",
                              "slices.half_dimension", "slices.isotropy",     "slices.bb_slice",
                              "conformal.pA_identity",   "conformal.convergence", "invariants.escape"};
  if (!gen.generic || dim < 0) {
    for (const char* n : downstream) rep.suites.push_back(skipped(n, "variety is not smooth and non-empty"));
    return rep;
  }

  const int samples = 4;
  const int max_len = runcfg.max_len > 0 ? runcfg.max_len : nilpotency_length(dims);
  Rng rng(runcfg.seed, 1000);
  std::vector<RepPoint> pts;
  rep.suites.push_back(run("cli.sampling", [&](Suite& s) {
    for (int k = 0; k < samples; ++k) {
      pts.push_back(sample_on_variety(cfg, runcfg.seed, k, tol));
      s.check(moment_residual(q, pts.back(), cfg.zeta), 10.0 * tol * std::max(1.0, squared_norm(pts.back())),
              "moment residual of sample " + std::to_string(k));
    }
    const RepPoint again = sample_on_variety(cfg, runcfg.seed, 0, tol);
    s.require(to_vector(again) == to_vector(pts.front()), "resampling with the same seed changed the point");
  }));
  if (pts.size() < static_cast<size_t>(samples)) {
    for (size_t k = 1; k < std::size(downstream); ++k) rep.suites.push_back(skipped(downstream[k], "no samples"));
    return rep;
  }

  rep.suites.push_back(run("rep_space.identities", [&](Suite& s) {
    for (const RepPoint& p : pts) {
      const RepPoint a = random_point(q, dims, rng);
      const RepPoint b = random_point(q, dims, rng);
      const LieElement xi = random_lie(dims.v, LieClass::general, rng);
      const double scale = (1.0 + squared_norm(p)) * (1.0 + norm(a) + norm(b) + norm(xi));
      s.check(std::abs(symplectic_form(q, a, b) + symplectic_form(q, b, a)) / scale, 1e-12, "ω antisymmetry");
      s.check(std::abs(metric(inf_action(q, p, xi), a) - lie_inner(xi, inf_action_adjoint(q, p, a))) / scale, 1e-10,
              "adjoint identity");
      const GaugeElement u = random_gauge(dims.v, rng, true);
      s.check(norm(moment_real(q, gauge_act(q, u, p)) - conjugate(u, moment_real(q, p))) / scale, 1e-10,
              "μ_R unitary equivariance");
      const GaugeElement g = random_gauge(dims.v, rng, false);
      s.check(norm(moment_complex(q, gauge_act(q, g, p)) - conjugate(g, moment_complex(q, p))) / scale, 1e-10,
              "μ_C complex equivariance");
      s.check(norm(dmu_complex(q, p, inf_action(q, p, xi)) - commutator_with(xi, moment_complex(q, p))) / scale,
              1e-10, "dμ_C(p, l_p ξ) = [ξ, μ_C(p)]");
      s.check(norm(moment_complex(q, p + a) - moment_complex(q, p) - dmu_complex(q, p, a) - moment_complex(q, a)) /
                  scale,
              1e-10, "μ_C Taylor expansion");
    }
  }));

  rep.suites.push_back(run("moment_solver.linearization", [&](Suite& s) {
    for (const RepPoint& p : pts) {
      const LieElement xi = random_lie(dims.v, LieClass::hermitian, rng);
      const LieElement eta = random_lie(dims.v, LieClass::hermitian, rng);
      const double scale = (1.0 + squared_norm(p)) * (1.0 + norm(xi)) * (1.0 + norm(eta));
      s.check(std::abs(lie_inner(linearized_operator(q, p, xi), xi) - squared_norm(inf_action(q, p, xi))) / scale,
              1e-10, "⟨L ξ, ξ⟩ − ‖l_p ξ‖²");
      s.check(std::abs(lie_inner(linearized_operator(q, p, xi), eta) - lie_inner(xi, linearized_operator(q, p, eta))) /
                  scale,
              1e-10, "self-adjointness of L");
    }
  }));

  rep.suites.push_back(run("moment_solver.uniqueness", [&](Suite& s) {
    for (const RepPoint& p : pts) {
      const RepPoint start = gauge_act(q, random_gauge(dims.v, rng, false, 30.0), p);
      SolveOptions a, b;
      a.tol = b.tol = tol;
      b.step_cap = 0.25;
      const SolveReport ra = solve_real_moment(q, start, cfg.zeta.sigma, a);
      const SolveReport rb = solve_real_moment(q, start, cfg.zeta.sigma, b);
      double diff = 0.0;
      const GaugeElement ga = exp(ra.xi), gb = exp(rb.xi);
      for (size_t k = 0; k < ga.g.size(); ++k) diff += (ga.g[k] - gb.g[k]).squaredNorm();
      s.check(std::sqrt(diff), 1e-8, "exp(ξ) mismatch between schedules");
      s.check(norm(moment_complex(q, ra.point) - moment_complex(q, start)) / (1.0 + squared_norm(start)), 1e-10,
              "μ_C drift during the solve");
    }
  }));

  rep.suites.push_back(run("slices.tangent", [&](Suite& s) {
    for (const RepPoint& p : pts) {
      const SliceBasis b = tangent_basis(q, p);
      for (const RepPoint& u : b.vectors) {
        s.check(norm(dmu_complex(q, p, u)), 1e-10 * (1.0 + norm(p)), "dμ_C on a tangent vector");
        s.check(norm(inf_action_adjoint(q, p, u)), 1e-10 * (1.0 + norm(p)), "l_p* on a tangent vector");
      }
      const RepPoint k = kuranishi(q, p, random_point(q, dims, rng, 0.1));
      s.check(norm(dmu_complex(q, p, k)), 1e-10 * (1.0 + norm(p)), "dμ_C after the Kuranishi projection");
    }
  }));

  rep.suites.push_back(run("conformal.twistor", [&](Suite& s) {
    for (const RepPoint& p : pts) {
      for (int t = 0; t < 3; ++t) {
        const Complex xi = std::polar(rng.uniform(0.0, 2.0), rng.uniform(0.0, 2.0 * std::numbers::pi));
        const RepPoint r = twistor_rotate(q, p, xi);
        LieElement dr = moment_real_form(q, r), dc = moment_complex(q, r), c0 = moment_complex(q, p);
        for (int k = 0; k < q.vertex_count(); ++k) {
          dr.blocks[k].diagonal().array() -= (1.0 - std::norm(xi)) * cfg.zeta.sigma[k];
          // With μ_C(p) = c there are c-dependent terms; compare against
          // the general identity μ_C(q_ξ) = μ_C − 2iξμ_R − ξ²μ_C†.
          dc.blocks[k] -= c0.blocks[k] - xi * xi * c0.blocks[k].adjoint();
          dc.blocks[k].diagonal().array() -= xi * cfg.zeta.sigma[k];
        }
        const double scale = (1.0 + squared_norm(p)) * (1.0 + std::norm(xi));
        // X(q_ξ) = (1−|ξ|²)X − 2(ξ̄μ_C + ξμ_C†).
        for (int k = 0; k < q.vertex_count(); ++k)
          dr.blocks[k] += 2.0 * (std::conj(xi) * c0.blocks[k] + xi * c0.blocks[k].adjoint());
        s.check(0.5 * norm(dr) / scale, 1e-10, "real moment after rotation");
        s.check(norm(dc) / scale, 1e-10, "complex moment after rotation");
      }
    }
  }));

  rep.suites.push_back(run("invariants.gauge", [&](Suite& s) {
    const PathCatalog catalog(q, dims, max_len);
    for (const RepPoint& p : pts) {
      const Eigen::VectorXd f = fingerprint(q, p, catalog);
      for (int t = 0; t < 5; ++t) {
        const Eigen::VectorXd g = fingerprint(q, gauge_act(q, random_gauge(dims.v, rng, false), p), catalog);
        s.check(max_abs(f - g) / std::max(1.0, max_abs(f)), 1e-9, "fingerprint change under complex gauge");
      }
      for (const PathSpec& l : catalog.loops()) {
        PathSpec rot = l;
        std::rotate(rot.edges.begin(), rot.edges.begin() + 1, rot.edges.end());
        s.check(std::abs(eval_path(q, p, l).trace() - eval_path(q, p, rot).trace()) /
                    std::max(1.0, std::abs(eval_path(q, p, l).trace())),
                1e-12, "loop trace under rotation");
      }
    }
  }));

  bool complex_zero = std::all_of(cfg.zeta.c.begin(), cfg.zeta.c.end(), [](Complex c) { return c == Complex(0.0); });
  if (!complex_zero || dims.total_v() == 0) {
    const char* why = dims.total_v() == 0 ? "v = 0: the gauge group is trivial" : "fixed-point suites need ζ_C = 0";
    for (size_t k = 7; k < std::size(downstream); ++k) rep.suites.push_back(skipped(downstream[k], why));
    return rep;
  }

  std::optional<RepPoint> p0;
  std::optional<WeightGrading> grading;
  rep.suites.push_back(run("fixed_points.detection", [&](Suite& s) {
    p0 = find_fixed_point(cfg, runcfg.seed, tol);
    const FixedPointCheck fc = is_fixed_point(q, *p0, cfg.zeta, 1e-8);
    s.require(fc.fixed, "the fixed point fails detection");
    s.check(fc.residual, 1e-8 * std::max(1.0, norm(*p0)), "generator residual");
    grading = weight_grading(q, *p0, cfg.zeta);
    s.check(grading->max_deviation, 1e-6, "weight deviation from integers");
    for (const RepPoint& p : pts) {
      const Complex t = std::polar(rng.uniform(0.2, 2.0), rng.uniform(0.0, 2.0 * std::numbers::pi));
      s.check(norm(moment_complex(q, cstar_act(q, t, p)) - t * moment_complex(q, p)) / (1.0 + squared_norm(p)),
              1e-12, "μ_C scaling under the C* action");
      const Complex u = std::polar(1.0, rng.uniform(0.0, 2.0 * std::numbers::pi));
      s.check(std::abs(real_moment_residual(q, cstar_act(q, u, p), cfg.zeta.sigma) -
                       real_moment_residual(q, p, cfg.zeta.sigma)),
              1e-12 * (1.0 + squared_norm(p)), "circle action and the real equation");
    }
  }));
  if (!grading) {
    for (size_t k = 8; k < std::size(downstream); ++k) rep.suites.push_back(skipped(downstream[k], "no fixed point"));
    return rep;
  }

  rep.suites.push_back(run("fixed_points.flow", [&](Suite& s) {
    const FlowReport flow = flow_limit(q, pts.front(), cfg.zeta, geometric_schedule(0.5, 0.5, 80), 1e-8, max_len);
    s.require(flow.monotone, "F increased along the flow");
    s.require(is_fixed_point(q, flow.point, cfg.zeta, 1e-7).fixed, "flow limit is not fixed");
    s.note(std::to_string(flow.trace.size()) + " flow steps");
  }));

  std::optional<SliceBasis> bb;
  rep.suites.push_back(run("slices.half_dimension", [&](Suite& s) {
    const SliceBasis full = tangent_basis(q, *p0);
    bb = bb_tangent_basis(q, *p0, *grading);
    s.require(2 * bb->real_dimension() == full.real_dimension(), "attracting dimension is not half the tangent one");
    s.require(full.real_dimension() == dim, "tangent dimension differs from the expected dimension");
    s.note("tangent " + std::to_string(full.real_dimension()) + ", attracting " + std::to_string(bb->real_dimension()));
  }));

  rep.suites.push_back(run("slices.isotropy", [&](Suite& s) {
    if (!bb) return s.fail("no attracting basis");
    for (const auto& a : bb->vectors)
      for (const auto& b : bb->vectors) s.check(std::abs(symplectic_form(q, a, b)), 1e-12, "ω_C on the attracting basis");
    const Eigen::MatrixXcd w = weight_subspace_basis(q, *p0, *grading, 1);
    for (Eigen::Index a = 0; a < w.cols(); ++a)
      for (Eigen::Index b = 0; b < w.cols(); ++b)
        s.check(std::abs(symplectic_form(q, from_vector(*p0, w.col(a)), from_vector(*p0, w.col(b)))), 1e-12,
                "ω_C on weight ≥ 1 increments");
  }));

  std::optional<RepPoint> A;
  rep.suites.push_back(run("slices.bb_slice", [&](Suite& s) {
    A = slice_element(cfg, *p0, *grading, rng);
    const double scale = std::max(1.0, squared_norm(*p0 + *A));
    s.check(slice_residual(q, *p0, *A), 1e-10 * scale, "slice equations");
    RepPoint outside = *A;
    for (const auto& [w, part] : grade_increment(q, *A, *grading))
      if (w >= 1) outside -= part;
    s.check(norm(outside), 1e-12 * scale, "weight < 1 part of the slice element");
    for (double R : {0.5, 2.0})
      s.check(slice_residual(q, *p0, rescale(q, *A, *grading, R)), 1e-9 * scale * R * R * R * R,
              "slice equations after rescaling");
  }));

  rep.suites.push_back(run("conformal.pA_identity", [&](Suite& s) {
    QuiverConfig free_dir = cfg;
    free_dir.slice_direction.reset();
    for (int t = 0; t < 5; ++t) {
      Rng sub = rng.split(static_cast<std::uint64_t>(t));
      const RepPoint a = slice_element(free_dir, *p0, *grading, sub,
                                       sub.uniform(0.1, 1.0));
      const Complex hbar = std::polar(sub.uniform(0.2, 2.0), sub.uniform(0.0, 2.0 * std::numbers::pi));
      const RepPoint pa = build_pA(q, *p0, a, hbar);
      LieElement d = moment_complex(q, pa);
      for (int k = 0; k < q.vertex_count(); ++k) d.blocks[k].diagonal().array() -= cfg.zeta.sigma[k];
      s.check(norm(d) / std::max(1.0, squared_norm(pa)), 1e-10, "μ_C(p_A) + 2iζ_R");
    }
  }));

  rep.suites.push_back(run("conformal.convergence", [&](Suite& s) {
    if (!A || norm(*A) == 0.0) return s.note("zero-dimensional attracting set: nothing to converge");
    SolveOptions opts;
    opts.tol = tol;
    const Complex hbar = cfg.hbar.empty() ? Complex(1.0) : cfg.hbar.front();
    const ConvergenceStudy st = convergence_study(q, *p0, *A, hbar, runcfg.R_grid, cfg.zeta.sigma, *grading,
                                                  max_len, opts);
    if (st.degenerate && !std::isfinite(st.slope)) return s.note("distances at the solver floor");
    // O(R²) is an upper bound; some quivers converge faster.
    s.require(st.slope >= 1.75, "convergence slope " + format_double(st.slope));
    s.note("slope " + format_double(st.slope));
  }));

  rep.suites.push_back(run("invariants.escape", [&](Suite& s) {
    if (!A) return s.fail("no slice element");
    if (is_nilpotent(q, *p0 + *A, max_len, 1e-10)) return s.note("p0 + A is nilpotent at this truncation");
    const PathCatalog catalog(q, dims, max_len);
    std::vector<double> peaks;
    for (double h : runcfg.hbar_grid) peaks.push_back(max_abs(fingerprint(q, build_pA(q, *p0, *A, h), catalog)));
    for (size_t k = peaks.size() / 2 + 1; k < peaks.size(); ++k)
      s.require(peaks[k] > peaks[k - 1], "fingerprint maximum did not grow as ħ decreased");
    s.note("peak " + format_double(peaks.back()) + " at the smallest ħ");
  }));
  return rep;
}

}  // namespace quivercl
