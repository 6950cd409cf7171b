#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "quivercl/cli.hpp"

using namespace quivercl;
namespace fs = std::filesystem;

#ifndef QUIVERCL_CONFIG_DIR
#define QUIVERCL_CONFIG_DIR "configs"
#endif

namespace {

struct Flags {
  std::string file;
  std::uint64_t seed = 1;
  double tol = 1e-10;
  int max_len = 0;
  std::string grid;
  std::string out;
  double hbar_re = 1.0;
  double hbar_im = 0.0;
  std::string path;
  int count = 1;
};

// A path on disk, or the name of a bundled config ("tstar_p1").
std::string resolve(const std::string& file) {
  if (fs::exists(file)) return file;
  const fs::path bundled = fs::path(QUIVERCL_CONFIG_DIR) / (file + ".json");
  if (fs::exists(bundled)) return bundled.string();
  throw Error(ErrorCode::InvalidArgument, "no such config: '" + file + "'");
}

std::vector<double> parse_grid(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      size_t used = 0;
      out.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::InvalidArgument, "grid entry '" + tok + "' is not a number");
    }
  }
  return out;
}

struct Context {
  QuiverConfig cfg;
  RunConfig run;
  std::string hash;
  Complex hbar;
};

Context load(const Flags& f, bool grid_is_hbar) {
  Context c;
  c.run.quiver_file = resolve(f.file);
  c.cfg = load_config(c.run.quiver_file);
  c.hash = file_hash(c.run.quiver_file);
  c.run.seed = f.seed;
  c.run.tol = f.tol;
  c.run.max_len = f.max_len > 0 ? f.max_len : c.cfg.max_len.value_or(0);
  if (!c.cfg.R_grid.empty()) c.run.R_grid = c.cfg.R_grid;
  if (!c.cfg.hbar_grid.empty()) c.run.hbar_grid = c.cfg.hbar_grid;
  if (!f.grid.empty()) (grid_is_hbar ? c.run.hbar_grid : c.run.R_grid) = parse_grid(f.grid);
  c.run.output_dir = f.out;
  c.run.validate();
  c.hbar = {f.hbar_re, f.hbar_im};
  if (c.hbar == Complex(0.0)) throw Error(ErrorCode::InvalidArgument, "--hbar must be nonzero");
  return c;
}

// Writes to <out>/<name> when --out is set, else to stdout.
void emit(const Context& c, const std::string& name, const std::string& text) {
  if (c.run.output_dir.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  fs::create_directories(c.run.output_dir);
  std::ofstream os(fs::path(c.run.output_dir) / name);
  os << text;
  if (!text.empty() && text.back() != '\n') os << '\n';
}

json stamp(const Context& c, json body) {
  body["config"] = c.run.quiver_file;
  body["config_hash"] = c.hash;
  body["seed"] = c.run.seed;
  body["tol"] = c.run.tol;
  return body;
}

int max_len_of(const Context& c) { return c.run.max_len > 0 ? c.run.max_len : nilpotency_length(c.cfg.dims); }

struct FixedData {
  RepPoint p0;
  WeightGrading grading;
  RepPoint A;
};

FixedData fixed_data(const Context& c) {
  FixedData d;
  d.p0 = find_fixed_point(c.cfg, c.run.seed, c.run.tol);
  d.grading = weight_grading(c.cfg.quiver, d.p0, c.cfg.zeta);
  Rng rng(c.run.seed, 2000);
  d.A = slice_element(c.cfg, d.p0, d.grading, rng);
  return d;
}

SolveOptions solve_opts(const Context& c) {
  SolveOptions o;
  o.tol = c.run.tol;
  return o;
}

int cmd_check(const Context& c) {
  const auto& q = c.cfg.quiver;
  const GenericityReport g = check_genericity(c.cfg.zeta, q, c.cfg.dims);
  json out = {{"genericity", to_json(g)}, {"expected_dimension", expected_dimension(q, c.cfg.dims)}};
  if (g.wall) {
    std::ostringstream os;
    os << g.wall->transpose();
    std::cerr << "non-generic: ζ lies on the wall of θ = (" << os.str() << ")\n";
  }
  if (g.generic && expected_dimension(q, c.cfg.dims) >= 0) {
    const RepPoint p = sample_on_variety(c.cfg, c.run.seed, 0, c.run.tol);
    const int computed = tangent_basis(q, p).real_dimension();
    out["computed_dimension"] = computed;
  }
  emit(c, "check.json", stamp(c, out).dump(2));
  return g.generic ? 0 : 1;
}

int cmd_sample(const Context& c, int count) {
  json pts = json::array();
  for (int k = 0; k < count; ++k) {
    const RepPoint p = sample_on_variety(c.cfg, c.run.seed, static_cast<std::uint64_t>(k), c.run.tol);
    pts.push_back({{"point", to_json(p)}, {"moment_residual", moment_residual(c.cfg.quiver, p, c.cfg.zeta)}});
  }
  emit(c, "samples.json", stamp(c, {{"samples", pts}}).dump(2));
  return 0;
}

int cmd_flow(const Context& c) {
  const RepPoint p = sample_on_variety(c.cfg, c.run.seed, 0, c.run.tol);
  const FlowReport r =
      flow_limit(c.cfg.quiver, p, c.cfg.zeta, geometric_schedule(0.5, 0.5, 80), 1e-8, max_len_of(c), solve_opts(c));
  std::ostringstream csv;
  write_flow_csv(csv, r);
  if (c.run.output_dir.empty()) {
    emit(c, "", csv.str());
  } else {
    emit(c, "flow.csv", csv.str());
    emit(c, "flow_limit.json",
         stamp(c, {{"start", to_json(p)}, {"limit", to_json(r.point)}, {"monotone", r.monotone}}).dump(2));
  }
  return 0;
}

int cmd_fixed(const Context& c) {
  const RepPoint p0 = find_fixed_point(c.cfg, c.run.seed, c.run.tol);
  const FixedPointCheck fc = is_fixed_point(c.cfg.quiver, p0, c.cfg.zeta);
  const WeightGrading g = weight_grading(c.cfg.quiver, p0, c.cfg.zeta);
  emit(c, "fixed.json",
       stamp(c, {{"point", to_json(p0)}, {"fixed", fc.fixed}, {"residual", fc.residual}, {"grading", to_json(g)}})
           .dump(2));
  return 0;
}

int cmd_bb_basis(const Context& c) {
  const RepPoint p0 = find_fixed_point(c.cfg, c.run.seed, c.run.tol);
  const WeightGrading g = weight_grading(c.cfg.quiver, p0, c.cfg.zeta);
  const SliceBasis b = bb_tangent_basis(c.cfg.quiver, p0, g);
  emit(c, "bb_basis.json", stamp(c, {{"basis", to_json(b)}, {"grading", to_json(g)}}).dump(2));
  return 0;
}

int cmd_climit(const Context& c) {
  const FixedData d = fixed_data(c);
  const SolveReport r = conformal_limit(c.cfg.quiver, d.p0, d.A, c.hbar, solve_opts(c));
  const PathCatalog catalog(c.cfg.quiver, c.cfg.dims, max_len_of(c));
  const Eigen::VectorXd fp = fingerprint(c.cfg.quiver, r.point, catalog);
  json entries = json::object();
  const auto labels = catalog.labels();
  for (size_t k = 0; k < labels.size(); ++k) entries[labels[k]] = fp(static_cast<Eigen::Index>(k));
  emit(c, "climit.json",
       stamp(c, {{"hbar", {c.hbar.real(), c.hbar.imag()}},
                 {"slice_element", to_json(d.A)},
                 {"limit", to_json(r.point)},
                 {"residual", r.residual},
                 {"fingerprint", entries}})
           .dump(2));
  return 0;
}

int cmd_family(const Context& c) {
  const FixedData d = fixed_data(c);
  const ConvergenceStudy st = convergence_study(c.cfg.quiver, d.p0, d.A, c.hbar, c.run.R_grid, c.cfg.zeta.sigma,
                                                d.grading, max_len_of(c), solve_opts(c));
  std::ostringstream csv;
  write_convergence_csv(csv, st);
  if (c.run.output_dir.empty()) {
    emit(c, "", csv.str());
    std::cerr << "slope " << format_double(st.slope) << (st.degenerate ? " (degenerate fit)" : "") << '\n';
  } else {
    emit(c, "family.csv", csv.str());
    emit(c, "family.json", stamp(c, to_json(st)).dump(2));
  }
  return 0;
}

int cmd_invariants(const Context& c) {
  const RepPoint p = sample_on_variety(c.cfg, c.run.seed, 0, c.run.tol);
  const PathCatalog catalog(c.cfg.quiver, c.cfg.dims, max_len_of(c));
  std::ostringstream csv;
  write_fingerprint_csv(csv, catalog, fingerprint(c.cfg.quiver, p, catalog));
  emit(c, "invariants.csv", csv.str());
  return 0;
}

int cmd_escape(const Context& c, const std::string& path_text) {
  const FixedData d = fixed_data(c);
  std::string text = path_text;
  if (text.empty()) text = c.cfg.escape_path.value_or("");
  if (text.empty()) throw Error(ErrorCode::InvalidArgument, "escape needs --path (or escape_path in the config)");
  std::vector<Complex> grid;
  for (double h : c.run.hbar_grid) grid.push_back(h * c.hbar / std::abs(c.hbar));
  const EscapeStudy st = escape_slope(c.cfg.quiver, d.p0, d.A, grid, PathSpec::parse(text));
  std::ostringstream csv;
  write_escape_csv(csv, st);
  if (c.run.output_dir.empty()) {
    emit(c, "", csv.str());
    std::cerr << "slope " << format_double(st.slope) << ", predicted " << -st.order << '\n';
  } else {
    emit(c, "escape.csv", csv.str());
    emit(c, "escape.json", stamp(c, to_json(st)).dump(2));
  }
  return 0;
}

int cmd_verify(const Context& c) {
  const VerifyReport r = verify_all(c.cfg, c.run);
  for (const auto& s : r.suites)
    std::cerr << (s.skipped ? "SKIP " : s.passed ? "PASS " : "FAIL ") << s.name
              << (s.detail.empty() ? "" : ": " + s.detail) << '\n';
  emit(c, "verify.json", r.to_json(c.run, c.hash).dump(2));
  if (!r.passed()) {
    std::cerr << "first failing suite: " << r.first_failure() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical toolkit for quiver varieties and their conformal limits"};
  app.require_subcommand(1);
  Flags f;

  auto common = [&](CLI::App* sub) {
    sub->add_option("file", f.file, "quiver JSON file or bundled config name")->required();
    sub->add_option("--seed", f.seed, "random seed");
    sub->add_option("--tol", f.tol, "solver tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--max-len", f.max_len, "longest path in fingerprints")->check(CLI::NonNegativeNumber);
    sub->add_option("--out", f.out, "output directory (default: stdout)");
  };
  auto hbar = [&](CLI::App* sub) {
    sub->add_option("--hbar", f.hbar_re, "real part of ħ");
    sub->add_option("--hbar-im", f.hbar_im, "imaginary part of ħ");
  };

  auto* check = app.add_subcommand("check", "genericity and dimension audit");
  auto* sample = app.add_subcommand("sample", "random points on the variety");
  auto* flow = app.add_subcommand("flow", "C*-limit of a sampled point");
  auto* fixed = app.add_subcommand("fixed", "fixed point detection and weight grading");
  auto* bb = app.add_subcommand("bb-basis", "attracting tangent basis at the fixed point");
  auto* climit = app.add_subcommand("climit", "conformal limit and its fingerprint");
  auto* family = app.add_subcommand("family", "convergence study of the conformal family");
  auto* inv = app.add_subcommand("invariants", "fingerprint of a sampled point");
  auto* escape = app.add_subcommand("escape", "growth of an invariant along the conformal line");
  auto* verify = app.add_subcommand("verify", "run every property suite");
  for (auto* sub : {check, sample, flow, fixed, bb, climit, family, inv, escape, verify}) common(sub);
  for (auto* sub : {climit, family, escape}) hbar(sub);
  sample->add_option("--count", f.count, "number of samples")->check(CLI::PositiveNumber);
  family->add_option("--grid", f.grid, "comma-separated radii R, decreasing");
  escape->add_option("--grid", f.grid, "comma-separated |ħ| values, decreasing");
  escape->add_option("--path", f.path, "path such as P:c0.j0 or L:h2.h3~");
  verify->add_option("--grid", f.grid, "comma-separated radii R, decreasing");

  CLI11_PARSE(app, argc, argv);

  try {
    const bool hbar_grid = escape->parsed();
    const Context c = load(f, hbar_grid);
    if (check->parsed()) return cmd_check(c);
    if (sample->parsed()) return cmd_sample(c, f.count);
    if (flow->parsed()) return cmd_flow(c);
    if (fixed->parsed()) return cmd_fixed(c);
    if (bb->parsed()) return cmd_bb_basis(c);
    if (climit->parsed()) return cmd_climit(c);
    if (family->parsed()) return cmd_family(c);
    if (inv->parsed()) return cmd_invariants(c);
    if (escape->parsed()) return cmd_escape(c, f.path);
    if (verify->parsed()) return cmd_verify(c);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
