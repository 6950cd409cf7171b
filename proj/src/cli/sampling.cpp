#include <cmath>
#include <cstdio>
#include <fstream>

#include "quivercl/cli.hpp"
#include "quivercl/linalg.hpp"

namespace quivercl {

namespace {

std::uint64_t mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

}  // namespace

Rng::result_type Rng::operator()() {
  const std::uint64_t key = mix(seed_ ^ mix(stream_ + 0x632be59bd9b4e019ULL));
  return mix(key + (++counter_) * kGamma);
}

Complex Rng::complex_normal() {
  const double s = 1.0 / std::sqrt(2.0);
  const double re = normal();
  return {s * re, s * normal()};
}

Rng Rng::split(std::uint64_t k) const { return Rng(mix(seed_ + kGamma * (stream_ + 1)), k); }

RepPoint random_point(const Quiver& q, const DimensionVectors& dims, Rng& rng, double scale) {
  RepPoint p = RepPoint::zero(q, dims);
  p.for_each_block([&](Eigen::MatrixXcd& m) {
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      for (Eigen::Index r = 0; r < m.rows(); ++r) m(r, c) = scale * rng.complex_normal();
  });
  return p;
}

LieElement random_lie(const std::vector<int>& v, LieClass cls, Rng& rng) {
  LieElement x = LieElement::zero(v, cls);
  for (auto& b : x.blocks) {
    for (Eigen::Index c = 0; c < b.cols(); ++c)
      for (Eigen::Index r = 0; r < b.rows(); ++r) b(r, c) = rng.complex_normal();
    if (cls == LieClass::hermitian) b = (0.5 * (b + b.adjoint())).eval();
    if (cls == LieClass::skew_hermitian) b = (0.5 * (b - b.adjoint())).eval();
  }
  return x;
}

GaugeElement random_gauge(const std::vector<int>& v, Rng& rng, bool unitary, double max_cond) {
  GaugeElement g;
  g.unitary = unitary;
  for (int d : v) {
    for (int attempt = 0;; ++attempt) {
      Eigen::MatrixXcd m(d, d);
      for (Eigen::Index c = 0; c < d; ++c)
        for (Eigen::Index r = 0; r < d; ++r) m(r, c) = rng.complex_normal();
      if (unitary) {
        if (d == 0) {
          g.g.push_back(m);
          break;
        }
        Eigen::HouseholderQR<Eigen::MatrixXcd> qr(m);
        g.g.push_back(qr.householderQ() * Eigen::MatrixXcd::Identity(d, d));
        break;
      }
      m = (Eigen::MatrixXcd::Identity(d, d) + 0.5 * m).eval();
      if (d == 0) {
        g.g.push_back(m);
        break;
      }
      const Eigen::VectorXd s = Eigen::JacobiSVD<Eigen::MatrixXcd>(m).singularValues();
      if (s(d - 1) > 0.0 && s(0) / s(d - 1) <= max_cond) {
        g.g.push_back(m);
        break;
      }
      if (attempt > 100) throw Error(ErrorCode::SamplingFailed, "could not draw a well-conditioned gauge element");
    }
  }
  return g;
}

void RunConfig::validate() const {
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "tol must be positive");
  if (max_len < 0) throw Error(ErrorCode::InvalidArgument, "max-len must be non-negative");
  for (const auto* grid : {&R_grid, &hbar_grid})
    for (size_t k = 0; k < grid->size(); ++k)
      if (!((*grid)[k] > 0.0) || (k > 0 && !((*grid)[k] < (*grid)[k - 1])))
        throw Error(ErrorCode::InvalidArgument, "grids must be positive and strictly decreasing");
}

namespace {

// Minimum-norm Gauss–Newton onto μ_C(p) = c.
bool project_complex(const Quiver& q, RepPoint& p, const std::vector<Complex>& c) {
  RepPoint shape = p;
  shape *= 0.0;
  auto defect = [&](const RepPoint& x) {
    LieElement m = moment_complex(q, x);
    for (int k = 0; k < q.vertex_count(); ++k) m.blocks[k].diagonal().array() -= c[k];
    return to_vector(m);
  };
  Eigen::VectorXcd r = defect(p);
  for (int it = 0; it < 60; ++it) {
    if (r.norm() <= 1e-14 * std::max(1.0, squared_norm(p))) return true;
    const Eigen::MatrixXcd d = assemble(p.size(), [&](const Eigen::VectorXcd& e) {
      return to_vector(dmu_complex(q, p, from_vector(shape, e)));
    });
    const Eigen::VectorXcd step = -d.completeOrthogonalDecomposition().solve(r);
    bool accepted = false;
    for (double t = 1.0; t > 1e-3; t *= 0.5) {
      RepPoint trial = p + from_vector(shape, Eigen::VectorXcd(t * step));
      const Eigen::VectorXcd rt = defect(trial);
      if (rt.norm() < (1.0 - 1e-4 * t) * r.norm()) {
        p = std::move(trial);
        r = rt;
        accepted = true;
        break;
      }
    }
    if (!accepted) return false;
  }
  return r.norm() <= 1e-12 * std::max(1.0, squared_norm(p));
}

}  // namespace

RepPoint sample_on_variety(const QuiverConfig& cfg, std::uint64_t seed, std::uint64_t index, double tol) {
  const Quiver& q = cfg.quiver;
  std::string last = "no attempt made";
  for (int attempt = 0; attempt < 10; ++attempt) {
    Rng rng = Rng(seed, index).split(static_cast<std::uint64_t>(attempt));
    RepPoint p = random_point(q, cfg.dims, rng);
    if (!project_complex(q, p, cfg.zeta.c)) {
      last = "complex moment projection did not converge";
      continue;
    }
    try {
      SolveOptions opts;
      opts.tol = tol;
      const SolveReport rep = solve_real_moment(q, p, cfg.zeta.sigma, opts);
      return rep.point;
    } catch (const Error& e) {
      last = e.what();
    }
  }
  throw Error(ErrorCode::SamplingFailed, "10 restarts exhausted; last failure: " + last);
}

RepPoint sample_on_variety(const RunConfig& run) {
  run.validate();
  return sample_on_variety(load_config(run.quiver_file), run.seed, 0, run.tol);
}

RepPoint find_fixed_point(const QuiverConfig& cfg, std::uint64_t seed, double tol) {
  for (const Complex& c : cfg.zeta.c)
    if (c != Complex(0.0)) throw Error(ErrorCode::InvalidArgument, "fixed points need ζ_C = 0");
  if (cfg.fixed_point) return *cfg.fixed_point;
  const RepPoint p = sample_on_variety(cfg, seed, 0, tol);
  const FlowReport flow = flow_limit(cfg.quiver, p, cfg.zeta, geometric_schedule(0.5, 0.5, 80), 1e-8);
  // The flow stops at a small but nonzero R; keep the weight-0 part and
  // re-solve, which lands on the fixed point to solver precision.
  const WeightGrading g = weight_grading(cfg.quiver, flow.point, cfg.zeta, 1e-6);
  const auto parts = grade_increment(cfg.quiver, flow.point, g);
  RepPoint p0 = parts.count(0) ? parts.at(0) : flow.point;
  SolveOptions opts;
  opts.tol = tol;
  return solve_real_moment(cfg.quiver, p0, cfg.zeta.sigma, opts).point;
}

RepPoint slice_element(const QuiverConfig& cfg, const RepPoint& p0, const WeightGrading& grading, Rng& rng,
                       double size) {
  const SliceBasis basis = bb_tangent_basis(cfg.quiver, p0, grading);
  RepPoint q0 = p0;
  q0 *= 0.0;
  if (basis.vectors.empty()) return q0;
  if (cfg.slice_direction) {
    const Eigen::VectorXcd v = to_vector(*cfg.slice_direction);
    q0 = from_vector(q0, Eigen::VectorXcd(basis.complex_basis * (basis.complex_basis.adjoint() * v)));
  } else {
    for (const auto& u : basis.vectors) q0 += Complex(rng.normal()) * u;
    const double n = norm(q0);
    if (n > 0.0) q0 *= Complex(size / n);
  }
  return bb_slice_solve(cfg.quiver, p0, grading, q0);
}

std::string file_hash(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot open '" + path + "'");
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char ch; in.get(ch);) {
    h ^= static_cast<unsigned char>(ch);
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace quivercl
