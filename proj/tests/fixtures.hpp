#pragma once

#include <string>

#include "doctest.h"
#include "quivercl/cli.hpp"

namespace fixtures {

using namespace quivercl;

inline QuiverConfig bundled(const std::string& name) {
  return load_config(std::string(QUIVERCL_CONFIG_DIR) + "/" + name + ".json");
}

// T*P¹: one vertex, v = 1, w = 2, σ = 1.
inline Quiver point_quiver() { return Quiver(1, {}); }
inline DimensionVectors tstar_dims() { return {{1}, {2}}; }

inline RepPoint tstar_point(Complex i0, Complex i1, Complex j0, Complex j1) {
  RepPoint p = RepPoint::zero(point_quiver(), tstar_dims());
  p.i[0] << i0, i1;
  p.j[0] << j0, j1;
  return p;
}

// The fixed point (i0 = (1, 0), j = 0).
inline RepPoint tstar_p0() { return tstar_point(1.0, 0.0, 0.0, 0.0); }

struct AtFixed {
  QuiverConfig cfg;
  RepPoint p0;
  WeightGrading grading;
};

inline AtFixed at_fixed(const std::string& name) {
  AtFixed f{bundled(name), {}, {}};
  f.p0 = *f.cfg.fixed_point;
  f.grading = weight_grading(f.cfg.quiver, f.p0, f.cfg.zeta);
  return f;
}

inline double max_abs(const Eigen::MatrixXcd& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

template <typename F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no quivercl::Error thrown");
  return ErrorCode::InvalidArgument;
}

}  // namespace fixtures
