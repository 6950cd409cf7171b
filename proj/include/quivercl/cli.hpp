#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "quivercl/io.hpp"

namespace quivercl {

/// Counter-based SplitMix64: draw n of stream s is mix(seed, s, n), so any
/// draw can be reproduced without replaying the ones before it.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) : seed_(seed), stream_(stream) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()();

  double normal() { return normal_(*this); }
  /// Standard complex Gaussian, E|z|² = 1.
  Complex complex_normal();
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(*this); }

  /// A child generator for sub-task k; independent of this one's counter.
  Rng split(std::uint64_t k) const;

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
  std::normal_distribution<double> normal_;
};

RepPoint random_point(const Quiver& q, const DimensionVectors& dims, Rng& rng, double scale = 1.0);
LieElement random_lie(const std::vector<int>& v, LieClass cls, Rng& rng);
/// Unitary blocks from QR of Gaussian matrices, or Id + Gaussian/2 blocks with
/// condition number at most max_cond.
GaugeElement random_gauge(const std::vector<int>& v, Rng& rng, bool unitary, double max_cond = 1e3);

struct RunConfig {
  std::string quiver_file;
  std::uint64_t seed = 1;
  double tol = 1e-10;
  int max_len = 0;
  std::vector<double> R_grid{0.2, 0.1, 0.05, 0.025};
  std::vector<double> hbar_grid{0.1, 0.05, 0.025, 0.0125, 0.00625};
  std::string output_dir;

  /// Throws InvalidArgument unless tol > 0 and both grids are positive and
  /// strictly decreasing.
  void validate() const;
};

/// Draws a Gaussian point, moves it onto μ_C = ζ_C by minimum-norm
/// Gauss–Newton, then solves μ_R = ζ_R.  Sample `index` of a seed is
/// reproducible on its own.  Throws SamplingFailed after 10 restarts.
RepPoint sample_on_variety(const QuiverConfig& cfg, std::uint64_t seed, std::uint64_t index = 0, double tol = 1e-10);
RepPoint sample_on_variety(const RunConfig& run);

/// The fixed point of the config, or the C*-limit of a sample.  Needs ζ_C = 0.
RepPoint find_fixed_point(const QuiverConfig& cfg, std::uint64_t seed, double tol = 1e-10);

/// A slice element at p0: the config direction if present, else a seeded
/// combination of the attracting tangent basis with norm `size`.
RepPoint slice_element(const QuiverConfig& cfg, const RepPoint& p0, const WeightGrading& grading, Rng& rng,
                       double size = 0.5);

struct SuiteResult {
  std::string name;
  bool passed = true;
  bool skipped = false;
  double worst = 0.0;
  std::string detail;
};

struct VerifyReport {
  std::vector<SuiteResult> suites;
  bool passed() const;
  /// Name of the first failing suite, empty if none.
  std::string first_failure() const;
  json to_json(const RunConfig& run, const std::string& config_hash) const;
};

/// Runs the property suites of every module on the configured quiver.
VerifyReport verify_all(const QuiverConfig& cfg, const RunConfig& run);

/// FNV-1a of the file bytes, as 16 hex digits.
std::string file_hash(const std::string& path);

}  // namespace quivercl
