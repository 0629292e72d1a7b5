#ifndef QTRACK_RANDOM_HPP
#define QTRACK_RANDOM_HPP

#include <cstdint>
#include <random>

namespace qtrack {

/// Seeded random source with samplers implemented in-library so a seed
/// reproduces the same stream on every platform. std::mt19937_64 output is
/// pinned by the standard; the std:: distributions on top of it are not,
/// so uniform, normal, gamma, and chi-squared draws are hand-rolled here
/// (polar method for normals, Marsaglia-Tsang rejection for gamma).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform();

  double normal();
  double normal(double mean, double sd);

  /// Gamma with the given shape and unit scale. shape must be positive.
  double gamma(double shape);

  /// Chi-squared with dof degrees of freedom (dof > 0, not necessarily integral).
  double chi_squared(double dof);

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace qtrack

#endif
