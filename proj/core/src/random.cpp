#include "qtrack/random.hpp"

#include <cmath>
#include <stdexcept>

namespace qtrack {

double Rng::uniform() {
  // Top 53 bits, shifted into (0, 1); never returns an exact 0 or 1, which
  // keeps log() and pow() calls downstream finite.
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double m = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * m;
  has_spare_ = true;
  return u * m;
}

double Rng::normal(double mean, double sd) {
  return mean + sd * normal();
}

double Rng::gamma(double shape) {
  if (!(shape > 0.0)) {
    throw std::domain_error("gamma shape must be positive");
  }
  if (shape < 1.0) {
    // Boost a shape+1 draw down; uniform() is never zero so the power is safe.
    const double boost = std::pow(uniform(), 1.0 / shape);
    return gamma(shape + 1.0) * boost;
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double z, v;
    do {
      z = normal();
      v = 1.0 + c * z;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform();
    if (u < 1.0 - 0.0331 * z * z * z * z) return d * v;
    if (std::log(u) < 0.5 * z * z + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double Rng::chi_squared(double dof) {
  if (!(dof > 0.0)) {
    throw std::domain_error("chi-squared dof must be positive");
  }
  return 2.0 * gamma(0.5 * dof);
}

}  // namespace qtrack
