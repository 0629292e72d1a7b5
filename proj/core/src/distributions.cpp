#include "qtrack/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qtrack/random.hpp"

namespace qtrack {

double normal_pdf(double z) {
  constexpr double inv_sqrt_2pi = 0.3989422804014326779;
  return inv_sqrt_2pi * std::exp(-0.5 * z * z);
}

double normal_cdf(double z) {
  return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

double normal_inv_cdf(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::domain_error("probability must lie in the open interval (0, 1)");
  }
  // Acklam's rational approximation in three regions.
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  double x;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }

  // One Newton correction pushes the approximation to full double accuracy
  // everywhere the density is representable.
  const double density = normal_pdf(x);
  if (density > 0.0) x -= (normal_cdf(x) - p) / density;
  return x;
}

double reg_lower_gamma(double s, double x) {
  if (!(s > 0.0)) {
    throw std::domain_error("reg_lower_gamma: shape must be positive");
  }
  if (!(x >= 0.0)) {
    throw std::domain_error("reg_lower_gamma: x must be non-negative");
  }
  if (x == 0.0) return 0.0;

  const double log_prefix = -x + s * std::log(x) - std::lgamma(s);

  if (x < s + 1.0) {
    // Lower series: sum_{i>=0} x^i / (s (s+1) ... (s+i)).
    double term = 1.0 / s;
    double sum = term;
    double denom = s;
    for (int i = 0; i < 500; ++i) {
      denom += 1.0;
      term *= x / denom;
      sum += term;
      if (term < sum * 1e-16) break;
    }
    return std::clamp(sum * std::exp(log_prefix), 0.0, 1.0);
  }

  // Upper tail via the continued fraction (modified Lentz).
  constexpr double tiny = 1e-300;
  double b = x + 1.0 - s;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 500; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - s);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return std::clamp(1.0 - std::exp(log_prefix) * h, 0.0, 1.0);
}

double chi2_cdf(double x, double dof) {
  if (!(dof > 0.0)) {
    throw std::domain_error("chi-squared dof must be positive");
  }
  if (x <= 0.0) return 0.0;
  return reg_lower_gamma(0.5 * dof, 0.5 * x);
}

double chi2_inv_cdf(double p, double dof) {
  if (!(dof > 0.0)) {
    throw std::domain_error("chi-squared dof must be positive");
  }
  if (!(p > 0.0 && p < 1.0)) {
    throw std::domain_error("probability must lie in the open interval (0, 1)");
  }

  // Wilson-Hilferty approximation seeds the bracket.
  const double z = normal_inv_cdf(p);
  const double t = 1.0 - 2.0 / (9.0 * dof) + z * std::sqrt(2.0 / (9.0 * dof));
  double guess = dof * t * t * t;
  if (!std::isfinite(guess) || guess <= 0.0) guess = dof;

  double lo = 0.0;
  double hi = guess;
  while (chi2_cdf(hi, dof) < p) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e15) break;
  }

  // Small dof puts quantiles many orders of magnitude below 1 (the density
  // blows up at the origin), so the interval is only done when bisection can
  // no longer split it at double precision, never at a fixed absolute width.
  double mid = 0.5 * (lo + hi);
  for (int i = 0; i < 300; ++i) {
    mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    const double f = chi2_cdf(mid, dof);
    if (std::abs(f - p) <= 1e-12) break;
    if (f < p) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return mid;
}

DistributionSpec DistributionSpec::make_normal(double mean, double sd) {
  DistributionSpec spec;
  spec.family = Family::Normal;
  spec.mean = mean;
  spec.sd = sd;
  spec.validate();
  return spec;
}

DistributionSpec DistributionSpec::make_chi2(double dof) {
  DistributionSpec spec;
  spec.family = Family::Chi2;
  spec.dof = dof;
  spec.validate();
  return spec;
}

void DistributionSpec::validate() const {
  if (family == Family::Normal) {
    if (!std::isfinite(mean)) throw std::invalid_argument("normal mean must be finite");
    if (!std::isfinite(sd) || sd <= 0.0) throw std::invalid_argument("normal sd must be positive");
  } else {
    if (!std::isfinite(dof) || dof <= 0.0) throw std::invalid_argument("chi-squared dof must be positive");
  }
}

double DistributionSpec::cdf(double x) const {
  if (family == Family::Normal) return normal_cdf((x - mean) / sd);
  return chi2_cdf(x, dof);
}

double DistributionSpec::inv_cdf(double p) const {
  if (family == Family::Normal) return mean + sd * normal_inv_cdf(p);
  return chi2_inv_cdf(p, dof);
}

double DistributionSpec::sample(Rng& rng) const {
  if (family == Family::Normal) return rng.normal(mean, sd);
  return rng.chi_squared(dof);
}

}  // namespace qtrack
