#ifndef QTRACK_DISTRIBUTIONS_HPP
#define QTRACK_DISTRIBUTIONS_HPP

namespace qtrack {

class Rng;

double normal_pdf(double z);
double normal_cdf(double z);

/// Inverse standard normal CDF for p in (0, 1). Rational approximation
/// polished by one Newton step on normal_cdf, good to ~1e-15 except in the
/// extreme tails.
double normal_inv_cdf(double p);

/// Regularized lower incomplete gamma P(s, x) for s > 0, x >= 0.
/// Series expansion below x = s + 1, continued fraction above.
double reg_lower_gamma(double s, double x);

double chi2_cdf(double x, double dof);

/// Inverse chi-squared CDF: bisection on chi2_cdf from a Wilson-Hilferty
/// starting bracket, refined until |chi2_cdf(result) - p| <= 1e-12 or the
/// bracket is exhausted.
double chi2_inv_cdf(double p, double dof);

/// One static sampling distribution, used for ground truth and for drawing
/// i.i.d. samples in convergence studies.
struct DistributionSpec {
  enum class Family { Normal, Chi2 };

  Family family = Family::Chi2;
  double mean = 0.0;  // normal only
  double sd = 1.0;    // normal only, must be positive
  double dof = 6.0;   // chi2 only, must be positive

  static DistributionSpec make_normal(double mean, double sd);
  static DistributionSpec make_chi2(double dof);

  void validate() const;
  double cdf(double x) const;
  double inv_cdf(double p) const;
  double sample(Rng& rng) const;
};

}  // namespace qtrack

#endif
