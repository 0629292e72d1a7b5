#ifndef QTRACK_ESTIMATOR_HPP
#define QTRACK_ESTIMATOR_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qtrack/quantile_targets.hpp"

namespace qtrack {

enum class Variant {
  DumiqeMult,  ///< independent multiplicative trackers, one per target
  DumiqeAdd,   ///< independent additive trackers
  Mdumiqe,     ///< jointly coupled trackers with an order-preserving step bound
};

enum class Transform {
  Identity,
  Exp,  ///< track quantiles of exp(x); makes multiplicative updates sign-safe
};

const char* to_string(Variant v);
const char* to_string(Transform t);
Variant variant_from_string(const std::string& name);
Transform transform_from_string(const std::string& name);

/// Samples with |x| beyond this are rejected by the exp transform before
/// exp() can overflow or flush to zero.
inline constexpr double kExpTransformRange = 700.0;

/// Number of buffered samples used for empirical initialization by default.
inline constexpr std::size_t kDefaultInitSamples = 100;

double apply_transform(double x, Transform t);
double invert_transform(double y, Transform t);

struct EstimatorConfig {
  Variant variant = Variant::Mdumiqe;
  /// Step size: the per-tracker rate for the dumiqe variants, or the
  /// shared rate in [0, 1) for mdumiqe.
  double step = 0.5;
  Transform transform = Transform::Identity;
  /// Positive floor applied to every mdumiqe estimate after each update.
  double q_min = 1e-12;
  /// Optional relative gap used to re-separate neighbors that collapsed
  /// onto the floor. 0 disables re-separation.
  double gap_min = 0.0;

  /// Throws std::invalid_argument when any field is out of range for the
  /// chosen variant or incompatible with the target set.
  void validate(const QuantileTargets& targets) const;
};

// Relative step bounds for the coupled variant. All of them are evaluated
// on a snapshot of the estimates taken before any component moves, and all
// are invariant under rescaling the estimate vector.

/// Bound contributed by one adjacent pair:
///   (upper - lower) / ((1 - q_upper) * upper + q_lower * lower).
/// Requires lower <= upper and positive estimates; a tied pair yields 0.
double pair_step_bound(double lower, double upper, double q_lower, double q_upper);

/// Interior bound: min of the pair bounds against both neighbors.
double step_bound_interior(std::span<const double> estimates, std::span<const double> probs, std::size_t k);

/// Edge bound for the lowest or highest target: single pair bound against
/// the only neighbor.
double step_bound_edge(std::span<const double> estimates, std::span<const double> probs, std::size_t k);

/// Bank of K per-quantile estimates driven by one sample stream.
///
/// Estimates live in transformed space; observe() takes samples in the
/// original space and quantiles() maps estimates back. For mdumiqe the
/// estimate vector is non-decreasing after every update and each entry
/// stays at or above q_min.
class QuantileBank {
 public:
  /// Takes initial estimates in transformed space. For multiplicative
  /// variants they must be positive; for mdumiqe additionally strictly
  /// increasing and at or above q_min.
  QuantileBank(QuantileTargets targets, EstimatorConfig config, std::vector<double> initial_estimates);

  /// Initializes from the empirical nearest-rank quantiles of a warm-up
  /// buffer of original-space samples. Tied ranks are nudged apart by a
  /// relative 1e-9 cascade so no pair starts frozen.
  static QuantileBank from_samples(QuantileTargets targets, EstimatorConfig config,
                                   std::span<const double> warmup);

  /// Feeds one original-space sample through the configured update rule.
  /// Throws std::domain_error for samples outside the transform domain.
  void observe(double x);

  /// Current estimates in transformed space, ordered by target.
  const std::vector<double>& estimates() const { return estimates_; }

  /// Current estimates mapped back to the original sample space.
  std::vector<double> quantiles() const;
  double quantile(std::size_t k) const;

  const QuantileTargets& targets() const { return targets_; }
  const EstimatorConfig& config() const { return config_; }
  std::uint64_t observed_count() const { return count_; }

 private:
  void step_independent_mult(double x);
  void step_independent_add(double x);
  void step_coupled(double x);

  QuantileTargets targets_;
  EstimatorConfig config_;
  std::vector<double> estimates_;
  std::vector<double> bounds_;  // scratch, pre-update snapshot bounds
  std::uint64_t count_ = 0;
};

}  // namespace qtrack

#endif
