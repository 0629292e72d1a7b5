#ifndef QTRACK_QUANTILE_TARGETS_HPP
#define QTRACK_QUANTILE_TARGETS_HPP

#include <cstddef>
#include <vector>

namespace qtrack {

/// Ordered set of quantile probabilities tracked by one estimator bank.
/// Probabilities must be finite, strictly increasing, and inside (0, 1).
class QuantileTargets {
 public:
  explicit QuantileTargets(std::vector<double> probs);

  const std::vector<double>& probs() const { return probs_; }
  double prob(std::size_t k) const { return probs_[k]; }
  std::size_t size() const { return probs_.size(); }

 private:
  std::vector<double> probs_;
};

/// Zero-based nearest-rank index for probability q over m sorted samples,
/// i.e. ceil(q * m) - 1 clamped to [0, m - 1]. The small negative shift
/// absorbs cases like 0.55 * 20 landing at 11.000000000000002.
std::size_t nearest_rank_index(double q, std::size_t m);

}  // namespace qtrack

#endif
