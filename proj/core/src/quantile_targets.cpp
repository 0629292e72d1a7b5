#include "qtrack/quantile_targets.hpp"

#include <cmath>
#include <stdexcept>

namespace qtrack {

QuantileTargets::QuantileTargets(std::vector<double> probs) : probs_(std::move(probs)) {
  if (probs_.empty()) {
    throw std::invalid_argument("quantile targets: need at least one probability");
  }
  double prev = 0.0;
  for (double q : probs_) {
    if (!std::isfinite(q) || q <= 0.0 || q >= 1.0) {
      throw std::invalid_argument("quantile targets: probabilities must lie in the open interval (0, 1)");
    }
    if (q <= prev) {
      throw std::invalid_argument("quantile targets: probabilities must be strictly increasing");
    }
    prev = q;
  }
}

std::size_t nearest_rank_index(double q, std::size_t m) {
  const double raw = std::ceil(q * static_cast<double>(m) - 1e-9);
  if (raw <= 1.0) return 0;
  const auto rank = static_cast<std::size_t>(raw);
  return (rank >= m ? m : rank) - 1;
}

}  // namespace qtrack
