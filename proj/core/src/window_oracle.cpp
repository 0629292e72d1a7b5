#include "qtrack/window_oracle.hpp"

#include <cmath>
#include <stdexcept>

#include "qtrack/quantile_targets.hpp"

namespace qtrack {

WindowOracle::WindowOracle(std::size_t capacity) : capacity_(capacity) {
  if (capacity_ == 0) throw std::invalid_argument("window capacity must be at least 1");
}

void WindowOracle::update(double x) {
  if (!std::isfinite(x)) throw std::domain_error("window oracle samples must be finite");
  if (fifo_.size() == capacity_) {
    sorted_.erase(sorted_.find(fifo_.front()));
    fifo_.pop_front();
  }
  fifo_.push_back(x);
  sorted_.insert(x);
}

double WindowOracle::quantile(double q) const {
  if (!(q > 0.0 && q <= 1.0)) throw std::invalid_argument("window quantile needs q in (0, 1]");
  if (fifo_.empty()) throw std::logic_error("window quantile on an empty window");
  std::size_t idx = nearest_rank_index(q, fifo_.size());
  auto it = sorted_.begin();
  std::advance(it, idx);
  return *it;
}

}  // namespace qtrack
