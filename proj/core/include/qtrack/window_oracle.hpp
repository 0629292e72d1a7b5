#ifndef QTRACK_WINDOW_ORACLE_HPP
#define QTRACK_WINDOW_ORACLE_HPP

#include <cstddef>
#include <deque>
#include <set>

namespace qtrack {

/// Exact sliding-window quantile reference. Keeps the last `capacity`
/// samples in a sorted multiset alongside an arrival-order queue, so
/// updates cost O(log capacity). Too slow to track a production stream,
/// exact enough to check the incremental estimators against.
class WindowOracle {
 public:
  explicit WindowOracle(std::size_t capacity);

  void update(double x);

  /// Nearest-rank quantile of the current window, q in (0, 1].
  double quantile(double q) const;

  std::size_t size() const { return fifo_.size(); }
  std::size_t capacity() const { return capacity_; }

 private:
  std::size_t capacity_;
  std::multiset<double> sorted_;
  std::deque<double> fifo_;
};

}  // namespace qtrack

#endif
