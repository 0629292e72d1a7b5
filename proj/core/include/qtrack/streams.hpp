#ifndef QTRACK_STREAMS_HPP
#define QTRACK_STREAMS_HPP

#include <cstdint>
#include <fstream>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qtrack/distributions.hpp"
#include "qtrack/quantile_targets.hpp"
#include "qtrack/random.hpp"

namespace qtrack {

enum class StreamKind {
  SinNormal,  ///< normal with a sinusoidally drifting mean
  SinChi2,    ///< chi-squared with sinusoidally drifting degrees of freedom
  Replay,     ///< samples read from a file, no analytic ground truth
};

const char* to_string(StreamKind k);
StreamKind stream_kind_from_string(const std::string& name);

enum class Placement { Median, Tail };
const char* to_string(Placement p);
Placement placement_from_string(const std::string& name);

/// Rare-event contamination layered on top of a synthetic stream: with the
/// given per-step probability a sample is inflated (scaled for chi-squared,
/// shifted by scale standard deviations for normal). Ground truth ignores
/// the contamination.
struct OutlierConfig {
  double rate = 0.0;   // in [0, 1)
  double scale = 10.0; // > 0
};

struct StreamConfig {
  StreamKind kind = StreamKind::SinChi2;
  double amplitude = 2.0;      ///< drift amplitude (a)
  double baseline = 6.0;       ///< dof offset for sin-chi2 (b), must exceed |amplitude|
  std::uint64_t period = 800;  ///< drift period in steps (T)
  double sd = 1.0;             ///< sin-normal only
  std::uint64_t seed = 1;
  std::optional<OutlierConfig> outlier;
  std::string path;            ///< replay only
  int column = 0;              ///< replay only, zero-based

  void validate() const;

  /// Drifting mean a * sin(2 pi n / T); exactly periodic because the phase
  /// is computed from n mod T.
  double mean_at(std::uint64_t n) const;

  /// Drifting degrees of freedom a * sin(2 pi n / T) + b.
  double dof_at(std::uint64_t n) const;
};

/// Analytic quantiles of the synthetic stream at step n for every target.
/// Throws std::invalid_argument for replay streams.
std::vector<double> true_quantiles(const StreamConfig& config, std::uint64_t n,
                                   const QuantileTargets& targets);

/// The benchmark target sets: `count` evenly spaced probabilities placed
/// around the middle or in the upper tail of the named family. count must
/// be 3 or 9; the 3-point set takes the ends and midpoint of the 9-point one.
QuantileTargets build_targets(DistributionSpec::Family family, Placement placement, int count);

struct StreamStep {
  std::uint64_t n = 0;
  double x = 0.0;
  /// Ground truth per target; points into stream-owned storage that stays
  /// valid until the next call. Empty when truth is unavailable.
  std::span<const double> truth;
};

class SyntheticStream {
 public:
  SyntheticStream(StreamConfig config, QuantileTargets targets);

  /// Draws the next sample (step counter starts at 1) plus its ground truth.
  StreamStep next();

  const StreamConfig& config() const { return config_; }
  const QuantileTargets& targets() const { return targets_; }

 private:
  StreamConfig config_;
  QuantileTargets targets_;
  Rng rng_;
  std::uint64_t n_ = 0;
  std::vector<double> z_scores_;                 // sin-normal: cached inverse normal CDFs
  std::vector<std::vector<double>> truth_cache_; // sin-chi2: per-phase truth rows
  std::vector<double> truth_buf_;
};

/// Sequential reader for replay files: one sample per row, comma- or
/// whitespace-separated columns. A non-numeric first row is treated as a
/// header and skipped; any later parse problem throws std::runtime_error
/// naming the file and line.
class ReplayStream {
 public:
  ReplayStream(std::string path, int column);

  /// Next sample, or nullopt at end of file. Blank rows are skipped.
  std::optional<double> next();

  std::uint64_t line() const { return line_; }

 private:
  std::string path_;
  int column_;
  std::ifstream in_;
  std::uint64_t line_ = 0;
  bool saw_data_ = false;
};

}  // namespace qtrack

#endif
