#ifndef QTRACK_EVALUATION_HPP
#define QTRACK_EVALUATION_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qtrack/estimator.hpp"
#include "qtrack/streams.hpp"

namespace qtrack {

/// One experiment: a configured estimator run against a configured stream,
/// scored over `samples` steps after warm-up.
struct ExperimentSpec {
  EstimatorConfig estimator;
  StreamConfig stream;
  QuantileTargets targets;
  std::string placement_label = "custom";  ///< echoed into reports
  std::uint64_t samples = 100000;
  /// Unscored steps after initialization. Defaults to max(1000, 2 * period)
  /// for synthetic streams and 0 for replay.
  std::optional<std::uint64_t> warmup;
  /// Explicit transformed-space starting estimates. When absent, the first
  /// kDefaultInitSamples stream samples are buffered for empirical
  /// initialization before warm-up begins.
  std::optional<std::vector<double>> initial_estimates;
};

struct EvalReport {
  Variant variant = Variant::Mdumiqe;
  double step = 0.0;
  Transform transform = Transform::Identity;
  StreamKind stream_kind = StreamKind::SinChi2;
  std::uint64_t period = 0;
  std::uint64_t seed = 0;
  std::string placement;
  std::size_t target_count = 0;
  std::uint64_t samples = 0;
  std::uint64_t warmup = 0;

  /// Per-target root mean squared error against ground truth, in the
  /// original sample space. Empty for replay streams.
  std::vector<double> per_quantile_rmse;
  std::optional<double> avg_rmse;
  /// Steps whose post-update estimate vector had any decreasing adjacent
  /// pair. Rate is count / evaluated_steps.
  std::uint64_t violation_count = 0;
  double violation_rate = 0.0;
  std::uint64_t evaluated_steps = 0;
};

/// Called once per scored step with the sample and the original-space
/// truth/estimate vectors. truth is empty for replay streams.
using TraceFn = std::function<void(std::uint64_t n, double x, std::span<const double> truth,
                                   std::span<const double> estimates)>;

std::uint64_t default_warmup(const StreamConfig& stream);

/// Transform policy when the caller does not pin one: multiplicative
/// variants on a stream with negative support need the exp transform,
/// everything else runs on identity.
Transform default_transform(Variant variant, StreamKind kind);

EvalReport run_experiment(const ExperimentSpec& spec, const TraceFn& trace = {});

/// Fraction of steps on which the independent multiplicative trackers
/// produced a disordered estimate vector, for the benchmark drift stream.
double violation_rate_check(double lambda, const QuantileTargets& targets,
                            const StreamConfig& stream, std::uint64_t samples);

/// FNV-1a over the bytes of a string; used to derive per-cell seeds.
std::uint64_t fnv1a(std::string_view bytes);

/// Cartesian sweep over variants x step sizes x streams x target sets.
struct SweepGrid {
  struct VariantSteps {
    Variant variant = Variant::Mdumiqe;
    std::vector<double> steps;
  };
  struct TargetSet {
    Placement placement = Placement::Median;
    int count = 9;
  };

  std::vector<VariantSteps> variants;
  std::vector<StreamConfig> streams;
  std::vector<TargetSet> target_sets;
  std::uint64_t samples = 100000;
  std::optional<std::uint64_t> warmup;
  std::uint64_t base_seed = 1;
  std::optional<Transform> transform;  ///< overrides the default policy

  void validate() const;

  /// Expands to one spec per cell. Each cell's stream seed is
  /// base_seed XOR fnv1a(cell key), so results are independent of
  /// evaluation order and stable when the grid is extended.
  std::vector<ExperimentSpec> expand() const;
};

struct SweepCell {
  ExperimentSpec spec;
  std::optional<EvalReport> report;
  std::string error;  ///< non-empty when the cell failed
};

using ProgressFn = std::function<void(std::size_t done, std::size_t total)>;

/// Runs every cell, `jobs` at a time (0 = hardware concurrency). A failing
/// cell records its error and does not stop the others.
std::vector<SweepCell> sweep(const SweepGrid& grid, unsigned jobs = 0, const ProgressFn& progress = {});

/// Long-run behavior on a static stream for a list of step sizes.
struct ConvergenceRow {
  double beta = 0.0;
  std::uint64_t samples = 0;
  std::vector<double> truth;
  std::vector<double> time_avg;  ///< original-space mean over the final half
  std::vector<double> bias;      ///< time_avg - truth
  std::vector<double> std_error; ///< batch-means standard error of time_avg
};

std::vector<ConvergenceRow> static_convergence(const QuantileTargets& targets,
                                               const DistributionSpec& dist,
                                               const std::vector<double>& betas,
                                               std::uint64_t samples_per_run, std::uint64_t seed);

/// %.12g rendering used for every floating point field in CSV output.
std::string format_number(double value);

// Fixed CSV schema: per-quantile columns are padded to nine so the header
// is identical for 3- and 9-target runs. Sweep rows append an error column.
std::string report_csv_header();
std::string report_csv_row(const EvalReport& report);
std::string sweep_csv_header();
std::string sweep_csv_row(const SweepCell& cell);

}  // namespace qtrack

#endif
