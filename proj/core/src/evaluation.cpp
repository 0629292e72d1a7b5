#include "qtrack/evaluation.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace qtrack {

namespace {

// Compensated accumulator for long running sums.
struct KahanSum {
  double sum = 0.0;
  double comp = 0.0;
  void add(double v) {
    const double y = v - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
};

bool has_order_violation(std::span<const double> est) {
  for (std::size_t k = 1; k < est.size(); ++k) {
    if (est[k] < est[k - 1]) return true;
  }
  return false;
}

EvalReport echo_report(const ExperimentSpec& spec) {
  EvalReport report;
  report.variant = spec.estimator.variant;
  report.step = spec.estimator.step;
  report.transform = spec.estimator.transform;
  report.stream_kind = spec.stream.kind;
  report.period = spec.stream.kind == StreamKind::Replay ? 0 : spec.stream.period;
  report.seed = spec.stream.seed;
  report.placement = spec.placement_label;
  report.target_count = spec.targets.size();
  report.samples = spec.samples;
  report.warmup = spec.warmup.value_or(default_warmup(spec.stream));
  return report;
}

EvalReport run_synthetic(const ExperimentSpec& spec, const TraceFn& trace) {
  SyntheticStream stream(spec.stream, spec.targets);

  QuantileBank bank = [&] {
    if (spec.initial_estimates) {
      return QuantileBank(spec.targets, spec.estimator, *spec.initial_estimates);
    }
    std::vector<double> buf;
    buf.reserve(kDefaultInitSamples);
    for (std::size_t i = 0; i < kDefaultInitSamples; ++i) buf.push_back(stream.next().x);
    return QuantileBank::from_samples(spec.targets, spec.estimator, buf);
  }();

  EvalReport report = echo_report(spec);
  for (std::uint64_t i = 0; i < report.warmup; ++i) bank.observe(stream.next().x);

  const std::size_t k_count = spec.targets.size();
  std::vector<KahanSum> sumsq(k_count);
  std::vector<double> est_orig(k_count);
  std::uint64_t violations = 0;

  for (std::uint64_t i = 0; i < spec.samples; ++i) {
    const StreamStep step = stream.next();
    bank.observe(step.x);
    const auto& est = bank.estimates();
    if (has_order_violation(est)) ++violations;
    for (std::size_t k = 0; k < k_count; ++k) {
      est_orig[k] = invert_transform(est[k], spec.estimator.transform);
      const double err = step.truth[k] - est_orig[k];
      sumsq[k].add(err * err);
    }
    if (trace) trace(step.n, step.x, step.truth, est_orig);
  }

  report.evaluated_steps = spec.samples;
  report.violation_count = violations;
  report.violation_rate = spec.samples > 0 ? static_cast<double>(violations) / static_cast<double>(spec.samples) : 0.0;
  if (spec.samples > 0) {
    report.per_quantile_rmse.resize(k_count);
    double total = 0.0;
    for (std::size_t k = 0; k < k_count; ++k) {
      report.per_quantile_rmse[k] = std::sqrt(sumsq[k].sum / static_cast<double>(spec.samples));
      total += report.per_quantile_rmse[k];
    }
    report.avg_rmse = total / static_cast<double>(k_count);
  }
  return report;
}

EvalReport run_replay(const ExperimentSpec& spec, const TraceFn& trace) {
  ReplayStream replay(spec.stream.path, spec.stream.column);

  QuantileBank bank = [&] {
    if (spec.initial_estimates) {
      return QuantileBank(spec.targets, spec.estimator, *spec.initial_estimates);
    }
    const auto first = replay.next();
    if (!first) throw std::runtime_error("replay file has no samples: " + spec.stream.path);
    const double sample = *first;
    return QuantileBank::from_samples(spec.targets, spec.estimator, std::span<const double>(&sample, 1));
  }();

  EvalReport report = echo_report(spec);
  const std::size_t k_count = spec.targets.size();
  std::vector<double> est_orig(k_count);
  std::uint64_t warmed = 0;
  std::uint64_t scored = 0;
  std::uint64_t violations = 0;

  while (scored < spec.samples) {
    const auto x = replay.next();
    if (!x) break;
    bank.observe(*x);
    if (warmed < report.warmup) {
      ++warmed;
      continue;
    }
    if (has_order_violation(bank.estimates())) ++violations;
    ++scored;
    if (trace) {
      for (std::size_t k = 0; k < k_count; ++k) {
        est_orig[k] = invert_transform(bank.estimates()[k], spec.estimator.transform);
      }
      trace(bank.observed_count(), *x, {}, est_orig);
    }
  }

  report.evaluated_steps = scored;
  report.violation_count = violations;
  report.violation_rate = scored > 0 ? static_cast<double>(violations) / static_cast<double>(scored) : 0.0;
  return report;
}

std::string format_u64(std::uint64_t v) { return std::to_string(v); }

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char ch : field) {
    if (ch == '"') out += "\"\"";
    else out += ch;
  }
  out += "\"";
  return out;
}

constexpr std::size_t kCsvQuantileColumns = 9;

}  // namespace

std::uint64_t default_warmup(const StreamConfig& stream) {
  if (stream.kind == StreamKind::Replay) return 0;
  return std::max<std::uint64_t>(1000, 2 * stream.period);
}

Transform default_transform(Variant variant, StreamKind kind) {
  if (kind == StreamKind::SinNormal && variant != Variant::DumiqeAdd) return Transform::Exp;
  return Transform::Identity;
}

EvalReport run_experiment(const ExperimentSpec& spec, const TraceFn& trace) {
  spec.stream.validate();
  spec.estimator.validate(spec.targets);
  if (spec.initial_estimates && spec.initial_estimates->size() != spec.targets.size()) {
    throw std::invalid_argument("initial estimates must match the number of targets");
  }
  if (spec.stream.kind == StreamKind::Replay) return run_replay(spec, trace);
  return run_synthetic(spec, trace);
}

double violation_rate_check(double lambda, const QuantileTargets& targets,
                            const StreamConfig& stream, std::uint64_t samples) {
  ExperimentSpec spec{
      .estimator = {.variant = Variant::DumiqeMult,
                    .step = lambda,
                    .transform = default_transform(Variant::DumiqeMult, stream.kind)},
      .stream = stream,
      .targets = targets,
      .samples = samples,
  };
  return run_experiment(spec).violation_rate;
}

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

void SweepGrid::validate() const {
  if (variants.empty()) throw std::invalid_argument("sweep grid needs at least one variant");
  for (const auto& v : variants) {
    if (v.steps.empty()) throw std::invalid_argument("sweep grid variant has an empty step list");
  }
  if (streams.empty()) throw std::invalid_argument("sweep grid needs at least one stream");
  for (const auto& s : streams) {
    if (s.kind == StreamKind::Replay) {
      throw std::invalid_argument("sweep grids take synthetic streams only");
    }
    s.validate();
  }
  if (target_sets.empty()) throw std::invalid_argument("sweep grid needs at least one target set");
  for (const auto& t : target_sets) {
    if (t.count != 3 && t.count != 9) throw std::invalid_argument("target count must be 3 or 9");
  }
}

std::vector<ExperimentSpec> SweepGrid::expand() const {
  validate();
  std::vector<ExperimentSpec> cells;
  char buf[128];
  for (const auto& vs : variants) {
    for (double step : vs.steps) {
      for (const auto& stream : streams) {
        const auto family = stream.kind == StreamKind::SinNormal ? DistributionSpec::Family::Normal
                                                                 : DistributionSpec::Family::Chi2;
        for (const auto& ts : target_sets) {
          std::snprintf(buf, sizeof buf, "%.17g|%.17g|%.17g|%.17g", step, stream.amplitude,
                        stream.baseline, stream.sd);
          std::string key = std::string(to_string(vs.variant)) + "|" + buf + "|" + to_string(stream.kind) +
                            "|" + std::to_string(stream.period) + "|" + to_string(ts.placement) + "|" +
                            std::to_string(ts.count) + "|" + std::to_string(samples);

          StreamConfig cell_stream = stream;
          cell_stream.seed = base_seed ^ fnv1a(key);

          ExperimentSpec spec{
              .estimator = {.variant = vs.variant,
                            .step = step,
                            .transform = transform ? *transform : default_transform(vs.variant, stream.kind)},
              .stream = std::move(cell_stream),
              .targets = build_targets(family, ts.placement, ts.count),
              .placement_label = to_string(ts.placement),
              .samples = samples,
              .warmup = warmup,
          };
          cells.push_back(std::move(spec));
        }
      }
    }
  }
  return cells;
}

std::vector<SweepCell> sweep(const SweepGrid& grid, unsigned jobs, const ProgressFn& progress) {
  std::vector<ExperimentSpec> specs = grid.expand();
  std::vector<SweepCell> cells;
  cells.reserve(specs.size());
  for (auto& spec : specs) cells.push_back(SweepCell{std::move(spec), std::nullopt, {}});

  unsigned workers = jobs != 0 ? jobs : std::thread::hardware_concurrency();
  if (workers == 0) workers = 1;
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, cells.size()));

  std::atomic<std::size_t> next{0};
  std::size_t done = 0;
  std::mutex progress_mutex;

  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cells.size()) return;
      try {
        cells[i].report = run_experiment(cells[i].spec);
      } catch (const std::exception& e) {
        cells[i].error = e.what();
      }
      if (progress) {
        // Counter increment and callback share the lock so progress lines
        // come out strictly ordered regardless of worker scheduling.
        const std::lock_guard<std::mutex> lock(progress_mutex);
        progress(++done, cells.size());
      }
    }
  };

  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  return cells;
}

std::vector<ConvergenceRow> static_convergence(const QuantileTargets& targets,
                                               const DistributionSpec& dist,
                                               const std::vector<double>& betas,
                                               std::uint64_t samples_per_run, std::uint64_t seed) {
  dist.validate();
  if (betas.empty()) throw std::invalid_argument("convergence study needs at least one step size");
  if (samples_per_run < 100) throw std::invalid_argument("convergence study needs at least 100 samples per run");

  const std::size_t k_count = targets.size();
  constexpr std::size_t kBatches = 10;
  std::vector<ConvergenceRow> rows;
  rows.reserve(betas.size());

  for (std::size_t bi = 0; bi < betas.size(); ++bi) {
    const double beta = betas[bi];
    EstimatorConfig cfg;
    cfg.variant = Variant::Mdumiqe;
    cfg.step = beta;
    cfg.transform = dist.family == DistributionSpec::Family::Normal ? Transform::Exp : Transform::Identity;
    cfg.validate(targets);

    char key[64];
    std::snprintf(key, sizeof key, "converge|%.17g|%zu", beta, bi);
    Rng rng(seed ^ fnv1a(key));

    std::vector<double> buf(kDefaultInitSamples);
    for (double& x : buf) x = dist.sample(rng);
    QuantileBank bank = QuantileBank::from_samples(targets, cfg, buf);

    const std::uint64_t half_start = samples_per_run / 2;
    const std::uint64_t half_len = samples_per_run - half_start;
    std::vector<KahanSum> totals(k_count);
    std::vector<std::vector<double>> batch_sums(kBatches, std::vector<double>(k_count, 0.0));
    std::vector<std::uint64_t> batch_len(kBatches, 0);

    for (std::uint64_t i = 0; i < samples_per_run; ++i) {
      bank.observe(dist.sample(rng));
      if (i < half_start) continue;
      const std::size_t batch =
          static_cast<std::size_t>((i - half_start) * kBatches / half_len);
      ++batch_len[batch];
      const auto& est = bank.estimates();
      for (std::size_t k = 0; k < k_count; ++k) {
        const double v = invert_transform(est[k], cfg.transform);
        totals[k].add(v);
        batch_sums[batch][k] += v;
      }
    }

    ConvergenceRow row;
    row.beta = beta;
    row.samples = samples_per_run;
    row.truth.resize(k_count);
    row.time_avg.resize(k_count);
    row.bias.resize(k_count);
    row.std_error.resize(k_count);
    for (std::size_t k = 0; k < k_count; ++k) {
      row.truth[k] = dist.inv_cdf(targets.prob(k));
      row.time_avg[k] = totals[k].sum / static_cast<double>(half_len);
      row.bias[k] = row.time_avg[k] - row.truth[k];

      double mean_of_means = 0.0;
      double batch_means[kBatches];
      for (std::size_t j = 0; j < kBatches; ++j) {
        batch_means[j] = batch_sums[j][k] / static_cast<double>(batch_len[j]);
        mean_of_means += batch_means[j];
      }
      mean_of_means /= static_cast<double>(kBatches);
      double var = 0.0;
      for (std::size_t j = 0; j < kBatches; ++j) {
        const double d = batch_means[j] - mean_of_means;
        var += d * d;
      }
      var /= static_cast<double>(kBatches - 1);
      row.std_error[k] = std::sqrt(var / static_cast<double>(kBatches));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string format_number(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

std::string report_csv_header() {
  std::string header = "variant,step,transform,stream_kind,T,placement,K,N,seed,avg_rmse";
  for (std::size_t i = 1; i <= kCsvQuantileColumns; ++i) header += ",rmse_q" + std::to_string(i);
  header += ",violation_count,violation_rate";
  return header;
}

std::string report_csv_row(const EvalReport& report) {
  std::string row;
  row += to_string(report.variant);
  row += ',';
  row += format_number(report.step);
  row += ',';
  row += to_string(report.transform);
  row += ',';
  row += to_string(report.stream_kind);
  row += ',';
  row += report.stream_kind == StreamKind::Replay ? std::string() : format_u64(report.period);
  row += ',';
  row += csv_escape(report.placement);
  row += ',';
  row += std::to_string(report.target_count);
  row += ',';
  row += format_u64(report.evaluated_steps);
  row += ',';
  row += format_u64(report.seed);
  row += ',';
  row += report.avg_rmse ? format_number(*report.avg_rmse) : std::string();
  for (std::size_t i = 0; i < kCsvQuantileColumns; ++i) {
    row += ',';
    if (i < report.per_quantile_rmse.size()) row += format_number(report.per_quantile_rmse[i]);
  }
  row += ',';
  row += format_u64(report.violation_count);
  row += ',';
  row += format_number(report.violation_rate);
  return row;
}

std::string sweep_csv_header() { return report_csv_header() + ",error"; }

std::string sweep_csv_row(const SweepCell& cell) {
  const EvalReport report = cell.report ? *cell.report : echo_report(cell.spec);
  return report_csv_row(report) + "," + csv_escape(cell.error);
}

}  // namespace qtrack
