// Command line front end: simulate | sweep | replay | converge.
//
// Exit codes: 0 on success, 2 for flag/config validation problems, 1 for
// runtime failures (I/O, parse errors, domain violations mid-stream).

#include <charconv>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "qtrack/estimator.hpp"
#include "qtrack/evaluation.hpp"
#include "qtrack/streams.hpp"
#include "qtrack/window_oracle.hpp"

namespace {

using nlohmann::ordered_json;
using namespace qtrack;

std::vector<double> parse_double_list(const std::string& text, const std::string& flag) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    const std::string tok = text.substr(pos, comma - pos);
    if (!tok.empty()) {
      double value = 0.0;
      const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
      if (ec != std::errc() || ptr != tok.data() + tok.size()) {
        throw std::invalid_argument(flag + ": cannot parse '" + tok + "' as a number");
      }
      out.push_back(value);
    }
    pos = comma + 1;
  }
  if (out.empty()) throw std::invalid_argument(flag + ": list must not be empty");
  return out;
}

void check_format(const std::string& format) {
  if (format != "csv" && format != "json") {
    throw std::invalid_argument("unknown format '" + format + "' (expected csv or json)");
  }
}

void write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out_path);
  if (!f) throw std::runtime_error("cannot open output file: " + out_path);
  f << text;
}

double resolve_step(Variant variant, const std::optional<double>& lambda,
                    const std::optional<double>& beta) {
  if (variant == Variant::Mdumiqe) {
    if (lambda) throw std::invalid_argument("mdumiqe takes --beta, not --lambda");
    return beta.value_or(0.5);
  }
  if (beta) {
    throw std::invalid_argument(std::string(to_string(variant)) + " takes --lambda, not --beta");
  }
  return lambda.value_or(0.05);
}

Transform resolve_transform(const std::string& name, Variant variant, StreamKind kind) {
  if (name == "auto") return default_transform(variant, kind);
  return transform_from_string(name);
}

ordered_json report_to_json(const EvalReport& report) {
  ordered_json j;
  j["variant"] = to_string(report.variant);
  j["step"] = report.step;
  j["transform"] = to_string(report.transform);
  j["stream_kind"] = to_string(report.stream_kind);
  if (report.stream_kind == StreamKind::Replay) {
    j["T"] = nullptr;
  } else {
    j["T"] = report.period;
  }
  j["placement"] = report.placement;
  j["K"] = report.target_count;
  j["N"] = report.evaluated_steps;
  j["seed"] = report.seed;
  if (report.avg_rmse) {
    j["avg_rmse"] = *report.avg_rmse;
  } else {
    j["avg_rmse"] = nullptr;
  }
  j["rmse"] = report.per_quantile_rmse;
  j["violation_count"] = report.violation_count;
  j["violation_rate"] = report.violation_rate;
  return j;
}

// ---- simulate ----

struct SimulateOptions {
  std::string variant = "mdumiqe";
  std::optional<double> lambda;
  std::optional<double> beta;
  std::string transform = "auto";
  std::string stream = "sin-chi2";
  double a = 2.0;
  double b = 6.0;
  std::uint64_t period = 800;
  double sd = 1.0;
  std::string placement = "median";
  int k = 9;
  std::uint64_t n = 100000;
  std::optional<std::uint64_t> warmup;
  double q_min = 1e-12;
  std::string trace_path;
  std::uint64_t seed = 1;
  std::string format = "csv";
  std::string out;
};

int run_simulate(const SimulateOptions& o) {
  check_format(o.format);
  const Variant variant = variant_from_string(o.variant);
  const StreamKind kind = stream_kind_from_string(o.stream);
  if (kind == StreamKind::Replay) {
    throw std::invalid_argument("simulate drives synthetic streams; use the replay subcommand for files");
  }

  StreamConfig stream;
  stream.kind = kind;
  stream.amplitude = o.a;
  stream.baseline = o.b;
  stream.period = o.period;
  stream.sd = o.sd;
  stream.seed = o.seed;

  const auto family = kind == StreamKind::SinNormal ? DistributionSpec::Family::Normal
                                                    : DistributionSpec::Family::Chi2;
  QuantileTargets targets = build_targets(family, placement_from_string(o.placement), o.k);

  ExperimentSpec spec{
      .estimator = {.variant = variant,
                    .step = resolve_step(variant, o.lambda, o.beta),
                    .transform = resolve_transform(o.transform, variant, kind),
                    .q_min = o.q_min},
      .stream = std::move(stream),
      .targets = std::move(targets),
      .placement_label = o.placement,
      .samples = o.n,
      .warmup = o.warmup,
  };
  // Fail on bad flags before the trace file is created.
  spec.stream.validate();
  spec.estimator.validate(spec.targets);

  std::ofstream trace_file;
  TraceFn trace;
  if (!o.trace_path.empty()) {
    trace_file.open(o.trace_path);
    if (!trace_file) throw std::runtime_error("cannot open trace file: " + o.trace_path);
    std::string header = "n,x";
    for (std::size_t i = 1; i <= spec.targets.size(); ++i) header += ",truth_q" + std::to_string(i);
    for (std::size_t i = 1; i <= spec.targets.size(); ++i) header += ",est_q" + std::to_string(i);
    trace_file << header << '\n';
    trace = [&trace_file](std::uint64_t n, double x, std::span<const double> truth,
                          std::span<const double> est) {
      trace_file << n << ',' << format_number(x);
      for (double t : truth) trace_file << ',' << format_number(t);
      for (double e : est) trace_file << ',' << format_number(e);
      trace_file << '\n';
    };
  }

  const EvalReport report = run_experiment(spec, trace);

  if (o.format == "csv") {
    write_output(report_csv_header() + "\n" + report_csv_row(report) + "\n", o.out);
  } else {
    write_output(report_to_json(report).dump(2) + "\n", o.out);
  }
  return 0;
}

// ---- sweep ----

struct SweepOptions {
  std::string grid_path;
  std::optional<std::uint64_t> n;
  std::optional<std::uint64_t> warmup;
  std::optional<std::uint64_t> seed;
  unsigned jobs = 0;
  std::string format = "csv";
  std::string out;
};

SweepGrid parse_grid(const ordered_json& j) {
  if (!j.is_object()) throw std::invalid_argument("grid: top level must be an object");
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (key != "variants" && key != "streams" && key != "targets" && key != "n" &&
        key != "warmup" && key != "base_seed" && key != "transform") {
      throw std::invalid_argument("grid: unknown key '" + key + "'");
    }
  }

  SweepGrid grid;
  if (!j.contains("variants")) throw std::invalid_argument("grid: missing key 'variants'");
  for (const auto& v : j.at("variants")) {
    SweepGrid::VariantSteps vs;
    vs.variant = variant_from_string(v.at("variant").get<std::string>());
    vs.steps = v.at("steps").get<std::vector<double>>();
    grid.variants.push_back(std::move(vs));
  }
  if (!j.contains("streams")) throw std::invalid_argument("grid: missing key 'streams'");
  for (const auto& s : j.at("streams")) {
    StreamConfig stream;
    stream.kind = stream_kind_from_string(s.at("kind").get<std::string>());
    if (s.contains("a")) stream.amplitude = s.at("a").get<double>();
    if (s.contains("b")) stream.baseline = s.at("b").get<double>();
    if (s.contains("T")) stream.period = s.at("T").get<std::uint64_t>();
    if (s.contains("sd")) stream.sd = s.at("sd").get<double>();
    for (const auto& [key, value] : s.items()) {
      (void)value;
      if (key != "kind" && key != "a" && key != "b" && key != "T" && key != "sd") {
        throw std::invalid_argument("grid: unknown stream key '" + key + "'");
      }
    }
    grid.streams.push_back(std::move(stream));
  }
  if (!j.contains("targets")) throw std::invalid_argument("grid: missing key 'targets'");
  for (const auto& t : j.at("targets")) {
    SweepGrid::TargetSet ts;
    ts.placement = placement_from_string(t.at("placement").get<std::string>());
    ts.count = t.at("k").get<int>();
    grid.target_sets.push_back(ts);
  }
  if (j.contains("n")) grid.samples = j.at("n").get<std::uint64_t>();
  if (j.contains("warmup")) grid.warmup = j.at("warmup").get<std::uint64_t>();
  if (j.contains("base_seed")) grid.base_seed = j.at("base_seed").get<std::uint64_t>();
  if (j.contains("transform")) {
    grid.transform = transform_from_string(j.at("transform").get<std::string>());
  }
  return grid;
}

int run_sweep(const SweepOptions& o) {
  check_format(o.format);
  std::ifstream f(o.grid_path);
  if (!f) throw std::runtime_error("cannot open grid file: " + o.grid_path);

  SweepGrid grid;
  try {
    grid = parse_grid(ordered_json::parse(f));
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("grid file " + o.grid_path + ": " + e.what());
  }
  if (o.n) grid.samples = *o.n;
  if (o.warmup) grid.warmup = *o.warmup;
  if (o.seed) grid.base_seed = *o.seed;
  grid.validate();

  const auto progress = [](std::size_t done, std::size_t total) {
    std::fprintf(stderr, "sweep: %zu/%zu\n", done, total);
  };
  const std::vector<SweepCell> cells = sweep(grid, o.jobs, progress);

  if (o.format == "csv") {
    std::string text = sweep_csv_header() + "\n";
    for (const auto& cell : cells) text += sweep_csv_row(cell) + "\n";
    write_output(text, o.out);
  } else {
    ordered_json arr = ordered_json::array();
    for (const auto& cell : cells) {
      ordered_json j;
      if (cell.report) {
        j = report_to_json(*cell.report);
      } else {
        j["variant"] = to_string(cell.spec.estimator.variant);
        j["step"] = cell.spec.estimator.step;
        j["stream_kind"] = to_string(cell.spec.stream.kind);
        j["T"] = cell.spec.stream.period;
        j["placement"] = cell.spec.placement_label;
        j["K"] = cell.spec.targets.size();
      }
      j["error"] = cell.error;
      arr.push_back(std::move(j));
    }
    write_output(arr.dump(2) + "\n", o.out);
  }

  std::size_t failed = 0;
  for (const auto& cell : cells) {
    if (!cell.error.empty()) ++failed;
  }
  if (!cells.empty() && failed == cells.size()) {
    throw std::runtime_error("all " + std::to_string(failed) + " sweep cells failed");
  }
  return 0;
}

// ---- replay ----

struct ReplayOptions {
  std::string input;
  int column = 0;
  std::string quantiles = "0.25,0.5,0.75";
  std::size_t oracle_window = 0;
  std::string variant = "mdumiqe";
  std::optional<double> lambda;
  std::optional<double> beta;
  std::string transform = "identity";
  double q_min = 1e-12;
  std::string format = "csv";
  std::string out;
};

int run_replay(const ReplayOptions& o) {
  check_format(o.format);
  const Variant variant = variant_from_string(o.variant);
  QuantileTargets targets(parse_double_list(o.quantiles, "--quantiles"));

  EstimatorConfig config;
  config.variant = variant;
  config.step = resolve_step(variant, o.lambda, o.beta);
  // No distribution knowledge here, so "auto" falls back to identity.
  config.transform = o.transform == "auto" ? Transform::Identity : transform_from_string(o.transform);
  config.q_min = o.q_min;
  config.validate(targets);

  ReplayStream stream(o.input, o.column);
  const auto first = stream.next();
  if (!first) throw std::runtime_error("replay file has no samples: " + o.input);
  const double first_sample = *first;
  QuantileBank bank =
      QuantileBank::from_samples(targets, config, std::span<const double>(&first_sample, 1));

  std::optional<WindowOracle> oracle;
  if (o.oracle_window > 0) oracle.emplace(o.oracle_window);

  const std::size_t k_count = targets.size();
  std::string header = "n,x";
  for (std::size_t i = 1; i <= k_count; ++i) header += ",est_q" + std::to_string(i);
  if (oracle) {
    for (std::size_t i = 1; i <= k_count; ++i) header += ",oracle_q" + std::to_string(i);
  }

  std::string csv_text = header + "\n";
  ordered_json json_rows = ordered_json::array();
  std::uint64_t n = 0;

  const auto emit_row = [&](double x) {
    ++n;
    if (oracle) oracle->update(x);
    if (o.format == "csv") {
      std::string row = std::to_string(n) + "," + format_number(x);
      for (std::size_t k = 0; k < k_count; ++k) row += "," + format_number(bank.quantile(k));
      if (oracle) {
        for (std::size_t k = 0; k < k_count; ++k) {
          row += "," + format_number(oracle->quantile(targets.prob(k)));
        }
      }
      csv_text += row + "\n";
    } else {
      ordered_json j;
      j["n"] = n;
      j["x"] = x;
      j["estimates"] = bank.quantiles();
      if (oracle) {
        std::vector<double> ref(k_count);
        for (std::size_t k = 0; k < k_count; ++k) ref[k] = oracle->quantile(targets.prob(k));
        j["oracle"] = std::move(ref);
      }
      json_rows.push_back(std::move(j));
    }
  };

  // The first sample only initializes the bank; it still produces a row so
  // row count matches the file.
  emit_row(first_sample);
  while (const auto x = stream.next()) {
    bank.observe(*x);
    emit_row(*x);
  }

  if (o.format == "csv") {
    write_output(csv_text, o.out);
  } else {
    write_output(json_rows.dump(2) + "\n", o.out);
  }
  return 0;
}

// ---- converge ----

struct ConvergeOptions {
  std::string betas;
  double dof = 6.0;
  std::uint64_t n = 1000000;
  std::string quantiles = "0.25,0.5,0.75";
  std::uint64_t seed = 1;
  std::string format = "csv";
  std::string out;
};

int run_converge(const ConvergeOptions& o) {
  check_format(o.format);
  const std::vector<double> betas = parse_double_list(o.betas, "--betas");
  QuantileTargets targets(parse_double_list(o.quantiles, "--quantiles"));
  const DistributionSpec dist = DistributionSpec::make_chi2(o.dof);

  const std::vector<ConvergenceRow> rows = static_convergence(targets, dist, betas, o.n, o.seed);

  if (o.format == "csv") {
    std::string text = "beta,n,q,truth,time_avg,bias,stderr\n";
    for (const auto& row : rows) {
      for (std::size_t k = 0; k < targets.size(); ++k) {
        text += format_number(row.beta) + "," + std::to_string(row.samples) + "," +
                format_number(targets.prob(k)) + "," + format_number(row.truth[k]) + "," +
                format_number(row.time_avg[k]) + "," + format_number(row.bias[k]) + "," +
                format_number(row.std_error[k]) + "\n";
      }
    }
    write_output(text, o.out);
  } else {
    ordered_json arr = ordered_json::array();
    for (const auto& row : rows) {
      ordered_json j;
      j["beta"] = row.beta;
      j["n"] = row.samples;
      ordered_json per_q = ordered_json::array();
      for (std::size_t k = 0; k < targets.size(); ++k) {
        per_q.push_back({{"q", targets.prob(k)},
                         {"truth", row.truth[k]},
                         {"time_avg", row.time_avg[k]},
                         {"bias", row.bias[k]},
                         {"stderr", row.std_error[k]}});
      }
      j["quantiles"] = std::move(per_q);
      arr.push_back(std::move(j));
    }
    write_output(arr.dump(2) + "\n", o.out);
  }
  return 0;
}

// CLI11 only processes a config file attached to the root command, so each
// subcommand's --config is applied here after the main parse: file values
// fill the options the command line left unset, then the usual option
// callbacks and validators fire. Options marked required() must still be
// given on the command line because their check runs during the main parse.
void apply_config_file(CLI::App* cmd) {
  const CLI::Option* opt = cmd->get_config_ptr();
  if (opt == nullptr || opt->count() == 0) return;
  const auto path = opt->as<std::string>();
  std::ifstream in(path);
  if (!in) throw CLI::FileError::Missing(path);
  cmd->parse_from_stream(in);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Streaming quantile estimation toolkit"};
  app.require_subcommand(1);

  SimulateOptions sim;
  CLI::App* sim_cmd = app.add_subcommand("simulate", "Run one estimator against a synthetic drift stream");
  sim_cmd->set_config("--config", "", "Read options from an INI file (command-line flags win)");
  sim_cmd->add_option("--variant", sim.variant, "Estimator: dumiqe, dumiqe-add, or mdumiqe");
  sim_cmd->add_option("--lambda", sim.lambda, "Step size for the dumiqe variants");
  sim_cmd->add_option("--beta", sim.beta, "Step size in [0, 1) for mdumiqe");
  sim_cmd->add_option("--transform", sim.transform, "identity, exp, or auto");
  sim_cmd->add_option("--stream", sim.stream, "sin-normal or sin-chi2");
  sim_cmd->add_option("--a", sim.a, "Drift amplitude");
  sim_cmd->add_option("--b", sim.b, "Dof baseline for sin-chi2");
  sim_cmd->add_option("--T", sim.period, "Drift period in steps");
  sim_cmd->add_option("--sd", sim.sd, "Standard deviation for sin-normal");
  sim_cmd->add_option("--placement", sim.placement, "Target placement: median or tail");
  sim_cmd->add_option("--k", sim.k, "Number of targets: 3 or 9");
  sim_cmd->add_option("--n", sim.n, "Scored steps");
  sim_cmd->add_option("--warmup", sim.warmup, "Unscored steps before scoring (default max(1000, 2T))");
  sim_cmd->add_option("--qmin", sim.q_min, "Positive floor for mdumiqe estimates");
  sim_cmd->add_option("--trace", sim.trace_path, "Write per-step truth/estimate CSV to this file");
  sim_cmd->add_option("--seed", sim.seed, "Stream seed");
  sim_cmd->add_option("--format", sim.format, "Output format: csv or json");
  sim_cmd->add_option("--out", sim.out, "Output file (default stdout)");

  SweepOptions swp;
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "Run a grid of experiments in parallel");
  sweep_cmd->set_config("--config", "", "Read options from an INI file (command-line flags win)");
  sweep_cmd->add_option("--grid", swp.grid_path, "JSON grid file")->required();
  sweep_cmd->add_option("--n", swp.n, "Override scored steps per cell");
  sweep_cmd->add_option("--warmup", swp.warmup, "Override warm-up steps per cell");
  sweep_cmd->add_option("--seed", swp.seed, "Override the grid base seed");
  sweep_cmd->add_option("--jobs", swp.jobs, "Worker threads (0 = hardware concurrency)");
  sweep_cmd->add_option("--format", swp.format, "Output format: csv or json");
  sweep_cmd->add_option("--out", swp.out, "Output file (default stdout)");

  ReplayOptions rep;
  CLI::App* replay_cmd = app.add_subcommand("replay", "Track quantiles over samples from a file");
  replay_cmd->set_config("--config", "", "Read options from an INI file (command-line flags win)");
  replay_cmd->add_option("--input", rep.input, "Sample file, one row per sample")->required();
  replay_cmd->add_option("--column", rep.column, "Zero-based column index");
  replay_cmd->add_option("--quantiles", rep.quantiles, "Comma-separated probabilities in (0, 1)");
  replay_cmd->add_option("--oracle-window", rep.oracle_window,
                         "Also report exact quantiles over a sliding window of this size");
  replay_cmd->add_option("--variant", rep.variant, "Estimator: dumiqe, dumiqe-add, or mdumiqe");
  replay_cmd->add_option("--lambda", rep.lambda, "Step size for the dumiqe variants");
  replay_cmd->add_option("--beta", rep.beta, "Step size in [0, 1) for mdumiqe");
  replay_cmd->add_option("--transform", rep.transform, "identity or exp");
  replay_cmd->add_option("--qmin", rep.q_min, "Positive floor for mdumiqe estimates");
  replay_cmd->add_option("--format", rep.format, "Output format: csv or json");
  replay_cmd->add_option("--out", rep.out, "Output file (default stdout)");

  ConvergeOptions cnv;
  CLI::App* converge_cmd =
      app.add_subcommand("converge", "Long-run accuracy on a static chi-squared stream");
  converge_cmd->set_config("--config", "", "Read options from an INI file (command-line flags win)");
  converge_cmd->add_option("--betas", cnv.betas, "Comma-separated step sizes")->required();
  converge_cmd->add_option("--dof", cnv.dof, "Chi-squared degrees of freedom");
  converge_cmd->add_option("--n", cnv.n, "Samples per step size");
  converge_cmd->add_option("--quantiles", cnv.quantiles, "Comma-separated probabilities in (0, 1)");
  converge_cmd->add_option("--seed", cnv.seed, "Base seed");
  converge_cmd->add_option("--format", cnv.format, "Output format: csv or json");
  converge_cmd->add_option("--out", cnv.out, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
    for (CLI::App* cmd : {sim_cmd, sweep_cmd, replay_cmd, converge_cmd}) {
      if (cmd->parsed()) apply_config_file(cmd);
    }
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (sim_cmd->parsed()) return run_simulate(sim);
    if (sweep_cmd->parsed()) return run_sweep(swp);
    if (replay_cmd->parsed()) return run_replay(rep);
    if (converge_cmd->parsed()) return run_converge(cnv);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
