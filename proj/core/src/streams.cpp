#include "qtrack/streams.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qtrack {

const char* to_string(StreamKind k) {
  switch (k) {
    case StreamKind::SinNormal: return "sin-normal";
    case StreamKind::SinChi2: return "sin-chi2";
    case StreamKind::Replay: return "replay";
  }
  return "?";
}

StreamKind stream_kind_from_string(const std::string& name) {
  if (name == "sin-normal") return StreamKind::SinNormal;
  if (name == "sin-chi2") return StreamKind::SinChi2;
  if (name == "replay") return StreamKind::Replay;
  throw std::invalid_argument("unknown stream kind '" + name + "' (expected sin-normal, sin-chi2, or replay)");
}

const char* to_string(Placement p) {
  return p == Placement::Median ? "median" : "tail";
}

Placement placement_from_string(const std::string& name) {
  if (name == "median") return Placement::Median;
  if (name == "tail") return Placement::Tail;
  throw std::invalid_argument("unknown placement '" + name + "' (expected median or tail)");
}

void StreamConfig::validate() const {
  if (kind == StreamKind::Replay) {
    if (path.empty()) throw std::invalid_argument("replay stream needs a file path");
    if (column < 0) throw std::invalid_argument("replay column must be non-negative");
    return;
  }
  if (period == 0) throw std::invalid_argument("stream period must be at least 1");
  if (!std::isfinite(amplitude)) throw std::invalid_argument("stream amplitude must be finite");
  if (kind == StreamKind::SinNormal) {
    if (!std::isfinite(sd) || sd <= 0.0) throw std::invalid_argument("stream sd must be positive");
  } else {
    if (!std::isfinite(baseline) || baseline <= std::abs(amplitude)) {
      throw std::invalid_argument("sin-chi2 baseline must exceed |amplitude| so the dof stays positive");
    }
  }
  if (outlier) {
    if (!std::isfinite(outlier->rate) || outlier->rate < 0.0 || outlier->rate >= 1.0) {
      throw std::invalid_argument("outlier rate must lie in [0, 1)");
    }
    if (!std::isfinite(outlier->scale) || outlier->scale <= 0.0) {
      throw std::invalid_argument("outlier scale must be positive");
    }
  }
}

double StreamConfig::mean_at(std::uint64_t n) const {
  const double phase = static_cast<double>(n % period) / static_cast<double>(period);
  return amplitude * std::sin(2.0 * std::numbers::pi * phase);
}

double StreamConfig::dof_at(std::uint64_t n) const {
  return mean_at(n) + baseline;
}

std::vector<double> true_quantiles(const StreamConfig& config, std::uint64_t n,
                                   const QuantileTargets& targets) {
  std::vector<double> out(targets.size());
  switch (config.kind) {
    case StreamKind::SinNormal: {
      const double mean = config.mean_at(n);
      for (std::size_t k = 0; k < out.size(); ++k) {
        out[k] = mean + config.sd * normal_inv_cdf(targets.prob(k));
      }
      break;
    }
    case StreamKind::SinChi2: {
      const double dof = config.dof_at(n);
      for (std::size_t k = 0; k < out.size(); ++k) {
        out[k] = chi2_inv_cdf(targets.prob(k), dof);
      }
      break;
    }
    case StreamKind::Replay:
      throw std::invalid_argument("replay streams have no analytic ground truth");
  }
  return out;
}

QuantileTargets build_targets(DistributionSpec::Family family, Placement placement, int count) {
  if (count != 3 && count != 9) {
    throw std::invalid_argument("target count must be 3 or 9");
  }
  std::vector<double> probs(9);
  for (int i = 0; i < 9; ++i) {
    double q;
    if (family == DistributionSpec::Family::Normal) {
      const double z = placement == Placement::Median ? -0.8 + 0.2 * i : 0.8 + 0.2 * i;
      q = normal_cdf(z);
    } else {
      const double x = placement == Placement::Median ? 4.2 + 0.3 * i : 12.0 + 0.4 * i;
      q = chi2_cdf(x, 6.0);
    }
    probs[static_cast<std::size_t>(i)] = q;
  }
  if (count == 3) {
    probs = {probs[0], probs[4], probs[8]};
  }
  return QuantileTargets(std::move(probs));
}

SyntheticStream::SyntheticStream(StreamConfig config, QuantileTargets targets)
    : config_(std::move(config)), targets_(std::move(targets)), rng_(config_.seed) {
  config_.validate();
  if (config_.kind == StreamKind::Replay) {
    throw std::invalid_argument("SyntheticStream cannot drive a replay config; use ReplayStream");
  }
  if (config_.kind == StreamKind::SinNormal) {
    z_scores_.resize(targets_.size());
    for (std::size_t k = 0; k < z_scores_.size(); ++k) {
      z_scores_[k] = normal_inv_cdf(targets_.prob(k));
    }
    truth_buf_.resize(targets_.size());
  } else {
    truth_cache_.resize(config_.period);
  }
}

StreamStep SyntheticStream::next() {
  ++n_;
  StreamStep step;
  step.n = n_;

  if (config_.kind == StreamKind::SinNormal) {
    const double mean = config_.mean_at(n_);
    step.x = rng_.normal(mean, config_.sd);
    for (std::size_t k = 0; k < truth_buf_.size(); ++k) {
      truth_buf_[k] = mean + config_.sd * z_scores_[k];
    }
    step.truth = truth_buf_;
  } else {
    const double dof = config_.dof_at(n_);
    step.x = rng_.chi_squared(dof);
    // Inverting the chi-squared CDF per target is the expensive part, and the
    // drift repeats every period steps, so truth rows are cached per phase.
    auto& row = truth_cache_[n_ % config_.period];
    if (row.empty()) row = true_quantiles(config_, n_, targets_);
    step.truth = row;
  }

  if (config_.outlier && config_.outlier->rate > 0.0 && rng_.uniform() < config_.outlier->rate) {
    if (config_.kind == StreamKind::SinChi2) {
      step.x *= config_.outlier->scale;
    } else {
      step.x += config_.outlier->scale * config_.sd;
    }
  }
  return step;
}

ReplayStream::ReplayStream(std::string path, int column)
    : path_(std::move(path)), column_(column), in_(path_) {
  if (column_ < 0) throw std::invalid_argument("replay column must be non-negative");
  if (!in_) throw std::runtime_error("cannot open replay file: " + path_);
}

std::optional<double> ReplayStream::next() {
  std::string row;
  while (std::getline(in_, row)) {
    ++line_;
    if (!row.empty() && row.back() == '\r') row.pop_back();

    // Tokenize on commas and whitespace alike.
    std::vector<std::string> tokens;
    std::string cur;
    for (char ch : row) {
      if (ch == ',' || ch == ' ' || ch == '\t') {
        if (!cur.empty()) tokens.push_back(std::move(cur));
        cur.clear();
      } else {
        cur.push_back(ch);
      }
    }
    if (!cur.empty()) tokens.push_back(std::move(cur));
    if (tokens.empty()) continue;

    if (static_cast<std::size_t>(column_) >= tokens.size()) {
      throw std::runtime_error(path_ + ": line " + std::to_string(line_) + ": missing column " +
                               std::to_string(column_));
    }
    const std::string& tok = tokens[static_cast<std::size_t>(column_)];
    double value = 0.0;
    const auto* begin = tok.data();
    const auto* end = tok.data() + tok.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end) {
      if (!saw_data_) continue;  // header row
      throw std::runtime_error(path_ + ": line " + std::to_string(line_) + ": cannot parse '" + tok +
                               "' as a number");
    }
    saw_data_ = true;
    return value;
  }
  return std::nullopt;
}

}  // namespace qtrack
