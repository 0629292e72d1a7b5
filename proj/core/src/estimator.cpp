#include "qtrack/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qtrack {

const char* to_string(Variant v) {
  switch (v) {
    case Variant::DumiqeMult: return "dumiqe";
    case Variant::DumiqeAdd: return "dumiqe-add";
    case Variant::Mdumiqe: return "mdumiqe";
  }
  return "?";
}

const char* to_string(Transform t) {
  return t == Transform::Exp ? "exp" : "identity";
}

Variant variant_from_string(const std::string& name) {
  if (name == "dumiqe") return Variant::DumiqeMult;
  if (name == "dumiqe-add") return Variant::DumiqeAdd;
  if (name == "mdumiqe") return Variant::Mdumiqe;
  throw std::invalid_argument("unknown variant '" + name + "' (expected dumiqe, dumiqe-add, or mdumiqe)");
}

Transform transform_from_string(const std::string& name) {
  if (name == "identity") return Transform::Identity;
  if (name == "exp") return Transform::Exp;
  throw std::invalid_argument("unknown transform '" + name + "' (expected identity or exp)");
}

double apply_transform(double x, Transform t) {
  if (t == Transform::Identity) return x;
  if (!(std::abs(x) <= kExpTransformRange)) {
    throw std::domain_error("sample outside the exp transform range |x| <= 700");
  }
  return std::exp(x);
}

double invert_transform(double y, Transform t) {
  if (t == Transform::Identity) return y;
  if (!(y > 0.0)) {
    throw std::domain_error("exp transform inverse needs a positive value");
  }
  return std::log(y);
}

void EstimatorConfig::validate(const QuantileTargets& targets) const {
  if (!std::isfinite(step) || step < 0.0) {
    throw std::invalid_argument("step size must be finite and non-negative");
  }
  if (!std::isfinite(q_min) || q_min <= 0.0) {
    throw std::invalid_argument("q_min must be a positive finite floor");
  }
  if (!std::isfinite(gap_min) || gap_min < 0.0) {
    throw std::invalid_argument("gap_min must be finite and non-negative");
  }
  switch (variant) {
    case Variant::Mdumiqe:
      if (step >= 1.0) {
        throw std::invalid_argument("mdumiqe step (beta) must lie in [0, 1)");
      }
      if (targets.size() < 2) {
        throw std::invalid_argument("mdumiqe requires at least two quantile targets; use dumiqe for a single one");
      }
      break;
    case Variant::DumiqeMult:
      // A decrease factor of 1 - step * (1 - q) must stay positive for the
      // lowest target, otherwise one sample can drive the estimate to zero.
      if (step * (1.0 - targets.prob(0)) >= 1.0) {
        throw std::invalid_argument("dumiqe step (lambda) too large: step * (1 - q_lowest) must stay below 1");
      }
      break;
    case Variant::DumiqeAdd:
      break;
  }
}

double pair_step_bound(double lower, double upper, double q_lower, double q_upper) {
  const double gap = upper - lower;
  if (gap <= 0.0) return 0.0;
  return gap / ((1.0 - q_upper) * upper + q_lower * lower);
}

double step_bound_interior(std::span<const double> estimates, std::span<const double> probs, std::size_t k) {
  const double below = pair_step_bound(estimates[k - 1], estimates[k], probs[k - 1], probs[k]);
  const double above = pair_step_bound(estimates[k], estimates[k + 1], probs[k], probs[k + 1]);
  return std::min(below, above);
}

double step_bound_edge(std::span<const double> estimates, std::span<const double> probs, std::size_t k) {
  if (k == 0) {
    return pair_step_bound(estimates[0], estimates[1], probs[0], probs[1]);
  }
  return pair_step_bound(estimates[k - 1], estimates[k], probs[k - 1], probs[k]);
}

namespace {

// Shared domain checks for observe() and from_samples().
double to_internal(double x, const EstimatorConfig& config) {
  if (!std::isfinite(x)) {
    throw std::domain_error("samples must be finite");
  }
  if (config.transform == Transform::Exp) {
    return apply_transform(x, Transform::Exp);
  }
  if (x <= 0.0 && config.variant != Variant::DumiqeAdd) {
    throw std::domain_error(
        "identity transform requires positive samples for multiplicative variants; use the exp transform");
  }
  return x;
}

}  // namespace

QuantileBank::QuantileBank(QuantileTargets targets, EstimatorConfig config,
                           std::vector<double> initial_estimates)
    : targets_(std::move(targets)), config_(config), estimates_(std::move(initial_estimates)) {
  config_.validate(targets_);
  if (estimates_.size() != targets_.size()) {
    throw std::invalid_argument("initial estimates must match the number of targets");
  }
  for (double e : estimates_) {
    if (!std::isfinite(e)) throw std::invalid_argument("initial estimates must be finite");
  }
  if (config_.variant != Variant::DumiqeAdd) {
    for (double e : estimates_) {
      if (e <= 0.0) throw std::invalid_argument("initial estimates must be positive for multiplicative variants");
    }
  }
  if (config_.variant == Variant::Mdumiqe) {
    for (std::size_t k = 0; k < estimates_.size(); ++k) {
      if (estimates_[k] < config_.q_min) {
        throw std::invalid_argument("mdumiqe initial estimates must not start below q_min");
      }
      if (k > 0 && estimates_[k] <= estimates_[k - 1]) {
        throw std::invalid_argument("mdumiqe initial estimates must be strictly increasing");
      }
    }
  }
  bounds_.resize(estimates_.size());
}

QuantileBank QuantileBank::from_samples(QuantileTargets targets, EstimatorConfig config,
                                        std::span<const double> warmup) {
  config.validate(targets);
  if (warmup.empty()) {
    throw std::invalid_argument("empirical initialization needs at least one sample");
  }
  std::vector<double> buf;
  buf.reserve(warmup.size());
  for (double x : warmup) buf.push_back(to_internal(x, config));
  std::sort(buf.begin(), buf.end());

  std::vector<double> init(targets.size());
  for (std::size_t k = 0; k < targets.size(); ++k) {
    init[k] = buf[nearest_rank_index(targets.prob(k), buf.size())];
  }
  if (config.variant == Variant::Mdumiqe) {
    for (double& e : init) e = std::max(e, config.q_min);
  }
  // Nudge tied ranks apart; exactly tied neighbors would otherwise never
  // separate under the coupled update.
  for (std::size_t k = 1; k < init.size(); ++k) {
    const double prev = init[k - 1];
    const double bump = prev != 0.0 ? std::abs(prev) * 1e-9 : 1e-9;
    if (init[k] <= prev) init[k] = prev + bump;
  }
  return QuantileBank(std::move(targets), config, std::move(init));
}

void QuantileBank::observe(double x) {
  const double internal = to_internal(x, config_);
  switch (config_.variant) {
    case Variant::DumiqeMult: step_independent_mult(internal); break;
    case Variant::DumiqeAdd: step_independent_add(internal); break;
    case Variant::Mdumiqe: step_coupled(internal); break;
  }
  ++count_;
}

void QuantileBank::step_independent_mult(double x) {
  const auto& q = targets_.probs();
  const double lambda = config_.step;
  for (std::size_t k = 0; k < estimates_.size(); ++k) {
    // Ties take the decrease branch.
    if (estimates_[k] < x) {
      estimates_[k] *= 1.0 + lambda * q[k];
    } else {
      estimates_[k] *= 1.0 - lambda * (1.0 - q[k]);
    }
  }
}

void QuantileBank::step_independent_add(double x) {
  const auto& q = targets_.probs();
  const double lambda = config_.step;
  for (std::size_t k = 0; k < estimates_.size(); ++k) {
    if (estimates_[k] < x) {
      estimates_[k] += lambda * q[k];
    } else {
      estimates_[k] -= lambda * (1.0 - q[k]);
    }
  }
}

void QuantileBank::step_coupled(double x) {
  const auto& q = targets_.probs();
  const std::size_t n = estimates_.size();
  const double beta = config_.step;

  // Every bound comes from the pre-update snapshot; updating in place while
  // reading neighbor bounds would break the ordering guarantee.
  bounds_[0] = step_bound_edge(estimates_, q, 0);
  for (std::size_t k = 1; k + 1 < n; ++k) {
    bounds_[k] = step_bound_interior(estimates_, q, k);
  }
  bounds_[n - 1] = step_bound_edge(estimates_, q, n - 1);

  for (std::size_t k = 0; k < n; ++k) {
    const double rate = beta * bounds_[k];
    const double factor = estimates_[k] < x ? 1.0 + rate * q[k] : 1.0 - rate * (1.0 - q[k]);
    estimates_[k] = std::max(estimates_[k] * factor, config_.q_min);
  }

  if (config_.gap_min > 0.0) {
    for (std::size_t k = 1; k < n; ++k) {
      if (estimates_[k] <= estimates_[k - 1]) {
        estimates_[k] = estimates_[k - 1] * (1.0 + config_.gap_min);
      }
    }
  }
}

std::vector<double> QuantileBank::quantiles() const {
  std::vector<double> out(estimates_.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = invert_transform(estimates_[k], config_.transform);
  return out;
}

double QuantileBank::quantile(std::size_t k) const {
  return invert_transform(estimates_[k], config_.transform);
}

}  // namespace qtrack
