// Copyright 2026 The qdecay Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qdecay/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <variant>

#include <fmt/format.h>

#include "qdecay/errors.hpp"

namespace qdecay {
namespace {

// (tau / x)^beta with fast paths for the common exponents.
inline double scaled_exponent(double tau, double x, double beta) noexcept {
  const double ratio = tau / x;
  if (beta == 2.0) return ratio * ratio;
  if (beta == 1.0) return ratio;
  return std::pow(ratio, beta);
}

void normalize(ParticleEnsemble& ensemble, double tau) {
  double total = 0.0;
  for (double w : ensemble.weights) total += w;
  if (!(total > 0.0) || !std::isfinite(total)) {
    throw DegeneratePosteriorError(fmt::format(
        "all particle weights vanished after update at tau={:.6g} s "
        "(K={}, posterior support [{:.6g}, {:.6g}] s)",
        tau, ensemble.size(),
        *std::min_element(ensemble.positions.begin(), ensemble.positions.end()),
        *std::max_element(ensemble.positions.begin(),
                          ensemble.positions.end())));
  }
  const double inv = 1.0 / total;
  for (double& w : ensemble.weights) w *= inv;
}

}  // namespace

ParticleEnsemble make_uniform_ensemble(std::vector<double> positions) {
  ParticleEnsemble ensemble;
  const double w = 1.0 / static_cast<double>(positions.size());
  ensemble.weights.assign(positions.size(), w);
  ensemble.positions = std::move(positions);
  return ensemble;
}

void check_ensemble(const ParticleEnsemble& ensemble, double tolerance) {
  if (ensemble.positions.empty()) {
    throw ConfigError("particle ensemble is empty");
  }
  if (ensemble.positions.size() != ensemble.weights.size()) {
    throw ConfigError(fmt::format("ensemble has {} positions but {} weights",
                                  ensemble.positions.size(),
                                  ensemble.weights.size()));
  }
  double total = 0.0;
  for (std::size_t k = 0; k < ensemble.size(); ++k) {
    if (!(ensemble.positions[k] > 0.0)) {
      throw ConfigError(fmt::format("particle {} has non-positive position {}",
                                    k, ensemble.positions[k]));
    }
    if (!(ensemble.weights[k] >= 0.0)) {
      throw ConfigError(
          fmt::format("particle {} has negative weight {}", k, ensemble.weights[k]));
    }
    total += ensemble.weights[k];
  }
  if (std::abs(total - 1.0) > tolerance) {
    throw ConfigError(fmt::format("weights sum to {} instead of 1", total));
  }
}

void EstimatorConfig::validate() const {
  if (particle_count < 2) {
    throw ConfigError(
        fmt::format("particle count must be >= 2, got {}", particle_count));
  }
  if (!(prior_low > 0.0 && prior_low < prior_high) || !std::isfinite(prior_high)) {
    throw ConfigError(fmt::format(
        "prior support must satisfy 0 < low < high, got [{}, {}]", prior_low,
        prior_high));
  }
  if (!(liu_west_a > 0.0 && liu_west_a < 1.0)) {
    throw ConfigError(
        fmt::format("Liu-West parameter must lie in (0, 1), got {}", liu_west_a));
  }
  if (!(resample_threshold >= 0.0 && resample_threshold <= 1.0)) {
    throw ConfigError(fmt::format(
        "resampling threshold must lie in [0, 1], got {}", resample_threshold));
  }
}

ParticleEnsemble init_prior(const EstimatorConfig& config, RandomStream& stream) {
  config.validate();
  const auto k = static_cast<std::size_t>(config.particle_count);
  const double width = config.prior_high - config.prior_low;
  std::vector<double> positions(k);
  if (config.prior_placement == PriorPlacement::kStratified) {
    for (std::size_t i = 0; i < k; ++i) {
      positions[i] = config.prior_low +
                     width * (static_cast<double>(i) + 0.5) / static_cast<double>(k);
    }
  } else {
    for (auto& x : positions) x = config.prior_low + width * stream.uniform();
  }
  return make_uniform_ensemble(std::move(positions));
}

ParticleEnsemble init_prior(const EstimatorConfig& config) {
  RandomStream stream(config.rng_seed);
  return init_prior(config, stream);
}

double posterior_mean(const ParticleEnsemble& ensemble) noexcept {
  double mean = 0.0;
  for (std::size_t k = 0; k < ensemble.size(); ++k) {
    mean += ensemble.weights[k] * ensemble.positions[k];
  }
  return mean;
}

double posterior_variance(const ParticleEnsemble& ensemble) noexcept {
  const double mean = posterior_mean(ensemble);
  double second = 0.0;
  for (std::size_t k = 0; k < ensemble.size(); ++k) {
    const double d = ensemble.positions[k] - mean;
    second += ensemble.weights[k] * d * d;
  }
  return second;
}

void bayes_update(ParticleEnsemble& ensemble, std::int64_t r, double tau,
                  double beta, const ReadoutModel& readout) {
  const std::int64_t big_r = readout.repetitions();
  if (r < 0 || r > big_r) {
    throw ConfigError(fmt::format("count {} outside [0, {}]", r, big_r));
  }
  const double variance = count_variance(r, big_r);
  const double inv_two_var = 0.5 / variance;
  // R p_D = R alpha + R alpha V exp(-(tau/x)^beta)
  const double offset = static_cast<double>(big_r) * readout.alpha();
  const double contrast = offset * readout.visibility();
  const double observed = static_cast<double>(r);

  const std::size_t k = ensemble.size();
  const double* x = ensemble.positions.data();
  double* w = ensemble.weights.data();
  // The Gaussian factor is applied relative to the best-fitting particle.
  // The common scale cancels in the normalization, and a far-off count
  // cannot underflow every weight at once.
  thread_local std::vector<double> log_lik;
  log_lik.resize(k);
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < k; ++i) {
    const double mean = offset + contrast * std::exp(-scaled_exponent(tau, x[i], beta));
    const double d = observed - mean;
    log_lik[i] = -d * d * inv_two_var;
    if (w[i] > 0.0) best = std::max(best, log_lik[i]);
  }
  if (!std::isfinite(best)) best = 0.0;
  for (std::size_t i = 0; i < k; ++i) w[i] *= std::exp(log_lik[i] - best);
  normalize(ensemble, tau);
}

void bayes_update_single_shot(ParticleEnsemble& ensemble, int m, double tau,
                              double beta) {
  if (m != 0 && m != 1) {
    throw ConfigError(fmt::format("single-shot outcome must be 0 or 1, got {}", m));
  }
  const std::size_t k = ensemble.size();
  const double* x = ensemble.positions.data();
  double* w = ensemble.weights.data();
  for (std::size_t i = 0; i < k; ++i) {
    const double p1 = 0.5 * (1.0 - std::exp(-scaled_exponent(tau, x[i], beta)));
    w[i] *= m == 0 ? 1.0 - p1 : p1;
  }
  normalize(ensemble, tau);
}

void bayes_update(ParticleEnsemble& ensemble, std::int64_t outcome, double tau,
                  double beta, const MeasurementMode& mode) {
  if (const auto* readout = std::get_if<ReadoutModel>(&mode)) {
    bayes_update(ensemble, outcome, tau, beta, *readout);
  } else {
    bayes_update_single_shot(ensemble, static_cast<int>(outcome), tau, beta);
  }
}

double effective_sample_size(const ParticleEnsemble& ensemble) noexcept {
  double sum_sq = 0.0;
  for (double w : ensemble.weights) sum_sq += w * w;
  return 1.0 / sum_sq;
}

bool needs_resampling(const ParticleEnsemble& ensemble,
                      double threshold) noexcept {
  return effective_sample_size(ensemble) <
         static_cast<double>(ensemble.size()) * threshold;
}

std::vector<std::size_t> systematic_indices(const std::vector<double>& weights,
                                            double u0) {
  const std::size_t k = weights.size();
  std::vector<std::size_t> parents(k);
  const double step = 1.0 / static_cast<double>(k);
  double cumulative = weights.empty() ? 0.0 : weights[0];
  std::size_t j = 0;
  for (std::size_t i = 0; i < k; ++i) {
    const double target = (u0 + static_cast<double>(i)) * step;
    while (target > cumulative && j + 1 < k) {
      ++j;
      cumulative += weights[j];
    }
    parents[i] = j;
  }
  return parents;
}

void liu_west_resample(ParticleEnsemble& ensemble, double a,
                       LiuWestVariance variance, RandomStream& stream) {
  const std::size_t k = ensemble.size();
  const double mu = posterior_mean(ensemble);
  const double sigma2 = std::max(posterior_variance(ensemble), 0.0);
  const double kernel_var =
      variance == LiuWestVariance::kShrunk ? (1.0 - a * a) * sigma2 : sigma2;
  const double kernel_sd = std::sqrt(std::max(kernel_var, 0.0));

  const auto parents = systematic_indices(ensemble.weights, stream.uniform());
  std::vector<double> children(k);
  std::normal_distribution<double> standard_normal(0.0, 1.0);
  for (std::size_t i = 0; i < k; ++i) {
    const double centre = a * ensemble.positions[parents[i]] + (1.0 - a) * mu;
    double child = centre;
    if (kernel_sd > 0.0) {
      do {
        child = centre + kernel_sd * standard_normal(stream);
      } while (!(child > 0.0));
    }
    children[i] = child;
  }
  ensemble.positions = std::move(children);
  std::fill(ensemble.weights.begin(), ensemble.weights.end(),
            1.0 / static_cast<double>(k));
}

bool maybe_resample(ParticleEnsemble& ensemble, const EstimatorConfig& config,
                    RandomStream& stream) {
  if (!needs_resampling(ensemble, config.resample_threshold)) return false;
  liu_west_resample(ensemble, config.liu_west_a, config.liu_west_variance, stream);
  return true;
}

}  // namespace qdecay
