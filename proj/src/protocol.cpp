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

#include "qdecay/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include <fmt/format.h>

#include "qdecay/errors.hpp"

namespace qdecay {

std::string_view to_string(Strategy strategy) noexcept {
  switch (strategy) {
    case Strategy::kAdaptiveVariance:
      return "adaptive_variance";
    case Strategy::kAdaptiveSensitivity:
      return "adaptive_sensitivity";
    case Strategy::kRandomTau:
      return "random";
    case Strategy::kSweepTau:
      return "sweep";
  }
  return "unknown";
}

Strategy parse_strategy(std::string_view name) {
  if (name == "adaptive_variance" || name == "variance" || name == "var") {
    return Strategy::kAdaptiveVariance;
  }
  if (name == "adaptive_sensitivity" || name == "sensitivity" || name == "sens") {
    return Strategy::kAdaptiveSensitivity;
  }
  if (name == "random") return Strategy::kRandomTau;
  if (name == "sweep") return Strategy::kSweepTau;
  throw ConfigError(fmt::format("unknown strategy '{}'", name));
}

bool is_adaptive(Strategy strategy) noexcept {
  return strategy == Strategy::kAdaptiveVariance ||
         strategy == Strategy::kAdaptiveSensitivity;
}

TauSelector::TauSelector(Strategy strategy, double beta, const XiTable& xi_table,
                         const EstimatorConfig& estimator, int total_epochs)
    : strategy_(strategy),
      tau_min_(estimator.prior_low),
      tau_max_(estimator.prior_high),
      total_epochs_(total_epochs) {
  if (total_epochs < 0) {
    throw ConfigError(fmt::format("epoch count must be >= 0, got {}", total_epochs));
  }
  if (is_adaptive(strategy)) {
    const Criterion criterion = strategy == Strategy::kAdaptiveVariance
                                    ? Criterion::kVariance
                                    : Criterion::kSensitivity;
    try {
      xi_ = xi_table.at(criterion, beta);
    } catch (const NoMaximumError& e) {
      throw ConfigError(fmt::format("strategy {} is unavailable: {}",
                                    to_string(strategy), e.what()));
    }
  }
}

double TauSelector::next(const ParticleEnsemble& ensemble, int epoch_index,
                         RandomStream& stream) const {
  switch (strategy_) {
    case Strategy::kAdaptiveVariance:
    case Strategy::kAdaptiveSensitivity:
      return std::clamp(xi_ * posterior_mean(ensemble), tau_min_, tau_max_);
    case Strategy::kRandomTau:
      return tau_min_ + (tau_max_ - tau_min_) * stream.uniform();
    case Strategy::kSweepTau:
      if (total_epochs_ <= 1) return tau_min_;
      return tau_min_ + (tau_max_ - tau_min_) * static_cast<double>(epoch_index) /
                            static_cast<double>(total_epochs_ - 1);
  }
  return tau_min_;
}

double next_tau(Strategy strategy, const ParticleEnsemble& ensemble,
                int epoch_index, int total_epochs, const XiTable& xi_table,
                double beta, const EstimatorConfig& estimator,
                RandomStream& stream) {
  return TauSelector(strategy, beta, xi_table, estimator, total_epochs)
      .next(ensemble, epoch_index, stream);
}

QuantizedTau quantize_tau(double tau, double low, double high, int levels) {
  if (levels < 2 || levels > 256) {
    throw ConfigError(fmt::format("quantization levels must be in [2, 256], got {}",
                                  levels));
  }
  if (!(high > low)) {
    throw ConfigError(fmt::format("empty quantization support [{}, {}]", low, high));
  }
  const double span = high - low;
  const double top = static_cast<double>(levels - 1);
  const double position = std::clamp((tau - low) / span * top, 0.0, top);
  const auto index = static_cast<std::uint8_t>(std::floor(position + 0.5));
  return {index, low + span * static_cast<double>(index) / top};
}

SimulatedBackend::SimulatedBackend(GroundTruth truth, MeasurementMode mode,
                                   RandomStream stream)
    : truth_(std::move(truth)), mode_(std::move(mode)), stream_(stream) {}

std::int64_t SimulatedBackend::execute(double tau, std::int64_t repetitions) {
  if (const auto* readout = std::get_if<ReadoutModel>(&mode_)) {
    if (repetitions != readout->repetitions()) {
      throw ConfigError(fmt::format("backend configured for R={}, asked for {}",
                                    readout->repetitions(), repetitions));
    }
    return sample_counts(tau, truth_, *readout, stream_);
  }
  if (repetitions != 1) {
    throw ConfigError(fmt::format(
        "single-shot backend asked for {} repetitions", repetitions));
  }
  return sample_single_shot(tau, truth_, stream_);
}

ReplayBackend::ReplayBackend(std::vector<Entry> entries, std::int64_t repetitions,
                             double relative_tolerance)
    : entries_(std::move(entries)),
      repetitions_(repetitions),
      tolerance_(relative_tolerance) {}

ReplayBackend::ReplayBackend(const std::vector<EpochRecord>& records,
                             std::int64_t repetitions, double relative_tolerance)
    : repetitions_(repetitions), tolerance_(relative_tolerance) {
  entries_.reserve(records.size());
  for (const auto& record : records) {
    entries_.push_back({record.tau, record.outcome});
  }
}

std::int64_t ReplayBackend::execute(double tau, std::int64_t repetitions) {
  if (next_ >= entries_.size()) {
    throw ConfigError(fmt::format("replay log exhausted after {} epochs",
                                  entries_.size()));
  }
  if (repetitions != repetitions_) {
    throw ConfigError(fmt::format("replay log recorded R={}, asked for {}",
                                  repetitions_, repetitions));
  }
  const Entry& entry = entries_[next_];
  if (std::abs(tau - entry.tau) > tolerance_ * std::abs(entry.tau)) {
    throw ConfigError(fmt::format(
        "replay diverged at epoch {}: requested tau={:.17g} s, logged {:.17g} s",
        next_, tau, entry.tau));
  }
  ++next_;
  return entry.outcome;
}

std::vector<EpochRecord> run_protocol(const ProtocolSetup& setup,
                                      MeasurementBackend& backend,
                                      const RandomStream& stream) {
  setup.estimator.validate();
  if (setup.epochs < 0) {
    throw ConfigError(fmt::format("epoch count must be >= 0, got {}", setup.epochs));
  }
  RandomStream estimator_stream = stream.substream(0);
  RandomStream tau_stream = stream.substream(1);

  const TauSelector selector(setup.strategy, setup.beta, setup.xi_table,
                             setup.estimator, setup.epochs);
  const std::int64_t shots = repetitions(setup.mode);
  ParticleEnsemble ensemble = init_prior(setup.estimator, estimator_stream);

  std::vector<EpochRecord> records;
  records.reserve(static_cast<std::size_t>(setup.epochs));
  double cumulative = 0.0;
  for (int epoch = 0; epoch < setup.epochs; ++epoch) {
    double tau = selector.next(ensemble, epoch, tau_stream);
    if (setup.quantize_tau) {
      tau = quantize_tau(tau, selector.tau_min(), selector.tau_max(),
                         setup.quantize_levels)
                .tau;
    }
    const std::int64_t outcome = backend.execute(tau, shots);
    try {
      bayes_update(ensemble, outcome, tau, setup.beta, setup.mode);
    } catch (const DegeneratePosteriorError& e) {
      throw DegeneratePosteriorError(
          fmt::format("epoch {}: {}", epoch, e.what()), epoch);
    }
    EpochRecord record;
    record.epoch_index = epoch;
    record.tau = tau;
    record.outcome = outcome;
    cumulative += static_cast<double>(shots) * sequence_duration(tau, setup.kind);
    record.cumulative_probing_time = cumulative;
    // Summaries are taken before rejuvenation so they reflect the weighted
    // posterior that the data produced.
    record.estimate = posterior_mean(ensemble);
    record.estimate_std = std::sqrt(posterior_variance(ensemble));
    record.resampled = maybe_resample(ensemble, setup.estimator, estimator_stream);
    records.push_back(record);
  }
  return records;
}

}  // namespace qdecay
