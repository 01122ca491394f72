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

#include "qdecay/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <fmt/format.h>

#include "qdecay/errors.hpp"

namespace qdecay {

DecayLaw::DecayLaw(double t_chi, double beta) : t_chi_(t_chi), beta_(beta) {
  if (!(t_chi > 0.0) || !std::isfinite(t_chi)) {
    throw ConfigError(fmt::format("decay time must be positive, got {}", t_chi));
  }
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw ConfigError(fmt::format("decay exponent must be positive, got {}", beta));
  }
}

double DecayLaw::exponent(double tau) const noexcept {
  const double x = tau / t_chi_;
  if (beta_ == 2.0) return x * x;
  if (beta_ == 1.0) return x;
  return std::pow(x, beta_);
}

double DecayLaw::envelope(double tau) const noexcept {
  return std::exp(-exponent(tau));
}

ReadoutModel::ReadoutModel(double p_click_0, double p_click_1,
                           std::int64_t repetitions)
    : p_click_0_(p_click_0), p_click_1_(p_click_1), repetitions_(repetitions) {
  if (!(p_click_1 >= 0.0 && p_click_1 < p_click_0 && p_click_0 <= 1.0)) {
    throw ConfigError(fmt::format(
        "readout requires 0 <= p_click_1 < p_click_0 <= 1, got p0={} p1={}",
        p_click_0, p_click_1));
  }
  if (repetitions < 1) {
    throw ConfigError(
        fmt::format("repetition count must be >= 1, got {}", repetitions));
  }
}

std::int64_t repetitions(const MeasurementMode& mode) noexcept {
  if (const auto* readout = std::get_if<ReadoutModel>(&mode)) {
    return readout->repetitions();
  }
  return 1;
}

double duration_factor(ExperimentKind kind) noexcept {
  return kind == ExperimentKind::kHahnEcho ? 2.0 : 1.0;
}

double default_beta(ExperimentKind kind) noexcept {
  switch (kind) {
    case ExperimentKind::kRelaxation:
      return 1.0;
    case ExperimentKind::kRamsey:
      return 2.0;
    case ExperimentKind::kHahnEcho:
      return 1.5;
  }
  return 1.0;
}

std::string_view to_string(ExperimentKind kind) noexcept {
  switch (kind) {
    case ExperimentKind::kRelaxation:
      return "relaxation";
    case ExperimentKind::kRamsey:
      return "ramsey";
    case ExperimentKind::kHahnEcho:
      return "echo";
  }
  return "unknown";
}

ExperimentKind parse_experiment_kind(std::string_view name) {
  if (name == "relaxation" || name == "t1") return ExperimentKind::kRelaxation;
  if (name == "ramsey" || name == "t2star") return ExperimentKind::kRamsey;
  if (name == "echo" || name == "hahn_echo" || name == "t2") {
    return ExperimentKind::kHahnEcho;
  }
  throw ConfigError(fmt::format("unknown experiment kind '{}'", name));
}

double outcome_likelihood(int m, double tau, const DecayLaw& law) noexcept {
  // p(0) is formed as 1 - p(1) so the two outcomes sum to exactly one.
  const double p1 = 0.5 * (1.0 - law.envelope(tau));
  return m == 0 ? 1.0 - p1 : p1;
}

double detection_probability(double tau, const DecayLaw& law,
                             const ReadoutModel& readout) noexcept {
  return readout.alpha() * (1.0 + readout.visibility() * law.envelope(tau));
}

double count_variance(std::int64_t r, std::int64_t repetitions) noexcept {
  const double rd = static_cast<double>(r);
  const double big_r = static_cast<double>(repetitions);
  return std::max(rd * (big_r - rd) / big_r, 1.0);
}

double count_likelihood(std::int64_t r, double tau, const DecayLaw& law,
                        const ReadoutModel& readout) noexcept {
  const double variance = count_variance(r, readout.repetitions());
  const double mean = static_cast<double>(readout.repetitions()) *
                      detection_probability(tau, law, readout);
  const double d = static_cast<double>(r) - mean;
  return std::exp(-d * d / (2.0 * variance)) /
         std::sqrt(2.0 * std::numbers::pi * variance);
}

double sequence_duration(double tau, ExperimentKind kind) noexcept {
  return duration_factor(kind) * tau;
}

}  // namespace qdecay
