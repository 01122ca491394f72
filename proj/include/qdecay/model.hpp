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

#ifndef QDECAY_MODEL_HPP_
#define QDECAY_MODEL_HPP_

#include <cstdint>
#include <string_view>
#include <variant>

namespace qdecay {

// Coherence decay exp(-(t / t_chi)^beta). Times are in seconds.
class DecayLaw {
 public:
  // Throws ConfigError unless t_chi > 0 and beta > 0.
  DecayLaw(double t_chi, double beta);

  double t_chi() const noexcept { return t_chi_; }
  double beta() const noexcept { return beta_; }

  // (tau / t_chi)^beta.
  double exponent(double tau) const noexcept;
  // exp(-(tau / t_chi)^beta), in [0, 1].
  double envelope(double tau) const noexcept;

  friend bool operator==(const DecayLaw&, const DecayLaw&) = default;

 private:
  double t_chi_;
  double beta_;
};

// Optical readout averaged over R repetitions. State |0> is the bright state.
class ReadoutModel {
 public:
  // Throws ConfigError unless 0 <= p_click_1 < p_click_0 <= 1 and
  // repetitions >= 1.
  ReadoutModel(double p_click_0, double p_click_1, std::int64_t repetitions);

  double p_click_0() const noexcept { return p_click_0_; }
  double p_click_1() const noexcept { return p_click_1_; }
  std::int64_t repetitions() const noexcept { return repetitions_; }

  // Mean click probability (p0 + p1) / 2.
  double alpha() const noexcept { return 0.5 * (p_click_0_ + p_click_1_); }
  // Contrast (p0 - p1) / (p0 + p1).
  double visibility() const noexcept {
    return (p_click_0_ - p_click_1_) / (p_click_0_ + p_click_1_);
  }

  friend bool operator==(const ReadoutModel&, const ReadoutModel&) = default;

 private:
  double p_click_0_;
  double p_click_1_;
  std::int64_t repetitions_;
};

// Projective binary readout, one shot per epoch.
struct SingleShot {
  friend bool operator==(SingleShot, SingleShot) = default;
};

using MeasurementMode = std::variant<SingleShot, ReadoutModel>;

// Shots per epoch: 1 for single-shot readout, R otherwise.
std::int64_t repetitions(const MeasurementMode& mode) noexcept;

enum class ExperimentKind { kRelaxation, kRamsey, kHahnEcho };

// Ratio of sequence duration to the probing delay tau (2 for a Hahn echo).
double duration_factor(ExperimentKind kind) noexcept;
// Conventional decay exponent for the experiment (1, 2 and 3/2).
double default_beta(ExperimentKind kind) noexcept;
std::string_view to_string(ExperimentKind kind) noexcept;
// Accepts "relaxation"/"t1", "ramsey"/"t2star", "echo"/"hahn_echo"/"t2".
ExperimentKind parse_experiment_kind(std::string_view name);

// Probability of binary outcome m (0 or 1) after delay tau:
// (1 + (-1)^m exp(-(tau/t_chi)^beta)) / 2.
double outcome_likelihood(int m, double tau, const DecayLaw& law) noexcept;

// Per-shot click probability alpha (1 + V exp(-(tau/t_chi)^beta)).
double detection_probability(double tau, const DecayLaw& law,
                             const ReadoutModel& readout) noexcept;

// Variance of the Gaussian count approximation for an observed count r out of
// R shots: r (R - r) / R, floored at one count squared.
double count_variance(std::int64_t r, std::int64_t repetitions) noexcept;

// Gaussian approximation of the binomial count density: mean R p_D, variance
// count_variance(r, R).
double count_likelihood(std::int64_t r, double tau, const DecayLaw& law,
                        const ReadoutModel& readout) noexcept;

// Total sequence time for delay tau.
double sequence_duration(double tau, ExperimentKind kind) noexcept;

}  // namespace qdecay

#endif  // QDECAY_MODEL_HPP_
