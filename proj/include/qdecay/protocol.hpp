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

#ifndef QDECAY_PROTOCOL_HPP_
#define QDECAY_PROTOCOL_HPP_

#include <cstdint>
#include <string_view>
#include <vector>

#include "qdecay/estimator.hpp"
#include "qdecay/infotheory.hpp"
#include "qdecay/model.hpp"
#include "qdecay/random.hpp"
#include "qdecay/simulator.hpp"

namespace qdecay {

enum class Strategy {
  kAdaptiveVariance,     // tau = xi_F * posterior mean
  kAdaptiveSensitivity,  // tau = xi_{F/tau} * posterior mean
  kRandomTau,            // uniform on the prior support
  kSweepTau,             // ascending equally spaced grid over the support
};

std::string_view to_string(Strategy strategy) noexcept;
Strategy parse_strategy(std::string_view name);
bool is_adaptive(Strategy strategy) noexcept;

// Picks the probing delay for each epoch. Adaptive strategies only look at the
// posterior mean, never at the latest outcome.
class TauSelector {
 public:
  // Throws ConfigError when the strategy needs a xi that does not exist for
  // this beta (sensitivity with beta <= 1), or total_epochs < 0.
  TauSelector(Strategy strategy, double beta, const XiTable& xi_table,
              const EstimatorConfig& estimator, int total_epochs);

  // `stream` is drawn from only by kRandomTau.
  double next(const ParticleEnsemble& ensemble, int epoch_index,
              RandomStream& stream) const;

  Strategy strategy() const noexcept { return strategy_; }
  double xi() const noexcept { return xi_; }
  double tau_min() const noexcept { return tau_min_; }
  double tau_max() const noexcept { return tau_max_; }

 private:
  Strategy strategy_;
  double xi_ = 0.0;
  double tau_min_;
  double tau_max_;
  int total_epochs_;
};

double next_tau(Strategy strategy, const ParticleEnsemble& ensemble,
                int epoch_index, int total_epochs, const XiTable& xi_table,
                double beta, const EstimatorConfig& estimator,
                RandomStream& stream);

// Delay as transferred to the waveform generator: an index into a uniform
// grid of `levels` points over [low, high].
struct QuantizedTau {
  std::uint8_t index = 0;
  double tau = 0.0;
};

// Nearest grid point, ties rounded up. `levels` must be in [2, 256].
QuantizedTau quantize_tau(double tau, double low, double high, int levels = 256);

struct EpochRecord {
  std::int64_t epoch_index = 0;
  double tau = 0.0;                      // executed delay, seconds
  std::int64_t outcome = 0;              // r, or m in single-shot mode
  double cumulative_probing_time = 0.0;  // sum of R * sequence duration
  double estimate = 0.0;                 // posterior mean after the update
  double estimate_std = 0.0;
  bool resampled = false;

  friend bool operator==(const EpochRecord&, const EpochRecord&) = default;
};

// The "run tau, R times, return the number of clicks" step. In single-shot
// mode repetitions is 1 and the result is the binary outcome.
class MeasurementBackend {
 public:
  virtual ~MeasurementBackend() = default;
  virtual std::int64_t execute(double tau, std::int64_t repetitions) = 0;
};

// Draws outcomes from a hidden ground truth.
class SimulatedBackend final : public MeasurementBackend {
 public:
  SimulatedBackend(GroundTruth truth, MeasurementMode mode, RandomStream stream);
  std::int64_t execute(double tau, std::int64_t repetitions) override;

 private:
  GroundTruth truth_;
  MeasurementMode mode_;
  RandomStream stream_;
};

// Returns previously recorded outcomes in order. Each request must ask for the
// recorded delay (within a relative tolerance) and repetition count.
class ReplayBackend final : public MeasurementBackend {
 public:
  struct Entry {
    double tau = 0.0;
    std::int64_t outcome = 0;
  };

  ReplayBackend(std::vector<Entry> entries, std::int64_t repetitions,
                double relative_tolerance = 1e-9);
  explicit ReplayBackend(const std::vector<EpochRecord>& records,
                         std::int64_t repetitions,
                         double relative_tolerance = 1e-9);

  std::int64_t execute(double tau, std::int64_t repetitions) override;
  std::size_t remaining() const noexcept { return entries_.size() - next_; }

 private:
  std::vector<Entry> entries_;
  std::int64_t repetitions_;
  double tolerance_;
  std::size_t next_ = 0;
};

// Everything the epoch loop needs besides the data source.
struct ProtocolSetup {
  Strategy strategy = Strategy::kAdaptiveVariance;
  double beta = 2.0;  // decay exponent assumed by the estimator
  ExperimentKind kind = ExperimentKind::kRamsey;
  MeasurementMode mode = SingleShot{};
  EstimatorConfig estimator;
  int epochs = 100;
  // Round every delay to the 8-bit grid over the prior support.
  bool quantize_tau = false;
  int quantize_levels = 256;
  XiTable xi_table;
};

// Runs the adaptive estimation loop: pick tau, measure, update, resample when
// the effective sample size drops, record. The estimator's random draws come
// from stream.substream(0) and random delays from stream.substream(1).
//
// Throws DegeneratePosteriorError carrying the failing epoch index.
std::vector<EpochRecord> run_protocol(const ProtocolSetup& setup,
                                      MeasurementBackend& backend,
                                      const RandomStream& stream);

}  // namespace qdecay

#endif  // QDECAY_PROTOCOL_HPP_
