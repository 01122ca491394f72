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

#ifndef QDECAY_HARNESS_HPP_
#define QDECAY_HARNESS_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "qdecay/config.hpp"
#include "qdecay/protocol.hpp"
#include "qdecay/random.hpp"

namespace qdecay {

inline constexpr std::string_view kCodeVersion = "0.1.0";

struct SummaryMetadata {
  std::string config_name;
  std::string config_hash;
  std::uint64_t seed = 0;
  std::string code_version;
  int excluded_replicas = 0;  // replicas aborted by a degenerate posterior
  std::string bound;          // which information the bound overlay uses
  std::string time_accounting;

  friend bool operator==(const SummaryMetadata&, const SummaryMetadata&) = default;
};

// Uncertainty against cumulative probing time for one strategy. All times and
// uncertainties are in seconds.
struct RunSummary {
  Strategy strategy = Strategy::kAdaptiveVariance;
  int replicas = 0;  // replicas that contributed
  std::vector<double> grid;         // strictly increasing
  std::vector<double> uncertainty;  // sqrt(mean over replicas of error^2)
  std::vector<double> ci_lo;        // 95% percentile bootstrap band
  std::vector<double> ci_hi;
  std::vector<double> bound;        // Cramer-Rao envelope at each grid time
  SummaryMetadata metadata;

  friend bool operator==(const RunSummary&, const RunSummary&) = default;
};

struct ReplicaResult {
  std::vector<EpochRecord> records;
  double prior_mean = 0.0;
  bool excluded = false;
  std::string error;
};

// Per-replica random streams. The protocol stream drives the estimator and
// delay selection; the measurement stream drives the simulated backend.
RandomStream replica_stream(std::uint64_t seed, int replica);
RandomStream protocol_stream(const RandomStream& replica, Strategy strategy);
RandomStream measurement_stream(const RandomStream& replica, Strategy strategy);

// One seeded protocol run against the configured ground truth.
ReplicaResult run_replica(const RunConfig& config, Strategy strategy, int replica);

// Runs `replicas` independent protocol runs, concurrently when
// config.threads allows. Results are indexed by replica and do not depend on
// scheduling. Degenerate posteriors mark the replica excluded.
std::vector<ReplicaResult> simulate_replicas(const RunConfig& config,
                                             Strategy strategy, int replicas);

// `points` log-spaced times from the earliest first-epoch time to the latest
// last-epoch time over all non-excluded replicas of all sets.
std::vector<double> make_time_grid(
    const std::vector<const std::vector<ReplicaResult>*>& sets, int points);

// Step-hold |estimate - truth| of one replica at each grid time. Before the
// first epoch the prior mean is the estimate.
std::vector<double> replica_errors(const ReplicaResult& replica,
                                   const std::vector<double>& grid, double truth);

RunSummary summarize(const RunConfig& config, Strategy strategy,
                     const std::vector<ReplicaResult>& results,
                     const std::vector<double>& grid);

// simulate_replicas + make_time_grid + summarize for one strategy. Throws
// ConfigError for an invalid configuration.
RunSummary run_batch(const RunConfig& config, Strategy strategy, int replicas);

// Every configured strategy on one shared time grid.
std::vector<RunSummary> run_all(const RunConfig& config);

// First grid time with uncertainty <= target. Throws NotReachedError.
double time_to_uncertainty(const RunSummary& summary, double target);

// Probing time at which a replica's posterior standard deviation first drops
// to `target`; +infinity if it never does.
double time_to_posterior_std(const ReplicaResult& replica, double target);

// Median over non-excluded replicas of time_to_posterior_std.
double median_time_to_posterior_std(const std::vector<ReplicaResult>& results,
                                    double target);

// Sensitivity figure of merit uncertainty^2 * t at each grid point.
std::vector<double> sensitivity_curve(const RunSummary& summary);

}  // namespace qdecay

#endif  // QDECAY_HARNESS_HPP_
