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

#include "qdecay/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include <fmt/format.h>

#include "qdecay/errors.hpp"
#include "qdecay/infotheory.hpp"

namespace qdecay {
namespace {

constexpr std::uint64_t kProtocolSalt = 0x100;
constexpr std::uint64_t kMeasurementSalt = 0x200;
constexpr std::uint64_t kBootstrapSalt = 0x300;

double percentile(std::vector<double>& values, double q) {
  std::sort(values.begin(), values.end());
  const double position = q * static_cast<double>(values.size() - 1);
  const auto lower = static_cast<std::size_t>(std::floor(position));
  const std::size_t upper = std::min(lower + 1, values.size() - 1);
  const double frac = position - static_cast<double>(lower);
  return values[lower] + frac * (values[upper] - values[lower]);
}

unsigned worker_count(unsigned requested, int jobs) {
  unsigned n = requested != 0 ? requested : std::thread::hardware_concurrency();
  n = std::max(1u, n);
  return std::min<unsigned>(n, static_cast<unsigned>(std::max(jobs, 1)));
}

}  // namespace

RandomStream replica_stream(std::uint64_t seed, int replica) {
  return RandomStream(seed).substream(static_cast<std::uint64_t>(replica));
}

RandomStream protocol_stream(const RandomStream& replica, Strategy strategy) {
  return replica.substream(kProtocolSalt + static_cast<std::uint64_t>(strategy));
}

RandomStream measurement_stream(const RandomStream& replica, Strategy strategy) {
  return replica.substream(kMeasurementSalt + static_cast<std::uint64_t>(strategy));
}

ReplicaResult run_replica(const RunConfig& config, Strategy strategy, int replica) {
  const ProtocolSetup setup = config.protocol_setup(strategy);
  const RandomStream stream = replica_stream(config.seed, replica);
  const RandomStream protocol = protocol_stream(stream, strategy);

  ReplicaResult result;
  {
    // Same draw run_protocol makes for the prior, so the pre-data estimate
    // is exact for random placement too.
    RandomStream estimator = protocol.substream(0);
    result.prior_mean = posterior_mean(init_prior(setup.estimator, estimator));
  }
  SimulatedBackend backend(GroundTruth{config.truth_law(), config.kind}, config.mode,
                           measurement_stream(stream, strategy));
  try {
    result.records = run_protocol(setup, backend, protocol);
  } catch (const DegeneratePosteriorError& e) {
    result.excluded = true;
    result.error = e.what();
    result.records.clear();
  }
  return result;
}

std::vector<ReplicaResult> simulate_replicas(const RunConfig& config,
                                             Strategy strategy, int replicas) {
  config.validate();
  std::vector<ReplicaResult> results(static_cast<std::size_t>(replicas));
  std::atomic<int> next{0};
  auto work = [&] {
    for (int i = next++; i < replicas; i = next++) {
      results[static_cast<std::size_t>(i)] = run_replica(config, strategy, i);
    }
  };
  const unsigned workers = worker_count(config.threads, replicas);
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  return results;
}

std::vector<double> make_time_grid(
    const std::vector<const std::vector<ReplicaResult>*>& sets, int points) {
  double first = std::numeric_limits<double>::infinity();
  double last = 0.0;
  for (const auto* set : sets) {
    for (const auto& replica : *set) {
      if (replica.excluded || replica.records.empty()) continue;
      first = std::min(first, replica.records.front().cumulative_probing_time);
      last = std::max(last, replica.records.back().cumulative_probing_time);
    }
  }
  if (!std::isfinite(first)) return {};
  if (!(last > first) || points < 2) return {first};
  std::vector<double> grid(static_cast<std::size_t>(points));
  const double log_first = std::log(first);
  const double log_step = (std::log(last) - log_first) / (points - 1);
  for (int i = 0; i < points; ++i) {
    grid[static_cast<std::size_t>(i)] = std::exp(log_first + log_step * i);
  }
  grid.front() = first;
  grid.back() = last;
  return grid;
}

std::vector<double> replica_errors(const ReplicaResult& replica,
                                   const std::vector<double>& grid, double truth) {
  std::vector<double> errors(grid.size());
  double estimate = replica.prior_mean;
  std::size_t epoch = 0;
  const auto& records = replica.records;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    while (epoch < records.size() && records[epoch].cumulative_probing_time <= grid[g]) {
      estimate = records[epoch].estimate;
      ++epoch;
    }
    errors[g] = std::abs(estimate - truth);
  }
  return errors;
}

RunSummary summarize(const RunConfig& config, Strategy strategy,
                     const std::vector<ReplicaResult>& results,
                     const std::vector<double>& grid) {
  RunSummary summary;
  summary.strategy = strategy;
  summary.metadata.config_name = config.name;
  summary.metadata.config_hash = config_hash(config);
  summary.metadata.seed = config.seed;
  summary.metadata.code_version = std::string(kCodeVersion);
  summary.metadata.bound = config.readout()
                               ? "crlb_per_repetition_click_information"
                               : "crlb_single_shot_information";
  summary.metadata.time_accounting =
      "cumulative pure probing time R * sequence_duration(tau); "
      "initialization and readout overhead excluded";

  std::vector<std::vector<double>> squared;
  for (const auto& replica : results) {
    if (replica.excluded) {
      ++summary.metadata.excluded_replicas;
      continue;
    }
    auto errors = replica_errors(replica, grid, config.t_chi);
    for (double& e : errors) e *= e;
    squared.push_back(std::move(errors));
  }
  summary.replicas = static_cast<int>(squared.size());
  if (squared.empty() || grid.empty()) return summary;

  const std::size_t n = squared.size();
  const std::size_t points = grid.size();
  summary.grid = grid;
  summary.uncertainty.assign(points, 0.0);
  for (const auto& row : squared) {
    for (std::size_t g = 0; g < points; ++g) summary.uncertainty[g] += row[g];
  }
  for (double& u : summary.uncertainty) u = std::sqrt(u / static_cast<double>(n));

  // Percentile bootstrap over replicas; one resample of replica indices is
  // shared across the grid so each draw is a coherent curve.
  RandomStream stream = RandomStream(config.seed).substream(
      kBootstrapSalt + static_cast<std::uint64_t>(strategy));
  const auto draws = static_cast<std::size_t>(config.bootstrap_draws);
  std::vector<std::vector<double>> boot(points, std::vector<double>(draws));
  std::vector<double> acc(points);
  for (std::size_t b = 0; b < draws; ++b) {
    std::fill(acc.begin(), acc.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const auto pick = static_cast<std::size_t>(stream.uniform() * static_cast<double>(n));
      const auto& row = squared[std::min(pick, n - 1)];
      for (std::size_t g = 0; g < points; ++g) acc[g] += row[g];
    }
    for (std::size_t g = 0; g < points; ++g) {
      boot[g][b] = std::sqrt(acc[g] / static_cast<double>(n));
    }
  }
  summary.ci_lo.resize(points);
  summary.ci_hi.resize(points);
  for (std::size_t g = 0; g < points; ++g) {
    summary.ci_lo[g] = std::min(percentile(boot[g], 0.025), summary.uncertainty[g]);
    summary.ci_hi[g] = std::max(percentile(boot[g], 0.975), summary.uncertainty[g]);
  }

  const DecayLaw law = config.truth_law();
  const auto readout = config.readout();
  summary.bound.resize(points);
  for (std::size_t g = 0; g < points; ++g) {
    summary.bound[g] = crlb_envelope(grid[g], law, readout, Criterion::kSensitivity,
                                     config.crlb_mode, duration_factor(config.kind));
  }
  return summary;
}

RunSummary run_batch(const RunConfig& config, Strategy strategy, int replicas) {
  const auto results = simulate_replicas(config, strategy, replicas);
  const auto grid = make_time_grid({&results}, config.grid_points);
  return summarize(config, strategy, results, grid);
}

std::vector<RunSummary> run_all(const RunConfig& config) {
  config.validate();
  std::vector<std::vector<ReplicaResult>> sets;
  sets.reserve(config.strategies.size());
  for (Strategy s : config.strategies) {
    sets.push_back(simulate_replicas(config, s, config.replicas));
  }
  std::vector<const std::vector<ReplicaResult>*> views;
  for (const auto& set : sets) views.push_back(&set);
  const auto grid = make_time_grid(views, config.grid_points);
  std::vector<RunSummary> summaries;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    summaries.push_back(summarize(config, config.strategies[i], sets[i], grid));
  }
  return summaries;
}

double time_to_uncertainty(const RunSummary& summary, double target) {
  if (!(target > 0.0)) {
    throw ConfigError(fmt::format("target uncertainty must be positive, got {}", target));
  }
  for (std::size_t g = 0; g < summary.grid.size(); ++g) {
    if (summary.uncertainty[g] <= target) return summary.grid[g];
  }
  throw NotReachedError(fmt::format("{} never reaches uncertainty {:.6g} s",
                                    to_string(summary.strategy), target));
}

double time_to_posterior_std(const ReplicaResult& replica, double target) {
  for (const auto& record : replica.records) {
    if (record.estimate_std <= target) return record.cumulative_probing_time;
  }
  return std::numeric_limits<double>::infinity();
}

double median_time_to_posterior_std(const std::vector<ReplicaResult>& results,
                                    double target) {
  std::vector<double> times;
  for (const auto& replica : results) {
    if (!replica.excluded) times.push_back(time_to_posterior_std(replica, target));
  }
  if (times.empty()) return std::numeric_limits<double>::infinity();
  std::sort(times.begin(), times.end());
  const std::size_t mid = times.size() / 2;
  if (times.size() % 2 == 1) return times[mid];
  return 0.5 * (times[mid - 1] + times[mid]);
}

std::vector<double> sensitivity_curve(const RunSummary& summary) {
  std::vector<double> eta2(summary.grid.size());
  for (std::size_t g = 0; g < eta2.size(); ++g) {
    eta2[g] = summary.uncertainty[g] * summary.uncertainty[g] * summary.grid[g];
  }
  return eta2;
}

}  // namespace qdecay
