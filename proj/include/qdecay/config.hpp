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

#ifndef QDECAY_CONFIG_HPP_
#define QDECAY_CONFIG_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qdecay/estimator.hpp"
#include "qdecay/infotheory.hpp"
#include "qdecay/model.hpp"
#include "qdecay/protocol.hpp"

namespace qdecay {

inline constexpr int kConfigSchemaVersion = 1;

enum class XiSource {
  kSolver,     // numerically maximized at startup
  kPublished,  // literal published table
};

// A complete batch experiment. Serialized as INI-style text:
//
//   [run]        schema_version, name, replicas, seed, threads, grid_points,
//                bootstrap_draws
//   [truth]      t_chi, beta, kind
//   [readout]    mode (single_shot | photon_count), p_click_0, p_click_1,
//                repetitions
//   [estimator]  particles, prior_low, prior_high, liu_west_a,
//                resample_threshold, liu_west_variance (shrunk | full),
//                prior_placement (stratified | random)
//   [protocol]   strategies (comma list), epochs, quantize_tau,
//                quantize_levels
//   [infotheory] xi_source (solver | published), xi_variance,
//                xi_sensitivity, crlb_mode (time | shots)
//
// Durations accept s, ms, us (or µs) and ns suffixes; bare numbers are
// seconds.
struct RunConfig {
  std::string name = "custom";
  int replicas = 100;
  std::uint64_t seed = 1;
  unsigned threads = 0;  // 0: hardware concurrency
  int grid_points = 200;
  int bootstrap_draws = 1000;

  double t_chi = 2.5e-6;
  double beta = 2.0;
  ExperimentKind kind = ExperimentKind::kRamsey;

  MeasurementMode mode = SingleShot{};

  EstimatorConfig estimator;

  std::vector<Strategy> strategies = {Strategy::kAdaptiveSensitivity,
                                      Strategy::kAdaptiveVariance,
                                      Strategy::kRandomTau};
  int epochs = 500;
  bool quantize_tau = false;
  int quantize_levels = 256;

  XiSource xi_source = XiSource::kSolver;
  std::optional<double> xi_variance;
  std::optional<double> xi_sensitivity;
  CrlbMode crlb_mode = CrlbMode::kTimeBudget;

  DecayLaw truth_law() const { return DecayLaw(t_chi, beta); }
  std::optional<ReadoutModel> readout() const;

  // Throws ConfigError on any inconsistency, including a strategy that needs
  // a xi the decay exponent does not admit.
  void validate() const;

  // Resolved xi table for this configuration's beta.
  XiTable xi_table() const;

  ProtocolSetup protocol_setup(Strategy strategy) const;
};

// Parses a duration such as "2.5us", "8 ms" or "1e-6".
double parse_duration(std::string_view text);

RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);

// Canonical text form; parse_config(to_config_text(c)) reproduces c.
std::string to_config_text(const RunConfig& config);

// FNV-1a 64 of the canonical text, as 16 hex digits.
std::string config_hash(const RunConfig& config);

// Built-in presets: fig2b, fig2c, fig3a, fig3b, fig4.
RunConfig preset(std::string_view name);
std::vector<std::string> preset_names();

}  // namespace qdecay

#endif  // QDECAY_CONFIG_HPP_
