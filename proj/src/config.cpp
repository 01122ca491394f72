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

#include "qdecay/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

#include "qdecay/errors.hpp"

namespace qdecay {
namespace {

namespace pt = boost::property_tree;

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

double parse_number(std::string_view text, std::string_view key) {
  text = trim(text);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ConfigError(fmt::format("{}: expected a number, got '{}'", key, text));
  }
  return value;
}

template <typename Int>
Int parse_integer(std::string_view text, std::string_view key) {
  text = trim(text);
  Int value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ConfigError(fmt::format("{}: expected an integer, got '{}'", key, text));
  }
  return value;
}

bool parse_bool(std::string_view text, std::string_view key) {
  text = trim(text);
  if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
  if (text == "false" || text == "0" || text == "no" || text == "off") return false;
  throw ConfigError(fmt::format("{}: expected a boolean, got '{}'", key, text));
}

std::vector<Strategy> parse_strategy_list(std::string_view text) {
  std::vector<Strategy> strategies;
  while (!text.empty()) {
    const auto comma = text.find(',');
    const auto item = trim(text.substr(0, comma));
    if (!item.empty()) strategies.push_back(parse_strategy(item));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return strategies;
}

std::string format_double(double value) { return fmt::format("{:.17g}", value); }

class Reader {
 public:
  explicit Reader(const pt::ptree& tree) : tree_(tree) {}

  std::optional<std::string> get(const std::string& path) const {
    if (auto node = tree_.get_optional<std::string>(pt::ptree::path_type(path, '.'))) {
      return std::string(trim(*node));
    }
    return std::nullopt;
  }

  void number(const std::string& path, double& out) const {
    if (auto v = get(path)) out = parse_number(*v, path);
  }
  void duration(const std::string& path, double& out) const {
    if (auto v = get(path)) {
      try {
        out = parse_duration(*v);
      } catch (const ConfigError& e) {
        throw ConfigError(fmt::format("{}: {}", path, e.what()));
      }
    }
  }
  template <typename Int>
  void integer(const std::string& path, Int& out) const {
    if (auto v = get(path)) out = parse_integer<Int>(*v, path);
  }
  void boolean(const std::string& path, bool& out) const {
    if (auto v = get(path)) out = parse_bool(*v, path);
  }

 private:
  const pt::ptree& tree_;
};

RunConfig base_preset() {
  RunConfig config;
  config.t_chi = 2.5e-6;
  config.beta = 2.0;
  config.kind = ExperimentKind::kRamsey;
  config.estimator.prior_low = 0.1e-6;
  config.estimator.prior_high = 8e-6;
  return config;
}

}  // namespace

std::optional<ReadoutModel> RunConfig::readout() const {
  if (const auto* r = std::get_if<ReadoutModel>(&mode)) return *r;
  return std::nullopt;
}

void RunConfig::validate() const {
  (void)truth_law();
  estimator.validate();
  if (replicas < 1) {
    throw ConfigError(fmt::format("replicas must be >= 1, got {}", replicas));
  }
  if (epochs < 0) throw ConfigError(fmt::format("epochs must be >= 0, got {}", epochs));
  if (grid_points < 2) {
    throw ConfigError(fmt::format("grid_points must be >= 2, got {}", grid_points));
  }
  if (bootstrap_draws < 1) {
    throw ConfigError(
        fmt::format("bootstrap_draws must be >= 1, got {}", bootstrap_draws));
  }
  if (strategies.empty()) throw ConfigError("no strategies configured");
  if (quantize_levels < 2 || quantize_levels > 256) {
    throw ConfigError(
        fmt::format("quantize_levels must be in [2, 256], got {}", quantize_levels));
  }
  const XiTable table = xi_table();
  for (Strategy s : strategies) {
    (void)TauSelector(s, beta, table, estimator, epochs);
  }
}

XiTable RunConfig::xi_table() const {
  XiTable table;
  if (xi_source == XiSource::kPublished) {
    const XiTable published = XiTable::published();
    for (const auto& [key, xi] : published.entries()) {
      if (key.second == beta) table.set(key.first, beta, xi);
    }
  }
  for (Criterion c : {Criterion::kVariance, Criterion::kSensitivity}) {
    if (!table.contains(c, beta)) {
      try {
        table.set(c, beta, solve_xi(beta, c));
      } catch (const NoMaximumError&) {
      }
    }
  }
  if (xi_variance) table.set(Criterion::kVariance, beta, *xi_variance);
  if (xi_sensitivity) table.set(Criterion::kSensitivity, beta, *xi_sensitivity);
  return table;
}

ProtocolSetup RunConfig::protocol_setup(Strategy strategy) const {
  ProtocolSetup setup;
  setup.strategy = strategy;
  setup.beta = beta;
  setup.kind = kind;
  setup.mode = mode;
  setup.estimator = estimator;
  setup.epochs = epochs;
  setup.quantize_tau = quantize_tau;
  setup.quantize_levels = quantize_levels;
  setup.xi_table = xi_table();
  return setup;
}

double parse_duration(std::string_view text) {
  text = trim(text);
  struct Unit {
    std::string_view suffix;
    double scale;
  };
  static constexpr Unit kUnits[] = {{"ns", 1e-9}, {"us", 1e-6}, {"\xC2\xB5s", 1e-6},
                                    {"ms", 1e-3}, {"s", 1.0}};
  double scale = 1.0;
  for (const auto& unit : kUnits) {
    if (text.size() > unit.suffix.size() && text.ends_with(unit.suffix)) {
      scale = unit.scale;
      text.remove_suffix(unit.suffix.size());
      break;
    }
  }
  text = trim(text);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw ConfigError(fmt::format("cannot parse duration '{}'", text));
  }
  return value * scale;
}

RunConfig parse_config(std::string_view text) {
  pt::ptree tree;
  std::istringstream in{std::string(text)};
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(fmt::format("malformed config: {}", e.message()));
  }
  const Reader r(tree);

  int version = kConfigSchemaVersion;
  r.integer("run.schema_version", version);
  if (version != kConfigSchemaVersion) {
    throw ConfigError(fmt::format("unsupported config schema_version {} (expected {})",
                                  version, kConfigSchemaVersion));
  }

  RunConfig config;
  if (auto name = r.get("run.name")) config.name = *name;
  r.integer("run.replicas", config.replicas);
  r.integer("run.seed", config.seed);
  r.integer("run.threads", config.threads);
  r.integer("run.grid_points", config.grid_points);
  r.integer("run.bootstrap_draws", config.bootstrap_draws);

  r.duration("truth.t_chi", config.t_chi);
  if (auto kind = r.get("truth.kind")) {
    config.kind = parse_experiment_kind(*kind);
    config.beta = default_beta(config.kind);
  }
  r.number("truth.beta", config.beta);

  const std::string mode = r.get("readout.mode").value_or("single_shot");
  if (mode == "photon_count") {
    double p0 = 0.0187;
    double p1 = 0.0148;
    std::int64_t reps = 10000;
    r.number("readout.p_click_0", p0);
    r.number("readout.p_click_1", p1);
    r.integer("readout.repetitions", reps);
    config.mode = ReadoutModel(p0, p1, reps);
  } else if (mode == "single_shot") {
    config.mode = SingleShot{};
  } else {
    throw ConfigError(fmt::format("readout.mode: unknown mode '{}'", mode));
  }

  auto& est = config.estimator;
  r.integer("estimator.particles", est.particle_count);
  r.duration("estimator.prior_low", est.prior_low);
  r.duration("estimator.prior_high", est.prior_high);
  r.number("estimator.liu_west_a", est.liu_west_a);
  r.number("estimator.resample_threshold", est.resample_threshold);
  if (auto v = r.get("estimator.liu_west_variance")) {
    if (*v == "shrunk") {
      est.liu_west_variance = LiuWestVariance::kShrunk;
    } else if (*v == "full") {
      est.liu_west_variance = LiuWestVariance::kFull;
    } else {
      throw ConfigError(fmt::format("estimator.liu_west_variance: unknown value '{}'", *v));
    }
  }
  if (auto v = r.get("estimator.prior_placement")) {
    if (*v == "stratified") {
      est.prior_placement = PriorPlacement::kStratified;
    } else if (*v == "random") {
      est.prior_placement = PriorPlacement::kRandom;
    } else {
      throw ConfigError(fmt::format("estimator.prior_placement: unknown value '{}'", *v));
    }
  }

  if (auto v = r.get("protocol.strategies")) config.strategies = parse_strategy_list(*v);
  r.integer("protocol.epochs", config.epochs);
  r.boolean("protocol.quantize_tau", config.quantize_tau);
  r.integer("protocol.quantize_levels", config.quantize_levels);

  if (auto v = r.get("infotheory.xi_source")) {
    if (*v == "solver") {
      config.xi_source = XiSource::kSolver;
    } else if (*v == "published") {
      config.xi_source = XiSource::kPublished;
    } else {
      throw ConfigError(fmt::format("infotheory.xi_source: unknown value '{}'", *v));
    }
  }
  if (auto v = r.get("infotheory.xi_variance")) {
    config.xi_variance = parse_number(*v, "infotheory.xi_variance");
  }
  if (auto v = r.get("infotheory.xi_sensitivity")) {
    config.xi_sensitivity = parse_number(*v, "infotheory.xi_sensitivity");
  }
  if (auto v = r.get("infotheory.crlb_mode")) {
    if (*v == "time") {
      config.crlb_mode = CrlbMode::kTimeBudget;
    } else if (*v == "shots") {
      config.crlb_mode = CrlbMode::kShots;
    } else {
      throw ConfigError(fmt::format("infotheory.crlb_mode: unknown value '{}'", *v));
    }
  }

  config.validate();
  return config;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(fmt::format("cannot open config file '{}'", path.string()));
  std::ostringstream text;
  text << in.rdbuf();
  try {
    return parse_config(text.str());
  } catch (const ConfigError& e) {
    throw ConfigError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

std::string to_config_text(const RunConfig& c) {
  std::string strategies;
  for (std::size_t i = 0; i < c.strategies.size(); ++i) {
    if (i > 0) strategies += ',';
    strategies += to_string(c.strategies[i]);
  }
  std::string out;
  out += "[run]\n";
  out += fmt::format("schema_version = {}\n", kConfigSchemaVersion);
  out += fmt::format("name = {}\n", c.name);
  out += fmt::format("replicas = {}\n", c.replicas);
  out += fmt::format("seed = {}\n", c.seed);
  out += fmt::format("threads = {}\n", c.threads);
  out += fmt::format("grid_points = {}\n", c.grid_points);
  out += fmt::format("bootstrap_draws = {}\n", c.bootstrap_draws);
  out += "\n[truth]\n";
  out += fmt::format("kind = {}\n", to_string(c.kind));
  out += fmt::format("t_chi = {}\n", format_double(c.t_chi));
  out += fmt::format("beta = {}\n", format_double(c.beta));
  out += "\n[readout]\n";
  if (const auto readout = c.readout()) {
    out += "mode = photon_count\n";
    out += fmt::format("p_click_0 = {}\n", format_double(readout->p_click_0()));
    out += fmt::format("p_click_1 = {}\n", format_double(readout->p_click_1()));
    out += fmt::format("repetitions = {}\n", readout->repetitions());
  } else {
    out += "mode = single_shot\n";
  }
  const auto& e = c.estimator;
  out += "\n[estimator]\n";
  out += fmt::format("particles = {}\n", e.particle_count);
  out += fmt::format("prior_low = {}\n", format_double(e.prior_low));
  out += fmt::format("prior_high = {}\n", format_double(e.prior_high));
  out += fmt::format("liu_west_a = {}\n", format_double(e.liu_west_a));
  out += fmt::format("resample_threshold = {}\n", format_double(e.resample_threshold));
  out += fmt::format("liu_west_variance = {}\n",
                     e.liu_west_variance == LiuWestVariance::kShrunk ? "shrunk" : "full");
  out += fmt::format("prior_placement = {}\n",
                     e.prior_placement == PriorPlacement::kStratified ? "stratified"
                                                                      : "random");
  out += "\n[protocol]\n";
  out += fmt::format("strategies = {}\n", strategies);
  out += fmt::format("epochs = {}\n", c.epochs);
  out += fmt::format("quantize_tau = {}\n", c.quantize_tau ? "true" : "false");
  out += fmt::format("quantize_levels = {}\n", c.quantize_levels);
  out += "\n[infotheory]\n";
  out += fmt::format("xi_source = {}\n",
                     c.xi_source == XiSource::kSolver ? "solver" : "published");
  if (c.xi_variance) out += fmt::format("xi_variance = {}\n", format_double(*c.xi_variance));
  if (c.xi_sensitivity) {
    out += fmt::format("xi_sensitivity = {}\n", format_double(*c.xi_sensitivity));
  }
  out += fmt::format("crlb_mode = {}\n",
                     c.crlb_mode == CrlbMode::kTimeBudget ? "time" : "shots");
  return out;
}

std::string config_hash(const RunConfig& config) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char ch : to_config_text(config)) {
    hash ^= ch;
    hash *= 0x100000001b3ULL;
  }
  return fmt::format("{:016x}", hash);
}

RunConfig preset(std::string_view name) {
  RunConfig config = base_preset();
  config.name = std::string(name);
  if (name == "fig2b") {
    // single-shot readout, T2* = 2.5 us
    config.mode = SingleShot{};
    config.estimator.particle_count = 1000;
    config.epochs = 500;
    config.replicas = 500;
    config.strategies = {Strategy::kAdaptiveSensitivity, Strategy::kAdaptiveVariance,
                         Strategy::kRandomTau};
  } else if (name == "fig2c") {
    config.mode = ReadoutModel(0.0187, 0.0148, 50000);
    config.estimator.particle_count = 1000;
    config.epochs = 200;
    config.replicas = 200;
    config.strategies = {Strategy::kAdaptiveSensitivity, Strategy::kAdaptiveVariance,
                         Strategy::kRandomTau};
  } else if (name == "fig3") {
    // adaptive against the two non-adaptive schedules, R = 1e4
    config.mode = ReadoutModel(0.0187, 0.0148, 10000);
    config.estimator.particle_count = 200;
    config.epochs = 300;
    config.replicas = 100;
    config.strategies = {Strategy::kAdaptiveSensitivity, Strategy::kAdaptiveVariance,
                         Strategy::kRandomTau, Strategy::kSweepTau};
  } else if (name == "fig3a") {
    // T1 relaxometry, exponential decay on the millisecond scale
    config.kind = ExperimentKind::kRelaxation;
    config.beta = 1.0;
    config.t_chi = 4e-3;
    config.estimator.prior_low = 0.05e-3;
    config.estimator.prior_high = 10e-3;
    config.mode = ReadoutModel(0.0187, 0.0148, 10000);
    config.estimator.particle_count = 200;
    config.epochs = 300;
    config.replicas = 100;
    config.strategies = {Strategy::kAdaptiveVariance, Strategy::kRandomTau,
                         Strategy::kSweepTau};
  } else if (name == "fig3b") {
    // Hahn echo T2 with a stretched exponent
    config.kind = ExperimentKind::kHahnEcho;
    config.beta = 1.5;
    config.t_chi = 30e-6;
    config.estimator.prior_low = 1e-6;
    config.estimator.prior_high = 100e-6;
    config.mode = ReadoutModel(0.0187, 0.0148, 10000);
    config.estimator.particle_count = 200;
    config.epochs = 300;
    config.replicas = 100;
    config.strategies = {Strategy::kAdaptiveSensitivity, Strategy::kAdaptiveVariance,
                         Strategy::kRandomTau, Strategy::kSweepTau};
  } else if (name == "fig4") {
    config.mode = ReadoutModel(0.0187, 0.0148, 10000);
    config.estimator.particle_count = 200;
    config.epochs = 300;
    config.replicas = 100;
    config.strategies = {Strategy::kAdaptiveVariance, Strategy::kAdaptiveSensitivity};
  } else {
    throw ConfigError(fmt::format("unknown preset '{}'", name));
  }
  config.validate();
  return config;
}

std::vector<std::string> preset_names() {
  return {"fig2b", "fig2c", "fig3", "fig3a", "fig3b", "fig4"};
}

}  // namespace qdecay
