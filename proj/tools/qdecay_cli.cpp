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

// Command-line front end: batch runs, xi and bound tables, latency bench and
// replay of logged runs.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "qdecay/bench.hpp"
#include "qdecay/config.hpp"
#include "qdecay/errors.hpp"
#include "qdecay/harness.hpp"
#include "qdecay/infotheory.hpp"
#include "qdecay/results_io.hpp"

namespace {

using namespace qdecay;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitDegenerate = 3;

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string::size_type start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return parts;
}

ReadoutModel parse_readout(const std::string& text) {
  const auto parts = split(text, ',');
  if (parts.size() != 3) {
    throw ConfigError(fmt::format("--readout expects p0,p1,R, got '{}'", text));
  }
  try {
    return ReadoutModel(std::stod(parts[0]), std::stod(parts[1]), std::stoll(parts[2]));
  } catch (const std::logic_error&) {
    throw ConfigError(fmt::format("--readout expects p0,p1,R, got '{}'", text));
  }
}

std::pair<double, double> parse_time_range(const std::string& text) {
  const auto dots = text.find("..");
  if (dots == std::string::npos) {
    const double t = parse_duration(text);
    return {t, t};
  }
  return {parse_duration(text.substr(0, dots)), parse_duration(text.substr(dots + 2))};
}

void write_output(const std::string& contents, const std::string& out) {
  if (out.empty() || out == "-") {
    std::fwrite(contents.data(), 1, contents.size(), stdout);
  } else {
    write_text_file(out, contents);
  }
}

struct RunOptions {
  std::string preset;
  std::string config_path;
  std::optional<int> replicas;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  std::string out;
  std::string format = "csv";
  std::string epoch_log;
};

int cmd_run(const RunOptions& opt) {
  RunConfig config = opt.config_path.empty() ? preset(opt.preset)
                                             : load_config(opt.config_path);
  if (opt.replicas) config.replicas = *opt.replicas;
  if (opt.seed) config.seed = *opt.seed;
  if (opt.threads) config.threads = *opt.threads;
  config.validate();
  const OutputFormat format = parse_output_format(opt.format);

  const auto summaries = run_all(config);
  for (const auto& s : summaries) {
    if (s.metadata.excluded_replicas > 0) {
      std::cerr << fmt::format("warning: {} replica(s) of {} excluded (degenerate posterior)\n",
                               s.metadata.excluded_replicas, to_string(s.strategy));
    }
  }
  const std::string text = format == OutputFormat::kCsv
                               ? summaries_to_csv(summaries)
                               : summaries_to_json(summaries).dump(2) + "\n";
  write_output(text, opt.out);

  if (!opt.epoch_log.empty()) {
    RunLog log;
    log.config = config;
    log.strategy = config.strategies.front();
    log.replica = 0;
    const auto replica = run_replica(config, log.strategy, 0);
    if (replica.excluded) throw DegeneratePosteriorError(replica.error);
    log.records = replica.records;
    write_run_log(log, opt.epoch_log);
  }
  return kExitOk;
}

int cmd_xi(double beta, const std::string& criterion_name, const std::string& source) {
  const Criterion criterion = parse_criterion(criterion_name);
  double xi = 0.0;
  if (source == "published") {
    const XiTable table = XiTable::published();
    if (!table.contains(criterion, beta)) {
      throw ConfigError(fmt::format("no published xi for {} at beta = {}",
                                    to_string(criterion), beta));
    }
    xi = table.at(criterion, beta);
  } else if (source == "solver") {
    xi = solve_xi(beta, criterion);
  } else {
    throw ConfigError(fmt::format("unknown xi source '{}'", source));
  }
  std::cout << "input,value\n" << fmt::format("{},{}\n", beta, xi);
  return kExitOk;
}

struct CrlbOptions {
  double beta = 2.0;
  std::string t_chi = "2.5us";
  std::string readout;
  std::string times;
  int points = 20;
  std::string criterion = "sens";
  std::string mode = "time";
  std::string kind = "ramsey";
};

int cmd_crlb(const CrlbOptions& opt) {
  const DecayLaw law(parse_duration(opt.t_chi), opt.beta);
  std::optional<ReadoutModel> readout;
  if (!opt.readout.empty()) readout = parse_readout(opt.readout);
  const auto [t1, t2] = parse_time_range(opt.times);
  if (!(t1 > 0.0) || t2 < t1) {
    throw ConfigError(fmt::format("--times needs 0 < t1 <= t2, got '{}'", opt.times));
  }
  CrlbMode mode = CrlbMode::kTimeBudget;
  if (opt.mode == "shots") {
    mode = CrlbMode::kShots;
  } else if (opt.mode != "time") {
    throw ConfigError(fmt::format("unknown bound mode '{}'", opt.mode));
  }
  const Criterion criterion = parse_criterion(opt.criterion);
  const double factor = duration_factor(parse_experiment_kind(opt.kind));
  const int points = t2 > t1 ? std::max(opt.points, 2) : 1;

  std::string out = "input,value\n";
  for (int i = 0; i < points; ++i) {
    const double t =
        points == 1 ? t1 : t1 * std::pow(t2 / t1, static_cast<double>(i) / (points - 1));
    out += fmt::format("{},{}\n", t, crlb_envelope(t, law, readout, criterion, mode, factor));
  }
  std::cout << out;
  return kExitOk;
}

int cmd_bench(const std::string& particles, int repetitions, const std::string& out,
              const std::string& format_name) {
  std::vector<int> counts;
  for (const auto& part : split(particles, ',')) counts.push_back(std::stoi(part));
  const OutputFormat format = parse_output_format(format_name);
  const BenchReport report = latency_bench(counts, repetitions);
  std::cerr << fmt::format(
      "slope {:.4g} us/particle, R^2 = {:.4f}; K=200 reference 50 us\n",
      report.slope_s_per_particle * 1e6, report.r_squared);
  write_output(format == OutputFormat::kCsv ? bench_to_csv(report)
                                            : bench_to_json(report).dump(2) + "\n",
               out);
  return kExitOk;
}

int cmd_replay(const std::string& path, const std::string& out) {
  const RunLog log = read_run_log(path);
  const ProtocolSetup setup = log.config.protocol_setup(log.strategy);
  ReplayBackend backend(log.records, repetitions(log.config.mode));
  const RandomStream stream =
      protocol_stream(replica_stream(log.config.seed, log.replica), log.strategy);
  const auto records = run_protocol(setup, backend, stream);

  std::string text =
      "epoch,tau_s,outcome,cumulative_probing_time_s,estimate_s,estimate_std_s,"
      "resampled\n";
  for (const auto& r : records) {
    text += fmt::format("{},{},{},{},{},{},{}\n", r.epoch_index, r.tau, r.outcome,
                        r.cumulative_probing_time, r.estimate, r.estimate_std,
                        r.resampled ? 1 : 0);
  }
  write_output(text, out);
  if (records != log.records) {
    std::cerr << "replay: recomputed epochs differ from the log\n";
    return kExitFailure;
  }
  std::cerr << fmt::format("replay: {} epochs reproduced exactly\n", records.size());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive Bayesian estimation of qubit decoherence times"};
  app.require_subcommand(1);

  RunOptions run_opt;
  auto* run = app.add_subcommand("run", "Run a batch of simulated protocol replicas");
  auto* preset_opt = run->add_option("--preset", run_opt.preset, "Built-in preset")
                         ->check(CLI::IsMember(preset_names()));
  auto* config_opt = run->add_option("--config", run_opt.config_path, "Config file")
                         ->check(CLI::ExistingFile);
  preset_opt->excludes(config_opt);
  run->add_option("--replicas", run_opt.replicas, "Override replica count");
  run->add_option("--seed", run_opt.seed, "Override master seed");
  run->add_option("--threads", run_opt.threads, "Worker threads (0: all cores)");
  run->add_option("--out", run_opt.out, "Output path (default stdout)");
  run->add_option("--format", run_opt.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  run->add_option("--epoch-log", run_opt.epoch_log,
                  "Also write replica 0 of the first strategy as a replayable log");

  double xi_beta = 2.0;
  std::string xi_criterion = "var";
  std::string xi_source = "solver";
  auto* xi = app.add_subcommand("xi", "Optimal tau / T ratio for a decay exponent");
  xi->add_option("--beta", xi_beta, "Decay exponent")->required();
  xi->add_option("--criterion", xi_criterion, "var or sens")
      ->check(CLI::IsMember({"var", "sens", "variance", "sensitivity"}));
  xi->add_option("--source", xi_source, "solver or published");

  CrlbOptions crlb_opt;
  auto* crlb = app.add_subcommand("crlb", "Cramer-Rao uncertainty floor vs probing time");
  crlb->add_option("--beta", crlb_opt.beta, "Decay exponent")->required();
  crlb->add_option("--t-chi", crlb_opt.t_chi, "True decay time (e.g. 2.5us)");
  crlb->add_option("--readout", crlb_opt.readout, "p0,p1,R for photon-count readout");
  crlb->add_option("--times", crlb_opt.times, "t1..t2 total probing times")->required();
  crlb->add_option("--points", crlb_opt.points, "Log-spaced points in the range");
  crlb->add_option("--criterion", crlb_opt.criterion, "sens or var");
  crlb->add_option("--mode", crlb_opt.mode, "time or shots");
  crlb->add_option("--kind", crlb_opt.kind, "ramsey, echo or relaxation");

  std::string bench_particles = "50,100,200,400,800,1600";
  int bench_reps = 2000;
  std::string bench_out;
  std::string bench_format = "csv";
  auto* bench = app.add_subcommand("bench", "Time the per-epoch update and tau selection");
  bench->add_option("--particles", bench_particles, "Comma-separated particle counts");
  bench->add_option("--repetitions", bench_reps, "Timed iterations per count");
  bench->add_option("--out", bench_out, "Output path (default stdout)");
  bench->add_option("--format", bench_format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));

  std::string replay_log;
  std::string replay_out;
  auto* replay = app.add_subcommand("replay", "Re-run the estimator on logged counts");
  replay->add_option("--log", replay_log, "Run log written by run --epoch-log")
      ->required()
      ->check(CLI::ExistingFile);
  replay->add_option("--out", replay_out, "Output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    // Bad flags and failed validators are configuration errors too.
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*run) {
      if (run_opt.preset.empty() && run_opt.config_path.empty()) {
        throw ConfigError("run needs --preset or --config");
      }
      return cmd_run(run_opt);
    }
    if (*xi) return cmd_xi(xi_beta, xi_criterion, xi_source);
    if (*crlb) return cmd_crlb(crlb_opt);
    if (*bench) return cmd_bench(bench_particles, bench_reps, bench_out, bench_format);
    if (*replay) return cmd_replay(replay_log, replay_out);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const NoMaximumError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DegeneratePosteriorError& e) {
    std::cerr << "degenerate posterior: " << e.what() << '\n';
    return kExitDegenerate;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitOk;
}
