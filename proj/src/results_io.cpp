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

#include "qdecay/results_io.hpp"

#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "qdecay/errors.hpp"

namespace qdecay {

using nlohmann::json;

OutputFormat parse_output_format(std::string_view name) {
  if (name == "csv") return OutputFormat::kCsv;
  if (name == "json") return OutputFormat::kJson;
  throw ConfigError(fmt::format("unknown output format '{}'", name));
}

std::string summaries_to_csv(const std::vector<RunSummary>& summaries) {
  std::string out = "strategy,grid_time_s,uncertainty_s,ci_lo_s,ci_hi_s,bound_s\n";
  for (const auto& s : summaries) {
    for (std::size_t g = 0; g < s.grid.size(); ++g) {
      out += fmt::format("{},{},{},{},{},{}\n", to_string(s.strategy), s.grid[g],
                         s.uncertainty[g], s.ci_lo[g], s.ci_hi[g], s.bound[g]);
    }
  }
  return out;
}

json summaries_to_json(const std::vector<RunSummary>& summaries) {
  json doc;
  doc["schema_version"] = kResultsSchemaVersion;
  doc["units"] = "seconds";
  doc["summaries"] = json::array();
  for (const auto& s : summaries) {
    const auto& m = s.metadata;
    doc["summaries"].push_back({
        {"strategy", to_string(s.strategy)},
        {"replicas", s.replicas},
        {"grid_time_s", s.grid},
        {"uncertainty_s", s.uncertainty},
        {"ci_lo_s", s.ci_lo},
        {"ci_hi_s", s.ci_hi},
        {"bound_s", s.bound},
        {"metadata",
         {{"config_name", m.config_name},
          {"config_hash", m.config_hash},
          {"seed", m.seed},
          {"code_version", m.code_version},
          {"excluded_replicas", m.excluded_replicas},
          {"bound", m.bound},
          {"time_accounting", m.time_accounting}}},
    });
  }
  return doc;
}

std::vector<RunSummary> summaries_from_json(const json& doc) {
  try {
    if (doc.at("schema_version").get<int>() != kResultsSchemaVersion) {
      throw ConfigError(fmt::format("unsupported results schema_version {}",
                                    doc.at("schema_version").dump()));
    }
    std::vector<RunSummary> summaries;
    for (const auto& item : doc.at("summaries")) {
      RunSummary s;
      s.strategy = parse_strategy(item.at("strategy").get<std::string>());
      s.replicas = item.at("replicas").get<int>();
      s.grid = item.at("grid_time_s").get<std::vector<double>>();
      s.uncertainty = item.at("uncertainty_s").get<std::vector<double>>();
      s.ci_lo = item.at("ci_lo_s").get<std::vector<double>>();
      s.ci_hi = item.at("ci_hi_s").get<std::vector<double>>();
      s.bound = item.at("bound_s").get<std::vector<double>>();
      const auto& m = item.at("metadata");
      s.metadata.config_name = m.at("config_name").get<std::string>();
      s.metadata.config_hash = m.at("config_hash").get<std::string>();
      s.metadata.seed = m.at("seed").get<std::uint64_t>();
      s.metadata.code_version = m.at("code_version").get<std::string>();
      s.metadata.excluded_replicas = m.at("excluded_replicas").get<int>();
      s.metadata.bound = m.at("bound").get<std::string>();
      s.metadata.time_accounting = m.at("time_accounting").get<std::string>();
      summaries.push_back(std::move(s));
    }
    return summaries;
  } catch (const json::exception& e) {
    throw ConfigError(fmt::format("malformed results document: {}", e.what()));
  }
}

void write_text_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(fmt::format("cannot open '{}' for writing", path.string()));
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  out.close();
  if (!out) throw IoError(fmt::format("failed writing '{}'", path.string()));
}

namespace {

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot open '{}'", path.string()));
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(fmt::format("{}: invalid JSON: {}", path.string(), e.what()));
  }
}

}  // namespace

void emit_results(const std::vector<RunSummary>& summaries,
                  const std::filesystem::path& path, OutputFormat format) {
  if (format == OutputFormat::kCsv) {
    write_text_file(path, summaries_to_csv(summaries));
  } else {
    write_text_file(path, summaries_to_json(summaries).dump(2) + "\n");
  }
}

std::vector<RunSummary> load_results(const std::filesystem::path& path) {
  return summaries_from_json(read_json_file(path));
}

std::string bench_to_csv(const BenchReport& report) {
  std::string out = "particles,mean_s,median_s\n";
  for (std::size_t i = 0; i < report.particle_counts.size(); ++i) {
    out += fmt::format("{},{},{}\n", report.particle_counts[i], report.mean_s[i],
                       report.median_s[i]);
  }
  return out;
}

json bench_to_json(const BenchReport& report) {
  return {
      {"schema_version", kResultsSchemaVersion},
      {"particles", report.particle_counts},
      {"mean_s", report.mean_s},
      {"median_s", report.median_s},
      {"slope_s_per_particle", report.slope_s_per_particle},
      {"intercept_s", report.intercept_s},
      {"r_squared", report.r_squared},
      {"reference_k200_s", report.reference_k200_s},
  };
}

void emit_bench(const BenchReport& report, const std::filesystem::path& path,
                OutputFormat format) {
  if (format == OutputFormat::kCsv) {
    write_text_file(path, bench_to_csv(report));
  } else {
    write_text_file(path, bench_to_json(report).dump(2) + "\n");
  }
}

json run_log_to_json(const RunLog& log) {
  json epochs = json::array();
  for (const auto& r : log.records) {
    epochs.push_back({{"epoch", r.epoch_index},
                      {"tau_s", r.tau},
                      {"outcome", r.outcome},
                      {"cumulative_probing_time_s", r.cumulative_probing_time},
                      {"estimate_s", r.estimate},
                      {"estimate_std_s", r.estimate_std},
                      {"resampled", r.resampled}});
  }
  return {{"schema_version", kResultsSchemaVersion},
          {"config", to_config_text(log.config)},
          {"strategy", to_string(log.strategy)},
          {"replica", log.replica},
          {"epochs", std::move(epochs)}};
}

RunLog run_log_from_json(const json& doc) {
  try {
    RunLog log;
    log.config = parse_config(doc.at("config").get<std::string>());
    log.strategy = parse_strategy(doc.at("strategy").get<std::string>());
    log.replica = doc.at("replica").get<int>();
    for (const auto& e : doc.at("epochs")) {
      EpochRecord r;
      r.epoch_index = e.at("epoch").get<std::int64_t>();
      r.tau = e.at("tau_s").get<double>();
      r.outcome = e.at("outcome").get<std::int64_t>();
      r.cumulative_probing_time = e.at("cumulative_probing_time_s").get<double>();
      r.estimate = e.at("estimate_s").get<double>();
      r.estimate_std = e.at("estimate_std_s").get<double>();
      r.resampled = e.at("resampled").get<bool>();
      log.records.push_back(r);
    }
    return log;
  } catch (const json::exception& e) {
    throw ConfigError(fmt::format("malformed run log: {}", e.what()));
  }
}

void write_run_log(const RunLog& log, const std::filesystem::path& path) {
  write_text_file(path, run_log_to_json(log).dump(2) + "\n");
}

RunLog read_run_log(const std::filesystem::path& path) {
  return run_log_from_json(read_json_file(path));
}

}  // namespace qdecay
