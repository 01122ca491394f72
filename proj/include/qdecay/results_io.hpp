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

#ifndef QDECAY_RESULTS_IO_HPP_
#define QDECAY_RESULTS_IO_HPP_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "qdecay/bench.hpp"
#include "qdecay/config.hpp"
#include "qdecay/harness.hpp"

namespace qdecay {

inline constexpr int kResultsSchemaVersion = 1;

enum class OutputFormat { kCsv, kJson };
OutputFormat parse_output_format(std::string_view name);

// CSV header: strategy,grid_time_s,uncertainty_s,ci_lo_s,ci_hi_s,bound_s.
// One row per strategy and grid point, shortest round-trip number formatting.
std::string summaries_to_csv(const std::vector<RunSummary>& summaries);
nlohmann::json summaries_to_json(const std::vector<RunSummary>& summaries);
std::vector<RunSummary> summaries_from_json(const nlohmann::json& doc);

// Writes the file; throws IoError naming the path on failure.
void emit_results(const std::vector<RunSummary>& summaries,
                  const std::filesystem::path& path, OutputFormat format);
std::vector<RunSummary> load_results(const std::filesystem::path& path);

std::string bench_to_csv(const BenchReport& report);
nlohmann::json bench_to_json(const BenchReport& report);
void emit_bench(const BenchReport& report, const std::filesystem::path& path,
                OutputFormat format);

// Epoch-by-epoch record of one replica, sufficient to replay it.
struct RunLog {
  RunConfig config;
  Strategy strategy = Strategy::kAdaptiveVariance;
  int replica = 0;
  std::vector<EpochRecord> records;
};

nlohmann::json run_log_to_json(const RunLog& log);
RunLog run_log_from_json(const nlohmann::json& doc);
void write_run_log(const RunLog& log, const std::filesystem::path& path);
RunLog read_run_log(const std::filesystem::path& path);

// Writes `contents` to `path`, throwing IoError with the path on failure.
void write_text_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace qdecay

#endif  // QDECAY_RESULTS_IO_HPP_
