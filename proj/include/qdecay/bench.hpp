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

#ifndef QDECAY_BENCH_HPP_
#define QDECAY_BENCH_HPP_

#include <vector>

namespace qdecay {

// Wall time of the per-epoch hot path (one count update plus one adaptive
// delay selection) against particle count.
struct BenchReport {
  std::vector<int> particle_counts;
  std::vector<double> mean_s;
  std::vector<double> median_s;
  // Least-squares fit median_s ~ slope * K + intercept.
  double slope_s_per_particle = 0.0;
  double intercept_s = 0.0;
  double r_squared = 0.0;
  // Published microcontroller figure for K = 200, for side-by-side reporting.
  double reference_k200_s = 50e-6;
};

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

// Times `repetitions` iterations per particle count on a warmed ensemble.
// Resampling is excluded from the timed region. Runs on the calling thread.
BenchReport latency_bench(const std::vector<int>& particle_counts, int repetitions);

}  // namespace qdecay

#endif  // QDECAY_BENCH_HPP_
