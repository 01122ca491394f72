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

#include "qdecay/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "qdecay/errors.hpp"
#include "qdecay/estimator.hpp"
#include "qdecay/infotheory.hpp"
#include "qdecay/protocol.hpp"
#include "qdecay/simulator.hpp"

namespace qdecay {

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (fit.slope * x[i] + fit.intercept);
    ss_res += r * r;
  }
  fit.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  return fit;
}

BenchReport latency_bench(const std::vector<int>& particle_counts, int repetitions) {
  if (particle_counts.size() < 2) {
    throw ConfigError("latency bench needs at least two particle counts");
  }
  if (repetitions < 1) {
    throw ConfigError(fmt::format("repetitions must be >= 1, got {}", repetitions));
  }
  using Clock = std::chrono::steady_clock;

  const GroundTruth truth{DecayLaw(2.5e-6, 2.0), ExperimentKind::kRamsey};
  const ReadoutModel readout(0.0187, 0.0148, 10000);
  const XiTable xi = XiTable::solved({2.0});

  BenchReport report;
  for (int k : particle_counts) {
    EstimatorConfig config;
    config.particle_count = k;
    RandomStream stream(static_cast<std::uint64_t>(k));
    ParticleEnsemble ensemble = init_prior(config);
    const TauSelector selector(Strategy::kAdaptiveVariance, 2.0, xi, config, 1);

    // Warm-up: a few real epochs so weights and positions look like a run in
    // progress.
    double tau = selector.next(ensemble, 0, stream);
    for (int epoch = 0; epoch < 10; ++epoch) {
      bayes_update(ensemble, sample_counts(tau, truth, readout, stream), tau, 2.0,
                   readout);
      maybe_resample(ensemble, config, stream);
      tau = selector.next(ensemble, epoch, stream);
    }
    const std::int64_t r = sample_counts(tau, truth, readout, stream);
    const std::vector<double> warm_weights = ensemble.weights;

    std::vector<double> samples(static_cast<std::size_t>(repetitions));
    volatile double sink = 0.0;
    for (auto& sample : samples) {
      ensemble.weights = warm_weights;
      const auto start = Clock::now();
      bayes_update(ensemble, r, tau, 2.0, readout);
      sink = sink + selector.next(ensemble, 1, stream);
      const auto stop = Clock::now();
      sample = std::chrono::duration<double>(stop - start).count();
    }
    const double mean =
        std::accumulate(samples.begin(), samples.end(), 0.0) / samples.size();
    std::nth_element(samples.begin(), samples.begin() + samples.size() / 2,
                     samples.end());
    report.particle_counts.push_back(k);
    report.mean_s.push_back(mean);
    report.median_s.push_back(samples[samples.size() / 2]);
  }

  const std::vector<double> x(report.particle_counts.begin(),
                              report.particle_counts.end());
  const LinearFit fit = fit_line(x, report.median_s);
  report.slope_s_per_particle = fit.slope;
  report.intercept_s = fit.intercept;
  report.r_squared = fit.r_squared;
  return report;
}

}  // namespace qdecay
