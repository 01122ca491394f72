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

#ifndef QDECAY_ESTIMATOR_HPP_
#define QDECAY_ESTIMATOR_HPP_

#include <cstdint>
#include <vector>

#include "qdecay/model.hpp"
#include "qdecay/random.hpp"

namespace qdecay {

// Weighted particle approximation of the posterior over the decay time.
struct ParticleEnsemble {
  std::vector<double> positions;  // candidate decay times, seconds, all > 0
  std::vector<double> weights;    // non-negative, sum to one

  std::size_t size() const noexcept { return positions.size(); }

  friend bool operator==(const ParticleEnsemble&,
                         const ParticleEnsemble&) = default;
};

// Uniform-weight ensemble over the given positions.
ParticleEnsemble make_uniform_ensemble(std::vector<double> positions);

// Throws ConfigError if sizes differ, the ensemble is empty, any position is
// non-positive, any weight is negative, or weights do not sum to one within
// `tolerance`.
void check_ensemble(const ParticleEnsemble& ensemble, double tolerance = 1e-9);

// Kernel variance used when rejuvenating particles.
enum class LiuWestVariance {
  kShrunk,  // (1 - a^2) sigma^2: preserves the posterior mean and variance
  kFull,    // sigma^2 as printed in the original algorithm listing
};

enum class PriorPlacement {
  kStratified,  // cell centres of a uniform partition of the prior support
  kRandom,      // i.i.d. uniform draws
};

struct EstimatorConfig {
  int particle_count = 200;
  double prior_low = 0.1e-6;
  double prior_high = 8e-6;
  double liu_west_a = 0.98;
  double resample_threshold = 0.5;
  std::uint64_t rng_seed = 0;
  LiuWestVariance liu_west_variance = LiuWestVariance::kShrunk;
  PriorPlacement prior_placement = PriorPlacement::kStratified;

  // Throws ConfigError on any violated invariant.
  void validate() const;

  friend bool operator==(const EstimatorConfig&,
                         const EstimatorConfig&) = default;
};

// Uniform prior on [prior_low, prior_high] with all weights 1/K. Random
// placement draws from `stream`; stratified placement does not touch it.
ParticleEnsemble init_prior(const EstimatorConfig& config, RandomStream& stream);
ParticleEnsemble init_prior(const EstimatorConfig& config);

double posterior_mean(const ParticleEnsemble& ensemble) noexcept;
double posterior_variance(const ParticleEnsemble& ensemble) noexcept;

// Multiplies each weight by the Gaussian count likelihood of observing r
// clicks at delay tau given that particle's decay time, then renormalizes.
// Throws DegeneratePosteriorError if every product underflows to zero.
void bayes_update(ParticleEnsemble& ensemble, std::int64_t r, double tau,
                  double beta, const ReadoutModel& readout);

// Single-shot variant using the exact binary outcome likelihood.
void bayes_update_single_shot(ParticleEnsemble& ensemble, int m, double tau,
                              double beta);

// Dispatches on the measurement mode; `outcome` is m for single-shot readout
// and the click count r otherwise.
void bayes_update(ParticleEnsemble& ensemble, std::int64_t outcome, double tau,
                  double beta, const MeasurementMode& mode);

// 1 / sum(w^2).
double effective_sample_size(const ParticleEnsemble& ensemble) noexcept;

// True when ESS < K * threshold.
bool needs_resampling(const ParticleEnsemble& ensemble,
                      double threshold) noexcept;

// Liu-West rejuvenation. Parents are picked by systematic resampling; child k
// is drawn from N(a x_parent + (1 - a) mu, v) with v = (1 - a^2) sigma^2 or
// sigma^2, redrawing non-positive values. Weights are reset to 1/K. `a` may be
// 1, in which case children equal their parents.
void liu_west_resample(ParticleEnsemble& ensemble, double a,
                       LiuWestVariance variance, RandomStream& stream);

// Resamples only when ESS drops below K * resample_threshold. Returns whether
// resampling happened.
bool maybe_resample(ParticleEnsemble& ensemble, const EstimatorConfig& config,
                    RandomStream& stream);

// Parent indices chosen by systematic (low-variance) resampling with offset
// u0 in [0, 1).
std::vector<std::size_t> systematic_indices(const std::vector<double>& weights,
                                            double u0);

}  // namespace qdecay

#endif  // QDECAY_ESTIMATOR_HPP_
