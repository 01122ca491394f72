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

#ifndef QDECAY_SIMULATOR_HPP_
#define QDECAY_SIMULATOR_HPP_

#include <cstdint>

#include "qdecay/model.hpp"
#include "qdecay/random.hpp"

namespace qdecay {

// The hidden decay law that generates simulated data.
struct GroundTruth {
  DecayLaw law;
  ExperimentKind kind = ExperimentKind::kRamsey;
};

// Bernoulli outcome m with P(m = 0) = outcome_likelihood(0, tau, law).
int sample_single_shot(double tau, const GroundTruth& truth, RandomStream& stream);

// Exact Binomial(R, p_D) click count; the Gaussian form is used only for
// inference.
std::int64_t sample_counts(double tau, const GroundTruth& truth,
                           const ReadoutModel& readout, RandomStream& stream);

}  // namespace qdecay

#endif  // QDECAY_SIMULATOR_HPP_
