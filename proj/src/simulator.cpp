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

#include "qdecay/simulator.hpp"

#include <random>

namespace qdecay {

int sample_single_shot(double tau, const GroundTruth& truth, RandomStream& stream) {
  return stream.uniform() < outcome_likelihood(0, tau, truth.law) ? 0 : 1;
}

std::int64_t sample_counts(double tau, const GroundTruth& truth,
                           const ReadoutModel& readout, RandomStream& stream) {
  std::binomial_distribution<std::int64_t> clicks(
      readout.repetitions(), detection_probability(tau, truth.law, readout));
  return clicks(stream);
}

}  // namespace qdecay
