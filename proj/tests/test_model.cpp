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

#include <cmath>
#include <numbers>

#include <doctest.h>

#include "qdecay/errors.hpp"
#include "qdecay/model.hpp"

using namespace qdecay;

namespace {
const ReadoutModel kReadout(0.0187, 0.0148, 10000);
}

TEST_CASE("decay law and readout invariants are enforced") {
  CHECK_THROWS_AS(DecayLaw(0.0, 2.0), ConfigError);
  CHECK_THROWS_AS(DecayLaw(1e-6, 0.0), ConfigError);
  CHECK_THROWS_AS(DecayLaw(-1e-6, 2.0), ConfigError);
  CHECK_THROWS_AS(ReadoutModel(0.01, 0.02, 10), ConfigError);
  CHECK_THROWS_AS(ReadoutModel(0.02, 0.02, 10), ConfigError);
  CHECK_THROWS_AS(ReadoutModel(1.5, 0.02, 10), ConfigError);
  CHECK_THROWS_AS(ReadoutModel(0.02, 0.01, 0), ConfigError);

  CHECK(kReadout.alpha() == doctest::Approx(0.01675).epsilon(1e-12));
  CHECK(kReadout.visibility() ==
        doctest::Approx((0.0187 - 0.0148) / 0.0335).epsilon(1e-12));
  CHECK(kReadout.alpha() > 0.0);
  CHECK(kReadout.alpha() < 1.0);
  CHECK(kReadout.visibility() > 0.0);
  CHECK(kReadout.visibility() < 1.0);
}

TEST_CASE("outcome likelihood") {
  const DecayLaw law(2.5e-6, 2.0);
  CHECK(outcome_likelihood(0, 0.0, law) == 1.0);
  CHECK(outcome_likelihood(1, 0.0, law) == 0.0);
  CHECK(outcome_likelihood(0, 2.5e-6, law) ==
        doctest::Approx((1.0 + std::exp(-1.0)) / 2.0).epsilon(1e-14));
  CHECK(outcome_likelihood(0, 2.5e-6, law) == doctest::Approx(0.683940).epsilon(1e-6));

  SUBCASE("outcomes sum to exactly one and p(0) is monotone") {
    for (double beta : {0.5, 1.0, 1.5, 2.0, 3.0, 4.0}) {
      const DecayLaw l(1e-6, beta);
      double previous = 1.0;
      for (int i = 0; i <= 400; ++i) {
        const double tau = 1e-8 * i * i;
        const double p0 = outcome_likelihood(0, tau, l);
        CHECK(p0 + outcome_likelihood(1, tau, l) == 1.0);
        CHECK(p0 <= previous);
        CHECK(p0 >= 0.5);
        previous = p0;
      }
      CHECK(outcome_likelihood(0, 1.0, l) == doctest::Approx(0.5));
    }
  }
}

TEST_CASE("detection probability") {
  const DecayLaw law(2.5e-6, 2.0);
  CHECK(detection_probability(0.0, law, kReadout) ==
        doctest::Approx(0.0187).epsilon(1e-12));
  CHECK(detection_probability(1.0, law, kReadout) ==
        doctest::Approx(0.01675).epsilon(1e-12));
  CHECK(detection_probability(2.5e-6, law, kReadout) ==
        doctest::Approx(0.0174673649102843).epsilon(1e-12));

  double previous = kReadout.p_click_0();
  for (int i = 0; i < 200; ++i) {
    const double p = detection_probability(1e-7 * i, law, kReadout);
    CHECK(p <= previous);
    CHECK(p >= kReadout.alpha());
    CHECK(p <= kReadout.alpha() * (1 + kReadout.visibility()) + 1e-15);
    previous = p;
  }
}

TEST_CASE("count likelihood") {
  const DecayLaw law(2.5e-6, 2.0);

  SUBCASE("peak at the mean") {
    // Choose R and tau so R p_D is an integer: tau -> infinity gives alpha.
    const ReadoutModel readout(0.03, 0.01, 1000);  // alpha = 0.02, R alpha = 20
    const double sigma2 = 20.0 * 980.0 / 1000.0;
    CHECK(count_likelihood(20, 1.0, law, readout) ==
          doctest::Approx(1.0 / std::sqrt(2.0 * std::numbers::pi * sigma2)).epsilon(1e-12));
  }

  SUBCASE("variance floor at r = 0 and r = R") {
    CHECK(count_variance(0, 10000) == 1.0);
    CHECK(count_variance(10000, 10000) == 1.0);
    CHECK(count_variance(500, 50000) == doctest::Approx(495.0));
    const double mean = 10000 * detection_probability(1e-6, law, kReadout);
    CHECK(count_likelihood(0, 1e-6, law, kReadout) ==
          doctest::Approx(std::exp(-mean * mean / 2.0) / std::sqrt(2.0 * std::numbers::pi))
              .epsilon(1e-12));
  }

  SUBCASE("nv readout, R = 50000, r = 500 at tau = T") {
    const ReadoutModel readout(0.0187, 0.0148, 50000);
    // exp(-(500 - 873.368)^2 / 990) / sqrt(2 pi 495), evaluated at 30 digits
    CHECK(count_likelihood(500, 2.5e-6, law, readout) ==
          doctest::Approx(1.25819357488294425e-63).epsilon(1e-9));
    CHECK(count_likelihood(500, 2.5e-6, law, readout) > 0.0);
  }

  SUBCASE("sums to one over counts when the mean is large") {
    const ReadoutModel readout(0.0187, 0.0148, 50000);
    for (double tau : {0.5e-6, 2.5e-6, 10e-6}) {
      double total = 0.0;
      for (std::int64_t r = 0; r <= readout.repetitions(); ++r) {
        total += count_likelihood(r, tau, law, readout);
      }
      CHECK(total == doctest::Approx(1.0).epsilon(0.01));
    }
  }

  SUBCASE("single-shot limit: V = 1, alpha = 1/2, R = 1") {
    const ReadoutModel ideal(1.0, 0.0, 1);
    for (double tau : {0.0, 1e-6, 2.5e-6, 5e-6}) {
      CHECK(detection_probability(tau, law, ideal) ==
            doctest::Approx(outcome_likelihood(0, tau, law)).epsilon(1e-14));
    }
  }
}

TEST_CASE("sequence duration and experiment kinds") {
  CHECK(sequence_duration(1e-6, ExperimentKind::kRamsey) == 1e-6);
  CHECK(sequence_duration(1e-6, ExperimentKind::kRelaxation) == 1e-6);
  CHECK(sequence_duration(1e-6, ExperimentKind::kHahnEcho) == 2e-6);
  CHECK(sequence_duration(0.0, ExperimentKind::kHahnEcho) == 0.0);
  CHECK(default_beta(ExperimentKind::kRelaxation) == 1.0);
  CHECK(default_beta(ExperimentKind::kRamsey) == 2.0);
  CHECK(default_beta(ExperimentKind::kHahnEcho) == 1.5);
  CHECK(parse_experiment_kind("echo") == ExperimentKind::kHahnEcho);
  CHECK(parse_experiment_kind("t1") == ExperimentKind::kRelaxation);
  CHECK_THROWS_AS(parse_experiment_kind("cpmg"), ConfigError);
}
