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

#ifndef QDECAY_INFOTHEORY_HPP_
#define QDECAY_INFOTHEORY_HPP_

#include <functional>
#include <map>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "qdecay/estimator.hpp"
#include "qdecay/model.hpp"

namespace qdecay {

// What the adaptive probing time optimizes.
enum class Criterion {
  kVariance,     // maximize the Fisher information F
  kSensitivity,  // maximize F / tau
};

std::string_view to_string(Criterion criterion) noexcept;
// Accepts "var"/"variance" and "sens"/"sensitivity".
Criterion parse_criterion(std::string_view name);

// Classical Fisher information about t_chi carried by one binary outcome:
//
//   F = beta^2 x^(2 beta) / (t_chi^2 (exp(2 x^beta) - 1)),  x = tau / t_chi.
//
// This is sum_m (d_T p(m))^2 / p(m) for the binary outcome likelihood. Note the
// exponent is 2 x^beta, not (2x)^beta.
double fisher(double tau, const DecayLaw& law) noexcept;

// F / tau, the information rate per unit probing time.
double fisher_per_time(double tau, const DecayLaw& law) noexcept;

// Fisher information of a single click/no-click repetition with click
// probability p_D = alpha (1 + V exp(-x^beta)). Algebraically equal to
// (d p_D / d t_chi)^2 / (p_D (1 - p_D)); evaluated in the expanded closed
// form, rescaled by exp(-2 x^beta) so it stays finite for large x.
double fisher_experimental(double tau, const DecayLaw& law,
                           const ReadoutModel& readout) noexcept;

// Result of a bracketed scalar maximization.
struct BracketedMaximum {
  double argmax = 0.0;
  double value = 0.0;
  // The maximizer sits against the open lower end of the bracket, i.e. the
  // supremum is approached at the boundary rather than attained inside.
  bool at_lower_boundary = false;
  bool at_upper_boundary = false;
};

// Maximizes f on (lo, hi]: evaluates `grid_points` equally spaced points
// lo + i (hi - lo) / grid_points, i = 1..grid_points, then refines around the
// best one by golden-section search to absolute tolerance `tolerance`.
BracketedMaximum bracketed_maximize(const std::function<double(double)>& f,
                                    double lo, double hi, int grid_points = 512,
                                    double tolerance = 1e-10);

// Optimal ratio xi = tau_opt / t_chi for a decay exponent, searched on
// x in (0, 3]. Throws NoMaximumError for kSensitivity with beta <= 1, and
// ConfigError for beta <= 0.
double solve_xi(double beta, Criterion criterion);

// Lookup of xi per (criterion, beta). Read-only after construction.
class XiTable {
 public:
  XiTable() = default;

  // Solver values for every (criterion, beta) pair that has a maximum.
  static XiTable solved(const std::vector<double>& betas);
  // The literal published values (beta 1, 3/2, 2, 3).
  static XiTable published();

  // Stores an explicit value. Throws ConfigError if xi <= 0.
  void set(Criterion criterion, double beta, double xi);

  bool contains(Criterion criterion, double beta) const noexcept;
  // Stored value, or the solver value when the entry is missing.
  double at(Criterion criterion, double beta) const;

  const std::map<std::pair<Criterion, double>, double>& entries() const noexcept {
    return entries_;
  }

 private:
  std::map<std::pair<Criterion, double>, double> entries_;
};

// tau-dependent part of the Bayesian information with the posterior replaced
// by a point mass at t_hat.
double bim_point_estimate(double tau, double t_hat, double beta) noexcept;

// The same term averaged over a weighted particle ensemble:
// sum_k w_k F(tau; x_k, beta).
double bim_particle_average(double tau, const ParticleEnsemble& ensemble,
                            double beta) noexcept;

enum class CrlbMode {
  kTimeBudget,  // continuous shot count n = T / tau
  kShots,       // whole shots only, n = floor(T / tau), at least one
};

// Cramer-Rao uncertainty floor (seconds) reachable after `total_probing_time`
// seconds of probing, with each shot costing duration_factor * tau.
//
// kSensitivity minimizes the bound over tau (equivalently maximizes the
// information rate F* / tau). kVariance, and kSensitivity when the rate has
// no interior maximum, fixes tau at argmax F* instead. F* is the single-shot
// Fisher information, or the per-repetition one when `readout` is given.
double crlb_envelope(double total_probing_time, const DecayLaw& law,
                     const std::optional<ReadoutModel>& readout,
                     Criterion criterion, CrlbMode mode = CrlbMode::kTimeBudget,
                     double duration_factor = 1.0);

}  // namespace qdecay

#endif  // QDECAY_INFOTHEORY_HPP_
