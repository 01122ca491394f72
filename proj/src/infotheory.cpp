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

#include "qdecay/infotheory.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "qdecay/errors.hpp"

namespace qdecay {
namespace {

constexpr double kXiUpper = 3.0;
constexpr int kXiGrid = 512;

// Single-shot or per-repetition information as a function of x = tau / t_chi,
// in units of 1 / t_chi^2.
std::function<double(double)> scaled_information(
    double beta, const std::optional<ReadoutModel>& readout) {
  const DecayLaw unit(1.0, beta);
  if (readout) {
    return [unit, r = *readout](double x) { return fisher_experimental(x, unit, r); };
  }
  return [unit](double x) { return fisher(x, unit); };
}

}  // namespace

std::string_view to_string(Criterion criterion) noexcept {
  return criterion == Criterion::kVariance ? "variance" : "sensitivity";
}

Criterion parse_criterion(std::string_view name) {
  if (name == "var" || name == "variance") return Criterion::kVariance;
  if (name == "sens" || name == "sensitivity") return Criterion::kSensitivity;
  throw ConfigError(fmt::format("unknown criterion '{}'", name));
}

double fisher(double tau, const DecayLaw& law) noexcept {
  const double u = law.exponent(tau);
  if (u == 0.0) return 0.0;
  const double beta = law.beta();
  const double t = law.t_chi();
  return beta * beta * u * u / (t * t * std::expm1(2.0 * u));
}

double fisher_per_time(double tau, const DecayLaw& law) noexcept {
  return fisher(tau, law) / tau;
}

double fisher_experimental(double tau, const DecayLaw& law,
                           const ReadoutModel& readout) noexcept {
  const double u = law.exponent(tau);
  if (u == 0.0) return 0.0;
  const double alpha = readout.alpha();
  const double v = readout.visibility();
  const double beta = law.beta();
  const double t = law.t_chi();
  const double e1 = std::exp(-u);
  const double e2 = e1 * e1;
  // Denominator of the closed form multiplied through by exp(-2u):
  // alpha V^2 e^-2u + 2 alpha V e^-u - V e^-u + alpha - 1 (negative).
  const double denominator =
      alpha * v * v * e2 + 2.0 * alpha * v * e1 - v * e1 + alpha - 1.0;
  return -alpha * v * v * beta * beta * u * u * e2 / (t * t * denominator);
}

BracketedMaximum bracketed_maximize(const std::function<double(double)>& f,
                                    double lo, double hi, int grid_points,
                                    double tolerance) {
  const double step = (hi - lo) / static_cast<double>(grid_points);
  int best = 1;
  double best_value = f(lo + step);
  for (int i = 2; i <= grid_points; ++i) {
    const double value = f(lo + step * i);
    if (value > best_value) {
      best_value = value;
      best = i;
    }
  }

  // Golden-section search on the two grid cells around the best point.
  double a = lo + step * (best - 1);
  double b = std::min(hi, lo + step * (best + 1));
  constexpr double kInvPhi = 0.6180339887498949;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > tolerance) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    }
  }
  BracketedMaximum result;
  result.argmax = 0.5 * (a + b);
  result.value = f(result.argmax);
  if (best_value > result.value) {
    result.argmax = lo + step * best;
    result.value = best_value;
  }
  const double edge = 1e-6 * (hi - lo);
  result.at_lower_boundary = result.argmax - lo <= edge;
  result.at_upper_boundary = hi - result.argmax <= edge;
  return result;
}

double solve_xi(double beta, Criterion criterion) {
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw ConfigError(fmt::format("decay exponent must be positive, got {}", beta));
  }
  if (criterion == Criterion::kSensitivity && beta <= 1.0) {
    throw NoMaximumError(fmt::format(
        "information rate F/tau has no interior maximum for beta = {} "
        "(supremum as tau -> 0)",
        beta));
  }
  const DecayLaw unit(1.0, beta);
  const auto objective = criterion == Criterion::kVariance
                             ? std::function<double(double)>(
                                   [&unit](double x) { return fisher(x, unit); })
                             : std::function<double(double)>([&unit](double x) {
                                 return fisher_per_time(x, unit);
                               });
  const auto best = bracketed_maximize(objective, 0.0, kXiUpper, kXiGrid);
  if (best.at_lower_boundary || best.at_upper_boundary) {
    throw NoMaximumError(fmt::format(
        "no interior maximum of the {} criterion for beta = {} on (0, {}]",
        to_string(criterion), beta, kXiUpper));
  }
  return best.argmax;
}

XiTable XiTable::solved(const std::vector<double>& betas) {
  XiTable table;
  for (double beta : betas) {
    for (Criterion criterion : {Criterion::kVariance, Criterion::kSensitivity}) {
      try {
        table.set(criterion, beta, solve_xi(beta, criterion));
      } catch (const NoMaximumError&) {
        // left empty, as in the published table
      }
    }
  }
  return table;
}

XiTable XiTable::published() {
  XiTable table;
  table.set(Criterion::kVariance, 1.0, 0.79);
  table.set(Criterion::kVariance, 1.5, 0.86);
  table.set(Criterion::kVariance, 2.0, 0.89);
  table.set(Criterion::kVariance, 3.0, 0.92);
  table.set(Criterion::kSensitivity, 1.5, 0.30);
  table.set(Criterion::kSensitivity, 2.0, 0.66);
  table.set(Criterion::kSensitivity, 3.0, 0.85);
  return table;
}

void XiTable::set(Criterion criterion, double beta, double xi) {
  if (!(xi > 0.0) || !std::isfinite(xi)) {
    throw ConfigError(fmt::format("xi must be positive, got {}", xi));
  }
  entries_[{criterion, beta}] = xi;
}

bool XiTable::contains(Criterion criterion, double beta) const noexcept {
  return entries_.contains({criterion, beta});
}

double XiTable::at(Criterion criterion, double beta) const {
  if (auto it = entries_.find({criterion, beta}); it != entries_.end()) {
    return it->second;
  }
  return solve_xi(beta, criterion);
}

double bim_point_estimate(double tau, double t_hat, double beta) noexcept {
  return fisher(tau, DecayLaw(t_hat, beta));
}

double bim_particle_average(double tau, const ParticleEnsemble& ensemble,
                            double beta) noexcept {
  double total = 0.0;
  for (std::size_t k = 0; k < ensemble.size(); ++k) {
    total += ensemble.weights[k] * fisher(tau, DecayLaw(ensemble.positions[k], beta));
  }
  return total;
}

double crlb_envelope(double total_probing_time, const DecayLaw& law,
                     const std::optional<ReadoutModel>& readout,
                     Criterion criterion, CrlbMode mode, double duration_factor) {
  if (!(total_probing_time > 0.0)) {
    throw ConfigError(fmt::format("total probing time must be positive, got {}",
                                  total_probing_time));
  }
  const auto info = scaled_information(law.beta(), readout);
  double x_opt = 0.0;
  double info_opt = 0.0;
  bool have_rate_optimum = false;
  if (criterion == Criterion::kSensitivity) {
    const auto rate = bracketed_maximize([&info](double x) { return info(x) / x; },
                                         0.0, kXiUpper, kXiGrid);
    if (!rate.at_lower_boundary && !rate.at_upper_boundary) {
      x_opt = rate.argmax;
      info_opt = info(x_opt);
      have_rate_optimum = true;
    }
  }
  if (!have_rate_optimum) {
    const auto best = bracketed_maximize(info, 0.0, kXiUpper, kXiGrid);
    x_opt = best.argmax;
    info_opt = best.value;
  }

  const double t = law.t_chi();
  const double shot_time = duration_factor * x_opt * t;
  const double information = info_opt / (t * t);
  double shots = total_probing_time / shot_time;
  if (mode == CrlbMode::kShots) shots = std::max(1.0, std::floor(shots));
  return std::sqrt(1.0 / (shots * information));
}

}  // namespace qdecay
