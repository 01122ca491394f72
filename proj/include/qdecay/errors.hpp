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

#ifndef QDECAY_ERRORS_HPP_
#define QDECAY_ERRORS_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qdecay {

// Invalid parameters for a domain type or an inconsistent run configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The optimized criterion has no interior maximum (supremum at the boundary).
class NoMaximumError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Every unnormalized particle weight vanished after a likelihood update.
class DegeneratePosteriorError : public std::runtime_error {
 public:
  explicit DegeneratePosteriorError(const std::string& what,
                                    std::ptrdiff_t epoch = -1)
      : std::runtime_error(what), epoch_(epoch) {}

  // Epoch index at which the update failed, or -1 when unknown.
  std::ptrdiff_t epoch() const noexcept { return epoch_; }

 private:
  std::ptrdiff_t epoch_;
};

// An uncertainty curve never reaches the requested target.
class NotReachedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qdecay

#endif  // QDECAY_ERRORS_HPP_
