// Copyright 2026 The tbcontrol Authors
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

#ifndef TBCONTROL_ERRORS_HPP_
#define TBCONTROL_ERRORS_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace tbcontrol {

// Invalid argument to a model or numerical routine (non-finite input,
// parameter outside its admissible range, mismatched series lengths).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Output file could not be opened or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A sweep produced a non-finite value.
class IntegrationBlowup : public std::runtime_error {
 public:
  IntegrationBlowup(std::size_t node, double time, const std::string& what)
      : std::runtime_error(what), node_(node), time_(time) {}

  std::size_t node() const noexcept { return node_; }
  double time() const noexcept { return time_; }

 private:
  std::size_t node_;
  double time_;
};

// Scenario document rejected. line() is 1-based, 0 when the problem is not
// tied to one line (e.g. a cross-field invariant with the key absent).
class ScenarioError : public std::runtime_error {
 public:
  ScenarioError(std::string key, std::size_t line, const std::string& message)
      : std::runtime_error(format_message(key, line, message)),
        key_(std::move(key)),
        line_(line) {}

  const std::string& key() const noexcept { return key_; }
  std::size_t line() const noexcept { return line_; }

 private:
  static std::string format_message(const std::string& key, std::size_t line,
                            const std::string& message) {
    std::string out = "scenario";
    if (line > 0) out += " line " + std::to_string(line);
    if (!key.empty()) out += " key '" + key + "'";
    return out + ": " + message;
  }

  std::string key_;
  std::size_t line_;
};

}  // namespace tbcontrol

#endif  // TBCONTROL_ERRORS_HPP_
