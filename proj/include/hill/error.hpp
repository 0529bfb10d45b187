// Copyright 2026 The hillmech Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef HILL_ERROR_HPP_
#define HILL_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <vector>

namespace hill {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Adaptive quadrature ran out of depth before meeting its tolerance.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double best_estimate)
      : Error(what), best_estimate_(best_estimate) {}
  double best_estimate() const { return best_estimate_; }

 private:
  double best_estimate_;
};

// Communication schedule violates its layout invariants.
class ScheduleError : public Error {
 public:
  using Error::Error;
};

// Threshold or root solver failed; carries per-coordinate diagnostics.
class SolverError : public Error {
 public:
  SolverError(const std::string& what, std::vector<int> coordinates = {})
      : Error(what), coordinates_(std::move(coordinates)) {}
  const std::vector<int>& coordinates() const { return coordinates_; }

 private:
  std::vector<int> coordinates_;
};

// Invalid simulation or experiment configuration. `field` names the
// offending entry using a dotted path when known.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& what, std::string field = {})
      : Error(field.empty() ? what : field + ": " + what),
        field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

// Failure while reading or parsing an input file.
class LoadError : public Error {
 public:
  LoadError(const std::string& what, int line = 0)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

}  // namespace hill

#endif  // HILL_ERROR_HPP_
