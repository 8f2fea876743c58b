// Copyright 2026 The evcharge Authors
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

#ifndef EVCHARGE_COMMON_HPP
#define EVCHARGE_COMMON_HPP

#include <stdexcept>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace evcharge {

/// Exact rational used for costs, budgets and exact-arithmetic solves.
using Rational = boost::multiprecision::cpp_rational;
using Cost = Rational;

/// Seconds in the default planning horizon (one day).
inline constexpr double kDayHorizonSeconds = 86400.0;

/// Base class of every error thrown by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed user input (files, flags). `line` is 1-based, 0 when unknown.
class InputError : public Error {
 public:
  InputError(std::string code, std::string message, int line = 0)
      : Error(format(code, message, line)), code_(std::move(code)), line_(line) {}

  const std::string& code() const noexcept { return code_; }
  int line() const noexcept { return line_; }

 private:
  static std::string format(const std::string& code, const std::string& message, int line) {
    std::string out = code;
    if (line > 0) out += " at line " + std::to_string(line);
    out += ": " + message;
    return out;
  }

  std::string code_;
  int line_;
};

class InvalidInstance : public Error {
 public:
  using Error::Error;
};

class InfeasiblePlan : public Error {
 public:
  using Error::Error;
};

/// Parses "3", "1.25", "-2" or "7/3" into an exact rational.
Rational parse_rational(const std::string& text);

/// Exact conversion of a finite double.
Rational to_rational(double value);
/// The rational spelled by the shortest decimal that round-trips `value`
/// (0.1 -> 1/10), for data that was decimal before it was a double.
Rational decimal_rational(double value);

/// "7/3" or "2"; inverse of parse_rational.
std::string to_string(const Rational& value);

inline double to_double(const Rational& value) { return value.convert_to<double>(); }

}  // namespace evcharge

#endif  // EVCHARGE_COMMON_HPP
