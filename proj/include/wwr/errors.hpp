/*
   Copyright 2026 The wwr-cva Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>

namespace wwr {

/// Root of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Inputs that make a closed form divide by zero.
class DegenerateInputError : public Error {
public:
    DegenerateInputError(std::string what, std::string denominator)
        : Error(std::move(what)), denominator_(std::move(denominator)) {}
    const std::string& denominator() const noexcept { return denominator_; }

private:
    std::string denominator_;
};

class IntegrationError : public Error {
public:
    IntegrationError(const std::string& what, double abscissa)
        : Error(what), abscissa_(abscissa) {}
    double abscissa() const noexcept { return abscissa_; }

private:
    double abscissa_;
};

/// Integration interval contains the pole of 1/s.
class SingularityError : public Error {
public:
    using Error::Error;
};

class NotPsdError : public Error {
public:
    NotPsdError(const std::string& what, int pivot, double value)
        : Error(what), pivot_(pivot), value_(value) {}
    int pivot() const noexcept { return pivot_; }
    double value() const noexcept { return value_; }

private:
    int pivot_;
    double value_;
};

/// Non-finite state produced while stepping a path.
class SimulationError : public Error {
public:
    SimulationError(const std::string& what, std::size_t path, std::size_t step)
        : Error(what), path_(path), step_(step) {}
    std::size_t path() const noexcept { return path_; }
    std::size_t step() const noexcept { return step_; }

private:
    std::size_t path_;
    std::size_t step_;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

namespace detail {

template <typename... Args>
std::string concat(Args&&... args) {
    std::ostringstream oss;
    oss.precision(17);
    (oss << ... << std::forward<Args>(args));
    return oss.str();
}

}  // namespace detail

}  // namespace wwr
