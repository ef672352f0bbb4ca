// Copyright 2026 The ioncodesign Authors
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

#ifndef IONCODESIGN_ERRORS_HPP
#define IONCODESIGN_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ioncodesign {

enum class ErrorKind {
    InvalidArgument,
    ResourceLimit,
    Unidentifiable,
    Config,
    Io,
    Runtime,
};

/// Base exception for everything thrown by the core library. The C API maps
/// `kind()` onto its status codes.
class Error : public std::runtime_error {
   public:
    Error(ErrorKind kind, const std::string &message) : std::runtime_error(message), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

   private:
    ErrorKind kind_;
};

struct InvalidArgument : Error {
    explicit InvalidArgument(const std::string &message) : Error(ErrorKind::InvalidArgument, message) {}
};

struct ResourceLimit : Error {
    explicit ResourceLimit(const std::string &message) : Error(ErrorKind::ResourceLimit, message) {}
};

struct Unidentifiable : Error {
    explicit Unidentifiable(const std::string &message) : Error(ErrorKind::Unidentifiable, message) {}
};

struct IoError : Error {
    explicit IoError(const std::string &message) : Error(ErrorKind::Io, message) {}
};

/// Configuration problem tied to a specific field of the experiment config.
class ConfigError : public Error {
   public:
    ConfigError(std::string field, const std::string &message)
        : Error(ErrorKind::Config, field + ": " + message), field_(std::move(field)) {}
    const std::string &field() const noexcept { return field_; }

   private:
    std::string field_;
};

}  // namespace ioncodesign

#endif
