// Copyright 2026 The rmps authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace rmps {

/// Base class for numerical/domain failures. The CLI maps these to exit code 3.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct DimensionMismatchError : Error {
    using Error::Error;
};

struct NotHermitianError : Error {
    using Error::Error;
};

struct NoConvergenceError : Error {
    using Error::Error;
};

struct StateTooLargeError : Error {
    using Error::Error;
};

struct WindowTooLargeError : Error {
    using Error::Error;
};

struct ChiTooLargeForPbcError : Error {
    using Error::Error;
};

struct OrderTooLargeError : Error {
    using Error::Error;
};

struct NotDensityMatrixError : Error {
    using Error::Error;
};

struct InsufficientTailError : Error {
    using Error::Error;
};

/// Configuration/validation failures. The CLI maps these to exit code 2.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace rmps
