/*
 * Copyright 2026 The advsens Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <stdexcept>
#include <string>

namespace advsens {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid configuration (bad paths, single-class dataset, unknown ids).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Vector/matrix length disagreement between coupled values.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// Operation requested from a backend that cannot provide it.
class CapabilityError : public Error {
public:
    using Error::Error;
};

/// Remote backend unreachable or connection-level failure.
class TransportError : public Error {
public:
    using Error::Error;
};

/// Remote backend reachable but the response violates the wire contract.
class ProtocolError : public Error {
public:
    using Error::Error;
};

/// Malformed numeric input (NaN scores, empty required sets).
class InputError : public Error {
public:
    using Error::Error;
};

/// A statistic was requested over an empty sample.
class UndefinedStatisticError : public Error {
public:
    using Error::Error;
};

} // namespace advsens
