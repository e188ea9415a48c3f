// Copyright 2026 The snvtune Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace snvtune {

// Caller broke a documented precondition (wrong frame, non-orthonormal rotation, ...).
class ContractViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// A physical quantity is outside its allowed operating range (voltage limits, pull-in).
class RangeError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

// A coordinate or argument is outside the model's domain (position outside the beam).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Malformed or insufficient user input (too few scan points, empty samples, unknown ids).
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Configuration failed validation. `key` is the dotted path of the offending entry.
class ConfigError : public std::invalid_argument {
public:
    ConfigError(std::string key, const std::string& constraint)
        : std::invalid_argument(key + ": " + constraint), key_(std::move(key)) {}

    [[nodiscard]] const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

// Inconsistent control setup detected before a stabilization run starts.
class SetupError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace snvtune
