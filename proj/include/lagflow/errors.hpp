// Copyright 2026 The lagflow Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace lagflow {

// A mathematical precondition of an operation does not hold (CLI exit 2).
// The message is the precondition name, e.g. "not clean".
class PreconditionError : public std::runtime_error {
public:
    explicit PreconditionError(const std::string& what) : std::runtime_error(what) {}
};

// Malformed or inconsistent input: bad shapes, non-finite entries,
// schema violations (CLI exit 3).
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// An iterative numerical routine did not converge (CLI exit 1).
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace lagflow
