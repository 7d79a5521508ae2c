// Copyright 2026 The nttmul Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace nttmul
{

enum class ErrorCode
{
    kInvalidArgument = 1,
    kInvalidRing,
    kDomain,
    kParse,
    kIo,
    kValidation,
    kSimulationFault,
};

/// Single exception type thrown by the core; the C API maps `code()` onto status values.
class Error : public std::runtime_error
{
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_{code} {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace nttmul
