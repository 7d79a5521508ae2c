// Copyright 2026 The nttmul Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Newline-delimited JSON vector files. Each line is one object with `a` and
// `b` (and optionally `c_expected`, `c`, `seed`) where every coefficient is a
// decimal string.

#include <nlohmann/json.hpp>

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace nttmul::cli
{

using Coeffs = std::vector<std::uint64_t>;

/// Malformed or out-of-range input; maps to exit code 2.
class InputError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

struct VectorRecord
{
    Coeffs a;
    Coeffs b;
    std::optional<Coeffs> c_expected;
    std::optional<std::uint64_t> seed;
    /// The parsed object, kept so rewritten records preserve unknown fields.
    nlohmann::ordered_json source;
};

/// Reads every record, checking lengths against `n` and entries against `modulus`.
std::vector<VectorRecord> read_records(std::istream& in, std::uint64_t modulus, std::size_t n);

/// One compact JSON object per line.
void write_record(std::ostream& out, const nlohmann::ordered_json& record);

nlohmann::ordered_json coeffs_to_json(const Coeffs& coeffs);

/// Uniform residues from std::mt19937_64. Raw 64-bit draws at or above the
/// largest multiple of M are rejected, the rest are reduced mod M, so the
/// stream is reproducible from the seed alone.
class ResidueSampler
{
public:
    ResidueSampler(std::uint64_t seed, std::uint64_t modulus);

    std::uint64_t next();
    Coeffs polynomial(std::size_t n);

private:
    std::mt19937_64 engine_;
    std::uint64_t modulus_;
    std::uint64_t limit_;
};

}  // namespace nttmul::cli
