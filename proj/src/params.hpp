// Copyright 2026 The nttmul Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "modarith.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace nttmul
{

/// Where a stage's twiddle constants live in hardware: a handful of registers
/// behind a multiplexer, or a ROM.
enum class StorageKind
{
    kRegisters,
    kMemory,
};

const char* to_string(StorageKind kind) noexcept;

/// Stages with at most this many distinct twiddles keep them in registers.
inline constexpr std::size_t kRegisterTwiddleLimit = 4;

/// Distinct twiddles of one transform stage, in the order the stage first
/// consumes them.
///
/// Forward stage s (1-based) pairs positions at distance N/2^s and holds one
/// constant per butterfly block: the k-th butterfly of a frame uses
/// `values[k / (N/2^s)]`. Inverse stage t pairs positions at distance 2^(t-1)
/// and cycles through its constants: the k-th butterfly uses
/// `values[k % 2^(t-1)]`.
struct StageTwiddles
{
    std::vector<Word> values;
    StorageKind storage = StorageKind::kRegisters;

    friend bool operator==(const StageTwiddles&, const StageTwiddles&) = default;
};

struct RootPair
{
    Word omega = 0;
    Word phi = 0;
};

/// Every constant needed by the reference transforms and the pipeline model.
struct NttParams
{
    std::uint32_t n = 0;
    ModulusContext ctx = ModulusContext::create(2);
    Word omega = 0;
    Word phi = 0;
    Word omega_inv = 0;
    Word phi_inv = 0;
    Word n_inv = 0;
    /// phi^i for i in [0, N).
    std::vector<Word> weights_fwd;
    /// N^-1 * phi^-i for i in [0, N); the inverse scaling is folded in.
    std::vector<Word> weights_inv_scaled;
    std::vector<StageTwiddles> stage_twiddles_fwd;
    std::vector<StageTwiddles> stage_twiddles_inv;

    Word modulus() const noexcept { return ctx.modulus(); }
    unsigned stages() const noexcept;

    friend bool operator==(const NttParams&, const NttParams&) = default;
};

bool is_prime(Word value) noexcept;
Word pow_mod(Word base, Word exponent, Word modulus) noexcept;
Word inv_mod(Word value, Word modulus);
std::size_t bit_reverse(std::size_t index, unsigned bit_count) noexcept;

/// N is a power of two (at least 2), M is a prime below 2^31, and 2N divides M-1.
bool validate_ring(Word modulus, std::uint64_t n) noexcept;

/// Smallest generator g, phi = g^((M-1)/2N), omega = phi^2.
RootPair derive_roots(Word modulus, std::uint32_t n);

NttParams build_params(Word modulus, std::uint32_t n);

/// Rechecks every invariant of a parameter set and throws
/// `Error(kValidation)` naming the first one that fails.
void validate_params(const NttParams& params);

std::string tables_to_json(const NttParams& params);
NttParams tables_from_json(const std::string& text);

void emit_tables(const NttParams& params, const std::filesystem::path& path);
NttParams load_tables(const std::filesystem::path& path);

}  // namespace nttmul
