// Copyright 2026 The nttmul Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace nttmul
{

using Word = std::uint64_t;

/// 2^20 + 2^9 + 1, the modulus the shift-add reducer is wired for.
inline constexpr Word kFixedModulus = 1049089;

/// Moduli are limited so that every residue product fits a 64-bit word and
/// Karatsuba digits stay within 32 bits.
inline constexpr unsigned kMaxModulusBits = 31;

/// Digit size used for the 21-bit datapath (two 11-bit halves).
inline constexpr unsigned kKaratsubaDigitBits = 22;

struct BarrettConstants
{
    unsigned k = 0;
    Word u = 0;

    friend bool operator==(const BarrettConstants&, const BarrettConstants&) = default;
};

/// Controls how hard `validate_barrett_constants` looks for a counterexample.
struct BarrettGateOptions
{
    std::uint64_t random_samples = 1'000'000;
    std::uint64_t seed = 0x9e3779b97f4a7c15ULL;
    /// Domains with at most this many inputs are checked exhaustively instead.
    std::uint64_t exhaustive_limit = std::uint64_t{1} << 22;
    bool stop_at_first_failure = false;
};

struct BarrettVerdict
{
    bool valid = true;
    bool exhaustive = false;
    std::optional<Word> first_counterexample;
    std::uint64_t inputs_tested = 0;
    std::uint64_t failures = 0;
};

/// True when u = floor(2^k / M) exactly and the truncation error e = 1/M - u/2^k
/// satisfies (M-1)^2 * e < 1, which bounds the remainder estimate to [0, 2M).
bool barrett_bound_holds(Word modulus, unsigned k, Word u);

/// Smallest k with 2^k > M for which `barrett_bound_holds(M, k, floor(2^k / M))`.
BarrettConstants find_barrett_constants(Word modulus);

/// Runs the Barrett procedure with (k, u) against the true remainder over
/// boundary-structured inputs (around every multiple of M, and (M-1)^2) and
/// uniformly sampled inputs in [0, (M-1)^2]. Small domains are enumerated.
BarrettVerdict validate_barrett_constants(Word modulus, unsigned k, Word u,
                                          const BarrettGateOptions& options = {});

/// Modulus plus its Barrett constants. Immutable once built.
class ModulusContext
{
public:
    /// Uses the minimal constants from `find_barrett_constants`.
    static ModulusContext create(Word modulus);

    /// Uses caller-chosen constants. They are marked validated when the error
    /// bound proves them, otherwise only if the sampling gate finds no failure.
    static ModulusContext with_constants(Word modulus, unsigned k, Word u,
                                         const BarrettGateOptions& options = {});

    Word modulus() const noexcept { return modulus_; }
    unsigned width() const noexcept { return width_; }
    unsigned barrett_k() const noexcept { return k_; }
    Word barrett_u() const noexcept { return u_; }
    bool u_validated() const noexcept { return u_validated_; }

    /// Largest input accepted by the reducers: (M-1)^2.
    Word max_reducible() const noexcept { return (modulus_ - 1) * (modulus_ - 1); }

    friend bool operator==(const ModulusContext&, const ModulusContext&) = default;

private:
    ModulusContext(Word modulus, unsigned k, Word u, bool validated);

    Word modulus_;
    unsigned width_;
    unsigned k_;
    Word u_;
    bool u_validated_;
};

/// A value in [0, M). Does not carry its context; operations take it explicitly.
class Residue
{
public:
    Residue(Word value, const ModulusContext& ctx);

    static constexpr Residue unchecked(Word value) noexcept { return Residue{value}; }

    constexpr Word value() const noexcept { return value_; }

    friend constexpr bool operator==(Residue, Residue) = default;

private:
    constexpr explicit Residue(Word value) noexcept : value_{value} {}

    Word value_;
};

Residue mod_add(Residue a, Residue b, const ModulusContext& ctx) noexcept;
Residue mod_sub(Residue a, Residue b, const ModulusContext& ctx) noexcept;

/// One level of Karatsuba over `digit_bits`-wide operands split into two halves.
/// Throws on odd or oversized digit widths and on operands that do not fit.
Word karatsuba_mul(Word a, Word b, unsigned digit_bits = kKaratsubaDigitBits);

/// Barrett reduction of I in [0, (M-1)^2] with the context's constants.
/// Refuses contexts whose constants have not been validated.
Residue barrett_reduce_generic(Word value, const ModulusContext& ctx);

enum class FixedBarrettVariant
{
    /// u = 2^20 - 2^9 - 1 = 1,048,063, the minimal constant.
    kMinimal,
    /// u = 2^20 - 2^9 = 1,048,064, one subtracter fewer.
    kShiftSubtract,
};

BarrettConstants fixed_barrett_constants(FixedBarrettVariant variant) noexcept;

/// Shift/add/slice reducer for M = 1,049,089 using the minimal constants.
Residue barrett_reduce_fixed(Word value);

/// The shift-add reducer behind a certification step: `certify` runs the
/// validation gate for the requested variant and throws if it finds a failing
/// input, reporting it in the message.
class FixedBarrettReducer
{
public:
    static FixedBarrettReducer certify(FixedBarrettVariant variant,
                                       const BarrettGateOptions& options = {});

    FixedBarrettVariant variant() const noexcept { return variant_; }
    Residue reduce(Word value) const;

private:
    explicit FixedBarrettReducer(FixedBarrettVariant variant) noexcept : variant_{variant} {}

    FixedBarrettVariant variant_;
};

/// Residue multiplier matching the hardware datapath: Karatsuba product, then
/// the fixed reducer for M = 1,049,089 or the generic Barrett reducer otherwise.
class ModMultiplier
{
public:
    explicit ModMultiplier(const ModulusContext& ctx);

    Word operator()(Word a, Word b) const;

    bool uses_fixed_reducer() const noexcept { return fixed_; }
    unsigned digit_bits() const noexcept { return digit_bits_; }
    std::string describe() const;

private:
    ModulusContext ctx_;
    unsigned digit_bits_;
    bool fixed_;
};

namespace detail
{
/// Bit-level model of the shift-add reducer. No domain check and no
/// guarantee that the result is below M for an uncertified variant.
Word fixed_shift_add_reduce(Word value, FixedBarrettVariant variant) noexcept;

/// Barrett steps with arbitrary (k, u): returns the single-correction
/// remainder, or nullopt when the estimate leaves [0, 2M).
std::optional<Word> barrett_steps(Word value, Word modulus, unsigned k, Word u) noexcept;
}  // namespace detail

}  // namespace nttmul
