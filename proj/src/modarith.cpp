// Copyright 2026 The nttmul Authors
// SPDX-License-Identifier: Apache-2.0

#include "modarith.hpp"

#include "error.hpp"

#include <bit>
#include <random>

namespace nttmul
{
namespace
{
__extension__ using u128 = unsigned __int128;
__extension__ using i128 = __int128;

void check_modulus(Word modulus)
{
    if (modulus < 2 || std::bit_width(modulus - 1) > kMaxModulusBits)
        throw Error(ErrorCode::kInvalidArgument,
                    "modulus must be in [2, 2^31], got " + std::to_string(modulus));
}

constexpr Word bits(Word value, unsigned hi, unsigned lo) noexcept
{
    return (value >> lo) & ((Word{1} << (hi - lo + 1)) - 1);
}

/// Feeds the gate's inputs in a fixed order: enumeration for small domains,
/// otherwise neighbourhoods of every multiple of M followed by random samples.
template <typename Visit>
void for_each_gate_input(Word modulus, const BarrettGateOptions& options, bool& exhaustive,
                         Visit&& visit)
{
    const Word top = (modulus - 1) * (modulus - 1);
    if (top < options.exhaustive_limit)
    {
        exhaustive = true;
        for (Word i = 0; i <= top; ++i)
            if (!visit(i))
                return;
        return;
    }
    exhaustive = false;
    for (Word i : {Word{0}, Word{1}, top - 1, top})
        if (!visit(i))
            return;
    for (Word q = 1; q * modulus - 1 <= top; ++q)
    {
        const Word base = q * modulus;
        for (Word i : {base - 1, base, base + 1})
            if (i <= top && !visit(i))
                return;
    }
    std::mt19937_64 rng{options.seed};
    std::uniform_int_distribution<Word> dist{0, top};
    for (std::uint64_t n = 0; n < options.random_samples; ++n)
        if (!visit(dist(rng)))
            return;
}
}  // namespace

namespace detail
{
std::optional<Word> barrett_steps(Word value, Word modulus, unsigned k, Word u) noexcept
{
    const Word beta = static_cast<Word>((u128{value} * u) >> k);
    i128 rem = i128{value} - i128{beta} * modulus;
    if (rem < 0 || rem >= i128{2} * modulus)
        return std::nullopt;
    if (rem >= i128{modulus})
        rem -= modulus;
    return static_cast<Word>(rem);
}

Word fixed_shift_add_reduce(Word value, FixedBarrettVariant variant) noexcept
{
    constexpr Word mask23 = (Word{1} << 23) - 1;

    // I*u with u = 2^20 - 2^9 (- 1): fits in 62 bits for I <= (M-1)^2.
    Word product = (value << 20) - (value << 9);
    if (variant == FixedBarrettVariant::kMinimal)
        product -= value;
    const Word r1 = product >> 20;  // 42-bit register
    const Word beta = bits(r1, 41, 20);

    // I - beta*(2^20 + 2^9 + 1), kept to the 23 bits that can be non-zero.
    Word acc = value & mask23;
    acc -= beta & mask23;
    acc -= bits(r1, 33, 20) << 9;
    acc -= bits(r1, 22, 20) << 20;
    acc &= mask23;
    if (acc >= kFixedModulus)
        acc -= kFixedModulus;
    return acc;
}
}  // namespace detail

bool barrett_bound_holds(Word modulus, unsigned k, Word u)
{
    if (modulus < 2 || k >= 127)
        return false;
    const u128 two_k = u128{1} << k;
    if (two_k <= modulus || u128{u} * modulus > two_k)
        return false;  // e < 0
    const u128 r = two_k - u128{u} * modulus;
    if (r >= modulus)
        return false;  // u is not floor(2^k / M)
    // (M-1)^2 * (r / (M 2^k)) < 1  <=>  (M-1)^2 * r < M * 2^k
    const u128 top = u128{modulus - 1} * (modulus - 1);
    return top * r < u128{modulus} * two_k;
}

BarrettConstants find_barrett_constants(Word modulus)
{
    check_modulus(modulus);
    unsigned k = static_cast<unsigned>(std::bit_width(modulus));  // first k with 2^k > M
    for (;; ++k)
    {
        const Word u = static_cast<Word>((u128{1} << k) / modulus);
        if (barrett_bound_holds(modulus, k, u))
            return {k, u};
    }
}

BarrettVerdict validate_barrett_constants(Word modulus, unsigned k, Word u,
                                          const BarrettGateOptions& options)
{
    check_modulus(modulus);
    if (k >= 96 || (u128{1} << k) <= modulus)
        throw Error(ErrorCode::kInvalidArgument, "Barrett shift must satisfy 2^k > M");

    BarrettVerdict verdict;
    for_each_gate_input(modulus, options, verdict.exhaustive, [&](Word i) {
        ++verdict.inputs_tested;
        const auto got = detail::barrett_steps(i, modulus, k, u);
        if (got && *got == i % modulus)
            return true;
        ++verdict.failures;
        if (!verdict.first_counterexample)
            verdict.first_counterexample = i;
        verdict.valid = false;
        return !options.stop_at_first_failure;
    });
    return verdict;
}

ModulusContext::ModulusContext(Word modulus, unsigned k, Word u, bool validated)
  : modulus_{modulus},
    width_{static_cast<unsigned>(std::bit_width(modulus - 1)) + 1},
    k_{k},
    u_{u},
    u_validated_{validated}
{}

ModulusContext ModulusContext::create(Word modulus)
{
    const auto c = find_barrett_constants(modulus);
    return ModulusContext{modulus, c.k, c.u, true};
}

ModulusContext ModulusContext::with_constants(Word modulus, unsigned k, Word u,
                                              const BarrettGateOptions& options)
{
    check_modulus(modulus);
    bool validated = barrett_bound_holds(modulus, k, u);
    if (!validated)
        validated = validate_barrett_constants(modulus, k, u, options).valid;
    return ModulusContext{modulus, k, u, validated};
}

Residue::Residue(Word value, const ModulusContext& ctx) : value_{value}
{
    if (value >= ctx.modulus())
        throw Error(ErrorCode::kDomain, "residue " + std::to_string(value) + " not below modulus " +
                                            std::to_string(ctx.modulus()));
}

Residue mod_add(Residue a, Residue b, const ModulusContext& ctx) noexcept
{
    Word s = a.value() + b.value();
    if (s >= ctx.modulus())
        s -= ctx.modulus();
    return Residue::unchecked(s);
}

Residue mod_sub(Residue a, Residue b, const ModulusContext& ctx) noexcept
{
    Word d = a.value() - b.value();
    if (a.value() < b.value())
        d += ctx.modulus();
    return Residue::unchecked(d);
}

Word karatsuba_mul(Word a, Word b, unsigned digit_bits)
{
    if (digit_bits == 0 || digit_bits % 2 != 0 || digit_bits > 32)
        throw Error(ErrorCode::kInvalidArgument,
                    "Karatsuba digit size must be even and at most 32, got " +
                        std::to_string(digit_bits));
    if ((a >> digit_bits) != 0 || (b >> digit_bits) != 0)
        throw Error(ErrorCode::kDomain, "Karatsuba operand does not fit in " +
                                            std::to_string(digit_bits) + " bits");

    const unsigned half = digit_bits / 2;
    const Word low_mask = (Word{1} << half) - 1;
    const Word a_hi = a >> half, a_lo = a & low_mask;
    const Word b_hi = b >> half, b_lo = b & low_mask;

    const Word high = a_hi * b_hi;
    const Word low = a_lo * b_lo;
    // The half sums carry into bit `half`; the cross product keeps that carry.
    const Word cross = (a_hi + a_lo) * (b_hi + b_lo) - high - low;

    return (high << digit_bits) + (cross << half) + low;
}

Residue barrett_reduce_generic(Word value, const ModulusContext& ctx)
{
    if (!ctx.u_validated())
        throw Error(ErrorCode::kValidation,
                    "Barrett constants (k=" + std::to_string(ctx.barrett_k()) +
                        ", u=" + std::to_string(ctx.barrett_u()) + ") have not been validated");
    if (value > ctx.max_reducible())
        throw Error(ErrorCode::kDomain,
                    "Barrett input " + std::to_string(value) + " exceeds (M-1)^2");
    const auto r = detail::barrett_steps(value, ctx.modulus(), ctx.barrett_k(), ctx.barrett_u());
    if (!r)
        throw Error(ErrorCode::kValidation, "Barrett estimate out of range for input " +
                                                std::to_string(value));
    return Residue::unchecked(*r);
}

BarrettConstants fixed_barrett_constants(FixedBarrettVariant variant) noexcept
{
    constexpr Word base = (Word{1} << 20) - (Word{1} << 9);
    return {40, variant == FixedBarrettVariant::kMinimal ? base - 1 : base};
}

Residue barrett_reduce_fixed(Word value)
{
    constexpr Word top = (kFixedModulus - 1) * (kFixedModulus - 1);
    if (value > top)
        throw Error(ErrorCode::kDomain,
                    "fixed reducer input " + std::to_string(value) + " exceeds (M-1)^2");
    return Residue::unchecked(detail::fixed_shift_add_reduce(value, FixedBarrettVariant::kMinimal));
}

FixedBarrettReducer FixedBarrettReducer::certify(FixedBarrettVariant variant,
                                                 const BarrettGateOptions& options)
{
    const auto c = fixed_barrett_constants(variant);
    if (!barrett_bound_holds(kFixedModulus, c.k, c.u))
    {
        BarrettGateOptions gate = options;
        gate.stop_at_first_failure = true;
        const auto verdict = validate_barrett_constants(kFixedModulus, c.k, c.u, gate);
        if (!verdict.valid)
            throw Error(ErrorCode::kValidation,
                        "Barrett constants (k=" + std::to_string(c.k) + ", u=" + std::to_string(c.u) +
                            ") fail for I=" + std::to_string(*verdict.first_counterexample));
    }
    return FixedBarrettReducer{variant};
}

Residue FixedBarrettReducer::reduce(Word value) const
{
    constexpr Word top = (kFixedModulus - 1) * (kFixedModulus - 1);
    if (value > top)
        throw Error(ErrorCode::kDomain,
                    "fixed reducer input " + std::to_string(value) + " exceeds (M-1)^2");
    return Residue::unchecked(detail::fixed_shift_add_reduce(value, variant_));
}

ModMultiplier::ModMultiplier(const ModulusContext& ctx)
  : ctx_{ctx},
    digit_bits_{(ctx.width() + 1) & ~1u},
    fixed_{ctx.modulus() == kFixedModulus &&
           BarrettConstants{ctx.barrett_k(), ctx.barrett_u()} ==
               fixed_barrett_constants(FixedBarrettVariant::kMinimal)}
{
    if (!ctx.u_validated())
        throw Error(ErrorCode::kValidation, "multiplier needs validated Barrett constants");
}

Word ModMultiplier::operator()(Word a, Word b) const
{
    const Word product = karatsuba_mul(a, b, digit_bits_);
    if (fixed_)
        return detail::fixed_shift_add_reduce(product, FixedBarrettVariant::kMinimal);
    return barrett_reduce_generic(product, ctx_).value();
}

std::string ModMultiplier::describe() const
{
    std::string s = "karatsuba(l=" + std::to_string(digit_bits_) + ")+";
    s += fixed_ ? "barrett_shift_add" : "barrett_generic";
    s += "(k=" + std::to_string(ctx_.barrett_k()) + ",u=" + std::to_string(ctx_.barrett_u()) + ")";
    return s;
}

}  // namespace nttmul
