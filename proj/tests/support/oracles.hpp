// Copyright 2026 The nttmul Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Test-only reference computations written independently of the library,
// plus small seeded generators for property tests.

#include <cstdint>
#include <random>
#include <vector>

namespace nttmul::testing
{

__extension__ using u128 = unsigned __int128;
__extension__ using i128 = __int128;

using Coeffs = std::vector<std::uint64_t>;

inline std::uint64_t power(std::uint64_t base, std::uint64_t exp, std::uint64_t m)
{
    u128 result = 1 % m;
    u128 b = base % m;
    for (; exp != 0; exp >>= 1)
    {
        if (exp & 1)
            result = result * b % m;
        b = b * b % m;
    }
    return static_cast<std::uint64_t>(result);
}

/// Trial division; fine for the moduli used in tests.
inline bool prime_by_trial_division(std::uint64_t n)
{
    if (n < 2)
        return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0)
            return false;
    return true;
}

/// Multiplicative order by stepping through powers.
inline std::uint64_t order_of(std::uint64_t x, std::uint64_t m)
{
    std::uint64_t acc = x % m;
    for (std::uint64_t k = 1; k < m; ++k)
    {
        if (acc == 1)
            return k;
        acc = static_cast<std::uint64_t>(u128{acc} * x % m);
    }
    return 0;
}

/// Smallest element of order M-1, by exhaustive search.
inline std::uint64_t smallest_generator_by_search(std::uint64_t m)
{
    for (std::uint64_t g = 2; g < m; ++g)
        if (order_of(g, m) == m - 1)
            return g;
    return 0;
}

/// Direct sum over the full index square, reduced once at the end.
inline Coeffs schoolbook_negacyclic(const Coeffs& a, const Coeffs& b, std::uint64_t m)
{
    const std::size_t n = a.size();
    std::vector<i128> acc(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
        {
            const i128 term = static_cast<i128>(u128{a[i]} * b[j]);
            if (i + j < n)
                acc[i + j] += term;
            else
                acc[i + j - n] -= term;
        }
    Coeffs c(n);
    for (std::size_t k = 0; k < n; ++k)
    {
        i128 r = acc[k] % static_cast<i128>(m);
        if (r < 0)
            r += m;
        c[k] = static_cast<std::uint64_t>(r);
    }
    return c;
}

/// A_i = sum_j a_j omega^(ij), evaluated term by term.
inline Coeffs direct_transform(const Coeffs& a, std::uint64_t omega, std::uint64_t m)
{
    const std::size_t n = a.size();
    Coeffs out(n);
    for (std::size_t i = 0; i < n; ++i)
    {
        u128 sum = 0;
        for (std::size_t j = 0; j < n; ++j)
            sum += u128{a[j]} * power(omega, (i * j) % n, m);
        out[i] = static_cast<std::uint64_t>(sum % m);
    }
    return out;
}

inline std::size_t reverse_bits(std::size_t x, unsigned bits)
{
    std::size_t r = 0;
    for (unsigned b = 0; b < bits; ++b)
        r |= ((x >> b) & 1u) << (bits - 1 - b);
    return r;
}

/// Seeded uniform residues for property tests.
class Generator
{
public:
    explicit Generator(std::uint64_t seed) : engine_{seed} {}

    std::uint64_t below(std::uint64_t bound) { return std::uniform_int_distribution<std::uint64_t>{0, bound - 1}(engine_); }

    Coeffs residues(std::size_t n, std::uint64_t m)
    {
        Coeffs out(n);
        for (auto& v : out)
            v = below(m);
        return out;
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace nttmul::testing
