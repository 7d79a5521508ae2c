// Copyright 2026 The nttmul Authors
// SPDX-License-Identifier: Apache-2.0

#include "polymul.hpp"

#include "error.hpp"

#include <bit>

namespace nttmul
{
namespace
{
Word mul_mod(Word a, Word b, Word m) noexcept
{
    return a * b % m;  // M < 2^31
}

void require_shape(const Polynomial& p, const NttParams& params, const char* what)
{
    if (p.size() != params.n)
        throw Error(ErrorCode::kInvalidArgument,
                    std::string{what} + ": length " + std::to_string(p.size()) +
                        " does not match N=" + std::to_string(params.n));
}

void require_domain(const Polynomial& p, Domain domain, const char* what)
{
    if (p.domain() != domain)
        throw Error(ErrorCode::kInvalidArgument,
                    std::string{what} + ": operand is in the wrong domain");
}

/// Radix-2 decimation-in-time butterflies over bit-reversed input; leaves the
/// result in natural order.
void dit_in_place(std::vector<Word>& a, Word root, Word m)
{
    const std::size_t n = a.size();
    for (std::size_t len = 2; len <= n; len <<= 1)
    {
        const Word step = pow_mod(root, n / len, m);
        for (std::size_t base = 0; base < n; base += len)
        {
            Word w = 1;
            for (std::size_t j = 0; j < len / 2; ++j)
            {
                const Word u = a[base + j];
                const Word v = mul_mod(a[base + j + len / 2], w, m);
                a[base + j] = u + v >= m ? u + v - m : u + v;
                a[base + j + len / 2] = u >= v ? u - v : u + m - v;
                w = mul_mod(w, step, m);
            }
        }
    }
}

std::vector<Word> bit_reversed_copy(std::span<const Word> in)
{
    const unsigned bits = static_cast<unsigned>(std::countr_zero(in.size()));
    std::vector<Word> out(in.size());
    for (std::size_t i = 0; i < in.size(); ++i)
        out[bit_reverse(i, bits)] = in[i];
    return out;
}

/// Inverse transform without the N^-1 factor, natural order out.
std::vector<Word> inverse_unscaled(const Polynomial& spectrum, const NttParams& params)
{
    std::vector<Word> work = spectrum.order() == Order::kNatural
                                 ? bit_reversed_copy(spectrum.coeffs())
                                 : std::vector<Word>(spectrum.coeffs().begin(), spectrum.coeffs().end());
    dit_in_place(work, params.omega_inv, params.modulus());
    return work;
}
}  // namespace

Polynomial Polynomial::from_coeffs(std::vector<Word> coeffs, const NttParams& params)
{
    if (coeffs.size() != params.n)
        throw Error(ErrorCode::kInvalidArgument, "polynomial has " + std::to_string(coeffs.size()) +
                                                     " coefficients, expected " +
                                                     std::to_string(params.n));
    for (std::size_t i = 0; i < coeffs.size(); ++i)
        if (coeffs[i] >= params.modulus())
            throw Error(ErrorCode::kDomain, "coefficient " + std::to_string(i) + " = " +
                                                std::to_string(coeffs[i]) + " is not below M");
    return Polynomial{std::move(coeffs)};
}

Polynomial naive_negacyclic_mul(const Polynomial& a, const Polynomial& b, const NttParams& params)
{
    require_shape(a, params, "naive_negacyclic_mul");
    require_shape(b, params, "naive_negacyclic_mul");
    require_domain(a, Domain::kCoefficient, "naive_negacyclic_mul");
    require_domain(b, Domain::kCoefficient, "naive_negacyclic_mul");
    if (a.order() != Order::kNatural || b.order() != Order::kNatural)
        throw Error(ErrorCode::kInvalidArgument, "naive_negacyclic_mul: operands must be in natural order");

    const Word m = params.modulus();
    const std::size_t n = params.n;
    std::vector<Word> c(n, 0);
    for (std::size_t i = 0; i < n; ++i)
    {
        for (std::size_t j = 0; j < n; ++j)
        {
            const Word t = mul_mod(a[i], b[j], m);
            const std::size_t k = i + j;
            if (k < n)
                c[k] = (c[k] + t) % m;
            else
                c[k - n] = (c[k - n] + m - t) % m;  // x^N = -1
        }
    }
    return Polynomial{std::move(c)};
}

Polynomial ntt_forward(const Polynomial& a, const NttParams& params)
{
    require_shape(a, params, "ntt_forward");
    require_domain(a, Domain::kCoefficient, "ntt_forward");
    if (a.order() != Order::kNatural)
        throw Error(ErrorCode::kInvalidArgument, "ntt_forward: input must be in natural order");
    auto work = bit_reversed_copy(a.coeffs());
    dit_in_place(work, params.omega, params.modulus());
    return Polynomial{std::move(work), Domain::kEvaluation, Order::kNatural};
}

Polynomial ntt_inverse(const Polynomial& spectrum, const NttParams& params)
{
    require_shape(spectrum, params, "ntt_inverse");
    require_domain(spectrum, Domain::kEvaluation, "ntt_inverse");
    auto work = inverse_unscaled(spectrum, params);
    for (auto& v : work)
        v = mul_mod(v, params.n_inv, params.modulus());
    return Polynomial{std::move(work)};
}

Polynomial pointwise_mul(const Polynomial& a, const Polynomial& b, const NttParams& params)
{
    require_shape(a, params, "pointwise_mul");
    require_shape(b, params, "pointwise_mul");
    require_domain(a, Domain::kEvaluation, "pointwise_mul");
    require_domain(b, Domain::kEvaluation, "pointwise_mul");
    if (a.order() != b.order())
        throw Error(ErrorCode::kInvalidArgument,
                    "pointwise_mul: spectra are in different index orders");
    std::vector<Word> c(params.n);
    for (std::size_t i = 0; i < c.size(); ++i)
        c[i] = mul_mod(a[i], b[i], params.modulus());
    return Polynomial{std::move(c), Domain::kEvaluation, a.order()};
}

Polynomial negacyclic_mul_ntt(const Polynomial& a, const Polynomial& b, const NttParams& params)
{
    require_shape(a, params, "negacyclic_mul_ntt");
    require_shape(b, params, "negacyclic_mul_ntt");
    require_domain(a, Domain::kCoefficient, "negacyclic_mul_ntt");
    require_domain(b, Domain::kCoefficient, "negacyclic_mul_ntt");
    const Word m = params.modulus();

    auto weight = [&](const Polynomial& p) {
        std::vector<Word> w(params.n);
        for (std::size_t i = 0; i < w.size(); ++i)
            w[i] = mul_mod(p[i], params.weights_fwd[i], m);
        return Polynomial{std::move(w)};
    };
    const auto spectrum = pointwise_mul(ntt_forward(weight(a), params), ntt_forward(weight(b), params), params);
    auto c = inverse_unscaled(spectrum, params);
    for (std::size_t i = 0; i < c.size(); ++i)
        c[i] = mul_mod(c[i], params.weights_inv_scaled[i], m);
    return Polynomial{std::move(c)};
}

Polynomial bit_reverse_permute(const Polynomial& a)
{
    const std::size_t n = a.size();
    if (n == 0 || (n & (n - 1)) != 0)
        throw Error(ErrorCode::kInvalidArgument, "bit_reverse_permute: length must be a power of two");
    const Order flipped = a.order() == Order::kNatural ? Order::kBitReversed : Order::kNatural;
    return Polynomial{bit_reversed_copy(a.coeffs()), a.domain(), flipped};
}

}  // namespace nttmul
