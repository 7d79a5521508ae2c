// Copyright 2026 The nttmul Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "params.hpp"

#include <span>
#include <vector>

namespace nttmul
{

enum class Domain
{
    kCoefficient,
    kEvaluation,
};

enum class Order
{
    kNatural,
    kBitReversed,
};

/// Coefficients (or spectrum values) modulo M, tagged with the transform
/// domain and the index order so mismatched operands are caught.
class Polynomial
{
public:
    Polynomial() = default;
    Polynomial(std::vector<Word> coeffs, Domain domain = Domain::kCoefficient,
               Order order = Order::kNatural)
      : coeffs_{std::move(coeffs)}, domain_{domain}, order_{order}
    {}

    /// Checks length and range against `params`.
    static Polynomial from_coeffs(std::vector<Word> coeffs, const NttParams& params);

    std::span<const Word> coeffs() const noexcept { return coeffs_; }
    std::vector<Word>& mutable_coeffs() noexcept { return coeffs_; }
    std::size_t size() const noexcept { return coeffs_.size(); }
    Domain domain() const noexcept { return domain_; }
    Order order() const noexcept { return order_; }
    Word operator[](std::size_t i) const noexcept { return coeffs_[i]; }

    friend bool operator==(const Polynomial&, const Polynomial&) = default;

private:
    std::vector<Word> coeffs_;
    Domain domain_ = Domain::kCoefficient;
    Order order_ = Order::kNatural;
};

/// Schoolbook product modulo x^N + 1. The oracle for every other path.
Polynomial naive_negacyclic_mul(const Polynomial& a, const Polynomial& b, const NttParams& params);

/// A_i = sum_j a_j omega^(ij), natural order out.
Polynomial ntt_forward(const Polynomial& a, const NttParams& params);

/// Inverse of `ntt_forward`, including the N^-1 scaling. Accepts either order.
Polynomial ntt_inverse(const Polynomial& spectrum, const NttParams& params);

Polynomial pointwise_mul(const Polynomial& a, const Polynomial& b, const NttParams& params);

/// Weight, two forward transforms, pointwise product, inverse transform, and
/// unweight with the N^-1-folded table.
Polynomial negacyclic_mul_ntt(const Polynomial& a, const Polynomial& b, const NttParams& params);

/// Index i moves to the bit reversal of i over log2(N) bits; flips the order tag.
Polynomial bit_reverse_permute(const Polynomial& a);

}  // namespace nttmul
