// Copyright 2026 The nttmul Authors
// SPDX-License-Identifier: Apache-2.0

#include "params.hpp"

#include "error.hpp"

#include <nlohmann/json.hpp>

#include <bit>
#include <charconv>
#include <fstream>
#include <sstream>

namespace nttmul
{
namespace
{
__extension__ using u128 = unsigned __int128;
using nlohmann::json;

Word mul_mod(Word a, Word b, Word m) noexcept
{
    return static_cast<Word>(u128{a} * b % m);
}

std::vector<Word> prime_factors(Word value)
{
    std::vector<Word> factors;
    for (Word p = 2; p * p <= value; ++p)
    {
        if (value % p != 0)
            continue;
        factors.push_back(p);
        while (value % p == 0)
            value /= p;
    }
    if (value > 1)
        factors.push_back(value);
    return factors;
}

std::vector<StageTwiddles> forward_stage_tables(Word omega, std::uint32_t n, Word m)
{
    const unsigned stages = static_cast<unsigned>(std::countr_zero(n));
    std::vector<StageTwiddles> tables;
    for (unsigned s = 1; s <= stages; ++s)
    {
        const std::size_t blocks = std::size_t{1} << (s - 1);
        const Word step = n >> s;
        StageTwiddles t;
        for (std::size_t b = 0; b < blocks; ++b)
            t.values.push_back(pow_mod(omega, step * bit_reverse(b, s - 1), m));
        t.storage = blocks <= kRegisterTwiddleLimit ? StorageKind::kRegisters : StorageKind::kMemory;
        tables.push_back(std::move(t));
    }
    return tables;
}

std::vector<StageTwiddles> inverse_stage_tables(Word omega_inv, std::uint32_t n, Word m)
{
    const unsigned stages = static_cast<unsigned>(std::countr_zero(n));
    std::vector<StageTwiddles> tables;
    for (unsigned t = 1; t <= stages; ++t)
    {
        const std::size_t span = std::size_t{1} << (t - 1);
        const Word step = n >> t;
        StageTwiddles st;
        for (std::size_t j = 0; j < span; ++j)
            st.values.push_back(pow_mod(omega_inv, step * j, m));
        st.storage = span <= kRegisterTwiddleLimit ? StorageKind::kRegisters : StorageKind::kMemory;
        tables.push_back(std::move(st));
    }
    return tables;
}

[[noreturn]] void invalid(const std::string& what)
{
    throw Error(ErrorCode::kValidation, "invalid parameters: " + what);
}

Word parse_word(const json& j, const char* field)
{
    std::string text;
    if (j.is_string())
        text = j.get<std::string>();
    else if (j.is_number_unsigned())
        return j.get<Word>();
    else
        throw Error(ErrorCode::kParse, std::string{"field '"} + field + "' must be a decimal string");
    Word value = 0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end || text.empty())
        throw Error(ErrorCode::kParse,
                    std::string{"field '"} + field + "' is not a decimal integer: " + text);
    return value;
}

std::vector<Word> parse_words(const json& j, const char* field)
{
    if (!j.is_array())
        throw Error(ErrorCode::kParse, std::string{"field '"} + field + "' must be an array");
    std::vector<Word> out;
    out.reserve(j.size());
    for (const auto& v : j)
        out.push_back(parse_word(v, field));
    return out;
}

json words_to_json(const std::vector<Word>& values)
{
    json arr = json::array();
    for (Word v : values)
        arr.push_back(std::to_string(v));
    return arr;
}

StorageKind parse_storage(const json& j)
{
    const auto s = j.get<std::string>();
    if (s == "regs")
        return StorageKind::kRegisters;
    if (s == "mem")
        return StorageKind::kMemory;
    throw Error(ErrorCode::kParse, "unknown storage kind '" + s + "'");
}

std::vector<StageTwiddles> parse_stages(const json& values, const json& kinds, const char* field)
{
    if (!values.is_array() || !kinds.is_array() || values.size() != kinds.size())
        throw Error(ErrorCode::kParse,
                    std::string{"stage tables '"} + field + "' and their storage kinds must match");
    std::vector<StageTwiddles> out;
    for (std::size_t s = 0; s < values.size(); ++s)
        out.push_back({parse_words(values[s], field), parse_storage(kinds[s])});
    return out;
}

const json& require(const json& root, const char* field)
{
    const auto it = root.find(field);
    if (it == root.end())
        throw Error(ErrorCode::kParse, std::string{"missing field '"} + field + "'");
    return *it;
}
}  // namespace

const char* to_string(StorageKind kind) noexcept
{
    return kind == StorageKind::kRegisters ? "regs" : "mem";
}

unsigned NttParams::stages() const noexcept
{
    return static_cast<unsigned>(std::countr_zero(n));
}

bool is_prime(Word value) noexcept
{
    if (value < 2)
        return false;
    for (Word p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37})
    {
        if (value % p == 0)
            return value == p;
    }
    Word d = value - 1;
    unsigned r = 0;
    while (d % 2 == 0)
    {
        d /= 2;
        ++r;
    }
    // These witnesses are deterministic for every 64-bit input.
    for (Word a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37})
    {
        Word x = pow_mod(a, d, value);
        if (x == 1 || x == value - 1)
            continue;
        bool composite = true;
        for (unsigned i = 1; i < r && composite; ++i)
        {
            x = mul_mod(x, x, value);
            composite = x != value - 1;
        }
        if (composite)
            return false;
    }
    return true;
}

Word pow_mod(Word base, Word exponent, Word modulus) noexcept
{
    Word result = 1 % modulus;
    base %= modulus;
    while (exponent != 0)
    {
        if (exponent & 1)
            result = mul_mod(result, base, modulus);
        base = mul_mod(base, base, modulus);
        exponent >>= 1;
    }
    return result;
}

Word inv_mod(Word value, Word modulus)
{
    if (value % modulus == 0)
        throw Error(ErrorCode::kDomain, "zero has no inverse");
    return pow_mod(value, modulus - 2, modulus);
}

std::size_t bit_reverse(std::size_t index, unsigned bit_count) noexcept
{
    std::size_t out = 0;
    for (unsigned i = 0; i < bit_count; ++i)
    {
        out = (out << 1) | (index & 1);
        index >>= 1;
    }
    return out;
}

bool validate_ring(Word modulus, std::uint64_t n) noexcept
{
    if (n < 2 || !std::has_single_bit(n))
        return false;
    if (modulus < 3 || std::bit_width(modulus - 1) > kMaxModulusBits)
        return false;
    return is_prime(modulus) && (modulus - 1) % (2 * n) == 0;
}

RootPair derive_roots(Word modulus, std::uint32_t n)
{
    if (!validate_ring(modulus, n))
        throw Error(ErrorCode::kInvalidRing,
                    "no negacyclic NTT of size " + std::to_string(n) + " modulo " +
                        std::to_string(modulus) + " (need prime M < 2^31 with 2N | M-1)");
    const auto factors = prime_factors(modulus - 1);
    for (Word g = 2; g < modulus; ++g)
    {
        bool generator = true;
        for (Word p : factors)
            generator = generator && pow_mod(g, (modulus - 1) / p, modulus) != 1;
        if (!generator)
            continue;
        const Word phi = pow_mod(g, (modulus - 1) / (2 * Word{n}), modulus);
        return {mul_mod(phi, phi, modulus), phi};
    }
    throw Error(ErrorCode::kInvalidRing, "no generator found for " + std::to_string(modulus));
}

NttParams build_params(Word modulus, std::uint32_t n)
{
    const auto roots = derive_roots(modulus, n);
    NttParams p;
    p.n = n;
    p.ctx = ModulusContext::create(modulus);
    p.omega = roots.omega;
    p.phi = roots.phi;
    p.omega_inv = inv_mod(roots.omega, modulus);
    p.phi_inv = inv_mod(roots.phi, modulus);
    p.n_inv = inv_mod(n, modulus);

    p.weights_fwd.resize(n);
    p.weights_inv_scaled.resize(n);
    Word w = 1, w_inv = p.n_inv;
    for (std::uint32_t i = 0; i < n; ++i)
    {
        p.weights_fwd[i] = w;
        p.weights_inv_scaled[i] = w_inv;
        w = mul_mod(w, p.phi, modulus);
        w_inv = mul_mod(w_inv, p.phi_inv, modulus);
    }
    p.stage_twiddles_fwd = forward_stage_tables(p.omega, n, modulus);
    p.stage_twiddles_inv = inverse_stage_tables(p.omega_inv, n, modulus);
    validate_params(p);
    return p;
}

void validate_params(const NttParams& p)
{
    const Word m = p.modulus();
    if (!validate_ring(m, p.n))
        invalid("ring (M=" + std::to_string(m) + ", N=" + std::to_string(p.n) + ") not supported");
    if (!p.ctx.u_validated() || p.ctx != ModulusContext::create(m))
        invalid("modulus context does not carry the minimal validated Barrett constants");
    for (Word v : {p.omega, p.phi, p.omega_inv, p.phi_inv, p.n_inv})
        if (v >= m)
            invalid("scalar constant not reduced modulo M");
    if (pow_mod(p.omega, p.n, m) != 1 || pow_mod(p.omega, p.n / 2, m) == 1)
        invalid("omega is not a primitive N-th root of unity");
    if (mul_mod(p.phi, p.phi, m) != p.omega)
        invalid("phi^2 != omega");
    if (pow_mod(p.phi, p.n, m) != m - 1)
        invalid("phi^N != -1");
    if (mul_mod(p.omega, p.omega_inv, m) != 1 || mul_mod(p.phi, p.phi_inv, m) != 1 ||
        mul_mod(p.n % m, p.n_inv, m) != 1)
        invalid("inverse constants do not invert");
    if (p.weights_fwd.size() != p.n || p.weights_inv_scaled.size() != p.n)
        invalid("weight tables must have N entries");
    Word w = 1, w_inv = p.n_inv;
    for (std::uint32_t i = 0; i < p.n; ++i)
    {
        if (p.weights_fwd[i] != w || p.weights_inv_scaled[i] != w_inv)
            invalid("weight table entry " + std::to_string(i) + " is wrong");
        w = mul_mod(w, p.phi, m);
        w_inv = mul_mod(w_inv, p.phi_inv, m);
    }
    if (p.stage_twiddles_fwd != forward_stage_tables(p.omega, p.n, m))
        invalid("forward stage twiddles do not match omega");
    if (p.stage_twiddles_inv != inverse_stage_tables(p.omega_inv, p.n, m))
        invalid("inverse stage twiddles do not match omega^-1");
}

std::string tables_to_json(const NttParams& p)
{
    json root;
    root["format"] = "nttmul-tables/1";
    root["M"] = std::to_string(p.modulus());
    root["N"] = std::to_string(p.n);
    root["omega"] = std::to_string(p.omega);
    root["phi"] = std::to_string(p.phi);
    root["omega_inv"] = std::to_string(p.omega_inv);
    root["phi_inv"] = std::to_string(p.phi_inv);
    root["n_inv"] = std::to_string(p.n_inv);
    root["weights_fwd"] = words_to_json(p.weights_fwd);
    root["weights_inv_scaled"] = words_to_json(p.weights_inv_scaled);
    json fwd = json::array(), inv = json::array(), kind_fwd = json::array(), kind_inv = json::array();
    for (const auto& s : p.stage_twiddles_fwd)
    {
        fwd.push_back(words_to_json(s.values));
        kind_fwd.push_back(to_string(s.storage));
    }
    for (const auto& s : p.stage_twiddles_inv)
    {
        inv.push_back(words_to_json(s.values));
        kind_inv.push_back(to_string(s.storage));
    }
    root["stage_twiddles_fwd"] = std::move(fwd);
    root["stage_twiddles_inv"] = std::move(inv);
    root["storage_kind"] = {{"fwd", std::move(kind_fwd)}, {"inv", std::move(kind_inv)}};
    return root.dump(1) + "\n";
}

NttParams tables_from_json(const std::string& text)
{
    json root;
    try
    {
        root = json::parse(text);
    }
    catch (const json::parse_error& e)
    {
        throw Error(ErrorCode::kParse, std::string{"table file is not valid JSON: "} + e.what());
    }
    if (!root.is_object())
        throw Error(ErrorCode::kParse, "table file must hold a JSON object");

    try
    {
        const Word m = parse_word(require(root, "M"), "M");
        const Word n = parse_word(require(root, "N"), "N");
        if (!validate_ring(m, n))
            throw Error(ErrorCode::kValidation, "invalid parameters: ring (M=" + std::to_string(m) +
                                                    ", N=" + std::to_string(n) + ") not supported");
        NttParams p;
        p.n = static_cast<std::uint32_t>(n);
        p.ctx = ModulusContext::create(m);
        p.omega = parse_word(require(root, "omega"), "omega");
        p.phi = parse_word(require(root, "phi"), "phi");
        p.omega_inv = parse_word(require(root, "omega_inv"), "omega_inv");
        p.phi_inv = parse_word(require(root, "phi_inv"), "phi_inv");
        p.n_inv = parse_word(require(root, "n_inv"), "n_inv");
        p.weights_fwd = parse_words(require(root, "weights_fwd"), "weights_fwd");
        p.weights_inv_scaled = parse_words(require(root, "weights_inv_scaled"), "weights_inv_scaled");
        const auto& kinds = require(root, "storage_kind");
        p.stage_twiddles_fwd = parse_stages(require(root, "stage_twiddles_fwd"),
                                            require(kinds, "fwd"), "stage_twiddles_fwd");
        p.stage_twiddles_inv = parse_stages(require(root, "stage_twiddles_inv"),
                                            require(kinds, "inv"), "stage_twiddles_inv");
        validate_params(p);
        return p;
    }
    catch (const json::exception& e)
    {
        throw Error(ErrorCode::kParse, std::string{"malformed table file: "} + e.what());
    }
}

void emit_tables(const NttParams& params, const std::filesystem::path& path)
{
    std::ofstream out{path, std::ios::binary | std::ios::trunc};
    if (!out)
        throw Error(ErrorCode::kIo, "cannot open " + path.string() + " for writing");
    out << tables_to_json(params);
    if (!out)
        throw Error(ErrorCode::kIo, "failed writing " + path.string());
}

NttParams load_tables(const std::filesystem::path& path)
{
    std::ifstream in{path, std::ios::binary};
    if (!in)
        throw Error(ErrorCode::kIo, "cannot open table file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return tables_from_json(buf.str());
}

}  // namespace nttmul
