// Copyright 2026 The nttmul Authors
// SPDX-License-Identifier: Apache-2.0

#include "vectors.hpp"

#include <charconv>
#include <limits>

namespace nttmul::cli
{
namespace
{
std::uint64_t parse_number(const nlohmann::ordered_json& value, const std::string& where)
{
    if (value.is_number_unsigned())
        return value.get<std::uint64_t>();
    if (!value.is_string())
        throw InputError(where + ": expected a decimal string");
    const auto& text = value.get_ref<const std::string&>();
    std::uint64_t out = 0;
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    if (ec != std::errc{} || end != text.data() + text.size() || text.empty())
        throw InputError(where + ": '" + text + "' is not a decimal integer");
    return out;
}

Coeffs parse_coeffs(const nlohmann::ordered_json& record, const char* field, std::uint64_t modulus,
                    std::size_t n, const std::string& where)
{
    const auto it = record.find(field);
    if (it == record.end() || !it->is_array())
        throw InputError(where + ": field '" + field + "' missing or not an array");
    if (it->size() != n)
        throw InputError(where + ": field '" + field + "' has " + std::to_string(it->size()) +
                         " entries, expected " + std::to_string(n));
    Coeffs out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
    {
        const std::string at = where + ": " + field + "[" + std::to_string(i) + "]";
        const std::uint64_t v = parse_number((*it)[i], at);
        if (v >= modulus)
            throw InputError(at + " = " + std::to_string(v) + " is not below M = " + std::to_string(modulus));
        out.push_back(v);
    }
    return out;
}
}  // namespace

std::vector<VectorRecord> read_records(std::istream& in, std::uint64_t modulus, std::size_t n)
{
    std::vector<VectorRecord> records;
    std::string line;
    for (std::size_t line_no = 1; std::getline(in, line); ++line_no)
    {
        if (line.find_first_not_of(" \t\r") == std::string::npos)
            continue;
        const std::string where = "line " + std::to_string(line_no);
        auto parsed = nlohmann::ordered_json::parse(line, nullptr, false);
        if (parsed.is_discarded() || !parsed.is_object())
            throw InputError(where + ": not a JSON object");
        VectorRecord record;
        record.a = parse_coeffs(parsed, "a", modulus, n, where);
        record.b = parse_coeffs(parsed, "b", modulus, n, where);
        if (parsed.contains("c_expected"))
            record.c_expected = parse_coeffs(parsed, "c_expected", modulus, n, where);
        if (parsed.contains("seed"))
            record.seed = parse_number(parsed["seed"], where + ": seed");
        record.source = std::move(parsed);
        records.push_back(std::move(record));
    }
    return records;
}

void write_record(std::ostream& out, const nlohmann::ordered_json& record)
{
    out << record.dump() << '\n';
}

nlohmann::ordered_json coeffs_to_json(const Coeffs& coeffs)
{
    auto out = nlohmann::ordered_json::array();
    for (const auto v : coeffs)
        out.push_back(std::to_string(v));
    return out;
}

ResidueSampler::ResidueSampler(std::uint64_t seed, std::uint64_t modulus)
  : engine_{seed},
    modulus_{modulus},
    limit_{std::numeric_limits<std::uint64_t>::max() / modulus * modulus}
{}

std::uint64_t ResidueSampler::next()
{
    for (;;)
    {
        const std::uint64_t draw = engine_();
        if (draw < limit_)
            return draw % modulus_;
    }
}

Coeffs ResidueSampler::polynomial(std::size_t n)
{
    Coeffs out(n);
    for (auto& v : out)
        v = next();
    return out;
}

}  // namespace nttmul::cli
