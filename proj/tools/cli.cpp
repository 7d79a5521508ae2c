// Copyright 2026 The nttmul Authors
// SPDX-License-Identifier: Apache-2.0

#include "cli.hpp"

#include "vectors.hpp"

#include <nttmul/nttmul.h>

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>

namespace nttmul::cli
{
namespace
{
namespace fs = std::filesystem;

/// A failed library call, carrying the status so it maps to an exit code.
class ApiError : public std::runtime_error
{
public:
    ApiError(nttmul_status status, const std::string& what) : std::runtime_error(what), status_{status} {}
    nttmul_status status() const noexcept { return status_; }

private:
    nttmul_status status_;
};

void check(nttmul_status status, const char* what)
{
    if (status != NTTMUL_OK)
        throw ApiError(status, std::string{what} + ": " + nttmul_last_error());
}

struct ParamsDeleter
{
    void operator()(nttmul_params* p) const noexcept { nttmul_params_destroy(p); }
};
struct SimDeleter
{
    void operator()(nttmul_sim* s) const noexcept { nttmul_sim_destroy(s); }
};
struct StringDeleter
{
    void operator()(char* s) const noexcept { nttmul_string_free(s); }
};
using ParamsHandle = std::unique_ptr<nttmul_params, ParamsDeleter>;
using SimHandle = std::unique_ptr<nttmul_sim, SimDeleter>;

struct LoadedParams
{
    ParamsHandle handle;
    nttmul_params_info info{};
};

LoadedParams load_params(const std::string& path)
{
    nttmul_params* raw = nullptr;
    check(nttmul_params_load(path.c_str(), &raw), "loading parameters");
    LoadedParams loaded{ParamsHandle{raw}, {}};
    check(nttmul_params_get_info(raw, &loaded.info), "reading parameters");
    return loaded;
}

std::vector<VectorRecord> load_records(const std::string& path, const nttmul_params_info& info)
{
    std::ifstream in{path};
    if (!in)
        throw InputError("cannot open vector file " + path);
    return read_records(in, info.modulus, info.n);
}

std::ofstream open_output(const std::string& path)
{
    std::ofstream out{path, std::ios::binary | std::ios::trunc};
    if (!out)
        throw InputError("cannot write " + path);
    return out;
}

Coeffs multiply(const LoadedParams& params, nttmul_method method, const VectorRecord& r)
{
    Coeffs c(params.info.n);
    check(nttmul_multiply(params.handle.get(), method, r.a.data(), r.b.data(), c.data(), c.size()),
          method == NTTMUL_METHOD_NAIVE ? "naive multiplication" : "NTT multiplication");
    return c;
}

/// Trace destination: relative paths land in NTTMUL_TRACE_DIR when it is set.
fs::path resolve_trace_path(const std::string& requested)
{
    fs::path path = requested.empty() ? fs::path{"nttmul-fault-trace.csv"} : fs::path{requested};
    if (path.is_relative())
        if (const char* dir = std::getenv("NTTMUL_TRACE_DIR"); dir != nullptr && *dir != '\0')
            path = fs::path{dir} / path;
    return path;
}

struct SimOptions
{
    std::string mode = "schedule";
    std::optional<unsigned> butterfly_latency;
    std::optional<unsigned> multiplier_latency;
    std::string handoff = "frame-sync";
    unsigned feed_gap = 0;
    std::optional<std::uint64_t> inject_fault_cycle;
};

void add_sim_options(CLI::App& cmd, SimOptions& o)
{
    cmd.add_option("--mode", o.mode, "schedule or structural")
        ->check(CLI::IsMember({"schedule", "structural"}))
        ->capture_default_str();
    cmd.add_option("--butterfly-latency", o.butterfly_latency, "Butterfly pipeline depth in cycles");
    cmd.add_option("--multiplier-latency", o.multiplier_latency,
                   "Weighting/pointwise multiplier depth in cycles");
    cmd.add_option("--handoff", o.handoff, "frame-sync or streaming")
        ->check(CLI::IsMember({"frame-sync", "streaming"}))
        ->capture_default_str();
    cmd.add_option("--feed-gap", o.feed_gap, "Idle cycles between input frames")->capture_default_str();
    cmd.add_option("--inject-fault-cycle", o.inject_fault_cycle)->group("");
}

nttmul_sim_config make_config(const SimOptions& o)
{
    nttmul_sim_config config;
    nttmul_sim_config_init(o.mode == "structural" ? NTTMUL_MODE_STRUCTURAL : NTTMUL_MODE_SCHEDULE, &config);
    if (o.butterfly_latency)
        config.butterfly_latency = *o.butterfly_latency;
    if (o.multiplier_latency)
        config.multiplier_latency = *o.multiplier_latency;
    config.handoff = o.handoff == "streaming" ? NTTMUL_HANDOFF_STREAMING : NTTMUL_HANDOFF_FRAME_SYNC;
    config.feed_gap = o.feed_gap;
    config.record_trace = 1;
    if (o.inject_fault_cycle)
        config.corrupt_tag_at_cycle = static_cast<std::int64_t>(*o.inject_fault_cycle);
    return config;
}

/// A finished simulation run. A fault leaves `products` empty and `fault` set.
struct SimRun
{
    SimHandle handle;
    std::vector<Coeffs> products;
    std::optional<std::string> fault;
};

SimRun simulate(const LoadedParams& params, const SimOptions& options, const std::vector<VectorRecord>& records)
{
    const auto config = make_config(options);
    nttmul_sim* raw = nullptr;
    check(nttmul_sim_create(params.handle.get(), &config, &raw), "creating simulator");
    SimRun run{SimHandle{raw}, {}, {}};
    for (const auto& r : records)
        check(nttmul_sim_push(raw, r.a.data(), r.b.data(), r.a.size()), "queueing operands");
    const auto status = nttmul_sim_run(raw);
    if (status == NTTMUL_E_SIMULATION_FAULT)
    {
        run.fault = nttmul_last_error();
        return run;
    }
    check(status, "simulation");
    for (std::size_t i = 0; i < nttmul_sim_product_count(raw); ++i)
    {
        Coeffs c(params.info.n);
        check(nttmul_sim_product(raw, i, c.data(), c.size()), "reading product");
        run.products.push_back(std::move(c));
    }
    return run;
}

std::string report_json(const SimRun& run)
{
    char* raw = nullptr;
    check(nttmul_sim_report_json(run.handle.get(), &raw), "building report");
    const std::unique_ptr<char, StringDeleter> owned{raw};
    return std::string{raw};
}

void write_trace(const SimRun& run, const fs::path& path)
{
    check(nttmul_sim_write_trace(run.handle.get(), path.string().c_str()), "writing trace");
}

std::optional<std::size_t> first_mismatch(const Coeffs& x, const Coeffs& y)
{
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i] != y[i])
            return i;
    return std::nullopt;
}

// ---- subcommands ---------------------------------------------------------

struct ParamsArgs
{
    std::uint64_t modulus = 0;
    std::uint32_t n = 0;
    std::string out;
    std::uint64_t barrett_samples = 1'000'000;
    std::uint64_t seed = 1;
};

int cmd_params(const ParamsArgs& args, std::ostream& out)
{
    if (nttmul_validate_ring(args.modulus, args.n) == 0)
        throw InputError("invalid ring: need prime M < 2^31, N a power of two >= 2, and 2N | M-1 (M=" +
                         std::to_string(args.modulus) + ", N=" + std::to_string(args.n) + ")");
    nttmul_params* raw = nullptr;
    check(nttmul_params_create(args.modulus, args.n, &raw), "deriving parameters");
    const ParamsHandle params{raw};
    check(nttmul_params_save(raw, args.out.c_str()), "writing table file");
    nttmul_params_info info{};
    check(nttmul_params_get_info(raw, &info), "reading parameters");
    nttmul_barrett_verdict verdict{};
    check(nttmul_barrett_validate(info.modulus, info.barrett_k, info.barrett_u, args.barrett_samples, args.seed,
                                  &verdict),
          "validating Barrett constants");

    out << "M=" << info.modulus << " N=" << info.n << " stages=" << info.stages << '\n'
        << "barrett k=" << info.barrett_k << " u=" << info.barrett_u
        << (info.uses_fixed_reducer ? " (shift-add reducer)" : " (generic reducer)") << '\n'
        << "omega=" << info.omega << " phi=" << info.phi << " omega_inv=" << info.omega_inv
        << " phi_inv=" << info.phi_inv << " n_inv=" << info.n_inv << '\n'
        << "barrett validation: " << (verdict.valid ? "valid" : "INVALID") << " ("
        << (verdict.exhaustive ? "exhaustive, " : "") << verdict.inputs_tested << " inputs, " << verdict.failures
        << " failures";
    if (verdict.has_counterexample)
        out << ", first counterexample " << verdict.first_counterexample;
    out << ")\nwrote " << args.out << '\n';
    return verdict.valid ? kExitOk : kExitInternal;
}

struct GenArgs
{
    std::string params;
    std::uint64_t count = 0;
    std::uint64_t seed = 0;
    std::string out;
};

int cmd_gen(const GenArgs& args, std::ostream& out)
{
    const auto params = load_params(args.params);
    auto file = open_output(args.out);
    ResidueSampler sampler{args.seed, params.info.modulus};
    for (std::uint64_t i = 0; i < args.count; ++i)
    {
        nlohmann::ordered_json record;
        record["seed"] = std::to_string(args.seed);
        record["index"] = std::to_string(i);
        record["a"] = coeffs_to_json(sampler.polynomial(params.info.n));
        record["b"] = coeffs_to_json(sampler.polynomial(params.info.n));
        write_record(file, record);
    }
    out << "wrote " << args.count << " records to " << args.out << '\n';
    return kExitOk;
}

struct MulArgs
{
    std::string params;
    std::string vectors;
    std::string method = "ntt";
    std::string out;
};

int cmd_mul(const MulArgs& args, std::ostream& out)
{
    const auto params = load_params(args.params);
    const auto records = load_records(args.vectors, params.info);
    const auto method = args.method == "naive" ? NTTMUL_METHOD_NAIVE : NTTMUL_METHOD_NTT;
    auto file = open_output(args.out);
    for (const auto& r : records)
    {
        auto record = r.source;
        record["c"] = coeffs_to_json(multiply(params, method, r));
        write_record(file, record);
    }
    out << "multiplied " << records.size() << " records (" << args.method << ")\n";
    return kExitOk;
}

struct SimArgs
{
    std::string params;
    std::string vectors;
    std::string report;
    std::string trace;
    std::string out;
    SimOptions options;
};

int cmd_sim(const SimArgs& args, std::ostream& out, std::ostream& err)
{
    const auto params = load_params(args.params);
    const auto records = load_records(args.vectors, params.info);
    const auto run = simulate(params, args.options, records);
    if (run.fault)
    {
        const auto trace_path = resolve_trace_path(args.trace);
        write_trace(run, trace_path);
        err << "simulation fault: " << *run.fault << "\ntrace written to " << trace_path.string() << '\n';
        return kExitInternal;
    }

    const std::string report = report_json(run);
    if (!args.report.empty())
        open_output(args.report) << report << '\n';
    if (!args.trace.empty())
        write_trace(run, resolve_trace_path(args.trace));
    if (!args.out.empty())
    {
        auto file = open_output(args.out);
        for (std::size_t i = 0; i < records.size(); ++i)
        {
            auto record = records[i].source;
            record["c"] = coeffs_to_json(run.products[i]);
            write_record(file, record);
        }
    }

    const auto parsed = nlohmann::json::parse(report);
    out << "frames=" << parsed["frames"] << " first_ntt_latency=" << parsed["first_ntt_latency"]
        << " first_mul_latency=" << parsed["first_mul_latency"]
        << " steady_cycles_per_mul=" << parsed["steady_cycles_per_mul"] << " total_regs=" << parsed["total_regs"]
        << '\n';
    return kExitOk;
}

struct CheckArgs
{
    std::string params;
    std::string vectors;
    SimOptions options;
};

int cmd_check(const CheckArgs& args, std::ostream& out, std::ostream& err)
{
    const auto params = load_params(args.params);
    const auto records = load_records(args.vectors, params.info);
    const auto run = simulate(params, args.options, records);
    if (run.fault)
    {
        const auto trace_path = resolve_trace_path("");
        write_trace(run, trace_path);
        err << "simulation fault: " << *run.fault << "\ntrace written to " << trace_path.string() << '\n';
        return kExitInternal;
    }

    std::size_t bad_records = 0;
    for (std::size_t i = 0; i < records.size(); ++i)
    {
        const auto naive = multiply(params, NTTMUL_METHOD_NAIVE, records[i]);
        const auto ntt = multiply(params, NTTMUL_METHOD_NTT, records[i]);
        const std::pair<const char*, const Coeffs*> others[] = {
            {"ntt", &ntt},
            {"sim", &run.products[i]},
            {"c_expected", records[i].c_expected ? &*records[i].c_expected : nullptr},
        };
        bool bad = false;
        for (const auto& [name, values] : others)
        {
            if (values == nullptr)
                continue;
            if (const auto at = first_mismatch(naive, *values))
            {
                err << "record " << i << ": " << name << " differs from naive at coefficient " << *at << " ("
                    << (*values)[*at] << " vs " << naive[*at] << ")\n";
                bad = true;
            }
        }
        bad_records += bad ? 1 : 0;
    }
    out << "checked " << records.size() << " records: " << (records.size() - bad_records) << " agree, "
        << bad_records << " disagree\n";
    return bad_records == 0 ? kExitOk : kExitMismatch;
}

int exit_code_for(nttmul_status status)
{
    return status == NTTMUL_E_SIMULATION_FAULT || status == NTTMUL_E_INTERNAL ? kExitInternal : kExitInputError;
}
}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Negacyclic NTT polynomial multiplication and pipeline simulation", "nttmul"};
    app.require_subcommand(1);

    ParamsArgs params_args;
    auto* params_cmd = app.add_subcommand("params", "Derive ring constants and write a table file");
    params_cmd->add_option("--modulus", params_args.modulus, "Prime modulus M")->required();
    params_cmd->add_option("--n", params_args.n, "Transform size N")->required();
    params_cmd->add_option("--out", params_args.out, "Table file to write")->required();
    params_cmd->add_option("--barrett-samples", params_args.barrett_samples,
                           "Random inputs for the Barrett validation")
        ->capture_default_str();
    params_cmd->add_option("--seed", params_args.seed, "Seed for the Barrett validation")->capture_default_str();

    GenArgs gen_args;
    auto* gen_cmd = app.add_subcommand("gen", "Generate seeded random operand pairs");
    gen_cmd->add_option("--params", gen_args.params, "Table file")->required();
    gen_cmd->add_option("--count", gen_args.count, "Number of records")->required();
    gen_cmd->add_option("--seed", gen_args.seed, "Seed for std::mt19937_64")->required();
    gen_cmd->add_option("--out", gen_args.out, "Vector file to write")->required();

    MulArgs mul_args;
    auto* mul_cmd = app.add_subcommand("mul", "Multiply every record with a reference method");
    mul_cmd->add_option("--params", mul_args.params, "Table file")->required();
    mul_cmd->add_option("--vectors", mul_args.vectors, "Vector file")->required();
    mul_cmd->add_option("--method", mul_args.method, "naive or ntt")
        ->check(CLI::IsMember({"naive", "ntt"}))
        ->capture_default_str();
    mul_cmd->add_option("--out", mul_args.out, "Result file to write")->required();

    SimArgs sim_args;
    auto* sim_cmd = app.add_subcommand("sim", "Stream every record through the pipeline simulator");
    sim_cmd->add_option("--params", sim_args.params, "Table file")->required();
    sim_cmd->add_option("--vectors", sim_args.vectors, "Vector file")->required();
    sim_cmd->add_option("--report", sim_args.report, "Cycle report (JSON) to write");
    sim_cmd->add_option("--trace", sim_args.trace, "Per-cycle trace (CSV) to write");
    sim_cmd->add_option("--out", sim_args.out, "Products to write");
    add_sim_options(*sim_cmd, sim_args.options);

    CheckArgs check_args;
    auto* check_cmd = app.add_subcommand("check", "Compare naive, NTT and simulated products");
    check_cmd->add_option("--params", check_args.params, "Table file")->required();
    check_cmd->add_option("--vectors", check_args.vectors, "Vector file")->required();
    add_sim_options(*check_cmd, check_args.options);

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e)
    {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitInputError;
    }

    try
    {
        if (*params_cmd)
            return cmd_params(params_args, out);
        if (*gen_cmd)
            return cmd_gen(gen_args, out);
        if (*mul_cmd)
            return cmd_mul(mul_args, out);
        if (*sim_cmd)
            return cmd_sim(sim_args, out, err);
        return cmd_check(check_args, out, err);
    }
    catch (const InputError& e)
    {
        err << "error: " << e.what() << '\n';
        return kExitInputError;
    }
    catch (const ApiError& e)
    {
        err << "error: " << e.what() << '\n';
        return exit_code_for(e.status());
    }
    catch (const std::exception& e)
    {
        err << "internal error: " << e.what() << '\n';
        return kExitInternal;
    }
}

}  // namespace nttmul::cli
