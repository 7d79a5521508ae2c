// Copyright 2026 The nttmul Authors
// SPDX-License-Identifier: Apache-2.0

#include "nttmul/nttmul.h"

#include "error.hpp"
#include "pipesim.hpp"

#include <cstring>
#include <fstream>
#include <new>

struct nttmul_params
{
    nttmul::NttParams params;
};

struct nttmul_sim
{
    nttmul::sim::Simulator simulator;
    std::vector<nttmul::sim::OperandPair> queued;
    std::vector<nttmul::Polynomial> products;
};

namespace
{
thread_local std::string g_last_error;

nttmul_status to_status(nttmul::ErrorCode code) noexcept
{
    using nttmul::ErrorCode;
    switch (code)
    {
    case ErrorCode::kInvalidArgument: return NTTMUL_E_INVALID_ARGUMENT;
    case ErrorCode::kInvalidRing: return NTTMUL_E_INVALID_RING;
    case ErrorCode::kDomain: return NTTMUL_E_DOMAIN;
    case ErrorCode::kParse: return NTTMUL_E_PARSE;
    case ErrorCode::kIo: return NTTMUL_E_IO;
    case ErrorCode::kValidation: return NTTMUL_E_VALIDATION;
    case ErrorCode::kSimulationFault: return NTTMUL_E_SIMULATION_FAULT;
    }
    return NTTMUL_E_INTERNAL;
}

nttmul_status fail(nttmul_status status, const char* message)
{
    g_last_error = message;
    return status;
}

/// Runs `body`, translating exceptions into status codes.
template <typename Body>
nttmul_status guarded(Body&& body) noexcept
{
    try
    {
        g_last_error.clear();
        body();
        return NTTMUL_OK;
    }
    catch (const nttmul::Error& e)
    {
        return fail(to_status(e.code()), e.what());
    }
    catch (const std::bad_alloc&)
    {
        return fail(NTTMUL_E_INTERNAL, "out of memory");
    }
    catch (const std::exception& e)
    {
        return fail(NTTMUL_E_INTERNAL, e.what());
    }
    catch (...)
    {
        return fail(NTTMUL_E_INTERNAL, "unknown error");
    }
}

void require(bool condition, const char* message)
{
    if (!condition)
        throw nttmul::Error(nttmul::ErrorCode::kInvalidArgument, message);
}

nttmul::Polynomial polynomial_from(const uint64_t* data, size_t n, const nttmul::NttParams& params)
{
    require(data != nullptr, "null coefficient array");
    return nttmul::Polynomial::from_coeffs(std::vector<nttmul::Word>(data, data + n), params);
}

char* duplicate(const std::string& text)
{
    char* out = new char[text.size() + 1];
    std::memcpy(out, text.c_str(), text.size() + 1);
    return out;
}
}  // namespace

extern "C" {

const char* nttmul_version(void)
{
    return NTTMUL_VERSION_STRING;
}

const char* nttmul_status_name(nttmul_status status)
{
    switch (status)
    {
    case NTTMUL_OK: return "ok";
    case NTTMUL_E_INVALID_ARGUMENT: return "invalid_argument";
    case NTTMUL_E_INVALID_RING: return "invalid_ring";
    case NTTMUL_E_DOMAIN: return "domain";
    case NTTMUL_E_PARSE: return "parse";
    case NTTMUL_E_IO: return "io";
    case NTTMUL_E_VALIDATION: return "validation";
    case NTTMUL_E_SIMULATION_FAULT: return "simulation_fault";
    case NTTMUL_E_INTERNAL: return "internal";
    }
    return "unknown";
}

const char* nttmul_last_error(void)
{
    return g_last_error.c_str();
}

void nttmul_string_free(char* text)
{
    delete[] text;
}

int nttmul_validate_ring(uint64_t modulus, uint64_t n)
{
    return nttmul::validate_ring(modulus, n) ? 1 : 0;
}

nttmul_status nttmul_find_barrett_constants(uint64_t modulus, uint32_t* k, uint64_t* u)
{
    return guarded([&] {
        require(k != nullptr && u != nullptr, "null output pointer");
        const auto constants = nttmul::find_barrett_constants(modulus);
        *k = constants.k;
        *u = constants.u;
    });
}

nttmul_status nttmul_barrett_validate(uint64_t modulus, uint32_t k, uint64_t u, uint64_t random_samples,
                                      uint64_t seed, nttmul_barrett_verdict* out)
{
    return guarded([&] {
        require(out != nullptr, "null output pointer");
        nttmul::BarrettGateOptions options;
        options.random_samples = random_samples;
        options.seed = seed;
        const auto verdict = nttmul::validate_barrett_constants(modulus, k, u, options);
        out->valid = verdict.valid ? 1 : 0;
        out->exhaustive = verdict.exhaustive ? 1 : 0;
        out->has_counterexample = verdict.first_counterexample ? 1 : 0;
        out->first_counterexample = verdict.first_counterexample.value_or(0);
        out->inputs_tested = verdict.inputs_tested;
        out->failures = verdict.failures;
    });
}

nttmul_status nttmul_params_create(uint64_t modulus, uint32_t n, nttmul_params** out)
{
    return guarded([&] {
        require(out != nullptr, "null output pointer");
        *out = new nttmul_params{nttmul::build_params(modulus, n)};
    });
}

nttmul_status nttmul_params_load(const char* path, nttmul_params** out)
{
    return guarded([&] {
        require(path != nullptr && out != nullptr, "null argument");
        *out = new nttmul_params{nttmul::load_tables(path)};
    });
}

nttmul_status nttmul_params_save(const nttmul_params* params, const char* path)
{
    return guarded([&] {
        require(params != nullptr && path != nullptr, "null argument");
        nttmul::emit_tables(params->params, path);
    });
}

nttmul_status nttmul_params_get_info(const nttmul_params* params, nttmul_params_info* out)
{
    return guarded([&] {
        require(params != nullptr && out != nullptr, "null argument");
        const auto& p = params->params;
        out->modulus = p.modulus();
        out->n = p.n;
        out->stages = p.stages();
        out->omega = p.omega;
        out->phi = p.phi;
        out->omega_inv = p.omega_inv;
        out->phi_inv = p.phi_inv;
        out->n_inv = p.n_inv;
        out->barrett_k = p.ctx.barrett_k();
        out->barrett_u = p.ctx.barrett_u();
        out->uses_fixed_reducer = nttmul::ModMultiplier{p.ctx}.uses_fixed_reducer() ? 1 : 0;
    });
}

void nttmul_params_destroy(nttmul_params* params)
{
    delete params;
}

nttmul_status nttmul_multiply(const nttmul_params* params, nttmul_method method, const uint64_t* a,
                              const uint64_t* b, uint64_t* c, size_t n)
{
    return guarded([&] {
        require(params != nullptr && c != nullptr, "null argument");
        const auto& p = params->params;
        const auto pa = polynomial_from(a, n, p);
        const auto pb = polynomial_from(b, n, p);
        nttmul::Polynomial product;
        switch (method)
        {
        case NTTMUL_METHOD_NAIVE: product = nttmul::naive_negacyclic_mul(pa, pb, p); break;
        case NTTMUL_METHOD_NTT: product = nttmul::negacyclic_mul_ntt(pa, pb, p); break;
        default: require(false, "unknown multiplication method");
        }
        std::copy(product.coeffs().begin(), product.coeffs().end(), c);
    });
}

void nttmul_sim_config_init(nttmul_mode mode, nttmul_sim_config* out)
{
    if (out == nullptr)
        return;
    const auto config = mode == NTTMUL_MODE_STRUCTURAL ? nttmul::sim::PipelineConfig::structural()
                                                       : nttmul::sim::PipelineConfig::schedule();
    out->mode = mode;
    out->butterfly_latency = config.butterfly_latency;
    out->multiplier_latency = config.multiplier_latency;
    out->handoff = NTTMUL_HANDOFF_FRAME_SYNC;
    out->feed_gap = 0;
    out->record_trace = 0;
    out->corrupt_tag_at_cycle = -1;
}

nttmul_status nttmul_sim_create(const nttmul_params* params, const nttmul_sim_config* config, nttmul_sim** out)
{
    return guarded([&] {
        require(params != nullptr && config != nullptr && out != nullptr, "null argument");
        require(config->mode == NTTMUL_MODE_SCHEDULE || config->mode == NTTMUL_MODE_STRUCTURAL, "unknown mode");
        require(config->handoff == NTTMUL_HANDOFF_FRAME_SYNC || config->handoff == NTTMUL_HANDOFF_STREAMING,
                "unknown handoff");
        nttmul::sim::PipelineConfig c;
        c.mode = config->mode == NTTMUL_MODE_SCHEDULE ? nttmul::sim::Mode::kSchedule
                                                      : nttmul::sim::Mode::kStructural;
        c.butterfly_latency = config->butterfly_latency;
        c.multiplier_latency = config->multiplier_latency;
        c.handoff = config->handoff == NTTMUL_HANDOFF_FRAME_SYNC ? nttmul::sim::Handoff::kFrameSync
                                                                 : nttmul::sim::Handoff::kStreaming;
        c.feed_gap = config->feed_gap;
        c.record_trace = config->record_trace != 0;
        if (config->corrupt_tag_at_cycle >= 0)
            c.corrupt_tag_at_cycle = static_cast<std::uint64_t>(config->corrupt_tag_at_cycle);
        *out = new nttmul_sim{nttmul::sim::Simulator{params->params, c}, {}, {}};
    });
}

nttmul_status nttmul_sim_push(nttmul_sim* sim, const uint64_t* a, const uint64_t* b, size_t n)
{
    return guarded([&] {
        require(sim != nullptr, "null simulator");
        require(a != nullptr && b != nullptr, "null coefficient array");
        // Shape and range are checked when the queue is run.
        sim->queued.emplace_back(nttmul::Polynomial{std::vector<nttmul::Word>(a, a + n)},
                                 nttmul::Polynomial{std::vector<nttmul::Word>(b, b + n)});
    });
}

nttmul_status nttmul_sim_run(nttmul_sim* sim)
{
    return guarded([&] {
        require(sim != nullptr, "null simulator");
        sim->products.clear();
        sim->products = sim->simulator.run(sim->queued);
    });
}

size_t nttmul_sim_product_count(const nttmul_sim* sim)
{
    return sim == nullptr ? 0 : sim->products.size();
}

nttmul_status nttmul_sim_product(const nttmul_sim* sim, size_t index, uint64_t* c, size_t n)
{
    return guarded([&] {
        require(sim != nullptr && c != nullptr, "null argument");
        require(index < sim->products.size(), "product index out of range");
        const auto& product = sim->products[index];
        require(n == product.size(), "output length does not match N");
        std::copy(product.coeffs().begin(), product.coeffs().end(), c);
    });
}

nttmul_status nttmul_sim_report_json(const nttmul_sim* sim, char** out)
{
    return guarded([&] {
        require(sim != nullptr && out != nullptr, "null argument");
        *out = duplicate(nttmul::sim::report_to_json(sim->simulator.report()));
    });
}

nttmul_status nttmul_sim_write_trace(const nttmul_sim* sim, const char* path)
{
    return guarded([&] {
        require(sim != nullptr && path != nullptr, "null argument");
        std::ofstream file{path, std::ios::binary};
        if (!file)
            throw nttmul::Error(nttmul::ErrorCode::kIo, std::string{"cannot open "} + path);
        file << nttmul::sim::trace_to_csv(sim->simulator.trace());
        if (!file)
            throw nttmul::Error(nttmul::ErrorCode::kIo, std::string{"write failed: "} + path);
    });
}

void nttmul_sim_destroy(nttmul_sim* sim)
{
    delete sim;
}

}  // extern "C"
