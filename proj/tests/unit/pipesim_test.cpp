// Copyright 2026 The nttmul Authors
// SPDX-License-Identifier: Apache-2.0

#include "pipesim.hpp"

#include "error.hpp"
#include "oracles.hpp"

#include <nlohmann/json.hpp>

#include <gtest/gtest.h>

#include <map>

namespace nttmul::sim
{
namespace
{
using namespace nttmul::testing;

constexpr Word kM = kFixedModulus;

const NttParams& params(Word m, std::uint32_t n)
{
    static std::map<std::pair<Word, std::uint32_t>, NttParams> cache;
    auto it = cache.find({m, n});
    if (it == cache.end())
        it = cache.emplace(std::pair{m, n}, build_params(m, n)).first;
    return it->second;
}

unsigned log2_of(std::uint32_t n)
{
    return static_cast<unsigned>(std::countr_zero(n));
}

std::vector<OperandPair> random_pairs(std::size_t count, const NttParams& p, std::uint64_t seed)
{
    Generator gen{seed};
    std::vector<OperandPair> out;
    for (std::size_t i = 0; i < count; ++i)
        out.emplace_back(Polynomial{gen.residues(p.n, p.modulus())}, Polynomial{gen.residues(p.n, p.modulus())});
    return out;
}

void expect_products_match(const std::vector<OperandPair>& inputs, const std::vector<Polynomial>& products,
                           Word m)
{
    ASSERT_EQ(products.size(), inputs.size());
    for (std::size_t i = 0; i < inputs.size(); ++i)
    {
        const Coeffs a(inputs[i].first.coeffs().begin(), inputs[i].first.coeffs().end());
        const Coeffs b(inputs[i].second.coeffs().begin(), inputs[i].second.coeffs().end());
        const Coeffs c(products[i].coeffs().begin(), products[i].coeffs().end());
        ASSERT_EQ(c, schoolbook_negacyclic(a, b, m)) << "frame " << i;
    }
}

ErrorCode code_of(const std::function<void()>& f)
{
    try
    {
        f();
    }
    catch (const Error& e)
    {
        return e.code();
    }
    return ErrorCode{};
}

// ---- butterfly ---------------------------------------------------------------

TEST(Butterfly, UnitTwiddleIsAddSubtract)
{
    const auto& p = params(kM, 16);
    const auto [u, v] = butterfly_step(Residue(5, p.ctx), Residue(3, p.ctx), Residue(1, p.ctx), p);
    EXPECT_EQ(u.value(), 8u);
    EXPECT_EQ(v.value(), kM - 2);
}

TEST(Butterfly, ZeroInputPassesOtherOperand)
{
    const auto& p = params(kM, 16);
    const auto [u, v] = butterfly_step(Residue(0, p.ctx), Residue(777, p.ctx), Residue(4321, p.ctx), p);
    EXPECT_EQ(u.value(), 777u);
    EXPECT_EQ(v.value(), 777u);
}

TEST(Butterfly, RandomTriplesMatchWideArithmetic)
{
    const auto& p = params(kM, 16);
    Generator gen{11};
    for (int i = 0; i < 100'000; ++i)
    {
        const Word ai = gen.below(kM), aj = gen.below(kM), w = gen.below(kM);
        const auto [u, v] = butterfly_step(Residue(ai, p.ctx), Residue(aj, p.ctx), Residue(w, p.ctx), p);
        const auto t = static_cast<Word>(u128{ai} * w % kM);
        ASSERT_EQ(u.value(), (aj + t) % kM);
        ASSERT_EQ(v.value(), (aj + kM - t) % kM);
    }
}

TEST(ButterflyUnit, DelaysByLatencyAndAcceptsEveryCycle)
{
    const auto& p = params(17, 8);
    ButterflyUnit unit{p.ctx, 3, false};
    std::vector<std::optional<SamplePair>> outputs;
    for (std::uint32_t t = 0; t < 6; ++t)
    {
        const SamplePair in{{t, 0, t}, {1, 0, t + 4}};
        outputs.push_back(unit.tick(in, 2));
    }
    EXPECT_FALSE(outputs[0] || outputs[1] || outputs[2]);
    ASSERT_TRUE(outputs[3].has_value());
    EXPECT_EQ(outputs[3]->lo.value, 2u);  // 0 + 1*2
    EXPECT_EQ(outputs[5]->lo.index, 2u);
}

TEST(ButterflyUnit, AdderOnlyRejectsNonUnitTwiddle)
{
    const auto& p = params(17, 8);
    ButterflyUnit unit{p.ctx, 1, true};
    EXPECT_EQ(code_of([&] { unit.tick(SamplePair{{1, 0, 0}, {2, 0, 4}}, 3); }), ErrorCode::kSimulationFault);
}

// ---- stage FIFO ----------------------------------------------------------------

struct FifoStep
{
    std::optional<SamplePair> out;
    bool sel;
    std::uint64_t counter;
};

std::vector<FifoStep> drive(StageFifo& fifo, const std::vector<std::optional<SamplePair>>& feed)
{
    std::vector<FifoStep> steps;
    for (const auto& in : feed)
    {
        auto out = fifo.tick(in);
        steps.push_back({out, fifo.sel(), fifo.counter()});
    }
    return steps;
}

/// Pairs (t, t + distance) for one frame of a stage at pairing distance 2*hold.
std::vector<std::optional<SamplePair>> frame_feed(std::uint32_t pairs, std::uint32_t distance, std::uint32_t idle)
{
    std::vector<std::optional<SamplePair>> feed;
    for (std::uint32_t t = 0; t < pairs; ++t)
    {
        const std::uint32_t block = t / distance, j = t % distance;
        const std::uint32_t lo = block * 2 * distance + j;
        feed.push_back(SamplePair{{lo, 0, lo}, {lo + distance, 0, lo + distance}});
    }
    feed.insert(feed.end(), idle, std::nullopt);
    return feed;
}

TEST(StageFifo, ZeroHoldPassesThrough)
{
    StageFifo fifo{"s1", 0};
    const SamplePair pair{{1, 0, 0}, {2, 0, 8}};
    EXPECT_EQ(fifo.tick(pair), pair);
    EXPECT_EQ(fifo.capacity(), 0u);
}

TEST(StageFifo, DoubleBufferScheduleAndSelectLine)
{
    // Previous stage pairs at distance 8 (N = 16, stage 2 pairs at distance 4).
    StageFifo fifo{"s2", 4};
    const auto steps = drive(fifo, frame_feed(8, 8, 5));
    // Arrivals 0-3 are stored, 4-7 pair with block I, then block II drains.
    for (int t = 0; t < 4; ++t)
    {
        EXPECT_FALSE(steps[t].out.has_value()) << t;
        EXPECT_TRUE(steps[t].sel) << t;
        EXPECT_EQ(steps[t].counter, static_cast<std::uint64_t>(t));
    }
    for (int t = 4; t < 8; ++t)
    {
        ASSERT_TRUE(steps[t].out.has_value()) << t;
        EXPECT_FALSE(steps[t].sel) << t;
        EXPECT_EQ(steps[t].out->lo.index, static_cast<std::uint32_t>(t - 4));
        EXPECT_EQ(steps[t].out->hi.index, static_cast<std::uint32_t>(t));
    }
    for (int t = 8; t < 12; ++t)
    {
        ASSERT_TRUE(steps[t].out.has_value()) << t;
        EXPECT_TRUE(steps[t].sel) << t;
        EXPECT_EQ(steps[t].counter, static_cast<std::uint64_t>(t));
        EXPECT_EQ(steps[t].out->lo.index, static_cast<std::uint32_t>(t));
        EXPECT_EQ(steps[t].out->hi.index, static_cast<std::uint32_t>(t + 4));
    }
    EXPECT_FALSE(steps[12].out.has_value());
    EXPECT_EQ(fifo.peak_occupancy(), 8u);
    EXPECT_EQ(fifo.capacity(), 8u);
    EXPECT_EQ(fifo.occupancy(), 0u);
}

TEST(StageFifo, BackToBackGroupsNeverContend)
{
    for (std::uint32_t hold : {1u, 2u, 4u, 32u, 64u})
    {
        StageFifo fifo{"s", hold};
        std::vector<std::optional<SamplePair>> feed;
        for (int frame = 0; frame < 4; ++frame)
        {
            const auto f = frame_feed(8 * hold, 2 * hold, 0);
            feed.insert(feed.end(), f.begin(), f.end());
        }
        feed.insert(feed.end(), hold, std::nullopt);
        std::size_t emitted = 0;
        for (const auto& step : drive(fifo, feed))
            emitted += step.out ? 1 : 0;
        EXPECT_EQ(emitted, 32u * hold);
        EXPECT_EQ(fifo.peak_occupancy(), 2u * hold);
    }
}

// ---- formulas --------------------------------------------------------------------

TEST(Formulas, Instantiations)
{
    EXPECT_EQ(predicted_first_ntt_latency(16), 18u);
    EXPECT_EQ(predicted_first_ntt_latency(4), 4u);
    EXPECT_EQ(predicted_first_ntt_latency(256), 262u);
    EXPECT_EQ(predicted_first_mul_latency(16), 39u);
    EXPECT_EQ(predicted_first_mul_latency(4), 11u);
    EXPECT_EQ(predicted_first_mul_latency(256), 527u);
    EXPECT_EQ(predicted_ntt_regs(256), 270u);
    EXPECT_EQ(predicted_ntt_regs(4), 6u);
    EXPECT_EQ(predicted_ntt_regs(16), 22u);
    EXPECT_EQ(predicted_mul_regs(256), 818u);
    EXPECT_EQ(predicted_mul_regs(4), 26u);
}

TEST(Formulas, RejectInvalidSizes)
{
    for (std::uint64_t n : {0ull, 1ull, 2ull, 6ull, 100ull})
        EXPECT_EQ(code_of([&] { predicted_first_ntt_latency(n); }), ErrorCode::kInvalidArgument) << n;
}

TEST(Holds, ForwardHalvesInverseDoubles)
{
    EXPECT_EQ(forward_holds(256), (std::vector<std::size_t>{0, 64, 32, 16, 8, 4, 2, 1}));
    EXPECT_EQ(inverse_holds(256), (std::vector<std::size_t>{0, 1, 2, 4, 8, 16, 32, 64}));
    EXPECT_EQ(forward_holds(16), (std::vector<std::size_t>{0, 4, 2, 1}));
}

// ---- configuration and resources ------------------------------------------------

TEST(Config, ScheduleModeForcesUnitLatency)
{
    PipelineConfig c = PipelineConfig::schedule();
    EXPECT_NO_THROW(c.validate());
    c.butterfly_latency = 4;
    EXPECT_EQ(code_of([&] { c.validate(); }), ErrorCode::kInvalidArgument);
    PipelineConfig s = PipelineConfig::structural();
    EXPECT_EQ(s.butterfly_latency, 12u);
    EXPECT_EQ(s.multiplier_latency, 10u);
    s.butterfly_latency = 0;
    EXPECT_EQ(code_of([&] { s.validate(); }), ErrorCode::kInvalidArgument);
    EXPECT_EQ(PipelineConfig::structural(4).butterfly_latency, 4u);
}

TEST(Resources, UnitCounts)
{
    const auto r16 = resource_report(params(kM, 16), PipelineConfig::schedule());
    EXPECT_EQ(r16.butterfly_units_per_ntt, 4u);
    const auto r256 = resource_report(params(kM, 256), PipelineConfig::schedule());
    EXPECT_EQ(r256.stages_per_ntt, 8u);
    EXPECT_EQ(r256.butterfly_units, 24u);
    EXPECT_EQ(r256.weight_units, 3u);
    EXPECT_EQ(r256.pointwise_units, 1u);
    EXPECT_EQ(r256.adder_only_units, 3u);
    ASSERT_EQ(r256.stages.size(), 16u);
    EXPECT_EQ(r256.stages[1].capacity, 128u);
    EXPECT_EQ(r256.stages[2].capacity, 64u);
    EXPECT_EQ(r256.stages[2].hold, 32u);
    EXPECT_EQ(r256.stages[1].twiddle_count, 2u);
    EXPECT_EQ(r256.stages[3].storage, StorageKind::kMemory);
    EXPECT_TRUE(r256.stages[0].adder_only);
    EXPECT_TRUE(r256.stages[8].adder_only);
}

// ---- single forward pipeline -----------------------------------------------------

TEST(ForwardPipeline, ProducesBitReversedSpectrum)
{
    for (const auto& [m, n] : {std::pair<Word, std::uint32_t>{17, 4}, {17, 8}, {kM, 16}, {kM, 256}})
    {
        const auto& p = params(m, n);
        Generator gen{n};
        std::vector<Polynomial> inputs;
        for (int i = 0; i < 5; ++i)
            inputs.emplace_back(gen.residues(n, m));
        const auto result = run_forward_ntt(inputs, p, PipelineConfig::schedule());
        ASSERT_EQ(result.spectra.size(), inputs.size());
        for (std::size_t i = 0; i < inputs.size(); ++i)
        {
            const Coeffs a(inputs[i].coeffs().begin(), inputs[i].coeffs().end());
            const auto direct = direct_transform(a, p.omega, m);
            for (std::size_t pos = 0; pos < n; ++pos)
                ASSERT_EQ(result.spectra[i][pos], direct[reverse_bits(pos, log2_of(n))]) << n << "/" << pos;
            EXPECT_EQ(result.spectra[i].order(), Order::kBitReversed);
        }
    }
}

TEST(ForwardPipeline, ExhaustiveAtSmallestRing)
{
    const auto& p = params(17, 4);
    std::vector<Polynomial> inputs;
    Coeffs a(4);
    for (a[0] = 0; a[0] < 17; ++a[0])
        for (a[1] = 0; a[1] < 17; ++a[1])
            for (a[2] = 0; a[2] < 17; ++a[2])
                for (a[3] = 0; a[3] < 17; ++a[3])
                    inputs.emplace_back(a);
    const auto result = run_forward_ntt(inputs, p, PipelineConfig::schedule());
    for (std::size_t i = 0; i < inputs.size(); ++i)
    {
        const Coeffs x(inputs[i].coeffs().begin(), inputs[i].coeffs().end());
        const auto direct = direct_transform(x, p.omega, 17);
        for (std::size_t pos = 0; pos < 4; ++pos)
            ASSERT_EQ(result.spectra[i][pos], direct[reverse_bits(pos, 2)]);
    }
}

TEST(ForwardPipeline, FirstOutputLatencyAndThroughput)
{
    for (std::uint32_t n = 4; n <= 256; n *= 2)
    {
        const auto& p = params(kM, n);
        std::vector<Polynomial> inputs(4, Polynomial{Coeffs(n, 1)});
        const auto result = run_forward_ntt(inputs, p, PipelineConfig::schedule());
        EXPECT_EQ(result.first_ntt_latency, predicted_first_ntt_latency(n)) << n;
        EXPECT_EQ(result.steady_cycles_per_ntt, n / 2) << n;
    }
}

TEST(ForwardPipeline, StageTwoStartsAfterItsHold)
{
    const auto r16 = run_forward_ntt(std::vector<Polynomial>{Polynomial{Coeffs(16, 1)}}, params(kM, 16),
                                     PipelineConfig::schedule());
    EXPECT_EQ(r16.stages[1].first_job_cycle, 5u);
    const auto r256 = run_forward_ntt(std::vector<Polynomial>{Polynomial{Coeffs(256, 1)}}, params(kM, 256),
                                      PipelineConfig::schedule());
    EXPECT_EQ(r256.stages[1].first_job_cycle, 65u);
    EXPECT_EQ(r256.stages[1].measured_hold, 64u);
    EXPECT_EQ(r256.stages[2].measured_hold, 32u);
    EXPECT_EQ(r256.stages[2].capacity, 64u);
    EXPECT_EQ(r256.stages[2].peak_occupancy, 64u);
}

// ---- full multiplier --------------------------------------------------------------

TEST(Stream, ProductsMatchOracleAcrossSizes)
{
    for (std::uint32_t n = 4; n <= 256; n *= 2)
    {
        const auto& p = params(kM, n);
        const auto inputs = random_pairs(20, p, n);
        const auto result = run_stream(inputs, p, PipelineConfig::schedule());
        expect_products_match(inputs, result.products, kM);
    }
}

TEST(Stream, SmallRingProducts)
{
    for (std::uint32_t n : {4u, 8u})
    {
        const auto& p = params(17, n);
        const auto inputs = random_pairs(200, p, 77 + n);
        expect_products_match(inputs, run_stream(inputs, p, PipelineConfig::schedule()).products, 17);
    }
}

TEST(Stream, ScheduleModeLatencies)
{
    for (std::uint32_t n = 4; n <= 256; n *= 2)
    {
        const auto& p = params(kM, n);
        const auto result = run_stream(random_pairs(5, p, 3), p, PipelineConfig::schedule());
        const auto& r = result.report;
        EXPECT_EQ(r.first_ntt_latency, predicted_first_ntt_latency(n)) << n;
        EXPECT_EQ(r.first_mul_latency, predicted_first_mul_latency(n)) << n;
        EXPECT_EQ(r.steady_cycles_per_mul, n / 2) << n;
        EXPECT_TRUE(r.steady_uniform);
        EXPECT_EQ(r.stage1_idle_cycles, 0u);
    }
}

TEST(Stream, ThroughputIndependentOfButterflyDepth)
{
    for (std::uint32_t n : {16u, 256u})
    {
        const auto& p = params(kM, n);
        const auto inputs = random_pairs(6, p, 5);
        std::uint64_t previous_latency = 0;
        for (unsigned latency : {1u, 4u, 12u})
        {
            const auto config = latency == 1 ? PipelineConfig::schedule() : PipelineConfig::structural(latency);
            const auto result = run_stream(inputs, p, config);
            expect_products_match(inputs, result.products, kM);
            EXPECT_EQ(result.report.steady_cycles_per_mul, n / 2) << n << "/" << latency;
            EXPECT_GT(result.report.first_mul_latency, previous_latency);
            previous_latency = result.report.first_mul_latency;
        }
    }
}

TEST(Stream, StructuralDefaultsAddConstantLatency)
{
    const auto& p = params(kM, 64);
    const auto config = PipelineConfig::structural();
    const auto r = run_stream(random_pairs(5, p, 8), p, config).report;
    const std::uint64_t l = 6;
    // Each of 2L butterflies adds 11 cycles, each of three multipliers 9.
    EXPECT_EQ(r.first_mul_latency, predicted_first_mul_latency(64) + 2 * l * 11 + 3 * 9);
    EXPECT_EQ(r.first_ntt_latency, predicted_first_ntt_latency(64) + l * 11);
    EXPECT_EQ(r.steady_cycles_per_mul, 32u);
}

TEST(Stream, StreamingHandoffSkipsFrameWait)
{
    const auto& p = params(kM, 256);
    PipelineConfig config;
    config.handoff = Handoff::kStreaming;
    const auto inputs = random_pairs(5, p, 9);
    const auto result = run_stream(inputs, p, config);
    expect_products_match(inputs, result.products, kM);
    EXPECT_EQ(result.report.first_mul_latency, 3 * 256 / 2 + 2 * 8u);
    EXPECT_EQ(result.report.handoff_regs, 0u);
    EXPECT_EQ(result.report.total_regs, predicted_mul_regs(256));
}

TEST(Stream, FeedGapStretchesSpacing)
{
    const auto& p = params(kM, 32);
    PipelineConfig config;
    config.feed_gap = 3;
    const auto inputs = random_pairs(5, p, 10);
    const auto result = run_stream(inputs, p, config);
    expect_products_match(inputs, result.products, kM);
    EXPECT_EQ(result.report.steady_cycles_per_mul, 16u + 3u);
}

TEST(Stream, RegisterAccounting)
{
    for (std::uint32_t n : {16u, 256u})
    {
        const auto& p = params(kM, n);
        const auto r = run_stream(random_pairs(5, p, 11), p, PipelineConfig::schedule()).report;
        for (const auto& s : r.stages)
        {
            EXPECT_LE(s.peak_occupancy, 2 * s.hold) << s.name;
            EXPECT_EQ(s.peak_occupancy, s.capacity) << s.name;
        }
        EXPECT_EQ(r.ntt_regs, predicted_ntt_regs(n));
        EXPECT_EQ(r.inverse_ntt_regs, predicted_ntt_regs(n));
        EXPECT_EQ(r.unit_regs, 8u);
        EXPECT_EQ(r.handoff_regs, n - 2);
        EXPECT_EQ(r.total_regs, predicted_mul_regs(n) + n - 2);
        EXPECT_EQ(r.predicted_ntt_regs, predicted_ntt_regs(n));
        EXPECT_EQ(r.predicted_mul_regs, predicted_mul_regs(n));
    }
    const auto r16 = run_stream(random_pairs(2, params(kM, 16), 12), params(kM, 16), PipelineConfig::schedule());
    EXPECT_EQ(r16.report.regs_per_stage, (std::vector<std::size_t>{2, 10, 6, 4}));
}

TEST(Stream, StatedValuesSurfaceRegisterDiscrepancy)
{
    const auto& p = params(kM, 16);
    const auto r = run_stream(random_pairs(5, p, 13), p, PipelineConfig::schedule()).report;
    bool found = false;
    for (const auto& v : r.stated_values)
        if (v.quantity == "ntt_regs")
        {
            found = true;
            EXPECT_EQ(v.stated, 18u);
            EXPECT_EQ(v.formula, 22u);
            EXPECT_EQ(v.measured, 22u);
        }
    EXPECT_TRUE(found);
}

TEST(Stream, StatedValuesAtFixedRing)
{
    const auto& p = params(kM, 256);
    const auto r = run_stream(random_pairs(5, p, 14), p, PipelineConfig::schedule()).report;
    for (const auto& v : r.stated_values)
        EXPECT_EQ(v.stated, v.measured) << v.quantity;
    EXPECT_EQ(r.stated_values.size(), 9u);
}

TEST(Stream, TracesAreDeterministic)
{
    const auto& p = params(kM, 16);
    const auto inputs = random_pairs(4, p, 15);
    PipelineConfig config;
    config.record_trace = true;
    const auto first = run_stream(inputs, p, config);
    const auto second = run_stream(inputs, p, config);
    ASSERT_FALSE(first.trace.empty());
    EXPECT_EQ(first.trace, second.trace);
    EXPECT_EQ(trace_to_csv(first.trace), trace_to_csv(second.trace));
    EXPECT_EQ(report_to_json(first.report), report_to_json(second.report));
}

TEST(Stream, TraceShowsSelectLineAtStageTwo)
{
    const auto& p = params(kM, 256);
    PipelineConfig config;
    config.record_trace = true;
    const auto result = run_stream(random_pairs(1, p, 16), p, config);
    std::vector<TraceRow> stage2;
    for (const auto& row : result.trace)
        if (row.stage == "fwdA/2")
            stage2.push_back(row);
    std::size_t gated = 0;
    for (const auto& row : stage2)
    {
        if (!row.sel)
        {
            ++gated;
            EXPECT_GE(row.counter, 64u);
            EXPECT_LT(row.counter, 128u);
            EXPECT_TRUE(row.emitted);
        }
    }
    EXPECT_EQ(gated, 64u);
    EXPECT_EQ(trace_to_csv(result.trace).substr(0, 6), "cycle,");
}

TEST(Stream, ReportJsonCarriesEveryField)
{
    const auto& p = params(kM, 16);
    const auto r = run_stream(random_pairs(5, p, 17), p, PipelineConfig::schedule()).report;
    const auto j = nlohmann::json::parse(report_to_json(r));
    for (const char* key : {"first_ntt_latency", "first_mul_latency", "steady_cycles_per_mul", "regs_per_stage",
                            "total_regs", "butterfly_units", "predicted_first_ntt", "predicted_first_mul",
                            "predicted_ntt_regs", "predicted_mul_regs", "config", "deviations", "stages",
                            "stated_values"})
        EXPECT_TRUE(j.contains(key)) << key;
    EXPECT_EQ(j["first_ntt_latency"], 18);
    EXPECT_EQ(j["config"]["mode"], "schedule");
    EXPECT_EQ(j["butterfly_units"], 12);
}

TEST(Stream, EmptyInputRunsNoCycles)
{
    const auto& p = params(kM, 16);
    const auto result = run_stream(std::vector<OperandPair>{}, p, PipelineConfig::schedule());
    EXPECT_TRUE(result.products.empty());
    EXPECT_EQ(result.report.total_cycles, 0u);
}

TEST(Simulator, CorruptedTagFaultsAndKeepsTrace)
{
    const auto& p = params(kM, 16);
    PipelineConfig config;
    config.record_trace = true;
    config.corrupt_tag_at_cycle = 4;
    Simulator sim{p, config};
    const auto inputs = random_pairs(2, p, 18);
    EXPECT_EQ(code_of([&] { sim.run(inputs); }), ErrorCode::kSimulationFault);
    EXPECT_FALSE(sim.trace().empty());
}

TEST(Simulator, RejectsMalformedFeed)
{
    const auto& p = params(17, 8);
    Simulator sim{p, PipelineConfig::schedule()};
    std::vector<OperandPair> short_feed{{Polynomial{Coeffs(4, 0)}, Polynomial{Coeffs(8, 0)}}};
    EXPECT_EQ(code_of([&] { sim.run(short_feed); }), ErrorCode::kInvalidArgument);
    std::vector<OperandPair> wide{{Polynomial{Coeffs(8, 17)}, Polynomial{Coeffs(8, 0)}}};
    EXPECT_EQ(code_of([&] { sim.run(wide); }), ErrorCode::kDomain);
    EXPECT_EQ(code_of([&] { Simulator(params(17, 2), PipelineConfig::schedule()); }),
              ErrorCode::kInvalidArgument);
}

}  // namespace
}  // namespace nttmul::sim
