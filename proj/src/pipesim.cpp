// Copyright 2026 The nttmul Authors
// SPDX-License-Identifier: Apache-2.0

#include "pipesim.hpp"

#include "error.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <bit>
#include <sstream>

namespace nttmul::sim
{
namespace
{
[[noreturn]] void fault(const std::string& what)
{
    throw Error(ErrorCode::kSimulationFault, what);
}

void require_transform_size(std::uint64_t n)
{
    if (n < 4 || !std::has_single_bit(n))
        throw Error(ErrorCode::kInvalidArgument,
                    "N must be a power of two and at least 4, got " + std::to_string(n));
}

std::uint64_t log2_exact(std::uint64_t n)
{
    return static_cast<std::uint64_t>(std::countr_zero(n));
}

/// Fixed-latency register chain. A latency of 1 is a plain register.
template <typename T>
class DelayLine
{
public:
    explicit DelayLine(unsigned latency) : slots_(latency) {}

    std::optional<T> tick(std::optional<T> in)
    {
        slots_.push_back(std::move(in));
        auto out = std::move(slots_.front());
        slots_.pop_front();
        return out;
    }

private:
    std::deque<std::optional<T>> slots_;
};

bool is_unit_only(const StageTwiddles& twiddles)
{
    return std::all_of(twiddles.values.begin(), twiddles.values.end(), [](Word w) { return w == 1; });
}

enum class Direction
{
    kForward,
    kInverse,
};

/// log2(N) FIFO stages, each followed by its butterfly unit. Checks every
/// issued pair against the position and frame the schedule says it must carry.
class TransformPipeline
{
public:
    TransformPipeline(std::string name, Direction direction, const NttParams& params,
                      const PipelineConfig& config)
      : name_{std::move(name)}, direction_{direction}, half_{params.n / 2}
    {
        const auto& tables = direction == Direction::kForward ? params.stage_twiddles_fwd
                                                                : params.stage_twiddles_inv;
        const auto holds = direction == Direction::kForward ? forward_holds(params.n)
                                                              : inverse_holds(params.n);
        const unsigned count = params.stages();
        stages_.reserve(count);
        for (unsigned i = 0; i < count; ++i)
        {
            const std::size_t distance =
                direction == Direction::kForward ? params.n >> (i + 1) : std::size_t{1} << i;
            const bool adder_only = is_unit_only(tables[i]);
            stages_.emplace_back(StageFifo{name_ + "/" + std::to_string(i + 1), holds[i]},
                                 ButterflyUnit{params.ctx, config.butterfly_latency, adder_only}, tables[i],
                                 distance);
        }
    }

    std::optional<SamplePair> tick(std::uint64_t cycle, std::optional<SamplePair> data,
                                   std::vector<TraceRow>* trace)
    {
        for (auto& stage : stages_)
        {
            if (data && !stage.first_arrival)
                stage.first_arrival = cycle;
            const auto job = stage.fifo.tick(data);
            Word twiddle = 1;
            if (job)
            {
                twiddle = issue(stage, *job, cycle);
                if (!stage.first_job)
                    stage.first_job = cycle;
                stage.last_job = cycle;
                ++stage.jobs;
            }
            if (trace)
            {
                trace->push_back(TraceRow{cycle, stage.fifo.label(), stage.fifo.sel(), stage.fifo.counter(),
                                          job.has_value(), job ? job->lo.frame : 0,
                                          job ? job->lo.index : 0, job ? job->hi.index : 0});
            }
            data = stage.unit.tick(job, twiddle);
        }
        return data;
    }

    std::vector<StageReport> stage_reports(std::uint64_t origin) const
    {
        std::vector<StageReport> out;
        for (std::size_t i = 0; i < stages_.size(); ++i)
        {
            const auto& s = stages_[i];
            StageReport r;
            r.name = s.fifo.label();
            r.stage = static_cast<unsigned>(i + 1);
            r.hold = s.fifo.hold();
            r.capacity = s.fifo.capacity();
            r.peak_occupancy = s.fifo.peak_occupancy();
            r.twiddle_count = s.twiddles->values.size();
            r.storage = s.twiddles->storage;
            r.adder_only = s.unit.adder_only();
            r.jobs = s.jobs;
            r.first_arrival_cycle = s.first_arrival ? *s.first_arrival - origin : 0;
            r.first_job_cycle = s.first_job ? *s.first_job - origin : 0;
            r.measured_hold = s.first_job && s.first_arrival ? *s.first_job - *s.first_arrival : 0;
            out.push_back(std::move(r));
        }
        return out;
    }

    /// Cycles without a job between the first stage's first and last job.
    std::uint64_t stage1_idle_cycles() const
    {
        const auto& s = stages_.front();
        if (!s.first_job)
            return 0;
        return (s.last_job - *s.first_job + 1) - s.jobs;
    }

private:
    struct Stage
    {
        Stage(StageFifo f, ButterflyUnit u, const StageTwiddles& t, std::size_t d)
          : fifo{std::move(f)}, unit{std::move(u)}, twiddles{&t}, distance{d}
        {}

        StageFifo fifo;
        ButterflyUnit unit;
        const StageTwiddles* twiddles;
        std::size_t distance;
        std::uint64_t emitted = 0;
        std::uint64_t jobs = 0;
        std::optional<std::uint64_t> first_arrival;
        std::optional<std::uint64_t> first_job;
        std::uint64_t last_job = 0;
    };

    Word issue(Stage& stage, const SamplePair& job, std::uint64_t cycle)
    {
        const std::uint64_t k = stage.emitted % half_;
        const std::uint64_t frame = stage.emitted / half_;
        ++stage.emitted;
        const std::size_t d = stage.distance;
        const std::uint64_t lo_expected = (k / d) * 2 * d + k % d;
        if (job.lo.frame != frame || job.hi.frame != frame || job.lo.index != lo_expected ||
            job.hi.index != lo_expected + d)
        {
            std::ostringstream msg;
            msg << stage.fifo.label() << " at cycle " << cycle << ": issued positions (" << job.lo.index
                << ", " << job.hi.index << ") of frames (" << job.lo.frame << ", " << job.hi.frame
                << "), schedule expects (" << lo_expected << ", " << lo_expected + d << ") of frame "
                << frame;
            fault(msg.str());
        }
        const std::size_t address = direction_ == Direction::kForward ? k / d : k % d;
        return stage.twiddles->values.at(address);
    }

    std::string name_;
    Direction direction_;
    std::uint64_t half_;
    std::vector<Stage> stages_;
};

/// Multiplies each sample of a pair by a per-position constant (weighting and
/// unweighting units).
class ScalingUnit
{
public:
    ScalingUnit(const std::vector<Word>& table, const ModulusContext& ctx, unsigned latency)
      : table_{&table}, mul_{ctx}, line_{latency}
    {}

    std::optional<SamplePair> tick(std::optional<SamplePair> in)
    {
        if (in)
        {
            in->lo.value = mul_(in->lo.value, table_->at(in->lo.index));
            in->hi.value = mul_(in->hi.value, table_->at(in->hi.index));
        }
        return line_.tick(std::move(in));
    }

private:
    const std::vector<Word>* table_;
    ModMultiplier mul_;
    DelayLine<SamplePair> line_;
};

class PointwiseUnit
{
public:
    PointwiseUnit(const ModulusContext& ctx, unsigned latency) : mul_{ctx}, line_{latency} {}

    std::optional<SamplePair> tick(const std::optional<SamplePair>& a, const std::optional<SamplePair>& b,
                                   std::uint64_t cycle)
    {
        if (a.has_value() != b.has_value())
            fault("pointwise unit at cycle " + std::to_string(cycle) + ": operand streams out of lockstep");
        std::optional<SamplePair> out;
        if (a)
        {
            if (a->lo.index != b->lo.index || a->hi.index != b->hi.index || a->lo.frame != b->lo.frame)
                fault("pointwise unit at cycle " + std::to_string(cycle) +
                      ": operand spectra disagree on position or frame");
            out = *a;
            out->lo.value = mul_(a->lo.value, b->lo.value);
            out->hi.value = mul_(a->hi.value, b->hi.value);
        }
        return line_.tick(std::move(out));
    }

private:
    ModMultiplier mul_;
    DelayLine<SamplePair> line_;
};

/// Holds pointwise products until a frame is complete, then releases it one
/// pair per cycle starting in the cycle the last pair arrives.
class FrameBuffer
{
public:
    FrameBuffer(Handoff mode, std::uint64_t pairs_per_frame) : mode_{mode}, pairs_per_frame_{pairs_per_frame} {}

    std::optional<SamplePair> tick(std::optional<SamplePair> in)
    {
        if (mode_ == Handoff::kStreaming)
            return in;
        if (in)
        {
            queue_.push_back(*in);
            if (++filled_ == pairs_per_frame_)
            {
                filled_ = 0;
                releasable_ += pairs_per_frame_;
            }
        }
        std::optional<SamplePair> out;
        if (releasable_ > 0)
        {
            out = queue_.front();
            queue_.pop_front();
            --releasable_;
        }
        peak_pairs_ = std::max(peak_pairs_, queue_.size());
        return out;
    }

    std::size_t peak_registers() const noexcept { return 2 * peak_pairs_; }

private:
    Handoff mode_;
    std::uint64_t pairs_per_frame_;
    std::deque<SamplePair> queue_;
    std::uint64_t filled_ = 0;
    std::uint64_t releasable_ = 0;
    std::size_t peak_pairs_ = 0;
};

std::optional<SamplePair> feed_pair(const Polynomial& p, std::uint32_t frame, std::uint32_t slot,
                                    std::uint32_t half)
{
    return SamplePair{Sample{p[slot], frame, slot}, Sample{p[slot + half], frame, slot + half}};
}

void require_operand(const Polynomial& p, const NttParams& params, std::size_t frame)
{
    if (p.size() != params.n)
        throw Error(ErrorCode::kInvalidArgument, "frame " + std::to_string(frame) + ": operand has " +
                                                     std::to_string(p.size()) + " coefficients, expected " +
                                                     std::to_string(params.n));
    if (p.domain() != Domain::kCoefficient || p.order() != Order::kNatural)
        throw Error(ErrorCode::kInvalidArgument,
                    "frame " + std::to_string(frame) + ": operands must be natural-order coefficients");
    for (std::size_t i = 0; i < p.size(); ++i)
        if (p[i] >= params.modulus())
            throw Error(ErrorCode::kDomain, "frame " + std::to_string(frame) + ": coefficient " +
                                                std::to_string(i) + " is not below M");
}

/// Spacing between consecutive completions, if it is the same everywhere.
std::pair<std::uint64_t, bool> uniform_spacing(const std::vector<std::uint64_t>& completions)
{
    if (completions.size() < 2)
        return {0, false};
    const std::uint64_t step = completions[1] - completions[0];
    for (std::size_t i = 2; i < completions.size(); ++i)
        if (completions[i] - completions[i - 1] != step)
            return {0, false};
    return {step, true};
}

std::uint64_t cycle_budget(std::uint64_t frames, const NttParams& params, const PipelineConfig& config)
{
    const std::uint64_t n = params.n;
    const std::uint64_t stages = params.stages();
    return frames * (n / 2 + config.feed_gap) + 4 * n + 4 * stages * (config.butterfly_latency + 1) +
           8 * config.multiplier_latency + 64;
}

std::vector<StatedValue> stated_values(const CycleReport& r)
{
    std::vector<StatedValue> out;
    if (r.n == 16)
    {
        out.push_back({"first_ntt_latency", 18, r.predicted_first_ntt, r.first_ntt_latency});
        out.push_back({"ntt_regs", 18, r.predicted_ntt_regs, r.ntt_regs});
        out.push_back({"butterfly_units_per_ntt", 4, 4, r.regs_per_stage.size()});
    }
    if (r.n == 256)
    {
        out.push_back({"steady_cycles_per_mul", 128, 128, r.steady_cycles_per_mul});
        out.push_back({"stages_per_ntt", 8, 8, r.regs_per_stage.size()});
        const auto stage = [&](unsigned s) -> const StageReport& { return r.stages.at(s - 1); };
        out.push_back({"fwd_stage2_fifo_regs", 128, stage(2).capacity, stage(2).peak_occupancy});
        out.push_back({"fwd_stage3_fifo_regs", 64, stage(3).capacity, stage(3).peak_occupancy});
        // The counts quoted for stages 4-8 agree with hold durations, not capacities.
        const std::uint64_t quoted[] = {16, 8, 4, 2, 1};
        for (unsigned s = 4; s <= 8; ++s)
            out.push_back({"fwd_stage" + std::to_string(s) + "_hold", quoted[s - 4], stage(s).hold,
                           stage(s).measured_hold});
    }
    return out;
}

}  // namespace

const char* to_string(Mode mode) noexcept
{
    return mode == Mode::kSchedule ? "schedule" : "structural";
}

const char* to_string(Handoff handoff) noexcept
{
    return handoff == Handoff::kFrameSync ? "frame-sync" : "streaming";
}

PipelineConfig PipelineConfig::schedule()
{
    return PipelineConfig{};
}

PipelineConfig PipelineConfig::structural(const StructuralLatencies& latencies)
{
    PipelineConfig config;
    config.mode = Mode::kStructural;
    config.butterfly_latency = latencies.karatsuba + latencies.reduce + latencies.add_sub;
    config.multiplier_latency = latencies.karatsuba + latencies.reduce;
    return config;
}

PipelineConfig PipelineConfig::structural(unsigned butterfly_latency)
{
    PipelineConfig config = structural(StructuralLatencies{});
    config.butterfly_latency = butterfly_latency;
    return config;
}

void PipelineConfig::validate() const
{
    if (butterfly_latency == 0 || multiplier_latency == 0)
        throw Error(ErrorCode::kInvalidArgument, "unit latencies must be at least 1");
    if (mode == Mode::kSchedule && (butterfly_latency != 1 || multiplier_latency != 1))
        throw Error(ErrorCode::kInvalidArgument, "schedule mode requires unit latencies of 1");
}

StageFifo::StageFifo(std::string label, std::size_t hold) : label_{std::move(label)}, hold_{hold} {}

std::optional<SamplePair> StageFifo::tick(const std::optional<SamplePair>& incoming)
{
    std::optional<SamplePair> out;
    sel_ = true;
    if (drain_left_ > 0)
    {
        counter_ = 3 * hold_ - drain_left_;
        out = SamplePair{block_ii_.front(), block_i_.front()};
        block_ii_.pop_front();
        block_i_.pop_front();
        --drain_left_;
    }
    if (!incoming)
        return out;

    if (hold_ == 0)
    {
        counter_ = 0;
        return incoming;
    }

    const std::size_t arrival = arrivals_in_group_;
    counter_ = arrival;
    if (arrival < hold_)
    {
        block_i_.push_back(incoming->lo);
        block_ii_.push_back(incoming->hi);
    }
    else
    {
        if (out)
            fault(label_ + ": drain and live pairing contend for the butterfly");
        if (block_i_.empty())
            fault(label_ + ": block I empty while pairing live data");
        sel_ = false;
        out = SamplePair{block_i_.front(), incoming->lo};
        block_i_.pop_front();
        block_i_.push_back(incoming->hi);
    }
    if (block_i_.size() > hold_ || block_ii_.size() > hold_)
        fault(label_ + ": register block overflow");
    peak_ = std::max(peak_, occupancy());

    if (++arrivals_in_group_ == 2 * hold_)
    {
        arrivals_in_group_ = 0;
        drain_left_ = hold_;
    }
    return out;
}

std::pair<Residue, Residue> butterfly_step(Residue a_i, Residue a_j, Residue w, const NttParams& params)
{
    const ModMultiplier mul{params.ctx};
    const auto [u, v] = butterfly_step(a_i.value(), a_j.value(), w.value(), mul, params.ctx);
    return {Residue::unchecked(u), Residue::unchecked(v)};
}

std::pair<Word, Word> butterfly_step(Word a_i, Word a_j, Word w, const ModMultiplier& mul,
                                     const ModulusContext& ctx)
{
    const auto t = Residue::unchecked(mul(a_i, w));
    const auto j = Residue::unchecked(a_j);
    return {mod_add(j, t, ctx).value(), mod_sub(j, t, ctx).value()};
}

ButterflyUnit::ButterflyUnit(const ModulusContext& ctx, unsigned latency, bool adder_only)
  : ctx_{ctx}, mul_{ctx}, adder_only_{adder_only}, pipe_(latency)
{
    if (latency == 0)
        throw Error(ErrorCode::kInvalidArgument, "butterfly latency must be at least 1");
}

std::optional<SamplePair> ButterflyUnit::tick(const std::optional<SamplePair>& operands, Word twiddle)
{
    std::optional<SamplePair> result = operands;
    if (result)
    {
        const auto a_i = Residue::unchecked(result->hi.value);
        const auto a_j = Residue::unchecked(result->lo.value);
        if (adder_only_)
        {
            if (twiddle != 1)
                fault("adder-only butterfly given twiddle " + std::to_string(twiddle));
            result->lo.value = mod_add(a_j, a_i, ctx_).value();
            result->hi.value = mod_sub(a_j, a_i, ctx_).value();
        }
        else
        {
            const auto [u, v] = butterfly_step(a_i.value(), a_j.value(), twiddle, mul_, ctx_);
            result->lo.value = u;
            result->hi.value = v;
        }
    }
    pipe_.push_back(std::move(result));
    auto out = std::move(pipe_.front());
    pipe_.pop_front();
    return out;
}

std::uint64_t predicted_first_ntt_latency(std::uint64_t n)
{
    require_transform_size(n);
    return n + log2_exact(n) - 2;
}

std::uint64_t predicted_first_mul_latency(std::uint64_t n)
{
    require_transform_size(n);
    return 2 * n + 2 * log2_exact(n) - 1;
}

std::uint64_t predicted_ntt_regs(std::uint64_t n)
{
    require_transform_size(n);
    return n + 2 * log2_exact(n) - 2;
}

std::uint64_t predicted_mul_regs(std::uint64_t n)
{
    return 3 * predicted_ntt_regs(n) + 8;
}

std::vector<std::size_t> forward_holds(std::uint32_t n)
{
    require_transform_size(n);
    const unsigned stages = static_cast<unsigned>(log2_exact(n));
    std::vector<std::size_t> holds(stages, 0);
    for (unsigned s = 2; s <= stages; ++s)
        holds[s - 1] = std::size_t{n} >> s;
    return holds;
}

std::vector<std::size_t> inverse_holds(std::uint32_t n)
{
    require_transform_size(n);
    const unsigned stages = static_cast<unsigned>(log2_exact(n));
    std::vector<std::size_t> holds(stages, 0);
    for (unsigned t = 2; t <= stages; ++t)
        holds[t - 1] = std::size_t{1} << (t - 2);
    return holds;
}

ResourceReport resource_report(const NttParams& params, const PipelineConfig& config)
{
    config.validate();
    require_transform_size(params.n);
    ResourceReport r;
    r.stages_per_ntt = params.stages();
    r.butterfly_units_per_ntt = r.stages_per_ntt;
    r.butterfly_units = 3 * r.stages_per_ntt;
    r.weight_units = 3;
    r.pointwise_units = 1;

    const auto add = [&](const char* prefix, const std::vector<StageTwiddles>& tables,
                         const std::vector<std::size_t>& holds, unsigned copies) {
        for (std::size_t i = 0; i < tables.size(); ++i)
        {
            StageReport s;
            s.name = std::string{prefix} + "/" + std::to_string(i + 1);
            s.stage = static_cast<unsigned>(i + 1);
            s.hold = holds[i];
            s.capacity = 2 * holds[i];
            s.twiddle_count = tables[i].values.size();
            s.storage = tables[i].storage;
            s.adder_only = is_unit_only(tables[i]);
            if (s.adder_only)
                r.adder_only_units += copies;
            r.stages.push_back(std::move(s));
        }
    };
    add("fwd", params.stage_twiddles_fwd, forward_holds(params.n), 2);
    add("inv", params.stage_twiddles_inv, inverse_holds(params.n), 1);
    return r;
}

std::string report_to_json(const CycleReport& r)
{
    using nlohmann::ordered_json;
    ordered_json j;
    j["N"] = r.n;
    j["M"] = r.modulus;
    j["config"] = {
        {"mode", to_string(r.config.mode)},
        {"butterfly_latency", r.config.butterfly_latency},
        {"multiplier_latency", r.config.multiplier_latency},
        {"handoff", to_string(r.config.handoff)},
        {"feed_gap", r.config.feed_gap},
    };
    j["multiplier_path"] = r.multiplier_path;
    j["frames"] = r.frames;
    j["total_cycles"] = r.total_cycles;
    j["first_ntt_latency"] = r.first_ntt_latency;
    j["first_mul_latency"] = r.first_mul_latency;
    j["steady_cycles_per_mul"] = r.steady_cycles_per_mul;
    j["steady_uniform"] = r.steady_uniform;
    j["completion_cycles"] = r.completion_cycles;
    j["stage1_idle_cycles"] = r.stage1_idle_cycles;
    j["regs_per_stage"] = r.regs_per_stage;
    j["ntt_regs"] = r.ntt_regs;
    j["inverse_ntt_regs"] = r.inverse_ntt_regs;
    j["unit_regs"] = r.unit_regs;
    j["handoff_regs"] = r.handoff_regs;
    j["total_regs"] = r.total_regs;
    j["butterfly_units"] = r.butterfly_units;
    j["adder_only_units"] = r.adder_only_units;
    j["weight_units"] = r.weight_units;
    j["pointwise_units"] = r.pointwise_units;
    j["predicted_first_ntt"] = r.predicted_first_ntt;
    j["predicted_first_mul"] = r.predicted_first_mul;
    j["predicted_ntt_regs"] = r.predicted_ntt_regs;
    j["predicted_mul_regs"] = r.predicted_mul_regs;

    auto stages = ordered_json::array();
    for (const auto& s : r.stages)
    {
        stages.push_back({
            {"name", s.name},
            {"stage", s.stage},
            {"hold", s.hold},
            {"capacity", s.capacity},
            {"peak_occupancy", s.peak_occupancy},
            {"twiddle_count", s.twiddle_count},
            {"storage", to_string(s.storage)},
            {"adder_only", s.adder_only},
            {"jobs", s.jobs},
            {"first_arrival_cycle", s.first_arrival_cycle},
            {"first_job_cycle", s.first_job_cycle},
            {"measured_hold", s.measured_hold},
        });
    }
    j["stages"] = std::move(stages);

    auto stated = ordered_json::array();
    for (const auto& v : r.stated_values)
    {
        stated.push_back({{"quantity", v.quantity},
                          {"stated", v.stated},
                          {"formula", v.formula},
                          {"measured", v.measured},
                          {"agrees", v.stated == v.measured}});
    }
    j["stated_values"] = std::move(stated);
    j["deviations"] = r.deviations;
    return j.dump(2);
}

std::string trace_to_csv(std::span<const TraceRow> rows)
{
    std::ostringstream out;
    out << "cycle,stage,sel,counter,emitted,frame,lo_index,hi_index\n";
    for (const auto& row : rows)
    {
        out << row.cycle << ',' << row.stage << ',' << (row.sel ? 1 : 0) << ',' << row.counter << ','
            << (row.emitted ? 1 : 0) << ',';
        if (row.emitted)
            out << row.frame << ',' << row.lo_index << ',' << row.hi_index;
        else
            out << ",,";
        out << '\n';
    }
    return out.str();
}

Simulator::Simulator(NttParams params, PipelineConfig config)
  : params_{std::move(params)}, config_{config}
{
    config_.validate();
    require_transform_size(params_.n);
}

std::vector<Polynomial> Simulator::run(std::span<const OperandPair> inputs)
{
    for (std::size_t f = 0; f < inputs.size(); ++f)
    {
        require_operand(inputs[f].first, params_, f);
        require_operand(inputs[f].second, params_, f);
    }
    trace_.clear();
    report_ = CycleReport{};

    const std::uint32_t n = params_.n;
    const std::uint32_t half = n / 2;
    const std::uint64_t frames = inputs.size();
    const std::uint64_t period = half + config_.feed_gap;
    const auto& ctx = params_.ctx;
    auto* trace = config_.record_trace ? &trace_ : nullptr;

    ScalingUnit weight_a{params_.weights_fwd, ctx, config_.multiplier_latency};
    ScalingUnit weight_b{params_.weights_fwd, ctx, config_.multiplier_latency};
    TransformPipeline forward_a{"fwdA", Direction::kForward, params_, config_};
    TransformPipeline forward_b{"fwdB", Direction::kForward, params_, config_};
    PointwiseUnit pointwise{ctx, config_.multiplier_latency};
    FrameBuffer handoff{config_.handoff, half};
    TransformPipeline inverse{"inv", Direction::kInverse, params_, config_};
    ScalingUnit unweight{params_.weights_inv_scaled, ctx, config_.multiplier_latency};

    std::vector<Polynomial> products(frames, Polynomial{std::vector<Word>(n, 0)});
    std::vector<std::uint32_t> collected(frames, 0);
    std::vector<std::uint64_t> completions;
    std::optional<std::uint64_t> forward_origin;
    std::optional<std::uint64_t> inverse_origin;
    std::uint64_t frame0_spectrum_pairs = 0;
    std::optional<std::uint64_t> first_ntt_done;

    const std::uint64_t budget = cycle_budget(frames, params_, config_);
    std::uint64_t cycle = 0;
    for (; completions.size() < frames; ++cycle)
    {
        if (cycle > budget)
            fault("pipeline did not drain within " + std::to_string(budget) + " cycles");

        std::optional<SamplePair> feed_a;
        std::optional<SamplePair> feed_b;
        const std::uint64_t frame = cycle / period;
        const std::uint64_t slot = cycle % period;
        if (frame < frames && slot < half)
        {
            const auto f = static_cast<std::uint32_t>(frame);
            const auto t = static_cast<std::uint32_t>(slot);
            feed_a = feed_pair(inputs[frame].first, f, t, half);
            feed_b = feed_pair(inputs[frame].second, f, t, half);
        }

        auto weighted_a = weight_a.tick(feed_a);
        const auto weighted_b = weight_b.tick(feed_b);
        if (weighted_a && !forward_origin)
            forward_origin = cycle;
        if (weighted_a && config_.corrupt_tag_at_cycle == cycle)
            weighted_a->hi.index ^= 1;

        const auto spectrum_a = forward_a.tick(cycle, weighted_a, trace);
        const auto spectrum_b = forward_b.tick(cycle, weighted_b, trace);
        if (spectrum_a && spectrum_a->lo.frame == 0 && ++frame0_spectrum_pairs == half)
            first_ntt_done = cycle;

        const auto product = handoff.tick(pointwise.tick(spectrum_a, spectrum_b, cycle));
        if (product && !inverse_origin)
            inverse_origin = cycle;
        const auto result = unweight.tick(inverse.tick(cycle, product, trace));
        if (!result)
            continue;

        for (const Sample& s : {result->lo, result->hi})
        {
            if (s.frame >= frames || s.index >= n)
                fault("output sample with out-of-range tag at cycle " + std::to_string(cycle));
            products[s.frame].mutable_coeffs()[s.index] = s.value;
        }
        if ((collected[result->lo.frame] += 2) == n)
            completions.push_back(cycle);
    }

    auto& r = report_;
    r.n = n;
    r.modulus = params_.modulus();
    r.config = config_;
    r.multiplier_path = ModMultiplier{ctx}.describe();
    r.frames = frames;
    r.total_cycles = cycle;
    if (first_ntt_done && forward_origin)
        r.first_ntt_latency = *first_ntt_done - *forward_origin;
    if (!completions.empty())
        r.first_mul_latency = completions.front();
    r.completion_cycles = completions;
    std::tie(r.steady_cycles_per_mul, r.steady_uniform) = uniform_spacing(completions);
    r.stage1_idle_cycles = forward_a.stage1_idle_cycles();

    r.stages = forward_a.stage_reports(forward_origin.value_or(0));
    const auto inverse_stages = inverse.stage_reports(inverse_origin.value_or(0));
    const auto forward_b_stages = forward_b.stage_reports(forward_origin.value_or(0));
    for (std::size_t i = 0; i < r.stages.size(); ++i)
    {
        if (r.stages[i].peak_occupancy != forward_b_stages[i].peak_occupancy)
            fault("forward pipelines diverged at stage " + std::to_string(i + 1));
        r.regs_per_stage.push_back(r.stages[i].peak_occupancy + 2);
        r.ntt_regs += r.stages[i].peak_occupancy + 2;
    }
    for (const auto& s : inverse_stages)
        r.inverse_ntt_regs += s.peak_occupancy + 2;
    r.stages.insert(r.stages.end(), inverse_stages.begin(), inverse_stages.end());
    r.unit_regs = 2 * 4;
    r.handoff_regs = handoff.peak_registers();
    r.total_regs = 2 * r.ntt_regs + r.inverse_ntt_regs + r.unit_regs + r.handoff_regs;

    const auto resources = resource_report(params_, config_);
    r.butterfly_units = resources.butterfly_units;
    r.adder_only_units = resources.adder_only_units;
    r.weight_units = resources.weight_units;
    r.pointwise_units = resources.pointwise_units;

    r.predicted_first_ntt = predicted_first_ntt_latency(n);
    r.predicted_first_mul = predicted_first_mul_latency(n);
    r.predicted_ntt_regs = predicted_ntt_regs(n);
    r.predicted_mul_regs = predicted_mul_regs(n);

    r.deviations.push_back("inverse stages use decimation-in-time holds 0, 1, 2, ..., N/4 with stage t "
                           "cycling through 2^(t-1) twiddles; stage 1 needs no multiplier");
    r.deviations.push_back("forward stage s holds 2^(s-1) distinct twiddles; stages with at most " +
                           std::to_string(kRegisterTwiddleLimit) + " keep them in registers");
    if (config_.handoff == Handoff::kFrameSync)
        r.deviations.push_back("inverse transform starts once a full spectrum frame is buffered; the "
                               "buffer holds up to N-2 registers beyond the transform and unit counts");
    else
        r.deviations.push_back("streaming handoff: first multiplication completes N/2-1 cycles before "
                               "the frame-synchronous latency formula");
    if (!is_unit_only(params_.stage_twiddles_fwd.front()))
        r.deviations.push_back("forward stage 1 needs non-unit twiddles and uses a full butterfly");
    if (config_.mode == Mode::kStructural)
        r.deviations.push_back("structural latencies are modelling choices: butterfly " +
                               std::to_string(config_.butterfly_latency) + " cycles, multipliers " +
                               std::to_string(config_.multiplier_latency) + " cycles");
    r.stated_values = stated_values(r);
    return products;
}

StreamResult run_stream(std::span<const OperandPair> inputs, const NttParams& params,
                        const PipelineConfig& config)
{
    Simulator sim{params, config};
    auto products = sim.run(inputs);
    return StreamResult{std::move(products), sim.report(), sim.trace()};
}

NttStreamResult run_forward_ntt(std::span<const Polynomial> inputs, const NttParams& params,
                                const PipelineConfig& config)
{
    config.validate();
    require_transform_size(params.n);
    for (std::size_t f = 0; f < inputs.size(); ++f)
        require_operand(inputs[f], params, f);

    const std::uint32_t n = params.n;
    const std::uint32_t half = n / 2;
    const std::uint64_t frames = inputs.size();
    const std::uint64_t period = half + config.feed_gap;

    NttStreamResult out;
    auto* trace = config.record_trace ? &out.trace : nullptr;
    TransformPipeline pipeline{"fwd", Direction::kForward, params, config};
    std::vector<std::vector<Word>> spectra(frames, std::vector<Word>(n, 0));
    std::vector<std::uint32_t> collected(frames, 0);
    std::vector<std::uint64_t> completions;

    const std::uint64_t budget = cycle_budget(frames, params, config);
    for (std::uint64_t cycle = 0; completions.size() < frames; ++cycle)
    {
        if (cycle > budget)
            fault("pipeline did not drain within " + std::to_string(budget) + " cycles");
        std::optional<SamplePair> feed;
        const std::uint64_t frame = cycle / period;
        const std::uint64_t slot = cycle % period;
        if (frame < frames && slot < half)
            feed = feed_pair(inputs[frame], static_cast<std::uint32_t>(frame), static_cast<std::uint32_t>(slot),
                             half);
        const auto result = pipeline.tick(cycle, feed, trace);
        if (!result)
            continue;
        spectra[result->lo.frame][result->lo.index] = result->lo.value;
        spectra[result->hi.frame][result->hi.index] = result->hi.value;
        if ((collected[result->lo.frame] += 2) == n)
            completions.push_back(cycle);
    }

    for (auto& s : spectra)
        out.spectra.emplace_back(std::move(s), Domain::kEvaluation, Order::kBitReversed);
    if (!completions.empty())
        out.first_ntt_latency = completions.front();
    out.steady_cycles_per_ntt = uniform_spacing(completions).first;
    out.stages = pipeline.stage_reports(0);
    return out;
}

}  // namespace nttmul::sim
