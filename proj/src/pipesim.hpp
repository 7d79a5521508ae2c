// Copyright 2026 The nttmul Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Cycle-accurate model of the FIFO-pipelined negacyclic multiplier: two
// forward transform pipelines fed in parallel, a pointwise multiplier, one
// inverse pipeline and the weighting units on either side. Data moves as
// coefficient pairs, one pair per unit per cycle.

#include "polymul.hpp"

#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace nttmul::sim
{

enum class Mode
{
    /// Unit latency everywhere; cycle counts line up with the slot-level formulas.
    kSchedule,
    /// Arithmetic units keep their internal pipeline depth.
    kStructural,
};

/// How the inverse transform picks up the pointwise products.
enum class Handoff
{
    /// A frame starts into the inverse transform once all of it is buffered.
    kFrameSync,
    /// Products enter the inverse transform as soon as they exist.
    kStreaming,
};

const char* to_string(Mode mode) noexcept;
const char* to_string(Handoff handoff) noexcept;

/// Default structural depths read off the datapath drawings: Karatsuba
/// (split + three partial products + recombine), the shift-add reducer, and
/// the add/subtract plus final compare.
struct StructuralLatencies
{
    unsigned karatsuba = 6;
    unsigned reduce = 4;
    unsigned add_sub = 2;
};

struct PipelineConfig
{
    Mode mode = Mode::kSchedule;
    unsigned butterfly_latency = 1;
    /// Latency of the weighting, pointwise and unweighting multipliers.
    unsigned multiplier_latency = 1;
    Handoff handoff = Handoff::kFrameSync;
    /// Idle cycles inserted between consecutive input frames.
    unsigned feed_gap = 0;
    bool record_trace = false;
    /// Debug hook: corrupts the position tag of the pair entering the first
    /// forward stage at this cycle, to exercise the fault path.
    std::optional<std::uint64_t> corrupt_tag_at_cycle;

    static PipelineConfig schedule();
    static PipelineConfig structural(const StructuralLatencies& latencies = {});
    /// Structural mode with an explicit butterfly depth.
    static PipelineConfig structural(unsigned butterfly_latency);

    /// Throws `Error(kInvalidArgument)` for zero latencies or a schedule-mode
    /// config with latencies other than 1.
    void validate() const;
};

/// One coefficient in flight, tagged with its frame and transform position.
struct Sample
{
    Word value = 0;
    std::uint32_t frame = 0;
    std::uint32_t index = 0;

    friend bool operator==(const Sample&, const Sample&) = default;
};

/// Butterfly operands: `lo` is a_j (added to), `hi` is a_i (scaled by w).
struct SamplePair
{
    Sample lo;
    Sample hi;

    friend bool operator==(const SamplePair&, const SamplePair&) = default;
};

/// Two shift-register banks feeding one butterfly per cycle.
///
/// A group is 2*hold consecutive arrivals. For the first `hold` arrivals both
/// slots are stored (block I takes `lo`, block II takes `hi`). For the next
/// `hold` arrivals block II is clock-gated; the head of block I pairs with the
/// live `lo` and the live `hi` is stored in block I. The following `hold`
/// cycles drain block II against block I while the next group fills in behind.
/// A hold of zero passes pairs straight through.
class StageFifo
{
public:
    StageFifo(std::string label, std::size_t hold);

    /// Advances one cycle. Throws `Error(kSimulationFault)` when a block would
    /// overflow or two pairs would contend for the butterfly.
    std::optional<SamplePair> tick(const std::optional<SamplePair>& incoming);

    const std::string& label() const noexcept { return label_; }
    std::size_t hold() const noexcept { return hold_; }
    std::size_t capacity() const noexcept { return 2 * hold_; }
    std::size_t occupancy() const noexcept { return block_i_.size() + block_ii_.size(); }
    std::size_t peak_occupancy() const noexcept { return peak_; }

    /// Select line: 0 while block II is gated, 1 otherwise.
    bool sel() const noexcept { return sel_; }
    bool block_ii_gated() const noexcept { return !sel_; }
    /// Cycle within the current group: arrivals 0..2*hold-1, then the drain.
    std::uint64_t counter() const noexcept { return counter_; }

private:
    std::string label_;
    std::size_t hold_;
    std::deque<Sample> block_i_;
    std::deque<Sample> block_ii_;
    std::size_t arrivals_in_group_ = 0;
    std::size_t drain_left_ = 0;
    std::size_t peak_ = 0;
    bool sel_ = true;
    std::uint64_t counter_ = 0;
};

/// (a_j + a_i*w mod M, a_j - a_i*w mod M) through the hardware multiplier path.
std::pair<Residue, Residue> butterfly_step(Residue a_i, Residue a_j, Residue w, const NttParams& params);
std::pair<Word, Word> butterfly_step(Word a_i, Word a_j, Word w, const ModMultiplier& mul,
                                     const ModulusContext& ctx);

/// Fully pipelined butterfly: accepts one job per cycle, returns each result
/// `latency` cycles later. An adder-only unit has no multiplier and rejects
/// twiddles other than 1.
class ButterflyUnit
{
public:
    ButterflyUnit(const ModulusContext& ctx, unsigned latency, bool adder_only);

    std::optional<SamplePair> tick(const std::optional<SamplePair>& operands, Word twiddle);

    bool adder_only() const noexcept { return adder_only_; }
    unsigned latency() const noexcept { return static_cast<unsigned>(pipe_.size()); }

private:
    ModulusContext ctx_;
    ModMultiplier mul_;
    bool adder_only_;
    std::deque<std::optional<SamplePair>> pipe_;
};

// Slot-level cycle and register formulas. All require N a power of two, N >= 4.
std::uint64_t predicted_first_ntt_latency(std::uint64_t n);
std::uint64_t predicted_first_mul_latency(std::uint64_t n);
std::uint64_t predicted_ntt_regs(std::uint64_t n);
std::uint64_t predicted_mul_regs(std::uint64_t n);

/// Hold duration of each stage (index 0 is stage 1). Forward stage s holds
/// N/2^s cycles from s = 2 on; inverse stage t holds 2^(t-2) from t = 2 on.
std::vector<std::size_t> forward_holds(std::uint32_t n);
std::vector<std::size_t> inverse_holds(std::uint32_t n);

struct StageReport
{
    std::string name;
    unsigned stage = 0;
    std::size_t hold = 0;
    std::size_t capacity = 0;
    std::size_t peak_occupancy = 0;
    std::size_t twiddle_count = 0;
    StorageKind storage = StorageKind::kRegisters;
    bool adder_only = false;
    std::uint64_t jobs = 0;
    /// Cycles are counted from the pipeline's first input.
    std::uint64_t first_arrival_cycle = 0;
    std::uint64_t first_job_cycle = 0;
    /// first_job_cycle - first_arrival_cycle.
    std::uint64_t measured_hold = 0;
};

struct ResourceReport
{
    unsigned stages_per_ntt = 0;
    unsigned butterfly_units_per_ntt = 0;
    unsigned butterfly_units = 0;
    unsigned adder_only_units = 0;
    unsigned weight_units = 0;
    unsigned pointwise_units = 0;
    std::vector<StageReport> stages;
};

ResourceReport resource_report(const NttParams& params, const PipelineConfig& config);

/// A target figure for the design next to the formula and the measured value.
struct StatedValue
{
    std::string quantity;
    std::uint64_t stated = 0;
    std::uint64_t formula = 0;
    std::uint64_t measured = 0;
};

struct CycleReport
{
    std::uint32_t n = 0;
    Word modulus = 0;
    PipelineConfig config;
    std::string multiplier_path;
    std::uint64_t frames = 0;
    std::uint64_t total_cycles = 0;

    std::uint64_t first_ntt_latency = 0;
    std::uint64_t first_mul_latency = 0;
    /// Spacing between completions; 0 when fewer than two frames finished or
    /// the spacing was not uniform.
    std::uint64_t steady_cycles_per_mul = 0;
    bool steady_uniform = false;
    std::vector<std::uint64_t> completion_cycles;
    /// Idle cycles of forward stage 1 between its first and last butterfly.
    std::uint64_t stage1_idle_cycles = 0;

    /// Per forward stage: peak FIFO occupancy plus the two output registers.
    std::vector<std::size_t> regs_per_stage;
    std::size_t ntt_regs = 0;
    std::size_t inverse_ntt_regs = 0;
    std::size_t unit_regs = 0;
    std::size_t handoff_regs = 0;
    std::size_t total_regs = 0;

    unsigned butterfly_units = 0;
    unsigned adder_only_units = 0;
    unsigned weight_units = 0;
    unsigned pointwise_units = 0;

    std::uint64_t predicted_first_ntt = 0;
    std::uint64_t predicted_first_mul = 0;
    std::uint64_t predicted_ntt_regs = 0;
    std::uint64_t predicted_mul_regs = 0;

    std::vector<StageReport> stages;
    std::vector<std::string> deviations;
    std::vector<StatedValue> stated_values;
};

std::string report_to_json(const CycleReport& report);

struct TraceRow
{
    std::uint64_t cycle = 0;
    std::string stage;
    bool sel = true;
    std::uint64_t counter = 0;
    bool emitted = false;
    std::uint32_t frame = 0;
    std::uint32_t lo_index = 0;
    std::uint32_t hi_index = 0;

    friend bool operator==(const TraceRow&, const TraceRow&) = default;
};

std::string trace_to_csv(std::span<const TraceRow> rows);

using OperandPair = std::pair<Polynomial, Polynomial>;

/// Streams operand pairs through the full multiplier, two coefficients of each
/// operand per cycle, frames back to back (plus `feed_gap`).
class Simulator
{
public:
    Simulator(NttParams params, PipelineConfig config);

    /// Runs every frame to completion and returns the products in input order.
    /// On a fault the trace recorded so far stays available.
    std::vector<Polynomial> run(std::span<const OperandPair> inputs);

    const CycleReport& report() const noexcept { return report_; }
    const std::vector<TraceRow>& trace() const noexcept { return trace_; }

private:
    NttParams params_;
    PipelineConfig config_;
    CycleReport report_;
    std::vector<TraceRow> trace_;
};

struct StreamResult
{
    std::vector<Polynomial> products;
    CycleReport report;
    std::vector<TraceRow> trace;
};

StreamResult run_stream(std::span<const OperandPair> inputs, const NttParams& params,
                        const PipelineConfig& config);

struct NttStreamResult
{
    /// Spectra in the pipeline's output order (bit-reversed).
    std::vector<Polynomial> spectra;
    std::uint64_t first_ntt_latency = 0;
    std::uint64_t steady_cycles_per_ntt = 0;
    std::vector<StageReport> stages;
    std::vector<TraceRow> trace;
};

/// A single forward pipeline fed directly, no weighting.
NttStreamResult run_forward_ntt(std::span<const Polynomial> inputs, const NttParams& params,
                                const PipelineConfig& config);

}  // namespace nttmul::sim
