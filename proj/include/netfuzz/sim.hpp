#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "netfuzz/elaborate.hpp"
#include "netfuzz/netinput.hpp"
#include "netfuzz/truth_table.hpp"

namespace netfuzz {

/// Per-cycle three-valued waveform of monitored signals.
struct Trace {
    std::vector<std::string> signals;
    std::vector<std::vector<Logic>> frames;  // one row per cycle, |signals| entries

    std::size_t cycles() const { return frames.size(); }
    bool operator==(const Trace&) const = default;
};

/// Mergeable coverage accumulator keyed by instance name. pin_values holds a
/// 2-bit mask per (instance, input pin): bit0 = saw ZERO, bit1 = saw ONE.
struct CoverageMap {
    std::map<std::string, std::uint64_t> rise_count;
    std::map<std::string, std::uint64_t> fall_count;
    std::map<std::pair<std::string, std::string>, std::uint8_t> pin_values;

    void merge(const CoverageMap& other);

    /// True iff this delta contains a toggle direction or a pin value not yet
    /// present in `accumulated`.
    bool novel_vs(const CoverageMap& accumulated) const;

    bool operator==(const CoverageMap&) const = default;
};

struct ResetSpec {
    int cycles = 0;
    Logic active = Logic::one;
};

struct RunResult {
    Trace trace;
    CoverageMap coverage;  // delta for this run
};

/// Zero-delay, cycle-based, three-valued simulator over an elaborated
/// library-mapped (or generic-gate) netlist. One step() is one clock cycle:
/// inputs are driven, combinational logic settles in a single levelized
/// pass, coverage is sampled, then every flop captures and commits.
class Simulator {
public:
    Simulator(const ElaboratedDesign& design, const CellLibrary& library);

    /// Frame layout for step(): all non-clock input ports in declaration
    /// order, MSB first within each port.
    int step_frame_width() const { return step_frame_width_; }

    void set_reset(const ResetSpec& spec) { reset_ = spec; }
    const ResetSpec& reset() const { return reset_; }

    /// Return to the power-on state: all nets and flops X, cycle 0, empty
    /// run coverage.
    void reset_state();

    /// Hold reset active with all data inputs at ZERO for `cycles` clock
    /// cycles. Throws when the design has no reset port and cycles > 0.
    void apply_reset(Logic active, int cycles);

    /// Advance one clock cycle; returns the output-port bit values after the
    /// combinational settle (state commits afterwards).
    std::vector<Logic> step(std::span<const Logic> input_frame);

    /// Fresh-state execution of a NetInput: reset_state(), apply_reset() per
    /// the stored ResetSpec, then one step per frame. The trace covers the
    /// reset cycles too. Returns the coverage delta of this run.
    RunResult run(const NetInput& input, bool trace_all_nets = false);

    std::uint64_t cycle() const { return cycle_; }
    Logic net_value(std::string_view net) const;
    const std::vector<std::string>& output_signals() const { return output_signals_; }
    const CoverageMap& coverage() const { return coverage_; }

private:
    struct CompiledGate {
        int instance;
        int out_net;
        std::vector<int> leaf_nets;  // aligned with leaves of fn
        const BoolExpr* fn;
        std::vector<std::string> leaves;
        TruthTable table;  // 2^leaves entries
    };

    struct FlopSlot {
        int instance;
        int out_net;                  // net of the state-output pin
        const BoolExpr* out_fn;       // output pin function (over state var + inputs)
        std::vector<std::string> out_leaves;
        std::vector<int> out_leaf_nets;  // -1 marks the state variable itself
        const BoolExpr* next_fn;      // next-state function
        std::vector<std::string> next_leaves;
        std::vector<int> next_leaf_nets;
        Logic state = Logic::x;
        Logic pending = Logic::x;
    };

    struct PinWatch {
        int instance;
        std::string pin;
        int net;
    };

    void settle();
    void update_coverage();
    Logic eval_gate(const CompiledGate& g) const;
    Logic eval_with_leaves(const BoolExpr& fn, const std::vector<std::string>& leaves,
                           const std::vector<int>& leaf_nets, Logic state_value) const;

    const ElaboratedDesign& design_;
    const CellLibrary& library_;
    ResetSpec reset_;

    std::vector<Logic> values_;      // by net id
    std::vector<CompiledGate> gates_;  // topo order
    std::vector<FlopSlot> flops_;
    std::vector<PinWatch> watched_pins_;
    std::vector<Logic> prev_out_;    // per instance, last sampled output value
    std::vector<int> out_net_of_;    // per instance, -1 if none

    std::vector<int> output_nets_;   // output-port bits, port order MSB-first
    std::vector<std::string> output_signals_;
    std::vector<std::pair<int, int>> frame_slots_;  // (net id, port role) per frame bit
    int step_frame_width_ = 0;
    int clock_net_ = -1;
    int reset_net_ = -1;
    int reset_frame_bit_ = -1;

    std::uint64_t cycle_ = 0;
    CoverageMap coverage_;
};

/// Human/CI-facing summary computed from a coverage map.
struct CoverageReport {
    int total_instances = 0;
    int toggled_instances = 0;   // rise AND fall observed
    double toggle_pct = 0.0;
    int total_pins = 0;
    int covered_pins = 0;        // both values observed
    double pin_pct = 0.0;
    std::vector<std::string> uncovered_instances;
    struct StuckPin {
        std::string instance;
        std::string pin;
        std::string observed;  // "", "0" or "1"
    };
    std::vector<StuckPin> stuck_pins;
};

CoverageReport coverage_report(const CoverageMap& map, const ElaboratedDesign& design,
                               const CellLibrary* library);

} // namespace netfuzz
