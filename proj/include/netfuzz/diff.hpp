#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "netfuzz/sim.hpp"
#include "netfuzz/vcd.hpp"

namespace netfuzz {

enum class XHandling : std::uint8_t {
    strict,             // X differs from 0/1 (X matches X)
    reference_wildcard  // an X in the reference matches anything
};

enum class SignalSet : std::uint8_t { outputs_only, outputs_and_registers };

struct ComparePolicy {
    SignalSet signals = SignalSet::outputs_only;
    XHandling x_handling = XHandling::reference_wildcard;
    int skip_cycles = 0;
};

struct DivergingSignal {
    std::string name;
    Logic reference;
    Logic dut;
};

struct Divergence {
    int cycle = 0;
    std::vector<DivergingSignal> signals;
};

/// Earliest cycle >= skip_cycles where any signal differs under the policy's
/// X handling. Throws on signal-list or cycle-count mismatch.
std::optional<Divergence> compare_traces(const Trace& reference, const Trace& dut,
                                         const ComparePolicy& policy);

struct BugReport {
    NetInput input;
    int first_divergence_cycle = 0;
    std::vector<DivergingSignal> signals;
    std::string dut_id;
    std::string reference_id;
    std::uint64_t iteration = 0;
};

/// Anything that can execute a NetInput into a Trace: the built-in netlist
/// simulator, the generic-gate interpreter playing the golden-model role, or
/// an external simulator bridged through stimulus files and VCD.
class ExecutableDesign {
public:
    virtual ~ExecutableDesign() = default;

    virtual Trace run(const NetInput& input) = 0;
    virtual const PortLayout& layout() const = 0;
    virtual const std::vector<std::string>& signals() const = 0;
    virtual const std::string& id() const = 0;

    /// Coverage delta of the most recent run, when this executable is
    /// instrumented (only the built-in simulator is).
    virtual const CoverageMap* last_coverage() const { return nullptr; }

    /// Independent copy for a fuzzing worker; run() state is not shared.
    virtual std::unique_ptr<ExecutableDesign> clone() const = 0;
};

/// Library-mapped (or generic) netlist on the instrumented simulator.
class BuiltInSimExec : public ExecutableDesign {
public:
    BuiltInSimExec(std::string id, ElaboratedDesign design, CellLibrary library,
                   ResetSpec reset);

    Trace run(const NetInput& input) override;
    const PortLayout& layout() const override { return layout_; }
    const std::vector<std::string>& signals() const override;
    const std::string& id() const override { return id_; }
    const CoverageMap* last_coverage() const override { return &coverage_; }
    std::unique_ptr<ExecutableDesign> clone() const override;
    const ElaboratedDesign& design() const { return *design_; }
    const CellLibrary& library() const { return *library_; }

private:
    BuiltInSimExec(const BuiltInSimExec& other);

    std::string id_;
    std::shared_ptr<const ElaboratedDesign> design_;
    std::shared_ptr<const CellLibrary> library_;
    PortLayout layout_;
    Simulator sim_;
    CoverageMap coverage_;
};

/// Reference interpreter over a generic-gate netlist. Independent of the
/// instrumented simulator: no elaboration, no compiled functions, just
/// repeated sweeps until the net values stabilize.
class GenericInterpExec : public ExecutableDesign {
public:
    GenericInterpExec(std::string id, Netlist netlist, ResetSpec reset);

    Trace run(const NetInput& input) override;
    const PortLayout& layout() const override { return layout_; }
    const std::vector<std::string>& signals() const override { return signals_; }
    const std::string& id() const override { return id_; }
    std::unique_ptr<ExecutableDesign> clone() const override
    {
        return std::make_unique<GenericInterpExec>(*this);
    }

private:
    void step_frame(const std::vector<Logic>& frame_values,
                    std::map<std::string, Logic>& nets,
                    std::map<std::string, Logic>& state) const;

    std::string id_;
    Netlist netlist_;
    ResetSpec reset_;
    PortLayout layout_;
    std::vector<std::string> signals_;
};

/// External simulator adapter: writes the stimulus file, runs the command
/// template ({stimulus} and {vcd} placeholders), parses the produced VCD.
class ExternalProcessExec : public ExecutableDesign {
public:
    ExternalProcessExec(std::string id, std::string command_template,
                        std::vector<std::pair<std::string, std::string>> signal_map,
                        PortLayout layout, std::uint64_t cycle_period = 10);

    Trace run(const NetInput& input) override;
    const PortLayout& layout() const override { return layout_; }
    const std::vector<std::string>& signals() const override { return signals_; }
    const std::string& id() const override { return id_; }
    std::unique_ptr<ExecutableDesign> clone() const override
    {
        return std::make_unique<ExternalProcessExec>(*this);
    }

private:
    std::string id_;
    std::string command_template_;
    std::vector<std::pair<std::string, std::string>> signal_map_;
    PortLayout layout_;
    std::vector<std::string> signals_;
    std::uint64_t cycle_period_;
};

class ExecutableFailure : public std::runtime_error {
public:
    ExecutableFailure(const std::string& message, std::string stderr_text = {})
        : std::runtime_error(message), stderr_text_(std::move(stderr_text))
    {
    }
    const std::string& stderr_text() const { return stderr_text_; }

private:
    std::string stderr_text_;
};

enum class PairingMode : std::uint8_t {
    intra_tool_inter_lib,
    inter_tool_intra_lib,
    inter_tool_inter_lib,
    all_pairs
};

struct DiffSource {
    std::string tool;      // opaque tool tag
    std::string lib_tag;   // opaque library tag
    std::shared_ptr<ExecutableDesign> executable;
};

struct DiffConfig {
    std::vector<DiffSource> sources;
    PairingMode mode = PairingMode::all_pairs;
    std::shared_ptr<ExecutableDesign> reference;  // optional golden model
    ComparePolicy policy;
};

struct DiffCell {
    std::size_t a = 0;  // indices into DiffConfig::sources
    std::size_t b = 0;
    std::uint64_t inputs_run = 0;
    std::uint64_t divergences = 0;
    std::optional<BugReport> first_bug;
};

struct DiffMatrix {
    std::vector<DiffCell> cells;
};

/// Replay the shared inputs over every source pair admitted by the pairing
/// mode. With a reference model, each side is compared solely against the
/// reference trace; otherwise the pair is compared head-to-head (first
/// source acting as the reference side).
DiffMatrix run_difflib(const DiffConfig& config, const std::vector<NetInput>& inputs);

} // namespace netfuzz
