#include "netfuzz/diff.hpp"

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

namespace netfuzz {

std::optional<Divergence> compare_traces(const Trace& reference, const Trace& dut,
                                         const ComparePolicy& policy)
{
    if (reference.signals != dut.signals)
        throw std::invalid_argument("compare_traces: signal lists differ");
    if (reference.frames.size() != dut.frames.size())
        throw std::invalid_argument("compare_traces: cycle counts differ (" +
                                    std::to_string(reference.frames.size()) + " vs " +
                                    std::to_string(dut.frames.size()) + ")");

    auto differs = [&](Logic ref, Logic out) {
        if (policy.x_handling == XHandling::reference_wildcard && ref == Logic::x)
            return false;
        return ref != out;
    };

    for (std::size_t cycle = static_cast<std::size_t>(std::max(policy.skip_cycles, 0));
         cycle < reference.frames.size(); ++cycle) {
        Divergence div;
        for (std::size_t i = 0; i < reference.signals.size(); ++i) {
            Logic r = reference.frames[cycle][i];
            Logic d = dut.frames[cycle][i];
            if (differs(r, d))
                div.signals.push_back({reference.signals[i], r, d});
        }
        if (!div.signals.empty()) {
            div.cycle = static_cast<int>(cycle);
            return div;
        }
    }
    return std::nullopt;
}

BuiltInSimExec::BuiltInSimExec(std::string id, ElaboratedDesign design,
                               CellLibrary library, ResetSpec reset)
    : id_(std::move(id)),
      design_(std::make_shared<const ElaboratedDesign>(std::move(design))),
      library_(std::make_shared<const CellLibrary>(std::move(library))),
      layout_(derive_layout(design_->netlist)),
      sim_(*design_, *library_)
{
    sim_.set_reset(reset);
}

BuiltInSimExec::BuiltInSimExec(const BuiltInSimExec& other)
    : id_(other.id_), design_(other.design_), library_(other.library_),
      layout_(other.layout_), sim_(*design_, *library_)
{
    sim_.set_reset(other.sim_.reset());
}

std::unique_ptr<ExecutableDesign> BuiltInSimExec::clone() const
{
    return std::unique_ptr<ExecutableDesign>(new BuiltInSimExec(*this));
}

Trace BuiltInSimExec::run(const NetInput& input)
{
    RunResult result = sim_.run(input);
    coverage_ = std::move(result.coverage);
    return std::move(result.trace);
}

const std::vector<std::string>& BuiltInSimExec::signals() const
{
    return sim_.output_signals();
}

GenericInterpExec::GenericInterpExec(std::string id, Netlist netlist, ResetSpec reset)
    : id_(std::move(id)), netlist_(std::move(netlist)), reset_(reset),
      layout_(derive_layout(netlist_))
{
    for (const auto& inst : netlist_.instances)
        if (!inst.is_generic())
            throw std::invalid_argument(
                "generic interpreter needs a generic-gate netlist; instance " +
                inst.name + " is a library cell");
    for (const auto& port : netlist_.ports)
        if (port.direction == PortDir::output)
            for (const auto& bit : port.bit_nets())
                signals_.push_back(bit);
}

namespace {

Logic interp_gate(GateKind kind, const std::map<std::string, Logic>& nets,
                  const Instance& inst)
{
    auto in = [&](const char* pin) { return nets.at(inst.pins.at(pin)); };
    switch (kind) {
    case GateKind::and_gate: return logic_and(in("A"), in("B"));
    case GateKind::or_gate: return logic_or(in("A"), in("B"));
    case GateKind::nand_gate: return logic_not(logic_and(in("A"), in("B")));
    case GateKind::nor_gate: return logic_not(logic_or(in("A"), in("B")));
    case GateKind::xor_gate: return logic_xor(in("A"), in("B"));
    case GateKind::xnor_gate: return logic_not(logic_xor(in("A"), in("B")));
    case GateKind::not_gate: return logic_not(in("A"));
    case GateKind::buf_gate: return in("A");
    case GateKind::mux2_gate: {
        Logic s = in("S");
        return logic_or(logic_and(in("A"), logic_not(s)), logic_and(in("B"), s));
    }
    case GateKind::const0_gate: return Logic::zero;
    case GateKind::const1_gate: return Logic::one;
    case GateKind::dff_gate: break;
    }
    throw std::logic_error("interp_gate: not a combinational gate");
}

} // namespace

void GenericInterpExec::step_frame(const std::vector<Logic>& frame_values,
                                   std::map<std::string, Logic>& nets,
                                   std::map<std::string, Logic>& state) const
{
    // drive inputs
    std::size_t src = 0;
    for (const auto& port : netlist_.ports) {
        if (port.direction != PortDir::input)
            continue;
        for (const auto& bit : port.bit_nets()) {
            if (port.role == PortRole::clock)
                nets[bit] = Logic::zero;
            else
                nets[bit] = frame_values[src++];
        }
    }

    // flop outputs reflect the current state during the settle
    for (const auto& inst : netlist_.instances)
        if (inst.gate == GateKind::dff_gate)
            nets[inst.pins.at("Q")] = state[inst.name];

    // sweep until stable
    for (std::size_t round = 0; round <= netlist_.instances.size() + 1; ++round) {
        bool changed = false;
        for (const auto& inst : netlist_.instances) {
            if (inst.gate == GateKind::dff_gate)
                continue;
            Logic v = interp_gate(*inst.gate, nets, inst);
            Logic& slot = nets[inst.pins.at(gate_output_pin(*inst.gate))];
            if (slot != v) {
                slot = v;
                changed = true;
            }
        }
        if (!changed)
            break;
    }

    // capture then commit
    std::map<std::string, Logic> next;
    for (const auto& inst : netlist_.instances)
        if (inst.gate == GateKind::dff_gate)
            next[inst.name] = nets.at(inst.pins.at("D"));
    for (auto& [name, v] : next)
        state[name] = v;
}

Trace GenericInterpExec::run(const NetInput& input)
{
    if (input.frame_width != layout_.frame_width)
        throw std::invalid_argument("NetInput width does not match design layout");

    std::map<std::string, Logic> nets;
    for (const auto& n : netlist_.nets)
        nets[n] = Logic::x;
    std::map<std::string, Logic> state;
    for (const auto& inst : netlist_.instances)
        if (inst.gate == GateKind::dff_gate)
            state[inst.name] = Logic::x;

    // frame order over non-clock input ports: reset slot plus data bits
    std::vector<int> is_reset_slot;
    for (const auto& port : netlist_.ports) {
        if (port.direction != PortDir::input || port.role == PortRole::clock)
            continue;
        for (int i = 0; i < port.width; ++i)
            is_reset_slot.push_back(port.role == PortRole::reset ? 1 : 0);
    }

    Trace trace;
    trace.signals = signals_;
    auto record = [&]() {
        std::vector<Logic> row;
        row.reserve(signals_.size());
        for (const auto& s : signals_)
            row.push_back(nets.at(s));
        trace.frames.push_back(std::move(row));
    };

    bool has_reset = false;
    for (int flag : is_reset_slot)
        has_reset |= flag == 1;
    if (reset_.cycles > 0 && !has_reset)
        throw std::invalid_argument("design has no reset port but reset cycles > 0");

    std::vector<Logic> frame(is_reset_slot.size(), Logic::zero);
    for (int c = 0; c < reset_.cycles; ++c) {
        for (std::size_t i = 0; i < frame.size(); ++i)
            frame[i] = is_reset_slot[i] ? reset_.active : Logic::zero;
        step_frame(frame, nets, state);
        record();
    }
    for (const auto& bits : input.frames) {
        std::size_t src = 0;
        for (std::size_t i = 0; i < frame.size(); ++i) {
            if (is_reset_slot[i])
                frame[i] = logic_not(reset_.active);
            else
                frame[i] = logic_from_bit(bits[src++]);
        }
        step_frame(frame, nets, state);
        record();
    }
    return trace;
}

ExternalProcessExec::ExternalProcessExec(
    std::string id, std::string command_template,
    std::vector<std::pair<std::string, std::string>> signal_map, PortLayout layout,
    std::uint64_t cycle_period)
    : id_(std::move(id)), command_template_(std::move(command_template)),
      signal_map_(std::move(signal_map)), layout_(std::move(layout)),
      cycle_period_(cycle_period)
{
    for (const auto& [ref, signal] : signal_map_)
        signals_.push_back(signal);
}

namespace {

std::string substitute(const std::string& tmpl, const std::string& key,
                       const std::string& value)
{
    std::string out = tmpl;
    std::size_t pos = 0;
    while ((pos = out.find(key, pos)) != std::string::npos) {
        out.replace(pos, key.size(), value);
        pos += value.size();
    }
    return out;
}

std::string read_file_or_empty(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        return {};
    std::ostringstream body;
    body << in.rdbuf();
    return body.str();
}

} // namespace

Trace ExternalProcessExec::run(const NetInput& input)
{
    static std::atomic<std::uint64_t> counter{0};
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() /
                   ("netfuzz_ext_" + std::to_string(::getpid()) + "_" +
                    std::to_string(counter.fetch_add(1)));
    fs::create_directories(dir);
    fs::path stimulus = dir / "stimulus.txt";
    fs::path vcd_path = dir / "out.vcd";
    fs::path stderr_path = dir / "stderr.txt";

    {
        std::ofstream out(stimulus);
        out << frames_to_text(input);
    }

    std::string command = substitute(command_template_, "{stimulus}", stimulus.string());
    command = substitute(command, "{vcd}", vcd_path.string());
    command += " 2>" + stderr_path.string();

    int rc = std::system(command.c_str());
    std::string err = read_file_or_empty(stderr_path);
    if (rc != 0)
        throw ExecutableFailure("external simulator exited with status " +
                                    std::to_string(rc) + ": " + command_template_,
                                err);
    if (!fs::exists(vcd_path))
        throw ExecutableFailure("external simulator produced no VCD file", err);

    std::string vcd_text = read_file_or_empty(vcd_path);
    Trace trace = parse_vcd(vcd_text, signal_map_, cycle_period_);
    fs::remove_all(dir);
    return trace;
}

namespace {

bool pair_admitted(PairingMode mode, const DiffSource& a, const DiffSource& b)
{
    switch (mode) {
    case PairingMode::intra_tool_inter_lib:
        return a.tool == b.tool && a.lib_tag != b.lib_tag;
    case PairingMode::inter_tool_intra_lib:
        return a.tool != b.tool && a.lib_tag == b.lib_tag;
    case PairingMode::inter_tool_inter_lib:
        return a.tool != b.tool && a.lib_tag != b.lib_tag;
    case PairingMode::all_pairs:
        return true;
    }
    return false;
}

} // namespace

DiffMatrix run_difflib(const DiffConfig& config, const std::vector<NetInput>& inputs)
{
    if (config.sources.size() < 2)
        throw std::invalid_argument("difflib needs at least two sources");
    const PortLayout& layout = config.sources.front().executable->layout();
    for (const auto& src : config.sources)
        if (!(src.executable->layout() == layout))
            throw std::invalid_argument("difflib sources have incompatible layouts");
    if (config.reference && !(config.reference->layout() == layout))
        throw std::invalid_argument("difflib reference has an incompatible layout");

    DiffMatrix matrix;
    bool any_pair = false;
    for (std::size_t a = 0; a < config.sources.size(); ++a) {
        for (std::size_t b = a + 1; b < config.sources.size(); ++b) {
            if (!pair_admitted(config.mode, config.sources[a], config.sources[b]))
                continue;
            any_pair = true;
            DiffCell cell;
            cell.a = a;
            cell.b = b;
            for (std::size_t i = 0; i < inputs.size(); ++i) {
                const NetInput& input = inputs[i];
                ++cell.inputs_run;
                std::optional<Divergence> div;
                std::string ref_id;
                std::string dut_id;
                if (config.reference) {
                    Trace golden = config.reference->run(input);
                    Trace ta = config.sources[a].executable->run(input);
                    Trace tb = config.sources[b].executable->run(input);
                    auto da = compare_traces(golden, ta, config.policy);
                    auto db = compare_traces(golden, tb, config.policy);
                    ref_id = config.reference->id();
                    if (da) {
                        div = da;
                        dut_id = config.sources[a].executable->id();
                    } else if (db) {
                        div = db;
                        dut_id = config.sources[b].executable->id();
                    }
                } else {
                    Trace ta = config.sources[a].executable->run(input);
                    Trace tb = config.sources[b].executable->run(input);
                    div = compare_traces(ta, tb, config.policy);
                    ref_id = config.sources[a].executable->id();
                    dut_id = config.sources[b].executable->id();
                }
                if (div) {
                    ++cell.divergences;
                    if (!cell.first_bug) {
                        BugReport bug;
                        bug.input = input;
                        bug.first_divergence_cycle = div->cycle;
                        bug.signals = div->signals;
                        bug.dut_id = dut_id;
                        bug.reference_id = ref_id;
                        bug.iteration = i;
                        cell.first_bug = std::move(bug);
                    }
                }
            }
            matrix.cells.push_back(std::move(cell));
        }
    }
    if (!any_pair)
        throw std::invalid_argument(
            "pairing mode admits no source pair (check tool/library tags)");
    return matrix;
}

} // namespace netfuzz
