#include "netfuzz/sim.hpp"

#include <algorithm>
#include <stdexcept>

namespace netfuzz {

void CoverageMap::merge(const CoverageMap& other)
{
    for (const auto& [k, v] : other.rise_count)
        rise_count[k] += v;
    for (const auto& [k, v] : other.fall_count)
        fall_count[k] += v;
    for (const auto& [k, v] : other.pin_values)
        pin_values[k] |= v;
}

bool CoverageMap::novel_vs(const CoverageMap& accumulated) const
{
    auto nonzero = [](const std::map<std::string, std::uint64_t>& m,
                      const std::string& k) {
        auto it = m.find(k);
        return it != m.end() && it->second > 0;
    };
    for (const auto& [k, v] : rise_count)
        if (v > 0 && !nonzero(accumulated.rise_count, k))
            return true;
    for (const auto& [k, v] : fall_count)
        if (v > 0 && !nonzero(accumulated.fall_count, k))
            return true;
    for (const auto& [k, v] : pin_values) {
        std::uint8_t seen = 0;
        auto it = accumulated.pin_values.find(k);
        if (it != accumulated.pin_values.end())
            seen = it->second;
        if (v & ~seen)
            return true;
    }
    return false;
}

namespace {

ElaborationError unknown_cell_error(const std::string& cell, const std::string& inst)
{
    return ElaborationError({{FindingKind::unknown_cell,
                              cell,
                              {inst},
                              "simulation library does not define cell " + cell}});
}

} // namespace

Simulator::Simulator(const ElaboratedDesign& design, const CellLibrary& library)
    : design_(design), library_(library)
{
    const Netlist& nl = design.netlist;
    values_.assign(nl.nets.size(), Logic::x);
    prev_out_.assign(nl.instances.size(), Logic::x);
    out_net_of_.assign(nl.instances.size(), -1);

    // frame layout and clock/reset bookkeeping
    for (const auto& port : nl.ports) {
        if (port.direction != PortDir::input)
            continue;
        if (port.role == PortRole::clock) {
            clock_net_ = design.net_id(port.bit_nets()[0]);
            continue;
        }
        for (const auto& bit : port.bit_nets()) {
            if (port.role == PortRole::reset) {
                reset_net_ = design.net_id(bit);
                reset_frame_bit_ = step_frame_width_;
            }
            frame_slots_.emplace_back(design.net_id(bit), static_cast<int>(port.role));
            ++step_frame_width_;
        }
    }

    for (const auto& port : nl.ports) {
        if (port.direction != PortDir::output)
            continue;
        for (const auto& bit : port.bit_nets()) {
            output_nets_.push_back(design.net_id(bit));
            output_signals_.push_back(bit);
        }
    }

    // compile combinational instances in topological order
    for (int idx : design.topo_order) {
        const Instance& inst = nl.instances[idx];
        CompiledGate g;
        g.instance = idx;
        if (inst.is_generic()) {
            g.fn = &gate_function(*inst.gate);
            g.out_net = design.net_id(inst.pins.at(gate_output_pin(*inst.gate)));
        } else {
            const CellDef* cell = library.find(inst.cell);
            if (!cell)
                throw unknown_cell_error(inst.cell, inst.name);
            const PinDef* out = cell->output_pin();
            const std::string* out_net = inst.net_on(out->name);
            if (!out_net)
                throw ElaborationError({{FindingKind::pin_mismatch,
                                         inst.name,
                                         {out->name},
                                         "instance " + inst.name + " does not connect " +
                                             out->name + " of cell " + inst.cell}});
            g.fn = &*out->function;
            g.out_net = design.net_id(*out_net);
        }
        g.leaves = expr_variables(*g.fn);
        for (const auto& leaf : g.leaves) {
            const std::string* net = inst.net_on(leaf);
            if (!net)
                throw ElaborationError({{FindingKind::pin_mismatch,
                                         inst.name,
                                         {leaf},
                                         "instance " + inst.name +
                                             " does not connect pin " + leaf}});
            g.leaf_nets.push_back(design.net_id(*net));
        }
        if (g.leaves.size() <= 8)
            g.table = truth_table(*g.fn, g.leaves);
        out_net_of_[idx] = g.out_net;
        gates_.push_back(std::move(g));
    }

    // sequential instances
    for (int idx : design.state_elements) {
        const Instance& inst = nl.instances[idx];
        FlopSlot slot;
        slot.instance = idx;
        std::string state_var;
        if (inst.is_generic()) {
            static const BoolExpr q_fn = BoolExpr::variable("IQ");
            static const BoolExpr d_fn = BoolExpr::variable("D");
            state_var = "IQ";
            slot.out_fn = &q_fn;
            slot.next_fn = &d_fn;
            slot.out_net = design.net_id(inst.pins.at("Q"));
        } else {
            const CellDef* cell = library.find(inst.cell);
            if (!cell)
                throw unknown_cell_error(inst.cell, inst.name);
            if (!cell->ff)
                throw ElaborationError(
                    {{FindingKind::pin_mismatch,
                      inst.name,
                      {},
                      "instance " + inst.name + " was elaborated as sequential but cell " +
                          inst.cell + " has no ff group in the simulation library"}});
            state_var = cell->ff->state_var;
            const PinDef* out = cell->output_pin();
            slot.out_fn = &*out->function;
            slot.next_fn = &cell->ff->next_state;
            slot.out_net = design.net_id(*inst.net_on(out->name));
        }
        auto bind = [&](const BoolExpr& fn, std::vector<std::string>& leaves,
                        std::vector<int>& nets) {
            leaves = expr_variables(fn);
            for (const auto& leaf : leaves) {
                if (leaf == state_var) {
                    nets.push_back(-1);
                    continue;
                }
                const std::string* net = inst.net_on(leaf);
                if (!net)
                    throw ElaborationError({{FindingKind::pin_mismatch,
                                             inst.name,
                                             {leaf},
                                             "instance " + inst.name +
                                                 " does not connect pin " + leaf}});
                nets.push_back(design.net_id(*net));
            }
        };
        bind(*slot.out_fn, slot.out_leaves, slot.out_leaf_nets);
        bind(*slot.next_fn, slot.next_leaves, slot.next_leaf_nets);
        out_net_of_[idx] = slot.out_net;
        flops_.push_back(std::move(slot));
    }

    // expression-coverage watch list: input pins of every instance, except
    // pins on the clock net and the flop clock pin (a step is a clock cycle,
    // the clock itself is implicit)
    for (std::size_t idx = 0; idx < nl.instances.size(); ++idx) {
        const Instance& inst = nl.instances[idx];
        std::string clock_pin;
        std::vector<std::string> inputs;
        if (inst.is_generic()) {
            const auto& pins = gate_pins(*inst.gate);
            for (const auto& p : pins)
                if (p != gate_output_pin(*inst.gate))
                    inputs.push_back(p);
            if (inst.gate == GateKind::dff_gate)
                clock_pin = "CK";
        } else {
            const CellDef* cell = library.find(inst.cell);
            if (!cell)
                throw unknown_cell_error(inst.cell, inst.name);
            inputs = cell->input_pins();
            if (cell->ff)
                clock_pin = cell->ff->clocked_on;
        }
        for (const auto& pin : inputs) {
            if (pin == clock_pin)
                continue;
            const std::string* net = inst.net_on(pin);
            if (!net)
                continue;
            int id = design.net_id(*net);
            if (id == clock_net_)
                continue;
            watched_pins_.push_back({static_cast<int>(idx), pin, id});
        }
    }
}

void Simulator::reset_state()
{
    std::fill(values_.begin(), values_.end(), Logic::x);
    for (auto& f : flops_) {
        f.state = Logic::x;
        f.pending = Logic::x;
    }
    std::fill(prev_out_.begin(), prev_out_.end(), Logic::x);
    cycle_ = 0;
    coverage_ = CoverageMap{};
}

Logic Simulator::eval_with_leaves(const BoolExpr& fn,
                                  const std::vector<std::string>& leaves,
                                  const std::vector<int>& leaf_nets,
                                  Logic state_value) const
{
    std::map<std::string, Logic> binding;
    for (std::size_t i = 0; i < leaves.size(); ++i)
        binding[leaves[i]] = leaf_nets[i] < 0 ? state_value : values_[leaf_nets[i]];
    return eval_function(fn, binding);
}

Logic Simulator::eval_gate(const CompiledGate& g) const
{
    std::size_t index = 0;
    bool defined = true;
    for (std::size_t k = 0; k < g.leaf_nets.size(); ++k) {
        Logic v = values_[g.leaf_nets[k]];
        if (v == Logic::x) {
            defined = false;
            break;
        }
        if (v == Logic::one)
            index |= std::size_t{1} << k;
    }
    if (defined && !g.table.empty())
        return logic_from_bit(g.table[index]);
    return eval_with_leaves(*g.fn, g.leaves, g.leaf_nets, Logic::x);
}

void Simulator::settle()
{
    for (const auto& f : flops_)
        values_[f.out_net] = eval_with_leaves(*f.out_fn, f.out_leaves, f.out_leaf_nets,
                                              f.state);
    for (const auto& g : gates_)
        values_[g.out_net] = eval_gate(g);
}

void Simulator::update_coverage()
{
    for (std::size_t idx = 0; idx < out_net_of_.size(); ++idx) {
        int net = out_net_of_[idx];
        if (net < 0)
            continue;
        Logic now = values_[net];
        Logic before = prev_out_[idx];
        if (before == Logic::zero && now == Logic::one)
            ++coverage_.rise_count[design_.netlist.instances[idx].name];
        else if (before == Logic::one && now == Logic::zero)
            ++coverage_.fall_count[design_.netlist.instances[idx].name];
        prev_out_[idx] = now;
    }
    for (const auto& w : watched_pins_) {
        Logic v = values_[w.net];
        if (v == Logic::x)
            continue;
        coverage_.pin_values[{design_.netlist.instances[w.instance].name, w.pin}] |=
            v == Logic::zero ? 1 : 2;
    }
}

std::vector<Logic> Simulator::step(std::span<const Logic> input_frame)
{
    if (static_cast<int>(input_frame.size()) != step_frame_width_)
        throw std::invalid_argument("step frame has " +
                                    std::to_string(input_frame.size()) + " bits, expected " +
                                    std::to_string(step_frame_width_));
    for (int i = 0; i < step_frame_width_; ++i)
        values_[frame_slots_[i].first] = input_frame[i];
    if (clock_net_ >= 0)
        values_[clock_net_] = Logic::zero;

    settle();

    std::vector<Logic> outputs;
    outputs.reserve(output_nets_.size());
    for (int net : output_nets_)
        outputs.push_back(values_[net]);

    update_coverage();

    for (auto& f : flops_)
        f.pending = eval_with_leaves(*f.next_fn, f.next_leaves, f.next_leaf_nets,
                                     f.state);
    for (auto& f : flops_)
        f.state = f.pending;
    ++cycle_;
    return outputs;
}

void Simulator::apply_reset(Logic active, int cycles)
{
    if (cycles == 0)
        return;
    if (cycles < 0)
        throw std::invalid_argument("negative reset cycle count");
    if (reset_net_ < 0)
        throw std::invalid_argument("design has no reset port but reset cycles > 0");
    std::vector<Logic> frame(step_frame_width_, Logic::zero);
    frame[reset_frame_bit_] = active;
    for (int i = 0; i < cycles; ++i)
        step(frame);
}

RunResult Simulator::run(const NetInput& input, bool trace_all_nets)
{
    // data-port layout (reset excluded) must match the input
    int data_bits = 0;
    for (const auto& [net, role] : frame_slots_)
        if (role == static_cast<int>(PortRole::data))
            ++data_bits;
    if (input.frame_width != data_bits)
        throw std::invalid_argument("NetInput width " + std::to_string(input.frame_width) +
                                    " does not match design layout width " +
                                    std::to_string(data_bits));

    reset_state();

    RunResult result;
    if (trace_all_nets)
        result.trace.signals = design_.netlist.nets;
    else
        result.trace.signals = output_signals_;

    auto record = [&]() {
        std::vector<Logic> row;
        if (trace_all_nets) {
            row = values_;
        } else {
            row.reserve(output_nets_.size());
            for (int net : output_nets_)
                row.push_back(values_[net]);
        }
        result.trace.frames.push_back(std::move(row));
    };

    if (reset_.cycles > 0) {
        if (reset_net_ < 0)
            throw std::invalid_argument("design has no reset port but reset cycles > 0");
        std::vector<Logic> frame(step_frame_width_, Logic::zero);
        frame[reset_frame_bit_] = reset_.active;
        for (int i = 0; i < reset_.cycles; ++i) {
            step(frame);
            record();
        }
    }

    std::vector<Logic> frame(step_frame_width_, Logic::zero);
    for (const auto& in_frame : input.frames) {
        int src = 0;
        for (int i = 0; i < step_frame_width_; ++i) {
            if (frame_slots_[i].second == static_cast<int>(PortRole::reset))
                frame[i] = logic_not(reset_.active);
            else
                frame[i] = logic_from_bit(in_frame[src++]);
        }
        step(frame);
        record();
    }

    result.coverage = coverage_;
    return result;
}

Logic Simulator::net_value(std::string_view net) const
{
    int id = design_.net_id(net);
    if (id < 0)
        throw std::out_of_range("no such net: " + std::string(net));
    return values_[id];
}

CoverageReport coverage_report(const CoverageMap& map, const ElaboratedDesign& design,
                               const CellLibrary* library)
{
    CoverageReport report;
    const Netlist& nl = design.netlist;
    report.total_instances = static_cast<int>(nl.instances.size());

    int clock_net = -1;
    for (const auto& port : nl.ports)
        if (port.role == PortRole::clock)
            clock_net = design.net_id(port.bit_nets()[0]);

    auto count = [](const std::map<std::string, std::uint64_t>& m,
                    const std::string& k) -> std::uint64_t {
        auto it = m.find(k);
        return it == m.end() ? 0 : it->second;
    };

    for (const auto& inst : nl.instances) {
        bool toggled = count(map.rise_count, inst.name) > 0 &&
                       count(map.fall_count, inst.name) > 0;
        if (toggled)
            ++report.toggled_instances;
        else
            report.uncovered_instances.push_back(inst.name);

        std::string clock_pin;
        std::vector<std::string> inputs;
        if (inst.is_generic()) {
            for (const auto& p : gate_pins(*inst.gate))
                if (p != gate_output_pin(*inst.gate))
                    inputs.push_back(p);
            if (inst.gate == GateKind::dff_gate)
                clock_pin = "CK";
        } else if (library) {
            const CellDef* cell = library->find(inst.cell);
            if (!cell)
                continue;
            inputs = cell->input_pins();
            if (cell->ff)
                clock_pin = cell->ff->clocked_on;
        } else {
            continue;
        }
        for (const auto& pin : inputs) {
            if (pin == clock_pin)
                continue;
            const std::string* net = inst.net_on(pin);
            if (net && clock_net >= 0 && design.net_id(*net) == clock_net)
                continue;
            ++report.total_pins;
            std::uint8_t seen = 0;
            auto it = map.pin_values.find({inst.name, pin});
            if (it != map.pin_values.end())
                seen = it->second;
            if (seen == 3) {
                ++report.covered_pins;
            } else {
                std::string observed = seen == 1 ? "0" : seen == 2 ? "1" : "";
                report.stuck_pins.push_back({inst.name, pin, observed});
            }
        }
    }

    report.toggle_pct = report.total_instances
                            ? 100.0 * report.toggled_instances / report.total_instances
                            : 100.0;
    report.pin_pct =
        report.total_pins ? 100.0 * report.covered_pins / report.total_pins : 100.0;
    return report;
}

} // namespace netfuzz
