#include "netfuzz/mapper.hpp"

#include <algorithm>

namespace netfuzz {

MatchIndex build_match_index(const CellLibrary& library)
{
    MatchIndex index;
    for (const auto& [name, cell] : library.cells) {
        if (cell.is_sequential()) {
            // only plain D flip-flops participate: next_state is exactly D
            const BoolExpr& next = cell.ff->next_state;
            if (next.op != BoolExpr::Op::var)
                continue;
            const PinDef* out = cell.output_pin();
            if (!out->function || out->function->op != BoolExpr::Op::var ||
                out->function->name != cell.ff->state_var)
                continue;
            index.dff_cells.push_back(
                {name, next.name, cell.ff->clocked_on, out->name, cell.area});
            continue;
        }
        auto inputs = cell.input_pins();
        if (inputs.size() > 6) {
            index.skipped.push_back(name);
            continue;
        }
        const PinDef* out = cell.output_pin();
        TruthTable table = truth_table(*out->function, inputs);
        CanonicalForm canon = canonical_form(table, static_cast<int>(inputs.size()));
        index.by_key[canon.key].push_back(
            {name, inputs, out->name, canon.perm, cell.area});
    }

    for (auto& [key, entries] : index.by_key) {
        std::sort(entries.begin(), entries.end(),
                  [](const MatchEntry& a, const MatchEntry& b) {
                      if (a.area != b.area)
                          return a.area < b.area;
                      return a.cell < b.cell;
                  });
    }
    std::sort(index.dff_cells.begin(), index.dff_cells.end(),
              [](const DffEntry& a, const DffEntry& b) {
                  if (a.area != b.area)
                      return a.area < b.area;
                  return a.cell < b.cell;
              });
    return index;
}

std::pair<Netlist, MappingReport> map_netlist(const Netlist& generic,
                                              const MatchIndex& index)
{
    Netlist mapped;
    mapped.name = generic.name;
    mapped.ports = generic.ports;
    mapped.nets = generic.nets;
    MappingReport report;

    auto use = [&](const std::string& cell, double area) {
        auto& entry = report.cells[cell];
        ++entry.count;
        entry.area += area;
        ++report.total_count;
        report.total_area += area;
    };

    for (const auto& inst : generic.instances) {
        if (!inst.is_generic())
            throw std::invalid_argument("map_netlist: instance " + inst.name +
                                        " is already a library cell");
        if (inst.gate == GateKind::dff_gate) {
            if (index.dff_cells.empty())
                throw NoMatchError("dff", "D flip-flop");
            const DffEntry& entry = index.dff_cells.front();
            Instance out;
            out.name = inst.name;
            out.cell = entry.cell;
            out.pins[entry.d_pin] = inst.pins.at("D");
            out.pins[entry.ck_pin] = inst.pins.at("CK");
            out.pins[entry.q_pin] = inst.pins.at("Q");
            mapped.instances.push_back(std::move(out));
            use(entry.cell, entry.area);
            continue;
        }

        const BoolExpr& fn = gate_function(*inst.gate);
        std::vector<std::string> gate_inputs;
        for (const auto& p : gate_pins(*inst.gate))
            if (p != gate_output_pin(*inst.gate))
                gate_inputs.push_back(p);

        TruthTable table = truth_table(fn, gate_inputs);
        CanonicalForm canon =
            canonical_form(table, static_cast<int>(gate_inputs.size()));
        const auto* entries = index.lookup(canon.key);
        if (!entries)
            throw NoMatchError(gate_name(*inst.gate), to_function_string(fn));
        const MatchEntry& entry = entries->front();

        // canonical slot k carries cell pin perm[k] and gate pin canon.perm[k];
        // those two pins are therefore the same variable
        Instance out;
        out.name = inst.name;
        out.cell = entry.cell;
        for (std::size_t k = 0; k < entry.perm.size(); ++k) {
            const std::string& cell_pin = entry.input_pins[entry.perm[k]];
            const std::string& gate_pin = gate_inputs[canon.perm[k]];
            out.pins[cell_pin] = inst.pins.at(gate_pin);
        }
        out.pins[entry.output_pin] = inst.pins.at(gate_output_pin(*inst.gate));
        mapped.instances.push_back(std::move(out));
        use(entry.cell, entry.area);
    }

    return {std::move(mapped), std::move(report)};
}

} // namespace netfuzz
