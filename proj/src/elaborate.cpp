#include "netfuzz/elaborate.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

namespace netfuzz {

const char* finding_kind_name(FindingKind kind)
{
    switch (kind) {
    case FindingKind::multiple_driver: return "MultipleDriver";
    case FindingKind::undriven_net: return "UndrivenNet";
    case FindingKind::combinational_loop: return "CombinationalLoop";
    case FindingKind::unknown_cell: return "UnknownCell";
    case FindingKind::pin_mismatch: return "PinMismatch";
    }
    return "?";
}

namespace {

std::string summarize(const std::vector<Finding>& findings)
{
    std::ostringstream out;
    out << "elaboration failed with " << findings.size() << " finding(s):";
    for (const auto& f : findings)
        out << " [" << finding_kind_name(f.kind) << " " << f.subject << "]";
    return out.str();
}

struct Analysis {
    const Netlist& netlist;
    const CellLibrary* library;
    std::vector<Finding> findings;
    std::map<std::string, int> net_index;
    std::vector<std::vector<DriverRef>> drivers;  // all drivers per net
    std::vector<std::vector<ReaderRef>> readers;
    std::vector<bool> sequential;  // per instance

    explicit Analysis(const Netlist& nl, const CellLibrary* lib)
        : netlist(nl), library(lib)
    {
        for (std::size_t i = 0; i < nl.nets.size(); ++i)
            net_index.emplace(nl.nets[i], static_cast<int>(i));
        drivers.resize(nl.nets.size());
        readers.resize(nl.nets.size());
        sequential.resize(nl.instances.size(), false);
    }

    void add_finding(FindingKind kind, std::string subject,
                     std::vector<std::string> items, std::string message)
    {
        findings.push_back({kind, std::move(subject), std::move(items),
                            std::move(message)});
    }

    void classify_and_wire()
    {
        // primary inputs drive their bit nets; output ports read theirs
        for (const auto& port : netlist.ports) {
            for (const auto& bit : port.bit_nets()) {
                int id = net_index.at(bit);
                if (port.direction == PortDir::input)
                    drivers[id].push_back({-1, bit});
            }
        }

        for (std::size_t idx = 0; idx < netlist.instances.size(); ++idx) {
            const Instance& inst = netlist.instances[idx];
            int i = static_cast<int>(idx);

            if (inst.is_generic()) {
                sequential[idx] = inst.gate == GateKind::dff_gate;
                const std::string out = gate_output_pin(*inst.gate);
                for (const auto& [pin, net] : inst.pins) {
                    int id = net_index.at(net);
                    if (pin == out)
                        drivers[id].push_back({i, pin});
                    else
                        readers[id].push_back({i, pin});
                }
                continue;
            }

            if (!library) {
                add_finding(FindingKind::unknown_cell, inst.cell, {inst.name},
                            "instance " + inst.name + " references library cell " +
                                inst.cell + " but no library was provided");
                continue;
            }
            const CellDef* cell = library->find(inst.cell);
            if (!cell) {
                add_finding(FindingKind::unknown_cell, inst.cell, {inst.name},
                            "instance " + inst.name + " references unknown cell " +
                                inst.cell);
                continue;
            }
            sequential[idx] = cell->is_sequential();

            bool pins_ok = true;
            for (const auto& p : cell->pins) {
                if (!inst.pins.count(p.name)) {
                    add_finding(FindingKind::pin_mismatch, inst.name, {p.name},
                                "instance " + inst.name + " leaves pin " + p.name +
                                    " of cell " + inst.cell + " unconnected");
                    pins_ok = false;
                }
            }
            for (const auto& [pin, net] : inst.pins) {
                const PinDef* def = cell->find_pin(pin);
                if (!def) {
                    add_finding(FindingKind::pin_mismatch, inst.name, {pin},
                                "instance " + inst.name + " connects pin " + pin +
                                    " that cell " + inst.cell + " does not declare");
                    pins_ok = false;
                }
            }
            if (!pins_ok)
                continue;
            for (const auto& [pin, net] : inst.pins) {
                int id = net_index.at(net);
                if (cell->find_pin(pin)->direction == PinDir::output)
                    drivers[id].push_back({i, pin});
                else
                    readers[id].push_back({i, pin});
            }
        }
    }

    std::string driver_label(const DriverRef& d) const
    {
        if (d.is_primary_input())
            return "primary input " + d.pin;
        return netlist.instances[d.instance].name + "." + d.pin;
    }

    void check_drivers()
    {
        for (std::size_t id = 0; id < drivers.size(); ++id) {
            const auto& ds = drivers[id];
            if (ds.size() > 1) {
                std::vector<std::string> labels;
                for (const auto& d : ds)
                    labels.push_back(driver_label(d));
                add_finding(FindingKind::multiple_driver, netlist.nets[id], labels,
                            "net " + netlist.nets[id] + " is driven by " +
                                std::to_string(ds.size()) + " sources");
            } else if (ds.empty() && is_read(static_cast<int>(id))) {
                add_finding(FindingKind::undriven_net, netlist.nets[id], {},
                            "net " + netlist.nets[id] +
                                " is read but has no driver and is not a primary input");
            }
        }
    }

    bool is_read(int id) const
    {
        if (!readers[id].empty())
            return true;
        for (const auto& port : netlist.ports)
            if (port.direction == PortDir::output)
                for (const auto& bit : port.bit_nets())
                    if (net_index.at(bit) == id)
                        return true;
        return false;
    }

    // Kahn levelization over combinational instances; deterministic because the
    // ready queue is processed in instance-declaration order.
    std::vector<int> topo_sort()
    {
        const std::size_t n = netlist.instances.size();
        std::vector<int> indegree(n, 0);
        std::vector<std::vector<int>> successors(n);

        for (std::size_t id = 0; id < drivers.size(); ++id) {
            if (drivers[id].size() != 1)
                continue;
            const DriverRef& d = drivers[id][0];
            if (d.is_primary_input() || sequential[d.instance])
                continue;  // sources: primary inputs and flop outputs
            for (const auto& r : readers[id]) {
                if (sequential[r.instance])
                    continue;
                successors[d.instance].push_back(r.instance);
                ++indegree[r.instance];
            }
        }

        std::vector<int> order;
        std::deque<int> ready;
        for (std::size_t i = 0; i < n; ++i)
            if (!sequential[i] && indegree[i] == 0)
                ready.push_back(static_cast<int>(i));
        while (!ready.empty()) {
            int i = ready.front();
            ready.pop_front();
            order.push_back(i);
            for (int s : successors[i])
                if (--indegree[s] == 0)
                    ready.push_back(s);
        }

        std::size_t comb_count = 0;
        for (std::size_t i = 0; i < n; ++i)
            if (!sequential[i])
                ++comb_count;
        if (order.size() != comb_count) {
            // Every leftover node has a leftover predecessor, so walking
            // predecessors from any leftover node must revisit one: a cycle.
            std::vector<bool> placed(n, false);
            for (int i : order)
                placed[i] = true;
            auto leftover_pred = [&](int v) {
                for (std::size_t u = 0; u < n; ++u)
                    if (!sequential[u] && !placed[u])
                        for (int s : successors[u])
                            if (s == v)
                                return static_cast<int>(u);
                return -1;
            };
            int start = -1;
            for (std::size_t i = 0; i < n; ++i)
                if (!sequential[i] && !placed[i]) {
                    start = static_cast<int>(i);
                    break;
                }
            std::vector<int> path;
            std::vector<int> pos(n, -1);
            int cur = start;
            while (cur >= 0 && pos[cur] < 0) {
                pos[cur] = static_cast<int>(path.size());
                path.push_back(cur);
                cur = leftover_pred(cur);
            }
            std::vector<std::string> cycle;
            if (cur >= 0) {
                for (std::size_t k = pos[cur]; k < path.size(); ++k)
                    cycle.push_back(netlist.instances[path[k]].name);
                std::reverse(cycle.begin(), cycle.end());  // dataflow order
            }
            add_finding(FindingKind::combinational_loop,
                        cycle.empty() ? "?" : cycle.front(), cycle,
                        "combinational loop through " + std::to_string(cycle.size()) +
                            " instance(s)");
        }
        return order;
    }
};

} // namespace

ElaborationError::ElaborationError(std::vector<Finding> findings)
    : std::runtime_error(summarize(findings)), findings_(std::move(findings))
{
}

ElaboratedDesign elaborate(const Netlist& netlist, const CellLibrary* library)
{
    Analysis a(netlist, library);
    a.classify_and_wire();
    a.check_drivers();
    if (!a.findings.empty())
        throw ElaborationError(std::move(a.findings));

    std::vector<int> order = a.topo_sort();
    if (!a.findings.empty())
        throw ElaborationError(std::move(a.findings));

    ElaboratedDesign design;
    design.netlist = netlist;
    design.net_index = std::move(a.net_index);
    design.driver_of.resize(netlist.nets.size());
    design.readers_of = std::move(a.readers);
    for (std::size_t id = 0; id < a.drivers.size(); ++id)
        if (!a.drivers[id].empty())
            design.driver_of[id] = a.drivers[id][0];
    design.topo_order = std::move(order);
    for (std::size_t i = 0; i < netlist.instances.size(); ++i)
        if (a.sequential[i])
            design.state_elements.push_back(static_cast<int>(i));
    return design;
}

std::vector<Finding> lint_netlist(const Netlist& netlist, const CellLibrary* library)
{
    try {
        elaborate(netlist, library);
        return {};
    } catch (const ElaborationError& e) {
        return e.findings();
    }
}

} // namespace netfuzz
