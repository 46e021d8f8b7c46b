#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "netfuzz/bool_expr.hpp"

namespace netfuzz {

enum class PortDir : std::uint8_t { input, output };
enum class PortRole : std::uint8_t { data, clock, reset };

struct PortDecl {
    std::string name;
    PortDir direction = PortDir::input;
    int width = 1;
    PortRole role = PortRole::data;  // harness annotation, not part of the file format

    /// Per-bit net names, MSB first ("a[3]", ..., "a[0]"; just "a" when width 1).
    std::vector<std::string> bit_nets() const
    {
        std::vector<std::string> out;
        if (width == 1) {
            out.push_back(name);
        } else {
            for (int i = width - 1; i >= 0; --i)
                out.push_back(name + "[" + std::to_string(i) + "]");
        }
        return out;
    }

    bool operator==(const PortDecl&) const = default;
};

enum class GateKind : std::uint8_t {
    and_gate,
    or_gate,
    nand_gate,
    nor_gate,
    xor_gate,
    xnor_gate,
    not_gate,
    buf_gate,
    mux2_gate,
    const0_gate,
    const1_gate,
    dff_gate
};

const char* gate_name(GateKind kind);
std::optional<GateKind> gate_from_name(std::string_view name);
/// Fixed pin list for a generic gate, inputs first, output last.
const std::vector<std::string>& gate_pins(GateKind kind);
const char* gate_output_pin(GateKind kind);  // "Y", or "Q" for dff
/// Declared behaviour of a generic gate's output over its input pins.
const BoolExpr& gate_function(GateKind kind);

struct Instance {
    std::string name;
    std::string cell;               // library cell name; empty for generic gates
    std::optional<GateKind> gate;   // set for generic gates
    std::map<std::string, std::string> pins;  // pin name -> net name

    bool is_generic() const { return gate.has_value(); }
    std::string kind_name() const { return gate ? gate_name(*gate) : cell; }

    const std::string* net_on(std::string_view pin) const
    {
        auto it = pins.find(std::string(pin));
        return it == pins.end() ? nullptr : &it->second;
    }

    bool operator==(const Instance&) const = default;
};

/// Bit-blasted structural netlist: every net has width 1; vector ports and
/// wires exist only as PortDecl.width and the name[i] net naming scheme.
struct Netlist {
    std::string name;
    std::vector<PortDecl> ports;      // declaration order
    std::vector<std::string> nets;    // declaration order, unique
    std::vector<Instance> instances;  // declaration order

    const PortDecl* find_port(std::string_view port) const
    {
        for (const auto& p : ports)
            if (p.name == port)
                return &p;
        return nullptr;
    }

    const Instance* find_instance(std::string_view inst) const
    {
        for (const auto& i : instances)
            if (i.name == inst)
                return &i;
        return nullptr;
    }

    bool has_net(std::string_view net) const
    {
        for (const auto& n : nets)
            if (n == net)
                return true;
        return false;
    }

    /// Mark harness roles; throws std::invalid_argument when a named port is
    /// missing, is not an input, or a role would be duplicated.
    void assign_roles(std::string_view clock_port, std::string_view reset_port);

    bool operator==(const Netlist&) const = default;
};

/// Parse the documented structural-Verilog subset into a bit-blasted netlist.
Netlist parse_structural_verilog(std::string_view text);

/// Canonical emission; write-then-parse reproduces the netlist (roles reset
/// to data, since roles are harness annotations and have no file syntax).
std::string write_structural_verilog(const Netlist& netlist);

} // namespace netfuzz
