#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "netfuzz/liberty.hpp"
#include "netfuzz/netlist.hpp"

namespace netfuzz {

enum class FindingKind : std::uint8_t {
    multiple_driver,
    undriven_net,
    combinational_loop,
    unknown_cell,
    pin_mismatch
};

const char* finding_kind_name(FindingKind kind);

/// One structural-legality diagnostic. `subject` is the net (or cell) at
/// fault; `items` are the involved drivers/instances, e.g. "u1.Y" or
/// "primary input a".
struct Finding {
    FindingKind kind;
    std::string subject;
    std::vector<std::string> items;
    std::string message;
};

class ElaborationError : public std::runtime_error {
public:
    explicit ElaborationError(std::vector<Finding> findings);
    const std::vector<Finding>& findings() const { return findings_; }

private:
    std::vector<Finding> findings_;
};

/// Driver of a net: an instance output pin, or a primary input when
/// instance < 0.
struct DriverRef {
    int instance = -1;
    std::string pin;

    bool is_primary_input() const { return instance < 0; }
};

struct ReaderRef {
    int instance;
    std::string pin;
};

/// Immutable connectivity view of a legal netlist. Net and instance ids are
/// indices into Netlist::nets / Netlist::instances.
struct ElaboratedDesign {
    Netlist netlist;
    std::map<std::string, int> net_index;
    std::vector<std::optional<DriverRef>> driver_of;  // by net id
    std::vector<std::vector<ReaderRef>> readers_of;   // by net id
    std::vector<int> topo_order;                      // combinational instances
    std::vector<int> state_elements;                  // sequential instances

    int net_id(std::string_view net) const
    {
        auto it = net_index.find(std::string(net));
        return it == net_index.end() ? -1 : it->second;
    }

    bool is_sequential(int instance) const
    {
        for (int s : state_elements)
            if (s == instance)
                return true;
        return false;
    }
};

/// Resolve connectivity and enforce structural legality. The library is
/// required as soon as any instance references a library cell. Throws
/// ElaborationError carrying every finding discovered.
ElaboratedDesign elaborate(const Netlist& netlist, const CellLibrary* library = nullptr);

/// Non-throwing variant for diagnostics: returns all findings, empty when
/// the netlist is clean.
std::vector<Finding> lint_netlist(const Netlist& netlist,
                                  const CellLibrary* library = nullptr);

} // namespace netfuzz
