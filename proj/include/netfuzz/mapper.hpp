#pragma once

#include <map>
#include <string>
#include <vector>

#include "netfuzz/liberty.hpp"
#include "netfuzz/netlist.hpp"
#include "netfuzz/truth_table.hpp"

namespace netfuzz {

/// Candidate cell for one canonical function class. `perm` maps canonical
/// input slot k to the cell's input pin perm[k] (indices into input_pins).
struct MatchEntry {
    std::string cell;
    std::vector<std::string> input_pins;  // cell input pins, declaration order
    std::string output_pin;
    std::vector<int> perm;
    double area = 0.0;
};

struct DffEntry {
    std::string cell;
    std::string d_pin;
    std::string ck_pin;
    std::string q_pin;
    double area = 0.0;
};

/// Canonical-truth-table match index over a library. Combinational entries
/// are sorted by (area, cell name); sequential cells are indexed separately.
struct MatchIndex {
    std::map<TruthTable, std::vector<MatchEntry>> by_key;
    std::vector<DffEntry> dff_cells;  // area-sorted
    std::vector<std::string> skipped;  // combinational cells with > 6 inputs

    const std::vector<MatchEntry>* lookup(const TruthTable& key) const
    {
        auto it = by_key.find(key);
        return it == by_key.end() ? nullptr : &it->second;
    }
};

MatchIndex build_match_index(const CellLibrary& library);

struct MappingReport {
    struct CellUse {
        std::uint64_t count = 0;
        double area = 0.0;
    };
    std::map<std::string, CellUse> cells;
    std::uint64_t total_count = 0;
    double total_area = 0.0;
};

class NoMatchError : public std::runtime_error {
public:
    NoMatchError(std::string gate_kind, std::string function)
        : std::runtime_error("no library cell matches " + gate_kind + " (function " +
                             function + ")"),
          gate_kind_(std::move(gate_kind)), function_(std::move(function))
    {
    }
    const std::string& gate_kind() const { return gate_kind_; }
    const std::string& function() const { return function_; }

private:
    std::string gate_kind_;
    std::string function_;
};

/// Replace every generic gate by the minimum-area matching library cell.
/// Net and instance names are preserved. Throws NoMatchError when a gate's
/// function class has no candidate.
std::pair<Netlist, MappingReport> map_netlist(const Netlist& generic,
                                              const MatchIndex& index);

} // namespace netfuzz
