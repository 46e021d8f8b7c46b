#pragma once

#include <optional>
#include <string>
#include <vector>

#include "netfuzz/liberty.hpp"
#include "netfuzz/netlist.hpp"
#include "netfuzz/truth_table.hpp"

namespace netfuzz {

enum class AreaPolicy : std::uint8_t {
    auto_undercut,  // strictly below the donor class minimum (1 - epsilon)
    explicit_value
};

enum class InjectionMode : std::uint8_t {
    random,   // library-wide lure: every donor-function mapping is captured
    targeted  // post-mapping substitution of a named instance set
};

struct InjectionSpec {
    std::string target_cell;
    std::string donor_cell;                 // one of donor_cell / donor_function
    std::optional<BoolExpr> donor_function;
    AreaPolicy area_policy = AreaPolicy::auto_undercut;
    double explicit_area = 0.0;
    double epsilon = 0.1;
    InjectionMode mode = InjectionMode::random;
    std::vector<std::string> target_instances;  // targeted mode
};

struct InjectionRecord {
    std::string target_cell;
    std::string donor;  // cell name or function string
    std::string old_function;
    std::string new_function;
    double old_area = 0.0;
    double new_area = 0.0;
    std::string area_policy;
    double epsilon = 0.0;
    std::string mode;
};

/// Replace the target cell's declared function by the donor function and set
/// its area per the policy (auto: donor-class minimum times 1 - epsilon).
/// The returned record carries the old and new values for test oracles.
std::pair<CellLibrary, InjectionRecord> inject(const CellLibrary& library,
                                               const InjectionSpec& spec);

/// Targeted mode: relabel the named instances of a mapped netlist to the
/// (tampered) target cell. Instance and net names stay untouched, so the
/// declared netlist structure is unchanged. Requires identical input pin
/// names between each instance's current cell and the target cell.
Netlist apply_targeted_substitution(const Netlist& mapped, const CellLibrary& library,
                                    const InjectionSpec& spec);

enum class ScanFindingKind : std::uint8_t {
    function_mismatch,       // vs reference library
    area_deviation,          // vs reference library, > 20 %
    name_function_mismatch,  // heuristic: cell-name stem vs function class
    area_anomaly             // heuristic: > 25 % below every same-class peer
};

const char* scan_finding_kind_name(ScanFindingKind kind);

struct ScanFinding {
    std::string cell;
    ScanFindingKind kind;
    std::string detail;        // human-readable evidence
    std::string suspect_value;   // table bits or area
    std::string reference_value; // table bits, area or expected class
};

/// Tamper scan. With a reference library: flag function and area mismatches
/// against same-named cells. Without: apply the name-stem heuristic and the
/// area-anomaly rule. Empty result means clean.
std::vector<ScanFinding> scan(const CellLibrary& suspect,
                              const CellLibrary* reference = nullptr);

} // namespace netfuzz
