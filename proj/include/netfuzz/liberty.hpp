#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "netfuzz/bool_expr.hpp"

namespace netfuzz {

enum class PinDir : std::uint8_t { input, output };

struct PinDef {
    std::string name;
    PinDir direction = PinDir::input;
    std::optional<BoolExpr> function;  // output pins only

    bool operator==(const PinDef&) const = default;
};

/// Liberty ff group: single internal state variable, synchronous next-state.
struct SeqSpec {
    std::string state_var;   // first ff() argument, e.g. IQ
    BoolExpr next_state;
    std::string clocked_on;  // input pin name

    bool operator==(const SeqSpec&) const = default;
};

struct CellDef {
    std::string name;
    double area = 0.0;
    std::vector<PinDef> pins;  // declaration order
    std::optional<SeqSpec> ff;

    bool is_sequential() const { return ff.has_value(); }

    std::vector<std::string> input_pins() const
    {
        std::vector<std::string> out;
        for (const auto& p : pins)
            if (p.direction == PinDir::input)
                out.push_back(p.name);
        return out;
    }

    const PinDef* output_pin() const
    {
        for (const auto& p : pins)
            if (p.direction == PinDir::output)
                return &p;
        return nullptr;
    }

    const PinDef* find_pin(std::string_view pin) const
    {
        for (const auto& p : pins)
            if (p.name == pin)
                return &p;
        return nullptr;
    }

    bool operator==(const CellDef&) const = default;
};

struct CellLibrary {
    std::string name;
    std::map<std::string, CellDef> cells;

    const CellDef* find(std::string_view cell) const
    {
        auto it = cells.find(std::string(cell));
        return it == cells.end() ? nullptr : &it->second;
    }

    bool operator==(const CellLibrary&) const = default;
};

/// Parse the supported Liberty subset. Unknown attributes and groups
/// (timing, power tables, ...) are skipped without error.
CellLibrary parse_liberty(std::string_view text);

/// Canonical emission of the supported subset; parse_liberty(write_liberty(l)) == l.
std::string write_liberty(const CellLibrary& library);

} // namespace netfuzz
