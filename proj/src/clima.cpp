#include "netfuzz/clima.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

namespace netfuzz {

namespace {

std::string format_area(double v)
{
    std::ostringstream out;
    out << v;
    return out.str();
}

TruthTable cell_canonical_key(const CellDef& cell)
{
    auto inputs = cell.input_pins();
    TruthTable table = truth_table(*cell.output_pin()->function, inputs);
    return canonical_key(table, static_cast<int>(inputs.size()));
}

} // namespace

std::pair<CellLibrary, InjectionRecord> inject(const CellLibrary& library,
                                               const InjectionSpec& spec)
{
    const CellDef* target = library.find(spec.target_cell);
    if (!target)
        throw std::invalid_argument("inject: unknown target cell " + spec.target_cell);
    if (target->is_sequential())
        throw std::invalid_argument("inject: target cell is sequential");

    // resolve the donor function, rebased onto the target's input pins
    BoolExpr donor_fn;
    std::string donor_desc;
    auto target_inputs = target->input_pins();
    if (spec.donor_function) {
        donor_fn = *spec.donor_function;
        donor_desc = to_function_string(donor_fn);
        for (const auto& v : expr_variables(donor_fn)) {
            if (std::find(target_inputs.begin(), target_inputs.end(), v) ==
                target_inputs.end())
                throw std::invalid_argument(
                    "inject: donor function references pin " + v +
                    " that the target cell does not declare");
        }
    } else {
        const CellDef* donor = library.find(spec.donor_cell);
        if (!donor)
            throw std::invalid_argument("inject: unknown donor cell " + spec.donor_cell);
        if (donor->is_sequential())
            throw std::invalid_argument("inject: donor cell is sequential");
        auto donor_inputs = donor->input_pins();
        if (donor_inputs.size() != target_inputs.size())
            throw std::invalid_argument("inject: donor arity " +
                                        std::to_string(donor_inputs.size()) +
                                        " != target arity " +
                                        std::to_string(target_inputs.size()));
        donor_desc = donor->name;
        // positional pin rename donor -> target
        donor_fn = *donor->output_pin()->function;
        struct Renamer {
            const std::vector<std::string>& from;
            const std::vector<std::string>& to;
            void apply(BoolExpr& e) const
            {
                if (e.op == BoolExpr::Op::var) {
                    for (std::size_t i = 0; i < from.size(); ++i)
                        if (e.name == from[i]) {
                            e.name = to[i];
                            return;
                        }
                    return;
                }
                for (auto& a : e.args)
                    apply(a);
            }
        };
        Renamer{donor_inputs, target_inputs}.apply(donor_fn);
    }

    // the tamper must change semantics
    TruthTable target_table =
        truth_table(*target->output_pin()->function, target_inputs);
    TruthTable donor_table = truth_table(donor_fn, target_inputs);
    if (target_table == donor_table)
        throw std::invalid_argument(
            "inject: donor function equals the target function (no semantic change)");

    double new_area = spec.explicit_area;
    if (spec.area_policy == AreaPolicy::auto_undercut) {
        // minimum area among genuine cells of the donor's function class
        TruthTable donor_key =
            canonical_key(donor_table, static_cast<int>(target_inputs.size()));
        double min_area = -1.0;
        for (const auto& [name, cell] : library.cells) {
            if (cell.is_sequential() || name == spec.target_cell)
                continue;
            auto inputs = cell.input_pins();
            if (inputs.size() != target_inputs.size())
                continue;
            if (cell_canonical_key(cell) == donor_key)
                if (min_area < 0 || cell.area < min_area)
                    min_area = cell.area;
        }
        if (min_area < 0)
            throw std::invalid_argument(
                "inject: auto area policy needs at least one donor-class cell");
        new_area = min_area * (1.0 - spec.epsilon);
    }

    CellLibrary tampered = library;
    CellDef& cell = tampered.cells.at(spec.target_cell);
    InjectionRecord record;
    record.target_cell = spec.target_cell;
    record.donor = donor_desc;
    record.old_function = to_function_string(*cell.output_pin()->function);
    record.new_function = to_function_string(donor_fn);
    record.old_area = cell.area;
    record.new_area = new_area;
    record.area_policy =
        spec.area_policy == AreaPolicy::auto_undercut ? "auto" : "explicit";
    record.epsilon = spec.epsilon;
    record.mode = spec.mode == InjectionMode::random ? "random" : "targeted";

    for (auto& pin : cell.pins)
        if (pin.direction == PinDir::output)
            pin.function = donor_fn;
    cell.area = new_area;
    return {std::move(tampered), std::move(record)};
}

Netlist apply_targeted_substitution(const Netlist& mapped, const CellLibrary& library,
                                    const InjectionSpec& spec)
{
    const CellDef* target = library.find(spec.target_cell);
    if (!target)
        throw std::invalid_argument("substitution: unknown target cell " +
                                    spec.target_cell);
    Netlist out = mapped;
    for (const auto& name : spec.target_instances) {
        Instance* inst = nullptr;
        for (auto& i : out.instances)
            if (i.name == name)
                inst = &i;
        if (!inst)
            throw std::invalid_argument("substitution: no such instance " + name);
        if (inst->is_generic())
            throw std::invalid_argument("substitution: instance " + name +
                                        " is a generic gate, not a mapped cell");
        const CellDef* current = library.find(inst->cell);
        if (!current)
            throw std::invalid_argument("substitution: instance " + name +
                                        " references unknown cell " + inst->cell);
        // pin names must line up so the rewiring is the identity
        for (const auto& pin : target->pins)
            if (!inst->pins.count(pin.name))
                throw std::invalid_argument("substitution: instance " + name +
                                            " has no connection for target pin " +
                                            pin.name);
        if (inst->pins.size() != target->pins.size())
            throw std::invalid_argument("substitution: pin count of " + name +
                                        " does not match target cell");
        inst->cell = spec.target_cell;
    }
    return out;
}

const char* scan_finding_kind_name(ScanFindingKind kind)
{
    switch (kind) {
    case ScanFindingKind::function_mismatch: return "function-mismatch";
    case ScanFindingKind::area_deviation: return "area-deviation";
    case ScanFindingKind::name_function_mismatch: return "name-function-mismatch";
    case ScanFindingKind::area_anomaly: return "area-anomaly";
    }
    return "?";
}

namespace {

// canonical class expected from a cell-name stem, parameterized by arity
std::optional<TruthTable> expected_key_for_stem(const std::string& stem, int arity)
{
    auto key_of = [&](const std::string& fn,
                      const std::vector<std::string>& pins) -> std::optional<TruthTable> {
        if (static_cast<int>(pins.size()) != arity)
            return std::nullopt;
        return canonical_key(truth_table(parse_function(fn), pins), arity);
    };
    std::vector<std::string> pins;
    for (int i = 0; i < arity; ++i)
        pins.push_back("p" + std::to_string(i));

    auto chain = [&](const char* op) {
        std::string fn = pins.empty() ? std::string("0") : pins[0];
        for (std::size_t i = 1; i < pins.size(); ++i)
            fn = "(" + fn + op + pins[i] + ")";
        return fn;
    };

    if (stem == "AND") return arity >= 2 ? key_of(chain("&"), pins) : std::nullopt;
    if (stem == "OR") return arity >= 2 ? key_of(chain("|"), pins) : std::nullopt;
    if (stem == "NAND") return arity >= 2 ? key_of("!" + chain("&"), pins) : std::nullopt;
    if (stem == "NOR") return arity >= 2 ? key_of("!" + chain("|"), pins) : std::nullopt;
    if (stem == "XOR") return arity >= 2 ? key_of(chain("^"), pins) : std::nullopt;
    if (stem == "XNOR") return arity >= 2 ? key_of("!" + chain("^"), pins) : std::nullopt;
    if (stem == "INV") return arity == 1 ? key_of("!p0", pins) : std::nullopt;
    if (stem == "BUF") return arity == 1 ? key_of("p0", pins) : std::nullopt;
    if (stem == "MUX")
        return arity == 3 ? key_of("(p0&!p2)|(p1&p2)", pins) : std::nullopt;
    if (stem == "AOI") {
        if (arity == 3) return key_of("!((p0&p1)|p2)", pins);
        if (arity == 4) return key_of("!((p0&p1)|(p2&p3))", pins);
        return std::nullopt;
    }
    if (stem == "OAI") {
        if (arity == 3) return key_of("!((p0|p1)&p2)", pins);
        if (arity == 4) return key_of("!((p0|p1)&(p2|p3))", pins);
        return std::nullopt;
    }
    return std::nullopt;
}

std::string name_stem(const std::string& cell)
{
    std::string stem;
    for (char c : cell) {
        if (std::isalpha(static_cast<unsigned char>(c)))
            stem += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
        else
            break;
    }
    return stem;
}

} // namespace

std::vector<ScanFinding> scan(const CellLibrary& suspect, const CellLibrary* reference)
{
    std::vector<ScanFinding> findings;

    if (reference) {
        for (const auto& [name, cell] : suspect.cells) {
            const CellDef* ref = reference->find(name);
            if (!ref)
                continue;  // new cells are not, by themselves, tampering evidence
            if (cell.is_sequential() != ref->is_sequential())
                continue;
            if (!cell.is_sequential()) {
                auto s_inputs = cell.input_pins();
                auto r_inputs = ref->input_pins();
                if (s_inputs.size() == r_inputs.size()) {
                    TruthTable s_key = cell_canonical_key(cell);
                    TruthTable r_key = cell_canonical_key(*ref);
                    if (s_key != r_key) {
                        findings.push_back(
                            {name, ScanFindingKind::function_mismatch,
                             "declared function differs from the reference library",
                             table_to_string(s_key), table_to_string(r_key)});
                    }
                }
            }
            double denom = std::max(std::abs(ref->area), 1e-12);
            if (std::abs(cell.area - ref->area) / denom > 0.20) {
                findings.push_back({name, ScanFindingKind::area_deviation,
                                    "area deviates more than 20% from the reference",
                                    format_area(cell.area), format_area(ref->area)});
            }
        }
        return findings;
    }

    // reference-free heuristics
    for (const auto& [name, cell] : suspect.cells) {
        if (cell.is_sequential())
            continue;
        auto inputs = cell.input_pins();
        TruthTable key = cell_canonical_key(cell);

        std::string stem = name_stem(name);
        auto expected = expected_key_for_stem(stem, static_cast<int>(inputs.size()));
        if (expected && *expected != key) {
            findings.push_back({name, ScanFindingKind::name_function_mismatch,
                                "cell name stem " + stem +
                                    " does not match the declared function class",
                                table_to_string(key), table_to_string(*expected)});
        }

        double peer_min = -1.0;
        for (const auto& [other_name, other] : suspect.cells) {
            if (other_name == name || other.is_sequential())
                continue;
            if (other.input_pins().size() != inputs.size())
                continue;
            if (cell_canonical_key(other) == key)
                if (peer_min < 0 || other.area < peer_min)
                    peer_min = other.area;
        }
        if (peer_min > 0 && cell.area < 0.75 * peer_min) {
            findings.push_back({name, ScanFindingKind::area_anomaly,
                                "area undercuts every same-function-class peer by more "
                                "than 25%",
                                format_area(cell.area), format_area(peer_min)});
        }
    }
    return findings;
}

} // namespace netfuzz
