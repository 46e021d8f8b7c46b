#include "netfuzz/netlist.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

#include "netfuzz/errors.hpp"

namespace netfuzz {

namespace {

struct GateInfo {
    GateKind kind;
    const char* name;
    std::vector<std::string> pins;  // inputs first, output last
};

const std::vector<GateInfo>& gate_table()
{
    static const std::vector<GateInfo> table = {
        {GateKind::and_gate, "and", {"A", "B", "Y"}},
        {GateKind::or_gate, "or", {"A", "B", "Y"}},
        {GateKind::nand_gate, "nand", {"A", "B", "Y"}},
        {GateKind::nor_gate, "nor", {"A", "B", "Y"}},
        {GateKind::xor_gate, "xor", {"A", "B", "Y"}},
        {GateKind::xnor_gate, "xnor", {"A", "B", "Y"}},
        {GateKind::not_gate, "not", {"A", "Y"}},
        {GateKind::buf_gate, "buf", {"A", "Y"}},
        {GateKind::mux2_gate, "mux2", {"A", "B", "S", "Y"}},
        {GateKind::const0_gate, "const0", {"Y"}},
        {GateKind::const1_gate, "const1", {"Y"}},
        {GateKind::dff_gate, "dff", {"D", "CK", "Q"}},
    };
    return table;
}

const GateInfo& info_for(GateKind kind)
{
    for (const auto& g : gate_table())
        if (g.kind == kind)
            return g;
    throw std::logic_error("unknown gate kind");
}

std::string tie_instance_name(GateKind kind, const std::string& net)
{
    std::string mangled;
    for (char c : net)
        mangled += (c == '[' || c == ']') ? '_' : c;
    return std::string(kind == GateKind::const0_gate ? "_tie0_" : "_tie1_") + mangled;
}

} // namespace

const char* gate_name(GateKind kind) { return info_for(kind).name; }

std::optional<GateKind> gate_from_name(std::string_view name)
{
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    for (const auto& g : gate_table())
        if (lower == g.name)
            return g.kind;
    return std::nullopt;
}

const std::vector<std::string>& gate_pins(GateKind kind) { return info_for(kind).pins; }

const char* gate_output_pin(GateKind kind)
{
    return kind == GateKind::dff_gate ? "Q" : "Y";
}

const BoolExpr& gate_function(GateKind kind)
{
    static const std::map<GateKind, BoolExpr> functions = {
        {GateKind::and_gate, parse_function("A&B")},
        {GateKind::or_gate, parse_function("A|B")},
        {GateKind::nand_gate, parse_function("!(A&B)")},
        {GateKind::nor_gate, parse_function("!(A|B)")},
        {GateKind::xor_gate, parse_function("A^B")},
        {GateKind::xnor_gate, parse_function("!(A^B)")},
        {GateKind::not_gate, parse_function("!A")},
        {GateKind::buf_gate, parse_function("A")},
        {GateKind::mux2_gate, parse_function("(A&!S)|(B&S)")},
        {GateKind::const0_gate, parse_function("0")},
        {GateKind::const1_gate, parse_function("1")},
    };
    auto it = functions.find(kind);
    if (it == functions.end())
        throw std::logic_error("gate kind has no combinational function");
    return it->second;
}

void Netlist::assign_roles(std::string_view clock_port, std::string_view reset_port)
{
    for (auto& p : ports)
        p.role = PortRole::data;
    auto set_role = [&](std::string_view name, PortRole role) {
        if (name.empty())
            return;
        for (auto& p : ports) {
            if (p.name == name) {
                if (p.direction != PortDir::input)
                    throw std::invalid_argument("port " + p.name + " is not an input");
                if (p.role != PortRole::data)
                    throw std::invalid_argument("port " + p.name + " already has a role");
                if (role == PortRole::clock && p.width != 1)
                    throw std::invalid_argument("clock port must be 1 bit wide");
                if (role == PortRole::reset && p.width != 1)
                    throw std::invalid_argument("reset port must be 1 bit wide");
                p.role = role;
                return;
            }
        }
        throw std::invalid_argument("no such port: " + std::string(name));
    };
    set_role(clock_port, PortRole::clock);
    set_role(reset_port, PortRole::reset);
}

namespace {

// Tokenizer for the Verilog subset.
struct VToken {
    enum class Kind { ident, punct, end };
    Kind kind = Kind::end;
    std::string text;  // identifiers possibly with [idx]; punct: one of ()[].;,=:#
    int line = 0;
    int col = 0;
};

class VerilogLexer {
public:
    explicit VerilogLexer(std::string_view text) : text_(text) {}

    VToken next()
    {
        skip_trivia();
        VToken t;
        t.line = line_;
        t.col = col_;
        if (pos_ >= text_.size())
            return t;
        char c = text_[pos_];
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '\\') {
            if (c == '\\')
                throw ParseError("unsupported construct: escaped identifier", line_, col_);
            std::string s;
            while (pos_ < text_.size()) {
                char d = text_[pos_];
                if (std::isalnum(static_cast<unsigned char>(d)) || d == '_' || d == '$') {
                    s += d;
                    advance();
                } else {
                    break;
                }
            }
            t.kind = VToken::Kind::ident;
            t.text = std::move(s);
            return t;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::string s;
            while (pos_ < text_.size()) {
                char d = text_[pos_];
                if (std::isalnum(static_cast<unsigned char>(d)) || d == '\'') {
                    s += d;
                    advance();
                } else {
                    break;
                }
            }
            t.kind = VToken::Kind::ident;  // numbers and sized literals
            t.text = std::move(s);
            return t;
        }
        t.kind = VToken::Kind::punct;
        t.text = std::string(1, c);
        advance();
        return t;
    }

private:
    void advance()
    {
        if (text_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void skip_trivia()
    {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else if (c == '/' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '/') {
                while (pos_ < text_.size() && text_[pos_] != '\n')
                    advance();
            } else if (c == '/' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '*') {
                while (pos_ + 1 < text_.size() &&
                       !(text_[pos_] == '*' && text_[pos_ + 1] == '/'))
                    advance();
                if (pos_ + 1 >= text_.size())
                    throw ParseError("unterminated comment", line_, col_);
                advance();
                advance();
            } else {
                break;
            }
        }
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

// Behavioral keywords that turn into "unsupported construct" diagnostics.
const std::set<std::string>& unsupported_keywords()
{
    static const std::set<std::string> kw = {
        "always", "initial", "reg",       "if",         "case",     "casex",
        "casez",  "for",     "while",     "function",   "task",     "generate",
        "genvar", "integer", "real",      "inout",      "tri",      "specify",
        "parameter", "localparam", "defparam", "begin", "end",
    };
    return kw;
}

class VerilogParser {
public:
    explicit VerilogParser(std::string_view text) : lexer_(text) { bump(); }

    Netlist parse()
    {
        expect_keyword("module");
        Netlist nl;
        nl.name = expect_ident("module name");

        // header port list: either plain names or ANSI declarations
        std::vector<std::string> header_ports;
        expect_punct("(");
        if (!at_punct(")")) {
            while (true) {
                if (at_ident("input") || at_ident("output")) {
                    parse_ansi_port(nl);
                } else {
                    header_ports.push_back(expect_ident("port name"));
                }
                if (at_punct(",")) {
                    bump();
                    continue;
                }
                break;
            }
        }
        expect_punct(")");
        expect_punct(";");

        // body
        while (!at_ident("endmodule")) {
            if (tok_.kind == VToken::Kind::end)
                throw ParseError("missing endmodule", tok_.line, tok_.col);
            if (at_ident("input") || at_ident("output")) {
                parse_port_decl(nl, header_ports);
            } else if (at_ident("wire")) {
                parse_wire_decl(nl);
            } else if (at_ident("assign")) {
                parse_assign(nl);
            } else if (tok_.kind == VToken::Kind::ident) {
                if (unsupported_keywords().count(tok_.text))
                    throw ParseError("unsupported construct: " + tok_.text, tok_.line,
                                     tok_.col);
                parse_instance(nl);
            } else {
                throw ParseError("unexpected token '" + tok_.text + "'", tok_.line,
                                 tok_.col);
            }
        }
        bump();  // endmodule

        // all header ports must have a direction by now
        for (const auto& hp : header_ports)
            if (!declared_.count(hp))
                throw ParseError("port " + hp + " has no direction declaration", 1, 1);
        validate_connections(nl);
        return nl;
    }

private:
    VerilogLexer lexer_;
    VToken tok_;
    std::set<std::string> declared_;       // declared base names (ports and wires)
    std::set<std::string> net_set_;        // declared bit nets
    std::set<std::string> instance_names_;

    void bump() { tok_ = lexer_.next(); }

    bool at_punct(std::string_view p) const
    {
        return tok_.kind == VToken::Kind::punct && tok_.text == p;
    }
    bool at_ident(std::string_view id) const
    {
        return tok_.kind == VToken::Kind::ident && tok_.text == id;
    }

    void expect_punct(std::string_view p)
    {
        if (!at_punct(p))
            throw ParseError("expected '" + std::string(p) + "', got '" + tok_.text + "'",
                             tok_.line, tok_.col);
        bump();
    }

    void expect_keyword(std::string_view id)
    {
        if (!at_ident(id))
            throw ParseError("expected '" + std::string(id) + "'", tok_.line, tok_.col);
        bump();
    }

    std::string expect_ident(std::string_view what)
    {
        if (tok_.kind != VToken::Kind::ident)
            throw ParseError("expected " + std::string(what), tok_.line, tok_.col);
        std::string s = tok_.text;
        bump();
        return s;
    }

    int parse_range()
    {
        // '[' msb ':' lsb ']' with lsb == 0; returns width
        int line = tok_.line, col = tok_.col;
        expect_punct("[");
        int msb = parse_int();
        expect_punct(":");
        int lsb = parse_int();
        expect_punct("]");
        if (lsb != 0)
            throw ParseError("unsupported construct: range with non-zero lsb", line, col);
        if (msb < lsb)
            throw ParseError("unsupported construct: descending range", line, col);
        return msb - lsb + 1;
    }

    int parse_int()
    {
        if (tok_.kind != VToken::Kind::ident)
            throw ParseError("expected number", tok_.line, tok_.col);
        for (char c : tok_.text)
            if (!std::isdigit(static_cast<unsigned char>(c)))
                throw ParseError("expected number", tok_.line, tok_.col);
        int v = std::stoi(tok_.text);
        bump();
        return v;
    }

    void declare_port(Netlist& nl, PortDir dir, int width, const std::string& name,
                      int line, int col)
    {
        if (declared_.count(name))
            throw ParseError("duplicate declaration: " + name, line, col);
        declared_.insert(name);
        PortDecl port{name, dir, width, PortRole::data};
        for (const auto& bit : port.bit_nets()) {
            nl.nets.push_back(bit);
            net_set_.insert(bit);
        }
        nl.ports.push_back(std::move(port));
    }

    void parse_ansi_port(Netlist& nl)
    {
        PortDir dir = at_ident("input") ? PortDir::input : PortDir::output;
        int line = tok_.line, col = tok_.col;
        bump();
        int width = 1;
        if (at_punct("["))
            width = parse_range();
        std::string name = expect_ident("port name");
        declare_port(nl, dir, width, name, line, col);
    }

    void parse_port_decl(Netlist& nl, const std::vector<std::string>& header_ports)
    {
        PortDir dir = at_ident("input") ? PortDir::input : PortDir::output;
        int line = tok_.line, col = tok_.col;
        bump();
        int width = 1;
        if (at_punct("["))
            width = parse_range();
        while (true) {
            std::string name = expect_ident("port name");
            if (std::find(header_ports.begin(), header_ports.end(), name) ==
                header_ports.end())
                throw ParseError("declared port " + name + " is not in the module header",
                                 line, col);
            declare_port(nl, dir, width, name, line, col);
            if (at_punct(",")) {
                bump();
                continue;
            }
            break;
        }
        expect_punct(";");
    }

    void parse_wire_decl(Netlist& nl)
    {
        int line = tok_.line, col = tok_.col;
        bump();  // wire
        int width = 1;
        if (at_punct("["))
            width = parse_range();
        while (true) {
            std::string name = expect_ident("wire name");
            if (declared_.count(name))
                throw ParseError("duplicate declaration: " + name, line, col);
            declared_.insert(name);
            if (width == 1) {
                nl.nets.push_back(name);
                net_set_.insert(name);
            } else {
                for (int i = width - 1; i >= 0; --i) {
                    std::string bit = name + "[" + std::to_string(i) + "]";
                    nl.nets.push_back(bit);
                    net_set_.insert(bit);
                }
            }
            if (at_punct(",")) {
                bump();
                continue;
            }
            break;
        }
        expect_punct(";");
    }

    std::string parse_net_ref()
    {
        int line = tok_.line, col = tok_.col;
        std::string name = expect_ident("net name");
        if (at_punct("[")) {
            bump();
            int idx = parse_int();
            expect_punct("]");
            name += "[" + std::to_string(idx) + "]";
        }
        if (!net_set_.count(name))
            throw ParseError("reference to undeclared net " + name, line, col);
        return name;
    }

    void parse_assign(Netlist& nl)
    {
        int line = tok_.line, col = tok_.col;
        bump();  // assign
        std::string target = parse_net_ref();
        expect_punct("=");
        if (tok_.kind != VToken::Kind::ident ||
            (tok_.text != "1'b0" && tok_.text != "1'b1"))
            throw ParseError("unsupported construct: assign of non-constant (only "
                             "1'b0/1'b1 allowed)",
                             line, col);
        GateKind kind =
            tok_.text == "1'b0" ? GateKind::const0_gate : GateKind::const1_gate;
        bump();
        expect_punct(";");

        Instance inst;
        inst.name = tie_instance_name(kind, target);
        inst.gate = kind;
        inst.pins["Y"] = target;
        add_instance(nl, std::move(inst), line, col);
    }

    void parse_instance(Netlist& nl)
    {
        int line = tok_.line, col = tok_.col;
        std::string kind_name = expect_ident("cell or gate name");
        std::string inst_name = expect_ident("instance name");

        Instance inst;
        inst.name = inst_name;
        if (auto kind = gate_from_name(kind_name))
            inst.gate = *kind;
        else
            inst.cell = kind_name;

        expect_punct("(");
        if (at_punct(")"))
            throw ParseError("instance " + inst_name + " has no connections", line, col);
        while (true) {
            if (!at_punct("."))
                throw ParseError("unsupported construct: positional connection (named "
                                 "connections only)",
                                 tok_.line, tok_.col);
            bump();
            std::string pin = expect_ident("pin name");
            expect_punct("(");
            std::string net = parse_net_ref();
            expect_punct(")");
            if (inst.pins.count(pin))
                throw ParseError("duplicate pin connection ." + pin + " on instance " +
                                     inst_name,
                                 line, col);
            inst.pins[pin] = net;
            if (at_punct(",")) {
                bump();
                continue;
            }
            break;
        }
        expect_punct(")");
        expect_punct(";");

        if (inst.gate) {
            const auto& pins = gate_pins(*inst.gate);
            if (inst.pins.size() != pins.size())
                throw ParseError("instance " + inst_name + " of gate " + kind_name +
                                     " must connect exactly " +
                                     std::to_string(pins.size()) + " pins",
                                 line, col);
            for (const auto& p : pins)
                if (!inst.pins.count(p))
                    throw ParseError("instance " + inst_name + " is missing pin " + p,
                                     line, col);
        }
        add_instance(nl, std::move(inst), line, col);
    }

    void add_instance(Netlist& nl, Instance inst, int line, int col)
    {
        if (instance_names_.count(inst.name))
            throw ParseError("duplicate declaration: instance " + inst.name, line, col);
        instance_names_.insert(inst.name);
        nl.instances.push_back(std::move(inst));
    }

    void validate_connections(const Netlist& nl)
    {
        for (const auto& inst : nl.instances)
            for (const auto& [pin, net] : inst.pins)
                if (!net_set_.count(net))
                    throw ParseError("instance " + inst.name + " pin " + pin +
                                         " references undeclared net " + net,
                                     1, 1);
    }
};

struct NetGroup {
    std::string base;
    int max_index = -1;  // -1: scalar
    std::set<int> indices;
};

// Group bit-blasted nets back into vector declarations for emission.
std::vector<NetGroup> group_nets(const std::vector<std::string>& nets)
{
    std::vector<NetGroup> groups;
    std::map<std::string, std::size_t> by_base;
    for (const auto& net : nets) {
        auto lb = net.find('[');
        std::string base = net;
        int index = -1;
        if (lb != std::string::npos && net.back() == ']') {
            base = net.substr(0, lb);
            index = std::stoi(net.substr(lb + 1, net.size() - lb - 2));
        }
        auto it = by_base.find(base);
        if (it == by_base.end()) {
            by_base.emplace(base, groups.size());
            groups.push_back({base, index, {}});
            if (index >= 0)
                groups.back().indices.insert(index);
        } else {
            NetGroup& g = groups[it->second];
            if (index < 0 || g.max_index < 0)
                throw std::logic_error("net name collision on base " + base);
            g.max_index = std::max(g.max_index, index);
            g.indices.insert(index);
        }
    }
    for (const auto& g : groups) {
        if (g.max_index >= 0 &&
            static_cast<int>(g.indices.size()) != g.max_index + 1)
            throw std::logic_error("non-contiguous bit indices for net " + g.base);
    }
    return groups;
}

} // namespace

Netlist parse_structural_verilog(std::string_view text)
{
    VerilogParser parser(text);
    return parser.parse();
}

std::string write_structural_verilog(const Netlist& netlist)
{
    std::ostringstream out;
    out << "module " << netlist.name << "(";
    for (std::size_t i = 0; i < netlist.ports.size(); ++i) {
        if (i)
            out << ", ";
        out << netlist.ports[i].name;
    }
    out << ");\n";

    for (const auto& p : netlist.ports) {
        out << "  " << (p.direction == PortDir::input ? "input" : "output");
        if (p.width > 1)
            out << " [" << (p.width - 1) << ":0]";
        out << " " << p.name << ";\n";
    }

    std::set<std::string> port_bases;
    for (const auto& p : netlist.ports)
        port_bases.insert(p.name);
    for (const auto& g : group_nets(netlist.nets)) {
        if (port_bases.count(g.base))
            continue;
        out << "  wire";
        if (g.max_index >= 0)
            out << " [" << g.max_index << ":0]";
        out << " " << g.base << ";\n";
    }

    for (const auto& inst : netlist.instances) {
        if (inst.gate == GateKind::const0_gate || inst.gate == GateKind::const1_gate) {
            const std::string& target = inst.pins.at("Y");
            if (inst.name == tie_instance_name(*inst.gate, target)) {
                out << "  assign " << target << " = "
                    << (inst.gate == GateKind::const0_gate ? "1'b0" : "1'b1") << ";\n";
                continue;
            }
        }
        out << "  " << inst.kind_name() << " " << inst.name << "(";
        bool first = true;
        auto emit_pin = [&](const std::string& pin, const std::string& net) {
            if (!first)
                out << ", ";
            out << "." << pin << "(" << net << ")";
            first = false;
        };
        if (inst.gate) {
            for (const auto& pin : gate_pins(*inst.gate))
                emit_pin(pin, inst.pins.at(pin));
        } else {
            for (const auto& [pin, net] : inst.pins)
                emit_pin(pin, net);
        }
        out << ");\n";
    }
    out << "endmodule\n";
    return out.str();
}

} // namespace netfuzz
