#include "netfuzz/liberty.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "netfuzz/errors.hpp"

namespace netfuzz {

namespace {

struct Token {
    enum class Kind { ident, number, string, punct, end };
    Kind kind = Kind::end;
    std::string text;
    int line = 0;
    int col = 0;
};

class Lexer {
public:
    explicit Lexer(std::string_view text) : text_(text) {}

    Token next()
    {
        skip_trivia();
        Token t;
        t.line = line_;
        t.col = col_;
        if (pos_ >= text_.size()) {
            t.kind = Token::Kind::end;
            return t;
        }
        char c = text_[pos_];
        if (c == '"') {
            advance();
            std::string s;
            while (pos_ < text_.size() && text_[pos_] != '"') {
                if (text_[pos_] == '\\' && pos_ + 1 < text_.size() &&
                    text_[pos_ + 1] == '\n') {
                    advance();  // line continuation inside the string
                    advance();
                    continue;
                }
                s += text_[pos_];
                advance();
            }
            if (pos_ >= text_.size())
                throw ParseError("unterminated string", t.line, t.col);
            advance();
            t.kind = Token::Kind::string;
            t.text = std::move(s);
            return t;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) ||
            (c == '-' && pos_ + 1 < text_.size() &&
             std::isdigit(static_cast<unsigned char>(text_[pos_ + 1])))) {
            std::string s;
            while (pos_ < text_.size()) {
                char d = text_[pos_];
                if (std::isdigit(static_cast<unsigned char>(d)) || d == '.' || d == '-' ||
                    d == '+' || d == 'e' || d == 'E') {
                    s += d;
                    advance();
                } else {
                    break;
                }
            }
            t.kind = Token::Kind::number;
            t.text = std::move(s);
            return t;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::string s;
            while (pos_ < text_.size()) {
                char d = text_[pos_];
                if (std::isalnum(static_cast<unsigned char>(d)) || d == '_' || d == '.') {
                    s += d;
                    advance();
                } else {
                    break;
                }
            }
            t.kind = Token::Kind::ident;
            t.text = std::move(s);
            return t;
        }
        t.kind = Token::Kind::punct;
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
            } else if (c == '\\' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '\n') {
                advance();
                advance();
            } else if (c == '/' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '*') {
                while (pos_ + 1 < text_.size() &&
                       !(text_[pos_] == '*' && text_[pos_ + 1] == '/'))
                    advance();
                if (pos_ + 1 >= text_.size())
                    throw ParseError("unterminated comment", line_, col_);
                advance();
                advance();
            } else if (c == '/' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '/') {
                while (pos_ < text_.size() && text_[pos_] != '\n')
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

class LibertyParser {
public:
    explicit LibertyParser(std::string_view text) : lexer_(text) { bump(); }

    CellLibrary parse()
    {
        expect_ident("library");
        CellLibrary lib;
        auto args = parse_group_args();
        if (args.empty())
            throw ParseError("library group needs a name", tok_.line, tok_.col);
        lib.name = args[0];
        expect_punct("{");
        while (!at_punct("}")) {
            if (tok_.kind == Token::Kind::end)
                throw ParseError("unexpected end of file in library group", tok_.line,
                                 tok_.col);
            if (tok_.kind == Token::Kind::ident && tok_.text == "cell") {
                CellDef cell = parse_cell();
                if (lib.cells.count(cell.name))
                    throw ParseError("duplicate cell: " + cell.name, tok_.line, tok_.col);
                lib.cells.emplace(cell.name, std::move(cell));
            } else {
                skip_statement();
            }
        }
        expect_punct("}");
        if (lib.cells.empty())
            throw ParseError("library has no cells", 1, 1);
        return lib;
    }

private:
    Lexer lexer_;
    Token tok_;

    void bump() { tok_ = lexer_.next(); }

    bool at_punct(std::string_view p) const
    {
        return tok_.kind == Token::Kind::punct && tok_.text == p;
    }

    void expect_punct(std::string_view p)
    {
        if (!at_punct(p))
            throw ParseError("expected '" + std::string(p) + "'", tok_.line, tok_.col);
        bump();
    }

    void expect_ident(std::string_view id)
    {
        if (tok_.kind != Token::Kind::ident || tok_.text != id)
            throw ParseError("expected '" + std::string(id) + "'", tok_.line, tok_.col);
        bump();
    }

    std::vector<std::string> parse_group_args()
    {
        expect_punct("(");
        std::vector<std::string> args;
        while (!at_punct(")")) {
            if (tok_.kind == Token::Kind::end)
                throw ParseError("unterminated group arguments", tok_.line, tok_.col);
            if (at_punct(",")) {
                bump();
                continue;
            }
            args.push_back(tok_.text);
            bump();
        }
        bump();
        return args;
    }

    // consume one statement of unknown shape: attribute up to ';' or a whole group
    void skip_statement()
    {
        bump();  // statement head
        while (true) {
            if (tok_.kind == Token::Kind::end)
                throw ParseError("unexpected end of file", tok_.line, tok_.col);
            if (at_punct(";")) {
                bump();
                return;
            }
            if (at_punct("{")) {
                skip_braced();
                // optional trailing ';' after a group
                if (at_punct(";"))
                    bump();
                return;
            }
            if (at_punct("}"))
                return;  // attribute without ';' at end of group
            bump();
        }
    }

    void skip_braced()
    {
        expect_punct("{");
        int depth = 1;
        while (depth > 0) {
            if (tok_.kind == Token::Kind::end)
                throw ParseError("unbalanced braces", tok_.line, tok_.col);
            if (at_punct("{"))
                ++depth;
            else if (at_punct("}"))
                --depth;
            bump();
        }
    }

    std::string parse_attr_value()
    {
        expect_punct(":");
        std::string value;
        bool first = true;
        while (!at_punct(";")) {
            if (tok_.kind == Token::Kind::end)
                throw ParseError("unterminated attribute", tok_.line, tok_.col);
            if (!first)
                value += ' ';
            value += tok_.text;
            first = false;
            bump();
        }
        bump();
        return value;
    }

    CellDef parse_cell()
    {
        int cell_line = tok_.line;
        bump();  // 'cell'
        auto args = parse_group_args();
        if (args.empty())
            throw ParseError("cell group needs a name", cell_line, 1);
        CellDef cell;
        cell.name = args[0];
        bool have_area = false;
        expect_punct("{");
        while (!at_punct("}")) {
            if (tok_.kind == Token::Kind::end)
                throw ParseError("unexpected end of file in cell " + cell.name,
                                 tok_.line, tok_.col);
            if (tok_.kind != Token::Kind::ident) {
                skip_statement();
                continue;
            }
            if (tok_.text == "area") {
                bump();
                std::string v = parse_attr_value();
                try {
                    cell.area = std::stod(v);
                } catch (const std::exception&) {
                    throw ParseError("bad area value in cell " + cell.name, cell_line, 1);
                }
                if (cell.area < 0)
                    throw ParseError("negative area in cell " + cell.name, cell_line, 1);
                have_area = true;
            } else if (tok_.text == "pin") {
                cell.pins.push_back(parse_pin(cell.name));
            } else if (tok_.text == "ff") {
                cell.ff = parse_ff(cell.name);
            } else {
                skip_statement();
            }
        }
        expect_punct("}");
        validate_cell(cell, have_area, cell_line);
        return cell;
    }

    PinDef parse_pin(const std::string& cell_name)
    {
        int line = tok_.line;
        bump();  // 'pin'
        auto args = parse_group_args();
        if (args.size() != 1)
            throw ParseError("pin group needs exactly one name in cell " + cell_name,
                             line, 1);
        PinDef pin;
        pin.name = args[0];
        std::optional<std::string> function_text;
        bool have_dir = false;
        expect_punct("{");
        while (!at_punct("}")) {
            if (tok_.kind == Token::Kind::end)
                throw ParseError("unexpected end of file in pin " + pin.name, tok_.line,
                                 tok_.col);
            if (tok_.kind != Token::Kind::ident) {
                skip_statement();
                continue;
            }
            if (tok_.text == "direction") {
                bump();
                std::string v = parse_attr_value();
                if (v == "input")
                    pin.direction = PinDir::input;
                else if (v == "output")
                    pin.direction = PinDir::output;
                else
                    throw ParseError("unsupported pin direction '" + v + "' in cell " +
                                         cell_name,
                                     line, 1);
                have_dir = true;
            } else if (tok_.text == "function") {
                bump();
                function_text = parse_attr_value();
            } else {
                skip_statement();
            }
        }
        expect_punct("}");
        if (!have_dir)
            throw ParseError("pin " + pin.name + " of cell " + cell_name +
                                 " has no direction",
                             line, 1);
        if (function_text) {
            if (pin.direction == PinDir::input)
                throw ParseError("input pin " + pin.name + " of cell " + cell_name +
                                     " has a function",
                                 line, 1);
            pin.function = parse_function(*function_text);
        }
        return pin;
    }

    SeqSpec parse_ff(const std::string& cell_name)
    {
        int line = tok_.line;
        bump();  // 'ff'
        auto args = parse_group_args();
        if (args.empty())
            throw ParseError("ff group needs a state variable in cell " + cell_name,
                             line, 1);
        SeqSpec spec;
        spec.state_var = args[0];
        std::optional<std::string> next_state;
        expect_punct("{");
        while (!at_punct("}")) {
            if (tok_.kind == Token::Kind::end)
                throw ParseError("unexpected end of file in ff group", tok_.line,
                                 tok_.col);
            if (tok_.kind != Token::Kind::ident) {
                skip_statement();
                continue;
            }
            if (tok_.text == "next_state") {
                bump();
                next_state = parse_attr_value();
            } else if (tok_.text == "clocked_on") {
                bump();
                spec.clocked_on = parse_attr_value();
            } else {
                skip_statement();
            }
        }
        expect_punct("}");
        if (!next_state)
            throw ParseError("ff group without next_state in cell " + cell_name, line, 1);
        if (spec.clocked_on.empty())
            throw ParseError("ff group without clocked_on in cell " + cell_name, line, 1);
        spec.next_state = parse_function(*next_state);
        return spec;
    }

    void validate_cell(const CellDef& cell, bool have_area, int line)
    {
        if (!have_area)
            throw ParseError("cell " + cell.name + " has no area", line, 1);
        int outputs = 0;
        for (const auto& p : cell.pins)
            if (p.direction == PinDir::output)
                ++outputs;
        if (outputs == 0)
            throw ParseError("cell " + cell.name + " has no output pin", line, 1);
        if (outputs > 1)
            throw ParseError("cell " + cell.name + " has multiple output pins", line, 1);

        auto inputs = cell.input_pins();
        auto is_input = [&](const std::string& id) {
            for (const auto& i : inputs)
                if (i == id)
                    return true;
            return false;
        };

        const PinDef* out = cell.output_pin();
        if (!out->function)
            throw ParseError("output pin " + out->name + " of cell " + cell.name +
                                 " has no function",
                             line, 1);
        for (const auto& id : expr_variables(*out->function)) {
            bool state = cell.ff && id == cell.ff->state_var;
            if (!is_input(id) && !state)
                throw ParseError("function of cell " + cell.name +
                                     " references undeclared pin " + id,
                                 line, 1);
        }
        if (cell.ff) {
            if (!is_input(cell.ff->clocked_on))
                throw ParseError("clocked_on of cell " + cell.name +
                                     " is not a declared input pin",
                                 line, 1);
            for (const auto& id : expr_variables(cell.ff->next_state))
                if (!is_input(id) && id != cell.ff->state_var)
                    throw ParseError("next_state of cell " + cell.name +
                                         " references undeclared pin " + id,
                                     line, 1);
            bool refs_state = false;
            for (const auto& id : expr_variables(*out->function))
                if (id == cell.ff->state_var)
                    refs_state = true;
            if (!refs_state)
                throw ParseError("sequential cell " + cell.name +
                                     " output does not reference state variable",
                                 line, 1);
        }
    }
};

std::string format_area(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

} // namespace

CellLibrary parse_liberty(std::string_view text)
{
    LibertyParser parser(text);
    return parser.parse();
}

std::string write_liberty(const CellLibrary& library)
{
    std::ostringstream out;
    out << "library(" << library.name << ") {\n";
    for (const auto& [name, cell] : library.cells) {
        out << "  cell(" << name << ") {\n";
        out << "    area : " << format_area(cell.area) << ";\n";
        if (cell.ff) {
            out << "    ff(" << cell.ff->state_var << ") {\n";
            out << "      next_state : \"" << to_function_string(cell.ff->next_state)
                << "\";\n";
            out << "      clocked_on : \"" << cell.ff->clocked_on << "\";\n";
            out << "    }\n";
        }
        for (const auto& pin : cell.pins) {
            out << "    pin(" << pin.name << ") {\n";
            out << "      direction : "
                << (pin.direction == PinDir::input ? "input" : "output") << ";\n";
            if (pin.function)
                out << "      function : \"" << to_function_string(*pin.function)
                    << "\";\n";
            out << "    }\n";
        }
        out << "  }\n";
    }
    out << "}\n";
    return out.str();
}

} // namespace netfuzz
