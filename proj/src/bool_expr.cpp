#include "netfuzz/bool_expr.hpp"

#include <cctype>

#include "netfuzz/errors.hpp"

namespace netfuzz {

namespace {

// Recursive-descent parser over a function string.
// grammar:  or   := xor ( ('|' | '+') xor )*
//           xor  := and ( '^' and )*
//           and  := unary ( ('&' | '*')? unary )*      (juxtaposition = AND)
//           unary:= '!' unary | primary ("'")*
//           primary := ident | '0' | '1' | '(' or ')'
struct FunctionParser {
    std::string_view text;
    std::size_t pos = 0;

    explicit FunctionParser(std::string_view t) : text(t) {}

    void skip_ws()
    {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos])))
            ++pos;
    }

    int peek()
    {
        skip_ws();
        return pos < text.size() ? static_cast<unsigned char>(text[pos]) : -1;
    }

    bool starts_primary(int c)
    {
        return c == '(' || c == '!' || c == '0' || c == '1' || c == '_' ||
               std::isalpha(c);
    }

    BoolExpr parse_or()
    {
        BoolExpr lhs = parse_xor();
        while (true) {
            int c = peek();
            if (c == '|' || c == '+') {
                ++pos;
                lhs = BoolExpr::or_of(std::move(lhs), parse_xor());
            } else {
                return lhs;
            }
        }
    }

    BoolExpr parse_xor()
    {
        BoolExpr lhs = parse_and();
        while (peek() == '^') {
            ++pos;
            lhs = BoolExpr::xor_of(std::move(lhs), parse_and());
        }
        return lhs;
    }

    BoolExpr parse_and()
    {
        BoolExpr lhs = parse_unary();
        while (true) {
            int c = peek();
            if (c == '&' || c == '*') {
                ++pos;
                lhs = BoolExpr::and_of(std::move(lhs), parse_unary());
            } else if (starts_primary(c)) {
                lhs = BoolExpr::and_of(std::move(lhs), parse_unary());
            } else {
                return lhs;
            }
        }
    }

    BoolExpr parse_unary()
    {
        int c = peek();
        if (c == '!') {
            ++pos;
            return BoolExpr::not_of(parse_unary());
        }
        BoolExpr e = parse_primary();
        while (peek() == '\'') {
            ++pos;
            e = BoolExpr::not_of(std::move(e));
        }
        return e;
    }

    BoolExpr parse_primary()
    {
        int c = peek();
        if (c == '(') {
            ++pos;
            BoolExpr e = parse_or();
            if (peek() != ')')
                throw ParseError("expected ')' in function string", 1, static_cast<int>(pos) + 1);
            ++pos;
            while (peek() == '\'') {
                ++pos;
                e = BoolExpr::not_of(std::move(e));
            }
            return e;
        }
        if (c == '0' || c == '1') {
            ++pos;
            return BoolExpr::constant(c == '1');
        }
        if (c == '_' || std::isalpha(c)) {
            std::size_t start = pos;
            while (pos < text.size()) {
                unsigned char ch = static_cast<unsigned char>(text[pos]);
                if (std::isalnum(ch) || ch == '_')
                    ++pos;
                else
                    break;
            }
            return BoolExpr::variable(std::string(text.substr(start, pos - start)));
        }
        throw ParseError("unexpected character in function string", 1,
                         static_cast<int>(pos) + 1);
    }
};

void emit(const BoolExpr& e, std::string& out)
{
    switch (e.op) {
    case BoolExpr::Op::var:
        out += e.name;
        return;
    case BoolExpr::Op::const0:
        out += '0';
        return;
    case BoolExpr::Op::const1:
        out += '1';
        return;
    case BoolExpr::Op::not_op:
        out += '!';
        if (e.args[0].op == BoolExpr::Op::var || e.args[0].op == BoolExpr::Op::const0 ||
            e.args[0].op == BoolExpr::Op::const1) {
            emit(e.args[0], out);
        } else if (e.args[0].op == BoolExpr::Op::not_op) {
            out += '(';
            emit(e.args[0], out);
            out += ')';
        } else {
            emit(e.args[0], out);  // and/or/xor emit their own parens
        }
        return;
    case BoolExpr::Op::and_op:
    case BoolExpr::Op::or_op:
    case BoolExpr::Op::xor_op: {
        char sym = e.op == BoolExpr::Op::and_op ? '&'
                   : e.op == BoolExpr::Op::or_op ? '|'
                                                 : '^';
        out += '(';
        for (std::size_t i = 0; i < e.args.size(); ++i) {
            if (i)
                out += sym;
            emit(e.args[i], out);
        }
        out += ')';
        return;
    }
    }
}

void collect_vars(const BoolExpr& e, std::vector<std::string>& order)
{
    if (e.op == BoolExpr::Op::var) {
        for (const auto& v : order)
            if (v == e.name)
                return;
        order.push_back(e.name);
        return;
    }
    for (const auto& a : e.args)
        collect_vars(a, order);
}

void count_vars(const BoolExpr& e, std::map<std::string, int>& counts)
{
    if (e.op == BoolExpr::Op::var) {
        ++counts[e.name];
        return;
    }
    for (const auto& a : e.args)
        count_vars(a, counts);
}

} // namespace

BoolExpr parse_function(std::string_view text)
{
    FunctionParser p(text);
    BoolExpr e = p.parse_or();
    if (p.peek() != -1)
        throw ParseError("trailing input in function string", 1,
                         static_cast<int>(p.pos) + 1);
    return e;
}

std::string to_function_string(const BoolExpr& expr)
{
    std::string out;
    emit(expr, out);
    return out;
}

Logic eval_function(const BoolExpr& expr, const std::map<std::string, Logic>& assignment)
{
    switch (expr.op) {
    case BoolExpr::Op::var: {
        auto it = assignment.find(expr.name);
        if (it == assignment.end())
            throw std::out_of_range("unbound identifier in function: " + expr.name);
        return it->second;
    }
    case BoolExpr::Op::const0:
        return Logic::zero;
    case BoolExpr::Op::const1:
        return Logic::one;
    case BoolExpr::Op::not_op:
        return logic_not(eval_function(expr.args[0], assignment));
    case BoolExpr::Op::and_op: {
        Logic v = Logic::one;
        for (const auto& a : expr.args)
            v = logic_and(v, eval_function(a, assignment));
        return v;
    }
    case BoolExpr::Op::or_op: {
        Logic v = Logic::zero;
        for (const auto& a : expr.args)
            v = logic_or(v, eval_function(a, assignment));
        return v;
    }
    case BoolExpr::Op::xor_op: {
        Logic v = Logic::zero;
        for (const auto& a : expr.args)
            v = logic_xor(v, eval_function(a, assignment));
        return v;
    }
    }
    throw std::logic_error("corrupt BoolExpr");
}

std::vector<std::string> expr_variables(const BoolExpr& expr)
{
    std::vector<std::string> order;
    collect_vars(expr, order);
    return order;
}

bool is_read_once(const BoolExpr& expr)
{
    std::map<std::string, int> counts;
    count_vars(expr, counts);
    for (const auto& [_, n] : counts)
        if (n > 1)
            return false;
    return true;
}

} // namespace netfuzz
