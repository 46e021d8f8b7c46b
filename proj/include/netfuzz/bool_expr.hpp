#pragma once

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "netfuzz/logic.hpp"

namespace netfuzz {

/// Boolean expression tree as found in Liberty function strings.
/// Operators: ! (prefix) or ' (postfix) negation, & or * conjunction,
/// | or + disjunction, ^ exclusive-or, constants 0/1, parentheses and
/// implicit conjunction by juxtaposition. Precedence: NOT > AND > XOR > OR.
struct BoolExpr {
    enum class Op : std::uint8_t { var, const0, const1, not_op, and_op, or_op, xor_op };

    Op op = Op::const0;
    std::string name;            // leaf identifier when op == var
    std::vector<BoolExpr> args;  // operands for not/and/or/xor

    static BoolExpr variable(std::string id)
    {
        BoolExpr e;
        e.op = Op::var;
        e.name = std::move(id);
        return e;
    }
    static BoolExpr constant(bool v)
    {
        BoolExpr e;
        e.op = v ? Op::const1 : Op::const0;
        return e;
    }
    static BoolExpr make(Op o, std::vector<BoolExpr> operands)
    {
        BoolExpr e;
        e.op = o;
        e.args = std::move(operands);
        return e;
    }
    static BoolExpr not_of(BoolExpr a) { return make(Op::not_op, {std::move(a)}); }
    static BoolExpr and_of(BoolExpr a, BoolExpr b) { return make(Op::and_op, {std::move(a), std::move(b)}); }
    static BoolExpr or_of(BoolExpr a, BoolExpr b) { return make(Op::or_op, {std::move(a), std::move(b)}); }
    static BoolExpr xor_of(BoolExpr a, BoolExpr b) { return make(Op::xor_op, {std::move(a), std::move(b)}); }

    bool operator==(const BoolExpr& other) const
    {
        return op == other.op && name == other.name && args == other.args;
    }
};

/// Parse a Liberty-style function string. Throws ParseError on bad syntax.
BoolExpr parse_function(std::string_view text);

/// Canonical fully-parenthesized emission; parse_function(to_function_string(e)) == e.
std::string to_function_string(const BoolExpr& expr);

/// Kleene three-valued evaluation. Every leaf identifier must be bound.
Logic eval_function(const BoolExpr& expr, const std::map<std::string, Logic>& assignment);

/// Leaf identifiers in first-occurrence order (duplicates removed).
std::vector<std::string> expr_variables(const BoolExpr& expr);

/// True when no identifier occurs more than once in the tree.
bool is_read_once(const BoolExpr& expr);

} // namespace netfuzz
