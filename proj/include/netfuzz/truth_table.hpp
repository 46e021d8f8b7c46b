#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "netfuzz/bool_expr.hpp"

namespace netfuzz {

/// Dense truth table: 2^n entries of 0/1, entry i evaluated with
/// pin k = bit k of i (LSB-first).
using TruthTable = std::vector<std::uint8_t>;

/// Tabulate expr over pin_order (n <= 8). Throws on too many pins or if the
/// expression mentions a pin outside pin_order.
TruthTable truth_table(const BoolExpr& expr, const std::vector<std::string>& pin_order);

/// Reorder inputs: result slot k carries the variable that was at slot
/// perm[k], i.e. result[j] = table[i] with bit perm[k] of i = bit k of j.
TruthTable apply_permutation(const TruthTable& table, const std::vector<int>& perm);

/// Lexicographically smallest table over all n! input permutations
/// (P-canonical form), n <= 6.
TruthTable canonical_key(const TruthTable& table, int n);

/// Canonical table plus the (lexicographically smallest) permutation that
/// produces it from the input table.
struct CanonicalForm {
    TruthTable key;
    std::vector<int> perm;
};
CanonicalForm canonical_form(const TruthTable& table, int n);

inline std::string table_to_string(const TruthTable& t)
{
    std::string s(t.size(), '0');
    for (std::size_t i = 0; i < t.size(); ++i)
        if (t[i])
            s[i] = '1';
    return s;
}

} // namespace netfuzz
