#include "netfuzz/truth_table.hpp"

#include <algorithm>
#include <stdexcept>

namespace netfuzz {

TruthTable truth_table(const BoolExpr& expr, const std::vector<std::string>& pin_order)
{
    const std::size_t n = pin_order.size();
    if (n > 8)
        throw std::invalid_argument("truth_table: more than 8 pins");
    for (const auto& v : expr_variables(expr)) {
        if (std::find(pin_order.begin(), pin_order.end(), v) == pin_order.end())
            throw std::invalid_argument("truth_table: expression pin not in order: " + v);
    }

    TruthTable table(std::size_t{1} << n);
    std::map<std::string, Logic> assignment;
    for (std::size_t i = 0; i < table.size(); ++i) {
        for (std::size_t k = 0; k < n; ++k)
            assignment[pin_order[k]] = logic_from_bit((i >> k) & 1);
        table[i] = eval_function(expr, assignment) == Logic::one ? 1 : 0;
    }
    return table;
}

TruthTable apply_permutation(const TruthTable& table, const std::vector<int>& perm)
{
    const std::size_t n = perm.size();
    if (table.size() != (std::size_t{1} << n))
        throw std::invalid_argument("apply_permutation: size mismatch");

    TruthTable out(table.size());
    for (std::size_t j = 0; j < table.size(); ++j) {
        std::size_t i = 0;
        for (std::size_t k = 0; k < n; ++k)
            if ((j >> k) & 1)
                i |= std::size_t{1} << perm[k];
        out[j] = table[i];
    }
    return out;
}

CanonicalForm canonical_form(const TruthTable& table, int n)
{
    if (n < 0 || n > 6)
        throw std::invalid_argument("canonical_form: n out of range");
    if (table.size() != (std::size_t{1} << n))
        throw std::invalid_argument("canonical_form: size mismatch");

    std::vector<int> perm(n);
    for (int k = 0; k < n; ++k)
        perm[k] = k;

    CanonicalForm best{table, perm};
    while (std::next_permutation(perm.begin(), perm.end())) {
        TruthTable candidate = apply_permutation(table, perm);
        if (candidate < best.key) {
            best.key = std::move(candidate);
            best.perm = perm;
        }
    }
    return best;
}

TruthTable canonical_key(const TruthTable& table, int n)
{
    return canonical_form(table, n).key;
}

} // namespace netfuzz
