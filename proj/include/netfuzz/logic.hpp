#pragma once

#include <cstdint>
#include <stdexcept>

namespace netfuzz {

/// Three-valued logic: 0, 1 and X (unknown), with Kleene semantics.
enum class Logic : std::uint8_t { zero = 0, one = 1, x = 2 };

constexpr bool is_defined(Logic v) { return v != Logic::x; }

constexpr Logic logic_not(Logic a)
{
    if (a == Logic::x)
        return Logic::x;
    return a == Logic::zero ? Logic::one : Logic::zero;
}

constexpr Logic logic_and(Logic a, Logic b)
{
    if (a == Logic::zero || b == Logic::zero)
        return Logic::zero;
    if (a == Logic::x || b == Logic::x)
        return Logic::x;
    return Logic::one;
}

constexpr Logic logic_or(Logic a, Logic b)
{
    if (a == Logic::one || b == Logic::one)
        return Logic::one;
    if (a == Logic::x || b == Logic::x)
        return Logic::x;
    return Logic::zero;
}

constexpr Logic logic_xor(Logic a, Logic b)
{
    if (a == Logic::x || b == Logic::x)
        return Logic::x;
    return a == b ? Logic::zero : Logic::one;
}

constexpr char logic_char(Logic v)
{
    switch (v) {
    case Logic::zero: return '0';
    case Logic::one: return '1';
    default: return 'x';
    }
}

inline Logic logic_from_char(char c)
{
    switch (c) {
    case '0': return Logic::zero;
    case '1': return Logic::one;
    case 'x':
    case 'X': return Logic::x;
    default: throw std::invalid_argument(std::string("not a logic value: ") + c);
    }
}

constexpr Logic logic_from_bit(bool b) { return b ? Logic::one : Logic::zero; }

} // namespace netfuzz
