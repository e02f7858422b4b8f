#pragma once

#include <bit>
#include <cstdint>

namespace kneser {

// All ground sets live inside one 64-bit word. Element i of [n] = {1..n}
// occupies bit (i-1).
inline constexpr int kMaxGroundSize = 64;

inline constexpr std::uint64_t full_mask(int n) {
    return n >= 64 ? ~0ull : ((1ull << n) - 1);
}

template <typename Fn>
inline void for_each_bit(std::uint64_t bits, Fn&& fn) {
    while (bits) {
        int pos = std::countr_zero(bits);
        fn(pos);
        bits &= bits - 1;
    }
}

// Software pext: gather the bits of `value` selected by `mask` into the low
// bits of the result, preserving order.
inline std::uint64_t extract_bits(std::uint64_t value, std::uint64_t mask) {
    std::uint64_t out = 0;
    int k = 0;
    while (mask) {
        std::uint64_t low = mask & -mask;
        if (value & low) out |= 1ull << k;
        ++k;
        mask &= mask - 1;
    }
    return out;
}

// Software pdep: scatter the low bits of `value` into the positions set in
// `mask`, preserving order. Inverse of extract_bits on the same mask.
inline std::uint64_t deposit_bits(std::uint64_t value, std::uint64_t mask) {
    std::uint64_t out = 0;
    while (mask) {
        std::uint64_t low = mask & -mask;
        if (value & 1) out |= low;
        value >>= 1;
        mask &= mask - 1;
    }
    return out;
}

// Ceiling division that stays correct for non-positive numerators (bounds can
// degenerate to zero or below).
inline constexpr long long ceil_div(long long a, long long b) {
    // b > 0 in every call site.
    return a >= 0 ? (a + b - 1) / b : -((-a) / b);
}

}  // namespace kneser
