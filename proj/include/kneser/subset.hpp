#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "kneser/errors.hpp"
#include "kneser/util.hpp"

namespace kneser {

// A subset of the ground set [n] = {1, ..., n}, stored as a bitmask.
// Element i occupies bit (i-1). n <= 64.
class Subset {
public:
    Subset() : n_(0), bits_(0) {}

    Subset(int n, std::uint64_t bits) : n_(n), bits_(bits) {
        if (n < 0 || n > kMaxGroundSize)
            throw PreconditionError("ground set size must be in [0, 64], got " + std::to_string(n));
        if (bits & ~full_mask(n))
            throw PreconditionError("subset has elements outside the ground set [" +
                                    std::to_string(n) + "]");
    }

    static Subset of(int n, std::initializer_list<int> elems) {
        std::uint64_t bits = 0;
        for (int e : elems) {
            if (e < 1 || e > n)
                throw PreconditionError("element " + std::to_string(e) +
                                        " outside ground set [" + std::to_string(n) + "]");
            bits |= 1ull << (e - 1);
        }
        return Subset(n, bits);
    }

    static Subset from_elements(int n, const std::vector<int>& elems) {
        std::uint64_t bits = 0;
        for (int e : elems) {
            if (e < 1 || e > n)
                throw PreconditionError("element " + std::to_string(e) +
                                        " outside ground set [" + std::to_string(n) + "]");
            bits |= 1ull << (e - 1);
        }
        return Subset(n, bits);
    }

    int ground_size() const { return n_; }
    std::uint64_t bits() const { return bits_; }
    int size() const { return std::popcount(bits_); }
    bool empty() const { return bits_ == 0; }

    bool contains(int e) const { return e >= 1 && e <= n_ && (bits_ >> (e - 1)) & 1; }
    bool subset_of(const Subset& other) const { return (bits_ & ~other.bits_) == 0; }
    bool disjoint_with(const Subset& other) const { return (bits_ & other.bits_) == 0; }

    // 1-based; only valid on non-empty subsets.
    int min_element() const {
        if (empty()) throw PreconditionError("min_element of empty subset");
        return std::countr_zero(bits_) + 1;
    }
    int max_element() const {
        if (empty()) throw PreconditionError("max_element of empty subset");
        return 64 - std::countl_zero(bits_);
    }

    std::vector<int> elements() const {
        std::vector<int> out;
        out.reserve(static_cast<size_t>(size()));
        for_each_bit(bits_, [&](int pos) { out.push_back(pos + 1); });
        return out;
    }

    std::string to_string() const {
        std::string s = "{";
        bool first = true;
        for (int e : elements()) {
            if (!first) s += ",";
            s += std::to_string(e);
            first = false;
        }
        return s + "}";
    }

    friend bool operator==(const Subset& a, const Subset& b) {
        return a.n_ == b.n_ && a.bits_ == b.bits_;
    }

private:
    int n_;
    std::uint64_t bits_;
};

// Total order: smaller size first, ties broken colexicographically. On equal
// sizes colex order coincides with numeric comparison of the bitmasks.
inline std::strong_ordering subset_compare(const Subset& a, const Subset& b) {
    if (a.size() != b.size()) return a.size() <=> b.size();
    return a.bits() <=> b.bits();
}

struct SubsetOrder {
    bool operator()(const Subset& a, const Subset& b) const {
        return subset_compare(a, b) == std::strong_ordering::less;
    }
};

// Pairwise gaps of at least s between consecutive elements in sorted order.
inline bool is_almost_s_stable(const Subset& sub, int s) {
    if (s < 1) throw PreconditionError("stability parameter s must be >= 1");
    std::uint64_t bits = sub.bits();
    int prev = -1;
    bool ok = true;
    for_each_bit(bits, [&](int pos) {
        if (prev >= 0 && pos - prev < s) ok = false;
        prev = pos;
    });
    return ok;
}

// Almost s-stable and additionally the cyclic gap between max and min is >= s.
inline bool is_s_stable(const Subset& sub, int s) {
    if (!is_almost_s_stable(sub, s)) return false;
    if (sub.size() <= 1) return true;
    return sub.max_element() - sub.min_element() <= sub.ground_size() - s;
}

}  // namespace kneser
