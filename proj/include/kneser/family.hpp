#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "kneser/errors.hpp"
#include "kneser/subset.hpp"
#include "kneser/util.hpp"

namespace kneser {

enum class StabilityMode { almost, cyclic };

inline const char* to_string(StabilityMode m) {
    return m == StabilityMode::almost ? "almost" : "cyclic";
}

// A family of non-empty subsets of [n]. Members are deduplicated and kept
// sorted ascending under subset_compare, so member indices are canonical.
class Family {
public:
    explicit Family(int n) : n_(n) {
        if (n < 0 || n > kMaxGroundSize)
            throw PreconditionError("family ground size must be in [0, 64], got " +
                                    std::to_string(n));
    }

    Family(int n, std::vector<Subset> members) : Family(n) {
        for (const Subset& m : members) {
            if (m.ground_size() != n)
                throw PreconditionError("family member ground size " +
                                        std::to_string(m.ground_size()) +
                                        " does not match family ground size " + std::to_string(n));
            if (m.empty()) throw PreconditionError("family members must be non-empty");
        }
        std::sort(members.begin(), members.end(), SubsetOrder{});
        members.erase(std::unique(members.begin(), members.end()), members.end());
        members_ = std::move(members);
    }

    int ground_size() const { return n_; }
    int size() const { return static_cast<int>(members_.size()); }
    bool empty() const { return members_.empty(); }
    const Subset& member(int i) const { return members_[static_cast<size_t>(i)]; }
    const std::vector<Subset>& members() const { return members_; }

    // Index of a member in the canonical order, or -1 if absent.
    int index_of(const Subset& s) const {
        auto it = std::lower_bound(members_.begin(), members_.end(), s, SubsetOrder{});
        if (it != members_.end() && *it == s) return static_cast<int>(it - members_.begin());
        return -1;
    }

    bool contains(const Subset& s) const { return index_of(s) >= 0; }

private:
    int n_;
    std::vector<Subset> members_;
};

inline unsigned long long binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    unsigned long long c = 1;
    for (int i = 1; i <= k; ++i) {
        c = c * static_cast<unsigned long long>(n - k + i) / static_cast<unsigned long long>(i);
        if (c > (1ull << 40)) return 1ull << 40;  // saturate; callers only compare to guards
    }
    return c;
}

// All k-subsets of [n], in colex order.
inline Family complete_k_family(int n, int k) {
    if (n < 1 || n > kMaxGroundSize)
        throw PreconditionError("complete_k_family: n must be in [1, 64]");
    if (k < 1 || k > n)
        throw PreconditionError("complete_k_family: k must satisfy 1 <= k <= n");
    constexpr unsigned long long kMaxMembers = 4'000'000;
    if (binomial(n, k) > kMaxMembers)
        throw GuardError("complete_k_family: C(" + std::to_string(n) + "," + std::to_string(k) +
                         ") exceeds the member bound");
    std::vector<Subset> members;
    members.reserve(static_cast<size_t>(binomial(n, k)));
    std::uint64_t v = (1ull << k) - 1;
    std::uint64_t limit = full_mask(n);
    while (v <= limit) {
        members.push_back(Subset(n, v));
        // Gosper's hack: next bitmask with the same popcount.
        std::uint64_t c = v & -v;
        std::uint64_t r = v + c;
        if (r == 0) break;
        v = (((r ^ v) >> 2) / c) | r;
    }
    return Family(n, std::move(members));
}

inline Family stable_subfamily(const Family& f, int s, StabilityMode mode) {
    if (s < 1) throw PreconditionError("stable_subfamily: s must be >= 1");
    std::vector<Subset> kept;
    for (const Subset& m : f.members()) {
        bool ok = mode == StabilityMode::almost ? is_almost_s_stable(m, s) : is_s_stable(m, s);
        if (ok) kept.push_back(m);
    }
    return Family(f.ground_size(), std::move(kept));
}

// F restricted to a window X: keep members contained in X and renumber them
// through the order-preserving bijection X -> [|X|].
inline Family restrict_family(const Family& f, const Subset& window) {
    if (window.ground_size() != f.ground_size())
        throw PreconditionError("restrict_family: window ground size mismatch");
    int m = window.size();
    std::vector<Subset> members;
    for (const Subset& mem : f.members()) {
        if (mem.subset_of(window))
            members.push_back(Subset(m, extract_bits(mem.bits(), window.bits())));
    }
    return Family(m, std::move(members));
}

// Inverse renumbering: a subset of [|window|] mapped back into the window.
inline Subset embed(const Subset& local, const Subset& window) {
    if (local.ground_size() != window.size())
        throw PreconditionError("embed: local ground size must equal window size");
    return Subset(window.ground_size(), deposit_bits(local.bits(), window.bits()));
}

}  // namespace kneser
