#pragma once

// Brute-force reference implementations used only by the tests. Everything
// here recomputes results from first principles over raw bitmasks, so a bug
// in the library's search code cannot hide in the oracle.

#include <bit>
#include <cstdint>
#include <vector>

#include <kneser/family.hpp>
#include <kneser/hypergraph.hpp>
#include <kneser/subset.hpp>
#include <kneser/tucker.hpp>
#include <kneser/zp_tucker.hpp>

namespace oracle {

inline std::vector<std::uint64_t> member_masks(const kneser::Family& f) {
    std::vector<std::uint64_t> masks;
    for (const kneser::Subset& m : f.members()) masks.push_back(m.bits());
    return masks;
}

inline bool has_r_disjoint(const std::vector<std::uint64_t>& masks, int r, size_t from = 0,
                           std::uint64_t used = 0) {
    if (r == 0) return true;
    for (size_t i = from; i < masks.size(); ++i)
        if (!(masks[i] & used) && has_r_disjoint(masks, r - 1, i + 1, used | masks[i]))
            return true;
    return false;
}

inline bool coloring_proper(const std::vector<std::uint64_t>& masks,
                            const std::vector<int>& color, int t, int r) {
    for (int c = 1; c <= t; ++c) {
        std::vector<std::uint64_t> cls;
        for (size_t i = 0; i < masks.size(); ++i)
            if (color[i] == c) cls.push_back(masks[i]);
        if (has_r_disjoint(cls, r)) return false;
    }
    return true;
}

// Minimum t admitting a proper coloring, by restricted-growth enumeration of
// set partitions into at most t blocks.
inline int chromatic_number(const kneser::Family& f, int r) {
    std::vector<std::uint64_t> masks = member_masks(f);
    if (masks.empty()) return 0;
    for (int t = 1;; ++t) {
        std::vector<int> color(masks.size(), 0);
        auto assign = [&](auto&& self, size_t i, int used) -> bool {
            if (i == masks.size()) return coloring_proper(masks, color, used, r);
            int cap = used < t ? used + 1 : t;
            for (int c = 1; c <= cap; ++c) {
                color[i] = c;
                if (self(self, i + 1, c > used ? c : used)) return true;
            }
            return false;
        };
        if (assign(assign, 0, 0)) return t;
    }
}

// Minimum |X0| over all assignments of elements to X0 or one of r parts with
// sizes within one of each other and no member inside a part.
inline int ecd(const kneser::Family& f, int r) {
    int n = f.ground_size();
    std::vector<std::uint64_t> masks = member_masks(f);
    std::vector<int> part(static_cast<size_t>(n), 0);
    int best = n + 1;
    auto assign = [&](auto&& self, int e) -> void {
        if (e == n) {
            std::vector<int> size(static_cast<size_t>(r + 1), 0);
            std::vector<std::uint64_t> block(static_cast<size_t>(r + 1), 0);
            for (int i = 0; i < n; ++i) {
                ++size[static_cast<size_t>(part[static_cast<size_t>(i)])];
                block[static_cast<size_t>(part[static_cast<size_t>(i)])] |= 1ull << i;
            }
            int lo = n, hi = 0;
            for (int b = 1; b <= r; ++b) {
                lo = size[static_cast<size_t>(b)] < lo ? size[static_cast<size_t>(b)] : lo;
                hi = size[static_cast<size_t>(b)] > hi ? size[static_cast<size_t>(b)] : hi;
            }
            if (hi - lo > 1) return;
            for (int b = 1; b <= r; ++b)
                for (std::uint64_t m : masks)
                    if ((m & block[static_cast<size_t>(b)]) == m) return;
            if (size[0] < best) best = size[0];
            return;
        }
        for (int b = 0; b <= r; ++b) {
            part[static_cast<size_t>(e)] = b;
            self(self, e + 1);
        }
    };
    assign(assign, 0);
    return best;
}

// Maximum size of an alternating subface, over all subsets of the support.
inline int max_alternating_size(const kneser::SignedFace& a) {
    std::vector<std::pair<int, int>> entries;  // (position, sign)
    for (int b = 0; b < a.n; ++b) {
        if (a.pos >> b & 1) entries.push_back({b, +1});
        if (a.neg >> b & 1) entries.push_back({b, -1});
    }
    int best = 0;
    for (std::uint64_t sub = 1; sub < (1ull << entries.size()); ++sub) {
        int prev = 0, count = 0;
        bool ok = true;
        for (size_t i = 0; i < entries.size() && ok; ++i) {
            if (!(sub >> i & 1)) continue;
            if (entries[i].second == prev) ok = false;
            prev = entries[i].second;
            ++count;
        }
        if (ok && count > best) best = count;
    }
    return best;
}

inline bool is_alternating(const kneser::SignedFace& a) {
    int prev = 0;
    bool ok = true;
    for (int b = 0; b < a.n; ++b) {
        int sign = (a.pos >> b & 1) ? 1 : (a.neg >> b & 1) ? -1 : 0;
        if (sign == 0) continue;
        if (sign == prev) ok = false;
        prev = sign;
    }
    return ok;
}

inline bool slice_gaps_ok(std::uint64_t slice, int s) {
    int prev = -1;
    bool ok = true;
    kneser::for_each_bit(slice, [&](int b) {
        if (prev >= 0 && b - prev < s) ok = false;
        prev = b;
    });
    return ok;
}

// Maximum size of a subface whose class slices all have internal gaps >= s.
inline int max_stable_subface_size(const kneser::ZpFace& a, int s) {
    std::vector<std::pair<int, int>> entries;  // (position, class)
    for (int c = 0; c < a.p; ++c)
        kneser::for_each_bit(a.cls[static_cast<size_t>(c)],
                             [&](int b) { entries.push_back({b, c}); });
    int best = 0;
    for (std::uint64_t sub = 0; sub < (1ull << entries.size()); ++sub) {
        std::vector<std::uint64_t> slices(static_cast<size_t>(a.p), 0);
        for (size_t i = 0; i < entries.size(); ++i)
            if (sub >> i & 1)
                slices[static_cast<size_t>(entries[i].second)] |= 1ull << entries[i].first;
        bool ok = true;
        int count = 0;
        for (std::uint64_t sl : slices) {
            if (!slice_gaps_ok(sl, s)) ok = false;
            count += std::popcount(sl);
        }
        if (ok && count > best) best = count;
    }
    return best;
}

}  // namespace oracle
