#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "kneser/errors.hpp"
#include "kneser/family.hpp"
#include "kneser/subset.hpp"

namespace kneser {

// Vertex coloring of KG^r(F): color[i] in 1..t for family member index i.
struct Coloring {
    int t = 0;
    std::vector<int> color;
};

// An edge of KG^r(F): r member indices, pairwise disjoint subsets, sorted.
struct Edge {
    std::vector<int> members;
};

inline void check_coloring(const Family& f, const Coloring& c) {
    if (static_cast<int>(c.color.size()) != f.size())
        throw PreconditionError("coloring covers " + std::to_string(c.color.size()) +
                                " members, family has " + std::to_string(f.size()));
    for (int v : c.color)
        if (v < 1 || v > c.t)
            throw PreconditionError("coloring value " + std::to_string(v) +
                                    " outside 1.." + std::to_string(c.t));
}

namespace detail {

// Packing among the candidates (indices into f, ascending, hence ascending by
// size): find `need` pairwise disjoint members avoiding `used`. Appends the
// chosen indices to `out`.
inline bool pack_disjoint(const Family& f, const std::vector<int>& cands,
                          const std::vector<long long>& size_prefix, size_t start, int need,
                          std::uint64_t used, int free_elems, std::vector<int>* out) {
    if (need == 0) return true;
    for (size_t i = start; i + static_cast<size_t>(need) <= cands.size(); ++i) {
        // Smallest possible total size of `need` picks from here on.
        long long min_total = size_prefix[i + static_cast<size_t>(need)] - size_prefix[i];
        if (min_total > free_elems) return false;
        const Subset& m = f.member(cands[i]);
        if (m.bits() & used) continue;
        out->push_back(cands[i]);
        if (pack_disjoint(f, cands, size_prefix, i + 1, need - 1, used | m.bits(),
                          free_elems - m.size(), out))
            return true;
        out->pop_back();
    }
    return false;
}

inline std::vector<long long> size_prefix_sums(const Family& f, const std::vector<int>& cands) {
    std::vector<long long> prefix(cands.size() + 1, 0);
    for (size_t i = 0; i < cands.size(); ++i)
        prefix[i + 1] = prefix[i] + f.member(cands[i]).size();
    return prefix;
}

}  // namespace detail

inline std::optional<Edge> find_monochromatic_edge(const Family& f, const Coloring& coloring,
                                                   int r) {
    if (r < 2) throw PreconditionError("find_monochromatic_edge: r must be >= 2");
    check_coloring(f, coloring);
    std::vector<std::vector<int>> classes(static_cast<size_t>(coloring.t));
    for (int i = 0; i < f.size(); ++i)
        classes[static_cast<size_t>(coloring.color[static_cast<size_t>(i)] - 1)].push_back(i);
    for (const auto& cands : classes) {
        if (static_cast<int>(cands.size()) < r) continue;
        auto prefix = detail::size_prefix_sums(f, cands);
        std::vector<int> picked;
        if (detail::pack_disjoint(f, cands, prefix, 0, r, 0, f.ground_size(), &picked))
            return Edge{std::move(picked)};
    }
    return std::nullopt;
}

inline bool is_proper(const Family& f, const Coloring& coloring, int r) {
    return !find_monochromatic_edge(f, coloring, r).has_value();
}

// All edges of KG^r(F) in ascending lexicographic index order, refusing to
// materialize more than max_edges.
inline std::vector<Edge> edges(const Family& f, int r, long long max_edges = 1'000'000) {
    if (r < 2) throw PreconditionError("edges: r must be >= 2");
    std::vector<Edge> out;
    std::vector<int> all(static_cast<size_t>(f.size()));
    std::iota(all.begin(), all.end(), 0);
    auto prefix = detail::size_prefix_sums(f, all);
    std::vector<int> cur;
    auto rec = [&](auto&& self, size_t start, int need, std::uint64_t used,
                   int free_elems) -> void {
        if (need == 0) {
            if (static_cast<long long>(out.size()) >= max_edges)
                throw GuardError("edges: edge count exceeds bound " + std::to_string(max_edges),
                                 static_cast<long long>(out.size()));
            out.push_back(Edge{cur});
            return;
        }
        for (size_t i = start; i + static_cast<size_t>(need) <= all.size(); ++i) {
            long long min_total = prefix[i + static_cast<size_t>(need)] - prefix[i];
            if (min_total > free_elems) return;
            const Subset& m = f.member(all[i]);
            if (m.bits() & used) continue;
            cur.push_back(all[i]);
            self(self, i + 1, need - 1, used | m.bits(), free_elems - m.size());
            cur.pop_back();
        }
    };
    rec(rec, 0, r, 0, f.ground_size());
    return out;
}

// Color each member by the rank of its minimum element. Classes then share a
// common element, so they are intersecting and no class holds two disjoint
// members: proper for every r >= 2.
inline Coloring greedy_min_element_coloring(const Family& f) {
    std::vector<int> minima;
    for (const Subset& m : f.members()) minima.push_back(m.min_element());
    std::vector<int> distinct = minima;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    Coloring c;
    c.t = static_cast<int>(distinct.size());
    for (int v : minima) {
        int rank = static_cast<int>(std::lower_bound(distinct.begin(), distinct.end(), v) -
                                    distinct.begin());
        c.color.push_back(rank + 1);
    }
    return c;
}

struct ChiResult {
    int chi;
    Coloring witness;
};

namespace detail {

// Decision procedure: is KG^r(F) properly t-colorable? Vertices are branched
// in a fixed order (descending disjointness-degree, then index); colors are
// capped at one past the number already used.
class ChiSearch {
public:
    ChiSearch(const Family& f, int r) : f_(f), r_(r), v_(f.size()) {
        words_ = static_cast<size_t>((v_ + 63) / 64);
        adj_.assign(static_cast<size_t>(v_) * words_, 0);
        degree_.assign(static_cast<size_t>(v_), 0);
        for (int i = 0; i < v_; ++i)
            for (int j = i + 1; j < v_; ++j)
                if (f.member(i).disjoint_with(f.member(j))) {
                    set_adj(i, j);
                    set_adj(j, i);
                    ++degree_[static_cast<size_t>(i)];
                    ++degree_[static_cast<size_t>(j)];
                }
        order_.resize(static_cast<size_t>(v_));
        std::iota(order_.begin(), order_.end(), 0);
        std::stable_sort(order_.begin(), order_.end(), [&](int a, int b) {
            return degree_[static_cast<size_t>(a)] > degree_[static_cast<size_t>(b)];
        });
    }

    // Greedy packing of pairwise disjoint members; its size P forces
    // chi >= ceil(P / (r-1)).
    int greedy_packing_size() const {
        std::uint64_t used = 0;
        int count = 0;
        for (int i = 0; i < v_; ++i)
            if (!(f_.member(i).bits() & used)) {
                used |= f_.member(i).bits();
                ++count;
            }
        return count;
    }

    bool decide(int t, Coloring* out) {
        t_ = t;
        color_.assign(static_cast<size_t>(v_), 0);
        class_mask_.assign(static_cast<size_t>(t) * words_, 0);
        if (r_ == 2) {
            allowed_.assign(static_cast<size_t>(v_), t >= 64 ? ~0ull : ((1ull << t) - 1));
            if (!decide2(0, 0)) return false;
        } else {
            if (!decideGeneric(0, 0)) return false;
        }
        out->t = t;
        out->color = color_;
        return true;
    }

private:
    void set_adj(int i, int j) {
        adj_[static_cast<size_t>(i) * words_ + static_cast<size_t>(j / 64)] |=
            1ull << (j % 64);
    }
    const std::uint64_t* row(int i) const { return &adj_[static_cast<size_t>(i) * words_]; }
    std::uint64_t* cls(int c) { return &class_mask_[static_cast<size_t>(c) * words_]; }

    bool row_intersects(const std::uint64_t* a, const std::uint64_t* b) const {
        for (size_t w = 0; w < words_; ++w)
            if (a[w] & b[w]) return true;
        return false;
    }

    // r = 2: forward-checking graph coloring over the disjointness graph.
    bool decide2(int idx, int used) {
        if (idx == v_) return true;
        int v = order_[static_cast<size_t>(idx)];
        std::uint64_t options = allowed_[static_cast<size_t>(v)];
        int cap = std::min(used + 1, t_);
        options &= cap >= 64 ? ~0ull : ((1ull << cap) - 1);
        while (options) {
            int c = std::countr_zero(options);
            options &= options - 1;
            std::vector<std::pair<int, std::uint64_t>> undo;
            bool wipe = false;
            for (int u = 0; u < v_; ++u) {
                if (color_[static_cast<size_t>(u)] || u == v) continue;
                if (!(row(v)[static_cast<size_t>(u / 64)] >> (u % 64) & 1)) continue;
                std::uint64_t before = allowed_[static_cast<size_t>(u)];
                std::uint64_t after = before & ~(1ull << c);
                if (after != before) {
                    undo.push_back({u, before});
                    allowed_[static_cast<size_t>(u)] = after;
                    if (!after) wipe = true;
                }
            }
            if (!wipe) {
                color_[static_cast<size_t>(v)] = c + 1;
                if (decide2(idx + 1, std::max(used, c + 1))) return true;
                color_[static_cast<size_t>(v)] = 0;
            }
            for (auto& [u, before] : undo) allowed_[static_cast<size_t>(u)] = before;
        }
        return false;
    }

    // r >= 3: check whether putting v in class c completes r pairwise
    // disjoint members within the class.
    bool completes_edge(int v, int c) {
        std::vector<int> cands;
        const std::uint64_t* rv = row(v);
        const std::uint64_t* cm = cls(c);
        for (size_t w = 0; w < words_; ++w) {
            std::uint64_t bits = rv[w] & cm[w];
            while (bits) {
                int u = static_cast<int>(w) * 64 + std::countr_zero(bits);
                bits &= bits - 1;
                cands.push_back(u);
            }
        }
        if (static_cast<int>(cands.size()) < r_ - 1) return false;
        auto prefix = size_prefix_sums(f_, cands);
        std::vector<int> picked;
        return pack_disjoint(f_, cands, prefix, 0, r_ - 1, f_.member(v).bits(),
                             f_.ground_size() - f_.member(v).size(), &picked);
    }

    bool decideGeneric(int idx, int used) {
        if (idx == v_) return true;
        int v = order_[static_cast<size_t>(idx)];
        int cap = std::min(used + 1, t_);
        for (int c = 0; c < cap; ++c) {
            if (completes_edge(v, c)) continue;
            color_[static_cast<size_t>(v)] = c + 1;
            cls(c)[static_cast<size_t>(v / 64)] |= 1ull << (v % 64);
            if (decideGeneric(idx + 1, std::max(used, c + 1))) return true;
            cls(c)[static_cast<size_t>(v / 64)] &= ~(1ull << (v % 64));
            color_[static_cast<size_t>(v)] = 0;
        }
        return false;
    }

    const Family& f_;
    int r_, v_, t_ = 0;
    size_t words_ = 0;
    std::vector<std::uint64_t> adj_;
    std::vector<int> degree_;
    std::vector<int> order_;
    std::vector<int> color_;
    std::vector<std::uint64_t> allowed_;
    std::vector<std::uint64_t> class_mask_;
};

}  // namespace detail

// Exact chromatic number of KG^r(F) by iterative deepening from a packing
// lower bound up to the min-element greedy upper bound.
inline ChiResult chromatic_number(const Family& f, int r) {
    if (r < 2) throw PreconditionError("chromatic_number: r must be >= 2");
    if (f.empty()) return ChiResult{0, Coloring{}};
    constexpr int kMaxVertices = 20000;
    if (f.size() > kMaxVertices)
        throw GuardError("chromatic_number: family size exceeds vertex bound",
                         static_cast<long long>(f.size()));
    Coloring greedy = greedy_min_element_coloring(f);
    detail::ChiSearch search(f, r);
    int packing = search.greedy_packing_size();
    int lower = std::max(1, static_cast<int>(ceil_div(packing, r - 1)));
    for (int t = lower; t < greedy.t; ++t) {
        Coloring witness;
        if (search.decide(t, &witness)) return ChiResult{t, std::move(witness)};
    }
    return ChiResult{greedy.t, std::move(greedy)};
}

}  // namespace kneser
