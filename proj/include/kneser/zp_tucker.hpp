#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kneser/defect.hpp"
#include "kneser/errors.hpp"
#include "kneser/family.hpp"
#include "kneser/hypergraph.hpp"
#include "kneser/subset.hpp"
#include "kneser/tucker.hpp"
#include "kneser/util.hpp"

namespace kneser {

inline bool is_prime(int p) {
    if (p < 2) return false;
    for (int d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

// A face of the Z_p model: entries (class, position) with distinct positions,
// stored as one position mask per class.
struct ZpFace {
    int n = 0;
    int p = 0;
    std::vector<std::uint64_t> cls;

    std::uint64_t support() const {
        std::uint64_t u = 0;
        for (std::uint64_t c : cls) u |= c;
        return u;
    }
    bool empty() const { return support() == 0; }
    int size() const { return std::popcount(support()); }

    ZpFace rotated(int omega) const {
        ZpFace out{n, p, std::vector<std::uint64_t>(static_cast<size_t>(p), 0)};
        for (int c = 0; c < p; ++c)
            out.cls[static_cast<size_t>((c + omega) % p)] = cls[static_cast<size_t>(c)];
        return out;
    }

    std::string to_string() const {
        std::string out = "[";
        bool first = true;
        for_each_bit(support(), [&](int b) {
            int c = 0;
            for (int i = 0; i < p; ++i)
                if (cls[static_cast<size_t>(i)] >> b & 1) c = i;
            if (!first) out += ",";
            out += "(" + std::to_string(c) + "," + std::to_string(b + 1) + ")";
            first = false;
        });
        return out + "]";
    }
};

inline ZpFace make_zp_face(int n, int p, std::vector<std::uint64_t> cls) {
    if (n < 1 || n > kMaxGroundSize) throw PreconditionError("Zp face ground size must be in [1, 64]");
    if (!is_prime(p)) throw PreconditionError("Zp face requires prime p");
    if (static_cast<int>(cls.size()) != p)
        throw PreconditionError("Zp face needs one position mask per class");
    std::uint64_t seen = 0;
    for (std::uint64_t c : cls) {
        if (c & ~full_mask(n)) throw PreconditionError("Zp face has positions outside [n]");
        if (c & seen) throw PreconditionError("Zp face repeats a position");
        seen |= c;
    }
    if (!seen) throw PreconditionError("Zp face must be non-empty");
    return ZpFace{n, p, std::move(cls)};
}

// Class of the entry with minimum position.
inline int sgn_zp(const ZpFace& a) {
    if (a.empty()) throw PreconditionError("sgn_zp: face must be non-empty");
    int b = std::countr_zero(a.support());
    for (int c = 0; c < a.p; ++c)
        if (a.cls[static_cast<size_t>(c)] >> b & 1) return c;
    return -1;  // unreachable
}

// Per class, the classes do not interact: take positions greedily from the
// right with gap >= s. This maximizes each slice's size and, among maximum
// slices, its colex rank, hence maximizes pi_2(B) under the global order.
inline ZpFace max_stable_subface(const ZpFace& a, int s) {
    if (s < 1) throw PreconditionError("max_stable_subface: s must be >= 1");
    ZpFace out{a.n, a.p, std::vector<std::uint64_t>(static_cast<size_t>(a.p), 0)};
    for (int c = 0; c < a.p; ++c) {
        std::uint64_t m = a.cls[static_cast<size_t>(c)];
        while (m) {
            int b = 63 - std::countl_zero(m);
            out.cls[static_cast<size_t>(c)] |= 1ull << b;
            m &= b - s >= 0 ? (1ull << (b - s + 1)) - 1 : 0;
        }
    }
    return out;
}

struct ZpLabel {
    int cls = 0;    // lambda_1, an element of Z_p
    int index = 0;  // lambda_2, in 1..m

    friend bool operator==(const ZpLabel&, const ZpLabel&) = default;
};

struct ZpTuckerContext {
    Family family;
    Family stable;
    Coloring coloring;
    int s = 0;
    int p = 0;
    int t = 0;
    int defect = 0;
    int alpha1 = 0;
    int alpha2 = 0;
    int alpha = 0;
    int m = 0;
};

inline ZpTuckerContext make_zp_tucker_context(const Family& f, int s, int p,
                                              const Coloring& coloring) {
    if (s < 2) throw PreconditionError("Zp labeling requires s >= 2");
    if (!is_prime(p)) throw PreconditionError("Zp labeling requires prime p");
    Family stable = stable_subfamily(f, s, StabilityMode::almost);
    check_coloring(stable, coloring);
    int n = f.ground_size();
    int defect = ecd(f, p).defect;
    int big_n = n - defect;
    int alpha1 = (s - 1) * (big_n / p);
    int alpha2 = (p - 1) * (big_n + 1) / p;
    int alpha = alpha1 + alpha2;
    return ZpTuckerContext{f,      std::move(stable), coloring, s,     p,
                           coloring.t, defect,        alpha1,   alpha2, alpha,
                           alpha + coloring.t};
}

inline ZpTuckerContext make_zp_tucker_context(const Family& f, int s, int p) {
    if (s < 2) throw PreconditionError("Zp labeling requires s >= 2");
    if (!is_prime(p)) throw PreconditionError("Zp labeling requires prime p");
    Family stable = stable_subfamily(f, s, StabilityMode::almost);
    ChiResult chi = chromatic_number(stable, p);
    return make_zp_tucker_context(f, s, p, chi.witness);
}

// The three-case Z_p labeling on the maximum stable subface B of A.
// Case 1 (a member inside a slice) lands in (alpha, alpha + t]; Case 2 (all
// slice sizes equal) in [1, alpha1]; Case 3 (sizes differ) in
// (alpha1, alpha1 + alpha2].
inline ZpLabel lambda_zp(const ZpFace& a, const ZpTuckerContext& ctx) {
    if (a.empty()) throw PreconditionError("lambda_zp: face must be non-empty");
    if (a.n != ctx.family.ground_size() || a.p != ctx.p)
        throw PreconditionError("lambda_zp: face does not match the context");
    ZpFace b = max_stable_subface(a, ctx.s);

    for (const Subset& mem : ctx.family.members()) {
        for (int c = 0; c < ctx.p; ++c) {
            if ((mem.bits() & ~b.cls[static_cast<size_t>(c)]) == 0) {
                int idx = ctx.stable.index_of(mem);
                if (idx < 0)
                    throw InvariantViolation("lambda_zp: member " + mem.to_string() +
                                             " inside a stable slice is not almost s-stable");
                return ZpLabel{c, ctx.coloring.color[static_cast<size_t>(idx)] + ctx.alpha};
            }
        }
    }

    int min_size = 64, max_size = 0;
    for (int c = 0; c < ctx.p; ++c) {
        int sz = std::popcount(b.cls[static_cast<size_t>(c)]);
        min_size = std::min(min_size, sz);
        max_size = std::max(max_size, sz);
    }
    if (min_size == max_size) {
        int min_pos = std::countr_zero(a.support()) + 1;
        int j = min_pos % (ctx.s - 1);
        if (j == 0) j = ctx.s - 1;
        int index = (ctx.s - 1) * (min_size - 1) + j;
        if (index < 1 || index > ctx.alpha1)
            throw InvariantViolation("lambda_zp: equal-slice index " + std::to_string(index) +
                                     " outside [1, alpha1] for face " + a.to_string());
        return ZpLabel{sgn_zp(a), index};
    }

    int h = 0;
    long long class_sum = 0;
    for (int c = 0; c < ctx.p; ++c)
        if (std::popcount(b.cls[static_cast<size_t>(c)]) == min_size) {
            ++h;
            class_sum += c;
        }
    int hinv = 1;
    for (int x = 1; x < ctx.p; ++x)
        if (x * h % ctx.p == 1) hinv = x;
    int cls = static_cast<int>(static_cast<long long>(hinv) * class_sum % ctx.p);
    int index = (ctx.p - 1) * min_size + ctx.p - h + ctx.alpha1;
    if (index <= ctx.alpha1 || index > ctx.alpha)
        throw InvariantViolation("lambda_zp: unequal-slice index " + std::to_string(index) +
                                 " outside (alpha1, alpha] for face " + a.to_string());
    return ZpLabel{cls, index};
}

// Base-(p+1) face index: digit 0 = absent, digit c+1 = class c.
inline long long face_index_zp(const ZpFace& a) {
    long long idx = 0, w = 1;
    for (int b = 0; b < a.n; ++b, w *= a.p + 1) {
        for (int c = 0; c < a.p; ++c)
            if (a.cls[static_cast<size_t>(c)] >> b & 1) idx += static_cast<long long>(c + 1) * w;
    }
    return idx;
}

inline ZpFace face_from_index_zp(int n, int p, long long idx) {
    ZpFace f{n, p, std::vector<std::uint64_t>(static_cast<size_t>(p), 0)};
    for (int b = 0; b < n; ++b) {
        int d = static_cast<int>(idx % (p + 1));
        idx /= p + 1;
        if (d > 0) f.cls[static_cast<size_t>(d - 1)] |= 1ull << b;
    }
    return f;
}

inline void check_zp_enumeration_guard(int n, int p) {
    if (n < 1) throw PreconditionError("faces_zp: n must be >= 1");
    if (!is_prime(p)) throw PreconditionError("faces_zp: p must be prime");
    bool ok;
    switch (p) {
        case 2: ok = n <= 12; break;
        case 3: ok = n <= 8; break;
        case 5: ok = n <= 5; break;
        default: {
            long long cost = 1;
            ok = true;
            for (int i = 0; i < n; ++i) {
                cost *= 2 * p + 1;
                if (cost > 300'000'000) { ok = false; break; }
            }
        }
    }
    if (!ok)
        throw GuardError("faces_zp: (n, p) = (" + std::to_string(n) + ", " + std::to_string(p) +
                         ") exceeds the enumeration guard");
}

// All (p+1)^n - 1 non-empty faces, in face-index order.
inline std::vector<ZpFace> faces_zp(int n, int p) {
    check_zp_enumeration_guard(n, p);
    long long total = pow_ll(p + 1, n);
    std::vector<ZpFace> out;
    out.reserve(static_cast<size_t>(total - 1));
    for (long long idx = 1; idx < total; ++idx) out.push_back(face_from_index_zp(n, p, idx));
    return out;
}

inline std::vector<ZpLabel> lambda_zp_table(const ZpTuckerContext& ctx) {
    int n = ctx.family.ground_size();
    check_zp_enumeration_guard(n, ctx.p);
    long long total = pow_ll(ctx.p + 1, n);
    std::vector<ZpLabel> table(static_cast<size_t>(total));
    for (long long idx = 1; idx < total; ++idx)
        table[static_cast<size_t>(idx)] = lambda_zp(face_from_index_zp(n, ctx.p, idx), ctx);
    return table;
}

namespace detail {

// Spread: lift each reachable class set S to S plus {w}.
inline std::uint32_t spread_classes(std::uint32_t sets, int w) {
    std::uint32_t out = 0;
    while (sets) {
        int s = std::countr_zero(sets);
        sets &= sets - 1;
        out |= 1u << (s | (1 << w));
    }
    return out;
}

struct ZpAuditState {
    const std::vector<ZpLabel>& table;
    const ZpTuckerContext& ctx;
    int n;
    long long total;
    AuditReport* report;
};

// Condition 1: nested pairs with equal low lambda_2 must share lambda_1.
// Enumerates every pair A1 subset of A2 with a (2p+1)-way digit recursion.
inline void zp_check_condition1(ZpAuditState& st, int b, long long ia, long long ib,
                                long long w) {
    if (st.report->violations.size() >= kMaxAuditViolations) return;
    if (b == st.n) {
        if (ia == 0 || ib == 0 || ia == ib) return;
        const ZpLabel& la = st.table[static_cast<size_t>(ia)];
        const ZpLabel& lb = st.table[static_cast<size_t>(ib)];
        if (la.index == lb.index && la.index <= st.ctx.alpha && la.cls != lb.cls)
            add_violation(st.report,
                          {"condition1",
                           {face_from_index_zp(st.n, st.ctx.p, ia).to_string(),
                            face_from_index_zp(st.n, st.ctx.p, ib).to_string()},
                           "nested pair with equal lambda_2 <= alpha but distinct lambda_1"});
        return;
    }
    zp_check_condition1(st, b + 1, ia, ib, w * (st.ctx.p + 1));
    for (int c = 1; c <= st.ctx.p; ++c) {
        zp_check_condition1(st, b + 1, ia + c * w, ib + c * w, w * (st.ctx.p + 1));
        zp_check_condition1(st, b + 1, ia, ib + c * w, w * (st.ctx.p + 1));
    }
}

// Enumerate the proper non-empty subfaces of the face with digits `digits`
// (position, digit) and call fn(index) on each.
template <typename Fn>
inline void for_each_proper_subface(const std::vector<std::pair<int, int>>& digits,
                                    const std::vector<long long>& weights, long long full,
                                    Fn&& fn) {
    size_t k = digits.size();
    for (std::uint64_t drop = 1; drop < (1ull << k); ++drop) {
        long long idx = full;
        std::uint64_t d = drop;
        while (d) {
            int i = std::countr_zero(d);
            d &= d - 1;
            idx -= digits[static_cast<size_t>(i)].second *
                   weights[static_cast<size_t>(digits[static_cast<size_t>(i)].first)];
        }
        if (idx != 0) fn(idx);
    }
}

// Reconstruct (for diagnostics only) a nested chain with equal lambda_2 = v
// whose lambda_1 values cover `need`.
inline bool zp_find_chain(const ZpAuditState& st, const std::vector<long long>& weights,
                          long long ia, std::uint32_t need, std::vector<long long>* chain) {
    const ZpLabel& la = st.table[static_cast<size_t>(ia)];
    std::uint32_t rest = need & ~(1u << la.cls);
    chain->push_back(ia);
    if (rest == 0) return true;
    ZpFace a = face_from_index_zp(st.n, st.ctx.p, ia);
    std::vector<std::pair<int, int>> digits;
    for (int b = 0; b < st.n; ++b)
        for (int c = 0; c < st.ctx.p; ++c)
            if (a.cls[static_cast<size_t>(c)] >> b & 1) digits.push_back({b, c + 1});
    bool found = false;
    for_each_proper_subface(digits, weights, ia, [&](long long ib) {
        if (found) return;
        if (st.table[static_cast<size_t>(ib)].index != la.index) return;
        if (zp_find_chain(st, weights, ib, rest, chain)) {
            found = true;
            return;
        }
    });
    if (!found) chain->pop_back();
    return found;
}

// Condition 2 via reachable class-set DP in ascending support-size order:
// reach[A] holds every set of lambda_1 values collectible by a strictly
// nested chain ending at A with constant lambda_2 > alpha. A full set of
// classes means p nested faces with pairwise distinct lambda_1.
inline void zp_check_condition2(ZpAuditState& st) {
    int p = st.ctx.p;
    std::vector<long long> weights(static_cast<size_t>(st.n));
    long long w = 1;
    for (int b = 0; b < st.n; ++b, w *= p + 1) weights[static_cast<size_t>(b)] = w;

    std::vector<std::vector<long long>> by_size(static_cast<size_t>(st.n + 1));
    for (long long idx = 1; idx < st.total; ++idx) {
        long long x = idx;
        int sz = 0;
        while (x) {
            if (x % (p + 1)) ++sz;
            x /= p + 1;
        }
        by_size[static_cast<size_t>(sz)].push_back(idx);
    }

    std::vector<std::uint32_t> reach(static_cast<size_t>(st.total), 0);
    std::uint32_t full_bit = 1u << ((1u << p) - 1);
    for (int sz = 1; sz <= st.n; ++sz) {
        for (long long ia : by_size[static_cast<size_t>(sz)]) {
            const ZpLabel& la = st.table[static_cast<size_t>(ia)];
            if (la.index <= st.ctx.alpha) continue;
            std::uint32_t sets = 1u << (1 << la.cls);
            ZpFace a = face_from_index_zp(st.n, p, ia);
            std::vector<std::pair<int, int>> digits;
            for (int b = 0; b < st.n; ++b)
                for (int c = 0; c < p; ++c)
                    if (a.cls[static_cast<size_t>(c)] >> b & 1) digits.push_back({b, c + 1});
            std::uint32_t from_below = 0;
            for_each_proper_subface(digits, weights, ia, [&](long long ib) {
                if (st.table[static_cast<size_t>(ib)].index == la.index)
                    from_below |= reach[static_cast<size_t>(ib)];
            });
            sets |= spread_classes(from_below, la.cls);
            reach[static_cast<size_t>(ia)] = sets;
            if (sets & full_bit) {
                std::vector<long long> chain;
                zp_find_chain(st, weights, ia, (1u << p) - 1, &chain);
                std::vector<std::string> faces;
                for (auto it = chain.rbegin(); it != chain.rend(); ++it)
                    faces.push_back(face_from_index_zp(st.n, p, *it).to_string());
                add_violation(st.report,
                              {"condition2", faces,
                               "nested chain with equal lambda_2 > alpha covering all classes"});
                if (st.report->violations.size() >= kMaxAuditViolations) return;
            }
        }
    }
}

inline void audit_zp_table(const std::vector<ZpLabel>& table, const ZpTuckerContext& ctx,
                           AuditReport* report) {
    int n = ctx.family.ground_size();
    long long total = pow_ll(ctx.p + 1, n);
    ZpAuditState st{table, ctx, n, total, report};
    for (long long idx = 1; idx < total; ++idx) {
        ZpFace a = face_from_index_zp(n, ctx.p, idx);
        const ZpLabel& la = table[static_cast<size_t>(idx)];
        if (la.cls < 0 || la.cls >= ctx.p || la.index < 1 || la.index > ctx.m)
            add_violation(report, {"range", {a.to_string()},
                                   "label (" + std::to_string(la.cls) + ", " +
                                       std::to_string(la.index) + "), m = " +
                                       std::to_string(ctx.m)});
        long long ridx = face_index_zp(a.rotated(1));
        const ZpLabel& lr = table[static_cast<size_t>(ridx)];
        if (lr.cls != (la.cls + 1) % ctx.p || lr.index != la.index)
            add_violation(report, {"equivariance", {a.to_string(), a.rotated(1).to_string()},
                                   "lambda(rot A) != rot lambda(A)"});
    }
    zp_check_condition1(st, 0, 0, 0, 1);
    zp_check_condition2(st);
}

}  // namespace detail

// Exhaustive audit of the Z_p labeling: range, equivariance, both Z_p-Tucker
// conditions, and the alpha + (p-1)(m-alpha) >= n conclusion.
inline AuditReport audit_zptucker(const ZpTuckerContext& ctx) {
    int n = ctx.family.ground_size();
    std::vector<ZpLabel> table = lambda_zp_table(ctx);
    AuditReport report;
    report.faces = pow_ll(ctx.p + 1, n) - 1;
    report.m = ctx.m;
    report.alpha = ctx.alpha;
    report.coloring_proper = is_proper(ctx.stable, ctx.coloring, ctx.p);
    detail::audit_zp_table(table, ctx, &report);
    report.bound_holds =
        ctx.alpha + static_cast<long long>(ctx.p - 1) * (ctx.m - ctx.alpha) >= n;
    return report;
}

inline AuditReport audit_zptucker(const Family& f, int s, int p, const Coloring& coloring) {
    check_zp_enumeration_guard(f.ground_size(), p);
    return audit_zptucker(make_zp_tucker_context(f, s, p, coloring));
}

inline AuditReport audit_zptucker(const Family& f, int s, int p) {
    check_zp_enumeration_guard(f.ground_size(), p);
    return audit_zptucker(make_zp_tucker_context(f, s, p));
}

}  // namespace kneser
