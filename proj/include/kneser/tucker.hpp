#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kneser/defect.hpp"
#include "kneser/errors.hpp"
#include "kneser/family.hpp"
#include "kneser/hypergraph.hpp"
#include "kneser/subset.hpp"
#include "kneser/util.hpp"

namespace kneser {

// A signed subset of [n]: entries +i / -i with distinct absolute values,
// stored as two disjoint position masks.
struct SignedFace {
    int n = 0;
    std::uint64_t pos = 0;
    std::uint64_t neg = 0;

    bool empty() const { return (pos | neg) == 0; }
    int size() const { return std::popcount(pos | neg); }
    SignedFace negated() const { return SignedFace{n, neg, pos}; }

    std::string to_string() const {
        std::string out = "[";
        bool first = true;
        for_each_bit(pos | neg, [&](int b) {
            if (!first) out += ",";
            if (neg >> b & 1) out += "-";
            out += std::to_string(b + 1);
            first = false;
        });
        return out + "]";
    }
};

inline SignedFace make_signed_face(int n, std::uint64_t pos, std::uint64_t neg) {
    if (n < 1 || n > kMaxGroundSize)
        throw PreconditionError("signed face ground size must be in [1, 64]");
    if ((pos | neg) & ~full_mask(n))
        throw PreconditionError("signed face has entries outside the ground set");
    if (pos & neg)
        throw PreconditionError("signed face assigns both signs to one position");
    if (!(pos | neg)) throw PreconditionError("signed face must be non-empty");
    return SignedFace{n, pos, neg};
}

// Sign of the entry with minimum absolute value.
inline int sgn_z2(const SignedFace& a) {
    if (a.empty()) throw PreconditionError("sgn_z2: face must be non-empty");
    int b = std::countr_zero(a.pos | a.neg);
    return (a.pos >> b & 1) ? 1 : -1;
}

// Largest alternating subface: walking entries by ascending absolute value,
// take the last (largest) entry of each maximal run of equal sign. The result
// alternates, has one entry per run (the maximum count), and is colex-maximal.
inline SignedFace alt(const SignedFace& a) {
    if (a.empty()) throw PreconditionError("alt: face must be non-empty");
    SignedFace out{a.n, 0, 0};
    int run_last = -1;
    bool run_sign_pos = false;
    for_each_bit(a.pos | a.neg, [&](int b) {
        bool sign_pos = (a.pos >> b & 1) != 0;
        if (run_last >= 0 && sign_pos != run_sign_pos) {
            if (run_sign_pos)
                out.pos |= 1ull << run_last;
            else
                out.neg |= 1ull << run_last;
        }
        run_last = b;
        run_sign_pos = sign_pos;
    });
    if (run_sign_pos)
        out.pos |= 1ull << run_last;
    else
        out.neg |= 1ull << run_last;
    return out;
}

// All the data the Z2 labeling needs: the family, its almost s-stable part
// with a coloring, and the derived parameters alpha = n - ecd^s(F), m =
// alpha + t.
struct TuckerZ2Context {
    Family family;
    Family stable;
    Coloring coloring;
    int s = 0;
    int t = 0;
    int defect = 0;
    int alpha = 0;
    int m = 0;
};

inline TuckerZ2Context make_tucker_z2_context(const Family& f, int s, const Coloring& coloring) {
    if (s < 2 || s % 2 != 0) throw PreconditionError("Z2 labeling requires even s >= 2");
    Family stable = stable_subfamily(f, s, StabilityMode::almost);
    check_coloring(stable, coloring);
    int defect = ecd(f, s).defect;
    int alpha = f.ground_size() - defect;
    return TuckerZ2Context{f, std::move(stable), coloring, s, coloring.t, defect, alpha,
                           alpha + coloring.t};
}

/// Convenience overload: color the stable subfamily optimally first.
inline TuckerZ2Context make_tucker_z2_context(const Family& f, int s) {
    if (s < 2 || s % 2 != 0) throw PreconditionError("Z2 labeling requires even s >= 2");
    Family stable = stable_subfamily(f, s, StabilityMode::almost);
    ChiResult chi = chromatic_number(stable, 2);
    return make_tucker_z2_context(f, s, chi.witness);
}

// The two-case Z2 labeling. Case 1 keys on the alternating size; Case 2
// splits the alternating subface round-robin into s almost s-stable blocks,
// one of which must contain a family member.
inline int lambda_z2(const SignedFace& a, const TuckerZ2Context& ctx) {
    if (a.empty()) throw PreconditionError("lambda_z2: face must be non-empty");
    if (a.n != ctx.family.ground_size())
        throw PreconditionError("lambda_z2: face ground size mismatch");
    SignedFace al = alt(a);
    int l = al.size();
    if (l <= ctx.alpha) return sgn_z2(a) * l;

    std::vector<std::uint64_t> blocks(static_cast<size_t>(ctx.s), 0);
    int j = 0;
    for_each_bit(al.pos | al.neg, [&](int b) {
        blocks[static_cast<size_t>(j % ctx.s)] |= 1ull << b;
        ++j;
    });
    std::optional<Subset> best;
    for (const Subset& mem : ctx.family.members()) {
        for (std::uint64_t block : blocks) {
            if ((mem.bits() & ~block) == 0) {
                if (!best || subset_compare(*best, mem) == std::strong_ordering::less)
                    best = mem;
                break;
            }
        }
    }
    if (!best)
        throw InvariantViolation("lambda_z2: no member inside any block of face " +
                                 a.to_string() + " despite |Alt| > alpha");
    int idx = ctx.stable.index_of(*best);
    if (idx < 0)
        throw InvariantViolation("lambda_z2: selected member " + best->to_string() +
                                 " is not almost s-stable");
    int value = ctx.coloring.color[static_cast<size_t>(idx)] + ctx.alpha;
    if ((best->bits() & ~a.pos) == 0) return value;
    if ((best->bits() & ~a.neg) == 0) return -value;
    throw InvariantViolation("lambda_z2: member " + best->to_string() +
                             " straddles both signs of face " + a.to_string());
}

inline long long pow_ll(long long base, int exp) {
    long long v = 1;
    for (int i = 0; i < exp; ++i) v *= base;
    return v;
}

// Base-3 face index: digit 0 = absent, 1 = positive, 2 = negative.
inline long long face_index_z2(const SignedFace& a) {
    long long idx = 0, p = 1;
    for (int b = 0; b < a.n; ++b, p *= 3) {
        if (a.pos >> b & 1)
            idx += p;
        else if (a.neg >> b & 1)
            idx += 2 * p;
    }
    return idx;
}

inline SignedFace face_from_index_z2(int n, long long idx) {
    SignedFace f{n, 0, 0};
    for (int b = 0; b < n; ++b) {
        int d = static_cast<int>(idx % 3);
        idx /= 3;
        if (d == 1) f.pos |= 1ull << b;
        if (d == 2) f.neg |= 1ull << b;
    }
    return f;
}

inline constexpr int kMaxAuditGroundZ2 = 12;

// All 3^n - 1 non-empty signed faces, in face-index order.
inline std::vector<SignedFace> faces_z2(int n) {
    if (n < 1) throw PreconditionError("faces_z2: n must be >= 1");
    if (n > kMaxAuditGroundZ2)
        throw GuardError("faces_z2: n exceeds the enumeration guard " +
                         std::to_string(kMaxAuditGroundZ2));
    long long total = pow_ll(3, n);
    std::vector<SignedFace> out;
    out.reserve(static_cast<size_t>(total - 1));
    for (long long idx = 1; idx < total; ++idx) out.push_back(face_from_index_z2(n, idx));
    return out;
}

struct AuditViolation {
    std::string kind;
    std::vector<std::string> faces;
    std::string note;
};

struct AuditReport {
    long long faces = 0;
    std::vector<AuditViolation> violations;
    int m = 0;
    int alpha = 0;
    bool bound_holds = false;
    bool coloring_proper = false;
};

inline constexpr size_t kMaxAuditViolations = 1000;

namespace detail {

inline void add_violation(AuditReport* report, AuditViolation v) {
    if (report->violations.size() < kMaxAuditViolations)
        report->violations.push_back(std::move(v));
}

// Verifies a full lambda table (indexed by face_index_z2) against the Tucker
// lemma obligations. Exposed separately so tests can corrupt the table.
inline void audit_z2_table(const std::vector<int>& table, int n, const TuckerZ2Context& ctx,
                           AuditReport* report) {
    long long total = pow_ll(3, n);
    for (long long idx = 1; idx < total; ++idx) {
        SignedFace a = face_from_index_z2(n, idx);
        int la = table[static_cast<size_t>(idx)];
        if (la == 0 || std::abs(la) > ctx.m)
            add_violation(report, {"range", {a.to_string()},
                                   "lambda = " + std::to_string(la) + ", m = " +
                                       std::to_string(ctx.m)});
        long long nidx = face_index_z2(a.negated());
        if (nidx > idx) {
            int ln = table[static_cast<size_t>(nidx)];
            if (ln != -la)
                add_violation(report, {"equivariance", {a.to_string(), a.negated().to_string()},
                                       "lambda(-A) != -lambda(A)"});
        }
        // Case 2 block near-equality, checked against the blocks actually
        // built rather than the counting argument.
        SignedFace al = alt(a);
        if (al.size() > ctx.alpha) {
            std::vector<std::uint64_t> blocks(static_cast<size_t>(ctx.s), 0);
            int j = 0;
            for_each_bit(al.pos | al.neg, [&](int bit) {
                blocks[static_cast<size_t>(j % ctx.s)] |= 1ull << bit;
                ++j;
            });
            int lo = std::popcount(blocks[0]), hi = lo;
            for (std::uint64_t block : blocks) {
                lo = std::min(lo, std::popcount(block));
                hi = std::max(hi, std::popcount(block));
            }
            if (hi - lo > 1)
                add_violation(report, {"case2_equitability", {a.to_string()},
                                       "block sizes differ by more than 1"});
        }
    }
    // Consistency: A subset of B with |lambda(A)| = |lambda(B)| forces
    // equality. Walk all (A, B) pairs by a 5-way digit recursion.
    std::vector<AuditViolation>* viol = &report->violations;
    auto rec = [&](auto&& self, int b, long long ia, long long ib, long long p) -> void {
        if (viol->size() >= kMaxAuditViolations) return;
        if (b == n) {
            if (ia == 0 || ib == 0 || ia == ib) return;
            int la = table[static_cast<size_t>(ia)];
            int lb = table[static_cast<size_t>(ib)];
            if (std::abs(la) == std::abs(lb) && la != lb)
                add_violation(report, {"consistency",
                                       {face_from_index_z2(n, ia).to_string(),
                                        face_from_index_z2(n, ib).to_string()},
                                       "lambda(A) = -lambda(B) on a nested pair"});
            return;
        }
        self(self, b + 1, ia, ib, p * 3);
        self(self, b + 1, ia + p, ib + p, p * 3);
        self(self, b + 1, ia, ib + p, p * 3);
        self(self, b + 1, ia + 2 * p, ib + 2 * p, p * 3);
        self(self, b + 1, ia, ib + 2 * p, p * 3);
    };
    rec(rec, 0, 0, 0, 1);
}

}  // namespace detail

inline std::vector<int> lambda_z2_table(const TuckerZ2Context& ctx) {
    int n = ctx.family.ground_size();
    if (n > kMaxAuditGroundZ2)
        throw GuardError("lambda_z2_table: n exceeds the enumeration guard");
    long long total = pow_ll(3, n);
    std::vector<int> table(static_cast<size_t>(total), 0);
    for (long long idx = 1; idx < total; ++idx)
        table[static_cast<size_t>(idx)] = lambda_z2(face_from_index_z2(n, idx), ctx);
    return table;
}

// Exhaustive audit of the Z2 labeling induced by (F, s, coloring):
// equivariance, nested-pair consistency, range, and the m >= n conclusion.
inline AuditReport audit_tucker_z2(const TuckerZ2Context& ctx) {
    int n = ctx.family.ground_size();
    std::vector<int> table = lambda_z2_table(ctx);
    AuditReport report;
    report.faces = pow_ll(3, n) - 1;
    report.m = ctx.m;
    report.alpha = ctx.alpha;
    report.coloring_proper = is_proper(ctx.stable, ctx.coloring, 2);
    detail::audit_z2_table(table, n, ctx, &report);
    report.bound_holds = ctx.m >= n;
    return report;
}

inline void check_z2_enumeration_guard(int n) {
    if (n < 1) throw PreconditionError("tucker audit: n must be >= 1");
    if (n > kMaxAuditGroundZ2)
        throw GuardError("tucker audit: n exceeds the enumeration guard " +
                         std::to_string(kMaxAuditGroundZ2));
}

inline AuditReport audit_tucker_z2(const Family& f, int s, const Coloring& coloring) {
    check_z2_enumeration_guard(f.ground_size());
    return audit_tucker_z2(make_tucker_z2_context(f, s, coloring));
}

inline AuditReport audit_tucker_z2(const Family& f, int s) {
    check_z2_enumeration_guard(f.ground_size());
    return audit_tucker_z2(make_tucker_z2_context(f, s));
}

}  // namespace kneser
