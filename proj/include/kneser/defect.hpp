#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kneser/errors.hpp"
#include "kneser/family.hpp"
#include "kneser/subset.hpp"
#include "kneser/util.hpp"

namespace kneser {

// Witness for an equitable r-colorability defect value: X0 is removed from
// [n], the rest is split into r near-equal parts none of which contains a
// family member.
struct DefectCertificate {
    Subset x0;
    std::vector<Subset> parts;
};

inline bool is_valid_certificate(const Family& f, const DefectCertificate& cert, int r) {
    if (r < 2) return false;
    if (static_cast<int>(cert.parts.size()) != r) return false;
    int n = f.ground_size();
    if (cert.x0.ground_size() != n) return false;
    std::uint64_t seen = cert.x0.bits();
    for (const Subset& part : cert.parts) {
        if (part.ground_size() != n) return false;
        if (seen & part.bits()) return false;  // overlap
        seen |= part.bits();
    }
    if (seen != full_mask(n)) return false;  // not a cover
    int lo = cert.parts[0].size(), hi = lo;
    for (const Subset& part : cert.parts) {
        lo = std::min(lo, part.size());
        hi = std::max(hi, part.size());
    }
    if (hi - lo > 1) return false;
    for (const Subset& m : f.members())
        for (const Subset& part : cert.parts)
            if (m.subset_of(part)) return false;
    return true;
}

struct EcdResult {
    int defect;
    DefectCertificate certificate;
};

namespace detail {

// Backtracking search for an equitable partition of [n] minus an X0 of size
// exactly d. Part capacities are forced by equitability; elements are tried
// in descending degree order; a member dies as soon as two of its elements
// split across parts or one lands in X0.
class EcdSearch {
public:
    EcdSearch(const Family& f, int r) : f_(f), n_(f.ground_size()), r_(r) {
        members_of_.resize(static_cast<size_t>(n_));
        for (int mi = 0; mi < f_.size(); ++mi)
            for (int e : f_.member(mi).elements())
                members_of_[static_cast<size_t>(e - 1)].push_back(mi);
        order_.resize(static_cast<size_t>(n_));
        for (int i = 0; i < n_; ++i) order_[static_cast<size_t>(i)] = i + 1;
        std::stable_sort(order_.begin(), order_.end(), [&](int a, int b) {
            return members_of_[static_cast<size_t>(a - 1)].size() >
                   members_of_[static_cast<size_t>(b - 1)].size();
        });
    }

    std::optional<DefectCertificate> try_defect(int d) {
        int free_elems = n_ - d;
        int q = free_elems / r_, rem = free_elems % r_;
        caps_.assign(static_cast<size_t>(r_), q);
        for (int i = 0; i < rem; ++i) caps_[static_cast<size_t>(i)] = q + 1;
        cap_x0_ = d;
        part_bits_.assign(static_cast<size_t>(r_), 0);
        x0_bits_ = 0;
        fill_.assign(static_cast<size_t>(r_), 0);
        x0_fill_ = 0;
        state_.assign(static_cast<size_t>(f_.size()), MemberState{});
        if (assign(0)) {
            std::vector<Subset> parts;
            for (int b = 0; b < r_; ++b) parts.push_back(Subset(n_, part_bits_[static_cast<size_t>(b)]));
            return DefectCertificate{Subset(n_, x0_bits_), std::move(parts)};
        }
        return std::nullopt;
    }

private:
    struct MemberState {
        int assigned = 0;
        int part = -1;
        bool mono = true;  // all assigned elements so far share one part
    };

    bool place_in_part(int e, int b) {
        auto& undo = undo_stack_;
        size_t mark = undo.size();
        for (int mi : members_of_[static_cast<size_t>(e - 1)]) {
            MemberState& st = state_[static_cast<size_t>(mi)];
            undo.push_back({mi, st});
            ++st.assigned;
            if (st.part < 0)
                st.part = b;
            else if (st.mono && st.part != b)
                st.mono = false;
            if (st.mono && st.part == b && st.assigned == f_.member(mi).size()) {
                while (undo.size() > mark) {
                    state_[static_cast<size_t>(undo.back().first)] = undo.back().second;
                    undo.pop_back();
                }
                return false;
            }
        }
        return true;
    }

    void place_in_x0(int e) {
        for (int mi : members_of_[static_cast<size_t>(e - 1)]) {
            MemberState& st = state_[static_cast<size_t>(mi)];
            undo_stack_.push_back({mi, st});
            ++st.assigned;
            st.mono = false;
        }
    }

    void unplace(int e) {
        size_t count = members_of_[static_cast<size_t>(e - 1)].size();
        for (size_t i = 0; i < count; ++i) {
            state_[static_cast<size_t>(undo_stack_.back().first)] = undo_stack_.back().second;
            undo_stack_.pop_back();
        }
    }

    bool assign(int idx) {
        if (idx == n_) return true;
        int e = order_[static_cast<size_t>(idx)];
        std::uint64_t ebit = 1ull << (e - 1);
        for (int b = 0; b < r_; ++b) {
            if (fill_[static_cast<size_t>(b)] == caps_[static_cast<size_t>(b)]) continue;
            // Empty parts with equal capacity are interchangeable; only try
            // the first of each run.
            if (b > 0 && fill_[static_cast<size_t>(b)] == 0 &&
                fill_[static_cast<size_t>(b - 1)] == 0 &&
                caps_[static_cast<size_t>(b)] == caps_[static_cast<size_t>(b - 1)])
                continue;
            if (!place_in_part(e, b)) continue;
            part_bits_[static_cast<size_t>(b)] |= ebit;
            ++fill_[static_cast<size_t>(b)];
            if (assign(idx + 1)) return true;
            --fill_[static_cast<size_t>(b)];
            part_bits_[static_cast<size_t>(b)] &= ~ebit;
            unplace(e);
        }
        if (x0_fill_ < cap_x0_) {
            place_in_x0(e);
            x0_bits_ |= ebit;
            ++x0_fill_;
            if (assign(idx + 1)) return true;
            --x0_fill_;
            x0_bits_ &= ~ebit;
            unplace(e);
        }
        return false;
    }

    const Family& f_;
    int n_, r_;
    std::vector<std::vector<int>> members_of_;
    std::vector<int> order_;
    std::vector<int> caps_, fill_;
    int cap_x0_ = 0, x0_fill_ = 0;
    std::vector<std::uint64_t> part_bits_;
    std::uint64_t x0_bits_ = 0;
    std::vector<MemberState> state_;
    std::vector<std::pair<int, MemberState>> undo_stack_;
};

}  // namespace detail

// Exact equitable r-colorability defect with a witnessing certificate.
inline EcdResult ecd(const Family& f, int r) {
    if (r < 2) throw PreconditionError("ecd: r must be >= 2");
    if (f.ground_size() < 1) {
        // Degenerate empty ground set: the empty certificate is valid.
        std::vector<Subset> parts(static_cast<size_t>(r), Subset(0, 0));
        return EcdResult{0, DefectCertificate{Subset(0, 0), std::move(parts)}};
    }
    detail::EcdSearch search(f, r);
    for (int d = 0; d <= f.ground_size(); ++d) {
        if (auto cert = search.try_defect(d)) return EcdResult{d, std::move(*cert)};
    }
    throw InvariantViolation("ecd: no certificate found even with X0 = [n]");
}

// Closed form for the family of all k-subsets of [n]; used as a cross-check
// oracle against the search.
inline int ecd_formula_complete(int n, int k, int r) {
    if (k < 1 || k > n) throw PreconditionError("ecd_formula_complete: need 1 <= k <= n");
    if (r < 2) throw PreconditionError("ecd_formula_complete: r must be >= 2");
    long long v = static_cast<long long>(n) - static_cast<long long>(r) * (k - 1);
    return static_cast<int>(std::max(0ll, v));
}

}  // namespace kneser
