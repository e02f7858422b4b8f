#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "kneser/defect.hpp"
#include "kneser/errors.hpp"
#include "kneser/family.hpp"
#include "kneser/hypergraph.hpp"
#include "kneser/subset.hpp"
#include "kneser/util.hpp"
#include "kneser/zp_tucker.hpp"

namespace kneser {

enum class BoundCheck { thm1, thm2, conjecture };

inline const char* to_string(BoundCheck c) {
    switch (c) {
        case BoundCheck::thm1: return "thm1";
        case BoundCheck::thm2: return "thm2";
        default: return "conjecture";
    }
}

// One bound-vs-chi comparison, carrying the certificates needed to re-verify
// it independently.
struct BoundReport {
    std::string check;
    std::string family_spec;
    Family family{0};
    int s = 0;
    int r_or_p = 0;
    StabilityMode variant = StabilityMode::almost;
    int vertices = 0;
    int chi = 0;
    int bound = 0;
    int defect = 0;
    int alpha1 = -1;  // thm2 only
    int alpha2 = -1;  // thm2 only
    bool holds = false;
    bool degenerate = false;
    bool exploratory = false;
    double seconds = 0.0;
    DefectCertificate certificate;
    Coloring witness;
};

namespace detail {

inline BoundReport run_bound_check(BoundCheck check, const Family& f, int s, int r,
                                   StabilityMode variant, const std::string& spec) {
    auto start = std::chrono::steady_clock::now();
    BoundReport rep;
    rep.check = to_string(check);
    rep.family_spec = spec;
    rep.family = f;
    rep.s = s;
    rep.r_or_p = r;
    rep.variant = variant;
    int n = f.ground_size();
    EcdResult defect = check == BoundCheck::thm2 ? ecd(f, r) : ecd(f, s);
    rep.defect = defect.defect;
    rep.certificate = defect.certificate;
    if (check == BoundCheck::thm2) {
        int big_n = n - defect.defect;
        rep.alpha1 = (s - 1) * (big_n / r);
        rep.alpha2 = (r - 1) * (big_n + 1) / r;
        rep.bound = static_cast<int>(ceil_div(n - rep.alpha1 - rep.alpha2, r - 1));
    } else {
        rep.bound = static_cast<int>(ceil_div(defect.defect, r - 1));
    }
    Family sub = stable_subfamily(f, s, variant);
    rep.vertices = sub.size();
    ChiResult chi = chromatic_number(sub, r);
    rep.chi = chi.chi;
    rep.witness = std::move(chi.witness);
    rep.holds = rep.chi >= rep.bound;
    rep.degenerate = sub.empty() || rep.bound <= 0;
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rep;
}

}  // namespace detail

inline bool is_power_of_two(int r) { return r >= 1 && (r & (r - 1)) == 0; }

inline BoundReport thm1_check(const Family& f, int s, int r,
                              const std::string& spec = "custom") {
    if (r < 2 || !is_power_of_two(r))
        throw PreconditionError("thm1_check: r must be a power of 2 and >= 2");
    if (s < 1 || s % r != 0)
        throw PreconditionError("thm1_check: s must be a positive multiple of r");
    return detail::run_bound_check(BoundCheck::thm1, f, s, r, StabilityMode::almost, spec);
}

inline BoundReport thm2_check(const Family& f, int s, int p,
                              const std::string& spec = "custom") {
    if (!is_prime(p)) throw PreconditionError("thm2_check: p must be prime");
    if (s < 2) throw PreconditionError("thm2_check: s must be >= 2");
    return detail::run_bound_check(BoundCheck::thm2, f, s, p, StabilityMode::almost, spec);
}

inline BoundReport conjecture_check(const Family& f, int s, int r, StabilityMode variant,
                                    bool exploratory = false,
                                    const std::string& spec = "custom") {
    if (r < 2) throw PreconditionError("conjecture_check: r must be >= 2");
    if (s < 2) throw PreconditionError("conjecture_check: s must be >= 2");
    if (s < r && !exploratory)
        throw PreconditionError("conjecture_check: requires s >= r (pass exploratory to relax)");
    BoundReport rep =
        detail::run_bound_check(BoundCheck::conjecture, f, s, r, variant, spec);
    rep.exploratory = s < r;
    return rep;
}

// Deterministic family generators for scans.
struct ScanSpec {
    std::string kind = "exhaustive";  // "exhaustive" | "random"
    int n = 5;
    int max_members = 5;
    long long count = 0;        // random only
    std::uint64_t seed = 0;     // random only
};

inline Family sample_random_family(int n, int max_members, std::mt19937_64& rng) {
    if (n < 1 || n > 20) throw PreconditionError("sample_random_family: n must be in [1, 20]");
    if (max_members < 1) throw PreconditionError("sample_random_family: max_members must be >= 1");
    std::uint64_t universe = full_mask(n);
    int want = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(max_members));
    want = std::min<int>(want, static_cast<int>(universe));
    std::set<std::uint64_t> masks;
    while (static_cast<int>(masks.size()) < want) masks.insert(1 + rng() % universe);
    std::vector<Subset> members;
    for (std::uint64_t m : masks) members.push_back(Subset(n, m));
    return Family(n, std::move(members));
}

// Materializes up to max_count scan instances, in a fixed order, so parallel
// checking can merge results deterministically by index. Sets *exhausted to
// whether the generator had no further instances.
inline std::vector<Family> materialize_scan(const ScanSpec& spec, long long max_count,
                                            bool* exhausted) {
    std::vector<Family> out;
    *exhausted = true;
    if (max_count < 0) max_count = 0;
    if (spec.kind == "exhaustive") {
        if (spec.n < 1 || spec.n > 8)
            throw GuardError("scan: exhaustive enumeration limited to n <= 8");
        int universe = static_cast<int>(full_mask(spec.n));
        std::vector<Subset> all;
        for (int m = 1; m <= universe; ++m)
            all.push_back(Subset(spec.n, static_cast<std::uint64_t>(m)));
        std::sort(all.begin(), all.end(), SubsetOrder{});
        int cap = std::min(spec.max_members, universe);
        // DFS over index combinations: emits every subfamily with at most
        // `cap` members exactly once, preorder, until max_count.
        std::vector<int> pick;
        auto rec = [&](auto&& self, int start, int remaining) -> bool {
            if (static_cast<long long>(out.size()) == max_count) return false;
            std::vector<Subset> members;
            for (int i : pick) members.push_back(all[static_cast<size_t>(i)]);
            out.push_back(Family(spec.n, std::move(members)));
            if (remaining == 0) return true;
            for (int i = start; i < universe; ++i) {
                pick.push_back(i);
                bool more = self(self, i + 1, remaining - 1);
                pick.pop_back();
                if (!more) return false;
            }
            return true;
        };
        *exhausted = rec(rec, 0, cap);
    } else if (spec.kind == "random") {
        std::mt19937_64 rng(spec.seed);
        long long want = std::min(spec.count, max_count);
        for (long long i = 0; i < want; ++i)
            out.push_back(sample_random_family(spec.n, spec.max_members, rng));
        *exhausted = want == spec.count;
    } else {
        throw PreconditionError("scan: kind must be exhaustive or random");
    }
    return out;
}

struct ScanResult {
    std::vector<BoundReport> failures;
    long long scanned = 0;
    bool complete = false;
};

// Runs the selected bound check over the generated instances and returns the
// re-verified holds=false reports. A budget below the instance count stops
// early and marks the scan incomplete.
inline ScanResult counterexample_scan(const ScanSpec& spec, int s, int r, StabilityMode variant,
                                      BoundCheck check, long long budget,
                                      bool exploratory = false, int jobs = 1) {
    bool exhausted = false;
    std::vector<Family> instances = materialize_scan(spec, budget, &exhausted);
    long long limit = static_cast<long long>(instances.size());

    auto run_one = [&](long long i) -> BoundReport {
        const std::string tag = spec.kind + ":" + std::to_string(i);
        const Family& f = instances[static_cast<size_t>(i)];
        switch (check) {
            case BoundCheck::thm1: return thm1_check(f, s, r, tag);
            case BoundCheck::thm2: return thm2_check(f, s, r, tag);
            default: return conjecture_check(f, s, r, variant, exploratory, tag);
        }
    };

    std::vector<std::optional<BoundReport>> flagged(static_cast<size_t>(limit));
    if (jobs <= 1) {
        for (long long i = 0; i < limit; ++i) {
            BoundReport rep = run_one(i);
            if (!rep.holds) flagged[static_cast<size_t>(i)] = std::move(rep);
        }
    } else {
        std::vector<std::thread> workers;
        for (int w = 0; w < jobs; ++w)
            workers.emplace_back([&, w] {
                for (long long i = w; i < limit; i += jobs) {
                    BoundReport rep = run_one(i);
                    if (!rep.holds) flagged[static_cast<size_t>(i)] = std::move(rep);
                }
            });
        for (auto& t : workers) t.join();
    }

    ScanResult result;
    result.scanned = limit;
    result.complete = exhausted;
    for (long long i = 0; i < limit; ++i) {
        if (!flagged[static_cast<size_t>(i)]) continue;
        // Re-verify from scratch before reporting.
        BoundReport again = run_one(i);
        const BoundReport& first = *flagged[static_cast<size_t>(i)];
        if (again.holds != first.holds || again.chi != first.chi || again.bound != first.bound)
            throw InvariantViolation("counterexample_scan: re-verification diverged on instance " +
                                     first.family_spec);
        result.failures.push_back(std::move(again));
    }
    return result;
}

// Witness record for the coloring-composition argument behind the power-of-2
// induction: the derived family F', its induced coloring, and the composed
// defect certificate with its accounting.
struct LemmaWitnessReport {
    int r1 = 0, r2 = 0, s2 = 0, t = 0;
    Family fprime{0};
    Family fprime_stable{0};
    Coloring cprime;
    bool proper = false;
    int ecd_fprime = 0;
    bool outer_within_bound = false;
    DefectCertificate composed;
    int composed_x0_size = 0;
    int allowed_removed = 0;
    bool composed_valid = false;
    bool composed_within_bound = false;
};

inline constexpr int kMaxLemmaGround = 12;

inline void check_lemma_ground_guard(int n) {
    if (n > kMaxLemmaGround)
        throw GuardError("lemma_compose_witness: n exceeds the subset-enumeration guard " +
                         std::to_string(kMaxLemmaGround));
}

inline LemmaWitnessReport lemma_compose_witness(const Family& f, int r1, int r2, int s2, int t,
                                                const Coloring& coloring) {
    if (r1 < 2 || r2 < 2) throw PreconditionError("lemma_compose_witness: r1, r2 must be >= 2");
    if (s2 < 2) throw PreconditionError("lemma_compose_witness: s2 must be >= 2");
    int n = f.ground_size();
    check_lemma_ground_guard(n);
    int r = r1 * r2;
    int s = r1 * s2;
    Family stable = stable_subfamily(f, s, StabilityMode::almost);
    check_coloring(stable, coloring);
    if (coloring.t != t)
        throw PreconditionError("lemma_compose_witness: coloring does not use t colors");
    if (!is_proper(stable, coloring, r))
        throw PreconditionError("lemma_compose_witness: input coloring is not proper");

    LemmaWitnessReport rep;
    rep.r1 = r1;
    rep.r2 = r2;
    rep.s2 = s2;
    rep.t = t;
    rep.allowed_removed = (r - 1) * t;
    int threshold = (r2 - 1) * t;

    // F' = windows X whose restricted family still has defect above
    // (r2-1)t. Restricted families repeat across windows, so memoize.
    std::map<std::pair<int, std::vector<std::uint64_t>>, int> memo;
    auto restricted_defect = [&](const Subset& window) {
        Family local = restrict_family(f, window);
        std::vector<std::uint64_t> key_masks;
        for (const Subset& m : local.members()) key_masks.push_back(m.bits());
        auto key = std::make_pair(local.ground_size(), std::move(key_masks));
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
        int d = ecd(local, s2).defect;
        memo.emplace(std::move(key), d);
        return d;
    };

    std::vector<Subset> fprime_members;
    for (std::uint64_t mask = 1; mask <= full_mask(n); ++mask) {
        Subset window(n, mask);
        if (restricted_defect(window) > threshold) fprime_members.push_back(window);
    }
    rep.fprime = Family(n, std::move(fprime_members));
    rep.fprime_stable = stable_subfamily(rep.fprime, r1, StabilityMode::almost);

    // Color each stable window by a color whose class packs r2 disjoint
    // members of the restricted stable family inside it.
    rep.cprime.t = t;
    for (const Subset& window : rep.fprime_stable.members()) {
        std::vector<int> member_color;  // per local stable member
        Family local = restrict_family(f, window);
        Family local_stable = stable_subfamily(local, s2, StabilityMode::almost);
        for (const Subset& lm : local_stable.members()) {
            Subset global = embed(lm, window);
            int idx = stable.index_of(global);
            if (idx < 0)
                throw InvariantViolation("lemma_compose_witness: embedded member " +
                                         global.to_string() + " missing from the stable family");
            member_color.push_back(coloring.color[static_cast<size_t>(idx)]);
        }
        int assigned = 0;
        for (int color = 1; color <= t && !assigned; ++color) {
            std::vector<int> cands;
            for (int i = 0; i < local_stable.size(); ++i)
                if (member_color[static_cast<size_t>(i)] == color) cands.push_back(i);
            if (static_cast<int>(cands.size()) < r2) continue;
            auto prefix = detail::size_prefix_sums(local_stable, cands);
            std::vector<int> picked;
            if (detail::pack_disjoint(local_stable, cands, prefix, 0, r2, 0,
                                      local_stable.ground_size(), &picked))
                assigned = color;
        }
        if (!assigned)
            throw InvariantViolation(
                "lemma_compose_witness: no same-colored disjoint " + std::to_string(r2) +
                "-tuple inside window " + window.to_string());
        rep.cprime.color.push_back(assigned);
    }
    rep.proper = is_proper(rep.fprime_stable, rep.cprime, r1);

    // Outer certificate for F', then one padded inner certificate per part.
    EcdResult outer = ecd(rep.fprime, r1);
    rep.ecd_fprime = outer.defect;
    rep.outer_within_bound = outer.defect <= (r1 - 1) * t;

    std::uint64_t x0_bits = outer.certificate.x0.bits();
    std::vector<Subset> parts;
    for (const Subset& outer_part : outer.certificate.parts) {
        Family local = restrict_family(f, outer_part);
        EcdResult inner = ecd(local, s2);
        if (inner.defect > threshold)
            throw InvariantViolation("lemma_compose_witness: outer part " +
                                     outer_part.to_string() + " has defect above (r2-1)t");
        std::uint64_t inner_x0 = inner.certificate.x0.bits();
        std::vector<std::uint64_t> inner_parts;
        for (const Subset& ip : inner.certificate.parts) inner_parts.push_back(ip.bits());
        // Pad X_{i,0} to exactly min(|X_i|, (r2-1)t), taking the largest
        // element of a largest part each time; this keeps the combined
        // partition equitable across outer parts.
        int target = std::min(outer_part.size(), threshold);
        while (std::popcount(inner_x0) < target) {
            size_t largest = 0;
            for (size_t j = 1; j < inner_parts.size(); ++j)
                if (std::popcount(inner_parts[j]) > std::popcount(inner_parts[largest]))
                    largest = j;
            int b = 63 - std::countl_zero(inner_parts[largest]);
            inner_parts[largest] &= ~(1ull << b);
            inner_x0 |= 1ull << b;
        }
        int local_n = outer_part.size();
        x0_bits |= embed(Subset(local_n, inner_x0), outer_part).bits();
        for (std::uint64_t ip : inner_parts)
            parts.push_back(embed(Subset(local_n, ip), outer_part));
    }
    rep.composed = DefectCertificate{Subset(n, x0_bits), std::move(parts)};
    rep.composed_x0_size = rep.composed.x0.size();
    rep.composed_valid = is_valid_certificate(f, rep.composed, r1 * s2);
    rep.composed_within_bound = rep.composed_x0_size <= rep.allowed_removed;
    return rep;
}

}  // namespace kneser
