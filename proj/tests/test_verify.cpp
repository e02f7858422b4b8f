#include <catch2/catch_amalgamated.hpp>

#include <vector>

#include <kneser/defect.hpp>
#include <kneser/family.hpp>
#include <kneser/hypergraph.hpp>
#include <kneser/verify.hpp>

#include "oracles.hpp"

using kneser::BoundCheck;
using kneser::BoundReport;
using kneser::chromatic_number;
using kneser::Coloring;
using kneser::complete_k_family;
using kneser::conjecture_check;
using kneser::counterexample_scan;
using kneser::ecd;
using kneser::Family;
using kneser::is_proper;
using kneser::is_valid_certificate;
using kneser::lemma_compose_witness;
using kneser::LemmaWitnessReport;
using kneser::PreconditionError;
using kneser::ScanResult;
using kneser::ScanSpec;
using kneser::stable_subfamily;
using kneser::StabilityMode;
using kneser::Subset;
using kneser::thm1_check;
using kneser::thm2_check;

TEST_CASE("first bound check on stable complete families", "[verify]") {
    BoundReport rep = thm1_check(complete_k_family(6, 2), 2, 2, "complete:6:2");
    CHECK(rep.check == "thm1");
    CHECK(rep.chi == 4);
    CHECK(rep.bound == 4);
    CHECK(rep.holds);
    CHECK_FALSE(rep.degenerate);
    CHECK(rep.defect == 4);
    CHECK(rep.vertices == 10);
    CHECK(is_valid_certificate(rep.family, rep.certificate, 2));
    CHECK(is_proper(stable_subfamily(rep.family, 2, StabilityMode::almost), rep.witness, 2));

    BoundReport rep8 = thm1_check(complete_k_family(8, 2), 4, 2, "complete:8:2");
    CHECK(rep8.chi == 4);
    CHECK(rep8.bound == 4);
    CHECK(rep8.holds);

    // Stability filter can empty the family entirely.
    BoundReport degen = thm1_check(complete_k_family(4, 2), 4, 2, "complete:4:2");
    CHECK(degen.vertices == 0);
    CHECK(degen.chi == 0);
    CHECK(degen.degenerate);
    CHECK(degen.holds);

    CHECK_THROWS_AS(thm1_check(complete_k_family(6, 2), 2, 3), PreconditionError);
    CHECK_THROWS_AS(thm1_check(complete_k_family(6, 2), 3, 2), PreconditionError);
}

TEST_CASE("second bound check computes the two offsets", "[verify]") {
    BoundReport rep = thm2_check(complete_k_family(6, 2), 2, 2, "complete:6:2");
    CHECK(rep.alpha1 == 1);
    CHECK(rep.alpha2 == 1);
    CHECK(rep.bound == 4);
    CHECK(rep.chi == 4);
    CHECK(rep.holds);

    BoundReport rep7 = thm2_check(complete_k_family(7, 2), 2, 3, "complete:7:2");
    CHECK(rep7.defect == 4);
    CHECK(rep7.alpha1 == 1);
    CHECK(rep7.alpha2 == 2);
    CHECK(rep7.bound == 2);
    CHECK(rep7.chi >= 2);
    CHECK(rep7.holds);

    // A single full-set member drives the bound to zero.
    Family whole(6, {Subset(6, kneser::full_mask(6))});
    BoundReport degen = thm2_check(whole, 2, 2, "custom");
    CHECK(degen.bound <= 0);
    CHECK(degen.degenerate);
    CHECK(degen.holds);

    CHECK_THROWS_AS(thm2_check(complete_k_family(6, 2), 2, 4), PreconditionError);
    CHECK_THROWS_AS(thm2_check(complete_k_family(6, 2), 1, 2), PreconditionError);
}

TEST_CASE("conjectured bound check and the exploratory escape hatch", "[verify]") {
    BoundReport rep = conjecture_check(complete_k_family(5, 2), 2, 2, StabilityMode::cyclic);
    CHECK(rep.chi == 3);
    CHECK(rep.bound == 3);
    CHECK(rep.holds);
    CHECK_FALSE(rep.exploratory);

    // variant=almost with r=2 reduces to the first bound check.
    BoundReport a = conjecture_check(complete_k_family(6, 2), 2, 2, StabilityMode::almost);
    BoundReport b = thm1_check(complete_k_family(6, 2), 2, 2);
    CHECK(a.chi == b.chi);
    CHECK(a.bound == b.bound);

    CHECK_THROWS_AS(conjecture_check(complete_k_family(6, 2), 2, 3, StabilityMode::almost),
                    PreconditionError);
    BoundReport exp = conjecture_check(complete_k_family(6, 2), 2, 3, StabilityMode::almost,
                                       true);
    CHECK(exp.exploratory);
    CHECK_THROWS_AS(conjecture_check(complete_k_family(6, 2), 1, 2, StabilityMode::almost, true),
                    PreconditionError);
}

TEST_CASE("exhaustive scan over a small ground set finds no failures", "[verify]") {
    ScanSpec spec;
    spec.kind = "exhaustive";
    spec.n = 4;
    spec.max_members = 4;
    ScanResult res = counterexample_scan(spec, 2, 2, StabilityMode::almost, BoundCheck::thm1,
                                         1'000'000);
    CHECK(res.scanned == 1941);  // sum over sizes 0..4 of C(15, size)
    CHECK(res.complete);
    CHECK(res.failures.empty());

    ScanResult zero = counterexample_scan(spec, 2, 2, StabilityMode::almost, BoundCheck::thm1, 0);
    CHECK(zero.scanned == 0);
    CHECK_FALSE(zero.complete);
    CHECK(zero.failures.empty());
}

TEST_CASE("random scans are deterministic and parallel-safe", "[verify]") {
    ScanSpec spec;
    spec.kind = "random";
    spec.n = 6;
    spec.max_members = 6;
    spec.count = 120;
    spec.seed = 99;
    ScanResult a = counterexample_scan(spec, 2, 2, StabilityMode::cyclic, BoundCheck::conjecture,
                                       1'000'000, false, 1);
    ScanResult b = counterexample_scan(spec, 2, 2, StabilityMode::cyclic, BoundCheck::conjecture,
                                       1'000'000, false, 2);
    CHECK(a.scanned == b.scanned);
    CHECK(a.complete);
    REQUIRE(a.failures.size() == b.failures.size());
    for (size_t i = 0; i < a.failures.size(); ++i) {
        CHECK(a.failures[i].family_spec == b.failures[i].family_spec);
        CHECK(a.failures[i].chi == b.failures[i].chi);
        // Every reported failure re-verified: bound really exceeds chi.
        CHECK_FALSE(a.failures[i].holds);
        CHECK(a.failures[i].chi < a.failures[i].bound);
        CHECK(is_valid_certificate(a.failures[i].family, a.failures[i].certificate, 2));
    }
}

TEST_CASE("composition witness on the two-subsets of [8]", "[verify]") {
    Family f = complete_k_family(8, 2);
    Family stable = stable_subfamily(f, 4, StabilityMode::almost);
    kneser::ChiResult opt = chromatic_number(stable, 4);
    REQUIRE(opt.chi == 2);

    LemmaWitnessReport rep = lemma_compose_witness(f, 2, 2, 2, opt.chi, opt.witness);
    CHECK(rep.fprime.size() == 93);  // every window of size >= 5
    CHECK(rep.fprime_stable.empty());
    CHECK(rep.proper);
    CHECK(rep.ecd_fprime == 0);
    CHECK(rep.outer_within_bound);
    CHECK(rep.composed_valid);
    CHECK(rep.composed_x0_size <= rep.allowed_removed);
    CHECK(static_cast<int>(rep.composed.parts.size()) == 4);
}

TEST_CASE("composition witness with a non-trivial derived coloring", "[verify]") {
    // Eight singletons: colors classes of size <= 3, so chi(KG^4) = 3.
    std::vector<Subset> singles;
    for (int e = 1; e <= 8; ++e) singles.push_back(Subset::of(8, {e}));
    Family f(8, singles);
    kneser::ChiResult opt = chromatic_number(f, 4);
    REQUIRE(opt.chi == 3);

    LemmaWitnessReport rep = lemma_compose_witness(f, 2, 2, 2, opt.chi, opt.witness);
    CHECK(rep.fprime.size() == 163);  // windows of size >= 4
    REQUIRE(rep.fprime_stable.size() == 5);
    CHECK(rep.proper);
    for (int c : rep.cprime.color) {
        CHECK(c >= 1);
        CHECK(c <= 3);
    }
    CHECK(rep.ecd_fprime == 2);
    CHECK(rep.outer_within_bound);
    CHECK(rep.composed_valid);
    CHECK(rep.composed_x0_size <= rep.allowed_removed);

    // Fault injection: forcing the only disjoint window pair into one color
    // class must be caught by the properness check.
    int i1 = rep.fprime_stable.index_of(Subset::of(8, {1, 3, 5, 7}));
    int i2 = rep.fprime_stable.index_of(Subset::of(8, {2, 4, 6, 8}));
    REQUIRE(i1 >= 0);
    REQUIRE(i2 >= 0);
    Coloring corrupted = rep.cprime;
    corrupted.color[static_cast<size_t>(i2)] = corrupted.color[static_cast<size_t>(i1)];
    CHECK_FALSE(is_proper(rep.fprime_stable, corrupted, 2));
}

TEST_CASE("composition witness with an oversized color budget", "[verify]") {
    // t far above chi empties F' (every window defect is at most n).
    Family f = complete_k_family(6, 2);
    Family stable = stable_subfamily(f, 4, StabilityMode::almost);
    Coloring rainbow;
    rainbow.t = 7;
    for (int i = 0; i < stable.size(); ++i) rainbow.color.push_back(i + 1);
    LemmaWitnessReport rep = lemma_compose_witness(f, 2, 2, 2, 7, rainbow);
    CHECK(rep.fprime.empty());
    CHECK(rep.fprime_stable.empty());
    CHECK(rep.proper);
    CHECK(rep.composed_valid);
    CHECK(rep.composed_x0_size <= rep.allowed_removed);
}

TEST_CASE("composition witness preconditions", "[verify]") {
    // Eight same-colored singletons hold four disjoint members, so one color
    // class is improper under the product arity r1*r2 = 4.
    std::vector<Subset> singles;
    for (int e = 1; e <= 8; ++e) singles.push_back(Subset::of(8, {e}));
    Family f(8, singles);
    Coloring improper;
    improper.t = 1;
    improper.color.assign(8, 1);
    CHECK_THROWS_AS(lemma_compose_witness(f, 2, 2, 2, 1, improper), PreconditionError);
    CHECK_THROWS_AS(lemma_compose_witness(f, 1, 2, 2, 1, improper), PreconditionError);
    CHECK_THROWS_AS(lemma_compose_witness(complete_k_family(13, 2), 2, 2, 2, 1, improper),
                    kneser::GuardError);
}
