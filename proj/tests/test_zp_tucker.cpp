#include <catch2/catch_amalgamated.hpp>

#include <vector>

#include <kneser/family.hpp>
#include <kneser/tucker.hpp>
#include <kneser/zp_tucker.hpp>

#include "oracles.hpp"

using kneser::audit_tucker_z2;
using kneser::audit_zptucker;
using kneser::AuditReport;
using kneser::complete_k_family;
using kneser::face_from_index_zp;
using kneser::face_index_zp;
using kneser::faces_zp;
using kneser::Family;
using kneser::GuardError;
using kneser::is_prime;
using kneser::lambda_zp;
using kneser::lambda_zp_table;
using kneser::make_zp_face;
using kneser::make_zp_tucker_context;
using kneser::max_stable_subface;
using kneser::PreconditionError;
using kneser::sgn_zp;
using kneser::Subset;
using kneser::ZpFace;
using kneser::ZpLabel;
using kneser::ZpTuckerContext;

namespace {

ZpFace face3(int n, std::uint64_t c0, std::uint64_t c1, std::uint64_t c2) {
    return make_zp_face(n, 3, {c0, c1, c2});
}

}  // namespace

TEST_CASE("primality helper", "[zptucker]") {
    CHECK(is_prime(2));
    CHECK(is_prime(3));
    CHECK(is_prime(5));
    CHECK_FALSE(is_prime(1));
    CHECK_FALSE(is_prime(4));
    CHECK_FALSE(is_prime(9));
}

TEST_CASE("Zp face basics", "[zptucker]") {
    ZpFace a = face3(5, 0b00001, 0, 0b01000);  // {(0,1),(2,4)}
    CHECK(a.size() == 2);
    CHECK(a.to_string() == "[(0,1),(2,4)]");
    CHECK(sgn_zp(a) == 0);
    CHECK(sgn_zp(face3(5, 0, 0, 0b10000)) == 2);  // {(2,5)}

    ZpFace rot = a.rotated(1);
    CHECK(rot.cls[1] == 0b00001u);
    CHECK(rot.cls[0] == 0b01000u);
    CHECK(sgn_zp(rot) == 1);

    CHECK_THROWS_AS(make_zp_face(5, 3, {0b1, 0b1, 0}), PreconditionError);
    CHECK_THROWS_AS(make_zp_face(5, 4, {0b1, 0, 0, 0}), PreconditionError);
    CHECK_THROWS_AS(make_zp_face(5, 3, {0, 0, 0}), PreconditionError);
}

TEST_CASE("maximum stable subface", "[zptucker]") {
    // All of {1,2,3} in one class, s=2: the unique largest 2-gap subset is {1,3}.
    ZpFace a = face3(3, 0b111, 0, 0);
    CHECK(max_stable_subface(a, 2).cls[0] == 0b101u);

    // Already spread out: unchanged.
    ZpFace b = face3(6, 0b001001, 0, 0);
    CHECK(max_stable_subface(b, 3).cls[0] == 0b001001u);

    // Classes are independent; singleton slices are always stable.
    ZpFace c = face3(5, 0b00001, 0b00010, 0);
    ZpFace bc = max_stable_subface(c, 3);
    CHECK(bc.cls[0] == 0b00001u);
    CHECK(bc.cls[1] == 0b00010u);

    // Size agrees with the exhaustive-subset oracle.
    for (const ZpFace& f : faces_zp(4, 3))
        for (int s = 1; s <= 3; ++s) {
            ZpFace best = max_stable_subface(f, s);
            for (int cls = 0; cls < 3; ++cls)
                CHECK(oracle::slice_gaps_ok(best.cls[static_cast<size_t>(cls)], s));
            CHECK(best.size() == oracle::max_stable_subface_size(f, s));
        }
}

TEST_CASE("Zp face indexing is a bijection", "[zptucker]") {
    std::vector<ZpFace> all = faces_zp(2, 3);
    CHECK(all.size() == 15);  // 4^2 - 1
    for (const ZpFace& a : all) {
        ZpFace back = face_from_index_zp(2, 3, face_index_zp(a));
        CHECK(back.cls == a.cls);
    }
    CHECK_THROWS_AS(faces_zp(9, 3), GuardError);
    CHECK_THROWS_AS(faces_zp(6, 5), GuardError);
}

TEST_CASE("Zp labeling case traces on two-subsets of [6], p=2", "[zptucker]") {
    Family f = complete_k_family(6, 2);
    ZpTuckerContext ctx = make_zp_tucker_context(f, 2, 2);
    REQUIRE(ctx.defect == 4);  // two equitable parts of [6] force 4 removals
    REQUIRE(ctx.alpha1 == 1);
    REQUIRE(ctx.alpha2 == 1);

    // Slice sizes (1,0) differ: the minimum-size class set is {1}, h=1,
    // q=0, so the label is (1, (p-1)q + p - h + alpha1) = (1, 2).
    ZpLabel l = lambda_zp(make_zp_face(6, 2, {0b1, 0}), ctx);
    CHECK(l == ZpLabel{1, 2});

    // Equal slices of size one: Case 2 keys on sgn and the min position.
    ZpLabel l2 = lambda_zp(make_zp_face(6, 2, {0b1, 0b10}), ctx);
    CHECK(l2.cls == sgn_zp(make_zp_face(6, 2, {0b1, 0b10})));
    CHECK(l2.index == 1);  // (s-1)(q-1) + j with q=1, j=1

    // A contained member: {(0,1),(0,3)} holds {1,3}, Case 1 band.
    ZpLabel l3 = lambda_zp(make_zp_face(6, 2, {0b101, 0}), ctx);
    CHECK(l3.cls == 0);
    CHECK(l3.index > ctx.alpha);
}

TEST_CASE("Zp audits pass on solver colorings", "[zptucker]") {
    for (int n = 4; n <= 6; ++n) {
        AuditReport rep = audit_zptucker(complete_k_family(n, 2), 2, 2);
        INFO("p=2 n=" << n);
        CHECK(rep.violations.empty());
        CHECK(rep.coloring_proper);
        CHECK(rep.bound_holds);
    }
    for (int n = 4; n <= 6; ++n) {
        AuditReport rep = audit_zptucker(complete_k_family(n, 2), 2, 3);
        INFO("p=3 n=" << n);
        CHECK(rep.violations.empty());
        CHECK(rep.coloring_proper);
        CHECK(rep.bound_holds);
        CHECK(rep.faces == kneser::pow_ll(4, n) - 1);
    }

    // s=3 exercises the residue arithmetic in Case 2.
    AuditReport rep3 = audit_zptucker(complete_k_family(7, 2), 3, 2);
    CHECK(rep3.violations.empty());
}

TEST_CASE("p=2 audit agrees with the Z2 audit", "[zptucker]") {
    for (int n = 4; n <= 6; ++n) {
        AuditReport z2 = audit_tucker_z2(complete_k_family(n, 2), 2);
        AuditReport zp = audit_zptucker(complete_k_family(n, 2), 2, 2);
        INFO("n=" << n);
        CHECK(z2.violations.empty());
        CHECK(zp.violations.empty());
        CHECK(z2.faces == zp.faces);
        CHECK(z2.m == zp.m);
    }
}

TEST_CASE("Zp audit detects a corrupted table", "[zptucker]") {
    Family f = complete_k_family(5, 2);
    ZpTuckerContext ctx = make_zp_tucker_context(f, 2, 3);
    std::vector<ZpLabel> table = lambda_zp_table(ctx);

    long long victim = face_index_zp(face3(5, 0b00011, 0, 0));
    std::vector<ZpLabel> corrupted = table;
    corrupted[static_cast<size_t>(victim)].cls =
        (corrupted[static_cast<size_t>(victim)].cls + 1) % 3;
    AuditReport rep;
    rep.m = ctx.m;
    rep.alpha = ctx.alpha;
    kneser::detail::audit_zp_table(corrupted, ctx, &rep);
    CHECK_FALSE(rep.violations.empty());

    std::vector<ZpLabel> out_of_range = table;
    out_of_range[static_cast<size_t>(victim)].index = ctx.m + 7;
    AuditReport rep2;
    rep2.m = ctx.m;
    rep2.alpha = ctx.alpha;
    kneser::detail::audit_zp_table(out_of_range, ctx, &rep2);
    CHECK_FALSE(rep2.violations.empty());
}

TEST_CASE("Zp labeling preconditions", "[zptucker]") {
    Family f = complete_k_family(5, 2);
    CHECK_THROWS_AS(make_zp_tucker_context(f, 1, 3), PreconditionError);
    CHECK_THROWS_AS(make_zp_tucker_context(f, 2, 4), PreconditionError);
}
