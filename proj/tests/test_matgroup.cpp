#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>

#include "coinc/matgroup.hpp"

using namespace coinc;

namespace {

// Independent oracle: enumerate GL2(n) by scanning all entry tuples.
std::vector<Mat2> scan_gl2(u64 n) {
    std::vector<Mat2> out;
    for (u64 a = 0; a < n; ++a)
        for (u64 b = 0; b < n; ++b)
            for (u64 c = 0; c < n; ++c)
                for (u64 d = 0; d < n; ++d) {
                    Mat2 m{n, {a, b, c, d}};
                    if (is_invertible(m)) out.push_back(m);
                }
    return out;
}

} // namespace

TEST_CASE("closure basics") {
    MatGroup g = MatGroup::closure(4, {mat2(4, 0, 1, 1, 0)});
    CHECK(g.order() == 2);
    CHECK(g.contains(identity(4)));
    CHECK(g.contains(mat2(4, 0, 1, 1, 0)));
    CHECK(!g.contains(gen_T(4)));
    CHECK_THROWS_AS(MatGroup::closure(4, {mat2(4, 2, 0, 0, 1)}), NotInvertible);
    CHECK_THROWS_AS(MatGroup::closure(8, {gen_S(8), gen_T(8)}, 100), GroupTooLarge);
}

TEST_CASE("full groups match the scan oracle") {
    for (u64 n : {2, 3, 4, 5, 6}) {
        CAPTURE(n);
        MatGroup g = full_gl2(n);
        auto scanned = scan_gl2(n);
        std::sort(scanned.begin(), scanned.end());
        CHECK(g.elements() == scanned);
        MatGroup s = full_sl2(n);
        CHECK(s.order() == sl2_order(n));
        for (const Mat2& m : s.elements()) CHECK(det(m).value == 1);
    }
}

TEST_CASE("from_elements validation") {
    MatGroup g = full_sl2(3);
    MatGroup h = MatGroup::from_elements(3, g.elements());
    CHECK(h == g);
    std::vector<Mat2> broken = g.elements();
    broken.pop_back();
    CHECK_THROWS(MatGroup::from_elements(3, broken));
    std::vector<Mat2> no_id{gen_T(3)};
    CHECK_THROWS_AS(MatGroup::from_elements(3, no_id), InternalInconsistency);
}

TEST_CASE("derived subgroup of small groups") {
    // SL2(3) has abelianization Z/3, so D has index 3.
    MatGroup s3 = full_sl2(3);
    MatGroup d = derived_subgroup(s3);
    CHECK(d.order() == s3.order() / 3);
    CHECK(is_normal_in(d, s3));
    // GL2(5): derived subgroup is the whole SL2 (odd modulus).
    MatGroup g5 = full_gl2(5);
    CHECK(derived_subgroup(g5).order() == sl2_order(5));
    // Abelian group: trivial derived subgroup.
    MatGroup cyc = MatGroup::closure(7, {gen_T(7)});
    CHECK(derived_subgroup(cyc).is_trivial());
}

TEST_CASE("abelian invariants") {
    // SL2(m)/D(SL2(m)) is cyclic of order gcd(m, 12).
    for (u64 m : {2, 3, 4, 5, 6}) {
        CAPTURE(m);
        MatGroup s = full_sl2(m);
        MatGroup d = derived_subgroup(s);
        AbelianInvariants inv = abelian_invariants(s, d);
        u64 g12 = gcd_u64(m, 12);
        if (g12 == 1)
            CHECK(inv.factors.empty());
        else
            CHECK(inv.factors == std::vector<u64>{g12});
    }
    // A non-cyclic quotient: (Z/2)^2 from the diagonal units mod 8 over
    // the trivial group.
    MatGroup diag = MatGroup::closure(8, {mat2(8, 3, 0, 0, 1), mat2(8, 5, 0, 0, 1)});
    MatGroup triv = MatGroup::closure(8, {identity(8)});
    AbelianInvariants inv = abelian_invariants(diag, triv);
    CHECK(inv.factors == std::vector<u64>{2, 2});
    // Non-normal subgroup rejected.
    MatGroup s4 = full_sl2(4);
    MatGroup borel = MatGroup::closure(4, {gen_T(4)});
    CHECK_THROWS_AS(abelian_invariants(s4, borel), NotNormal);
    // Non-abelian quotient rejected.
    CHECK_THROWS_AS(abelian_invariants(full_sl2(5), MatGroup::closure(5, {identity(5)})),
                    NotAbelianQuotient);
}

TEST_CASE("class generates quotient") {
    MatGroup s = full_sl2(4);
    MatGroup d = derived_subgroup(s);
    // T generates the cyclic abelianization of SL2(m).
    CHECK(class_generates_quotient(s, d, gen_T(4)));
    CHECK(!class_generates_quotient(s, d, identity(4)));
}

TEST_CASE("det image and SL part") {
    MatGroup g = full_gl2(5);
    auto dets = det_image(g);
    CHECK(dets == std::vector<u64>{1, 2, 3, 4});
    MatGroup sl = sl_intersection(g);
    CHECK(sl.order() == sl2_order(5));
    CHECK(g.order() == sl.order() * dets.size());
}

TEST_CASE("conjugate containment") {
    // (0,1;1,0) is conjugate to T mod 2.
    MatGroup g = MatGroup::closure(2, {mat2(2, 0, 1, 1, 0)});
    auto w = contains_conjugate_of(g, gen_T(2));
    REQUIRE(w.has_value());
    CHECK(g.contains(mul(mul(*w, gen_T(2)), *invert(*w))));
    // The identity-only group contains no conjugate of T.
    MatGroup triv = MatGroup::closure(5, {identity(5)});
    CHECK(!contains_conjugate_of(triv, gen_T(5)).has_value());
}

TEST_CASE("fiber product detection") {
    // Full direct product: GL2(6) = GL2(2) x GL2(3).
    CHECK(is_fiber_product_trivial(full_gl2(6), 2, 3));
    // An entangled subgroup is not a direct product: the order-2 group
    // whose mod-2 and mod-3 projections both have order 2.
    MatGroup c = MatGroup::closure(6, {mat2(6, 0, 1, 1, 0)});
    CHECK(!is_fiber_product_trivial(c, 2, 3));
    CHECK_THROWS_AS(is_fiber_product_trivial(c, 2, 2), BadModulus);
}

TEST_CASE("subgroup and reduction") {
    MatGroup s = full_sl2(4);
    MatGroup g = full_gl2(4);
    CHECK(is_subgroup(s, g));
    CHECK(!is_subgroup(g, s));
    CHECK(is_normal_in(s, g));
    MatGroup r = reduce_group(g, 2);
    CHECK(r == full_gl2(2));
}

TEST_CASE("unit group generators") {
    for (u64 n : {5, 8, 12, 15}) {
        CAPTURE(n);
        std::set<u64> span{1};
        auto gens = unit_group_generators(n);
        // Close the span to verify generation.
        bool grew = true;
        while (grew) {
            grew = false;
            for (u64 x : std::set<u64>(span))
                for (u64 g : gens)
                    if (span.insert(x * g % n).second) grew = true;
        }
        CHECK(span.size() == euler_phi(n));
    }
}
