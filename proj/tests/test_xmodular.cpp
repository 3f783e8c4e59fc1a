#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "coinc/xmodular.hpp"

using namespace coinc;

namespace {

// Independent oracle: Horner evaluation over exact fractions kept as raw
// (num, den) pairs without reduction until the end.
struct Frac {
    BigInt n, d;
};

Frac frac_add(const Frac& x, const Frac& y) { return {x.n * y.d + y.n * x.d, x.d * y.d}; }
Frac frac_mul(const Frac& x, const Frac& y) { return {x.n * y.n, x.d * y.d}; }

std::optional<Rational> oracle_j(const Rational& t) {
    const i64 num_c[9] = {-1188, -864, 1296, 864, -504, -288, 80, 32, -4};
    Frac tv{t.num, t.den};
    Frac num{0, 1};
    for (int i = 8; i >= 0; --i) num = frac_add(frac_mul(num, tv), Frac{num_c[i], 1});
    // Denominator (t + 1)^4.
    Frac den = frac_add(tv, Frac{1, 1});
    Frac d4{1, 1};
    for (int i = 0; i < 4; ++i) d4 = frac_mul(d4, den);
    if (d4.n == 0) return std::nullopt;
    return make_rational(num.n * d4.d, num.d * d4.n);
}

Rational rat(i64 a, i64 b = 1) { return make_rational(a, b); }

} // namespace

TEST_CASE("rational construction and parsing") {
    CHECK(rat(6, 4) == rat(3, 2));
    CHECK(rat(1, -2) == rat(-1, 2));
    CHECK(rat(0, 7) == rat(0, 1));
    CHECK_THROWS_AS(make_rational(1, 0), MalformedRecord);
    CHECK(rational_from_string("-3/6") == rat(-1, 2));
    CHECK(rational_from_string("42") == rat(42));
    CHECK_THROWS_AS(rational_from_string("x/2"), MalformedRecord);
    CHECK(to_string(rat(-1, 2)) == "-1/2");
    CHECK(to_string(rat(5)) == "5");
    CHECK(rat(1, 3) < rat(1, 2));
    CHECK(rat(-2) < rat(1, 9));
}

TEST_CASE("special values of the j-map") {
    CHECK(j_of_t(rat(0)) == rat(-1188));
    CHECK(j_of_t(rat(1)) == rat(-36));
    CHECK(!j_of_t(rat(-1)).has_value());
}

TEST_CASE("j-map agrees with the Horner oracle on a grid") {
    for (i64 b = 1; b <= 7; ++b)
        for (i64 a = -7; a <= 7; ++a) {
            Rational t = rat(a, b);
            CAPTURE(a);
            CAPTURE(b);
            auto lhs = j_of_t(t);
            auto rhs = oracle_j(t);
            CHECK(lhs == rhs);
        }
}

TEST_CASE("preimage search finds exact fibers") {
    // j(0) = -1188 and j(1) = -36 must reappear in the fibers.
    auto found = search_preimages({rat(-1188), rat(-36)}, 10);
    REQUIRE(found.size() == 2);
    auto& f0 = found.at(rat(-1188));
    CHECK(std::find(f0.begin(), f0.end(), rat(0)) != f0.end());
    auto& f1 = found.at(rat(-36));
    CHECK(std::find(f1.begin(), f1.end(), rat(1)) != f1.end());
    // Every reported t really maps to its target.
    for (auto& [tgt, ts] : found)
        for (auto& t : ts) CHECK(j_of_t(t) == tgt);
    // Sorted by (b, a).
    for (auto& [tgt, ts] : found)
        for (size_t i = 1; i < ts.size(); ++i) {
            bool ord = ts[i - 1].den < ts[i].den ||
                       (ts[i - 1].den == ts[i].den && ts[i - 1].num < ts[i].num);
            CHECK(ord);
        }
}

TEST_CASE("no CM targets 0 and 1728 in the fiber up to height 30") {
    auto found = search_preimages({rat(0), rat(1728)}, 30);
    CHECK(found.at(rat(0)).empty());
    CHECK(found.at(rat(1728)).empty());
}

TEST_CASE("height bound validation") {
    CHECK_THROWS_AS(search_preimages({rat(0)}, 0), MalformedRecord);
    CHECK(search_preimages({}, 5).empty());
}
