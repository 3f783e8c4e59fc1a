#include "coinc/xmodular.hpp"

#include <numeric>

namespace coinc {

namespace {

// Numerator and denominator coefficients of the j-map, ascending degree.
const BigInt kNum[9] = {-1188, -864, 1296, 864, -504, -288, 80, 32, -4};
const BigInt kDen[5] = {1, 4, 6, 4, 1}; // (t+1)^4

BigInt poly_eval(const BigInt* coeff, int deg, const BigInt& a, const BigInt& b) {
    // Homogeneous evaluation: sum coeff[i] * a^i * b^(deg-i).
    BigInt acc = 0;
    BigInt apow = 1;
    for (int i = 0; i <= deg; ++i) {
        BigInt bpow = 1;
        for (int j = 0; j < deg - i; ++j) bpow *= b;
        acc += coeff[i] * apow * bpow;
        apow *= a;
    }
    return acc;
}

} // namespace

Rational make_rational(BigInt num, BigInt den) {
    if (den == 0) throw MalformedRecord("rational with zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    BigInt g = boost::multiprecision::gcd(num < 0 ? BigInt(-num) : num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
    if (num == 0) den = 1;
    return Rational{std::move(num), std::move(den)};
}

Rational rational_from_string(const std::string& s) {
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return make_rational(BigInt(s), 1);
        return make_rational(BigInt(s.substr(0, slash)), BigInt(s.substr(slash + 1)));
    } catch (const std::runtime_error&) {
        throw MalformedRecord("cannot parse rational: " + s);
    }
}

std::string to_string(const Rational& r) {
    if (r.den == 1) return r.num.str();
    return r.num.str() + "/" + r.den.str();
}

std::optional<Rational> j_of_t(const Rational& t) {
    BigInt d = poly_eval(kDen, 4, t.num, t.den);
    if (d == 0) return std::nullopt;
    BigInt n = poly_eval(kNum, 8, t.num, t.den);
    // Homogenization factors: n has weight 8, d has weight 4 in (a, b).
    BigInt b4 = t.den * t.den * t.den * t.den;
    return make_rational(std::move(n), d * b4);
}

std::map<Rational, std::vector<Rational>> search_preimages(const std::vector<Rational>& targets,
                                                           u64 height_bound) {
    if (height_bound < 1) throw MalformedRecord("height bound must be >= 1");
    std::map<Rational, std::vector<Rational>> out;
    for (const Rational& tgt : targets) out[tgt];
    if (targets.empty()) return out;
    const i64 h = static_cast<i64>(height_bound);
    for (i64 b = 1; b <= h; ++b)
        for (i64 a = -h; a <= h; ++a) {
            if (std::gcd(a < 0 ? -a : a, b) != 1) continue;
            Rational t{a, b};
            auto j = j_of_t(t);
            if (!j) continue;
            for (const Rational& tgt : targets)
                if (*j == tgt) out[tgt].push_back(t);
        }
    return out;
}

} // namespace coinc
