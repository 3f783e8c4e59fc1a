#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "coinc/modmat.hpp"

namespace coinc {

using BigInt = boost::multiprecision::cpp_int;

/// An exact rational, always reduced with positive denominator.
struct Rational {
    BigInt num;
    BigInt den;

    bool operator==(const Rational&) const = default;
    // Cross-multiplication order, valid because denominators are positive.
    bool operator<(const Rational& o) const { return num * o.den < o.num * den; }
};

Rational make_rational(BigInt num, BigInt den);
Rational rational_from_string(const std::string& s); // "a/b" or "a"
std::string to_string(const Rational& r);

// Evaluation of the degree-8 over degree-4 map from the (2,4)-coincidence
// parametrization to the j-line; nullopt at the pole t = -1.
std::optional<Rational> j_of_t(const Rational& t);

// All reduced t = a/b with |a| <= H and 1 <= b <= H mapping to each
// target, exact arithmetic throughout; lists sorted by (b, a).
std::map<Rational, std::vector<Rational>> search_preimages(const std::vector<Rational>& targets,
                                                           u64 height_bound);

} // namespace coinc
