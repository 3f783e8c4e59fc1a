#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "coinc/errors.hpp"

namespace coinc {

using u64 = std::uint64_t;
using i64 = std::int64_t;

// Moduli are validated to stay in machine-word range for all derived
// quantities (orders, products of entries).
inline constexpr u64 kMaxModulus = u64{1} << 20;

void check_modulus(u64 n);

// Canonical representative of x mod n in [0, n).
u64 canonical_mod(i64 x, u64 n);

u64 gcd_u64(u64 a, u64 b);

/// A residue class mod n, stored as its canonical representative.
struct Residue {
    u64 modulus;
    u64 value; // in [0, modulus)

    bool operator==(const Residue&) const = default;
};

Residue residue(i64 value, u64 modulus);
bool is_unit(const Residue& r);
// Inverse of a unit; throws NotInvertible otherwise.
Residue residue_inverse(const Residue& r);

/// A 2x2 matrix over Z/nZ, entries row-major (a, b, c, d), canonical.
struct Mat2 {
    u64 n;
    std::array<u64, 4> e;

    bool operator==(const Mat2&) const = default;
    // Lexicographic on (n, a, b, c, d); used for deterministic enumeration.
    auto operator<=>(const Mat2&) const = default;
};

Mat2 mat2(u64 n, i64 a, i64 b, i64 c, i64 d);
Mat2 identity(u64 n);

Mat2 mul(const Mat2& x, const Mat2& y);
Mat2 mat_pow(Mat2 x, u64 k);

Residue det(const Mat2& m);
bool is_invertible(const Mat2& m);
std::optional<Mat2> invert(const Mat2& m);

// Smallest d >= 1 with m^d = I; throws NotInvertible for singular input.
u64 element_order(const Mat2& m);

// Entrywise reduction to a divisor of the modulus; a ring homomorphism.
Mat2 reduce_mat(const Mat2& m, u64 to);

Residue reduce_residue(const Residue& r, u64 to);

std::string to_string(const Mat2& m);

// |GL2(Z/nZ)| and |SL2(Z/nZ)| by the closed-form product over prime powers.
u64 gl2_order(u64 n);
u64 sl2_order(u64 n);
u64 euler_phi(u64 n);

// (prime, exponent) pairs of n, ascending.
std::vector<std::pair<u64, u64>> factorize(u64 n);

// The standard generators of SL2: S = (0,-1;1,0), T = (1,1;0,1).
Mat2 gen_S(u64 n);
Mat2 gen_T(u64 n);

} // namespace coinc
