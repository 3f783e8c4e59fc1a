#pragma once

#include "coinc/matgroup.hpp"

namespace coinc {

/// A depth-limited p-adic image: the group is known exactly mod p^s, and
/// every deeper level is by convention its full preimage.
struct PAdicImage {
    u64 p;
    u64 depth; // s >= 1
    MatGroup base_group; // modulus p^depth
};

// Validates primality of p and that the group modulus is p^depth.
PAdicImage make_padic_image(u64 p, u64 depth, MatGroup base_group);

/// Index sequences against the full groups, levels 1..kmax:
///   i_k = [GL2(p^k) : G_k], j_k = [(Z/p^k)^* : det G_k],
///   ell_k = [SL2(p^k) : SL2 n G_k], u_k = i_{k+1} / i_k.
struct IndexProfile {
    u64 p;
    std::vector<u64> i, j, ell; // index k-1 holds level k
    std::vector<u64> u;         // size kmax-1

    bool operator==(const IndexProfile&) const = default;
};

// G_k: projection for k <= depth, full preimage for k > depth. The
// preimage is materialized, so it must fit under the cap.
MatGroup level_image(const PAdicImage& x, u64 k, u64 cap = MatGroup::kDefaultCap);

// All four sequences; enforces i_k = j_k * ell_k, u_k | p^4 and
// i_k | i_{k+1}, raising InternalInconsistency on violation. Levels past
// the depth are computed arithmetically without materializing preimages.
IndexProfile index_profile(const PAdicImage& x, u64 kmax);

// Levels k (1 <= k < kmax) with G_k isomorphic to G_{k+1}, i.e. u_k = p^4.
// Verifies downward propagation (to level 1 for odd p, level 2 for p = 2),
// raising InternalInconsistency on violation.
std::vector<u64> detect_vertical_coincidences(const PAdicImage& x, u64 kmax);

struct MonotoneCheck {
    bool pass;
    std::optional<u64> first_violation; // smallest k with u_{k+1} not dividing u_k

    bool operator==(const MonotoneCheck&) const = default;
};

// Divisibility u_{k+1} | u_k for k >= 1 (k >= 2 when p = 2), up to kmax.
MonotoneCheck monotone_ratio_check(const PAdicImage& x, u64 kmax);

// p^{4k} for odd p, max(2^4, 2^{4k-1}) for p = 2.
u64 adelic_index_lower_bound(u64 p, u64 k);

bool is_prime(u64 p);

} // namespace coinc
