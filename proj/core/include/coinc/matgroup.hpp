#pragma once

#include <optional>
#include <vector>

#include "coinc/modmat.hpp"

namespace coinc {

/// A finite subgroup of GL2(Z/nZ), stored as generators plus the full
/// element set, sorted lexicographically on canonical entries.
///
/// Values are immutable after construction and safe to share across threads.
class MatGroup {
public:
    static constexpr u64 kDefaultCap = u64{1} << 22;

    // Breadth-first closure of the generating set. Throws NotInvertible if a
    // generator is singular, GroupTooLarge past the cap.
    static MatGroup closure(u64 modulus, std::vector<Mat2> gens, u64 cap = kDefaultCap);

    // Wraps a set already known to be a group (identity, inverses and a
    // sample of products are verified; full closure is re-derived for small
    // sets). gens_hint, when given, must generate the set.
    static MatGroup from_elements(u64 modulus, std::vector<Mat2> elems,
                                  std::vector<Mat2> gens_hint = {});

    u64 modulus() const { return modulus_; }
    u64 order() const { return elems_.size(); }
    const std::vector<Mat2>& generators() const { return gens_; }
    const std::vector<Mat2>& elements() const { return elems_; }
    bool contains(const Mat2& m) const;
    bool is_trivial() const { return elems_.size() == 1; }

    bool operator==(const MatGroup& o) const {
        return modulus_ == o.modulus_ && elems_ == o.elems_;
    }

private:
    MatGroup(u64 modulus, std::vector<Mat2> gens, std::vector<Mat2> elems);

    u64 modulus_;
    std::vector<Mat2> gens_;  // nonempty
    std::vector<Mat2> elems_; // sorted, contains identity
};

struct AbelianInvariants {
    // d_1 | d_2 | ... | d_r, each >= 2; empty for the trivial group.
    std::vector<u64> factors;

    bool operator==(const AbelianInvariants&) const = default;
};

// Full GL2 / SL2 by deterministic enumeration.
MatGroup full_gl2(u64 n, u64 cap = MatGroup::kDefaultCap);
MatGroup full_sl2(u64 n, u64 cap = MatGroup::kDefaultCap);

// A small generating set of (Z/nZ)^*, found greedily in ascending order.
std::vector<u64> unit_group_generators(u64 n);

// Commutator subgroup D(G), as the normal closure of generator commutators.
MatGroup derived_subgroup(const MatGroup& g);

// Invariant-factor decomposition of G/N. Throws NotNormal /
// NotAbelianQuotient when the quotient is not defined or not abelian.
AbelianInvariants abelian_invariants(const MatGroup& g, const MatGroup& n);

// Whether the class of x generates the (abelian) quotient G/N.
bool class_generates_quotient(const MatGroup& g, const MatGroup& n, const Mat2& x);

// The subgroup {det(g) : g in G} of units, sorted.
std::vector<u64> det_image(const MatGroup& g);

// Determinant-one part of G.
MatGroup sl_intersection(const MatGroup& g);

// First c in the deterministic enumeration of GL2(n) with c g c^-1 in G,
// or nullopt after exhausting GL2(n).
std::optional<Mat2> contains_conjugate_of(const MatGroup& g, const Mat2& x);

// True iff G is the full direct product of its mod-m and mod-n projections,
// for a coprime factorization modulus = m * n.
bool is_fiber_product_trivial(const MatGroup& g, u64 m, u64 n);

bool is_subgroup(const MatGroup& h, const MatGroup& g);
bool is_normal_in(const MatGroup& n, const MatGroup& g);

// Image of G under entrywise reduction mod m.
MatGroup reduce_group(const MatGroup& g, u64 m);

} // namespace coinc
