#pragma once

#include "coinc/matgroup.hpp"

namespace coinc {

enum class LiftStatus { Liftable, NotLiftable, Exhausted };

struct ElementLiftResult {
    LiftStatus status;
    std::optional<Mat2> witness; // set iff Liftable
    u64 search_count = 0;
};

struct GroupLiftResult {
    LiftStatus status;
    std::optional<MatGroup> witness; // set iff Liftable
    u64 search_count = 0;
};

// Budget is measured in closure operations (elements materialized during
// candidate-prefix closures); exceeding it yields Exhausted, never
// NotLiftable.
inline constexpr u64 kDefaultLiftBudget = 10'000'000;

// Kernel of the reduction GL2(mn) -> GL2(m). Requires m to properly
// divide mn. Matrices congruent to I mod m are filtered for invertibility
// mod mn, so non-prime-power moduli are handled correctly.
MatGroup reduction_kernel(u64 mn, u64 m);

// All invertible lifts of g to modulus mn, in lexicographic order.
std::vector<Mat2> lift_fibers(const Mat2& g, u64 mn);

// Exhaustive fiber search for a lift of equal order; first witness in
// lexicographic order.
ElementLiftResult element_split_liftable(const Mat2& g, u64 mn);

// Split lift of G to modulus mn: a subgroup of GL2(mn) reducing
// bijectively onto G. Depth-first search over order-preserving generator
// lifts with exact prefix-size pruning; NotLiftable only after the search
// space is provably empty or exhausted.
GroupLiftResult group_split_liftable(const MatGroup& g, u64 mn, u64 budget = kDefaultLiftBudget);

// Whether the surjection H -> (H mod m) splits: searches for a complement
// C <= H meeting the reduction kernel trivially. Liftable means a
// complement exists; witness is the complement.
GroupLiftResult sequence_splits(const MatGroup& h, u64 m, u64 budget = kDefaultLiftBudget);

} // namespace coinc
