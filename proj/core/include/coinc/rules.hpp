#pragma once

#include <map>
#include <string>

#include "coinc/matgroup.hpp"

namespace coinc {

enum class ReductionKind { Good, MultSplit, MultNonSplit, Additive };

struct ReductionType {
    ReductionKind kind;
    std::optional<bool> supersingular;     // meaningful for Good only
    std::optional<bool> potentially_good;  // meaningful for Additive only

    bool operator==(const ReductionType&) const = default;
};

struct IdealData {
    u64 e = 1; // ramification index of F/Q at this ideal
    ReductionType reduction;
    std::optional<i64> v_ideal_of_j; // valuation of j(E) at this ideal
};

struct LocalData {
    u64 residue_characteristic;
    std::vector<IdealData> ideals; // nonempty
};

// One piece of knowledge about F inside cyclotomic towers: either whether
// the intersection F n Q(zeta_{p^k}) is trivial, or the largest r with
// Q(zeta_{p^r}) contained in F n Q(mu_{p^infty}).
struct CyclotomicEntry {
    u64 p;
    std::optional<u64> k;
    std::optional<bool> trivial;
    std::optional<u64> r;
};

struct CMData {
    bool field_is_K_of_j;
};

struct CurveRecord {
    std::vector<u64> field_disc_primes;     // primes dividing Delta_F
    std::vector<u64> conductor_norm_primes; // primes dividing N(f_E)
    std::vector<LocalData> local;
    std::optional<CMData> cm;
    std::vector<CyclotomicEntry> cyclotomic_trivial;
    std::vector<u64> zeta_in_F; // n with zeta_n in F
    std::map<u64, MatGroup> images; // level -> mod-level Galois image
    std::optional<std::vector<u64>> entanglement_set;
    std::optional<bool> j_cube_root_in_F;
};

// Throws MalformedRecord on structural violations (empty ideal lists,
// zero ramification index, image modulus not matching its level, ...).
void validate_record(const CurveRecord& rec);

enum class Verdict { Obstructed, ConstraintSatisfied, NotApplicable };

std::string to_string(Verdict v);

struct Finding {
    std::string rule; // "R1".."R9", "R0", "I1", "R1'".."R4'"
    Verdict verdict;
    std::string detail; // for NotApplicable: names the missing field
    std::string citation;
};

struct ObstructionReport {
    u64 m = 0, n = 0;
    bool two_curves = false;
    std::vector<Finding> findings;

    bool obstructed() const;
};

enum class RamBound { Unramified, TameAtP, VpAtMost1, VpAtMost3 };

// Bound class on e_p(F(E[m])/F) implied by the reduction type at an ideal
// above p (p coprime to m).
RamBound ramification_bound(const ReductionType& rt, u64 p);

// Whether the ramification index e of F/Q at the ideal permits
// F(zeta_{p^k}) inside F(E[m]) under the given bound class.
bool cyclotomic_requirement_met(RamBound b, u64 p, u64 k, u64 e);

// Applies every rule whose data requirements are met to the coincidence
// query F(E[m]) = F(E[n]) (or F(E[m]) = F(E'[n]) when rec2 is given;
// two-record audits apply only the two-curve rules R1'-R4').
ObstructionReport audit(u64 m, u64 n, const CurveRecord& rec, const CurveRecord* rec2 = nullptr);

enum class AbelianPart { FullCyclotomic, CyclotomicPlusZ3 };

struct LargeImageAnalysis {
    bool contains_sl2;
    bool derived_is_sl2;
    AbelianPart abelian_part;
};

// For odd modulus m >= 3; throws NotLarge when SL2(m) is not contained
// in G. CyclotomicPlusZ3 can occur only when 3 | m (asserted).
LargeImageAnalysis large_image_analysis(const MatGroup& g);

u64 p_adic_valuation(u64 x, u64 p);

} // namespace coinc
