#include "coinc/rules.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "coinc/padic.hpp"

namespace coinc {

namespace {

constexpr const char* kCiteR0 = "R0 / Lem. coincidence-primes-in-S";
constexpr const char* kCiteR1 = "R1 / Thm. coincidence-ramified-or-bad-red";
constexpr const char* kCiteR2 = "R2 / Cor. coincidence-and-reduction";
constexpr const char* kCiteR3 = "R3 / Cor. greatest-prime-divisor-coincidence";
constexpr const char* kCiteR4 = "R4 / Cor. vertical-coincidence-and-trivial-intersection";
constexpr const char* kCiteR5 = "R5 / Thm. ramification-and-vertical-coincidence";
constexpr const char* kCiteR6 = "R6 / Prop. coincidence-CM";
constexpr const char* kCiteR7a = "R7 / Thm. large-image-m-odd";
constexpr const char* kCiteR7b = "R7 / Thm. coincidence-72-divides-m";
constexpr const char* kCiteR8a = "R8 / Thm. T-and-vertical-coincidence";
constexpr const char* kCiteR8b = "R8 / Cor. multiplicative-reduction-no-vertical-coincidence";
constexpr const char* kCiteR9 = "R9 / Lem. cyclic-extension-order-divisibility";
constexpr const char* kCiteI1 = "I1 / Lem. cube-root-of-j";
constexpr const char* kCiteR1p = "R1' / Thm. coincidence-and-reduction-two-curves";
constexpr const char* kCiteR2p = "R2' / Thm. vertical-coincidence-and-trivial-intersection-two-curves";
constexpr const char* kCiteR3p = "R3' / Thm. coincidence-divisibility-two-curves";
constexpr const char* kCiteR4p = "R4' / Thm. large-image-two-curves";

bool in_list(const std::vector<u64>& v, u64 x) {
    return std::find(v.begin(), v.end(), x) != v.end();
}

std::vector<u64> prime_support(u64 x) {
    std::vector<u64> out;
    for (auto [p, k] : factorize(x)) out.push_back(p);
    return out;
}

// Accumulates per-prime notes into a single finding.
struct Agg {
    bool obstructed = false;
    bool missing = false;
    std::vector<std::string> notes;

    void obstruct(std::string note) {
        obstructed = true;
        notes.push_back(std::move(note));
    }
    void need(std::string field) {
        missing = true;
        notes.push_back("missing data: " + std::move(field));
    }
    void note(std::string s) { notes.push_back(std::move(s)); }

    Finding finish(std::string rule, std::string citation, std::string empty_note) const {
        Verdict v = obstructed ? Verdict::Obstructed
                               : (missing ? Verdict::NotApplicable : Verdict::ConstraintSatisfied);
        std::string detail;
        if (notes.empty()) {
            detail = std::move(empty_note);
        } else {
            for (std::size_t i = 0; i < notes.size(); ++i) {
                if (i) detail += "; ";
                detail += notes[i];
            }
        }
        return Finding{std::move(rule), v, std::move(detail), std::move(citation)};
    }
};

const LocalData* local_at(const CurveRecord& rec, u64 p) {
    for (const LocalData& ld : rec.local)
        if (ld.residue_characteristic == p) return &ld;
    return nullptr;
}

std::optional<bool> cyclo_trivial(const CurveRecord& rec, u64 p, u64 k) {
    for (const CyclotomicEntry& c : rec.cyclotomic_trivial)
        if (c.p == p && c.k && *c.k == k && c.trivial) return *c.trivial;
    return std::nullopt;
}

// Largest r with Q(zeta_{p^r}) in F n Q(mu_{p^infty}); r = 0 is forced
// when p is unramified in F, so absence of explicit data defaults to 0
// only in that case.
std::optional<u64> cyclo_r(const CurveRecord& rec, u64 p) {
    for (const CyclotomicEntry& c : rec.cyclotomic_trivial)
        if (c.p == p && c.r) return *c.r;
    if (!in_list(rec.field_disc_primes, p)) return 0;
    return std::nullopt;
}

// The query (a, b) as a vertical step: a = p^k, b = p^{k+1} up to order.
struct VerticalStep {
    u64 p;
    u64 k; // lower exponent
};

std::optional<VerticalStep> as_vertical(u64 m, u64 n) {
    if (m == n || m < 2 || n < 2) return std::nullopt;
    auto fm = factorize(m), fn = factorize(n);
    if (fm.size() != 1 || fn.size() != 1 || fm[0].first != fn[0].first) return std::nullopt;
    u64 lo = std::min(fm[0].second, fn[0].second);
    u64 hi = std::max(fm[0].second, fn[0].second);
    if (hi != lo + 1) return std::nullopt;
    return VerticalStep{fm[0].first, lo};
}

bool is_power_of_two(u64 x) { return x >= 1 && (x & (x - 1)) == 0; }

// The reduction-type bullet of the coincidence-and-reduction corollary for
// exponent k = v_p(n); returns whether the given type is among the
// permitted ones (false for shapes with no permitted type at all).
bool reduction_bullet_allows(u64 k, u64 p, const ReductionType& rt) {
    if (k == 1) return rt.kind != ReductionKind::Good;
    if (k == 2 && p == 2)
        return rt.kind == ReductionKind::Additive || rt.kind == ReductionKind::MultNonSplit;
    if (k == 2 && p == 3)
        return rt.kind == ReductionKind::Additive && rt.potentially_good == true;
    if ((k == 3 || k == 4) && p == 2)
        return rt.kind == ReductionKind::Additive && rt.potentially_good == true;
    return false;
}

bool shape_has_any_allowed_type(u64 k, u64 p) {
    return k == 1 || (k == 2 && (p == 2 || p == 3)) || ((k == 3 || k == 4) && p == 2);
}

std::string pk_str(u64 p, u64 k) {
    return std::to_string(p) + "^" + std::to_string(k);
}

// Shared by R2 and R1': primes p | n, p coprime to m, must fall into one
// of the reduction bullets. Unramified p gets the every-ideal form; when
// p ramifies in F, only ideals with e coprime to phi(p^k) constrain.
void reduction_rule_direction(Agg& agg, u64 m, u64 n, const CurveRecord& rec,
                              const std::string& side) {
    for (u64 p : prime_support(n)) {
        if (m % p == 0) continue;
        const u64 k = p_adic_valuation(n, p);
        const bool unramified = !in_list(rec.field_disc_primes, p);
        const LocalData* ld = local_at(rec, p);
        if (unramified) {
            if (!shape_has_any_allowed_type(k, p)) {
                agg.obstruct("v_" + std::to_string(p) + "(" + side + ") = " + std::to_string(k) +
                             " with p unramified in F admits no reduction type");
                continue;
            }
            if (!ld) {
                agg.need("local reduction data at p = " + std::to_string(p));
                continue;
            }
            for (const IdealData& id : ld->ideals)
                if (!reduction_bullet_allows(k, p, id.reduction)) {
                    agg.obstruct("reduction type at an ideal above " + std::to_string(p) +
                                 " is excluded for v_p(" + side + ") = " + std::to_string(k));
                    break;
                }
        } else {
            if (!ld) {
                agg.need("local reduction data at p = " + std::to_string(p));
                continue;
            }
            u64 phi = p - 1;
            for (u64 i = 1; i < k; ++i) phi *= p;
            bool any = false;
            for (const IdealData& id : ld->ideals) {
                if (gcd_u64(id.e, phi) != 1) continue;
                any = true;
                if (!shape_has_any_allowed_type(k, p) ||
                    !reduction_bullet_allows(k, p, id.reduction)) {
                    agg.obstruct("ideal above " + std::to_string(p) +
                                 " with e coprime to phi(" + pk_str(p, k) +
                                 ") has excluded reduction type");
                    break;
                }
            }
            if (!any)
                agg.note("no ideal above " + std::to_string(p) + " has e coprime to phi(" +
                         pk_str(p, k) + ")");
        }
    }
}

void greatest_prime_direction(Agg& agg, u64 a, u64 b, const CurveRecord& rec) {
    if (a < 2) return;
    u64 maxprime = 0;
    for (u64 q : prime_support(a)) maxprime = std::max(maxprime, q);
    for (u64 p : prime_support(b)) {
        if (p <= maxprime) continue;
        const u64 k = p_adic_valuation(b, p);
        auto r = cyclo_r(rec, p);
        if (!r) {
            agg.need("cyclotomic r for p = " + std::to_string(p));
            continue;
        }
        if (k <= *r) {
            agg.note("v_p exponent " + std::to_string(k) + " at p = " + std::to_string(p) +
                     " not above r = " + std::to_string(*r));
            continue;
        }
        bool ok = k == 1 ||
                  (is_power_of_two(a) && p == 3 && ((*r == 0 && k <= 2) || *r == k - 1));
        if (!ok)
            agg.obstruct("prime " + std::to_string(p) + " above all primes of " +
                         std::to_string(a) + " divides the partner to power " +
                         std::to_string(k));
    }
}

Finding rule_R1(u64 m, u64 n, const CurveRecord& rec) {
    Agg agg;
    std::set<u64> ps;
    for (u64 p : prime_support(m)) ps.insert(p);
    for (u64 p : prime_support(n)) ps.insert(p);
    for (u64 p : ps) {
        if (p_adic_valuation(m, p) == p_adic_valuation(n, p)) continue;
        if (p != 2 && !in_list(rec.field_disc_primes, p) && !in_list(rec.conductor_norm_primes, p))
            agg.obstruct("p = " + std::to_string(p) +
                         " has unequal exponents but divides neither 2, Delta_F nor N(f_E)");
    }
    return agg.finish("R1", kCiteR1, "every unbalanced prime divides 2*Delta_F*N(f_E)");
}

Finding rule_R2(u64 m, u64 n, const CurveRecord& rec) {
    Agg agg;
    reduction_rule_direction(agg, m, n, rec, "n");
    reduction_rule_direction(agg, n, m, rec, "m");
    return agg.finish("R2", kCiteR2, "no prime divides one side only");
}

Finding rule_R3(u64 m, u64 n, const CurveRecord& rec) {
    Agg agg;
    greatest_prime_direction(agg, m, n, rec);
    greatest_prime_direction(agg, n, m, rec);
    return agg.finish("R3", kCiteR3, "no prime above the partner's whole support");
}

Finding rule_R4(u64 m, u64 n, const CurveRecord& rec, const char* id, const char* cite) {
    Agg agg;
    auto v = as_vertical(m, n);
    if (!v) {
        agg.note("query is not a (p^k, p^{k+1}) step");
    } else {
        auto t = cyclo_trivial(rec, v->p, v->k);
        if (!t) {
            agg.need("cyclotomic_trivial at (" + std::to_string(v->p) + ", " +
                     std::to_string(v->k) + ")");
        } else if (!*t) {
            agg.note("F meets Q(zeta_{" + pk_str(v->p, v->k) + "}) nontrivially");
        } else if (v->p != 2) {
            agg.obstruct("trivial cyclotomic intersection forbids odd p = " +
                         std::to_string(v->p));
        } else {
            agg.note("p = 2 permitted");
        }
    }
    return agg.finish(id, cite, "");
}

Finding rule_R5(u64 m, u64 n, const CurveRecord& rec) {
    Agg agg;
    u64 lo = std::min(m, n), hi = std::max(m, n);
    auto flo = factorize(lo), fhi = factorize(hi);
    bool shape = lo >= 2 && flo.size() == 1 && fhi.size() == 1 &&
                 flo[0].first == fhi[0].first && flo[0].second == 1 && fhi[0].second >= 2;
    if (!shape) {
        agg.note("query is not of the form (p, p^k) with k >= 2");
        return agg.finish("R5", kCiteR5, "");
    }
    const u64 p = flo[0].first;
    const u64 k = fhi[0].second;
    const LocalData* ld = local_at(rec, p);
    if (!ld) {
        agg.need("local reduction data at p = " + std::to_string(p));
        return agg.finish("R5", kCiteR5, "");
    }
    u64 pk1 = 1;
    for (u64 i = 1; i < k; ++i) pk1 *= p;
    bool unknown_ss = false;
    for (const IdealData& id : ld->ideals) {
        if (id.reduction.kind != ReductionKind::Good) continue;
        if (!id.reduction.supersingular) {
            unknown_ss = true;
            continue;
        }
        if (*id.reduction.supersingular && id.e % pk1 != 0) {
            agg.obstruct("good supersingular reduction above " + std::to_string(p) +
                         " with " + pk_str(p, k - 1) + " not dividing e");
            break;
        }
    }
    if (!agg.obstructed && unknown_ss)
        agg.need("supersingular flag at an ideal above " + std::to_string(p));
    return agg.finish("R5", kCiteR5, "no supersingular obstruction");
}

Finding rule_R6(u64 m, u64 n, const CurveRecord& rec) {
    Agg agg;
    if (!rec.cm) {
        agg.need("cm");
    } else if (!rec.cm->field_is_K_of_j) {
        agg.note("F is not K(j(E)); CM rule does not constrain");
    } else if (auto v = as_vertical(m, n)) {
        if (v->p == 2 && v->k == 1)
            agg.note("(2,4) step permitted for CM");
        else
            agg.obstruct("CM over K(j(E)) forbids the (" + pk_str(v->p, v->k) + ", " +
                         pk_str(v->p, v->k + 1) + ") step");
    } else {
        agg.note("query is not a vertical step");
    }
    return agg.finish("R6", kCiteR6, "");
}

void large_image_rule(Agg& agg, u64 m, u64 n, const CurveRecord& rec) {
    if (m % 2 == 0 || m < 3) {
        agg.note("m is not odd >= 3");
        return;
    }
    if (m % n == 0) {
        agg.note("n divides m; rule does not constrain");
        return;
    }
    if (in_list(rec.zeta_in_F, n)) {
        agg.note("zeta_n already in F; rule does not constrain");
        return;
    }
    auto it = rec.images.find(m);
    if (it == rec.images.end()) {
        agg.need("images at level " + std::to_string(m));
        return;
    }
    const MatGroup& g = it->second;
    if (!is_subgroup(full_sl2(m), g)) {
        agg.note("image does not contain SL2(" + std::to_string(m) + ")");
        return;
    }
    LargeImageAnalysis a = large_image_analysis(g);
    if (a.derived_is_sl2)
        agg.obstruct("large image with D(G) = SL2(" + std::to_string(m) +
                     ") forces zeta_n into F(zeta_m)");
    else
        agg.note("D(G) has index 3 in SL2; only a Z/3 slack remains");
}

Finding rule_R7a(u64 m, u64 n, const CurveRecord& rec, const char* id, const char* cite) {
    Agg agg;
    large_image_rule(agg, m, n, rec);
    return agg.finish(id, cite, "");
}

Finding rule_R7b(u64 m, u64 n, const CurveRecord& rec) {
    Agg agg;
    auto it = rec.images.find(m);
    if (it == rec.images.end()) {
        agg.need("images at level " + std::to_string(m));
    } else if (!is_subgroup(full_sl2(m), it->second)) {
        agg.note("image does not contain SL2(" + std::to_string(m) + ")");
    } else {
        bool zeta_ok = m % n == 0 || in_list(rec.zeta_in_F, n);
        if (!zeta_ok && n % 2 == 0) {
            u64 u = n / 2;
            if (u % 2 == 1 && m % u == 0) zeta_ok = true;
        }
        if (zeta_ok)
            agg.note("zeta_n lies in F(zeta_m)");
        else
            agg.obstruct("72 | m with large image forces F(zeta_n) into F(zeta_m), "
                         "which fails for n = " + std::to_string(n));
    }
    return agg.finish("R7", kCiteR7b, "");
}

Finding rule_R8a(u64 m, u64 n, const CurveRecord& rec) {
    Agg agg;
    auto v = as_vertical(m, n);
    if (!v) {
        agg.note("query is not a vertical step");
        return agg.finish("R8", kCiteR8a, "");
    }
    const u64 p = v->p;
    const u64 qk = (p == 2 || p == 3) ? 2u : 1u;
    if (v->k != qk) {
        agg.note("query is not the (q, pq) step with q = " + pk_str(p, qk));
        return agg.finish("R8", kCiteR8a, "");
    }
    u64 q = 1;
    for (u64 i = 0; i < qk; ++i) q *= p;
    auto it = rec.images.find(q);
    if (it == rec.images.end()) {
        agg.need("images at level " + std::to_string(q));
        return agg.finish("R8", kCiteR8a, "");
    }
    auto w = contains_conjugate_of(it->second, gen_T(q));
    if (w)
        agg.obstruct("image mod " + std::to_string(q) + " contains a conjugate of T (by " +
                     to_string(*w) + ")");
    else
        agg.note("no conjugate of T in the image mod " + std::to_string(q));
    return agg.finish("R8", kCiteR8a, "");
}

Finding rule_R8b(u64 m, u64 n, const CurveRecord& rec) {
    Agg agg;
    auto v = as_vertical(m, n);
    if (!v) {
        agg.note("query is not a vertical step");
        return agg.finish("R8", kCiteR8b, "");
    }
    const u64 p = v->p;
    bool any_mult = false, unknown_v = false;
    for (const LocalData& ld : rec.local)
        for (const IdealData& id : ld.ideals) {
            if (id.reduction.kind != ReductionKind::MultSplit &&
                id.reduction.kind != ReductionKind::MultNonSplit)
                continue;
            any_mult = true;
            if (!id.v_ideal_of_j) {
                unknown_v = true;
                continue;
            }
            u64 av = static_cast<u64>(*id.v_ideal_of_j < 0 ? -*id.v_ideal_of_j : *id.v_ideal_of_j);
            if ((2 * av) % p != 0) {
                agg.obstruct("multiplicative reduction with p not dividing 2*v(j) forces T "
                             "into the mod-" + std::to_string(p) + " image");
                return agg.finish("R8", kCiteR8b, "");
            }
        }
    if (unknown_v)
        agg.need("v_ideal_of_j at a multiplicative ideal");
    else if (!any_mult)
        agg.note("no multiplicative reduction recorded");
    else
        agg.note("p divides 2*v(j) at every multiplicative ideal");
    return agg.finish("R8", kCiteR8b, "");
}

void order_rule_direction(Agg& agg, u64 a, u64 b, const CurveRecord& rec) {
    for (u64 p : prime_support(b)) {
        const u64 ka = p_adic_valuation(a, p);
        const u64 kb = p_adic_valuation(b, p);
        if (kb <= ka) continue;
        auto t = cyclo_trivial(rec, p, kb);
        if (!t) {
            agg.need("cyclotomic_trivial at (" + std::to_string(p) + ", " + std::to_string(kb) +
                     ")");
            continue;
        }
        if (!*t) {
            agg.note("nontrivial cyclotomic intersection at " + pk_str(p, kb));
            continue;
        }
        auto it = rec.images.find(a);
        if (it == rec.images.end()) {
            agg.need("images at level " + std::to_string(a));
            continue;
        }
        // Forced cyclic degree inside Gal(Q(zeta_{p^kb})/Q).
        u64 d;
        if (p == 2 && kb >= 3) {
            d = u64{1} << (kb - 2);
        } else {
            d = p - 1;
            for (u64 i = 1; i < kb; ++i) d *= p;
        }
        if (d <= 1) continue;
        bool found = false;
        for (const Mat2& x : it->second.elements())
            if (element_order(x) % d == 0) {
                found = true;
                break;
            }
        if (!found)
            agg.obstruct("no element of the level-" + std::to_string(a) +
                         " image has order divisible by " + std::to_string(d) +
                         " as forced by zeta_{" + pk_str(p, kb) + "}");
    }
}

Finding rule_R9(u64 m, u64 n, const CurveRecord& rec) {
    Agg agg;
    order_rule_direction(agg, m, n, rec);
    order_rule_direction(agg, n, m, rec);
    return agg.finish("R9", kCiteR9, "no forced cyclic degree to check");
}

Finding rule_I1(u64 m, u64 n, const CurveRecord& rec) {
    Agg agg;
    (void)n;
    agg.note(std::string("F(j(E)^(1/3)) is contained in F(E[3]); cube root in F: ") +
             (*rec.j_cube_root_in_F ? "yes" : "no"));
    if (m % 3 == 0) agg.note("3 | m, so the containment bears on F(E[m])");
    return agg.finish("I1", kCiteI1, "");
}

Finding rule_R3p(u64 m, u64 n, const CurveRecord& rec, const CurveRecord& rec2) {
    Agg agg;
    std::set<u64> ps;
    for (u64 p : prime_support(m)) ps.insert(p);
    for (u64 p : prime_support(n)) ps.insert(p);
    for (u64 p : ps) {
        if (p_adic_valuation(m, p) == p_adic_valuation(n, p)) continue;
        if (p != 2 && !in_list(rec.field_disc_primes, p) &&
            !in_list(rec.conductor_norm_primes, p) && !in_list(rec2.conductor_norm_primes, p))
            agg.obstruct("p = " + std::to_string(p) +
                         " has unequal exponents but divides neither 2, Delta_F, N(f_E) nor "
                         "N(f_E')");
    }
    return agg.finish("R3'", kCiteR3p,
                      "every unbalanced prime divides 2*Delta_F*N(f_E)*N(f_E')");
}

ObstructionReport audit_impl(u64 m, u64 n, const CurveRecord& rec, const CurveRecord* rec2,
                             bool allow_entanglement);

Finding rule_R0(u64 m, u64 n, const CurveRecord& rec) {
    Agg agg;
    const std::vector<u64>& s = *rec.entanglement_set;
    auto part = [&](u64 x, bool inside) {
        u64 out = 1;
        for (auto [p, k] : factorize(x))
            if (in_list(s, p) == inside)
                for (u64 i = 0; i < k; ++i) out *= p;
        return out;
    };
    std::vector<std::pair<u64, u64>> subs;
    u64 ms = part(m, true), ns = part(n, true);
    if (ms != ns) subs.emplace_back(ms, ns);
    std::set<u64> ps;
    for (u64 p : prime_support(m)) ps.insert(p);
    for (u64 p : prime_support(n)) ps.insert(p);
    for (u64 p : ps) {
        if (in_list(s, p)) continue;
        u64 a = 1, b = 1;
        for (u64 i = 0; i < p_adic_valuation(m, p); ++i) a *= p;
        for (u64 i = 0; i < p_adic_valuation(n, p); ++i) b *= p;
        if (a != b) subs.emplace_back(a, b);
    }
    if (subs.empty()) {
        agg.note("entanglement decomposition yields no nontrivial sub-query");
        return agg.finish("R0", kCiteR0, "");
    }
    for (auto [a, b] : subs) {
        ObstructionReport sub = audit_impl(std::max<u64>(a, 1), std::max<u64>(b, 1), rec, nullptr,
                                           false);
        if (sub.obstructed()) {
            std::string why;
            for (const Finding& f : sub.findings)
                if (f.verdict == Verdict::Obstructed) {
                    why = f.rule;
                    break;
                }
            agg.obstruct("derived sub-query (" + std::to_string(a) + ", " + std::to_string(b) +
                         ") obstructed by " + why);
        } else {
            agg.note("sub-query (" + std::to_string(a) + ", " + std::to_string(b) +
                     ") not obstructed");
        }
    }
    return agg.finish("R0", kCiteR0, "");
}

ObstructionReport audit_impl(u64 m, u64 n, const CurveRecord& rec, const CurveRecord* rec2,
                             bool allow_entanglement) {
    ObstructionReport rep;
    rep.m = m;
    rep.n = n;
    rep.two_curves = rec2 != nullptr;
    if (rec2) {
        Agg a1;
        reduction_rule_direction(a1, m, n, rec, "n");
        rep.findings.push_back(a1.finish("R1'", kCiteR1p, "no prime divides n only"));
        rep.findings.push_back(rule_R4(m, n, rec, "R2'", kCiteR2p));
        rep.findings.push_back(rule_R3p(m, n, rec, *rec2));
        rep.findings.push_back(rule_R7a(m, n, rec, "R4'", kCiteR4p));
        return rep;
    }
    if (allow_entanglement && rec.entanglement_set) rep.findings.push_back(rule_R0(m, n, rec));
    rep.findings.push_back(rule_R1(m, n, rec));
    rep.findings.push_back(rule_R2(m, n, rec));
    rep.findings.push_back(rule_R3(m, n, rec));
    rep.findings.push_back(rule_R4(m, n, rec, "R4", kCiteR4));
    rep.findings.push_back(rule_R5(m, n, rec));
    rep.findings.push_back(rule_R6(m, n, rec));
    rep.findings.push_back(rule_R7a(m, n, rec, "R7", kCiteR7a));
    if (m % 72 == 0) rep.findings.push_back(rule_R7b(m, n, rec));
    rep.findings.push_back(rule_R8a(m, n, rec));
    rep.findings.push_back(rule_R8b(m, n, rec));
    rep.findings.push_back(rule_R9(m, n, rec));
    if (rec.j_cube_root_in_F) rep.findings.push_back(rule_I1(m, n, rec));
    return rep;
}

} // namespace

u64 p_adic_valuation(u64 x, u64 p) {
    u64 v = 0;
    while (x > 0 && x % p == 0) {
        x /= p;
        ++v;
    }
    return v;
}

std::string to_string(Verdict v) {
    switch (v) {
    case Verdict::Obstructed: return "Obstructed";
    case Verdict::ConstraintSatisfied: return "ConstraintSatisfied";
    default: return "NotApplicable";
    }
}

bool ObstructionReport::obstructed() const {
    for (const Finding& f : findings)
        if (f.verdict == Verdict::Obstructed) return true;
    return false;
}

RamBound ramification_bound(const ReductionType& rt, u64 p) {
    switch (rt.kind) {
    case ReductionKind::Good:
        return RamBound::Unramified;
    case ReductionKind::MultSplit:
        return RamBound::TameAtP;
    case ReductionKind::MultNonSplit:
        return p == 2 ? RamBound::VpAtMost1 : RamBound::TameAtP;
    case ReductionKind::Additive:
        if (p > 3) return RamBound::TameAtP;
        if (p == 3)
            return rt.potentially_good == true ? RamBound::VpAtMost1 : RamBound::TameAtP;
        return RamBound::VpAtMost3;
    }
    throw InternalInconsistency("unreachable reduction kind");
}

bool cyclotomic_requirement_met(RamBound b, u64 p, u64 k, u64 e) {
    auto vp_ge = [&](u64 bound) { return p_adic_valuation(e, p) >= bound; };
    switch (b) {
    case RamBound::Unramified: {
        u64 phi = p - 1;
        for (u64 i = 1; i < k; ++i) phi *= p;
        return e % phi == 0;
    }
    case RamBound::TameAtP:
        return k <= 1 || vp_ge(k - 1);
    case RamBound::VpAtMost1:
        return k <= 2 || vp_ge(k - 2);
    case RamBound::VpAtMost3:
        return k <= 4 || vp_ge(k - 4);
    }
    throw InternalInconsistency("unreachable bound class");
}

void validate_record(const CurveRecord& rec) {
    auto check_primes = [](const std::vector<u64>& v, const char* field) {
        for (u64 p : v)
            if (!is_prime(p))
                throw MalformedRecord(std::string(field) + ": " + std::to_string(p) +
                                      " is not prime");
    };
    check_primes(rec.field_disc_primes, "field_disc_primes");
    check_primes(rec.conductor_norm_primes, "conductor_norm_primes");
    if (rec.entanglement_set) check_primes(*rec.entanglement_set, "entanglement_set");
    for (const LocalData& ld : rec.local) {
        if (!is_prime(ld.residue_characteristic))
            throw MalformedRecord("local: residue characteristic " +
                                  std::to_string(ld.residue_characteristic) + " is not prime");
        if (ld.ideals.empty())
            throw MalformedRecord("local: empty ideal list at p = " +
                                  std::to_string(ld.residue_characteristic));
        for (const IdealData& id : ld.ideals) {
            if (id.e < 1) throw MalformedRecord("local: ramification index must be >= 1");
            if (id.reduction.supersingular && id.reduction.kind != ReductionKind::Good)
                throw MalformedRecord("local: supersingular flag on non-good reduction");
            if (id.reduction.potentially_good && id.reduction.kind != ReductionKind::Additive)
                throw MalformedRecord("local: potentially_good flag on non-additive reduction");
        }
    }
    for (const CyclotomicEntry& c : rec.cyclotomic_trivial) {
        if (!is_prime(c.p)) throw MalformedRecord("cyclotomic_trivial: p is not prime");
        bool tk = c.k && c.trivial;
        bool rr = c.r.has_value();
        if (tk == rr)
            throw MalformedRecord("cyclotomic_trivial: entry needs (k, trivial) or r");
    }
    for (const auto& [level, g] : rec.images)
        if (g.modulus() != level)
            throw MalformedRecord("images: group modulus " + std::to_string(g.modulus()) +
                                  " does not match level " + std::to_string(level));
}

ObstructionReport audit(u64 m, u64 n, const CurveRecord& rec, const CurveRecord* rec2) {
    if (m < 1 || n < 1) throw MalformedRecord("audit: m and n must be >= 1");
    validate_record(rec);
    if (rec2) validate_record(*rec2);
    return audit_impl(m, n, rec, rec2, true);
}

LargeImageAnalysis large_image_analysis(const MatGroup& g) {
    const u64 m = g.modulus();
    if (m % 2 == 0 || m < 3) throw BadModulus("large_image_analysis requires odd m >= 3");
    if (!is_subgroup(full_sl2(m), g))
        throw NotLarge("image does not contain SL2(" + std::to_string(m) + ")");
    MatGroup d = derived_subgroup(g);
    LargeImageAnalysis a;
    a.contains_sl2 = true;
    a.derived_is_sl2 = d.order() == sl2_order(m);
    a.abelian_part = a.derived_is_sl2 ? AbelianPart::FullCyclotomic : AbelianPart::CyclotomicPlusZ3;
    if (!a.derived_is_sl2 && m % 3 != 0)
        throw InternalInconsistency("derived subgroup below SL2 with 3 not dividing m");
    return a;
}

} // namespace coinc
