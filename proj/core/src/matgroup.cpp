#include "coinc/matgroup.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <set>
#include <unordered_set>

namespace coinc {

namespace {

struct EntryHash {
    std::size_t operator()(const std::array<u64, 4>& e) const {
        u64 h = 1469598103934665603ull;
        for (u64 v : e) {
            h ^= v;
            h *= 1099511628211ull;
        }
        return static_cast<std::size_t>(h);
    }
};

using EntrySet = std::unordered_set<std::array<u64, 4>, EntryHash>;

std::vector<Mat2> sorted_from_set(u64 n, const EntrySet& seen) {
    std::vector<Mat2> out;
    out.reserve(seen.size());
    for (const auto& e : seen) out.push_back(Mat2{n, e});
    std::sort(out.begin(), out.end());
    return out;
}

// Greedy small generating set for a set known to be closed; throws if the
// closure of the chosen generators does not reproduce the set.
std::vector<Mat2> greedy_generators(u64 n, const std::vector<Mat2>& elems, u64 cap) {
    std::vector<Mat2> gens;
    std::vector<Mat2> span{identity(n)};
    for (const Mat2& x : elems) {
        if (std::binary_search(span.begin(), span.end(), x)) continue;
        gens.push_back(x);
        MatGroup h = MatGroup::closure(n, gens, cap);
        span = h.elements();
        if (span.size() == elems.size()) break;
    }
    if (span.size() != elems.size())
        throw InternalInconsistency("from_elements: set is not multiplicatively closed");
    if (gens.empty()) gens.push_back(identity(n));
    return gens;
}

} // namespace

MatGroup::MatGroup(u64 modulus, std::vector<Mat2> gens, std::vector<Mat2> elems)
    : modulus_(modulus), gens_(std::move(gens)), elems_(std::move(elems)) {}

MatGroup MatGroup::closure(u64 modulus, std::vector<Mat2> gens, u64 cap) {
    check_modulus(modulus);
    if (gens.empty()) gens.push_back(identity(modulus));
    for (const Mat2& g : gens) {
        if (g.n != modulus) throw BadModulus("generator modulus mismatch");
        if (!is_invertible(g))
            throw NotInvertible("closure: generator not invertible: " + to_string(g));
    }
    // Ties in generator ordering broken lexicographically on canonical entries.
    std::sort(gens.begin(), gens.end());
    gens.erase(std::unique(gens.begin(), gens.end()), gens.end());

    EntrySet seen;
    std::deque<Mat2> frontier;
    Mat2 id = identity(modulus);
    seen.insert(id.e);
    frontier.push_back(id);
    while (!frontier.empty()) {
        Mat2 x = frontier.front();
        frontier.pop_front();
        for (const Mat2& g : gens) {
            Mat2 y = mul(x, g);
            if (seen.insert(y.e).second) {
                if (seen.size() > cap)
                    throw GroupTooLarge("closure exceeded cap of " + std::to_string(cap) +
                                        " elements");
                frontier.push_back(y);
            }
        }
    }
    return MatGroup(modulus, std::move(gens), sorted_from_set(modulus, seen));
}

MatGroup MatGroup::from_elements(u64 modulus, std::vector<Mat2> elems,
                                 std::vector<Mat2> gens_hint) {
    check_modulus(modulus);
    if (elems.empty()) throw InternalInconsistency("from_elements: empty set");
    std::sort(elems.begin(), elems.end());
    elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
    Mat2 id = identity(modulus);
    if (!std::binary_search(elems.begin(), elems.end(), id))
        throw InternalInconsistency("from_elements: identity missing");
    for (const Mat2& x : elems) {
        if (x.n != modulus) throw BadModulus("from_elements: modulus mismatch");
        auto inv = invert(x);
        if (!inv || !std::binary_search(elems.begin(), elems.end(), *inv))
            throw InternalInconsistency("from_elements: not closed under inversion");
    }
    std::vector<Mat2> gens;
    if (!gens_hint.empty()) {
        MatGroup h = closure(modulus, gens_hint, elems.size());
        if (h.elements() != elems)
            throw InternalInconsistency("from_elements: hint does not generate the set");
        gens = h.generators();
    } else {
        gens = greedy_generators(modulus, elems, elems.size());
    }
    return MatGroup(modulus, std::move(gens), std::move(elems));
}

bool MatGroup::contains(const Mat2& m) const {
    if (m.n != modulus_) return false;
    return std::binary_search(elems_.begin(), elems_.end(), m);
}

std::vector<u64> unit_group_generators(u64 n) {
    check_modulus(n);
    std::vector<u64> gens;
    std::set<u64> span{1};
    for (u64 u = 2; u < n; ++u) {
        if (gcd_u64(u, n) != 1 || span.count(u)) continue;
        gens.push_back(u);
        // Re-close the span with the new generator.
        std::deque<u64> frontier(span.begin(), span.end());
        while (!frontier.empty()) {
            u64 x = frontier.front();
            frontier.pop_front();
            for (u64 g : gens) {
                u64 y = (x * g) % n;
                if (span.insert(y).second) frontier.push_back(y);
            }
        }
        if (span.size() == euler_phi(n)) break;
    }
    if (gens.empty()) gens.push_back(1);
    return gens;
}

MatGroup full_sl2(u64 n, u64 cap) { return MatGroup::closure(n, {gen_S(n), gen_T(n)}, cap); }

MatGroup full_gl2(u64 n, u64 cap) {
    std::vector<Mat2> gens{gen_S(n), gen_T(n)};
    for (u64 u : unit_group_generators(n)) gens.push_back(mat2(n, 1, 0, 0, static_cast<i64>(u)));
    return MatGroup::closure(n, gens, cap);
}

namespace {

Mat2 commutator(const Mat2& a, const Mat2& b) {
    return mul(mul(a, b), mul(*invert(a), *invert(b)));
}

} // namespace

MatGroup derived_subgroup(const MatGroup& g) {
    const u64 n = g.modulus();
    std::vector<Mat2> xs;
    std::set<Mat2> seen;
    for (const Mat2& a : g.generators())
        for (const Mat2& b : g.generators()) {
            Mat2 c = commutator(a, b);
            if (seen.insert(c).second) xs.push_back(c);
        }
    // Normal closure in G of the generator commutators.
    for (;;) {
        MatGroup k = MatGroup::closure(n, xs);
        std::vector<Mat2> pending;
        for (const Mat2& h : g.generators()) {
            Mat2 hi = *invert(h);
            for (const Mat2& x : xs) {
                Mat2 y = mul(mul(h, x), hi);
                if (!k.contains(y) && seen.insert(y).second) pending.push_back(y);
            }
        }
        if (pending.empty()) return k;
        xs.insert(xs.end(), pending.begin(), pending.end());
    }
}

bool is_subgroup(const MatGroup& h, const MatGroup& g) {
    if (h.modulus() != g.modulus()) return false;
    return std::all_of(h.elements().begin(), h.elements().end(),
                       [&](const Mat2& x) { return g.contains(x); });
}

bool is_normal_in(const MatGroup& n, const MatGroup& g) {
    if (!is_subgroup(n, g)) return false;
    for (const Mat2& h : g.generators()) {
        Mat2 hi = *invert(h);
        for (const Mat2& x : n.generators())
            if (!n.contains(mul(mul(h, x), hi))) return false;
    }
    return true;
}

namespace {

// Coset decomposition of G by a normal subgroup N: per-element coset ids,
// one representative per coset (the first element of G in each coset).
struct Cosets {
    std::vector<u64> coset_of;  // indexed like g.elements()
    std::vector<u64> rep_index; // coset id -> element index
};

u64 index_of(const MatGroup& g, const Mat2& x) {
    auto it = std::lower_bound(g.elements().begin(), g.elements().end(), x);
    if (it == g.elements().end() || !(*it == x))
        throw InternalInconsistency("element not in group");
    return static_cast<u64>(it - g.elements().begin());
}

Cosets coset_decomposition(const MatGroup& g, const MatGroup& n) {
    const auto& elems = g.elements();
    Cosets c;
    c.coset_of.assign(elems.size(), u64(-1));
    for (u64 i = 0; i < elems.size(); ++i) {
        if (c.coset_of[i] != u64(-1)) continue;
        u64 cid = c.rep_index.size();
        c.rep_index.push_back(i);
        for (const Mat2& x : n.elements()) c.coset_of[index_of(g, mul(x, elems[i]))] = cid;
    }
    return c;
}

// Invariant factors of an abelian group given by its multiplication table,
// extracting a maximal-order element at each step.
std::vector<u64> abelian_decompose(const std::vector<std::vector<u64>>& t, u64 id) {
    const u64 q = t.size();
    if (q == 1) return {};
    std::vector<u64> ord(q, 0);
    u64 best = id, best_ord = 1;
    for (u64 i = 0; i < q; ++i) {
        u64 x = i, o = 1;
        while (x != id) {
            x = t[x][i];
            ++o;
        }
        ord[i] = o;
        if (o > best_ord) {
            best_ord = o;
            best = i;
        }
    }
    // Cyclic subgroup generated by the chosen element.
    std::vector<u64> cyc;
    for (u64 x = id;;) {
        cyc.push_back(x);
        x = t[x][best];
        if (x == id) break;
    }
    std::sort(cyc.begin(), cyc.end());
    // Quotient by the cyclic factor.
    std::vector<u64> qcoset(q, u64(-1));
    std::vector<u64> qreps;
    for (u64 i = 0; i < q; ++i) {
        if (qcoset[i] != u64(-1)) continue;
        u64 cid = qreps.size();
        qreps.push_back(i);
        for (u64 c : cyc) qcoset[t[c][i]] = cid;
    }
    std::vector<std::vector<u64>> qt(qreps.size(), std::vector<u64>(qreps.size()));
    for (u64 a = 0; a < qreps.size(); ++a)
        for (u64 b = 0; b < qreps.size(); ++b) qt[a][b] = qcoset[t[qreps[a]][qreps[b]]];
    std::vector<u64> out = abelian_decompose(qt, qcoset[id]);
    out.push_back(best_ord);
    return out;
}

std::vector<std::vector<u64>> quotient_table(const MatGroup& g, const MatGroup& n,
                                             const Cosets& c) {
    const u64 q = c.rep_index.size();
    std::vector<std::vector<u64>> t(q, std::vector<u64>(q));
    for (u64 a = 0; a < q; ++a)
        for (u64 b = 0; b < q; ++b)
            t[a][b] =
                c.coset_of[index_of(g, mul(g.elements()[c.rep_index[a]], g.elements()[c.rep_index[b]]))];
    return t;
}

} // namespace

AbelianInvariants abelian_invariants(const MatGroup& g, const MatGroup& n) {
    if (!is_normal_in(n, g)) throw NotNormal("abelian_invariants: N is not normal in G");
    Cosets c = coset_decomposition(g, n);
    auto t = quotient_table(g, n, c);
    const u64 q = t.size();
    for (u64 a = 0; a < q; ++a)
        for (u64 b = a + 1; b < q; ++b)
            if (t[a][b] != t[b][a])
                throw NotAbelianQuotient("abelian_invariants: G/N is not abelian");
    u64 id_coset = c.coset_of[index_of(g, identity(g.modulus()))];
    std::vector<u64> factors = abelian_decompose(t, id_coset);
    u64 prod = 1;
    for (u64 i = 0; i < factors.size(); ++i) {
        prod *= factors[i];
        if (factors[i] < 2 || (i + 1 < factors.size() && factors[i + 1] % factors[i] != 0))
            throw InternalInconsistency("abelian_invariants: divisibility chain violated");
    }
    if (prod != q) throw InternalInconsistency("abelian_invariants: order mismatch");
    return AbelianInvariants{std::move(factors)};
}

bool class_generates_quotient(const MatGroup& g, const MatGroup& n, const Mat2& x) {
    if (!g.contains(x)) return false;
    Cosets c = coset_decomposition(g, n);
    const u64 q = c.rep_index.size();
    u64 idc = c.coset_of[index_of(g, identity(g.modulus()))];
    u64 xc = c.coset_of[index_of(g, x)];
    // Order of the class of x in G/N.
    Mat2 acc = x;
    u64 o = 1;
    while (c.coset_of[index_of(g, acc)] != idc) {
        acc = mul(acc, x);
        ++o;
    }
    (void)xc;
    return o == q;
}

std::vector<u64> det_image(const MatGroup& g) {
    std::set<u64> vals;
    for (const Mat2& x : g.elements()) vals.insert(det(x).value);
    return {vals.begin(), vals.end()};
}

MatGroup sl_intersection(const MatGroup& g) {
    std::vector<Mat2> elems;
    for (const Mat2& x : g.elements())
        if (det(x).value == 1) elems.push_back(x);
    return MatGroup::from_elements(g.modulus(), std::move(elems));
}

std::optional<Mat2> contains_conjugate_of(const MatGroup& g, const Mat2& x) {
    const u64 n = g.modulus();
    if (x.n != n) throw BadModulus("contains_conjugate_of: modulus mismatch");
    if (!is_invertible(x)) throw NotInvertible("contains_conjugate_of: singular element");
    for (u64 a = 0; a < n; ++a)
        for (u64 b = 0; b < n; ++b)
            for (u64 c = 0; c < n; ++c)
                for (u64 d = 0; d < n; ++d) {
                    Mat2 m{n, {a, b, c, d}};
                    auto inv = invert(m);
                    if (!inv) continue;
                    if (g.contains(mul(mul(m, x), *inv))) return m;
                }
    return std::nullopt;
}

bool is_fiber_product_trivial(const MatGroup& g, u64 m, u64 n) {
    if (m < 2 || n < 2 || gcd_u64(m, n) != 1 || m * n != g.modulus())
        throw BadModulus("is_fiber_product_trivial: need coprime m*n = modulus");
    std::set<std::array<u64, 4>> pm, pn;
    for (const Mat2& x : g.elements()) {
        pm.insert(reduce_mat(x, m).e);
        pn.insert(reduce_mat(x, n).e);
    }
    return g.order() == pm.size() * pn.size();
}

MatGroup reduce_group(const MatGroup& g, u64 m) {
    std::vector<Mat2> gens;
    gens.reserve(g.generators().size());
    for (const Mat2& x : g.generators()) gens.push_back(reduce_mat(x, m));
    return MatGroup::closure(m, std::move(gens));
}

} // namespace coinc
