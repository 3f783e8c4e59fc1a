#include "coinc/lifting.hpp"

#include <algorithm>
#include <random>

namespace coinc {

namespace {

void check_lift_moduli(u64 mn, u64 m) {
    check_modulus(mn);
    check_modulus(m);
    if (mn % m != 0 || mn == m)
        throw BadModulus("base modulus " + std::to_string(m) + " must properly divide target " +
                         std::to_string(mn));
}

} // namespace

MatGroup reduction_kernel(u64 mn, u64 m) {
    check_lift_moduli(mn, m);
    const u64 q = mn / m;
    if (q * q * q * q > MatGroup::kDefaultCap)
        throw GroupTooLarge("reduction kernel fiber exceeds cap");
    std::vector<Mat2> elems;
    std::array<u64, 4> t{};
    Mat2 id = identity(m);
    for (t[0] = 0; t[0] < q; ++t[0])
        for (t[1] = 0; t[1] < q; ++t[1])
            for (t[2] = 0; t[2] < q; ++t[2])
                for (t[3] = 0; t[3] < q; ++t[3]) {
                    Mat2 x{mn,
                           {id.e[0] + m * t[0], id.e[1] + m * t[1], id.e[2] + m * t[2],
                            id.e[3] + m * t[3]}};
                    if (is_invertible(x)) elems.push_back(x);
                }
    return MatGroup::from_elements(mn, std::move(elems));
}

std::vector<Mat2> lift_fibers(const Mat2& g, u64 mn) {
    check_lift_moduli(mn, g.n);
    if (!is_invertible(g)) throw NotInvertible("lift_fibers: singular base element");
    const u64 m = g.n;
    const u64 q = mn / m;
    std::vector<Mat2> out;
    std::array<u64, 4> t{};
    for (t[0] = 0; t[0] < q; ++t[0])
        for (t[1] = 0; t[1] < q; ++t[1])
            for (t[2] = 0; t[2] < q; ++t[2])
                for (t[3] = 0; t[3] < q; ++t[3]) {
                    Mat2 x{mn,
                           {g.e[0] + m * t[0], g.e[1] + m * t[1], g.e[2] + m * t[2],
                            g.e[3] + m * t[3]}};
                    if (is_invertible(x)) out.push_back(x);
                }
    return out;
}

ElementLiftResult element_split_liftable(const Mat2& g, u64 mn) {
    const u64 target = element_order(g);
    ElementLiftResult r{LiftStatus::NotLiftable, std::nullopt, 0};
    for (const Mat2& x : lift_fibers(g, mn)) {
        ++r.search_count;
        if (element_order(x) == target) {
            r.status = LiftStatus::Liftable;
            r.witness = x;
            return r;
        }
    }
    return r;
}

namespace {

// Depth-first assignment of one candidate lift per generator. A prefix is
// viable only when its closure has exactly the order of the corresponding
// base prefix subgroup; anything larger cannot sit inside a split lift.
struct AssignmentSearch {
    u64 modulus;
    const std::vector<std::vector<Mat2>>& cands;
    const std::vector<u64>& prefix_orders;
    u64 budget;
    u64 ops = 0;
    u64 count = 0;
    bool exhausted = false;
    std::vector<Mat2> chosen;
    std::optional<MatGroup> found;

    void run(std::size_t j) {
        if (found || exhausted) return;
        for (const Mat2& c : cands[j]) {
            if (found || exhausted) return;
            ++count;
            chosen.push_back(c);
            const u64 allowed = prefix_orders[j];
            bool viable = false;
            std::optional<MatGroup> cl;
            try {
                cl = MatGroup::closure(modulus, chosen, allowed);
                ops += cl->order();
                viable = cl->order() == allowed;
            } catch (const GroupTooLarge&) {
                ops += allowed + 1;
            }
            if (ops > budget) {
                exhausted = true;
            } else if (viable) {
                if (j + 1 == cands.size())
                    found = std::move(cl);
                else
                    run(j + 1);
            }
            chosen.pop_back();
        }
    }
};

GroupLiftResult run_assignment_search(u64 modulus, const std::vector<std::vector<Mat2>>& cands,
                                      const std::vector<u64>& prefix_orders, u64 budget,
                                      u64 base_count) {
    for (const auto& list : cands)
        if (list.empty()) return {LiftStatus::NotLiftable, std::nullopt, base_count};
    AssignmentSearch s{modulus, cands, prefix_orders, budget};
    s.run(0);
    GroupLiftResult r;
    r.search_count = base_count + s.count;
    if (s.found) {
        r.status = LiftStatus::Liftable;
        r.witness = std::move(s.found);
    } else {
        r.status = s.exhausted ? LiftStatus::Exhausted : LiftStatus::NotLiftable;
    }
    return r;
}

std::vector<u64> base_prefix_orders(u64 m, const std::vector<Mat2>& gens) {
    std::vector<u64> out;
    std::vector<Mat2> prefix;
    for (const Mat2& g : gens) {
        prefix.push_back(g);
        out.push_back(MatGroup::closure(m, prefix).order());
    }
    return out;
}

} // namespace

GroupLiftResult group_split_liftable(const MatGroup& g, u64 mn, u64 budget) {
    const u64 m = g.modulus();
    check_lift_moduli(mn, m);

    // Element-level necessary condition, checked exhaustively per element:
    // a split lift maps each element to one of equal order, so a single
    // non-liftable element sinks the whole group.
    std::vector<Mat2> probes = g.generators();
    if (g.order() <= 256) {
        probes = g.elements();
    } else {
        std::mt19937 rng(12345);
        for (int i = 0; i < 32; ++i)
            probes.push_back(g.elements()[rng() % g.order()]);
    }
    u64 count = 0;
    for (const Mat2& x : probes) {
        ElementLiftResult er = element_split_liftable(x, mn);
        count += er.search_count;
        if (er.status == LiftStatus::NotLiftable)
            return {LiftStatus::NotLiftable, std::nullopt, count};
    }

    std::vector<std::vector<Mat2>> cands;
    for (const Mat2& gen : g.generators()) {
        std::vector<Mat2> list;
        const u64 target = element_order(gen);
        for (const Mat2& x : lift_fibers(gen, mn))
            if (element_order(x) == target) list.push_back(x);
        cands.push_back(std::move(list));
    }
    return run_assignment_search(mn, cands, base_prefix_orders(m, g.generators()), budget, count);
}

GroupLiftResult sequence_splits(const MatGroup& h, u64 m, u64 budget) {
    const u64 mn = h.modulus();
    check_lift_moduli(mn, m);
    MatGroup q = reduce_group(h, m);

    // Candidates are restricted to H itself: a complement is a subgroup of
    // H mapping bijectively onto the mod-m image, so every member lies over
    // a base element with equal order.
    std::vector<std::vector<Mat2>> cands;
    for (const Mat2& gen : q.generators()) {
        std::vector<Mat2> list;
        const u64 target = element_order(gen);
        for (const Mat2& x : h.elements())
            if (reduce_mat(x, m) == gen && element_order(x) == target) list.push_back(x);
        cands.push_back(std::move(list));
    }
    return run_assignment_search(mn, cands, base_prefix_orders(m, q.generators()), budget, 0);
}

} // namespace coinc
