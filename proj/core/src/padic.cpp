#include "coinc/padic.hpp"

namespace coinc {

bool is_prime(u64 p) {
    if (p < 2) return false;
    for (u64 d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

namespace {

u64 pow_checked(u64 b, u64 e) {
    unsigned __int128 r = 1;
    while (e--) {
        r *= b;
        if (r > ~u64{0}) throw BadModulus("power overflows 64 bits");
    }
    return static_cast<u64>(r);
}

} // namespace

PAdicImage make_padic_image(u64 p, u64 depth, MatGroup base_group) {
    if (!is_prime(p)) throw BadModulus("p must be prime, got " + std::to_string(p));
    if (depth < 1) throw BadModulus("depth must be >= 1");
    if (base_group.modulus() != pow_checked(p, depth))
        throw BadModulus("group modulus is not p^depth");
    return PAdicImage{p, depth, std::move(base_group)};
}

MatGroup level_image(const PAdicImage& x, u64 k, u64 cap) {
    if (k < 1) throw BadModulus("level must be >= 1");
    const u64 pk = pow_checked(x.p, k);
    check_modulus(pk);
    if (k == x.depth) return x.base_group;
    if (k < x.depth) return reduce_group(x.base_group, pk);
    // Full preimage: every entrywise lift of a prime-power-invertible
    // matrix stays invertible, so the fiber over each element is full.
    const u64 ps = x.base_group.modulus();
    const u64 q = pk / ps;
    const u64 total = x.base_group.order() * q * q * q * q;
    if (total > cap) throw GroupTooLarge("preimage of order " + std::to_string(total) +
                                         " exceeds cap");
    std::vector<Mat2> elems;
    elems.reserve(total);
    std::array<u64, 4> t{};
    for (const Mat2& g : x.base_group.elements())
        for (t[0] = 0; t[0] < q; ++t[0])
            for (t[1] = 0; t[1] < q; ++t[1])
                for (t[2] = 0; t[2] < q; ++t[2])
                    for (t[3] = 0; t[3] < q; ++t[3])
                        elems.push_back(Mat2{pk,
                                             {g.e[0] + ps * t[0], g.e[1] + ps * t[1],
                                              g.e[2] + ps * t[2], g.e[3] + ps * t[3]}});
    std::vector<Mat2> hint;
    for (const Mat2& g : x.base_group.generators())
        hint.push_back(Mat2{pk, g.e});
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) {
            Mat2 e = identity(pk);
            e.e[2 * r + c] = (e.e[2 * r + c] + ps) % pk;
            hint.push_back(e);
        }
    try {
        return MatGroup::from_elements(pk, elems, hint);
    } catch (const InternalInconsistency&) {
        return MatGroup::from_elements(pk, std::move(elems));
    }
}

namespace {

struct LevelStats {
    u64 order;
    u64 det_count; // |det G_k|
    u64 sl_count;  // |SL2 n G_k|
};

LevelStats stats_at(const PAdicImage& x, u64 k) {
    const u64 s = x.depth;
    if (k <= s) {
        MatGroup g = level_image(x, k);
        LevelStats st{g.order(), 0, 0};
        st.det_count = det_image(g).size();
        for (const Mat2& m : g.elements())
            if (det(m).value == 1) ++st.sl_count;
        return st;
    }
    // Above the depth the indices stabilize, so orders scale with the
    // full-group growth: p^4 per level for the group, p per level for the
    // determinant image.
    LevelStats base = stats_at(x, s);
    u64 scale = pow_checked(x.p, k - s);
    return LevelStats{base.order * scale * scale * scale * scale, base.det_count * scale,
                      base.sl_count * scale * scale * scale};
}

} // namespace

IndexProfile index_profile(const PAdicImage& x, u64 kmax) {
    if (kmax < 2) throw BadModulus("kmax must be >= 2");
    IndexProfile prof;
    prof.p = x.p;
    for (u64 k = 1; k <= kmax; ++k) {
        const u64 pk = pow_checked(x.p, k);
        LevelStats st = stats_at(x, k);
        u64 gl = gl2_order(pk);
        u64 sl = sl2_order(pk);
        u64 phi = euler_phi(pk);
        if (gl % st.order || phi % st.det_count || sl % st.sl_count)
            throw InternalInconsistency("index_profile: non-integral index at level " +
                                        std::to_string(k));
        prof.i.push_back(gl / st.order);
        prof.j.push_back(phi / st.det_count);
        prof.ell.push_back(sl / st.sl_count);
        if (prof.i.back() != prof.j.back() * prof.ell.back())
            throw InternalInconsistency("index_profile: i != j*ell at level " + std::to_string(k));
    }
    const u64 p4 = x.p * x.p * x.p * x.p;
    for (u64 k = 1; k < kmax; ++k) {
        u64 a = prof.i[k - 1], b = prof.i[k];
        if (b % a) throw InternalInconsistency("index_profile: i_k does not divide i_{k+1}");
        u64 u = b / a;
        if (p4 % u) throw InternalInconsistency("index_profile: u_k does not divide p^4");
        prof.u.push_back(u);
    }
    return prof;
}

std::vector<u64> detect_vertical_coincidences(const PAdicImage& x, u64 kmax) {
    if (kmax < 2) throw BadModulus("kmax must be >= 2");
    IndexProfile prof = index_profile(x, kmax);
    const u64 p4 = x.p * x.p * x.p * x.p;
    std::vector<u64> levels;
    for (u64 k = 1; k < kmax; ++k)
        if (prof.u[k - 1] == p4) levels.push_back(k);
    const u64 low = x.p == 2 ? 2 : 1;
    for (u64 k : levels)
        if (k > low) {
            bool prev = false;
            for (u64 l : levels) prev |= (l == k - 1);
            if (!prev)
                throw InternalInconsistency(
                    "coincidence at level " + std::to_string(k) +
                    " without coincidence at level " + std::to_string(k - 1));
        }
    return levels;
}

MonotoneCheck monotone_ratio_check(const PAdicImage& x, u64 kmax) {
    if (kmax < 3) throw BadModulus("kmax must be >= 3");
    IndexProfile prof = index_profile(x, kmax);
    const u64 start = x.p == 2 ? 2 : 1;
    for (u64 k = start; k + 1 <= prof.u.size(); ++k)
        if (prof.u[k - 1] % prof.u[k] != 0) return MonotoneCheck{false, k};
    return MonotoneCheck{true, std::nullopt};
}

u64 adelic_index_lower_bound(u64 p, u64 k) {
    if (!is_prime(p)) throw BadModulus("p must be prime");
    if (k < 1) throw BadModulus("k must be >= 1");
    if (p == 2) return std::max<u64>(16, pow_checked(2, 4 * k - 1));
    return pow_checked(p, 4 * k);
}

} // namespace coinc
