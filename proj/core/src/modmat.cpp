#include "coinc/modmat.hpp"

#include <sstream>

namespace coinc {

void check_modulus(u64 n) {
    if (n < 2 || n > kMaxModulus)
        throw BadModulus("modulus must be in [2, 2^20], got " + std::to_string(n));
}

u64 canonical_mod(i64 x, u64 n) {
    i64 m = static_cast<i64>(n);
    i64 r = x % m;
    if (r < 0) r += m;
    return static_cast<u64>(r);
}

u64 gcd_u64(u64 a, u64 b) {
    while (b != 0) {
        u64 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

Residue residue(i64 value, u64 modulus) {
    check_modulus(modulus);
    return Residue{modulus, canonical_mod(value, modulus)};
}

bool is_unit(const Residue& r) { return gcd_u64(r.value, r.modulus) == 1; }

Residue residue_inverse(const Residue& r) {
    if (!is_unit(r))
        throw NotInvertible("residue " + std::to_string(r.value) + " is not a unit mod " +
                            std::to_string(r.modulus));
    // Extended Euclid.
    i64 n = static_cast<i64>(r.modulus);
    i64 a = static_cast<i64>(r.value);
    i64 t0 = 0, t1 = 1, r0 = n, r1 = a;
    while (r1 != 0) {
        i64 q = r0 / r1;
        i64 tmp = t0 - q * t1;
        t0 = t1;
        t1 = tmp;
        tmp = r0 - q * r1;
        r0 = r1;
        r1 = tmp;
    }
    return Residue{r.modulus, canonical_mod(t0, r.modulus)};
}

Mat2 mat2(u64 n, i64 a, i64 b, i64 c, i64 d) {
    check_modulus(n);
    return Mat2{n, {canonical_mod(a, n), canonical_mod(b, n), canonical_mod(c, n),
                    canonical_mod(d, n)}};
}

Mat2 identity(u64 n) { return mat2(n, 1, 0, 0, 1); }

Mat2 mul(const Mat2& x, const Mat2& y) {
    if (x.n != y.n) throw BadModulus("matrix moduli differ");
    u64 n = x.n;
    return Mat2{n,
                {(x.e[0] * y.e[0] + x.e[1] * y.e[2]) % n,
                 (x.e[0] * y.e[1] + x.e[1] * y.e[3]) % n,
                 (x.e[2] * y.e[0] + x.e[3] * y.e[2]) % n,
                 (x.e[2] * y.e[1] + x.e[3] * y.e[3]) % n}};
}

Mat2 mat_pow(Mat2 x, u64 k) {
    Mat2 acc = identity(x.n);
    while (k > 0) {
        if (k & 1) acc = mul(acc, x);
        x = mul(x, x);
        k >>= 1;
    }
    return acc;
}

Residue det(const Mat2& m) {
    u64 ad = (m.e[0] * m.e[3]) % m.n;
    u64 bc = (m.e[1] * m.e[2]) % m.n;
    return Residue{m.n, (ad + m.n - bc) % m.n};
}

bool is_invertible(const Mat2& m) { return is_unit(det(m)); }

std::optional<Mat2> invert(const Mat2& m) {
    Residue d = det(m);
    if (!is_unit(d)) return std::nullopt;
    u64 di = residue_inverse(d).value;
    u64 n = m.n;
    // adj(m) = (d, -b; -c, a)
    return Mat2{n,
                {(m.e[3] * di) % n, ((n - m.e[1]) % n * di) % n, ((n - m.e[2]) % n * di) % n,
                 (m.e[0] * di) % n}};
}

u64 element_order(const Mat2& m) {
    if (!is_invertible(m))
        throw NotInvertible("element_order: matrix not invertible: " + to_string(m));
    const Mat2 id = identity(m.n);
    const u64 cap = gl2_order(m.n);
    Mat2 acc = m;
    for (u64 d = 1; d <= cap; ++d) {
        if (acc == id) return d;
        acc = mul(acc, m);
    }
    throw InternalInconsistency("element_order exceeded |GL2(n)| iterations");
}

Mat2 reduce_mat(const Mat2& m, u64 to) {
    check_modulus(to);
    if (m.n % to != 0)
        throw BadModulus("reduce_mat: " + std::to_string(to) + " does not divide " +
                         std::to_string(m.n));
    return Mat2{to, {m.e[0] % to, m.e[1] % to, m.e[2] % to, m.e[3] % to}};
}

Residue reduce_residue(const Residue& r, u64 to) {
    check_modulus(to);
    if (r.modulus % to != 0) throw BadModulus("reduce_residue: bad divisor");
    return Residue{to, r.value % to};
}

std::string to_string(const Mat2& m) {
    std::ostringstream os;
    os << "[" << m.e[0] << "," << m.e[1] << "," << m.e[2] << "," << m.e[3] << "] mod " << m.n;
    return os.str();
}

std::vector<std::pair<u64, u64>> factorize(u64 n) {
    std::vector<std::pair<u64, u64>> out;
    for (u64 p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            u64 k = 0;
            while (n % p == 0) {
                n /= p;
                ++k;
            }
            out.emplace_back(p, k);
        }
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

namespace {

u64 pow_u64(u64 b, u64 e) {
    u64 r = 1;
    while (e--) r *= b;
    return r;
}

} // namespace

u64 gl2_order(u64 n) {
    check_modulus(n);
    unsigned __int128 out = 1;
    for (auto [q, j] : factorize(n)) {
        // q^{4(j-1)+1} (q-1)^2 (q+1)
        unsigned __int128 f = 1;
        for (u64 i = 0; i < 4 * (j - 1) + 1; ++i) f *= q;
        out *= f * (q - 1) * (q - 1) * (q + 1);
        if (out > ~u64{0}) throw BadModulus("gl2_order overflows 64 bits for n = " + std::to_string(n));
    }
    return static_cast<u64>(out);
}

u64 euler_phi(u64 n) {
    if (n == 1) return 1;
    u64 out = 1;
    for (auto [q, j] : factorize(n)) out *= pow_u64(q, j - 1) * (q - 1);
    return out;
}

u64 sl2_order(u64 n) { return gl2_order(n) / euler_phi(n); }

Mat2 gen_S(u64 n) { return mat2(n, 0, -1, 1, 0); }
Mat2 gen_T(u64 n) { return mat2(n, 1, 1, 0, 1); }

} // namespace coinc
