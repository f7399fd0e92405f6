#pragma once

// Point enumeration and group structure of the conic over finite rings,
// plus local zeta functions. Serves as the formula-versus-enumeration
// oracle layer for the structure theory.

#include "pell/conic.hpp"

#include <map>
#include <unordered_map>

namespace pell {

// exhaustive, duplicate-free list of affine solutions of x^2 - D*y^2 = 4
// over a finite coefficient ring (ModRing with odd modulus, or ExtField)
template <class R>
std::vector<Point<typename R::Elem>> enumerate_points(const R& ring, const Int& disc) {
    const uint64_t q = ring.size_u64();
    std::vector<std::vector<uint32_t>> roots(q);
    for (uint64_t i = 0; i < q; ++i) {
        auto e = ring.element_at(i);
        roots[ring.index_of(ring.mul(e, e))].push_back(static_cast<uint32_t>(i));
    }
    auto D = ring.from_int(disc);
    auto four = ring.from_int(4);
    std::vector<Point<typename R::Elem>> pts;
    for (uint64_t iy = 0; iy < q; ++iy) {
        auto y = ring.element_at(iy);
        auto rhs = ring.add(four, ring.mul(D, ring.mul(y, y)));
        for (uint32_t ix : roots[ring.index_of(rhs)])
            pts.push_back({ring.element_at(ix), y});
    }
    return pts;
}

// #C(F_{p^f}) = p^f - (D/p)^f for odd p not dividing D
inline Int count_points(const Int& disc, const Int& p, int f) {
    detail::require(p >= 3 && p % 2 == 1 && is_probable_prime(p), "count_points: p must be an odd prime");
    detail::require(f >= 1, "count_points: degree must be >= 1");
    detail::require(disc % p != 0, "count_points: bad reduction, enumerate instead");
    int chi = kronecker(disc, p);
    Int chif = (chi == -1 && f % 2 == 1) ? Int(-1) : Int(1);
    return pow(p, unsigned(f)) - chif;
}

// invariant factors (largest-first divisibility chain) of a finite abelian
// group given the multiset of its element orders
inline std::vector<Int> invariants_from_orders(const std::vector<Int>& orders) {
    Int n = Int(orders.size());
    detail::require(n >= 1, "invariants_from_orders: empty group");
    if (n == 1) return {};
    // per prime: c_j = #{g : ord(g) | p^j}; the number of cyclic p-factors
    // with exponent >= j is log_p(c_j / c_{j-1})
    std::map<Int, std::vector<int>> exponents;  // prime -> exponent of each cyclic factor, descending
    for (const auto& [p, e] : factorize(n)) {
        std::vector<Int> counts{1};  // c_0 = 1
        Int pj = 1;
        while (true) {
            pj *= p;
            Int c = 0;
            for (const Int& o : orders) {
                // ord | p^j iff ord is a power of p dividing p^j
                if (pj % o == 0) ++c;
            }
            counts.push_back(c);
            if (c == counts[counts.size() - 2]) break;  // p-part exhausted
        }
        std::vector<int> r;  // r[j] = #factors with exponent >= j+1
        for (size_t j = 1; j + 1 < counts.size(); ++j) {
            Int ratio = counts[j] / counts[j - 1];
            detail::check(counts[j] % counts[j - 1] == 0, "invariants_from_orders: count ratio not integral");
            int lg = 0;
            while (ratio > 1) {
                detail::check(ratio % p == 0, "invariants_from_orders: count ratio not a prime power");
                ratio /= p;
                ++lg;
            }
            r.push_back(lg);
        }
        std::vector<int> exps;  // exponent of factor i (descending since r is non-increasing)
        int nf = r.empty() ? 0 : r[0];
        for (int i = 0; i < nf; ++i) {
            int e2 = 0;
            for (int lg : r)
                if (lg > i) ++e2;
            exps.push_back(e2);
        }
        exponents[p] = exps;
    }
    size_t width = 0;
    for (auto& [p, exps] : exponents) width = std::max(width, exps.size());
    std::vector<Int> inv(width, 1);
    for (auto& [p, exps] : exponents)
        for (size_t i = 0; i < exps.size(); ++i) inv[i] *= pow(p, unsigned(exps[i]));
    return inv;
}

// normalize a direct sum of cyclic groups into invariant-factor form
inline std::vector<Int> normalize_invariants(const std::vector<Int>& cyclic_orders) {
    std::map<Int, std::vector<int>> per_prime;
    for (const Int& m : cyclic_orders) {
        if (m <= 1) continue;
        for (const auto& [p, e] : factorize(m)) per_prime[p].push_back(e);
    }
    size_t width = 0;
    for (auto& [p, es] : per_prime) {
        std::sort(es.begin(), es.end(), std::greater<int>());
        width = std::max(width, es.size());
    }
    std::vector<Int> inv(width, 1);
    for (auto& [p, es] : per_prime)
        for (size_t i = 0; i < es.size(); ++i) inv[i] *= pow(p, unsigned(es[i]));
    return inv;
}

// abelian invariants of a closed point set under the conic addition;
// signals (std::invalid_argument) if the set is not a group
template <class R>
std::vector<Int> abelian_invariants(const R& ring, const Int& disc,
                                    const std::vector<Point<typename R::Elem>>& pts) {
    detail::require(!pts.empty(), "abelian_invariants: empty point set");
    const uint64_t q = ring.size_u64();
    std::unordered_map<uint64_t, uint32_t> index;
    index.reserve(pts.size() * 2);
    for (size_t i = 0; i < pts.size(); ++i)
        index.emplace(ring.index_of(pts[i].x) * q + ring.index_of(pts[i].y), uint32_t(i));
    auto locate = [&](const Point<typename R::Elem>& P) -> uint32_t {
        auto it = index.find(ring.index_of(P.x) * q + ring.index_of(P.y));
        if (it == index.end())
            throw std::invalid_argument("abelian_invariants: point set not closed under addition");
        return it->second;
    };
    auto N = neutral(ring);
    locate(N);
    std::vector<Int> orders;
    orders.reserve(pts.size());
    for (const auto& P : pts) {
        Int ord = 1;
        auto acc = P;
        while (!(acc == N)) {
            acc = add(ring, disc, acc, P);
            locate(acc);
            detail::require(++ord <= Int(pts.size()),
                            "abelian_invariants: element order exceeds set size, not a group");
        }
        orders.push_back(ord);
    }
    return invariants_from_orders(orders);
}

// the reduction-mod-p^k structure table, in invariant-factor form:
//   (D/p) = +1 : Z/(p-1) + Z/p^{k-1}
//   (D/p) = -1 : Z/(p+1) + Z/p^{k-1}
//   p | D, D != -3 : Z/2 + Z/p^k
//   p = 3, D = -3  : Z/6 + Z/3^{k-1}
inline std::vector<Int> structure_mod_pk(const Int& disc, const Int& p, int k) {
    detail::require(p != 2, "structure_mod_pk: p = 2 not supported");
    detail::require(p >= 3 && is_probable_prime(p), "structure_mod_pk: p must be an odd prime");
    detail::require(k >= 1, "structure_mod_pk: k must be >= 1");
    std::vector<Int> cyc;
    if (disc == -3 && p == 3)
        cyc = {6, pow(Int(3), unsigned(k - 1))};
    else if (disc % p == 0)
        cyc = {2, pow(p, unsigned(k))};
    else if (kronecker(disc, p) == 1)
        cyc = {p - 1, pow(p, unsigned(k - 1))};
    else
        cyc = {p + 1, pow(p, unsigned(k - 1))};
    return normalize_invariants(cyc);
}

// local zeta function as a rational function of T, stored by coefficient
// lists with constant term 1
struct LocalZeta {
    std::vector<Int> num, den;

    // N_r from the formal logarithm: for c(T) = prod (1 - g_i T) the power
    // sums s_r = sum g_i^r obey Newton's identity, and N_r = s_r(den) - s_r(num)
    std::vector<Int> point_counts(int rmax) const {
        auto power_sums = [&](const std::vector<Int>& c) {
            std::vector<Int> s(size_t(rmax) + 1, 0);
            for (int r = 1; r <= rmax; ++r) {
                Int acc = size_t(r) < c.size() ? Int(r) * c[size_t(r)] : Int(0);
                for (int i = 1; i < r; ++i)
                    if (size_t(i) < c.size()) acc += c[size_t(i)] * s[size_t(r - i)];
                s[size_t(r)] = -acc;
            }
            return s;
        };
        auto sn = power_sums(num);
        auto sd = power_sums(den);
        std::vector<Int> out;
        for (int r = 1; r <= rmax; ++r) out.push_back(sd[size_t(r)] - sn[size_t(r)]);
        return out;
    }
};

// Z_p(T) = (1 - chi(p) T) / (1 - pT), the enumeration-consistent form with
// N_r = p^r - chi(p)^r
inline LocalZeta local_zeta(const Int& disc, const Int& p) {
    detail::require(p >= 3 && p % 2 == 1 && is_probable_prime(p), "local_zeta: p must be an odd prime");
    detail::require(disc % p != 0, "local_zeta: bad reduction at p");
    int chi = kronecker(disc, p);
    return {{1, Int(-chi)}, {1, -p}};
}

// parabola y = x^2: Z_p(T) = 1/(1 - pT), N_r = p^r
inline LocalZeta local_zeta_parabola(const Int& p) {
    detail::require(is_probable_prime(p), "local_zeta_parabola: p must be prime");
    return {{1}, {1, -p}};
}

}  // namespace pell
