#pragma once

// Stage-1 factoring on conic groups: the p-1 method on the hyperbola
// xy = 1 and the x-only p+-1 method on Pell conics. The seed x0 fixes the
// twist implicitly, so the Lucas chain covers the group order p - (x0^2-4/p).

#include "pell/nt.hpp"

#include <numeric>

namespace pell {

enum class FactorStatus { Found, NoFactor, TrivialGcd };

struct FactorResult {
    FactorStatus status = FactorStatus::NoFactor;
    Int divisor;             // when Found: 1 < divisor < N and divisor | N
    uint64_t iterations = 0; // prime-power blocks processed
    uint64_t bound = 0;      // smoothness bound B
};

namespace detail {

// word-size modular context (moduli below 2^62)
struct Ctx64 {
    uint64_t n;
    using W = uint64_t;
    W from_int(const Int& v) const {
        Int r = v % n;
        if (r < 0) r += n;
        return r.convert_to<uint64_t>();
    }
    W mul(W a, W b) const { return static_cast<W>((unsigned __int128)a * b % n); }
    W sub(W a, W b) const { return a >= b ? a - b : a + n - b; }
    W two() const { return 2 % n; }
    Int gcd_with_n(W a) const { return Int(std::gcd(a, n)); }
};

struct CtxBig {
    Int n;
    using W = Int;
    W from_int(const Int& v) const {
        Int r = v % n;
        if (r < 0) r += n;
        return r;
    }
    W mul(const W& a, const W& b) const { return a * b % n; }
    W sub(const W& a, const W& b) const { return a >= b ? W(a - b) : W(a + n - b); }
    W two() const { return Int(2) % n; }
    Int gcd_with_n(const W& a) const { return gcd(a, n); }
};

template <class Ctx>
FactorResult p1_stage1(const Ctx& ctx, const Int& N, typename Ctx::W a, uint64_t B) {
    FactorResult res;
    res.bound = B;
    const typename Ctx::W one = ctx.from_int(1);
    for (auto [q, pe] : stage1_prime_powers(B)) {
        // a <- a^{q^e} by square-and-multiply on the word exponent
        typename Ctx::W r = one, base = a;
        uint64_t e = pe;
        while (e) {
            if (e & 1) r = ctx.mul(r, base);
            base = ctx.mul(base, base);
            e >>= 1;
        }
        a = r;
        ++res.iterations;
        Int g = ctx.gcd_with_n(ctx.sub(a, one));
        if (g == N) {
            res.status = FactorStatus::TrivialGcd;
            return res;
        }
        if (g > 1) {
            res.status = FactorStatus::Found;
            res.divisor = g;
            return res;
        }
    }
    res.status = FactorStatus::NoFactor;
    return res;
}

// V_{k}(v) with V_1 = v, via V_{2m} = V_m^2 - 2 and V_{2m+1} = V_m V_{m+1} - V_1
template <class Ctx>
typename Ctx::W lucas_v_pow_ctx(const Ctx& ctx, typename Ctx::W v, uint64_t k) {
    if (k == 1) return v;
    const auto two = ctx.two();
    auto a = v;                                // V_m
    auto b = ctx.sub(ctx.mul(v, v), two);      // V_{m+1}
    int top = 63;
    while (top > 0 && !((k >> top) & 1)) --top;
    for (int i = top - 1; i >= 0; --i) {
        if ((k >> i) & 1) {
            a = ctx.sub(ctx.mul(a, b), v);
            b = ctx.sub(ctx.mul(b, b), two);
        } else {
            b = ctx.sub(ctx.mul(a, b), v);
            a = ctx.sub(ctx.mul(a, a), two);
        }
    }
    return a;
}

template <class Ctx>
FactorResult pm1_stage1(const Ctx& ctx, const Int& N, typename Ctx::W v, uint64_t B) {
    FactorResult res;
    res.bound = B;
    const auto two = ctx.two();
    for (auto [q, pe] : stage1_prime_powers(B)) {
        v = lucas_v_pow_ctx(ctx, v, pe);
        ++res.iterations;
        Int g = ctx.gcd_with_n(ctx.sub(v, two));
        if (g == N) {
            res.status = FactorStatus::TrivialGcd;
            return res;
        }
        if (g > 1) {
            res.status = FactorStatus::Found;
            res.divisor = g;
            return res;
        }
    }
    res.status = FactorStatus::NoFactor;
    return res;
}

inline bool fits_word(const Int& N) { return N < (Int(1) << 62); }

}  // namespace detail

// Pollard p-1, stage 1 with exponent M = prod_{q <= B} q^{floor(log_q B)};
// gcd taken after every prime-power block
inline FactorResult pollard_p1(const Int& N, uint64_t B, const Int& a) {
    detail::require(N > 1 && N % 2 == 1, "pollard_p1: N must be odd and > 1");
    Int g = gcd(a % N, N);
    if (g == N) return {FactorStatus::TrivialGcd, 0, 0, B};
    if (g > 1) return {FactorStatus::Found, g, 0, B};
    if (detail::fits_word(N)) {
        detail::Ctx64 ctx{N.convert_to<uint64_t>()};
        return detail::p1_stage1(ctx, N, ctx.from_int(a), B);
    }
    detail::CtxBig ctx{N};
    return detail::p1_stage1(ctx, N, ctx.from_int(a), B);
}

// x-only Pell-conic p+-1, stage 1: x0 is the x-coordinate of a point on a
// twist of x^2 - D y^2 = 4 mod N; success when the order of the point
// modulo some prime p | N (a divisor of p - (x0^2-4/p)) is B-smooth
inline FactorResult pell_pm1(const Int& N, const Int& disc, const Int& x0, uint64_t B) {
    detail::require(N > 1 && N % 2 == 1, "pell_pm1: N must be odd and > 1");
    detail::require(gcd(N, 2 * disc) == 1, "pell_pm1: gcd(N, 2D) must be 1");
    if (detail::fits_word(N)) {
        detail::Ctx64 ctx{N.convert_to<uint64_t>()};
        return detail::pm1_stage1(ctx, N, ctx.from_int(x0), B);
    }
    detail::CtxBig ctx{N};
    return detail::pm1_stage1(ctx, N, ctx.from_int(x0), B);
}

// deterministic seed coordinates for multi-seed driving
inline const std::vector<Int>& standard_pm1_seeds() {
    static const std::vector<Int> seeds{3, 5, 6, 7, 10, 11, 13, 14, 18, 23};
    return seeds;
}

// run every seed and report the smallest divisor found, so the result does
// not depend on scheduling when seeds are tried concurrently
inline FactorResult pell_pm1_best(const Int& N, const Int& disc, uint64_t B,
                                  const std::vector<Int>& seeds = standard_pm1_seeds()) {
    FactorResult best;
    best.bound = B;
    for (const Int& x0 : seeds) {
        auto r = pell_pm1(N, disc, x0, B);
        best.iterations += r.iterations;
        if (r.status == FactorStatus::Found &&
            (best.status != FactorStatus::Found || r.divisor < best.divisor)) {
            best.status = FactorStatus::Found;
            best.divisor = r.divisor;
        } else if (r.status == FactorStatus::TrivialGcd && best.status == FactorStatus::NoFactor) {
            best.status = FactorStatus::TrivialGcd;
        }
    }
    return best;
}

}  // namespace pell
