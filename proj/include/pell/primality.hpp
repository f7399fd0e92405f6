#pragma once

// Group-order primality tests: the classical Lucas test on the hyperbola,
// the Pell-conic test with group order n+1, and the Lucas-Lehmer
// specialization for Mersenne numbers (D = 12, P = (4, 1)).

#include "pell/modular.hpp"

namespace pell {

enum class Verdict { Prime, Composite, Inconclusive };

inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::Prime: return "prime";
        case Verdict::Composite: return "composite";
        default: return "inconclusive";
    }
}

struct PrimalityOutcome {
    Verdict verdict = Verdict::Inconclusive;
    std::optional<Int> witness_base;      // Lucas test
    std::optional<ZPoint> witness_point;  // Pell test, coordinates mod n
    std::optional<Int> revealed_factor;   // compositeness through a zero divisor
    std::string detail;
};

// factors must be exactly the distinct primes of m
inline void verify_factor_list(const Int& m, const std::vector<Int>& factors) {
    Int rest = m;
    for (const Int& r : factors) {
        detail::require(r >= 2 && is_probable_prime(r), "factor list contains a non-prime");
        detail::require(rest % r == 0, "factor list contains a non-divisor");
        while (rest % r == 0) rest /= r;
    }
    detail::require(rest == 1, "factor list is incomplete");
}

// Lucas: n prime iff some a has a^{n-1} = 1 and a^{(n-1)/r} != 1 for all
// prime r | n-1
inline PrimalityOutcome lucas_test(const Int& n, const Int& a, const std::vector<Int>& factors) {
    detail::require(n >= 3 && n % 2 == 1, "lucas_test: n must be odd and >= 3");
    detail::require(a % n != 0, "lucas_test: base divisible by n");
    verify_factor_list(n - 1, factors);
    PrimalityOutcome out;
    out.witness_base = a;
    if (powmod(a, n - 1, n) != 1) {
        out.verdict = Verdict::Composite;
        out.detail = "a^(n-1) != 1 mod n";
        return out;
    }
    for (const Int& r : factors) {
        if (powmod(a, (n - 1) / r, n) == 1) {
            out.verdict = Verdict::Inconclusive;
            out.detail = "a^((n-1)/" + r.str() + ") = 1 mod n";
            return out;
        }
    }
    out.verdict = Verdict::Prime;
    out.detail = "a^(n-1) = 1 and a^((n-1)/r) != 1 for every prime r | n-1";
    return out;
}

// Pell conic test: for odd n >= 5 with (D/n) = -1, n is prime iff some
// point P mod n has (n+1)P = N and ((n+1)/r)P != N for all prime r | n+1
inline PrimalityOutcome pell_test(const Int& n, const Int& disc, ZPoint P,
                                  const std::vector<Int>& factors) {
    detail::require(n >= 5 && n % 2 == 1, "pell_test: n must be odd and >= 5");
    detail::require(gcd(n, 2 * disc) == 1, "pell_test: gcd(n, 2D) must be 1");
    detail::require(kronecker(disc, n) == -1, "pell_test: (D/n) must be -1");
    verify_factor_list(n + 1, factors);
    ModRing R(n);
    P = {R.from_int(P.x), R.from_int(P.y)};
    detail::require(on_curve(R, disc, P), "pell_test: point not on the conic mod n");
    PrimalityOutcome out;
    out.witness_point = P;
    auto N = neutral(R);
    if (!(scalar_mul(R, disc, n + 1, P) == N)) {
        // for prime n the group is cyclic of order n+1, so every point obeys (n+1)P = N
        out.verdict = Verdict::Composite;
        out.detail = "(n+1)P != N mod n";
        return out;
    }
    for (const Int& r : factors) {
        if (scalar_mul(R, disc, (n + 1) / r, P) == N) {
            out.verdict = Verdict::Inconclusive;
            out.detail = "((n+1)/" + r.str() + ")P = N mod n";
            return out;
        }
    }
    out.verdict = Verdict::Prime;
    out.detail = "(n+1)P = N and ((n+1)/r)P != N for every prime r | n+1";
    return out;
}

// witness search: scan x = 3, 4, ... , lift to a point via a square root
// taken as if n were prime, and stop at the first decisive candidate; a
// failed square-root consistency check certifies compositeness
inline PrimalityOutcome pell_test_auto(const Int& n, const Int& disc, int max_witnesses = 50) {
    detail::require(n >= 5 && n % 2 == 1, "pell_test_auto: n must be odd and >= 5");
    Int g = gcd(n, 2 * disc);
    detail::require(g == 1, "pell_test_auto: gcd(n, 2D) must be 1");
    detail::require(kronecker(disc, n) == -1, "pell_test_auto: (D/n) must be -1");
    std::vector<Int> factors = prime_divisors(n + 1);
    auto dinv = invmod(disc, n);
    detail::check(dinv.has_value(), "pell_test_auto: D not invertible despite gcd check");
    PrimalityOutcome out;
    int tried = 0;
    for (Int x = 3; tried < max_witnesses && x < n + 3; ++x) {
        Int t = (x * x - 4) % n * *dinv % n;
        auto rt = mod_sqrt(t, n);
        if (rt.status == SqrtStatus::NonResidue) continue;
        if (rt.status == SqrtStatus::NotPrime) {
            out.verdict = Verdict::Composite;
            out.detail = "square-root consistency failed at x = " + x.str() +
                         "; modulus cannot be prime";
            return out;
        }
        ++tried;
        auto res = pell_test(n, disc, ZPoint{x % n, rt.root}, factors);
        if (res.verdict != Verdict::Inconclusive) return res;
        out = res;
    }
    out.verdict = Verdict::Inconclusive;
    out.detail = "no decisive witness among " + std::to_string(tried) + " candidate points";
    return out;
}

inline Int mersenne(unsigned p) { return (Int(1) << p) - 1; }

// s_0 = 4 = x((4,1)), s_{k+1} = s_k^2 - 2 mod 2^p - 1; prime iff s_{p-2} = 0.
// This is the x-only duplication chain of the Pell test at D = 12, P = (4,1).
inline PrimalityOutcome lucas_lehmer(unsigned p) {
    detail::require(p >= 3 && is_probable_prime(Int(p)), "lucas_lehmer: exponent must be a prime >= 3");
    const Int M = mersenne(p);
    Int s = 4;
    for (unsigned i = 0; i < p - 2; ++i) {
        s = (s * s - 2) % M;
    }
    PrimalityOutcome out;
    out.witness_point = ZPoint{4, 1};
    out.verdict = s == 0 ? Verdict::Prime : Verdict::Composite;
    out.detail = s == 0 ? "s_{p-2} = 0 mod 2^p - 1" : "s_{p-2} != 0 mod 2^p - 1";
    return out;
}

}  // namespace pell
