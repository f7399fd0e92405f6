#pragma once

// Exact integer substrate: Kronecker symbols, squarefree decomposition,
// modular square roots, trial-division factorization with a p+-1 fallback,
// and the continued-fraction solver for x^2 - D*y^2 = +-4.

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace pell {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

using boost::multiprecision::abs;
using boost::multiprecision::gcd;
using boost::multiprecision::lcm;
using boost::multiprecision::pow;

class FactorizationError : public std::runtime_error {
public:
    explicit FactorizationError(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

inline void require(bool ok, const char* msg) {
    if (!ok) throw std::invalid_argument(msg);
}

// internal-invariant violations (assertion-level failures)
inline void check(bool ok, const char* msg) {
    if (!ok) throw std::logic_error(msg);
}

}  // namespace detail

// primes below 10^6, built once on first use
inline const std::vector<uint32_t>& small_primes() {
    static const std::vector<uint32_t> primes = [] {
        constexpr uint32_t limit = 1'000'000;
        std::vector<bool> composite(limit + 1, false);
        std::vector<uint32_t> out;
        for (uint32_t i = 2; i <= limit; ++i) {
            if (composite[i]) continue;
            out.push_back(i);
            for (uint64_t j = uint64_t(i) * i; j <= limit; j += i) composite[size_t(j)] = true;
        }
        return out;
    }();
    return primes;
}

inline Int isqrt(const Int& n) {
    detail::require(n >= 0, "isqrt: negative argument");
    return boost::multiprecision::sqrt(n);
}

inline bool is_square(const Int& n, Int* root = nullptr) {
    if (n < 0) return false;
    Int r = boost::multiprecision::sqrt(n);
    if (r * r != n) return false;
    if (root) *root = r;
    return true;
}

// floor of the k-th root
inline Int iroot(const Int& n, unsigned k) {
    detail::require(n >= 0 && k >= 1, "iroot: need n >= 0, k >= 1");
    if (k == 1 || n <= 1) return n;
    if (k == 2) return isqrt(n);
    unsigned bits = static_cast<unsigned>(msb(n)) + 1;
    Int lo = 1, hi = Int(1) << (bits / k + 1);
    while (lo + 1 < hi) {
        Int mid = (lo + hi) / 2;
        if (pow(mid, k) <= n) lo = mid;
        else hi = mid;
    }
    return lo;
}

inline Int powmod(const Int& base, const Int& exp, const Int& mod) {
    detail::require(mod > 0 && exp >= 0, "powmod: need mod > 0, exp >= 0");
    if (mod == 1) return 0;
    Int b = base % mod;
    if (b < 0) b += mod;
    return boost::multiprecision::powm(b, exp, mod);
}

// extended gcd: returns g = gcd(a,b) and x, y with a*x + b*y = g
inline Int xgcd(const Int& a, const Int& b, Int& x, Int& y) {
    Int old_r = a, r = b, old_x = 1, xx = 0, old_y = 0, yy = 1;
    while (r != 0) {
        Int q = old_r / r;
        old_r -= q * r; std::swap(old_r, r);
        old_x -= q * xx; std::swap(old_x, xx);
        old_y -= q * yy; std::swap(old_y, yy);
    }
    if (old_r < 0) { old_r = -old_r; old_x = -old_x; old_y = -old_y; }
    x = old_x; y = old_y;
    return old_r;
}

inline std::optional<Int> invmod(const Int& a, const Int& n) {
    Int x, y;
    Int g = xgcd(a % n, n, x, y);
    if (g != 1) return std::nullopt;
    x %= n;
    if (x < 0) x += n;
    return x;
}

namespace detail {

inline bool miller_rabin_witness(const Int& n, const Int& a, const Int& d, int s) {
    Int x = powmod(a, d, n);
    if (x == 1 || x == n - 1) return false;
    for (int i = 1; i < s; ++i) {
        x = x * x % n;
        if (x == n - 1) return false;
    }
    return true;  // a proves n composite
}

}  // namespace detail

// Miller-Rabin with the first twelve prime bases; deterministic below 3.3e24
inline bool is_probable_prime(const Int& n) {
    static constexpr uint32_t bases[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
    if (n < 2) return false;
    for (uint32_t p : bases) {
        if (n == p) return true;
        if (n % p == 0) return false;
    }
    Int d = n - 1;
    int s = 0;
    while (d % 2 == 0) { d /= 2; ++s; }
    for (uint32_t p : bases)
        if (detail::miller_rabin_witness(n, p, d, s)) return false;
    return true;
}

// Kronecker symbol (a/n), the standard extension of Legendre/Jacobi
inline int kronecker(Int a, Int n) {
    if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
    int result = 1;
    if (n < 0) {
        n = -n;
        if (a < 0) result = -result;
    }
    if (n % 2 == 0) {
        if (a % 2 == 0) return 0;
        int e = 0;
        while (n % 2 == 0) { n /= 2; ++e; }
        if (e % 2 == 1) {
            int am8 = static_cast<int>(((a % 8) + 8) % 8);
            if (am8 == 3 || am8 == 5) result = -result;
        }
    }
    a %= n;
    if (a < 0) a += n;
    while (a != 0) {
        while (a % 2 == 0) {
            a /= 2;
            int nm8 = static_cast<int>(n % 8);
            if (nm8 == 3 || nm8 == 5) result = -result;
        }
        std::swap(a, n);
        if (a % 4 == 3 && n % 4 == 3) result = -result;
        a %= n;
    }
    return n == 1 ? result : 0;
}

using Factorization = std::vector<std::pair<Int, int>>;

namespace detail {

// x-coordinate of k*P from x(P) = v1, via V_{2m} = V_m^2 - 2 and
// V_{2m+1} = V_m * V_{m+1} - V_1 (all mod n); k >= 1
inline Int lucas_v_pow(const Int& v1, const Int& k, const Int& n) {
    Int v = v1 % n;
    if (v < 0) v += n;
    if (k == 1) return v;
    auto step = [&](Int t) { t %= n; if (t < 0) t += n; return t; };
    Int a = v;                       // V_m
    Int b = step(v * v - 2);         // V_{m+1}
    for (int i = static_cast<int>(msb(k)) - 1; i >= 0; --i) {
        if (bit_test(k, i)) {
            a = step(a * b - v);
            b = step(b * b - 2);
        } else {
            b = step(a * b - v);
            a = step(a * a - 2);
        }
    }
    return a;
}

// stage-1 prime powers q^e with q^e <= B
inline std::vector<std::pair<uint64_t, uint64_t>> stage1_prime_powers(uint64_t B) {
    require(B >= 2 && B <= 1'000'000, "stage-1 bound must lie in [2, 10^6]");
    std::vector<std::pair<uint64_t, uint64_t>> out;
    for (uint32_t q : small_primes()) {
        if (q > B) break;
        uint64_t pe = q;
        while (pe <= B / q) pe *= q;
        out.emplace_back(q, pe);
    }
    return out;
}

// modest p-1 / p+-1 stage-1 splitter for cofactors that survive trial
// division; desk-scale fallback only
inline Int try_split(const Int& n) {
    for (uint64_t B : {uint64_t(10'000), uint64_t(200'000)}) {
        auto pps = stage1_prime_powers(B);
        for (uint32_t a0 : {2u, 3u, 5u}) {
            Int a = a0;
            if (gcd(Int(a0), n) != 1) continue;
            int block = 0;
            for (auto [q, pe] : pps) {
                a = powmod(a, Int(pe), n);
                if (++block % 32 == 0 || pe == pps.back().second) {
                    Int g = gcd(a - 1, n);
                    if (g > 1 && g < n) return g;
                    if (g == n) break;
                }
            }
            Int g = gcd(a - 1, n);
            if (g > 1 && g < n) return g;
        }
        for (uint32_t x0 : {3u, 7u, 11u, 12u}) {
            Int v = x0;
            for (auto [q, pe] : pps) {
                v = lucas_v_pow(v, Int(pe), n);
                Int g = gcd(v - 2, n);
                if (g > 1 && g < n) return g;
                if (g == n) break;
            }
        }
    }
    return 0;
}

}  // namespace detail

// complete factorization of |n|; throws FactorizationError when a cofactor
// resists trial division to 10^6 plus the p+-1 fallback (desk-scale contract)
inline Factorization factorize(Int n) {
    detail::require(n != 0, "factorize: n must be nonzero");
    if (n < 0) n = -n;
    Factorization out;
    auto push = [&](const Int& p, int e) {
        for (auto& [q, f] : out)
            if (q == p) { f += e; return; }
        out.emplace_back(p, e);
    };
    for (uint32_t p : small_primes()) {
        if (Int(p) * p > n) break;
        if (n % p != 0) continue;
        int e = 0;
        while (n % p == 0) { n /= p; ++e; }
        push(p, e);
    }
    std::vector<std::pair<Int, int>> pending;
    if (n > 1) pending.emplace_back(n, 1);
    while (!pending.empty()) {
        auto [c, mult] = pending.back();
        pending.pop_back();
        if (c < Int("1000000000000") || is_probable_prime(c)) {
            // below (10^6)^2 any survivor of trial division is prime
            push(c, mult);
            continue;
        }
        bool split = false;
        unsigned maxk = static_cast<unsigned>(msb(c)) + 1;
        for (unsigned k = 2; k <= maxk; ++k) {
            Int r = iroot(c, k);
            if (r > 1 && pow(r, k) == c) {
                pending.emplace_back(r, mult * int(k));
                split = true;
                break;
            }
        }
        if (split) continue;
        Int d = detail::try_split(c);
        if (d > 1 && d < c) {
            pending.emplace_back(d, mult);
            pending.emplace_back(c / d, mult);
            continue;
        }
        throw FactorizationError("factorize: cofactor " + c.str() +
                                 " resists trial division and the p+-1 fallback");
    }
    std::sort(out.begin(), out.end());
    return out;
}

inline std::vector<Int> prime_divisors(const Int& n) {
    std::vector<Int> out;
    for (const auto& [p, e] : factorize(n)) out.push_back(p);
    return out;
}

// squarefree s of the same sign as n with n/s a positive perfect square
inline Int squarefree_part(const Int& n) {
    detail::require(n != 0, "squarefree_part: n must be nonzero");
    Int m = abs(n);
    Int sf = n < 0 ? Int(-1) : Int(1);
    for (uint32_t p : small_primes()) {
        if (Int(p) * p > m) break;
        if (m % p != 0) continue;
        int e = 0;
        while (m % p == 0) { m /= p; ++e; }
        if (e & 1) sf *= p;
    }
    if (m == 1) return sf;
    if (m < Int("1000000000000") || is_probable_prime(m)) return sf * m;
    if (is_square(m)) return sf;  // even exponents throughout
    for (const auto& [p, e] : factorize(m))
        if (e & 1) sf *= p;
    return sf;
}

inline bool is_squarefree(const Int& n) { return n != 0 && squarefree_part(n) == n; }

// D = d if d = 1 mod 4, else 4d; d squarefree, d not in {0, 1}
inline Int discriminant_from(const Int& d) {
    detail::require(d != 0 && d != 1, "discriminant_from: d must not be 0 or 1");
    detail::require(is_squarefree(d), "discriminant_from: d must be squarefree");
    Int r = ((d % 4) + 4) % 4;
    return r == 1 ? d : 4 * d;
}

inline bool is_discriminant(const Int& v) {
    Int r = ((v % 4) + 4) % 4;
    return r == 0 || r == 1;
}

inline bool is_fundamental_discriminant(const Int& disc) {
    if (disc == 0 || disc == 1) return false;
    Int r = ((disc % 4) + 4) % 4;
    if (r == 1) return is_squarefree(disc);
    if (r != 0) return false;
    Int d = disc / 4;
    Int dm = ((d % 4) + 4) % 4;
    return (dm == 2 || dm == 3) && is_squarefree(d);
}

enum class SqrtStatus { Ok, NonResidue, NotPrime };

struct ModSqrtResult {
    SqrtStatus status = SqrtStatus::NotPrime;
    Int root;  // valid when status == Ok
    bool ok() const { return status == SqrtStatus::Ok; }
};

// square root of a modulo a claimed odd prime p (Tonelli-Shanks); every
// internal inconsistency is reported as NotPrime rather than a bogus root
inline ModSqrtResult mod_sqrt(const Int& a_in, const Int& p) {
    detail::require(p >= 3 && p % 2 == 1, "mod_sqrt: modulus must be odd and >= 3");
    Int a = a_in % p;
    if (a < 0) a += p;
    if (a == 0) return {SqrtStatus::Ok, 0};
    Int euler = powmod(a, (p - 1) / 2, p);
    if (euler == p - 1) return {SqrtStatus::NonResidue, 0};
    if (euler != 1) return {SqrtStatus::NotPrime, 0};
    Int r;
    if (p % 4 == 3) {
        r = powmod(a, (p + 1) / 4, p);
    } else {
        Int q = p - 1;
        long s = 0;
        while (q % 2 == 0) { q /= 2; ++s; }
        Int z = 0;
        for (Int cand = 2; cand < p; ++cand) {
            Int e = powmod(cand, (p - 1) / 2, p);
            if (e == p - 1) { z = cand; break; }
            if (e != 1) return {SqrtStatus::NotPrime, 0};
            if (cand > 300) return {SqrtStatus::NotPrime, 0};  // a prime would have produced a non-residue by now
        }
        long m = s;
        Int c = powmod(z, q, p);
        Int t = powmod(a, q, p);
        r = powmod(a, (q + 1) / 2, p);
        while (t != 1) {
            Int tt = t;
            long i = 0;
            while (tt != 1) {
                tt = tt * tt % p;
                if (++i == m) return {SqrtStatus::NotPrime, 0};
            }
            Int b = c;
            for (long j = 0; j < m - i - 1; ++j) b = b * b % p;
            m = i;
            c = b * b % p;
            t = t * c % p;
            r = r * b % p;
        }
    }
    if (r * r % p != a) return {SqrtStatus::NotPrime, 0};
    return {SqrtStatus::Ok, r};
}

// minimal solution of x^2 - D*y^2 = 4 together with the -4 data
struct Fundamental4 {
    Int x1, y1;                                 // minimal positive solution of x^2 - D y^2 = 4
    std::optional<std::pair<Int, Int>> minus4;  // minimal solution of x^2 - D y^2 = -4, when solvable
    int u = 1;                                  // 1 iff -4 is unsolvable (norm of the fundamental unit is +1)
};

namespace detail {

// candidate (x, y, value in {+4, -4}); smaller y wins, then smaller x
struct Pell4Candidate {
    Int x, y;
    int value = 0;
    bool better_than(const Pell4Candidate& o) const {
        if (o.value == 0) return true;
        if (y != o.y) return y < o.y;
        return x < o.x;
    }
};

}  // namespace detail

// fundamental +-4 unit via the continued fraction of sqrt(D); the minimal
// candidate over the first period, collecting direct +-4 convergent hits
// and doubled +-1 hits
inline Fundamental4 pell4_fundamental(const Int& disc) {
    detail::require(disc > 0, "pell4_fundamental: discriminant must be positive");
    detail::require(is_discriminant(disc), "pell4_fundamental: need D = 0 or 1 mod 4");
    detail::require(!is_square(disc), "pell4_fundamental: discriminant must not be a square");

    detail::Pell4Candidate best;
    auto consider = [&](const Int& x, const Int& y, int value) {
        detail::Pell4Candidate c{x, y, value};
        if (c.better_than(best)) best = c;
    };

    if (disc < 32) {
        // small discriminants: direct scan (primitive odd solutions need not
        // be convergents when sqrt(D) <= 4)
        for (Int y = 1; best.value == 0; ++y) {
            Int t = disc * y * y;
            Int x;
            if (is_square(t - 4, &x)) consider(x, y, -4);
            if (best.value == 0 && is_square(t + 4, &x)) consider(x, y, +4);
        }
    } else {
        Int a0 = isqrt(disc);
        Int m = 0, d = 1, a = a0;
        Int p_prev = 1, p_cur = a0, q_prev = 0, q_cur = 1;
        long guard = 0;
        while (true) {
            detail::check(++guard < 100'000'000, "pell4_fundamental: period guard exceeded");
            Int v = p_cur * p_cur - disc * q_cur * q_cur;
            if (v == 1 || v == -1) {
                consider(2 * p_cur, 2 * q_cur, v == 1 ? 4 : -4);
                break;  // fundamental +-1 solution ends the first period
            }
            if (v == 4 || v == -4) consider(p_cur, q_cur, static_cast<int>(v));
            m = d * a - m;
            d = (disc - m * m) / d;
            a = (a0 + m) / d;
            Int p_next = a * p_cur + p_prev;
            Int q_next = a * q_cur + q_prev;
            p_prev = p_cur; p_cur = p_next;
            q_prev = q_cur; q_cur = q_next;
        }
    }

    Fundamental4 out;
    if (best.value == -4) {
        out.minus4 = std::make_pair(best.x, best.y);
        out.u = 0;
        out.x1 = (best.x * best.x + disc * best.y * best.y) / 2;  // square of the -4 unit
        out.y1 = best.x * best.y;
    } else {
        out.u = 1;
        out.x1 = best.x;
        out.y1 = best.y;
    }
    detail::check(out.x1 * out.x1 - disc * out.y1 * out.y1 == 4,
                  "pell4_fundamental: +4 verification failed");
    return out;
}

}  // namespace pell
