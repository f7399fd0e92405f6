#pragma once

// Coefficient-ring contexts for conic arithmetic: Z, Q, Z/nZ with odd n,
// and small extension fields F_{p^f}. 2 must be invertible (or, over Z,
// halving must be exact -- the group law guarantees it on curve points).

#include "pell/nt.hpp"

#include <array>
#include <concepts>

namespace pell {

template <class R>
concept RingContext = requires(const R& r, const typename R::Elem& a, const typename R::Elem& b, const Int& v) {
    { r.from_int(v) } -> std::same_as<typename R::Elem>;
    { r.add(a, b) } -> std::same_as<typename R::Elem>;
    { r.sub(a, b) } -> std::same_as<typename R::Elem>;
    { r.mul(a, b) } -> std::same_as<typename R::Elem>;
    { r.neg(a) } -> std::same_as<typename R::Elem>;
    { r.halve(a) } -> std::same_as<typename R::Elem>;
    { r.eq(a, b) } -> std::same_as<bool>;
};

struct IntegerRing {
    using Elem = Int;
    Elem from_int(const Int& v) const { return v; }
    Elem add(const Elem& a, const Elem& b) const { return a + b; }
    Elem sub(const Elem& a, const Elem& b) const { return a - b; }
    Elem mul(const Elem& a, const Elem& b) const { return a * b; }
    Elem neg(const Elem& a) const { return -a; }
    Elem halve(const Elem& a) const {
        detail::check(a % 2 == 0, "integer halving must be exact (group-law parity violated)");
        return a / 2;
    }
    bool eq(const Elem& a, const Elem& b) const { return a == b; }
};

struct RationalField {
    using Elem = Rat;
    Elem from_int(const Int& v) const { return Rat(v); }
    Elem add(const Elem& a, const Elem& b) const { return a + b; }
    Elem sub(const Elem& a, const Elem& b) const { return a - b; }
    Elem mul(const Elem& a, const Elem& b) const { return a * b; }
    Elem neg(const Elem& a) const { return -a; }
    Elem halve(const Elem& a) const { return a / 2; }
    Elem inv(const Elem& a) const {
        detail::require(a != 0, "division by zero");
        return 1 / a;
    }
    bool eq(const Elem& a, const Elem& b) const { return a == b; }
};

// Z/nZ for odd n >= 3; composite moduli are allowed
struct ModRing {
    Int n;

    explicit ModRing(Int modulus) : n(std::move(modulus)) {
        detail::require(n >= 3 && n % 2 == 1, "ModRing: modulus must be odd and >= 3");
    }

    using Elem = Int;
    Elem from_int(const Int& v) const {
        Elem r = v % n;
        if (r < 0) r += n;
        return r;
    }
    Elem add(const Elem& a, const Elem& b) const {
        Elem r = a + b;
        if (r >= n) r -= n;
        return r;
    }
    Elem sub(const Elem& a, const Elem& b) const {
        Elem r = a - b;
        if (r < 0) r += n;
        return r;
    }
    Elem mul(const Elem& a, const Elem& b) const { return a * b % n; }
    Elem neg(const Elem& a) const { return a == 0 ? a : Elem(n - a); }
    Elem halve(const Elem& a) const { return (a % 2 == 0 ? a : Elem(a + n)) / 2; }
    bool eq(const Elem& a, const Elem& b) const { return a == b; }

    // enumeration support (desk scale)
    uint64_t size_u64() const {
        detail::require(n <= 4'000'000, "ModRing enumeration: modulus too large");
        return n.convert_to<uint64_t>();
    }
    Elem element_at(uint64_t i) const { return Int(i); }
    uint64_t index_of(const Elem& e) const { return e.convert_to<uint64_t>(); }
};

inline ModRing prime_field(const Int& p) {
    detail::require(p >= 3 && is_probable_prime(p), "prime_field: p must be an odd prime");
    return ModRing(p);
}

// F_{p^f} = F_p[t]/(m(t)) with odd p, f <= 3; irreducibility of the monic
// modulus is certified by the absence of roots (valid for degree <= 3)
struct ExtField {
    int64_t p = 3;
    int f = 1;
    std::array<int64_t, 3> modulus{};  // m(t) = t^f + modulus[f-1] t^{f-1} + ... + modulus[0]

    using Elem = std::array<int64_t, 3>;

    ExtField(int64_t p_, int f_, std::array<int64_t, 3> monic_tail) : p(p_), f(f_), modulus(monic_tail) {
        detail::require(p >= 3 && p % 2 == 1 && is_probable_prime(Int(p)), "ExtField: p must be an odd prime");
        detail::require(f >= 1 && f <= 3, "ExtField: degree must be in [1, 3]");
        detail::require(p <= 4000, "ExtField: p too large for desk-scale enumeration");
        for (auto& c : modulus) c = ((c % p) + p) % p;
        if (f >= 2) {
            for (int64_t t = 0; t < p; ++t)
                detail::require(eval_modulus(t) != 0, "ExtField: modulus polynomial has a root, not irreducible");
        }
    }

    // smallest monic irreducible modulus in lexicographic tail order
    static ExtField make(int64_t p, int f) {
        detail::require(f >= 1 && f <= 3, "ExtField: degree must be in [1, 3]");
        if (f == 1) return ExtField(p, 1, {0, 0, 0});
        for (int64_t c1 = 0; c1 < p; ++c1) {
            for (int64_t c0 = 0; c0 < p; ++c0) {
                std::array<int64_t, 3> tail = f == 2 ? std::array<int64_t, 3>{c0, c1, 0}
                                                     : std::array<int64_t, 3>{c0, c1, 0};
                if (f == 3) {
                    for (int64_t c2 = 0; c2 < p; ++c2) {
                        tail = {c0, c1, c2};
                        if (!has_root(p, 3, tail)) return ExtField(p, 3, tail);
                    }
                    continue;
                }
                if (!has_root(p, 2, tail)) return ExtField(p, 2, tail);
            }
        }
        throw std::logic_error("ExtField::make: no irreducible polynomial found");
    }

    Elem from_int(const Int& v) const {
        Int r = v % p;
        if (r < 0) r += p;
        return {r.convert_to<int64_t>(), 0, 0};
    }
    Elem add(const Elem& a, const Elem& b) const {
        Elem r{};
        for (int i = 0; i < f; ++i) r[i] = (a[i] + b[i]) % p;
        return r;
    }
    Elem sub(const Elem& a, const Elem& b) const {
        Elem r{};
        for (int i = 0; i < f; ++i) r[i] = ((a[i] - b[i]) % p + p) % p;
        return r;
    }
    Elem neg(const Elem& a) const {
        Elem r{};
        for (int i = 0; i < f; ++i) r[i] = a[i] == 0 ? 0 : p - a[i];
        return r;
    }
    Elem mul(const Elem& a, const Elem& b) const {
        std::array<int64_t, 5> prod{};
        for (int i = 0; i < f; ++i)
            for (int j = 0; j < f; ++j) prod[i + j] = (prod[i + j] + a[i] * b[j]) % p;
        // reduce with t^f = -(modulus tail)
        for (int i = 2 * f - 2; i >= f; --i) {
            int64_t c = prod[i];
            if (c == 0) continue;
            prod[i] = 0;
            for (int j = 0; j < f; ++j)
                prod[i - f + j] = ((prod[i - f + j] - c * modulus[j]) % p + p) % p;
        }
        Elem r{};
        for (int i = 0; i < f; ++i) r[i] = prod[i];
        return r;
    }
    Elem halve(const Elem& a) const {
        int64_t inv2 = (p + 1) / 2;
        Elem r{};
        for (int i = 0; i < f; ++i) r[i] = a[i] * inv2 % p;
        return r;
    }
    bool eq(const Elem& a, const Elem& b) const { return a == b; }

    uint64_t size_u64() const {
        uint64_t q = 1;
        for (int i = 0; i < f; ++i) q *= uint64_t(p);
        return q;
    }
    Elem element_at(uint64_t i) const {
        Elem r{};
        for (int k = 0; k < f; ++k) {
            r[k] = int64_t(i % uint64_t(p));
            i /= uint64_t(p);
        }
        return r;
    }
    uint64_t index_of(const Elem& e) const {
        uint64_t idx = 0;
        for (int k = f - 1; k >= 0; --k) idx = idx * uint64_t(p) + uint64_t(e[k]);
        return idx;
    }

private:
    int64_t eval_modulus(int64_t t) const {
        int64_t v = 1;  // monic leading coefficient
        for (int i = f - 1; i >= 0; --i) v = (v * t + modulus[i]) % p;
        return v;
    }
    static bool has_root(int64_t p, int f, const std::array<int64_t, 3>& tail) {
        for (int64_t t = 0; t < p; ++t) {
            int64_t v = 1;
            for (int i = f - 1; i >= 0; --i) v = (v * t + tail[i]) % p;
            if (v == 0) return true;
        }
        return false;
    }
};

}  // namespace pell
