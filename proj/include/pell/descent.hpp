#pragma once

// First 2-descent on C(Z): the alpha-map to square classes, descendant
// conics a x^2 - b y^2 = 4 with ab = D, local solvability by Hilbert
// symbols, the 2-Selmer group, Sha_2, and the class-group comparisons.

#include "pell/forms.hpp"

#include <set>

namespace pell {

// squarefree representative of a rational square class; sign significant
struct SquareClass {
    Int rep;

    static SquareClass of(const Int& v) { return {squarefree_part(v)}; }
    static SquareClass of(const Rat& v) {
        detail::require(v != 0, "SquareClass: zero has no square class");
        return {squarefree_part(numerator(v) * denominator(v))};
    }
    SquareClass operator*(const SquareClass& o) const { return {squarefree_part(rep * o.rep)}; }
    friend bool operator==(const SquareClass&, const SquareClass&) = default;
    friend bool operator<(const SquareClass& a, const SquareClass& b) { return a.rep < b.rep; }
};

// descendant conic a x^2 - b y^2 = 4 with ab = D, a positive squarefree
struct Descendant {
    Int a, b;

    static Descendant of(const Int& disc, const Int& a) {
        detail::require(a > 0 && is_squarefree(a) && disc % a == 0,
                        "Descendant: need positive squarefree a dividing D");
        return {a, disc / a};
    }
};

// alpha(x, y) = (x+2) Q^x2 for x != -2, and -D Q^x2 at x = -2
inline SquareClass alpha(const Int& disc, const QPoint& P) {
    detail::require(P.x * P.x - Rat(disc) * P.y * P.y == 4, "alpha: point not on the conic");
    if (P.x == -2) return SquareClass::of(Int(-disc));
    return SquareClass::of(Rat(P.x + 2));
}

inline SquareClass alpha(const Int& disc, const ZPoint& P) {
    return alpha(disc, QPoint{Rat(P.x), Rat(P.y)});
}

struct AlphaImage {
    std::set<Int> full;      // alpha over all of C(Z)
    std::set<Int> positive;  // alpha over the x > 0 subgroup generated by the fundamental point
};

// the image is generated by alpha(eta) together with alpha((-2,0)) = -D;
// the x > 0 part is {1, alpha(eta)}
inline AlphaImage image_alpha(const Int& disc) {
    detail::require(disc > 0 && !is_square(disc), "image_alpha: need a positive non-square discriminant");
    auto fund = pell4_fundamental(disc);
    Int a_eta = alpha(disc, ZPoint{fund.x1, fund.y1}).rep;
    AlphaImage out;
    out.positive = {Int(1), a_eta};
    Int neg = squarefree_part(-disc);
    std::set<Int> full{Int(1), a_eta, neg, squarefree_part(a_eta * neg)};
    out.full = std::move(full);
    return out;
}

struct Place {
    Int p;             // meaningful when finite
    bool infinite = false;

    static Place at(const Int& p) {
        detail::require(is_probable_prime(p), "Place: finite places are primes");
        return {p, false};
    }
    static Place infinity() { return {0, true}; }
};

namespace detail {

inline int eps4(const Int& u) { return int(((u - 1) / 2 % 2 + 2) % 2); }          // (u-1)/2 mod 2, u odd
inline int omega8(const Int& u) { return int(((u * u - 1) / 8 % 2 + 2) % 2); }    // (u^2-1)/8 mod 2, u odd

}  // namespace detail

// Hilbert symbol (a, b)_v: +1 iff z^2 = a x^2 + b y^2 has a nontrivial
// solution over the completion at v
inline int hilbert_symbol(const Rat& aq, const Rat& bq, const Place& v) {
    detail::require(aq != 0 && bq != 0, "hilbert_symbol: arguments must be nonzero");
    Int a = numerator(aq) * denominator(aq);
    Int b = numerator(bq) * denominator(bq);
    if (v.infinite) return (a < 0 && b < 0) ? -1 : 1;
    const Int& p = v.p;
    int alpha = 0, beta = 0;
    while (a % p == 0) { a /= p; ++alpha; }
    while (b % p == 0) { b /= p; ++beta; }
    if (p == 2) {
        int e = detail::eps4(a) * detail::eps4(b) + alpha * detail::omega8(b) + beta * detail::omega8(a);
        return e % 2 == 0 ? 1 : -1;
    }
    int sign = 1;
    if ((alpha * beta) % 2 == 1 && (p - 1) / 2 % 2 == 1) sign = -sign;
    if (beta % 2 == 1) sign *= kronecker(a, p);
    if (alpha % 2 == 1) sign *= kronecker(b, p);
    return sign;
}

// a x^2 - b y^2 = 4 is rationally solvable iff a is a norm from Q(sqrt(D)),
// i.e. (a, D)_v = +1 at every place; only infinity, 2 and p | D can fail
inline bool locally_solvable(const Int& disc, const Descendant& T) {
    detail::check(T.a * T.b == disc, "locally_solvable: not a descendant");
    if (hilbert_symbol(Rat(T.a), Rat(disc), Place::infinity()) != 1) return false;
    if (hilbert_symbol(Rat(T.a), Rat(disc), Place::at(2)) != 1) return false;
    for (const Int& p : prime_divisors(disc)) {
        if (p == 2) continue;
        if (hilbert_symbol(Rat(T.a), Rat(disc), Place::at(p)) != 1) return false;
    }
    return true;
}

// Sel_2 = { a > 0 squarefree : ab = D, T_a everywhere locally solvable }
inline std::set<Int> selmer2(const Int& disc) {
    detail::require(disc > 0 && !is_square(disc), "selmer2: need a positive non-square discriminant");
    std::set<Int> sel;
    std::vector<Int> divisors{1};
    for (const Int& p : prime_divisors(disc)) {
        std::vector<Int> next = divisors;
        for (const Int& d : divisors)
            if (is_squarefree(d * p)) next.push_back(d * p);
        divisors = std::move(next);
    }
    for (const Int& a : divisors) {
        if (disc % a != 0) continue;
        if (locally_solvable(disc, Descendant::of(disc, a))) sel.insert(a);
    }
    return sel;
}

struct Sha2 {
    Int order;
    std::vector<Int> nontrivial;  // Selmer classes outside the image of alpha
};

// 1 -> im alpha -> Sel_2 -> Sha_2 -> 1
inline Sha2 sha2(const Int& disc) {
    auto sel = selmer2(disc);
    auto img = image_alpha(disc).positive;
    for (const Int& a : img)
        detail::check(sel.count(a) == 1, "sha2: image of alpha escapes the Selmer group");
    Sha2 out;
    detail::check(Int(sel.size()) % Int(img.size()) == 0, "sha2: image size does not divide Selmer size");
    out.order = Int(sel.size()) / Int(img.size());
    for (const Int& a : sel)
        if (!img.count(a)) out.nontrivial.push_back(a);
    return out;
}

struct LinkChecks {
    bool sha_matches_class_group;  // |Sha_2| = |Cl+^2[2]|
    bool genus_product;            // prod c_p = 2 (Cl+ : Cl+^2)
    bool image_rank;               // |im alpha (x > 0)| = 2^r with r = 1
};

inline LinkChecks verify_links(const Int& disc) {
    detail::require(disc > 0 && is_fundamental_discriminant(disc),
                    "verify_links: need a positive fundamental discriminant");
    auto cls = class_group_narrow(disc);
    auto sh = sha2(disc);
    auto img = image_alpha(disc);
    Int t = Int(prime_divisors(disc).size());
    Int tam = pow(Int(2), unsigned(t.convert_to<long>()));
    LinkChecks out;
    out.sha_matches_class_group = sh.order == cls.two_torsion_of_squares;
    out.genus_product = tam * cls.squares_order == 2 * cls.h_plus;
    out.image_rank = img.positive.size() == 2;
    return out;
}

struct DescentReport {
    Int disc;
    std::set<Int> image_alpha_full;
    std::set<Int> image_alpha_positive;
    std::set<Int> selmer;
    Int sha2_order;
    std::vector<Int> sha2_nontrivial;
    Int rank;  // log2 |im alpha (x > 0)|
    ClassGroupData class_group;
    LinkChecks links;
};

inline DescentReport descent_report(const Int& disc) {
    DescentReport rep;
    rep.disc = disc;
    auto img = image_alpha(disc);
    rep.image_alpha_full = img.full;
    rep.image_alpha_positive = img.positive;
    rep.selmer = selmer2(disc);
    auto sh = sha2(disc);
    rep.sha2_order = sh.order;
    rep.sha2_nontrivial = sh.nontrivial;
    Int n = Int(img.positive.size());
    rep.rank = 0;
    while (n > 1) { n /= 2; ++rep.rank; }
    rep.class_group = class_group_narrow(disc);
    rep.links = verify_links(disc);
    return rep;
}

}  // namespace pell
