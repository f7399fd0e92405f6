#pragma once

// The Pell conic x^2 - D*y^2 = 4 with neutral point N = (2, 0): group law
// over any ring context, scalar multiplication, torsion, and the action of
// the conic on its homogeneous spaces x^2 - D*y^2 = 4c.

#include "pell/ring.hpp"

namespace pell {

template <class E>
struct Point {
    E x{}, y{};
    friend bool operator==(const Point&, const Point&) = default;
};

using ZPoint = Point<Int>;
using QPoint = Point<Rat>;

struct PellConic {
    Int d;     // squarefree, not 0 or 1
    Int disc;  // d or 4d according to d mod 4

    static PellConic from_d(const Int& d) { return {d, discriminant_from(d)}; }

    static PellConic from_disc(const Int& disc) {
        detail::require(is_discriminant(disc) && disc != 0 && disc != 1,
                        "PellConic: not a discriminant");
        Int d = disc % 4 == 0 ? Int(disc / 4) : disc;
        detail::require(discriminant_from(d) == disc,
                        "PellConic: discriminant does not come from a squarefree d");
        return {d, disc};
    }
};

template <RingContext R>
Point<typename R::Elem> neutral(const R& ring) {
    return {ring.from_int(2), ring.from_int(0)};
}

template <RingContext R>
bool on_curve(const R& ring, const Int& disc, const Point<typename R::Elem>& P) {
    auto lhs = ring.sub(ring.mul(P.x, P.x),
                        ring.mul(ring.from_int(disc), ring.mul(P.y, P.y)));
    return ring.eq(lhs, ring.from_int(4));
}

// (r,s) + (t,u) = ((rt + D*su)/2, (ru + st)/2)
template <RingContext R>
Point<typename R::Elem> add(const R& ring, const Int& disc,
                            const Point<typename R::Elem>& P, const Point<typename R::Elem>& Q) {
    auto D = ring.from_int(disc);
    auto x = ring.halve(ring.add(ring.mul(P.x, Q.x), ring.mul(D, ring.mul(P.y, Q.y))));
    auto y = ring.halve(ring.add(ring.mul(P.x, Q.y), ring.mul(P.y, Q.x)));
    return {x, y};
}

template <RingContext R>
Point<typename R::Elem> neg(const R& ring, const Point<typename R::Elem>& P) {
    return {P.x, ring.neg(P.y)};
}

template <RingContext R>
Point<typename R::Elem> sub(const R& ring, const Int& disc,
                            const Point<typename R::Elem>& P, const Point<typename R::Elem>& Q) {
    return add(ring, disc, P, neg(ring, Q));
}

// k-fold sum by binary double-and-add; k = 0 gives N, k < 0 goes through neg
template <RingContext R>
Point<typename R::Elem> scalar_mul(const R& ring, const Int& disc, Int k,
                                   Point<typename R::Elem> P) {
    if (k < 0) {
        k = -k;
        P = neg(ring, P);
    }
    if (k == 0) return neutral(ring);
    auto acc = P;
    for (int i = static_cast<int>(msb(k)) - 1; i >= 0; --i) {
        acc = add(ring, disc, acc, acc);
        if (bit_test(k, i)) acc = add(ring, disc, acc, P);
    }
    return acc;
}

// x-only duplication x(2P) = x(P)^2 - 2, from the group law and the curve
// relation D*y^2 = x^2 - 4
template <RingContext R>
typename R::Elem x_only_double(const R& ring, const typename R::Elem& x) {
    return ring.sub(ring.mul(x, x), ring.from_int(2));
}

struct Torsion {
    std::vector<ZPoint> points;
    Int w;  // group order
};

// all integral points of finite order; for D < 0 that is every integral
// point, and |x|, |y| <= 2 exhausts them
inline Torsion torsion_points(const Int& disc) {
    std::vector<ZPoint> pts;
    if (disc < 0) {
        for (Int x = -2; x <= 2; ++x)
            for (Int y = -2; y <= 2; ++y)
                if (x * x - disc * y * y == 4) pts.push_back({x, y});
    } else {
        pts.push_back({2, 0});
        pts.push_back({-2, 0});
    }
    return {pts, Int(pts.size())};
}

// mu((u,v), (x,y)) = ((ux + D*vy)/2, (vx + uy)/2): the simply-transitive
// action of C on the space D_c : x^2 - D*y^2 = 4c; same bilinear formula
template <RingContext R>
Point<typename R::Elem> mu(const R& ring, const Int& disc,
                           const Point<typename R::Elem>& q, const Point<typename R::Elem>& P) {
    auto D = ring.from_int(disc);
    auto x = ring.halve(ring.add(ring.mul(q.x, P.x), ring.mul(D, ring.mul(q.y, P.y))));
    auto y = ring.halve(ring.add(ring.mul(q.y, P.x), ring.mul(q.x, P.y)));
    return {x, y};
}

inline bool on_space(const Int& disc, const Int& c, const QPoint& q) {
    return q.x * q.x - Rat(disc) * q.y * q.y == Rat(4 * c);
}

// the unique P on C(Q) with mu(q, P) = r, for q, r on the same D_c
inline QPoint mu_transporter(const Int& disc, const Int& c, const QPoint& q, const QPoint& r) {
    detail::require(c != 0, "mu_transporter: degenerate space");
    Rat den = Rat(2 * c);
    Rat x = (q.x * r.x - Rat(disc) * q.y * r.y) / den;
    Rat y = (q.x * r.y - q.y * r.x) / den;
    return {x, y};
}

}  // namespace pell
