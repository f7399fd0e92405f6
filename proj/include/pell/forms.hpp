#pragma once

// Binary quadratic forms of discriminant D: reduction (definite and
// indefinite), Dirichlet composition, and narrow class groups by exhaustive
// enumeration of reduced forms. Desk-scale contract |D| <= 10^4.

#include "pell/modular.hpp"

#include <map>

namespace pell {

struct QuadForm {
    Int a, b, c;
    friend bool operator==(const QuadForm&, const QuadForm&) = default;
    friend bool operator<(const QuadForm& f, const QuadForm& g) {
        if (f.a != g.a) return f.a < g.a;
        if (f.b != g.b) return f.b < g.b;
        return f.c < g.c;
    }
};

inline Int form_disc(const QuadForm& f) { return f.b * f.b - 4 * f.a * f.c; }

inline bool is_primitive(const QuadForm& f) { return gcd(gcd(f.a, f.b), f.c) == 1; }

inline QuadForm principal_form(const Int& disc) {
    if (((disc % 4) + 4) % 4 == 0) return {1, 0, -disc / 4};
    return {1, 1, (1 - disc) / 4};
}

// positive-definite reduction: |b| <= a <= c with b >= 0 if |b| = a or a = c
inline QuadForm reduce_definite(QuadForm f) {
    detail::require(form_disc(f) < 0 && f.a > 0, "reduce_definite: not positive definite");
    const Int disc = form_disc(f);
    while (true) {
        Int twoa = 2 * f.a;
        Int b = ((f.b % twoa) + twoa) % twoa;  // into (-a, a]
        if (b > f.a) b -= twoa;
        f.b = b;
        f.c = (f.b * f.b - disc) / (4 * f.a);
        if (f.a > f.c) {
            f = {f.c, -f.b, f.a};
            continue;
        }
        break;
    }
    if (f.a == f.c && f.b < 0) f.b = -f.b;
    return f;
}

inline bool is_reduced_definite(const QuadForm& f) {
    if (abs(f.b) > f.a || f.a > f.c) return false;
    if ((abs(f.b) == f.a || f.a == f.c) && f.b < 0) return false;
    return true;
}

// indefinite reduced: 0 < b < sqrt(D) and sqrt(D) - b < 2|a| < sqrt(D) + b
inline bool is_reduced_indefinite(const QuadForm& f, const Int& sq) {
    if (f.b <= 0 || f.b > sq) return false;
    Int twoa = 2 * abs(f.a);
    return twoa > sq - f.b && twoa <= sq + f.b;
}

// one step of the reduction operator rho: (a, b, c) -> (c, b', *) with
// b' = -b mod 2|c|, chosen in (sqrt(D) - 2|c|, sqrt(D)] once |c| < sqrt(D)
// and in (-|c|, |c|] before that (Cohen 5.6.5)
inline QuadForm rho_indefinite(const QuadForm& f, const Int& disc, const Int& sq) {
    Int twoc = 2 * abs(f.c);
    Int b;
    if (abs(f.c) > sq) {
        b = ((-f.b % twoc) + twoc) % twoc;
        if (b > abs(f.c)) b -= twoc;
    } else {
        b = sq - (((sq + f.b) % twoc) + twoc) % twoc;
    }
    Int c = (b * b - disc) / (4 * f.c);
    return {f.c, b, c};
}

inline QuadForm reduce_indefinite(QuadForm f, const Int& disc, const Int& sq) {
    long guard = 0;
    while (!is_reduced_indefinite(f, sq)) {
        f = rho_indefinite(f, disc, sq);
        detail::check(++guard < 100000, "reduce_indefinite: failed to converge");
    }
    return f;
}

// Dirichlet composition of primitive forms of the same discriminant
// (Cohen, Algorithm 5.4.7); result is not reduced
inline QuadForm compose_raw(QuadForm f1, QuadForm f2) {
    if (f1.a > f2.a) std::swap(f1, f2);
    Int s = (f1.b + f2.b) / 2;
    Int n = f2.b - s;
    Int y1, d;
    if (f2.a % f1.a == 0) {
        y1 = 0;
        d = f1.a;
    } else {
        Int u, v;
        d = xgcd(f2.a, f1.a, u, v);
        y1 = u;
    }
    Int x2, y2, d1;
    if (s % d == 0) {
        x2 = 0;
        y2 = -1;
        d1 = d;
    } else {
        Int u, v;
        d1 = xgcd(s, d, u, v);
        x2 = u;
        y2 = -v;
    }
    Int v1 = f1.a / d1;
    Int v2 = f2.a / d1;
    Int m = abs(v1);
    Int r = m == 0 ? Int(0) : Int(((y1 * y2 * n - x2 * f2.c) % m + m) % m);
    QuadForm out;
    out.b = f2.b + 2 * v2 * r;
    out.a = v1 * v2;
    out.c = (f2.c * d1 + r * (f2.b + v2 * r)) / v1;
    return out;
}

// the narrow (strict) class group of discriminant D as an explicit finite
// group: canonical class representatives plus a composition table interface
class ClassGroup {
public:
    explicit ClassGroup(const Int& disc) : disc_(disc) {
        detail::require(is_discriminant(disc) && disc != 0 && disc != 1 && !is_square(disc),
                        "ClassGroup: not a valid non-square discriminant");
        detail::require(abs(disc) <= 100000, "ClassGroup: desk-scale contract |D| <= 10^4 exceeded");
        if (disc < 0) build_definite();
        else build_indefinite();
        id_ = class_index(principal_form(disc_));
    }

    const Int& disc() const { return disc_; }
    size_t size() const { return reps_.size(); }
    size_t identity() const { return id_; }
    const QuadForm& rep(size_t i) const { return reps_[i]; }

    // index of the class containing an arbitrary primitive form of disc_
    size_t class_index(QuadForm f) const {
        detail::require(form_disc(f) == disc_, "ClassGroup: discriminant mismatch");
        detail::require(is_primitive(f), "ClassGroup: form not primitive");
        if (disc_ < 0) {
            detail::require(f.a > 0, "ClassGroup: negative-definite form");
            auto it = lookup_.find(reduce_definite(f));
            detail::check(it != lookup_.end(), "ClassGroup: reduced form not in table");
            return it->second;
        }
        auto it = lookup_.find(reduce_indefinite(f, disc_, sq_));
        detail::check(it != lookup_.end(), "ClassGroup: reduced form not in table");
        return it->second;
    }

    size_t compose(size_t i, size_t j) const {
        QuadForm f = compose_raw(reps_[i], reps_[j]);
        detail::check(form_disc(f) == disc_, "ClassGroup: composition broke the discriminant");
        return class_index(f);
    }

    size_t inverse(size_t i) const {
        const QuadForm& f = reps_[i];
        return class_index({f.a, -f.b, f.c});
    }

    Int order_of(size_t i) const {
        Int ord = 1;
        size_t acc = i;
        while (acc != id_) {
            acc = compose(acc, i);
            detail::check(++ord <= Int(size()), "ClassGroup: order overflow");
        }
        return ord;
    }

private:
    Int disc_, sq_;
    std::vector<QuadForm> reps_;
    std::map<QuadForm, size_t> lookup_;  // reduced form -> class index
    size_t id_ = 0;

    void build_definite() {
        // all reduced primitive positive-definite forms
        std::vector<QuadForm> reduced;
        for (Int a = 1; 3 * a * a <= -disc_; ++a) {
            for (Int b = -a + 1; b <= a; ++b) {
                if (((b * b - disc_) % (4 * a)) != 0) continue;
                Int c = (b * b - disc_) / (4 * a);
                if (c < a) continue;
                QuadForm f{a, b, c};
                if (!is_reduced_definite(f) || !is_primitive(f)) continue;
                reduced.push_back(f);
            }
        }
        std::sort(reduced.begin(), reduced.end());
        for (size_t i = 0; i < reduced.size(); ++i) {
            lookup_[reduced[i]] = i;
            reps_.push_back(reduced[i]);
        }
    }

    void build_indefinite() {
        sq_ = isqrt(disc_);
        // all reduced primitive indefinite forms, then their rho-cycles
        std::vector<QuadForm> reduced;
        Int b0 = (disc_ % 2 == 0) ? 2 : 1;
        for (Int b = b0; b <= sq_; b += 2) {
            Int m = (disc_ - b * b) / 4;  // = -ac > 0; divisibility is automatic by parity
            for (Int u = 1; u * u <= m; ++u) {
                if (m % u != 0) continue;
                for (Int aa : {Int(u), Int(m / u)}) {
                    Int twoa = 2 * aa;
                    if (!(twoa > sq_ - b && twoa <= sq_ + b)) continue;
                    QuadForm plus{aa, b, -m / aa};
                    QuadForm minus{-aa, b, m / aa};
                    if (is_primitive(plus)) reduced.push_back(plus);
                    if (is_primitive(minus)) reduced.push_back(minus);
                    if (u * u == m) break;  // avoid double insert at the square divisor
                }
            }
        }
        std::sort(reduced.begin(), reduced.end());
        reduced.erase(std::unique(reduced.begin(), reduced.end()), reduced.end());
        // cycle decomposition
        std::map<QuadForm, size_t> seen;
        for (const auto& f : reduced) {
            if (seen.count(f)) continue;
            size_t cls = reps_.size();
            QuadForm g = f;
            std::vector<QuadForm> cycle;
            long guard = 0;
            do {
                cycle.push_back(g);
                seen[g] = cls;
                g = rho_indefinite(g, disc_, sq_);
                detail::check(is_reduced_indefinite(g, sq_), "ClassGroup: rho left the reduced set");
                detail::check(++guard < 100000, "ClassGroup: unbounded cycle");
            } while (!(g == f));
            QuadForm canon = *std::min_element(cycle.begin(), cycle.end());
            reps_.push_back(canon);
        }
        lookup_ = std::move(seen);
    }
};

struct ClassGroupData {
    Int h_plus;                  // narrow class number
    std::vector<Int> invariants; // invariant factors of Cl^+, largest first
    Int squares_order;           // |(Cl^+)^2|
    Int two_torsion_of_squares;  // |(Cl^+)^2[2]|
};

inline ClassGroupData class_group_narrow(const Int& disc) {
    ClassGroup G(disc);
    ClassGroupData out;
    out.h_plus = Int(G.size());
    std::vector<Int> orders;
    for (size_t i = 0; i < G.size(); ++i) orders.push_back(G.order_of(i));
    out.invariants = invariants_from_orders(orders);
    std::set<size_t> squares;
    for (size_t i = 0; i < G.size(); ++i) squares.insert(G.compose(i, i));
    out.squares_order = Int(squares.size());
    Int t2 = 0;
    for (size_t s : squares)
        if (G.compose(s, s) == G.identity()) ++t2;
    out.two_torsion_of_squares = t2;
    return out;
}

}  // namespace pell
