#pragma once

// Naive and canonical heights on Pell conics: the doubling-limit definition
// in exact rational arithmetic, the closed forms, and the regulator.

#include "pell/conic.hpp"

#include <cmath>

namespace pell {

// log of a positive big integer, safe far beyond double range
inline double log_big(const Int& v) {
    detail::require(v > 0, "log_big: argument must be positive");
    if (v < (Int(1) << 900)) return std::log(v.convert_to<double>());
    long shift = static_cast<long>(msb(v)) - 64;
    Int m = v >> shift;
    return std::log(m.convert_to<double>()) + double(shift) * std::log(2.0);
}

// log((|r| + |s| sqrt(D))/2) for D > 0, robust for huge coordinates
inline double log_quad(const Int& r, const Int& s, const Int& disc) {
    detail::require(disc > 0, "log_quad: needs a positive discriminant");
    Int ra = abs(r), sa = abs(s);
    detail::require(ra != 0 || sa != 0, "log_quad: zero element");
    const double log2v = std::log(2.0);
    if (ra == 0) return 0.5 * log_big(sa * sa * disc) - log2v;
    if (sa == 0) return log_big(ra) - log2v;
    double lr = log_big(ra);
    double ls = 0.5 * log_big(sa * sa * disc);
    double hi = std::max(lr, ls), lo = std::min(lr, ls);
    return hi + std::log1p(std::exp(lo - hi)) - log2v;
}

// H(m/n) = log max(|m|, |n|) for a rational in lowest terms
inline double naive_height(const Rat& q) {
    if (q == 0) return 0.0;
    Int m = abs(numerator(q));
    Int n = abs(denominator(q));
    return log_big(m > n ? m : n);
}

inline double naive_height(const QPoint& P) { return naive_height(P.x); }

// common-denominator normal form P = (r/n, s/n), gcd(r, n) = gcd(s, n) = 1
struct NormalizedPoint {
    Int r, s, n;
};

inline NormalizedPoint normalize_point(const Int& disc, const QPoint& P) {
    RationalField F;
    detail::require(on_curve(F, disc, P), "normalize_point: point not on the conic");
    Int nx = denominator(P.x), ny = denominator(P.y);
    Int n = lcm(nx, ny);
    Int r = numerator(P.x) * (n / nx);
    Int s = numerator(P.y) * (n / ny);
    // equal denominators are forced by the curve equation
    detail::check(gcd(r, n) == 1 && gcd(s, n) == 1,
                  "normalize_point: coordinates do not share a denominator");
    return {r, s, n};
}

// hat h(P) = log((|r| + |s| sqrt(D))/2) for D > 0, log n for D < 0
inline double canonical_height_closed(const Int& disc, const QPoint& P) {
    auto [r, s, n] = normalize_point(disc, P);
    if (disc > 0) return log_quad(r, s, disc);
    return log_big(n);
}

inline double canonical_height_closed(const Int& disc, const ZPoint& P) {
    return canonical_height_closed(disc, QPoint{Rat(P.x), Rat(P.y)});
}

// hat h(P) = lim H(2^k P)/2^k, evaluated at a fixed k with exact doubling
inline double canonical_height_limit(const Int& disc, QPoint P, int k) {
    detail::require(k >= 0 && k <= 12, "canonical_height_limit: k must be in [0, 12]");
    RationalField F;
    detail::require(on_curve(F, disc, P), "canonical_height_limit: point not on the conic");
    for (int i = 0; i < k; ++i) P = add(F, disc, P, P);
    return naive_height(P) / std::ldexp(1.0, k);
}

// regulator of the conic: hat h of the fundamental point (x1, y1)
inline double regulator_conic(const Int& disc) {
    auto fund = pell4_fundamental(disc);
    return log_quad(fund.x1, fund.y1, disc);
}

// regulator of the field: log of the fundamental unit, which is the -4
// unit when it exists and the +4 unit otherwise
inline double regulator_field(const Int& disc, const Fundamental4& fund) {
    if (fund.minus4) return log_quad(fund.minus4->first, fund.minus4->second, disc);
    return log_quad(fund.x1, fund.y1, disc);
}

inline double regulator_field(const Int& disc) {
    return regulator_field(disc, pell4_fundamental(disc));
}

}  // namespace pell
