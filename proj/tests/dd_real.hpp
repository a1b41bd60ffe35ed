#pragma once

// Minimal double-double arithmetic (Dekker/Knuth error-free transforms),
// used to re-run the distribution DP at ~32 significant digits so that
// 1 - p(+1,+1) stays meaningful for error masses near 1e-14.

#include <cmath>

namespace qpctest {

struct dd {
    double hi = 0.0;
    double lo = 0.0;

    dd() = default;
    dd(int v) : hi(v) {}
    dd(double v) : hi(v) {}
    dd(double h, double l) : hi(h), lo(l) {}

    double value() const { return hi + lo; }
};

inline dd two_sum(double a, double b) {
    const double s = a + b;
    const double bb = s - a;
    return {s, (a - (s - bb)) + (b - bb)};
}

inline dd quick_two_sum(double a, double b) {
    const double s = a + b;
    return {s, b - (s - a)};
}

inline dd two_prod(double a, double b) {
    const double p = a * b;
    return {p, std::fma(a, b, -p)};
}

inline dd operator+(dd a, dd b) {
    dd s = two_sum(a.hi, b.hi);
    dd t = two_sum(a.lo, b.lo);
    s.lo += t.hi;
    s = quick_two_sum(s.hi, s.lo);
    s.lo += t.lo;
    return quick_two_sum(s.hi, s.lo);
}

inline dd operator-(dd a, dd b) { return a + dd(-b.hi, -b.lo); }

inline dd operator*(dd a, dd b) {
    dd p = two_prod(a.hi, b.hi);
    p.lo += a.hi * b.lo + a.lo * b.hi;
    return quick_two_sum(p.hi, p.lo);
}

inline dd& operator+=(dd& a, dd b) {
    a = a + b;
    return a;
}

}  // namespace qpctest
