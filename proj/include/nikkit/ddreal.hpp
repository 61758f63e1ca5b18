#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

// Double-double arithmetic (~31 significant digits): an unevaluated sum
// hi + lo with |lo| <= ulp(hi)/2, built on error-free transformations.
// Needed by the contour sampler: the trapezoid estimate of the k-th
// coefficient multiplies sample noise by R^k, which exhausts plain doubles
// near k = 20 on wide circles. Only the operations the sampler needs are
// provided; this is not a general number type.

namespace nikkit::ddx {

struct dd {
    double hi = 0.0;
    double lo = 0.0;
    dd() = default;
    dd(double h) : hi(h) {}
    dd(double h, double l) : hi(h), lo(l) {}
};

inline dd quick_two_sum(double a, double b) {
    const double s = a + b;
    return {s, b - (s - a)};
}

inline dd two_sum(double a, double b) {
    const double s = a + b;
    const double bb = s - a;
    return {s, (a - (s - bb)) + (b - bb)};
}

inline dd two_prod(double a, double b) {
    const double p = a * b;
    return {p, std::fma(a, b, -p)};
}

inline dd add(const dd& a, const dd& b) {
    dd s = two_sum(a.hi, b.hi);
    const dd t = two_sum(a.lo, b.lo);
    dd r = quick_two_sum(s.hi, s.lo + t.hi);
    return quick_two_sum(r.hi, r.lo + t.lo);
}

inline dd neg(const dd& a) { return {-a.hi, -a.lo}; }
inline dd sub(const dd& a, const dd& b) { return add(a, neg(b)); }

inline dd mul(const dd& a, const dd& b) {
    const dd p = two_prod(a.hi, b.hi);
    return quick_two_sum(p.hi, p.lo + (a.hi * b.lo + a.lo * b.hi));
}

inline dd div(const dd& a, const dd& b) {
    const double q1 = a.hi / b.hi;
    dd r = sub(a, mul(b, dd(q1)));
    const double q2 = r.hi / b.hi;
    r = sub(r, mul(b, dd(q2)));
    const double q3 = r.hi / b.hi;
    const dd q = quick_two_sum(q1, q2);
    return add(q, dd(q3));
}

inline dd sqrt(const dd& a) {
    if (a.hi == 0.0 && a.lo == 0.0) return dd(0.0);
    if (a.hi < 0.0) throw std::domain_error("ddx::sqrt: negative argument");
    const double y = std::sqrt(a.hi);
    // one Newton step from the double estimate reaches full dd precision
    const dd r = sub(a, two_prod(y, y));
    return quick_two_sum(y, r.hi / (2.0 * y));
}

// pi to dd precision (hi = nearest double, lo = the remainder)
inline dd pi_dd() { return {3.141592653589793116, 1.2246467991473531772e-16}; }

// Taylor sine/cosine for |x| << 1 (used only for the primitive root angle)
inline dd sin_small(const dd& x) {
    const dd x2 = mul(x, x);
    dd term = x, sum = x;
    for (int k = 1; k <= 14; ++k) {
        term = neg(div(mul(term, x2), dd((2.0 * k) * (2.0 * k + 1.0))));
        sum = add(sum, term);
    }
    return sum;
}

inline dd cos_small(const dd& x) {
    const dd x2 = mul(x, x);
    dd term(1.0), sum(1.0);
    for (int k = 1; k <= 14; ++k) {
        term = neg(div(mul(term, x2), dd((2.0 * k - 1.0) * (2.0 * k))));
        sum = add(sum, term);
    }
    return sum;
}

struct cdd {
    dd re, im;
    cdd() = default;
    cdd(const dd& r, const dd& i = dd(0.0)) : re(r), im(i) {}
    cdd(double r, double i = 0.0) : re(r), im(i) {}
};

inline cdd add(const cdd& a, const cdd& b) { return {add(a.re, b.re), add(a.im, b.im)}; }
inline cdd sub(const cdd& a, const cdd& b) { return {sub(a.re, b.re), sub(a.im, b.im)}; }

inline cdd mul(const cdd& a, const cdd& b) {
    return {sub(mul(a.re, b.re), mul(a.im, b.im)), add(mul(a.re, b.im), mul(a.im, b.re))};
}

inline cdd recip(const cdd& a) {
    const dd den = add(mul(a.re, a.re), mul(a.im, a.im));
    return {div(a.re, den), div(neg(a.im), den)};
}

inline cdd sqrt(const cdd& z) {
    if (z.im.hi == 0.0 && z.im.lo == 0.0) {
        if (z.re.hi >= 0.0) return cdd(sqrt(z.re), dd(0.0));
        return cdd(dd(0.0), sqrt(neg(z.re))); // principal value on the upper edge
    }
    const dd m = sqrt(add(mul(z.re, z.re), mul(z.im, z.im)));
    if (z.re.hi >= 0.0) {
        const dd t = sqrt(mul(add(m, z.re), dd(0.5)));
        return {t, div(mul(z.im, dd(0.5)), t)};
    }
    dd v = sqrt(mul(sub(m, z.re), dd(0.5)));
    if (z.im.hi < 0.0) v = neg(v);
    return {div(mul(z.im, dd(0.5)), v), v};
}

inline cdd pow_int(const cdd& a, int n) {
    if (n < 0) throw std::invalid_argument("ddx::pow_int: negative exponent");
    cdd r(1.0), base = a;
    while (n > 0) {
        if (n & 1) r = mul(r, base);
        base = mul(base, base);
        n >>= 1;
    }
    return r;
}

// the M-th roots of unity, M a power of two, by powers of the primitive root
inline std::vector<cdd> roots_of_unity(int M) {
    const dd x = div(mul(pi_dd(), dd(2.0)), dd(static_cast<double>(M)));
    const cdd w1(cos_small(x), sin_small(x));
    std::vector<cdd> roots(static_cast<std::size_t>(M));
    roots[0] = cdd(1.0);
    for (int m = 1; m < M; ++m) roots[m] = mul(roots[m - 1], w1);
    return roots;
}

} // namespace nikkit::ddx
