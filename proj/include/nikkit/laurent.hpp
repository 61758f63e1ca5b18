#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "nikkit/branch.hpp"
#include "nikkit/ddreal.hpp"

// Coefficients of expansions F(z) = sum_k c_k z^{-k} at infinity, by the
// trapezoid rule on a circle:
//   c_k = (1/M) sum_m F(R e^{i th_m}) R^k e^{i k th_m},  th_m = 2 pi m / M.
// Aliasing dies like R^{-M}; what limits accuracy is sample rounding, which
// the k-th coefficient sees amplified by R^k. The generic sampler works in
// doubles (fine for small k or radii close to 1); integer powers of the
// two-factor inverse-square-root function get a compensated double-double
// sampler so that coefficients through k ~ 20 survive even R = 4.

namespace nikkit {

struct circle_contour {
    double radius;
    int sample_count;
};

struct laurent_series {
    std::vector<double> coefficients; // c_0 .. c_K
    double radius_used;
};

namespace detail {

inline void check_contour(const circle_contour& c, int K) {
    if (!(c.radius > 1.0)) throw std::invalid_argument("laurent: radius must exceed 1");
    if (c.sample_count < 8 || (c.sample_count & (c.sample_count - 1)) != 0)
        throw std::invalid_argument("laurent: sample count must be a power of two, at least 8");
    if (K < 0 || 2 * K >= c.sample_count)
        throw std::invalid_argument("laurent: need K < M/2");
}

inline void check_symmetry(std::vector<cplx>& raw, std::vector<double>& out) {
    out.reserve(raw.size());
    for (const cplx& c : raw) {
        if (std::abs(c.imag()) > 1e-12)
            throw std::runtime_error("laurent: coefficients not real; evaluator breaks conjugate symmetry");
        out.push_back(c.real());
    }
}

} // namespace detail

// generic double-precision sampler; evaluator maps cplx -> cplx
template <class F>
laurent_series laurent_at_infinity(F&& eval, const circle_contour& contour, int K) {
    detail::check_contour(contour, K);
    const int M = contour.sample_count;
    const double R = contour.radius;
    const double pi = std::acos(-1.0);

    std::vector<cplx> roots(M), samples(M);
    for (int m = 0; m < M; ++m) {
        const double th = 2.0 * pi * m / M;
        roots[m] = cplx(std::cos(th), std::sin(th));
        samples[m] = eval(R * roots[m]);
    }
    std::vector<cplx> raw(K + 1);
    double rk = 1.0;
    for (int k = 0; k <= K; ++k) {
        cplx acc(0.0, 0.0);
        for (int m = 0; m < M; ++m) acc += samples[m] * roots[(static_cast<long>(k) * m) % M];
        raw[k] = acc * (rk / M);
        rk *= R;
    }
    laurent_series s{{}, R};
    detail::check_symmetry(raw, s.coefficients);
    return s;
}

namespace detail {

// f^j in dd arithmetic for the (-1/2,-1/2) exponent pair:
//   f^j = ((A1-u)(A2-u))^{-j/2}, u = z - sqrt(z-1) sqrt(z+1)
inline ddx::cdd f_power_dd(const system_params& p, int j, const ddx::cdd& z) {
    using namespace ddx;
    const cdd one(1.0);
    const cdd w = mul(sqrt(sub(z, one)), sqrt(add(z, one)));
    const cdd u = sub(z, w);
    const cdd g = mul(sub(cdd(p.A1), u), sub(cdd(p.A2), u));
    cdd den = pow_int(g, j / 2);
    if (j % 2 == 1) den = mul(den, sqrt(g));
    return recip(den);
}

} // namespace detail

namespace detail {

struct dd_series {
    std::vector<ddx::dd> coefficients;
    double radius_used;
};

// Compensated sampler for f^j, j >= 0, proposition exponents. Conjugate
// symmetry (f(conj z) = conj f(z)) folds the sum over the lower half of the
// circle into the upper half, which makes every coefficient exactly real.
inline dd_series laurent_f_power_dd(const system_params& p, int j, const circle_contour& contour,
                                    int K) {
    check_contour(contour, K);
    if (j < 0) throw std::invalid_argument("laurent_f_power: j must be >= 0");
    using namespace ddx;
    const int M = contour.sample_count;
    const int H = M / 2;
    const auto roots = roots_of_unity(M);

    std::vector<cdd> samples(static_cast<std::size_t>(H) + 1);
    for (int m = 0; m <= H; ++m) {
        const cdd z = mul(cdd(contour.radius), roots[static_cast<std::size_t>(m)]);
        samples[static_cast<std::size_t>(m)] = (j == 0) ? cdd(1.0) : f_power_dd(p, j, z);
    }
    dd_series s{std::vector<dd>(static_cast<std::size_t>(K) + 1), contour.radius};
    dd rk(1.0);
    for (int k = 0; k <= K; ++k) {
        const dd& ends = samples[static_cast<std::size_t>(H)].re;
        dd acc = add(samples[0].re, (k % 2 == 0) ? ends : neg(ends));
        for (int m = 1; m < H; ++m) {
            const cdd& w = roots[static_cast<std::size_t>((static_cast<long>(k) * m) % M)];
            const cdd& sm = samples[static_cast<std::size_t>(m)];
            const dd re_part = sub(mul(sm.re, w.re), mul(sm.im, w.im));
            acc = add(acc, mul(dd(2.0), re_part));
        }
        s.coefficients[static_cast<std::size_t>(k)] = mul(acc, div(rk, dd(static_cast<double>(M))));
        rk = mul(rk, dd(contour.radius));
    }
    return s;
}

} // namespace detail

inline laurent_series laurent_f_power(const system_params& p, int j, const circle_contour& contour,
                                      int K) {
    const detail::dd_series s = detail::laurent_f_power_dd(p, j, contour, K);
    laurent_series out{{}, s.radius_used};
    out.coefficients.reserve(s.coefficients.size());
    for (const ddx::dd& c : s.coefficients) out.coefficients.push_back(c.hi + c.lo);
    return out;
}

// series of the constant function 1
inline laurent_series constant_series(int K, double radius = 2.0) {
    laurent_series s{std::vector<double>(static_cast<std::size_t>(K) + 1, 0.0), radius};
    s.coefficients[0] = 1.0;
    return s;
}

} // namespace nikkit
