#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "nikkit/laurent.hpp"

// Type-I simultaneous rational approximation: given expansions of
// (F_0, ..., F_n) at infinity and degree bounds (m_0, ..., m_n), find
// polynomials q_j, deg q_j <= m_j, not all zero, such that
//   r(z) = sum_j q_j(z) F_j(z) = O(z^{mbar - M + 1}),  M = sum_j (m_j + 1).
// Vanishing of the top M-1 powers is a homogeneous (M-1) x M linear system;
// its kernel comes from the least singular vector. Normalization: unit
// 2-norm coefficient vector, first significant leading coefficient positive.
//
// Precision note: the remainder near |z| = 100 is a ~1e-16-deep cancellation
// between terms of size |z|^mbar, so measuring its decay honestly needs the
// whole chain - series coefficients, kernel solve, evaluation - carried in
// compensated (double-double) arithmetic. type_one_hp_f_powers does that for
// the systems (1, f, ..., f^n); plain type_one_hp works in doubles, which is
// plenty for the coefficients themselves but not for far-field decay fits.

namespace nikkit {

struct type_one_result {
    std::vector<int> multi_index;
    std::vector<std::vector<double>> polynomial_coefficients; // ascending degree per function
    int target_order;           // exponent of the first possibly-surviving power: mbar - M + 1
    double achieved_order;      // NaN until a remainder fit fills it in
    double condition_indicator; // smallest/largest singular value of the system
    bool degenerate;            // kernel dimension > 1 at tolerance 1e-12
};

struct order_fit {
    double slope;
    double fit_residual;    // rms residual of the log-log fit
    bool below_noise_floor; // remainder < 1e-15 at every sample
};

namespace detail {

inline void check_hp_inputs(std::size_t n_series, const std::vector<int>& multi_index, int& M,
                            int& mbar) {
    if (n_series < 2 || multi_index.size() != n_series)
        throw std::invalid_argument("type_one_hp: need series and degree bounds for (F_0..F_n), n >= 1");
    M = 0;
    mbar = 0;
    for (const int m : multi_index) {
        if (m < 0) throw std::invalid_argument("type_one_hp: negative degree bound");
        M += m + 1;
        mbar = std::max(mbar, m);
    }
}

} // namespace detail

inline type_one_result type_one_hp(const std::vector<laurent_series>& series,
                                   const std::vector<int>& multi_index) {
    int M = 0, mbar = 0;
    detail::check_hp_inputs(series.size(), multi_index, M, mbar);
    std::size_t k_avail = std::numeric_limits<std::size_t>::max();
    for (const auto& s : series) {
        k_avail = std::min(k_avail, s.coefficients.size());
        const bool all_zero = std::all_of(s.coefficients.begin(), s.coefficients.end(),
                                          [](double c) { return c == 0.0; });
        if (all_zero) throw std::invalid_argument("type_one_hp: a series is identically zero");
    }
    if (static_cast<int>(k_avail) < M + mbar + 5)
        throw std::invalid_argument("type_one_hp: not enough coefficients (need K >= M + max m + 5)");

    // rows force the powers p = mbar, mbar-1, ..., mbar-M+2 to vanish
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(M - 1, M);
    for (int r = 0; r < M - 1; ++r) {
        const int p = mbar - r;
        int col = 0;
        for (std::size_t j = 0; j < series.size(); ++j) {
            for (int i = 0; i <= multi_index[j]; ++i, ++col) {
                const int idx = i - p;
                if (idx >= 0) A(r, col) = series[j].coefficients[static_cast<std::size_t>(idx)];
            }
        }
    }

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeFullV);
    Eigen::VectorXd q = svd.matrixV().col(M - 1);
    const auto& sv = svd.singularValues();
    const double cond = (sv(0) > 0.0) ? sv(M - 2) / sv(0) : 0.0;

    // sign convention: first significant leading coefficient positive
    double pivot = 0.0;
    int col0 = 0;
    for (std::size_t j = 0; j < series.size() && pivot == 0.0; ++j) {
        const double lead = q(col0 + multi_index[j]);
        if (std::abs(lead) > 1e-12) pivot = lead;
        col0 += multi_index[j] + 1;
    }
    if (pivot == 0.0)
        for (int i = 0; i < M && pivot == 0.0; ++i)
            if (std::abs(q(i)) > 1e-12) pivot = q(i);
    if (pivot < 0.0) q = -q;

    type_one_result res{multi_index,
                        {},
                        mbar - M + 1,
                        std::numeric_limits<double>::quiet_NaN(),
                        cond,
                        cond < 1e-12};
    int col = 0;
    for (std::size_t j = 0; j < series.size(); ++j) {
        std::vector<double> cj(static_cast<std::size_t>(multi_index[j]) + 1);
        for (int i = 0; i <= multi_index[j]; ++i, ++col) cj[static_cast<std::size_t>(i)] = q(col);
        res.polynomial_coefficients.push_back(std::move(cj));
    }
    return res;
}

inline cplx horner(const std::vector<double>& coeffs, const cplx& z) {
    cplx acc(0.0, 0.0);
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * z + *it;
    return acc;
}

// remainder r(z) = sum_j q_j(z) F_j(z); f_pow maps (j, z) -> F_j(z)
template <class FPow>
cplx hp_remainder(const type_one_result& res, FPow&& f_pow, const cplx& z) {
    cplx acc(0.0, 0.0);
    for (std::size_t j = 0; j < res.polynomial_coefficients.size(); ++j)
        acc += horner(res.polynomial_coefficients[j], z) * f_pow(static_cast<int>(j), z);
    return acc;
}

namespace detail {

inline order_fit fit_order(const std::vector<double>& magnitudes, const std::vector<cplx>& samples,
                           double noise_floor = 1e-15) {
    if (samples.size() < 2 || magnitudes.size() != samples.size())
        throw std::invalid_argument("remainder_order: need at least 2 samples");
    bool any_above = false;
    std::vector<double> xs(samples.size()), ys(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (magnitudes[i] > noise_floor) any_above = true;
        xs[i] = std::log(std::abs(samples[i]));
        ys[i] = std::log(std::max(magnitudes[i], 1e-300));
    }
    if (!any_above) return {0.0, 0.0, true};
    const double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double intercept = (sy - slope * sx) / n;
    double ss = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double e = ys[i] - (intercept + slope * xs[i]);
        ss += e * e;
    }
    return {slope, std::sqrt(ss / n), false};
}

} // namespace detail

// least-squares slope of log|r| against log|z|
template <class FPow>
order_fit remainder_order(const type_one_result& res, FPow&& f_pow, const std::vector<cplx>& samples) {
    std::vector<double> mags;
    mags.reserve(samples.size());
    for (const cplx& z : samples) mags.push_back(std::abs(hp_remainder(res, f_pow, z)));
    return detail::fit_order(mags, samples);
}

// log-spaced sample points |z| in [10, 100], held off the real axis
inline std::vector<cplx> make_order_samples(int count = 24) {
    if (count < 2) throw std::invalid_argument("make_order_samples: count >= 2");
    std::vector<cplx> out;
    const cplx dir = std::polar(1.0, 0.9);
    for (int i = 0; i < count; ++i) {
        const double r = 10.0 * std::pow(10.0, static_cast<double>(i) / (count - 1));
        out.push_back(r * dir);
    }
    return out;
}

// classical single-function specialization on the pair (1, F)
inline type_one_result pade_single(const laurent_series& f_series, std::pair<int, int> m) {
    const int K = static_cast<int>(f_series.coefficients.size()) - 1;
    return type_one_hp({constant_series(K, f_series.radius_used), f_series}, {m.first, m.second});
}

// roots via the companion matrix, after trimming negligible leading coefficients
inline std::vector<cplx> polynomial_roots(const std::vector<double>& coeffs) {
    double scale = 0.0;
    for (double c : coeffs) scale = std::max(scale, std::abs(c));
    if (scale == 0.0) return {};
    int deg = static_cast<int>(coeffs.size()) - 1;
    while (deg > 0 && std::abs(coeffs[static_cast<std::size_t>(deg)]) <= 1e-12 * scale) --deg;
    if (deg == 0) return {};
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(deg, deg);
    for (int i = 1; i < deg; ++i) C(i, i - 1) = 1.0;
    for (int i = 0; i < deg; ++i)
        C(i, deg - 1) = -coeffs[static_cast<std::size_t>(i)] / coeffs[static_cast<std::size_t>(deg)];
    Eigen::EigenSolver<Eigen::MatrixXd> es(C);
    std::vector<cplx> roots;
    for (int i = 0; i < deg; ++i) roots.push_back(es.eigenvalues()(i));
    return roots;
}

// ---- compensated pipeline for the systems (1, f, ..., f^n) ----

namespace detail {

// exact kernel of the (M-1) x M coefficient system, Gaussian elimination in dd
inline std::vector<ddx::dd> hp_kernel_dd(const std::vector<dd_series>& series,
                                         const std::vector<int>& multi_index, int M, int mbar) {
    using ddx::dd;
    const int rows = M - 1;
    std::vector<std::vector<dd>> A(static_cast<std::size_t>(rows),
                                   std::vector<dd>(static_cast<std::size_t>(M)));
    for (int r = 0; r < rows; ++r) {
        const int p = mbar - r;
        int col = 0;
        for (std::size_t j = 0; j < series.size(); ++j)
            for (int i = 0; i <= multi_index[j]; ++i, ++col) {
                const int idx = i - p;
                if (idx >= 0)
                    A[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)] =
                        series[j].coefficients[static_cast<std::size_t>(idx)];
            }
    }

    std::vector<int> pivot_col;
    std::vector<bool> used(static_cast<std::size_t>(M), false);
    int r = 0;
    for (int c = 0; c < M && r < rows; ++c) {
        int best = -1;
        double best_mag = 0.0;
        for (int rr = r; rr < rows; ++rr) {
            const double mag = std::abs(A[static_cast<std::size_t>(rr)][static_cast<std::size_t>(c)].hi);
            if (mag > best_mag) {
                best_mag = mag;
                best = rr;
            }
        }
        if (best < 0 || best_mag < 1e-300) continue; // structurally free column
        std::swap(A[static_cast<std::size_t>(r)], A[static_cast<std::size_t>(best)]);
        for (int rr = r + 1; rr < rows; ++rr) {
            const dd factor = ddx::div(A[static_cast<std::size_t>(rr)][static_cast<std::size_t>(c)],
                                       A[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)]);
            if (factor.hi == 0.0 && factor.lo == 0.0) continue;
            for (int cc = c; cc < M; ++cc)
                A[static_cast<std::size_t>(rr)][static_cast<std::size_t>(cc)] =
                    ddx::sub(A[static_cast<std::size_t>(rr)][static_cast<std::size_t>(cc)],
                             ddx::mul(factor, A[static_cast<std::size_t>(r)][static_cast<std::size_t>(cc)]));
        }
        pivot_col.push_back(c);
        used[static_cast<std::size_t>(c)] = true;
        ++r;
    }

    int cf = -1;
    for (int c = M - 1; c >= 0 && cf < 0; --c)
        if (!used[static_cast<std::size_t>(c)]) cf = c;
    std::vector<dd> x(static_cast<std::size_t>(M), dd(0.0));
    x[static_cast<std::size_t>(cf)] = dd(1.0);
    for (int pr = static_cast<int>(pivot_col.size()) - 1; pr >= 0; --pr) {
        const int pc = pivot_col[static_cast<std::size_t>(pr)];
        dd s(0.0);
        for (int cc = pc + 1; cc < M; ++cc) {
            const dd& xc = x[static_cast<std::size_t>(cc)];
            if (xc.hi == 0.0 && xc.lo == 0.0) continue;
            s = ddx::add(s, ddx::mul(A[static_cast<std::size_t>(pr)][static_cast<std::size_t>(cc)], xc));
        }
        x[static_cast<std::size_t>(pc)] =
            ddx::neg(ddx::div(s, A[static_cast<std::size_t>(pr)][static_cast<std::size_t>(pc)]));
    }
    return x;
}

} // namespace detail

struct f_power_hp {
    type_one_result result;
    std::vector<std::vector<ddx::dd>> q_dd; // the same polynomials, full precision
    system_params params;
    // Laurent tail of the remainder: coefficients of z^{-k} for
    // k = tail_start, tail_start+1, ... (tail_start = -target_order).
    // For well-conditioned systems these are O(1); near-degenerate systems
    // can push them many orders below the coefficient scale, far under
    // what direct evaluation in any fixed precision resolves at |z| ~ 100.
    std::vector<ddx::dd> remainder_tail;
    int tail_start = 0;
};

inline f_power_hp type_one_hp_f_powers(const system_params& p, const std::vector<int>& multi_index,
                                       const circle_contour& contour = circle_contour{2.0, 512},
                                       int K = 60) {
    int M = 0, mbar = 0;
    detail::check_hp_inputs(multi_index.size(), multi_index, M, mbar);

    std::vector<detail::dd_series> sdd;
    std::vector<laurent_series> sdbl;
    for (std::size_t j = 0; j < multi_index.size(); ++j) {
        sdd.push_back(detail::laurent_f_power_dd(p, static_cast<int>(j), contour, K));
        laurent_series rounded{{}, sdd.back().radius_used};
        for (const ddx::dd& c : sdd.back().coefficients) rounded.coefficients.push_back(c.hi + c.lo);
        sdbl.push_back(std::move(rounded));
    }

    f_power_hp out{type_one_hp(sdbl, multi_index), {}, p};

    std::vector<ddx::dd> q = detail::hp_kernel_dd(sdd, multi_index, M, mbar);
    double norm2 = 0.0;
    for (const ddx::dd& v : q) norm2 += (v.hi + v.lo) * (v.hi + v.lo);
    const ddx::dd norm = ddx::sqrt(ddx::dd(norm2));
    for (ddx::dd& v : q) v = ddx::div(v, norm);

    double pivot = 0.0;
    int col0 = 0;
    for (std::size_t j = 0; j < multi_index.size() && pivot == 0.0; ++j) {
        const double lead = q[static_cast<std::size_t>(col0 + multi_index[j])].hi;
        if (std::abs(lead) > 1e-12) pivot = lead;
        col0 += multi_index[j] + 1;
    }
    if (pivot == 0.0)
        for (const ddx::dd& v : q)
            if (pivot == 0.0 && std::abs(v.hi) > 1e-12) pivot = v.hi;
    if (pivot < 0.0)
        for (ddx::dd& v : q) v = ddx::neg(v);

    // make the double view identical to the rounded compensated solution
    int col = 0;
    for (std::size_t j = 0; j < multi_index.size(); ++j) {
        std::vector<ddx::dd> block;
        for (int i = 0; i <= multi_index[j]; ++i, ++col) {
            block.push_back(q[static_cast<std::size_t>(col)]);
            out.result.polynomial_coefficients[j][static_cast<std::size_t>(i)] =
                q[static_cast<std::size_t>(col)].hi + q[static_cast<std::size_t>(col)].lo;
        }
        out.q_dd.push_back(std::move(block));
    }

    // surviving Laurent coefficients of the remainder, in full precision
    out.tail_start = M - 1 - mbar;
    for (int k = out.tail_start; k <= K - mbar; ++k) {
        ddx::dd acc(0.0);
        for (std::size_t j = 0; j < multi_index.size(); ++j)
            for (int i = 0; i <= multi_index[j]; ++i)
                acc = ddx::add(acc, ddx::mul(out.q_dd[j][static_cast<std::size_t>(i)],
                                             sdd[j].coefficients[static_cast<std::size_t>(i + k)]));
        out.remainder_tail.push_back(acc);
    }
    return out;
}

// remainder of the compensated system, evaluated without precision loss
inline cplx hp_remainder_value(const f_power_hp& hp, const cplx& z) {
    using namespace ddx;
    const cdd zd(z.real(), z.imag());
    const cdd f1 = nikkit::detail::f_power_dd(hp.params, 1, zd);
    cdd acc(0.0), fpow(1.0);
    for (const auto& block : hp.q_dd) {
        cdd h(0.0);
        for (auto it = block.rbegin(); it != block.rend(); ++it) h = add(mul(h, zd), cdd(*it));
        acc = add(acc, mul(h, fpow));
        fpow = mul(fpow, f1);
    }
    return {acc.re.hi, acc.im.hi};
}

// the same remainder through its Laurent tail: every term scales with the
// signal, so the relative error stays ~1e-25 no matter how deep the
// cancellation runs (direct evaluation bottoms out near |terms| * 1e-32)
inline cplx hp_remainder_tail_value(const f_power_hp& hp, const cplx& z) {
    using namespace ddx;
    const cdd zinv = recip(cdd(z.real(), z.imag()));
    cdd acc(0.0);
    for (auto it = hp.remainder_tail.rbegin(); it != hp.remainder_tail.rend(); ++it)
        acc = add(mul(acc, zinv), cdd(*it));
    acc = mul(acc, pow_int(zinv, hp.tail_start));
    return {acc.re.hi, acc.im.hi};
}

inline order_fit remainder_order(const f_power_hp& hp, const std::vector<cplx>& samples) {
    std::vector<double> mags;
    mags.reserve(samples.size());
    for (const cplx& z : samples) mags.push_back(std::abs(hp_remainder_tail_value(hp, z)));
    // tail evaluation has no fixed noise floor; flag only an identically
    // vanishing remainder
    return detail::fit_order(mags, samples, 1e-250);
}

} // namespace nikkit
