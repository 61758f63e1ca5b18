#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "nikkit/branch.hpp"
#include "nikkit/cauchy.hpp"
#include "nikkit/laurent.hpp"
#include "nikkit/measures.hpp"
#include "nikkit/params.hpp"
#include "nikkit/quadrature.hpp"

// Exploratory probe of the chain structure for arbitrary factor exponents.
//
// With C the value of f at infinity:
//   level 1: d_k(x) := -(1/pi) Im [(f^k - C f^{k-1})+](x) should be >= 0 on
//            (-1,1) for k = 1..n if each power gap is a Markov function.
//   level 2: r_k := (R_{k+1} - C R_k)/(R_k - C R_{k-1}) for k = 1..n-1 is
//            sheet-symmetric in numerator and denominator, hence
//            single-valued off (a1,a2); its jump density across (a1,a2)
//            should be sign-definite, and the Cauchy transform of the
//            tabulated jump plus the value at infinity should reconstruct
//            r_k back on (-1,1) (no hidden singularities in between).
//
// Verdicts are three-valued: a conjecture explorer must not overstate, so
// near-zero values are reported as inconclusive rather than rounded to a
// sign, and denominator samples below a floor are excluded with a note.
// R_0 := 0 and R_1 := 1 (empty product), so r_1 = R_2 - C exactly.

namespace nikkit {

enum class probe_verdict { pass, fail, inconclusive };

inline const char* to_string(probe_verdict v) {
    switch (v) {
    case probe_verdict::pass: return "pass";
    case probe_verdict::fail: return "fail";
    case probe_verdict::inconclusive: return "inconclusive";
    }
    throw std::invalid_argument("to_string: unknown probe verdict");
}

struct probe_grids {
    int delta1_count = 200;          // midpoint grid on (-1,1)
    int delta2_nodes = 200;          // jump samples = quadrature nodes on (a1,a2)
    double near_zero = 1e-12;        // |value| below this counts as neither sign
    double denominator_floor = 1e-8; // exclude r_k samples with |denominator| below
};

struct level1_result {
    int k = 0;
    probe_verdict verdict = probe_verdict::inconclusive;
    int violation_count = 0;
    double worst_value = std::numeric_limits<double>::infinity(); // min of d_k
    double worst_location = 0.0;
    int near_zero_count = 0;
};

struct level2_result {
    int k = 0;
    probe_verdict sign_verdict = probe_verdict::inconclusive;
    int jump_sign = 0; // +1 / -1 / 0 when undetermined
    int sign_violation_count = 0;
    double worst_jump_value = 0.0; // most extreme minority-signed sample
    double worst_jump_location = 0.0;
    double constant_at_infinity = 0.0;
    double reconstruction_residual = 0.0;
    probe_verdict reconstruction_verdict = probe_verdict::inconclusive;
    int excluded_count = 0;
    std::string note;
};

struct probe_report {
    factor_exponents exponents{0.0, 0.0};
    int n = 0;
    int level1_violation_count = 0;
    double level1_worst_value = std::numeric_limits<double>::infinity();
    double level1_worst_location = 0.0;
    int level1_worst_k = 0;
    std::vector<level1_result> level1;
    std::vector<level2_result> level2;

    bool all_pass() const {
        for (const auto& r : level1)
            if (r.verdict != probe_verdict::pass) return false;
        for (const auto& r : level2)
            if (r.sign_verdict != probe_verdict::pass ||
                r.reconstruction_verdict != probe_verdict::pass)
                return false;
        return true;
    }
};

namespace detail {

inline cplx rk_value(const system_params& p, const factor_exponents& e, int k, const cplx& z,
                     sheet_side side, double floor, bool& excluded) {
    const cplx num = ratio_R(p, e, k + 1, z, side) - p.value_at_infinity(e) * ratio_R(p, e, k, z, side);
    const cplx den = ratio_R(p, e, k, z, side) - p.value_at_infinity(e) * ratio_R(p, e, k - 1, z, side);
    if (std::abs(den) < floor) {
        excluded = true;
        return cplx(0.0, 0.0);
    }
    excluded = false;
    return num / den;
}

} // namespace detail

inline probe_report nikishin_probe(const system_params& p, const factor_exponents& e, int n,
                                   const probe_grids& grids = {}) {
    if (n < 1 || n > 32) throw std::invalid_argument("nikishin_probe: n must be in [1,32]");
    if (grids.delta1_count < 8 || grids.delta2_nodes < 8)
        throw std::invalid_argument("nikishin_probe: grids need at least 8 points");
    if (!(grids.near_zero >= 0.0) || !(grids.denominator_floor > 0.0))
        throw std::invalid_argument("nikishin_probe: invalid thresholds");

    const double pi = std::acos(-1.0);
    const double C = p.value_at_infinity(e);

    probe_report rep;
    rep.exponents = e;
    rep.n = n;

    // ---- level 1: boundary positivity of the power gaps on (-1,1) ----
    std::vector<double> xs(static_cast<std::size_t>(grids.delta1_count));
    for (int i = 0; i < grids.delta1_count; ++i)
        xs[static_cast<std::size_t>(i)] = -1.0 + (i + 0.5) * 2.0 / grids.delta1_count;

    rep.level1.resize(static_cast<std::size_t>(n));
    for (int k = 1; k <= n; ++k) rep.level1[static_cast<std::size_t>(k - 1)].k = k;
    for (const double x : xs) {
        const cplx fp = boundary_f(p, e, x, sheet_side::above);
        cplx pw(1.0, 0.0); // f+^{k-1}
        for (int k = 1; k <= n; ++k) {
            const double dk = -std::imag(pw * (fp - C)) / pi;
            auto& lr = rep.level1[static_cast<std::size_t>(k - 1)];
            if (dk < lr.worst_value) {
                lr.worst_value = dk;
                lr.worst_location = x;
            }
            if (std::abs(dk) <= grids.near_zero) ++lr.near_zero_count;
            else if (dk < 0.0) ++lr.violation_count;
            pw *= fp;
        }
    }
    for (auto& lr : rep.level1) {
        if (lr.violation_count > 0) lr.verdict = probe_verdict::fail;
        else if (lr.near_zero_count > 0) lr.verdict = probe_verdict::inconclusive;
        else lr.verdict = probe_verdict::pass;
        rep.level1_violation_count += lr.violation_count;
        if (lr.worst_value < rep.level1_worst_value) {
            rep.level1_worst_value = lr.worst_value;
            rep.level1_worst_location = lr.worst_location;
            rep.level1_worst_k = lr.k;
        }
    }

    // ---- level 2: jump sign and reconstruction for the ratio functions ----
    const interval d2{p.a1, p.a2};
    const quadrature_rule rule = build_rule(d2, exponent_profile{-0.5, -0.5}, grids.delta2_nodes);
    const circle_contour contour{std::max(2.5, p.a2 + 1.0), 64};

    for (int k = 1; k <= n - 1; ++k) {
        level2_result lr;
        lr.k = k;
        std::ostringstream note;

        // jump density from the two side limits across (a1,a2)
        std::vector<double> jump(rule.nodes.size(), 0.0);
        std::vector<bool> excluded(rule.nodes.size(), false);
        int pos = 0, neg = 0, near = 0;
        double worst_minority = 0.0, worst_loc = 0.0;
        for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
            const cplx z(rule.nodes[j], 0.0);
            bool ex_a = false, ex_b = false;
            const cplx ra = detail::rk_value(p, e, k, z, sheet_side::above, grids.denominator_floor, ex_a);
            const cplx rb = detail::rk_value(p, e, k, z, sheet_side::below, grids.denominator_floor, ex_b);
            if (ex_a || ex_b) {
                excluded[j] = true;
                ++lr.excluded_count;
                note << "excluded jump sample at t=" << rule.nodes[j]
                     << " (|denominator| < floor); ";
                continue;
            }
            // r(z) = r(inf) + int J(t)/(z-t) dt gives r+ - r- = -2 pi i J
            jump[j] = -std::imag(ra - rb) / (2.0 * pi);
            if (jump[j] > grids.near_zero) ++pos;
            else if (jump[j] < -grids.near_zero) ++neg;
            else ++near;
        }
        const int majority = (pos >= neg) ? 1 : -1;
        const int minority_count = (majority == 1) ? neg : pos;
        for (std::size_t j = 0; j < jump.size(); ++j) {
            if (excluded[j]) continue;
            const double v = jump[j];
            const bool is_minority = (majority == 1) ? (v < -grids.near_zero) : (v > grids.near_zero);
            if (is_minority && std::abs(v) > std::abs(worst_minority)) {
                worst_minority = v;
                worst_loc = rule.nodes[j];
            }
        }
        lr.sign_violation_count = minority_count;
        lr.worst_jump_value = worst_minority;
        lr.worst_jump_location = worst_loc;
        if (pos == 0 && neg == 0) {
            lr.jump_sign = 0;
            lr.sign_verdict = probe_verdict::inconclusive;
        } else if (minority_count > 0) {
            lr.jump_sign = 0;
            lr.sign_verdict = probe_verdict::fail;
        } else if (near > 0) {
            lr.jump_sign = majority;
            lr.sign_verdict = probe_verdict::inconclusive;
        } else {
            lr.jump_sign = majority;
            lr.sign_verdict = probe_verdict::pass;
        }

        // value at infinity as the ratio of the leading tail coefficients
        const auto num_series = laurent_at_infinity(
            [&](const cplx& z) {
                return ratio_R(p, e, k + 1, z, sheet_side::above) -
                       C * ratio_R(p, e, k, z, sheet_side::above);
            },
            contour, 6);
        const auto den_series = laurent_at_infinity(
            [&](const cplx& z) {
                return ratio_R(p, e, k, z, sheet_side::above) -
                       C * ratio_R(p, e, k - 1, z, sheet_side::above);
            },
            contour, 6);
        double den_scale = 0.0;
        for (const double cfe : den_series.coefficients) den_scale = std::max(den_scale, std::abs(cfe));
        int lead = -1;
        for (std::size_t j = 0; j < den_series.coefficients.size(); ++j) {
            if (std::abs(den_series.coefficients[j]) > 1e-10 * den_scale) {
                lead = static_cast<int>(j);
                break;
            }
        }
        double num_scale = 0.0;
        for (const double cfe : num_series.coefficients) num_scale = std::max(num_scale, std::abs(cfe));
        if (lead < 0) {
            note << "degenerate denominator tail; ";
            lr.constant_at_infinity = 0.0;
        } else {
            for (int j = 0; j < lead; ++j) {
                if (std::abs(num_series.coefficients[static_cast<std::size_t>(j)]) > 1e-10 * num_scale)
                    note << "numerator tail leads the denominator (order " << j << "); ";
            }
            lr.constant_at_infinity = num_series.coefficients[static_cast<std::size_t>(lead)] /
                                      den_series.coefficients[static_cast<std::size_t>(lead)];
        }

        // reconstruction: tabulate the stripped jump and compare the Cauchy
        // transform plus the constant against the glued values on (-1,1)
        std::vector<double> stripped(jump.size());
        for (std::size_t j = 0; j < jump.size(); ++j)
            stripped[j] = jump[j] * std::sqrt((rule.nodes[j] - p.a1) * (p.a2 - rule.nodes[j]));
        const measure_spec tab = make_tabulated(d2, stripped);
        const auto rec = reconstruct_from_jump(tab, lr.constant_at_infinity, xs, rule);
        double worst_rec = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            bool ex = false;
            const cplx direct =
                detail::rk_value(p, e, k, cplx(xs[i], 0.0), sheet_side::above, grids.denominator_floor, ex);
            if (ex) {
                ++lr.excluded_count;
                note << "excluded reconstruction point at x=" << xs[i]
                     << " (|denominator| < floor); ";
                continue;
            }
            worst_rec = std::max(worst_rec, std::abs(std::real(direct) - rec[i]));
        }
        lr.reconstruction_residual = worst_rec;
        if (worst_rec <= 1e-6) lr.reconstruction_verdict = probe_verdict::pass;
        else if (worst_rec <= 1e-2) lr.reconstruction_verdict = probe_verdict::inconclusive;
        else lr.reconstruction_verdict = probe_verdict::fail;

        lr.note = note.str();
        rep.level2.push_back(std::move(lr));
    }
    return rep;
}

} // namespace nikkit
