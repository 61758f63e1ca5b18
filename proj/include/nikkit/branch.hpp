#pragma once

#include <complex>
#include <stdexcept>

#include "nikkit/params.hpp"

// Branch-correct evaluation of the inverse-Zhukovskii map, the two-factor
// product function f, its boundary values and jumps on [-1,1], the second
// sheet across [a1,a2], and the symmetric power sums R_k of the two sheets.
//
// Branch realization used throughout: (z^2-1)^{1/2} is the product of the
// principal roots of (z-1) and (z+1). Their cuts cancel on (-inf,-1], so the
// effective cut is exactly [-1,1] and w(z)/z -> 1 at infinity.

namespace nikkit {

using cplx = std::complex<double>;

namespace detail {

inline bool on_open_unit_cut(const cplx& z) {
    return z.imag() == 0.0 && z.real() > -1.0 && z.real() < 1.0;
}

inline bool on_closed_unit_cut(const cplx& z) {
    return z.imag() == 0.0 && z.real() >= -1.0 && z.real() <= 1.0;
}

} // namespace detail

// w(z) with w^2 = z^2 - 1, w/z -> 1 at infinity, holomorphic off [-1,1].
inline cplx sqrt_joukowski(const cplx& z) {
    if (detail::on_open_unit_cut(z))
        throw std::domain_error("sqrt_joukowski: z on the open cut (-1,1); use a boundary operation");
    return std::sqrt(z - 1.0) * std::sqrt(z + 1.0);
}

// phi(z) = z + (z^2-1)^{1/2}, |phi| > 1 off the cut.
inline cplx phi(const cplx& z) { return z + sqrt_joukowski(z); }

// 1/phi(z) = z - (z^2-1)^{1/2}, |phi_recip| < 1 off the cut.
inline cplx phi_recip(const cplx& z) { return z - sqrt_joukowski(z); }

// f(z) = (A1 - 1/phi)^{alpha1} (A2 - 1/phi)^{alpha2}, per-factor principal
// powers. Each factor has positive real part (|1/phi| < 1 < A_j), so the
// principal powers are single-valued on the whole domain.
inline cplx eval_f(const system_params& p, const factor_exponents& e, const cplx& z) {
    if (detail::on_closed_unit_cut(z))
        throw std::domain_error("eval_f: z on the cut [-1,1]; use boundary_f");
    const cplx u = phi_recip(z);
    return std::pow(p.A1 - u, e.alpha1) * std::pow(p.A2 - u, e.alpha2);
}

// One-sided boundary value on the open cut: the upper limit replaces 1/phi
// by x - i*sqrt(1-x^2), the lower one by its conjugate.
inline cplx boundary_f(const system_params& p, const factor_exponents& e, double x, sheet_side side) {
    if (!(x > -1.0 && x < 1.0))
        throw std::domain_error("boundary_f: x must lie strictly inside (-1,1)");
    const double s = std::sqrt((1.0 - x) * (1.0 + x));
    const cplx u = (side == sheet_side::above) ? cplx(x, -s) : cplx(x, s);
    return std::pow(p.A1 - u, e.alpha1) * std::pow(p.A2 - u, e.alpha2);
}

// h_j(x) = (A_j-(x+i sqrt(1-x^2)))^{1/2} + (A_j-(x-i sqrt(1-x^2)))^{1/2},
// real and strictly positive on the closed interval.
inline double eval_h(const system_params& p, int j, double x) {
    if (j != 1 && j != 2) throw std::invalid_argument("eval_h: j must be 1 or 2");
    if (!(x >= -1.0 && x <= 1.0)) throw std::domain_error("eval_h: x outside [-1,1]");
    const double A = (j == 1) ? p.A1 : p.A2;
    const double s = std::sqrt((1.0 - x) * (1.0 + x));
    return 2.0 * std::real(std::sqrt(cplx(A - x, s)));
}

// Jump f^+ - f^- across the open cut; purely imaginary for real parameters.
inline cplx jump_f(const system_params& p, const factor_exponents& e, double x) {
    return boundary_f(p, e, x, sheet_side::above) - boundary_f(p, e, x, sheet_side::below);
}

// Closed-form jump for the inverse-square-root pair, built from h_1, h_2:
//   jump(x) = -(i/2) sqrt(1-x^2) [h2/h1 + h1/h2] / (sqrt(A1 A2) sqrt((a1-x)(a2-x))).
inline cplx jump_f_closed(const system_params& p, double x) {
    if (!(x > -1.0 && x < 1.0))
        throw std::domain_error("jump_f_closed: x must lie strictly inside (-1,1)");
    const double h1 = eval_h(p, 1, x);
    const double h2 = eval_h(p, 2, x);
    const double num = std::sqrt((1.0 - x) * (1.0 + x)) * (h2 / h1 + h1 / h2);
    const double den = 2.0 * std::sqrt(p.A1 * p.A2) * std::sqrt((p.a1 - x) * (p.a2 - x));
    return cplx(0.0, -num / den);
}

// Second sheet: per-factor principal powers of (A_j - phi(z)). For real z
// with phi(z) > A_j the factor sits on the negative real axis; the side
// argument then selects the boundary branch by forcing the factor's
// imaginary part to -0 (above) or +0 (below). For Im z > 0 this function is
// the analytic continuation of x -> f^-(x) across (-1,1).
inline cplx second_sheet_f(const system_params& p, const factor_exponents& e, const cplx& z,
                           sheet_side side = sheet_side::above) {
    if (detail::on_closed_unit_cut(z))
        throw std::domain_error("second_sheet_f: z on the cut [-1,1]");
    const cplx ph = phi(z);
    cplx g1 = p.A1 - ph;
    cplx g2 = p.A2 - ph;
    if (g1 == cplx(0.0, 0.0) || g2 == cplx(0.0, 0.0))
        throw std::domain_error("second_sheet_f: phi(z) hits a branch point A_j");
    if (z.imag() == 0.0) {
        const double forced = (side == sheet_side::above) ? -0.0 : 0.0;
        if (g1.real() < 0.0) g1 = cplx(g1.real(), forced);
        if (g2.real() < 0.0) g2 = cplx(g2.real(), forced);
    }
    return std::pow(g1, e.alpha1) * std::pow(g2, e.alpha2);
}

// R_k(z) = sum_{j=0}^{k-1} f^j ftil^{k-1-j}: the single-valued extension of
// jump(f^k)/jump(f) across (-1,1). R_1 = 1, R_2 = f + ftil, R_3 = rho_2.
// On the open interval (-1,1) the two sheets are glued from the boundary
// values (above-limit of ftil equals f^-), which keeps the evaluation exact
// on the cut itself.
inline cplx ratio_R(const system_params& p, const factor_exponents& e, int k, const cplx& z,
                    sheet_side side = sheet_side::above) {
    if (k < 0) throw std::invalid_argument("ratio_R: k must be >= 0");
    if (k == 0) return cplx(0.0, 0.0); // R_0 := 0 convention
    cplx fv, gv;
    if (detail::on_open_unit_cut(z)) {
        const double x = z.real();
        fv = boundary_f(p, e, x, side);
        gv = boundary_f(p, e, x, side == sheet_side::above ? sheet_side::below : sheet_side::above);
    } else {
        fv = eval_f(p, e, z);
        gv = second_sheet_f(p, e, z, side);
    }
    cplx sum(0.0, 0.0);
    cplx fpow(1.0, 0.0);
    for (int j = 0; j <= k - 1; ++j) {
        cplx term = fpow;
        for (int m = 0; m < k - 1 - j; ++m) term *= gv;
        sum += term;
        fpow *= fv;
    }
    return sum;
}

// Explicit three-term form of rho_2 = R_3 for the inverse-square-root pair:
//   1/((A1-1/phi)(A2-1/phi)) + 1/((A1-phi)(A2-phi)) + cross term,
// with the cross term realized through the factor identity
//   (A_j - 1/phi(z))(A_j - phi(z)) = 2 A_j (a_j - z)
// as 1/(2 sqrt(A1 A2) sqrt(a1-z) sqrt(a2-z)). This path never evaluates a
// fractional power of phi, so it cross-checks the branch realization of
// ratio_R rather than repeating it.
inline cplx rho2_explicit(const system_params& p, const cplx& z, sheet_side side = sheet_side::above) {
    if (detail::on_closed_unit_cut(z))
        throw std::domain_error("rho2_explicit: z on the cut [-1,1]");
    const cplx ph = phi(z);
    const cplx u = 1.0 / ph;
    const cplx term1 = 1.0 / ((p.A1 - u) * (p.A2 - u));
    const cplx term2 = 1.0 / ((p.A1 - ph) * (p.A2 - ph));
    const double forced = (side == sheet_side::above) ? -0.0 : 0.0;
    cplx d1 = p.a1 - z;
    cplx d2 = p.a2 - z;
    if (z.imag() == 0.0) {
        if (d1.real() < 0.0) d1 = cplx(d1.real(), forced);
        if (d2.real() < 0.0) d2 = cplx(d2.real(), forced);
    }
    const cplx term3 = 1.0 / (2.0 * std::sqrt(p.A1 * p.A2) * std::sqrt(d1) * std::sqrt(d2));
    return term1 + term2 + term3;
}

// |jump of rho_1| across (a1,a2): 2/sqrt((phi(x)-A1)(A2-phi(x))).
inline double rho1_jump_magnitude(const system_params& p, double x) {
    if (!(x > p.a1 && x < p.a2))
        throw std::domain_error("rho1_jump_magnitude: x must lie strictly inside (a1,a2)");
    const double ph = std::real(phi(cplx(x, 0.0)));
    return 2.0 / std::sqrt((ph - p.A1) * (p.A2 - ph));
}

// Endpoint residues of rho_2 = R_3 at z = a_j. The middle term of the
// explicit form, 1/((A1-phi)(A2-phi)), has a simple zero of its denominator
// at each a_j (where phi = A_j), so rho_2 carries genuine simple poles:
//   res_{a_j} rho_2 = -+ (A_j^2 - 1) / (2 A_j^2 (A2 - A1)),
// negative at a1, positive at a2. Every pure-jump reconstruction of rho_2
// must add these rational terms; dropping them is an O(1) error near Delta_2.
inline double rho2_residue(const system_params& p, int j) {
    if (j != 1 && j != 2) throw std::invalid_argument("rho2_residue: j must be 1 or 2");
    const double A = (j == 1) ? p.A1 : p.A2;
    const double r = (A * A - 1.0) / (2.0 * A * A * (p.A2 - p.A1));
    return (j == 1) ? -r : r;
}

} // namespace nikkit
