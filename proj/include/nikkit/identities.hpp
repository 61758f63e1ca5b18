#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "nikkit/branch.hpp"
#include "nikkit/cauchy.hpp"
#include "nikkit/measures.hpp"
#include "nikkit/parallel.hpp"
#include "nikkit/params.hpp"
#include "nikkit/quadrature.hpp"

// Residual verification of the closed-form relations between the branch
// values f, f^2, f^3, the ratio functions rho1 = R_2 and rho2 = R_3, and
// Cauchy transforms of the chain measures.
//
// Every identity in the catalogue is assembled pointwise as
//
//     lhs(z) = baseline(z) + sum_j eps_j * term_j(z)
//
// where each term_j is a Cauchy-type transform and each eps_j in {+1,-1} is
// resolved by exhaustive search minimizing the max residual over the grid.
// The resolved signs and the residual left by flipping each sign are part of
// the report, so orientation conventions are findings, not assumptions.
//
// Catalogue honesty: a few identities are kept in the exact shape they are
// usually quoted in, even though that shape omits a correction (the simple
// poles of rho2 at a1 and a2 leak a polynomial-free polar part P into every
// third-power relation). For those, the report additionally carries the
// residual of the repaired right-hand side and a note describing the repair.
// The as-stated residual is never massaged.

namespace nikkit {

enum class identity_id {
    EQ10,
    EQ11,
    EQ12,
    EQ14_2a,
    EQ14_2b,
    EQ14_2c,
    EQ43_46,
    EQ47_2,
    EQ55_56,
    EQ58_60,
    EQ61,
    EQ62,
    EQ63,
    EQ65,
};

inline const char* to_string(identity_id id) {
    switch (id) {
    case identity_id::EQ10: return "EQ10";
    case identity_id::EQ11: return "EQ11";
    case identity_id::EQ12: return "EQ12";
    case identity_id::EQ14_2a: return "EQ14_2a";
    case identity_id::EQ14_2b: return "EQ14_2b";
    case identity_id::EQ14_2c: return "EQ14_2c";
    case identity_id::EQ43_46: return "EQ43_46";
    case identity_id::EQ47_2: return "EQ47_2";
    case identity_id::EQ55_56: return "EQ55_56";
    case identity_id::EQ58_60: return "EQ58_60";
    case identity_id::EQ61: return "EQ61";
    case identity_id::EQ62: return "EQ62";
    case identity_id::EQ63: return "EQ63";
    case identity_id::EQ65: return "EQ65";
    }
    throw std::invalid_argument("to_string: unknown identity id");
}

inline std::array<identity_id, 14> all_identities() {
    return {identity_id::EQ10,    identity_id::EQ11,    identity_id::EQ12,
            identity_id::EQ14_2a, identity_id::EQ14_2b, identity_id::EQ14_2c,
            identity_id::EQ43_46, identity_id::EQ47_2,  identity_id::EQ55_56,
            identity_id::EQ58_60, identity_id::EQ61,    identity_id::EQ62,
            identity_id::EQ63,    identity_id::EQ65};
}

struct residual_report {
    identity_id identity;
    std::vector<cplx> grid;
    int node_count = 0;
    std::vector<int> resolved_signs;    // one entry in {+1,-1} per Cauchy term
    double max_residual = 0.0;
    double residual_at_half_nodes = 0.0;
    std::vector<double> flip_residuals; // max residual after flipping each resolved sign
    // residual of the documented repaired right-hand side; NaN when the
    // identity needs no repair
    double corrected_max_residual = std::numeric_limits<double>::quiet_NaN();
    std::string note;
};

struct verify_config {
    int node_count = 200;
    double tolerance = 1e-7;
    int threads = 0; // 0 = take the NIKKIT_THREADS cap (serial when unset)
};

// rho1 and rho2 are the sheet-symmetric ratio sums R_2 and R_3; ratio_R
// glues the two branch values across the first cut, so these helpers work
// off the cuts and on (-1,1) alike.
inline cplx rho_one(const system_params& p, const cplx& z, sheet_side side = sheet_side::above) {
    return ratio_R(p, factor_exponents{-0.5, -0.5}, 2, z, side);
}
inline cplx rho_two(const system_params& p, const cplx& z, sheet_side side = sheet_side::above) {
    return ratio_R(p, factor_exponents{-0.5, -0.5}, 3, z, side);
}

// density ratio of the third measure against the second, in closed form
inline double rho_three(const system_params& p, double x) {
    if (!(x > p.a1 && x < p.a2)) throw std::domain_error("rho_three: x outside (a1,a2)");
    const double ph = std::real(phi(cplx(x, 0.0)));
    return 1.0 / std::sqrt((p.A1 - 1.0 / ph) * (p.A2 - 1.0 / ph));
}

// polar part of rho2: simple poles at a1 and a2
inline cplx polar_part(const system_params& p, const cplx& z) {
    return rho2_residue(p, 1) / (z - p.a1) + rho2_residue(p, 2) / (z - p.a2);
}

namespace detail {

// Shared quadrature data for one (params, node count) pair. Densities are
// kept in stripped form at the nodes of their matching rule; composed
// densities chain through the tables of the lower levels with the same node
// count, so a full table costs O(N^2) kernel sums and every transform
// evaluation afterwards is a single O(N) pass.
struct transform_table {
    system_params p;
    quadrature_rule r1; // [-1,1], exponents (+1/2,+1/2)
    quadrature_rule r2; // [a1,a2], exponents (-1/2,-1/2)
    std::vector<double> sig, sig2, sig3; // stripped densities at own nodes
    std::vector<double> ksig2_at1;       // int d(sigma2)(t)/(t-x_i), x_i on [-1,1]
    std::vector<double> sighat_at2;      // int d(sigma)(x)/(t_j-x), t_j on [a1,a2]
    std::vector<double> s_str;           // stripped <sigma2,sigma> at r2 nodes
    std::vector<double> ks_at1;          // int d(s)(t)/(t-x_i)
    std::vector<double> s1_str, s2_str;  // stripped <sigma,sigma2>, <sigma,s>
    std::vector<double> pvals;           // polar part at r1 nodes

    explicit transform_table(const system_params& params, int n)
        : p(params),
          r1(build_rule(interval{-1.0, 1.0}, exponent_profile{0.5, 0.5}, n)),
          r2(build_rule(interval{params.a1, params.a2}, exponent_profile{-0.5, -0.5}, n)) {
        const int m1 = static_cast<int>(r1.nodes.size());
        const int m2 = static_cast<int>(r2.nodes.size());
        sig.resize(m1);
        for (int i = 0; i < m1; ++i) sig[i] = stripped_sigma(p, r1.nodes[i]);
        sig2.resize(m2);
        sig3.resize(m2);
        for (int j = 0; j < m2; ++j) {
            sig2[j] = stripped_sigma2(p, r2.nodes[j]);
            sig3[j] = stripped_sigma3(p, r2.nodes[j]);
        }
        ksig2_at1.assign(m1, 0.0);
        for (int i = 0; i < m1; ++i) {
            double acc = 0.0;
            for (int j = 0; j < m2; ++j) acc += r2.weights[j] * sig2[j] / (r2.nodes[j] - r1.nodes[i]);
            ksig2_at1[i] = acc;
        }
        sighat_at2.assign(m2, 0.0);
        s_str.assign(m2, 0.0);
        for (int j = 0; j < m2; ++j) {
            double acc = 0.0;
            for (int i = 0; i < m1; ++i) acc += r1.weights[i] * sig[i] / (r2.nodes[j] - r1.nodes[i]);
            sighat_at2[j] = acc;
            s_str[j] = acc * sig2[j];
        }
        ks_at1.assign(m1, 0.0);
        s1_str.assign(m1, 0.0);
        s2_str.assign(m1, 0.0);
        pvals.assign(m1, 0.0);
        for (int i = 0; i < m1; ++i) {
            double acc = 0.0;
            for (int j = 0; j < m2; ++j) acc += r2.weights[j] * s_str[j] / (r2.nodes[j] - r1.nodes[i]);
            ks_at1[i] = acc;
            s1_str[i] = ksig2_at1[i] * sig[i];
            s2_str[i] = acc * sig[i];
            pvals[i] = std::real(polar_part(p, cplx(r1.nodes[i], 0.0)));
        }
    }

    cplx hat(const quadrature_rule& r, const std::vector<double>& stripped, const cplx& z) const {
        if (distance_to_interval(z, r.iv) < 1e-3)
            throw std::domain_error("transform_table: evaluation point within 1e-3 of a support");
        cplx acc(0.0, 0.0);
        for (std::size_t i = 0; i < r.nodes.size(); ++i)
            acc += r.weights[i] * stripped[i] / (z - r.nodes[i]);
        return acc;
    }

    cplx sigma_hat(const cplx& z) const { return hat(r1, sig, z); }
    cplx sigma2_hat(const cplx& z) const { return hat(r2, sig2, z); }
    cplx sigma3_hat(const cplx& z) const { return hat(r2, sig3, z); }
    cplx s_hat(const cplx& z) const { return hat(r2, s_str, z); }
    cplx s1_hat(const cplx& z) const { return hat(r1, s1_str, z); }
    cplx s2_hat(const cplx& z) const { return hat(r1, s2_str, z); }
    // transform of the polar part against the generating measure
    cplx tp_hat(const cplx& z) const {
        std::vector<double> v(sig.size());
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = pvals[i] * sig[i];
        return hat(r1, v, z);
    }
    // literal composition transforms: int g(x) d(sigma)(x)/(z-x) with g the
    // transform value of the inner measure at x (convention int /(x-t))
    cplx t2_literal(const cplx& z) const {
        std::vector<double> v(sig.size());
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = -ksig2_at1[i] * sig[i];
        return hat(r1, v, z);
    }
    cplx t3_literal(const cplx& z) const {
        std::vector<double> v(sig.size());
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = -ks_at1[i] * sig[i];
        return hat(r1, v, z);
    }
};

enum class point_role { off_cut, delta1, delta2 };

inline point_role classify_off_cut(const system_params& p, const cplx& z) {
    if (distance_to_interval(z, interval{-1.0, 1.0}) < 0.3 ||
        distance_to_interval(z, interval{p.a1, p.a2}) < 0.3)
        throw std::domain_error("grid point closer than 0.3 to a support");
    return point_role::off_cut;
}

inline point_role classify_delta1(const system_params& p, const cplx& z) {
    if (std::abs(z.imag()) > 1e-12) throw std::domain_error("grid point for a (-1,1) identity must be real");
    const double x = z.real();
    if (!(std::abs(x) <= 0.95) || !(x <= p.a1 - 0.3))
        throw std::domain_error("grid point outside the admissible part of (-1,1)");
    return point_role::delta1;
}

inline point_role classify_delta2(const system_params& p, const cplx& z) {
    if (std::abs(z.imag()) > 1e-12) throw std::domain_error("grid point for an (a1,a2) identity must be real");
    const double x = z.real();
    const double margin = 1e-8 * (p.a2 - p.a1);
    if (!(x > p.a1 + margin && x < p.a2 - margin))
        throw std::domain_error("grid point outside the open interval (a1,a2)");
    return point_role::delta2;
}

// mixed grids: each point is either an interior (-1,1) point or an interior
// (a1,a2) point
inline point_role classify_mixed(const system_params& p, const cplx& z) {
    if (std::abs(z.imag()) > 1e-12) throw std::domain_error("grid point for a boundary identity must be real");
    const double x = z.real();
    if (std::abs(x) <= 0.95 && x <= p.a1 - 0.3) return point_role::delta1;
    const double margin = 1e-8 * (p.a2 - p.a1);
    if (x > p.a1 + margin && x < p.a2 - margin) return point_role::delta2;
    throw std::domain_error("grid point on neither admissible interval piece");
}

inline std::vector<point_role> validate_grid(identity_id id, const system_params& p,
                                             const std::vector<cplx>& grid) {
    if (grid.empty()) throw std::invalid_argument("verify_identity: empty grid");
    std::vector<point_role> roles;
    roles.reserve(grid.size());
    for (const cplx& z : grid) {
        switch (id) {
        case identity_id::EQ47_2:
        case identity_id::EQ63: roles.push_back(classify_delta1(p, z)); break;
        case identity_id::EQ61:
        case identity_id::EQ62: roles.push_back(classify_delta2(p, z)); break;
        case identity_id::EQ55_56: roles.push_back(classify_mixed(p, z)); break;
        default: roles.push_back(classify_off_cut(p, z)); break;
        }
    }
    return roles;
}

struct assembly {
    std::vector<cplx> lhs;
    std::vector<cplx> baseline;
    std::vector<std::vector<cplx>> terms; // terms[j][i]
    std::vector<std::string> term_names;
    // additive repair of the baseline (e.g. the omitted polar part). When
    // non-empty, the repaired form baseline + repair + sum eps_j term_j is
    // the identity that actually holds; signs are resolved on it, because
    // fitting a truncated form can flip a sign for the wrong reason.
    std::vector<cplx> repair;
    std::string note;
};

inline assembly assemble(identity_id id, const system_params& p, const std::vector<cplx>& grid,
                         const std::vector<point_role>& roles, const transform_table& tab) {
    const factor_exponents ep{-0.5, -0.5};
    const double c = p.value_at_infinity(ep); // 1/sqrt(A1 A2)
    const double c2 = 1.0 / (p.A1 * p.A2);
    const double c3 = c * c2;
    const std::size_t n = grid.size();
    assembly a;
    a.lhs.resize(n);
    a.baseline.assign(n, cplx(0.0, 0.0));
    a.terms.reserve(4); // keep references from add_term stable (max 3 terms)

    auto add_term = [&](const std::string& name) -> std::vector<cplx>& {
        a.term_names.push_back(name);
        a.terms.emplace_back(n, cplx(0.0, 0.0));
        return a.terms.back();
    };

    switch (id) {
    case identity_id::EQ10: {
        auto& t = add_term("sigma_hat");
        for (std::size_t i = 0; i < n; ++i) {
            a.lhs[i] = eval_f(p, ep, grid[i]);
            a.baseline[i] = c;
            t[i] = tab.sigma_hat(grid[i]);
        }
        break;
    }
    case identity_id::EQ11: {
        auto& t1 = add_term("c*sigma_hat");
        auto& t2 = add_term("s1_hat");
        for (std::size_t i = 0; i < n; ++i) {
            const cplx f = eval_f(p, ep, grid[i]);
            a.lhs[i] = f * f;
            a.baseline[i] = c2;
            t1[i] = c * tab.sigma_hat(grid[i]);
            t2[i] = tab.s1_hat(grid[i]);
        }
        break;
    }
    case identity_id::EQ12: {
        auto& t1 = add_term("c^2*sigma_hat");
        auto& t2 = add_term("c*s1_hat");
        auto& t3 = add_term("s2_hat");
        a.repair.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            const cplx f = eval_f(p, ep, grid[i]);
            a.lhs[i] = f * f * f;
            a.baseline[i] = c3;
            t1[i] = c2 * tab.sigma_hat(grid[i]);
            t2[i] = c * tab.s1_hat(grid[i]);
            t3[i] = tab.s2_hat(grid[i]);
            a.repair[i] = tab.tp_hat(grid[i]);
        }
        a.note = "as stated the third-power representation omits the transform of the polar part "
                 "of rho2 against the generating measure; adding T_P(z) = int P d(sigma)/(z-x) "
                 "closes it (see corrected_max_residual)";
        break;
    }
    case identity_id::EQ14_2a: {
        auto& t = add_term("sigma_hat");
        for (std::size_t i = 0; i < n; ++i) {
            a.lhs[i] = eval_f(p, ep, grid[i]) - c;
            t[i] = tab.sigma_hat(grid[i]);
        }
        break;
    }
    case identity_id::EQ14_2b: {
        auto& t = add_term("s1_hat");
        for (std::size_t i = 0; i < n; ++i) {
            const cplx f = eval_f(p, ep, grid[i]);
            a.lhs[i] = f * f - c * f;
            t[i] = tab.s1_hat(grid[i]);
        }
        break;
    }
    case identity_id::EQ14_2c: {
        auto& t = add_term("s2_hat");
        a.repair.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            const cplx f = eval_f(p, ep, grid[i]);
            a.lhs[i] = f * f * f - c * f * f;
            t[i] = tab.s2_hat(grid[i]);
            a.repair[i] = tab.tp_hat(grid[i]);
        }
        a.note = "the difference ladder's third rung also needs the polar-part transform T_P; "
                 "with it the residual collapses (see corrected_max_residual)";
        break;
    }
    case identity_id::EQ43_46: {
        auto& t = add_term("sigma2_hat");
        for (std::size_t i = 0; i < n; ++i) {
            a.lhs[i] = rho_one(p, grid[i]);
            a.baseline[i] = c;
            t[i] = tab.sigma2_hat(grid[i]);
        }
        break;
    }
    case identity_id::EQ47_2: {
        // two boundary formulas for the same ratio: difference quotient of
        // the squared branch values against the sum of the branch values
        for (std::size_t i = 0; i < n; ++i) {
            const double x = grid[i].real();
            const cplx fp = boundary_f(p, ep, x, sheet_side::above);
            const cplx fm = boundary_f(p, ep, x, sheet_side::below);
            a.lhs[i] = (fp * fp - fm * fm) / (fp - fm);
            a.baseline[i] = fp + fm;
        }
        break;
    }
    case identity_id::EQ55_56: {
        // explicit rho2 formula on (-1,1) plus its two-sided jump across
        // (a1,a2); the square-root branch is fitted separately for the value
        // form and the jump form, each term active on its own subgrid
        auto& tv = add_term("sqrt_product_value_branch");
        auto& tj = add_term("sqrt_product_jump_branch");
        for (std::size_t i = 0; i < n; ++i) {
            if (roles[i] == point_role::delta1) {
                const double x = grid[i].real();
                // above-side boundary value of phi: |phi| = 1 on the cut
                const cplx ph(x, std::sqrt((1.0 - x) * (1.0 + x)));
                const cplx g1 = (p.A1 - 1.0 / ph) * (p.A2 - 1.0 / ph);
                const cplx g2 = (p.A1 - ph) * (p.A2 - ph);
                a.lhs[i] = rho_two(p, grid[i]);
                a.baseline[i] = 1.0 / g1 + 1.0 / g2;
                tv[i] = 1.0 / std::sqrt(g1 * g2);
            } else {
                const double x = grid[i].real();
                const double ph = std::real(phi(cplx(x, 0.0)));
                const double g1 = (p.A1 - 1.0 / ph) * (p.A2 - 1.0 / ph);
                const double g2 = (p.A1 - ph) * (p.A2 - ph); // negative between a1 and a2
                a.lhs[i] = rho_two(p, grid[i], sheet_side::above) -
                           rho_two(p, grid[i], sheet_side::below);
                // two-sided difference of the principal square root across
                // its cut: -2i/sqrt(-g1*g2)
                tj[i] = cplx(0.0, -2.0 / std::sqrt(-g1 * g2));
            }
        }
        a.note = "the value form on (-1,1) holds with the principal square root as written, "
                 "while the realized jump across (a1,a2) is +2i/sqrt(|product|), opposite to "
                 "the stated -2i orientation; the two fitted branch signs record exactly that";
        break;
    }
    case identity_id::EQ58_60: {
        auto& t = add_term("sigma3_hat");
        a.repair.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            a.lhs[i] = rho_two(p, grid[i]);
            a.baseline[i] = c2;
            t[i] = tab.sigma3_hat(grid[i]);
            a.repair[i] = polar_part(p, grid[i]);
        }
        a.note = "rho2 keeps simple poles at a1 and a2; the representation as stated omits "
                 "their polar part P(z), which dominates the residual near the second "
                 "interval; a free fit of the truncated form would even flip the sign to +1 "
                 "(P and the transform partially cancel), so the sign is resolved on the "
                 "repaired form (see corrected_max_residual)";
        break;
    }
    case identity_id::EQ61: {
        for (std::size_t i = 0; i < n; ++i) {
            const double x = grid[i].real();
            a.lhs[i] = density_sigma3(p, x);
            a.baseline[i] = rho_three(p, x) * density_sigma2(p, x);
        }
        break;
    }
    case identity_id::EQ62: {
        for (std::size_t i = 0; i < n; ++i) {
            const double x = grid[i].real();
            a.lhs[i] = rho_three(p, x);
            a.baseline[i] = eval_f(p, ep, grid[i]);
        }
        break;
    }
    case identity_id::EQ63: {
        // difference quotient of the cubed branch values on (-1,1):
        // (f+^3 - f-^3)/(f+ - f-) = f+^2 + f+ f- + f-^2
        auto& t1 = add_term("c*sigma2_hat");
        auto& t2 = add_term("s_hat");
        a.repair.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double x = grid[i].real();
            const cplx fp = boundary_f(p, ep, x, sheet_side::above);
            const cplx fm = boundary_f(p, ep, x, sheet_side::below);
            a.lhs[i] = fp * fp + fp * fm + fm * fm;
            a.baseline[i] = c2;
            t1[i] = c * tab.sigma2_hat(grid[i]);
            t2[i] = tab.s_hat(grid[i]);
            a.repair[i] = polar_part(p, grid[i]);
        }
        a.note = "the difference-quotient representation also omits the polar part P of rho2, "
                 "finite on (-1,1); with it the residual collapses (see corrected_max_residual)";
        break;
    }
    case identity_id::EQ65: {
        auto& t1 = add_term("c^2*sigma_hat");
        auto& t2 = add_term("c*compose(sigma2_hat,sigma)");
        auto& t3 = add_term("compose(s_hat,sigma)");
        a.repair.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            const cplx f = eval_f(p, ep, grid[i]);
            a.lhs[i] = f * f * f;
            a.baseline[i] = c; // additive constant exactly as commonly stated
            t1[i] = c2 * tab.sigma_hat(grid[i]);
            t2[i] = c * tab.t2_literal(grid[i]);
            t3[i] = tab.t3_literal(grid[i]);
            a.repair[i] = (c3 - c) + tab.tp_hat(grid[i]);
        }
        a.note = "two repairs close this form: the additive constant must be the cube of the "
                 "value at infinity, and the polar-part transform T_P is missing; the two "
                 "composition terms resolve negative because the kernel int/(z-x) reverses "
                 "the inner transforms' orientation (see corrected_max_residual)";
        break;
    }
    }
    return a;
}

inline double fit_residual(const assembly& a, int mask, bool use_repair) {
    double worst = 0.0;
    const std::size_t n = a.lhs.size();
    for (std::size_t i = 0; i < n; ++i) {
        cplx acc = a.lhs[i] - a.baseline[i];
        if (use_repair) acc -= a.repair[i];
        for (std::size_t j = 0; j < a.terms.size(); ++j) {
            const double s = ((mask >> j) & 1) ? -1.0 : 1.0;
            acc -= s * a.terms[j][i];
        }
        worst = std::max(worst, std::abs(acc));
    }
    return worst;
}

} // namespace detail

inline residual_report verify_identity(identity_id id, const system_params& p,
                                       const std::vector<cplx>& grid, int node_count) {
    if (node_count < 8) throw std::invalid_argument("verify_identity: node_count must be >= 8");
    const auto roles = detail::validate_grid(id, p, grid);

    const detail::transform_table tab(p, node_count);
    const auto a = detail::assemble(id, p, grid, roles, tab);

    // Signs are resolved on the form that actually holds: when an additive
    // repair is present the truncated statement is false by a term whose size
    // can exceed the genuine terms, and a free fit of it may lock onto a
    // spurious sign. The as-stated residual is then reported at the resolved
    // signs, never re-fit.
    const bool has_repair = !a.repair.empty();
    const int k = static_cast<int>(a.terms.size());
    int best_mask = 0;
    double best = std::numeric_limits<double>::infinity();
    for (int mask = 0; mask < (1 << k); ++mask) {
        const double r = detail::fit_residual(a, mask, has_repair);
        if (r < best) {
            best = r;
            best_mask = mask;
        }
    }

    residual_report rep;
    rep.identity = id;
    rep.grid = grid;
    rep.node_count = node_count;
    rep.max_residual = detail::fit_residual(a, best_mask, false);
    if (has_repair) rep.corrected_max_residual = best;
    rep.resolved_signs.resize(a.terms.size());
    rep.flip_residuals.resize(a.terms.size());
    for (int j = 0; j < k; ++j) {
        rep.resolved_signs[static_cast<std::size_t>(j)] = ((best_mask >> j) & 1) ? -1 : 1;
        rep.flip_residuals[static_cast<std::size_t>(j)] =
            detail::fit_residual(a, best_mask ^ (1 << j), has_repair);
    }
    rep.note = a.note;

    const detail::transform_table tab_half(p, std::max(8, node_count / 2));
    const auto a_half = detail::assemble(id, p, grid, roles, tab_half);
    rep.residual_at_half_nodes = detail::fit_residual(a_half, best_mask, false);
    return rep;
}

// Default verification grids. Off-cut identities get a circle around the
// origin plus a log-spaced tail along the positive axis; any point landing
// closer than 0.3 to a support is dropped (the circle radius adapts when the
// second interval grows past the reference geometry so the grid never
// collapses onto it).
inline std::vector<cplx> default_grid(const system_params& p) {
    const double pi = std::acos(-1.0);
    const double radius = (p.a2 <= 1.7) ? 2.0 : p.a2 + 0.5;
    std::vector<cplx> grid;
    for (int k = 0; k < 20; ++k) {
        const double th = pi * k / 10.0;
        const cplx z(radius * std::cos(th), radius * std::sin(th));
        if (detail::distance_to_interval(z, interval{-1.0, 1.0}) >= 0.3 &&
            detail::distance_to_interval(z, interval{p.a1, p.a2}) >= 0.3)
            grid.push_back(z);
    }
    const double lo = 1.05 * p.a2;
    const double hi = std::max(100.0, 4.0 * p.a2);
    for (int i = 0; i < 10; ++i) {
        const double x = std::exp(std::log(lo) + (i + 0.5) / 10.0 * (std::log(hi) - std::log(lo)));
        const cplx z(x, 0.0);
        if (detail::distance_to_interval(z, interval{p.a1, p.a2}) >= 0.3) grid.push_back(z);
    }
    return grid;
}

inline std::vector<cplx> default_grid(identity_id id, const system_params& p) {
    switch (id) {
    case identity_id::EQ47_2:
    case identity_id::EQ63: {
        const double xm = std::min(0.7, p.a1 - 0.35);
        std::vector<cplx> grid;
        for (int i = 0; i < 15; ++i) grid.emplace_back(-xm + (i + 0.5) / 15.0 * 2.0 * xm, 0.0);
        return grid;
    }
    case identity_id::EQ61:
    case identity_id::EQ62: {
        std::vector<cplx> grid;
        for (int i = 0; i < 50; ++i)
            grid.emplace_back(p.a1 + (i + 0.5) / 50.0 * (p.a2 - p.a1), 0.0);
        return grid;
    }
    case identity_id::EQ55_56: {
        const double xm = std::min(0.7, p.a1 - 0.35);
        std::vector<cplx> grid;
        for (int i = 0; i < 15; ++i) grid.emplace_back(-xm + (i + 0.5) / 15.0 * 2.0 * xm, 0.0);
        for (int i = 0; i < 20; ++i)
            grid.emplace_back(p.a1 + (i + 0.5) / 20.0 * (p.a2 - p.a1), 0.0);
        return grid;
    }
    default: return default_grid(p);
    }
}

// Runs the whole catalogue with default grids, preserving the fixed id order
// regardless of how many threads execute the independent checks.
inline std::vector<residual_report> verify_all(const system_params& p,
                                               const verify_config& cfg = {}) {
    if (cfg.node_count < 8) throw std::invalid_argument("verify_all: node_count must be >= 8");
    if (!(cfg.tolerance > 0.0)) throw std::invalid_argument("verify_all: tolerance must be positive");
    const auto ids = all_identities();
    std::vector<residual_report> reports(ids.size());
    const int threads = cfg.threads > 0 ? cfg.threads : env_thread_cap();
    parallel_for(static_cast<int>(ids.size()), threads, [&](int i) {
        const identity_id id = ids[static_cast<std::size_t>(i)];
        reports[static_cast<std::size_t>(i)] =
            verify_identity(id, p, default_grid(id, p), cfg.node_count);
    });
    return reports;
}

struct sign_entry {
    identity_id identity;
    std::vector<std::string> term_names;
    std::vector<int> resolved_signs;
    std::string positive_form; // equivalent statement under the positive-composition kernel
};

namespace detail {

inline std::string positive_form_text(identity_id id) {
    switch (id) {
    case identity_id::EQ10: return "f = c + sigma_hat; sigma positive on (-1,1)";
    case identity_id::EQ11: return "f^2 = c^2 + c*sigma_hat + s1_hat; s1 = <sigma,sigma2> positive";
    case identity_id::EQ12:
        return "f^3 = c^3 + c^2*sigma_hat + c*s1_hat + s2_hat + T_P; s2 = <sigma,s> positive";
    case identity_id::EQ14_2a: return "f - c = sigma_hat";
    case identity_id::EQ14_2b: return "f^2 - c f = s1_hat";
    case identity_id::EQ14_2c: return "f^3 - c f^2 = s2_hat + T_P";
    case identity_id::EQ43_46: return "rho1 = c - sigma2_hat; sigma2 positive on (a1,a2)";
    case identity_id::EQ47_2: return "difference quotient of f^2 equals the branch-value sum";
    case identity_id::EQ55_56:
        return "rho2 equals the explicit product formula with the branch resolved so the jump "
               "across (a1,a2) is +2i/sqrt(|product|)";
    case identity_id::EQ58_60: return "rho2 = 1/(A1 A2) - sigma3_hat + P; sigma3 positive on (a1,a2)";
    case identity_id::EQ61: return "d(sigma3) = rho3 d(sigma2) pointwise";
    case identity_id::EQ62: return "rho3 coincides with f between a1 and a2";
    case identity_id::EQ63:
        return "difference quotient of f^3 = 1/(A1 A2) - c*sigma2_hat - s_hat + P on (-1,1)";
    case identity_id::EQ65:
        return "f^3 = c^3 + c^2*sigma_hat - c*compose(sigma2_hat,sigma) - compose(s_hat,sigma) + T_P";
    }
    return "";
}

} // namespace detail

inline std::vector<sign_entry> sign_ledger(const std::vector<residual_report>& reports,
                                           const system_params& p) {
    std::vector<sign_entry> table;
    table.reserve(reports.size());
    for (const auto& rep : reports) {
        sign_entry e;
        e.identity = rep.identity;
        e.resolved_signs = rep.resolved_signs;
        const auto roles = detail::validate_grid(rep.identity, p, rep.grid);
        const detail::transform_table tab(p, 8); // names only; cheapest table
        e.term_names = detail::assemble(rep.identity, p, rep.grid, roles, tab).term_names;
        e.positive_form = detail::positive_form_text(rep.identity);
        table.push_back(std::move(e));
    }
    return table;
}

inline std::vector<sign_entry> sign_ledger(const system_params& p) {
    return sign_ledger(verify_all(p), p);
}

} // namespace nikkit
