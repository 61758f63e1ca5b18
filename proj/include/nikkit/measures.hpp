#pragma once

#include <cmath>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nikkit/branch.hpp"
#include "nikkit/quadrature.hpp"

// Measures of the chain: the generating measure on [-1,1], the two
// closed-form measures on [a1,a2], compositions <outer, inner> whose density
// is a Cauchy kernel of the inner measure times the outer density, and
// tabulated measures produced by the probe.
//
// Densities are stored "stripped": density(x) = stripped(x) * weight(x) with
// weight(x) = (x-lo)^{e_lo} (hi-x)^{e_hi}. The stripped part is analytic on
// the closed support, which is what the matching quadrature rule wants.
//
// Composition kernel: K(x) = int d(inner)(t)/(t-x), multiplied by -1 when the
// inner support lies left of the outer one, so that composing positive
// measures always yields a positive measure. The transform convention used
// everywhere else (cauchy.hpp) is int dm(t)/(z-t); the two differ by sign,
// and identity verification resolves that sign explicitly per term.

namespace nikkit {

enum class measure_kind { sigma_main, sigma_two, sigma_three, composition, tabulated };

struct measure_spec {
    interval support;
    measure_kind kind;
    exponent_profile endpoint_exponents;
    double sign; // orientation of the signed density; +1 throughout the positive convention
    std::optional<system_params> params;                // closed-form kinds
    std::shared_ptr<const measure_spec> outer, inner;   // composition
    std::vector<double> tab_stripped;                   // tabulated: stripped values at rule nodes
    int inner_nodes = 200;                              // nested-transform resolution

    // +1 when the inner support lies right of the outer one, -1 when left.
    double kernel_orientation() const {
        if (kind != measure_kind::composition) return 1.0;
        return (inner->support.lo > outer->support.hi) ? 1.0 : -1.0;
    }
};

// --- closed-form densities --------------------------------------------------

// density of the generating measure on (-1,1):
//   sqrt(1-x^2) [h2/h1 + h1/h2] / (4 pi sqrt(A1 A2) sqrt((a1-x)(a2-x)))
inline double density_sigma(const system_params& p, double x) {
    if (!(x > -1.0 && x < 1.0)) throw std::domain_error("density_sigma: x outside (-1,1)");
    const double h1 = eval_h(p, 1, x);
    const double h2 = eval_h(p, 2, x);
    const double num = std::sqrt((1.0 - x) * (1.0 + x)) * (h2 / h1 + h1 / h2);
    return num / (4.0 * std::acos(-1.0) * std::sqrt(p.A1 * p.A2) * std::sqrt((p.a1 - x) * (p.a2 - x)));
}

// density of the second-interval measure on (a1,a2):
//   1 / (pi sqrt((phi(x)-A1)(A2-phi(x))))
inline double density_sigma2(const system_params& p, double x) {
    if (!(x > p.a1 && x < p.a2)) throw std::domain_error("density_sigma2: x outside (a1,a2)");
    const double ph = std::real(phi(cplx(x, 0.0)));
    return 1.0 / (std::acos(-1.0) * std::sqrt((ph - p.A1) * (p.A2 - ph)));
}

// third measure on (a1,a2); factors as f * density_sigma2
inline double density_sigma3(const system_params& p, double x) {
    if (!(x > p.a1 && x < p.a2)) throw std::domain_error("density_sigma3: x outside (a1,a2)");
    const double ph = std::real(phi(cplx(x, 0.0)));
    const double fx = 1.0 / std::sqrt((p.A1 - 1.0 / ph) * (p.A2 - 1.0 / ph));
    return fx / (std::acos(-1.0) * std::sqrt((ph - p.A1) * (p.A2 - ph)));
}

namespace detail {

// stripped form of density_sigma: the h-ratio kernel without sqrt(1-x^2),
// analytic on the closed interval (h_j^2 = 2(A_j-x) + 2 sqrt(2A_j) sqrt(a_j-x))
inline double stripped_sigma(const system_params& p, double x) {
    const double h1 = eval_h(p, 1, x);
    const double h2 = eval_h(p, 2, x);
    return (h2 / h1 + h1 / h2) /
           (4.0 * std::acos(-1.0) * std::sqrt(p.A1 * p.A2) * std::sqrt((p.a1 - x) * (p.a2 - x)));
}

// stripped form of density_sigma2 via (x-a_j) = (A_j phi - 1)(phi - A_j)/(2 A_j phi):
//   density * sqrt((x-a1)(a2-x)) = sqrt((A1 phi - 1)(A2 phi - 1)/(A1 A2)) / (2 pi phi)
inline double stripped_sigma2(const system_params& p, double x) {
    const double ph = std::real(phi(cplx(x, 0.0)));
    return std::sqrt((p.A1 * ph - 1.0) * (p.A2 * ph - 1.0) / (p.A1 * p.A2)) /
           (2.0 * std::acos(-1.0) * ph);
}

inline double stripped_sigma3(const system_params& p, double x) {
    const double ph = std::real(phi(cplx(x, 0.0)));
    const double fx = 1.0 / std::sqrt((p.A1 - 1.0 / ph) * (p.A2 - 1.0 / ph));
    return fx * stripped_sigma2(p, x);
}

// barycentric weights for the ascending first-kind Chebyshev layout
inline std::vector<double> chebyshev1_barycentric(std::size_t n) {
    const double pi = std::acos(-1.0);
    std::vector<double> d(n);
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t i = n - 1 - k; // descending-angle index
        const double th = (2.0 * i + 1.0) * pi / (2.0 * n);
        d[k] = ((i % 2 == 0) ? 1.0 : -1.0) * std::sin(th);
    }
    return d;
}

} // namespace detail

// stripped density dispatch; x may sit anywhere on the closed support
inline double stripped_density(const measure_spec& m, double x);

namespace detail {

// K(x) = orientation * int d(inner)(t)/(t-x), evaluated by the inner rule
inline double composition_kernel(const measure_spec& m, double x) {
    const auto rule = build_rule(m.inner->support, m.inner->endpoint_exponents, m.inner_nodes);
    const double k = rule.integrate(
        [&](double t) { return stripped_density(*m.inner, t) / (t - x); });
    return m.kernel_orientation() * k;
}

} // namespace detail

inline double stripped_density(const measure_spec& m, double x) {
    switch (m.kind) {
    case measure_kind::sigma_main:
        return m.sign * detail::stripped_sigma(*m.params, x);
    case measure_kind::sigma_two:
        return m.sign * detail::stripped_sigma2(*m.params, x);
    case measure_kind::sigma_three:
        return m.sign * detail::stripped_sigma3(*m.params, x);
    case measure_kind::composition:
        return detail::composition_kernel(m, x) * stripped_density(*m.outer, x);
    case measure_kind::tabulated: {
        const auto& v = m.tab_stripped;
        const auto nodes = build_rule(m.support, m.endpoint_exponents, static_cast<int>(v.size())).nodes;
        const auto bary = detail::chebyshev1_barycentric(v.size());
        double num = 0.0, den = 0.0;
        for (std::size_t k = 0; k < v.size(); ++k) {
            const double dx = x - nodes[k];
            if (dx == 0.0) return m.sign * v[k];
            num += bary[k] * v[k] / dx;
            den += bary[k] / dx;
        }
        return m.sign * num / den;
    }
    }
    throw std::logic_error("stripped_density: unreachable");
}

// full density on the open support interior
inline double density(const measure_spec& m, double x) {
    if (!(x > m.support.lo && x < m.support.hi))
        throw std::domain_error("density: x outside the open support");
    const double wlo = std::pow(x - m.support.lo, m.endpoint_exponents.first);
    const double whi = std::pow(m.support.hi - x, m.endpoint_exponents.second);
    return stripped_density(m, x) * wlo * whi;
}

// --- factories ---------------------------------------------------------------

inline measure_spec make_sigma(const system_params& p) {
    return {interval(-1.0, 1.0), measure_kind::sigma_main, {0.5, 0.5}, 1.0, p, nullptr, nullptr, {}};
}

inline measure_spec make_sigma2(const system_params& p) {
    return {interval(p.a1, p.a2), measure_kind::sigma_two, {-0.5, -0.5}, 1.0, p, nullptr, nullptr, {}};
}

inline measure_spec make_sigma3(const system_params& p) {
    return {interval(p.a1, p.a2), measure_kind::sigma_three, {-0.5, -0.5}, 1.0, p, nullptr, nullptr, {}};
}

inline measure_spec compose(const measure_spec& outer, const measure_spec& inner, int inner_nodes = 200) {
    if (!outer.support.disjoint_from(inner.support))
        throw std::invalid_argument("compose: outer and inner supports must be disjoint");
    measure_spec m{outer.support,
                   measure_kind::composition,
                   outer.endpoint_exponents,
                   outer.sign * inner.sign,
                   outer.params,
                   std::make_shared<measure_spec>(outer),
                   std::make_shared<measure_spec>(inner),
                   {}};
    m.inner_nodes = inner_nodes;
    return m;
}

// values are stripped densities at the ascending nodes of the matching
// inverse-square-root rule on the given interval
inline measure_spec make_tabulated(const interval& support, std::vector<double> stripped_values,
                                   double sign = 1.0) {
    if (stripped_values.size() < 4)
        throw std::invalid_argument("make_tabulated: need at least 4 samples");
    measure_spec m{support, measure_kind::tabulated, {-0.5, -0.5}, sign, std::nullopt,
                   nullptr,  nullptr,                std::move(stripped_values)};
    return m;
}

// s1 = <sigma, sigma2> on [-1,1]; s = <sigma2, sigma> on [a1,a2]; s2 = <sigma, s>
inline measure_spec make_s1(const system_params& p, int inner_nodes = 200) {
    return compose(make_sigma(p), make_sigma2(p), inner_nodes);
}
inline measure_spec make_s(const system_params& p, int inner_nodes = 200) {
    return compose(make_sigma2(p), make_sigma(p), inner_nodes);
}
inline measure_spec make_s2(const system_params& p, int inner_nodes = 200) {
    return compose(make_sigma(p), make_s(p, inner_nodes), inner_nodes);
}

// --- chain -------------------------------------------------------------------

struct nikishin_chain {
    std::vector<measure_spec> measures;
};

struct chain_validation {
    bool ok;
    std::size_t first_bad_index; // offending pair (i, i+1) when !ok
    std::string message;
};

inline chain_validation chain_validate(const nikishin_chain& chain) {
    for (std::size_t i = 0; i + 1 < chain.measures.size(); ++i) {
        if (!chain.measures[i].support.disjoint_from(chain.measures[i + 1].support)) {
            return {false, i,
                    "supports of measures " + std::to_string(i) + " and " + std::to_string(i + 1) +
                        " overlap"};
        }
    }
    return {true, 0, ""};
}

} // namespace nikkit
