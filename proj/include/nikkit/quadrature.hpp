#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Eigenvalues>

// Gauss rules that absorb endpoint power weights. A rule with exponent
// profile (e_lo, e_hi) integrates g against (x-lo)^{e_lo} (hi-x)^{e_hi} dx:
//   integrate(g) ~ sum_i w_i g(x_i) = int_lo^hi g(x) (x-lo)^{e_lo}(hi-x)^{e_hi} dx.
// Supported profiles: the four Chebyshev kinds (+-1/2 at each end) and the
// smooth Lebesgue case (0,0). Strip the singular factor from a density and
// hand the rule the analytic remainder; convergence is then geometric.

namespace nikkit {

struct interval {
    double lo;
    double hi;
    interval(double lo_, double hi_) : lo(lo_), hi(hi_) {
        if (!(lo < hi)) throw std::invalid_argument("interval: requires lo < hi");
    }
    double midpoint() const { return 0.5 * (lo + hi); }
    double halfwidth() const { return 0.5 * (hi - lo); }
    bool contains_closed(double x) const { return x >= lo && x <= hi; }
    bool disjoint_from(const interval& other) const { return hi < other.lo || other.hi < lo; }
};

using exponent_profile = std::pair<double, double>;

struct quadrature_rule {
    interval iv;
    std::vector<double> nodes;   // strictly increasing, strictly interior
    std::vector<double> weights; // strictly positive
    exponent_profile profile;
    int order; // node count N

    template <class F>
    auto integrate(F&& g) const {
        using result_t = decltype(g(nodes[0]) * 1.0);
        result_t acc = g(nodes[0]) * weights[0];
        for (std::size_t i = 1; i < nodes.size(); ++i) acc += g(nodes[i]) * weights[i];
        return acc;
    }
};

namespace detail {

// Golub-Welsch for the Legendre weight on [-1,1].
inline void gauss_legendre_reference(int n, std::vector<double>& x, std::vector<double>& w) {
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    for (int k = 1; k < n; ++k) {
        const double b = k / std::sqrt(4.0 * k * k - 1.0);
        J(k - 1, k) = b;
        J(k, k - 1) = b;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    x.resize(n);
    w.resize(n);
    for (int i = 0; i < n; ++i) {
        x[i] = es.eigenvalues()(i);
        const double v0 = es.eigenvectors()(0, i);
        w[i] = 2.0 * v0 * v0;
    }
}

} // namespace detail

inline quadrature_rule build_rule(const interval& iv, const exponent_profile& profile, int n) {
    if (n < 4) throw std::invalid_argument("build_rule: need at least 4 nodes");
    const double mid = iv.midpoint();
    const double hw = iv.halfwidth();
    const double pi = std::acos(-1.0);

    std::vector<double> xi(n), wi(n);
    const auto is = [](double a, double b) { return a == b; };
    const double elo = profile.first, ehi = profile.second;

    if (is(elo, -0.5) && is(ehi, -0.5)) {
        // first kind: absorbs ((x-lo)(hi-x))^{-1/2}
        for (int i = 0; i < n; ++i) {
            xi[i] = std::cos((2.0 * i + 1.0) * pi / (2.0 * n));
            wi[i] = pi / n;
        }
    } else if (is(elo, 0.5) && is(ehi, 0.5)) {
        // second kind: absorbs ((x-lo)(hi-x))^{+1/2}
        for (int i = 1; i <= n; ++i) {
            const double th = i * pi / (n + 1.0);
            xi[i - 1] = std::cos(th);
            const double s = std::sin(th);
            wi[i - 1] = hw * hw * (pi / (n + 1.0)) * s * s;
        }
    } else if (is(elo, 0.5) && is(ehi, -0.5)) {
        // third kind: absorbs ((x-lo)/(hi-x))^{+1/2}
        for (int i = 1; i <= n; ++i) {
            const double th = (2.0 * i - 1.0) * pi / (2.0 * n + 1.0);
            xi[i - 1] = std::cos(th);
            const double c = std::cos(0.5 * th);
            wi[i - 1] = hw * (4.0 * pi / (2.0 * n + 1.0)) * c * c;
        }
    } else if (is(elo, -0.5) && is(ehi, 0.5)) {
        // fourth kind: absorbs ((hi-x)/(x-lo))^{+1/2}
        for (int i = 1; i <= n; ++i) {
            const double th = 2.0 * i * pi / (2.0 * n + 1.0);
            xi[i - 1] = std::cos(th);
            const double s = std::sin(0.5 * th);
            wi[i - 1] = hw * (4.0 * pi / (2.0 * n + 1.0)) * s * s;
        }
    } else if (is(elo, 0.0) && is(ehi, 0.0)) {
        detail::gauss_legendre_reference(n, xi, wi);
        for (double& w : wi) w *= hw;
    } else {
        throw std::invalid_argument("build_rule: unsupported exponent profile");
    }

    quadrature_rule rule{iv, {}, {}, profile, n};
    std::vector<int> idx(static_cast<std::size_t>(n));
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return xi[a] < xi[b]; });
    rule.nodes.reserve(n);
    rule.weights.reserve(n);
    for (int i : idx) {
        rule.nodes.push_back(mid + hw * xi[i]);
        rule.weights.push_back(wi[i]);
    }
    return rule;
}

} // namespace nikkit
