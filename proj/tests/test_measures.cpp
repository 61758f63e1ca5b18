#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "nikkit/measures.hpp"

using namespace nikkit;
using Catch::Matchers::WithinAbs;

namespace {
const system_params P(1.5, 3.0);
const factor_exponents E = factor_exponents::proposition();
const double PI = std::acos(-1.0);
} // namespace

TEST_CASE("generating density: frozen value and boundary-value identity") {
    REQUIRE_THAT(density_sigma(P, 0.0), WithinAbs(0.058572174465692557429, 1e-15));
    // density equals -(1/pi) Im f^+ pointwise
    for (int i = 0; i < 100; ++i) {
        const double x = -0.99 + 1.98 * i / 99.0;
        const double viaf = -std::imag(boundary_f(P, E, x, sheet_side::above)) / PI;
        REQUIRE_THAT(density_sigma(P, x), WithinAbs(viaf, 1e-12));
    }
    REQUIRE_THROWS_AS(density_sigma(P, 1.0), std::domain_error);
    REQUIRE_THROWS_AS(density_sigma(P, -1.0), std::domain_error);
}

TEST_CASE("second density: frozen value, blowup profile") {
    REQUIRE_THAT(density_sigma2(P, 1.375), WithinAbs(0.42620653603237312018, 1e-14));
    REQUIRE_THROWS_AS(density_sigma2(P, P.a1), std::domain_error);
    REQUIRE_THROWS_AS(density_sigma2(P, P.a2), std::domain_error);
    // (x-a1)^{1/2} * density stays bounded and stable approaching the endpoint
    const double ref = std::sqrt(1e-2) * density_sigma2(P, P.a1 + 1e-2);
    for (int k = 3; k <= 6; ++k) {
        const double x = P.a1 + std::pow(10.0, -k);
        const double v = std::sqrt(x - P.a1) * density_sigma2(P, x);
        REQUIRE(v > 0.0);
        REQUIRE_THAT(v, WithinAbs(ref, 0.05 * ref));
    }
}

TEST_CASE("third density factors through f") {
    REQUIRE_THAT(density_sigma3(P, 1.375), WithinAbs(0.2572332331877445913, 1e-14));
    for (int i = 0; i < 100; ++i) {
        const double x = P.a1 + (P.a2 - P.a1) * (i + 0.5) / 100.0;
        const double fx = std::real(eval_f(P, E, cplx(x, 0.0)));
        REQUIRE_THAT(density_sigma3(P, x), WithinAbs(fx * density_sigma2(P, x), 1e-12));
    }
}

TEST_CASE("positivity of all five concrete densities") {
    const auto s1 = make_s1(P);
    const auto s2 = make_s2(P, 96); // nested composition; 96 inner nodes keep this test quick
    for (int i = 0; i < 200; ++i) {
        const double x1 = -1.0 + 2.0 * (i + 0.5) / 200.0;
        const double x2 = P.a1 + (P.a2 - P.a1) * (i + 0.5) / 200.0;
        REQUIRE(density_sigma(P, x1) > 0.0);
        REQUIRE(density_sigma2(P, x2) > 0.0);
        REQUIRE(density_sigma3(P, x2) > 0.0);
        REQUIRE(density(s1, x1) > 0.0);
        REQUIRE(density(s2, x1) > 0.0);
    }
}

TEST_CASE("endpoint exponents are exact") {
    // stripped sigma part is bounded and nonvanishing at +-1
    REQUIRE(stripped_density(make_sigma(P), 1.0) > 0.0);
    REQUIRE(stripped_density(make_sigma(P), -1.0) > 0.0);
    REQUIRE(std::isfinite(stripped_density(make_sigma(P), 1.0)));
    // same for sigma2 at a1, a2
    REQUIRE(stripped_density(make_sigma2(P), P.a1) > 0.0);
    REQUIRE(stripped_density(make_sigma2(P), P.a2) > 0.0);
    // density_sigma vanishes like sqrt(1-x^2)
    REQUIRE_THAT(density_sigma(P, 1.0 - 1e-10) / std::sqrt(1.0 - (1.0 - 1e-10)), WithinAbs(0.0, 1.0));
}

TEST_CASE("composition: frozen value, orientation and validation") {
    const auto s1 = make_s1(P);
    REQUIRE(s1.support.lo == -1.0);
    REQUIRE(s1.support.hi == 1.0);
    REQUIRE(s1.kernel_orientation() == 1.0);
    // <sigma, sigma2> density at 0: transform of sigma2 at 0 times sigma density
    REQUIRE_THAT(density(s1, 0.0), WithinAbs(0.01646248871283635997, 1e-13));
    REQUIRE_THAT(density(s1, 0.0) / density_sigma(P, 0.0), WithinAbs(0.28106330118372031816, 1e-12));

    // inner on the left flips the kernel so the result stays positive
    const auto s = make_s(P);
    REQUIRE(s.kernel_orientation() == -1.0);
    REQUIRE(density(s, 1.375) > 0.0);

    // the doubly composed measure at 0: transform of s times sigma density
    const auto s2 = make_s2(P);
    REQUIRE_THAT(density(s2, 0.0) / density_sigma(P, 0.0), WithinAbs(0.042917093054948758402, 1e-12));

    REQUIRE_THROWS_AS(compose(make_sigma(P), make_sigma(P)), std::invalid_argument);
    REQUIRE_THROWS_AS(compose(make_sigma2(P), make_sigma3(P)), std::invalid_argument);
}

TEST_CASE("composing with a zero inner measure kills the density") {
    const auto zero_inner = make_tabulated(interval(2.0, 3.0), std::vector<double>(8, 0.0));
    const auto m = compose(make_sigma(P), zero_inner, 8);
    REQUIRE_THAT(density(m, 0.3), WithinAbs(0.0, 1e-300));
}

TEST_CASE("tabulated measures reproduce the function they sampled") {
    const int n = 48;
    const auto rule = build_rule(interval(P.a1, P.a2), {-0.5, -0.5}, n);
    std::vector<double> vals;
    for (double t : rule.nodes) vals.push_back(stripped_density(make_sigma2(P), t));
    const auto tab = make_tabulated(interval(P.a1, P.a2), vals);
    // exact at nodes
    REQUIRE_THAT(density(tab, rule.nodes[7]), WithinAbs(density_sigma2(P, rule.nodes[7]), 1e-15));
    // barycentric interpolation elsewhere
    for (const double x : {1.12, 1.2345, 1.5, 1.66}) {
        REQUIRE_THAT(density(tab, x), WithinAbs(density_sigma2(P, x), 1e-10));
    }
    REQUIRE_THROWS_AS(make_tabulated(interval(2.0, 3.0), std::vector<double>(3, 1.0)),
                      std::invalid_argument);
}

TEST_CASE("chain validation") {
    const nikishin_chain good{{make_sigma(P), make_sigma2(P), make_sigma(P)}};
    REQUIRE(chain_validate(good).ok);
    const nikishin_chain bad{{make_sigma(P), make_sigma(P)}};
    const auto r = chain_validate(bad);
    REQUIRE_FALSE(r.ok);
    REQUIRE(r.first_bad_index == 0);
    REQUIRE_FALSE(r.message.empty());
    REQUIRE(chain_validate(nikishin_chain{}).ok);
}
