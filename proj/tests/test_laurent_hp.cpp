#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "nikkit/branch.hpp"
#include "nikkit/hermite_pade.hpp"
#include "nikkit/laurent.hpp"

using namespace nikkit;
using Catch::Matchers::WithinAbs;

namespace {

const system_params P(1.5, 3.0);
const factor_exponents E = factor_exponents::proposition();
const circle_contour C2{2.0, 512};

laurent_series f_series(int K, double radius = 2.0) {
    return laurent_f_power(P, 1, circle_contour{radius, 512}, K);
}

} // namespace

// ---------- compensated arithmetic building blocks ----------

TEST_CASE("compensated square root squares back to the radicand") {
    const ddx::dd s = ddx::sqrt(ddx::dd(2.0));
    const ddx::dd err = ddx::sub(ddx::mul(s, s), ddx::dd(2.0));
    REQUIRE(std::abs(err.hi) <= 1e-31);
}

TEST_CASE("compensated division refines to full working precision") {
    const ddx::dd third = ddx::div(ddx::dd(1.0), ddx::dd(3.0));
    const ddx::dd err = ddx::sub(ddx::mul(third, ddx::dd(3.0)), ddx::dd(1.0));
    REQUIRE(std::abs(err.hi) <= 1e-31);
}

TEST_CASE("small-angle sine and cosine satisfy the Pythagorean identity") {
    for (const double angle : {2.0 * std::acos(-1.0) / 512.0, 0.3, 0.85}) {
        const ddx::dd x(angle);
        const ddx::dd s = ddx::sin_small(x), c = ddx::cos_small(x);
        const ddx::dd err = ddx::sub(ddx::add(ddx::mul(s, s), ddx::mul(c, c)), ddx::dd(1.0));
        REQUIRE(std::abs(err.hi) <= 1e-30);
    }
}

TEST_CASE("roots of unity land on the lattice points without drift") {
    const auto roots = ddx::roots_of_unity(512);
    REQUIRE(roots.size() == 512);
    // quarter turn is exactly i
    REQUIRE(std::abs(roots[128].re.hi) <= 1e-28);
    REQUIRE_THAT(roots[128].im.hi, WithinAbs(1.0, 1e-28));
    // half turn is exactly -1
    REQUIRE_THAT(roots[256].re.hi, WithinAbs(-1.0, 1e-28));
    REQUIRE(std::abs(roots[256].im.hi) <= 1e-28);
    // full turn closes the circle
    const ddx::cdd closure = ddx::mul(roots[511], roots[1]);
    REQUIRE_THAT(closure.re.hi, WithinAbs(1.0, 1e-27));
    REQUIRE(std::abs(closure.im.hi) <= 1e-27);
}

TEST_CASE("compensated complex square root keeps the principal branch") {
    // negative real axis resolves to the upper edge
    const ddx::cdd a = ddx::sqrt(ddx::cdd(-4.0));
    REQUIRE(a.re.hi == 0.0);
    REQUIRE_THAT(a.im.hi, WithinAbs(2.0, 1e-30));
    // sqrt(3+4i) = 2+i exactly
    const ddx::cdd b = ddx::sqrt(ddx::cdd(3.0, 4.0));
    REQUIRE_THAT(b.re.hi, WithinAbs(2.0, 1e-30));
    REQUIRE_THAT(b.im.hi, WithinAbs(1.0, 1e-30));
    // lower half-plane inputs map to Re > 0, Im < 0
    const ddx::cdd c = ddx::sqrt(ddx::cdd(-3.0, -4.0));
    REQUIRE_THAT(c.re.hi, WithinAbs(1.0, 1e-30));
    REQUIRE_THAT(c.im.hi, WithinAbs(-2.0, 1e-30));

    REQUIRE_THROWS_AS(ddx::sqrt(ddx::dd(-1.0)), std::domain_error);
}

TEST_CASE("integer powers and reciprocals of compensated complex numbers") {
    const ddx::cdd w = ddx::pow_int(ddx::cdd(1.0, 1.0), 4);
    REQUIRE_THAT(w.re.hi, WithinAbs(-4.0, 1e-30));
    REQUIRE(std::abs(w.im.hi) <= 1e-30);

    const ddx::cdd r = ddx::recip(ddx::cdd(3.0, 4.0));
    REQUIRE_THAT(r.re.hi, WithinAbs(0.12, 1e-17));
    REQUIRE_THAT(r.im.hi, WithinAbs(-0.16, 1e-17));

    REQUIRE_THROWS_AS(ddx::pow_int(ddx::cdd(1.0), -2), std::invalid_argument);
}

// ---------- contour validation ----------

TEST_CASE("contour sampling rejects unusable configurations") {
    const auto one = [](const cplx&) { return cplx(1.0, 0.0); };
    REQUIRE_THROWS_AS(laurent_at_infinity(one, circle_contour{1.0, 512}, 5), std::invalid_argument);
    REQUIRE_THROWS_AS(laurent_at_infinity(one, circle_contour{0.5, 512}, 5), std::invalid_argument);
    REQUIRE_THROWS_AS(laurent_at_infinity(one, circle_contour{2.0, 500}, 5), std::invalid_argument);
    REQUIRE_THROWS_AS(laurent_at_infinity(one, circle_contour{2.0, 4}, 1), std::invalid_argument);
    REQUIRE_THROWS_AS(laurent_at_infinity(one, circle_contour{2.0, 8}, 4), std::invalid_argument);
    REQUIRE_THROWS_AS(laurent_at_infinity(one, circle_contour{2.0, 512}, -1), std::invalid_argument);
    REQUIRE_THROWS_AS(laurent_f_power(P, -1, C2, 5), std::invalid_argument);
}

TEST_CASE("an evaluator that breaks conjugate symmetry is rejected") {
    const auto rotated = [](const cplx&) { return cplx(0.0, 1.0); };
    REQUIRE_THROWS_AS(laurent_at_infinity(rotated, C2, 3), std::runtime_error);
}

// ---------- coefficients of f at infinity ----------

TEST_CASE("leading coefficients of f match the closed forms") {
    const laurent_series s = f_series(25);
    REQUIRE(s.radius_used == 2.0);
    REQUIRE(s.coefficients.size() == 26);
    // c0 is the value at infinity 1/sqrt(A1 A2); c1 is the mass of sigma
    REQUIRE_THAT(s.coefficients[0], WithinAbs(0.47140452079103168293, 1e-13));
    REQUIRE_THAT(s.coefficients[1], WithinAbs(0.11785113019775792073, 1e-13));
    REQUIRE_THAT(s.coefficients[2], WithinAbs(0.031099603802186117971, 1e-13));
    REQUIRE_THAT(s.coefficients[3], WithinAbs(0.03805609412635932857, 1e-13));
    REQUIRE_THAT(s.coefficients[0], WithinAbs(P.value_at_infinity(E), 1e-14));
}

TEST_CASE("coefficients are independent of the sampling radius") {
    const int K = 19;
    const laurent_series s15 = laurent_f_power(P, 1, circle_contour{1.5, 512}, K);
    const laurent_series s20 = laurent_f_power(P, 1, circle_contour{2.0, 512}, K);
    const laurent_series s40 = laurent_f_power(P, 1, circle_contour{4.0, 512}, K);
    double worst = 0.0;
    for (int k = 0; k <= K; ++k) {
        const double a = s15.coefficients[static_cast<std::size_t>(k)];
        const double b = s20.coefficients[static_cast<std::size_t>(k)];
        const double c = s40.coefficients[static_cast<std::size_t>(k)];
        worst = std::max({worst, std::abs(a - b), std::abs(a - c), std::abs(b - c)});
    }
    INFO("worst cross-radius deviation " << worst);
    REQUIRE(worst <= 1e-12); // requirement is 1e-10; compensated sampling leaves margin
}

TEST_CASE("doubling the sample count does not move the coefficients") {
    const laurent_series a = laurent_f_power(P, 1, circle_contour{1.5, 512}, 19);
    const laurent_series b = laurent_f_power(P, 1, circle_contour{1.5, 1024}, 19);
    for (int k = 0; k <= 19; ++k)
        REQUIRE_THAT(a.coefficients[static_cast<std::size_t>(k)],
                     WithinAbs(b.coefficients[static_cast<std::size_t>(k)], 1e-13));
}

TEST_CASE("the generic double-precision sampler agrees at a small radius") {
    const auto f = [](const cplx& z) { return eval_f(P, E, z); };
    const laurent_series gen = laurent_at_infinity(f, circle_contour{1.5, 512}, 19);
    const laurent_series dd = laurent_f_power(P, 1, circle_contour{1.5, 512}, 19);
    for (int k = 0; k <= 19; ++k)
        REQUIRE_THAT(gen.coefficients[static_cast<std::size_t>(k)],
                     WithinAbs(dd.coefficients[static_cast<std::size_t>(k)], 1e-11));
}

TEST_CASE("series of powers are convolution powers of the series of f") {
    const int K = 12;
    const laurent_series s1 = laurent_f_power(P, 1, C2, 2 * K);
    const laurent_series s2 = laurent_f_power(P, 2, C2, K);
    const laurent_series s3 = laurent_f_power(P, 3, C2, K);
    for (int k = 0; k <= K; ++k) {
        double conv2 = 0.0;
        for (int i = 0; i <= k; ++i)
            conv2 += s1.coefficients[static_cast<std::size_t>(i)] *
                     s1.coefficients[static_cast<std::size_t>(k - i)];
        REQUIRE_THAT(s2.coefficients[static_cast<std::size_t>(k)], WithinAbs(conv2, 1e-14));
        double conv3 = 0.0;
        for (int i = 0; i <= k; ++i)
            conv3 += s2.coefficients[static_cast<std::size_t>(i)] *
                     s1.coefficients[static_cast<std::size_t>(k - i)];
        REQUIRE_THAT(s3.coefficients[static_cast<std::size_t>(k)], WithinAbs(conv3, 1e-14));
    }
}

TEST_CASE("the zeroth power samples to the constant series") {
    const laurent_series s = laurent_f_power(P, 0, C2, 10);
    REQUIRE_THAT(s.coefficients[0], WithinAbs(1.0, 1e-15));
    for (std::size_t k = 1; k < s.coefficients.size(); ++k)
        REQUIRE(std::abs(s.coefficients[k]) <= 1e-15);

    const laurent_series c = constant_series(10, 2.5);
    REQUIRE(c.coefficients.size() == 11);
    REQUIRE(c.coefficients[0] == 1.0);
    REQUIRE(c.radius_used == 2.5);
    REQUIRE(std::all_of(c.coefficients.begin() + 1, c.coefficients.end(),
                        [](double v) { return v == 0.0; }));
}

// ---------- type-I systems ----------

TEST_CASE("the full system on (1, f, f^2) reaches its designed decay order") {
    const f_power_hp hp = type_one_hp_f_powers(P, {3, 3, 3});
    REQUIRE(hp.result.target_order == -8);
    REQUIRE_FALSE(hp.result.degenerate);
    INFO("condition indicator " << hp.result.condition_indicator);
    REQUIRE(hp.result.condition_indicator > 1e-10);

    // the coefficient vector is unit-norm with a positive leading pivot
    double norm2 = 0.0, lead = 0.0;
    for (const auto& block : hp.result.polynomial_coefficients) {
        for (double v : block) norm2 += v * v;
        if (lead == 0.0 && std::abs(block.back()) > 1e-12) lead = block.back();
    }
    REQUIRE_THAT(norm2, WithinAbs(1.0, 1e-12));
    REQUIRE(lead > 0.0);

    // the forced Laurent coefficients of the remainder actually vanish
    std::vector<laurent_series> series;
    for (int j = 0; j < 3; ++j) series.push_back(laurent_f_power(P, j, C2, 60));
    double worst_forced = 0.0;
    for (int p = 3; p >= -7; --p) {
        double row = 0.0;
        for (int j = 0; j < 3; ++j)
            for (int i = 0; i <= 3; ++i)
                if (i - p >= 0)
                    row += hp.result.polynomial_coefficients[static_cast<std::size_t>(j)]
                                                            [static_cast<std::size_t>(i)] *
                           series[static_cast<std::size_t>(j)]
                               .coefficients[static_cast<std::size_t>(i - p)];
        worst_forced = std::max(worst_forced, std::abs(row));
    }
    INFO("worst forced coefficient " << worst_forced);
    REQUIRE(worst_forced <= 1e-10); // requirement is 1e-8 relative to the unit-norm vector

    const order_fit fit = remainder_order(hp, make_order_samples());
    INFO("fitted slope " << fit.slope << " rms " << fit.fit_residual);
    REQUIRE_FALSE(fit.below_noise_floor);
    REQUIRE_THAT(fit.slope, WithinAbs(-8.0, 0.3));
    REQUIRE(fit.fit_residual <= 0.5);

    // the leading surviving coefficient is nonzero but ten orders below the
    // series scale: the system sits close to an extra order of contact
    REQUIRE(hp.tail_start == 8);
    const double lead_tail = hp.remainder_tail.front().hi;
    INFO("leading tail coefficient " << lead_tail);
    REQUIRE(std::abs(lead_tail) > 1e-14);
    REQUIRE(std::abs(lead_tail) < 1e-9);
}

TEST_CASE("direct and tail evaluations of the remainder agree where both resolve") {
    const f_power_hp hp = type_one_hp_f_powers(P, {3, 3, 3});
    for (const double r : {10.0, 15.0, 25.0}) {
        const cplx z = std::polar(r, 0.9);
        const cplx direct = hp_remainder_value(hp, z);
        const cplx tail = hp_remainder_tail_value(hp, z);
        INFO("at |z|=" << r << " direct " << std::abs(direct) << " tail " << std::abs(tail));
        REQUIRE(std::abs(direct - tail) <= 1e-4 * std::abs(tail) + 1e-26);
    }
}

TEST_CASE("the compensated solver and the singular-vector solver agree") {
    const f_power_hp hp = type_one_hp_f_powers(P, {3, 3, 3});
    std::vector<laurent_series> series;
    for (int j = 0; j < 3; ++j) series.push_back(laurent_f_power(P, j, C2, 60));
    const type_one_result svd = type_one_hp(series, {3, 3, 3});
    for (std::size_t j = 0; j < 3; ++j)
        for (std::size_t i = 0; i <= 3; ++i)
            REQUIRE_THAT(hp.result.polynomial_coefficients[j][i],
                         WithinAbs(svd.polynomial_coefficients[j][i], 1e-8));
}

TEST_CASE("the pair system degenerates to the classical linearization") {
    const laurent_series f = f_series(25);
    const type_one_result a = type_one_hp({constant_series(25), f}, {1, 1});
    const type_one_result b = pade_single(f, {1, 1});
    REQUIRE(a.target_order == -2);
    REQUIRE(b.target_order == -2);
    for (std::size_t j = 0; j < 2; ++j)
        for (std::size_t i = 0; i < 2; ++i)
            REQUIRE_THAT(a.polynomial_coefficients[j][i],
                         WithinAbs(b.polynomial_coefficients[j][i], 1e-15));

    const auto fpow = [&](int j, const cplx& z) {
        return (j == 0) ? cplx(1.0, 0.0) : eval_f(P, E, z);
    };
    const order_fit fit = remainder_order(a, fpow, make_order_samples());
    INFO("pair-system slope " << fit.slope);
    REQUIRE_FALSE(fit.below_noise_floor);
    REQUIRE_THAT(fit.slope, WithinAbs(-2.0, 0.3));
}

TEST_CASE("matching only the constant reproduces the value at infinity") {
    const laurent_series f = f_series(25);
    const type_one_result r = pade_single(f, {0, 0});
    REQUIRE(r.target_order == -1);
    const double ratio = -r.polynomial_coefficients[0][0] / r.polynomial_coefficients[1][0];
    REQUIRE_THAT(ratio, WithinAbs(f.coefficients[0], 1e-12));

    const auto fpow = [&](int j, const cplx& z) {
        return (j == 0) ? cplx(1.0, 0.0) : eval_f(P, E, z);
    };
    const order_fit fit = remainder_order(r, fpow, make_order_samples());
    REQUIRE_THAT(fit.slope, WithinAbs(-1.0, 0.3));
}

TEST_CASE("denominator zeros stay inside the open support interval") {
    const laurent_series f = f_series(40);
    for (int m = 1; m <= 5; ++m) {
        const type_one_result r = pade_single(f, {m, m});
        const auto roots = polynomial_roots(r.polynomial_coefficients[1]);
        REQUIRE(roots.size() == static_cast<std::size_t>(m));
        for (const cplx& root : roots) {
            INFO("m=" << m << " root " << root.real() << "+" << root.imag() << "i");
            REQUIRE(std::abs(root.imag()) <= 1e-7);
            REQUIRE(root.real() > -0.9999);
            REQUIRE(root.real() < 0.9999);
        }
    }
}

TEST_CASE("a dependent system is reported degenerate, not rejected") {
    const laurent_series f = f_series(25);
    const type_one_result r = type_one_hp({f, f}, {1, 1});
    REQUIRE(r.degenerate);
    REQUIRE(r.condition_indicator <= 1e-12);
}

TEST_CASE("unusable inputs to the solver are rejected") {
    const laurent_series f = f_series(25);
    const laurent_series zero{std::vector<double>(26, 0.0), 2.0};
    REQUIRE_THROWS_AS(type_one_hp({constant_series(25), zero}, {1, 1}), std::invalid_argument);
    REQUIRE_THROWS_AS(type_one_hp({constant_series(25), f}, {1}), std::invalid_argument);
    REQUIRE_THROWS_AS(type_one_hp({constant_series(25), f}, {-1, 1}), std::invalid_argument);
    REQUIRE_THROWS_AS(type_one_hp({f}, {1}), std::invalid_argument);

    const laurent_series short_f = f_series(6);
    REQUIRE_THROWS_AS(type_one_hp({constant_series(6), short_f}, {1, 1}), std::invalid_argument);
    REQUIRE_THROWS_AS(type_one_hp_f_powers(P, {3, 3, 3}, C2, 10), std::invalid_argument);
}

TEST_CASE("a remainder that does not decay is reported with slope near zero") {
    // remainder identically 1: a polynomial artifact, not a decaying tail
    const type_one_result artifact{{0, 0}, {{1.0}, {0.0}}, -1,
                                   std::numeric_limits<double>::quiet_NaN(), 1.0, false};
    const auto fpow = [&](int j, const cplx& z) {
        return (j == 0) ? cplx(1.0, 0.0) : eval_f(P, E, z);
    };
    const order_fit fit = remainder_order(artifact, fpow, make_order_samples());
    REQUIRE_FALSE(fit.below_noise_floor);
    REQUIRE_THAT(fit.slope, WithinAbs(0.0, 1e-9));
}

TEST_CASE("a remainder below working precision is flagged, not fitted") {
    const type_one_result silent{{0, 0}, {{0.0}, {0.0}}, -1,
                                 std::numeric_limits<double>::quiet_NaN(), 1.0, false};
    const auto fpow = [&](int j, const cplx& z) {
        return (j == 0) ? cplx(1.0, 0.0) : eval_f(P, E, z);
    };
    const order_fit fit = remainder_order(silent, fpow, make_order_samples());
    REQUIRE(fit.below_noise_floor);
    REQUIRE(fit.slope == 0.0);

    REQUIRE_THROWS_AS(remainder_order(silent, fpow, std::vector<cplx>{cplx(10.0, 5.0)}),
                      std::invalid_argument);
}

TEST_CASE("sample generation covers the prescribed annulus off the axis") {
    const auto samples = make_order_samples();
    REQUIRE(samples.size() == 24);
    REQUIRE_THAT(std::abs(samples.front()), WithinAbs(10.0, 1e-12));
    REQUIRE_THAT(std::abs(samples.back()), WithinAbs(100.0, 1e-10));
    for (const cplx& z : samples) REQUIRE(std::abs(z.imag()) > 1.0);
    REQUIRE_THROWS_AS(make_order_samples(1), std::invalid_argument);
}

TEST_CASE("polynomial root extraction trims noise and factors correctly") {
    // (x - 0.3)(x + 0.7) = -0.21 + 0.4 x + x^2
    auto roots = polynomial_roots({-0.21, 0.4, 1.0});
    REQUIRE(roots.size() == 2);
    std::sort(roots.begin(), roots.end(),
              [](const cplx& a, const cplx& b) { return a.real() < b.real(); });
    REQUIRE_THAT(roots[0].real(), WithinAbs(-0.7, 1e-12));
    REQUIRE_THAT(roots[1].real(), WithinAbs(0.3, 1e-12));

    // a negligible leading coefficient does not inflate the degree
    const auto trimmed = polynomial_roots({-0.21, 0.4, 1.0, 1e-15});
    REQUIRE(trimmed.size() == 2);

    REQUIRE(polynomial_roots({0.0, 0.0}).empty());
    REQUIRE(polynomial_roots({5.0}).empty());
}

TEST_CASE("polynomial evaluation follows the ascending-degree convention") {
    const cplx v = horner({1.0, 2.0, 3.0}, cplx(2.0, 0.0));
    REQUIRE_THAT(v.real(), WithinAbs(17.0, 1e-14));
    REQUIRE(std::abs(v.imag()) <= 1e-14);
}
