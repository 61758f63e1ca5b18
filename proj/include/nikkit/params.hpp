#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace nikkit {

// Which side of a real cut a boundary value is taken from.
enum class sheet_side { above, below };

// Exponent pair (alpha1, alpha2) of the two-factor product
//   f(z) = (A1 - 1/phi(z))^{alpha1} * (A2 - 1/phi(z))^{alpha2}.
// The admissible class requires alpha1 + alpha2 to be an integer; that is
// what makes the second sheet continuous across (a2, +inf).
struct factor_exponents {
    double alpha1;
    double alpha2;

    // The inverse-square-root pair generating the three-function system.
    static constexpr factor_exponents proposition() { return {-0.5, -0.5}; }

    // The (alpha, -alpha) family used by the conjecture probe.
    static constexpr factor_exponents conjecture(double alpha) { return {alpha, -alpha}; }

    constexpr bool integer_sum(double tol = 1e-12) const {
        double s = alpha1 + alpha2;
        return std::abs(s - std::nearbyint(s)) <= tol;
    }
};

// Parameters A1, A2 with their derived branch points a_j = (A_j + 1/A_j)/2.
// Validity: 1 < A1 < A2, which forces 1 < a1 < a2 and keeps the two cuts
// [-1,1] and [a1,a2] disjoint.
struct system_params {
    double A1;
    double A2;
    double a1; // branch point of the second sheet attached to A1
    double a2; // branch point attached to A2

    system_params(double A1_, double A2_) : A1(A1_), A2(A2_) {
        if (!(A1 > 1.0) || !(A2 > A1))
            throw std::invalid_argument("system_params: require 1 < A1 < A2, got A1=" +
                                        std::to_string(A1_) + " A2=" + std::to_string(A2_));
        a1 = 0.5 * (A1 + 1.0 / A1);
        a2 = 0.5 * (A2 + 1.0 / A2);
    }

    // f(inf): with u = 1/phi -> 0 the factors tend to A_j^{alpha_j}.
    double value_at_infinity(const factor_exponents& e) const {
        return std::pow(A1, e.alpha1) * std::pow(A2, e.alpha2);
    }
};

} // namespace nikkit
