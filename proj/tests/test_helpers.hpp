#ifndef IADMM_TESTS_TEST_HELPERS_HPP_
#define IADMM_TESTS_TEST_HELPERS_HPP_

#include <cmath>
#include <memory>

#include "iadmm/linalg.hpp"
#include "iadmm/operators.hpp"
#include "iadmm/rng.hpp"

namespace iadmm::testing {

inline double rel_diff(const Matrix& a, const Matrix& b) {
    return (a - b).norm() / std::max(1.0, b.norm());
}

// F = 0.5 (u - 3)^2, G = 0.5 (v + 1)^2, M = N = 1, b = 1.
// KKT point solved by hand: u - 3 + y = 0, v + 1 + y = 0, u + v = 1
// => (u, v, y) = (2.5, -1.5, 0.5), objective 0.25.
inline TwoBlockProblem quadratic_1d_problem() {
    TwoBlockProblem problem;
    problem.F = std::make_shared<SquaredDistance>(Matrix::Constant(1, 1, 3.0));
    problem.G = std::make_shared<SquaredDistance>(Matrix::Constant(1, 1, -1.0));
    problem.M = std::make_shared<IdentityMap>(Shape{1, 1});
    problem.N = std::make_shared<IdentityMap>(Shape{1, 1});
    problem.b = Matrix::Constant(1, 1, 1.0);
    return problem;
}

// Golden-section minimizer of a unimodal scalar function on [lo, hi];
// independent oracle for 1-D prox checks.
template <typename F>
double golden_section_min(F f, double lo, double hi, double tol = 1e-10) {
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - phi * (b - a);
    double d = a + phi * (b - a);
    while (b - a > tol) {
        if (f(c) < f(d)) {
            b = d;
        } else {
            a = c;
        }
        c = b - phi * (b - a);
        d = a + phi * (b - a);
    }
    return 0.5 * (a + b);
}

// Test-local projections used as the independent side of Moreau checks.
inline Matrix box_clamp(const Matrix& x, double radius) {
    return x.cwiseMax(-radius).cwiseMin(radius);
}

inline Matrix spectral_clip(const Matrix& x, double radius) {
    SvdResult dec = svd(x);
    Vector clipped = dec.singular_values.cwiseMin(radius);
    return dec.U * clipped.asDiagonal() * dec.V.transpose();
}

}  // namespace iadmm::testing

#endif  // IADMM_TESTS_TEST_HELPERS_HPP_
