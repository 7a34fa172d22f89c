#include <doctest.h>

#include <cmath>
#include <memory>
#include <vector>

#include "iadmm/admm.hpp"
#include "iadmm/rpcp.hpp"
#include "test_helpers.hpp"

using namespace iadmm;
using namespace iadmm::testing;

namespace {

AdmmParams params_for(AdmmVariant variant) {
    AdmmParams params;
    params.variant = variant;
    params.gamma = 1.0;
    params.epsilon = 1e-12;
    params.max_iterations = 500;
    switch (variant) {
        case AdmmVariant::classical:
            break;
        case AdmmVariant::gadmm:
            params.lambda_schedule = constant_lambda(1.6);
            break;
        case AdmmVariant::iadmm_chen:
            params.alpha = constant_alpha(0.3);
            break;
        case AdmmVariant::inertial:
            params.alpha = constant_alpha(0.2);
            params.lambda_schedule = constant_lambda(1.2496);
            break;
    }
    return params;
}

// closed-form subproblem solver for quadratic f and A = scale * I, used to
// exercise the general-operator path
class QuadraticOracle : public SubproblemOracle {
  public:
    QuadraticOracle(Matrix center_u, Matrix center_v, double scale)
        : center_u_(std::move(center_u)), center_v_(std::move(center_v)), scale_(scale) {}

    Matrix solve_u(const TwoBlockProblem&, const Matrix& q, const Matrix& t,
                   double gamma, double prox_scale, const Matrix& x_ref) const override {
        return solve(center_u_, q, t, gamma, prox_scale, x_ref);
    }
    Matrix solve_v(const TwoBlockProblem&, const Matrix& q, const Matrix& t,
                   double gamma, double prox_scale, const Matrix& x_ref) const override {
        return solve(center_v_, q, t, gamma, prox_scale, x_ref);
    }

  private:
    // argmin 0.5||x - a||^2 + <q, c x> + gamma/2 ||c x - t||^2 + s/2 ||x - r||^2
    Matrix solve(const Matrix& a, const Matrix& q, const Matrix& t, double gamma,
                 double prox_scale, const Matrix& x_ref) const {
        const double c = scale_;
        Matrix rhs = a - c * q + gamma * c * t;
        if (prox_scale > 0.0) rhs += prox_scale * x_ref;
        return rhs / (1.0 + gamma * c * c + prox_scale);
    }

    Matrix center_u_;
    Matrix center_v_;
    double scale_;
};

}  // namespace

TEST_SUITE_BEGIN("admm");

TEST_CASE("fixed-sigma schedule reproduces the published parameter rows") {
    const double expected[][2] = {
        {0.05, 1.7874}, {0.1, 1.6019}, {0.2, 1.2496}, {0.3, 0.9243}};
    for (auto [alpha, lambda] : expected) {
        const FixedSigmaSchedule schedule = fixed_sigma_schedule(alpha, 0.01);
        CHECK(std::abs(schedule.lambda - lambda) < 5e-5);  // 4 decimal places
        CHECK(schedule.delta > dr_delta_lower_bound(alpha, 0.01));
    }
    CHECK(fixed_sigma_schedule(0.0, 0.01).delta == doctest::Approx(1.0));
}

TEST_CASE("fixed-sigma schedule stays inside (0, 2)") {
    for (double alpha = 0.0; alpha <= 0.99; alpha += 0.03) {
        for (double sigma : {1e-4, 0.01, 0.5, 1.0}) {
            const FixedSigmaSchedule schedule = fixed_sigma_schedule(alpha, sigma);
            CHECK(schedule.lambda > 0.0);
            CHECK(schedule.lambda < 2.0);
        }
    }
    CHECK_THROWS_AS(fixed_sigma_schedule(1.0, 0.01), std::invalid_argument);
    CHECK_THROWS_AS(fixed_sigma_schedule(0.5, 0.0), std::invalid_argument);
}

TEST_CASE("adaptive inertia rule") {
    const Matrix zero = Matrix::Zero(1, 1);
    CHECK(adaptive_alpha_value(3, zero, zero, 0.01, 1.5, 0.05) == 0.05);

    // k = 1, ||p + gamma lambda r||^2 = 100 -> min{1/100, 0.05}
    const Matrix p = Matrix::Constant(1, 1, 10.0);
    CHECK(adaptive_alpha_value(1, p, zero, 0.01, 1.5, 0.05) ==
          doctest::Approx(0.01).epsilon(1e-15));

    CHECK_THROWS_AS(adaptive_alpha_value(0, zero, zero, 0.01, 1.5, 0.05),
                    std::invalid_argument);
}

TEST_CASE("stopping check") {
    TwoBlockProblem problem = quadratic_1d_problem();
    AdmmState state = initial_admm_state(problem);

    SUBCASE("identical consecutive states stop immediately") {
        state.u = Matrix::Constant(1, 1, 2.0);
        state.v = Matrix::Constant(1, 1, 1.0);
        const StopCheck check = stopping_check(problem, state, state, 1e-300);
        CHECK(check.stop);
        CHECK(check.rel_u == 0.0);
        CHECK(check.rel_v == 0.0);
        CHECK(check.rel_b == 0.0);
    }
    SUBCASE("a ten percent move in u") {
        AdmmState prev = state;
        prev.u = Matrix::Constant(1, 1, 1.0);
        prev.v = Matrix::Constant(1, 1, 4.0);
        AdmmState curr = prev;
        curr.u = Matrix::Constant(1, 1, 1.1);
        const StopCheck check = stopping_check(problem, prev, curr, 0.05);
        CHECK(check.rel_u == doctest::Approx(0.1).epsilon(1e-12));
        CHECK(!check.stop);
    }
    SUBCASE("zero denominators") {
        AdmmState prev = state;  // all zeros
        AdmmState curr = state;
        curr.u = Matrix::Constant(1, 1, 0.5);
        const StopCheck check = stopping_check(problem, prev, curr, 1e-7);
        CHECK(check.rel_u == doctest::Approx(0.5).epsilon(1e-14));  // raw numerator
        CHECK(check.rel_v == 0.0);
    }
}

TEST_CASE("all four variants reach the analytic saddle point") {
    TwoBlockProblem problem = quadratic_1d_problem();
    for (AdmmVariant variant :
         {AdmmVariant::classical, AdmmVariant::gadmm, AdmmVariant::iadmm_chen,
          AdmmVariant::inertial}) {
        const SolveReport report = solve(problem, params_for(variant));
        CAPTURE(to_string(variant));
        CHECK(report.iterations <= 500);
        CHECK(std::abs(report.state.u(0, 0) - 2.5) <= 1e-8);
        CHECK(std::abs(report.state.v(0, 0) + 1.5) <= 1e-8);
        CHECK(std::abs(report.state.y(0, 0) - 0.5) <= 1e-8);
    }
}

TEST_CASE("the adaptive-inertia configuration reaches the analytic saddle point") {
    TwoBlockProblem problem = quadratic_1d_problem();
    AdmmParams params = params_for(AdmmVariant::inertial);
    params.alpha = adaptive_alpha();
    params.lambda_schedule = constant_lambda(1.5);
    params.mode = InertiaMode::summable;
    const SolveReport report = solve(problem, params);
    CHECK(std::abs(report.state.u(0, 0) - 2.5) <= 1e-8);
    CHECK(std::abs(report.state.v(0, 0) + 1.5) <= 1e-8);
}

TEST_CASE("reduction chain on a seeded low-rank instance") {
    const RpcpInstance instance = generate_rpcp(40, 2, 80, 123);
    const TwoBlockProblem problem = as_problem(instance);
    const double gamma = 0.01;

    auto base_params = [gamma](AdmmVariant variant) {
        AdmmParams params;
        params.variant = variant;
        params.gamma = gamma;
        params.epsilon = 0.0;
        return params;
    };

    SUBCASE("the inertial variant with zero inertia is gadmm") {
        AdmmParams inertial_params = base_params(AdmmVariant::inertial);
        inertial_params.alpha = constant_alpha(0.0);
        inertial_params.lambda_schedule = constant_lambda(1.6);
        AdmmParams gadmm = base_params(AdmmVariant::gadmm);
        gadmm.lambda_schedule = constant_lambda(1.6);

        AdmmState a = initial_admm_state(problem);
        AdmmState b = a;
        for (int k = 0; k < 30; ++k) {
            a = step_inertial(a, problem, inertial_params);
            b = step_gadmm(b, problem, gadmm);
            CHECK(rel_diff(a.u, b.u) <= 1e-12);
            CHECK(rel_diff(a.v, b.v) <= 1e-12);
            CHECK(rel_diff(a.y, b.y) <= 1e-12);
        }
    }
    SUBCASE("gadmm with unit relaxation is classical") {
        AdmmParams gadmm = base_params(AdmmVariant::gadmm);
        gadmm.lambda_schedule = constant_lambda(1.0);
        AdmmParams classical = base_params(AdmmVariant::classical);

        AdmmState a = initial_admm_state(problem);
        AdmmState b = a;
        for (int k = 0; k < 30; ++k) {
            a = step_gadmm(a, problem, gadmm);
            b = step_classical(b, problem, classical);
            CHECK(rel_diff(a.u, b.u) <= 1e-12);
            CHECK(rel_diff(a.v, b.v) <= 1e-12);
            CHECK(rel_diff(a.y, b.y) <= 1e-12);
        }
    }
    SUBCASE("chen with zero inertia and S = T = 0 is the u->y->v reordered scheme") {
        AdmmParams chen = base_params(AdmmVariant::iadmm_chen);
        chen.alpha = constant_alpha(0.0);

        AdmmState a = initial_admm_state(problem);
        Matrix u = a.u, v = a.v, y = a.y;
        for (int k = 0; k < 30; ++k) {
            a = step_iadmm_chen(a, problem, chen);
            // reference loop written directly from the reordered update
            u = svt(problem.b - v - y / gamma, 1.0 / gamma);
            y = y + gamma * (u + v - problem.b);
            v = soft_threshold(problem.b - u - y / gamma, instance.mu / gamma);
            CHECK(rel_diff(a.u, u) <= 1e-12);
            CHECK(rel_diff(a.y, y) <= 1e-12);
            CHECK(rel_diff(a.v, v) <= 1e-12);
        }
    }
}

TEST_CASE("scaled-identity closed form agrees with an explicit oracle") {
    // same problem, M = 2I realized two ways: flagged scaled identity
    // (closed-form path) and a dense 1x1 matrix map plus oracle
    const Matrix center_u = Matrix::Constant(1, 1, 3.0);
    const Matrix center_v = Matrix::Constant(1, 1, -1.0);

    TwoBlockProblem flagged = quadratic_1d_problem();
    flagged.M = std::make_shared<ScaledIdentityMap>(Shape{1, 1}, 2.0);

    TwoBlockProblem opaque = flagged;
    opaque.M = std::make_shared<MatrixProductMap>(Matrix::Constant(1, 1, 2.0), 1, true);
    QuadraticOracle oracle(center_u, center_v, 2.0);

    for (AdmmVariant variant :
         {AdmmVariant::classical, AdmmVariant::gadmm, AdmmVariant::iadmm_chen,
          AdmmVariant::inertial}) {
        AdmmParams params = params_for(variant);
        params.epsilon = 1e-13;
        const SolveReport a = solve(flagged, params);
        const SolveReport b = solve(opaque, params, &oracle);
        CAPTURE(to_string(variant));
        CHECK(rel_diff(a.state.u, b.state.u) <= 1e-10);
        CHECK(rel_diff(a.state.v, b.state.v) <= 1e-10);
        CHECK(rel_diff(a.state.y, b.state.y) <= 1e-10);

        // first-order optimality of the oracle's u-step inside the solve:
        // (u - a) + M* y + gamma M*(M u + N v - b) = 0 at the fixed point
        const Matrix& u = b.state.u;
        const Matrix residual = u - center_u + 2.0 * b.state.y +
                                params.gamma * 2.0 *
                                    (2.0 * u + b.state.v - flagged.b);
        CHECK(residual.norm() <= 1e-8);
    }
}

TEST_CASE("a missing oracle for a general operator is a configuration error") {
    TwoBlockProblem problem = quadratic_1d_problem();
    problem.M = std::make_shared<MatrixProductMap>(Matrix::Constant(1, 1, 2.0), 1, true);
    CHECK_THROWS_AS(solve(problem, params_for(AdmmVariant::classical)),
                    std::invalid_argument);
}

TEST_CASE("diagnostics at the exact saddle point") {
    TwoBlockProblem problem = quadratic_1d_problem();
    AdmmState state = initial_admm_state(problem);
    state.u = Matrix::Constant(1, 1, 2.5);
    state.v = Matrix::Constant(1, 1, -1.5);
    state.y = Matrix::Constant(1, 1, 0.5);
    state.u_prev = state.u;
    state.v_prev = state.v;
    state.y_prev = state.y;

    const Diagnostics diag = diagnostics(problem, state, params_for(AdmmVariant::classical));
    CHECK(diag.kkt.r1 <= 1e-12);
    CHECK(diag.kkt.r2 <= 1e-12);
    CHECK(diag.kkt.r3 <= 1e-12);
    CHECK(diag.primal_obj == doctest::Approx(0.25).epsilon(1e-12));
    REQUIRE(diag.dual_obj.has_value());
    CHECK(*diag.dual_obj == doctest::Approx(0.25).epsilon(1e-10));
    CHECK(diag.rel_u == 0.0);

    // without a conjugate oracle the dual objective is skipped, not guessed
    struct NoConjugate final : Proximable {
        double value(const Matrix& x) const override { return 0.5 * x.squaredNorm(); }
        Matrix prox(const Matrix& x, double step) const override {
            return x / (1.0 + step);
        }
    };
    TwoBlockProblem bare = problem;
    bare.F = std::make_shared<NoConjugate>();
    CHECK(!diagnostics(bare, state, params_for(AdmmVariant::classical))
               .dual_obj.has_value());
}

TEST_CASE("parameter validation per variant") {
    AdmmParams gadmm;
    gadmm.variant = AdmmVariant::gadmm;
    gadmm.lambda_schedule = constant_lambda(2.5);
    CHECK(!validate_params(gadmm).ok);
    gadmm.lambda_schedule = constant_lambda(1.6);
    CHECK(validate_params(gadmm).ok);

    AdmmParams chen;
    chen.variant = AdmmVariant::iadmm_chen;
    chen.alpha = constant_alpha(1.0);
    CHECK(!validate_params(chen).ok);
    chen.alpha = constant_alpha(0.3);
    CHECK(validate_params(chen).ok);
    chen.lambda_schedule = constant_lambda(1.0);  // lambda is not a chen parameter
    CHECK(!validate_params(chen).ok);

    AdmmParams inertial_params;
    inertial_params.variant = AdmmVariant::inertial;
    inertial_params.mode = InertiaMode::coupled;
    inertial_params.alpha = constant_alpha(0.3);
    inertial_params.lambda_schedule = constant_lambda(1.5);
    CHECK(!validate_params(inertial_params).ok);  // 1.5 > the 0.9243 bound at alpha = 0.3
    inertial_params.lambda_schedule = constant_lambda(0.9243);
    CHECK(validate_params(inertial_params).ok);

    // every published row is accepted
    for (auto [alpha, lambda] :
         {std::pair{0.05, 1.7874}, {0.1, 1.6019}, {0.2, 1.2496}, {0.3, 0.9243}}) {
        AdmmParams row;
        row.variant = AdmmVariant::inertial;
        row.alpha = constant_alpha(alpha);
        row.lambda_schedule = constant_lambda(lambda);
        CHECK_MESSAGE(validate_params(row).ok, validate_params(row).to_string());
    }

    AdmmParams adaptive_params;
    adaptive_params.variant = AdmmVariant::inertial;
    adaptive_params.mode = InertiaMode::summable;
    adaptive_params.alpha = adaptive_alpha();
    adaptive_params.lambda_schedule = constant_lambda(1.5);
    CHECK(validate_params(adaptive_params).ok);
    adaptive_params.mode = InertiaMode::coupled;  // adaptive rule is not nondecreasing
    CHECK(!validate_params(adaptive_params).ok);

    AdmmParams classical;
    classical.variant = AdmmVariant::classical;
    classical.alpha = constant_alpha(0.1);
    CHECK(!validate_params(classical).ok);
}

TEST_CASE("adaptive-inertia runs satisfy the summability bound") {
    const RpcpInstance instance = generate_rpcp(40, 2, 80, 9);
    const TwoBlockProblem problem = as_problem(instance);
    AdmmParams params;
    params.variant = AdmmVariant::inertial;
    params.mode = InertiaMode::summable;
    params.alpha = adaptive_alpha(0.05);
    params.lambda_schedule = constant_lambda(1.5);
    params.gamma = 0.01;
    params.epsilon = 1e-9;
    params.max_iterations = 3000;

    const SolveReport report = solve(problem, params);
    REQUIRE(report.status == SolveStatus::converged);

    double partial_sum = 0.0;
    double inverse_square_sum = 0.0;
    double cap_count = 0.0;
    double cap_norm_bound = 0.0;
    double first_term = 0.0;
    double last_term = 0.0;
    double max_term = 0.0;
    for (const TraceRow& row : report.trace) {
        const double term = row.alpha * row.inertia_sq;
        partial_sum += term;
        inverse_square_sum += 1.0 / (static_cast<double>(row.k) * row.k);
        if (row.alpha == 0.05) {
            cap_count += 1.0;
            cap_norm_bound = std::max(cap_norm_bound, row.inertia_sq);
        }
        if (row.k == 1) first_term = term;
        last_term = term;
        max_term = std::max(max_term, term);
    }
    CHECK(partial_sum <= inverse_square_sum + 0.05 * cap_count * cap_norm_bound + 1e-12);
    CHECK(last_term <= 1e-6 * std::max(max_term, 1e-30));
    CHECK(last_term < first_term);
}

TEST_CASE("optional rank trace") {
    const RpcpInstance instance = generate_rpcp(20, 2, 20, 3);
    const TwoBlockProblem problem = as_problem(instance);
    AdmmParams params;
    params.variant = AdmmVariant::classical;
    params.gamma = 0.01;
    params.epsilon = 1e-5;
    params.max_iterations = 200;

    const SolveReport plain = solve(problem, params);
    REQUIRE(!plain.trace.empty());
    CHECK(plain.trace.back().rank_u == -1);

    params.record_rank = true;
    const SolveReport traced = solve(problem, params);
    REQUIRE(!traced.trace.empty());
    CHECK(traced.trace.back().rank_u >= 0);
}

TEST_CASE("solver status reporting") {
    TwoBlockProblem problem = quadratic_1d_problem();

    SUBCASE("budget exhaustion is a report, not an exception") {
        AdmmParams params = params_for(AdmmVariant::classical);
        params.epsilon = 1e-300;
        params.max_iterations = 3;
        const SolveReport report = solve(problem, params);
        CHECK(report.status == SolveStatus::budget_exhausted);
        CHECK(report.iterations == 3);
        CHECK(report.trace.size() == 3);
    }
    SUBCASE("non-finite iterates yield a diverged status with the last finite state") {
        struct NanProx final : Proximable {
            double value(const Matrix&) const override { return 0.0; }
            Matrix prox(const Matrix& x, double) const override {
                return Matrix::Constant(x.rows(), x.cols(),
                                        std::numeric_limits<double>::quiet_NaN());
            }
        };
        TwoBlockProblem bad = problem;
        bad.F = std::make_shared<NanProx>();
        const SolveReport report = solve(bad, params_for(AdmmVariant::classical));
        CHECK(report.status == SolveStatus::diverged);
        CHECK(is_finite(report.state.u));
        CHECK(report.iterations == 0);
    }
}

TEST_SUITE_END();
