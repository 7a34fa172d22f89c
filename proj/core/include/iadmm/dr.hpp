#ifndef IADMM_DR_HPP_
#define IADMM_DR_HPP_

#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "iadmm/linalg.hpp"
#include "iadmm/operators.hpp"

namespace iadmm {

/// Resolvent oracle J_{gamma A} = (I + gamma A)^{-1} of a maximally monotone
/// operator; firmly nonexpansive.
struct ResolventOracle {
    std::function<Matrix(const Matrix& point, double gamma)> resolve;
};

/// J of the subdifferential of a convex function, i.e. its prox.
ResolventOracle resolvent_of(std::shared_ptr<const Proximable> f);

/// Resolvents of the two dual-side operators of a two-block problem,
///   A = d(F* o (-M*))  and  B = d(G* o (-N*)) + b,
/// for (scaled-)identity M and N. Built from conjugate_prox, so only the
/// primal prox oracles are needed.
ResolventOracle dual_resolvent_left(const TwoBlockProblem& problem);
ResolventOracle dual_resolvent_right(const TwoBlockProblem& problem);

enum class DrMode { coupled, summable };

/// Lower bound on delta required by the inertial parameter condition:
///   delta > (alpha^2 (1 + alpha) + alpha sigma) / (1 - alpha^2).
double dr_delta_lower_bound(double alpha_bar, double sigma);

/// Upper bound on every relaxation parameter lambda_k:
///   2 (delta - alpha [alpha (1 + alpha) + alpha delta + sigma])
///     / (delta [1 + alpha (1 + alpha) + alpha delta + sigma]).
double dr_lambda_upper_bound(double alpha_bar, double sigma, double delta);

struct DrParams {
    double gamma = 1.0;
    std::function<double(int)> alpha_schedule;   // k -> alpha_k, k >= 1
    std::function<double(int)> lambda_schedule;  // k -> lambda_k, k >= 1
    double alpha_bar = 0.0;                      // uniform bound on alpha_k
    double sigma = 0.01;
    double delta = 1.0;
    DrMode mode = DrMode::coupled;
};

struct ValidationReport {
    bool ok = true;
    std::vector<std::string> violations;

    std::string to_string() const;
};

/// Static parameter checks for the selected mode. Schedules are functions,
/// so the bounds (and, in coupled mode, monotonicity) are probed over
/// iterations 1..horizon. The summability condition of the summable mode is
/// a property of the run and is left to the caller's schedule.
ValidationReport validate_params(const DrParams& params, int horizon = 1000);

struct DrState {
    Matrix w_prev;
    Matrix w_curr;
    Matrix y;
    Matrix x;
    int iteration = 0;
    double fejer_sum = 0.0;  // running sum of ||w^{k+1} - w^k||^2
};

/// Initial state with w^0 = w^1 = w0, so the first extrapolation vanishes
/// without constraining alpha_1.
DrState dr_initial_state(const Matrix& w0);

enum class SolveStatus { converged, budget_exhausted, diverged };

std::string to_string(SolveStatus status);

/// One inertial Douglas-Rachford step:
///   y^k     = J_{gamma B}(w^k + alpha_k (w^k - w^{k-1}))
///   x^k     = J_{gamma A}(2 y^k - w^k - alpha_k (w^k - w^{k-1}))
///   w^{k+1} = w^k + alpha_k (w^k - w^{k-1}) + lambda_k (x^k - y^k)
/// Throws DrDivergedError carrying the last finite state if an iterate
/// leaves the finite range.
DrState dr_step(const DrState& state, const ResolventOracle& a,
                const ResolventOracle& b, const DrParams& params);

class DrDivergedError : public std::runtime_error {
  public:
    DrDivergedError(std::string what, DrState last_finite)
        : std::runtime_error(std::move(what)),
          last_finite_state(std::move(last_finite)) {}

    DrState last_finite_state;
};

struct DrTraceRow {
    int k;
    double gap;              // ||y^k - x^k||_F
    double fejer_increment;  // ||w^{k+1} - w^k||^2
};

struct StoppingRule {
    double tolerance = 1e-10;  // on ||y^k - x^k||_F
    int max_iterations = 10000;
};

struct DrReport {
    SolveStatus status = SolveStatus::budget_exhausted;
    int iterations = 0;
    DrState state;
    std::vector<DrTraceRow> trace;
};

/// Runs dr_step until the gap ||y - x||_F falls below the tolerance or the
/// budget runs out. Exhausted budgets and divergence are reported, not thrown.
DrReport dr_solve(const ResolventOracle& a, const ResolventOracle& b,
                  const DrParams& params, const Matrix& w0,
                  const StoppingRule& stop);

}  // namespace iadmm

#endif  // IADMM_DR_HPP_
