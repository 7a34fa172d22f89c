#ifndef IADMM_ADMM_HPP_
#define IADMM_ADMM_HPP_

#include <functional>
#include <optional>
#include <vector>

#include "iadmm/dr.hpp"
#include "iadmm/linalg.hpp"
#include "iadmm/operators.hpp"

namespace iadmm {

enum class AdmmVariant { classical, gadmm, iadmm_chen, inertial };

std::string to_string(AdmmVariant variant);

/// Parameter regime for the inertial variant: `coupled` ties a constant
/// (more generally nondecreasing) inertia to the relaxation bound of the
/// inertial DR condition; `summable` only needs static bounds plus online
/// summability, which the adaptive inertia rule supplies.
enum class InertiaMode { coupled, summable };

/// Inertia rule. `constant` uses the same alpha every iteration; `adaptive`
/// recomputes, after the u-step of iteration k,
///   alpha = min{ 1 / (k^2 ||p^k + gamma lambda_k (M u^{k+1} + N v^k - b)||^2), cap }.
struct AlphaRule {
    enum class Kind { constant, adaptive };
    Kind kind = Kind::constant;
    double value = 0.0;
    double cap = 0.05;
};

AlphaRule constant_alpha(double value);
AlphaRule adaptive_alpha(double cap = 0.05);

struct AdmmParams {
    AdmmVariant variant = AdmmVariant::classical;
    double gamma = 0.01;
    std::function<double(int)> lambda_schedule;  // k -> lambda_k (gadmm, inertial)
    AlphaRule alpha;                             // iadmm_chen, inertial
    double proximal_s_scale = 0.0;               // iadmm_chen: S = s I
    double proximal_t_scale = 0.0;               // iadmm_chen: T = t I
    InertiaMode mode = InertiaMode::coupled;
    double sigma = 0.01;
    std::optional<double> delta;  // coupled mode; defaults to 1 + the delta lower bound
    double epsilon = 1e-7;
    int max_iterations = 5000;
    bool record_objective = true;  // per-iteration F(u^{k+1}) + G(v^k) in the trace
    bool record_rank = false;      // per-iteration rank of u in the trace
};

std::function<double(int)> constant_lambda(double value);

/// Solver state. u_prev/v_prev/y_prev hold the previous iterate for inertia
/// and relative-error checks; p is Algorithm 1's inertial memory (zero for
/// the other variants).
struct AdmmState {
    Matrix u, v, y, p;
    Matrix u_prev, v_prev, y_prev;
    int iteration = 0;
};

/// Zero-initialized state (y^1 = 0, v^1 = 0, p^1 = 0, history equal to the
/// initial values so first-iteration inertia differences vanish).
AdmmState initial_admm_state(const TwoBlockProblem& problem);

/// User-supplied solver for the per-block subproblem
///   argmin_x f(x) + <q, A x> + (gamma/2) ||A x - t||_F^2
///                 + (prox_scale/2) ||x - x_ref||_F^2
/// with (f, A) = (F, M) for the u block and (G, N) for the v block.
/// Required whenever the block's linear operator is not a (scaled) identity;
/// ignored otherwise.
class SubproblemOracle {
  public:
    virtual ~SubproblemOracle() = default;

    virtual Matrix solve_u(const TwoBlockProblem& problem, const Matrix& q,
                           const Matrix& t, double gamma, double prox_scale,
                           const Matrix& x_ref) const = 0;
    virtual Matrix solve_v(const TwoBlockProblem& problem, const Matrix& q,
                           const Matrix& t, double gamma, double prox_scale,
                           const Matrix& x_ref) const = 0;
};

/// Per-step parameters actually used, for traces and summability checks.
struct StepInfo {
    double alpha = 0.0;
    double lambda = 1.0;
    double inertia_sq = 0.0;  // ||p^k + gamma lambda_k (M u^{k+1} + N v^k - b)||^2
};

AdmmState step_classical(const AdmmState& state, const TwoBlockProblem& problem,
                         const AdmmParams& params,
                         const SubproblemOracle* oracle = nullptr,
                         StepInfo* info = nullptr);

AdmmState step_gadmm(const AdmmState& state, const TwoBlockProblem& problem,
                     const AdmmParams& params,
                     const SubproblemOracle* oracle = nullptr,
                     StepInfo* info = nullptr);

AdmmState step_iadmm_chen(const AdmmState& state, const TwoBlockProblem& problem,
                          const AdmmParams& params,
                          const SubproblemOracle* oracle = nullptr,
                          StepInfo* info = nullptr);

AdmmState step_inertial(const AdmmState& state, const TwoBlockProblem& problem,
                        const AdmmParams& params,
                        const SubproblemOracle* oracle = nullptr,
                        StepInfo* info = nullptr);

struct FixedSigmaSchedule {
    double delta;
    double lambda;
};

/// The fixed-sigma parameter pair
///   delta  = 1 + (alpha^2 (1 + alpha) + alpha sigma) / (1 - alpha^2)
///   lambda = 2 (delta - alpha [alpha (1 + alpha) + alpha delta + sigma])
///            / (delta [1 + alpha (1 + alpha) + alpha delta + sigma]).
FixedSigmaSchedule fixed_sigma_schedule(double alpha, double sigma);

/// Adaptive inertia for the summable regime; returns the cap when the norm
/// vanishes.
double adaptive_alpha_value(int k, const Matrix& p, const Matrix& residual,
                            double gamma, double lambda_k, double cap);

struct StopCheck {
    bool stop = false;
    double rel_u = 0.0;
    double rel_v = 0.0;
    double rel_b = 0.0;
};

/// Relative errors between consecutive states:
///   rel u = ||u^{k+1} - u^k||_F / ||u^k||_F   (and likewise for v),
///   rel b on the reconstruction sequence b^k = M u^k + N v^k.
/// A zero denominator makes the ratio 0 when the numerator is 0 and the raw
/// numerator norm otherwise. Stops when max(rel u, rel v, rel b) <= epsilon.
StopCheck stopping_check(const TwoBlockProblem& problem, const AdmmState& prev,
                         const AdmmState& curr, double epsilon);

struct KktResiduals {
    double r1 = 0.0;  // prox fixed-point residual of 0 in dF(u) + M* y
    double r2 = 0.0;  // prox fixed-point residual of 0 in dG(v) + N* y
    double r3 = 0.0;  // ||M u + N v - b||_F
};

struct Diagnostics {
    double rel_u = 0.0;
    double rel_v = 0.0;
    double rel_b = 0.0;
    double primal_obj = 0.0;
    std::optional<double> dual_obj;  // needs conjugate oracles on F and G
    KktResiduals kkt;
    Index rank_u = 0;
};

Diagnostics diagnostics(const TwoBlockProblem& problem, const AdmmState& state,
                        const AdmmParams& params);

/// Static parameter checks per variant; schedules are probed over
/// iterations 1..horizon.
ValidationReport validate_params(const AdmmParams& params, int horizon = 1000);

struct TraceRow {
    int k = 0;
    double rel_u = 0.0;
    double rel_v = 0.0;
    double rel_b = 0.0;
    double primal_obj = 0.0;  // F(u^{k+1}) + G(v^k); NaN when disabled
    double r3 = 0.0;
    double alpha = 0.0;
    double lambda = 1.0;
    double inertia_sq = 0.0;
    Index rank_u = -1;  // -1 unless rank tracing is enabled
};

struct SolveReport {
    SolveStatus status = SolveStatus::budget_exhausted;
    int iterations = 0;
    AdmmState state;
    std::vector<TraceRow> trace;
    double wall_seconds = 0.0;
};

using IterationCallback = std::function<void(const AdmmState&)>;

/// Runs the selected variant from the given (or zero) initial state until
/// the stopping criterion fires or the budget runs out. Invalid parameters
/// and a missing-but-required subproblem oracle throw std::invalid_argument;
/// numerical divergence is reported in the status with the last finite state.
SolveReport solve(const TwoBlockProblem& problem, const AdmmParams& params,
                  const SubproblemOracle* oracle = nullptr,
                  const std::optional<AdmmState>& initial = std::nullopt,
                  const IterationCallback& on_iteration = {});

}  // namespace iadmm

#endif  // IADMM_ADMM_HPP_
