#include "iadmm/admm.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace iadmm {

namespace {

enum class BlockSide { u, v };

// argmin_x f(x) + <q, A x> + (gamma/2)||A x - t||^2 + (prox_scale/2)||x - x_ref||^2.
// For A = c I this is a single prox:
//   x = prox_{f / (gamma c^2 + s)}((gamma c^2 (t/c) + s x_ref - c q) / (gamma c^2 + s)).
Matrix solve_block(const TwoBlockProblem& problem, BlockSide side,
                   const Matrix& q, const Matrix& t, double gamma,
                   double prox_scale, const Matrix& x_ref,
                   const SubproblemOracle* oracle) {
    const Proximable& f = side == BlockSide::u ? *problem.F : *problem.G;
    const LinearMap& a = side == BlockSide::u ? *problem.M : *problem.N;
    if (const auto scale = a.identity_scale()) {
        const double c = *scale;
        const double quad = gamma * c * c;
        const double denom = quad + prox_scale;
        Matrix z = (quad / c) * t - c * q;
        if (prox_scale > 0.0) z += prox_scale * x_ref;
        z /= denom;
        return f.prox(z, 1.0 / denom);
    }
    if (oracle == nullptr) {
        throw std::invalid_argument(
            side == BlockSide::u
                ? "u-subproblem: M is not a (scaled) identity and no SubproblemOracle was supplied"
                : "v-subproblem: N is not a (scaled) identity and no SubproblemOracle was supplied");
    }
    return side == BlockSide::u
               ? oracle->solve_u(problem, q, t, gamma, prox_scale, x_ref)
               : oracle->solve_v(problem, q, t, gamma, prox_scale, x_ref);
}

double alpha_for_chen(const AdmmParams& params) {
    return params.alpha.kind == AlphaRule::Kind::constant ? params.alpha.value : 0.0;
}

void carry_history(AdmmState& next, const AdmmState& state) {
    next.u_prev = state.u;
    next.v_prev = state.v;
    next.y_prev = state.y;
    next.iteration = state.iteration + 1;
}

double relative_change(const Matrix& prev, const Matrix& curr) {
    const double numer = (curr - prev).norm();
    const double denom = prev.norm();
    if (denom == 0.0) return numer == 0.0 ? 0.0 : numer;
    return numer / denom;
}

bool state_is_finite(const AdmmState& state) {
    return is_finite(state.u) && is_finite(state.v) && is_finite(state.y) &&
           is_finite(state.p);
}

}  // namespace

std::string to_string(AdmmVariant variant) {
    switch (variant) {
        case AdmmVariant::classical: return "classical";
        case AdmmVariant::gadmm: return "gadmm";
        case AdmmVariant::iadmm_chen: return "iadmm_chen";
        case AdmmVariant::inertial: return "inertial";
    }
    return "unknown";
}

AlphaRule constant_alpha(double value) {
    AlphaRule rule;
    rule.kind = AlphaRule::Kind::constant;
    rule.value = value;
    return rule;
}

AlphaRule adaptive_alpha(double cap) {
    AlphaRule rule;
    rule.kind = AlphaRule::Kind::adaptive;
    rule.cap = cap;
    return rule;
}

std::function<double(int)> constant_lambda(double value) {
    return [value](int) { return value; };
}

AdmmState initial_admm_state(const TwoBlockProblem& problem) {
    problem.validate();
    const Shape su = problem.M->domain_shape();
    const Shape sv = problem.N->domain_shape();
    const Shape sb = shape_of(problem.b);
    AdmmState state;
    state.u = Matrix::Zero(su.rows, su.cols);
    state.v = Matrix::Zero(sv.rows, sv.cols);
    state.y = Matrix::Zero(sb.rows, sb.cols);
    state.p = Matrix::Zero(sb.rows, sb.cols);
    state.u_prev = state.u;
    state.v_prev = state.v;
    state.y_prev = state.y;
    return state;
}

AdmmState step_classical(const AdmmState& state, const TwoBlockProblem& problem,
                         const AdmmParams& params, const SubproblemOracle* oracle,
                         StepInfo* info) {
    const double gamma = params.gamma;
    AdmmState next;
    next.u = solve_block(problem, BlockSide::u, state.y,
                         problem.b - problem.N->apply(state.v), gamma, 0.0,
                         state.u, oracle);
    next.v = solve_block(problem, BlockSide::v, state.y,
                         problem.b - problem.M->apply(next.u), gamma, 0.0,
                         state.v, oracle);
    next.y = state.y + gamma * (problem.M->apply(next.u) +
                                problem.N->apply(next.v) - problem.b);
    next.p = state.p;
    carry_history(next, state);
    if (info) *info = StepInfo{0.0, 1.0, 0.0};
    return next;
}

AdmmState step_gadmm(const AdmmState& state, const TwoBlockProblem& problem,
                     const AdmmParams& params, const SubproblemOracle* oracle,
                     StepInfo* info) {
    const double gamma = params.gamma;
    const int k = state.iteration + 1;
    const double lambda_k = params.lambda_schedule(k);

    AdmmState next;
    next.u = solve_block(problem, BlockSide::u, state.y,
                         problem.b - problem.N->apply(state.v), gamma, 0.0,
                         state.u, oracle);
    const Matrix nv = problem.N->apply(state.v);
    const Matrix residual = problem.M->apply(next.u) + nv - problem.b;
    next.v = solve_block(problem, BlockSide::v, state.y, nv - lambda_k * residual,
                         gamma, 0.0, state.v, oracle);
    next.y = state.y + gamma * (problem.N->apply(next.v) - nv + lambda_k * residual);
    next.p = state.p;
    carry_history(next, state);
    if (info) *info = StepInfo{0.0, lambda_k, 0.0};
    return next;
}

AdmmState step_iadmm_chen(const AdmmState& state, const TwoBlockProblem& problem,
                          const AdmmParams& params, const SubproblemOracle* oracle,
                          StepInfo* info) {
    const double gamma = params.gamma;
    const double alpha_k = alpha_for_chen(params);

    const Matrix u_bar = state.u + alpha_k * (state.u - state.u_prev);
    const Matrix v_bar = state.v + alpha_k * (state.v - state.v_prev);
    const Matrix y_bar = state.y + alpha_k * (state.y - state.y_prev);

    AdmmState next;
    const Matrix nv_bar = problem.N->apply(v_bar);
    next.u = solve_block(problem, BlockSide::u, y_bar, problem.b - nv_bar, gamma,
                         params.proximal_s_scale, u_bar, oracle);
    next.y = y_bar + gamma * (problem.M->apply(next.u) + nv_bar - problem.b);
    next.v = solve_block(problem, BlockSide::v, next.y,
                         problem.b - problem.M->apply(next.u), gamma,
                         params.proximal_t_scale, v_bar, oracle);
    next.p = state.p;
    carry_history(next, state);
    if (info) *info = StepInfo{alpha_k, 1.0, 0.0};
    return next;
}

AdmmState step_inertial(const AdmmState& state, const TwoBlockProblem& problem,
                        const AdmmParams& params, const SubproblemOracle* oracle,
                        StepInfo* info) {
    const double gamma = params.gamma;
    const int k = state.iteration + 1;
    const double lambda_k = params.lambda_schedule(k);

    AdmmState next;
    // step 1
    const Matrix nv = problem.N->apply(state.v);
    next.u = solve_block(problem, BlockSide::u, state.y, problem.b - nv, gamma,
                         0.0, state.u, oracle);
    const Matrix residual = problem.M->apply(next.u) + nv - problem.b;

    const double alpha_next =
        params.alpha.kind == AlphaRule::Kind::constant
            ? params.alpha.value
            : adaptive_alpha_value(k, state.p, residual, gamma, lambda_k,
                                   params.alpha.cap);

    // step 2
    const Matrix q_eff = state.y + alpha_next * state.p;
    next.v = solve_block(problem, BlockSide::v, q_eff,
                         nv - (1.0 + alpha_next) * lambda_k * residual, gamma,
                         0.0, state.v, oracle);
    // step 3
    next.y = state.y + alpha_next * state.p +
             gamma * (problem.N->apply(next.v) - nv +
                      (1.0 + alpha_next) * lambda_k * residual);
    // step 4
    next.p = alpha_next * (state.p + gamma * lambda_k * residual);

    carry_history(next, state);
    if (info) {
        *info = StepInfo{alpha_next, lambda_k,
                         (state.p + gamma * lambda_k * residual).squaredNorm()};
    }
    return next;
}

FixedSigmaSchedule fixed_sigma_schedule(double alpha, double sigma) {
    if (!(alpha >= 0.0 && alpha < 1.0)) {
        throw std::invalid_argument("fixed_sigma_schedule: alpha must lie in [0, 1)");
    }
    if (!(sigma > 0.0)) {
        throw std::invalid_argument("fixed_sigma_schedule: sigma must be positive");
    }
    const double delta = 1.0 + dr_delta_lower_bound(alpha, sigma);
    return FixedSigmaSchedule{delta, dr_lambda_upper_bound(alpha, sigma, delta)};
}

double adaptive_alpha_value(int k, const Matrix& p, const Matrix& residual,
                            double gamma, double lambda_k, double cap) {
    if (k < 1) throw std::invalid_argument("adaptive_alpha_value: k must be >= 1");
    const double sq = (p + gamma * lambda_k * residual).squaredNorm();
    if (sq == 0.0) return cap;
    return std::min(1.0 / (static_cast<double>(k) * static_cast<double>(k) * sq), cap);
}

StopCheck stopping_check(const TwoBlockProblem& problem, const AdmmState& prev,
                         const AdmmState& curr, double epsilon) {
    StopCheck check;
    check.rel_u = relative_change(prev.u, curr.u);
    check.rel_v = relative_change(prev.v, curr.v);
    const Matrix recon_prev = problem.M->apply(prev.u) + problem.N->apply(prev.v);
    const Matrix recon_curr = problem.M->apply(curr.u) + problem.N->apply(curr.v);
    check.rel_b = relative_change(recon_prev, recon_curr);
    check.stop = std::max({check.rel_u, check.rel_v, check.rel_b}) <= epsilon;
    return check;
}

Diagnostics diagnostics(const TwoBlockProblem& problem, const AdmmState& state,
                        const AdmmParams& params) {
    Diagnostics diag;
    // rel_* compare against the stored previous iterate
    diag.rel_u = relative_change(state.u_prev, state.u);
    diag.rel_v = relative_change(state.v_prev, state.v);
    const Matrix recon_prev =
        problem.M->apply(state.u_prev) + problem.N->apply(state.v_prev);
    const Matrix recon_curr = problem.M->apply(state.u) + problem.N->apply(state.v);
    diag.rel_b = relative_change(recon_prev, recon_curr);

    diag.kkt.r1 =
        (state.u - problem.F->prox(state.u - problem.M->adjoint_apply(state.y), 1.0))
            .norm();
    diag.kkt.r2 =
        (state.v - problem.G->prox(state.v - problem.N->adjoint_apply(state.y), 1.0))
            .norm();
    const Matrix feas = recon_curr - problem.b;
    diag.kkt.r3 = feas.norm();

    diag.primal_obj = objective(problem, state.u, state.v);

    const Matrix x = state.y + params.gamma * feas;
    const auto fstar = problem.F->conjugate_value(-problem.M->adjoint_apply(x));
    const auto gstar = problem.G->conjugate_value(-problem.N->adjoint_apply(state.y));
    if (fstar && gstar) {
        diag.dual_obj = -*fstar - *gstar -
                        (state.y.array() * problem.b.array()).sum();
    }
    diag.rank_u = numerical_rank(state.u);
    return diag;
}

ValidationReport validate_params(const AdmmParams& params, int horizon) {
    ValidationReport report;
    auto fail = [&report](std::string msg) {
        report.ok = false;
        report.violations.push_back(std::move(msg));
    };

    if (!(params.gamma > 0.0)) {
        fail("gamma > 0 violated: gamma = " + std::to_string(params.gamma));
    }
    if (!(params.epsilon > 0.0)) {
        fail("epsilon > 0 violated: epsilon = " + std::to_string(params.epsilon));
    }
    if (params.max_iterations < 1) {
        fail("max_iterations >= 1 violated");
    }

    const bool alpha_constant = params.alpha.kind == AlphaRule::Kind::constant;
    switch (params.variant) {
        case AdmmVariant::classical:
            if (!alpha_constant || params.alpha.value != 0.0) {
                fail("classical: alpha_k == 0 violated");
            }
            break;
        case AdmmVariant::gadmm: {
            if (!alpha_constant || params.alpha.value != 0.0) {
                fail("gadmm: alpha_k == 0 violated");
            }
            if (!params.lambda_schedule) {
                fail("gadmm: lambda_schedule must be set");
                break;
            }
            for (int k = 1; k <= horizon; ++k) {
                const double lambda_k = params.lambda_schedule(k);
                if (!(lambda_k > 0.0 && lambda_k < 2.0)) {
                    std::ostringstream msg;
                    msg << "gadmm: lambda_k in (0, 2) violated at k = " << k
                        << ": lambda_k = " << lambda_k;
                    fail(msg.str());
                    break;
                }
            }
            break;
        }
        case AdmmVariant::iadmm_chen:
            if (!alpha_constant) {
                fail("iadmm_chen: the adaptive inertia rule is not defined for this variant");
            } else if (!(params.alpha.value >= 0.0 && params.alpha.value < 1.0)) {
                fail("iadmm_chen: alpha_k in [0, 1) violated: alpha = " +
                     std::to_string(params.alpha.value));
            }
            if (params.lambda_schedule) {
                fail("iadmm_chen: lambda is not a parameter of this variant");
            }
            if (params.proximal_s_scale < 0.0 || params.proximal_t_scale < 0.0) {
                fail("iadmm_chen: proximal scales must be nonnegative");
            }
            break;
        case AdmmVariant::inertial: {
            if (!params.lambda_schedule) {
                fail("inertial: lambda_schedule must be set");
                break;
            }
            const double alpha_bar =
                alpha_constant ? params.alpha.value : params.alpha.cap;
            if (!(alpha_bar >= 0.0 && alpha_bar < 1.0)) {
                fail("inertial: alpha bound in [0, 1) violated: " +
                     std::to_string(alpha_bar));
                break;
            }
            if (params.mode == InertiaMode::coupled) {
                if (!alpha_constant) {
                    fail("inertial/coupled: requires a nondecreasing (constant) "
                         "alpha; use the summable mode for the adaptive rule");
                    break;
                }
                if (!(params.sigma > 0.0)) {
                    fail("inertial/coupled: sigma > 0 violated");
                    break;
                }
                const double delta_lower = dr_delta_lower_bound(alpha_bar, params.sigma);
                const double delta = params.delta.value_or(1.0 + delta_lower);
                if (!(delta > delta_lower)) {
                    std::ostringstream msg;
                    msg << "inertial/coupled: delta > " << delta_lower
                        << " violated: delta = " << delta;
                    fail(msg.str());
                    break;
                }
                const double lambda_upper =
                    dr_lambda_upper_bound(alpha_bar, params.sigma, delta);
                for (int k = 1; k <= horizon; ++k) {
                    const double lambda_k = params.lambda_schedule(k);
                    if (!(lambda_k > 0.0 && lambda_k <= lambda_upper)) {
                        std::ostringstream msg;
                        msg << "inertial/coupled: 0 < lambda_k <= " << lambda_upper
                            << " violated at k = " << k << ": lambda_k = " << lambda_k;
                        fail(msg.str());
                        break;
                    }
                }
            } else {
                double lambda_min = 2.0;
                double lambda_max = 0.0;
                for (int k = 1; k <= horizon; ++k) {
                    const double lambda_k = params.lambda_schedule(k);
                    lambda_min = std::min(lambda_min, lambda_k);
                    lambda_max = std::max(lambda_max, lambda_k);
                }
                if (!(lambda_min > 0.0 && lambda_max < 2.0)) {
                    std::ostringstream msg;
                    msg << "inertial/summable: 0 < lambda_k < 2 violated: observed ["
                        << lambda_min << ", " << lambda_max << "]";
                    fail(msg.str());
                }
            }
            break;
        }
    }
    return report;
}

namespace {

AdmmState dispatch_step(const AdmmState& state, const TwoBlockProblem& problem,
                        const AdmmParams& params, const SubproblemOracle* oracle,
                        StepInfo* info) {
    switch (params.variant) {
        case AdmmVariant::classical:
            return step_classical(state, problem, params, oracle, info);
        case AdmmVariant::gadmm:
            return step_gadmm(state, problem, params, oracle, info);
        case AdmmVariant::iadmm_chen:
            return step_iadmm_chen(state, problem, params, oracle, info);
        case AdmmVariant::inertial:
            return step_inertial(state, problem, params, oracle, info);
    }
    throw std::logic_error("unknown ADMM variant");
}

}  // namespace

SolveReport solve(const TwoBlockProblem& problem, const AdmmParams& params,
                  const SubproblemOracle* oracle,
                  const std::optional<AdmmState>& initial,
                  const IterationCallback& on_iteration) {
    problem.validate();
    const ValidationReport validation = validate_params(params);
    if (!validation.ok) {
        throw std::invalid_argument("solve: invalid parameters: " +
                                    validation.to_string());
    }
    if ((!problem.M->identity_scale() || !problem.N->identity_scale()) &&
        oracle == nullptr) {
        throw std::invalid_argument(
            "solve: M or N is not a (scaled) identity; a SubproblemOracle is required");
    }

    SolveReport report;
    report.state = initial ? *initial : initial_admm_state(problem);

    const auto t0 = std::chrono::steady_clock::now();
    for (int k = 1; k <= params.max_iterations; ++k) {
        const AdmmState prev = report.state;
        StepInfo info;
        AdmmState next = dispatch_step(prev, problem, params, oracle, &info);
        if (!state_is_finite(next)) {
            report.status = SolveStatus::diverged;  // keep the last finite state
            break;
        }
        report.state = std::move(next);
        report.iterations = k;

        const StopCheck check = stopping_check(problem, prev, report.state, params.epsilon);
        TraceRow row;
        row.k = k;
        row.rel_u = check.rel_u;
        row.rel_v = check.rel_v;
        row.rel_b = check.rel_b;
        row.primal_obj = params.record_objective
                             ? problem.F->value(report.state.u) +
                                   problem.G->value(prev.v)
                             : std::numeric_limits<double>::quiet_NaN();
        row.r3 = (problem.M->apply(report.state.u) +
                  problem.N->apply(report.state.v) - problem.b)
                     .norm();
        row.alpha = info.alpha;
        row.lambda = info.lambda;
        row.inertia_sq = info.inertia_sq;
        if (params.record_rank) row.rank_u = numerical_rank(report.state.u);
        report.trace.push_back(row);

        if (on_iteration) on_iteration(report.state);
        if (check.stop) {
            report.status = SolveStatus::converged;
            break;
        }
    }
    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

}  // namespace iadmm
