#include "iadmm/dr.hpp"

#include <cmath>
#include <sstream>

namespace iadmm {

namespace {

double require_identity_scale(const LinearMap& map, const char* role) {
    const auto scale = map.identity_scale();
    if (!scale) {
        std::ostringstream msg;
        msg << "dual resolvent: operator " << role
            << " must be a (scaled) identity; supply a custom ResolventOracle otherwise";
        throw std::invalid_argument(msg.str());
    }
    return *scale;
}

}  // namespace

ResolventOracle resolvent_of(std::shared_ptr<const Proximable> f) {
    return ResolventOracle{[f = std::move(f)](const Matrix& point, double gamma) {
        return f->prox(point, gamma);
    }};
}

// J_{gamma A} for A = d(F* o (-M*)) with M = c I:
//   J(z) = -(1/c) prox_{gamma c^2 F*}(-c z),
// and prox of the scaled conjugate comes from conjugate_prox.
ResolventOracle dual_resolvent_left(const TwoBlockProblem& problem) {
    const double c = require_identity_scale(*problem.M, "M");
    auto f = problem.F;
    return ResolventOracle{[f, c](const Matrix& z, double gamma) {
        return (-1.0 / c) * conjugate_prox(*f, -c * z, gamma * c * c);
    }};
}

// J_{gamma B} for B = d(G* o (-N*)) + b: the constant shifts the resolvent
// argument by gamma b, then the same composition rule as the left side.
ResolventOracle dual_resolvent_right(const TwoBlockProblem& problem) {
    const double c = require_identity_scale(*problem.N, "N");
    auto g = problem.G;
    Matrix b = problem.b;
    return ResolventOracle{[g, c, b](const Matrix& z, double gamma) {
        return (-1.0 / c) * conjugate_prox(*g, -c * (z - gamma * b), gamma * c * c);
    }};
}

double dr_delta_lower_bound(double alpha_bar, double sigma) {
    return (alpha_bar * alpha_bar * (1.0 + alpha_bar) + alpha_bar * sigma) /
           (1.0 - alpha_bar * alpha_bar);
}

double dr_lambda_upper_bound(double alpha_bar, double sigma, double delta) {
    const double bracket =
        alpha_bar * (1.0 + alpha_bar) + alpha_bar * delta + sigma;
    return 2.0 * (delta - alpha_bar * bracket) / (delta * (1.0 + bracket));
}

std::string ValidationReport::to_string() const {
    if (ok) return "ok";
    std::ostringstream out;
    for (std::size_t i = 0; i < violations.size(); ++i) {
        if (i > 0) out << "; ";
        out << violations[i];
    }
    return out.str();
}

ValidationReport validate_params(const DrParams& params, int horizon) {
    ValidationReport report;
    auto fail = [&report](std::string msg) {
        report.ok = false;
        report.violations.push_back(std::move(msg));
    };

    if (!(params.gamma > 0.0)) {
        fail("gamma > 0 violated: gamma = " + std::to_string(params.gamma));
    }
    if (!params.alpha_schedule || !params.lambda_schedule) {
        fail("alpha_schedule and lambda_schedule must both be set");
        return report;
    }
    if (!(params.alpha_bar >= 0.0 && params.alpha_bar < 1.0)) {
        fail("0 <= alpha_bar < 1 violated: alpha_bar = " + std::to_string(params.alpha_bar));
        return report;
    }

    if (params.mode == DrMode::coupled) {
        if (!(params.sigma > 0.0)) {
            fail("sigma > 0 violated: sigma = " + std::to_string(params.sigma));
            return report;
        }
        const double delta_lower = dr_delta_lower_bound(params.alpha_bar, params.sigma);
        if (!(params.delta > delta_lower)) {
            std::ostringstream msg;
            msg << "delta > (alpha^2(1+alpha)+alpha*sigma)/(1-alpha^2) violated: delta = "
                << params.delta << " <= " << delta_lower;
            fail(msg.str());
            return report;
        }
        const double lambda_upper =
            dr_lambda_upper_bound(params.alpha_bar, params.sigma, params.delta);
        double alpha_prev = 0.0;
        for (int k = 1; k <= horizon; ++k) {
            const double alpha_k = params.alpha_schedule(k);
            const double lambda_k = params.lambda_schedule(k);
            if (alpha_k < 0.0 || alpha_k > params.alpha_bar) {
                std::ostringstream msg;
                msg << "0 <= alpha_k <= alpha_bar violated at k = " << k
                    << ": alpha_k = " << alpha_k << ", alpha_bar = " << params.alpha_bar;
                fail(msg.str());
                break;
            }
            if (k > 1 && alpha_k < alpha_prev) {
                std::ostringstream msg;
                msg << "alpha_k nondecreasing violated at k = " << k << ": "
                    << alpha_k << " < " << alpha_prev;
                fail(msg.str());
                break;
            }
            alpha_prev = alpha_k;
            if (!(lambda_k > 0.0 && lambda_k <= lambda_upper)) {
                std::ostringstream msg;
                msg << "0 < lambda_k <= 2(delta-alpha[alpha(1+alpha)+alpha*delta+sigma])"
                       "/(delta[1+alpha(1+alpha)+alpha*delta+sigma]) violated at k = "
                    << k << ": lambda_k = " << lambda_k << ", bound = " << lambda_upper;
                fail(msg.str());
                break;
            }
        }
    } else {
        double lambda_min = 2.0;
        double lambda_max = 0.0;
        for (int k = 1; k <= horizon; ++k) {
            const double alpha_k = params.alpha_schedule(k);
            const double lambda_k = params.lambda_schedule(k);
            if (alpha_k < 0.0 || alpha_k > params.alpha_bar) {
                std::ostringstream msg;
                msg << "0 <= alpha_k <= alpha_bar < 1 violated at k = " << k
                    << ": alpha_k = " << alpha_k << ", alpha_bar = " << params.alpha_bar;
                fail(msg.str());
                break;
            }
            lambda_min = std::min(lambda_min, lambda_k);
            lambda_max = std::max(lambda_max, lambda_k);
        }
        if (report.ok && !(lambda_min > 0.0 && lambda_max < 2.0)) {
            std::ostringstream msg;
            msg << "0 < lambda_low <= lambda_k <= lambda_high < 2 violated: observed ["
                << lambda_min << ", " << lambda_max << "]";
            fail(msg.str());
        }
    }
    return report;
}

DrState dr_initial_state(const Matrix& w0) {
    DrState state;
    state.w_prev = w0;
    state.w_curr = w0;
    state.y = Matrix::Zero(w0.rows(), w0.cols());
    state.x = Matrix::Zero(w0.rows(), w0.cols());
    return state;
}

std::string to_string(SolveStatus status) {
    switch (status) {
        case SolveStatus::converged: return "converged";
        case SolveStatus::budget_exhausted: return "budget-exhausted";
        case SolveStatus::diverged: return "diverged";
    }
    return "unknown";
}

DrState dr_step(const DrState& state, const ResolventOracle& a,
                const ResolventOracle& b, const DrParams& params) {
    const int k = state.iteration + 1;
    const double alpha_k = params.alpha_schedule(k);
    const double lambda_k = params.lambda_schedule(k);

    const Matrix base = state.w_curr + alpha_k * (state.w_curr - state.w_prev);

    DrState next;
    next.y = b.resolve(base, params.gamma);
    next.x = a.resolve(2.0 * next.y - base, params.gamma);
    next.w_prev = state.w_curr;
    next.w_curr = base + lambda_k * (next.x - next.y);
    next.iteration = k;
    next.fejer_sum =
        state.fejer_sum + (next.w_curr - next.w_prev).squaredNorm();

    if (!is_finite(next.y) || !is_finite(next.x) || !is_finite(next.w_curr)) {
        throw DrDivergedError("dr_step: non-finite iterate at k = " + std::to_string(k),
                              state);
    }
    return next;
}

DrReport dr_solve(const ResolventOracle& a, const ResolventOracle& b,
                  const DrParams& params, const Matrix& w0,
                  const StoppingRule& stop) {
    DrReport report;
    report.state = dr_initial_state(w0);
    for (int k = 1; k <= stop.max_iterations; ++k) {
        double fejer_before = report.state.fejer_sum;
        try {
            report.state = dr_step(report.state, a, b, params);
        } catch (const DrDivergedError& err) {
            report.status = SolveStatus::diverged;
            report.state = err.last_finite_state;
            report.iterations = k - 1;
            return report;
        }
        const double gap = (report.state.y - report.state.x).norm();
        report.trace.push_back(
            DrTraceRow{k, gap, report.state.fejer_sum - fejer_before});
        report.iterations = k;
        if (gap <= stop.tolerance) {
            report.status = SolveStatus::converged;
            return report;
        }
    }
    report.status = SolveStatus::budget_exhausted;
    return report;
}

}  // namespace iadmm
