#include "iadmm/operators.hpp"

#include <cmath>
#include <stdexcept>

namespace iadmm {

ScaledIdentityMap::ScaledIdentityMap(Shape shape, double scale)
    : shape_(shape), scale_(scale) {
    if (scale == 0.0 || !std::isfinite(scale)) {
        throw std::invalid_argument("ScaledIdentityMap: scale must be finite and nonzero");
    }
}

MatrixProductMap::MatrixProductMap(Matrix a, Index block_cols, bool full_column_rank)
    : a_(std::move(a)), block_cols_(block_cols), full_column_rank_(full_column_rank) {
    if (a_.rows() < 1 || a_.cols() < 1 || block_cols_ < 1) {
        throw std::invalid_argument("MatrixProductMap: degenerate shape");
    }
}

Matrix soft_threshold(const Matrix& x, double tau) {
    if (!(tau > 0.0)) {
        throw std::invalid_argument("soft_threshold: tau must be positive");
    }
    return x.unaryExpr([tau](double t) {
        const double mag = std::abs(t) - tau;
        return mag > 0.0 ? (t > 0.0 ? mag : -mag) : 0.0;
    });
}

Matrix svt(const Matrix& x, double tau) {
    if (!(tau > 0.0)) {
        throw std::invalid_argument("svt: tau must be positive");
    }
    SvdResult dec = svd(x);
    Vector shrunk = (dec.singular_values.array() - tau).max(0.0);
    return dec.U * shrunk.asDiagonal() * dec.V.transpose();
}

Matrix conjugate_prox(const Proximable& f, const Matrix& x, double gamma) {
    if (!(gamma > 0.0)) {
        throw std::invalid_argument("conjugate_prox: gamma must be positive");
    }
    return x - gamma * f.prox(x / gamma, 1.0 / gamma);
}

double NuclearNorm::value(const Matrix& x) const {
    return singular_values(x).sum();
}

Matrix NuclearNorm::prox(const Matrix& x, double step) const {
    return svt(x, step);
}

std::optional<double> NuclearNorm::conjugate_value(const Matrix& x) const {
    // Indicator of the spectral-norm unit ball, with a small relative slack
    // so converged dual iterates sitting on the boundary evaluate as feasible.
    const Vector sigma = singular_values(x);
    const double top = sigma.size() > 0 ? sigma(0) : 0.0;
    return top <= 1.0 + 1e-9 ? 0.0 : kPlusInfinity;
}

WeightedL1::WeightedL1(double weight) : weight_(weight) {
    if (!(weight > 0.0)) {
        throw std::invalid_argument("WeightedL1: weight must be positive");
    }
}

double WeightedL1::value(const Matrix& x) const {
    return weight_ * x.array().abs().sum();
}

Matrix WeightedL1::prox(const Matrix& x, double step) const {
    return soft_threshold(x, weight_ * step);
}

std::optional<double> WeightedL1::conjugate_value(const Matrix& x) const {
    const double top = x.array().abs().maxCoeff();
    return top <= weight_ * (1.0 + 1e-9) ? 0.0 : kPlusInfinity;
}

void TwoBlockProblem::validate() const {
    if (!F || !G || !M || !N) {
        throw std::invalid_argument("TwoBlockProblem: F, G, M, N must all be set");
    }
    const Shape target = shape_of(b);
    if (M->codomain_shape() != target || N->codomain_shape() != target) {
        throw std::invalid_argument(
            "TwoBlockProblem: codomain(M) and codomain(N) must match shape of b");
    }
}

double objective(const TwoBlockProblem& problem, const Matrix& u, const Matrix& v) {
    return problem.F->value(u) + problem.G->value(v);
}

}  // namespace iadmm
