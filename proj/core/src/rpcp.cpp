#include "iadmm/rpcp.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>

#include "iadmm/rng.hpp"

namespace iadmm {

RpcpInstance generate_rpcp(Index m, Index r, Index nnz, std::uint64_t seed) {
    if (m < 1) throw std::invalid_argument("generate_rpcp: m must be >= 1");
    if (r < 1 || r > m) throw std::invalid_argument("generate_rpcp: need 1 <= r <= m");
    if (nnz < 0 || nnz > m * m) {
        throw std::invalid_argument("generate_rpcp: need 0 <= nnz <= m^2");
    }

    SeededRng rng(seed);
    RpcpInstance instance;
    instance.m = m;
    instance.r = r;
    instance.nnz = nnz;
    instance.seed = seed;

    const Matrix left = randn_matrix(rng, m, r);
    const Matrix right = randn_matrix(rng, m, r);
    instance.u_star = left * right.transpose();
    instance.v_star = nnz > 0 ? sparse_uniform_matrix(rng, m, m, nnz, -500.0, 500.0)
                              : Matrix::Zero(m, m);
    instance.b = instance.u_star + instance.v_star;
    instance.mu = 1.0 / std::sqrt(static_cast<double>(m));
    return instance;
}

TwoBlockProblem as_problem(const RpcpInstance& instance) {
    TwoBlockProblem problem;
    problem.F = std::make_shared<NuclearNorm>();
    problem.G = std::make_shared<WeightedL1>(instance.mu);
    const Shape shape{instance.m, instance.m};
    problem.M = std::make_shared<IdentityMap>(shape);
    problem.N = std::make_shared<IdentityMap>(shape);
    problem.b = instance.b;
    problem.validate();
    return problem;
}

RecoveryMetrics recovery_metrics(const RpcpInstance& instance, const Matrix& u_k,
                                 const Matrix& v_k) {
    if (shape_of(u_k) != shape_of(instance.u_star) ||
        shape_of(v_k) != shape_of(instance.v_star)) {
        throw std::invalid_argument("recovery_metrics: shape mismatch");
    }
    RecoveryMetrics metrics;
    metrics.rel_u_star =
        (u_k - instance.u_star).norm() / instance.u_star.norm();
    metrics.rel_v_star =
        instance.v_star.norm() > 0.0
            ? (v_k - instance.v_star).norm() / instance.v_star.norm()
            : (v_k - instance.v_star).norm();
    metrics.rank_u = numerical_rank(u_k);
    return metrics;
}

}  // namespace iadmm
