#ifndef IADMM_RPCP_HPP_
#define IADMM_RPCP_HPP_

#include <cstdint>

#include "iadmm/linalg.hpp"
#include "iadmm/operators.hpp"

namespace iadmm {

/// Synthetic robust principal component pursuit instance:
///   min ||u||_* + mu ||v||_1   s.t.  u + v = b,
/// with b = u_star + v_star, u_star = L R^T for L, R ~ standard normal
/// (m x r), v_star holding nnz uniform values on [-500, 500] on a uniformly
/// drawn support, and mu = 1/sqrt(m).
struct RpcpInstance {
    Index m = 0;
    Index r = 0;
    Index nnz = 0;
    Matrix u_star;
    Matrix v_star;
    Matrix b;
    double mu = 0.0;
    std::uint64_t seed = 0;
};

RpcpInstance generate_rpcp(Index m, Index r, Index nnz, std::uint64_t seed);

/// The instance as a two-block problem: F nuclear norm, G = mu * l1,
/// M = N = I. Conjugate indicators are attached, so dual diagnostics work.
TwoBlockProblem as_problem(const RpcpInstance& instance);

struct RecoveryMetrics {
    double rel_u_star = 0.0;  // ||u_k - u_star||_F / ||u_star||_F
    double rel_v_star = 0.0;
    Index rank_u = 0;
};

RecoveryMetrics recovery_metrics(const RpcpInstance& instance, const Matrix& u_k,
                                 const Matrix& v_k);

}  // namespace iadmm

#endif  // IADMM_RPCP_HPP_
