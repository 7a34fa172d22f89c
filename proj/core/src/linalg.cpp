#include "iadmm/linalg.hpp"

#include <Eigen/SVD>
#include <cmath>

namespace iadmm {

SvdResult svd(const Matrix& a) {
    if (!is_finite(a)) {
        throw SvdError("svd: input matrix has non-finite entries");
    }
    Eigen::BDCSVD<Matrix> dec(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (dec.info() != Eigen::Success) {
        throw SvdError("svd: bidiagonal divide-and-conquer SVD did not converge");
    }
    return SvdResult{dec.matrixU(), dec.singularValues(), dec.matrixV()};
}

Vector singular_values(const Matrix& a) {
    if (!is_finite(a)) {
        throw SvdError("singular_values: input matrix has non-finite entries");
    }
    Eigen::BDCSVD<Matrix> dec(a);
    if (dec.info() != Eigen::Success) {
        throw SvdError("singular_values: SVD did not converge");
    }
    return dec.singularValues();
}

double frobenius_norm(const Matrix& a) { return a.norm(); }

Index numerical_rank(const Matrix& a, double rel_tol) {
    const Vector sigma = singular_values(a);
    if (sigma.size() == 0 || sigma(0) == 0.0) return 0;
    const double cut = rel_tol * sigma(0);
    Index rank = 0;
    for (Index i = 0; i < sigma.size(); ++i) {
        if (sigma(i) > cut) ++rank;
    }
    return rank;
}

}  // namespace iadmm
