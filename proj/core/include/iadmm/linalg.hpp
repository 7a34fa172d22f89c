#ifndef IADMM_LINALG_HPP_
#define IADMM_LINALG_HPP_

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace iadmm {

// All solver state lives in dense real matrices. Vectors are n x 1 matrices;
// scalars are 1 x 1. Entries admitted into solver state must be finite.
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

struct Shape {
    Index rows = 0;
    Index cols = 0;

    bool operator==(const Shape&) const = default;
};

inline Shape shape_of(const Matrix& a) { return Shape{a.rows(), a.cols()}; }

inline bool is_finite(const Matrix& a) { return a.allFinite(); }

/// Thrown when the iterative SVD fails to converge or is handed a
/// non-finite matrix. Never returns silent garbage.
class SvdError : public std::runtime_error {
  public:
    explicit SvdError(const std::string& what) : std::runtime_error(what) {}
};

/// Thin SVD A = U * diag(singular_values) * V^T with k = min(rows, cols).
/// singular_values are nonincreasing and nonnegative; U, V have orthonormal
/// columns. Reconstruction holds to 1e-10 * max(1, ||A||_F).
struct SvdResult {
    Matrix U;
    Vector singular_values;
    Matrix V;

    Matrix reconstruct() const {
        return U * singular_values.asDiagonal() * V.transpose();
    }
};

SvdResult svd(const Matrix& a);

/// Singular values only (cheaper than a full decomposition).
Vector singular_values(const Matrix& a);

double frobenius_norm(const Matrix& a);

/// Count of singular values above rel_tol * sigma_max. Zero matrices have
/// rank 0.
Index numerical_rank(const Matrix& a, double rel_tol = 1e-6);

}  // namespace iadmm

#endif  // IADMM_LINALG_HPP_
