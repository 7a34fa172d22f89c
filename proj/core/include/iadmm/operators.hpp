#ifndef IADMM_OPERATORS_HPP_
#define IADMM_OPERATORS_HPP_

#include <limits>
#include <memory>
#include <optional>

#include "iadmm/linalg.hpp"

namespace iadmm {

inline constexpr double kPlusInfinity = std::numeric_limits<double>::infinity();

/// Bounded linear operator between matrix spaces: apply plus its adjoint,
/// <adjoint_apply(y), x> = <y, apply(x)>. Maps declare whether they are a
/// scalar multiple of the identity (solvers use that for closed-form
/// subproblem steps) and whether they have full column rank (trusted, not
/// verified; see the solver preconditions).
class LinearMap {
  public:
    virtual ~LinearMap() = default;

    virtual Shape domain_shape() const = 0;
    virtual Shape codomain_shape() const = 0;
    virtual Matrix apply(const Matrix& x) const = 0;
    virtual Matrix adjoint_apply(const Matrix& y) const = 0;

    /// c such that this map equals c * I, when declared by the constructor.
    virtual std::optional<double> identity_scale() const { return std::nullopt; }
    virtual bool has_full_column_rank() const = 0;
};

class IdentityMap final : public LinearMap {
  public:
    explicit IdentityMap(Shape shape) : shape_(shape) {}

    Shape domain_shape() const override { return shape_; }
    Shape codomain_shape() const override { return shape_; }
    Matrix apply(const Matrix& x) const override { return x; }
    Matrix adjoint_apply(const Matrix& y) const override { return y; }
    std::optional<double> identity_scale() const override { return 1.0; }
    bool has_full_column_rank() const override { return true; }

  private:
    Shape shape_;
};

class ScaledIdentityMap final : public LinearMap {
  public:
    ScaledIdentityMap(Shape shape, double scale);

    Shape domain_shape() const override { return shape_; }
    Shape codomain_shape() const override { return shape_; }
    Matrix apply(const Matrix& x) const override { return scale_ * x; }
    Matrix adjoint_apply(const Matrix& y) const override { return scale_ * y; }
    std::optional<double> identity_scale() const override { return scale_; }
    bool has_full_column_rank() const override { return true; }

  private:
    Shape shape_;
    double scale_;
};

/// Left multiplication X -> A * X on X of shape (A.cols() x block_cols).
class MatrixProductMap final : public LinearMap {
  public:
    MatrixProductMap(Matrix a, Index block_cols, bool full_column_rank);

    Shape domain_shape() const override { return Shape{a_.cols(), block_cols_}; }
    Shape codomain_shape() const override { return Shape{a_.rows(), block_cols_}; }
    Matrix apply(const Matrix& x) const override { return a_ * x; }
    Matrix adjoint_apply(const Matrix& y) const override { return a_.transpose() * y; }
    bool has_full_column_rank() const override { return full_column_rank_; }

  private:
    Matrix a_;
    Index block_cols_;
    bool full_column_rank_;
};

/// Proper convex lower semicontinuous function exposing its value (extended
/// real: +infinity encodes indicator infeasibility and never mixes with
/// iterate arithmetic) and its proximal map
///     prox(x, step) = argmin_z { step * f(z) + 0.5 * ||z - x||_F^2 }.
/// conjugate_value is optional; when absent, dual-objective diagnostics are
/// skipped.
class Proximable {
  public:
    virtual ~Proximable() = default;

    virtual double value(const Matrix& x) const = 0;
    virtual Matrix prox(const Matrix& x, double step) const = 0;
    virtual std::optional<double> conjugate_value(const Matrix&) const {
        return std::nullopt;
    }
};

/// Entrywise sign(x) * max(|x| - tau, 0); the prox of tau * ||.||_1.
Matrix soft_threshold(const Matrix& x, double tau);

/// Singular value thresholding: U * diag(max(sigma - tau, 0)) * V^T from the
/// thin SVD of x; the prox of tau * ||.||_*.
Matrix svt(const Matrix& x, double tau);

/// prox of gamma * f^* at x via the Moreau identity
///     prox_{gamma f*}(x) = x - gamma * prox_{f/gamma}(x / gamma).
Matrix conjugate_prox(const Proximable& f, const Matrix& x, double gamma);

/// Nuclear norm ||u||_* = sum of singular values. Conjugate: indicator of
/// the spectral-norm unit ball.
class NuclearNorm final : public Proximable {
  public:
    double value(const Matrix& x) const override;
    Matrix prox(const Matrix& x, double step) const override;
    std::optional<double> conjugate_value(const Matrix& x) const override;
};

/// weight * ||v||_1. Conjugate: indicator of {||.||_inf <= weight}.
class WeightedL1 final : public Proximable {
  public:
    explicit WeightedL1(double weight);

    double value(const Matrix& x) const override;
    Matrix prox(const Matrix& x, double step) const override;
    std::optional<double> conjugate_value(const Matrix& x) const override;

    double weight() const { return weight_; }

  private:
    double weight_;
};

/// 0.5 * ||x - center||_F^2 with closed-form prox and conjugate.
class SquaredDistance final : public Proximable {
  public:
    explicit SquaredDistance(Matrix center) : center_(std::move(center)) {}

    double value(const Matrix& x) const override {
        return 0.5 * (x - center_).squaredNorm();
    }
    Matrix prox(const Matrix& x, double step) const override {
        return (x + step * center_) / (1.0 + step);
    }
    std::optional<double> conjugate_value(const Matrix& s) const override {
        return 0.5 * s.squaredNorm() + (center_.array() * s.array()).sum();
    }

  private:
    Matrix center_;
};

/// The zero function; prox is the identity. Conjugate: indicator of {0}.
class ZeroFunction final : public Proximable {
  public:
    double value(const Matrix&) const override { return 0.0; }
    Matrix prox(const Matrix& x, double) const override { return x; }
    std::optional<double> conjugate_value(const Matrix& x) const override {
        return x.isZero(1e-12) ? 0.0 : kPlusInfinity;
    }
};

/// Problem data for  min F(u) + G(v)  s.t.  M u + N v = b.
struct TwoBlockProblem {
    std::shared_ptr<const Proximable> F;
    std::shared_ptr<const Proximable> G;
    std::shared_ptr<const LinearMap> M;
    std::shared_ptr<const LinearMap> N;
    Matrix b;

    /// Throws std::invalid_argument unless codomain(M) = codomain(N) = shape(b).
    void validate() const;
};

double objective(const TwoBlockProblem& problem, const Matrix& u, const Matrix& v);

}  // namespace iadmm

#endif  // IADMM_OPERATORS_HPP_
