#pragma once

#include "seqmusic/errors.hpp"
#include "seqmusic/types.hpp"

namespace seqmusic {

/// Columns of `basis` must be orthonormal within this tolerance for a
/// Subspace to be constructible.
inline constexpr double kOrthonormalTol = 1e-10;

/// Relative singular-value threshold used by noiseless rank oracles.
inline constexpr double kDefaultRankTol = 1e-8;

template <typename Scalar>
bool has_orthonormal_columns(const Matrix<Scalar>& basis, double tol = kOrthonormalTol);

/// A d-dimensional subspace of an m-dimensional ambient space, held as an
/// m x d matrix with orthonormal columns. Downstream code only ever depends
/// on the span, never on the particular basis.
template <typename Scalar>
class Subspace {
 public:
  explicit Subspace(Matrix<Scalar> basis);

  Eigen::Index ambient_dim() const { return basis_.rows(); }
  Eigen::Index dim() const { return basis_.cols(); }
  const Matrix<Scalar>& basis() const { return basis_; }

 private:
  Matrix<Scalar> basis_;
};

/// Span of the d leading left singular vectors of M. Deterministic for a
/// fixed input; degenerate singular values may yield any valid basis of the
/// span, so callers compare subspaces, not bases.
template <typename Scalar>
Subspace<Scalar> principal_subspace(const Matrix<Scalar>& M, Eigen::Index d);

/// ||(I - QQ^H) a||^2 for Q = S.basis(). Exact zero is unattainable in
/// floating point; callers compare against tolerances.
template <typename Scalar>
double residual_energy(const Subspace<Scalar>& S, const Vector<Scalar>& a);

/// Number of singular values above rel_tol * sigma_max; 0 for the zero
/// matrix. rel_tol must lie in (0, 1).
template <typename Scalar>
Eigen::Index numerical_rank(const Matrix<Scalar>& M, double rel_tol = kDefaultRankTol);

/// Spectral norm of the projector difference: sin of the largest principal
/// angle. Lies in [0, 1] for equal dimensions.
template <typename Scalar>
double subspace_distance(const Subspace<Scalar>& S1, const Subspace<Scalar>& S2);

/// Copy of the columns of A selected by I (order preserved).
template <typename Scalar>
Matrix<Scalar> select_columns(const Matrix<Scalar>& A, const IndexSet& I);

/// Horizontal concatenation [A_I B].
template <typename Scalar>
Matrix<Scalar> augment(const Matrix<Scalar>& A, const IndexSet& I, const Matrix<Scalar>& B);

/// numerical_rank of [A_I B]; the rank-identity oracle.
template <typename Scalar>
Eigen::Index augmented_rank(const Matrix<Scalar>& A, const IndexSet& I, const Matrix<Scalar>& B,
                            double rel_tol = kDefaultRankTol);

}  // namespace seqmusic
