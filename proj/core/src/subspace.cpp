#include "seqmusic/subspace.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace seqmusic {

namespace {

template <typename Scalar>
void require_finite(const Matrix<Scalar>& M, const char* who) {
  if (!M.allFinite()) throw ParameterError(std::string(who) + ": non-finite entries");
}

}  // namespace

template <typename Scalar>
bool has_orthonormal_columns(const Matrix<Scalar>& basis, double tol) {
  const Matrix<Scalar> gram = basis.adjoint() * basis;
  const Matrix<Scalar> eye = Matrix<Scalar>::Identity(basis.cols(), basis.cols());
  return (gram - eye).cwiseAbs().maxCoeff() <= tol;
}

template <typename Scalar>
Subspace<Scalar>::Subspace(Matrix<Scalar> basis) : basis_(std::move(basis)) {
  if (basis_.rows() < 1 || basis_.cols() < 1)
    throw ParameterError("Subspace: basis must be nonempty");
  if (basis_.cols() > basis_.rows())
    throw ParameterError("Subspace: dim exceeds ambient dimension");
  require_finite(basis_, "Subspace");
  if (!has_orthonormal_columns(basis_))
    throw ParameterError("Subspace: basis columns are not orthonormal");
}

template <typename Scalar>
Subspace<Scalar> principal_subspace(const Matrix<Scalar>& M, Eigen::Index d) {
  require_finite(M, "principal_subspace");
  if (d < 1 || d > std::min(M.rows(), M.cols()))
    throw ParameterError("principal_subspace: d out of range");
  Eigen::JacobiSVD<Matrix<Scalar>> svd(M, Eigen::ComputeThinU);
  return Subspace<Scalar>(svd.matrixU().leftCols(d));
}

template <typename Scalar>
double residual_energy(const Subspace<Scalar>& S, const Vector<Scalar>& a) {
  if (a.size() != S.ambient_dim())
    throw ParameterError("residual_energy: vector length does not match ambient dimension");
  // a - Q(Q^H a): never materializes the m x m projector.
  const Vector<Scalar> resid = a - S.basis() * (S.basis().adjoint() * a);
  return resid.squaredNorm();
}

template <typename Scalar>
Eigen::Index numerical_rank(const Matrix<Scalar>& M, double rel_tol) {
  require_finite(M, "numerical_rank");
  if (!(rel_tol > 0.0 && rel_tol < 1.0))
    throw ParameterError("numerical_rank: rel_tol must lie in (0, 1)");
  Eigen::JacobiSVD<Matrix<Scalar>> svd(M);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0) return 0;
  const double cutoff = rel_tol * sv(0);
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > cutoff) ++rank;
  return rank;
}

template <typename Scalar>
double subspace_distance(const Subspace<Scalar>& S1, const Subspace<Scalar>& S2) {
  if (S1.ambient_dim() != S2.ambient_dim())
    throw ParameterError("subspace_distance: ambient dimensions differ");
  const Matrix<Scalar> diff = S1.basis() * S1.basis().adjoint() -
                              S2.basis() * S2.basis().adjoint();
  Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> eig(diff, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().cwiseAbs().maxCoeff();
}

template <typename Scalar>
Matrix<Scalar> select_columns(const Matrix<Scalar>& A, const IndexSet& I) {
  Matrix<Scalar> out(A.rows(), static_cast<Eigen::Index>(I.size()));
  for (std::size_t j = 0; j < I.size(); ++j) {
    if (I[j] < 0 || I[j] >= A.cols())
      throw ParameterError("select_columns: index out of range");
    out.col(static_cast<Eigen::Index>(j)) = A.col(I[j]);
  }
  return out;
}

template <typename Scalar>
Matrix<Scalar> augment(const Matrix<Scalar>& A, const IndexSet& I, const Matrix<Scalar>& B) {
  if (B.rows() != A.rows()) throw ParameterError("augment: row counts differ");
  Matrix<Scalar> out(A.rows(), static_cast<Eigen::Index>(I.size()) + B.cols());
  out.leftCols(static_cast<Eigen::Index>(I.size())) = select_columns(A, I);
  out.rightCols(B.cols()) = B;
  return out;
}

template <typename Scalar>
Eigen::Index augmented_rank(const Matrix<Scalar>& A, const IndexSet& I, const Matrix<Scalar>& B,
                            double rel_tol) {
  return numerical_rank(augment(A, I, B), rel_tol);
}

#define SEQMUSIC_INSTANTIATE(S)                                                              \
  template bool has_orthonormal_columns<S>(const Matrix<S>&, double);                        \
  template class Subspace<S>;                                                                \
  template Subspace<S> principal_subspace<S>(const Matrix<S>&, Eigen::Index);                \
  template double residual_energy<S>(const Subspace<S>&, const Vector<S>&);                  \
  template Eigen::Index numerical_rank<S>(const Matrix<S>&, double);                         \
  template double subspace_distance<S>(const Subspace<S>&, const Subspace<S>&);              \
  template Matrix<S> select_columns<S>(const Matrix<S>&, const IndexSet&);                   \
  template Matrix<S> augment<S>(const Matrix<S>&, const IndexSet&, const Matrix<S>&);        \
  template Eigen::Index augmented_rank<S>(const Matrix<S>&, const IndexSet&, const Matrix<S>&, \
                                          double);

SEQMUSIC_INSTANTIATE(Real)
SEQMUSIC_INSTANTIATE(Complex)
#undef SEQMUSIC_INSTANTIATE

}  // namespace seqmusic
