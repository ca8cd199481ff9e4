#pragma once

#include <cstdint>
#include <limits>

#include "seqmusic/subspace.hpp"
#include "seqmusic/types.hpp"

namespace seqmusic {

enum class MatrixFamily { gaussian, fourier };

/// Column-normalized m x n dictionary plus generation metadata.
template <typename Scalar>
struct SensingMatrix {
  Matrix<Scalar> matrix;
  MatrixFamily family = MatrixFamily::gaussian;
  double mean = 0.0;  ///< pre-normalization entry mean (gaussian family)
  std::uint64_t seed = 0;

  Eigen::Index rows() const { return matrix.rows(); }
  Eigen::Index cols() const { return matrix.cols(); }
};

/// Throws unless every column of `matrix` has unit norm within 1e-12.
template <typename Scalar>
void validate_unit_columns(const Matrix<Scalar>& matrix, double tol = 1e-12);

/// Wraps an arbitrary dictionary after normalizing its columns; test helper
/// and entry point for externally supplied dictionaries.
template <typename Scalar>
SensingMatrix<Scalar> make_sensing(Matrix<Scalar> matrix,
                                   MatrixFamily family = MatrixFamily::gaussian);

/// Row-sparse source: support indices plus the k x N coefficient block
/// coeffs = Psi * diag(tau^0..tau^(r-1)) * Phi with rank exactly rank_r.
template <typename Scalar>
struct GroundTruth {
  int n = 0;
  IndexSet support;        ///< sorted, |support| = k
  Matrix<Scalar> coeffs;   ///< k x N, rows aligned with support
  int rank_r = 0;
  double tau = 1.0;
  int resample_count = 0;  ///< degenerate draws discarded during generation
};

/// Observations Y = A_support * coeffs + W with the realized SNR recorded.
template <typename Scalar>
struct MeasurementEnsemble {
  Matrix<Scalar> observations;  ///< m x N
  double snr_db = std::numeric_limits<double>::infinity();
  std::uint64_t noise_seed = 0;
};

/// Canonical MMV form: the dictionary plus an orthonormal rank-r estimate of
/// the signal subspace of Y.
template <typename Scalar>
struct CanonicalProblem {
  SensingMatrix<Scalar> sensing;
  Subspace<Scalar> signal_subspace;
  int rank = 0;
};

/// The raw i.i.d. normal(mean, 1/m) draw behind gen_gaussian_sensing,
/// before column normalization. Exposed so tests can check the draw's
/// statistics; gen_gaussian_sensing(m, n, mean, seed) normalizes exactly
/// this matrix.
Matrix<Real> gaussian_raw_entries(int m, int n, double mean, std::uint64_t seed);

SensingMatrix<Real> gen_gaussian_sensing(int m, int n, double mean, std::uint64_t seed);

/// n x n unitary DFT matrix F(j, l) = exp(-2*pi*i*j*l/n) / sqrt(n).
Matrix<Complex> dft_matrix(int n);

/// m rows of the unitary DFT drawn uniformly without replacement, columns
/// rescaled back to unit norm.
SensingMatrix<Complex> gen_fourier_sensing(int m, int n, std::uint64_t seed);

/// Diagonal of the conditioning factor: (tau^0, ..., tau^(r-1)).
Vector<Real> condition_diagonal(double tau, int r);

template <typename Scalar>
GroundTruth<Scalar> gen_ground_truth(int n, int k, int r, int N, double tau, std::uint64_t seed);

template <typename Scalar>
MeasurementEnsemble<Scalar> synthesize(const SensingMatrix<Scalar>& A,
                                       const GroundTruth<Scalar>& truth, double snr_db,
                                       std::uint64_t noise_seed);

/// Noiseless synthesis shortcut: B = A_support * coeffs.
template <typename Scalar>
Matrix<Scalar> noiseless_observations(const SensingMatrix<Scalar>& A,
                                      const GroundTruth<Scalar>& truth);

template <typename Scalar>
CanonicalProblem<Scalar> canonicalize(const SensingMatrix<Scalar>& A,
                                      const MeasurementEnsemble<Scalar>& measurements, int r);

}  // namespace seqmusic
