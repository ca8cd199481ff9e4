#include "seqmusic/problem.hpp"

#include <Eigen/QR>
#include <cmath>
#include <numbers>

#include "seqmusic/rng.hpp"

namespace seqmusic {

namespace {

constexpr int kMaxResampleAttempts = 16;

template <typename Scalar>
Matrix<Scalar> normalize_columns(Matrix<Scalar> M) {
  for (Eigen::Index j = 0; j < M.cols(); ++j) {
    const double nrm = M.col(j).norm();
    if (nrm < 1e-300) throw DegenerateDictionaryError("zero column in sensing draw");
    M.col(j) /= nrm;
  }
  return M;
}

}  // namespace

template <typename Scalar>
void validate_unit_columns(const Matrix<Scalar>& matrix, double tol) {
  for (Eigen::Index j = 0; j < matrix.cols(); ++j)
    if (std::abs(matrix.col(j).norm() - 1.0) > tol)
      throw ParameterError("sensing matrix column is not unit-norm");
}

template <typename Scalar>
SensingMatrix<Scalar> make_sensing(Matrix<Scalar> matrix, MatrixFamily family) {
  SensingMatrix<Scalar> out;
  out.matrix = normalize_columns(std::move(matrix));
  out.family = family;
  return out;
}

Matrix<Real> gaussian_raw_entries(int m, int n, double mean, std::uint64_t seed) {
  if (m < 1 || m >= n)
    throw ParameterError("gaussian sensing: need 1 <= m < n (underdetermined regime)");
  Engine engine = make_engine(seed);
  return normal_matrix<Real>(m, n, mean, 1.0 / m, engine);
}

SensingMatrix<Real> gen_gaussian_sensing(int m, int n, double mean, std::uint64_t seed) {
  SensingMatrix<Real> out;
  out.matrix = normalize_columns(gaussian_raw_entries(m, n, mean, seed));
  out.family = MatrixFamily::gaussian;
  out.mean = mean;
  out.seed = seed;
  return out;
}

Matrix<Complex> dft_matrix(int n) {
  if (n < 1) throw ParameterError("dft_matrix: n must be positive");
  Matrix<Complex> F(n, n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (Eigen::Index l = 0; l < n; ++l)
    for (Eigen::Index j = 0; j < n; ++j) {
      const double phase = -2.0 * std::numbers::pi * static_cast<double>(j) *
                           static_cast<double>(l) / static_cast<double>(n);
      F(j, l) = Complex(std::cos(phase) * scale, std::sin(phase) * scale);
    }
  return F;
}

SensingMatrix<Complex> gen_fourier_sensing(int m, int n, std::uint64_t seed) {
  if (m < 1 || m >= n)
    throw ParameterError("fourier sensing: need 1 <= m < n (underdetermined regime)");
  Engine engine = make_engine(seed);
  const IndexSet rows = sample_without_replacement(n, m, engine);
  const Matrix<Complex> F = dft_matrix(n);
  Matrix<Complex> sub(m, n);
  for (int i = 0; i < m; ++i) sub.row(i) = F.row(rows[static_cast<std::size_t>(i)]);
  SensingMatrix<Complex> out;
  out.matrix = normalize_columns(std::move(sub));
  out.family = MatrixFamily::fourier;
  out.seed = seed;
  return out;
}

Vector<Real> condition_diagonal(double tau, int r) {
  if (r < 1) throw ParameterError("condition_diagonal: r must be positive");
  if (!(tau > 0.0 && tau <= 1.0)) throw ParameterError("condition_diagonal: tau must lie in (0, 1]");
  Vector<Real> lambda(r);
  for (int j = 0; j < r; ++j) lambda(j) = std::pow(tau, j);
  return lambda;
}

template <typename Scalar>
GroundTruth<Scalar> gen_ground_truth(int n, int k, int r, int N, double tau, std::uint64_t seed) {
  if (k < 1 || r < 1 || N < 1) throw ParameterError("gen_ground_truth: counts must be positive");
  if (!(r <= k && k <= n)) throw ParameterError("gen_ground_truth: need r <= k <= n");
  if (r > N) throw ParameterError("gen_ground_truth: need r <= N");
  if (!(tau > 0.0 && tau <= 1.0)) throw ParameterError("gen_ground_truth: tau must lie in (0, 1]");

  const Vector<Real> lambda = condition_diagonal(tau, r);

  GroundTruth<Scalar> out;
  out.n = n;
  out.rank_r = r;
  out.tau = tau;

  for (int attempt = 0; attempt < kMaxResampleAttempts; ++attempt) {
    Engine engine = make_engine(attempt == 0 ? seed : splitmix64(seed ^ static_cast<std::uint64_t>(attempt)));
    const IndexSet support = sample_without_replacement(n, k, engine);
    const Matrix<Scalar> draw = normal_matrix<Scalar>(k, r, 0.0, 1.0, engine);
    const Matrix<Scalar> psi =
        Eigen::HouseholderQR<Matrix<Scalar>>(draw).householderQ() * Matrix<Scalar>::Identity(k, r);
    const Matrix<Scalar> phi = normal_matrix<Scalar>(r, N, 0.0, 1.0 / N, engine);
    const Matrix<Scalar> coeffs = psi * lambda.asDiagonal().toDenseMatrix().cast<Scalar>() * phi;

    // Degenerate draws (rank-deficient factors, a vanishing row) have
    // probability zero but are still rejected and redrawn.
    bool ok = numerical_rank(phi) == r && numerical_rank(draw) == r;
    for (Eigen::Index i = 0; ok && i < coeffs.rows(); ++i)
      if (coeffs.row(i).norm() < 1e-12) ok = false;
    if (!ok) {
      ++out.resample_count;
      continue;
    }
    out.support = support;
    out.coeffs = coeffs;
    return out;
  }
  throw DegenerateDictionaryError("gen_ground_truth: exceeded resample budget");
}

template <typename Scalar>
Matrix<Scalar> noiseless_observations(const SensingMatrix<Scalar>& A,
                                      const GroundTruth<Scalar>& truth) {
  if (truth.n != A.cols()) throw ParameterError("synthesize: ground truth n != dictionary cols");
  return select_columns(A.matrix, truth.support) * truth.coeffs;
}

template <typename Scalar>
MeasurementEnsemble<Scalar> synthesize(const SensingMatrix<Scalar>& A,
                                       const GroundTruth<Scalar>& truth, double snr_db,
                                       std::uint64_t noise_seed) {
  if (std::isnan(snr_db) || snr_db == -std::numeric_limits<double>::infinity())
    throw ParameterError("synthesize: snr_db must be finite or +inf");
  Matrix<Scalar> B = noiseless_observations(A, truth);
  MeasurementEnsemble<Scalar> out;
  out.snr_db = snr_db;
  out.noise_seed = noise_seed;
  if (std::isinf(snr_db)) {
    out.observations = std::move(B);
    return out;
  }
  Engine engine = make_engine(noise_seed);
  Matrix<Scalar> W = normal_matrix<Scalar>(B.rows(), B.cols(), 0.0, 1.0, engine);
  // One scaling per ensemble so the Frobenius-norm SNR is hit exactly.
  const double scale = B.norm() / W.norm() * std::pow(10.0, -snr_db / 20.0);
  out.observations = B + scale * W;
  return out;
}

template <typename Scalar>
CanonicalProblem<Scalar> canonicalize(const SensingMatrix<Scalar>& A,
                                      const MeasurementEnsemble<Scalar>& measurements, int r) {
  const auto& Y = measurements.observations;
  if (Y.rows() != A.rows()) throw ParameterError("canonicalize: row counts differ");
  if (r < 1 || r > std::min(Y.rows(), Y.cols()))
    throw ParameterError("canonicalize: r out of range");
  return CanonicalProblem<Scalar>{A, principal_subspace(Y, r), r};
}

#define SEQMUSIC_INSTANTIATE(S)                                                       \
  template void validate_unit_columns<S>(const Matrix<S>&, double);                   \
  template SensingMatrix<S> make_sensing<S>(Matrix<S>, MatrixFamily);                 \
  template GroundTruth<S> gen_ground_truth<S>(int, int, int, int, double, std::uint64_t); \
  template Matrix<S> noiseless_observations<S>(const SensingMatrix<S>&, const GroundTruth<S>&); \
  template MeasurementEnsemble<S> synthesize<S>(const SensingMatrix<S>&, const GroundTruth<S>&, \
                                                double, std::uint64_t);               \
  template CanonicalProblem<S> canonicalize<S>(const SensingMatrix<S>&,               \
                                               const MeasurementEnsemble<S>&, int);

SEQMUSIC_INSTANTIATE(Real)
SEQMUSIC_INSTANTIATE(Complex)
#undef SEQMUSIC_INSTANTIATE

}  // namespace seqmusic
