#include "seqmusic/recovery.hpp"

#include <algorithm>
#include <cmath>

namespace seqmusic {

bool SupportEstimate::contains(int j) const {
  return std::find(indices.begin(), indices.end(), j) != indices.end();
}

int redundancy_truncation_bound(int m, int k, int r) {
  const int l = std::clamp(m - (2 * k - r), 1, r);
  return 2 * (k - r) + l;
}

namespace {

template <typename Scalar>
void check_dictionary(const SensingMatrix<Scalar>& A, const Subspace<Scalar>& U) {
  if (A.rows() != U.ambient_dim())
    throw ParameterError("recovery: dictionary rows != subspace ambient dimension");
}

/// Orthonormal basis of already-selected atoms, grown one column at a time
/// with twice-iterated Gram-Schmidt.
template <typename Scalar>
class GrowingBasis {
 public:
  explicit GrowingBasis(Eigen::Index ambient) : Q_(ambient, 0) {}

  Vector<Scalar> residual(const Vector<Scalar>& a) const {
    if (Q_.cols() == 0) return a;
    Vector<Scalar> p = a - Q_ * (Q_.adjoint() * a);
    p -= Q_ * (Q_.adjoint() * p);
    return p;
  }

  void push(const Vector<Scalar>& a) {
    Vector<Scalar> p = residual(a);
    const double nrm = p.norm();
    if (nrm < 1e-14) throw DegenerateDictionaryError("atom already inside selected span");
    Q_.conservativeResize(Eigen::NoChange, Q_.cols() + 1);
    Q_.col(Q_.cols() - 1) = p / nrm;
  }

  const Matrix<Scalar>& basis() const { return Q_; }

 private:
  Matrix<Scalar> Q_;
};

struct ScoredIndex {
  double score;
  int index;
};

/// Deterministic top-t: primary key per `ascending`, ties toward the lower
/// index.
std::vector<ScoredIndex> take_extreme(std::vector<ScoredIndex> scored, int t, bool ascending) {
  std::sort(scored.begin(), scored.end(), [&](const ScoredIndex& a, const ScoredIndex& b) {
    if (a.score != b.score) return ascending ? a.score < b.score : a.score > b.score;
    return a.index < b.index;
  });
  scored.resize(static_cast<std::size_t>(t));
  return scored;
}

}  // namespace

template <typename Scalar>
SupportEstimate subspace_s_omp(const SensingMatrix<Scalar>& A, const Subspace<Scalar>& U, int t,
                               double residual_tol) {
  check_dictionary(A, U);
  if (t < 0 || t > A.rows()) throw ParameterError("subspace_s_omp: need 0 <= t <= m");
  const Eigen::Index n = A.cols();
  SupportEstimate est;
  GrowingBasis<Scalar> selected(A.rows());
  for (int step = 0; step < t; ++step) {
    int best = -1;
    double best_score = -1.0;
    for (int j = 0; j < n; ++j) {
      if (est.contains(j)) continue;
      const Vector<Scalar> p = selected.residual(A.matrix.col(j));
      const double pn = p.squaredNorm();
      if (pn < residual_tol * A.matrix.col(j).squaredNorm()) continue;
      const double score = (U.basis().adjoint() * p).squaredNorm() / pn;
      if (score > best_score) {
        best_score = score;
        best = j;
      }
    }
    if (best < 0)
      throw DegenerateDictionaryError("subspace_s_omp: all remaining atoms are degenerate");
    est.indices.push_back(best);
    est.stage_scores.push_back(best_score);
    selected.push(A.matrix.col(best));
  }
  return est;
}

template <typename Scalar>
SupportEstimate two_thresholding(const SensingMatrix<Scalar>& A, const Subspace<Scalar>& U,
                                 int t) {
  check_dictionary(A, U);
  if (t < 0 || t > A.cols()) throw ParameterError("two_thresholding: need 0 <= t <= n");
  std::vector<ScoredIndex> scored;
  scored.reserve(static_cast<std::size_t>(A.cols()));
  for (int j = 0; j < A.cols(); ++j)
    scored.push_back({(U.basis().adjoint() * A.matrix.col(j)).norm(), j});
  SupportEstimate est;
  for (const auto& [score, index] : take_extreme(std::move(scored), t, /*ascending=*/false)) {
    est.indices.push_back(index);
    est.stage_scores.push_back(score);
  }
  return est;
}

template <typename Scalar>
SupportEstimate generalized_music(const SensingMatrix<Scalar>& A, const Subspace<Scalar>& U,
                                  const SupportEstimate& partial, int k) {
  check_dictionary(A, U);
  const int r = static_cast<int>(U.dim());
  if (static_cast<int>(partial.size()) != k - r)
    throw ParameterError("generalized_music: partial support must have k - r indices");
  const Matrix<Scalar> C = augment(A.matrix, partial.indices, U.basis());
  if (numerical_rank(C, 1e-10) < k)
    throw IllPosedAugmentationError(
        "generalized_music: augmented matrix rank below k; partial support inconsistent with "
        "subspace");
  const Subspace<Scalar> Q = principal_subspace(C, k);

  std::vector<ScoredIndex> scored;
  for (int j = 0; j < A.cols(); ++j) {
    if (partial.contains(j)) continue;
    scored.push_back({residual_energy(Q, Vector<Scalar>(A.matrix.col(j))), j});
  }
  SupportEstimate est = partial;
  for (const auto& [score, index] : take_extreme(std::move(scored), r, /*ascending=*/true)) {
    est.indices.push_back(index);
    est.stage_scores.push_back(score);
  }
  return est;
}

template <typename Scalar>
SupportEstimate seq_subspace(const SensingMatrix<Scalar>& A, const Subspace<Scalar>& U,
                             const SupportEstimate& init, int k) {
  check_dictionary(A, U);
  const int r = static_cast<int>(U.dim());
  if (A.rows() < k)
    throw RankDeficiencyError("seq_subspace: leading-k subspace undefined for m < k");
  const int have = static_cast<int>(init.size());
  if (have < k - r || have > k)
    throw ParameterError("seq_subspace: initial support size must lie in [k - r, k]");

  SupportEstimate est = init;
  est.stage_scores.resize(init.indices.size(), 0.0);
  while (static_cast<int>(est.size()) < k) {
    const Matrix<Scalar> C = augment(A.matrix, est.indices, U.basis());
    const Subspace<Scalar> U1 = principal_subspace(C, k);
    int best = -1;
    double best_score = std::numeric_limits<double>::infinity();
    for (int j = 0; j < A.cols(); ++j) {
      if (est.contains(j)) continue;
      const double s = residual_energy(U1, Vector<Scalar>(A.matrix.col(j)));
      if (s < best_score) {
        best_score = s;
        best = j;
      }
    }
    if (best < 0) throw DegenerateDictionaryError("seq_subspace: no candidate atoms left");
    est.indices.push_back(best);
    est.stage_scores.push_back(best_score);
  }
  return est;
}

template <typename Scalar>
SupportEstimate support_filtering(const SensingMatrix<Scalar>& A, const Subspace<Scalar>& U,
                                  const SupportEstimate& I, int k, int r,
                                  std::optional<int> truncation) {
  check_dictionary(A, U);
  if (r > k) throw ParameterError("support_filtering: r > k");
  IndexSet candidates = I.indices;
  if (truncation) {
    if (*truncation < 1) throw ParameterError("support_filtering: truncation must be positive");
    if (static_cast<int>(candidates.size()) > *truncation)
      candidates.resize(static_cast<std::size_t>(*truncation));
  }
  if (static_cast<int>(candidates.size()) <= k - r)
    throw ParameterError("support_filtering: need more than k - r candidates after truncation");

  std::vector<ScoredIndex> scored;
  scored.reserve(candidates.size());
  for (int j : candidates) {
    IndexSet rest;
    rest.reserve(candidates.size() - 1);
    for (int i : candidates)
      if (i != j) rest.push_back(i);
    const Matrix<Scalar> C = augment(A.matrix, rest, U.basis());
    // [A_{I\{j}} U] is rank-deficient whenever I holds true supports;
    // reduce to the numerical column space before projecting.
    const Eigen::Index d = numerical_rank(C, 1e-10);
    const Subspace<Scalar> Q = principal_subspace(C, d);
    scored.push_back({residual_energy(Q, Vector<Scalar>(A.matrix.col(j))), j});
  }
  SupportEstimate est;
  for (const auto& [score, index] : take_extreme(std::move(scored), k - r, /*ascending=*/true)) {
    est.indices.push_back(index);
    est.stage_scores.push_back(score);
  }
  return est;
}

template <typename Scalar>
SupportEstimate classical_music(const SensingMatrix<Scalar>& A, const Subspace<Scalar>& U,
                                int k) {
  check_dictionary(A, U);
  if (k < 0 || k > A.cols()) throw ParameterError("classical_music: need 0 <= k <= n");
  std::vector<ScoredIndex> scored;
  for (int j = 0; j < A.cols(); ++j)
    scored.push_back({residual_energy(U, Vector<Scalar>(A.matrix.col(j))), j});
  SupportEstimate est;
  for (const auto& [score, index] : take_extreme(std::move(scored), k, /*ascending=*/true)) {
    est.indices.push_back(index);
    est.stage_scores.push_back(score);
  }
  return est;
}

template <typename Scalar>
SupportEstimate s_omp(const SensingMatrix<Scalar>& A, const Matrix<Scalar>& Y, int t) {
  if (Y.rows() != A.rows()) throw ParameterError("s_omp: observation rows != dictionary rows");
  if (t < 0 || t > A.rows()) throw ParameterError("s_omp: need 0 <= t <= m");
  SupportEstimate est;
  GrowingBasis<Scalar> selected(A.rows());
  Matrix<Scalar> R = Y;
  for (int step = 0; step < t; ++step) {
    int best = -1;
    double best_score = -1.0;
    for (int j = 0; j < A.cols(); ++j) {
      if (est.contains(j)) continue;
      const double score = (A.matrix.col(j).adjoint() * R).norm();
      if (score > best_score) {
        best_score = score;
        best = j;
      }
    }
    if (best < 0) throw DegenerateDictionaryError("s_omp: no candidate atoms left");
    est.indices.push_back(best);
    est.stage_scores.push_back(best_score);
    selected.push(A.matrix.col(best));
    R = Y - selected.basis() * (selected.basis().adjoint() * Y);
  }
  return est;
}

template <typename Scalar>
Matrix<Scalar> least_squares_debias(const SensingMatrix<Scalar>& A, const IndexSet& support,
                                    const Matrix<Scalar>& Y) {
  if (Y.rows() != A.rows())
    throw ParameterError("least_squares_debias: observation rows != dictionary rows");
  if (support.empty()) return Matrix<Scalar>(0, Y.cols());
  const Matrix<Scalar> sub = select_columns(A.matrix, support);
  Eigen::JacobiSVD<Matrix<Scalar>> svd(sub, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return svd.solve(Y);
}

namespace {

template <typename Scalar>
Subspace<Scalar> signal_subspace_of(const SensingMatrix<Scalar>& A,
                                    const MeasurementEnsemble<Scalar>& measurements,
                                    const RecoveryConfig& cfg) {
  if (cfg.k < 1 || cfg.r < 1 || cfg.r > cfg.k)
    throw ParameterError("recovery config: need 1 <= r <= k");
  if (cfg.residual_tol <= 0.0) throw ParameterError("recovery config: residual_tol must be > 0");
  return canonicalize(A, measurements, cfg.r).signal_subspace;
}

template <typename Scalar>
SupportEstimate run_init(const SensingMatrix<Scalar>& A, const Subspace<Scalar>& U, int t,
                         const RecoveryConfig& cfg) {
  if (cfg.init_algo == InitAlgo::two_thresholding) return two_thresholding(A, U, t);
  return subspace_s_omp(A, U, t, cfg.residual_tol);
}

}  // namespace

template <typename Scalar>
RecoveryResult seq_cs_music(const SensingMatrix<Scalar>& A,
                            const MeasurementEnsemble<Scalar>& measurements,
                            const RecoveryConfig& cfg) {
  const Subspace<Scalar> U = signal_subspace_of(A, measurements, cfg);
  RecoveryResult out;
  out.init = run_init(A, U, cfg.k, cfg);
  out.filtered = support_filtering(A, U, out.init, cfg.k, cfg.r, cfg.filter_truncation);
  out.support = seq_subspace(A, U, out.filtered, cfg.k);
  return out;
}

template <typename Scalar>
RecoveryResult cs_music(const SensingMatrix<Scalar>& A,
                        const MeasurementEnsemble<Scalar>& measurements,
                        const RecoveryConfig& cfg) {
  const Subspace<Scalar> U = signal_subspace_of(A, measurements, cfg);
  RecoveryResult out;
  out.init = run_init(A, U, cfg.k - cfg.r, cfg);
  out.support = generalized_music(A, U, out.init, cfg.k);
  return out;
}

template <typename Scalar>
RecoveryResult seq_subspace_pipeline(const SensingMatrix<Scalar>& A,
                                     const MeasurementEnsemble<Scalar>& measurements,
                                     const RecoveryConfig& cfg) {
  const Subspace<Scalar> U = signal_subspace_of(A, measurements, cfg);
  RecoveryResult out;
  out.init = run_init(A, U, cfg.k - cfg.r, cfg);
  out.support = seq_subspace(A, U, out.init, cfg.k);
  return out;
}

#define SEQMUSIC_INSTANTIATE(S)                                                                \
  template SupportEstimate subspace_s_omp<S>(const SensingMatrix<S>&, const Subspace<S>&, int, \
                                             double);                                         \
  template SupportEstimate two_thresholding<S>(const SensingMatrix<S>&, const Subspace<S>&,    \
                                               int);                                          \
  template SupportEstimate generalized_music<S>(const SensingMatrix<S>&, const Subspace<S>&,   \
                                                const SupportEstimate&, int);                  \
  template SupportEstimate seq_subspace<S>(const SensingMatrix<S>&, const Subspace<S>&,        \
                                           const SupportEstimate&, int);                       \
  template SupportEstimate support_filtering<S>(const SensingMatrix<S>&, const Subspace<S>&,   \
                                                const SupportEstimate&, int, int,              \
                                                std::optional<int>);                           \
  template SupportEstimate classical_music<S>(const SensingMatrix<S>&, const Subspace<S>&,     \
                                              int);                                           \
  template SupportEstimate s_omp<S>(const SensingMatrix<S>&, const Matrix<S>&, int);           \
  template Matrix<S> least_squares_debias<S>(const SensingMatrix<S>&, const IndexSet&,         \
                                             const Matrix<S>&);                                \
  template RecoveryResult seq_cs_music<S>(const SensingMatrix<S>&,                             \
                                          const MeasurementEnsemble<S>&, const RecoveryConfig&); \
  template RecoveryResult cs_music<S>(const SensingMatrix<S>&, const MeasurementEnsemble<S>&,  \
                                      const RecoveryConfig&);                                  \
  template RecoveryResult seq_subspace_pipeline<S>(                                            \
      const SensingMatrix<S>&, const MeasurementEnsemble<S>&, const RecoveryConfig&);

SEQMUSIC_INSTANTIATE(Real)
SEQMUSIC_INSTANTIATE(Complex)
#undef SEQMUSIC_INSTANTIATE

}  // namespace seqmusic
