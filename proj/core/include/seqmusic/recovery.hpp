#pragma once

#include <optional>

#include "seqmusic/problem.hpp"
#include "seqmusic/subspace.hpp"

namespace seqmusic {

/// Ordered support estimate with per-index diagnostic scores (selection
/// scores for greedy picks, residual energies zeta(j) for filtering).
struct SupportEstimate {
  IndexSet indices;                  ///< distinct, in selection order
  std::vector<double> stage_scores;  ///< aligned with indices

  std::size_t size() const { return indices.size(); }
  bool contains(int j) const;
};

enum class InitAlgo { subspace_s_omp, two_thresholding };

struct RecoveryConfig {
  int k = 0;
  int r = 0;
  InitAlgo init_algo = InitAlgo::subspace_s_omp;
  double residual_tol = 1e-10;
  /// Keep only the first `filter_truncation` initial picks before backward
  /// filtering. Unset = filter the whole estimate.
  std::optional<int> filter_truncation;
};

/// Truncation bound 2(k-r)+l with the redundancy-based l = clamp(m - (2k-r), 1, r).
int redundancy_truncation_bound(int m, int k, int r);

/// Greedy projected-correlation selection of t atoms against the signal
/// subspace U: repeatedly pick argmax_j ||Q_U^H p_j||^2 / ||p_j||^2 where
/// p_j is the residual of a_j against the span of the atoms picked so far.
/// Ties break toward the lowest index. t = 0 returns an empty estimate.
template <typename Scalar>
SupportEstimate subspace_s_omp(const SensingMatrix<Scalar>& A, const Subspace<Scalar>& U, int t,
                               double residual_tol = 1e-10);

/// One-shot correlation thresholding: the t indices maximizing ||Q_U^H a_j||,
/// returned in descending-score order.
template <typename Scalar>
SupportEstimate two_thresholding(const SensingMatrix<Scalar>& A, const Subspace<Scalar>& U, int t);

/// Batch subspace criterion: given k-r partial supports, ranks the remaining
/// atoms by residual against R([A_partial U]) and keeps the r smallest.
/// With r = k (empty partial) this is the classical criterion on R(U).
template <typename Scalar>
SupportEstimate generalized_music(const SensingMatrix<Scalar>& A, const Subspace<Scalar>& U,
                                  const SupportEstimate& partial, int k);

/// Forward greedy subspace estimation: grow the support one atom at a time,
/// re-estimating the augmented subspace (leading k left singular vectors of
/// [A_I U]) before each pick.
template <typename Scalar>
SupportEstimate seq_subspace(const SensingMatrix<Scalar>& A, const Subspace<Scalar>& U,
                             const SupportEstimate& init, int k);

/// Backward filtering: score each candidate j by the residual of a_j against
/// the numerical column space of [A_{I\{j}} U] and keep the k-r most
/// consistent, in ascending-score order.
template <typename Scalar>
SupportEstimate support_filtering(const SensingMatrix<Scalar>& A, const Subspace<Scalar>& U,
                                  const SupportEstimate& I, int k, int r,
                                  std::optional<int> truncation = std::nullopt);

/// Classical MUSIC on the rank-r subspace estimate: the k atoms with the
/// smallest residual against R(U).
template <typename Scalar>
SupportEstimate classical_music(const SensingMatrix<Scalar>& A, const Subspace<Scalar>& U, int k);

/// Simultaneous OMP on the raw observations: pick argmax_j ||a_j^H R||_2,
/// then re-project the residual matrix; t picks.
template <typename Scalar>
SupportEstimate s_omp(const SensingMatrix<Scalar>& A, const Matrix<Scalar>& Y, int t);

/// Convenience least-squares debias: coefficient rows for the given support,
/// minimizing ||A_I X - Y||_F. Not part of the success criterion.
template <typename Scalar>
Matrix<Scalar> least_squares_debias(const SensingMatrix<Scalar>& A, const IndexSet& support,
                                    const Matrix<Scalar>& Y);

/// Per-stage outputs of a full recovery pipeline.
struct RecoveryResult {
  SupportEstimate support;   ///< final k-sparse estimate
  SupportEstimate init;      ///< initializer output
  SupportEstimate filtered;  ///< backward-filtering output (empty if unused)
};

/// Full pipeline: initialize with cfg.init_algo (k picks), backward-filter
/// down to k-r, then forward sequential subspace estimation back up to k.
template <typename Scalar>
RecoveryResult seq_cs_music(const SensingMatrix<Scalar>& A,
                            const MeasurementEnsemble<Scalar>& measurements,
                            const RecoveryConfig& cfg);

/// Non-sequential baseline: k-r initial picks, then one batch criterion.
template <typename Scalar>
RecoveryResult cs_music(const SensingMatrix<Scalar>& A,
                        const MeasurementEnsemble<Scalar>& measurements,
                        const RecoveryConfig& cfg);

/// Ablation: k-r initial picks, then forward estimation, no filtering.
template <typename Scalar>
RecoveryResult seq_subspace_pipeline(const SensingMatrix<Scalar>& A,
                                     const MeasurementEnsemble<Scalar>& measurements,
                                     const RecoveryConfig& cfg);

}  // namespace seqmusic
