#pragma once

#include <filesystem>
#include <string>

#include "seqmusic/analysis.hpp"
#include "seqmusic/instance_io.hpp"
#include "seqmusic/recovery.hpp"

namespace seqmusic {

enum class Algorithm { seq_cs_music, cs_music, seq_no_filter, s_omp, ss_omp, music };

std::string to_string(Algorithm algo);
Algorithm parse_algorithm(const std::string& name);

/// Presets that route to the analysis module instead of a recovery sweep.
enum class AnalysisRoute { none, sigma_k_sweep, feasibility_grid };

struct ExperimentConfig {
  MatrixFamily family = MatrixFamily::gaussian;
  std::vector<double> means = {0.0};
  int n = 128;
  int k = 8;
  int r = 4;
  std::vector<int> snapshots = {6};
  std::vector<int> m_values = {24};
  double snr_db = 30.0;
  std::vector<double> taus = {1.0};
  int trials = 1000;
  std::uint64_t master_seed = 0;
  std::vector<Algorithm> algorithms = {Algorithm::seq_cs_music};
  std::optional<int> filter_truncation;
  /// When set, each trial estimates the subspace rank from Y via
  /// numerical_rank(Y, tol) clipped to [1, min(m, N, k)] instead of taking
  /// r as known.
  std::optional<double> rank_estimation_tol;
  std::string output_path;
  int workers = 1;
  /// Off by default so repeated sweeps are byte-identical; when on, the
  /// mean_wall_time_ms column carries measured times.
  bool record_timing = false;
  AnalysisRoute analysis_route = AnalysisRoute::none;

  void validate() const;  ///< throws ParameterError on any bad field
};

/// One sweep grid point.
struct TrialPoint {
  int m = 0;
  int snapshots = 0;
  double tau = 1.0;
  double mean = 0.0;
};

struct TrialRecord {
  int trial_index = 0;
  Algorithm algorithm = Algorithm::seq_cs_music;
  TrialPoint point;
  IndexSet estimated_support;
  IndexSet true_support;
  bool success = false;
  double wall_time_ms = 0.0;
  std::string error;          ///< nonempty when the trial failed with an error tag
  SupportEstimate init_stage;
  SupportEstimate filtered_stage;
  std::vector<double> step_scores;  ///< final-stage per-index scores
};

struct AggregateRow {
  Algorithm algorithm = Algorithm::seq_cs_music;
  TrialPoint point;
  int trials = 0;
  int successes = 0;
  int errors = 0;
  double success_rate = 0.0;
  double stderr_rate = 0.0;  ///< sqrt(p(1-p)/trials)
  double mean_wall_time_ms = 0.0;
};

struct SweepResult {
  ExperimentConfig config;
  std::vector<AggregateRow> rows;
  std::vector<std::string> error_lines;  ///< one entry per error-tagged trial
};

/// Injective per-trial key -> seed derivation. trial_index must fit in 32
/// bits, m and snapshots in 12 bits each, the algorithm id in 8.
std::uint64_t trial_seed(std::uint64_t master_seed, int trial_index, int m, int snapshots,
                         Algorithm algorithm);

/// Draws the (sensing, truth, measurements) triple for one trial from the
/// derived seed. Scalar must match cfg.family (Complex for fourier).
template <typename Scalar>
ProblemInstance<Scalar> generate_instance(const ExperimentConfig& cfg, const TrialPoint& point,
                                          std::uint64_t seed);

/// Runs one algorithm on one instance.
template <typename Scalar>
RecoveryResult run_algorithm(Algorithm algorithm, const SensingMatrix<Scalar>& A,
                             const MeasurementEnsemble<Scalar>& measurements,
                             const RecoveryConfig& rc);

/// Generates one instance and runs one algorithm; stage errors are recorded
/// on the record, never thrown. Identical (config, point, trial_index,
/// algorithm) gives an identical record regardless of execution order.
TrialRecord run_trial(const ExperimentConfig& cfg, const TrialPoint& point, int trial_index,
                      Algorithm algorithm);

/// Cartesian product over (algorithm, m, N, tau, mean) x trials; rows are
/// sorted by (algorithm name, m, N, tau, mean). Aggregation is
/// order-independent, so any worker count yields the same result.
SweepResult run_sweep(const ExperimentConfig& cfg);

/// Built-in experiment grids: fig1 fig2 fig3 fig4 fig5 fig6a fig6b fig7.
/// Unknown names raise ParameterError listing the valid presets.
ExperimentConfig preset(const std::string& name);
std::vector<std::string> preset_names();

/// CSV with header algorithm,m,N,snr_db,tau,mean,trials,success_rate,stderr,
/// mean_wall_time_ms. Rates use fixed 5-decimal rendering, other reals six
/// significant digits. Error-tagged trials are enumerated in a sidecar log
/// at <path>.errors.log when present.
void emit_csv(const SweepResult& result, const std::filesystem::path& path);

void emit_sigma_k_csv(const std::vector<SigmaKSweepRow>& rows, const std::filesystem::path& path);
void emit_feasibility_csv(const std::vector<FeasibilityGridRow>& rows,
                          const std::filesystem::path& path);

/// Opens the path for (truncating) write and fails fast if it cannot.
void ensure_writable(const std::filesystem::path& path);

}  // namespace seqmusic
