#include "seqmusic/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <thread>

#include "seqmusic/rng.hpp"

namespace seqmusic {

namespace {

constexpr std::uint64_t kSensingStream = 0x5eed0001;
constexpr std::uint64_t kTruthStream = 0x5eed0002;
constexpr std::uint64_t kNoiseStream = 0x5eed0003;

const char* kAlgorithmNames[] = {"seq_cs_music", "cs_music", "seq_no_filter",
                                 "s_omp",        "ss_omp",   "music"};

std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::string format_rate(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.5f", v);
  return buf;
}

std::vector<int> range_1_to(int hi) {
  std::vector<int> out(static_cast<std::size_t>(hi));
  std::iota(out.begin(), out.end(), 1);
  return out;
}

}  // namespace

template <typename Scalar>
RecoveryResult run_algorithm(Algorithm algorithm, const SensingMatrix<Scalar>& A,
                             const MeasurementEnsemble<Scalar>& measurements,
                             const RecoveryConfig& rc) {
  switch (algorithm) {
    case Algorithm::seq_cs_music:
      return seq_cs_music(A, measurements, rc);
    case Algorithm::cs_music:
      return cs_music(A, measurements, rc);
    case Algorithm::seq_no_filter:
      return seq_subspace_pipeline(A, measurements, rc);
    case Algorithm::s_omp: {
      RecoveryResult out;
      out.support = s_omp(A, measurements.observations, rc.k);
      return out;
    }
    case Algorithm::ss_omp: {
      RecoveryResult out;
      out.support =
          subspace_s_omp(A, canonicalize(A, measurements, rc.r).signal_subspace, rc.k,
                         rc.residual_tol);
      return out;
    }
    case Algorithm::music: {
      RecoveryResult out;
      out.support = classical_music(A, canonicalize(A, measurements, rc.r).signal_subspace, rc.k);
      return out;
    }
  }
  throw ParameterError("unknown algorithm");
}

template <typename Scalar>
ProblemInstance<Scalar> generate_instance(const ExperimentConfig& cfg, const TrialPoint& point,
                                          std::uint64_t seed) {
  ProblemInstance<Scalar> inst;
  if constexpr (is_complex_v<Scalar>) {
    if (cfg.family != MatrixFamily::fourier)
      throw ParameterError("generate_instance: complex scalars require the fourier family");
    inst.sensing = gen_fourier_sensing(point.m, cfg.n, splitmix64(seed ^ kSensingStream));
  } else {
    if (cfg.family != MatrixFamily::gaussian)
      throw ParameterError("generate_instance: real scalars require the gaussian family");
    inst.sensing =
        gen_gaussian_sensing(point.m, cfg.n, point.mean, splitmix64(seed ^ kSensingStream));
  }
  inst.truth = gen_ground_truth<Scalar>(cfg.n, cfg.k, cfg.r, point.snapshots, point.tau,
                                        splitmix64(seed ^ kTruthStream));
  inst.measurements = synthesize(inst.sensing, inst.truth, cfg.snr_db,
                                 splitmix64(seed ^ kNoiseStream));
  return inst;
}

#define SEQMUSIC_INSTANTIATE(S)                                                               \
  template ProblemInstance<S> generate_instance<S>(const ExperimentConfig&, const TrialPoint&, \
                                                   std::uint64_t);                            \
  template RecoveryResult run_algorithm<S>(Algorithm, const SensingMatrix<S>&,                \
                                           const MeasurementEnsemble<S>&, const RecoveryConfig&);

SEQMUSIC_INSTANTIATE(Real)
SEQMUSIC_INSTANTIATE(Complex)
#undef SEQMUSIC_INSTANTIATE

namespace {

template <typename Scalar>
void run_trial_impl(const ExperimentConfig& cfg, const TrialPoint& point, Algorithm algorithm,
                    std::uint64_t seed, TrialRecord& record) {
  const ProblemInstance<Scalar> inst = generate_instance<Scalar>(cfg, point, seed);
  record.true_support = inst.truth.support;

  RecoveryConfig rc;
  rc.k = cfg.k;
  rc.r = cfg.r;
  rc.filter_truncation = cfg.filter_truncation;
  if (cfg.rank_estimation_tol) {
    const auto estimated = numerical_rank(inst.measurements.observations,
                                          *cfg.rank_estimation_tol);
    rc.r = std::clamp(static_cast<int>(estimated), 1,
                      std::min({point.m, point.snapshots, cfg.k}));
  }

  // Timed only when requested: with timing off, records and CSVs are
  // bit-identical across reruns and worker counts.
  const auto t0 = std::chrono::steady_clock::now();
  const RecoveryResult result = run_algorithm(algorithm, inst.sensing, inst.measurements, rc);
  if (cfg.record_timing) {
    const auto t1 = std::chrono::steady_clock::now();
    record.wall_time_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  }

  record.estimated_support = result.support.indices;
  record.init_stage = result.init;
  record.filtered_stage = result.filtered;
  record.step_scores = result.support.stage_scores;

  IndexSet est = result.support.indices;
  std::sort(est.begin(), est.end());
  record.success = est == inst.truth.support;  // truth.support is sorted
}

struct ComboKey {
  Algorithm algorithm;
  TrialPoint point;
};

bool combo_less(const ComboKey& a, const ComboKey& b) {
  const std::string an = to_string(a.algorithm);
  const std::string bn = to_string(b.algorithm);
  if (an != bn) return an < bn;
  if (a.point.m != b.point.m) return a.point.m < b.point.m;
  if (a.point.snapshots != b.point.snapshots) return a.point.snapshots < b.point.snapshots;
  if (a.point.tau != b.point.tau) return a.point.tau < b.point.tau;
  return a.point.mean < b.point.mean;
}

}  // namespace

std::string to_string(Algorithm algo) {
  return kAlgorithmNames[static_cast<std::size_t>(algo)];
}

Algorithm parse_algorithm(const std::string& name) {
  for (std::size_t i = 0; i < std::size(kAlgorithmNames); ++i)
    if (name == kAlgorithmNames[i]) return static_cast<Algorithm>(i);
  std::string msg = "unknown algorithm '" + name + "'; valid:";
  for (const char* n : kAlgorithmNames) msg += std::string(" ") + n;
  throw ParameterError(msg);
}

void ExperimentConfig::validate() const {
  if (trials < 1) throw ParameterError("config: trials must be >= 1");
  if (n < 2) throw ParameterError("config: n must be >= 2");
  if (k < 1 || k > n) throw ParameterError("config: need 1 <= k <= n");
  if (r < 1 || r > k) throw ParameterError("config: need 1 <= r <= k");
  if (m_values.empty()) throw ParameterError("config: no m values");
  for (int m : m_values)
    if (m < 1 || m >= 4096) throw ParameterError("config: m values must lie in [1, 4095]");
  if (snapshots.empty()) throw ParameterError("config: no snapshot counts");
  for (int N : snapshots) {
    if (N < 1 || N >= 4096) throw ParameterError("config: snapshots must lie in [1, 4095]");
    if (r > N) throw ParameterError("config: need r <= snapshots");
  }
  if (taus.empty()) throw ParameterError("config: no tau values");
  for (double tau : taus)
    if (!(tau > 0.0 && tau <= 1.0)) throw ParameterError("config: tau must lie in (0, 1]");
  if (means.empty()) throw ParameterError("config: no mean values");
  if (family == MatrixFamily::fourier)
    for (double mean : means)
      if (mean != 0.0) throw ParameterError("config: fourier family has no mean parameter");
  if (algorithms.empty()) throw ParameterError("config: no algorithms");
  if (workers < 1) throw ParameterError("config: workers must be >= 1");
  if (std::isnan(snr_db) || snr_db == -std::numeric_limits<double>::infinity())
    throw ParameterError("config: snr_db must be finite or +inf");
  if (filter_truncation && *filter_truncation < 1)
    throw ParameterError("config: filter_truncation must be positive");
  if (rank_estimation_tol && !(*rank_estimation_tol > 0.0 && *rank_estimation_tol < 1.0))
    throw ParameterError("config: rank_estimation_tol must lie in (0, 1)");
}

std::uint64_t trial_seed(std::uint64_t master_seed, int trial_index, int m, int snapshots,
                         Algorithm algorithm) {
  if (trial_index < 0) throw ParameterError("trial_seed: negative trial index");
  if (m < 0 || m >= 4096 || snapshots < 0 || snapshots >= 4096)
    throw ParameterError("trial_seed: m and snapshots must fit in 12 bits");
  const std::uint64_t key = (static_cast<std::uint64_t>(static_cast<std::uint32_t>(trial_index))) |
                            (static_cast<std::uint64_t>(m) << 32) |
                            (static_cast<std::uint64_t>(snapshots) << 44) |
                            (static_cast<std::uint64_t>(algorithm) << 56);
  return derive_seed(master_seed, key);
}

TrialRecord run_trial(const ExperimentConfig& cfg, const TrialPoint& point, int trial_index,
                      Algorithm algorithm) {
  TrialRecord record;
  record.trial_index = trial_index;
  record.algorithm = algorithm;
  record.point = point;
  const std::uint64_t seed =
      trial_seed(cfg.master_seed, trial_index, point.m, point.snapshots, algorithm);
  try {
    if (cfg.family == MatrixFamily::fourier)
      run_trial_impl<Complex>(cfg, point, algorithm, seed, record);
    else
      run_trial_impl<Real>(cfg, point, algorithm, seed, record);
  } catch (const std::exception& e) {
    record.success = false;
    record.error = e.what();
  }
  return record;
}

SweepResult run_sweep(const ExperimentConfig& cfg) {
  cfg.validate();

  std::vector<ComboKey> combos;
  for (Algorithm algo : cfg.algorithms)
    for (int m : cfg.m_values)
      for (int N : cfg.snapshots)
        for (double tau : cfg.taus)
          for (double mean : cfg.means) combos.push_back({algo, TrialPoint{m, N, tau, mean}});
  std::sort(combos.begin(), combos.end(), combo_less);

  struct Task {
    std::size_t combo;
    int trial;
  };
  std::vector<Task> tasks;
  tasks.reserve(combos.size() * static_cast<std::size_t>(cfg.trials));
  for (std::size_t c = 0; c < combos.size(); ++c)
    for (int t = 0; t < cfg.trials; ++t) tasks.push_back({c, t});

  struct Outcome {
    bool success = false;
    bool errored = false;
    double wall_time_ms = 0.0;
    std::string error;
  };
  std::vector<Outcome> outcomes(tasks.size());

  std::atomic<std::size_t> cursor{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = cursor.fetch_add(1, std::memory_order_relaxed);
      if (i >= tasks.size()) return;
      const Task& task = tasks[i];
      const ComboKey& combo = combos[task.combo];
      const TrialRecord rec = run_trial(cfg, combo.point, task.trial, combo.algorithm);
      outcomes[i] = {rec.success, !rec.error.empty(), rec.wall_time_ms, rec.error};
    }
  };
  if (cfg.workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 1; w < cfg.workers; ++w) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
  }

  SweepResult result;
  result.config = cfg;
  result.rows.resize(combos.size());
  for (std::size_t c = 0; c < combos.size(); ++c) {
    AggregateRow& row = result.rows[c];
    row.algorithm = combos[c].algorithm;
    row.point = combos[c].point;
    row.trials = cfg.trials;
  }
  // Fixed-order aggregation: results do not depend on worker scheduling.
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    AggregateRow& row = result.rows[tasks[i].combo];
    row.successes += outcomes[i].success ? 1 : 0;
    if (outcomes[i].errored) {
      ++row.errors;
      result.error_lines.push_back(to_string(row.algorithm) + " m=" + std::to_string(row.point.m) +
                                   " N=" + std::to_string(row.point.snapshots) + " trial=" +
                                   std::to_string(tasks[i].trial) + ": " + outcomes[i].error);
    }
    row.mean_wall_time_ms += outcomes[i].wall_time_ms;
  }
  for (AggregateRow& row : result.rows) {
    const double p = static_cast<double>(row.successes) / row.trials;
    row.success_rate = p;
    row.stderr_rate = std::sqrt(p * (1.0 - p) / row.trials);
    row.mean_wall_time_ms /= row.trials;
  }
  return result;
}

ExperimentConfig preset(const std::string& name) {
  ExperimentConfig cfg;
  cfg.n = 128;
  cfg.k = 8;
  cfg.r = 4;
  cfg.snr_db = 30.0;
  cfg.trials = 1000;
  cfg.m_values = range_1_to(30);
  cfg.algorithms = {Algorithm::seq_cs_music, Algorithm::cs_music};
  if (name == "fig1") {
    cfg.r = 6;
    cfg.analysis_route = AnalysisRoute::sigma_k_sweep;
    cfg.snapshots = {16};
    cfg.m_values = {24};
  } else if (name == "fig2") {
    cfg.analysis_route = AnalysisRoute::feasibility_grid;
  } else if (name == "fig3") {
    cfg.snapshots = {6, 16, 256};
  } else if (name == "fig4") {
    cfg.snapshots = {6, 16};
    cfg.algorithms = {Algorithm::seq_cs_music, Algorithm::seq_no_filter, Algorithm::cs_music};
  } else if (name == "fig5") {
    cfg.snapshots = {8, 256};
    cfg.algorithms = {Algorithm::seq_cs_music, Algorithm::cs_music, Algorithm::s_omp,
                      Algorithm::ss_omp, Algorithm::music};
  } else if (name == "fig6a") {
    cfg.snapshots = {64};
    cfg.taus = {1.0, 0.5};
  } else if (name == "fig6b") {
    cfg.snapshots = {64};
    cfg.means = {0.0, 1.0};
  } else if (name == "fig7") {
    cfg.family = MatrixFamily::fourier;
    cfg.snapshots = {5};
  } else {
    std::string msg = "unknown preset '" + name + "'; valid:";
    for (const auto& p : preset_names()) msg += " " + p;
    throw ParameterError(msg);
  }
  return cfg;
}

std::vector<std::string> preset_names() {
  return {"fig1", "fig2", "fig3", "fig4", "fig5", "fig6a", "fig6b", "fig7"};
}

void ensure_writable(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open output path for writing: " + path.string());
}

void emit_csv(const SweepResult& result, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open output path for writing: " + path.string());
  out << "algorithm,m,N,snr_db,tau,mean,trials,success_rate,stderr,mean_wall_time_ms\n";
  for (const AggregateRow& row : result.rows) {
    out << to_string(row.algorithm) << ',' << row.point.m << ',' << row.point.snapshots << ','
        << format_real(result.config.snr_db) << ',' << format_real(row.point.tau) << ','
        << format_real(row.point.mean) << ',' << row.trials << ','
        << format_rate(row.success_rate) << ',' << format_rate(row.stderr_rate) << ','
        << format_real(result.config.record_timing ? row.mean_wall_time_ms : 0.0) << '\n';
  }
  if (!out) throw IoError("write failed: " + path.string());
  out.close();

  const std::filesystem::path sidecar = path.string() + ".errors.log";
  if (result.error_lines.empty()) {
    std::filesystem::remove(sidecar);
    return;
  }
  std::ofstream log(sidecar, std::ios::trunc);
  if (!log) throw IoError("cannot open sidecar log: " + sidecar.string());
  for (const auto& line : result.error_lines) log << line << '\n';
}

void emit_sigma_k_csv(const std::vector<SigmaKSweepRow>& rows,
                      const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open output path for writing: " + path.string());
  out << "l,sigma_k_mean,sigma_k_std\n";
  for (const auto& row : rows)
    out << row.l << ',' << format_real(row.sigma_k_mean) << ',' << format_real(row.sigma_k_std)
        << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

void emit_feasibility_csv(const std::vector<FeasibilityGridRow>& rows,
                          const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open output path for writing: " + path.string());
  out << "gamma,alpha,F_alpha,f,region\n";
  for (const auto& row : rows)
    out << format_real(row.gamma) << ',' << format_real(row.alpha) << ',' << format_real(row.F)
        << ',' << format_real(row.f) << ','
        << (row.region == FeasibilityRegion::filtering_favored ? "A" : "B") << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace seqmusic
