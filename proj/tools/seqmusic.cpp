// Benchmark and diagnostics CLI for the seqmusic library.
//
//   seqmusic sweep    --preset fig3 [--trials 200] [--seed 7] [--out fig3.csv]
//   seqmusic simulate --m 24 --n 128 --k 8 --r 4 --snapshots 6 --snr-db 30
//   seqmusic analyze  --target fig2 --out fig2.csv

#include <CLI11.hpp>
#include <cstdio>
#include <iostream>
#include <sstream>

#include "seqmusic/bench.hpp"
#include "seqmusic/instance_io.hpp"

namespace {

using namespace seqmusic;

// Items are plain integers or lo..hi ranges.
std::vector<int> parse_int_items(const std::vector<std::string>& items) {
  std::vector<int> out;
  for (const auto& item : items) {
    const auto dots = item.find("..");
    if (dots != std::string::npos) {
      const int lo = std::stoi(item.substr(0, dots));
      const int hi = std::stoi(item.substr(dots + 2));
      if (lo > hi) throw ParameterError("bad range '" + item + "'");
      for (int v = lo; v <= hi; ++v) out.push_back(v);
    } else if (!item.empty()) {
      out.push_back(std::stoi(item));
    }
  }
  if (out.empty()) throw ParameterError("empty integer list");
  return out;
}

std::vector<Algorithm> parse_algorithm_items(const std::vector<std::string>& items) {
  std::vector<Algorithm> out;
  for (const auto& item : items)
    if (!item.empty()) out.push_back(parse_algorithm(item));
  if (out.empty()) throw ParameterError("empty algorithm list");
  return out;
}

void print_support(const char* label, const SupportEstimate& est) {
  std::printf("%s:", label);
  for (std::size_t i = 0; i < est.indices.size(); ++i) {
    std::printf(" %d", est.indices[i]);
    if (i < est.stage_scores.size()) std::printf(" (%.3e)", est.stage_scores[i]);
  }
  std::printf("\n");
}

struct SweepFlags {
  std::string preset_name;
  int trials = 0;
  std::uint64_t seed = 0;
  std::string out = "sweep.csv";
  int workers = 1;
  bool timing = false;
  std::vector<std::string> m_spec, snapshot_spec, algo_spec;
  std::vector<double> taus, means;
  std::string family;
  double snr_db = 30.0;
  double estimate_rank_tol = 0.0;
  int n = 0, k = 0, r = 0, filter_truncation = 0;
};

int run_sweep_command(const CLI::App& cmd, const SweepFlags& flags) {
  ExperimentConfig cfg;
  if (cmd.count("--preset")) cfg = preset(flags.preset_name);

  if (cmd.count("--trials")) cfg.trials = flags.trials;
  if (cmd.count("--seed")) cfg.master_seed = flags.seed;
  if (cmd.count("--workers")) cfg.workers = flags.workers;
  if (cmd.count("--timing")) cfg.record_timing = flags.timing;
  if (cmd.count("--m")) cfg.m_values = parse_int_items(flags.m_spec);
  if (cmd.count("--snapshots")) cfg.snapshots = parse_int_items(flags.snapshot_spec);
  if (cmd.count("--algos")) cfg.algorithms = parse_algorithm_items(flags.algo_spec);
  if (cmd.count("--tau")) cfg.taus = flags.taus;
  if (cmd.count("--mean")) cfg.means = flags.means;
  if (cmd.count("--snr-db")) cfg.snr_db = flags.snr_db;
  if (cmd.count("--n")) cfg.n = flags.n;
  if (cmd.count("--k")) cfg.k = flags.k;
  if (cmd.count("--r")) cfg.r = flags.r;
  if (cmd.count("--filter-truncation")) cfg.filter_truncation = flags.filter_truncation;
  if (cmd.count("--estimate-rank-tol")) cfg.rank_estimation_tol = flags.estimate_rank_tol;
  if (cmd.count("--matrix"))
    cfg.family = flags.family == "fourier" ? MatrixFamily::fourier : MatrixFamily::gaussian;
  cfg.output_path = flags.out;

  ensure_writable(cfg.output_path);
  if (cfg.analysis_route == AnalysisRoute::sigma_k_sweep) {
    SigmaKSweepConfig sc;
    sc.n = cfg.n;
    sc.k = cfg.k;
    sc.r = cfg.r;
    sc.m = cfg.m_values.front();
    sc.seed = cfg.master_seed;
    emit_sigma_k_csv(sigma_k_sweep(sc), cfg.output_path);
    std::printf("wrote %s\n", cfg.output_path.c_str());
    return 0;
  }
  if (cfg.analysis_route == AnalysisRoute::feasibility_grid) {
    emit_feasibility_csv(feasibility_grid(), cfg.output_path);
    std::printf("wrote %s\n", cfg.output_path.c_str());
    return 0;
  }

  const SweepResult result = run_sweep(cfg);
  emit_csv(result, cfg.output_path);
  int errors = 0;
  for (const auto& row : result.rows) errors += row.errors;
  std::printf("wrote %s (%zu rows, %d error-tagged trials)\n", cfg.output_path.c_str(),
              result.rows.size(), errors);
  return 0;
}

struct SimulateFlags {
  int m = 24, n = 128, k = 8, r = 4, snapshots = 6;
  double snr_db = 30.0, tau = 1.0, mean = 0.0;
  std::string matrix = "gaussian";
  std::string algo = "seq_cs_music";
  std::uint64_t seed = 0;
  int trial_index = 0;
  int filter_truncation = 0;
  std::string dump_path;
};

template <typename Scalar>
int simulate_with(const ExperimentConfig& cfg, const TrialPoint& point, Algorithm algorithm,
                  const SimulateFlags& flags, bool truncation_set) {
  const std::uint64_t seed =
      trial_seed(cfg.master_seed, flags.trial_index, point.m, point.snapshots, algorithm);
  const ProblemInstance<Scalar> inst = generate_instance<Scalar>(cfg, point, seed);
  if (!flags.dump_path.empty()) {
    dump_instance(inst, flags.dump_path);
    std::printf("instance dumped to %s\n", flags.dump_path.c_str());
  }

  RecoveryConfig rc;
  rc.k = cfg.k;
  rc.r = cfg.r;
  if (truncation_set) rc.filter_truncation = flags.filter_truncation;

  std::printf("algorithm=%s m=%d n=%d k=%d r=%d N=%d snr_db=%g tau=%g mean=%g seed=%llu\n",
              to_string(algorithm).c_str(), point.m, cfg.n, cfg.k, cfg.r, point.snapshots,
              cfg.snr_db, point.tau, point.mean, static_cast<unsigned long long>(seed));
  std::printf("true support:");
  for (int j : inst.truth.support) std::printf(" %d", j);
  std::printf("\n");

  const auto t0 = std::chrono::steady_clock::now();
  const RecoveryResult result = run_algorithm(algorithm, inst.sensing, inst.measurements, rc);
  const auto t1 = std::chrono::steady_clock::now();

  if (!result.init.indices.empty()) print_support("init stage", result.init);
  if (!result.filtered.indices.empty()) print_support("filtered", result.filtered);
  print_support("estimate", result.support);

  IndexSet est = result.support.indices;
  std::sort(est.begin(), est.end());
  const bool success = est == inst.truth.support;

  // optional coefficient diagnostics; support set equality is the criterion
  const Matrix<Scalar> debiased =
      least_squares_debias(inst.sensing, result.support.indices, inst.measurements.observations);
  const Matrix<Scalar> refit =
      select_columns(inst.sensing.matrix, result.support.indices) * debiased;
  const double rel_residual =
      (inst.measurements.observations - refit).norm() / inst.measurements.observations.norm();

  std::printf("success=%s debias_rel_residual=%.3e wall_time_ms=%.3f\n",
              success ? "true" : "false", rel_residual,
              std::chrono::duration<double, std::milli>(t1 - t0).count());
  return 0;
}

int run_simulate_command(const CLI::App& cmd, const SimulateFlags& flags) {
  ExperimentConfig cfg;
  cfg.family = flags.matrix == "fourier" ? MatrixFamily::fourier : MatrixFamily::gaussian;
  cfg.n = flags.n;
  cfg.k = flags.k;
  cfg.r = flags.r;
  cfg.snr_db = flags.snr_db;
  cfg.master_seed = flags.seed;
  cfg.m_values = {flags.m};
  cfg.snapshots = {flags.snapshots};
  cfg.taus = {flags.tau};
  cfg.means = {flags.mean};
  cfg.trials = 1;
  cfg.algorithms = {parse_algorithm(flags.algo)};
  cfg.validate();

  const TrialPoint point{flags.m, flags.snapshots, flags.tau, flags.mean};
  const bool truncation_set = cmd.count("--filter-truncation") > 0;
  if (cfg.family == MatrixFamily::fourier)
    return simulate_with<Complex>(cfg, point, cfg.algorithms.front(), flags, truncation_set);
  return simulate_with<Real>(cfg, point, cfg.algorithms.front(), flags, truncation_set);
}

struct AnalyzeFlags {
  std::string target;
  std::string out = "analysis.csv";
  std::uint64_t seed = 0;
  int instances = 100;
  double grid_step = 0.01;
  int m = 24, n = 128, k = 8, r = 6;
};

int run_analyze_command(const AnalyzeFlags& flags) {
  ensure_writable(flags.out);
  if (flags.target == "fig1") {
    SigmaKSweepConfig sc;
    sc.m = flags.m;
    sc.n = flags.n;
    sc.k = flags.k;
    sc.r = flags.r;
    sc.instances = flags.instances;
    sc.seed = flags.seed;
    emit_sigma_k_csv(sigma_k_sweep(sc), flags.out);
  } else if (flags.target == "fig2") {
    emit_feasibility_csv(feasibility_grid(flags.grid_step), flags.out);
  } else {
    throw ParameterError("analyze target must be fig1 or fig2");
  }
  std::printf("wrote %s\n", flags.out.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Joint sparse recovery benchmark (sequential compressive MUSIC)"};
  app.require_subcommand(1);
  app.set_config("--config", "",
                 "Key-value config file; subcommand options live in a [sweep] (or [simulate], "
                 "[analyze]) section. CLI flags take precedence.");

  SweepFlags sweep_flags;
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "Run a Monte Carlo sweep and write a CSV");
  sweep_cmd->add_option("--preset", sweep_flags.preset_name,
                        "Parameter preset (fig1 fig2 fig3 fig4 fig5 fig6a fig6b fig7)");
  sweep_cmd->add_option("--trials", sweep_flags.trials, "Trials per grid point");
  sweep_cmd->add_option("--seed", sweep_flags.seed, "Master seed");
  sweep_cmd->add_option("--out", sweep_flags.out, "Output CSV path");
  sweep_cmd->add_option("--workers", sweep_flags.workers, "Concurrent trial workers");
  sweep_cmd->add_flag("--timing", sweep_flags.timing,
                      "Record measured wall times in the CSV (breaks byte-identical reruns)");
  sweep_cmd->add_option("--m", sweep_flags.m_spec, "m values: comma list or lo..hi range")
      ->delimiter(',');
  sweep_cmd->add_option("--snapshots", sweep_flags.snapshot_spec, "Snapshot counts, comma list")
      ->delimiter(',');
  sweep_cmd->add_option("--algos", sweep_flags.algo_spec, "Algorithms, comma list")
      ->delimiter(',');
  sweep_cmd->add_option("--tau", sweep_flags.taus, "Condition parameters, comma list")
      ->delimiter(',');
  sweep_cmd->add_option("--mean", sweep_flags.means, "Sensing means, comma list")
      ->delimiter(',');
  sweep_cmd->add_option("--snr-db", sweep_flags.snr_db, "SNR in dB (inf for noiseless)");
  sweep_cmd->add_option("--n", sweep_flags.n, "Ambient dimension");
  sweep_cmd->add_option("--k", sweep_flags.k, "Sparsity level");
  sweep_cmd->add_option("--r", sweep_flags.r, "Signal subspace rank");
  sweep_cmd->add_option("--filter-truncation", sweep_flags.filter_truncation,
                        "Keep only this many initial picks before filtering");
  sweep_cmd->add_option("--estimate-rank-tol", sweep_flags.estimate_rank_tol,
                        "Estimate the subspace rank from Y at this relative tolerance "
                        "instead of taking r as known");
  sweep_cmd->add_option("--matrix", sweep_flags.family, "Sensing family: gaussian or fourier")
      ->check(CLI::IsMember({"gaussian", "fourier"}));

  SimulateFlags sim_flags;
  CLI::App* sim_cmd = app.add_subcommand("simulate", "Run one verbose trial");
  sim_cmd->add_option("--m", sim_flags.m, "Measurements");
  sim_cmd->add_option("--n", sim_flags.n, "Ambient dimension");
  sim_cmd->add_option("--k", sim_flags.k, "Sparsity level");
  sim_cmd->add_option("--r", sim_flags.r, "Signal subspace rank");
  sim_cmd->add_option("--snapshots", sim_flags.snapshots, "Snapshot count");
  sim_cmd->add_option("--snr-db", sim_flags.snr_db, "SNR in dB (inf for noiseless)");
  sim_cmd->add_option("--tau", sim_flags.tau, "Condition parameter");
  sim_cmd->add_option("--mean", sim_flags.mean, "Sensing mean (gaussian family)");
  sim_cmd->add_option("--matrix", sim_flags.matrix, "Sensing family: gaussian or fourier")
      ->check(CLI::IsMember({"gaussian", "fourier"}));
  sim_cmd->add_option("--algo", sim_flags.algo, "Algorithm to run");
  sim_cmd->add_option("--seed", sim_flags.seed, "Master seed");
  sim_cmd->add_option("--trial-index", sim_flags.trial_index, "Trial index for seed derivation");
  sim_cmd->add_option("--filter-truncation", sim_flags.filter_truncation,
                      "Keep only this many initial picks before filtering");
  sim_cmd->add_option("--dump", sim_flags.dump_path, "Dump the generated instance to this path");

  AnalyzeFlags an_flags;
  CLI::App* an_cmd = app.add_subcommand("analyze", "Emit theory CSVs (fig1, fig2)");
  an_cmd->add_option("--target", an_flags.target, "fig1 or fig2")->required();
  an_cmd->add_option("--out", an_flags.out, "Output CSV path");
  an_cmd->add_option("--seed", an_flags.seed, "Master seed (fig1)");
  an_cmd->add_option("--instances", an_flags.instances, "Monte Carlo instances (fig1)");
  an_cmd->add_option("--grid-step", an_flags.grid_step, "Grid step (fig2)");
  an_cmd->add_option("--m", an_flags.m, "Measurements (fig1)");
  an_cmd->add_option("--n", an_flags.n, "Ambient dimension (fig1)");
  an_cmd->add_option("--k", an_flags.k, "Sparsity level (fig1)");
  an_cmd->add_option("--r", an_flags.r, "Signal subspace rank (fig1)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sweep_cmd->parsed()) return run_sweep_command(*sweep_cmd, sweep_flags);
    if (sim_cmd->parsed()) return run_simulate_command(*sim_cmd, sim_flags);
    if (an_cmd->parsed()) return run_analyze_command(an_flags);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
