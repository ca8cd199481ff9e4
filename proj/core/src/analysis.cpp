#include "seqmusic/analysis.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "seqmusic/rng.hpp"

namespace seqmusic {

namespace {

using std::numbers::pi;

template <typename Scalar>
Eigen::VectorXd augmented_singular_values(const Matrix<Scalar>& A, const IndexSet& I,
                                          const Subspace<Scalar>& S) {
  if (A.rows() != S.ambient_dim())
    throw ParameterError("sigma_k_augmented: ambient dimensions differ");
  const Matrix<Scalar> C = augment(A, I, S.basis());
  Eigen::JacobiSVD<Matrix<Scalar>> svd(C);
  return svd.singularValues();
}

/// Adaptive Simpson with absolute tolerance; integrand assumed smooth.
template <typename F>
double adaptive_simpson(const F& f, double a, double b, double fa, double fb, double fm,
                        double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return adaptive_simpson(f, a, m, fa, fm, flm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, m, b, fm, fb, frm, right, 0.5 * tol, depth - 1);
}

template <typename F>
double integrate(const F& f, double a, double b, double tol) {
  if (!(b > a)) return 0.0;
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson(f, a, b, fa, fb, fm, whole, tol, 48);
}

/// Enumerates subsets of size `choose` from `pool` and applies `fn` to each.
template <typename Fn>
void for_each_combination(const IndexSet& pool, int choose, const Fn& fn) {
  const int n = static_cast<int>(pool.size());
  IndexSet subset(static_cast<std::size_t>(choose));
  std::vector<int> pos(static_cast<std::size_t>(choose));
  for (int i = 0; i < choose; ++i) pos[static_cast<std::size_t>(i)] = i;
  while (true) {
    for (int i = 0; i < choose; ++i)
      subset[static_cast<std::size_t>(i)] = pool[static_cast<std::size_t>(pos[static_cast<std::size_t>(i)])];
    fn(subset);
    int i = choose - 1;
    while (i >= 0 && pos[static_cast<std::size_t>(i)] == n - choose + i) --i;
    if (i < 0) break;
    ++pos[static_cast<std::size_t>(i)];
    for (int jj = i + 1; jj < choose; ++jj)
      pos[static_cast<std::size_t>(jj)] = pos[static_cast<std::size_t>(jj - 1)] + 1;
  }
}

double binomial_count(int n, int k) {
  double c = 1.0;
  for (int i = 0; i < k; ++i) c *= static_cast<double>(n - i) / static_cast<double>(i + 1);
  return c;
}

}  // namespace

template <typename Scalar>
double sigma_k_augmented(const Matrix<Scalar>& A, const IndexSet& I, const Subspace<Scalar>& S,
                         int k) {
  if (k < 1) throw ParameterError("sigma_k_augmented: k must be positive");
  if (static_cast<int>(I.size()) + static_cast<int>(S.dim()) < k)
    throw ParameterError("sigma_k_augmented: fewer than k columns in [A_I S]");
  const Eigen::VectorXd sv = augmented_singular_values(A, I, S);
  if (sv.size() < k) throw ParameterError("sigma_k_augmented: fewer than k singular values");
  return sv(k - 1);
}

std::optional<double> perturbation_bound(double delta, double sigma_k) {
  if (delta < 0.0) throw ParameterError("perturbation_bound: delta must be nonnegative");
  if (!(sigma_k > 0.0)) throw ParameterError("perturbation_bound: sigma_k must be positive");
  if (delta >= sigma_k) return std::nullopt;
  return delta / (sigma_k - delta);
}

template <typename Scalar>
double basis_perturbation(const Subspace<Scalar>& S, const Subspace<Scalar>& S_tilde) {
  if (S.ambient_dim() != S_tilde.ambient_dim() || S.dim() != S_tilde.dim())
    throw ParameterError("basis_perturbation: shapes differ");
  // Orthogonal Procrustes alignment: rotate S_tilde's basis onto S's.
  const Matrix<Scalar> M = S_tilde.basis().adjoint() * S.basis();
  Eigen::JacobiSVD<Matrix<Scalar>> svd(M, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Matrix<Scalar> Q = svd.matrixU() * svd.matrixV().adjoint();
  const Matrix<Scalar> diff = S_tilde.basis() * Q - S.basis();
  Eigen::JacobiSVD<Matrix<Scalar>> dsvd(diff);
  return dsvd.singularValues()(0);
}

template <typename Scalar>
BoundReport make_bound_report(const Matrix<Scalar>& A, const IndexSet& I,
                              const Subspace<Scalar>& S, const Subspace<Scalar>& S_tilde, int k) {
  BoundReport report;
  report.delta_op = basis_perturbation(S, S_tilde);
  report.delta_proj = subspace_distance(S, S_tilde);
  report.sigma_k = sigma_k_augmented(A, I, S, k);
  const auto bound = perturbation_bound(report.delta_proj, report.sigma_k);
  report.feasible = bound.has_value();
  report.bound = bound.value_or(std::numeric_limits<double>::infinity());
  report.gamma = static_cast<double>(k) / static_cast<double>(A.rows());
  report.alpha = static_cast<double>(S.dim()) / static_cast<double>(k);
  return report;
}

bool forward_snr_ok(double sigma_k, double delta, double gamma) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw ParameterError("forward_snr_ok: gamma outside (0,1)");
  if (delta == 0.0) return true;
  return sigma_k / delta > 1.0 + 1.0 / (1.0 - gamma);
}

bool backward_snr_ok(double sigma_tilde, double delta, double gamma, double alpha) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw ParameterError("backward_snr_ok: gamma outside (0,1)");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ParameterError("backward_snr_ok: alpha outside (0,1]");
  if (gamma * (1.0 + alpha) >= 1.0)
    throw InfeasibleRegimeError("backward_snr_ok: gamma*(1+alpha) >= 1");
  if (delta == 0.0) return true;
  return sigma_tilde / delta > 1.0 + 1.0 / (1.0 - gamma * (1.0 + alpha));
}

template <typename Scalar>
SigmaTildeResult sigma_tilde(const Matrix<Scalar>& A, const Subspace<Scalar>& S,
                             const IndexSet& I, const IndexSet& true_support, int k, int r, int q,
                             std::size_t max_exhaustive, std::size_t sample_count,
                             std::uint64_t sample_seed) {
  IndexSet pool;
  for (int j : I)
    if (j != q && std::find(true_support.begin(), true_support.end(), j) != true_support.end())
      pool.push_back(j);
  std::sort(pool.begin(), pool.end());
  const int choose = k - r;
  if (static_cast<int>(pool.size()) < choose)
    throw ParameterError("sigma_tilde: |I_C \\ {q}| < k - r");

  SigmaTildeResult result;
  result.value = -std::numeric_limits<double>::infinity();
  if (choose == 0) {
    result.value = sigma_k_augmented(A, IndexSet{}, S, k);
    result.subsets_evaluated = 1;
    return result;
  }

  const double total = binomial_count(static_cast<int>(pool.size()), choose);
  if (total <= static_cast<double>(max_exhaustive)) {
    for_each_combination(pool, choose, [&](const IndexSet& T) {
      result.value = std::max(result.value, sigma_k_augmented(A, T, S, k));
      ++result.subsets_evaluated;
    });
    result.exhaustive = true;
  } else {
    result.exhaustive = false;
    Engine engine = make_engine(sample_seed);
    for (std::size_t s = 0; s < sample_count; ++s) {
      const IndexSet picks =
          sample_without_replacement(static_cast<int>(pool.size()), choose, engine);
      IndexSet T;
      T.reserve(picks.size());
      for (int p : picks) T.push_back(pool[static_cast<std::size_t>(p)]);
      result.value = std::max(result.value, sigma_k_augmented(A, T, S, k));
      ++result.subsets_evaluated;
    }
  }
  return result;
}

double semicircle_mass(double y) {
  if (y <= 0.0) return 0.0;
  if (y >= 2.0) return 1.0;
  return (y * std::sqrt(4.0 - y * y) / 2.0 + 2.0 * std::asin(y / 2.0)) / pi;
}

double t1_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ParameterError("t1_alpha: alpha outside (0, 1]");
  double lo = 0.0, hi = 1.0;
  while (hi - lo > 1e-13) {
    const double mid = 0.5 * (lo + hi);
    if (semicircle_mass(2.0 * mid) < alpha)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double F_alpha(double alpha) {
  const double t1 = t1_alpha(alpha);
  // Integral of sqrt((4-x)x)/(2*pi) over [0, 4*t1^2]; the substitution
  // x = 4*sin^2(theta) removes both endpoint singularities.
  const double theta_b = std::asin(std::min(t1, 1.0));
  const auto integrand = [](double theta) { return (2.0 / pi) * (1.0 - std::cos(4.0 * theta)); };
  return integrate(integrand, 0.0, theta_b, 1e-12) / alpha;
}

double feasibility_gap(double gamma, double alpha) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw ParameterError("feasibility_gap: gamma outside (0,1)");
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw ParameterError("feasibility_gap: alpha outside (0, 1]");
  const double F = F_alpha(alpha);
  return (alpha - alpha * std::sqrt(gamma) * (2.0 - F)) / 2.0 - (1.0 - gamma * (1.0 + alpha));
}

FeasibilityRegion classify_region(double gamma, double alpha) {
  // m > r + k is exactly gamma*(1+alpha) < 1 in the (gamma, alpha) ratios.
  const bool region_a = feasibility_gap(gamma, alpha) < 0.0 && gamma * (1.0 + alpha) < 1.0;
  return region_a ? FeasibilityRegion::filtering_favored : FeasibilityRegion::init_favored;
}

std::vector<SigmaKSweepRow> sigma_k_sweep(const SigmaKSweepConfig& cfg) {
  if (cfg.instances < 2) throw ParameterError("sigma_k_sweep: need at least 2 instances");
  if (cfg.r < 1 || cfg.r > cfg.k) throw ParameterError("sigma_k_sweep: need 1 <= r <= k");
  std::vector<std::vector<double>> samples(static_cast<std::size_t>(cfg.r));
  for (int inst = 0; inst < cfg.instances; ++inst) {
    const std::uint64_t base = derive_seed(cfg.seed, static_cast<std::uint64_t>(inst));
    const auto A = gen_gaussian_sensing(cfg.m, cfg.n, 0.0, splitmix64(base ^ 1));
    const auto truth = gen_ground_truth<Real>(cfg.n, cfg.k, cfg.r, cfg.snapshots, 1.0,
                                              splitmix64(base ^ 2));
    const Matrix<Real> B = noiseless_observations(A, truth);
    const Subspace<Real> S = principal_subspace(B, cfg.r);
    // Nested in-support sets: prefixes of a shuffled copy of the support.
    IndexSet order = truth.support;
    Engine engine = make_engine(splitmix64(base ^ 3));
    std::shuffle(order.begin(), order.end(), engine);
    for (int l = 0; l < cfg.r; ++l) {
      const IndexSet I(order.begin(), order.begin() + (cfg.k - cfg.r + l));
      samples[static_cast<std::size_t>(l)].push_back(
          sigma_k_augmented(A.matrix, I, S, cfg.k));
    }
  }
  std::vector<SigmaKSweepRow> rows;
  for (int l = 0; l < cfg.r; ++l) {
    const auto& xs = samples[static_cast<std::size_t>(l)];
    const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    rows.push_back({l, mean, std::sqrt(ss / static_cast<double>(xs.size() - 1))});
  }
  return rows;
}

std::vector<FeasibilityGridRow> feasibility_grid(double step) {
  if (!(step > 0.0 && step < 1.0)) throw ParameterError("feasibility_grid: bad step");
  std::vector<FeasibilityGridRow> rows;
  const int cells = static_cast<int>(std::round(1.0 / step));
  for (int gi = 1; gi < cells; ++gi) {
    const double gamma = gi * step;
    for (int ai = 1; ai <= cells; ++ai) {
      const double alpha = std::min(ai * step, 1.0);
      FeasibilityGridRow row;
      row.gamma = gamma;
      row.alpha = alpha;
      row.F = F_alpha(alpha);
      row.f = feasibility_gap(gamma, alpha);
      row.region = classify_region(gamma, alpha);
      rows.push_back(row);
    }
  }
  return rows;
}

#define SEQMUSIC_INSTANTIATE(S)                                                              \
  template double sigma_k_augmented<S>(const Matrix<S>&, const IndexSet&, const Subspace<S>&, \
                                       int);                                                 \
  template double basis_perturbation<S>(const Subspace<S>&, const Subspace<S>&);             \
  template BoundReport make_bound_report<S>(const Matrix<S>&, const IndexSet&,               \
                                            const Subspace<S>&, const Subspace<S>&, int);    \
  template SigmaTildeResult sigma_tilde<S>(const Matrix<S>&, const Subspace<S>&,             \
                                           const IndexSet&, const IndexSet&, int, int, int,  \
                                           std::size_t, std::size_t, std::uint64_t);

SEQMUSIC_INSTANTIATE(Real)
SEQMUSIC_INSTANTIATE(Complex)
#undef SEQMUSIC_INSTANTIATE

}  // namespace seqmusic
