#pragma once

#include <cstdint>
#include <optional>

#include "seqmusic/problem.hpp"
#include "seqmusic/subspace.hpp"

namespace seqmusic {

/// Perturbation-bound evaluation at one operating point. `delta_op` is the
/// spectral norm of the Procrustes-aligned basis difference; `delta_proj`
/// is the spectral norm of the projector difference. The bound and the
/// feasibility flag are computed from delta_proj.
struct BoundReport {
  double delta_op = 0.0;
  double delta_proj = 0.0;
  double sigma_k = 0.0;
  double bound = 0.0;     ///< delta_proj / (sigma_k - delta_proj) when feasible
  bool feasible = false;  ///< delta_proj < sigma_k
  double gamma = 0.0;     ///< k / m
  double alpha = 0.0;     ///< r / k
};

/// k-th largest singular value of [A_I basis(S)].
template <typename Scalar>
double sigma_k_augmented(const Matrix<Scalar>& A, const IndexSet& I, const Subspace<Scalar>& S,
                         int k);

/// delta / (sigma_k - delta), or nullopt when delta >= sigma_k.
std::optional<double> perturbation_bound(double delta, double sigma_k);

/// Spectral norm of S_tilde*Q - S after the orthogonal Procrustes alignment
/// Q of the two orthonormal bases.
template <typename Scalar>
double basis_perturbation(const Subspace<Scalar>& S, const Subspace<Scalar>& S_tilde);

template <typename Scalar>
BoundReport make_bound_report(const Matrix<Scalar>& A, const IndexSet& I,
                              const Subspace<Scalar>& S, const Subspace<Scalar>& S_tilde, int k);

/// Forward sufficiency: sigma_k / delta > 1 + 1/(1 - gamma). delta = 0 is
/// the noiseless case and always passes.
bool forward_snr_ok(double sigma_k, double delta, double gamma);

/// Backward sufficiency: sigma_tilde / delta > 1 + 1/(1 - gamma*(1+alpha)).
/// Throws InfeasibleRegimeError when gamma*(1+alpha) >= 1.
bool backward_snr_ok(double sigma_tilde, double delta, double gamma, double alpha);

struct SigmaTildeResult {
  double value = 0.0;
  bool exhaustive = true;
  std::size_t subsets_evaluated = 0;
};

/// max over T subset of (I intersect true_support) \ {q}, |T| = k-r, of
/// sigma_k_augmented(A, T, S, k). Exhaustive while the subset count stays
/// within max_exhaustive, uniformly sampled otherwise.
template <typename Scalar>
SigmaTildeResult sigma_tilde(const Matrix<Scalar>& A, const Subspace<Scalar>& S,
                             const IndexSet& I, const IndexSet& true_support, int k, int r, int q,
                             std::size_t max_exhaustive = 10000, std::size_t sample_count = 2000,
                             std::uint64_t sample_seed = 0);

/// Quantile t1(alpha) in [0, 1] of the [0,2]-supported semicircle density
/// (1/pi)*sqrt(4 - x^2): the solution of its mass on [0, 2*t1] = alpha.
double t1_alpha(double alpha);

/// Mass of the [0,2]-supported semicircle density on [0, y].
double semicircle_mass(double y);

/// F(alpha) = (1/alpha) * integral_0^{4*t1^2} x dlambda1(x) with
/// dlambda1 = sqrt((4-x)x)/(2*pi*x) dx; the x factor cancels analytically so
/// the integrand sqrt((4-x)x)/(2*pi) is evaluated by adaptive quadrature.
double F_alpha(double alpha);

/// Gap f(gamma, alpha) between the initializer bound and the filtering bound:
/// (alpha - alpha*sqrt(gamma)*(2 - F(alpha)))/2 - (1 - gamma*(1+alpha)).
double feasibility_gap(double gamma, double alpha);

enum class FeasibilityRegion {
  filtering_favored,  ///< f < 0 and m > r + k (equivalently gamma*(1+alpha) < 1)
  init_favored
};

FeasibilityRegion classify_region(double gamma, double alpha);

/// Configuration for the sigma_k-versus-l monotonicity sweep.
struct SigmaKSweepConfig {
  int m = 24;
  int n = 128;
  int k = 8;
  int r = 6;
  int snapshots = 16;
  int instances = 100;
  std::uint64_t seed = 0;
};

struct SigmaKSweepRow {
  int l = 0;
  double sigma_k_mean = 0.0;
  double sigma_k_std = 0.0;  ///< sample standard deviation
};

/// For each instance draws a noiseless canonical problem, grows a nested
/// in-support index set |I| = k-r+l for l = 0..r-1 and records
/// sigma_k([A_I S]); returns per-l mean and sample standard deviation.
std::vector<SigmaKSweepRow> sigma_k_sweep(const SigmaKSweepConfig& cfg);

struct FeasibilityGridRow {
  double gamma = 0.0;
  double alpha = 0.0;
  double F = 0.0;
  double f = 0.0;
  FeasibilityRegion region = FeasibilityRegion::init_favored;
};

/// Grid evaluation of f over (0,1)^2 at the given step.
std::vector<FeasibilityGridRow> feasibility_grid(double step = 0.01);

}  // namespace seqmusic
