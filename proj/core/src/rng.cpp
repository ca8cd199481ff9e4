#include "seqmusic/rng.hpp"

#include <algorithm>
#include <cmath>

#include "seqmusic/errors.hpp"

namespace seqmusic {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t key) {
  return splitmix64(splitmix64(master_seed) ^ key);
}

template <typename Scalar>
Matrix<Scalar> normal_matrix(Eigen::Index rows, Eigen::Index cols, double mean,
                             double variance, Engine& engine) {
  if (rows < 1 || cols < 1) throw ParameterError("normal_matrix: empty shape");
  if (variance <= 0.0) throw ParameterError("normal_matrix: variance must be positive");
  Matrix<Scalar> out(rows, cols);
  if constexpr (is_complex_v<Scalar>) {
    std::normal_distribution<double> dist(0.0, std::sqrt(variance / 2.0));
    for (Eigen::Index j = 0; j < cols; ++j)
      for (Eigen::Index i = 0; i < rows; ++i) {
        const double re = dist(engine);
        const double im = dist(engine);
        out(i, j) = Scalar(mean + re, im);
      }
  } else {
    std::normal_distribution<double> dist(mean, std::sqrt(variance));
    for (Eigen::Index j = 0; j < cols; ++j)
      for (Eigen::Index i = 0; i < rows; ++i) out(i, j) = dist(engine);
  }
  return out;
}

template Matrix<Real> normal_matrix<Real>(Eigen::Index, Eigen::Index, double, double, Engine&);
template Matrix<Complex> normal_matrix<Complex>(Eigen::Index, Eigen::Index, double, double,
                                                Engine&);

IndexSet sample_without_replacement(int n, int k, Engine& engine) {
  if (k < 0 || k > n) throw ParameterError("sample_without_replacement: k out of range");
  // Floyd's algorithm; set semantics, then sorted for a canonical order.
  IndexSet chosen;
  chosen.reserve(static_cast<std::size_t>(k));
  for (int j = n - k; j < n; ++j) {
    std::uniform_int_distribution<int> dist(0, j);
    const int t = dist(engine);
    if (std::find(chosen.begin(), chosen.end(), t) == chosen.end())
      chosen.push_back(t);
    else
      chosen.push_back(j);
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

}  // namespace seqmusic
