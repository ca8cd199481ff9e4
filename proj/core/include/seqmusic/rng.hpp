#pragma once

#include <cstdint>
#include <random>

#include "seqmusic/types.hpp"

namespace seqmusic {

/// SplitMix64 finalizer; bijective on 64-bit words.
std::uint64_t splitmix64(std::uint64_t x);

/// Derives a stream seed from a master seed and an already-packed key.
/// For a fixed master seed this map is injective in `key`:
/// splitmix64(splitmix64(master) ^ key).
std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t key);

/// Deterministic engine used by every generator in the library.
using Engine = std::mt19937_64;

inline Engine make_engine(std::uint64_t seed) { return Engine(seed); }

/// m x n draw of i.i.d. normal entries, filled column-major. For complex
/// scalars the draw is circularly symmetric around `mean` with total
/// variance `variance` (real and imaginary parts each carry variance/2).
template <typename Scalar>
Matrix<Scalar> normal_matrix(Eigen::Index rows, Eigen::Index cols, double mean,
                             double variance, Engine& engine);

/// k distinct values drawn uniformly from {0, ..., n-1}, returned sorted.
IndexSet sample_without_replacement(int n, int k, Engine& engine);

}  // namespace seqmusic
