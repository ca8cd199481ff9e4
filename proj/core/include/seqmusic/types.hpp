#pragma once

#include <Eigen/Dense>

#include <complex>
#include <vector>

namespace seqmusic {

using Real = double;
using Complex = std::complex<double>;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Column/row indices are 0-based throughout the library.
using IndexSet = std::vector<int>;

template <typename Scalar>
struct is_complex : std::false_type {};
template <typename T>
struct is_complex<std::complex<T>> : std::true_type {};
template <typename Scalar>
inline constexpr bool is_complex_v = is_complex<Scalar>::value;

}  // namespace seqmusic
