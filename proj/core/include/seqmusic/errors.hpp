#pragma once

#include <stdexcept>
#include <string>

namespace seqmusic {

/// Violated precondition or malformed argument.
struct ParameterError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Every remaining dictionary atom lies (numerically) inside the already
/// selected span, so a greedy step has nothing left to pick.
struct DegenerateDictionaryError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Concatenation [A_I U] is rank-deficient below the requested subspace
/// dimension; the partial support is inconsistent with the signal subspace.
struct IllPosedAugmentationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Fewer measurement rows than the subspace dimension the step requires.
struct RankDeficiencyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Requested operating point lies outside the regime where the predicate
/// is defined (e.g. gamma*(1+alpha) >= 1).
struct InfeasibleRegimeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace seqmusic
