#pragma once

#include <filesystem>
#include <variant>

#include "seqmusic/problem.hpp"

namespace seqmusic {

/// One generated trial instance, bundled for the `--dump` container.
template <typename Scalar>
struct ProblemInstance {
  SensingMatrix<Scalar> sensing;
  GroundTruth<Scalar> truth;
  MeasurementEnsemble<Scalar> measurements;
};

using AnyInstance = std::variant<ProblemInstance<Real>, ProblemInstance<Complex>>;

/// Self-describing JSON container with matrices serialized column-major.
/// Doubles round-trip bit-exactly (shortest round-trip decimal rendering).
void dump_instance(const ProblemInstance<Real>& instance, const std::filesystem::path& path);
void dump_instance(const ProblemInstance<Complex>& instance, const std::filesystem::path& path);

AnyInstance load_instance(const std::filesystem::path& path);

}  // namespace seqmusic
