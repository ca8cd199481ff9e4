#include "seqmusic/instance_io.hpp"

#include <fstream>
#include <json.hpp>

namespace seqmusic {

namespace {

using nlohmann::json;

constexpr const char* kFormatTag = "seqmusic-instance";
constexpr int kFormatVersion = 1;

json matrix_to_json(const Matrix<Real>& M) {
  std::vector<double> data(M.data(), M.data() + M.size());
  return json{{"rows", M.rows()}, {"cols", M.cols()}, {"data", std::move(data)}};
}

json matrix_to_json(const Matrix<Complex>& M) {
  // Interleaved [re, im] pairs, column-major.
  std::vector<double> data;
  data.reserve(static_cast<std::size_t>(2 * M.size()));
  for (Eigen::Index j = 0; j < M.cols(); ++j)
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
      data.push_back(M(i, j).real());
      data.push_back(M(i, j).imag());
    }
  return json{{"rows", M.rows()}, {"cols", M.cols()}, {"data", std::move(data)}};
}

template <typename Scalar>
Matrix<Scalar> matrix_from_json(const json& j) {
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto cols = j.at("cols").get<Eigen::Index>();
  const auto& data = j.at("data");
  const std::size_t expected =
      static_cast<std::size_t>(rows * cols) * (is_complex_v<Scalar> ? 2 : 1);
  if (data.size() != expected) throw IoError("instance file: matrix payload size mismatch");
  Matrix<Scalar> M(rows, cols);
  std::size_t p = 0;
  for (Eigen::Index jj = 0; jj < cols; ++jj)
    for (Eigen::Index i = 0; i < rows; ++i) {
      if constexpr (is_complex_v<Scalar>) {
        const double re = data[p++].get<double>();
        const double im = data[p++].get<double>();
        M(i, jj) = Scalar(re, im);
      } else {
        M(i, jj) = data[p++].get<double>();
      }
    }
  return M;
}

json snr_to_json(double snr_db) {
  if (std::isinf(snr_db)) return "inf";
  return snr_db;
}

double snr_from_json(const json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "inf") return std::numeric_limits<double>::infinity();
    throw IoError("instance file: unrecognized snr_db value");
  }
  return j.get<double>();
}

template <typename Scalar>
json instance_to_json(const ProblemInstance<Scalar>& inst) {
  json j;
  j["format"] = kFormatTag;
  j["version"] = kFormatVersion;
  j["field"] = is_complex_v<Scalar> ? "complex" : "real";
  j["family"] = inst.sensing.family == MatrixFamily::fourier ? "fourier" : "gaussian";
  j["mean"] = inst.sensing.mean;
  j["sensing_seed"] = inst.sensing.seed;
  j["noise_seed"] = inst.measurements.noise_seed;
  j["m"] = inst.sensing.rows();
  j["n"] = inst.sensing.cols();
  j["k"] = inst.truth.support.size();
  j["r"] = inst.truth.rank_r;
  j["snapshots"] = inst.measurements.observations.cols();
  j["snr_db"] = snr_to_json(inst.measurements.snr_db);
  j["tau"] = inst.truth.tau;
  j["support"] = inst.truth.support;
  j["A"] = matrix_to_json(inst.sensing.matrix);
  j["coeffs"] = matrix_to_json(inst.truth.coeffs);
  j["Y"] = matrix_to_json(inst.measurements.observations);
  return j;
}

template <typename Scalar>
ProblemInstance<Scalar> instance_from_json(const json& j) {
  ProblemInstance<Scalar> inst;
  inst.sensing.matrix = matrix_from_json<Scalar>(j.at("A"));
  inst.sensing.family =
      j.at("family").get<std::string>() == "fourier" ? MatrixFamily::fourier : MatrixFamily::gaussian;
  inst.sensing.mean = j.at("mean").get<double>();
  inst.sensing.seed = j.at("sensing_seed").get<std::uint64_t>();
  inst.truth.n = static_cast<int>(inst.sensing.cols());
  inst.truth.support = j.at("support").get<IndexSet>();
  inst.truth.coeffs = matrix_from_json<Scalar>(j.at("coeffs"));
  inst.truth.rank_r = j.at("r").get<int>();
  inst.truth.tau = j.at("tau").get<double>();
  inst.measurements.observations = matrix_from_json<Scalar>(j.at("Y"));
  inst.measurements.snr_db = snr_from_json(j.at("snr_db"));
  inst.measurements.noise_seed = j.at("noise_seed").get<std::uint64_t>();
  return inst;
}

void write_json(const json& j, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out << j.dump(2) << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace

void dump_instance(const ProblemInstance<Real>& instance, const std::filesystem::path& path) {
  write_json(instance_to_json(instance), path);
}

void dump_instance(const ProblemInstance<Complex>& instance, const std::filesystem::path& path) {
  write_json(instance_to_json(instance), path);
}

AnyInstance load_instance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open for reading: " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw IoError("instance file parse error: " + std::string(e.what()));
  }
  if (j.value("format", "") != kFormatTag) throw IoError("not a seqmusic instance file");
  if (j.value("version", 0) != kFormatVersion) throw IoError("unsupported instance file version");
  if (j.at("field").get<std::string>() == "complex")
    return instance_from_json<Complex>(j);
  return instance_from_json<Real>(j);
}

}  // namespace seqmusic
