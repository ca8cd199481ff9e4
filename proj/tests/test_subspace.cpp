#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracle_helpers.hpp"
#include "seqmusic/subspace.hpp"

using namespace seqmusic;
using seqmusic::testing::NoiselessInstance;

namespace {

Vector<Real> unit(int m, int axis) {
  Vector<Real> e = Vector<Real>::Zero(m);
  e(axis) = 1.0;
  return e;
}

}  // namespace

TEST_CASE("principal_subspace identity and dominant-axis cases") {
  const Matrix<Real> eye = Matrix<Real>::Identity(3, 3);
  const auto full = principal_subspace(eye, 3);
  for (int axis = 0; axis < 3; ++axis)
    CHECK(residual_energy(full, unit(3, axis)) <= 1e-18);

  Matrix<Real> diag = Matrix<Real>::Zero(2, 2);
  diag(0, 0) = 5.0;
  diag(1, 1) = 1.0;
  const auto dominant = principal_subspace(diag, 1);
  CHECK(residual_energy(dominant, unit(2, 0)) <= 1e-18);
  CHECK(residual_energy(dominant, unit(2, 1)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("principal_subspace of a rank-2 product spans the left factor") {
  Engine engine = make_engine(99);
  const Matrix<Real> L = normal_matrix<Real>(8, 2, 0.0, 1.0, engine);
  const Matrix<Real> Rm = normal_matrix<Real>(2, 4, 0.0, 1.0, engine);
  const auto S = principal_subspace(Matrix<Real>(L * Rm), 2);
  for (int j = 0; j < 2; ++j) {
    const Vector<Real> col = L.col(j) / L.col(j).norm();
    CHECK(residual_energy(S, col) <= 1e-10);
  }
}

TEST_CASE("principal_subspace rejects bad d") {
  const Matrix<Real> M = Matrix<Real>::Identity(3, 3);
  CHECK_THROWS_AS(principal_subspace(M, 0), ParameterError);
  CHECK_THROWS_AS(principal_subspace(M, 4), ParameterError);
}

TEST_CASE("residual_energy axis cases") {
  const Subspace<Real> S(Matrix<Real>(unit(3, 0)));
  CHECK(residual_energy(S, unit(3, 0)) <= 1e-18);
  CHECK(residual_energy(S, unit(3, 1)) == doctest::Approx(1.0).epsilon(1e-12));

  Matrix<Real> diagonal(2, 1);
  diagonal << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  const Subspace<Real> D(diagonal);
  CHECK(residual_energy(D, unit(2, 0)) == doctest::Approx(0.5).epsilon(1e-12));

  CHECK_THROWS_AS(residual_energy(S, unit(4, 0)), ParameterError);
}

TEST_CASE("residual_energy bounds and projection idempotence") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Engine engine = make_engine(seed);
    const Matrix<Real> M = normal_matrix<Real>(12, 7, 0.0, 1.0, engine);
    const auto S = principal_subspace(M, 3);
    CHECK(has_orthonormal_columns(S.basis()));
    const Vector<Real> a = normal_matrix<Real>(12, 1, 0.0, 1.0, engine);
    const double res = residual_energy(S, a);
    CHECK(res >= 0.0);
    CHECK(res <= a.squaredNorm() + 1e-9);
    const Vector<Real> projected = S.basis() * (S.basis().adjoint() * a);
    CHECK(residual_energy(S, projected) <= 1e-18);
  }
}

TEST_CASE("numerical_rank thresholds") {
  CHECK(numerical_rank(Matrix<Real>(Matrix<Real>::Zero(4, 4)), 1e-8) == 0);
  CHECK(numerical_rank(Matrix<Real>(Matrix<Real>::Identity(3, 3)), 1e-8) == 3);
  Matrix<Real> nearly = Matrix<Real>::Zero(2, 2);
  nearly(0, 0) = 1.0;
  nearly(1, 1) = 1e-12;
  CHECK(numerical_rank(nearly, 1e-8) == 1);
  CHECK_THROWS_AS(numerical_rank(nearly, 0.0), ParameterError);
  CHECK_THROWS_AS(numerical_rank(nearly, 1.0), ParameterError);
}

TEST_CASE("subspace_distance angles") {
  const Subspace<Real> e1(Matrix<Real>(unit(2, 0)));
  const Subspace<Real> e2(Matrix<Real>(unit(2, 1)));
  CHECK(subspace_distance(e1, e1) <= 1e-12);
  CHECK(subspace_distance(e1, e2) == doctest::Approx(1.0).epsilon(1e-12));

  const double theta = std::numbers::pi / 6.0;
  Matrix<Real> rotated(2, 1);
  rotated << std::cos(theta), std::sin(theta);
  CHECK(subspace_distance(e1, Subspace<Real>(rotated)) ==
        doctest::Approx(0.5).epsilon(1e-12));

  const Subspace<Real> tall(Matrix<Real>(unit(3, 0)));
  CHECK_THROWS_AS(subspace_distance(e1, tall), ParameterError);
}

TEST_CASE("subspace_distance is symmetric and satisfies the triangle inequality") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    Engine engine = make_engine(1000 + seed);
    const auto draw = [&](int d) {
      return principal_subspace(normal_matrix<Real>(10, 6, 0.0, 1.0, engine), d);
    };
    const auto S1 = draw(3);
    const auto S2 = draw(3);
    const auto S3 = draw(3);
    const double d12 = subspace_distance(S1, S2);
    const double d21 = subspace_distance(S2, S1);
    CHECK(d12 == doctest::Approx(d21).epsilon(1e-12));
    CHECK(d12 <= subspace_distance(S1, S3) + subspace_distance(S3, S2) + 1e-9);
  }
}

TEST_CASE("augmented_rank basic and canonical-instance cases") {
  Engine engine = make_engine(7);
  const Matrix<Real> A = normal_matrix<Real>(12, 24, 0.0, 1.0, engine);
  const Matrix<Real> B = normal_matrix<Real>(12, 2, 0.0, 1.0, engine);
  CHECK(augmented_rank(A, {}, B, 1e-8) == 2);
  CHECK_THROWS_AS(augmented_rank(A, {24}, B, 1e-8), ParameterError);

  // m=12, n=24, k=4, r=2 noiseless: |I|=3 inside the support makes q=1,
  // |I & suppX|=1 leaves the concatenation full rank.
  const auto sensing = gen_gaussian_sensing(12, 24, 0.0, 42);
  const auto truth = gen_ground_truth<Real>(24, 4, 2, 4, 1.0, 43);
  const Matrix<Real> Bn = noiseless_observations(sensing, truth);

  const IndexSet inside(truth.support.begin(), truth.support.begin() + 3);
  CHECK(augmented_rank(sensing.matrix, inside, Bn, 1e-8) == 4);

  IndexSet mixed{truth.support[0]};
  for (int j = 0; j < 24 && mixed.size() < 3; ++j)
    if (!seqmusic::testing::in_support(truth.support, j)) mixed.push_back(j);
  CHECK(augmented_rank(sensing.matrix, mixed, Bn, 1e-8) == 5);
}

TEST_CASE("rank identity holds across random canonical instances") {
  int sets_checked = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const NoiselessInstance inst = seqmusic::testing::random_noiseless_instance(seed * 31 + 5);
    Engine engine = make_engine(seed ^ 0xabcdef);
    for (const auto& [in_count, out_count] : seqmusic::testing::admissible_shapes(inst)) {
      const IndexSet I = seqmusic::testing::draw_index_set(inst, in_count, out_count, engine);
      const int expected = seqmusic::testing::expected_augmented_rank(inst, I);
      REQUIRE(augmented_rank(inst.sensing.matrix, I, inst.observations, 1e-8) == expected);
      ++sets_checked;
    }
  }
  CHECK(sets_checked > 2000);
}
