#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "natgrad/pseudoinverse.hpp"
#include "natgrad/random_instances.hpp"

using namespace natgrad;
using Catch::Approx;

namespace {

Matrix ones2() { return (Matrix(2, 2) << 1.0, 1.0, 1.0, 1.0).finished(); }
Vector vec2(double a, double b) { return (Vector(2) << a, b).finished(); }

}  // namespace

TEST_CASE("moore_penrose on rank-one matrices") {
  const Matrix gp = moore_penrose(GramMatrix(ones2()));
  CHECK((gp - 0.25 * ones2()).norm() <= 1e-12);

  const Matrix g2 = (Matrix(2, 2) << 4.0, 2.0, 2.0, 1.0).finished();
  const Matrix g2p = moore_penrose(GramMatrix(g2));
  CHECK((g2p - g2 / 25.0).norm() <= 1e-12);
  CHECK((g2 * g2p * g2 - g2).norm() <= 1e-12);
}

TEST_CASE("moore_penrose of the identity is the identity") {
  const Matrix id = Matrix::Identity(3, 3);
  CHECK((moore_penrose(GramMatrix(id)) - id).norm() <= 1e-14);
}

TEST_CASE("moore_penrose of the zero matrix is zero") {
  CHECK(moore_penrose(GramMatrix(Matrix::Zero(3, 3))).norm() == 0.0);
}

TEST_CASE("GramMatrix construction validates its invariants") {
  CHECK_THROWS_AS(GramMatrix((Matrix(2, 2) << 1.0, 2.0, 0.0, 1.0).finished()),
                  AsymmetricInput);
  CHECK_THROWS_AS(GramMatrix((Matrix(2, 2) << 1.0, 0.0, 0.0, -1.0).finished()),
                  NotPositiveSemidefinite);
}

TEST_CASE("verify_generalized_inverse") {
  const GramMatrix g(ones2());
  const auto ok = verify_generalized_inverse(g.entries, moore_penrose(g));
  CHECK(ok.ok);

  // a non-MP generalized inverse of the all-ones matrix
  const Matrix alt = (Matrix(2, 2) << 1.0, 0.0, 0.0, 0.0).finished();
  CHECK(verify_generalized_inverse(g.entries, alt).ok);

  CHECK_FALSE(
      verify_generalized_inverse(Matrix::Identity(2, 2), 2.0 * Matrix::Identity(2, 2))
          .ok);
  CHECK_THROWS_AS(verify_generalized_inverse(Matrix::Identity(2, 2), Matrix::Zero(3, 3)),
                  DimensionMismatch);
}

TEST_CASE("weighted_min_norm_solve reproduces the two coefficient vectors") {
  const GramMatrix g(ones2());
  const Vector b = vec2(6.0, 6.0);

  const Vector y_xi = weighted_min_norm_solve(g, b, Matrix::Identity(2, 2));
  CHECK((y_xi - vec2(3.0, 3.0)).norm() <= 1e-12);

  const Matrix f = (Matrix(2, 2) << 2.0, 0.0, 0.0, 1.0).finished();
  const Vector y_theta = weighted_min_norm_solve(g, b, f.transpose());
  CHECK((y_theta - vec2(4.8, 1.2)).norm() <= 1e-12);

  const GramMatrix id(Matrix::Identity(2, 2));
  const Matrix w = (Matrix(2, 2) << 1.0, 0.5, 0.0, 2.0).finished();
  CHECK((weighted_min_norm_solve(id, b, w) - b).norm() <= 1e-10);
}

TEST_CASE("weighted_min_norm_solve rejects bad inputs") {
  const GramMatrix g(ones2());
  CHECK_THROWS_AS(weighted_min_norm_solve(g, vec2(1.0, -1.0), Matrix::Identity(2, 2)),
                  InconsistentSystem);
  CHECK_THROWS_AS(weighted_min_norm_solve(g, vec2(1.0, 1.0), Matrix::Zero(2, 2)),
                  SingularWeight);
}

TEST_CASE("damped inverse") {
  const Matrix id = Matrix::Identity(2, 2);
  CHECK((damped_inverse(GramMatrix(Matrix::Zero(2, 2)), 1.0) - id).norm() <= 1e-14);

  const Matrix expected = (Matrix(2, 2) << 2.0, -1.0, -1.0, 2.0).finished() / 3.0;
  CHECK((damped_inverse(GramMatrix(ones2()), 1.0) - expected).norm() <= 1e-12);

  const Matrix full = (Matrix(2, 2) << 3.0, 1.0, 1.0, 2.0).finished();
  const Matrix direct = full.inverse();
  CHECK((damped_inverse(GramMatrix(full), 1e-8) - direct).norm() <=
        1e-6 * direct.norm());

  CHECK_THROWS_AS(damped_inverse(GramMatrix(ones2()), 0.0), NonPositiveDamping);
  CHECK_THROWS_AS(damped_inverse(GramMatrix(ones2()), -1.0), NonPositiveDamping);
}

TEST_CASE("penrose conditions hold over random PSD matrices") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    random_instances::Rng rng(seed);
    std::uniform_int_distribution<int> dim(1, 8);
    const int d = dim(rng);
    std::uniform_int_distribution<int> rk(0, d);
    const Matrix a = random_instances::random_psd_of_rank(rng, d, rk(rng));
    const Matrix ap = moore_penrose(GramMatrix(a));
    CHECK((a * ap * a - a).norm() <= 1e-9 * std::max(1.0, a.norm()));
    CHECK((ap * a * ap - ap).norm() <= 1e-9 * std::max(1.0, ap.norm()));
    CHECK(((a * ap) - (a * ap).transpose()).norm() <= 1e-9);
    CHECK(((ap * a) - (ap * a).transpose()).norm() <= 1e-9);
  }
}
