#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "natgrad/models.hpp"
#include "natgrad/natural_gradient.hpp"
#include "natgrad/random_instances.hpp"
#include "support/finite_difference.hpp"

using namespace natgrad;
using Catch::Approx;

namespace {

Vector vec1(double a) { return Vector::Constant(1, a); }
Vector vec2(double a, double b) { return (Vector(2) << a, b).finished(); }

}  // namespace

TEST_CASE("gram matrices of the worked examples") {
  const auto m = models::a3_overparam();
  const Matrix g = gram_matrix(m.space, m.phi, vec2(2.0, 1.0)).entries;
  CHECK((g - (Matrix(2, 2) << 1, 1, 1, 1).finished()).norm() <= 1e-14);

  const Parametrization psi = compose(m.phi, *m.f);
  const Matrix gt = gram_matrix(m.space, psi, vec2(1.0, 1.0)).entries;
  CHECK((gt - (Matrix(2, 2) << 4, 2, 2, 1).finished()).norm() <= 1e-14);

  const auto fig8 = models::a2_figure_eight();
  const Matrix g8 = gram_matrix(fig8.space, fig8.phi, vec1(0.0)).entries;
  REQUIRE(g8.rows() == 1);
  CHECK(g8(0, 0) == Approx(5.0).margin(1e-12));
}

TEST_CASE("parameter differential of the pulled-back objective") {
  const auto m = models::a3_overparam();
  CHECK((parameter_differential(m.phi, m.obj, vec2(2.0, 1.0)) - vec2(6.0, 6.0)).norm() <=
        1e-12);

  const Parametrization psi = compose(m.phi, *m.f);
  CHECK((parameter_differential(psi, m.obj, vec2(1.0, 1.0)) - vec2(12.0, 6.0)).norm() <=
        1e-12);

  const Objective constant{[](const Vector&) { return 1.0; },
                           [](const Vector&) { return Vector::Zero(2); }};
  CHECK(parameter_differential(m.phi, constant, vec2(2.0, 1.0)).norm() == 0.0);
}

TEST_CASE("parameter differential matches finite differences of the pullback") {
  for (std::uint64_t seed : {3u, 4u, 5u}) {
    random_instances::Rng rng(seed);
    const auto inst = random_instances::random_instance(rng);
    const Vector fd = testing::fd_gradient(
        [&](const Vector& xi) { return inst.obj.value_at(inst.phi.value(xi)); },
        inst.xi);
    const Vector an = parameter_differential(inst.phi, inst.obj, inst.xi);
    CHECK((fd - an).norm() <= 1e-4 * (1.0 + an.norm()));
  }
}

TEST_CASE("natural parameter gradient coefficients") {
  const auto m = models::a3_overparam();
  const auto npg = natural_parameter_gradient(m.space, m.phi, m.obj, vec2(2.0, 1.0));
  CHECK((npg.coefficients - vec2(3.0, 3.0)).norm() <= 1e-12);
  CHECK(npg.inverse_kind == "moore_penrose");

  // identity parametrization: natural gradient = ordinary gradient
  const auto ident = models::identity_parametrization(euclidean_space(2));
  const auto npg2 =
      natural_parameter_gradient(ident.codomain, ident, m.obj, vec2(1.5, -2.0));
  CHECK((npg2.coefficients - vec2(3.0, 0.0)).norm() <= 1e-12);

  const auto fig8 = models::a2_figure_eight();
  const auto npg3 =
      natural_parameter_gradient(fig8.space, fig8.phi, fig8.obj, vec1(0.0));
  CHECK(npg3.coefficients(0) == Approx(0.6).margin(1e-12));  // 3/5
}

TEST_CASE("natural parameter gradient on the model") {
  const auto m = models::a3_overparam();
  const TangentVector v =
      natural_parameter_gradient_on_model(m.space, m.phi, m.obj, vec2(2.0, 1.0));
  CHECK((v.components - vec2(6.0, 0.0)).norm() <= 1e-12);
  CHECK((v.base_point - vec2(3.0, 0.0)).norm() <= 1e-14);

  const auto fig8 = models::a2_figure_eight();
  const TangentVector a =
      natural_parameter_gradient_on_model(fig8.space, fig8.phi, fig8.obj, vec1(0.0));
  CHECK((a.components - vec2(1.2, 0.6)).norm() <= 1e-12);

  const Parametrization psi = compose(fig8.phi, *fig8.f);
  const TangentVector b =
      natural_parameter_gradient_on_model(fig8.space, psi, fig8.obj, vec1(0.0));
  CHECK((b.components - vec2(0.4, -0.2)).norm() <= 1e-12);
}

TEST_CASE("projection onto spans") {
  const AmbientSpace space = euclidean_space(2);
  const Vector p = Vector::Zero(2);

  const std::vector<TangentVector> axis = {{p, vec2(1.0, 0.0)}};
  const TangentVector pr = project_onto_span(space, axis, {p, vec2(1.0, 1.0)});
  CHECK((pr.components - vec2(1.0, 0.0)).norm() <= 1e-12);

  const std::vector<TangentVector> full = {{p, vec2(1.0, 2.0)}, {p, vec2(0.0, 1.0)}};
  const TangentVector id = project_onto_span(space, full, {p, vec2(-0.3, 0.8)});
  CHECK((id.components - vec2(-0.3, 0.8)).norm() <= 1e-10);

  const std::vector<TangentVector> slanted = {{p, vec2(2.0, 1.0)}};
  const TangentVector pr2 = project_onto_span(space, slanted, {p, vec2(1.0, 1.0)});
  CHECK((pr2.components - vec2(1.2, 0.6)).norm() <= 1e-12);

  CHECK_THROWS_AS(project_onto_span(space, axis, {vec2(1.0, 1.0), vec2(1.0, 0.0)}),
                  BasePointMismatch);
}

TEST_CASE("natural gradient through the properness contract") {
  const auto ident = models::identity_parametrization(euclidean_space(2));
  const Objective obj = models::objective_x_squared();
  const TangentVector g = natural_gradient(ident.codomain, ident, obj, vec2(3.0, 0.0), 2);
  CHECK((g.components - vec2(6.0, 0.0)).norm() <= 1e-12);

  const auto m = models::a3_overparam();
  const TangentVector g2 = natural_gradient(m.space, m.phi, m.obj, vec2(2.0, 1.0), 1);
  CHECK((g2.components - vec2(6.0, 0.0)).norm() <= 1e-12);

  const auto fig8 = models::a2_figure_eight();
  const TangentVector g3 = natural_gradient(fig8.space, fig8.phi, fig8.obj, vec1(0.0), 1);
  CHECK((g3.components - vec2(1.2, 0.6)).norm() <= 1e-12);

  // asking for tangent dimension 2 on the rank-1 line must fail
  CHECK_THROWS_AS(natural_gradient(m.space, m.phi, m.obj, vec2(2.0, 1.0), 2), NotProper);
}

TEST_CASE("pushforward and projection routes agree") {
  const auto m = models::a3_overparam();
  CHECK(theorem1_residual(m.space, m.phi, m.obj, vec2(2.0, 1.0)) <= 1e-9);

  const Objective constant{[](const Vector&) { return 4.0; },
                           [](const Vector&) { return Vector::Zero(2); }};
  CHECK(theorem1_residual(m.space, m.phi, constant, vec2(2.0, 1.0)) == 0.0);

  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    random_instances::Rng rng(seed);
    const auto inst = random_instances::random_instance(rng);
    const TangentVector grad =
        ambient_gradient(inst.space, inst.obj, inst.phi.value(inst.xi));
    const double scale = 1.0 + metric_norm(inst.space, grad);
    CHECK(theorem1_residual(inst.space, inst.phi, inst.obj, inst.xi) <= 1e-8 * scale);
  }
}

TEST_CASE("a hand-built non-MP generalized inverse also satisfies the identity route") {
  // For G = [[1,1],[1,1]] the matrix [[1,0],[0,0]] is a generalized inverse;
  // the pushforward route must still match the projection (the identity only
  // needs A A+ A = A).
  const auto m = models::a3_overparam();
  const InverseKind alt = InverseKind::custom([](const GramMatrix&) {
    return (Matrix(2, 2) << 1.0, 0.0, 0.0, 0.0).finished();
  });
  CHECK(theorem1_residual(m.space, m.phi, m.obj, vec2(2.0, 1.0), alt) <= 1e-9);
}

TEST_CASE("damped inverse converges to the MP route on the model") {
  const auto m = models::a3_overparam();
  const Vector xi = vec2(2.0, 1.0);
  const TangentVector mp =
      natural_parameter_gradient_on_model(m.space, m.phi, m.obj, xi);
  double prev = 1e300;
  for (double lambda : {1e-4, 1e-6, 1e-8}) {
    const TangentVector damped = natural_parameter_gradient_on_model(
        m.space, m.phi, m.obj, xi, InverseKind::damped(lambda));
    const double err = (damped.components - mp.components).norm();
    CHECK(err < prev);
    prev = err;
  }
  CHECK(prev <= 1e-5);
}
