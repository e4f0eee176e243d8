#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "natgrad/ambient.hpp"
#include "natgrad/core.hpp"
#include "natgrad/invariance.hpp"
#include "natgrad/parametrization.hpp"

namespace natgrad::models {

/// A registered experiment bundle: ambient space, parametrization, optional
/// reparametrization, objective, start point and valid parameter box.
struct ModelBundle {
  std::string id;
  AmbientSpace space;
  Parametrization phi;
  std::optional<Diffeomorphism> f;  // gives the paired psi = phi o f run
  Objective obj;
  Vector xi0;
  SamplingBox box;
  int model_dim = 0;
};

inline Objective objective_x_squared() {
  return {[](const Vector& p) { return p(0) * p(0); },
          [](const Vector& p) {
            Vector d = Vector::Zero(p.size());
            d(0) = 2.0 * p(0);
            return d;
          }};
}

inline Objective objective_sum_of_coordinates(int n) {
  return {[](const Vector& p) { return p.sum(); },
          [n](const Vector&) { return Vector::Ones(n); }};
}

/// Overparametrized line: phi(xi1, xi2) = (xi1 + xi2, 0) in Euclidean R^2.
inline Parametrization overparam_line(const AmbientSpace& space) {
  Parametrization phi;
  phi.domain_dim = 2;
  phi.codomain = space;
  phi.label = "overparam-line";
  phi.value_at = [](const Vector& xi) {
    Vector p(2);
    p << xi(0) + xi(1), 0.0;
    return p;
  };
  phi.jacobian_at = [](const Vector&) {
    Matrix j(2, 2);
    j << 1, 1, 0, 0;
    return j;
  };
  return phi;
}

/// The diffeomorphism f(theta1, theta2) = (2 theta1, theta2).
inline Diffeomorphism axis_scaling() {
  Diffeomorphism f;
  f.dim = 2;
  f.forward_at = [](const Vector& theta) {
    Vector xi(2);
    xi << 2.0 * theta(0), theta(1);
    return xi;
  };
  f.jacobian_at = [](const Vector&) {
    Matrix F(2, 2);
    F << 2, 0, 0, 1;
    return F;
  };
  f.inverse_at = [](const Vector& xi) {
    Vector theta(2);
    theta << 0.5 * xi(0), xi(1);
    return theta;
  };
  return f;
}

/// Figure-eight curve phi(xi) = (sin 2xi, sin xi) on (-pi/8, 5pi/8).
inline Parametrization figure_eight(const AmbientSpace& space) {
  Parametrization phi;
  phi.domain_dim = 1;
  phi.codomain = space;
  phi.label = "figure-eight";
  phi.value_at = [](const Vector& xi) {
    Vector p(2);
    p << std::sin(2.0 * xi(0)), std::sin(xi(0));
    return p;
  };
  phi.jacobian_at = [](const Vector& xi) {
    Matrix j(2, 1);
    j << 2.0 * std::cos(2.0 * xi(0)), std::cos(xi(0));
    return j;
  };
  return phi;
}

/// The reflection f(theta) = pi - theta. Composing with the figure-eight
/// gives the mirrored curve psi(theta) = (-sin 2theta, sin theta), whose
/// theta = 0 hits the crossing point through the other branch.
inline Diffeomorphism figure_eight_reflection() {
  Diffeomorphism f;
  f.dim = 1;
  f.forward_at = [](const Vector& theta) {
    Vector xi(1);
    xi << std::numbers::pi - theta(0);
    return xi;
  };
  f.jacobian_at = [](const Vector&) {
    Matrix F(1, 1);
    F << -1.0;
    return F;
  };
  f.inverse_at = [](const Vector& xi) {
    Vector theta(1);
    theta << std::numbers::pi - xi(0);
    return theta;
  };
  return f;
}

/// phi(xi1, xi2) = (xi1, xi2^3): surjective onto R^2 but rank 1 at xi2 = 0.
inline Parametrization cubic_fold_y(const AmbientSpace& space) {
  Parametrization phi;
  phi.domain_dim = 2;
  phi.codomain = space;
  phi.label = "cubic-fold-y";
  phi.value_at = [](const Vector& xi) {
    Vector p(2);
    p << xi(0), xi(1) * xi(1) * xi(1);
    return p;
  };
  phi.jacobian_at = [](const Vector& xi) {
    Matrix j(2, 2);
    j << 1, 0, 0, 3.0 * xi(1) * xi(1);
    return j;
  };
  return phi;
}

/// psi(theta1, theta2) = (theta1^3, theta2): the partner of cubic_fold_y with
/// the orthogonal rank-1 span at the origin.
inline Parametrization cubic_fold_x(const AmbientSpace& space) {
  Parametrization psi;
  psi.domain_dim = 2;
  psi.codomain = space;
  psi.label = "cubic-fold-x";
  psi.value_at = [](const Vector& theta) {
    Vector p(2);
    p << theta(0) * theta(0) * theta(0), theta(1);
    return p;
  };
  psi.jacobian_at = [](const Vector& theta) {
    Matrix j(2, 2);
    j << 3.0 * theta(0) * theta(0), 0, 0, 1;
    return j;
  };
  return psi;
}

/// Nonlinear overparametrized model phi(xi1, xi2) = (xi1 * xi2, 0). Unlike
/// the linear overparametrized line, finite descent steps under phi and
/// phi o f land on measurably different model points, which makes the
/// trajectory dependence of the descent method visible.
inline Parametrization product_line(const AmbientSpace& space) {
  Parametrization phi;
  phi.domain_dim = 2;
  phi.codomain = space;
  phi.label = "product-line";
  phi.value_at = [](const Vector& xi) {
    Vector p(2);
    p << xi(0) * xi(1), 0.0;
    return p;
  };
  phi.jacobian_at = [](const Vector& xi) {
    Matrix j(2, 2);
    j << xi(1), xi(0), 0, 0;
    return j;
  };
  return phi;
}

inline Parametrization identity_parametrization(const AmbientSpace& space) {
  Parametrization phi;
  phi.domain_dim = space.dim;
  phi.codomain = space;
  phi.label = "identity";
  phi.value_at = [](const Vector& xi) { return xi; };
  phi.jacobian_at = [n = space.dim](const Vector&) { return Matrix::Identity(n, n); };
  return phi;
}

inline SamplingBox square_box(int d, double lo, double hi) {
  return {Vector::Constant(d, lo), Vector::Constant(d, hi)};
}

inline ModelBundle a3_overparam() {
  const AmbientSpace space = euclidean_space(2);
  ModelBundle m;
  m.id = "a3-overparam";
  m.space = space;
  m.phi = overparam_line(space);
  m.f = axis_scaling();
  m.obj = objective_x_squared();
  m.xi0 = (Vector(2) << 2.0, 1.0).finished();
  m.box = square_box(2, -10.0, 10.0);
  m.model_dim = 1;
  return m;
}

inline ModelBundle a2_figure_eight() {
  const AmbientSpace space = euclidean_space(2);
  ModelBundle m;
  m.id = "a2-figure-eight";
  m.space = space;
  m.phi = figure_eight(space);
  m.f = figure_eight_reflection();
  m.obj = objective_sum_of_coordinates(2);
  m.xi0 = Vector::Zero(1);
  m.box = {Vector::Constant(1, -std::numbers::pi / 8.0 + 0.01),
           Vector::Constant(1, 5.0 * std::numbers::pi / 8.0 - 0.01)};
  m.model_dim = 1;
  return m;
}

inline ModelBundle a1_cubic() {
  ModelBundle m = a3_overparam();
  m.id = "a1-cubic";
  m.f.reset();  // the cubic map is attached by the experiment itself
  return m;
}

inline ModelBundle ex1_orthogonal_spans() {
  const AmbientSpace space = euclidean_space(2);
  ModelBundle m;
  m.id = "ex1-orthogonal-spans";
  m.space = space;
  m.phi = cubic_fold_y(space);
  m.obj = objective_sum_of_coordinates(2);
  m.xi0 = Vector::Zero(2);
  m.box = square_box(2, -1.0, 1.0);
  m.model_dim = 2;
  return m;
}

inline ModelBundle prod_overparam() {
  const AmbientSpace space = euclidean_space(2);
  ModelBundle m;
  m.id = "prod-overparam";
  m.space = space;
  m.phi = product_line(space);
  m.f = axis_scaling();
  m.obj = objective_x_squared();
  m.xi0 = (Vector(2) << 2.0, 1.0).finished();
  m.box = square_box(2, -10.0, 10.0);
  m.model_dim = 1;
  return m;
}

inline std::vector<std::string> model_ids() {
  return {"a1-cubic", "a2-figure-eight", "a3-overparam", "ex1-orthogonal-spans",
          "prod-overparam"};
}

inline ModelBundle get_model(const std::string& id) {
  if (id == "a1-cubic") return a1_cubic();
  if (id == "a2-figure-eight") return a2_figure_eight();
  if (id == "a3-overparam") return a3_overparam();
  if (id == "ex1-orthogonal-spans") return ex1_orthogonal_spans();
  if (id == "prod-overparam") return prod_overparam();
  throw UnknownExample("unknown model id: " + id);
}

}  // namespace natgrad::models
