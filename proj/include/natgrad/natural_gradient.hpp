#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "natgrad/ambient.hpp"
#include "natgrad/core.hpp"
#include "natgrad/parametrization.hpp"
#include "natgrad/pseudoinverse.hpp"

namespace natgrad {

/// Which generalized inverse of the Gram matrix to use.
struct InverseKind {
  enum class Tag { moore_penrose, damped, custom } tag = Tag::moore_penrose;
  double lambda = 0.0;                                  // damped only
  std::function<Matrix(const GramMatrix&)> custom_fn;   // custom only

  static InverseKind mp() { return {}; }
  static InverseKind damped(double lambda) {
    InverseKind k;
    k.tag = Tag::damped;
    k.lambda = lambda;
    return k;
  }
  static InverseKind custom(std::function<Matrix(const GramMatrix&)> fn) {
    InverseKind k;
    k.tag = Tag::custom;
    k.custom_fn = std::move(fn);
    return k;
  }

  Matrix apply(const GramMatrix& g) const {
    switch (tag) {
      case Tag::moore_penrose:
        return moore_penrose(g);
      case Tag::damped:
        return damped_inverse(g, lambda);
      case Tag::custom:
        return custom_fn(g);
    }
    throw std::logic_error("InverseKind: bad tag");
  }

  std::string name() const {
    switch (tag) {
      case Tag::moore_penrose:
        return "moore_penrose";
      case Tag::damped:
        return "damped(" + std::to_string(lambda) + ")";
      case Tag::custom:
        return "custom";
    }
    return "?";
  }
};

/// Gram matrix of the coordinate tangent vectors: G = J^T g_{phi(xi)} J.
inline GramMatrix gram_matrix(const AmbientSpace& space, const Parametrization& param,
                              const Vector& xi) {
  const Matrix j = param.jacobian(xi);
  const Matrix g = space.metric(param.value(xi));
  Matrix entries = j.transpose() * g * j;
  entries = 0.5 * (entries + entries.transpose());
  return {std::move(entries), param.label};
}

/// Coordinate derivatives of the pulled-back objective: J^T dL_{phi(xi)}.
inline Vector parameter_differential(const Parametrization& param, const Objective& obj,
                                     const Vector& xi) {
  const Vector p = param.value(xi);
  const Vector dl = obj.differential_at(p);
  require_dim(dl, param.codomain.dim, "parameter_differential: differential length");
  return param.jacobian(xi).transpose() * dl;
}

struct NaturalParameterGradient {
  Vector at;
  Vector coefficients;
  std::string inverse_kind;
  std::string parametrization_label;
};

inline NaturalParameterGradient natural_parameter_gradient(
    const AmbientSpace& space, const Parametrization& param, const Objective& obj,
    const Vector& xi, const InverseKind& kind = InverseKind::mp()) {
  const GramMatrix g = gram_matrix(space, param, xi);
  const Vector grad = parameter_differential(param, obj, xi);
  return {xi, kind.apply(g) * grad, kind.name(), param.label};
}

inline TangentVector natural_parameter_gradient_on_model(
    const AmbientSpace& space, const Parametrization& param, const Objective& obj,
    const Vector& xi, const InverseKind& kind = InverseKind::mp()) {
  return pushforward(param, xi,
                     natural_parameter_gradient(space, param, obj, xi, kind).coefficients);
}

/// g_p-orthogonal projection of v onto the span of the (not necessarily
/// independent) basis vectors: Pi(v) = (G+)^{ij} g_p(v, e_j) e_i.
inline TangentVector project_onto_span(const AmbientSpace& space,
                                       const std::vector<TangentVector>& basis,
                                       const TangentVector& v) {
  const int d = static_cast<int>(basis.size());
  for (const auto& e : basis) {
    if (!same_base_point(e, v)) {
      throw BasePointMismatch("project_onto_span: base points differ");
    }
  }
  if (d == 0) {
    return {v.base_point, Vector::Zero(v.components.size())};
  }
  const Matrix gp = space.metric(v.base_point);
  Matrix gram(d, d);
  Vector omega(d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      gram(i, j) = basis[i].components.dot(gp * basis[j].components);
    }
    omega(i) = v.components.dot(gp * basis[i].components);
  }
  gram = 0.5 * (gram + gram.transpose());
  const Vector coeffs = moore_penrose(GramMatrix(gram, "span")) * omega;
  Vector out = Vector::Zero(v.components.size());
  for (int i = 0; i < d; ++i) {
    out += coeffs(i) * basis[i].components;
  }
  return {v.base_point, std::move(out)};
}

/// The Riemannian gradient of the restricted objective at phi(xi), valid
/// under the properness contract: the coordinate tangent vectors must span
/// the full tangent space of the model, whose dimension the caller asserts.
inline TangentVector natural_gradient(const AmbientSpace& space,
                                      const Parametrization& param, const Objective& obj,
                                      const Vector& xi, int model_dim) {
  const PropernessReport rep = properness_check(param, xi, model_dim);
  if (!rep.is_proper) {
    throw NotProper("natural_gradient: parametrization not proper at this point "
                    "(jacobian rank " + std::to_string(rep.jacobian_rank) +
                    ", asserted tangent dimension " + std::to_string(model_dim) + ")");
  }
  const TangentVector grad = ambient_gradient(space, obj, param.value(xi));
  return project_onto_span(space, coordinate_tangent_vectors(param, xi), grad);
}

/// g_p-norm of the gap between the pushed-forward natural parameter gradient
/// and the projection of the ambient gradient onto the coordinate span.
/// Zero (to solver precision) for the Moore-Penrose inverse.
inline double theorem1_residual(const AmbientSpace& space, const Parametrization& param,
                                const Objective& obj, const Vector& xi,
                                const InverseKind& kind = InverseKind::mp()) {
  const TangentVector lhs =
      natural_parameter_gradient_on_model(space, param, obj, xi, kind);
  const TangentVector grad = ambient_gradient(space, obj, param.value(xi));
  const TangentVector rhs =
      project_onto_span(space, coordinate_tangent_vectors(param, xi), grad);
  const TangentVector diff{lhs.base_point, lhs.components - rhs.components};
  return metric_norm(space, diff);
}

}  // namespace natgrad
