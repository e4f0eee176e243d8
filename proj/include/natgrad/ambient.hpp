#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <utility>

#include "natgrad/core.hpp"

namespace natgrad {

/// A tangent vector attached to a point of the ambient coordinate domain.
struct TangentVector {
  Vector base_point;
  Vector components;

  TangentVector(Vector base, Vector comps)
      : base_point(std::move(base)), components(std::move(comps)) {
    if (base_point.size() != components.size()) {
      throw DimensionMismatch("TangentVector: base point and components disagree");
    }
  }
};

inline bool same_base_point(const TangentVector& u, const TangentVector& v,
                            double tol = 1e-10) {
  return u.base_point.size() == v.base_point.size() &&
         (u.base_point - v.base_point).norm() <= tol * (1.0 + u.base_point.norm());
}

/// The ambient Riemannian space: an open coordinate domain of dimension n
/// together with a metric matrix field. The metric returned by metric_at
/// must be symmetric positive definite at every queried point.
struct AmbientSpace {
  int dim = 0;
  std::function<Matrix(const Vector&)> metric_at;
  std::string label;

  Matrix metric(const Vector& p) const {
    require_dim(p, dim, "AmbientSpace::metric point");
    Matrix g = metric_at(p);
    if (g.rows() != dim || g.cols() != dim) {
      throw DimensionMismatch("metric_at returned wrong shape");
    }
    const double scale = std::max(1.0, g.norm());
    if ((g - g.transpose()).norm() > 1e-12 * scale) {
      throw AsymmetricInput("metric_at returned an asymmetric matrix");
    }
    return g;
  }
};

/// A smooth scalar objective on the ambient space with its coordinate
/// differential. differential_at(p) holds the partial derivatives of the
/// objective in the ambient coordinates.
struct Objective {
  std::function<double(const Vector&)> value_at;
  std::function<Vector(const Vector&)> differential_at;
};

inline AmbientSpace euclidean_space(int n, std::string label = "euclidean") {
  return AmbientSpace{
      n, [n](const Vector&) { return Matrix::Identity(n, n); }, std::move(label)};
}

inline AmbientSpace constant_metric_space(Matrix g, std::string label = "constant") {
  const int n = static_cast<int>(g.rows());
  return AmbientSpace{n, [g = std::move(g)](const Vector&) { return g; },
                      std::move(label)};
}

/// Riemannian gradient of the objective at p: the unique v with
/// g_p(v, .) = dL_p(.), obtained by solving g_p v = dL_p.
inline TangentVector ambient_gradient(const AmbientSpace& space, const Objective& obj,
                                      const Vector& p) {
  const Matrix g = space.metric(p);
  const Vector dl = obj.differential_at(p);
  require_dim(dl, space.dim, "ambient_gradient differential");
  Eigen::LLT<Matrix> llt(g);
  if (llt.info() != Eigen::Success) {
    throw NonPositiveDefiniteMetric("metric factorization failed at queried point");
  }
  Vector v = llt.solve(dl);
  const double resid = (g * v - dl).norm() / std::max(1.0, dl.norm());
  if (resid > 1e-10) {
    throw NonPositiveDefiniteMetric("metric solve residual too large: " +
                                    std::to_string(resid));
  }
  return {p, std::move(v)};
}

/// g_p(u, v) for tangent vectors based at the same point.
inline double metric_inner(const AmbientSpace& space, const TangentVector& u,
                           const TangentVector& v) {
  if (!same_base_point(u, v)) {
    throw BasePointMismatch("metric_inner: tangent vectors at different points");
  }
  const Matrix g = space.metric(u.base_point);
  return u.components.dot(g * v.components);
}

inline double metric_norm(const AmbientSpace& space, const TangentVector& v) {
  return std::sqrt(std::max(0.0, metric_inner(space, v, v)));
}

/// Two-dimensional (mu, sigma) space of univariate normals, sigma > 0,
/// carrying the Fisher information metric diag(1/sigma^2, 2/sigma^2).
inline AmbientSpace fisher_gaussian_space() {
  return AmbientSpace{2,
                      [](const Vector& p) {
                        const double sigma = p(1);
                        if (sigma <= 0.0) {
                          throw DomainViolation("fisher_gaussian_space: sigma <= 0");
                        }
                        Matrix g = Matrix::Zero(2, 2);
                        g(0, 0) = 1.0 / (sigma * sigma);
                        g(1, 1) = 2.0 / (sigma * sigma);
                        return g;
                      },
                      "fisher-gaussian"};
}

}  // namespace natgrad
