#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "natgrad/ambient.hpp"
#include "natgrad/core.hpp"

namespace natgrad {

/// A smooth parametrization phi: Xi -> Z. jacobian_at(xi) is the n x d matrix
/// whose column j holds the components of the j-th coordinate tangent vector.
struct Parametrization {
  int domain_dim = 0;
  AmbientSpace codomain;
  std::function<Vector(const Vector&)> value_at;
  std::function<Matrix(const Vector&)> jacobian_at;
  std::string label;

  Vector value(const Vector& xi) const {
    require_dim(xi, domain_dim, "Parametrization::value");
    Vector p = value_at(xi);
    require_dim(p, codomain.dim, "Parametrization value_at output");
    return p;
  }

  Matrix jacobian(const Vector& xi) const {
    require_dim(xi, domain_dim, "Parametrization::jacobian");
    Matrix j = jacobian_at(xi);
    if (j.rows() != codomain.dim || j.cols() != domain_dim) {
      throw DimensionMismatch("jacobian_at returned wrong shape");
    }
    return j;
  }
};

/// A smooth map between parameter domains with an inverse. The Jacobian is
/// stored in the index convention F(i,j) = d f^j / d theta^i, i.e. the
/// transpose of the conventional Jacobian matrix, so that the coordinate
/// gradient transforms as grad_theta = F * grad_xi.
///
/// SmoothMap itself makes no invertibility claim about F; see Diffeomorphism.
struct SmoothMap {
  int dim = 0;
  std::function<Vector(const Vector&)> forward_at;
  std::function<Matrix(const Vector&)> jacobian_at;
  std::function<Vector(const Vector&)> inverse_at;

  Vector forward(const Vector& theta) const {
    require_dim(theta, dim, "SmoothMap::forward");
    Vector xi = forward_at(theta);
    require_dim(xi, dim, "SmoothMap forward output");
    return xi;
  }

  Vector inverse(const Vector& xi) const {
    require_dim(xi, dim, "SmoothMap::inverse");
    Vector theta = inverse_at(xi);
    require_dim(theta, dim, "SmoothMap inverse output");
    return theta;
  }

  /// F(theta) with F(i,j) = d f^j / d theta^i.
  Matrix transfer(const Vector& theta) const {
    require_dim(theta, dim, "SmoothMap::transfer");
    Matrix f = jacobian_at(theta);
    if (f.rows() != dim || f.cols() != dim) {
      throw DimensionMismatch("SmoothMap jacobian_at returned wrong shape");
    }
    return f;
  }

  /// Conventional Jacobian d f^j / d theta^i arranged rows = outputs.
  Matrix standard_jacobian(const Vector& theta) const {
    return transfer(theta).transpose();
  }
};

/// A SmoothMap whose Jacobian is invertible everywhere on its domain.
struct Diffeomorphism : SmoothMap {};

inline Diffeomorphism identity_diffeomorphism(int dim) {
  Diffeomorphism f;
  f.dim = dim;
  f.forward_at = [](const Vector& theta) { return theta; };
  f.jacobian_at = [dim](const Vector&) { return Matrix::Identity(dim, dim); };
  f.inverse_at = [](const Vector& xi) { return xi; };
  return f;
}

inline std::vector<TangentVector> coordinate_tangent_vectors(
    const Parametrization& param, const Vector& xi) {
  const Vector p = param.value(xi);
  const Matrix j = param.jacobian(xi);
  std::vector<TangentVector> out;
  out.reserve(param.domain_dim);
  for (int i = 0; i < param.domain_dim; ++i) {
    out.emplace_back(p, j.col(i));
  }
  return out;
}

/// Pushforward of the parameter-space vector w through the parametrization.
inline TangentVector pushforward(const Parametrization& param, const Vector& xi,
                                 const Vector& w) {
  require_dim(w, param.domain_dim, "pushforward coefficients");
  return {param.value(xi), param.jacobian(xi) * w};
}

/// Composition psi = phi o f. The Jacobian follows the chain rule
/// J_psi(theta) = J_phi(f(theta)) * F(theta)^T.
inline Parametrization compose(const Parametrization& param, const SmoothMap& f) {
  if (f.dim != param.domain_dim) {
    throw DimensionMismatch("compose: map dimension does not match parametrization");
  }
  Parametrization psi;
  psi.domain_dim = param.domain_dim;
  psi.codomain = param.codomain;
  psi.label = param.label + "∘f";
  psi.value_at = [param, f](const Vector& theta) {
    return param.value(f.forward(theta));
  };
  psi.jacobian_at = [param, f](const Vector& theta) -> Matrix {
    return param.jacobian(f.forward(theta)) * f.transfer(theta).transpose();
  };
  return psi;
}

struct PropernessReport {
  int jacobian_rank = 0;
  bool is_proper = false;
};

/// Numerical rank of the Jacobian against the asserted tangent dimension of
/// the model at phi(xi). Singular values below rank_tol * s_max count as zero.
inline PropernessReport properness_check(const Parametrization& param,
                                         const Vector& xi, int model_dim,
                                         double rank_tol = kRankTol) {
  const Matrix j = param.jacobian(xi);
  Eigen::JacobiSVD<Matrix> svd(j);
  const auto& sv = svd.singularValues();
  int rank = 0;
  if (sv.size() > 0 && sv(0) > 0.0) {
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
      if (sv(i) > rank_tol * sv(0)) ++rank;
    }
  }
  return {rank, rank == model_dim};
}

/// The componentwise-cubic map theta -> theta^3 + xi_star. A homeomorphism
/// with inverse cbrt(xi - xi_star) but not a diffeomorphism: its Jacobian at
/// theta = 0 is exactly the zero matrix, so it is typed as a SmoothMap.
inline SmoothMap cubic_reparametrization(const Vector& base_point) {
  const int d = static_cast<int>(base_point.size());
  SmoothMap f;
  f.dim = d;
  f.forward_at = [base_point](const Vector& theta) -> Vector {
    return theta.array().cube().matrix() + base_point;
  };
  f.inverse_at = [base_point](const Vector& xi) -> Vector {
    Vector theta(xi.size());
    for (Eigen::Index i = 0; i < xi.size(); ++i) {
      theta(i) = std::cbrt(xi(i) - base_point(i));
    }
    return theta;
  };
  f.jacobian_at = [d](const Vector& theta) -> Matrix {
    Matrix j = Matrix::Zero(d, d);
    for (int i = 0; i < d; ++i) {
      j(i, i) = 3.0 * theta(i) * theta(i);
    }
    return j;
  };
  return f;
}

}  // namespace natgrad
