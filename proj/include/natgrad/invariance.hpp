#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <utility>

#include "natgrad/ambient.hpp"
#include "natgrad/core.hpp"
#include "natgrad/natural_gradient.hpp"
#include "natgrad/parametrization.hpp"
#include "natgrad/pseudoinverse.hpp"

namespace natgrad {

/// g-norm of the difference of the two on-model natural parameter gradients
/// at the shared model point phi(xi) = psi(theta). Zero under a genuine
/// reparametrization, generically positive otherwise.
inline double model_invariance_gap(const AmbientSpace& space,
                                   const Parametrization& phi, const Vector& xi,
                                   const Parametrization& psi, const Vector& theta,
                                   const Objective& obj,
                                   const InverseKind& kind = InverseKind::mp()) {
  const Vector p_phi = phi.value(xi);
  const Vector p_psi = psi.value(theta);
  if ((p_phi - p_psi).norm() > 1e-10) {
    throw BasePointMismatch("model_invariance_gap: parametrizations disagree on the model point");
  }
  const TangentVector a = natural_parameter_gradient_on_model(space, phi, obj, xi, kind);
  const TangentVector b = natural_parameter_gradient_on_model(space, psi, obj, theta, kind);
  return metric_norm(space, TangentVector{p_phi, a.components - b.components});
}

/// Orthogonal projector (Euclidean) onto the column space of J.
inline Matrix column_space_projector(const Matrix& j, double rank_tol = kRankTol) {
  Eigen::JacobiSVD<Matrix> svd(j, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  const double smax = sv.size() ? sv(0) : 0.0;
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > rank_tol * smax && sv(i) > 0.0) ++rank;
  }
  const Matrix u = svd.matrixU().leftCols(rank);
  return u * u.transpose();
}

struct InvarianceReport {
  double model_side_gap = 0.0;
  double parameter_side_gap = 0.0;
  double span_projector_gap = 0.0;
  Vector y_xi;
  Vector y_theta;
};

struct TransformationResiduals {
  double tangent = 0.0;    // coordinate tangent vectors under the chain rule
  double gradient = 0.0;   // grad_theta = F grad_xi
  double gram = 0.0;       // G_theta = F G_xi F^T
};

/// Residuals of the three transformation identities relating the phi- and
/// psi-side quantities at theta, with psi = phi o f and xi = f(theta).
inline TransformationResiduals transformation_identities_check(
    const AmbientSpace& space, const Parametrization& phi, const SmoothMap& f,
    const Vector& theta, const Objective& obj) {
  const Vector xi = f.forward(theta);
  const Matrix F = f.transfer(theta);
  const Parametrization psi = compose(phi, f);

  TransformationResiduals r;
  const Matrix j_phi = phi.jacobian(xi);
  const Matrix j_psi = psi.jacobian(theta);
  r.tangent = (j_psi - j_phi * F.transpose()).norm() / std::max(1.0, j_psi.norm());

  const Vector grad_xi = parameter_differential(phi, obj, xi);
  const Vector grad_theta = parameter_differential(psi, obj, theta);
  r.gradient = (grad_theta - F * grad_xi).norm() / std::max(1.0, grad_theta.norm());

  const Matrix g_xi = gram_matrix(space, phi, xi).entries;
  const Matrix g_theta = gram_matrix(space, psi, theta).entries;
  r.gram = (g_theta - F * g_xi * F.transpose()).norm() / std::max(1.0, g_theta.norm());
  return r;
}

struct ParameterSpaceGap {
  Vector y_xi;
  Vector y_theta;
  double pushforward_gap_gnorm = 0.0;
};

/// The two minimum-norm coefficient vectors solving G(xi) y = grad_xi: the
/// Euclidean one (y_xi) and the F^T-weighted one (y_theta, the coefficients
/// of the theta-side gradient mapped back through df). Their difference lies
/// in the null space of G, so the pushforward gap vanishes in the g-norm
/// even when the parameter-space vectors differ.
inline ParameterSpaceGap parameter_space_gap(const AmbientSpace& space,
                                             const Parametrization& phi,
                                             const Diffeomorphism& f, const Vector& xi,
                                             const Objective& obj) {
  const Vector theta = f.inverse(xi);
  const Matrix F = f.transfer(theta);
  const GramMatrix g = gram_matrix(space, phi, xi);
  const Vector grad_xi = parameter_differential(phi, obj, xi);

  ParameterSpaceGap out;
  out.y_xi = weighted_min_norm_solve(g, grad_xi, Matrix::Identity(g.dim(), g.dim()));
  out.y_theta = weighted_min_norm_solve(g, grad_xi, F.transpose());

  // Direct route: F^T (F G F^T)+ F grad_xi must match the weighted solve.
  Matrix m = F * g.entries * F.transpose();
  m = 0.5 * (m + m.transpose());
  const Vector direct =
      F.transpose() * (moore_penrose(GramMatrix(m, "FGFt")) * (F * grad_xi));
  if ((direct - out.y_theta).norm() > 1e-9 * (1.0 + direct.norm())) {
    throw std::runtime_error("parameter_space_gap: direct and weighted routes disagree");
  }

  // Equals sqrt(diff^T G diff), but pushing diff through the Jacobian first
  // keeps the cancellation in the tangent components instead of under the
  // square root, so a null-space diff measures at machine precision.
  const Vector diff = out.y_theta - out.y_xi;
  const TangentVector push = pushforward(phi, xi, diff);
  out.pushforward_gap_gnorm = metric_norm(space, push);
  return out;
}

/// Full comparison of the phi- and (phi o f)-side gradient computations at
/// xi and theta = f^{-1}(xi).
inline InvarianceReport reparametrization_check(const AmbientSpace& space,
                                                const Parametrization& phi,
                                                const Diffeomorphism& f, const Vector& xi,
                                                const Objective& obj,
                                                const InverseKind& kind = InverseKind::mp()) {
  const Vector theta = f.inverse(xi);
  const Parametrization psi = compose(phi, f);

  InvarianceReport rep;
  rep.model_side_gap = model_invariance_gap(space, phi, xi, psi, theta, obj, kind);

  const ParameterSpaceGap gap = parameter_space_gap(space, phi, f, xi, obj);
  rep.y_xi = gap.y_xi;
  rep.y_theta = gap.y_theta;
  rep.parameter_side_gap = (rep.y_theta - rep.y_xi).norm();

  const Matrix p_phi = column_space_projector(phi.jacobian(xi));
  const Matrix p_psi = column_space_projector(psi.jacobian(theta));
  rep.span_projector_gap = (p_phi - p_psi).operatorNorm();
  return rep;
}

struct DegenerateReparametrizationReport {
  Matrix psi_jacobian_at_zero;
  Vector psi_side_pushforward;
  Vector phi_side_pushforward;
  bool psi_jacobian_exactly_zero = false;
};

/// Composes phi with the componentwise-cubic map centered at xi_star and
/// evaluates both on-model gradients at the shared point phi(xi_star). The
/// composed Jacobian at theta = 0 is exactly zero, so the psi-side
/// pushforward vanishes no matter what coefficients the inverse produces,
/// while the phi-side gradient is generically nonzero.
inline DegenerateReparametrizationReport degenerate_reparametrization_experiment(
    const AmbientSpace& space, const Parametrization& phi, const Vector& xi_star,
    const Objective& obj) {
  const SmoothMap f = cubic_reparametrization(xi_star);
  const Parametrization psi = compose(phi, f);
  const Vector theta0 = Vector::Zero(phi.domain_dim);

  DegenerateReparametrizationReport rep;
  rep.psi_jacobian_at_zero = psi.jacobian(theta0);
  rep.psi_jacobian_exactly_zero = (rep.psi_jacobian_at_zero.array() == 0.0).all();
  rep.psi_side_pushforward =
      natural_parameter_gradient_on_model(space, psi, obj, theta0).components;
  rep.phi_side_pushforward =
      natural_parameter_gradient_on_model(space, phi, obj, xi_star).components;
  return rep;
}

struct SamplingBox {
  Vector lo;
  Vector hi;
};

struct NonProperSampleReport {
  double fraction = 0.0;
  int num_samples = 0;
  int num_non_proper = 0;
  std::uint64_t seed = 0;
};

/// Monte Carlo fraction of uniformly sampled parameter points at which the
/// parametrization fails the properness check. For the built-in models the
/// non-proper set is a null set, so continuous sampling reports zero.
inline NonProperSampleReport nonproper_set_sampling(const Parametrization& phi,
                                                    const SamplingBox& box, int model_dim,
                                                    int num_samples,
                                                    std::uint64_t sampler_seed) {
  require_dim(box.lo, phi.domain_dim, "nonproper_set_sampling box");
  require_dim(box.hi, phi.domain_dim, "nonproper_set_sampling box");
  std::mt19937_64 rng(sampler_seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  NonProperSampleReport rep;
  rep.num_samples = num_samples;
  rep.seed = sampler_seed;
  Vector xi(phi.domain_dim);
  for (int s = 0; s < num_samples; ++s) {
    for (int i = 0; i < phi.domain_dim; ++i) {
      xi(i) = box.lo(i) + (box.hi(i) - box.lo(i)) * unit(rng);
    }
    if (!properness_check(phi, xi, model_dim).is_proper) {
      ++rep.num_non_proper;
    }
  }
  rep.fraction = num_samples > 0 ? double(rep.num_non_proper) / num_samples : 0.0;
  return rep;
}

}  // namespace natgrad
