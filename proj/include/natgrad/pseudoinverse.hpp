#pragma once

#include <cmath>
#include <string>
#include <utility>

#include "natgrad/core.hpp"

namespace natgrad {

/// A d x d symmetric positive-semidefinite Gram matrix, tagged with the
/// parametrization/point that produced it.
struct GramMatrix {
  Matrix entries;
  std::string source;

  GramMatrix(Matrix m, std::string src = {}) : entries(std::move(m)), source(std::move(src)) {
    if (entries.rows() != entries.cols()) {
      throw DimensionMismatch("GramMatrix must be square");
    }
    const double scale = std::max(1.0, entries.norm());
    if ((entries - entries.transpose()).norm() > 1e-12 * scale) {
      throw AsymmetricInput("GramMatrix entries are not symmetric");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(entries, Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();
    const double lmax = ev.size() ? ev(ev.size() - 1) : 0.0;
    if (ev.size() && ev(0) < -1e-10 * std::max(lmax, 1e-300)) {
      throw NotPositiveSemidefinite("GramMatrix has a negative eigenvalue: " +
                                    std::to_string(ev(0)));
    }
  }

  Eigen::Index dim() const { return entries.rows(); }
};

/// Moore-Penrose inverse of a symmetric PSD matrix via spectral cutoff:
/// eigenvalues above rank_tol * lambda_max are inverted, the rest zeroed.
inline Matrix moore_penrose(const GramMatrix& g, double rank_tol = kRankTol) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(g.entries);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("moore_penrose: eigendecomposition failed");
  }
  const Vector& ev = es.eigenvalues();
  const double lmax = ev.size() ? ev(ev.size() - 1) : 0.0;
  Vector inv = Vector::Zero(ev.size());
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i) > rank_tol * lmax && ev(i) > 0.0) {
      inv(i) = 1.0 / ev(i);
    }
  }
  return es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();
}

struct GeneralizedInverseCheck {
  bool ok = false;
  double residual = 0.0;
};

/// Checks the defining identity A A+ A = A of a generalized inverse.
inline GeneralizedInverseCheck verify_generalized_inverse(const Matrix& a,
                                                          const Matrix& a_plus) {
  if (a_plus.rows() != a.cols() || a_plus.cols() != a.rows()) {
    throw DimensionMismatch("verify_generalized_inverse: incompatible shapes");
  }
  const double residual = (a * a_plus * a - a).norm() / std::max(1.0, a.norm());
  return {residual <= 1e-9, residual};
}

/// Minimizer of ||W^{-1} y|| over solutions of G y = b, computed as
/// W (W^T G W)+ W^T b. With W = I this is the minimum-Euclidean-norm
/// solution G+ b.
inline Vector weighted_min_norm_solve(const GramMatrix& g, const Vector& b,
                                      const Matrix& w, double rank_tol = kRankTol) {
  const Eigen::Index d = g.dim();
  require_dim(b, d, "weighted_min_norm_solve rhs");
  if (w.rows() != d || w.cols() != d) {
    throw DimensionMismatch("weighted_min_norm_solve: weight shape");
  }
  Eigen::FullPivLU<Matrix> lu(w);
  if (!lu.isInvertible()) {
    throw SingularWeight("weighted_min_norm_solve: weight matrix is singular");
  }
  Matrix m = w.transpose() * g.entries * w;
  m = 0.5 * (m + m.transpose());
  const Vector y = w * (moore_penrose(GramMatrix(m, g.source + ":weighted"), rank_tol) *
                        (w.transpose() * b));
  const double resid = (g.entries * y - b).norm() / std::max(1.0, b.norm());
  if (resid > 1e-8) {
    throw InconsistentSystem("rhs not in the column space of G, residual " +
                             std::to_string(resid));
  }
  return y;
}

/// Tikhonov-damped inverse (G + lambda I)^{-1}; defined for every PSD G.
inline Matrix damped_inverse(const GramMatrix& g, double lambda) {
  if (!(lambda > 0.0)) {
    throw NonPositiveDamping("damped_inverse: lambda must be positive");
  }
  const Matrix m = g.entries + lambda * Matrix::Identity(g.dim(), g.dim());
  return Eigen::LLT<Matrix>(m).solve(Matrix::Identity(g.dim(), g.dim()));
}

}  // namespace natgrad
