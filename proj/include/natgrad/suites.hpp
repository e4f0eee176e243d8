#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "natgrad/ambient.hpp"
#include "natgrad/core.hpp"
#include "natgrad/invariance.hpp"
#include "natgrad/natural_gradient.hpp"
#include "natgrad/pseudoinverse.hpp"
#include "natgrad/random_instances.hpp"

namespace natgrad::suites {

using random_instances::Rng;

struct SuiteResult {
  std::string name;
  int instances = 0;
  double max_residual = 0.0;
  double threshold = 0.0;
  bool passed = false;
  std::string note;
};

/// Pushforward of the natural parameter gradient vs. the projected ambient
/// gradient, normalized by 1 + g-norm of the ambient gradient.
inline SuiteResult theorem1_suite(std::uint64_t seed, int count = 500,
                                  double tol = 1e-8) {
  SuiteResult r{"theorem1", count, 0.0, tol, true, ""};
  for (int i = 0; i < count; ++i) {
    Rng rng(seed * 1000003ULL + static_cast<std::uint64_t>(i));
    const auto inst = random_instances::random_instance(rng);
    const TangentVector grad =
        ambient_gradient(inst.space, inst.obj, inst.phi.value(inst.xi));
    const double scale = 1.0 + metric_norm(inst.space, grad);
    const double resid =
        theorem1_residual(inst.space, inst.phi, inst.obj, inst.xi) / scale;
    r.max_residual = std::max(r.max_residual, resid);
  }
  r.passed = r.max_residual <= tol;
  return r;
}

/// When the asserted tangent dimension matches the Jacobian rank, the
/// projected-ambient-gradient route and the pushforward route agree.
inline SuiteResult theorem1_proper_branch_suite(std::uint64_t seed, int count = 200,
                                                double tol = 1e-8) {
  SuiteResult r{"theorem1-proper-branch", count, 0.0, tol, true, ""};
  for (int i = 0; i < count; ++i) {
    Rng rng(seed * 2000029ULL + static_cast<std::uint64_t>(i));
    const auto inst = random_instances::random_instance(rng);
    const int rank =
        properness_check(inst.phi, inst.xi, inst.phi.domain_dim).jacobian_rank;
    const TangentVector a = natural_gradient(inst.space, inst.phi, inst.obj, inst.xi, rank);
    const TangentVector b =
        natural_parameter_gradient_on_model(inst.space, inst.phi, inst.obj, inst.xi);
    const double scale = 1.0 + metric_norm(inst.space, a);
    const double resid =
        metric_norm(inst.space, {a.base_point, a.components - b.components}) / scale;
    r.max_residual = std::max(r.max_residual, resid);
  }
  r.passed = r.max_residual <= tol;
  return r;
}

/// Reparametrization invariance on the model plus span equality under a
/// genuine diffeomorphism.
inline SuiteResult theorem2_suite(std::uint64_t seed, int count = 300,
                                  double tol = 1e-8, double span_tol = 1e-9) {
  SuiteResult r{"theorem2", count, 0.0, tol, true, ""};
  double max_span_gap = 0.0;
  for (int i = 0; i < count; ++i) {
    Rng rng(seed * 3000017ULL + static_cast<std::uint64_t>(i));
    const auto inst = random_instances::random_instance(rng);
    const Diffeomorphism f =
        random_instances::random_diffeomorphism(rng, inst.phi.domain_dim);
    const InvarianceReport rep =
        reparametrization_check(inst.space, inst.phi, f, inst.xi, inst.obj);
    const TangentVector grad =
        ambient_gradient(inst.space, inst.obj, inst.phi.value(inst.xi));
    const double scale = 1.0 + metric_norm(inst.space, grad);
    r.max_residual = std::max(r.max_residual, rep.model_side_gap / scale);
    max_span_gap = std::max(max_span_gap, rep.span_projector_gap);
  }
  r.passed = r.max_residual <= tol && max_span_gap <= span_tol;
  r.note = "max span projector gap " + std::to_string(max_span_gap);
  return r;
}

/// Parameter-space non-invariance: the two minimum-norm coefficient vectors
/// differ but their difference lies in the null space of the Gram matrix.
inline SuiteResult noninvariance_suite(std::uint64_t seed, int count = 200,
                                       double tol = 1e-8, int min_gap_witnesses = 50) {
  SuiteResult r{"parameter-space-noninvariance", count, 0.0, tol, true, ""};
  int witnesses = 0;
  double max_null_resid = 0.0;
  for (int i = 0; i < count; ++i) {
    Rng rng(seed * 4000037ULL + static_cast<std::uint64_t>(i));
    auto inst = random_instances::random_instance(rng, /*force_rank_deficient=*/true);
    // one-dimensional parameter spaces cannot be rank-deficient in an
    // interesting way; redraw with d >= 2
    while (inst.phi.domain_dim < 2) {
      inst = random_instances::random_instance(rng, true);
    }
    const Diffeomorphism f =
        random_instances::random_diffeomorphism(rng, inst.phi.domain_dim);
    const Vector theta = f.inverse(inst.xi);
    // evaluate the gap at xi with theta = f^{-1}(xi)
    const ParameterSpaceGap gap =
        parameter_space_gap(inst.space, inst.phi, f, inst.xi, inst.obj);
    const GramMatrix g = gram_matrix(inst.space, inst.phi, inst.xi);
    const Vector diff = gap.y_theta - gap.y_xi;
    max_null_resid = std::max(
        max_null_resid, (g.entries * diff).norm() / std::max(1.0, diff.norm()));
    r.max_residual = std::max(r.max_residual, gap.pushforward_gap_gnorm);
    if (diff.norm() > 1e-2) ++witnesses;
  }
  r.passed = r.max_residual <= tol && max_null_resid <= 1e-9 &&
             witnesses >= min_gap_witnesses;
  r.note = std::to_string(witnesses) + " instances with parameter gap > 1e-2; max G*(y_T-y_X) " +
           std::to_string(max_null_resid);
  return r;
}

/// The four defining identities of the Moore-Penrose inverse over random PSD
/// matrices of every rank, plus the column-space identity A A+ b = b.
inline SuiteResult penrose_suite(std::uint64_t seed, int count = 500,
                                 double tol = 1e-9) {
  SuiteResult r{"penrose", count, 0.0, tol, true, ""};
  std::mt19937_64 top(seed * 5000011ULL);
  for (int i = 0; i < count; ++i) {
    Rng rng(seed * 5000011ULL + static_cast<std::uint64_t>(i) + 1);
    std::uniform_int_distribution<int> dim(1, 8);
    const int d = dim(rng);
    std::uniform_int_distribution<int> rk(0, d);
    const Matrix a = random_instances::random_psd_of_rank(rng, d, rk(rng));
    const GramMatrix g(a, "penrose-suite");
    const Matrix ap = moore_penrose(g);
    const double na = std::max(1.0, a.norm());
    const double nap = std::max(1.0, ap.norm());
    double resid = (a * ap * a - a).norm() / na;
    resid = std::max(resid, (ap * a * ap - ap).norm() / nap);
    const Matrix aap = a * ap;
    const Matrix apa = ap * a;
    resid = std::max(resid, (aap - aap.transpose()).norm() / std::max(1.0, aap.norm()));
    resid = std::max(resid, (apa - apa.transpose()).norm() / std::max(1.0, apa.norm()));
    // identity on the column space
    std::normal_distribution<double> gauss(0.0, 1.0);
    Vector x(d);
    for (int j = 0; j < d; ++j) x(j) = gauss(rng);
    const Vector b = a * x;
    resid = std::max(resid, (a * ap * b - b).norm() / std::max(1.0, b.norm()));
    r.max_residual = std::max(r.max_residual, resid);
  }
  r.passed = r.max_residual <= tol;
  return r;
}

/// First-order optimality of the weighted minimum-norm solve: W^{-1} y is
/// orthogonal to W^{-1} applied to the null space of G.
inline SuiteResult min_norm_optimality_suite(std::uint64_t seed, int count = 200,
                                             double tol = 1e-8) {
  SuiteResult r{"min-norm-optimality", count, 0.0, tol, true, ""};
  for (int i = 0; i < count; ++i) {
    Rng rng(seed * 6000047ULL + static_cast<std::uint64_t>(i));
    std::uniform_int_distribution<int> dim(2, 8);
    const int d = dim(rng);
    std::uniform_int_distribution<int> rk(1, d - 1);
    const int rank = rk(rng);
    const Matrix a = random_instances::random_psd_of_rank(rng, d, rank);
    const GramMatrix g(a, "optimality-suite");
    std::normal_distribution<double> gauss(0.0, 1.0);
    Vector x(d);
    for (int j = 0; j < d; ++j) x(j) = gauss(rng);
    const Vector b = a * x;

    // weight with modest condition number to keep the check well scaled
    Matrix w = random_instances::random_spd(rng, d);
    const Vector y = weighted_min_norm_solve(g, b, w);
    const Matrix w_inv = w.inverse();

    Eigen::SelfAdjointEigenSolver<Matrix> es(a);
    const double lmax = es.eigenvalues()(d - 1);
    const Vector wy = w_inv * y;
    for (int j = 0; j < d; ++j) {
      if (es.eigenvalues()(j) <= kRankTol * lmax) {
        const Vector wz = w_inv * es.eigenvectors().col(j);
        const double dot =
            std::abs(wy.dot(wz)) / std::max(1.0, wy.norm() * wz.norm());
        r.max_residual = std::max(r.max_residual, dot);
      }
    }
  }
  r.passed = r.max_residual <= tol;
  return r;
}

/// damped_inverse(G, lambda) b converges to G+ b as lambda -> 0 for b in the
/// column space, with monotone error decrease over 1e-4, 1e-6, 1e-8.
inline SuiteResult damping_limit_suite(std::uint64_t seed, int count = 100,
                                       double tol = 1e-5) {
  SuiteResult r{"damping-limit", count, 0.0, tol, true, ""};
  bool monotone = true;
  for (int i = 0; i < count; ++i) {
    Rng rng(seed * 7000027ULL + static_cast<std::uint64_t>(i));
    std::uniform_int_distribution<int> dim(1, 6);
    const int d = dim(rng);
    std::uniform_int_distribution<int> rk(1, d);
    const Matrix a = random_instances::random_psd_of_rank(rng, d, rk(rng));
    const GramMatrix g(a, "damping-suite");
    std::normal_distribution<double> gauss(0.0, 1.0);
    Vector x(d);
    for (int j = 0; j < d; ++j) x(j) = gauss(rng);
    const Vector b = a * x;
    const Vector exact = moore_penrose(g) * b;
    double prev = -1.0;
    for (const double lambda : {1e-4, 1e-6, 1e-8}) {
      const double err =
          (damped_inverse(g, lambda) * b - exact).norm() / std::max(1.0, exact.norm());
      // Near the rank boundary the error bottoms out at the roundoff floor;
      // only flag increases that exceed it.
      if (prev >= 0.0 && err > prev * (1.0 + 1e-6) + 1e-7) monotone = false;
      prev = err;
    }
    r.max_residual = std::max(r.max_residual, prev);  // error at lambda = 1e-8
  }
  r.passed = r.max_residual <= tol && monotone;
  if (!monotone) r.note = "non-monotone error decrease observed";
  return r;
}

/// Projector identities of the span projection: idempotence, g-self-adjoint,
/// independence of the spanning set.
inline SuiteResult projector_suite(std::uint64_t seed, int count = 200,
                                   double tol = 1e-9) {
  SuiteResult r{"span-projector", count, 0.0, tol, true, ""};
  for (int i = 0; i < count; ++i) {
    Rng rng(seed * 8000009ULL + static_cast<std::uint64_t>(i));
    std::uniform_int_distribution<int> dim(1, 5);
    const int n = dim(rng);
    const AmbientSpace space = constant_metric_space(random_instances::random_spd(rng, n));
    std::normal_distribution<double> gauss(0.0, 1.0);
    const Vector p = Vector::Zero(n);
    std::uniform_int_distribution<int> nb(1, 5);
    const int k = nb(rng);
    std::vector<TangentVector> basis;
    for (int j = 0; j < k; ++j) {
      Vector e(n);
      for (int l = 0; l < n; ++l) e(l) = gauss(rng);
      basis.emplace_back(p, e);
    }
    // second spanning set of the same subspace: random invertible recombination
    // plus a redundant vector
    Matrix c = Matrix::Zero(k, k);
    do {
      for (int a0 = 0; a0 < k; ++a0)
        for (int b0 = 0; b0 < k; ++b0) c(a0, b0) = gauss(rng);
    } while (std::abs(Eigen::FullPivLU<Matrix>(c).determinant()) < 1e-3);
    std::vector<TangentVector> basis2;
    for (int j = 0; j < k; ++j) {
      Vector e = Vector::Zero(n);
      for (int l = 0; l < k; ++l) e += c(j, l) * basis[l].components;
      basis2.emplace_back(p, e);
    }
    basis2.emplace_back(p, Vector(basis[0].components + basis[k - 1].components));

    Vector vc(n), uc(n);
    for (int l = 0; l < n; ++l) {
      vc(l) = gauss(rng);
      uc(l) = gauss(rng);
    }
    const TangentVector v{p, vc}, u{p, uc};
    const TangentVector pv = project_onto_span(space, basis, v);
    const TangentVector ppv = project_onto_span(space, basis, pv);
    const TangentVector pu = project_onto_span(space, basis, u);
    const TangentVector pv2 = project_onto_span(space, basis2, v);

    double resid = (ppv.components - pv.components).norm() /
                   std::max(1.0, pv.components.norm());
    const double self_adj = std::abs(metric_inner(space, pv, u) -
                                     metric_inner(space, v, pu)) /
                            std::max(1.0, v.components.norm() * u.components.norm());
    resid = std::max(resid, self_adj);
    resid = std::max(resid, (pv2.components - pv.components).norm() /
                                std::max(1.0, pv.components.norm()));
    r.max_residual = std::max(r.max_residual, resid);
  }
  r.passed = r.max_residual <= tol;
  return r;
}

/// Chain-rule transformation identities for random parametrizations with
/// random cubic-perturbed diffeomorphisms.
inline SuiteResult transformation_suite(std::uint64_t seed, int count = 200,
                                        double tol = 1e-9) {
  SuiteResult r{"transformation-identities", count, 0.0, tol, true, ""};
  for (int i = 0; i < count; ++i) {
    Rng rng(seed * 9000011ULL + static_cast<std::uint64_t>(i));
    const auto inst = random_instances::random_instance(rng);
    const Diffeomorphism f =
        random_instances::random_diffeomorphism(rng, inst.phi.domain_dim);
    const Vector theta = f.inverse(inst.xi);
    const TransformationResiduals res =
        transformation_identities_check(inst.space, inst.phi, f, theta, inst.obj);
    r.max_residual = std::max({r.max_residual, res.tangent, res.gradient, res.gram});
  }
  r.passed = r.max_residual <= tol;
  return r;
}

/// Monte Carlo estimate of the information matrix of a univariate normal
/// from sampled score outer products, compared against the analytic metric.
inline SuiteResult fisher_gaussian_suite(std::uint64_t seed, int samples = 1000000,
                                         double tol = 0.02) {
  SuiteResult r{"fisher-gaussian", 3, 0.0, tol, true, ""};
  const AmbientSpace space = fisher_gaussian_space();
  const std::vector<Vector> points = {
      (Vector(2) << 0.0, 1.0).finished(),
      (Vector(2) << 0.0, 2.0).finished(),
      (Vector(2) << 3.0, 0.5).finished(),
  };
  int idx = 0;
  for (const Vector& p : points) {
    Rng rng(seed * 11000081ULL + static_cast<std::uint64_t>(idx++));
    std::normal_distribution<double> gauss(0.0, 1.0);
    const double mu = p(0), sigma = p(1);
    Matrix acc = Matrix::Zero(2, 2);
    for (int s = 0; s < samples; ++s) {
      const double x = mu + sigma * gauss(rng);
      const double dmu = (x - mu) / (sigma * sigma);
      const double dsigma = ((x - mu) * (x - mu) - sigma * sigma) / (sigma * sigma * sigma);
      acc(0, 0) += dmu * dmu;
      acc(0, 1) += dmu * dsigma;
      acc(1, 1) += dsigma * dsigma;
    }
    acc(1, 0) = acc(0, 1);
    acc /= samples;
    const Matrix exact = space.metric(p);
    const double rel = (acc - exact).norm() / exact.norm();
    r.max_residual = std::max(r.max_residual, rel);
  }
  r.passed = r.max_residual <= tol;
  return r;
}

inline std::vector<SuiteResult> run_all(std::uint64_t seed, double tol_override = -1.0) {
  auto tol = [tol_override](double def) { return tol_override > 0.0 ? tol_override : def; };
  std::vector<SuiteResult> out;
  out.push_back(theorem1_suite(seed, 500, tol(1e-8)));
  out.push_back(theorem1_proper_branch_suite(seed, 200, tol(1e-8)));
  out.push_back(theorem2_suite(seed, 300, tol(1e-8), tol(1e-9)));
  out.push_back(noninvariance_suite(seed, 200, tol(1e-8)));
  out.push_back(penrose_suite(seed, 500, tol(1e-9)));
  out.push_back(min_norm_optimality_suite(seed, 200, tol(1e-8)));
  out.push_back(damping_limit_suite(seed, 100, tol(1e-5)));
  out.push_back(projector_suite(seed, 200, tol(1e-9)));
  out.push_back(transformation_suite(seed, 200, tol(1e-9)));
  out.push_back(fisher_gaussian_suite(seed, 1000000, tol(0.02)));
  return out;
}

}  // namespace natgrad::suites
