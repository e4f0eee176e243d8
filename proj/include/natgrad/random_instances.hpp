#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "natgrad/ambient.hpp"
#include "natgrad/core.hpp"
#include "natgrad/parametrization.hpp"

namespace natgrad::random_instances {

using Rng = std::mt19937_64;

/// c * prod_i x_i^powers[i]
struct Monomial {
  double coef = 0.0;
  std::vector<int> powers;
};

struct Polynomial {
  std::vector<Monomial> terms;

  double value(const Vector& x) const {
    double acc = 0.0;
    for (const auto& t : terms) {
      double m = t.coef;
      for (std::size_t i = 0; i < t.powers.size(); ++i) {
        for (int k = 0; k < t.powers[i]; ++k) m *= x(static_cast<Eigen::Index>(i));
      }
      acc += m;
    }
    return acc;
  }

  double partial(const Vector& x, int var) const {
    double acc = 0.0;
    for (const auto& t : terms) {
      const int p = t.powers[var];
      if (p == 0) continue;
      double m = t.coef * p;
      for (std::size_t i = 0; i < t.powers.size(); ++i) {
        const int pw = (static_cast<int>(i) == var) ? t.powers[i] - 1 : t.powers[i];
        for (int k = 0; k < pw; ++k) m *= x(static_cast<Eigen::Index>(i));
      }
      acc += m;
    }
    return acc;
  }
};

inline Polynomial random_polynomial(Rng& rng, int nvars, int max_degree) {
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  std::uniform_int_distribution<int> nterms(2, 5);
  std::uniform_int_distribution<int> deg(0, max_degree);
  std::uniform_int_distribution<int> var(0, nvars - 1);
  Polynomial p;
  const int t = nterms(rng);
  for (int i = 0; i < t; ++i) {
    Monomial m;
    m.coef = coef(rng);
    m.powers.assign(nvars, 0);
    const int d = deg(rng);
    for (int k = 0; k < d; ++k) ++m.powers[var(rng)];
    p.terms.push_back(std::move(m));
  }
  return p;
}

inline Matrix random_orthogonal(Rng& rng, int n) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = gauss(rng);
  Eigen::HouseholderQR<Matrix> qr(a);
  Matrix q = qr.householderQ();
  return q;
}

/// Constant SPD metric with singular values in [0.2, 5].
inline Matrix random_spd(Rng& rng, int n) {
  std::uniform_real_distribution<double> sv(0.2, 5.0);
  const Matrix q = random_orthogonal(rng, n);
  Vector d(n);
  for (int i = 0; i < n; ++i) d(i) = sv(rng);
  return q * d.asDiagonal() * q.transpose();
}

/// Polynomial parametrization of degree <= 3. When inner_rank < d the map
/// factors through a linear projection, forcing a rank-deficient Jacobian.
inline Parametrization random_polynomial_parametrization(Rng& rng, int d, int n,
                                                         const AmbientSpace& space,
                                                         int inner_rank) {
  const int k = std::min(inner_rank, d);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix inner(k, d);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < d; ++j) inner(i, j) = gauss(rng);

  std::vector<Polynomial> comps;
  comps.reserve(n);
  for (int i = 0; i < n; ++i) comps.push_back(random_polynomial(rng, k, 3));

  Parametrization phi;
  phi.domain_dim = d;
  phi.codomain = space;
  phi.label = "random-poly";
  phi.value_at = [comps, inner, n](const Vector& xi) {
    const Vector u = inner * xi;
    Vector p(n);
    for (int i = 0; i < n; ++i) p(i) = comps[i].value(u);
    return p;
  };
  phi.jacobian_at = [comps, inner, n, k, d](const Vector& xi) {
    const Vector u = inner * xi;
    Matrix jp(n, k);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < k; ++j) jp(i, j) = comps[i].partial(u, j);
    return Matrix(jp * inner);
  };
  return phi;
}

/// Random quadratic objective 0.5 z^T Q z + b^T z with symmetric Q.
inline Objective random_quadratic_objective(Rng& rng, int n) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix q(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) q(i, j) = gauss(rng);
  q = 0.5 * (q + q.transpose()).eval();
  Vector b(n);
  for (int i = 0; i < n; ++i) b(i) = gauss(rng);
  return {[q, b](const Vector& z) { return 0.5 * z.dot(q * z) + b.dot(z); },
          [q, b](const Vector& z) { return Vector(q * z + b); }};
}

struct Instance {
  AmbientSpace space;
  Parametrization phi;
  Objective obj;
  Vector xi;
};

/// A randomized Gram-degenerate-friendly instance: d, n in 1..5, polynomial
/// parametrization (possibly rank-deficient), quadratic objective, Euclidean
/// or random constant SPD metric.
inline Instance random_instance(Rng& rng, bool force_rank_deficient = false) {
  for (;;) {
    std::uniform_int_distribution<int> dim(1, 5);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const int d = dim(rng);
    const int n = dim(rng);
    int inner_rank = d;
    if (force_rank_deficient || unit(rng) < 0.5) {
      std::uniform_int_distribution<int> low(1, std::max(1, d - 1));
      inner_rank = (d > 1) ? low(rng) : 1;
    }
    AmbientSpace space =
        (unit(rng) < 0.5) ? euclidean_space(n) : constant_metric_space(random_spd(rng, n));
    Parametrization phi = random_polynomial_parametrization(rng, d, n, space, inner_rank);
    Objective obj = random_quadratic_objective(rng, n);
    Vector xi(d);
    std::uniform_real_distribution<double> box(-1.0, 1.0);
    for (int i = 0; i < d; ++i) xi(i) = box(rng);

    // reject instances whose Gram spectrum at xi does not split cleanly into
    // zero and well-separated nonzero eigenvalues: an eigenvalue near the
    // rank cutoff makes every inverse-based identity ill-posed in double
    // precision, which is numerical noise rather than a property of the maps
    const Matrix j = phi.jacobian(xi);
    const Matrix met = space.metric(phi.value(xi));
    Matrix gram = j.transpose() * met * j;
    gram = 0.5 * (gram + gram.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> es(gram, Eigen::EigenvaluesOnly);
    const Vector& ev = es.eigenvalues();
    const double lmax = ev.size() ? ev(ev.size() - 1) : 0.0;
    bool clean = true;
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
      if (ev(i) > 1e-13 * lmax && ev(i) < 1e-5 * lmax) clean = false;
    }
    if (!clean) continue;
    return {std::move(space), std::move(phi), std::move(obj), std::move(xi)};
  }
}

/// Random diffeomorphism f(theta) = A s(theta) + b with s_j(t) = t + c_j t^3,
/// c_j >= 0, so every component of s is strictly increasing and f has an
/// analytic Jacobian and a Newton-solvable inverse. A has singular values in
/// [0.5, 2], keeping the condition number of the Jacobian small.
inline Diffeomorphism random_diffeomorphism(Rng& rng, int d, bool with_cubic = true) {
  std::uniform_real_distribution<double> sv(0.5, 2.0);
  std::uniform_real_distribution<double> cube(0.0, 0.3);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const Matrix q1 = random_orthogonal(rng, d);
  const Matrix q2 = random_orthogonal(rng, d);
  Vector s(d);
  for (int i = 0; i < d; ++i) s(i) = sv(rng);
  const Matrix a = q1 * s.asDiagonal() * q2.transpose();
  const Matrix a_inv = q2 * s.cwiseInverse().asDiagonal() * q1.transpose();
  Vector b(d), c = Vector::Zero(d);
  for (int i = 0; i < d; ++i) {
    b(i) = gauss(rng);
    if (with_cubic) c(i) = cube(rng);
  }

  Diffeomorphism f;
  f.dim = d;
  f.forward_at = [a, b, c](const Vector& theta) -> Vector {
    Vector st(theta.size());
    for (Eigen::Index i = 0; i < theta.size(); ++i) {
      st(i) = theta(i) + c(i) * theta(i) * theta(i) * theta(i);
    }
    return a * st + b;
  };
  f.jacobian_at = [a, c, d](const Vector& theta) -> Matrix {
    Vector ds(d);
    for (int i = 0; i < d; ++i) ds(i) = 1.0 + 3.0 * c(i) * theta(i) * theta(i);
    // standard Jacobian is A * diag(s'); stored transposed
    return (a * ds.asDiagonal()).transpose();
  };
  f.inverse_at = [a_inv, b, c](const Vector& xi) -> Vector {
    const Vector v = a_inv * (xi - b);
    Vector theta(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      // Newton on t + c t^3 = v; the map is strictly increasing.
      double t = v(i);
      for (int it = 0; it < 60; ++it) {
        const double g = t + c(i) * t * t * t - v(i);
        const double dg = 1.0 + 3.0 * c(i) * t * t;
        const double step = g / dg;
        t -= step;
        if (std::abs(step) < 1e-15 * (1.0 + std::abs(t))) break;
      }
      theta(i) = t;
    }
    return theta;
  };
  return f;
}

/// Random symmetric PSD matrix of the requested rank (rank 0 gives the zero
/// matrix). Built from a random eigenbasis with eigenvalues in [0.1, 10];
/// a Wishart-style B B^T draw can be arbitrarily ill conditioned, which
/// turns spectral-cutoff identities into tests of the draw rather than of
/// the inverse.
inline Matrix random_psd_of_rank(Rng& rng, int d, int rank) {
  if (rank <= 0) return Matrix::Zero(d, d);
  std::uniform_real_distribution<double> ev(0.1, 10.0);
  const Matrix q = random_orthogonal(rng, d);
  Vector lambda = Vector::Zero(d);
  for (int i = 0; i < std::min(rank, d); ++i) lambda(i) = ev(rng);
  Matrix m = q * lambda.asDiagonal() * q.transpose();
  return 0.5 * (m + m.transpose());
}

}  // namespace natgrad::random_instances
